#pragma once

#include <stdexcept>

namespace osieve {

/// Thrown when a request exceeds a configured size limit (segment cap,
/// enumeration cap, prime cache cap, numeric ceiling).
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace osieve
