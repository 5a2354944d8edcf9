#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "osieve/primes.hpp"

namespace osieve {

/// An offset set O. Sieving by a prime p removes every n with
/// n + o = 0 (mod p) for some o in O.
///
/// {0} is the single sieve (plain Eratosthenes), {0,2} the double sieve
/// (twin-prime formers), {0,2,6,8} the special 4-sieve (prime quadruplets).
/// Offsets are even, strictly increasing, start at 0, and admissible: no
/// prime p has every residue class mod p removed.
class OffsetSystem {
 public:
  static OffsetSystem single_sieve() { return OffsetSystem({0}, "single"); }
  static OffsetSystem double_sieve() { return OffsetSystem({0, 2}, "double"); }
  static OffsetSystem quad_sieve() { return OffsetSystem({0, 2, 6, 8}, "quad"); }

  /// Validated user offsets. Throws std::invalid_argument on malformed or
  /// inadmissible sets.
  static OffsetSystem custom(std::vector<u64> offsets, std::string name = "custom") {
    validate(offsets);
    return OffsetSystem(std::move(offsets), std::move(name));
  }

  /// "single", "double", "quad", or a comma-separated offset list such as "0,2,6".
  static OffsetSystem parse(std::string_view text) {
    if (text == "single") return single_sieve();
    if (text == "double") return double_sieve();
    if (text == "quad") return quad_sieve();
    std::vector<u64> offsets;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t comma = std::min(text.find(',', pos), text.size());
      const std::string_view field = text.substr(pos, comma - pos);
      u64 value = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
        throw std::invalid_argument("bad offset '" + std::string(field) + "' in \"" +
                                    std::string(text) + "\"");
      offsets.push_back(value);
      pos = comma + 1;
    }
    return custom(std::move(offsets), std::string(text));
  }

  [[nodiscard]] std::span<const u64> offsets() const noexcept { return offsets_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::size_t size() const noexcept { return offsets_.size(); }
  [[nodiscard]] u64 max_offset() const noexcept { return offsets_.back(); }

  /// The constant c in the effective-range cutoff p_{m+1}^2 - c.
  /// 2 for single, 4 for double, 10 for quad.
  [[nodiscard]] u64 cutoff_constant() const noexcept { return max_offset() + 2; }

  friend bool operator==(const OffsetSystem& a, const OffsetSystem& b) {
    return a.offsets_ == b.offsets_;
  }

  /// Residues removed by sieving with prime p, sorted, collisions merged.
  [[nodiscard]] std::vector<u64> removed_residues(u64 p) const {
    std::vector<u64> r;
    r.reserve(offsets_.size());
    for (u64 o : offsets_) r.push_back((p - o % p) % p);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  }

  /// Only primes p <= |O| can have all residues covered.
  [[nodiscard]] static bool admissible(std::span<const u64> offsets) {
    for (u64 p = 2; p <= offsets.size(); ++p) {
      if (!is_prime(p)) continue;
      std::vector<bool> hit(p, false);
      std::size_t covered = 0;
      for (u64 o : offsets) {
        const u64 r = (p - o % p) % p;
        if (!hit[r]) {
          hit[r] = true;
          ++covered;
        }
      }
      if (covered == p) return false;
    }
    return true;
  }

 private:
  OffsetSystem(std::vector<u64> offsets, std::string name)
      : offsets_(std::move(offsets)), name_(std::move(name)) {}

  static void validate(std::span<const u64> offsets) {
    if (offsets.empty()) throw std::invalid_argument("offset set is empty");
    if (offsets.front() != 0) throw std::invalid_argument("offsets must start at 0");
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      if (offsets[i] % 2 != 0) throw std::invalid_argument("offsets must be even");
      if (i > 0 && offsets[i] <= offsets[i - 1])
        throw std::invalid_argument("offsets must be strictly increasing");
    }
    if (offsets.back() > (u64{1} << 32)) throw std::invalid_argument("offset too large");
    if (!admissible(offsets))
      throw std::invalid_argument("offset set is not admissible (covers every residue mod some prime)");
  }

  std::vector<u64> offsets_;
  std::string name_;
};

/// {(-o) mod p : o in O} with collisions merged.
inline std::vector<u64> removed_residues(u64 p, const OffsetSystem& system) {
  return system.removed_residues(p);
}

}  // namespace osieve
