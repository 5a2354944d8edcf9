#pragma once

// Golden-table fixtures and the diff against freshly computed data.
//
// Fixture files are plain text. '#' starts a comment (whole-line or
// trailing); blank lines are ignored. The first content line names the
// table, "table: <id>". Every following content line is one entry of
// whitespace-separated fields:
//
//   min_table       m p_m n_m1
//   gap_head        former gap        (a lone "former" for an entry with no gap)
//   gap_tail        former gap | former
//   decade_counts   exponent count
//   lifespan_table  i p_l p_h
//   n_listings      system depth prefix|contains v1 v2 ...
//
// An entry that disagrees with the computation is "suspect" rather than a
// mismatch when the transcribed value fails a local sanity test of its own
// (an even twin former, a composite where a prime is required).

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "osieve/constellations.hpp"
#include "osieve/minfunc.hpp"
#include "osieve/offset_system.hpp"
#include "osieve/sieve_core.hpp"

namespace osieve {

class fixture_error : public std::runtime_error {
 public:
  fixture_error(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct FixtureEntry {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

struct Fixture {
  std::string source;
  std::string table_id;
  std::vector<FixtureEntry> entries;
};

inline const std::vector<std::string>& known_tables() {
  static const std::vector<std::string> ids = {"min_table",     "gap_head",       "gap_tail",
                                               "decade_counts", "lifespan_table", "n_listings"};
  return ids;
}

namespace detail {

inline u64 parse_u64(const std::string& s, const std::string& source, std::size_t line) {
  u64 v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
    throw fixture_error(source, line, "expected a non-negative integer, got '" + s + "'");
  return v;
}

inline void require_numeric(const FixtureEntry& e, std::size_t from, const std::string& source) {
  for (std::size_t i = from; i < e.fields.size(); ++i) parse_u64(e.fields[i], source, e.line);
}

inline void check_shape(const Fixture& fx) {
  for (const auto& e : fx.entries) {
    const std::size_t n = e.fields.size();
    auto bad = [&](const std::string& want) {
      throw fixture_error(fx.source, e.line, fx.table_id + " entry needs " + want);
    };
    if (fx.table_id == "min_table") {
      if (n != 3) bad("3 fields: m p_m n_m1");
      require_numeric(e, 0, fx.source);
    } else if (fx.table_id == "gap_head" || fx.table_id == "gap_tail") {
      if (n != 1 && n != 2) bad("1 or 2 fields: former [gap]");
      require_numeric(e, 0, fx.source);
    } else if (fx.table_id == "decade_counts") {
      if (n != 2) bad("2 fields: exponent count");
      require_numeric(e, 0, fx.source);
    } else if (fx.table_id == "lifespan_table") {
      if (n != 3) bad("3 fields: i p_l p_h");
      require_numeric(e, 0, fx.source);
    } else if (fx.table_id == "n_listings") {
      if (n < 4) bad("system depth prefix|contains values...");
      try {
        (void)OffsetSystem::parse(e.fields[0]);
      } catch (const std::invalid_argument& ex) {
        throw fixture_error(fx.source, e.line, ex.what());
      }
      if (e.fields[2] != "prefix" && e.fields[2] != "contains") bad("kind 'prefix' or 'contains'");
      parse_u64(e.fields[1], fx.source, e.line);
      require_numeric(e, 3, fx.source);
    }
  }
}

}  // namespace detail

inline Fixture parse_fixture(std::istream& in, const std::string& source = "<fixture>") {
  Fixture fx;
  fx.source = source;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (fx.table_id.empty()) {
      if (tokens.size() != 2 || tokens[0] != "table:")
        throw fixture_error(source, lineno, "expected 'table: <id>' before any entry");
      const auto& ids = known_tables();
      if (std::find(ids.begin(), ids.end(), tokens[1]) == ids.end())
        throw fixture_error(source, lineno, "unknown table id '" + tokens[1] + "'");
      fx.table_id = tokens[1];
      continue;
    }
    fx.entries.push_back({lineno, std::move(tokens)});
  }
  if (fx.table_id.empty()) throw fixture_error(source, lineno, "missing 'table: <id>' line");
  detail::check_shape(fx);
  return fx;
}

struct FixtureMismatch {
  std::size_t index = 0;  ///< position among the fixture's entries
  std::size_t line = 0;
  std::string expected;
  std::string computed;
};

struct FixtureDiff {
  std::string table_id;
  std::size_t matches = 0;
  std::vector<FixtureMismatch> mismatches;
  std::vector<FixtureMismatch> suspect;  ///< computed value substituted

  [[nodiscard]] std::size_t total() const noexcept { return matches + mismatches.size() + suspect.size(); }
  [[nodiscard]] bool ok() const noexcept { return mismatches.empty(); }
};

namespace detail {

inline std::string join(const std::vector<std::string>& f, std::size_t from = 0) {
  std::string s;
  for (std::size_t i = from; i < f.size(); ++i) s += (i > from ? " " : "") + f[i];
  return s;
}

inline std::string join(const std::vector<u64>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

struct Expectation {
  std::string computed;
  bool sane = true;
};

inline bool sane_twin_former(u64 p) { return p % 2 == 1 && is_prime(p) && is_prime(p + 2); }

inline std::vector<Expectation> compute_min_table(const Fixture& fx, const ScanOptions& opts) {
  std::size_t m_max = 0;
  for (const auto& e : fx.entries) m_max = std::max<std::size_t>(m_max, std::stoull(e.fields[0]));
  const auto seq = minimum_function(OffsetSystem::double_sieve(), m_max, opts);
  std::vector<Expectation> out;
  for (const auto& e : fx.entries) {
    const std::size_t m = std::stoull(e.fields[0]);
    Expectation x;
    x.computed = m < seq.size() && !seq[m].bound_exceeded
                     ? std::to_string(m) + " " + std::to_string(seq[m].p_m) + " " + std::to_string(seq[m].n_m1)
                     : "unavailable";
    x.sane = is_prime(std::stoull(e.fields[1])) && sane_twin_former(std::stoull(e.fields[2]));
    out.push_back(std::move(x));
  }
  return out;
}

inline std::vector<Expectation> compute_gaps(const Fixture& fx, bool tail, const ScanOptions& opts) {
  u64 max_former = 5;
  for (const auto& e : fx.entries) max_former = std::max<u64>(max_former, std::stoull(e.fields[0]));
  const auto table = gap_table(max_former + 100000, opts);
  std::size_t start = 0;
  if (tail && !fx.entries.empty()) {
    const u64 first = std::stoull(fx.entries.front().fields[0]);
    auto it = std::find_if(table.begin(), table.end(), [&](const auto& r) { return r.start == first; });
    start = it == table.end() ? table.size() : static_cast<std::size_t>(it - table.begin());
  }
  std::vector<Expectation> out;
  for (std::size_t i = 0; i < fx.entries.size(); ++i) {
    const auto& e = fx.entries[i];
    Expectation x;
    if (start + i < table.size()) {
      const auto& r = table[start + i];
      x.computed = std::to_string(r.start);
      if (e.fields.size() == 2) x.computed += " " + (r.gap_to_next ? std::to_string(*r.gap_to_next) : "-");
    } else {
      x.computed = "unavailable";
    }
    const u64 former = std::stoull(e.fields[0]);
    x.sane = sane_twin_former(former) && (e.fields.size() < 2 || std::stoull(e.fields[1]) % 2 == 0);
    out.push_back(std::move(x));
  }
  return out;
}

inline std::vector<Expectation> compute_decades(const Fixture& fx, const ScanOptions& opts) {
  int lo = 100, hi = 0;
  for (const auto& e : fx.entries) {
    const int d = std::stoi(e.fields[0]);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  std::map<int, u64> counts;
  if (!fx.entries.empty()) {
    DecadeOptions dopts;
    dopts.scan = opts;
    for (const auto& c : decade_histogram(lo, hi, dopts)) counts[c.exponent] = c.count;
  }
  std::vector<Expectation> out;
  for (const auto& e : fx.entries) {
    const int d = std::stoi(e.fields[0]);
    out.push_back({std::to_string(d) + " " + std::to_string(counts.at(d)), true});
  }
  return out;
}

inline std::vector<Expectation> compute_lifespans(const Fixture& fx, const ScanOptions& opts) {
  u64 max_z = 5;
  for (const auto& e : fx.entries) max_z = std::max<u64>(max_z, std::stoull(e.fields[1]));
  const auto quads = quadruplets(5, max_z, opts);
  std::vector<Expectation> out;
  for (const auto& e : fx.entries) {
    const std::size_t i = std::stoull(e.fields[0]);
    Expectation x;
    if (i < quads.size()) {
      const LifeSpan s = life_span(quads[i].start);
      x.computed = std::to_string(i) + " " + std::to_string(s.death_prime) + " " + std::to_string(s.birth_prime);
    } else {
      x.computed = "unavailable";
    }
    x.sane = is_quadruplet_start(std::stoull(e.fields[1])) && is_prime(std::stoull(e.fields[2]));
    out.push_back(std::move(x));
  }
  return out;
}

inline std::vector<Expectation> compute_listings(const Fixture& fx) {
  std::vector<Expectation> out;
  for (const auto& e : fx.entries) {
    const OffsetSystem system = OffsetSystem::parse(e.fields[0]);
    const std::size_t depth = std::stoull(e.fields[1]);
    const SievePlan plan(system, depth);
    std::vector<u64> values;
    for (std::size_t i = 3; i < e.fields.size(); ++i) values.push_back(std::stoull(e.fields[i]));
    std::vector<u64> computed;
    if (e.fields[2] == "prefix") {
      // The first |values| members of N_depth.
      for (u64 lo = 1; computed.size() < values.size(); lo += 4096) {
        for (u64 n : plan.members(lo, lo + 4095))
          if (computed.size() < values.size()) computed.push_back(n);
      }
    } else {
      for (u64 v : values)
        if (v > 0 && plan.survives(v)) computed.push_back(v);
    }
    out.push_back({e.fields[0] + " " + e.fields[1] + " " + e.fields[2] + " " + join(computed), true});
  }
  return out;
}

}  // namespace detail

/// Recomputes the table named by the fixture and diffs entry by entry.
inline FixtureDiff reproduce(const Fixture& fx, const ScanOptions& opts = {}) {
  std::vector<detail::Expectation> computed;
  const std::string& id = fx.table_id;
  if (id == "min_table") computed = detail::compute_min_table(fx, opts);
  else if (id == "gap_head") computed = detail::compute_gaps(fx, false, opts);
  else if (id == "gap_tail") computed = detail::compute_gaps(fx, true, opts);
  else if (id == "decade_counts") computed = detail::compute_decades(fx, opts);
  else if (id == "lifespan_table") computed = detail::compute_lifespans(fx, opts);
  else if (id == "n_listings") computed = detail::compute_listings(fx);
  else throw std::invalid_argument("unknown table id '" + id + "'");

  FixtureDiff diff;
  diff.table_id = id;
  for (std::size_t i = 0; i < fx.entries.size(); ++i) {
    const auto& e = fx.entries[i];
    const std::string expected = detail::join(e.fields);
    if (expected == computed[i].computed) {
      ++diff.matches;
      continue;
    }
    FixtureMismatch mm{i, e.line, expected, computed[i].computed};
    if (computed[i].sane) diff.mismatches.push_back(std::move(mm));
    else diff.suspect.push_back(std::move(mm));
  }
  return diff;
}

}  // namespace osieve
