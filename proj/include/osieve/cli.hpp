#pragma once

// Command-line front end. tools/osieve.cpp is a thin main() around run().
//
// Exit codes: 0 success, 1 verification failure, 2 usage, 3 resource.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "osieve/constellations.hpp"
#include "osieve/errors.hpp"
#include "osieve/fixture.hpp"
#include "osieve/minfunc.hpp"
#include "osieve/offset_system.hpp"
#include "osieve/report.hpp"
#include "osieve/sieve_core.hpp"

namespace osieve::cli {

enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kUsage = 2, kResource = 3 };

/// Ranges above this need --allow-large.
inline constexpr u64 kDefaultCeiling = 1'000'000'000;

struct RunConfig {
  std::string system = "double";
  std::size_t depth = 0;
  std::size_t m_max = 16;
  u64 lo = 1;
  u64 hi = 0;
  u64 limit = 0;
  std::size_t segment_size = kDefaultSegmentCap;
  unsigned threads = 0;
  std::string format = "csv";
  std::string fixture;
  bool allow_large = false;
};

namespace detail {

using report::Report;
using report::Table;

inline report::Cell big_cell(const BigInt& v) {
  if (v <= std::numeric_limits<u64>::max()) return report::Cell{static_cast<u64>(v)};
  return report::Cell{v.str()};
}

inline void check_ceiling(u64 value, const RunConfig& cfg, const char* what) {
  if (value > kDefaultCeiling && !cfg.allow_large)
    throw resource_error(std::string(what) + " " + std::to_string(value) + " exceeds the default ceiling " +
                         std::to_string(kDefaultCeiling) + "; pass --allow-large to proceed");
}

inline ScanOptions scan(const RunConfig& cfg) { return {cfg.segment_size, cfg.threads}; }

inline Report cmd_sieve(const RunConfig& cfg) {
  const OffsetSystem system = OffsetSystem::parse(cfg.system);
  check_ceiling(cfg.hi, cfg, "--hi");
  const auto members = SievePlan(system, cfg.depth).members(cfg.lo, cfg.hi, scan(cfg));
  Report r{"sieve", {{"survivors", {"n"}, {}}}};
  for (u64 n : members) r.tables[0].add(n);
  r.summary = {{"system", system.name()}, {"depth", cfg.depth}, {"lo", cfg.lo}, {"hi", cfg.hi},
               {"count", members.size()}};
  return r;
}

inline Report cmd_period(const RunConfig& cfg, bool list) {
  const OffsetSystem system = OffsetSystem::parse(cfg.system);
  const PeriodSummary s = period_summary(cfg.depth, system);
  Report r{"period", {{"period", {"depth", "period", "survivor_count"}, {}}}};
  r.tables[0].rows.push_back({report::cell(s.depth), big_cell(s.period), big_cell(s.survivor_count)});
  Table residues{"removed_residues", {"i", "p", "removed"}, {}};
  const auto primes = first_primes(cfg.depth + 1);
  for (std::size_t i = 0; i < primes.size(); ++i) residues.add(i, primes[i], s.removed_counts[i]);
  r.tables.push_back(std::move(residues));
  if (list) {
    Table elems{"elements", {"n"}, {}};
    for (u64 n : period_elements(cfg.depth, system, kDefaultCeiling, scan(cfg))) elems.add(n);
    r.tables.push_back(std::move(elems));
  }
  return r;
}

inline Report cmd_minfunc(const RunConfig& cfg) {
  const auto seq = minimum_function(OffsetSystem::parse(cfg.system), cfg.m_max, scan(cfg));
  Report r{"minfunc", {{"minimum_function", {"m", "p_m", "n_m1", "is_jump", "bound_exceeded"}, {}}}};
  for (const auto& e : seq) {
    r.tables[0].add(e.m, e.p_m, e.n_m1, e.is_jump, e.bound_exceeded);
    if (e.bound_exceeded) r.ok = false;
  }
  return r;
}

inline Report cmd_jumps(const RunConfig& cfg) {
  const auto jumps = jump_points(OffsetSystem::parse(cfg.system), cfg.m_max, scan(cfg));
  Report r{"jumps", {{"jump_points", {"m", "p_m", "previous_min", "new_min"}, {}}}};
  for (const auto& j : jumps) r.tables[0].add(j.m, j.p_m, j.previous_min, j.new_min);
  return r;
}

inline Report cmd_effective(const RunConfig& cfg, std::optional<u64> clip) {
  const OffsetSystem system = OffsetSystem::parse(cfg.system);
  const u64 next = nth_prime(cfg.depth + 1);
  check_ceiling(clip.value_or(next * next), cfg, "effective range cutoff");
  const auto er = effective_range(cfg.depth, system, clip.value_or(std::numeric_limits<u64>::max()), scan(cfg));
  Report r{"effective", {{"effective_range", {"z"}, {}}}};
  for (u64 z : er.members) r.tables[0].add(z);
  r.summary = {{"system", system.name()}, {"m", er.m},        {"p_m", er.p_m},
               {"cutoff", er.cutoff},     {"count", er.members.size()}, {"violations", er.violations}};
  r.ok = er.violations.empty();
  return r;
}

inline Report records_report(const std::string& command, const std::string& table,
                             const std::vector<std::string>& columns,
                             const std::vector<ConstellationRecord>& records) {
  Report r{command, {{table, columns, {}}}};
  for (const auto& rec : records) r.tables[0].add(rec.start, rec.gap_to_next);
  r.summary = {{"count", records.size()}};
  return r;
}

inline Report cmd_twins(const RunConfig& cfg) {
  check_ceiling(cfg.hi, cfg, "--hi");
  Report r{"twins", {{"twin_formers", {"former"}, {}}}};
  const auto formers = twin_formers(cfg.lo, cfg.hi, scan(cfg));
  for (u64 p : formers) r.tables[0].add(p);
  r.summary = {{"count", formers.size()}};
  return r;
}

inline Report cmd_lifespan(const RunConfig& cfg, const std::vector<u64>& zs) {
  std::vector<u64> starts = zs;
  if (starts.empty()) {
    check_ceiling(cfg.limit, cfg, "--limit");
    for (const auto& q : quadruplets(5, cfg.limit, scan(cfg))) starts.push_back(q.start);
  }
  Report r{"lifespan", {{"life_spans", {"p_l", "p_h", "p_h_next", "bounds_hold"}, {}}}};
  for (u64 z : starts) {
    const LifeSpan s = life_span(z);
    const bool bounds = s.birth_prime * s.birth_prime < z + 10 && z + 10 <= s.next_after_birth * s.next_after_birth;
    if (!bounds) r.ok = false;
    r.tables[0].add(s.death_prime, s.birth_prime, s.next_after_birth, bounds);
  }
  return r;
}

inline Report cmd_verify_theorem71(const RunConfig& cfg) {
  check_ceiling(cfg.limit, cfg, "--limit");
  const Theorem71Report t = verify_theorem_71(cfg.limit, scan(cfg));
  Report r{"verify theorem71", {{"jump_values", {"i", "w", "difference"}, {}}}};
  for (std::size_t i = 0; i < t.jump_values.size(); ++i)
    r.tables[0].add(i, t.jump_values[i], i ? std::optional<u64>(t.differences[i - 1]) : std::nullopt);
  r.summary = {{"limit", t.limit},
               {"jump_count", t.jump_values.size()},
               {"quadruplet_count", t.quadruplet_starts.size()},
               {"difference",
                {{"jumps_not_quadruplets", t.jumps_not_quadruplets},
                 {"quadruplets_not_jumps", t.quadruplets_not_jumps}}},
               {"first_difference_is_6", t.first_difference_is_6},
               {"spacing_violations", t.spacing_violations},
               {"bound_exceeded", t.bound_exceeded}};
  r.ok = t.ok();
  return r;
}

inline Report cmd_verify_assumption41(const RunConfig& cfg, std::optional<u64> max_prime) {
  const std::size_t m_max = max_prime ? index_at_most(*max_prime) : cfg.m_max;
  const Assumption41Report a = check_assumption_41(m_max, scan(cfg));
  Report r{"verify assumption41",
           {{"assumption41",
             {"m", "p_m", "p_next", "cutoff", "n_m1", "first_in_range", "range_nonempty", "minimum_within", "margin"},
             {}}}};
  for (const auto& row : a.rows)
    r.tables[0].add(row.m, row.p_m, row.p_next, row.cutoff, row.n_m1, row.first_in_range, row.range_nonempty,
                    row.minimum_within, row.margin);
  Table runs{"solitary_runs", {"m", "from", "to", "primes", "solitary"}, {}};
  for (const auto& s : a.solitary_runs) runs.add(s.m, s.from, s.to, s.primes, s.solitary);
  r.tables.push_back(std::move(runs));
  r.summary = {{"m_max", m_max},           {"violations", a.violations}, {"min_margin", a.min_margin},
               {"max_ratio", a.max_ratio}, {"mean_margin", a.mean_margin}};
  r.ok = a.holds();
  return r;
}

/// Effective-range members z <= max_value at increasing depth. Once the
/// cutoff passes max_value deeper ranges only hold subsets, so the walk stops.
inline Report cmd_verify_effective(const RunConfig& cfg, u64 max_value) {
  check_ceiling(max_value, cfg, "--max-value");
  const OffsetSystem system = OffsetSystem::parse(cfg.system);
  Report r{"verify effective", {{"ranges", {"m", "p_m", "cutoff", "members", "violations"}, {}}}};
  std::vector<u64> bad;
  std::size_t checked = 0;
  for (std::size_t m = 0;; ++m) {
    const auto er = effective_range(m, system, max_value, scan(cfg));
    r.tables[0].add(er.m, er.p_m, er.cutoff, er.members.size(), er.violations.size());
    checked += er.members.size();
    bad.insert(bad.end(), er.violations.begin(), er.violations.end());
    if (er.cutoff >= static_cast<std::int64_t>(max_value) || er.p_m >= max_value) break;
  }
  r.summary = {{"system", system.name()}, {"max_value", max_value}, {"members_checked", checked},
               {"violations", bad}};
  r.ok = bad.empty();
  return r;
}

/// Coprimality, survival, monotonicity and n_{m,1} >= p_{m+1} over a minimum-function run.
inline Report cmd_verify_invariants(const RunConfig& cfg) {
  const OffsetSystem system = OffsetSystem::parse(cfg.system);
  const auto seq = minimum_function(system, cfg.m_max, scan(cfg));
  Report r{"verify invariants", {{"violations", {"m", "kind", "detail"}, {}}}};
  const auto primes = first_primes(cfg.m_max + 2);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& e = seq[i];
    if (e.bound_exceeded) {
      r.tables[0].add(e.m, "bound_exceeded", "");
      continue;
    }
    for (std::size_t k = 0; k <= e.m; ++k)
      for (u64 o : system.offsets())
        if ((e.n_m1 + o) % primes[k] == 0)
          r.tables[0].add(e.m, "coprimality", std::to_string(e.n_m1 + o) + " divisible by " + std::to_string(primes[k]));
    if (e.n_m1 < primes[e.m + 1]) r.tables[0].add(e.m, "lower_bound", std::to_string(e.n_m1));
    if (i > 0 && e.n_m1 < seq[i - 1].n_m1) r.tables[0].add(e.m, "monotone", std::to_string(e.n_m1));
    if (i > 0 && e.is_jump != (e.n_m1 > seq[i - 1].n_m1)) r.tables[0].add(e.m, "jump_flag", "");
  }
  r.summary = {{"system", system.name()}, {"m_max", cfg.m_max}, {"violation_count", r.tables[0].rows.size()}};
  r.ok = r.tables[0].rows.empty();
  return r;
}

inline Report cmd_reproduce(const RunConfig& cfg, const std::string& table_id) {
  std::ifstream in(cfg.fixture);
  if (!in) throw std::invalid_argument("cannot open fixture '" + cfg.fixture + "'");
  const Fixture fx = parse_fixture(in, cfg.fixture);
  if (fx.table_id != table_id)
    throw std::invalid_argument("fixture holds table '" + fx.table_id + "', not '" + table_id + "'");
  const FixtureDiff d = reproduce(fx, scan(cfg));
  Report r{"reproduce", {{"diff", {"index", "line", "status", "expected", "computed"}, {}}}};
  for (const auto& m : d.mismatches) r.tables[0].add(m.index, m.line, "mismatch", m.expected, m.computed);
  for (const auto& m : d.suspect) r.tables[0].add(m.index, m.line, "suspect", m.expected, m.computed);
  r.summary = {{"table", d.table_id},
               {"matches", d.matches},
               {"mismatches", d.mismatches.size()},
               {"suspect", d.suspect.size()},
               {"total", d.total()}};
  r.ok = d.ok();
  return r;
}

inline void add_system(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--system", cfg.system, "single | double | quad | comma-separated even offsets")
      ->capture_default_str();
}

}  // namespace detail

/// Parses args (args[0] is the program name), runs one subcommand and
/// writes its report to out. Diagnostics go to err.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Offset-constellation sieve toolkit"};
  app.fallthrough();
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads, 0 = auto")->capture_default_str();
  app.add_option("--segment-size", cfg.segment_size, "values per sieve segment")
      ->check(CLI::Range(std::size_t{64}, std::size_t{1} << 30))
      ->capture_default_str();
  app.add_flag("--allow-large", cfg.allow_large, "permit ranges above 10^9");

  std::function<detail::Report()> action;

  auto* sieve = app.add_subcommand("sieve", "survivors of N_depth on [lo, hi]");
  detail::add_system(sieve, cfg);
  sieve->add_option("--depth", cfg.depth)->required();
  sieve->add_option("--lo", cfg.lo)->capture_default_str();
  sieve->add_option("--hi", cfg.hi)->required();
  sieve->callback([&] { action = [&] { return detail::cmd_sieve(cfg); }; });

  bool list = false;
  auto* period = app.add_subcommand("period", "period and survivor count of N_depth");
  detail::add_system(period, cfg);
  period->add_option("--depth", cfg.depth)->required();
  period->add_flag("--list", list, "also list the survivors of one period");
  period->callback([&] { action = [&] { return detail::cmd_period(cfg, list); }; });

  auto* minfunc = app.add_subcommand("minfunc", "minimum function n_{m,1} for m = 0..m-max");
  detail::add_system(minfunc, cfg);
  minfunc->add_option("--m-max", cfg.m_max)->capture_default_str();
  minfunc->callback([&] { action = [&] { return detail::cmd_minfunc(cfg); }; });

  auto* jumps = app.add_subcommand("jumps", "jump points up to m-max");
  detail::add_system(jumps, cfg);
  jumps->add_option("--m-max", cfg.m_max)->capture_default_str();
  jumps->callback([&] { action = [&] { return detail::cmd_jumps(cfg); }; });

  std::optional<u64> clip;
  auto* effective = app.add_subcommand("effective", "effective range N_m ∩ (p_m, p_{m+1}^2 - c]");
  detail::add_system(effective, cfg);
  effective->add_option("--m", cfg.depth)->required();
  effective->add_option("--clip", clip, "list members only up to this value");
  effective->callback([&] { action = [&] { return detail::cmd_effective(cfg, clip); }; });

  auto* twins = app.add_subcommand("twins", "twin-prime formers in [lo, hi]");
  twins->add_option("--lo", cfg.lo)->capture_default_str();
  twins->add_option("--hi", cfg.hi)->required();
  twins->callback([&] { action = [&] { return detail::cmd_twins(cfg); }; });

  auto* gaps = app.add_subcommand("gaps", "twin formers up to limit with forward gaps");
  gaps->add_option("--limit", cfg.limit)->required();
  gaps->callback([&] {
    action = [&] {
      detail::check_ceiling(cfg.limit, cfg, "--limit");
      return detail::records_report("gaps", "gap_table", {"former", "gap"}, gap_table(cfg.limit, detail::scan(cfg)));
    };
  });

  auto* quads = app.add_subcommand("quads", "prime quadruplet starts in [lo, hi]");
  quads->add_option("--lo", cfg.lo)->capture_default_str();
  quads->add_option("--hi", cfg.hi)->required();
  quads->callback([&] {
    action = [&] {
      detail::check_ceiling(cfg.hi, cfg, "--hi");
      return detail::records_report("quads", "quadruplets", {"start", "gap_to_next"},
                                    quadruplets(cfg.lo, cfg.hi, detail::scan(cfg)));
    };
  });

  int d_from = 3, d_to = 7, ceiling = 8;
  bool above_ceiling = false;
  auto* decades = app.add_subcommand("decades", "quadruplet counts per decade (10^d, 10^(d+1))");
  decades->add_option("--from", d_from)->capture_default_str();
  decades->add_option("--to", d_to)->capture_default_str();
  decades->add_option("--ceiling", ceiling)->capture_default_str();
  decades->add_flag("--allow-above-ceiling", above_ceiling);
  decades->callback([&] {
    action = [&] {
      DecadeOptions o{ceiling, above_ceiling, &err, detail::scan(cfg)};
      detail::Report r{"decades", {{"decades", {"exponent", "lo", "hi", "count"}, {}}}};
      for (const auto& c : decade_histogram(d_from, d_to, o))
        r.tables[0].add(c.exponent, osieve::detail::pow10(c.exponent), osieve::detail::pow10(c.exponent + 1),
                        c.count);
      return r;
    };
  });

  std::vector<u64> zs;
  auto* lifespan = app.add_subcommand("lifespan", "birth and death primes of quadruplets");
  lifespan->add_option("--z", zs, "quadruplet starts");
  lifespan->add_option("--limit", cfg.limit, "all quadruplet starts up to limit");
  lifespan->callback([&] {
    if (zs.empty() && cfg.limit == 0) throw CLI::ValidationError("lifespan", "give --z or --limit");
    action = [&] { return detail::cmd_lifespan(cfg, zs); };
  });

  auto* verify = app.add_subcommand("verify", "verification suites");
  verify->fallthrough();
  verify->require_subcommand(1);
  auto* t71 = verify->add_subcommand("theorem71", "quad-sieve jump values vs brute-force quadruplets");
  t71->add_option("--limit", cfg.limit)->required();
  t71->callback([&] { action = [&] { return detail::cmd_verify_theorem71(cfg); }; });

  std::optional<u64> max_prime;
  auto* a41 = verify->add_subcommand("assumption41", "double-sieve range assumption, m = 0..m-max");
  a41->fallthrough();
  a41->add_option("--m-max", cfg.m_max);
  a41->add_option("--max-prime", max_prime, "run every m with p_m <= this");
  a41->callback([&] { action = [&] { return detail::cmd_verify_assumption41(cfg, max_prime); }; });

  u64 max_value = 1'000'000;
  auto* veff = verify->add_subcommand("effective", "constellation property of effective-range members");
  detail::add_system(veff, cfg);
  veff->add_option("--max-value", max_value)->capture_default_str();
  veff->callback([&] { action = [&] { return detail::cmd_verify_effective(cfg, max_value); }; });

  auto* vinv = verify->add_subcommand("invariants", "minimum-function invariants");
  detail::add_system(vinv, cfg);
  vinv->add_option("--m-max", cfg.m_max)->capture_default_str();
  vinv->callback([&] { action = [&] { return detail::cmd_verify_invariants(cfg); }; });

  std::string table_id;
  auto* repro = app.add_subcommand("reproduce", "diff a golden-table fixture against computed data");
  repro->add_option("table", table_id, "table id")->required()->check(CLI::IsMember(known_tables()));
  repro->add_option("--fixture", cfg.fixture)->required();
  repro->callback([&] { action = [&] { return detail::cmd_reproduce(cfg, table_id); }; });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("osieve");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsage;
  }

  try {
    const detail::Report r = action();
    if (cfg.format == "json") out << report::to_json(r).dump(2) << "\n";
    else out << report::to_csv(r);
    return r.ok ? kOk : kVerificationFailure;
  } catch (const resource_error& e) {
    err << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const fixture_error& e) {
    err << "fixture error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace osieve::cli
