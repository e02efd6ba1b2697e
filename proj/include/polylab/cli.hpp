#pragma once

// Command-line front end. parse_arguments validates everything up front;
// execute only dispatches and formats. Exit codes: 0 success, 1 engine or
// verification failure, 2 usage error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polylab/constants.hpp"
#include "polylab/geometry.hpp"
#include "polylab/io.hpp"
#include "polylab/pathcount.hpp"
#include "polylab/simulator.hpp"
#include "polylab/stochastics.hpp"
#include "polylab/verification.hpp"

namespace polylab::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

enum class OutputFormat { json, csv };

using ParamValue = std::variant<std::int64_t, double, std::string, bool>;

struct CommandRequest {
  std::string subcommand;
  std::map<std::string, ParamValue> parameters;
  OutputFormat output_format = OutputFormat::json;
  std::string output_path;  // empty means standard output

  bool has(const std::string& key) const { return parameters.count(key) != 0; }

  std::int64_t integer(const std::string& key) const { return std::get<std::int64_t>(parameters.at(key)); }
  double real(const std::string& key) const { return std::get<double>(parameters.at(key)); }
  bool flag(const std::string& key) const { return std::get<bool>(parameters.at(key)); }
};

/// Bad command line; `what()` names the offending flag, `usage()` is the
/// full flag schema.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& message, std::string usage)
      : std::runtime_error(message), usage_(std::move(usage)) {}
  const std::string& usage() const { return usage_; }

 private:
  std::string usage_;
};

/// --help was requested; carries the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct RawOptions {
  std::int64_t n = 0, l = 0, d = 0, K = 0, m = 2, k = 0, trials = 0, parallelism = 1;
  std::int64_t lmax = -1, mc_trials = 0;
  std::uint64_t seed = 0;
  double x = 0.0, grid_step = 1e-4, lopt = 0.0;
  bool fast = false;
  std::string format;
  std::string out;
};

inline void add_output_options(CLI::App* sub, RawOptions& raw) {
  sub->add_option("--format", raw.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", raw.out, "Write output to this file instead of standard output");
}

inline std::string schema_text(CLI::App& app) {
  std::string text = app.help();
  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) {
    text += "\n" + sub->help();
  }
  return text;
}

}  // namespace detail

inline CommandRequest parse_arguments(const std::vector<std::string>& argv) {
  detail::RawOptions raw;
  CLI::App app{"polylab: hypercube polymer laboratory", "polylab"};
  app.require_subcommand(1, 1);

  auto* count = app.add_subcommand("count", "Exact walk count M(n, l, d)");
  count->add_option("--n", raw.n, "Dimension")->required();
  count->add_option("--l", raw.l, "Walk length")->required();
  count->add_option("--d", raw.d, "Hamming distance")->required();

  auto* identity = app.add_subcommand("identity", "Residual of the sinh/cosh generating-function identity");
  identity->add_option("--n", raw.n, "Dimension")->required();
  identity->add_option("--d", raw.d, "Hamming distance")->required();
  identity->add_option("--x", raw.x, "Evaluation point (> 0)")->required();
  identity->add_option("--lmax", raw.lmax, "Truncation length (default: remainder below 1e-12)");

  auto* geometry = app.add_subcommand("geometry", "Solved coarse-graining geometry for K scales");
  geometry->add_option("--K", raw.K, "Number of scales")->required();
  geometry->add_option("--m", raw.m, "Directed-cap width of the optimal profile (default min(2, (K-1)/2))");

  auto* analyze = app.add_subcommand("analyze", "Grid verification of the theta-hat / g1 / g2 claims");
  analyze->add_option("--grid-step", raw.grid_step, "Grid spacing (<= 1e-3)")->required();
  analyze->add_option("--lopt", raw.lopt, "Also report sup theta_hat at this L_opt");

  auto* overlap = app.add_subcommand("overlap", "Joint small-energy probability of overlapping paths");
  overlap->add_option("--l", raw.l, "Path length")->required();
  overlap->add_option("--k", raw.k, "Shared edges")->required();
  overlap->add_option("--x", raw.x, "Energy threshold")->required();
  overlap->add_option("--mc-trials", raw.mc_trials, "Monte Carlo samples (>= 10^4)");
  overlap->add_option("--seed", raw.seed, "Monte Carlo seed");

  auto* simulate = app.add_subcommand("simulate", "Ground states of random hypercube instances");
  simulate->add_option("--n", raw.n, "Dimension")->required();
  simulate->add_option("--trials", raw.trials, "Number of instances")->required();
  simulate->add_option("--seed", raw.seed, "Base seed; trial t uses seed + t")->required();
  simulate->add_option("--parallelism", raw.parallelism, "Worker threads");

  auto* verify = app.add_subcommand("verify", "Run the invariant battery");
  verify->add_flag("--fast", raw.fast, "Smaller sizes");

  for (auto* sub : {count, identity, geometry, analyze, overlap, simulate, verify}) {
    detail::add_output_options(sub, raw);
  }

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(detail::schema_text(app));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what(), detail::schema_text(app));
  }

  const auto fail = [&](const std::string& message) { throw UsageError(message, detail::schema_text(app)); };

  CommandRequest request;
  request.subcommand = app.get_subcommands().front()->get_name();
  request.output_path = raw.out;
  if (raw.format == "csv" || (raw.format.empty() && request.subcommand == "geometry")) {
    request.output_format = OutputFormat::csv;
  }
  auto& p = request.parameters;
  const std::string& cmd = request.subcommand;

  if (cmd == "count" || cmd == "identity") {
    if (raw.n < 1) fail("--n: dimension must be >= 1");
    if (raw.d < 0 || raw.d > raw.n) fail("--d: Hamming distance must lie in [0, n]");
    p["n"] = raw.n;
    p["d"] = raw.d;
    if (cmd == "count") {
      if (raw.l < 0) fail("--l: walk length must be >= 0");
      p["l"] = raw.l;
    } else {
      if (!(raw.x > 0.0)) fail("--x: evaluation point must be > 0");
      p["x"] = raw.x;
      if (*identity->get_option("--lmax")) {
        if (raw.lmax < 0) fail("--lmax: truncation must be >= 0");
        p["lmax"] = raw.lmax;
      }
    }
  } else if (cmd == "geometry") {
    if (raw.K < 1) fail("--K: number of scales must be >= 1");
    if (!*geometry->get_option("--m")) {
      raw.m = std::min<std::int64_t>(2, (raw.K - 1) / 2);
    }
    if (raw.m < 0 || 2 * raw.m >= raw.K) fail("--m: need 0 <= m and 2m < K");
    p["K"] = raw.K;
    p["m"] = raw.m;
  } else if (cmd == "analyze") {
    if (!(raw.grid_step > 0.0 && raw.grid_step <= 1e-3)) fail("--grid-step: must lie in (0, 1e-3]");
    p["grid_step"] = raw.grid_step;
    if (*analyze->get_option("--lopt")) {
      if (!(raw.lopt > 1.0 && raw.lopt <= 1.25)) fail("--lopt: must lie in (1, 1.25]");
      p["lopt"] = raw.lopt;
    }
  } else if (cmd == "overlap") {
    if (raw.l < 1) fail("--l: path length must be >= 1");
    if (raw.k < 0 || raw.k > raw.l) fail("--k: shared edges must lie in [0, l]");
    if (!(raw.x > 0.0)) fail("--x: threshold must be > 0");
    p["l"] = raw.l;
    p["k"] = raw.k;
    p["x"] = raw.x;
    if (*overlap->get_option("--mc-trials")) {
      if (raw.mc_trials < 10000) fail("--mc-trials: need at least 10000 samples");
      p["mc_trials"] = raw.mc_trials;
    }
    p["seed"] = static_cast<std::int64_t>(raw.seed);
  } else if (cmd == "simulate") {
    if (raw.n < 1 || raw.n > kMaxDimension) fail("--n: dimension must lie in [1, 26]");
    if (raw.trials < 1) fail("--trials: need at least one trial");
    if (raw.parallelism < 1) fail("--parallelism: must be >= 1");
    p["n"] = raw.n;
    p["trials"] = raw.trials;
    p["seed"] = static_cast<std::int64_t>(raw.seed);
    p["parallelism"] = raw.parallelism;
  } else if (cmd == "verify") {
    p["fast"] = raw.fast;
  }
  return request;
}

namespace detail {

inline void write_kv_csv(std::ostream& out, const nlohmann::ordered_json& object) {
  bool first = true;
  for (const auto& [key, value] : object.items()) {
    out << (first ? "" : ",") << key;
    first = false;
  }
  out << '\n';
  first = true;
  for (const auto& [key, value] : object.items()) {
    out << (first ? "" : ",");
    first = false;
    if (value.is_string()) {
      out << value.get<std::string>();
    } else if (value.is_number_float()) {
      out << format_double(value.get<double>());
    } else {
      out << value.dump();
    }
  }
  out << '\n';
}

inline void emit(std::ostream& out, OutputFormat format, const nlohmann::ordered_json& object) {
  if (format == OutputFormat::json) {
    out << object.dump() << '\n';
  } else {
    write_kv_csv(out, object);
  }
}

inline int run_count(const CommandRequest& r, std::ostream& out) {
  const auto count = stanley_count(static_cast<int>(r.integer("n")), static_cast<int>(r.integer("l")),
                                   static_cast<int>(r.integer("d")));
  nlohmann::ordered_json j;
  j["count"] = to_decimal(count);
  emit(out, r.output_format, j);
  return kExitSuccess;
}

inline int run_identity(const CommandRequest& r, std::ostream& out) {
  const int n = static_cast<int>(r.integer("n"));
  const int d = static_cast<int>(r.integer("d"));
  const double x = r.real("x");
  const int l_max = r.has("lmax") ? static_cast<int>(r.integer("lmax")) : identity_truncation(n, x, 1e-12);
  const double residual = identity_residual(n, d, x, l_max);
  const double remainder = identity_remainder_bound(n, x, l_max);
  nlohmann::ordered_json j;
  j["n"] = n;
  j["d"] = d;
  j["x"] = x;
  j["lmax"] = l_max;
  j["residual"] = residual;
  j["remainder_bound"] = remainder;
  j["within_bound"] = residual <= remainder + 1e-10;
  emit(out, r.output_format, j);
  return residual <= remainder + 1e-10 ? kExitSuccess : kExitFailure;
}

inline int run_geometry(const CommandRequest& r, std::ostream& out) {
  const int K = static_cast<int>(r.integer("K"));
  const int m = static_cast<int>(r.integer("m"));
  const auto cg = solve_coarse_graining(K);
  const double full_product = evolution_product(cg, K);
  const auto profile = build_optimal_profile(K, m);
  if (r.output_format == OutputFormat::csv) {
    out << "i,a_i,abar_i,d_i,ef_i,eb_i\n";
    for (int i = 1; i <= K; ++i) {
      const auto s = static_cast<std::size_t>(i - 1);
      out << i << ',' << format_double(cg.a[s]) << ',' << format_double(cg.abar[s + 1]) << ','
          << format_double(cg.d[s]) << ',' << format_double(cg.ef[s]) << ',' << format_double(cg.eb[s]) << '\n';
    }
    out << "# full_product=" << format_double(full_product) << " L_opt=" << format_double(profile.L_opt)
        << " m=" << m << '\n';
  } else {
    nlohmann::ordered_json j;
    j["K"] = K;
    j["m"] = m;
    auto slabs = nlohmann::ordered_json::array();
    for (int i = 1; i <= K; ++i) {
      const auto s = static_cast<std::size_t>(i - 1);
      slabs.push_back({{"i", i},
                       {"a_i", cg.a[s]},
                       {"abar_i", cg.abar[s + 1]},
                       {"d_i", cg.d[s]},
                       {"ef_i", cg.ef[s]},
                       {"eb_i", cg.eb[s]}});
    }
    j["slabs"] = slabs;
    j["full_product"] = full_product;
    j["L_opt"] = profile.L_opt;
    j["d_opt"] = profile.d_opt;
    j["linearization_deviation_K2"] = linearization_deviation(cg);
    out << j.dump() << '\n';
  }
  return std::fabs(full_product - 1.0) <= 1e-9 ? kExitSuccess : kExitFailure;
}

inline int run_analyze(const CommandRequest& r, std::ostream& out) {
  const double step = r.real("grid_step");
  const auto report = verify_scalar_claims(step);
  std::optional<double> sup;
  if (r.has("lopt")) {
    double best = 0.0;
    const auto points = static_cast<long>(std::llround(1.0 / step));
    for (long k = 0; k <= points; ++k) {
      best = std::max(best, theta_hat(std::min(1.0, k * step), r.real("lopt")));
    }
    sup = best;
  }
  if (r.output_format == OutputFormat::csv) {
    out << "item,passed,measured\n";
    for (const auto& item : report.items) {
      out << '"' << item.name << "\"," << (item.passed ? "true" : "false") << ',' << format_double(item.measured)
          << '\n';
    }
    if (sup) {
      out << "\"theta_hat sup at lopt\"," << (*sup <= 1.0 + 1e-9 ? "true" : "false") << ','
          << format_double(*sup) << '\n';
    }
  } else {
    nlohmann::ordered_json j;
    j["grid_step"] = step;
    auto items = nlohmann::ordered_json::array();
    for (const auto& item : report.items) {
      items.push_back({{"name", item.name}, {"passed", item.passed}, {"measured", item.measured}});
    }
    j["items"] = items;
    if (sup) {
      j["lopt"] = r.real("lopt");
      j["theta_hat_sup"] = *sup;
    }
    out << j.dump() << '\n';
  }
  const bool ok = report.all_passed() && (!sup || *sup <= 1.0 + 1e-9);
  return ok ? kExitSuccess : kExitFailure;
}

inline int run_overlap(const CommandRequest& r, std::ostream& out) {
  const OverlapSpec spec{static_cast<int>(r.integer("l")), static_cast<int>(r.integer("k")), r.real("x")};
  nlohmann::ordered_json j;
  j["l"] = spec.l;
  j["k"] = spec.k;
  j["x"] = spec.x;
  j["g"] = overlap_g(static_cast<double>(spec.k) / spec.l);
  const double exact = overlap_probability_exact(spec);
  j["exact"] = exact;
  if (spec.k >= 1 && spec.k <= spec.l - 1) {
    j["leading"] = overlap_probability_leading(spec);
  }
  if (r.has("mc_trials")) {
    const auto mc = overlap_probability_mc(spec, static_cast<std::uint64_t>(r.integer("mc_trials")),
                                           static_cast<std::uint64_t>(r.integer("seed")));
    j["mc_estimate"] = mc.estimate;
    j["mc_stderr"] = mc.standard_error;
    j["mc_trials"] = mc.trials;
  }
  emit(out, r.output_format, j);
  return kExitSuccess;
}

inline int run_simulate(const CommandRequest& r, std::ostream& out, std::ostream& err) {
  const auto batch = run_trials(static_cast<int>(r.integer("n")), static_cast<std::size_t>(r.integer("trials")),
                                static_cast<std::uint64_t>(r.integer("seed")),
                                static_cast<unsigned>(r.integer("parallelism")));
  if (r.output_format == OutputFormat::csv) {
    write_trial_csv_header(out);
    for (const auto& record : batch.records) {
      write_trial_csv_row(out, record);
    }
  } else {
    for (const auto& record : batch.records) {
      out << trial_to_json(record).dump() << '\n';
    }
  }
  const auto& s = batch.summary;
  err << "n=" << s.n << " trials=" << s.trials << " mean m_n=" << format_double(s.m_n.mean)
      << " (E=" << format_double(kGroundEnergy) << ") mean length/n=" << format_double(s.length_ratio.mean)
      << " (L=" << format_double(kOptimalLength) << ") first-half energy fraction="
      << format_double(s.first_half_fraction.mean) << '\n';
  return kExitSuccess;
}

inline int run_verify(const CommandRequest& r, std::ostream& out) {
  const auto results = run_verification(r.flag("fast"));
  std::size_t width = 0;
  for (const auto& c : results) {
    width = std::max(width, c.name.size());
  }
  bool all = true;
  for (const auto& c : results) {
    out << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << c.name << "  "
        << c.detail << '\n';
    all = all && c.passed;
  }
  out << (all ? "all checks passed" : "verification FAILED") << '\n';
  return all ? kExitSuccess : kExitFailure;
}

}  // namespace detail

inline int execute(const CommandRequest& request, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!request.output_path.empty()) {
    file.open(request.output_path);
    if (!file) {
      err << "error: cannot open " << request.output_path << " for writing\n";
      return kExitFailure;
    }
    sink = &file;
  }
  try {
    const auto& cmd = request.subcommand;
    if (cmd == "count") return detail::run_count(request, *sink);
    if (cmd == "identity") return detail::run_identity(request, *sink);
    if (cmd == "geometry") return detail::run_geometry(request, *sink);
    if (cmd == "analyze") return detail::run_analyze(request, *sink);
    if (cmd == "overlap") return detail::run_overlap(request, *sink);
    if (cmd == "simulate") return detail::run_simulate(request, *sink, err);
    if (cmd == "verify") return detail::run_verify(request, *sink);
    err << "error: unknown subcommand " << cmd << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << request.subcommand << ": " << e.what() << '\n';
    return kExitFailure;
  }
}

/// Full entry point: parse, execute, map every outcome to 0/1/2.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CommandRequest request;
  try {
    request = parse_arguments(argv);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitSuccess;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << e.usage();
    return kExitUsage;
  }
  return execute(request, out, err);
}

}  // namespace polylab::cli
