#pragma once

// Command-line front end: root, eig, psd and bench subcommands.
// Exit codes: 0 success (or PSD true), 1 PSD false, 2 usage or input error.

#include <hdnewton/accel.hpp>
#include <hdnewton/bench.hpp>
#include <hdnewton/eigen.hpp>
#include <hdnewton/io.hpp>
#include <hdnewton/normalize.hpp>
#include <hdnewton/oracle.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace hdnewton {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPsdFalse = 1;
inline constexpr int kExitUsage = 2;

/// Raised for bad flag values; reported with exit code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace cli_detail {

using Json = nlohmann::ordered_json;

inline Rational flag_rational(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

inline Rational positive_flag(const std::string& text, const char* flag) {
  Rational v = flag_rational(text, flag);
  if (sgn(v) <= 0) throw UsageError(std::string(flag) + " must be positive");
  return v;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  return out;
}

inline void write_trace(const std::optional<std::string>& path, const IterationTrace& trace) {
  if (!path) return;
  auto out = open_output(*path);
  write_trace_csv(out, trace);
}

// RunReport keys, always in this order.
inline Json report(const std::string& command, Json inputs, Json result, const std::optional<std::string>& decimal,
                   const IterationTrace& trace, const std::optional<std::string>& trace_path) {
  Json j;
  j["command"] = command;
  j["inputs"] = std::move(inputs);
  j["result"] = std::move(result);
  if (decimal) j["result_decimal"] = *decimal;
  j["queries"] = trace.queries.count;
  j["max_query_bits"] = trace.queries.max_query_bits;
  j["iterations"] = trace.iterations;
  j["trace_path"] = trace_path ? Json(*trace_path) : Json(nullptr);
  return j;
}

struct RootArgs {
  std::string file;
  std::string bound;
  std::string eps;
  std::optional<std::size_t> k;
  bool auto_k = false;
  std::optional<std::string> trace;
  bool decimal = false;
};

inline int cmd_root(const RootArgs& a, std::ostream& out) {
  const Rational gamma = positive_flag(a.bound, "--bound");
  const Rational eps = positive_flag(a.eps, "--eps");
  std::vector<Rational> coeffs = read_polynomial_file(a.file);
  if (sgn(coeffs.front()) == 0) throw ParseError("leading coefficient is zero");
  // Same roots, monic.
  const Rational lead = coeffs.front();
  for (auto& c : coeffs) c /= lead;
  const PolynomialOracle p = explicit_oracle(coeffs);
  const std::size_t n = p.degree();
  const std::size_t k = a.k.value_or(choose_k(n));
  if (k < 1 || k > n) throw UsageError("--k must lie in [1, " + std::to_string(n) + "]");
  auto [q, map] = normalize_poly(p, gamma);
  // Normalized distances are original ones divided by 4 gamma.
  const Rational eps_scaled = std::min(Rational(1, 2), Rational(eps / map.scale));
  AccelResult r = accel_root(q, eps_scaled, k, AccelOptions{.record_updates = a.trace.has_value()});
  const Rational root = denormalize_root(r.lambda, map);
  write_trace(a.trace, r.trace);

  Json inputs;
  inputs["file"] = a.file;
  inputs["degree"] = n;
  inputs["bound"] = to_string(gamma);
  inputs["eps"] = to_string(eps);
  inputs["eps_scaled"] = to_string(eps_scaled);
  inputs["k"] = k;
  out << report("root", std::move(inputs), to_string(root),
                a.decimal ? std::optional(to_decimal(root)) : std::nullopt, r.trace, a.trace)
             .dump(2)
      << '\n';
  return kExitOk;
}

struct EigArgs {
  std::string file;
  std::string eps;
  std::optional<std::string> trace;
  bool decimal = false;
};

inline int cmd_eig(const EigArgs& a, std::ostream& out) {
  const Rational eps = positive_flag(a.eps, "--eps");
  const SymmetricMatrix m = read_matrix_file(a.file);
  EigResult r = top_eigenvalue(m, eps, AccelOptions{.record_updates = a.trace.has_value()});
  write_trace(a.trace, r.trace);

  Json inputs;
  inputs["file"] = a.file;
  inputs["dimension"] = m.size();
  inputs["eps"] = to_string(eps);
  inputs["eps_scaled"] = to_string(r.eps_scaled);
  inputs["frobenius_bound"] = to_string(r.frobenius_bound);
  inputs["k"] = r.k;
  out << report("eig", std::move(inputs), to_string(r.lambda_max),
                a.decimal ? std::optional(to_decimal(r.lambda_max)) : std::nullopt, r.trace, a.trace)
             .dump(2)
      << '\n';
  return kExitOk;
}

struct PsdArgs {
  std::string file;
  std::string eps;
};

inline int cmd_psd(const PsdArgs& a, std::ostream& out) {
  const Rational eps = positive_flag(a.eps, "--eps");
  const SymmetricMatrix m = read_matrix_file(a.file);
  PsdDecision d = approx_psd_decision(m, eps);

  Json inputs;
  inputs["file"] = a.file;
  inputs["dimension"] = m.size();
  inputs["eps"] = to_string(eps);
  inputs["eps_scaled"] = to_string(d.negated.eps_scaled);
  out << report("psd", std::move(inputs), d.psd, std::nullopt, d.negated.trace, std::nullopt).dump(2) << '\n';
  return d.psd ? kExitOk : kExitPsdFalse;
}

struct BenchArgs {
  std::string family = "random-roots";
  std::vector<std::string> ns;
  std::vector<std::string> epss{"1/1024"};
  std::vector<std::string> ks{"auto"};
  std::uint64_t seed = 1;
  std::size_t power_iterations = 64;
  bool no_classic = false;
  std::optional<std::string> out;
  std::optional<std::string> summary;
};

inline std::vector<std::string> nonempty(const std::vector<std::string>& v) {
  std::vector<std::string> r;
  for (const auto& s : v)
    if (!s.empty()) r.push_back(s);
  return r;
}

inline int cmd_bench(const BenchArgs& a, std::ostream& out) {
  SweepSpec spec;
  try {
    spec.family = parse_family(a.family);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  for (const auto& s : nonempty(a.ns)) {
    const Rational v = flag_rational(s, "--n");
    if (v.get_den() != 1 || sgn(v) <= 0) throw UsageError("--n values must be positive integers");
    spec.ns.push_back(v.get_num().get_ui());
  }
  if (spec.ns.empty()) throw UsageError("--n needs at least one degree");
  for (const auto& s : nonempty(a.epss)) {
    const Rational e = positive_flag(s, "--eps");
    spec.epss.push_back(e);
  }
  if (spec.epss.empty()) throw UsageError("--eps needs at least one value");
  for (const auto& s : nonempty(a.ks)) {
    if (s == "auto") {
      spec.ks.push_back(std::nullopt);
      continue;
    }
    const Rational v = flag_rational(s, "--k");
    if (v.get_den() != 1 || sgn(v) <= 0) throw UsageError("--k values must be positive integers or 'auto'");
    spec.ks.push_back(v.get_num().get_ui());
  }
  spec.seed = a.seed;
  spec.classic = !a.no_classic;
  spec.power_iterations = a.power_iterations;

  const auto records = run_sweep(spec);
  const auto summary = bench_summary(spec, records);
  if (a.out) {
    auto csv = open_output(*a.out);
    write_bench_csv(csv, records);
  } else {
    write_bench_csv(out, records);
  }
  if (a.summary) {
    auto js = open_output(*a.summary);
    js << summary.dump(2) << '\n';
  } else if (a.out) {
    out << summary.dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace cli_detail

/// Entry point of the hdnewton binary; never throws.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"Largest root of a real-rooted polynomial from evaluations only, and top eigenvalues of "
               "symmetric rational matrices."};
  app.name("hdnewton");
  app.require_subcommand(1);

  RootArgs root;
  auto* root_cmd = app.add_subcommand("root", "largest root of the polynomial in a coefficient file");
  root_cmd->add_option("poly_file", root.file, "one coefficient per line, highest degree first")->required();
  root_cmd->add_option("--bound", root.bound, "upper bound on |root|, as p/q")->required();
  root_cmd->add_option("--eps", root.eps, "additive accuracy in original units, as p/q")->required();
  auto* k_opt = root_cmd->add_option("--k", root.k, "derivative depth, 1 <= k <= degree");
  root_cmd->add_flag("--auto-k", root.auto_k, "k = max(1, ceil(log2 n)) (default)")->excludes(k_opt);
  root_cmd->add_option("--trace", root.trace, "write the per-step trace CSV here");
  root_cmd->add_flag("--decimal", root.decimal, "also print a 20-digit decimal rendering");

  EigArgs eig;
  auto* eig_cmd = app.add_subcommand("eig", "largest eigenvalue of a symmetric matrix file");
  eig_cmd->add_option("matrix_file", eig.file, "n, then n rows of n rationals")->required();
  eig_cmd->add_option("--eps", eig.eps, "additive accuracy, as p/q")->required();
  eig_cmd->add_option("--trace", eig.trace, "write the per-step trace CSV here");
  eig_cmd->add_flag("--decimal", eig.decimal, "also print a 20-digit decimal rendering");

  PsdArgs psd;
  auto* psd_cmd = app.add_subcommand("psd", "decide A >= -eps I (promise gap eps/2); exit 1 when false");
  psd_cmd->add_option("matrix_file", psd.file, "n, then n rows of n rationals")->required();
  psd_cmd->add_option("--eps", psd.eps, "tolerance, as p/q")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "query-count sweep, classic against accelerated");
  bench_cmd->add_option("--family", bench.family, "random-roots, clustered-top-roots or complete-graph")
      ->capture_default_str();
  bench_cmd->add_option("--n", bench.ns, "degrees, comma separated")->required()->delimiter(',');
  bench_cmd->add_option("--eps", bench.epss, "accuracies, comma separated")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--k", bench.ks, "depths or 'auto', comma separated")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "instance seed")->capture_default_str();
  bench_cmd->add_option("--power-iterations", bench.power_iterations, "power iteration steps for matrix families")
      ->capture_default_str();
  bench_cmd->add_flag("--no-classic", bench.no_classic, "skip the forward-difference Newton baseline");
  bench_cmd->add_option("--out", bench.out, "CSV path (default: standard output)");
  bench_cmd->add_option("--summary", bench.summary, "JSON summary path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*root_cmd) return cmd_root(root, out);
    if (*eig_cmd) return cmd_eig(eig, out);
    if (*psd_cmd) return cmd_psd(psd, out);
    if (*bench_cmd) return cmd_bench(bench, out);
  } catch (const std::exception& e) {
    err << "hdnewton: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hdnewton
