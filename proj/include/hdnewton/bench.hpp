#pragma once

// Query-count benchmarks: forward-difference Newton against the accelerated
// iteration on seeded instance families, plus an exact power iteration as a
// matrix comparator.

#include <hdnewton/accel.hpp>
#include <hdnewton/detpoly.hpp>
#include <hdnewton/eigen.hpp>
#include <hdnewton/newton.hpp>
#include <hdnewton/normalize.hpp>
#include <hdnewton/oracle.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace hdnewton {

/// Seeded generator with portable output (no std distributions, whose
/// results differ between standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, bound]; bound < 2^32 so the modulo bias is negligible.
  std::uint64_t below_or_equal(std::uint64_t bound) { return engine_() % (bound + 1); }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer, for deriving per-instance seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Family { random_roots, clustered_top_roots, complete_graph };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::random_roots: return "random-roots";
    case Family::clustered_top_roots: return "clustered-top-roots";
    case Family::complete_graph: return "complete-graph";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "random-roots") return Family::random_roots;
  if (s == "clustered-top-roots") return Family::clustered_top_roots;
  if (s == "complete-graph") return Family::complete_graph;
  throw std::invalid_argument("unknown instance family '" + s + "'");
}

inline constexpr std::size_t kRootDenominatorBits = 20;

/// n roots u / 2^20 with u uniform in [0, 2^19], i.e. dyadic points of [0, 1/2].
inline std::vector<Rational> random_dyadic_roots(std::size_t n, Rng& rng) {
  std::vector<Rational> roots;
  roots.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    roots.push_back(dyadic(static_cast<long>(rng.below_or_equal(1UL << (kRootDenominatorBits - 1))), kRootDenominatorBits));
  return roots;
}

/// Top root in [1/4, 1/2], second root 2^-21 below it, the rest below that.
inline std::vector<Rational> clustered_top_roots(std::size_t n, Rng& rng) {
  const std::size_t bits = kRootDenominatorBits + 1;
  const long quarter = 1L << (bits - 2);
  const long top = quarter + static_cast<long>(rng.below_or_equal(static_cast<std::uint64_t>(quarter)));
  std::vector<Rational> roots{dyadic(top, bits)};
  if (n >= 2) roots.push_back(dyadic(top - 1, bits));
  while (roots.size() < n)
    roots.push_back(dyadic(static_cast<long>(rng.below_or_equal(static_cast<std::uint64_t>(top - 1))), bits));
  return roots;
}

/// Roots of the `family` instance of degree n for sweep seed `seed`;
/// independent of eps and k.
inline std::vector<Rational> instance_roots(Family family, std::size_t n, std::uint64_t seed) {
  Rng rng(mix_seed(seed ^ mix_seed(n) ^ (static_cast<std::uint64_t>(family) << 56)));
  switch (family) {
    case Family::random_roots: return random_dyadic_roots(n, rng);
    case Family::clustered_top_roots: return clustered_top_roots(n, rng);
    case Family::complete_graph: break;
  }
  throw std::invalid_argument("instance_roots: family has no root list");
}

/// Rayleigh quotient after `iterations` steps of X <- A X from `start`.
/// Each iterate is rescaled by a power of two to max |x_i| in (1/2, 1] and
/// rounded down to multiples of 2^-precision_bits, which keeps it exact
/// and short. No accuracy guarantee; this is only a comparator.
inline Rational power_iteration_from(const SymmetricMatrix& a, std::vector<Rational> x, std::size_t iterations,
                                     unsigned precision_bits = 64) {
  const std::size_t n = a.size();
  if (x.size() != n) throw std::invalid_argument("power_iteration: start vector has the wrong length");
  const Rational grid(Integer(1), pow2(precision_bits));
  auto is_zero = [](const std::vector<Rational>& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& r) { return sgn(r) == 0; });
  };
  if (is_zero(x)) throw std::domain_error("power_iteration: zero start vector");
  for (std::size_t it = 0; it < iterations; ++it) {
    std::vector<Rational> y(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y[i] += a(i, j) * x[j];
    if (is_zero(y)) throw std::domain_error("power_iteration: iterate collapsed to zero");
    Rational top = 0;
    for (const auto& v : y) top = std::max(top, Rational(abs(v)));
    const long e = ceil_log2(top);
    const Rational scale = e >= 0 ? Rational(Integer(1), pow2(static_cast<std::size_t>(e)))
                                  : Rational(pow2(static_cast<std::size_t>(-e)));
    for (auto& v : y) v = round_down_to_grid(v * scale, grid);
    x = std::move(y);
  }
  Rational num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rational ax = 0;
    for (std::size_t j = 0; j < n; ++j) ax += a(i, j) * x[j];
    num += x[i] * ax;
    den += x[i] * x[i];
  }
  return num / den;
}

/// Power iteration from a seeded random start with entries in (-1, 1).
/// A start in the kernel of A is redrawn once.
inline Rational power_iteration(const SymmetricMatrix& a, std::size_t iterations, std::uint64_t seed,
                                unsigned precision_bits = 64) {
  Rng rng(mix_seed(seed));
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<Rational> start(a.size());
    for (auto& v : start) v = dyadic(static_cast<long>(rng.below_or_equal((1UL << 32) - 2)) - ((1L << 31) - 1), 31);
    try {
      return power_iteration_from(a, std::move(start), iterations, precision_bits);
    } catch (const std::domain_error&) {
      if (attempt == 1) throw;
    }
  }
  throw std::domain_error("power_iteration: unreachable");
}

enum class Method { classic, accel, power };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::classic: return "classic";
    case Method::accel: return "accel";
    case Method::power: return "power";
  }
  return "?";
}

struct BenchRecord {
  Family family = Family::random_roots;
  std::uint64_t seed = 0;
  Method method = Method::classic;
  std::size_t k = 0;  ///< accel only
  std::size_t n = 0;
  Rational eps;
  std::uint64_t queries = 0;  ///< oracle evaluations; matrix-vector products for power
  std::uint64_t iterations = 0;
  std::uint64_t max_query_bits = 0;
  /// estimate - lambda1 in original units; negative is possible only for power.
  std::optional<Rational> final_gap;
};

struct SweepSpec {
  Family family = Family::random_roots;
  std::vector<std::size_t> ns;
  std::vector<Rational> epss;
  /// Depths to run; std::nullopt means choose_k(n). Depths above n are skipped.
  std::vector<std::optional<std::size_t>> ks;
  std::uint64_t seed = 1;
  bool classic = true;
  /// Power-iteration steps for matrix families; 0 disables the comparator.
  std::size_t power_iterations = 64;
};

namespace detail {

struct Instance {
  PolynomialOracle oracle;  // normalized: roots in [0, 1/2]
  AffineRootMap map;        // back to original units
  Rational lambda1;         // original units
  std::optional<SymmetricMatrix> matrix;
};

inline Instance make_instance(Family family, std::size_t n, std::uint64_t seed) {
  if (family == Family::complete_graph) {
    SymmetricMatrix a = SymmetricMatrix::complete_graph(n);
    auto [b, map] = normalize_matrix(a, frobenius_upper_bound(a));
    return Instance{charpoly_oracle(b), map, Rational(static_cast<long>(n) - 1), a};
  }
  auto roots = instance_roots(family, n, seed);
  PolynomialOracle p = from_roots(roots);
  Rational top = *p.largest_root();
  // Roots already lie in [0, 1/2]: identity map.
  return Instance{std::move(p), AffineRootMap{Rational(1), Rational(0), n}, top, std::nullopt};
}

}  // namespace detail

/// Runs every (n, eps) cell of the sweep: classic Newton, the accelerated
/// iteration for each requested k, and power iteration for matrix families.
/// Deterministic given spec.seed.
inline std::vector<BenchRecord> run_sweep(const SweepSpec& spec) {
  if (spec.ns.empty()) throw std::invalid_argument("run_sweep: no degrees given");
  if (spec.epss.empty()) throw std::invalid_argument("run_sweep: no eps values given");
  std::vector<BenchRecord> out;
  for (std::size_t n : spec.ns) {
    if (n < 1) throw std::invalid_argument("run_sweep: degrees must be >= 1");
    detail::Instance inst = detail::make_instance(spec.family, n, spec.seed);
    for (const Rational& eps : spec.epss) {
      if (sgn(eps) <= 0) throw std::invalid_argument("run_sweep: eps must be positive");
      const Rational eps_local = std::min(Rational(1, 2), Rational(eps / inst.map.scale));
      BenchRecord base;
      base.family = spec.family;
      base.seed = spec.seed;
      base.n = n;
      base.eps = eps;
      if (spec.classic) {
        auto [counted, log] = with_counter(inst.oracle);
        NewtonResult r = classic_newton(counted, eps_local);
        BenchRecord rec = base;
        rec.method = Method::classic;
        rec.queries = r.queries;
        rec.iterations = r.iterations;
        rec.max_query_bits = log->max_query_bits();
        rec.final_gap = inst.map.to_original(r.root_estimate) - inst.lambda1;
        out.push_back(std::move(rec));
      }
      for (const auto& requested : spec.ks) {
        const std::size_t k = requested.value_or(choose_k(n));
        if (k < 1 || k > n) continue;
        AccelResult r = accel_root(inst.oracle, eps_local, k, AccelOptions{.record_updates = false});
        BenchRecord rec = base;
        rec.method = Method::accel;
        rec.k = k;
        rec.queries = r.trace.queries.count;
        rec.iterations = r.trace.iterations;
        rec.max_query_bits = r.trace.queries.max_query_bits;
        rec.final_gap = inst.map.to_original(r.lambda) - inst.lambda1;
        out.push_back(std::move(rec));
      }
      if (inst.matrix && spec.power_iterations > 0) {
        BenchRecord rec = base;
        rec.method = Method::power;
        rec.queries = spec.power_iterations;
        rec.iterations = spec.power_iterations;
        rec.final_gap = power_iteration(*inst.matrix, spec.power_iterations, spec.seed) - inst.lambda1;
        out.push_back(std::move(rec));
      }
    }
  }
  return out;
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "family,seed,method,k,n,eps,queries,iterations,max_query_bits,final_gap\n";
  for (const auto& r : records) {
    out << to_string(r.family) << ',' << r.seed << ',' << to_string(r.method) << ','
        << (r.method == Method::accel ? std::to_string(r.k) : std::string{}) << ',' << r.n << ','
        << to_string(r.eps) << ',' << r.queries << ',' << r.iterations << ',' << r.max_query_bits << ','
        << (r.final_gap ? to_string(*r.final_gap) : std::string{}) << '\n';
  }
}

/// Per-method totals plus whether every classic/accel gap lies in [0, eps].
inline nlohmann::ordered_json bench_summary(const SweepSpec& spec, const std::vector<BenchRecord>& records) {
  nlohmann::ordered_json j;
  j["family"] = to_string(spec.family);
  j["seed"] = spec.seed;
  j["n"] = spec.ns;
  auto& eps = j["eps"] = nlohmann::ordered_json::array();
  for (const auto& e : spec.epss) eps.push_back(to_string(e));
  auto& ks = j["k"] = nlohmann::ordered_json::array();
  for (const auto& k : spec.ks) ks.push_back(k ? std::to_string(*k) : std::string("auto"));
  j["records"] = records.size();
  bool within = true;
  std::map<std::tuple<int, std::size_t>, nlohmann::ordered_json> groups;
  for (const auto& r : records) {
    if (r.method != Method::power && r.final_gap && (sgn(*r.final_gap) < 0 || *r.final_gap > r.eps)) within = false;
    auto& g = groups[{static_cast<int>(r.method), r.k}];
    if (g.is_null()) {
      g["method"] = to_string(r.method);
      if (r.method == Method::accel) g["k"] = r.k;
      g["cells"] = 0;
      g["total_queries"] = 0;
      g["max_queries"] = 0;
    }
    g["cells"] = g["cells"].get<std::uint64_t>() + 1;
    g["total_queries"] = g["total_queries"].get<std::uint64_t>() + r.queries;
    g["max_queries"] = std::max(g["max_queries"].get<std::uint64_t>(), r.queries);
  }
  j["within_eps"] = within;
  auto& methods = j["methods"] = nlohmann::ordered_json::array();
  for (auto& [key, g] : groups) methods.push_back(std::move(g));
  return j;
}

}  // namespace hdnewton
