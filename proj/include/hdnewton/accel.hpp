#pragma once

// Higher-order Newton iteration driven by finite-difference estimates of the
// inverse-power sums mom_m(x) = sum_i 1/(x - lambda_i)^m.
//
// With roots in [0, 1/2] and x^0 = 1, each step moves
//   x <- x - round_down( g_{k-1}(x) / (4 n^{1/k} g_k(x)), eps'/n )
// where g_m estimates mom_m from oracle values only. The distance to the
// largest root shrinks by a factor (1 - 1/(16 n^{1/k})) per step, so the
// oracle is queried O(k n^{1/k} log(1/eps)) times.

#include <hdnewton/oracle.hpp>
#include <hdnewton/scalar.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdnewton {

/// Parameter bundle of the accelerated iteration. All values exact.
struct AccelConfig {
  std::size_t n = 0;
  std::size_t k = 0;
  Rational eps;
  Rational eps_prime;  ///< stop threshold eps / (8 nroot_k)
  Rational delta;      ///< finite-difference step
  Rational delta_prime;  ///< delta^(k+1), the error budget of g_1
  Rational alpha;      ///< innermost difference step
  Rational nroot_k;    ///< rational upper bound on n^(1/k)
  std::uint64_t max_iters = 0;

  Rational grid() const { return eps_prime / n; }
};

/// Builds the schedule for degree n, target eps in (0, 1/2] and depth k.
///
/// eps' = eps / (8 r) with r >= n^(1/k); delta is the largest power of two
/// <= eps' / (16 (136/25)^k k); delta' = delta^(k+1); alpha is the largest
/// power of two <= delta' eps'^2 / (2 n^2); max_iters = ceil(16 r ceil(log2(1/eps))).
/// Powers of two keep every query point dyadic when x is.
inline AccelConfig make_config(std::size_t n, const Rational& eps, std::size_t k) {
  if (n < 1) throw std::invalid_argument("make_config: degree must be >= 1");
  if (k < 1 || k > n) throw std::invalid_argument("make_config: need 1 <= k <= n");
  if (sgn(eps) <= 0 || eps > Rational(1, 2)) throw std::invalid_argument("make_config: eps must lie in (0, 1/2]");
  AccelConfig c;
  c.n = n;
  c.k = k;
  c.eps = eps;
  c.nroot_k = nth_root_upper_bound(n, k);
  c.eps_prime = eps / (8 * c.nroot_k);
  c.delta = pow2_floor(c.eps_prime / (16 * rpow(two_e_upper_bound(), k) * k));
  c.delta_prime = rpow(c.delta, k + 1);
  c.alpha = pow2_floor(c.delta_prime * c.eps_prime * c.eps_prime / (2 * n * n));
  const Rational iters = 16 * c.nroot_k * ceil_log2(1 / eps);
  c.max_iters = ceil_of(iters).get_ui();
  return c;
}

/// max(1, ceil(log2 n)).
inline std::size_t choose_k(std::size_t n) {
  if (n < 1) throw std::invalid_argument("choose_k: n must be >= 1");
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return std::max<std::size_t>(1, k);
}

/// Signals p(point) == 0 at an estimator evaluation point.
struct ExactRootFound : std::domain_error {
  explicit ExactRootFound(Rational at)
      : std::domain_error("oracle vanished at " + to_string(at)), point(std::move(at)) {}
  Rational point;
};

inline Integer binomial(unsigned long m, unsigned long j) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), m, j);
  return r;
}

inline Integer factorial(unsigned long m) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), m);
  return r;
}

/// g_1(x) = (p(x + alpha) - p(x)) / (alpha p(x)), an upper estimate of
/// p'(x)/p(x). Two queries.
inline Rational g1_tilde(const PolynomialOracle& p, const Rational& x, const Rational& alpha) {
  if (sgn(alpha) <= 0) throw std::invalid_argument("g1_tilde: alpha must be positive");
  const Rational px = p(x);
  if (sgn(px) == 0) throw ExactRootFound(x);
  const Rational pxa = p(x + alpha);
  return (pxa - px) / (alpha * px);
}

/// Estimate of mom_order(x): order 0 is the degree n (no queries); order
/// m + 1 is the m-th forward difference of g_1 with step delta,
///   (1 / (m! delta^m)) sum_j (-1)^j C(m, j) g_1(x + j delta),
/// costing 2(m + 1) queries.
inline Rational g_tilde(const PolynomialOracle& p, const Rational& x, std::size_t order, const Rational& delta,
                        const Rational& alpha) {
  if (order == 0) return Rational(p.degree());
  if (sgn(delta) <= 0) throw std::invalid_argument("g_tilde: delta must be positive");
  const std::size_t m = order - 1;
  Rational sum = 0;
  for (std::size_t j = 0; j <= m; ++j) {
    Rational term = Rational(binomial(m, j)) * g1_tilde(p, x + j * delta, alpha);
    if (j % 2 == 0)
      sum += term;
    else
      sum -= term;
  }
  return sum / (Rational(factorial(m)) * rpow(delta, m));
}

/// g_{m+1}(x), the estimate built from m-th differences.
inline Rational gk_tilde(const PolynomialOracle& p, const Rational& x, std::size_t m, const Rational& delta,
                         const Rational& alpha) {
  return g_tilde(p, x, m + 1, delta, alpha);
}

/// sum_i 1/(x - roots[i])^m for x above every root. Reference values for tests.
inline Rational mom_exact(const std::vector<Rational>& roots, const Rational& x, std::size_t m) {
  Rational s = 0;
  for (const auto& r : roots) {
    if (x <= r) throw std::invalid_argument("mom_exact: x must exceed every root");
    s += 1 / rpow(x - r, m);
  }
  return s;
}

/// sum_{i=0}^{k} (-1)^i C(k, i) i^j, with 0^0 = 1.
inline Integer sj_sum(unsigned long k, unsigned long j) {
  Integer s = 0;
  for (unsigned long i = 0; i <= k; ++i) {
    Integer term = binomial(k, i) * ipow(Integer(i), j);
    if (i % 2 == 0)
      s += term;
    else
      s -= term;
  }
  return s;
}

enum class StopReason { threshold, exact_root, iteration_cap };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::threshold: return "threshold";
    case StopReason::exact_root: return "exact_root";
    case StopReason::iteration_cap: return "iteration_cap";
  }
  return "?";
}

struct TraceStep {
  std::uint64_t t = 0;
  Rational x;
  /// Exact update, unreduced; absent when the caller turned recording off.
  std::optional<Fraction> u;
  /// Rounded update actually applied; absent on the stopping step.
  std::optional<Rational> u_rounded;
  bool stopped = false;
  std::uint64_t queries_cumulative = 0;
  std::uint64_t max_query_bits = 0;
};

struct IterationTrace {
  std::vector<TraceStep> steps;
  Rational final;
  StopReason reason = StopReason::iteration_cap;
  QueryStats queries;
  std::uint64_t iterations = 0;
};

struct AccelOptions {
  /// Keep the exact update u^t of every step. These can reach megabits
  /// for large n, so sweeps switch it off; the step itself is then decided
  /// in fixed point where that is provably the same decision.
  bool record_updates = true;
};

struct AccelResult {
  Rational lambda;
  AccelConfig config;
  IterationTrace trace;
};

namespace detail {

// g_1 at one point from its two oracle values, left unreduced.
inline Fraction g1_fraction(const Rational& px, const Rational& pxa, const Rational& alpha) {
  const Rational diff = pxa - px;
  Fraction f(diff.get_num() * px.get_den() * alpha.get_den(), diff.get_den() * px.get_num() * alpha.get_num());
  f.strip_twos();
  return f;
}

// u = (1/(4 r)) g_{k-1} / g_k from g_1 at x, x + delta, ..., x + (k-1) delta.
// Both differences share the common denominator D = prod den(f_j), which
// cancels in the ratio, so nothing is ever gcd-reduced.
inline Fraction update_from_g1(const std::vector<Fraction>& f, const AccelConfig& c) {
  const std::size_t k = c.k;
  const Rational& r = c.nroot_k;
  if (k == 1) {
    // g_0 = n
    if (f[0].sign() == 0) throw std::domain_error("accel: g_1 vanished; oracle breaks the normalization promise");
    return Fraction(Integer(c.n) * f[0].den() * r.get_den(), 4 * r.get_num() * f[0].num());
  }
  Integer lower = 0;  // numerator of g_{k-1} over D
  Integer upper = 0;  // numerator of g_k over D
  Integer den = 1;
  for (std::size_t j = 0; j < k; ++j) {
    const Integer scaled = f[j].num() * den;
    lower *= f[j].den();
    upper *= f[j].den();
    const Integer c_upper = binomial(k - 1, j);
    if (j % 2 == 0)
      upper += c_upper * scaled;
    else
      upper -= c_upper * scaled;
    if (j + 2 <= k) {
      const Integer c_lower = binomial(k - 2, j);
      if (j % 2 == 0)
        lower += c_lower * scaled;
      else
        lower -= c_lower * scaled;
    }
    den *= f[j].den();
  }
  if (upper == 0) throw std::domain_error("accel: g_k vanished; oracle breaks the normalization promise");
  // g_{k-1}/g_k = (k-1) delta lower/upper
  const Rational& d = c.delta;
  Fraction u(lower * Integer(k - 1) * d.get_num() * r.get_den(), 4 * upper * d.get_den() * r.get_num());
  u.strip_twos();
  return u;
}

struct StepDecision {
  bool stop = false;
  Integer cells;  ///< floor(u / grid) when not stopping
};

// The same decision as the exact path (stop iff u <= eps', else
// floor(u / grid)), computed from floor(2^bits f_j). Each floor is off by
// less than 1, so the two differences are known to within the sum of their
// binomial weights; if that interval does not settle the decision we return
// nothing and the caller falls back to exact arithmetic. k >= 2.
inline std::optional<StepDecision> decide_step_fixed(const std::vector<Fraction>& f, const AccelConfig& c,
                                                     std::size_t bits) {
  const std::size_t k = c.k;
  Integer lower = 0;
  Integer upper = 0;
  for (std::size_t j = 0; j < k; ++j) {
    Integer num = f[j].num() << bits;
    Integer den = f[j].den();
    if (sgn(den) < 0) {
      num = -num;
      den = -den;
    }
    Integer fixed;
    mpz_fdiv_q(fixed.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const Integer cu = binomial(k - 1, j);
    upper += j % 2 == 0 ? Integer(cu * fixed) : Integer(-cu * fixed);
    if (j + 2 <= k) {
      const Integer cl = binomial(k - 2, j);
      lower += j % 2 == 0 ? Integer(cl * fixed) : Integer(-cl * fixed);
    }
  }
  const Integer slack_lower = pow2(k - 2);
  const Integer slack_upper = pow2(k - 1);
  const Integer upper_lo = upper - slack_upper;
  const Integer upper_hi = upper + slack_upper;
  if (sgn(upper_lo) <= 0) return std::nullopt;
  const Integer lower_lo = lower - slack_lower;
  const Integer lower_hi = lower + slack_lower;
  const Rational scale = Rational(Integer(k - 1)) * c.delta / (4 * c.nroot_k);
  const Rational u_min = scale * ratio(lower_lo, sgn(lower_lo) >= 0 ? upper_hi : upper_lo);
  const Rational u_max = scale * ratio(lower_hi, sgn(lower_hi) >= 0 ? upper_lo : upper_hi);
  const bool stop = u_max <= c.eps_prime;
  if (stop != (u_min <= c.eps_prime)) return std::nullopt;
  if (stop) return StepDecision{true, Integer(0)};
  const Rational grid = c.grid();
  Integer cells = floor_of(u_min / grid);
  if (cells != floor_of(u_max / grid)) return std::nullopt;
  return StepDecision{false, std::move(cells)};
}

}  // namespace detail

/// Largest root of p, whose roots must lie in [0, 1/2], to within eps:
/// returns lambda with lambda1 <= lambda <= lambda1 + eps.
inline AccelResult accel_root(const PolynomialOracle& p, const Rational& eps, std::size_t k,
                              const AccelOptions& options = {}) {
  AccelResult result;
  result.config = make_config(p.degree(), eps, k);
  const AccelConfig& c = result.config;
  auto [q, log] = with_counter(p);
  IterationTrace& trace = result.trace;
  const Rational grid = c.grid();
  const Fraction grid_frac(grid);
  // Differences of order k-1 with step delta cancel about k log2(1/delta) bits.
  const std::size_t fixed_bits = 128 + 2 * k * bit_length(c.delta.get_den());

  Rational x = 1;
  trace.reason = StopReason::iteration_cap;
  std::vector<Fraction> f(k);
  for (std::uint64_t t = 0; t < c.max_iters; ++t) {
    ++trace.iterations;
    TraceStep step;
    step.t = t;
    step.x = x;
    bool hit = false;
    for (std::size_t j = 0; j < k && !hit; ++j) {
      const Rational y = x + j * c.delta;
      const Rational py = q(y);
      if (sgn(py) == 0) {
        // y >= x >= lambda1 and p(y) = 0 force y = x = lambda1.
        x = std::min(x, y);
        hit = true;
        break;
      }
      f[j] = detail::g1_fraction(py, q(y + c.alpha), c.alpha);
    }
    step.queries_cumulative = log->count();
    step.max_query_bits = log->max_query_bits();
    if (hit) {
      step.stopped = true;
      trace.steps.push_back(std::move(step));
      trace.reason = StopReason::exact_root;
      break;
    }
    std::optional<detail::StepDecision> decision;
    if (!options.record_updates && k >= 2) {
      for (std::size_t bits = fixed_bits; !decision && bits <= 8 * fixed_bits; bits *= 2)
        decision = detail::decide_step_fixed(f, c, bits);
    }
    if (!decision) {
      Fraction u = detail::update_from_g1(f, c);
      decision = detail::StepDecision{compare(u, c.eps_prime) <= 0, Integer(0)};
      if (!decision->stop) decision->cells = (u / grid_frac).floor();
      if (options.record_updates) step.u = std::move(u);
    }
    const bool stop = decision->stop;
    if (!stop) {
      step.u_rounded = Rational(decision->cells) * grid;
      x -= *step.u_rounded;
    }
    step.stopped = stop;
    trace.steps.push_back(std::move(step));
    if (stop) {
      trace.reason = StopReason::threshold;
      break;
    }
  }
  trace.final = x;
  trace.queries = log->stats();
  result.lambda = x;
  return result;
}

/// CSV with columns t,x,u,u_rounded,queries_cumulative,max_query_bits.
/// Unrecorded or unapplied values are left empty.
inline void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
  out << "t,x,u,u_rounded,queries_cumulative,max_query_bits\n";
  for (const auto& s : trace.steps) {
    out << s.t << ',' << to_string(s.x) << ',' << (s.u ? to_string(s.u->canonical()) : std::string{}) << ','
        << (s.u_rounded ? to_string(*s.u_rounded) : std::string{}) << ',' << s.queries_cumulative << ','
        << s.max_query_bits << '\n';
  }
}

}  // namespace hdnewton
