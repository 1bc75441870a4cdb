#pragma once

// Black-box polynomial oracles: exact evaluation at rational points plus
// query accounting.

#include <hdnewton/scalar.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hdnewton {

/// Handle on a monic real-rooted polynomial that can only be evaluated.
/// Immutable; evaluation is a pure function of the point.
class PolynomialOracle {
 public:
  using EvalFn = std::function<Rational(const Rational&)>;

  PolynomialOracle(std::size_t degree, EvalFn eval, std::optional<Rational> largest_root = std::nullopt)
      : degree_(degree), eval_(std::move(eval)), largest_root_(std::move(largest_root)) {
    if (degree_ < 1) throw std::invalid_argument("PolynomialOracle: degree must be >= 1");
    if (!eval_) throw std::invalid_argument("PolynomialOracle: empty evaluation function");
  }

  std::size_t degree() const { return degree_; }
  Rational operator()(const Rational& x) const { return eval_(x); }

  /// Ground-truth largest root, when the instance was built from known roots.
  const std::optional<Rational>& largest_root() const { return largest_root_; }

 private:
  std::size_t degree_;
  EvalFn eval_;
  std::optional<Rational> largest_root_;
};

struct QueryStats {
  std::uint64_t count = 0;
  std::uint64_t max_query_bits = 0;
};

/// Query counter shared between a wrapped oracle and its owner.
/// count and max_query_bits only grow, so relaxed atomics are enough.
class QueryLog {
 public:
  explicit QueryLog(bool keep_points = false) : keep_points_(keep_points) {}

  void record(const Rational& x) {
    count_.fetch_add(1, std::memory_order_relaxed);
    const auto bits = static_cast<std::uint64_t>(bit_size(x));
    auto seen = max_bits_.load(std::memory_order_relaxed);
    while (bits > seen && !max_bits_.compare_exchange_weak(seen, bits, std::memory_order_relaxed)) {
    }
    if (keep_points_) {
      std::lock_guard lock(mutex_);
      points_.push_back(x);
    }
  }

  std::uint64_t count() const { return count_.load(std::memory_order_relaxed); }
  std::uint64_t max_query_bits() const { return max_bits_.load(std::memory_order_relaxed); }
  QueryStats stats() const { return {count(), max_query_bits()}; }

  std::vector<Rational> points() const {
    std::lock_guard lock(mutex_);
    return points_;
  }

 private:
  std::atomic<std::uint64_t> count_{0};
  std::atomic<std::uint64_t> max_bits_{0};
  bool keep_points_;
  mutable std::mutex mutex_;
  std::vector<Rational> points_;
};

/// Wraps `oracle` so that every evaluation is recorded in the returned log.
inline std::pair<PolynomialOracle, std::shared_ptr<QueryLog>> with_counter(const PolynomialOracle& oracle,
                                                                          bool keep_points = false) {
  auto log = std::make_shared<QueryLog>(keep_points);
  PolynomialOracle wrapped(
      oracle.degree(),
      [inner = oracle, log](const Rational& x) {
        log->record(x);
        return inner(x);
      },
      oracle.largest_root());
  return {std::move(wrapped), std::move(log)};
}

namespace detail {

inline Integer product(std::vector<Integer>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return product(v, lo, mid) * product(v, mid, hi);
}

// num/den in lowest terms. Power-of-two denominators (every dyadic query
// point gives one) only need a shift instead of a full gcd.
inline Rational reduced(Integer num, Integer den) {
  if (sgn(den) > 0 && mpz_popcount(den.get_mpz_t()) == 1) {
    if (sgn(num) == 0) return Rational(0);
    const auto shift = std::min(mpz_scan1(num.get_mpz_t(), 0), mpz_scan1(den.get_mpz_t(), 0));
    num >>= shift;
    den >>= shift;
    Rational r;
    r.get_num() = std::move(num);
    r.get_den() = std::move(den);
    return r;
  }
  Rational r(std::move(num), std::move(den));
  r.canonicalize();
  return r;
}

// a^e with results kept for reuse within one evaluation.
class PowerCache {
 public:
  explicit PowerCache(const Integer& base) : base_(base) {}
  const Integer& operator()(std::size_t e) {
    auto it = cache_.find(e);
    if (it != cache_.end()) return it->second;
    Integer v;
    mpz_pow_ui(v.get_mpz_t(), base_.get_mpz_t(), e);
    return cache_.emplace(e, std::move(v)).first->second;
  }

 private:
  const Integer& base_;
  std::map<std::size_t, Integer> cache_;
};

// sum_{j=lo}^{hi} c_j a^(hi-j) b^(j-lo), split in halves so that the big
// multiplications are balanced.
inline Integer homogeneous(const std::vector<Integer>& c, std::size_t lo, std::size_t hi, PowerCache& pa,
                           PowerCache& pb) {
  if (lo == hi) return c[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return homogeneous(c, lo, mid, pa, pb) * pa(hi - mid) + homogeneous(c, mid + 1, hi, pa, pb) * pb(mid + 1 - lo);
}

}  // namespace detail

/// Oracle for the monic polynomial with the given coefficients, highest
/// degree first (the leading one must be 1). Evaluates the homogenized
/// polynomial in integer arithmetic, then reduces once.
inline PolynomialOracle explicit_oracle(const std::vector<Rational>& coefficients) {
  if (coefficients.size() < 2) throw std::invalid_argument("explicit_oracle: need degree >= 1");
  if (coefficients.front() != 1) throw std::invalid_argument("explicit_oracle: polynomial must be monic");
  Integer common = 1;
  for (const auto& c : coefficients) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), c.get_den_mpz_t());
  auto scaled = std::make_shared<std::vector<Integer>>();
  scaled->reserve(coefficients.size());
  for (const auto& c : coefficients) scaled->push_back(c.get_num() * (common / c.get_den()));
  const std::size_t n = coefficients.size() - 1;
  return PolynomialOracle(n, [scaled, common, n](const Rational& x) {
    // b^n p(a/b) = sum_j c_j a^(n-j) b^j
    detail::PowerCache pa(x.get_num());
    detail::PowerCache pb(x.get_den());
    Integer value = detail::homogeneous(*scaled, 0, n, pa, pb);
    return detail::reduced(std::move(value), common * pb(n));
  });
}

/// Oracle for prod_i (x - roots[i]); remembers the largest root.
inline PolynomialOracle from_roots(const std::vector<Rational>& roots) {
  if (roots.empty()) throw std::invalid_argument("from_roots: need at least one root");
  auto nums = std::make_shared<std::vector<Integer>>();
  auto dens = std::make_shared<std::vector<Integer>>();
  Integer den_product = 1;
  for (const auto& r : roots) {
    nums->push_back(r.get_num());
    dens->push_back(r.get_den());
    den_product *= r.get_den();
  }
  const std::size_t n = roots.size();
  Rational top = *std::max_element(roots.begin(), roots.end());
  return PolynomialOracle(
      n,
      [nums, dens, den_product, n](const Rational& x) {
        const Integer& a = x.get_num();
        const Integer& b = x.get_den();
        std::vector<Integer> factors(n);
        for (std::size_t i = 0; i < n; ++i) factors[i] = a * (*dens)[i] - b * (*nums)[i];
        return detail::reduced(detail::product(factors, 0, n), ipow(b, n) * den_product);
      },
      top);
}

/// Coefficients (highest degree first) of prod_i (x - roots[i]).
inline std::vector<Rational> expand_roots(const std::vector<Rational>& roots) {
  // Integer convolution of prod_i (d_i x - c_i), then one division by prod d_i.
  std::vector<Integer> poly{1};
  Integer den_product = 1;
  for (const auto& r : roots) {
    const Integer& c = r.get_num();
    const Integer& d = r.get_den();
    std::vector<Integer> next(poly.size() + 1, 0);
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j] += poly[j] * d;
      next[j + 1] -= poly[j] * c;
    }
    poly = std::move(next);
    den_product *= d;
  }
  std::vector<Rational> out;
  out.reserve(poly.size());
  for (auto& c : poly) {
    Rational q(c, den_product);
    q.canonicalize();
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace hdnewton
