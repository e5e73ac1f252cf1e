#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "urbanmix/error.hpp"

namespace urbanmix::stats {

// ---------------------------------------------------------------------------
// Special functions

namespace detail {

/// ln Gamma(z) - ln Gamma(z + d) for z >= 30 via Stirling's series, without
/// the cancellation of subtracting two large lgamma values.
inline double lgamma_difference(double z, double d) {
  auto correction = [](double x) {
    const double x2 = x * x;
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * x2)) / x2) / x2) / x2) / x;
  };
  const double zd = z + d;
  return -(z - 0.5) * std::log1p(d / z) - d * std::log(zd) + d + correction(z) - correction(zd);
}

}  // namespace detail

/// ln B(a, b).
inline double log_beta(double a, double b) {
  const double big = std::max(a, b);
  const double small = std::min(a, b);
  if (big >= 30.0) return std::lgamma(small) + detail::lgamma_difference(big, small);
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

/// Continued fraction for I_x(a, b) (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 100000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw Error("incomplete beta continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b). `one_minus_x` lets callers pass
/// 1 - x without cancellation.
inline double incomplete_beta(double a, double b, double x, double one_minus_x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("incomplete beta needs a, b > 0");
  if (x < 0.0 || x > 1.0) throw ValidationError("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (one_minus_x == 0.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log(one_minus_x) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * detail::beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * detail::beta_continued_fraction(b, a, one_minus_x) / b;
}

inline double incomplete_beta(double a, double b, double x) { return incomplete_beta(a, b, x, 1.0 - x); }

/// Two-sided tail probability P(|T| >= |t|) of Student's t with `dof`
/// degrees of freedom.
inline double student_t_two_sided(double t, double dof) {
  if (!(dof > 0.0)) throw ValidationError("Student t needs positive degrees of freedom");
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  return incomplete_beta(0.5 * dof, 0.5, dof / (dof + t2), t2 / (dof + t2));
}

// ---------------------------------------------------------------------------
// Two-sample tests

enum class Variance { welch, pooled };

struct TestResult {
  bool testable = false;  // false when a sample is too small or both are constant
  double t_stat = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  bool reject = false;  // set by multiple-testing correction
};

struct SampleMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
};

inline SampleMoments moments(std::span<const double> x) {
  SampleMoments m;
  m.n = x.size();
  if (x.empty()) return m;
  m.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m.n);
  if (m.n < 2) return m;
  double ss = 0.0;
  double comp = 0.0;
  for (double v : x) {
    ss += (v - m.mean) * (v - m.mean);
    comp += v - m.mean;
  }
  m.variance = (ss - comp * comp / static_cast<double>(m.n)) / static_cast<double>(m.n - 1);
  return m;
}

/// Two-sample t-test with two-sided p-value. Welch's unequal-variance form by
/// default; samples with fewer than two values, or two constant samples,
/// give an untestable result with p = 1.
inline TestResult two_sample_t_test(std::span<const double> a, std::span<const double> b,
                                    Variance variance = Variance::welch) {
  TestResult r;
  if (a.size() < 2 || b.size() < 2) return r;
  const auto ma = moments(a);
  const auto mb = moments(b);
  if (ma.variance == 0.0 && mb.variance == 0.0) return r;
  const double na = static_cast<double>(ma.n);
  const double nb = static_cast<double>(mb.n);
  double se2 = 0.0;
  if (variance == Variance::welch) {
    const double qa = ma.variance / na;
    const double qb = mb.variance / nb;
    se2 = qa + qb;
    r.dof = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  } else {
    const double sp2 = ((na - 1.0) * ma.variance + (nb - 1.0) * mb.variance) / (na + nb - 2.0);
    se2 = sp2 * (1.0 / na + 1.0 / nb);
    r.dof = na + nb - 2.0;
  }
  r.testable = true;
  r.t_stat = (ma.mean - mb.mean) / std::sqrt(se2);
  r.p_value = student_t_two_sided(r.t_stat, r.dof);
  return r;
}

inline TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  return two_sample_t_test(a, b, Variance::welch);
}

/// Copies the finite values of a sample (drops NaN placeholders).
inline std::vector<double> finite_values(std::span<const double> x) {
  std::vector<double> out;
  out.reserve(x.size());
  for (double v : x) {
    if (std::isfinite(v)) out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Multiple testing

/// Holm's step-down procedure. Sorted ascending, p_(k) is rejected while
/// p_(k) <= alpha / (m - k + 1); the first failure stops the procedure.
/// Flags are returned in input order.
inline std::vector<bool> holm_bonferroni(std::span<const double> p_values, double alpha = 0.05) {
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p-value outside [0, 1]");
  }
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return p_values[i] < p_values[j]; });
  std::vector<bool> reject(m, false);
  for (std::size_t k = 0; k < m; ++k) {
    if (p_values[order[k]] > alpha / static_cast<double>(m - k)) break;
    reject[order[k]] = true;
  }
  return reject;
}

/// Applies Holm's correction to a family of test results in place.
/// Untestable results enter the family with p = 1.
inline void apply_holm(std::span<TestResult> family, double alpha = 0.05) {
  std::vector<double> p(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) p[i] = family[i].testable ? family[i].p_value : 1.0;
  const auto flags = holm_bonferroni(p, alpha);
  for (std::size_t i = 0; i < family.size(); ++i) family[i].reject = flags[i];
}

}  // namespace urbanmix::stats
