#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "fracstab/detail/gauss_kronrod.hpp"
#include "fracstab/errors.hpp"

namespace fracstab::mlf {

struct MLEvalPolicy {
  double target_rel_accuracy = 1e-12;
  double series_radius = 5.0;
  double asymptotic_threshold = 50.0;
  int max_terms = 500;
};

namespace detail {

inline constexpr long double kPi = std::numbers::pi_v<long double>;

inline long double sinpi_l(long double x) {
  long double r = std::remainder(x, 2.0L);  // r in [-1, 1]
  const long double a = std::fabs(r);
  const long double s = std::sin(kPi * (a <= 0.5L ? a : 1.0L - a));
  return r < 0 ? -s : s;
}

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients,
// relative error ~1e-15 for positive arguments).
inline constexpr long double kLanczosG = 607.0L / 128.0L;
inline constexpr long double kLanczosC[15] = {
    0.99999999999999709182L,    57.156235665862923517L,
    -59.597960355475491248L,    14.136097974741747174L,
    -0.49191381609762019978L,   3.3994649984811888699e-5L,
    4.6523628927048575665e-5L,  -9.8374475304879564677e-5L,
    1.5808870322491248884e-4L,  -2.1026444172410488319e-4L,
    2.1743961811521264320e-4L,  -1.6431810653676389022e-4L,
    8.4418223983852743293e-5L,  -2.6190838401581408670e-5L,
    3.6899182659531622704e-6L};

/// log Gamma(x) for x > 0 via the Lanczos series.
inline long double lgamma_lanczos_l(long double x) {
  if (x < 0.5L) return lgamma_lanczos_l(x + 1.0L) - std::log(x);
  const long double z = x - 1.0L;
  const long double t = z + kLanczosG + 0.5L;
  long double s = kLanczosC[0];
  for (int i = 1; i < 15; ++i) s += kLanczosC[i] / (z + i);
  return 0.5L * std::log(2.0L * kPi) + (z + 0.5L) * std::log(t) - t +
         std::log(s);
}

/// log Gamma(x) for x > 0.  Series terms are formed from these logs, so full
/// long double accuracy matters; defer to the library implementation.
inline long double lgamma_pos_l(long double x) { return std::lgamma(x); }

/// log|1/Gamma(y)| with sign; sign = 0 at poles (where 1/Gamma = 0).
inline long double log_abs_rgamma(long double y, int& sign) {
  if (y >= 0.5L) {
    sign = 1;
    return -lgamma_pos_l(y);
  }
  const long double s = sinpi_l(y);
  if (s == 0.0L) {
    sign = 0;
    return -std::numeric_limits<long double>::infinity();
  }
  sign = s > 0 ? 1 : -1;
  return std::log(std::fabs(s)) + lgamma_pos_l(1.0L - y) - std::log(kPi);
}

/// 1/Gamma(y), zero at the poles.
inline double rgamma(double y) {
  int sg;
  const long double lr = log_abs_rgamma(y, sg);
  return sg == 0 ? 0.0 : static_cast<double>(sg * std::exp(lr));
}

/// Power series sum_{k>=0} z^k / Gamma(qk + beta), Kahan-compensated in long
/// double.  Fails (ok=false) when max_terms is exhausted or alternating-series
/// cancellation exceeds what long double can absorb at the requested accuracy.
inline double ml_series(double q, double beta, double z,
                        const MLEvalPolicy& pol, bool& ok) {
  const long double tol = pol.target_rel_accuracy;
  const long double lz = std::log(std::fabs(static_cast<long double>(z)));
  long double sum = 0.0L, comp = 0.0L, max_mag = 0.0L, prev_mag = 0.0L;
  int small_streak = 0;
  ok = false;
  for (int k = 0; k <= pol.max_terms; ++k) {
    // the Gamma argument must carry long double precision: its rounding is
    // amplified by the large alternating terms
    const long double mag = std::exp(
        k * lz - lgamma_pos_l(static_cast<long double>(q) * k + beta));
    const long double term = (z < 0 && (k & 1)) ? -mag : mag;
    const long double y = term - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (mag > max_mag) max_mag = mag;
    if (k > 0 && mag <= prev_mag && mag < 0.01L * tol * std::fabs(sum)) {
      if (++small_streak >= 2) {
        ok = true;
        break;
      }
    } else {
      small_streak = 0;
    }
    prev_mag = mag;
  }
  // cancellation guard: lost digits must leave room for the target accuracy
  if (ok && max_mag * 1.1e-19L > tol * std::fabs(sum)) ok = false;
  return static_cast<double>(sum);
}

/// Algebraic asymptotic expansion of E_{q,beta}(-x) for large x > 0:
/// sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(beta - qk), optimally truncated.
/// est receives the relative size of the first omitted term.
inline double ml_asymptotic(double q, double beta, double x,
                            const MLEvalPolicy& pol, double& est) {
  const long double lx = std::log(static_cast<long double>(x));
  long double sum = 0.0L, best = std::numeric_limits<long double>::infinity();
  for (int k = 1; k <= pol.max_terms; ++k) {
    int sg;
    const long double lr = log_abs_rgamma(beta - q * k, sg);
    if (sg == 0) continue;  // pole of Gamma: the term vanishes identically
    const long double mag = std::exp(-k * lx + lr);
    if (mag >= best) break;  // optimal truncation point
    best = mag;
    sum += ((k & 1) ? 1 : -1) * sg * mag;
    if (mag < 1e-18L * std::fabs(sum)) break;
  }
  est = static_cast<double>(best / (std::fabs(sum) +
                                    std::numeric_limits<long double>::min()));
  return static_cast<double>(sum);
}

/// E_q(-x) for x > 0, 0 < q < 1, via the Laplace-type spectral representation
///   E_q(-x) = sin(q pi)/(q pi) * Int_0^inf e^{-(x u)^{1/q}} /
///             (u^2 + 2 u cos(q pi) + 1) du.
inline double ml1_integral(double q, double x, double rel_tol) {
  const double cq = std::cos(q * std::numbers::pi);
  const double sq = std::sin(q * std::numbers::pi);
  const double iq = 1.0 / q;
  // e^{-(xu)^{1/q}} reaches e^{-45} at the cutoff
  const double cut = std::pow(45.0, q) / x;
  const double u0 = 1.0 / x;  // decay scale
  std::vector<double> pts = {0.0, cut};
  for (double p : {0.1 * u0, u0, 3.0 * u0, 10.0 * u0})
    if (p < cut) pts.push_back(p);
  if (cq < 0.0) {  // denominator dips to sin^2(q pi) near u* = -cos(q pi)
    const double us = -cq;
    for (double p : {us - 5.0 * sq, us - sq, us, us + sq, us + 5.0 * sq})
      if (p > 0.0 && p < cut) pts.push_back(p);
  }
  const auto f = [&](double u) {
    return std::exp(-std::pow(x * u, iq)) / ((u + cq) * (u + cq) + sq * sq);
  };
  return sq / (q * std::numbers::pi) *
         fracstab::detail::integrate(f, std::move(pts), rel_tol);
}

/// E_{q,beta}(-x), x > 0, 0 < q < 1, beta < 1+q, via the
/// Gorenflo-Loutchko-Luchko kernel
///   Int_0^inf (1/(q pi)) r^{(1-beta)/q} e^{-r^{1/q}}
///     (r sin(pi(1-beta)) + x sin(pi(1-beta+q))) /
///     (r^2 + 2 r x cos(q pi) + x^2) dr.
/// For beta > 1 the r->0 singularity is removed on [0,1] by r = w^p with
/// p = q/(1+q-beta).
inline double ml2_integral_base(double q, double beta, double x,
                                double rel_tol) {
  const double cq = std::cos(q * std::numbers::pi);
  const double s1 = std::sin(std::numbers::pi * (1.0 - beta));
  const double s2 = std::sin(std::numbers::pi * (1.0 - beta + q));
  const double iq = 1.0 / q;
  const double e0 = (1.0 - beta) / q;  // r-power exponent
  const double cut = std::pow(45.0, q);
  const auto kern = [&](double r) {
    const double den = (r + x * cq) * (r + x * cq) + x * x * (1.0 - cq * cq);
    return std::pow(r, e0) * std::exp(-std::pow(r, iq)) *
           (r * s1 + x * s2) / (den * q * std::numbers::pi);
  };
  const double rs = -x * cq;  // near-pole radius when cos(q pi) < 0
  const double rw = x * std::sqrt(1.0 - cq * cq);
  // piece [1, cut] on the raw variable
  std::vector<double> pts = {1.0, cut};
  for (double p : {0.5 * x, x, 2.0 * x, rs - rw, rs, rs + rw})
    if (p > 1.0 && p < cut) pts.push_back(p);
  double total = fracstab::detail::integrate(kern, std::move(pts), rel_tol);
  // piece [0, 1]
  if (beta > 1.0) {
    const double p = q / (1.0 + q - beta);
    const auto sub = [&](double w) {
      const double r = std::pow(w, p);
      const double den =
          (r + x * cq) * (r + x * cq) + x * x * (1.0 - cq * cq);
      // r^{(1-beta)/q} dr = p dw exactly cancels the singular power
      return p * std::exp(-std::pow(w, p * iq)) * (r * s1 + x * s2) /
             (den * q * std::numbers::pi);
    };
    std::vector<double> wpts = {0.0, 0.25, 0.5, 1.0};
    if (cq < 0.0 && rs < 1.0 && rs > 0.0)
      wpts.push_back(std::pow(rs, 1.0 / p));
    total += fracstab::detail::integrate(sub, std::move(wpts), rel_tol);
  } else {
    std::vector<double> rpts = {0.0, 0.25, 0.5, 1.0};
    if (cq < 0.0 && rs < 1.0 && rs > 0.0) rpts.push_back(rs);
    total += fracstab::detail::integrate(kern, std::move(rpts), rel_tol);
  }
  return total;
}

/// E_{q,beta}(-x) by the kernel integral, reducing beta below 1+q first via
/// E_{q,b}(z) = (E_{q,b-q}(z) - 1/Gamma(b-q)) / z.
inline double ml2_integral(double q, double beta, double x, double rel_tol) {
  double b = beta;
  int nred = 0;
  while (b >= 1.0 + q - 1e-12) {
    b -= q;
    ++nred;
  }
  double v = ml2_integral_base(q, b, x, rel_tol);
  for (int i = 0; i < nred; ++i) {
    v = (v - rgamma(b)) / (-x);
    b += q;
  }
  return v;
}

}  // namespace detail

/// Gamma function; Lanczos for x >= 0.5, reflection formula below.
inline double gamma(double x) {
  if (x <= 0.0 && x == std::floor(x))
    throw PoleError("gamma: pole at nonpositive integer " +
                    std::to_string(x));
  if (x >= 0.5)
    return static_cast<double>(std::exp(detail::lgamma_lanczos_l(x)));
  const long double s = detail::sinpi_l(x);
  return static_cast<double>(
      detail::kPi / (s * std::exp(detail::lgamma_lanczos_l(1.0L - x))));
}

/// One-parameter Mittag-Leffler E_q(z), q in (0,1], real z.
inline double ml1(double q, double z, const MLEvalPolicy& pol = {}) {
  if (!(q > 0.0) || q > 1.0)
    throw DomainError("ml1: q must lie in (0,1], got " + std::to_string(q));
  if (z == 0.0) return 1.0;
  if (q == 1.0) return std::exp(z);
  if (std::fabs(z) <= pol.series_radius) {
    bool ok;
    const double v = detail::ml_series(q, 1.0, z, pol, ok);
    if (ok) return v;
    if (z > 0.0)
      throw AccuracyError("ml1: series did not converge for z > 0");
  } else if (z > 0.0) {
    throw AccuracyError("ml1: z > series radius has no evaluation regime");
  }
  const double x = -z;
  if (x >= pol.asymptotic_threshold) {
    double est;
    const double v = detail::ml_asymptotic(q, 1.0, x, pol, est);
    if (est < pol.target_rel_accuracy) return v;
  }
  return detail::ml1_integral(q, x, pol.target_rel_accuracy);
}

/// Two-parameter Mittag-Leffler E_{q,alpha}(z), q in (0,1], alpha > 0.
inline double ml2(double q, double alpha, double z,
                  const MLEvalPolicy& pol = {}) {
  if (!(q > 0.0) || q > 1.0)
    throw DomainError("ml2: q must lie in (0,1], got " + std::to_string(q));
  if (!(alpha > 0.0))
    throw DomainError("ml2: alpha must be positive, got " +
                      std::to_string(alpha));
  if (z == 0.0) return detail::rgamma(alpha);
  if (q == 1.0 && alpha == 1.0) return std::exp(z);
  if (std::fabs(z) <= pol.series_radius) {
    bool ok;
    const double v = detail::ml_series(q, alpha, z, pol, ok);
    if (ok) return v;
    if (z > 0.0 || q == 1.0)
      throw AccuracyError("ml2: series did not converge");
  } else if (z > 0.0) {
    throw AccuracyError("ml2: z > series radius has no evaluation regime");
  }
  const double x = -z;
  if (x >= pol.asymptotic_threshold) {
    double est;
    const double v = detail::ml_asymptotic(q, alpha, x, pol, est);
    if (est < pol.target_rel_accuracy) return v;
  }
  if (q == 1.0)
    throw AccuracyError("ml2: no evaluation regime for q = 1 at this z");
  return detail::ml2_integral(q, alpha, x, pol.target_rel_accuracy);
}

/// Sandwich bounds 1/(1+Gamma(1-q)t^q) <= E_q(-t^q) <= 1/(1+t^q/Gamma(1+q)),
/// valid for q in (0,1) strictly.
inline std::pair<double, double> ml1_neg_bounds(double q, double t) {
  if (!(q > 0.0) || q >= 1.0)
    throw DomainError("ml1_neg_bounds: q must lie in (0,1), got " +
                      std::to_string(q));
  if (!(t > 0.0))
    throw DomainError("ml1_neg_bounds: t must be positive, got " +
                      std::to_string(t));
  const double tq = std::pow(t, q);
  return {1.0 / (1.0 + gamma(1.0 - q) * tq),
          1.0 / (1.0 + tq / gamma(1.0 + q))};
}

}  // namespace fracstab::mlf
