#pragma once

// Independent reference computations used by the test suites.  These
// deliberately avoid the library's exact-kernel Duhamel path so the two can
// be compared against each other.

#include <cmath>
#include <functional>
#include <numbers>

#include "fracstab/mlf.hpp"

namespace oracle {

/// Scaled complementary error function e^{x^2} erfc(x) for x >= 0.
inline double erfcx(double x) {
  if (x < 4.0) return std::exp(x * x) * std::erfc(x);
  // asymptotic series, optimally truncated
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0, sum = 1.0, prev = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= -(2 * k - 1) * inv2x2;
    if (std::fabs(term) >= prev) break;
    prev = std::fabs(term);
    sum += term;
  }
  return sum / (x * std::sqrt(std::numbers::pi));
}

/// E_{1/2,1/2}(z) = 1/sqrt(pi) + z e^{z^2} erfc(-z), closed form.
inline double ml_half_half(double z) {
  const double s = 1.0 / std::sqrt(std::numbers::pi);
  if (z <= 0.0) return s + z * erfcx(-z);
  return s + z * std::exp(z * z) * std::erfc(-z);
}

/// Plain recursive adaptive Simpson.
inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double fa, double fm,
                               double fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

/// Brute-force value of int_0^t (t-s)^{q-1} E_{q,q}(lambda (t-s)^q) ds for
/// constant unit forcing: a graded dyadic mesh toward the tau -> 0
/// singularity plus a termwise-integrated series head on the innermost
/// segment.  E_{q,q} comes from the closed form for q = 1/2 and from the
/// library series/integral otherwise.
inline double duhamel_brute_force(double lambda, double q, double t) {
  const auto Eqq = [&](double z) {
    return q == 0.5 ? ml_half_half(z) : fracstab::mlf::ml2(q, q, z);
  };
  const auto g = [&](double tau) {
    return std::pow(tau, q - 1.0) * Eqq(lambda * std::pow(tau, q));
  };
  // series head: int_0^a tau^{q-1} E_{q,q}(lambda tau^q) dtau
  //            = sum_k lambda^k a^{q(k+1)} / Gamma(q k + q + 1)
  const double a = t * std::pow(2.0, -40);
  double head = 0.0;
  for (int k = 0; k < 6; ++k)
    head += std::pow(lambda, k) * std::pow(a, q * (k + 1)) *
            fracstab::mlf::detail::rgamma(q * k + q + 1.0);
  double total = head;
  double lo = a;
  while (lo < t) {
    const double hi = std::min(2.0 * lo, t);
    const double m = 0.5 * (lo + hi);
    total += adaptive_simpson(g, lo, hi, g(lo), g(m), g(hi), 1e-11, 40);
    lo = hi;
  }
  return total;
}

}  // namespace oracle
