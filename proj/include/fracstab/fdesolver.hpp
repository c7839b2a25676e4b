#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "fracstab/errors.hpp"
#include "fracstab/mlf.hpp"
#include "fracstab/spectral.hpp"

namespace fracstab::fdesolver {

/// Spectral-coordinate trajectory: coeffs[i][n] = a_n(times[i]).
struct Trajectory {
  double q = 1.0;
  std::vector<double> times;
  std::vector<std::vector<double>> coeffs;
};

/// Piecewise-constant scalar forcing: values[i] on [knots[i], knots[i+1]).
struct ForcingSignal {
  std::vector<double> knots;
  std::vector<double> values;

  bool is_zero() const {
    return std::all_of(values.begin(), values.end(),
                       [](double v) { return v == 0.0; });
  }
};

/// Output grid: t = 0, then 40 geometrically spaced points on [1e-3, 1]
/// (E_q has unbounded derivative at 0), then uniform steps to t_max.
inline std::vector<double> make_time_grid(double t_max, double step = 0.1,
                                          bool geometric_early = true) {
  if (!(t_max > 0.0) || !(step > 0.0))
    throw DomainError("make_time_grid: t_max and step must be positive");
  std::vector<double> t = {0.0};
  const double t1 = std::min(1.0, t_max);
  if (geometric_early) {
    const double lo = std::log(1e-3), hi = std::log(t1);
    for (int i = 0; i < 40; ++i)
      t.push_back(std::exp(lo + (hi - lo) * i / 39.0));
  }
  for (double s = t1 + step; s < t_max - 1e-12 * t_max; s += step)
    t.push_back(s);
  if (t.back() < t_max) t.push_back(t_max);
  return t;
}

/// a_n(t) = E_q(lambda_n t^q) c_n for every stored mode and time.
inline Trajectory evolve_homogeneous(const spectral::SpectralSystem& sys,
                                     const spectral::StateCoefficients& c0,
                                     double q, const std::vector<double>& times,
                                     const mlf::MLEvalPolicy& pol = {}) {
  if (c0.size() != sys.modes.size())
    throw DomainError("evolve_homogeneous: coefficient/mode count mismatch");
  Trajectory tr{q, times, {}};
  tr.coeffs.reserve(times.size());
  for (double t : times) {
    const double tq = std::pow(t, q);
    std::vector<double> row(c0.size());
    for (std::size_t n = 0; n < c0.size(); ++n)
      row[n] = c0[n] == 0.0
                   ? 0.0
                   : mlf::ml1(q, sys.modes[n].eigenvalue * tq, pol) * c0[n];
    tr.coeffs.push_back(std::move(row));
  }
  return tr;
}

namespace detail {

/// Exact antiderivative of the Duhamel kernel:
/// K(tau) = tau^q E_{q,q+1}(lambda tau^q), with
/// d/dtau K = tau^{q-1} E_{q,q}(lambda tau^q) and K(0) = 0.
inline double duhamel_K(double lambda, double q, double tau,
                        const mlf::MLEvalPolicy& pol) {
  if (tau <= 0.0) return 0.0;
  const double tq = std::pow(tau, q);
  return tq * mlf::ml2(q, q + 1.0, lambda * tq, pol);
}

}  // namespace detail

/// Mild solution of one forced mode,
///   a(t) = E_q(lambda t^q) c0 + int_0^t (t-s)^{q-1} E_{q,q}(lambda (t-s)^q) f(s) ds,
/// with the singular kernel integrated exactly over each constant-forcing
/// subinterval: contribution f_i [K(t - s_i) - K(t - s_{i+1})].
inline std::vector<double> evolve_forced_mode(double lambda, double q,
                                              double c0,
                                              const ForcingSignal& f,
                                              const std::vector<double>& times,
                                              const mlf::MLEvalPolicy& pol = {}) {
  if (!(q > 0.0) || q > 1.0)
    throw DomainError("evolve_forced_mode: q must lie in (0,1]");
  const bool forced = !f.values.empty() && !f.is_zero();
  if (forced) {
    if (f.knots.size() != f.values.size() + 1)
      throw GridError("evolve_forced_mode: knots must bracket values");
    // the forcing grid must match or refine the trajectory grid
    for (double t : times) {
      if (t <= f.knots.front() || t >= f.knots.back()) continue;
      const bool hit =
          std::any_of(f.knots.begin(), f.knots.end(), [t](double s) {
            return std::fabs(s - t) <= 1e-12 * std::max(1.0, std::fabs(t));
          });
      if (!hit)
        throw GridError("evolve_forced_mode: forcing grid does not refine "
                        "the trajectory grid");
    }
  }
  std::vector<double> a;
  a.reserve(times.size());
  for (double t : times) {
    double v = c0 == 0.0 ? 0.0
                         : mlf::ml1(q, lambda * std::pow(t, q), pol) * c0;
    if (forced) {
      for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double s0 = f.knots[i];
        if (s0 >= t) break;
        if (f.values[i] == 0.0) continue;
        const double s1 = std::min(f.knots[i + 1], t);
        v += f.values[i] * (detail::duhamel_K(lambda, q, t - s0, pol) -
                            detail::duhamel_K(lambda, q, t - s1, pol));
      }
    }
    a.push_back(v);
  }
  return a;
}

/// Parseval: ||y|| = sqrt(sum a_n^2), fixed ascending summation order.
inline double state_norm(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

/// ||grad y|| = sqrt(sum a_n^2 ||grad phi_n||^2) for the diagonal gradient
/// Gram of the analytic families.
inline double gradient_norm(const spectral::SpectralSystem& sys,
                            const std::vector<double>& a) {
  if (a.size() != sys.modes.size())
    throw DomainError("gradient_norm: coefficient/mode count mismatch");
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n)
    s += a[n] * a[n] * sys.modes[n].grad_sq_norm;
  return std::sqrt(s);
}

/// Pointwise field sum a_n phi_n(x) over the truncation (1D families).
inline std::vector<double> sample_field(const spectral::SpectralSystem& sys,
                                        const std::vector<double>& a,
                                        const std::vector<double>& points) {
  if (sys.family != spectral::Family::Sine1D)
    throw DomainError("sample_field: pointwise sampling requires Sine1D");
  if (a.size() != sys.modes.size())
    throw DomainError("sample_field: coefficient/mode count mismatch");
  std::vector<double> out;
  out.reserve(points.size());
  for (double x : points) {
    double v = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n)
      v += a[n] * std::numbers::sqrt2 *
           std::sin(sys.modes[n].index * std::numbers::pi * x);
    out.push_back(v);
  }
  return out;
}

/// Pointwise gradient sum a_n phi_n'(x) (1D families).
inline std::vector<double> sample_gradient_field(
    const spectral::SpectralSystem& sys, const std::vector<double>& a,
    const std::vector<double>& points) {
  if (sys.family != spectral::Family::Sine1D)
    throw DomainError("sample_gradient_field: requires Sine1D");
  if (a.size() != sys.modes.size())
    throw DomainError("sample_gradient_field: coefficient/mode count mismatch");
  std::vector<double> out;
  out.reserve(points.size());
  for (double x : points) {
    double v = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
      const double npi = sys.modes[n].index * std::numbers::pi;
      v += a[n] * std::numbers::sqrt2 * npi * std::cos(npi * x);
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace fracstab::fdesolver
