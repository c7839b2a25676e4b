#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace fracstab::detail {

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 abscissae/weights).
// Even-index nodes are Kronrod-only; odd-index nodes and the centre are the
// embedded Gauss-7 nodes.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};

inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15(F&& f, double a, double b, double& result, double& err) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  const double fc = f(c);
  double resk = fc * kGK15WeightsK[7];
  double resg = fc * kG7Weights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kGK15Nodes[i];
    const double s = f(c - dx) + f(c + dx);
    resk += kGK15WeightsK[i] * s;
    if (i % 2 == 1) resg += kG7Weights[(i - 1) / 2] * s;
  }
  result = resk * h;
  err = std::fabs(resk - resg) * h;
}

template <class F>
inline double adaptive_gk(F&& f, double a, double b, double abs_tol,
                          int depth = 0) {
  double r, e;
  gk15(f, a, b, r, e);
  if (e <= abs_tol || depth >= 30 || (b - a) <= std::fabs(a) * 1e-15) return r;
  const double m = 0.5 * (a + b);
  return adaptive_gk(f, a, m, 0.5 * abs_tol, depth + 1) +
         adaptive_gk(f, m, b, 0.5 * abs_tol, depth + 1);
}

/// Integrates f over consecutive segments given by breakpoints, to a relative
/// tolerance against the whole-integral magnitude.
template <class F>
inline double integrate(F&& f, std::vector<double> pts, double rel_tol) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // first pass: rough magnitude
  double rough = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double r, e;
    gk15(f, pts[i], pts[i + 1], r, e);
    rough += std::fabs(r);
  }
  const double abs_tol =
      std::max(rough * rel_tol, 1e-305) / std::max<std::size_t>(pts.size() - 1, 1);
  double total = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += adaptive_gk(f, pts[i], pts[i + 1], abs_tol);
  return total;
}

}  // namespace fracstab::detail
