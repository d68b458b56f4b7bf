#ifndef GLSHP_QUADRATURE_HPP
#define GLSHP_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "glshp/errors.hpp"

namespace glshp {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on the
// Legendre recurrence; accurate to machine precision for the small
// orders used here.
inline void gauss_legendre(int n, std::vector<double>& nodes,
                           std::vector<double>& weights) {
  if (n < 1) throw DomainError("gauss_legendre requires n >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

// One-dimensional quadrature grid on [0,1] built from Gauss-Legendre
// panels graded geometrically toward 0, where the fractional powers
// integrated in this artifact lose smoothness.
struct QuadGrid1D {
  std::vector<double> x;
  std::vector<double> w;
};

inline QuadGrid1D graded_gl_grid(int total_nodes, int panels = 4,
                                 double sigma = 0.05) {
  if (total_nodes < panels) throw DomainError("too few quadrature nodes");
  int q = total_nodes / panels;
  std::vector<double> ref_x, ref_w;
  gauss_legendre(q, ref_x, ref_w);
  std::vector<double> bounds;
  bounds.push_back(0.0);
  for (int k = panels - 1; k >= 1; --k) bounds.push_back(std::pow(sigma, k));
  bounds.push_back(1.0);
  QuadGrid1D g;
  for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
    double a = bounds[p], b = bounds[p + 1];
    for (int i = 0; i < q; ++i) {
      g.x.push_back(a + (b - a) * 0.5 * (ref_x[i] + 1.0));
      g.w.push_back(0.5 * (b - a) * ref_w[i]);
    }
  }
  return g;
}

// Tensor-product integration of f over the unit square.
inline double integrate_square(const std::function<double(double, double)>& f,
                               const QuadGrid1D& gx, const QuadGrid1D& gt) {
  double sum = 0.0;
  for (std::size_t i = 0; i < gx.x.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < gt.x.size(); ++j)
      row += gt.w[j] * f(gx.x[i], gt.x[j]);
    sum += gx.w[i] * row;
  }
  return sum;
}

}  // namespace glshp

#endif  // GLSHP_QUADRATURE_HPP
