#include "cornergl/quadrature.hpp"

#include <cassert>
#include <numeric>

namespace cornergl::quad {

double trapezoid(std::span<const double> y, double h) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * h;
}

std::vector<double> panel_integrals(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  assert(n >= 4);
  std::vector<double> seg(n - 1);
  const double c = h / 24.0;
  seg.front() = c * (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3]);
  seg.back() = c * (9.0 * y[n - 1] + 19.0 * y[n - 2] - 5.0 * y[n - 3] + y[n - 4]);
  for (std::size_t i = 1; i + 2 < n; ++i)
    seg[i] = c * (-y[i - 1] + 13.0 * y[i] + 13.0 * y[i + 1] - y[i + 2]);
  return seg;
}

double integrate(std::span<const double> y, double h) {
  const auto seg = panel_integrals(y, h);
  return std::accumulate(seg.begin(), seg.end(), 0.0);
}

std::vector<double> cumulative_forward(std::span<const double> y, double h) {
  const auto seg = panel_integrals(y, h);
  std::vector<double> out(y.size(), 0.0);
  for (std::size_t i = 0; i < seg.size(); ++i) out[i + 1] = out[i] + seg[i];
  return out;
}

std::vector<double> cumulative_backward(std::span<const double> y, double h) {
  const auto seg = panel_integrals(y, h);
  std::vector<double> out(y.size(), 0.0);
  for (std::size_t i = seg.size(); i-- > 0;) out[i] = out[i + 1] + seg[i];
  return out;
}

} // namespace cornergl::quad
