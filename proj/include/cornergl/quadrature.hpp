#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cornergl::quad {

/// Composite trapezoid on a uniform grid.
double trapezoid(std::span<const double> y, double h);

/// Per-panel integrals of the cubic through four neighbouring samples
/// (one-sided cubic on the first and last panel). Fourth order on smooth data.
std::vector<double> panel_integrals(std::span<const double> y, double h);

/// Fourth-order integral over the whole grid (sum of panel_integrals).
double integrate(std::span<const double> y, double h);

/// Running integral from the left end: out[i] = int_{x_0}^{x_i} y.
std::vector<double> cumulative_forward(std::span<const double> y, double h);

/// Running integral to the right end: out[i] = int_{x_i}^{x_{n-1}} y.
std::vector<double> cumulative_backward(std::span<const double> y, double h);

} // namespace cornergl::quad
