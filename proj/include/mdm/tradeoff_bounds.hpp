// tradeoff_bounds.hpp
// Optimal guess/fidelity frontiers, saturation residuals, and curve
// generation.

#pragma once

#include <vector>

#include "mdm/ensembles.hpp"
#include "mdm/mdm_protocol.hpp"

namespace mdm {

enum class BoundFamily { Universal, Covariant };

// Frontier fidelity at guess g:
//   Universal: 2/3 + sqrt(1 - (6g - 3)^2)/3 on g in [1/2, 2/3]
//   Covariant: 3/4 + sqrt(1 - (4g - 2)^2)/4 on g in [1/2, 3/4]
// Out-of-domain g raises a domain error naming the valid interval.
double bound_fidelity(double g, BoundFamily family);

// bound_fidelity(G(theta)) - F(theta) for the analytic averages of the
// matching ensemble; zero (to rounding) for every theta.
double saturation_residual(MeasurementStrength theta, BoundFamily family);

// n_points analytic frontier points at uniformly spaced theta in [0, pi/4].
std::vector<TradeoffPoint> bound_curve(BoundFamily family, int n_points);

}  // namespace mdm
