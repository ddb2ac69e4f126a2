#include "mdm/tradeoff_bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace mdm {

namespace {

EnsembleFamily matching_family(BoundFamily family) {
  return family == BoundFamily::Universal ? EnsembleFamily::UniversalHaar
                                          : EnsembleFamily::CovariantEquatorial;
}

}  // namespace

double bound_fidelity(double g, BoundFamily family) {
  const double g_max = family == BoundFamily::Universal ? 2.0 / 3.0 : 0.75;
  if (!(g >= 0.5 - kInvariantTol && g <= g_max + kInvariantTol)) {
    throw std::domain_error(
        family == BoundFamily::Universal
            ? "bound_fidelity: g must lie in [0.5, 0.666667] (universal)"
            : "bound_fidelity: g must lie in [0.5, 0.75] (covariant)");
  }
  const double center =
      family == BoundFamily::Universal ? 6.0 * g - 3.0 : 4.0 * g - 2.0;
  double radicand = 1.0 - center * center;
  if (radicand < -kInvariantTol) {
    throw std::domain_error("bound_fidelity: radicand below tolerance");
  }
  radicand = std::max(radicand, 0.0);
  if (family == BoundFamily::Universal) {
    return 2.0 / 3.0 + std::sqrt(radicand) / 3.0;
  }
  return 0.75 + std::sqrt(radicand) / 4.0;
}

double saturation_residual(MeasurementStrength theta, BoundFamily family) {
  const auto point =
      average_tradeoff(theta, EnsembleSpec{matching_family(family), 0});
  return bound_fidelity(point.g, family) - point.f;
}

std::vector<TradeoffPoint> bound_curve(BoundFamily family, int n_points) {
  if (n_points < 2) {
    throw std::invalid_argument("bound_curve: need at least 2 points");
  }
  std::vector<TradeoffPoint> points;
  points.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double theta = MeasurementStrength::max_radians() *
                         static_cast<double>(i) /
                         static_cast<double>(n_points - 1);
    points.push_back(average_tradeoff(MeasurementStrength(theta),
                                      EnsembleSpec{matching_family(family), 0}));
  }
  return points;
}

}  // namespace mdm
