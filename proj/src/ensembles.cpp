#include "mdm/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mdm {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

double sample_stderr(double sum, double sum_sq, long n) {
  if (n < 2) return 0.0;
  const double mean = sum / static_cast<double>(n);
  double var = (sum_sq - static_cast<double>(n) * mean * mean) /
               static_cast<double>(n - 1);
  var = std::max(var, 0.0);
  return std::sqrt(var / static_cast<double>(n));
}

}  // namespace

const std::vector<LabeledState>& universal_six() {
  static const std::vector<LabeledState> states{
      {"H", PureQubit::horizontal()},
      {"V", PureQubit::vertical()},
      {"D", PureQubit(Amplitude(kSqrtHalf), Amplitude(kSqrtHalf))},
      {"A", PureQubit(Amplitude(kSqrtHalf), Amplitude(-kSqrtHalf))},
      {"L", PureQubit(Amplitude(kSqrtHalf), Amplitude(0.0, kSqrtHalf))},
      {"R", PureQubit(Amplitude(kSqrtHalf), Amplitude(0.0, -kSqrtHalf))},
  };
  return states;
}

const std::vector<LabeledState>& covariant_four() {
  static const std::vector<LabeledState> states{
      {"H", PureQubit::horizontal()},
      {"V", PureQubit::vertical()},
      {"D", PureQubit(Amplitude(kSqrtHalf), Amplitude(kSqrtHalf))},
      {"A", PureQubit(Amplitude(kSqrtHalf), Amplitude(-kSqrtHalf))},
  };
  return states;
}

TradeoffPoint average_tradeoff(MeasurementStrength theta,
                               const EnsembleSpec& spec) {
  TradeoffPoint point;
  point.theta = theta.radians();
  point.ensemble = spec;
  switch (spec.family) {
    case EnsembleFamily::UniversalHaar:
      point.f = (2.0 + theta.sin2t()) / 3.0;
      point.g = (3.0 + theta.cos2t()) / 6.0;
      point.provenance = Provenance::Analytic;
      return point;
    case EnsembleFamily::CovariantEquatorial:
      point.f = (3.0 + theta.sin2t()) / 4.0;
      point.g = (2.0 + theta.cos2t()) / 4.0;
      point.provenance = Provenance::Analytic;
      return point;
    case EnsembleFamily::UniversalSix:
    case EnsembleFamily::CovariantFour: {
      const auto& states = spec.family == EnsembleFamily::UniversalSix
                               ? universal_six()
                               : covariant_four();
      double f = 0.0;
      double g = 0.0;
      for (const auto& s : states) {
        f += output_fidelity(s.state, theta);
        g += guess_fidelity(s.state, theta);
      }
      point.f = f / static_cast<double>(states.size());
      point.g = g / static_cast<double>(states.size());
      point.provenance = Provenance::ChannelAverage;
      return point;
    }
  }
  throw std::invalid_argument("average_tradeoff: unknown ensemble family");
}

TradeoffPoint monte_carlo_average(MeasurementStrength theta,
                                  EnsembleFamily family, long samples,
                                  RandomStream& rng) {
  if (family != EnsembleFamily::UniversalHaar &&
      family != EnsembleFamily::CovariantEquatorial) {
    throw std::invalid_argument(
        "monte_carlo_average: family must be UniversalHaar or "
        "CovariantEquatorial");
  }
  if (samples < 100) {
    throw std::invalid_argument("monte_carlo_average: need at least 100 samples");
  }

  double f_sum = 0.0, f_sq = 0.0, g_sum = 0.0, g_sq = 0.0;
  for (long i = 0; i < samples; ++i) {
    const PureQubit state =
        family == EnsembleFamily::UniversalHaar
            ? sample_haar(rng)
            : equatorial_state(rng.uniform(0.0, 2.0 * std::numbers::pi));
    const double f = output_fidelity(state, theta);
    const double g = guess_fidelity(state, theta);
    f_sum += f;
    f_sq += f * f;
    g_sum += g;
    g_sq += g * g;
  }

  TradeoffPoint point;
  point.theta = theta.radians();
  point.ensemble = EnsembleSpec{family, samples};
  point.provenance = Provenance::ChannelAverage;
  point.f = f_sum / static_cast<double>(samples);
  point.g = g_sum / static_cast<double>(samples);
  point.stderr_f = sample_stderr(f_sum, f_sq, samples);
  point.stderr_g = sample_stderr(g_sum, g_sq, samples);
  return point;
}

}  // namespace mdm
