// ensembles.hpp
// Input-state families and ensemble averaging of the guess/fidelity pair:
// analytic closed forms, exact discrete-set sums, and Monte Carlo.

#pragma once

#include <string>
#include <vector>

#include "mdm/mdm_protocol.hpp"
#include "mdm/quantum_core.hpp"
#include "mdm/random.hpp"

namespace mdm {

enum class EnsembleFamily {
  UniversalHaar,        // Haar measure on the full Bloch sphere
  UniversalSix,         // {H, V, D, A, L, R} (a 2-design)
  CovariantEquatorial,  // uniform real-amplitude angle on [0, 2pi)
  CovariantFour,        // {H, V, D, A}
};

struct EnsembleSpec {
  EnsembleFamily family;
  long sample_count = 0;  // Monte Carlo families only
};

enum class Provenance { Analytic, ChannelAverage, OpticsMc };

struct TradeoffPoint {
  double g = 0.0;
  double f = 0.0;
  double theta = 0.0;
  EnsembleSpec ensemble{EnsembleFamily::UniversalHaar, 0};
  Provenance provenance = Provenance::Analytic;
  double stderr_g = 0.0;
  double stderr_f = 0.0;
};

struct LabeledState {
  std::string label;
  PureQubit state;
};

// D = (H+V)/sqrt2, A = (H-V)/sqrt2, L = (H+iV)/sqrt2, R = (H-iV)/sqrt2.
const std::vector<LabeledState>& universal_six();
// {H, V, D, A}.
const std::vector<LabeledState>& covariant_four();

// Ensemble-averaged (G, F) at fixed theta. Continuous families use the
// analytic closed forms
//   F_univ = (2 + sin 2t)/3,  G_univ = (3 + cos 2t)/6
//   F_cov  = (3 + sin 2t)/4,  G_cov  = (2 + cos 2t)/4
// and discrete families are exact unweighted means of the per-state values.
TradeoffPoint average_tradeoff(MeasurementStrength theta,
                               const EnsembleSpec& spec);

// Sample mean of the per-state closed forms over `samples` random draws
// (Haar or uniform equatorial angle). Requires samples >= 100; populates the
// standard-error fields.
TradeoffPoint monte_carlo_average(MeasurementStrength theta,
                                  EnsembleFamily family, long samples,
                                  RandomStream& rng);

}  // namespace mdm
