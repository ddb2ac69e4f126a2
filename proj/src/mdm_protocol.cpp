#include "mdm/mdm_protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mdm {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

// Readout basis vectors (real components).
std::array<double, 2> readout_vector(ReadoutOutcome k, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  if (k == ReadoutOutcome::G0) return {c, s};
  return {s, -c};
}

}  // namespace

MeasurementStrength::MeasurementStrength(double theta) : theta_(theta) {
  if (!std::isfinite(theta_) || theta_ < -kInvariantTol ||
      theta_ > max_radians() + kInvariantTol) {
    throw std::invalid_argument(
        "MeasurementStrength: theta must lie in [0, pi/4]");
  }
  theta_ = std::clamp(theta_, 0.0, max_radians());
}

double MeasurementStrength::sin2t() const { return std::sin(2.0 * theta_); }
double MeasurementStrength::cos2t() const { return std::cos(2.0 * theta_); }

double MeasurementStrength::max_radians() { return std::numbers::pi / 4.0; }

PureQubit protocol_probe() {
  return PureQubit(Amplitude(kSqrtHalf), Amplitude(kSqrtHalf));
}

std::optional<TwoQubitState> parity_project(const PureQubit& signal,
                                            const PureQubit& probe,
                                            ParityOutcome outcome) {
  // Joint vector, index 2*signal + probe.
  const std::array<Amplitude, 4> joint{
      signal.alpha() * probe.alpha(), signal.alpha() * probe.beta(),
      signal.beta() * probe.alpha(), signal.beta() * probe.beta()};
  const std::array<int, 2> kept = outcome == ParityOutcome::Even
                                      ? std::array<int, 2>{0, 3}
                                      : std::array<int, 2>{1, 2};
  double weight = 0.0;
  for (int idx : kept) weight += std::norm(joint[idx]);
  if (weight < kZeroWeight) return std::nullopt;

  const double inv = 1.0 / std::sqrt(weight);
  std::array<Amplitude, 4> projected{};
  for (int idx : kept) projected[idx] = joint[idx] * inv;
  return TwoQubitState(projected, weight);
}

std::array<ReadoutBranch, 2> readout_probe(const TwoQubitState& joint,
                                           MeasurementStrength theta) {
  std::array<ReadoutBranch, 2> out{
      ReadoutBranch{ReadoutOutcome::G0, 0.0, PureQubit()},
      ReadoutBranch{ReadoutOutcome::G1, 0.0, PureQubit()}};
  for (int k = 0; k < 2; ++k) {
    const auto g = readout_vector(out[k].outcome, theta.radians());
    // <G_k|_probe applied to the joint vector.
    std::array<Amplitude, 2> collapsed{};
    for (int s = 0; s < 2; ++s) {
      collapsed[s] =
          joint.amplitude(2 * s + 0) * g[0] + joint.amplitude(2 * s + 1) * g[1];
    }
    const double p = std::norm(collapsed[0]) + std::norm(collapsed[1]);
    if (p < kZeroWeight) {
      out[k].probability = 0.0;  // conventional |0> already set
      continue;
    }
    const double inv = 1.0 / std::sqrt(p);
    out[k].probability = p;
    out[k].state = PureQubit(collapsed[0] * inv, collapsed[1] * inv);
  }
  return out;
}

PureQubit feed_forward(const PureQubit& state, ParityOutcome /*parity*/,
                       ReadoutOutcome readout) {
  if (readout == ReadoutOutcome::G1) {
    return Operator2::sigma_z().apply(state);
  }
  return state;
}

PureQubit guessed_state(ParityOutcome parity, ReadoutOutcome readout) {
  const bool zero = (readout == ReadoutOutcome::G0) ==
                    (parity == ParityOutcome::Even);
  return zero ? PureQubit::horizontal() : PureQubit::vertical();
}

MdmResult mdm_channel(const PureQubit& signal, MeasurementStrength theta,
                      Regime regime, bool feed_forward_enabled) {
  const PureQubit probe = protocol_probe();
  std::vector<ParityOutcome> parities{ParityOutcome::Even};
  if (regime == Regime::Abstract) parities.push_back(ParityOutcome::Odd);

  std::vector<MdmBranch> branches;
  double kept_weight = 0.0;
  for (ParityOutcome parity : parities) {
    const auto projected = parity_project(signal, probe, parity);
    if (!projected) continue;  // empty branch
    kept_weight += projected->weight();
    for (const ReadoutBranch& rb : readout_probe(*projected, theta)) {
      const PureQubit out = feed_forward_enabled
                                ? feed_forward(rb.state, parity, rb.outcome)
                                : rb.state;
      branches.push_back(MdmBranch{parity, rb.outcome,
                                   projected->weight() * rb.probability, out});
    }
  }
  if (kept_weight < kZeroWeight) {
    throw std::runtime_error("mdm_channel: no branch survived post-selection");
  }

  std::array<Amplitude, 4> rf{};
  std::array<Amplitude, 4> rg{};
  for (auto& branch : branches) {
    branch.probability /= kept_weight;
    const PureQubit guess = guessed_state(branch.parity, branch.readout);
    const std::array<Amplitude, 2> o{branch.state.alpha(), branch.state.beta()};
    const std::array<Amplitude, 2> g{guess.alpha(), guess.beta()};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        rf[i * 2 + j] += branch.probability * o[i] * std::conj(o[j]);
        rg[i * 2 + j] += branch.probability * g[i] * std::conj(g[j]);
      }
    }
  }
  return MdmResult{DensityMatrix2(rf), DensityMatrix2(rg), branches,
                   kept_weight};
}

double output_fidelity(const PureQubit& signal, MeasurementStrength theta) {
  const double k = signal.population_product();
  return 1.0 - 2.0 * k * (1.0 - theta.sin2t());
}

double guess_fidelity(const PureQubit& signal, MeasurementStrength theta) {
  const double k = signal.population_product();
  return 0.5 + 0.5 * theta.cos2t() * (1.0 - 4.0 * k);
}

}  // namespace mdm
