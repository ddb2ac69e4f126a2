// mdm_protocol.hpp
// The minimal-disturbance measurement channel at the two-qubit level:
// parity-check projection onto span{|00>,|11>} or span{|01>,|10>}, tunable
// probe readout in the basis {cos t|0> + sin t|1>, sin t|0> - cos t|1>},
// conditional sigma_Z correction, and the closed-form per-state fidelity
// and guess.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "mdm/quantum_core.hpp"

namespace mdm {

enum class ParityOutcome { Even, Odd };
enum class ReadoutOutcome { G0, G1 };

// Abstract keeps both parity branches; OpticsFaithful keeps only Even and
// renormalizes, matching a coincidence-post-selected run. The trade-off
// values agree in both regimes.
enum class Regime { Abstract, OpticsFaithful };

// Readout rotation angle, restricted to [0, pi/4]. t = 0 extracts maximal
// information; t = pi/4 leaves the signal untouched.
class MeasurementStrength {
 public:
  explicit MeasurementStrength(double theta);

  double radians() const { return theta_; }
  double sin2t() const;
  double cos2t() const;

  static double max_radians();  // pi/4

 private:
  double theta_;
};

struct ReadoutBranch {
  ReadoutOutcome outcome;
  double probability;
  PureQubit state;  // collapsed signal, before any correction
};

struct MdmBranch {
  ParityOutcome parity;
  ReadoutOutcome readout;
  double probability;  // normalized over kept branches
  PureQubit state;     // conditional signal state after feed-forward
};

struct MdmResult {
  DensityMatrix2 rho_f;
  DensityMatrix2 rho_g;
  std::vector<MdmBranch> branches;
  double kept_weight;  // total kept-branch probability before renormalization
};

// The protocol probe (|0> + |1>)/sqrt(2).
PureQubit protocol_probe();

// Projects signal x probe onto the requested parity subspace. Returns the
// normalized state with weight = ||E_i psi||^2, or nullopt for an empty
// branch. With the protocol probe the weight is 1/2 for either outcome.
std::optional<TwoQubitState> parity_project(const PureQubit& signal,
                                            const PureQubit& probe,
                                            ParityOutcome outcome);

// Measures the probe half of `joint` in the rotated basis. Always two rows;
// a probability-zero row carries the conventional collapsed state |0>.
std::array<ReadoutBranch, 2> readout_probe(const TwoQubitState& joint,
                                           MeasurementStrength theta);

// Conditional correction. sigma_Z fires on a G1 readout in either parity
// branch; the parity changes only which guess the readout encodes. (With the
// readout basis above, a G1 collapse is the branch whose relative sign is
// flipped, for even and odd parity alike.)
PureQubit feed_forward(const PureQubit& state, ParityOutcome parity,
                       ReadoutOutcome readout);

// Guess encoded by a readout: after Even, G0 -> |0> and G1 -> |1>; the roles
// invert after Odd.
PureQubit guessed_state(ParityOutcome parity, ReadoutOutcome readout);

// Full channel: enumerates kept branches, applies feed-forward, and
// assembles rho_F (mixture of conditional outputs) and rho_G (mixture of
// guessed basis states). Deterministic; no sampling.
MdmResult mdm_channel(const PureQubit& signal, MeasurementStrength theta,
                      Regime regime = Regime::Abstract,
                      bool feed_forward_enabled = true);

// Closed forms. Both must agree with the branch-enumerated channel.
//   F = 1 - 2|a|^2|b|^2 (1 - sin 2t)
//   G = 1/2 + (cos 2t / 2)(1 - 4|a|^2|b|^2)
double output_fidelity(const PureQubit& signal, MeasurementStrength theta);
double guess_fidelity(const PureQubit& signal, MeasurementStrength theta);

}  // namespace mdm
