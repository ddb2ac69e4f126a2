// optics_sim.hpp
// Mode-algebra simulation of the two-photon apparatus: a signal and a probe
// photon interfere at an (optionally imperfect) polarizing beam splitter,
// coincidence post-selection keeps the runs with one photon per output arm,
// the probe arm is read out in a rotated polarization basis, a conditional
// sigma_Z acts on the signal arm, and the signal is analyzed against its
// preparation. Click statistics are counted Monte Carlo style and fed into
// the fidelity/guess estimators.
//
// Mode layout: four bosonic modes indexed spatial*2 + polarization, with
// polarization 0 = H, 1 = V. Spatial slot 0 is the signal input port and the
// F output arm; slot 1 is the probe input port and the G output arm.

#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "mdm/mdm_protocol.hpp"
#include "mdm/quantum_core.hpp"
#include "mdm/random.hpp"

namespace mdm {

// Lossless per-polarization beam splitter. r_h / r_v are intensity
// reflectivities (ideal PBS: r_h = 0, r_v = 1). Within each polarization the
// spatial transfer matrix is built from (sqrt(1-r), i sqrt(r)); the V block
// carries an extra global phase -i so the ideal double-reflection
// coincidence amplitude is +1, the frame the downstream analyzers and the
// D_V-triggered correction are calibrated in.
class PbsModel {
 public:
  PbsModel(double r_h, double r_v);

  static PbsModel ideal() { return PbsModel(0.0, 1.0); }

  double r_h() const { return r_h_; }
  double r_v() const { return r_v_; }

 private:
  double r_h_;
  double r_v_;
};

// Two-photon field over the four modes, stored as Fock amplitudes on the ten
// occupation vectors with total photon number two.
class PhotonConfig {
 public:
  static constexpr int kModeCount = 4;
  static constexpr int kBasisSize = 10;

  PhotonConfig() = default;

  Amplitude amplitude(int basis_index) const { return amps_[basis_index]; }
  void set_amplitude(int basis_index, Amplitude value) {
    amps_[basis_index] = value;
  }
  double norm_squared() const;

  // Occupation vector of each basis state.
  static const std::array<std::array<int, kModeCount>, kBasisSize>&
  occupations();
  // Basis index of the state with one photon in each of two (possibly equal)
  // modes.
  static int basis_index(int mode_a, int mode_b);

 private:
  std::array<Amplitude, kBasisSize> amps_{};
};

// Signal photon in the given polarization state on the signal port, probe
// photon at +45 degrees on the probe port.
PhotonConfig build_input(const PureQubit& signal);

// Applies the beam-splitter unitary to the two-photon field, with bosonic
// sqrt(2) weights on doubly occupied modes. Norm-preserving.
PhotonConfig apply_pbs(const PhotonConfig& field, const PbsModel& pbs);

struct Coincidence {
  double probability;   // kept probability
  TwoQubitState joint;  // F-photon (x) G-photon polarization state
};

// Projects onto one photon per output arm. nullopt when nothing survives.
std::optional<Coincidence> postselect_coincidence(const PhotonConfig& field);

// Exact per-run probability table, conditioned on a coincidence: readout
// click (D_H / D_V on the G arm), the corrected signal state, and the joint
// readout x analyzer probabilities. The sampler draws from this table, and
// equivalence tests compare it against the channel branch table.
struct ClickTable {
  double coincidence_probability = 0.0;
  std::array<double, 2> readout_probability{};   // [D_H, D_V]
  std::array<PureQubit, 2> output_state{};       // after optional sigma_Z
  std::array<std::array<double, 2>, 2> joint{};  // [readout][phi, phi_perp]
};

ClickTable click_table(const PureQubit& signal, MeasurementStrength theta,
                       const PbsModel& pbs, bool feed_forward_enabled);

struct ExperimentConfig {
  MeasurementStrength theta;
  PbsModel pbs;
  long trials;
  std::uint64_t seed;
  bool feed_forward_enabled = true;
};

enum class ReadoutClick { DH, DV };
enum class AnalyzerClick { DPhi, DPhiPerp };

struct ShotRecord {
  bool discarded = false;
  ReadoutClick readout = ReadoutClick::DH;
  AnalyzerClick analyzer = AnalyzerClick::DPhi;
};

// One run through the full chain: beam splitter, post-selection, probe
// readout, conditional correction, output analysis.
ShotRecord run_shot(const ExperimentConfig& config, const PureQubit& signal,
                    RandomStream& rng);
// Sampling core for a precomputed table.
ShotRecord draw_shot(const ClickTable& table, RandomStream& rng);

struct CoincidenceCounts {
  std::uint64_t n_h_phi = 0;
  std::uint64_t n_v_phi = 0;
  std::uint64_t n_h_phiperp = 0;
  std::uint64_t n_v_phiperp = 0;
  std::uint64_t n_discarded = 0;
  std::uint64_t total_trials = 0;

  std::uint64_t coincidences() const {
    return n_h_phi + n_v_phi + n_h_phiperp + n_v_phiperp;
  }
};

// Aggregates config.trials shots. Deterministic for a fixed (seed, workers)
// pair; worker w draws from the substream derive(config.seed, w) and counts
// merge by addition.
CoincidenceCounts simulate_counts(const ExperimentConfig& config,
                                  const PureQubit& signal, int workers = 1);

// F = (n_h_phi + n_v_phi) / coincidences.
double estimate_fidelity(const CoincidenceCounts& counts);
// G = P_H |<phi|H>|^2 + P_V |<phi|V>|^2 with P_i from normalized counts.
double estimate_guess(const CoincidenceCounts& counts,
                      const PureQubit& signal);

}  // namespace mdm
