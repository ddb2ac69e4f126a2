#include "mdm/optics_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace mdm {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;
constexpr double kSqrtTwo = 1.41421356237309504880;

// Basis order: unordered mode pairs (i <= j).
constexpr std::array<std::array<int, 2>, PhotonConfig::kBasisSize> kPairs{{
    {0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1},
    {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3},
}};

constexpr std::array<int, 4> kRowStart{0, 4, 7, 9};

// Mode transfer matrix of the beam splitter: row = input mode, col = output
// mode. Polarization is preserved; the spatial slot either stays
// (transmission) or swaps (reflection).
std::array<std::array<Amplitude, 4>, 4> transfer_matrix(const PbsModel& pbs) {
  std::array<std::array<Amplitude, 4>, 4> t{};
  const double th = std::sqrt(1.0 - pbs.r_h());
  const double rh = std::sqrt(pbs.r_h());
  const double tv = std::sqrt(1.0 - pbs.r_v());
  const double rv = std::sqrt(pbs.r_v());
  // H block: (sqrt(1-r), i sqrt(r)).
  t[0][0] = Amplitude(th, 0.0);
  t[0][2] = Amplitude(0.0, rh);
  t[2][2] = Amplitude(th, 0.0);
  t[2][0] = Amplitude(0.0, rh);
  // V block: same matrix times a global -i.
  t[1][1] = Amplitude(0.0, -tv);
  t[1][3] = Amplitude(rv, 0.0);
  t[3][3] = Amplitude(0.0, -tv);
  t[3][1] = Amplitude(rv, 0.0);
  return t;
}

}  // namespace

PbsModel::PbsModel(double r_h, double r_v) : r_h_(r_h), r_v_(r_v) {
  if (!(r_h_ >= 0.0 && r_h_ <= 1.0) || !(r_v_ >= 0.0 && r_v_ <= 1.0)) {
    throw std::invalid_argument(
        "PbsModel: reflectivities must lie in [0, 1]");
  }
}

double PhotonConfig::norm_squared() const {
  double n2 = 0.0;
  for (const auto& a : amps_) n2 += std::norm(a);
  return n2;
}

const std::array<std::array<int, PhotonConfig::kModeCount>,
                 PhotonConfig::kBasisSize>&
PhotonConfig::occupations() {
  static const std::array<std::array<int, kModeCount>, kBasisSize> table = [] {
    std::array<std::array<int, kModeCount>, kBasisSize> occ{};
    for (int b = 0; b < kBasisSize; ++b) {
      occ[b][kPairs[b][0]] += 1;
      occ[b][kPairs[b][1]] += 1;
    }
    return occ;
  }();
  return table;
}

int PhotonConfig::basis_index(int mode_a, int mode_b) {
  const int i = std::min(mode_a, mode_b);
  const int j = std::max(mode_a, mode_b);
  return kRowStart[i] + (j - i);
}

PhotonConfig build_input(const PureQubit& signal) {
  PhotonConfig field;
  const std::array<Amplitude, 2> sig{signal.alpha(), signal.beta()};
  for (int sp = 0; sp < 2; ++sp) {    // signal polarization, modes 0/1
    for (int pp = 0; pp < 2; ++pp) {  // probe polarization, modes 2/3
      field.set_amplitude(PhotonConfig::basis_index(sp, 2 + pp),
                          sig[sp] * kSqrtHalf);
    }
  }
  return field;
}

PhotonConfig apply_pbs(const PhotonConfig& field, const PbsModel& pbs) {
  const auto t = transfer_matrix(pbs);

  // Expand each creation-operator monomial a_i^dag a_j^dag through the
  // transfer matrix, collecting ordered coefficients q[k][l].
  std::array<std::array<Amplitude, 4>, 4> q{};
  for (int b = 0; b < PhotonConfig::kBasisSize; ++b) {
    const Amplitude c = field.amplitude(b);
    if (c == Amplitude(0.0)) continue;
    const int i = kPairs[b][0];
    const int j = kPairs[b][1];
    // Fock amplitude -> monomial coefficient (a^dag^2 |0> = sqrt2 |2>).
    const Amplitude p = i == j ? c / kSqrtTwo : c;
    for (int k = 0; k < 4; ++k) {
      if (t[i][k] == Amplitude(0.0)) continue;
      for (int l = 0; l < 4; ++l) {
        if (t[j][l] == Amplitude(0.0)) continue;
        q[k][l] += p * t[i][k] * t[j][l];
      }
    }
  }

  PhotonConfig out;
  for (int k = 0; k < 4; ++k) {
    out.set_amplitude(PhotonConfig::basis_index(k, k), q[k][k] * kSqrtTwo);
    for (int l = k + 1; l < 4; ++l) {
      out.set_amplitude(PhotonConfig::basis_index(k, l), q[k][l] + q[l][k]);
    }
  }
  return out;
}

std::optional<Coincidence> postselect_coincidence(const PhotonConfig& field) {
  // One photon in arm F (mode 0 or 1) and one in arm G (mode 2 or 3); the
  // two-qubit index is 2 * F-polarization + G-polarization.
  std::array<Amplitude, 4> joint{};
  double prob = 0.0;
  for (int fp = 0; fp < 2; ++fp) {
    for (int gp = 0; gp < 2; ++gp) {
      const Amplitude a =
          field.amplitude(PhotonConfig::basis_index(fp, 2 + gp));
      joint[2 * fp + gp] = a;
      prob += std::norm(a);
    }
  }
  if (prob < kZeroWeight) return std::nullopt;
  const double inv = 1.0 / std::sqrt(prob);
  for (auto& a : joint) a *= inv;
  return Coincidence{prob, TwoQubitState(joint, std::min(prob, 1.0))};
}

ClickTable click_table(const PureQubit& signal, MeasurementStrength theta,
                       const PbsModel& pbs, bool feed_forward_enabled) {
  ClickTable table;
  const auto kept = postselect_coincidence(apply_pbs(build_input(signal), pbs));
  if (!kept) return table;  // everything bunched; all shots discarded

  table.coincidence_probability = kept->probability;
  const PureQubit phi_perp = orthogonal(signal);
  // The G arm realizes the rotated-basis probe readout: D_H plays G0 and
  // D_V plays G1; a D_V click triggers sigma_Z on the F arm.
  const auto readout = readout_probe(kept->joint, theta);
  for (int k = 0; k < 2; ++k) {
    const PureQubit out =
        feed_forward_enabled
            ? feed_forward(readout[k].state, ParityOutcome::Even,
                           readout[k].outcome)
            : readout[k].state;
    table.readout_probability[k] = readout[k].probability;
    table.output_state[k] = out;
    table.joint[k][0] = readout[k].probability * overlap(signal, out);
    table.joint[k][1] = readout[k].probability * overlap(phi_perp, out);
  }
  return table;
}

ShotRecord draw_shot(const ClickTable& table, RandomStream& rng) {
  const double pc = table.coincidence_probability;
  const double u = rng.uniform();
  double acc = 1.0 - pc;
  if (u < acc) return ShotRecord{true, ReadoutClick::DH, AnalyzerClick::DPhi};
  for (int k = 0; k < 2; ++k) {
    for (int a = 0; a < 2; ++a) {
      acc += pc * table.joint[k][a];
      if (u < acc) {
        return ShotRecord{false,
                          k == 0 ? ReadoutClick::DH : ReadoutClick::DV,
                          a == 0 ? AnalyzerClick::DPhi
                                 : AnalyzerClick::DPhiPerp};
      }
    }
  }
  // Rounding pushed u past the last edge; attribute to the final category.
  return ShotRecord{false, ReadoutClick::DV, AnalyzerClick::DPhiPerp};
}

ShotRecord run_shot(const ExperimentConfig& config, const PureQubit& signal,
                    RandomStream& rng) {
  if (config.trials < 1) {
    throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
  }
  return draw_shot(click_table(signal, config.theta, config.pbs,
                               config.feed_forward_enabled),
                   rng);
}

namespace {

void tally(const ShotRecord& shot, CoincidenceCounts& counts) {
  if (shot.discarded) {
    ++counts.n_discarded;
  } else if (shot.readout == ReadoutClick::DH) {
    if (shot.analyzer == AnalyzerClick::DPhi) {
      ++counts.n_h_phi;
    } else {
      ++counts.n_h_phiperp;
    }
  } else {
    if (shot.analyzer == AnalyzerClick::DPhi) {
      ++counts.n_v_phi;
    } else {
      ++counts.n_v_phiperp;
    }
  }
}

CoincidenceCounts count_block(const ClickTable& table, long trials,
                              RandomStream rng) {
  CoincidenceCounts counts;
  for (long i = 0; i < trials; ++i) tally(draw_shot(table, rng), counts);
  return counts;
}

}  // namespace

CoincidenceCounts simulate_counts(const ExperimentConfig& config,
                                  const PureQubit& signal, int workers) {
  if (config.trials < 1) {
    throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
  }
  if (workers < 1) {
    throw std::invalid_argument("simulate_counts: workers must be >= 1");
  }
  const ClickTable table = click_table(signal, config.theta, config.pbs,
                                       config.feed_forward_enabled);

  CoincidenceCounts total;
  total.total_trials = static_cast<std::uint64_t>(config.trials);
  if (workers == 1) {
    const CoincidenceCounts c =
        count_block(table, config.trials, RandomStream::derive(config.seed, 0));
    total.n_h_phi = c.n_h_phi;
    total.n_v_phi = c.n_v_phi;
    total.n_h_phiperp = c.n_h_phiperp;
    total.n_v_phiperp = c.n_v_phiperp;
    total.n_discarded = c.n_discarded;
    return total;
  }

  std::vector<CoincidenceCounts> partial(static_cast<std::size_t>(workers));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  const long base = config.trials / workers;
  const long extra = config.trials % workers;
  for (int w = 0; w < workers; ++w) {
    const long share = base + (w < extra ? 1 : 0);
    threads.emplace_back([&, w, share] {
      partial[static_cast<std::size_t>(w)] = count_block(
          table, share, RandomStream::derive(config.seed,
                                             static_cast<std::uint64_t>(w)));
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& c : partial) {
    total.n_h_phi += c.n_h_phi;
    total.n_v_phi += c.n_v_phi;
    total.n_h_phiperp += c.n_h_phiperp;
    total.n_v_phiperp += c.n_v_phiperp;
    total.n_discarded += c.n_discarded;
  }
  return total;
}

double estimate_fidelity(const CoincidenceCounts& counts) {
  const std::uint64_t nc = counts.coincidences();
  if (nc == 0) {
    throw std::invalid_argument(
        "estimate_fidelity: undefined with zero coincidences");
  }
  return static_cast<double>(counts.n_h_phi + counts.n_v_phi) /
         static_cast<double>(nc);
}

double estimate_guess(const CoincidenceCounts& counts,
                      const PureQubit& signal) {
  const std::uint64_t nc = counts.coincidences();
  if (nc == 0) {
    throw std::invalid_argument(
        "estimate_guess: undefined with zero coincidences");
  }
  const double p_h = static_cast<double>(counts.n_h_phi + counts.n_h_phiperp) /
                     static_cast<double>(nc);
  const double w_h = std::norm(signal.alpha());
  const double w_v = std::norm(signal.beta());
  return p_h * w_h + (1.0 - p_h) * w_v;
}

}  // namespace mdm
