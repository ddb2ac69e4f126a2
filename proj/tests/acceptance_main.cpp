// acceptance_main.cpp
// Integration gate for the simulator. Each criterion prints one PASS/FAIL
// line with the measured figure, its pinned tolerance, and the elapsed time;
// the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "mdm/ensembles.hpp"
#include "mdm/mdm_protocol.hpp"
#include "mdm/optics_sim.hpp"
#include "mdm/quantum_core.hpp"
#include "mdm/random.hpp"
#include "mdm/tradeoff_bounds.hpp"

using namespace mdm;

namespace {

constexpr double kHalfSqrt = 0.70710678118654752440;
const double kQuarterPi = std::numbers::pi / 4.0;

int g_failures = 0;

class Criterion {
 public:
  Criterion(int id, std::string name, double budget_seconds)
      : id_(id), name_(std::move(name)), budget_(budget_seconds),
        start_(std::chrono::steady_clock::now()) {}

  void finish(bool pass, const std::string& detail) {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_)
            .count();
    const bool in_budget = elapsed < budget_;
    const bool ok = pass && in_budget;
    if (!ok) ++g_failures;
    std::printf("[%s] criterion %2d: %s — %s (%.2fs of %.0fs budget)\n",
                ok ? "PASS" : "FAIL", id_, name_.c_str(), detail.c_str(),
                elapsed, budget_);
    std::fflush(stdout);
  }

 private:
  int id_;
  std::string name_;
  double budget_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct EnsembleMc {
  double f = 0.0;
  double g = 0.0;
  double se_f = 0.0;
  double se_g = 0.0;
};

// Counting run over a discrete state set: unweighted mean of the per-state
// estimates with propagated standard errors.
EnsembleMc run_ensemble(const std::vector<LabeledState>& states,
                        MeasurementStrength theta, const PbsModel& pbs,
                        long trials, std::uint64_t seed_base) {
  EnsembleMc out;
  double var_f = 0.0;
  double var_g = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const ExperimentConfig config{theta, pbs, trials,
                                  mix_seed(seed_base, i), true};
    const CoincidenceCounts counts = simulate_counts(config, states[i].state);
    const double nc = static_cast<double>(counts.coincidences());
    const double f = estimate_fidelity(counts);
    const double g = estimate_guess(counts, states[i].state);
    out.f += f;
    out.g += g;
    var_f += std::max(f * (1.0 - f), 0.0) / nc;
    const double p_h =
        static_cast<double>(counts.n_h_phi + counts.n_h_phiperp) / nc;
    const double spread = std::abs(std::norm(states[i].state.alpha()) -
                                   std::norm(states[i].state.beta()));
    var_g += spread * spread * std::max(p_h * (1.0 - p_h), 0.0) / nc;
  }
  const double n = static_cast<double>(states.size());
  out.f /= n;
  out.g /= n;
  out.se_f = std::sqrt(var_f) / n;
  out.se_g = std::sqrt(var_g) / n;
  return out;
}

bool within(double value, double target, double se, double exact_tol,
            double* worst) {
  const double tol = std::max(3.0 * se, exact_tol);
  const double err = std::abs(value - target);
  if (worst != nullptr) *worst = std::max(*worst, err - tol);
  return err <= tol;
}

void criterion_bound_saturation(int id, BoundFamily family,
                                const std::string& label) {
  Criterion c(id, "bound saturation (" + label + ")", 1.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const MeasurementStrength theta(kQuarterPi * t / 999.0);
    worst = std::max(worst, std::abs(saturation_residual(theta, family)));
  }
  c.finish(worst <= 1e-12, "max |residual| = " + fmt(worst) + " <= 1e-12");
}

void criterion_extreme_points() {
  Criterion c(3, "extreme points exact", 1.0);
  const MeasurementStrength strong(0.0);
  const MeasurementStrength weak(kQuarterPi);
  const EnsembleSpec haar{EnsembleFamily::UniversalHaar, 0};
  const EnsembleSpec equ{EnsembleFamily::CovariantEquatorial, 0};

  double worst = 0.0;
  const auto check = [&](const TradeoffPoint& p, double g, double f) {
    worst = std::max({worst, std::abs(p.g - g), std::abs(p.f - f)});
  };
  check(average_tradeoff(strong, haar), 2.0 / 3.0, 2.0 / 3.0);
  check(average_tradeoff(weak, haar), 0.5, 1.0);
  check(average_tradeoff(strong, equ), 0.75, 0.75);
  check(average_tradeoff(weak, equ), 0.5, 1.0);
  c.finish(worst <= 1e-12, "max deviation = " + fmt(worst) + " <= 1e-12");
}

void criterion_channel_equivalence() {
  Criterion c(4, "closed forms match the enumerated channel", 5.0);
  RandomStream rng(20010);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PureQubit signal = sample_haar(rng);
    for (int t = 0; t < 32; ++t) {
      const MeasurementStrength theta(kQuarterPi * t / 31.0);
      const MdmResult result = mdm_channel(signal, theta, Regime::Abstract);
      worst = std::max(worst, std::abs(output_fidelity(signal, theta) -
                                       fidelity(signal, result.rho_f)));
      worst = std::max(worst, std::abs(guess_fidelity(signal, theta) -
                                       fidelity(signal, result.rho_g)));
    }
  }
  c.finish(worst <= 1e-12,
           "1000 states x 32 theta, max |delta| = " + fmt(worst));
}

void criterion_optics_equivalence() {
  Criterion c(5, "optics click table matches the channel branch table", 30.0);
  RandomStream rng(20011);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const PureQubit signal = sample_haar(rng);
    const PureQubit perp = orthogonal(signal);
    for (int t = 0; t < 16; ++t) {
      const MeasurementStrength theta(kQuarterPi * t / 15.0);
      const ClickTable table =
          click_table(signal, theta, PbsModel::ideal(), true);
      const MdmResult channel =
          mdm_channel(signal, theta, Regime::OpticsFaithful);
      worst = std::max(worst, std::abs(table.coincidence_probability -
                                       channel.kept_weight));
      for (int k = 0; k < 2; ++k) {
        const auto& branch = channel.branches[static_cast<std::size_t>(k)];
        worst = std::max(worst, std::abs(table.readout_probability[k] -
                                         branch.probability));
        worst = std::max(
            worst, std::abs(table.joint[k][0] -
                            branch.probability * overlap(signal, branch.state)));
        worst = std::max(
            worst, std::abs(table.joint[k][1] -
                            branch.probability * overlap(perp, branch.state)));
      }
    }
  }
  c.finish(worst <= 1e-12,
           "200 states x 16 theta, max |delta| = " + fmt(worst));
}

void criterion_coincidence_probability() {
  Criterion c(6, "coincidence probability is exactly 1/2", 5.0);
  double worst = 0.0;
  const auto probe = [&](const PureQubit& signal) {
    const auto kept = postselect_coincidence(
        apply_pbs(build_input(signal), PbsModel::ideal()));
    worst = kept ? std::max(worst, std::abs(kept->probability - 0.5)) : 1.0;
  };
  for (const auto& s : universal_six()) probe(s.state);
  RandomStream rng(20012);
  for (int i = 0; i < 100; ++i) probe(sample_haar(rng));
  c.finish(worst <= 1e-12, "max |p - 1/2| = " + fmt(worst));
}

void criterion_mc_limits() {
  Criterion c(7, "counting runs reproduce the theoretical limits", 60.0);
  const long trials = 100000;
  bool pass = true;
  double worst = 0.0;
  std::uint64_t seed = 20013;

  struct Setting {
    EnsembleFamily family;
    double theta;
    double g, f;
  };
  const std::vector<Setting> settings{
      {EnsembleFamily::UniversalSix, 0.0, 2.0 / 3.0, 2.0 / 3.0},
      {EnsembleFamily::UniversalSix, kQuarterPi, 0.5, 1.0},
      {EnsembleFamily::CovariantFour, 0.0, 0.75, 0.75},
      {EnsembleFamily::CovariantFour, kQuarterPi, 0.5, 1.0},
  };
  for (const auto& s : settings) {
    const auto& states = s.family == EnsembleFamily::UniversalSix
                             ? universal_six()
                             : covariant_four();
    const EnsembleMc mc = run_ensemble(states, MeasurementStrength(s.theta),
                                       PbsModel::ideal(), trials, seed++);
    pass = within(mc.g, s.g, mc.se_g, 1e-12, &worst) && pass;
    pass = within(mc.f, s.f, mc.se_f, 1e-12, &worst) && pass;
  }
  c.finish(pass, "all four settings within 3 sigma (worst margin excess " +
                     fmt(worst) + ")");
}

void criterion_discrete_sufficiency() {
  Criterion c(8, "finite sets equal the continuous averages", 1.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const MeasurementStrength theta(kQuarterPi * t / 999.0);
    const auto haar =
        average_tradeoff(theta, {EnsembleFamily::UniversalHaar, 0});
    const auto six =
        average_tradeoff(theta, {EnsembleFamily::UniversalSix, 0});
    const auto equ =
        average_tradeoff(theta, {EnsembleFamily::CovariantEquatorial, 0});
    const auto four =
        average_tradeoff(theta, {EnsembleFamily::CovariantFour, 0});
    worst = std::max({worst, std::abs(six.f - haar.f), std::abs(six.g - haar.g),
                      std::abs(four.f - equ.f), std::abs(four.g - equ.g)});
  }
  c.finish(worst <= 1e-12, "max |delta| = " + fmt(worst) + " <= 1e-12");
}

void criterion_imperfect_brackets() {
  Criterion c(9, "worn-splitter run stays below ideal and in the brackets",
              300.0);
  const long trials = 1000000;
  const PbsModel worn(0.03, 1.0);
  bool pass = true;
  std::string note;
  std::uint64_t seed = 20014;

  struct Setting {
    EnsembleFamily family;
    double theta;
    double bracket_lo, bracket_hi;  // F bracket at the max-G setting only
    bool check_bracket;
  };
  const std::vector<Setting> settings{
      {EnsembleFamily::UniversalSix, 0.0, 0.642, 0.667, true},
      {EnsembleFamily::UniversalSix, kQuarterPi, 0.0, 0.0, false},
      {EnsembleFamily::CovariantFour, 0.0, 0.723, 0.75, true},
      {EnsembleFamily::CovariantFour, kQuarterPi, 0.0, 0.0, false},
  };
  for (const auto& s : settings) {
    const bool universal = s.family == EnsembleFamily::UniversalSix;
    const auto& states = universal ? universal_six() : covariant_four();
    const MeasurementStrength theta(s.theta);
    const auto ideal = average_tradeoff(
        theta, {universal ? EnsembleFamily::UniversalHaar
                          : EnsembleFamily::CovariantEquatorial,
                0});
    const EnsembleMc mc =
        run_ensemble(states, theta, worn, trials, seed++);

    const bool f_below = mc.f <= ideal.f + std::max(3.0 * mc.se_f, 1e-12);
    const bool g_below = mc.g <= ideal.g + std::max(3.0 * mc.se_g, 1e-12);
    bool in_bracket = true;
    if (s.check_bracket) {
      in_bracket = mc.f >= s.bracket_lo && mc.f <= s.bracket_hi;
      note += (universal ? std::string(" F_univ=") : std::string(" F_cov=")) +
              fmt(mc.f);
    }
    pass = pass && f_below && g_below && in_bracket;
  }
  c.finish(pass, "degraded values below ideal;" + note +
                     " inside [0.642,0.667] / [0.723,0.75]");
}

void criterion_feed_forward_necessity() {
  Criterion c(10, "disabling feed-forward measurably reduces fidelity", 60.0);
  const MeasurementStrength theta(std::numbers::pi / 8.0);
  const PureQubit plus{Amplitude(kHalfSqrt), Amplitude(kHalfSqrt)};
  const ExperimentConfig config{theta, PbsModel::ideal(), 1000000, 20015,
                                false};
  const CoincidenceCounts counts = simulate_counts(config, plus);
  const double f_off = estimate_fidelity(counts);
  const double se = std::sqrt(std::max(f_off * (1.0 - f_off), 0.0) /
                              static_cast<double>(counts.coincidences()));
  const double f_expected = output_fidelity(plus, theta);
  const bool pass = f_off + 5.0 * se < f_expected;
  c.finish(pass, "F_off = " + fmt(f_off) + " + 5se < " + fmt(f_expected));
}

}  // namespace

int main() {
  std::printf("acceptance suite, tolerances pinned in-source\n");
  criterion_bound_saturation(1, BoundFamily::Universal, "universal");
  criterion_bound_saturation(2, BoundFamily::Covariant, "covariant");
  criterion_extreme_points();
  criterion_channel_equivalence();
  criterion_optics_equivalence();
  criterion_coincidence_probability();
  criterion_mc_limits();
  criterion_discrete_sufficiency();
  criterion_imperfect_brackets();
  criterion_feed_forward_necessity();
  if (g_failures == 0) {
    std::printf("all 10 criteria passed\n");
  } else {
    std::printf("%d criterion(s) failed\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
