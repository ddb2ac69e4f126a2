#include "mdm/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mdm {

namespace {

bool is_finite(Amplitude a) {
  return std::isfinite(a.real()) && std::isfinite(a.imag());
}

}  // namespace

PureQubit::PureQubit(Amplitude alpha, Amplitude beta)
    : alpha_(alpha), beta_(beta) {
  if (!is_finite(alpha) || !is_finite(beta)) {
    throw std::invalid_argument("PureQubit: amplitudes must be finite");
  }
  const double n = std::sqrt(std::norm(alpha_) + std::norm(beta_));
  if (std::abs(n - 1.0) > kConstructTol) {
    throw std::invalid_argument(
        "PureQubit: amplitudes are not normalized (|norm - 1| > 1e-9)");
  }
  alpha_ /= n;
  beta_ /= n;
}

DensityMatrix2::DensityMatrix2(const std::array<Amplitude, 4>& entries)
    : m_(entries) {
  for (const auto& e : m_) {
    if (!is_finite(e)) {
      throw std::invalid_argument("DensityMatrix2: entries must be finite");
    }
  }
  if (std::abs(m_[0].imag()) > kConstructTol ||
      std::abs(m_[3].imag()) > kConstructTol ||
      std::abs(m_[1] - std::conj(m_[2])) > kConstructTol) {
    throw std::invalid_argument("DensityMatrix2: matrix is not Hermitian");
  }
  const double tr = m_[0].real() + m_[3].real();
  if (std::abs(tr - 1.0) > kConstructTol) {
    throw std::invalid_argument("DensityMatrix2: trace differs from 1");
  }
  // Exactify: symmetrize and rescale.
  m_[0] = Amplitude(m_[0].real() / tr, 0.0);
  m_[3] = Amplitude(m_[3].real() / tr, 0.0);
  const Amplitude off = (m_[1] + std::conj(m_[2])) / (2.0 * tr);
  m_[1] = off;
  m_[2] = std::conj(off);
  if (min_eigenvalue() < -kConstructTol) {
    throw std::invalid_argument("DensityMatrix2: matrix is not PSD");
  }
}

DensityMatrix2 DensityMatrix2::from_pure(const PureQubit& psi) {
  const Amplitude a = psi.alpha();
  const Amplitude b = psi.beta();
  return DensityMatrix2({a * std::conj(a), a * std::conj(b),
                         b * std::conj(a), b * std::conj(b)});
}

DensityMatrix2 DensityMatrix2::maximally_mixed() {
  return DensityMatrix2({Amplitude(0.5), Amplitude(0.0),
                         Amplitude(0.0), Amplitude(0.5)});
}

DensityMatrix2 DensityMatrix2::diagonal(double p0, double p1) {
  return DensityMatrix2({Amplitude(p0), Amplitude(0.0),
                         Amplitude(0.0), Amplitude(p1)});
}

double DensityMatrix2::min_eigenvalue() const {
  const double a = m_[0].real();
  const double d = m_[3].real();
  const double half_diff = 0.5 * (a - d);
  const double disc = std::sqrt(half_diff * half_diff + std::norm(m_[1]));
  return 0.5 * (a + d) - disc;
}

bool DensityMatrix2::is_diagonal(double tol) const {
  return std::abs(m_[1]) <= tol && std::abs(m_[2]) <= tol;
}

TwoQubitState::TwoQubitState(const std::array<Amplitude, 4>& amps,
                             double weight)
    : amps_(amps), weight_(weight) {
  if (!(weight_ >= 0.0) || weight_ > 1.0 + kConstructTol) {
    throw std::invalid_argument("TwoQubitState: weight must lie in [0, 1]");
  }
  weight_ = std::min(weight_, 1.0);
  double n2 = 0.0;
  for (const auto& a : amps_) {
    if (!is_finite(a)) {
      throw std::invalid_argument("TwoQubitState: amplitudes must be finite");
    }
    n2 += std::norm(a);
  }
  const double n = std::sqrt(n2);
  if (std::abs(n - 1.0) > kConstructTol) {
    throw std::invalid_argument("TwoQubitState: vector is not normalized");
  }
  for (auto& a : amps_) a /= n;
}

Operator2 Operator2::identity() {
  return Operator2({Amplitude(1.0), Amplitude(0.0),
                    Amplitude(0.0), Amplitude(1.0)});
}

Operator2 Operator2::sigma_z() {
  return Operator2({Amplitude(1.0), Amplitude(0.0),
                    Amplitude(0.0), Amplitude(-1.0)});
}

PureQubit Operator2::apply(const PureQubit& psi) const {
  return PureQubit(m_[0] * psi.alpha() + m_[1] * psi.beta(),
                   m_[2] * psi.alpha() + m_[3] * psi.beta());
}

bool Operator2::is_unitary(double tol) const {
  // U^dagger U == I
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Amplitude s(0.0);
      for (int k = 0; k < 2; ++k) s += std::conj(entry(k, i)) * entry(k, j);
      if (std::abs(s - (i == j ? Amplitude(1.0) : Amplitude(0.0))) > tol) {
        return false;
      }
    }
  }
  return true;
}

bool Operator2::is_projector(double tol) const {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (std::abs(entry(i, j) - std::conj(entry(j, i))) > tol) return false;
      Amplitude s(0.0);
      for (int k = 0; k < 2; ++k) s += entry(i, k) * entry(k, j);
      if (std::abs(s - entry(i, j)) > tol) return false;
    }
  }
  return true;
}

Operator4 Operator4::identity() {
  std::array<Amplitude, 16> m{};
  for (int i = 0; i < 4; ++i) m[i * 4 + i] = Amplitude(1.0);
  return Operator4(m);
}

Operator4 Operator4::parity_even() {
  std::array<Amplitude, 16> m{};
  m[0 * 4 + 0] = Amplitude(1.0);
  m[3 * 4 + 3] = Amplitude(1.0);
  return Operator4(m);
}

Operator4 Operator4::parity_odd() {
  std::array<Amplitude, 16> m{};
  m[1 * 4 + 1] = Amplitude(1.0);
  m[2 * 4 + 2] = Amplitude(1.0);
  return Operator4(m);
}

std::array<Amplitude, 4> Operator4::apply(
    const std::array<Amplitude, 4>& v) const {
  std::array<Amplitude, 4> out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out[i] += entry(i, j) * v[j];
  }
  return out;
}

bool Operator4::is_unitary(double tol) const {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Amplitude s(0.0);
      for (int k = 0; k < 4; ++k) s += std::conj(entry(k, i)) * entry(k, j);
      if (std::abs(s - (i == j ? Amplitude(1.0) : Amplitude(0.0))) > tol) {
        return false;
      }
    }
  }
  return true;
}

bool Operator4::is_projector(double tol) const {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (std::abs(entry(i, j) - std::conj(entry(j, i))) > tol) return false;
      Amplitude s(0.0);
      for (int k = 0; k < 4; ++k) s += entry(i, k) * entry(k, j);
      if (std::abs(s - entry(i, j)) > tol) return false;
    }
  }
  return true;
}

double fidelity(const PureQubit& phi, const DensityMatrix2& rho) {
  const double n2 = std::norm(phi.alpha()) + std::norm(phi.beta());
  if (std::abs(n2 - 1.0) > kConstructTol) {
    throw std::invalid_argument("fidelity: phi is not normalized");
  }
  if (std::abs(rho.trace() - 1.0) > kConstructTol) {
    throw std::invalid_argument("fidelity: rho does not have unit trace");
  }
  const std::array<Amplitude, 2> v{phi.alpha(), phi.beta()};
  Amplitude f(0.0);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) f += std::conj(v[i]) * rho.entry(i, j) * v[j];
  }
  if (std::abs(f.imag()) > kInvariantTol) {
    throw std::runtime_error("fidelity: imaginary residue exceeds tolerance");
  }
  return std::clamp(f.real(), 0.0, 1.0);
}

double overlap(const PureQubit& a, const PureQubit& b) {
  const Amplitude ip =
      std::conj(a.alpha()) * b.alpha() + std::conj(a.beta()) * b.beta();
  return std::min(std::norm(ip), 1.0);
}

PureQubit orthogonal(const PureQubit& psi) {
  return PureQubit(-std::conj(psi.beta()), std::conj(psi.alpha()));
}

std::optional<ReducedSignal> partial_trace_probe(const TwoQubitState& state) {
  if (state.weight() < kZeroWeight) return std::nullopt;
  // rho_S[s][s'] = sum_p Phi[2s+p] conj(Phi[2s'+p])
  std::array<Amplitude, 4> rho{};
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      Amplitude e(0.0);
      for (int p = 0; p < 2; ++p) {
        e += state.amplitude(2 * s + p) * std::conj(state.amplitude(2 * t + p));
      }
      rho[s * 2 + t] = e;
    }
  }
  return ReducedSignal{DensityMatrix2(rho), state.weight()};
}

PureQubit equatorial_state(double gamma) {
  if (!std::isfinite(gamma)) {
    throw std::invalid_argument("equatorial_state: gamma must be finite");
  }
  return PureQubit(Amplitude(std::cos(gamma)), Amplitude(std::sin(gamma)));
}

PureQubit sample_haar(RandomStream& rng) {
  const double u = rng.uniform();
  const double chi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return PureQubit(Amplitude(std::sqrt(u)),
                   std::polar(std::sqrt(1.0 - u), chi));
}

}  // namespace mdm
