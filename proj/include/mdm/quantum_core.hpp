// quantum_core.hpp
// Exact state and operator algebra for one and two qubits: pure states,
// density matrices, projectors, partial trace, fidelity and state
// constructors. Basis convention everywhere: index 0 = |H>, index 1 = |V>.

#pragma once

#include <array>
#include <complex>
#include <optional>

#include "mdm/random.hpp"

namespace mdm {

using Amplitude = std::complex<double>;

// Tolerance used by type-invariant assertions.
inline constexpr double kInvariantTol = 1e-12;
// Constructors renormalize inputs within this distance of normalized and
// reject anything worse; separates rounding drift from caller bugs.
inline constexpr double kConstructTol = 1e-9;
// Squared norms below this count as an empty branch.
inline constexpr double kZeroWeight = 1e-24;

// Normalized single-qubit pure state.
class PureQubit {
 public:
  PureQubit() : alpha_(1.0, 0.0), beta_(0.0, 0.0) {}
  PureQubit(Amplitude alpha, Amplitude beta);

  Amplitude alpha() const { return alpha_; }
  Amplitude beta() const { return beta_; }

  // |alpha|^2 |beta|^2, the quantity all closed forms depend on.
  double population_product() const {
    return std::norm(alpha_) * std::norm(beta_);
  }

  static PureQubit horizontal() { return PureQubit(); }
  static PureQubit vertical() { return PureQubit({0.0, 0.0}, {1.0, 0.0}); }

 private:
  Amplitude alpha_;
  Amplitude beta_;
};

// 2x2 Hermitian, trace-one, positive-semidefinite matrix.
class DensityMatrix2 {
 public:
  // Entries row-major {m00, m01, m10, m11}. The constructor verifies
  // Hermiticity / trace / positivity within kConstructTol, then symmetrizes
  // and rescales so the stored matrix satisfies the invariants exactly.
  explicit DensityMatrix2(const std::array<Amplitude, 4>& entries);

  static DensityMatrix2 from_pure(const PureQubit& psi);
  static DensityMatrix2 maximally_mixed();
  static DensityMatrix2 diagonal(double p0, double p1);

  Amplitude entry(int row, int col) const { return m_[row * 2 + col]; }
  double trace() const { return m_[0].real() + m_[3].real(); }
  double min_eigenvalue() const;

  // True when every off-diagonal magnitude is below tol.
  bool is_diagonal(double tol = kInvariantTol) const;

 private:
  std::array<Amplitude, 4> m_;
};

// Normalized two-qubit vector on basis |00>,|01>,|10>,|11> (signal x probe)
// with the branch probability carried alongside.
class TwoQubitState {
 public:
  TwoQubitState(const std::array<Amplitude, 4>& amps, double weight);

  Amplitude amplitude(int index) const { return amps_[index]; }
  const std::array<Amplitude, 4>& amplitudes() const { return amps_; }
  double weight() const { return weight_; }

 private:
  std::array<Amplitude, 4> amps_;
  double weight_;
};

// 2x2 complex operator; houses sigma_Z and the single-qubit identity.
class Operator2 {
 public:
  explicit Operator2(const std::array<Amplitude, 4>& entries) : m_(entries) {}

  static Operator2 identity();
  static Operator2 sigma_z();

  Amplitude entry(int row, int col) const { return m_[row * 2 + col]; }
  PureQubit apply(const PureQubit& psi) const;

  bool is_unitary(double tol = kInvariantTol) const;
  bool is_projector(double tol = kInvariantTol) const;

 private:
  std::array<Amplitude, 4> m_;
};

// 4x4 complex operator; houses the parity projectors E0 and E1.
class Operator4 {
 public:
  explicit Operator4(const std::array<Amplitude, 16>& entries) : m_(entries) {}

  static Operator4 identity();
  static Operator4 parity_even();  // |00><00| + |11><11|
  static Operator4 parity_odd();   // I - parity_even

  Amplitude entry(int row, int col) const { return m_[row * 4 + col]; }
  std::array<Amplitude, 4> apply(const std::array<Amplitude, 4>& v) const;

  bool is_unitary(double tol = kInvariantTol) const;
  bool is_projector(double tol = kInvariantTol) const;

 private:
  std::array<Amplitude, 16> m_;
};

struct ReducedSignal {
  DensityMatrix2 rho;
  double weight;
};

// <phi|rho|phi>. Rejects a non-normalized phi or non-trace-one rho; the
// imaginary residue must be below kInvariantTol and is then discarded.
double fidelity(const PureQubit& phi, const DensityMatrix2& rho);

// |<a|b>|^2 between pure states.
double overlap(const PureQubit& a, const PureQubit& b);

// State orthogonal to psi: (-conj(beta), conj(alpha)).
PureQubit orthogonal(const PureQubit& psi);

// Reduced density matrix of the signal qubit, probe traced out. The weight
// passes through unchanged; an (effectively) zero-weight branch yields
// nullopt rather than a garbage matrix.
std::optional<ReducedSignal> partial_trace_probe(const TwoQubitState& state);

// Real-amplitude qubit cos(gamma)|0> + sin(gamma)|1>.
PureQubit equatorial_state(double gamma);

// Haar-distributed qubit: |alpha|^2 uniform on [0,1], relative phase uniform
// on [0,2pi). Global phase is not canonicalized.
PureQubit sample_haar(RandomStream& rng);

}  // namespace mdm
