// oracles.hpp
// Test-only reference implementations, kept independent of the library code
// paths they check: a dense 4x4 partial trace, a matrix-based enumeration of
// the measurement channel, and the closed two-mode beam-splitter transform.

#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace oracles {

using C = std::complex<double>;
using Vec2 = std::array<C, 2>;
using Vec4 = std::array<C, 4>;
using Mat2 = std::array<C, 4>;    // row-major 2x2
using Mat4 = std::array<C, 16>;   // row-major 4x4

inline Vec4 kron(const Vec2& a, const Vec2& b) {
  return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

inline Vec4 matvec(const Mat4& m, const Vec4& v) {
  Vec4 out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out[i] += m[i * 4 + j] * v[j];
  }
  return out;
}

inline double norm_sq(const Vec4& v) {
  double n = 0.0;
  for (const auto& x : v) n += std::norm(x);
  return n;
}

inline Mat4 parity_matrix(bool even) {
  Mat4 m{};
  if (even) {
    m[0 * 4 + 0] = 1.0;
    m[3 * 4 + 3] = 1.0;
  } else {
    m[1 * 4 + 1] = 1.0;
    m[2 * 4 + 2] = 1.0;
  }
  return m;
}

inline Vec2 readout_vector(int k, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return k == 0 ? Vec2{C(c), C(s)} : Vec2{C(s), C(-c)};
}

// Signal 2-vector obtained by projecting the probe slot of `joint` onto the
// k-th readout vector. Unnormalized: its squared norm is the joint
// probability of the branch.
inline Vec2 project_probe(const Vec4& joint, int k, double theta) {
  const Vec2 g = readout_vector(k, theta);
  Vec2 s{};
  for (int i = 0; i < 2; ++i) {
    s[i] = joint[2 * i + 0] * std::conj(g[0]) +
           joint[2 * i + 1] * std::conj(g[1]);
  }
  return s;
}

// Dense-matrix partial trace: forms the full weight * |Phi><Phi| and sums
// the probe index.
inline Mat2 brute_partial_trace(const Vec4& phi, double weight) {
  Mat4 rho4{};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      rho4[a * 4 + b] = weight * phi[a] * std::conj(phi[b]);
    }
  }
  Mat2 rho{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      C e = 0.0;
      for (int p = 0; p < 2; ++p) e += rho4[(2 * i + p) * 4 + (2 * j + p)];
      rho[i * 2 + j] = e;
    }
  }
  // Normalize to unit trace; the caller keeps the weight separately.
  const C tr = rho[0] + rho[3];
  for (auto& e : rho) e /= tr;
  return rho;
}

struct ChannelOracle {
  Mat2 rho_f{};
  Mat2 rho_g{};
  double kept_weight = 0.0;
};

// Branch enumeration through explicit projector matrices. sigma_Z fires on
// readout 1; the guess map is 0 -> |0>, 1 -> |1> after even parity and the
// inverse after odd.
inline ChannelOracle channel_oracle(const Vec2& signal, double theta,
                                    bool keep_odd, bool feed_forward) {
  const Vec2 probe{C(1.0 / std::sqrt(2.0)), C(1.0 / std::sqrt(2.0))};
  const Vec4 joint = kron(signal, probe);

  struct Branch {
    Vec2 state;
    double probability;
    bool guess_one;
  };
  std::array<Branch, 4> branches{};
  int n_branches = 0;
  double kept = 0.0;
  for (int parity = 0; parity < (keep_odd ? 2 : 1); ++parity) {
    const Vec4 projected = matvec(parity_matrix(parity == 0), joint);
    const double weight = norm_sq(projected);
    if (weight < 1e-24) continue;
    kept += weight;
    for (int k = 0; k < 2; ++k) {
      Vec2 s = project_probe(projected, k, theta);
      const double p = std::norm(s[0]) + std::norm(s[1]);
      if (feed_forward && k == 1) s[1] = -s[1];
      const bool guess_one = (parity == 0) ? (k == 1) : (k == 0);
      branches[n_branches++] = Branch{s, p, guess_one};
    }
  }

  ChannelOracle out;
  out.kept_weight = kept;
  for (int b = 0; b < n_branches; ++b) {
    const auto& br = branches[b];
    const double p = br.probability / kept;
    if (br.probability < 1e-24) continue;
    const double inv = 1.0 / br.probability;  // |s><s| / ||s||^2 times p
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        out.rho_f[i * 2 + j] += p * inv * br.state[i] * std::conj(br.state[j]);
      }
    }
    const int g = br.guess_one ? 1 : 0;
    out.rho_g[g * 2 + g] += p;
  }
  return out;
}

// Two-photon |1,1> input through a two-mode splitter (sqrt(1-r), i sqrt(r)):
// amplitudes on (|2,0>, |1,1>, |0,2>).
inline std::array<C, 3> hom_oracle(double r) {
  const double t = std::sqrt(1.0 - r);
  const double rr = std::sqrt(r);
  const C bunch(0.0, std::sqrt(2.0) * t * rr);
  return {bunch, C(t * t - rr * rr), bunch};
}

}  // namespace oracles
