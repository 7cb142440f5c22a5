#include "dynfid/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dynfid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
}

}  // namespace

BlochVector apply(const QubitChannel& e, const BlochVector& v) {
  BlochVector out;
  out.x = e.linear[0][0] * v.x + e.linear[0][1] * v.y + e.linear[0][2] * v.z + e.shift[0];
  out.y = e.linear[1][0] * v.x + e.linear[1][1] * v.y + e.linear[1][2] * v.z + e.shift[1];
  out.z = e.linear[2][0] * v.x + e.linear[2][1] * v.y + e.linear[2][2] * v.z + e.shift[2];
  return out;
}

QubitChannel compose(const QubitChannel& after, const QubitChannel& before) {
  QubitChannel c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += after.linear[i][k] * before.linear[k][j];
      c.linear[i][j] = s;
    }
  for (int i = 0; i < 3; ++i) {
    double s = after.shift[i];
    for (int k = 0; k < 3; ++k) s += after.linear[i][k] * before.shift[k];
    c.shift[i] = s;
  }
  return c;
}

QubitChannel identity_channel() {
  QubitChannel e;
  for (int i = 0; i < 3; ++i) e.linear[i][i] = 1.0;
  return e;
}

QubitChannel unitary_channel(const BlochVector& axis, double angle) {
  const double n = axis.norm();
  if (n < 1e-15) throw std::invalid_argument("unitary_channel: zero axis");
  const double ux = axis.x / n, uy = axis.y / n, uz = axis.z / n;
  const double c = std::cos(angle), s = std::sin(angle);
  QubitChannel e;
  const double u[3] = {ux, uy, uz};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e.linear[i][j] = (1.0 - c) * u[i] * u[j] + (i == j ? c : 0.0);
  // Rodrigues cross-product part.
  e.linear[0][1] -= s * uz;
  e.linear[0][2] += s * uy;
  e.linear[1][0] += s * uz;
  e.linear[1][2] -= s * ux;
  e.linear[2][0] -= s * uy;
  e.linear[2][1] += s * ux;
  return e;
}

QubitChannel dephasing_channel(double gamma) {
  check_probability(gamma, "dephasing_channel: gamma");
  QubitChannel e;
  e.linear[0][0] = gamma;
  e.linear[1][1] = gamma;
  e.linear[2][2] = 1.0;
  return e;
}

QubitChannel pauli_mix_channel(double p0, double p1, double p2, double p3) {
  check_probability(p0, "pauli_mix_channel: p0");
  check_probability(p1, "pauli_mix_channel: p1");
  check_probability(p2, "pauli_mix_channel: p2");
  check_probability(p3, "pauli_mix_channel: p3");
  if (std::abs(p0 + p1 + p2 + p3 - 1.0) > 1e-12)
    throw std::invalid_argument("pauli_mix_channel: probabilities must sum to 1");
  QubitChannel e;
  e.linear[0][0] = p0 + p1 - p2 - p3;
  e.linear[1][1] = p0 - p1 + p2 - p3;
  e.linear[2][2] = p0 - p1 - p2 + p3;
  return e;
}

QubitChannel noisy_unitary_channel(int i, double eps) {
  if (i < 0 || i > 3) throw std::invalid_argument("noisy_unitary_channel: index must be 0..3");
  check_probability(eps, "noisy_unitary_channel: eps");
  QubitChannel e;
  for (int a = 0; a < 3; ++a) {
    const double sign = (i == 0 || a == i - 1) ? 1.0 : -1.0;
    e.linear[a][a] = (1.0 - eps) * sign;
  }
  return e;
}

QubitChannel sigma2_projection_channel() {
  QubitChannel e;
  e.linear[1][1] = 1.0;
  return e;
}

QubitChannel constant_channel(const BlochVector& out) {
  if (out.norm() > 1.0 + kTol.bloch_norm)
    throw std::invalid_argument("constant_channel: Bloch norm exceeds 1");
  QubitChannel e;
  e.shift = {out.x, out.y, out.z};
  return e;
}

ComplexMatrix choi_matrix(const QubitChannel& e) {
  // E(I) = I + c.sigma, E(sigma_j) = sum_i M_ij sigma_i; Omega is the
  // maximally entangled pair, Omega = (1/4) sum_i sigma_i x sigma_i^T.
  ComplexMatrix out(4);
  ComplexMatrix ei = sigma(0);
  for (int i = 0; i < 3; ++i) {
    ComplexMatrix t = sigma(i + 1);
    t *= Complex(e.shift[static_cast<size_t>(i)], 0.0);
    ei += t;
  }
  out += kron(ei, sigma(0));
  for (int j = 0; j < 3; ++j) {
    ComplexMatrix ej(2);
    for (int i = 0; i < 3; ++i) {
      ComplexMatrix t = sigma(i + 1);
      t *= Complex(e.linear[static_cast<size_t>(i)][static_cast<size_t>(j)], 0.0);
      ej += t;
    }
    // sigma_j^T = sigma_j for j=1,3 and -sigma_2 for j=2.
    ComplexMatrix sjt = sigma(j + 1);
    if (j == 1) sjt *= Complex(-1.0, 0.0);
    out += kron(ej, sjt);
  }
  out *= Complex(0.25, 0.0);
  return out;
}

CptpCheck is_cptp(const QubitChannel& e) {
  EigResult eig = hermitian_eig(choi_matrix(e));
  const double min_eig = eig.eigenvalues.back();
  return {min_eig >= -kTol.choi_psd, min_eig};
}

DensityMatrix choi(const QubitChannel& e) {
  ComplexMatrix raw = choi_matrix(e);
  EigResult eig = hermitian_eig(raw);
  if (eig.eigenvalues.back() < -kTol.choi_psd)
    throw std::invalid_argument("choi: channel is not completely positive");
  // Floor rounding negatives and renormalize the trace.
  double tr = 0.0;
  for (double& l : eig.eigenvalues) {
    l = std::max(l, 0.0);
    tr += l;
  }
  ComplexMatrix m(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < 4; ++k)
        s += eig.eigenvectors(i, k) * (eig.eigenvalues[static_cast<size_t>(k)] / tr) *
             std::conj(eig.eigenvectors(j, k));
      m(i, j) = s;
    }
  for (int r = 0; r < 4; ++r)
    for (int c = r; c < 4; ++c) {
      const Complex h = 0.5 * (m(r, c) + std::conj(m(c, r)));
      m(r, c) = h;
      m(c, r) = std::conj(h);
    }
  return DensityMatrix(std::move(m));
}

double process_fidelity(const QubitChannel& e1, const QubitChannel& e2) {
  return alpha_fidelity_general(choi(e1), choi(e2), Alpha(0.5));
}

OptimResult channel_alpha_fidelity(const QubitChannel& e1, const QubitChannel& e2, Alpha alpha,
                                   const OptimizerConfig& cfg) {
  auto objective = [&](std::span<const BlochVector> v) {
    const double den = alpha_fidelity_qubit(v[0], v[1], alpha);
    if (den < kTol.denominator_guard) return kInf;
    const double num = alpha_fidelity_qubit(apply(e1, v[0]), apply(e2, v[1]), alpha);
    return num / den;
  };
  OptimResult res = minimize_ball(objective, 2, cfg);
  res.value = std::clamp(res.value, 0.0, 1.0);
  return res;
}

OptimResult minimal_gate_fidelity(const QubitChannel& e1, const QubitChannel& e2, Alpha alpha,
                                  const OptimizerConfig& cfg) {
  auto objective = [&](std::span<const BlochVector> v) {
    return alpha_fidelity_qubit(apply(e1, v[0]), apply(e2, v[0]), alpha);
  };
  OptimResult res = minimize_ball(objective, 1, cfg);
  res.value = std::clamp(res.value, 0.0, 1.0);
  return res;
}

QubitState orthogonalizing_state(const ComplexMatrix& u, const QubitState& phi1) {
  if (u.dim() != 2) throw std::invalid_argument("orthogonalizing_state: 2x2 unitary required");
  const QubitState uphi = {u(0, 0) * phi1[0] + u(0, 1) * phi1[1],
                           u(1, 0) * phi1[0] + u(1, 1) * phi1[1]};
  const Complex a = std::conj(phi1[0]) * uphi[0] + std::conj(phi1[1]) * uphi[1];
  const double amod = std::abs(a);
  if (amod >= 1.0 - 1e-9)
    throw std::domain_error("orthogonalizing_state: U fixes phi1 up to a phase");
  const double root = std::sqrt(1.0 - amod * amod);
  // U^dag phi1, minus its projection on phi1.
  const ComplexMatrix ud = u.adjoint();
  QubitState udphi = {ud(0, 0) * phi1[0] + ud(0, 1) * phi1[1],
                      ud(1, 0) * phi1[0] + ud(1, 1) * phi1[1]};
  const Complex abar = std::conj(a);
  QubitState phi2;
  for (int i = 0; i < 2; ++i)
    phi2[static_cast<size_t>(i)] = root * phi1[static_cast<size_t>(i)] -
                                   (a / root) * (udphi[static_cast<size_t>(i)] - abar * phi1[static_cast<size_t>(i)]);
  const double n = std::sqrt(std::norm(phi2[0]) + std::norm(phi2[1]));
  phi2[0] /= n;
  phi2[1] /= n;
  return phi2;
}

SwapProcessorCheck swap_processor_check(const DensityMatrix& xi1, const DensityMatrix& xi2,
                                        Alpha alpha, const OptimizerConfig& cfg) {
  if (xi1.dim() != 2 || xi2.dim() != 2)
    throw std::invalid_argument("swap_processor_check: qubit environment states required");
  SwapProcessorCheck out;
  out.state_fidelity = alpha_fidelity_general(xi1, xi2, alpha);
  const QubitChannel p1 = constant_channel(density_to_bloch(xi1));
  const QubitChannel p2 = constant_channel(density_to_bloch(xi2));
  out.channel_fidelity = channel_alpha_fidelity(p1, p2, alpha, cfg);
  return out;
}

}  // namespace dynfid
