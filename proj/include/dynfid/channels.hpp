// Qubit channels in the affine Bloch representation: rho_v -> rho_{Mv+c}.
// Complete positivity is checked through the Choi matrix. The channel
// alpha-fidelity is the double infimum over input pairs of the output/input
// fidelity quotient, evaluated by multi-start Nelder-Mead.
#ifndef DYNFID_CHANNELS_HPP
#define DYNFID_CHANNELS_HPP

#include <array>
#include <functional>
#include <string>

#include "dynfid/fidelity.hpp"
#include "dynfid/optimize.hpp"
#include "dynfid/qmath.hpp"

namespace dynfid {

struct QubitChannel {
  std::array<std::array<double, 3>, 3> linear{};  // M
  std::array<double, 3> shift{};                  // c
};

BlochVector apply(const QubitChannel& e, const BlochVector& v);
QubitChannel compose(const QubitChannel& after, const QubitChannel& before);

QubitChannel identity_channel();
// Bloch rotation by `angle` about `axis` (the channel of exp(-i angle n.sigma/2)).
QubitChannel unitary_channel(const BlochVector& axis, double angle);
// M = diag(gamma, gamma, 1); gamma in [0,1].
QubitChannel dephasing_channel(double gamma);
// rho -> sum_i p_i sigma_i rho sigma_i, probabilities on the simplex.
QubitChannel pauli_mix_channel(double p0, double p1, double p2, double p3);
// rho -> (1-eps) sigma_i rho sigma_i + eps/2 I.
QubitChannel noisy_unitary_channel(int i, double eps);
// rho_m -> (I + m_y sigma_2)/2, an extremal non-unitary channel.
QubitChannel sigma2_projection_channel();
// Preparation channel: every input maps to the state with Bloch vector `out`.
QubitChannel constant_channel(const BlochVector& out);

// Choi state (E x I)(Omega) assembled from the affine action on {I, sigma_i}.
// Raw variant returns the matrix without the PSD gate.
ComplexMatrix choi_matrix(const QubitChannel& e);
DensityMatrix choi(const QubitChannel& e);

struct CptpCheck {
  bool cptp = false;
  double min_choi_eigenvalue = 0.0;
};
CptpCheck is_cptp(const QubitChannel& e);

// Uhlmann fidelity of the two Choi states.
double process_fidelity(const QubitChannel& e1, const QubitChannel& e2);

// inf over state pairs of F_alpha(E1(r1), E2(r2)) / F_alpha(r1, r2), with
// pairs of fidelity below kTol.denominator_guard excluded as infeasible.
OptimResult channel_alpha_fidelity(const QubitChannel& e1, const QubitChannel& e2, Alpha alpha,
                                   const OptimizerConfig& cfg = {});

// Single-state restriction inf over rho of F_alpha(E1(rho), E2(rho)).
OptimResult minimal_gate_fidelity(const QubitChannel& e1, const QubitChannel& e2, Alpha alpha,
                                  const OptimizerConfig& cfg = {});

using QubitState = std::array<Complex, 2>;

// For a 2x2 unitary U with |<phi1|U phi1>| < 1, the unit vector phi2 with
// <phi1|U phi2> = 0 and <phi1|phi2> != 0. Throws std::domain_error when the
// construction is singular (U acts as a phase on phi1).
QubitState orthogonalizing_state(const ComplexMatrix& u, const QubitState& phi1);

struct SwapProcessorCheck {
  double state_fidelity = 0.0;    // F_alpha(xi1, xi2)
  OptimResult channel_fidelity;   // F_alpha of the two preparation channels
};
// Constant-output channels E_xi(rho) = xi realize any state pair on the SWAP
// processor; their channel fidelity equals the state fidelity.
SwapProcessorCheck swap_processor_check(const DensityMatrix& xi1, const DensityMatrix& xi2,
                                        Alpha alpha, const OptimizerConfig& cfg = {});

// A time-parametrized family of channels.
struct DynamicalMap {
  std::function<QubitChannel(double)> evaluator;
  std::string label;
};

}  // namespace dynfid

#endif
