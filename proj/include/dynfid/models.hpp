// Exactly solvable system-environment models producing dynamical maps and
// analytic environment-side divergences. Natural units hbar = k_B = 1;
// temperatures and frequencies enter as the dimensionless ratios T/omega.
#ifndef DYNFID_MODELS_HPP
#define DYNFID_MODELS_HPP

#include <memory>
#include <span>
#include <vector>

#include "dynfid/channels.hpp"
#include "dynfid/fidelity.hpp"
#include "dynfid/qmath.hpp"

namespace dynfid {

struct BathMode {
  double omega = 1.0;
  Complex coupling = 1.0;  // g_k
};

struct OscillatorBath {
  std::vector<BathMode> modes;

  static OscillatorBath single_mode(double omega, Complex coupling);
};

// Decoherence factor of the dephasing model,
// Gamma(t) = exp[-sum_k (4|g_k|^2/w_k^2) coth(w_k/2T) (1 - cos w_k t)].
// T = 0 uses the coth -> 1 limit.
double dephasing_gamma(const OscillatorBath& bath, double temperature, double t);

DynamicalMap dephasing_map(const OscillatorBath& bath, double temperature);

// Closed form of the channel alpha-fidelity for two dephasing channels,
// ((1+G2)/2)^{1-a}((1+G1)/2)^a + ((1-G2)/2)^{1-a}((1-G1)/2)^a.
double dephasing_pair_alpha_fidelity(double gamma1, double gamma2, Alpha alpha);

// ln Z(beta) = sum_k (-beta w_k/2 - ln(1 - e^{-beta w_k})), beta > 0.
double log_partition(const OscillatorBath& bath, double beta);

// S_alpha between thermal states of the bath. beta = +infinity selects the
// ground state; those limits use the closed forms that stay finite.
double thermal_renyi_divergence(const OscillatorBath& bath, double beta1, double beta2,
                                Alpha alpha);

// -- Resonant Jaynes-Cummings probe ------------------------------------------

struct JCCoefficients {
  double a = 1.0;
  double b = 1.0;
  Complex c = 1.0;
  double tail_bound = 0.0;  // truncation error bound on the thermal sums
};

// Thermal averages of cos(|g| t sqrt(n)) combinations, truncated at n_trunc
// (the partition sum in the denominator is exact). T = 0 keeps the n = 0
// term only.
JCCoefficients jc_coefficients(double g, double omega, double temperature, double t, int n_trunc);

QubitChannel jc_channel(double g, double omega, double temperature, double t, int n_trunc);
DynamicalMap jc_map(double g, double omega, double temperature, int n_trunc);

// Equilibrium excited-state population p(T) = 1/(1 + e^{omega/T}).
double gibbs_population(double temperature, double omega);

// -- Transverse-field Ising environment --------------------------------------

struct IsingChain {
  double coupling = 1.0;  // J
  double lambda = 1.0;    // transverse field
  double delta = 0.1;     // system-environment coupling
  int sites = 8;          // N, even
};

struct IsingMode {
  double momentum = 0.0;  // k_n = (2n-1) pi / N
  double energy = 0.0;    // eps_k = 2J sqrt(h^2 - 2h cos k + 1)
  double angle = 0.0;     // Bogoliubov theta_k, 2 theta_k = atan2(sin k, h - cos k)
};

std::vector<IsingMode> ising_spectrum(const IsingChain& chain, double field);

// Ground-state Loschmidt echo,
// L(t) = prod_{k>0} (1 - sin^2(2 a_k) sin^2(eps_k t)),
// a_k = theta_k(lambda+delta) - theta_k(lambda), eps_k at lambda+delta.
double loschmidt_ground(const IsingChain& chain, double t);

// Dense-diagonalization oracle for N <= 10. The default initial state is the
// ground state of the chain Hamiltonian at `lambda`, projected onto the
// global spin-flip-even sector (the ferromagnetic doublet is numerically
// degenerate at small lambda and the product formula describes the even
// member).
class LoschmidtExactOracle {
 public:
  explicit LoschmidtExactOracle(const IsingChain& chain);
  LoschmidtExactOracle(const IsingChain& chain, std::vector<Complex> state);
  ~LoschmidtExactOracle();
  LoschmidtExactOracle(LoschmidtExactOracle&&) noexcept;
  LoschmidtExactOracle& operator=(LoschmidtExactOracle&&) noexcept;

  double echo(double t) const;
  const std::vector<Complex>& state() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double loschmidt_exact_small(const IsingChain& chain, double t);
double loschmidt_exact_small(const IsingChain& chain, std::span<const Complex> state, double t);

double ising_ground_energy_exact(const IsingChain& chain, double field);
// Parity-even ground state amplitudes (the Hamiltonian is real symmetric).
std::vector<double> ising_ground_state_exact(const IsingChain& chain, double field);

// Pure dephasing map with transverse contraction sqrt(L(t)). The one-argument
// form uses the ground-state product formula (any N); the state form uses the
// exact oracle (N <= 10).
DynamicalMap ising_dephasing_map(const IsingChain& chain);
DynamicalMap ising_dephasing_map(const IsingChain& chain, std::vector<Complex> state);

}  // namespace dynfid

#endif
