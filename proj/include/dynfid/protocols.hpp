// The four applications of the environment/dynamics fidelity inequality:
// processor-dimension bounds for approximate programming, exclusion of
// hypothesized environment frequencies, temperature bounds from probe
// dynamics, and Loschmidt-echo bounds with revival detection.
#ifndef DYNFID_PROTOCOLS_HPP
#define DYNFID_PROTOCOLS_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dynfid/channels.hpp"
#include "dynfid/models.hpp"
#include "dynfid/optimize.hpp"

namespace dynfid {

// -- Approximate programming --------------------------------------------------

// g_jk(eps) = (2 - eps) eps / sqrt(1 - inf_rho F_{1/2}(U_j(rho), U_k(rho))),
// the overlap bound for programming states of eps-noisy unitaries.
double prog_overlap_bound(double eps, double inf_unitary_fidelity);

// Lower bound on the processor dimension from the pairwise overlap bounds:
// K_eps is the largest integer below max_{j!=k}(1/g_jk + 1); the dimension is
// N when N <= K_eps and K_eps otherwise.
int min_processor_dimension(int n_channels, const std::vector<std::vector<double>>& pairwise_g);

struct DimensionBound {
  double epsilon = 0.0;
  int min_dim = 0;
  std::vector<std::pair<double, int>> thresholds;  // (cut, dimension certified below it)
};

// The four eps-noisy Pauli channels; the pairwise unitary infimum vanishes,
// so g = (2 - eps) eps for every pair.
DimensionBound pauli_program_dimension(double eps);

struct HilleryThresholds {
  double dim4_cut = 0.0;  // [3(13 + 2 sqrt(42))]^{-1}
  double dim3_cut = 0.0;  // [2(9 + 4 sqrt(5))]^{-1}
};
HilleryThresholds hillery_reference_thresholds();
int hillery_min_dimension(double eps);

// -- Frequency exclusion ------------------------------------------------------

// ln Z(a b1 + (1-a) b2) - a ln Z(b1) - (1-a) ln Z(b2) for the hypothesized
// bath; equals (a-1) S_alpha of the two thermal states, hence always <= 0.
double exclusion_lhs(const OscillatorBath& hypothesis, double beta1, double beta2, Alpha alpha);

// inf over time of ln F_alpha of the two maps, with the argument order
// switched below alpha = 1/2. Pure-dephasing map pairs are routed through the
// closed form; anything else goes through the channel-fidelity optimizer.
double exclusion_rhs(const DynamicalMap& map1, const DynamicalMap& map2, Alpha alpha,
                     const TimeGrid& grid, const OptimizerConfig& cfg = {});

std::vector<double> exclusion_rhs_curve(const DynamicalMap& map1, const DynamicalMap& map2,
                                        const std::vector<double>& alpha_grid,
                                        const TimeGrid& grid, const OptimizerConfig& cfg = {});

struct ExclusionVerdict {
  double omega_hypothesis = 0.0;
  std::vector<double> alphas;
  std::vector<double> lhs_curve;
  std::vector<double> rhs_curve;
  bool compatible = true;
  std::vector<double> violating_alphas;
};

// Tests a single-oscillator hypothesis at frequency omega against a
// precomputed rhs curve. A point violates when lhs > rhs + 1e-9.
ExclusionVerdict exclusion_check(double omega_hypothesis, double beta1, double beta2,
                                 const std::vector<double>& alpha_grid,
                                 const std::vector<double>& rhs_curve);

struct FrequencyScan {
  double lo = 1.0;
  double hi = 4.0;
  int points = 21;
};

// Smallest hypothesis frequency incompatible with the measured pair of maps,
// located by scan plus bisection. Empty when the scan does not bracket a
// compatible-to-violating transition.
std::optional<double> frequency_crossover(const DynamicalMap& map1, const DynamicalMap& map2,
                                          double beta1, double beta2, const FrequencyScan& scan,
                                          const std::vector<double>& alpha_grid,
                                          const TimeGrid& grid, const OptimizerConfig& cfg = {});

// Grids used by the figures: exclusion stops at 0.80 (the crossover readout
// is calibrated there), the full grid extends to 0.95.
std::vector<double> default_exclusion_alpha_grid();
std::vector<double> default_alpha_grid();

// -- Thermometry --------------------------------------------------------------

struct TemperatureBounds {
  double lower = 0.0;
  std::optional<double> upper;  // set only when upper_valid
  bool upper_valid = false;
  double sup_divergence = 0.0;  // sup_{rho,t} S_1(E_0(rho) || E_T(rho))
  double t_star = 0.0;
  BlochVector probe;            // divergence-maximizing probe state
};

// Temperature bounds in units of kT/omega from a calibration map (T = 0) and
// the probed map. The alpha-grid bounds and their Kullback-Leibler limit are
// all evaluated; the best of each side is returned. `assumed_kT` feeds the
// upper-bound validity condition kT/omega <= limiting_temperature(); without
// it the necessary condition lower <= limiting_temperature() is used.
TemperatureBounds thermometry_bounds(const DynamicalMap& map0, const DynamicalMap& mapT,
                                     double omega, const std::vector<double>& alpha_grid,
                                     const TimeGrid& grid, const OptimizerConfig& cfg = {},
                                     std::optional<double> assumed_kT = std::nullopt);

// kT/omega below which -ln Z(beta) >= 0: the root of b/2 + ln(1 - e^{-b}).
double limiting_temperature();

struct ThermalizedProbeBounds {
  double lower = 0.0;
  std::optional<double> upper;
  bool upper_valid = false;
  double population = 0.0;  // p(T)
};

// Closed forms for a fully thermalized probe:
// -1/ln p(T) <= kT/omega <= -1/(2 ln(1 - p(T))).
ThermalizedProbeBounds thermalized_probe_bounds(double temperature, double omega);

// lim_{t->inf} F_alpha of the induced pair, (1 - p(T))^{1-alpha}.
double thermalized_fidelity_limit(double temperature, double omega, Alpha alpha);

// -- Loschmidt-echo bounds ----------------------------------------------------

struct LoschmidtInterval {
  double lower = 0.0;
  double upper = 1.0;
};

// Interval of echoes L compatible with a known reference echo L_ref and a
// state-fidelity lower bound F: the solution set of
// F <= h(sqrt(L)), h(y) = (sqrt((1-x)(1-y)) + sqrt((1+x)(1+y)))/2, x = sqrt(L_ref).
LoschmidtInterval loschmidt_bounds_from_fidelity(double fidelity, double loschmidt_ref);

struct RevivalVerdict {
  bool revival = false;
  bool found_minimum = false;
  double minimum_time = 0.0;
  double minimum_level = 0.0;
  std::optional<double> crossing_time;
};

// Finds the first strict local minimum of the upper curve (flatness guard
// 1e-12) and reports whether the lower curve later exceeds that level by more
// than `crossing_margin`.
RevivalVerdict detect_revival(std::span<const double> times, std::span<const double> upper,
                              std::span<const double> lower, double crossing_margin = 1e-4);

}  // namespace dynfid

#endif
