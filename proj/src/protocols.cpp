#include "dynfid/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dynfid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kViolationSlack = 1e-9;

bool is_pure_dephasing(const QubitChannel& e) {
  const double off = std::abs(e.linear[0][1]) + std::abs(e.linear[0][2]) +
                     std::abs(e.linear[1][0]) + std::abs(e.linear[1][2]) +
                     std::abs(e.linear[2][0]) + std::abs(e.linear[2][1]);
  const double shift = std::abs(e.shift[0]) + std::abs(e.shift[1]) + std::abs(e.shift[2]);
  return off < 1e-12 && shift < 1e-12 && std::abs(e.linear[0][0] - e.linear[1][1]) < 1e-12 &&
         std::abs(e.linear[2][2] - 1.0) < 1e-12 && e.linear[0][0] >= -1e-12 &&
         e.linear[0][0] <= 1.0 + 1e-12;
}

bool maps_are_dephasing(const DynamicalMap& m1, const DynamicalMap& m2, double t_max) {
  for (double f : {0.0, 0.311, 0.673, 1.0}) {
    if (!is_pure_dephasing(m1.evaluator(f * t_max))) return false;
    if (!is_pure_dephasing(m2.evaluator(f * t_max))) return false;
  }
  return true;
}

double dephasing_factor(const QubitChannel& e) {
  return std::clamp(e.linear[0][0], 0.0, 1.0);
}

}  // namespace

double prog_overlap_bound(double eps, double inf_unitary_fidelity) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("prog_overlap_bound: eps in [0,1]");
  if (!(inf_unitary_fidelity >= 0.0 && inf_unitary_fidelity < 1.0))
    throw std::invalid_argument("prog_overlap_bound: unitary infimum must lie in [0,1)");
  return (2.0 - eps) * eps / std::sqrt(1.0 - inf_unitary_fidelity);
}

int min_processor_dimension(int n_channels, const std::vector<std::vector<double>>& pairwise_g) {
  if (n_channels < 2) throw std::invalid_argument("min_processor_dimension: need N >= 2");
  double best = 0.0;  // max over pairs of 1/g + 1
  bool unbounded = false;
  for (int j = 0; j < n_channels; ++j)
    for (int k = 0; k < n_channels; ++k) {
      if (j == k) continue;
      const double g = pairwise_g[static_cast<size_t>(j)][static_cast<size_t>(k)];
      if (!(g >= 0.0 && g <= 1.0 + 1e-12))
        throw std::invalid_argument("min_processor_dimension: g values must lie in [0,1]");
      if (g < 1e-300) {
        unbounded = true;
        continue;
      }
      best = std::max(best, 1.0 / g + 1.0);
    }
  if (unbounded || best > 1e9) return n_channels;
  const int k_eps = std::max(static_cast<int>(std::ceil(best) - 1), 1);  // largest integer < best
  return n_channels <= k_eps ? n_channels : k_eps;
}

DimensionBound pauli_program_dimension(double eps) {
  const double g = prog_overlap_bound(eps, 0.0);
  std::vector<std::vector<double>> gs(4, std::vector<double>(4, std::min(g, 1.0)));
  DimensionBound out;
  out.epsilon = eps;
  out.min_dim = min_processor_dimension(4, gs);
  // Cuts where (2-e)e = 1/(d-1).
  out.thresholds = {{(3.0 - std::sqrt(6.0)) / 3.0, 4}, {(2.0 - std::sqrt(2.0)) / 2.0, 3}};
  return out;
}

HilleryThresholds hillery_reference_thresholds() {
  return {1.0 / (3.0 * (13.0 + 2.0 * std::sqrt(42.0))), 1.0 / (2.0 * (9.0 + 4.0 * std::sqrt(5.0)))};
}

int hillery_min_dimension(double eps) {
  const HilleryThresholds th = hillery_reference_thresholds();
  if (eps < th.dim4_cut) return 4;
  if (eps < th.dim3_cut) return 3;
  return eps < 1.0 ? 2 : 1;
}

double exclusion_lhs(const OscillatorBath& hypothesis, double beta1, double beta2, Alpha alpha) {
  const double a = alpha.value();
  return std::min(log_partition(hypothesis, a * beta1 + (1.0 - a) * beta2) -
                      a * log_partition(hypothesis, beta1) -
                      (1.0 - a) * log_partition(hypothesis, beta2),
                  0.0);
}

double exclusion_rhs(const DynamicalMap& map1, const DynamicalMap& map2, Alpha alpha,
                     const TimeGrid& grid, const OptimizerConfig& cfg) {
  const bool swap_order = alpha.value() < 0.5;
  const DynamicalMap& first = swap_order ? map2 : map1;
  const DynamicalMap& second = swap_order ? map1 : map2;

  std::function<double(double)> g;
  if (maps_are_dephasing(map1, map2, grid.t_max)) {
    g = [&](double t) {
      return dephasing_pair_alpha_fidelity(dephasing_factor(first.evaluator(t)),
                                           dephasing_factor(second.evaluator(t)), alpha);
    };
  } else {
    g = [&](double t) {
      return channel_alpha_fidelity(first.evaluator(t), second.evaluator(t), alpha, cfg).value;
    };
  }
  const TimeMinimum m = infimum_over_time(g, grid);
  return std::min(std::log(std::max(m.value, 1e-300)), 0.0);
}

std::vector<double> exclusion_rhs_curve(const DynamicalMap& map1, const DynamicalMap& map2,
                                        const std::vector<double>& alpha_grid,
                                        const TimeGrid& grid, const OptimizerConfig& cfg) {
  std::vector<double> out;
  out.reserve(alpha_grid.size());
  for (double a : alpha_grid) out.push_back(exclusion_rhs(map1, map2, Alpha(a), grid, cfg));
  return out;
}

ExclusionVerdict exclusion_check(double omega_hypothesis, double beta1, double beta2,
                                 const std::vector<double>& alpha_grid,
                                 const std::vector<double>& rhs_curve) {
  if (alpha_grid.size() != rhs_curve.size())
    throw std::invalid_argument("exclusion_check: grid/curve size mismatch");
  const OscillatorBath hyp = OscillatorBath::single_mode(omega_hypothesis, 1.0);
  ExclusionVerdict v;
  v.omega_hypothesis = omega_hypothesis;
  v.alphas = alpha_grid;
  v.rhs_curve = rhs_curve;
  for (size_t i = 0; i < alpha_grid.size(); ++i) {
    const double lhs = exclusion_lhs(hyp, beta1, beta2, Alpha(alpha_grid[i]));
    v.lhs_curve.push_back(lhs);
    if (lhs > rhs_curve[i] + kViolationSlack) v.violating_alphas.push_back(alpha_grid[i]);
  }
  v.compatible = v.violating_alphas.empty();
  return v;
}

std::optional<double> frequency_crossover(const DynamicalMap& map1, const DynamicalMap& map2,
                                          double beta1, double beta2, const FrequencyScan& scan,
                                          const std::vector<double>& alpha_grid,
                                          const TimeGrid& grid, const OptimizerConfig& cfg) {
  if (scan.points < 2 || !(scan.hi > scan.lo))
    throw std::invalid_argument("frequency_crossover: bad scan range");
  const std::vector<double> rhs = exclusion_rhs_curve(map1, map2, alpha_grid, grid, cfg);
  auto violates = [&](double w) {
    return !exclusion_check(w, beta1, beta2, alpha_grid, rhs).compatible;
  };

  double last_ok = 0.0, first_bad = 0.0;
  bool have_ok = false, have_bad = false;
  for (int i = 0; i < scan.points; ++i) {
    const double w = scan.lo + (scan.hi - scan.lo) * i / (scan.points - 1);
    if (violates(w)) {
      first_bad = w;
      have_bad = true;
      break;
    }
    last_ok = w;
    have_ok = true;
  }
  if (!have_ok || !have_bad) return std::nullopt;

  double lo = last_ok, hi = first_bad;
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    if (violates(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::vector<double> default_exclusion_alpha_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 16; ++i) g.push_back(0.05 * i);
  return g;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 19; ++i) g.push_back(0.05 * i);
  return g;
}

namespace {

// Finite KL divergence between the two channel outputs; an infinite reading
// here can only be eigenvalue noise at near-pure outputs, so it is dropped
// (which can only loosen the bounds).
double kl_between_outputs(const QubitChannel& e0, const QubitChannel& eT, const BlochVector& v) {
  const DivergenceValue d =
      kl_divergence(bloch_to_density(apply(e0, v)), bloch_to_density(apply(eT, v)));
  return d.infinite ? -1.0 : d.value;
}

double lower_from_q(double q) {
  // T/w >= -1/ln(1-q) from 1 - e^{-w/T} <= q.
  if (q >= 1.0) return 0.0;
  if (q <= 0.0) return kInf;
  return -1.0 / std::log1p(-q);
}

double upper_from_q(double q) {
  // T/w <= -1/(2 ln q), valid below the limiting temperature.
  if (q >= 1.0) return kInf;
  if (q <= 0.0) return 0.0;
  return -0.5 / std::log(q);
}

}  // namespace

TemperatureBounds thermometry_bounds(const DynamicalMap& map0, const DynamicalMap& mapT,
                                     double omega, const std::vector<double>& alpha_grid,
                                     const TimeGrid& grid, const OptimizerConfig& cfg,
                                     std::optional<double> assumed_kT) {
  if (!(omega > 0.0)) throw std::invalid_argument("thermometry_bounds: omega must be positive");
  TemperatureBounds out;
  out.probe = {1.0, 0.0, 0.0};

  // sup over t of the KL divergence with the |+> probe.
  auto neg_kl_plus = [&](double t) {
    return -kl_between_outputs(map0.evaluator(t), mapT.evaluator(t), out.probe);
  };
  TimeMinimum tm = infimum_over_time(neg_kl_plus, grid);
  double sup_kl = -tm.value;
  double t_star = tm.t;
  BlochVector probe = out.probe;

  // One probe-state refinement at the best time, then a final time pass.
  {
    const QubitChannel e0 = map0.evaluator(t_star), eT = mapT.evaluator(t_star);
    auto obj = [&](std::span<const BlochVector> v) { return -kl_between_outputs(e0, eT, v[0]); };
    OptimizerConfig probe_cfg = cfg;
    probe_cfg.starts = std::max(4, cfg.starts / 4);
    const OptimResult r = minimize_ball(obj, 1, probe_cfg);
    if (-r.value > sup_kl + 1e-12) {
      probe = r.argmin_1;
      auto neg_kl_opt = [&](double t) {
        return -kl_between_outputs(map0.evaluator(t), mapT.evaluator(t), probe);
      };
      tm = infimum_over_time(neg_kl_opt, grid);
      sup_kl = -tm.value;
      t_star = tm.t;
    }
  }
  out.sup_divergence = sup_kl;
  out.t_star = t_star;
  out.probe = probe;

  if (sup_kl < 1e-15) {
    // Degenerate dynamics: nothing to estimate.
    out.lower = 0.0;
    out.upper_valid = false;
    return out;
  }

  // Kullback-Leibler limit: q = lim of F^{1/(1-a)} = e^{-sup S1}.
  double lower = lower_from_q(std::exp(-sup_kl));
  double upper = upper_from_q(std::exp(-sup_kl));

  // Finite-alpha bounds; each is valid, the Kullback-Leibler limit dominates.
  for (double a : alpha_grid) {
    const Alpha alpha(a);
    const bool high = a >= 0.5;
    auto fid = [&](double t) {
      const QubitChannel e0 = map0.evaluator(t), eT = mapT.evaluator(t);
      const BlochVector o0 = apply(e0, probe), oT = apply(eT, probe);
      return high ? alpha_fidelity_qubit(o0, oT, alpha) : alpha_fidelity_qubit(oT, o0, alpha);
    };
    const double inf_f = std::clamp(infimum_over_time(fid, grid).value, 0.0, 1.0);
    const double q = std::pow(inf_f, high ? 1.0 / (1.0 - a) : 1.0 / a);
    lower = std::max(lower, lower_from_q(q));
    upper = std::min(upper, upper_from_q(q));
  }
  out.lower = lower;

  const double t_lim = limiting_temperature();
  out.upper_valid = assumed_kT.has_value() ? (*assumed_kT <= t_lim + 1e-12) : (lower <= t_lim);
  if (out.upper_valid && std::isfinite(upper)) out.upper = upper;
  if (!out.upper.has_value()) out.upper_valid = false;
  return out;
}

double limiting_temperature() {
  static const double value = [] {
    const double beta_star =
        find_root([](double b) { return b / 2.0 + std::log1p(-std::exp(-b)); }, 0.5, 2.0, 1e-14);
    return 1.0 / beta_star;
  }();
  return value;
}

ThermalizedProbeBounds thermalized_probe_bounds(double temperature, double omega) {
  if (!(temperature > 0.0) || !(omega > 0.0))
    throw std::invalid_argument("thermalized_probe_bounds: T and omega must be positive");
  ThermalizedProbeBounds out;
  out.population = gibbs_population(temperature, omega);
  out.lower = -1.0 / std::log(out.population);
  out.upper_valid = temperature / omega <= limiting_temperature() + 1e-12;
  if (out.upper_valid) out.upper = -0.5 / std::log1p(-out.population);
  return out;
}

double thermalized_fidelity_limit(double temperature, double omega, Alpha alpha) {
  return std::pow(1.0 - gibbs_population(temperature, omega), 1.0 - alpha.value());
}

LoschmidtInterval loschmidt_bounds_from_fidelity(double fidelity, double loschmidt_ref) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0))
    throw std::invalid_argument("loschmidt_bounds_from_fidelity: F must lie in [0,1]");
  if (!(loschmidt_ref >= 0.0 && loschmidt_ref <= 1.0))
    throw std::invalid_argument("loschmidt_bounds_from_fidelity: L_ref must lie in [0,1]");
  const double x = std::sqrt(loschmidt_ref);
  auto h = [&](double y) {
    return 0.5 * std::sqrt(std::max((1.0 - x) * (1.0 - y), 0.0)) +
           0.5 * std::sqrt((1.0 + x) * (1.0 + y));
  };
  // h peaks at y = x with h(x) = 1 and falls off monotonically on both sides.
  LoschmidtInterval out;
  if (h(0.0) >= fidelity) {
    out.lower = 0.0;
  } else {
    double lo = 0.0, hi = x;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      (h(mid) >= fidelity ? hi : lo) = mid;
    }
    out.lower = hi * hi;
  }
  if (h(1.0) >= fidelity) {
    out.upper = 1.0;
  } else {
    double lo = x, hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      (h(mid) >= fidelity ? lo : hi) = mid;
    }
    out.upper = lo * lo;
  }
  return out;
}

RevivalVerdict detect_revival(std::span<const double> times, std::span<const double> upper,
                              std::span<const double> lower, double crossing_margin) {
  if (times.size() != upper.size() || times.size() != lower.size())
    throw std::invalid_argument("detect_revival: curve lengths differ");
  RevivalVerdict v;
  if (times.size() < 3) return v;
  constexpr double kFlatGuard = 1e-12;
  size_t imin = 0;
  for (size_t i = 1; i + 1 < times.size(); ++i) {
    if (upper[i - 1] - upper[i] > kFlatGuard && upper[i + 1] - upper[i] > kFlatGuard) {
      v.found_minimum = true;
      v.minimum_time = times[i];
      v.minimum_level = upper[i];
      imin = i;
      break;
    }
  }
  if (!v.found_minimum) return v;
  for (size_t j = imin + 1; j < times.size(); ++j) {
    if (lower[j] > v.minimum_level + crossing_margin) {
      v.revival = true;
      v.crossing_time = times[j];
      break;
    }
  }
  return v;
}

}  // namespace dynfid
