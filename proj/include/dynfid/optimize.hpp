// Deterministic derivative-free minimization over products of closed unit
// balls (Nelder-Mead with radial projection, multi-start), scalar infima
// over time grids, and bisection root finding.
#ifndef DYNFID_OPTIMIZE_HPP
#define DYNFID_OPTIMIZE_HPP

#include <cstdint>
#include <functional>
#include <span>

#include "dynfid/qmath.hpp"

namespace dynfid {

struct OptimizerConfig {
  int starts = 32;
  int max_iters = 400;
  double xtol = 1e-9;
  double ftol = 1e-10;
  std::uint64_t seed = 0;
  bool include_canonical_starts = true;
};

struct OptimResult {
  double value = 0.0;
  BlochVector argmin_1;
  BlochVector argmin_2;  // equals argmin_1 for single-vector problems
  long evaluations = 0;
  bool converged = false;
};

// Minimizes f over k (1 or 2) concatenated Bloch vectors. The objective may
// return +infinity to mark an infeasible point; if no start produces a
// finite value, throws std::domain_error. Starts are a seeded low-discrepancy
// sequence mapped into the ball plus, optionally, canonical states (the
// centre, the six pure axis states and their pairings).
OptimResult minimize_ball(const std::function<double(std::span<const BlochVector>)>& f, int k,
                          const OptimizerConfig& cfg);

struct TimeGrid {
  double t_max = 1.0;
  int points = 128;
  int refine_iters = 40;
};

struct TimeMinimum {
  double t = 0.0;
  double value = 0.0;
};

// Coarse scan over `points` uniform samples of [0, t_max], then golden-section
// refinement around the best sample.
TimeMinimum infimum_over_time(const std::function<double(double)>& g, const TimeGrid& grid);

// Bisection; requires a sign change on [lo, hi].
double find_root(const std::function<double(double)>& h, double lo, double hi, double tol = 1e-12);

}  // namespace dynfid

#endif
