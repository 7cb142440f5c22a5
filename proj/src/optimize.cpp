#include "dynfid/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dynfid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Clip every Bloch block of a flat coordinate vector back into the unit ball.
void project(std::vector<double>& x) {
  for (size_t b = 0; b + 3 <= x.size(); b += 3) {
    const double n2 = x[b] * x[b] + x[b + 1] * x[b + 1] + x[b + 2] * x[b + 2];
    if (n2 > 1.0) {
      const double inv = 1.0 / std::sqrt(n2);
      x[b] *= inv;
      x[b + 1] *= inv;
      x[b + 2] *= inv;
    }
  }
}

std::vector<BlochVector> to_bloch(const std::vector<double>& x) {
  std::vector<BlochVector> v(x.size() / 3);
  for (size_t i = 0; i < v.size(); ++i) v[i] = {x[3 * i], x[3 * i + 1], x[3 * i + 2]};
  return v;
}

// Additive-recurrence low-discrepancy sequence (generalized golden ratio),
// shifted deterministically by the seed.
class RSequence {
 public:
  RSequence(int dims, std::uint64_t seed) : alpha_(static_cast<size_t>(dims)), shift_(static_cast<size_t>(dims)) {
    // phi_d is the unique positive root of x^{d+1} = x + 1.
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (dims + 1));
    for (int j = 0; j < dims; ++j) {
      alpha_[static_cast<size_t>(j)] = frac(std::pow(1.0 / phi, j + 1));
      shift_[static_cast<size_t>(j)] =
          frac(0.5 + 0.7548776662466927 * static_cast<double>(seed + 1) * (j + 1));
    }
  }

  std::vector<double> point(int i) const {
    std::vector<double> u(alpha_.size());
    for (size_t j = 0; j < u.size(); ++j) u[j] = frac(shift_[j] + (i + 1) * alpha_[j]);
    return u;
  }

 private:
  static double frac(double v) { return v - std::floor(v); }
  std::vector<double> alpha_, shift_;
};

// Uniform map of a unit cube triple into the ball (cube-root radial law).
void cube_to_ball(const double* u, double* out) {
  const double r = std::cbrt(u[0]);
  const double ct = 2.0 * u[1] - 1.0;
  const double st = std::sqrt(std::max(1.0 - ct * ct, 0.0));
  const double ph = 2.0 * M_PI * u[2];
  out[0] = r * st * std::cos(ph);
  out[1] = r * st * std::sin(ph);
  out[2] = r * ct;
}

struct NmOutcome {
  double value = kInf;
  std::vector<double> x;
  bool converged = false;
};

NmOutcome nelder_mead(const std::function<double(std::span<const BlochVector>)>& f,
                      const std::vector<double>& x0, const OptimizerConfig& cfg, long& evals) {
  const size_t n = x0.size();
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const std::vector<BlochVector> v = to_bloch(x);
    const double val = f(std::span<const BlochVector>(v));
    return std::isnan(val) ? kInf : val;
  };

  // Initial simplex: x0 plus axis displacements, projected.
  std::vector<std::vector<double>> pts(n + 1, x0);
  for (size_t j = 0; j < n; ++j) {
    pts[j + 1][j] += 0.25;
    project(pts[j + 1]);
  }
  std::vector<double> fv(n + 1);
  for (size_t i = 0; i <= n; ++i) fv[i] = eval(pts[i]);

  std::vector<size_t> ord(n + 1);
  bool converged = false;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    for (size_t i = 0; i <= n; ++i) ord[i] = i;
    std::stable_sort(ord.begin(), ord.end(), [&](size_t a, size_t b) { return fv[a] < fv[b]; });

    const size_t best = ord[0], worst = ord[n], second = ord[n - 1];
    double spread = 0.0;
    for (size_t i = 0; i <= n; ++i)
      for (size_t j = 0; j < n; ++j)
        spread = std::max(spread, std::abs(pts[i][j] - pts[best][j]));
    if (spread < cfg.xtol && std::isfinite(fv[best]) && std::isfinite(fv[worst]) &&
        fv[worst] - fv[best] < cfg.ftol) {
      converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
    }
    for (size_t j = 0; j < n; ++j) centroid[j] /= static_cast<double>(n);

    auto blend = [&](double coeff) {
      std::vector<double> x(n);
      for (size_t j = 0; j < n; ++j) x[j] = centroid[j] + coeff * (centroid[j] - pts[worst][j]);
      project(x);
      return x;
    };

    std::vector<double> xr = blend(1.0);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      std::vector<double> xe = blend(2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = std::move(xe);
        fv[worst] = fe;
      } else {
        pts[worst] = std::move(xr);
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      pts[worst] = std::move(xr);
      fv[worst] = fr;
      continue;
    }
    // Contraction (outside if the reflection improved on the worst point).
    const bool outside = fr < fv[worst];
    std::vector<double> xc = blend(outside ? 0.5 : -0.5);
    const double fc = eval(xc);
    if (fc < std::min(fr, fv[worst])) {
      pts[worst] = std::move(xc);
      fv[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (size_t j = 0; j < n; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
      project(pts[i]);
      fv[i] = eval(pts[i]);
    }
  }

  size_t bi = 0;
  for (size_t i = 1; i <= n; ++i)
    if (fv[i] < fv[bi]) bi = i;
  return {fv[bi], pts[bi], converged};
}

std::vector<std::vector<double>> canonical_starts(int k) {
  const std::vector<std::vector<double>> singles = {
      {0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<std::vector<double>> out;
  if (k == 1) return singles;
  for (const auto& s : singles) {
    std::vector<double> p(s);
    p.insert(p.end(), s.begin(), s.end());
    out.push_back(std::move(p));
  }
  // Antipodal pure pairs.
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<double> p(6, 0.0);
    p[static_cast<size_t>(axis)] = 1.0;
    p[static_cast<size_t>(3 + axis)] = -1.0;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

OptimResult minimize_ball(const std::function<double(std::span<const BlochVector>)>& f, int k,
                          const OptimizerConfig& cfg) {
  if (k != 1 && k != 2) throw std::invalid_argument("minimize_ball: k must be 1 or 2");
  if (cfg.starts < 1) throw std::invalid_argument("minimize_ball: starts must be >= 1");
  const int dims = 3 * k;

  std::vector<std::vector<double>> starts;
  if (cfg.include_canonical_starts) starts = canonical_starts(k);
  RSequence seq(dims, cfg.seed);
  for (int i = 0; i < cfg.starts; ++i) {
    const std::vector<double> u = seq.point(i);
    std::vector<double> x(static_cast<size_t>(dims));
    for (int b = 0; b < k; ++b) cube_to_ball(&u[static_cast<size_t>(3 * b)], &x[static_cast<size_t>(3 * b)]);
    starts.push_back(std::move(x));
  }

  long evals = 0;
  NmOutcome best;
  bool any_finite = false;
  for (const auto& s : starts) {
    NmOutcome out = nelder_mead(f, s, cfg, evals);
    if (std::isfinite(out.value)) any_finite = true;
    if (out.value < best.value ||
        (out.value == best.value && best.x.empty())) {
      best = std::move(out);
    }
  }
  if (!any_finite)
    throw std::domain_error("minimize_ball: objective was infeasible from every start");

  OptimResult res;
  res.value = best.value;
  const std::vector<BlochVector> v = to_bloch(best.x);
  res.argmin_1 = v[0];
  res.argmin_2 = (k == 2) ? v[1] : v[0];
  res.evaluations = evals;
  res.converged = best.converged;
  return res;
}

TimeMinimum infimum_over_time(const std::function<double(double)>& g, const TimeGrid& grid) {
  if (grid.points < 2) throw std::invalid_argument("infimum_over_time: need at least 2 points");
  if (!(grid.t_max > 0.0)) throw std::invalid_argument("infimum_over_time: t_max must be positive");

  int best = 0;
  std::vector<double> vals(static_cast<size_t>(grid.points));
  for (int i = 0; i < grid.points; ++i) {
    const double t = grid.t_max * static_cast<double>(i) / (grid.points - 1);
    vals[static_cast<size_t>(i)] = g(t);
    if (vals[static_cast<size_t>(i)] < vals[static_cast<size_t>(best)]) best = i;
  }
  const double dt = grid.t_max / (grid.points - 1);
  double lo = std::max(0.0, (best - 1) * dt);
  double hi = std::min(grid.t_max, (best + 1) * dt);

  // Golden-section refinement.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = g(c), fd = g(d);
  for (int it = 0; it < grid.refine_iters; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = g(d);
    }
  }
  TimeMinimum m{grid.t_max * best / (grid.points - 1), vals[static_cast<size_t>(best)]};
  if (fc < m.value) m = {c, fc};
  if (fd < m.value) m = {d, fd};
  return m;
}

double find_root(const std::function<double(double)>& h, double lo, double hi, double tol) {
  double flo = h(lo), fhi = h(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw std::domain_error("find_root: no sign change on the bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = h(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace dynfid
