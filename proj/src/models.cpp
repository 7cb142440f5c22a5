#include "dynfid/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dynfid {

namespace {

void check_bath(const OscillatorBath& bath) {
  if (bath.modes.empty()) throw std::invalid_argument("OscillatorBath: no modes");
  for (const BathMode& m : bath.modes)
    if (!(m.omega > 0.0)) throw std::invalid_argument("OscillatorBath: mode frequency must be positive");
}

void check_chain(const IsingChain& c) {
  if (c.sites < 4 || c.sites % 2 != 0)
    throw std::invalid_argument("IsingChain: site count must be even and >= 4");
  if (!(c.coupling > 0.0)) throw std::invalid_argument("IsingChain: J must be positive");
}

}  // namespace

OscillatorBath OscillatorBath::single_mode(double omega, Complex coupling) {
  OscillatorBath b;
  b.modes.push_back({omega, coupling});
  check_bath(b);
  return b;
}

double dephasing_gamma(const OscillatorBath& bath, double temperature, double t) {
  check_bath(bath);
  if (t < 0.0) throw std::invalid_argument("dephasing_gamma: t must be >= 0");
  if (temperature < 0.0) throw std::invalid_argument("dephasing_gamma: temperature must be >= 0");
  double expo = 0.0;
  for (const BathMode& m : bath.modes) {
    const double coth = temperature == 0.0 ? 1.0 : 1.0 / std::tanh(m.omega / (2.0 * temperature));
    expo += 4.0 * std::norm(m.coupling) / (m.omega * m.omega) * coth * (1.0 - std::cos(m.omega * t));
  }
  return std::exp(-expo);
}

DynamicalMap dephasing_map(const OscillatorBath& bath, double temperature) {
  check_bath(bath);
  DynamicalMap map;
  map.label = "oscillator-dephasing";
  map.evaluator = [bath, temperature](double t) {
    return dephasing_channel(std::min(dephasing_gamma(bath, temperature, t), 1.0));
  };
  return map;
}

double dephasing_pair_alpha_fidelity(double gamma1, double gamma2, Alpha alpha) {
  if (!(gamma1 >= 0.0 && gamma1 <= 1.0 && gamma2 >= 0.0 && gamma2 <= 1.0))
    throw std::invalid_argument("dephasing_pair_alpha_fidelity: gammas must lie in [0,1]");
  const double a = alpha.value();
  auto term = [&](double s) {
    const double p2 = (1.0 + s * gamma2) / 2.0;
    const double p1 = (1.0 + s * gamma1) / 2.0;
    if (p1 == 0.0 && a > 0.0) return 0.0;
    if (p2 == 0.0 && a < 1.0) return 0.0;
    return std::pow(p2, 1.0 - a) * std::pow(p1, a);
  };
  return std::clamp(term(1.0) + term(-1.0), 0.0, 1.0);
}

double log_partition(const OscillatorBath& bath, double beta) {
  check_bath(bath);
  if (!(beta > 0.0)) throw std::invalid_argument("log_partition: beta must be positive");
  double s = 0.0;
  for (const BathMode& m : bath.modes)
    s += -beta * m.omega / 2.0 - std::log1p(-std::exp(-beta * m.omega));
  return s;
}

double thermal_renyi_divergence(const OscillatorBath& bath, double beta1, double beta2,
                                Alpha alpha) {
  check_bath(bath);
  const bool inf1 = std::isinf(beta1), inf2 = std::isinf(beta2);
  if (!inf1 && !(beta1 > 0.0)) throw std::invalid_argument("thermal_renyi_divergence: beta1");
  if (!inf2 && !(beta2 > 0.0)) throw std::invalid_argument("thermal_renyi_divergence: beta2");
  if (inf1 && inf2) return 0.0;
  const double a = alpha.value();
  if (inf1) {
    // S_alpha(ground || thermal) = -sum_k ln(1 - e^{-beta2 w_k}), independent of alpha.
    double s = 0.0;
    for (const BathMode& m : bath.modes) s -= std::log1p(-std::exp(-beta2 * m.omega));
    return s;
  }
  if (inf2) {
    // S_alpha(thermal || ground) = a/(a-1) sum_k ln(1 - e^{-beta1 w_k}).
    double s = 0.0;
    for (const BathMode& m : bath.modes) s += std::log1p(-std::exp(-beta1 * m.omega));
    return a / (a - 1.0) * s;
  }
  const double mixed = a * beta1 + (1.0 - a) * beta2;
  return std::max(
      (log_partition(bath, mixed) - a * log_partition(bath, beta1) -
       (1.0 - a) * log_partition(bath, beta2)) /
          (a - 1.0),
      0.0);
}

JCCoefficients jc_coefficients(double g, double omega, double temperature, double t, int n_trunc) {
  if (n_trunc < 1) throw std::invalid_argument("jc_coefficients: n_trunc must be >= 1");
  if (!(omega > 0.0)) throw std::invalid_argument("jc_coefficients: omega must be positive");
  if (temperature < 0.0) throw std::invalid_argument("jc_coefficients: temperature must be >= 0");
  const double gt = std::abs(g) * t;
  JCCoefficients out;
  if (temperature == 0.0) {
    out.a = 1.0;
    out.b = std::cos(gt) * std::cos(gt);
    out.c = std::cos(gt);
    out.tail_bound = 0.0;
    return out;
  }
  const double q = std::exp(-omega / temperature);
  // Ratios of sums truncated at n_trunc; the zero-point factor cancels and
  // normalizing by the truncated partition sum keeps t = 0 exactly identity.
  double a = 0.0, b = 0.0, c = 0.0, z = 0.0;
  double w = 1.0;
  for (int n = 0; n <= n_trunc; ++n) {
    const double cn = std::cos(gt * std::sqrt(static_cast<double>(n)));
    const double cn1 = std::cos(gt * std::sqrt(static_cast<double>(n + 1)));
    a += w * cn * cn;
    b += w * cn1 * cn1;
    c += w * cn1 * cn;
    z += w;
    w *= q;
  }
  out.a = a / z;
  out.b = b / z;
  out.c = c / z;
  out.tail_bound = std::pow(q, n_trunc + 1) / (1.0 - q);
  return out;
}

QubitChannel jc_channel(double g, double omega, double temperature, double t, int n_trunc) {
  const JCCoefficients k = jc_coefficients(g, omega, temperature, t, n_trunc);
  QubitChannel e;
  e.linear[0][0] = k.c.real();
  e.linear[0][1] = k.c.imag();
  e.linear[1][0] = -k.c.imag();
  e.linear[1][1] = k.c.real();
  e.linear[2][2] = k.a + k.b - 1.0;
  e.shift[2] = k.a - k.b;
  return e;
}

DynamicalMap jc_map(double g, double omega, double temperature, int n_trunc) {
  DynamicalMap map;
  map.label = "jaynes-cummings";
  map.evaluator = [g, omega, temperature, n_trunc](double t) {
    return jc_channel(g, omega, temperature, t, n_trunc);
  };
  return map;
}

double gibbs_population(double temperature, double omega) {
  if (temperature <= 0.0) return 0.0;
  return 1.0 / (1.0 + std::exp(omega / temperature));
}

std::vector<IsingMode> ising_spectrum(const IsingChain& chain, double field) {
  check_chain(chain);
  std::vector<IsingMode> modes(static_cast<size_t>(chain.sites / 2));
  for (int n = 1; n <= chain.sites / 2; ++n) {
    IsingMode& m = modes[static_cast<size_t>(n - 1)];
    m.momentum = (2.0 * n - 1.0) * M_PI / chain.sites;
    m.energy = 2.0 * chain.coupling *
               std::sqrt(field * field - 2.0 * field * std::cos(m.momentum) + 1.0);
    m.angle = 0.5 * std::atan2(std::sin(m.momentum), field - std::cos(m.momentum));
  }
  return modes;
}

double loschmidt_ground(const IsingChain& chain, double t) {
  if (t < 0.0) throw std::invalid_argument("loschmidt_ground: t must be >= 0");
  const std::vector<IsingMode> at_lambda = ising_spectrum(chain, chain.lambda);
  const std::vector<IsingMode> at_excited = ising_spectrum(chain, chain.lambda + chain.delta);
  double prod = 1.0;
  for (size_t i = 0; i < at_lambda.size(); ++i) {
    const double a = at_excited[i].angle - at_lambda[i].angle;
    const double s2 = std::sin(2.0 * a) * std::sin(2.0 * a);
    const double st = std::sin(at_excited[i].energy * t);
    prod *= 1.0 - s2 * st * st;
  }
  return std::clamp(prod, 0.0, 1.0);
}

// ---- dense oracle -----------------------------------------------------------

namespace {

constexpr int kMaxOracleSites = 10;

// Chain Hamiltonian H(h) = -J sum_j (s3_j s3_{j+1} + h s1_j), periodic.
std::vector<double> chain_hamiltonian(const IsingChain& chain, double field) {
  const int n = chain.sites;
  const size_t dim = size_t{1} << n;
  std::vector<double> h(dim * dim, 0.0);
  for (size_t s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      const double zj = ((s >> j) & 1u) ? -1.0 : 1.0;
      const double zj1 = ((s >> ((j + 1) % n)) & 1u) ? -1.0 : 1.0;
      diag += zj * zj1;
    }
    h[s * dim + s] = -chain.coupling * diag;
    for (int j = 0; j < n; ++j) {
      const size_t flipped = s ^ (size_t{1} << j);
      h[flipped * dim + s] += -chain.coupling * field;
    }
  }
  return h;
}

// Cyclic Jacobi for real symmetric matrices (row-major).
void sym_eig(std::vector<double>& a, size_t dim, std::vector<double>& eigvals,
             std::vector<double>& eigvecs) {
  eigvecs.assign(dim * dim, 0.0);
  for (size_t i = 0; i < dim; ++i) eigvecs[i * dim + i] = 1.0;

  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1.0);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < dim; ++p)
      for (size_t q = p + 1; q < dim; ++q) off += a[p * dim + q] * a[p * dim + q];
    if (off <= 1e-28 * scale * scale * static_cast<double>(dim * dim)) break;
    for (size_t p = 0; p + 1 < dim; ++p) {
      for (size_t q = p + 1; q < dim; ++q) {
        const double apq = a[p * dim + q];
        if (std::abs(apq) < 1e-300) continue;
        const double app = a[p * dim + p], aqq = a[q * dim + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (size_t i = 0; i < dim; ++i) {
          const double aip = a[i * dim + p], aiq = a[i * dim + q];
          a[i * dim + p] = c * aip - s * aiq;
          a[i * dim + q] = s * aip + c * aiq;
        }
        for (size_t j = 0; j < dim; ++j) {
          const double apj = a[p * dim + j], aqj = a[q * dim + j];
          a[p * dim + j] = c * apj - s * aqj;
          a[q * dim + j] = s * apj + c * aqj;
        }
        a[p * dim + q] = 0.0;
        a[q * dim + p] = 0.0;
        for (size_t i = 0; i < dim; ++i) {
          const double vip = eigvecs[i * dim + p], viq = eigvecs[i * dim + q];
          eigvecs[i * dim + p] = c * vip - s * viq;
          eigvecs[i * dim + q] = s * vip + c * viq;
        }
      }
    }
  }
  eigvals.resize(dim);
  for (size_t i = 0; i < dim; ++i) eigvals[i] = a[i * dim + i];
}

struct Diagonalized {
  std::vector<double> eigvals;
  std::vector<double> eigvecs;  // columns
  size_t dim = 0;
};

Diagonalized diagonalize_chain(const IsingChain& chain, double field) {
  std::vector<double> h = chain_hamiltonian(chain, field);
  Diagonalized d;
  d.dim = size_t{1} << chain.sites;
  sym_eig(h, d.dim, d.eigvals, d.eigvecs);
  return d;
}

std::vector<double> even_ground_state(const Diagonalized& d) {
  const size_t dim = d.dim;
  // Two lowest eigenvalues and their vectors.
  size_t i0 = 0, i1 = 1;
  if (d.eigvals[i1] < d.eigvals[i0]) std::swap(i0, i1);
  for (size_t i = 2; i < dim; ++i) {
    if (d.eigvals[i] < d.eigvals[i0]) {
      i1 = i0;
      i0 = i;
    } else if (d.eigvals[i] < d.eigvals[i1]) {
      i1 = i;
    }
  }
  auto project_even = [&](size_t col) {
    std::vector<double> w(dim);
    double n2 = 0.0;
    for (size_t s = 0; s < dim; ++s) {
      // Global spin flip: s -> ~s.
      w[s] = d.eigvecs[s * dim + col] + d.eigvecs[((dim - 1) ^ s) * dim + col];
      n2 += w[s] * w[s];
    }
    if (n2 > 0.25) {
      const double inv = 1.0 / std::sqrt(n2);
      for (double& v : w) v *= inv;
      return w;
    }
    w.clear();
    return w;
  };
  std::vector<double> w = project_even(i0);
  if (w.empty()) w = project_even(i1);
  if (w.empty()) throw std::logic_error("even_ground_state: no even component in the ground doublet");
  return w;
}

}  // namespace

struct LoschmidtExactOracle::Impl {
  std::vector<Complex> phi;
  std::vector<double> e1, e2;
  // W[j*dim+k] = conj(c1_j) <v1_j|v2_k> c2_k; echo(t) = |sum W e^{i(E1_j - E2_k)t}|^2.
  std::vector<Complex> w;
  size_t dim = 0;

  Impl(const IsingChain& chain, std::vector<Complex> phi_in) {
    check_chain(chain);
    if (chain.sites > kMaxOracleSites)
      throw std::invalid_argument("LoschmidtExactOracle: dense oracle requires N <= 10");
    Diagonalized d1 = diagonalize_chain(chain, chain.lambda);
    Diagonalized d2 = diagonalize_chain(chain, chain.lambda + chain.delta);
    dim = d1.dim;

    if (phi_in.empty()) {
      const std::vector<double> g = even_ground_state(d1);
      phi.assign(g.begin(), g.end());
    } else {
      if (phi_in.size() != dim)
        throw std::invalid_argument("LoschmidtExactOracle: state dimension mismatch");
      double n2 = 0.0;
      for (const Complex& v : phi_in) n2 += std::norm(v);
      if (std::abs(n2 - 1.0) > 1e-9)
        throw std::invalid_argument("LoschmidtExactOracle: state must be normalized");
      phi = std::move(phi_in);
    }

    std::vector<Complex> c1(dim, 0.0), c2(dim, 0.0);
    for (size_t j = 0; j < dim; ++j)
      for (size_t s = 0; s < dim; ++s) {
        c1[j] += d1.eigvecs[s * dim + j] * phi[s];
        c2[j] += d2.eigvecs[s * dim + j] * phi[s];
      }
    // Overlap matrix <v1_j | v2_k>.
    w.assign(dim * dim, Complex(0.0, 0.0));
    std::vector<double> ov(dim * dim, 0.0);
    for (size_t s = 0; s < dim; ++s)
      for (size_t j = 0; j < dim; ++j) {
        const double v1 = d1.eigvecs[s * dim + j];
        if (v1 == 0.0) continue;
        for (size_t k = 0; k < dim; ++k) ov[j * dim + k] += v1 * d2.eigvecs[s * dim + k];
      }
    for (size_t j = 0; j < dim; ++j)
      for (size_t k = 0; k < dim; ++k) w[j * dim + k] = std::conj(c1[j]) * ov[j * dim + k] * c2[k];
    e1 = std::move(d1.eigvals);
    e2 = std::move(d2.eigvals);
  }
};

LoschmidtExactOracle::LoschmidtExactOracle(const IsingChain& chain)
    : impl_(std::make_unique<Impl>(chain, std::vector<Complex>{})) {}

LoschmidtExactOracle::LoschmidtExactOracle(const IsingChain& chain, std::vector<Complex> state)
    : impl_(std::make_unique<Impl>(chain, std::move(state))) {}

LoschmidtExactOracle::~LoschmidtExactOracle() = default;
LoschmidtExactOracle::LoschmidtExactOracle(LoschmidtExactOracle&&) noexcept = default;
LoschmidtExactOracle& LoschmidtExactOracle::operator=(LoschmidtExactOracle&&) noexcept = default;

double LoschmidtExactOracle::echo(double t) const {
  const size_t dim = impl_->dim;
  Complex amp = 0.0;
  for (size_t j = 0; j < dim; ++j) {
    const Complex pj = std::polar(1.0, impl_->e1[j] * t);
    for (size_t k = 0; k < dim; ++k) {
      const Complex& w = impl_->w[j * dim + k];
      if (w == Complex(0.0, 0.0)) continue;
      amp += w * pj * std::polar(1.0, -impl_->e2[k] * t);
    }
  }
  return std::clamp(std::norm(amp), 0.0, 1.0);
}

const std::vector<Complex>& LoschmidtExactOracle::state() const { return impl_->phi; }

double loschmidt_exact_small(const IsingChain& chain, double t) {
  return LoschmidtExactOracle(chain).echo(t);
}

double loschmidt_exact_small(const IsingChain& chain, std::span<const Complex> state, double t) {
  return LoschmidtExactOracle(chain, std::vector<Complex>(state.begin(), state.end())).echo(t);
}

double ising_ground_energy_exact(const IsingChain& chain, double field) {
  check_chain(chain);
  if (chain.sites > kMaxOracleSites)
    throw std::invalid_argument("ising_ground_energy_exact: N <= 10 required");
  Diagonalized d = diagonalize_chain(chain, field);
  return *std::min_element(d.eigvals.begin(), d.eigvals.end());
}

std::vector<double> ising_ground_state_exact(const IsingChain& chain, double field) {
  check_chain(chain);
  if (chain.sites > kMaxOracleSites)
    throw std::invalid_argument("ising_ground_state_exact: N <= 10 required");
  Diagonalized d = diagonalize_chain(chain, field);
  return even_ground_state(d);
}

DynamicalMap ising_dephasing_map(const IsingChain& chain) {
  check_chain(chain);
  DynamicalMap map;
  map.label = "ising-dephasing-ground";
  map.evaluator = [chain](double t) {
    return dephasing_channel(std::sqrt(loschmidt_ground(chain, t)));
  };
  return map;
}

DynamicalMap ising_dephasing_map(const IsingChain& chain, std::vector<Complex> state) {
  auto oracle = std::make_shared<LoschmidtExactOracle>(chain, std::move(state));
  DynamicalMap map;
  map.label = "ising-dephasing-exact";
  map.evaluator = [oracle](double t) { return dephasing_channel(std::sqrt(oracle->echo(t))); };
  return map;
}

}  // namespace dynfid
