#include "dynfid/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dynfid {

namespace {

double clamp01(double f) { return std::clamp(f, 0.0, 1.0); }

double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b, double* imag = nullptr) {
  Complex t = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int k = 0; k < a.dim(); ++k) t += a(i, k) * b(k, i);
  if (imag) *imag = t.imag();
  return t.real();
}

}  // namespace

Alpha::Alpha(double value) : v_(value) {
  if (!(value > 0.0 && value < 1.0))
    throw std::invalid_argument("Alpha: order must lie strictly in (0,1)");
}

DivergenceValue DivergenceValue::infinity() {
  return {std::numeric_limits<double>::infinity(), true};
}

double alpha_fidelity_qubit(const BlochVector& v1, const BlochVector& v2, Alpha alpha) {
  const double r1 = v1.norm();
  const double r2 = v2.norm();
  if (r1 > 1.0 + kTol.bloch_norm || r2 > 1.0 + kTol.bloch_norm)
    throw std::invalid_argument("alpha_fidelity_qubit: Bloch norm exceeds 1");
  // The closed form divides by quantities vanishing at r2 = 1.
  if (r2 > 1.0 - 1e-9)
    return alpha_fidelity_general(bloch_to_density(v1), bloch_to_density(v2), alpha);

  const double a = alpha.value();
  const double q = (1.0 - a) / a;
  const double ap = std::pow((1.0 + r2) / 2.0, q) + std::pow((1.0 - r2) / 2.0, q);
  const double am = std::pow((1.0 + r2) / 2.0, q) - std::pow((1.0 - r2) / 2.0, q);
  // T = tr[r2^{(1-a)/a} r1], D = det of the sandwiched product.
  double t = 0.5 * ap;
  if (r2 >= 1e-12) t += 0.5 * am * v1.dot(v2) / r2;
  const double d = std::pow((1.0 - r2 * r2) / 4.0, q) * (1.0 - r1 * r1) / 4.0;
  const double disc = std::max(t * t - 4.0 * d, 0.0);
  const double lp = 0.5 * (t + std::sqrt(disc));
  // lambda- = D/lambda+ sidesteps the cancellation in t^2 - 4d, which is
  // catastrophic when d underflows relative to t^2 (small alpha).
  const double lm = lp > 0.0 ? std::max(d / lp, 0.0) : 0.0;
  double f = 0.0;
  if (lp > 0.0) f += std::pow(lp, a);
  if (lm > 0.0) f += std::pow(lm, a);
  return clamp01(f);
}

double alpha_fidelity_general(const DensityMatrix& rho1, const DensityMatrix& rho2, Alpha alpha) {
  if (rho1.dim() != rho2.dim())
    throw std::invalid_argument("alpha_fidelity_general: dimension mismatch");
  const double a = alpha.value();
  const ComplexMatrix p = psd_power(rho2.mat(), (1.0 - a) / (2.0 * a));
  ComplexMatrix s = p * rho1.mat() * p;
  for (int r = 0; r < s.dim(); ++r)
    for (int c = r; c < s.dim(); ++c) {
      const Complex h = 0.5 * (s(r, c) + std::conj(s(c, r)));
      s(r, c) = h;
      s(c, r) = std::conj(h);
    }
  EigResult e = hermitian_eig(s);
  double f = 0.0;
  for (double l : e.eigenvalues)
    if (l > 0.0) f += std::pow(l, a);
  return clamp01(f);
}

double tilde_fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2, Alpha alpha) {
  if (rho1.dim() != rho2.dim())
    throw std::invalid_argument("tilde_fidelity: dimension mismatch");
  const double a = alpha.value();
  const ComplexMatrix ra = psd_power(rho1.mat(), a);
  const ComplexMatrix rb = psd_power(rho2.mat(), 1.0 - a);
  double imag = 0.0;
  const double f = real_trace_product(ra, rb, &imag);
  if (std::abs(imag) > 1e-12)
    throw std::logic_error("tilde_fidelity: trace has a non-negligible imaginary part");
  return clamp01(f);
}

DivergenceValue renyi_divergence(const DensityMatrix& rho1, const DensityMatrix& rho2, Alpha alpha) {
  const double f = alpha_fidelity_general(rho1, rho2, alpha);
  if (f < kTol.orthogonal_fidelity) return DivergenceValue::infinity();
  return DivergenceValue::finite(std::max(std::log(f) / (alpha.value() - 1.0), 0.0));
}

DivergenceValue kl_divergence(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim())
    throw std::invalid_argument("kl_divergence: dimension mismatch");
  const EigResult e1 = hermitian_eig(rho1.mat());
  const EigResult e2 = hermitian_eig(rho2.mat());
  const int n = rho1.dim();

  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double l = e1.eigenvalues[static_cast<size_t>(i)];
    if (l <= 1e-15) continue;
    s += l * std::log(l);
  }
  for (int j = 0; j < n; ++j) {
    const double m = e2.eigenvalues[static_cast<size_t>(j)];
    // Weight of rho1 on the j-th eigenvector of rho2.
    double w = 0.0;
    for (int i = 0; i < n; ++i) {
      const double l = e1.eigenvalues[static_cast<size_t>(i)];
      if (l <= 1e-15) continue;
      Complex ov = 0.0;
      for (int r = 0; r < n; ++r)
        ov += std::conj(e2.eigenvectors(r, j)) * e1.eigenvectors(r, i);
      w += l * std::norm(ov);
    }
    if (m < kTol.kl_support_eig) {
      if (w > kTol.kl_support_weight) return DivergenceValue::infinity();
      continue;
    }
    s -= w * std::log(m);
  }
  return DivergenceValue::finite(std::max(s, 0.0));
}

double super_fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != 2 || rho2.dim() != 2)
    throw std::invalid_argument("super_fidelity: qubit states required");
  const double overlap = real_trace_product(rho1.mat(), rho2.mat());
  const double p1 = real_trace_product(rho1.mat(), rho1.mat());
  const double p2 = real_trace_product(rho2.mat(), rho2.mat());
  return overlap + std::sqrt(std::max(1.0 - p1, 0.0) * std::max(1.0 - p2, 0.0));
}

}  // namespace dynfid
