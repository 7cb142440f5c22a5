#include "dynfid/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dynfid {

double BlochVector::norm() const { return std::sqrt(norm2()); }

ComplexMatrix::ComplexMatrix(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("ComplexMatrix: dimension must be in 1..16");
  a_.assign(static_cast<size_t>(dim) * dim, Complex(0.0, 0.0));
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::hermiticity_defect() const {
  double d = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c)
      d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return d;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("matrix dimension mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("matrix dimension mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (Complex& v : a_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("matrix dimension mismatch");
  const int n = a.dim_;
  ComplexMatrix c(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int na = a.dim(), nb = b.dim();
  if (na * nb > kMaxDim) throw std::invalid_argument("kron: product dimension exceeds 16");
  ComplexMatrix c(na * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l) c(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
  return c;
}

const ComplexMatrix& sigma(int i) {
  static const std::vector<ComplexMatrix> paulis = [] {
    std::vector<ComplexMatrix> p(4, ComplexMatrix(2));
    p[0](0, 0) = 1.0;
    p[0](1, 1) = 1.0;
    p[1](0, 1) = 1.0;
    p[1](1, 0) = 1.0;
    p[2](0, 1) = Complex(0.0, -1.0);
    p[2](1, 0) = Complex(0.0, 1.0);
    p[3](0, 0) = 1.0;
    p[3](1, 1) = -1.0;
    return p;
  }();
  if (i < 0 || i > 3) throw std::invalid_argument("sigma: index must be 0..3");
  return paulis[static_cast<size_t>(i)];
}

namespace {

double sum_offdiag_sq(const ComplexMatrix& a) {
  double s = 0.0;
  for (int p = 0; p < a.dim(); ++p)
    for (int q = p + 1; q < a.dim(); ++q) s += std::norm(a(p, q));
  return s;
}

}  // namespace

EigResult hermitian_eig(const ComplexMatrix& m) {
  const int n = m.dim();
  const double scale = std::max(1.0, m.max_abs());
  if (m.hermiticity_defect() > kTol.eig_hermiticity * scale)
    throw std::invalid_argument("hermitian_eig: input is not Hermitian");

  // Work on the exactly Hermitian part.
  ComplexMatrix a(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double stop = 1e-30 * scale * scale * n * n;
  for (int sweep = 0; sweep < 100 && sum_offdiag_sq(a) > stop; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex w = a(p, q);
        const double aw = std::abs(w);
        if (aw < 1e-300) continue;
        const Complex phase = w / aw;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * aw);
        double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex spe = s * phase;           // s e^{i phi}
        const Complex spc = s * std::conj(phase);  // s e^{-i phi}

        // A <- A U, columns p and q.
        for (int i = 0; i < n; ++i) {
          const Complex aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - spc * aiq;
          a(i, q) = spe * aip + c * aiq;
        }
        // A <- U^dag A, rows p and q.
        for (int j = 0; j < n; ++j) {
          const Complex apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - spe * aqj;
          a(q, j) = spc * apj + c * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);
        // V <- V U.
        for (int i = 0; i < n; ++i) {
          const Complex vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - spc * viq;
          v(i, q) = spe * vip + c * viq;
        }
      }
    }
  }

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });

  EigResult res{std::vector<double>(static_cast<size_t>(n)), ComplexMatrix(n)};
  for (int c = 0; c < n; ++c) {
    res.eigenvalues[static_cast<size_t>(c)] = a(order[static_cast<size_t>(c)], order[static_cast<size_t>(c)]).real();
    for (int r = 0; r < n; ++r) res.eigenvectors(r, c) = v(r, order[static_cast<size_t>(c)]);
  }
  return res;
}

ComplexMatrix psd_power(const ComplexMatrix& m, double p) {
  EigResult e = hermitian_eig(m);
  const int n = m.dim();
  std::vector<double> lam(e.eigenvalues);
  for (double& l : lam) {
    if (l < -kTol.psd) throw std::domain_error("psd_power: matrix is not PSD");
    if (l <= kTol.eig_clip) l = 0.0;
  }
  ComplexMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < n; ++k) {
        const double l = lam[static_cast<size_t>(k)];
        if (l == 0.0) continue;  // 0^p = 0 on the support complement
        s += e.eigenvectors(i, k) * std::pow(l, p) * std::conj(e.eigenvectors(j, k));
      }
      out(i, j) = s;
    }
  // Symmetrize away rounding asymmetry.
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c) {
      const Complex h = 0.5 * (out(r, c) + std::conj(out(c, r)));
      out(r, c) = h;
      out(c, r) = std::conj(h);
    }
  return out;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {
  if (mat_.hermiticity_defect() > kTol.hermiticity)
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(mat_.trace() - Complex(1.0, 0.0)) > kTol.trace)
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  EigResult e = hermitian_eig(mat_);
  if (e.eigenvalues.back() < -kTol.psd)
    throw std::invalid_argument("DensityMatrix: not positive semidefinite");
}

DensityMatrix bloch_to_density(const BlochVector& v) {
  if (v.norm() > 1.0 + kTol.bloch_norm)
    throw std::invalid_argument("bloch_to_density: Bloch norm exceeds 1");
  ComplexMatrix m(2);
  m(0, 0) = 0.5 * (1.0 + v.z);
  m(1, 1) = 0.5 * (1.0 - v.z);
  m(0, 1) = 0.5 * Complex(v.x, -v.y);
  m(1, 0) = 0.5 * Complex(v.x, v.y);
  return DensityMatrix(std::move(m));
}

BlochVector density_to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("density_to_bloch: dimension must be 2");
  const ComplexMatrix& m = rho.mat();
  BlochVector v;
  v.x = 2.0 * m(1, 0).real();
  v.y = 2.0 * m(1, 0).imag();
  v.z = (m(0, 0) - m(1, 1)).real();
  return v;
}

}  // namespace dynfid
