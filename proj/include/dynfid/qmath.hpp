// Small dense complex linear algebra for low-dimensional quantum states:
// Hermitian eigendecomposition (cyclic Jacobi), PSD matrix powers and
// Bloch-vector conversions. Everything here is a pure value type.
#ifndef DYNFID_QMATH_HPP
#define DYNFID_QMATH_HPP

#include <complex>
#include <vector>

namespace dynfid {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 16;

// Numerical tolerances shared by the library, the tests and the CLI.
struct Tolerances {
  double hermiticity = 1e-12;      // ||M - M^dag||_max for density matrices
  double eig_hermiticity = 1e-10;  // input check for the eigensolver
  double psd = 1e-10;              // eigenvalues below -psd are a hard error
  double eig_clip = 1e-14;         // eigenvalues in [-psd, eig_clip] snap to 0
  double trace = 1e-12;
  double bloch_norm = 1e-12;       // ||v|| <= 1 + bloch_norm
  double orthogonal_fidelity = 1e-12;  // fidelity below this => infinite divergence
  double kl_support_eig = 1e-14;       // support detection in the KL divergence
  double kl_support_weight = 1e-12;
  double denominator_guard = 1e-10;    // channel-fidelity quotient feasibility
  double choi_psd = 1e-9;              // CP check on the Choi matrix
};

inline constexpr Tolerances kTol{};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm2() const { return x * x + y * y + z * z; }
  double norm() const;
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
};

// Dense row-major complex matrix, dimension 1..16.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(int dim);

  static ComplexMatrix identity(int dim);

  int dim() const { return dim_; }

  Complex& operator()(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
  const Complex& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;
  double hermiticity_defect() const;  // ||M - M^dag||_max

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  int dim_;
  std::vector<Complex> a_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Pauli matrices, sigma(0) = identity.
const ComplexMatrix& sigma(int i);

// Hermitian, PSD, unit-trace matrix. The constructor enforces the contract
// and throws std::invalid_argument on violation.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  int dim() const { return mat_.dim(); }
  const ComplexMatrix& mat() const { return mat_; }

 private:
  ComplexMatrix mat_;
};

DensityMatrix bloch_to_density(const BlochVector& v);
BlochVector density_to_bloch(const DensityMatrix& rho);

struct EigResult {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // columns, unitary
};

// Cyclic Jacobi diagonalization. Input must be Hermitian within
// kTol.eig_hermiticity (relative to the matrix scale).
EigResult hermitian_eig(const ComplexMatrix& m);

// Spectral power V diag(lambda^p) V^dag with the support convention 0^p = 0
// for every p, including negative ones. Eigenvalues in [-kTol.psd,
// kTol.eig_clip] are clipped to zero first; anything below -kTol.psd throws.
ComplexMatrix psd_power(const ComplexMatrix& m, double p);

}  // namespace dynfid

#endif
