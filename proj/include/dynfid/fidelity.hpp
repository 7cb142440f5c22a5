// State-level alpha-fidelities and divergences.
//
// F_alpha(r1, r2) = tr[(r2^{(1-a)/2a} r1 r2^{(1-a)/2a})^a] for a in (0,1);
// a = 1/2 is the Uhlmann fidelity. Two independent evaluation routes are
// provided for qubits: a closed form from the Bloch coordinates and the
// generic spectral route. They are used as mutual oracles in the tests.
#ifndef DYNFID_FIDELITY_HPP
#define DYNFID_FIDELITY_HPP

#include "dynfid/qmath.hpp"

namespace dynfid {

// Renyi order restricted to the open interval (0,1).
class Alpha {
 public:
  explicit Alpha(double value);
  double value() const { return v_; }
  // Data-processing holds for alpha in [1/2, 1).
  bool dpi_valid() const { return v_ >= 0.5; }

 private:
  double v_;
};

struct DivergenceValue {
  double value = 0.0;
  bool infinite = false;

  static DivergenceValue finite(double v) { return {v, false}; }
  static DivergenceValue infinity();
};

// Closed-form qubit route (trace/determinant of the sandwiched product).
// Falls through to the spectral route when the second state is pure to
// machine precision, where the closed form degenerates.
double alpha_fidelity_qubit(const BlochVector& rho1, const BlochVector& rho2, Alpha alpha);

// Spectral route for any dimension up to 16.
double alpha_fidelity_general(const DensityMatrix& rho1, const DensityMatrix& rho2, Alpha alpha);

// tr[r1^a r2^{1-a}], the other quantum extension of the classical formula.
double tilde_fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2, Alpha alpha);

// S_alpha = ln(F_alpha)/(alpha-1); infinite on orthogonal supports.
DivergenceValue renyi_divergence(const DensityMatrix& rho1, const DensityMatrix& rho2, Alpha alpha);

// tr[r1 (ln r1 - ln r2)]; infinite when supp(r1) is not within supp(r2).
DivergenceValue kl_divergence(const DensityMatrix& rho1, const DensityMatrix& rho2);

// tr(r1 r2) + sqrt((1 - tr r1^2)(1 - tr r2^2)) for qubit states.
double super_fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

}  // namespace dynfid

#endif
