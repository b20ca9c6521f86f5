#include "casimir/bem.hpp"
#include "casimir/error.hpp"

namespace casimir {

SolveWorkspace::SolveWorkspace(const ImpedanceMatrix& Z, double max_condition) : kappa_(Z.kappa) {
  if (Z.Z.rows() == 0 || Z.Z.rows() != Z.Z.cols()) throw NumericalError("impedance matrix is empty or not square");
  lu_.compute(Z.Z);
  rcond_ = lu_.rcond();
  if (!(rcond_ * max_condition >= 1.0))
    throw NumericalError("impedance matrix is ill-conditioned at kappa = " + std::to_string(Z.kappa) +
                         " (reciprocal condition " + std::to_string(rcond_) +
                         "); refine the mesh or review the kappa grid");
}

SolveWorkspace factorize(const ImpedanceMatrix& Z, double max_condition) { return SolveWorkspace(Z, max_condition); }

}  // namespace casimir
