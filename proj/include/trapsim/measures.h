#ifndef TRAPSIM_MEASURES_H
#define TRAPSIM_MEASURES_H

#include <Eigen/Dense>

#include "trapsim/state.h"

namespace trapsim {

/// Root fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0, 1].
/// For pure states this is |<phi|psi>|.
double fidelity(const DensityOperator &rho, const DensityOperator &sigma);
double fidelity(const StateVector &phi, const StateVector &psi);
double fidelity(const DensityOperator &rho, const StateVector &psi);

/// 1/2 ||rho - sigma||_1.
double trace_distance(const DensityOperator &rho, const DensityOperator &sigma);

/// <phi|rho|phi>.
double overlap(const DensityOperator &rho, const StateVector &phi);

/// Principal square root of a PSD matrix (negative eigenvalues clamped to 0).
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd &m);

}  // namespace trapsim

#endif
