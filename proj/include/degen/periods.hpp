#pragma once

#include <Eigen/Dense>

#include "degen/quadrature.hpp"
#include "degen/surface.hpp"

namespace degen {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

struct PeriodData {
    CMatrix A;  // A_ij = integral of x^{i-1} dx / y over delta_j
    CMatrix B;  // B_ij = integral of x^{i-1} dx / y over gamma_j
    CMatrix Z;  // A^{-1} B
    RMatrix imZ;
    double sym_defect = 0.0;
    double min_eig = 0.0;
    double cond_A = 0.0;
    bool orientation_flipped = false;
    bool validated = false;

    [[nodiscard]] int genus() const noexcept { return static_cast<int>(Z.rows()); }
};

struct PeriodDiagnostics {
    double sym_defect = 0.0;
    double min_eig = 0.0;
    double cond_A = 0.0;
    bool pass = false;
};

inline constexpr double kDefaultSymTol = 1e-6;
inline constexpr double kMaxConditionA = 1e12;

/// Periods of x^{i-1} dx / y over the elementary cycles: column k holds
/// 2 * integral over the k-th chain segment (g x 2g).
CMatrix elementary_periods(const CurveSpec& spec, const QuadratureConfig& cfg = {});

/// Z = A^{-1} B with the global orientation fix (negate B when Im Z < 0) and
/// diagnostics. Throws NumericalError when A is singular, when Im Z is
/// indefinite, or when the symmetry defect exceeds sym_tol.
PeriodData periods_from_matrices(const CMatrix& A, const CMatrix& B, double sym_tol = kDefaultSymTol);

PeriodData compute_periods(const CurveSpec& spec, const HomologyBasis& basis,
                           const QuadratureConfig& cfg = {}, double sym_tol = kDefaultSymTol);

PeriodDiagnostics validate_periods(const PeriodData& pd, double tol = kDefaultSymTol);

/// det(Im Z); throws when not strictly positive.
double det_im_Z(const PeriodData& pd);

/// Symmetrized (Im Z)^{-1}, via Cholesky.
RMatrix inverse_im_Z(const PeriodData& pd);

/// Diagnostics for an arbitrary Z (used for synthetic matrices).
PeriodDiagnostics diagnose_Z(const CMatrix& Z, double tol);

}  // namespace degen
