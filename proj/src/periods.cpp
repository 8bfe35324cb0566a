#include "degen/periods.hpp"

#include <cmath>
#include <sstream>

namespace degen {

CMatrix elementary_periods(const CurveSpec& spec, const QuadratureConfig& cfg)
{
    const int g = spec.genus;
    const auto chain = branch_chain(spec);
    CMatrix E(g, 2 * g);
    for (int k = 0; k < 2 * g; ++k) {
        const auto& seg = chain[k];
        for (int i = 0; i < g; ++i) {
            SegmentIntegral si;
            si.power = i;
            si.p = seg.p;
            si.q = seg.q;
            si.other_roots = seg.others;
            si.branch = seg.branch;
            E(i, k) = 2.0 * segment_period(si, cfg);
        }
    }
    return E;
}

namespace {

CMatrix combine(const CMatrix& E, const std::vector<Cycle>& cycles)
{
    CMatrix M = CMatrix::Zero(E.rows(), static_cast<Eigen::Index>(cycles.size()));
    for (std::size_t j = 0; j < cycles.size(); ++j)
        for (std::size_t k = 0; k < cycles[j].coeffs.size(); ++k)
            if (cycles[j].coeffs[k] != 0)
                M.col(static_cast<Eigen::Index>(j)) += static_cast<double>(cycles[j].coeffs[k]) * E.col(static_cast<Eigen::Index>(k));
    return M;
}

double symmetric_defect(const CMatrix& Z)
{
    double d = 0.0;
    for (Eigen::Index i = 0; i < Z.rows(); ++i)
        for (Eigen::Index j = 0; j < Z.cols(); ++j)
            d = std::max(d, std::abs(Z(i, j) - Z(j, i)));
    return d;
}

Eigen::VectorXd im_eigenvalues(const CMatrix& Z)
{
    const RMatrix im = Z.imag();
    const RMatrix sym = 0.5 * (im + im.transpose());
    return Eigen::SelfAdjointEigenSolver<RMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues();
}

double condition_number(const CMatrix& A)
{
    const Eigen::JacobiSVD<CMatrix> svd(A);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

}  // namespace

PeriodDiagnostics diagnose_Z(const CMatrix& Z, double tol)
{
    PeriodDiagnostics d;
    d.sym_defect = symmetric_defect(Z);
    d.min_eig = im_eigenvalues(Z).minCoeff();
    d.pass = d.sym_defect <= tol && d.min_eig > 0.0;
    return d;
}

PeriodData periods_from_matrices(const CMatrix& A, const CMatrix& B, double sym_tol)
{
    if (A.rows() != A.cols() || B.rows() != A.rows() || B.cols() != A.cols())
        throw std::invalid_argument("periods: A and B must be square and of equal size");
    PeriodData pd;
    pd.A = A;
    pd.B = B;
    pd.cond_A = condition_number(A);
    if (!(pd.cond_A <= kMaxConditionA)) {
        std::ostringstream os;
        os << "periods: A is singular (condition number " << pd.cond_A << ")";
        throw NumericalError(os.str());
    }
    const Eigen::PartialPivLU<CMatrix> lu(A);
    pd.Z = lu.solve(B);

    const Eigen::VectorXd eig = im_eigenvalues(pd.Z);
    if (eig.maxCoeff() < 0.0) {
        pd.B = -pd.B;
        pd.Z = -pd.Z;
        pd.orientation_flipped = true;
    }
    pd.imZ = pd.Z.imag();
    const PeriodDiagnostics diag = diagnose_Z(pd.Z, sym_tol);
    pd.sym_defect = diag.sym_defect;
    pd.min_eig = diag.min_eig;
    if (!(pd.min_eig > 0.0)) {
        std::ostringstream os;
        os << "periods: Im Z is not positive definite (min eigenvalue " << pd.min_eig << ")";
        throw NumericalError(os.str());
    }
    if (!(pd.sym_defect <= sym_tol)) {
        std::ostringstream os;
        os << "periods: symmetry defect " << pd.sym_defect << " exceeds " << sym_tol;
        throw NumericalError(os.str());
    }
    pd.validated = true;
    return pd;
}

PeriodData compute_periods(const CurveSpec& spec, const HomologyBasis& basis, const QuadratureConfig& cfg,
                           double sym_tol)
{
    if (basis.genus() != spec.genus)
        throw std::invalid_argument("compute_periods: basis genus does not match the curve");
    const CMatrix E = elementary_periods(spec, cfg);
    return periods_from_matrices(combine(E, basis.deltas), combine(E, basis.gammas), sym_tol);
}

PeriodDiagnostics validate_periods(const PeriodData& pd, double tol)
{
    PeriodDiagnostics d = diagnose_Z(pd.Z, tol);
    d.cond_A = pd.cond_A;
    return d;
}

double det_im_Z(const PeriodData& pd)
{
    const RMatrix im = pd.Z.imag();
    const double det = (0.5 * (im + im.transpose())).determinant();
    if (!(det > 0.0))
        throw NumericalError("det_im_Z: determinant of Im Z is not positive");
    return det;
}

RMatrix inverse_im_Z(const PeriodData& pd)
{
    const RMatrix im = pd.Z.imag();
    const RMatrix sym = 0.5 * (im + im.transpose());
    const Eigen::LLT<RMatrix> llt(sym);
    if (llt.info() != Eigen::Success)
        throw NumericalError("inverse_im_Z: Im Z is not positive definite");
    return llt.solve(RMatrix::Identity(sym.rows(), sym.cols()));
}

}  // namespace degen
