#pragma once

#include <string>
#include <vector>

#include "degen/algebra.hpp"
#include "degen/quadrature.hpp"

namespace degen {

enum class FamilyKind { Node, CuspI, CuspII, Generic };

std::string to_string(FamilyKind kind);
FamilyKind family_from_string(const std::string& name);  // node | cusp1 | cusp2 | custom/generic

inline constexpr int kMaxGenus = 6;

/// One member of a hyperelliptic family y^2 = f(x) with deg f = 2g + 1.
///   Node    f = x (x - lambda) (x - 1) P(x)
///   CuspI   f = x (x^2 - lambda) P(x)
///   CuspII  f = x (x - lambda) (x - lambda^2) P(x)
///   Generic f = prod (x - r) over explicit_roots
struct CurveSpec {
    FamilyKind kind = FamilyKind::Generic;
    int genus = 1;
    RootPoly P;
    Complex lambda{0.0, 0.0};
    std::vector<Complex> explicit_roots;

    /// Finite branch points, in family order (degenerating roots first).
    [[nodiscard]] std::vector<Complex> roots() const;
    /// f evaluated in root form.
    [[nodiscard]] Complex f(Complex x) const;
};

CurveSpec make_family(FamilyKind kind, int genus, const RootPoly& P, Complex lambda);
/// Genus-2 shorthand with P = (x - a)(x - b).
CurveSpec make_genus2_family(FamilyKind kind, Complex a, Complex b, Complex lambda);
CurveSpec make_generic(std::vector<Complex> roots);
/// Same family template with a different lambda (revalidated).
CurveSpec with_lambda(const CurveSpec& spec, Complex lambda);

/// The 2g+1 finite branch points sorted by modulus, ties by principal argument.
std::vector<Complex> branch_points(const CurveSpec& spec);

/// Order in which the cycle chain visits the branch points. Equal to
/// branch_points() except for CuspI, where the chain runs -sqrt(lambda), 0,
/// sqrt(lambda) so that no chain segment passes through a branch point.
std::vector<Complex> chain_points(const CurveSpec& spec);

/// Cycle as integer coefficients over the elementary cycles c_1..c_{2g};
/// c_k encircles the consecutive chain points (e_k, e_{k+1}).
struct Cycle {
    std::vector<int> coeffs;
};

struct HomologyBasis {
    std::vector<Cycle> deltas;
    std::vector<Cycle> gammas;

    [[nodiscard]] int genus() const noexcept { return static_cast<int>(deltas.size()); }
};

using IntMatrix = std::vector<std::vector<long long>>;

/// Intersection form of c_1..c_{2g}: c_k . c_{k+1} = +1, c_{k+1} . c_k = -1, others 0.
IntMatrix elementary_intersection(int genus);
/// Intersection matrix of (deltas..., gammas...).
IntMatrix intersection_matrix(const HomologyBasis& basis);
/// Standard symplectic form J = [[0, I], [-I, 0]].
IntMatrix standard_symplectic(int genus);

/// delta_j = c_1 + c_3 + ... + c_{2j-1}, gamma_j = c_{2j}.
HomologyBasis paper_basis(const CurveSpec& spec);
/// Basis obtained by integer symplectic reduction of the elementary form.
HomologyBasis symplectic_basis(const CurveSpec& spec);
/// Reduction applied to an arbitrary unimodular skew form (exposed for testing).
HomologyBasis symplectic_reduce(const IntMatrix& form);
/// (delta, gamma) -> (gamma, -delta).
HomologyBasis swap_basis(const HomologyBasis& basis);

/// Smooth model of the normalization of the lambda -> 0 limit (genus g-1).
CurveSpec normalization_curve(const CurveSpec& spec);

/// One straight piece of the cycle chain with its square-root branch.
struct ChainSegment {
    Complex p;
    Complex q;
    std::vector<Complex> others;
    SegmentBranch branch;
};

/// Chain segments e_k -> e_{k+1} with a single continuous branch of y taken on
/// the left-hand side of the chain. Integrals of x^m dx / y over them give the
/// half-periods of the elementary cycles.
std::vector<ChainSegment> branch_chain(const CurveSpec& spec);

}  // namespace degen
