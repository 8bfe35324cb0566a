#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "degen/algebra.hpp"

namespace degen {

struct QuadratureConfig {
    int order = 256;       // Chebyshev nodes on the first pass
    int max_order = 8192;  // hard cap reached by doubling
    double rel_tol = 1e-12;

    void validate() const;
};

/// Branch data for the radicand of a segment integral. All angles are
/// continuous arguments (not reduced mod 2pi):
///   arg_p       arg(x - p) on the open segment
///   arg_q       arg(x - q) on the open segment
///   other_args  arg(p - r_j) for each remaining root
struct SegmentBranch {
    double arg_p = 0.0;
    double arg_q = 0.0;
    std::vector<double> other_args;
};

/// Integral of x^power dx / sqrt((x-p)(x-q) prod_j (x-r_j)) over the straight
/// segment from p to q.
///
/// The square-root branch is taken from `branch` when present. Otherwise the
/// factors (x-p) and (x-q) take their principal arguments on the segment, and
/// each (x-r_j) is continued along `branch_path` (a polyline ending at p;
/// empty means "principal at p").
struct SegmentIntegral {
    int power = 0;  // >= -1; power -1 requires 0 away from the segment
    Complex p;
    Complex q;
    std::vector<Complex> other_roots;
    std::vector<Complex> branch_path;
    std::optional<SegmentBranch> branch;

    void validate() const;
};

/// Branch actually used for `si` (explicit or derived from branch_path).
SegmentBranch resolve_branch(const SegmentIntegral& si);

struct QuadratureResult {
    Complex value;
    int order = 0;        // total number of integrand evaluations in the accepted pass
    double rel_change = 0.0;  // |I(2N) - I(N)| / |I(2N)| at acceptance
    bool graded = false;  // true when graded panels were needed
};

/// Gauss-Chebyshev evaluation: x = mid + half * cos(theta) absorbs the two
/// endpoint square roots; the remaining factor is smooth in theta. Nodes are
/// doubled until successive passes agree to rel_tol. When another root sits
/// close to the segment, theta is split into panels graded towards that
/// root's preimage and each panel uses Gauss-Legendre nodes.
QuadratureResult segment_period_detailed(const SegmentIntegral& si, const QuadratureConfig& cfg = {});
Complex segment_period(const SegmentIntegral& si, const QuadratureConfig& cfg = {});

/// Independent evaluation: midpoint split, u^2 substitution towards each
/// singular endpoint, nested adaptive Gauss-Legendre to relative tolerance 1e-11.
Complex adaptive_oracle(const SegmentIntegral& si);

/// Adaptive Gauss-Legendre for a smooth complex integrand on [a, b].
Complex adaptive_integrate(const std::function<Complex(double)>& f, double a, double b,
                           double rel_tol = 1e-11);

/// Integral over [a, b] of f(s) / sqrt(b - s), with f smooth on [a, b].
/// Uses the substitution s = b - u^2 on the upper half of the interval.
Complex adaptive_integrate_sqrt_end(const std::function<Complex(double)>& f, double a, double b,
                                    double rel_tol = 1e-11);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

}  // namespace degen
