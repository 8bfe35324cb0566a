#pragma once

#include <string>
#include <utility>
#include <vector>

#include "degen/periods.hpp"
#include "degen/surface.hpp"

namespace degen {

/// g-1 copies of -2i / sqrt(P(0)) (principal root).
std::vector<Complex> star_vector(int genus, const RootPoly& P);

struct CuspIVectors {
    std::vector<Complex> star;     // i = 2..g
    std::vector<Complex> diamond;  // diamond_i = (-1)^{i-1} sqrt(-1) star_i
};

/// star_i = -2 lambda^{(2i-3)/4} / sqrt(P(0)) * int_0^1 (u-1)^{i-1} du / sqrt(u(u-1)(u-2)).
CuspIVectors cuspI_vectors(int genus, const RootPoly& P, Complex lambda);

/// heart_i = -2 lambda^{i-2} sqrt(-lambda) / sqrt(P(0)), i = 2..g.
std::vector<Complex> heart_vector(int genus, const RootPoly& P, Complex lambda);

/// int_0^1 (u-1)^{k} du / sqrt(u(u-1)(u-2)) on the chain branch of {0, 1, 2}.
Complex cusp_u_integral(int k, const QuadratureConfig& cfg = {});

struct Genus2Constants {
    Complex c, tau;
    Complex c1, c2, c3, c4, c5, c6, c7;
    Complex d1, d2, d3, d4;
};

/// Genus-2 constants for P = (x - a)(x - b). `kind` only selects which
/// constants are needed by the caller; all of them are computed.
///
/// Branches: every integral over a real-line-like segment uses the chain
/// branch of the relevant elliptic curve, and c1, c3 carry the sign that makes
/// A0 = -2 c1 / sqrt(ab) (resp. -2 c3 / sqrt(ab)) hold for the computed A0.
/// c2 and c6 are contour integrals around the pole at 0 and are read off as
/// A_12 of the family at a very small lambda. c and tau are oriented so that
/// their imaginary parts are positive. The ratio integrals for c and tau use
/// the adaptive oracle, independent of the period pipeline.
Genus2Constants genus2_constants(Complex a, Complex b, const QuadratureConfig& cfg = {});

std::string constants_to_json(const Genus2Constants& k, int indent = 2);

/// Predicted limit of (psi - log k0) (-log|lambda|) / pi for the node family:
/// (1 - 2 Re sum_i ((Im Z0)^{-1} Im(A0^{-1} star))_i z^{2i}) / sum_ij ((Im Z0)^{-1})_ij (z^i conj(z)^j)^2.
double node_prediction(Complex z, const CMatrix& Z0, const CMatrix& A0, const std::vector<Complex>& star);

/// Genus-2 display: (Im c + (z^2 + conj(z)^2) Re(1/c1)) / |z|^4.
double node_prediction_genus2(Complex z, Complex c, Complex c1);

/// k0(z) + 4 / |z^4 P(z^2)|.
double cuspI_limit(Complex z, const CurveSpec& spec, const PeriodData& pd0);

/// 4 pi / (k0(z) |z^4 P(z^2)|).
double cuspII_prediction(Complex z, const CurveSpec& spec, const PeriodData& pd0);

/// Predicted log mu_lambda: Node / CuspII -log(-log|lambda|) + log(pi / det Im Z0);
/// CuspI -log det Im Z0.
double jacobian_prediction(FamilyKind kind, const PeriodData& pd0, Complex lambda);

enum class RefAsymptote { I, II, Alpha };

struct RefPair {
    Complex lhs;
    Complex rhs;
};

/// lhs = int_1^t ds / (s^{alpha+1} sqrt(s - t)) with the principal root
/// (alpha = 0 for I, 1 for II). rhs = i log(t) / sqrt(t) for I,
/// -i / sqrt(t) for II and -i / (alpha sqrt(t)) for Alpha.
RefPair reference_asymptote(double t, RefAsymptote which, double alpha = 2.0);

/// Closed form of the lhs of I: (2 / sqrt t) (-i) log(sqrt t + sqrt(t - 1)).
Complex reference_I_exact(double t);

}  // namespace degen
