#pragma once

#include "degen/periods.hpp"
#include "degen/surface.hpp"

namespace degen {

/// Kernel densities at one (lambda, z), z = sqrt(x) near the singular point.
struct KernelSample {
    Complex lambda{0.0, 0.0};
    Complex z{0.0, 0.0};
    double k_lambda = 0.0;
    double k0 = 0.0;
    double psi = 0.0;  // log k_lambda
    double mu_lambda = 0.0;
};

inline constexpr double kDenominatorFloor = 1e-300;

/// k(z) = 4 sum_ij ((Im Z)^{-1})_ij (z^i conj(z)^j)^2 / |z^2 f(z^2)|, the
/// family display in the z = sqrt(x) chart. Uses the raw differentials
/// x^{i-1} dx / y, so the value depends on the homology basis through Im Z.
double kernel_at(const CurveSpec& spec, const PeriodData& pd, Complex z);

/// Same density assembled from w_i = 2 z^{2i-1} / sqrt(f(z^2)) and the
/// Hermitian form sum ((Im Z)^{-1})_ij w_i conj(w_j).
double kernel_generic(const CurveSpec& spec, const PeriodData& pd, Complex z);

/// Kernel of the normalization curve in the same z chart; pd0 must come
/// from normalization_curve(spec).
double normalization_kernel(const CurveSpec& spec, const PeriodData& pd0, Complex z);

/// Basis-independent Bergman density: the raw differentials are first
/// normalized by A^{-1} so that their delta-periods form the identity.
double normalized_kernel(const CurveSpec& spec, const PeriodData& pd, Complex z);

/// 1 / det(Im Z).
double jacobian_density(const PeriodData& pd);

KernelSample sample_kernel(const CurveSpec& spec, const PeriodData& pd, const PeriodData& pd0, Complex z);

}  // namespace degen
