#include "degen/kernel.hpp"

#include <cmath>

namespace degen {

namespace {

void check_inputs(const CurveSpec& spec, const PeriodData& pd, Complex z)
{
    if (!pd.validated)
        throw std::invalid_argument("kernel: period data has not been validated");
    if (pd.genus() != spec.genus)
        throw std::invalid_argument("kernel: period data genus does not match the curve");
    require_finite(z, "kernel point z");
    if (z == Complex{0.0, 0.0})
        throw std::invalid_argument("kernel: z must be nonzero");
}

double denominator(const CurveSpec& spec, Complex z)
{
    const Complex x = z * z;
    const double den = std::norm(z) * std::abs(spec.f(x));
    if (!(den > kDenominatorFloor))
        throw NumericalError("kernel: z^2 is at or too close to a branch point");
    return den;
}

}  // namespace

double kernel_at(const CurveSpec& spec, const PeriodData& pd, Complex z)
{
    check_inputs(spec, pd, z);
    const double den = denominator(spec, z);
    const RMatrix Yi = inverse_im_Z(pd);
    const int g = pd.genus();
    const Complex x = z * z;
    std::vector<Complex> xp(g);
    Complex acc{1.0, 0.0};
    for (int i = 0; i < g; ++i) {
        acc *= x;
        xp[i] = acc;  // z^{2(i+1)}
    }
    double sum = 0.0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            sum += Yi(i, j) * std::real(xp[i] * std::conj(xp[j]));
    const double k = 4.0 * sum / den;
    if (!(k > 0.0))
        throw NumericalError("kernel_at: density is not positive");
    return k;
}

double kernel_generic(const CurveSpec& spec, const PeriodData& pd, Complex z)
{
    check_inputs(spec, pd, z);
    denominator(spec, z);
    const RMatrix Yi = inverse_im_Z(pd);
    const int g = pd.genus();
    const Complex x = z * z;
    const Complex y = std::sqrt(spec.f(x));
    Eigen::VectorXcd w(g);
    for (int i = 0; i < g; ++i)
        w(i) = 2.0 * std::pow(z, 2 * i + 1) / y;
    const double k = (w.transpose() * Yi.cast<Complex>() * w.conjugate())(0, 0).real();
    if (!(k > 0.0))
        throw NumericalError("kernel_generic: density is not positive");
    return k;
}

double normalization_kernel(const CurveSpec& spec, const PeriodData& pd0, Complex z)
{
    if (pd0.genus() != spec.genus - 1)
        throw std::invalid_argument("normalization_kernel: pd0 must have genus g - 1");
    return kernel_at(normalization_curve(spec), pd0, z);
}

double normalized_kernel(const CurveSpec& spec, const PeriodData& pd, Complex z)
{
    check_inputs(spec, pd, z);
    denominator(spec, z);
    const int g = pd.genus();
    const Complex y = std::sqrt(spec.f(z * z));
    Eigen::VectorXcd w(g);
    for (int i = 0; i < g; ++i)
        w(i) = 2.0 * std::pow(z, 2 * i + 1) / y;
    const Eigen::VectorXcd phi = pd.A.partialPivLu().solve(w);
    const RMatrix Yi = inverse_im_Z(pd);
    const double k = (phi.transpose() * Yi.cast<Complex>() * phi.conjugate())(0, 0).real();
    if (!(k > 0.0))
        throw NumericalError("normalized_kernel: density is not positive");
    return k;
}

double jacobian_density(const PeriodData& pd)
{
    if (!pd.validated)
        throw std::invalid_argument("jacobian_density: period data has not been validated");
    return 1.0 / det_im_Z(pd);
}

KernelSample sample_kernel(const CurveSpec& spec, const PeriodData& pd, const PeriodData& pd0, Complex z)
{
    KernelSample s;
    s.lambda = spec.lambda;
    s.z = z;
    s.k_lambda = kernel_at(spec, pd, z);
    s.k0 = normalization_kernel(spec, pd0, z);
    s.psi = std::log(s.k_lambda);
    s.mu_lambda = jacobian_density(pd);
    return s;
}

}  // namespace degen
