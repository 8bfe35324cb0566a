#include <doctest.h>

#include <cmath>

#include "degen/kernel.hpp"

using namespace degen;

namespace {

struct Member {
    CurveSpec spec;
    PeriodData pd;
};

Member member(FamilyKind k, int g, Complex lam)
{
    const RootPoly P = g == 2 ? poly_from_roots({2.0, 3.0}) : poly_from_roots({2.0, 3.0, 4.0, 5.0});
    Member m{make_family(k, g, P, lam), {}};
    m.pd = compute_periods(m.spec, paper_basis(m.spec));
    return m;
}

Member normalization(const CurveSpec& s)
{
    Member m{normalization_curve(s), {}};
    m.pd = compute_periods(m.spec, paper_basis(m.spec));
    return m;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("kernel_at agrees with kernel_generic")
{
    for (FamilyKind k : {FamilyKind::Node, FamilyKind::CuspI, FamilyKind::CuspII})
        for (int g : {2, 3}) {
            const auto m = member(k, g, 1e-4);
            for (Complex z : {Complex{0.3, 0.0}, Complex{0.2, 0.25}, Complex{-0.4, 0.1}})
                CHECK(rel(kernel_at(m.spec, m.pd, z), kernel_generic(m.spec, m.pd, z)) < 1e-10);
        }
}

TEST_CASE("kernel is positive and even in z")
{
    const auto m = member(FamilyKind::Node, 2, 1e-3);
    for (Complex z : {Complex{0.3, 0.0}, Complex{0.1, 0.5}}) {
        const double k = kernel_at(m.spec, m.pd, z);
        CHECK(k > 0.0);
        CHECK(rel(kernel_at(m.spec, m.pd, -z), k) < 1e-14);
    }
}

TEST_CASE("normalization kernel reduces to the elliptic closed forms")
{
    const Complex z{0.3, 0.0};
    const double x = 0.09;

    const auto node = member(FamilyKind::Node, 2, 1e-4);
    const auto n0 = normalization(node.spec);
    const double imc = n0.pd.Z(0, 0).imag();
    const double expect_node = 4.0 * 0.09 / (imc * std::abs((x - 1.0) * (x - 2.0) * (x - 3.0)));
    CHECK(rel(normalization_kernel(node.spec, n0.pd, z), expect_node) < 1e-12);

    const auto cusp = member(FamilyKind::CuspI, 2, 1e-4);
    const auto c0 = normalization(cusp.spec);
    const double imtau = c0.pd.Z(0, 0).imag();
    const double expect_cusp = 4.0 / (imtau * std::abs((x - 2.0) * (x - 3.0)));
    CHECK(rel(normalization_kernel(cusp.spec, c0.pd, z), expect_cusp) < 1e-12);
}

TEST_CASE("genus 3 normalization kernel matches the generic rendering")
{
    const auto m = member(FamilyKind::Node, 3, 1e-4);
    const auto n0 = normalization(m.spec);
    const Complex z{0.3, 0.1};
    const double gen = kernel_generic(n0.spec, n0.pd, z);
    CHECK(rel(normalization_kernel(m.spec, n0.pd, z), gen) < 1e-10);
    CHECK_THROWS_AS(normalization_kernel(m.spec, m.pd, z), std::invalid_argument);
}

TEST_CASE("node genus 2: k_lambda tends to k0")
{
    const auto n0 = normalization(member(FamilyKind::Node, 2, 1e-4).spec);
    const Complex z{0.3, 0.0};
    double prev = 1e300;
    for (double lam : {1e-4, 1e-8, 1e-12}) {
        const auto m = member(FamilyKind::Node, 2, lam);
        const double d = std::abs(kernel_at(m.spec, m.pd, z) / normalization_kernel(m.spec, n0.pd, z) - 1.0);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("cusp I genus 2: k_lambda tends to k0 (Im tau / |z|^4 + 1)")
{
    const auto m = member(FamilyKind::CuspI, 2, 1e-12);
    const auto c0 = normalization(m.spec);
    const Complex z{0.3, 0.0};
    const double k0 = normalization_kernel(m.spec, c0.pd, z);
    const double lim = k0 * (c0.pd.Z(0, 0).imag() / std::pow(0.3, 4) + 1.0);
    CHECK(rel(kernel_at(m.spec, m.pd, z), lim) < 0.01);
}

TEST_CASE("normalized kernel is basis independent, display kernel is not")
{
    const auto m = member(FamilyKind::Node, 2, 1e-4);
    const auto sw = compute_periods(m.spec, swap_basis(paper_basis(m.spec)));
    const Complex z{0.3, 0.0};
    CHECK(rel(normalized_kernel(m.spec, sw, z), normalized_kernel(m.spec, m.pd, z)) < 1e-8);
    CHECK(rel(kernel_at(m.spec, sw, z), kernel_at(m.spec, m.pd, z)) > 1e-3);
}

TEST_CASE("jacobian density")
{
    CMatrix A = CMatrix::Identity(2, 2), B = CMatrix::Identity(2, 2) * Complex{0.0, 1.0};
    CHECK(jacobian_density(periods_from_matrices(A, B)) == doctest::Approx(1.0));
    B(0, 0) = Complex{0.0, 2.0};
    B(1, 1) = Complex{0.0, 3.0};
    CHECK(jacobian_density(periods_from_matrices(A, B)) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("node genus 2: mu_lambda (-log|lambda|) tends to pi / det Im Z0")
{
    const auto n0 = normalization(member(FamilyKind::Node, 2, 1e-4).spec);
    const double limit = kPi / det_im_Z(n0.pd);
    double prev = 1e300;
    for (double lam : {1e-4, 1e-8, 1e-12}) {
        const auto m = member(FamilyKind::Node, 2, lam);
        const double d = std::abs(jacobian_density(m.pd) * -std::log(lam) / limit - 1.0);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 0.15);
}

TEST_CASE("sample_kernel and guards")
{
    const auto m = member(FamilyKind::Node, 2, 1e-4);
    const auto n0 = normalization(m.spec);
    const auto s = sample_kernel(m.spec, m.pd, n0.pd, {0.3, 0.0});
    CHECK(s.psi == std::log(s.k_lambda));
    CHECK(s.k0 > 0.0);
    CHECK(s.mu_lambda == doctest::Approx(1.0 / det_im_Z(m.pd)));

    CHECK_THROWS_AS(kernel_at(m.spec, m.pd, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS(kernel_at(m.spec, m.pd, {1.0, 0.0}));  // z^2 = 1 is a branch point
    PeriodData raw = m.pd;
    raw.validated = false;
    CHECK_THROWS(kernel_at(m.spec, raw, {0.3, 0.0}));
}
