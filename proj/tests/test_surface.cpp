#include <doctest.h>

#include <random>

#include "degen/surface.hpp"

using namespace degen;

namespace {

RootPoly P2() { return poly_from_roots({2.0, 3.0}); }
RootPoly P(int genus)
{
    std::vector<Complex> r;
    for (int k = 0; k < 2 * genus - 2; ++k)
        r.push_back(2.0 + k);
    return poly_from_roots(r);
}

long long pair_with(const IntMatrix& f, const Cycle& a, const Cycle& b)
{
    long long acc = 0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs.size(); ++j)
            acc += static_cast<long long>(a.coeffs[i]) * f[i][j] * b.coeffs[j];
    return acc;
}

}  // namespace

TEST_CASE("family roots and defining polynomial")
{
    const auto node = make_genus2_family(FamilyKind::Node, 2.0, 3.0, 1e-3);
    CHECK(node.roots().size() == 5);
    CHECK(std::abs(node.f(0.5) - 0.5 * (0.5 - 1e-3) * (0.5 - 1.0) * (0.5 - 2.0) * (0.5 - 3.0)) < 1e-14);

    const auto c1 = make_genus2_family(FamilyKind::CuspI, 2.0, 3.0, 1e-4);
    CHECK(std::abs(c1.f(0.5) - 0.5 * (0.25 - 1e-4) * (0.5 - 2.0) * (0.5 - 3.0)) < 1e-14);

    const auto c2 = make_genus2_family(FamilyKind::CuspII, 2.0, 3.0, 1e-2);
    CHECK(std::abs(c2.f(0.5) - 0.5 * (0.5 - 1e-2) * (0.5 - 1e-4) * (0.5 - 2.0) * (0.5 - 3.0)) < 1e-14);
}

TEST_CASE("family validation")
{
    CHECK_THROWS_AS(make_family(FamilyKind::Node, 1, poly_from_roots({}), 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_family(FamilyKind::Node, 7, P(7), 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_family(FamilyKind::Node, 3, P2(), 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_genus2_family(FamilyKind::Node, 2.0, 3.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_genus2_family(FamilyKind::Node, 0.5, 3.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(make_genus2_family(FamilyKind::Node, 3.0, 2.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(make_generic({0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_generic({0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(family_from_string("torus"), std::invalid_argument);
    CHECK(family_from_string("cusp2") == FamilyKind::CuspII);
    CHECK(to_string(FamilyKind::CuspI) == "cusp1");
}

TEST_CASE("branch points by modulus, chain order for cusp I")
{
    const auto node = make_genus2_family(FamilyKind::Node, 2.0, 3.0, 1e-3);
    const auto bp = branch_points(node);
    for (std::size_t k = 1; k < bp.size(); ++k)
        CHECK(std::abs(bp[k - 1]) <= std::abs(bp[k]));
    CHECK(chain_points(node) == bp);

    const auto cusp = make_genus2_family(FamilyKind::CuspI, 2.0, 3.0, 1e-4);
    const auto cp = chain_points(cusp);
    CHECK(std::abs(cp[0] + 1e-2) < 1e-15);
    CHECK(cp[1] == Complex{0.0, 0.0});
    CHECK(std::abs(cp[2] - 1e-2) < 1e-15);
    CHECK(std::abs(branch_points(cusp)[0]) == 0.0);
}

TEST_CASE("default basis is symplectic for every genus")
{
    for (int g = 2; g <= kMaxGenus; ++g)
        for (FamilyKind k : {FamilyKind::Node, FamilyKind::CuspI, FamilyKind::CuspII}) {
            const auto s = make_family(k, g, P(g), 1e-3);
            const auto b = paper_basis(s);
            CHECK(intersection_matrix(b) == standard_symplectic(g));
            CHECK(intersection_matrix(swap_basis(b)) == standard_symplectic(g));
            CHECK(intersection_matrix(symplectic_basis(s)) == standard_symplectic(g));
        }
}

TEST_CASE("elementary intersection form")
{
    const auto m = elementary_intersection(3);
    CHECK(m[0][1] == 1);
    CHECK(m[1][0] == -1);
    CHECK(m[0][2] == 0);
    CHECK(m[4][5] == 1);
}

TEST_CASE("symplectic reduction of random unimodular forms (property)")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const int g = 2 + trial % 3, n = 2 * g;
        // M = product of elementary row operations; form = M J M^T.
        IntMatrix M(n, std::vector<long long>(n, 0));
        for (int i = 0; i < n; ++i)
            M[i][i] = 1;
        std::uniform_int_distribution<int> idx(0, n - 1), coef(-2, 2);
        for (int step = 0; step < 8; ++step) {
            const int i = idx(rng), j = idx(rng), c = coef(rng);
            if (i == j)
                continue;
            for (int k = 0; k < n; ++k)
                M[i][k] += c * M[j][k];
        }
        const IntMatrix J = standard_symplectic(g);
        IntMatrix F(n, std::vector<long long>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        F[i][j] += M[i][a] * J[a][b] * M[j][b];
        const HomologyBasis hb = symplectic_reduce(F);
        std::vector<Cycle> all = hb.deltas;
        all.insert(all.end(), hb.gammas.begin(), hb.gammas.end());
        IntMatrix got(n, std::vector<long long>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                got[i][j] = pair_with(F, all[i], all[j]);
        CHECK(got == J);
    }
}

TEST_CASE("degenerate forms are rejected")
{
    IntMatrix zero(4, std::vector<long long>(4, 0));
    CHECK_THROWS_AS(symplectic_reduce(zero), NumericalError);
    IntMatrix twice = standard_symplectic(2);
    for (auto& row : twice)
        for (auto& x : row)
            x *= 2;
    CHECK_THROWS_AS(symplectic_reduce(twice), NumericalError);
}

TEST_CASE("normalization curves")
{
    const auto n = normalization_curve(make_family(FamilyKind::Node, 3, P(3), 1e-3));
    CHECK(n.genus == 2);
    CHECK(n.roots() == std::vector<Complex>{1.0, 2.0, 3.0, 4.0, 5.0});
    const auto c = normalization_curve(make_genus2_family(FamilyKind::CuspII, 2.0, 3.0, 1e-3));
    CHECK(c.roots() == std::vector<Complex>{0.0, 2.0, 3.0});
    CHECK_THROWS(normalization_curve(make_generic({0.0, 1.0, 2.0})));
}
