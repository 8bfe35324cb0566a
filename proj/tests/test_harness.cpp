#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "degen/harness.hpp"

using namespace degen;

namespace {

SweepConfig node_sweep()
{
    SweepConfig cfg;
    cfg.kind = FamilyKind::Node;
    cfg.genus = 2;
    cfg.P = poly_from_roots({2.0, 3.0});
    cfg.lambdas = geometric_lambdas(1e-3, 1e-6, 1);
    cfg.zs = {{0.3, 0.0}, {0.25, 0.1}};
    cfg.threads = 2;
    return cfg;
}

}  // namespace

TEST_CASE("fit_loglog")
{
    std::vector<double> xs{1e-2, 1e-3, 1e-4, 1e-5}, ys;
    for (double x : xs)
        ys.push_back(3.0 * std::sqrt(x));
    auto f = fit_loglog(xs, ys);
    CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));

    f = fit_loglog(xs, xs);
    CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(f.intercept) < 1e-12);

    std::mt19937_64 rng(42);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<double> nx, ny;
    for (int k = 0; k < 20; ++k) {
        const double x = std::pow(10.0, -1.0 - 0.5 * k);
        nx.push_back(x);
        ny.push_back(std::pow(x, 0.25) * (1.0 + noise(rng)));
    }
    CHECK(std::abs(fit_loglog(nx, ny).slope - 0.25) <= 0.02);

    CHECK_THROWS_AS(fit_loglog({1.0, 2.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog({1.0, 2.0, 3.0}, {1.0, -2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog({1.0, 3.0, 2.0}, {1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("fit_log_inverse")
{
    std::vector<double> lams, exact, shifted;
    for (int e = 6; e <= 12; ++e) {
        const double lam = std::pow(10.0, -e), L = -std::log(lam);
        lams.push_back(lam);
        exact.push_back(2.0 / L);
        shifted.push_back(2.0 / L + 5.0 / (L * L));
    }
    const auto f = fit_log_inverse(lams, exact);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    for (double r : f.residuals)
        CHECK(std::abs(r) < 1e-14);

    // Through-origin least squares: C = 2 + 5 sum x^3 / sum x^2 with x = 1/L.
    double s2 = 0.0, s3 = 0.0;
    for (double lam : lams) {
        const double x = -1.0 / std::log(lam);
        s2 += x * x;
        s3 += x * x * x;
    }
    const double c = fit_log_inverse(lams, shifted).slope;
    CHECK(c == doctest::Approx(2.0 + 5.0 * s3 / s2).epsilon(1e-12));
    CHECK(c > 2.0);
    const std::vector<double> deep(lams.end() - 3, lams.end()), deepE(shifted.end() - 3, shifted.end());
    CHECK(std::abs(fit_log_inverse(deep, deepE).slope - 2.0) < std::abs(c - 2.0));

    CHECK_THROWS_AS(fit_log_inverse({1e-3, 1e-3, 1e-3}, {1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("geometric lambdas and sweep validation")
{
    const auto l = geometric_lambdas(1e-2, 1e-12, 2);
    REQUIRE(l.size() == 21);
    CHECK(std::abs(l.front()) == doctest::Approx(1e-2));
    CHECK(std::abs(l.back()) == doctest::Approx(1e-12));
    const auto ph = geometric_lambdas(1e-2, 1e-3, 1, 1.0);
    CHECK(std::arg(ph[0]) == doctest::Approx(1.0));
    CHECK_THROWS_AS(geometric_lambdas(1e-6, 1e-2, 1), std::invalid_argument);

    auto cfg = node_sweep();
    cfg.zs = {{1.0, 0.0}};  // z^2 = 1 is a branch point
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.zs = {{0.0, 0.0}};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = node_sweep();
    cfg.lambdas.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("sweep rows are ordered and deterministic")
{
    const auto a = run_sweep(node_sweep());
    REQUIRE(a.rows.size() == 8);
    for (std::size_t k = 1; k < a.rows.size(); ++k)
        CHECK(std::abs(a.rows[k - 1].sample.lambda) >= std::abs(a.rows[k].sample.lambda));
    for (const auto& r : a.rows) {
        CHECK(r.error.empty());
        CHECK(r.sym_defect <= 1e-8);
        CHECK(r.min_eig > 0.0);
        CHECK(r.sample.psi == std::log(r.sample.k_lambda));
    }
    CHECK(a.fits.count("log_inverse:z=0.3+0i") == 1);

    auto single = node_sweep();
    single.threads = 1;
    std::ostringstream x, y;
    write_csv(a, x);
    write_csv(run_sweep(single), y);
    CHECK(x.str() == y.str());

    std::string header = x.str().substr(0, x.str().find('\n'));
    std::string expect;
    for (const auto& c : csv_columns())
        expect += (expect.empty() ? "" : ",") + c;
    CHECK(header == expect);

    const auto js = report_to_json(a);
    for (const char* key : {"\"rows\"", "\"fits\"", "\"verdicts\""})
        CHECK(js.find(key) != std::string::npos);
}

TEST_CASE("phase average guards")
{
    const auto cusp = make_genus2_family(FamilyKind::CuspI, 2.0, 3.0, 1e-4);
    const auto node = make_genus2_family(FamilyKind::Node, 2.0, 3.0, 1e-4);
    CHECK_THROWS_AS(phase_average(cusp, 1e-6, 4, {0.3, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(phase_average(node, 1e-6, 8, {0.3, 0.0}), std::invalid_argument);
    CHECK(std::isfinite(phase_average(cusp, 1e-6, 8, {0.3, 0.0})));
}

TEST_CASE("worker count")
{
    CHECK(worker_count(3) == 3);
    setenv("DEGEN_BERGMAN_THREADS", "5", 1);
    CHECK(worker_count() == 5);
    setenv("DEGEN_BERGMAN_THREADS", "junk", 1);
    CHECK(worker_count() >= 1);
    unsetenv("DEGEN_BERGMAN_THREADS");
}

TEST_CASE("format_double round-trips (property)")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-300.0, 300.0);
    for (int k = 0; k < 200; ++k) {
        const double v = std::pow(10.0, u(rng)) * (k % 2 ? -1.0 : 1.0);
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("acceptance selectors filter criteria")
{
    const auto q = acceptance_run("quadrature", 2);
    REQUIRE(q.verdicts.size() == 1);
    CHECK(q.verdicts[0].id == "2");
    CHECK(q.all_pass());
    CHECK_THROWS_AS(acceptance_run("bogus"), std::invalid_argument);
}
