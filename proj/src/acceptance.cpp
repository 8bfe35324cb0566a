#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <thread>
#include <atomic>
#include <sstream>

#include "degen/harness.hpp"

namespace degen {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4)
{
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

std::vector<double> decades(int from_exp, int to_exp)
{
    std::vector<double> out;
    for (int e = from_exp; e >= to_exp; --e)
        out.push_back(std::pow(10.0, e));
    return out;
}

RootPoly P2() { return poly_from_roots({2.0, 3.0}, {1.0, 0.0}); }
RootPoly P3() { return poly_from_roots({2.0, 3.0, 4.0, 5.0}, {1.0, 0.0}); }

struct Member {
    CurveSpec spec;
    PeriodData pd;
};

Member member(FamilyKind kind, int genus, const RootPoly& P, Complex lambda)
{
    Member m{make_family(kind, genus, P, lambda), {}};
    m.pd = compute_periods(m.spec, paper_basis(m.spec));
    return m;
}

PeriodData normalization_periods(const CurveSpec& spec)
{
    const CurveSpec n = normalization_curve(spec);
    return compute_periods(n, paper_basis(n));
}

// Members for a list of lambdas, computed on the worker pool.
std::vector<Member> members(FamilyKind kind, int genus, const RootPoly& P, const std::vector<double>& lams,
                            int threads)
{
    std::vector<Member> out(lams.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors(lams.size());
    auto work = [&] {
        for (std::size_t i = next++; i < lams.size(); i = next++) {
            try {
                out[i] = member(kind, genus, P, lams[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int n = std::min<int>(worker_count(threads), static_cast<int>(lams.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t)
        pool.emplace_back(work);
    work();
    for (auto& th : pool)
        th.join();
    for (const auto& e : errors)
        if (!e.empty())
            throw NumericalError(e);
    return out;
}

// Number of steps where the sequence increases.
int increases(const std::vector<double>& v)
{
    int n = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1])
            ++n;
    return n;
}

Verdict make(const std::string& id, const std::string& title)
{
    Verdict v;
    v.id = id;
    v.title = title;
    return v;
}

const Complex kZ{0.3, 0.0};

Verdict criterion_period_validity()
{
    Verdict v = make("1", "period validity (node g=2, g=3 at lambda=1e-3)");
    std::ostringstream m;
    bool pass = true;
    const std::pair<int, RootPoly> cases[] = {{2, P2()}, {3, P3()}};
    for (const auto& [g, P] : cases) {
        const auto t0 = Clock::now();
        const Member mb = member(FamilyKind::Node, g, P, 1e-3);
        const double t = seconds_since(t0);
        const bool ok = mb.pd.sym_defect <= 1e-8 && mb.pd.min_eig > 0.0 && t <= 5.0;
        pass = pass && ok;
        m << "g=" << g << ": sym_defect " << fmt(mb.pd.sym_defect, 3) << ", min_eig " << fmt(mb.pd.min_eig)
          << ", " << fmt(t, 3) << " s; ";
    }
    v.pass = pass;
    v.measured = m.str();
    v.expected = "sym_defect <= 1e-8, min_eig > 0, <= 5 s per curve";
    return v;
}

Verdict criterion_quadrature_oracle()
{
    Verdict v = make("2", "quadrature oracle equivalence (100 random segments)");
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> box(-3.0, 3.0);
    std::uniform_int_distribution<int> nroots(1, 4), power(0, 4);
    double worst = 0.0;
    int done = 0;
    while (done < 100) {
        SegmentIntegral si;
        si.p = {box(rng), box(rng)};
        si.q = {box(rng), box(rng)};
        if (std::abs(si.q - si.p) < 0.1)
            continue;
        const int nr = nroots(rng);
        bool ok = true;
        for (int k = 0; k < nr && ok; ++k) {
            const Complex r{box(rng), box(rng)};
            if (distance_to_segment(r, si.p, si.q) < 0.02 * std::abs(si.q - si.p) || std::abs(r - si.p) < 0.05 ||
                std::abs(r - si.q) < 0.05)
                ok = false;
            si.other_roots.push_back(r);
        }
        if (!ok)
            continue;
        si.power = power(rng);
        const Complex a = segment_period(si);
        const Complex b = adaptive_oracle(si);
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
        ++done;
    }
    const double t = seconds_since(t0);
    v.pass = worst <= 1e-9 && t <= 30.0;
    v.measured = "max relative error " + fmt(worst, 3) + ", " + fmt(t, 3) + " s";
    v.expected = "<= 1e-9, <= 30 s";
    return v;
}

struct LogLawSeries {
    std::vector<double> lams, E, linear, dev;
    FitResult fit;
};

// E = psi - log k0 for a node or cusp II sweep at kZ, deviation of E (-log|lambda|)
// from `pred`, and the linearized k/k0 - 1 used for the diagnostic.
LogLawSeries log_law(const std::vector<Member>& ms, const PeriodData& pd0, double pred)
{
    LogLawSeries s;
    for (const auto& m : ms) {
        const double lam = std::abs(m.spec.lambda);
        const double k = kernel_at(m.spec, m.pd, kZ);
        const double k0 = normalization_kernel(m.spec, pd0, kZ);
        const double L = -std::log(lam);
        s.lams.push_back(lam);
        s.E.push_back(std::log(k) - std::log(k0));
        s.linear.push_back((k / k0 - 1.0) * L);
        s.dev.push_back(std::abs(s.E.back() * L / pred - 1.0));
    }
    if (s.lams.size() >= 3)
        s.fit = fit_log_inverse(s.lams, s.E);
    return s;
}

Verdict criterion_node_genus2(int threads)
{
    Verdict v = make("3", "node theorem, genus 2 (log-law coefficient)");
    const auto lams = decades(-6, -12);
    const auto ms = members(FamilyKind::Node, 2, P2(), lams, threads);
    const PeriodData pd0 = normalization_periods(ms.front().spec);
    const Genus2Constants k = genus2_constants(2.0, 3.0);
    const double pred = kPi * node_prediction_genus2(kZ, k.c, k.c1);
    const auto s = log_law(ms, pd0, pred);
    const double rel = std::abs(s.fit.slope / pred - 1.0);
    v.pass = rel <= 0.10 && s.dev.back() < s.dev.front();
    v.measured = "C = " + fmt(s.fit.slope) + " (rel. deviation " + fmt(rel, 3) + "); deviation at 1e-6 " +
                 fmt(s.dev.front(), 3) + ", at 1e-12 " + fmt(s.dev.back(), 3) + "; linearized (k/k0-1)(-log|lambda|) at 1e-12 = " +
                 fmt(s.linear.back());
    v.expected = "C within 10% of " + fmt(pred) + ", deviation shrinking";
    return v;
}

Verdict criterion_node_genus3(int threads)
{
    Verdict v = make("4", "node theorem, genus 3 (star-vector prediction)");
    const auto lams = decades(-6, -12);
    const auto ms = members(FamilyKind::Node, 3, P3(), lams, threads);
    const PeriodData pd0 = normalization_periods(ms.front().spec);
    const double pred = kPi * node_prediction(kZ, pd0.Z, pd0.A, star_vector(3, P3()));
    const auto s = log_law(ms, pd0, pred);
    const double rel = std::abs(s.fit.slope / pred - 1.0);
    v.pass = rel <= 0.15 && increases(s.dev) <= 1;
    v.measured = "C = " + fmt(s.fit.slope) + " (rel. deviation " + fmt(rel, 3) + "); deviation at 1e-6 " +
                 fmt(s.dev.front(), 3) + ", at 1e-12 " + fmt(s.dev.back(), 3) + "; linearized at 1e-12 = " +
                 fmt(s.linear.back());
    v.expected = "C within 15% of " + fmt(pred) + ", monotone trend";
    return v;
}

Verdict criterion_cuspI_limit(int threads)
{
    Verdict v = make("5", "cusp I limit (remainder rate)");
    const auto lams = decades(-4, -12);
    const auto ms = members(FamilyKind::CuspI, 2, P2(), lams, threads);
    const PeriodData pd0 = normalization_periods(ms.front().spec);
    std::vector<double> rem;
    double last_rel = 0.0;
    for (const auto& m : ms) {
        const double k = kernel_at(m.spec, m.pd, kZ);
        const double lim = cuspI_limit(kZ, m.spec, pd0);
        rem.push_back(std::abs(k - lim));
        last_rel = std::abs(k - lim) / k;
    }
    const FitResult f = fit_loglog(lams, rem);
    v.pass = std::abs(f.slope - 0.25) <= 0.05 && last_rel <= 1e-2;
    v.measured = "slope " + fmt(f.slope) + ", relative remainder at 1e-12 " + fmt(last_rel, 3);
    v.expected = "slope 0.25 +- 0.05, relative remainder <= 1e-2";
    return v;
}

Verdict criterion_cuspI_harmonic()
{
    Verdict v = make("6", "cusp I harmonicity (8-phase average)");
    const CurveSpec tmpl = make_family(FamilyKind::CuspI, 2, P2(), 1e-6);
    const std::vector<double> mods{1e-6, 1e-8, 1e-10};
    std::vector<double> avg, plain;
    const PeriodData pd0 = normalization_periods(tmpl);
    for (double m : mods) {
        avg.push_back(std::abs(phase_average(tmpl, m, 8, kZ)));
        const CurveSpec s = with_lambda(tmpl, m);
        const PeriodData pd = compute_periods(s, paper_basis(s));
        plain.push_back(std::abs(kernel_at(s, pd, kZ) - cuspI_limit(kZ, s, pd0)));
    }
    const FitResult fa = fit_loglog(mods, avg);
    const FitResult fp = fit_loglog(mods, plain);
    v.pass = fa.slope >= 0.3;
    v.measured = "averaged slope " + fmt(fa.slope) + " (un-averaged " + fmt(fp.slope) + "); |mean| at 1e-10 " +
                 fmt(avg.back(), 3) + " vs single phase " + fmt(plain.back(), 3);
    v.expected = "averaged slope >= 0.3";
    return v;
}

Verdict criterion_cuspII(int threads)
{
    Verdict v = make("7", "cusp II theorem (log-law coefficient)");
    const auto lams = decades(-4, -10);
    const auto ms2 = members(FamilyKind::CuspII, 2, P2(), lams, threads);
    const PeriodData pd0 = normalization_periods(ms2.front().spec);
    const Genus2Constants k = genus2_constants(2.0, 3.0);
    const double pred2 = kPi * k.tau.imag() / std::norm(kZ * kZ);
    const auto s2 = log_law(ms2, pd0, pred2);

    const auto ms3 = members(FamilyKind::CuspII, 3, P3(), {1e-10}, threads);
    const PeriodData pd03 = normalization_periods(ms3.front().spec);
    const double pred3 = cuspII_prediction(kZ, ms3.front().spec, pd03);
    const auto s3 = log_law(ms3, pd03, pred3);

    const double r2 = s2.dev.back();
    const double r3 = s3.dev.back();
    v.pass = r2 <= 0.10 && increases(s2.dev) <= 1 && r3 <= 0.15;
    v.measured = "g=2: E(-log|lambda|)/prediction - 1 = " + fmt(r2, 3) + " at 1e-10 (linearized " +
                 fmt(s2.linear.back() / pred2 - 1.0, 3) + "); g=3: " + fmt(r3, 3) + " (linearized " +
                 fmt(s3.linear.back() / pred3 - 1.0, 3) + ")";
    v.expected = "g=2 within 10% of " + fmt(pred2) + " and improving; g=3 within 15% of " + fmt(pred3);
    return v;
}

Verdict criterion_jacobian(int threads)
{
    Verdict v = make("8", "Jacobian theorem");
    const auto lams = decades(-4, -10);
    const auto mn = members(FamilyKind::Node, 2, P2(), lams, threads);
    const PeriodData pd0n = normalization_periods(mn.front().spec);
    std::vector<double> dn;
    for (const auto& m : mn)
        dn.push_back(std::abs(std::log(jacobian_density(m.pd)) - jacobian_prediction(FamilyKind::Node, pd0n, m.spec.lambda)));

    const auto mc = members(FamilyKind::CuspI, 2, P2(), lams, threads);
    const PeriodData pd0c = normalization_periods(mc.front().spec);
    std::vector<double> dc;
    for (const auto& m : mc)
        dc.push_back(std::abs(std::log(jacobian_density(m.pd)) - jacobian_prediction(FamilyKind::CuspI, pd0c, m.spec.lambda)));
    const FitResult fc = fit_loglog(lams, dc);

    v.pass = dn.back() <= 0.1 && dn.back() < dn.front() && increases(dn) == 0 && std::abs(fc.slope - 0.5) <= 0.1;
    v.measured = "node deviation " + fmt(dn.front(), 3) + " at 1e-4 -> " + fmt(dn.back(), 3) +
                 " at 1e-10; cusp I slope " + fmt(fc.slope);
    v.expected = "node <= 0.1 at 1e-10 and decreasing; cusp I slope 0.5 +- 0.1";
    return v;
}

Verdict criterion_lemmas(int threads)
{
    Verdict v = make("9", "lemma growth rates (A/B moduli)");
    const auto t0 = Clock::now();
    const auto lams = decades(-4, -10);
    struct Check {
        const char* name;
        FamilyKind kind;
        int genus;
        bool useB;
        int i, j;
        double slope, tol;
    };
    const Check checks[] = {
        {"node g2 |A21|", FamilyKind::Node, 2, false, 1, 0, 1.0, 0.1},
        {"cuspI g2 |A11|", FamilyKind::CuspI, 2, false, 0, 0, -0.25, 0.03},
        {"cuspI g2 |A21|", FamilyKind::CuspI, 2, false, 1, 0, 0.25, 0.03},
        {"cuspII g2 |A11|", FamilyKind::CuspII, 2, false, 0, 0, -0.5, 0.05},
        {"cuspII g2 |A21|", FamilyKind::CuspII, 2, false, 1, 0, 1.5, 0.1},
        {"cuspII g2 |B21|", FamilyKind::CuspII, 2, true, 1, 0, 0.5, 0.05},
        {"cuspII g3 |A31|", FamilyKind::CuspII, 3, false, 2, 0, 3.5, 0.2},
    };
    std::map<std::pair<int, int>, std::vector<Member>> cache;
    bool pass = true;
    std::ostringstream m;
    for (const auto& c : checks) {
        auto key = std::make_pair(static_cast<int>(c.kind), c.genus);
        if (!cache.count(key))
            cache[key] = members(c.kind, c.genus, c.genus == 2 ? P2() : P3(), lams, threads);
        std::vector<double> ys;
        for (const auto& mb : cache[key])
            ys.push_back(std::abs(c.useB ? mb.pd.B(c.i, c.j) : mb.pd.A(c.i, c.j)));
        const double s = fit_loglog(lams, ys).slope;
        const bool ok = std::abs(s - c.slope) <= c.tol;
        pass = pass && ok;
        m << c.name << " " << fmt(s) << (ok ? "" : " (out)") << "; ";
    }
    const double t = seconds_since(t0);
    v.pass = pass && t <= 120.0;
    v.measured = m.str() + fmt(t, 3) + " s";
    v.expected = "all slopes in their windows, <= 120 s";
    return v;
}

Verdict criterion_reference()
{
    Verdict v = make("10", "reference asymptotes I, II, alpha");
    const double ts[] = {1e4, 1e6, 1e8};
    std::vector<double> dI, dII, dA;
    Complex signedI{};
    for (double t : ts) {
        const RefPair a = reference_asymptote(t, RefAsymptote::I);
        const RefPair b = reference_asymptote(t, RefAsymptote::II);
        const RefPair c = reference_asymptote(t, RefAsymptote::Alpha, 2.0);
        dI.push_back(std::abs(std::abs(a.lhs) / std::abs(a.rhs) - 1.0));
        dII.push_back(std::abs(b.lhs / b.rhs - 1.0));
        dA.push_back(std::abs(c.lhs / c.rhs - 1.0));
        if (t == 1e6)
            signedI = a.lhs / a.rhs;
    }
    const bool mono = increases(dI) == 0 && increases(dII) == 0 && increases(dA) == 0;
    v.pass = mono && dI[1] <= 0.15 && dII[2] <= 1e-3 && dA[2] <= 1e-3;
    v.measured = "I: |ratio|-1 = " + fmt(dI[1], 3) + " at 1e6 (signed ratio " + fmt(signedI.real(), 4) + "); II: " +
                 fmt(dII[2], 3) + ", alpha=2: " + fmt(dA[2], 3) + " at 1e8; monotone " + (mono ? "yes" : "no");
    v.expected = "I within 15% at 1e6 (moduli); II, alpha within 1e-3 at 1e8; monotone";
    return v;
}

Verdict criterion_boundedness()
{
    Verdict v = make("11", "corollary boundedness |psi / log|lambda||");
    bool pass = true;
    std::ostringstream m;
    for (FamilyKind kind : {FamilyKind::Node, FamilyKind::CuspI, FamilyKind::CuspII}) {
        const Member mb = member(kind, 2, P2(), 1e-10);
        const double r = std::abs(std::log(kernel_at(mb.spec, mb.pd, kZ)) / std::log(1e-10));
        pass = pass && r <= 0.01;
        m << to_string(kind) << " " << fmt(r, 3) << "; ";
    }
    v.pass = pass;
    v.measured = m.str();
    v.expected = "<= 0.01 at lambda = 1e-10 for each family";
    return v;
}

Verdict criterion_consistency()
{
    Verdict v = make("12", "internal consistency");
    double gen = 0.0;
    const Complex zs[] = {{0.3, 0.0}, {0.3, 0.2}, {-0.25, 0.4}};
    for (FamilyKind kind : {FamilyKind::Node, FamilyKind::CuspI, FamilyKind::CuspII})
        for (int g : {2, 3}) {
            const Member mb = member(kind, g, g == 2 ? P2() : P3(), 1e-6);
            for (const auto& z : zs) {
                const double a = kernel_at(mb.spec, mb.pd, z), b = kernel_generic(mb.spec, mb.pd, z);
                gen = std::max(gen, std::abs(a / b - 1.0));
            }
        }

    double basis = 0.0, basis_norm = 0.0;
    for (int g : {2, 3}) {
        const CurveSpec s = make_family(FamilyKind::Node, g, g == 2 ? P2() : P3(), 1e-4);
        const HomologyBasis bases[] = {paper_basis(s), swap_basis(paper_basis(s)), symplectic_basis(s)};
        const PeriodData ref = compute_periods(s, bases[0]);
        for (const auto& hb : bases) {
            const PeriodData pd = compute_periods(s, hb);
            basis = std::max(basis, std::abs(kernel_at(s, pd, kZ) / kernel_at(s, ref, kZ) - 1.0));
            basis_norm = std::max(basis_norm, std::abs(normalized_kernel(s, pd, kZ) / normalized_kernel(s, ref, kZ) - 1.0));
        }
    }

    const Genus2Constants k = genus2_constants(2.0, 3.0);
    const PeriodData zn = normalization_periods(make_family(FamilyKind::Node, 2, P2(), 1e-4));
    const PeriodData zc = normalization_periods(make_family(FamilyKind::CuspI, 2, P2(), 1e-4));
    const double cdiff = std::max(std::abs(k.c - zn.Z(0, 0)), std::abs(k.tau - zc.Z(0, 0)));

    v.pass = gen <= 1e-10 && basis <= 1e-8 && cdiff <= 1e-8;
    v.measured = "kernel_at vs kernel_generic " + fmt(gen, 3) + "; basis change " + fmt(basis, 3) +
                 " (A-normalized density " + fmt(basis_norm, 3) + "); c, tau vs Z0 " + fmt(cdiff, 3);
    v.expected = "<= 1e-10; <= 1e-8; <= 1e-8";
    return v;
}

Verdict guarded(const std::string& id, const std::function<Verdict()>& fn)
{
    try {
        return fn();
    } catch (const std::exception& e) {
        Verdict v = make(id, "criterion " + id);
        v.pass = false;
        v.measured = std::string("error: ") + e.what();
        return v;
    }
}

}  // namespace

SweepReport acceptance_run(const std::string& selector, int threads)
{
    if (selector != "full" && selector != "quadrature" && selector != "lemmas")
        throw std::invalid_argument("acceptance_run: unknown selector '" + selector + "'");
    SweepReport rep;
    const auto t0 = Clock::now();
    if (selector == "quadrature") {
        rep.verdicts.push_back(guarded("2", criterion_quadrature_oracle));
        return rep;
    }
    if (selector == "lemmas") {
        rep.verdicts.push_back(guarded("9", [&] { return criterion_lemmas(threads); }));
        return rep;
    }
    rep.verdicts.push_back(guarded("1", criterion_period_validity));
    rep.verdicts.push_back(guarded("2", criterion_quadrature_oracle));
    rep.verdicts.push_back(guarded("3", [&] { return criterion_node_genus2(threads); }));
    rep.verdicts.push_back(guarded("4", [&] { return criterion_node_genus3(threads); }));
    rep.verdicts.push_back(guarded("5", [&] { return criterion_cuspI_limit(threads); }));
    rep.verdicts.push_back(guarded("6", criterion_cuspI_harmonic));
    rep.verdicts.push_back(guarded("7", [&] { return criterion_cuspII(threads); }));
    rep.verdicts.push_back(guarded("8", [&] { return criterion_jacobian(threads); }));
    rep.verdicts.push_back(guarded("9", [&] { return criterion_lemmas(threads); }));
    rep.verdicts.push_back(guarded("10", criterion_reference));
    rep.verdicts.push_back(guarded("11", criterion_boundedness));
    rep.verdicts.push_back(guarded("12", criterion_consistency));
    const double t = seconds_since(t0);
    Verdict rt = make("runtime", "full suite runtime");
    rt.pass = t <= 600.0;
    rt.measured = fmt(t, 4) + " s with " + std::to_string(worker_count(threads)) + " worker(s)";
    rt.expected = "<= 600 s";
    rep.verdicts.push_back(rt);
    return rep;
}

}  // namespace degen
