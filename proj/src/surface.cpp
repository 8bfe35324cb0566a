#include "degen/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace degen {

std::string to_string(FamilyKind kind)
{
    switch (kind) {
    case FamilyKind::Node: return "node";
    case FamilyKind::CuspI: return "cusp1";
    case FamilyKind::CuspII: return "cusp2";
    case FamilyKind::Generic: return "custom";
    }
    return "custom";
}

FamilyKind family_from_string(const std::string& name)
{
    if (name == "node") return FamilyKind::Node;
    if (name == "cusp1" || name == "cuspI") return FamilyKind::CuspI;
    if (name == "cusp2" || name == "cuspII") return FamilyKind::CuspII;
    if (name == "custom" || name == "generic") return FamilyKind::Generic;
    throw std::invalid_argument("unknown family '" + name + "'");
}

std::vector<Complex> CurveSpec::roots() const
{
    std::vector<Complex> out;
    switch (kind) {
    case FamilyKind::Node:
        out = {Complex{0.0, 0.0}, lambda, Complex{1.0, 0.0}};
        break;
    case FamilyKind::CuspI: {
        const Complex s = std::sqrt(lambda);
        out = {Complex{0.0, 0.0}, s, -s};
        break;
    }
    case FamilyKind::CuspII:
        out = {Complex{0.0, 0.0}, lambda, lambda * lambda};
        break;
    case FamilyKind::Generic:
        return explicit_roots;
    }
    out.insert(out.end(), P.roots().begin(), P.roots().end());
    return out;
}

Complex CurveSpec::f(Complex x) const
{
    Complex acc{1.0, 0.0};
    for (const auto& r : roots())
        acc *= (x - r);
    return acc;
}

namespace {

bool coincide(Complex a, Complex b)
{
    return std::abs(a - b) <= 1e-14 * std::max(std::abs(a), std::abs(b));
}

void require_distinct(const std::vector<Complex>& roots)
{
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (coincide(roots[i], roots[j])) {
                std::ostringstream os;
                os << "curve: coincident roots " << roots[i] << " and " << roots[j];
                throw std::invalid_argument(os.str());
            }
}

bool modulus_less(Complex a, Complex b)
{
    const double ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-14 * std::max(ma, mb))
        return ma < mb;
    return std::arg(a) < std::arg(b);
}

void validate_spec(const CurveSpec& s)
{
    if (s.kind == FamilyKind::Generic) {
        const auto n = s.explicit_roots.size();
        if (n < 3 || n % 2 == 0)
            throw std::invalid_argument("generic curve: need an odd number (>= 3) of roots");
        if (s.genus != static_cast<int>((n - 1) / 2))
            throw std::invalid_argument("generic curve: genus does not match root count");
        for (const auto& r : s.explicit_roots)
            require_finite(r, "generic curve root");
        require_distinct(s.explicit_roots);
        if (s.genus > kMaxGenus)
            throw std::invalid_argument("generic curve: genus above supported maximum");
        return;
    }

    if (s.genus < 2 || s.genus > kMaxGenus)
        throw std::invalid_argument("family: genus must lie in [2, 6]");
    if (s.P.degree() != 2 * s.genus - 2)
        throw std::invalid_argument("family: P must have degree 2g - 2");
    require_finite(s.lambda, "family lambda");
    if (s.lambda == Complex{0.0, 0.0})
        throw std::invalid_argument("family: lambda must be nonzero");

    const auto& a = s.P.roots();
    for (std::size_t j = 1; j < a.size(); ++j)
        if (!(std::abs(a[j - 1]) < std::abs(a[j])))
            throw std::invalid_argument("family: roots of P must have strictly increasing moduli");

    double inner = 0.0;
    switch (s.kind) {
    case FamilyKind::Node: inner = 1.0; break;
    case FamilyKind::CuspI: inner = std::sqrt(std::abs(s.lambda)); break;
    case FamilyKind::CuspII: inner = std::max(std::abs(s.lambda), std::norm(s.lambda)); break;
    case FamilyKind::Generic: break;
    }
    if (!a.empty() && !(std::abs(a.front()) > inner))
        throw std::invalid_argument("family: roots of P must lie outside the degenerating cluster");
    require_distinct(s.roots());
}

}  // namespace

CurveSpec make_family(FamilyKind kind, int genus, const RootPoly& P, Complex lambda)
{
    if (kind == FamilyKind::Generic)
        throw std::invalid_argument("make_family: use make_generic for explicit curves");
    CurveSpec s;
    s.kind = kind;
    s.genus = genus;
    s.P = P;
    s.lambda = lambda;
    validate_spec(s);
    return s;
}

CurveSpec make_genus2_family(FamilyKind kind, Complex a, Complex b, Complex lambda)
{
    return make_family(kind, 2, poly_from_roots({a, b}), lambda);
}

CurveSpec make_generic(std::vector<Complex> roots)
{
    CurveSpec s;
    s.kind = FamilyKind::Generic;
    s.genus = roots.size() >= 1 ? static_cast<int>((roots.size() - 1) / 2) : 0;
    s.explicit_roots = std::move(roots);
    validate_spec(s);
    return s;
}

CurveSpec with_lambda(const CurveSpec& spec, Complex lambda)
{
    CurveSpec s = spec;
    s.lambda = lambda;
    validate_spec(s);
    return s;
}

std::vector<Complex> branch_points(const CurveSpec& spec)
{
    auto pts = spec.roots();
    std::stable_sort(pts.begin(), pts.end(), modulus_less);
    return pts;
}

std::vector<Complex> chain_points(const CurveSpec& spec)
{
    if (spec.kind != FamilyKind::CuspI)
        return branch_points(spec);
    const Complex s = std::sqrt(spec.lambda);
    std::vector<Complex> pts{-s, Complex{0.0, 0.0}, s};
    auto rest = spec.P.roots();
    std::stable_sort(rest.begin(), rest.end(), modulus_less);
    pts.insert(pts.end(), rest.begin(), rest.end());
    return pts;
}

IntMatrix elementary_intersection(int genus)
{
    const int n = 2 * genus;
    IntMatrix m(n, std::vector<long long>(n, 0));
    for (int k = 0; k + 1 < n; ++k) {
        m[k][k + 1] = 1;
        m[k + 1][k] = -1;
    }
    return m;
}

IntMatrix standard_symplectic(int genus)
{
    IntMatrix m(2 * genus, std::vector<long long>(2 * genus, 0));
    for (int i = 0; i < genus; ++i) {
        m[i][genus + i] = 1;
        m[genus + i][i] = -1;
    }
    return m;
}

namespace {

long long pairing(const IntMatrix& form, const std::vector<long long>& u, const std::vector<long long>& v)
{
    long long acc = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0)
            continue;
        for (std::size_t j = 0; j < v.size(); ++j)
            acc += u[i] * form[i][j] * v[j];
    }
    return acc;
}

Cycle to_cycle(const std::vector<long long>& v)
{
    Cycle c;
    c.coeffs.reserve(v.size());
    for (long long x : v)
        c.coeffs.push_back(static_cast<int>(x));
    return c;
}

std::vector<long long> to_vec(const Cycle& c)
{
    return {c.coeffs.begin(), c.coeffs.end()};
}

}  // namespace

IntMatrix intersection_matrix(const HomologyBasis& basis)
{
    const int g = basis.genus();
    const IntMatrix form = elementary_intersection(g);
    std::vector<std::vector<long long>> all;
    for (const auto& d : basis.deltas) all.push_back(to_vec(d));
    for (const auto& c : basis.gammas) all.push_back(to_vec(c));
    IntMatrix m(2 * g, std::vector<long long>(2 * g, 0));
    for (int i = 0; i < 2 * g; ++i)
        for (int j = 0; j < 2 * g; ++j)
            m[i][j] = pairing(form, all[i], all[j]);
    return m;
}

HomologyBasis paper_basis(const CurveSpec& spec)
{
    const int g = spec.genus;
    HomologyBasis basis;
    for (int j = 1; j <= g; ++j) {
        Cycle d{std::vector<int>(2 * g, 0)};
        for (int k = 1; k <= 2 * j - 1; k += 2)
            d.coeffs[k - 1] = 1;
        Cycle c{std::vector<int>(2 * g, 0)};
        c.coeffs[2 * j - 1] = 1;
        basis.deltas.push_back(d);
        basis.gammas.push_back(c);
    }
    if (intersection_matrix(basis) != standard_symplectic(g))
        throw NumericalError("paper_basis: intersection check failed");
    return basis;
}

HomologyBasis symplectic_reduce(const IntMatrix& form)
{
    const std::size_t n = form.size();
    if (n % 2 != 0)
        throw NumericalError("symplectic_reduce: odd dimension");
    std::vector<std::vector<long long>> rest;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<long long> e(n, 0);
        e[i] = 1;
        rest.push_back(e);
    }

    std::vector<std::vector<long long>> ds, gs;
    while (!rest.empty()) {
        const auto v = rest.front();
        rest.erase(rest.begin());

        // Euclidean reduction of the pairings <v, u> until one of them is +-1.
        std::size_t unit = rest.size();
        for (int guard = 0; guard < 10000 && unit == rest.size(); ++guard) {
            std::size_t best = rest.size();
            for (std::size_t i = 0; i < rest.size(); ++i) {
                const long long p = pairing(form, v, rest[i]);
                if (std::llabs(p) == 1) {
                    unit = i;
                    break;
                }
                if (p != 0 && (best == rest.size() || std::llabs(p) < std::llabs(pairing(form, v, rest[best]))))
                    best = i;
            }
            if (unit != rest.size())
                break;
            if (best == rest.size())
                throw NumericalError("symplectic_reduce: form is degenerate");
            const long long pb = pairing(form, v, rest[best]);
            bool reduced = false;
            for (std::size_t i = 0; i < rest.size(); ++i) {
                if (i == best)
                    continue;
                const long long p = pairing(form, v, rest[i]);
                if (p == 0)
                    continue;
                const long long m = p / pb;
                for (std::size_t k = 0; k < n; ++k)
                    rest[i][k] -= m * rest[best][k];
                reduced = true;
            }
            if (!reduced)
                throw NumericalError("symplectic_reduce: form is not unimodular");
        }
        if (unit == rest.size())
            throw NumericalError("symplectic_reduce: reduction did not terminate");

        auto w = rest[unit];
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(unit));
        if (pairing(form, v, w) < 0)
            for (auto& x : w) x = -x;

        for (auto& u : rest) {
            const long long uv = pairing(form, u, v);
            const long long uw = pairing(form, u, w);
            for (std::size_t k = 0; k < n; ++k)
                u[k] += uv * w[k] - uw * v[k];
        }
        ds.push_back(v);
        gs.push_back(w);
    }

    HomologyBasis basis;
    for (const auto& d : ds) basis.deltas.push_back(to_cycle(d));
    for (const auto& g : gs) basis.gammas.push_back(to_cycle(g));
    return basis;
}

HomologyBasis symplectic_basis(const CurveSpec& spec)
{
    HomologyBasis basis = symplectic_reduce(elementary_intersection(spec.genus));
    if (intersection_matrix(basis) != standard_symplectic(spec.genus))
        throw NumericalError("symplectic_basis: reduction produced a non-standard form");
    return basis;
}

HomologyBasis swap_basis(const HomologyBasis& basis)
{
    HomologyBasis out;
    out.deltas = basis.gammas;
    for (const auto& d : basis.deltas) {
        Cycle c = d;
        for (auto& x : c.coeffs) x = -x;
        out.gammas.push_back(c);
    }
    return out;
}

CurveSpec normalization_curve(const CurveSpec& spec)
{
    std::vector<Complex> roots;
    switch (spec.kind) {
    case FamilyKind::Node: roots.push_back({1.0, 0.0}); break;
    case FamilyKind::CuspI:
    case FamilyKind::CuspII: roots.push_back({0.0, 0.0}); break;
    case FamilyKind::Generic:
        throw std::invalid_argument("normalization_curve: only defined for the degenerating families");
    }
    roots.insert(roots.end(), spec.P.roots().begin(), spec.P.roots().end());
    return make_generic(std::move(roots));
}

std::vector<ChainSegment> branch_chain(const CurveSpec& spec)
{
    const auto e = chain_points(spec);
    const std::size_t n = e.size();

    for (std::size_t k = 0; k + 1 < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            if (j != k && j != k + 1 && violates_tube(e[j], e[k], e[k + 1])) {
                std::ostringstream os;
                os << "branch_chain: branch point " << e[j] << " lies in the exclusion tube of ["
                   << e[k] << ", " << e[k + 1] << "]";
                throw NumericalError(os.str());
            }

    // phi[j]: continuous argument of (x - e_j) at the current chain position.
    std::vector<double> phi(n);
    for (std::size_t j = 1; j < n; ++j)
        phi[j] = std::arg(e[0] - e[j]);
    phi[0] = std::arg(e[1] - e[0]);

    std::vector<ChainSegment> out;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        ChainSegment seg;
        seg.p = e[k];
        seg.q = e[k + 1];
        seg.branch.arg_p = phi[k];
        seg.branch.arg_q = phi[k + 1];
        for (std::size_t j = 0; j < n; ++j)
            if (j != k && j != k + 1) {
                seg.others.push_back(e[j]);
                seg.branch.other_args.push_back(phi[j]);
            }
        out.push_back(std::move(seg));

        // Advance to e_{k+1}.
        for (std::size_t j = 0; j < n; ++j)
            if (j != k && j != k + 1)
                phi[j] += std::arg((e[k + 1] - e[j]) / (e[k] - e[j]));
        if (k + 2 < n) {
            // Pass e_{k+1} on the left of the direction of travel.
            const double out_dir = std::arg(e[k + 2] - e[k + 1]);
            double turn = std::fmod(phi[k + 1] - out_dir, 2.0 * kPi);
            if (turn <= 0.0)
                turn += 2.0 * kPi;
            if (turn < 1e-9 || turn > 2.0 * kPi - 1e-9)
                throw NumericalError("branch_chain: chain doubles back on itself");
            phi[k + 1] -= turn;
        }
    }
    return out;
}

}  // namespace degen
