#include "degen/asymptotics.hpp"

#include <cmath>

#include <json.hpp>

#include "degen/kernel.hpp"

namespace degen {

namespace {

// Principal values regardless of signed zeros (-lambda of a real lambda
// carries -0 in its imaginary part, which would select the other branch).
Complex unsigned_zero(Complex v) { return {v.real() + 0.0, v.imag() + 0.0}; }

Complex sqrt_p0(const RootPoly& P)
{
    const Complex p0 = P(Complex{0.0, 0.0});
    if (std::abs(p0) == 0.0)
        throw std::invalid_argument("P(0) must be nonzero");
    return std::sqrt(unsigned_zero(p0));
}

Complex cpow(Complex base, double e)
{
    return std::exp(e * std::log(unsigned_zero(base)));
}

void check_family_genus(int genus)
{
    if (genus < 2 || genus > kMaxGenus)
        throw std::invalid_argument("genus must lie in [2, 6]");
}

Complex chain_integral(const ChainSegment& seg, int power, const QuadratureConfig& cfg)
{
    SegmentIntegral si;
    si.power = power;
    si.p = seg.p;
    si.q = seg.q;
    si.other_roots = seg.others;
    si.branch = seg.branch;
    return segment_period(si, cfg);
}

Complex chain_oracle(const ChainSegment& seg)
{
    SegmentIntegral si;
    si.p = seg.p;
    si.q = seg.q;
    si.other_roots = seg.others;
    si.branch = seg.branch;
    return adaptive_oracle(si);
}

Complex oriented_ratio(Complex num, Complex den)
{
    const Complex r = num / den;
    return r.imag() < 0.0 ? -r : r;
}

double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

// Polynomial z^{2i} values, i = 1..n.
std::vector<Complex> even_powers(Complex z, int n)
{
    std::vector<Complex> out(n);
    Complex acc{1.0, 0.0};
    for (int i = 0; i < n; ++i) {
        acc *= z * z;
        out[i] = acc;
    }
    return out;
}

constexpr double kTinyLambda = 1e-12;

}  // namespace

std::vector<Complex> star_vector(int genus, const RootPoly& P)
{
    check_family_genus(genus);
    const Complex entry = Complex{0.0, -2.0} / sqrt_p0(P);
    return std::vector<Complex>(genus - 1, entry);
}

Complex cusp_u_integral(int k, const QuadratureConfig& cfg)
{
    if (k < 0)
        throw std::invalid_argument("cusp_u_integral: k must be non-negative");
    const auto chain = branch_chain(make_generic({0.0, 1.0, 2.0}));
    Complex acc{0.0, 0.0};
    for (int m = 0; m <= k; ++m) {
        const double sign = ((k - m) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binomial(k, m) * chain_integral(chain[0], m, cfg);
    }
    return acc;
}

CuspIVectors cuspI_vectors(int genus, const RootPoly& P, Complex lambda)
{
    check_family_genus(genus);
    require_finite(lambda, "lambda");
    if (lambda == Complex{0.0, 0.0})
        throw std::invalid_argument("cuspI_vectors: lambda must be nonzero");
    const Complex sp = sqrt_p0(P);
    CuspIVectors v;
    for (int i = 2; i <= genus; ++i) {
        const Complex s = -2.0 * cpow(lambda, (2.0 * i - 3.0) / 4.0) / sp * cusp_u_integral(i - 1);
        const double sign = (i % 2 == 0) ? -1.0 : 1.0;  // (-1)^{i-1}
        v.star.push_back(s);
        v.diamond.push_back(sign * Complex{0.0, 1.0} * s);
    }
    return v;
}

std::vector<Complex> heart_vector(int genus, const RootPoly& P, Complex lambda)
{
    check_family_genus(genus);
    require_finite(lambda, "lambda");
    if (lambda == Complex{0.0, 0.0})
        throw std::invalid_argument("heart_vector: lambda must be nonzero");
    const Complex sp = sqrt_p0(P);
    std::vector<Complex> out;
    Complex lp{1.0, 0.0};  // lambda^{i-2}
    for (int i = 2; i <= genus; ++i) {
        out.push_back(-2.0 * lp * std::sqrt(unsigned_zero(-lambda)) / sp);
        lp *= lambda;
    }
    return out;
}

Genus2Constants genus2_constants(Complex a, Complex b, const QuadratureConfig& cfg)
{
    const RootPoly P = poly_from_roots({a, b}, {1.0, 0.0});
    const Complex sab = std::sqrt(a * b);
    Genus2Constants k;

    const auto node_chain = branch_chain(make_generic({1.0, a, b}));
    k.c = oriented_ratio(chain_oracle(node_chain[1]), chain_oracle(node_chain[0]));
    k.c1 = -sab * chain_integral(node_chain[0], 0, cfg);
    k.d1 = -2.0 * chain_integral(node_chain[1], -1, cfg);
    k.d2 = -2.0 * chain_integral(node_chain[1], 0, cfg);

    const auto cusp_chain = branch_chain(make_generic({0.0, a, b}));
    k.tau = oriented_ratio(chain_oracle(cusp_chain[1]), chain_oracle(cusp_chain[0]));
    k.c3 = -sab * chain_integral(cusp_chain[0], 0, cfg);
    k.d3 = -2.0 * chain_integral(cusp_chain[1], -1, cfg);
    k.d4 = -2.0 * chain_integral(cusp_chain[1], 0, cfg);

    k.c4 = -2.0 * cusp_u_integral(1, cfg);
    k.c5 = -2.0 * cusp_u_integral(0, cfg);

    // int_0^1 sqrt(1/v - 1) dv with v = sin^2 t.
    const Complex c7_int =
        adaptive_integrate([](double t) { return Complex{2.0 * std::cos(t) * std::cos(t), 0.0}; }, 0.0, kPi / 2);
    k.c7 = -2.0 / sab * c7_int;

    const auto node = make_family(FamilyKind::Node, 2, P, kTinyLambda);
    k.c2 = compute_periods(node, paper_basis(node), cfg).A(0, 1);
    const auto cusp = make_family(FamilyKind::CuspI, 2, P, kTinyLambda);
    k.c6 = compute_periods(cusp, paper_basis(cusp), cfg).A(0, 1);
    return k;
}

std::string constants_to_json(const Genus2Constants& k, int indent)
{
    auto pair = [](Complex v) { return nlohmann::json::array({v.real(), v.imag()}); };
    nlohmann::ordered_json j;
    j["c"] = pair(k.c);
    j["tau"] = pair(k.tau);
    j["c1"] = pair(k.c1);
    j["c2"] = pair(k.c2);
    j["c3"] = pair(k.c3);
    j["c4"] = pair(k.c4);
    j["c5"] = pair(k.c5);
    j["c6"] = pair(k.c6);
    j["c7"] = pair(k.c7);
    j["d1"] = pair(k.d1);
    j["d2"] = pair(k.d2);
    j["d3"] = pair(k.d3);
    j["d4"] = pair(k.d4);
    return j.dump(indent);
}

double node_prediction(Complex z, const CMatrix& Z0, const CMatrix& A0, const std::vector<Complex>& star)
{
    const Eigen::Index n = Z0.rows();
    if (Z0.cols() != n || A0.rows() != n || A0.cols() != n || static_cast<Eigen::Index>(star.size()) != n)
        throw std::invalid_argument("node_prediction: inconsistent sizes");
    if (z == Complex{0.0, 0.0})
        throw std::invalid_argument("node_prediction: z must be nonzero");
    const RMatrix im = Z0.imag();
    const RMatrix Y0 = 0.5 * (im + im.transpose());
    const Eigen::LLT<RMatrix> llt(Y0);
    if (llt.info() != Eigen::Success)
        throw NumericalError("node_prediction: Im Z0 is not positive definite");
    const RMatrix Yi = llt.solve(RMatrix::Identity(n, n));

    Eigen::VectorXcd s(n);
    for (Eigen::Index i = 0; i < n; ++i)
        s(i) = star[static_cast<std::size_t>(i)];
    const Eigen::VectorXd v = Yi * Eigen::VectorXd(A0.partialPivLu().solve(s).imag());

    const auto zp = even_powers(z, static_cast<int>(n));
    Complex lin{0.0, 0.0};
    double den = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        lin += v(i) * zp[i];
        for (Eigen::Index j = 0; j < n; ++j)
            den += Yi(i, j) * std::real(zp[i] * std::conj(zp[j]));
    }
    if (!(den > 0.0))
        throw NumericalError("node_prediction: degenerate denominator");
    return (1.0 - 2.0 * lin.real()) / den;
}

double node_prediction_genus2(Complex z, Complex c, Complex c1)
{
    if (z == Complex{0.0, 0.0})
        throw std::invalid_argument("node_prediction_genus2: z must be nonzero");
    const Complex z2 = z * z;
    const double r4 = std::norm(z2);
    return (c.imag() + 2.0 * z2.real() * std::real(1.0 / c1)) / r4;
}

double cuspI_limit(Complex z, const CurveSpec& spec, const PeriodData& pd0)
{
    const double k0 = normalization_kernel(spec, pd0, z);
    const Complex x = z * z;
    return k0 + 4.0 / std::abs(x * x * spec.P(x));
}

double cuspII_prediction(Complex z, const CurveSpec& spec, const PeriodData& pd0)
{
    const double k0 = normalization_kernel(spec, pd0, z);
    const Complex x = z * z;
    return 4.0 * kPi / (k0 * std::abs(x * x * spec.P(x)));
}

double jacobian_prediction(FamilyKind kind, const PeriodData& pd0, Complex lambda)
{
    const double det0 = det_im_Z(pd0);
    switch (kind) {
    case FamilyKind::Node:
    case FamilyKind::CuspII: {
        const double L = -std::log(std::abs(lambda));
        if (!(L > 0.0))
            throw std::invalid_argument("jacobian_prediction: |lambda| must be below 1");
        return -std::log(L) + std::log(kPi / det0);
    }
    case FamilyKind::CuspI: return -std::log(det0);
    case FamilyKind::Generic: break;
    }
    throw std::invalid_argument("jacobian_prediction: only defined for the degenerating families");
}

RefPair reference_asymptote(double t, RefAsymptote which, double alpha)
{
    if (!(t >= 10.0))
        throw std::invalid_argument("reference_asymptote: t must be >= 10");
    double a = 0.0;
    switch (which) {
    case RefAsymptote::I: a = 0.0; break;
    case RefAsymptote::II: a = 1.0; break;
    case RefAsymptote::Alpha:
        if (!(alpha >= 1.0))
            throw std::invalid_argument("reference_asymptote: alpha must be >= 1");
        a = alpha;
        break;
    }
    const double beta = a + 1.0;
    const double m = 0.5 * t;
    const Complex I{0.0, 1.0};
    // [1, m]: s = e^u; sqrt(s - t) = i sqrt(t - s).
    const Complex lower = adaptive_integrate(
        [&](double u) {
            const double s = std::exp(u);
            return Complex{std::pow(s, 1.0 - beta) / std::sqrt(t - s), 0.0} / I;
        },
        0.0, std::log(m), 1e-12);
    // [m, t]: s = t - v^2, ds / sqrt(s - t) = 2 dv / i.
    const Complex upper = adaptive_integrate(
        [&](double v) {
            const double s = t - v * v;
            return Complex{2.0 / std::pow(s, beta), 0.0} / I;
        },
        0.0, std::sqrt(t - m), 1e-12);

    RefPair r;
    r.lhs = lower + upper;
    const double st = std::sqrt(t);
    switch (which) {
    case RefAsymptote::I: r.rhs = I * std::log(t) / st; break;
    case RefAsymptote::II: r.rhs = -I / st; break;
    case RefAsymptote::Alpha: r.rhs = -I / (alpha * st); break;
    }
    return r;
}

Complex reference_I_exact(double t)
{
    return Complex{0.0, -2.0} / std::sqrt(t) * std::log(std::sqrt(t) + std::sqrt(t - 1.0));
}

}  // namespace degen
