#include "degen/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace degen {

void QuadratureConfig::validate() const
{
    if (order < 8)
        throw std::invalid_argument("QuadratureConfig: order must be >= 8");
    if (max_order < order)
        throw std::invalid_argument("QuadratureConfig: max_order must be >= order");
    if (!(rel_tol > 0.0))
        throw std::invalid_argument("QuadratureConfig: rel_tol must be positive");
}

void SegmentIntegral::validate() const
{
    if (power < -1)
        throw std::invalid_argument("SegmentIntegral: power must be >= -1");
    require_finite(p, "SegmentIntegral endpoint p");
    require_finite(q, "SegmentIntegral endpoint q");
    if (p == q)
        throw std::invalid_argument("SegmentIntegral: endpoints coincide");
    if (power < 0 && violates_tube(Complex{0.0, 0.0}, p, q))
        throw NumericalError("SegmentIntegral: x^-1 weight with 0 in the exclusion tube");
    for (const auto& r : other_roots) {
        require_finite(r, "SegmentIntegral root");
        if (violates_tube(r, p, q))
            throw NumericalError("SegmentIntegral: a root lies in the exclusion tube of the segment");
    }
    if (branch && branch->other_args.size() != other_roots.size())
        throw std::invalid_argument("SegmentIntegral: branch data does not match the root list");
}

SegmentBranch resolve_branch(const SegmentIntegral& si)
{
    if (si.branch)
        return *si.branch;
    SegmentBranch br;
    br.arg_p = std::arg(si.q - si.p);
    br.arg_q = std::arg(si.p - si.q);
    br.other_args.reserve(si.other_roots.size());
    std::vector<Complex> path = si.branch_path;
    if (path.empty() || path.back() != si.p)
        path.push_back(si.p);
    for (const auto& r : si.other_roots)
        br.other_args.push_back(continued_arg(r, path, si.p));
    return br;
}

const GaussRule& gauss_legendre(int n)
{
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (slot)
        return *slot;

    auto rule = std::make_unique<GaussRule>();
    rule->nodes.resize(n);
    rule->weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p0 = 1.0;
                p1 = x;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule->nodes[i] = -x;
        rule->nodes[n - 1 - i] = x;
        rule->weights[i] = w;
        rule->weights[n - 1 - i] = w;
    }
    slot = std::move(rule);
    return *slot;
}

namespace {

// Smooth part 1 / prod_j sqrt(x - r_j) on the branch fixed at p. Points are
// passed as offsets from p or from q so that x - r_j keeps full relative
// accuracy when a root crowds an endpoint.
class RemainderFactor {
public:
    RemainderFactor(const SegmentIntegral& si, const SegmentBranch& br)
        : p_(si.p), q_(si.q), roots_(si.other_roots)
    {
        Complex c{1.0, 0.0};
        for (std::size_t j = 0; j < roots_.size(); ++j)
            c *= std::polar(std::sqrt(std::abs(p_ - roots_[j])), 0.5 * br.other_args[j]);
        inv_const_ = 1.0 / c;
    }

    // Along the segment arg((x - r)/(p - r)) stays inside (-pi, pi), so the
    // principal root of the ratio is the continuous one.
    [[nodiscard]] Complex from_p(Complex t) const
    {
        Complex acc = inv_const_;
        for (const auto& r : roots_)
            acc /= std::sqrt(((p_ - r) + t) / (p_ - r));
        return acc;
    }

    [[nodiscard]] Complex from_q(Complex s) const
    {
        Complex acc = inv_const_;
        for (const auto& r : roots_)
            acc /= std::sqrt(((q_ - r) + s) / (p_ - r));
        return acc;
    }

private:
    Complex p_;
    Complex q_;
    std::vector<Complex> roots_;
    Complex inv_const_;
};

Complex ipow(Complex x, int k)
{
    if (k < 0)
        return 1.0 / ipow(x, -k);
    Complex acc{1.0, 0.0};
    for (int i = 0; i < k; ++i)
        acc *= x;
    return acc;
}

struct ThetaIntegrand {
    Complex p;
    Complex q;
    Complex half;
    int power;
    Complex prefactor;
    const RemainderFactor* rem;

    Complex operator()(double theta) const
    {
        if (theta >= 0.5 * kPi) {
            const double c = std::cos(0.5 * theta);
            const Complex t = 2.0 * half * (c * c);  // x - p
            return prefactor * ipow(p + t, power) * rem->from_p(t);
        }
        const double s = std::sin(0.5 * theta);
        const Complex u = -2.0 * half * (s * s);  // x - q
        return prefactor * ipow(q + u, power) * rem->from_q(u);
    }
};

Complex chebyshev_pass(const ThetaIntegrand& f, int n)
{
    Complex acc{0.0, 0.0};
    for (int k = 1; k <= n; ++k)
        acc += f((2.0 * k - 1.0) * kPi / (2.0 * n));
    return acc * (kPi / n);
}

Complex panel_pass(const ThetaIntegrand& f, const std::vector<double>& breaks, int n)
{
    const GaussRule& rule = gauss_legendre(n);
    Complex acc{0.0, 0.0};
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        const double lo = breaks[b], hi = breaks[b + 1];
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        Complex part{0.0, 0.0};
        for (int i = 0; i < n; ++i)
            part += rule.weights[i] * f(c + h * rule.nodes[i]);
        acc += part * h;
    }
    return acc;
}

// Breakpoints in theta graded geometrically towards the preimages of nearby roots.
std::vector<double> graded_breaks(const std::vector<Complex>& preimages)
{
    std::vector<double> breaks{0.0, kPi};
    for (const auto& t : preimages) {
        const double c = std::clamp(t.real(), 0.0, kPi);
        const double d = std::max(std::abs(t.imag()), 1e-14);
        if (c > 0.0 && c < kPi)
            breaks.push_back(c);
        for (double step = d; step < kPi; step *= 2.0) {
            if (c - step > 0.0)
                breaks.push_back(c - step);
            if (c + step < kPi)
                breaks.push_back(c + step);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> out;
    for (double b : breaks)
        if (out.empty() || b - out.back() > 1e-15)
            out.push_back(b);
    if (out.back() != kPi)
        out.back() = kPi;
    return out;
}

constexpr double kGradeThreshold = 0.05;

std::string describe_failure(const char* what, Complex a, Complex b)
{
    std::ostringstream os;
    os.precision(17);
    os << what << ": last two values " << a << " and " << b;
    return os.str();
}

}  // namespace

QuadratureResult segment_period_detailed(const SegmentIntegral& si, const QuadratureConfig& cfg)
{
    cfg.validate();
    si.validate();
    const SegmentBranch br = resolve_branch(si);
    const RemainderFactor rem(si, br);

    const Complex mid = 0.5 * (si.p + si.q);
    const Complex half = 0.5 * (si.q - si.p);
    // dx / sqrt((x-p)(x-q)) = (half/|half|) e^{-i(arg_p+arg_q)/2} dtheta, theta in (0, pi).
    const Complex pref = (half / std::abs(half)) * std::polar(1.0, -0.5 * (br.arg_p + br.arg_q));
    const ThetaIntegrand f{si.p, si.q, half, si.power, pref, &rem};

    std::vector<Complex> near;
    for (const auto& r : si.other_roots) {
        const Complex t = std::acos((r - mid) / half);
        if (std::abs(t.imag()) < kGradeThreshold)
            near.push_back(t);
    }

    QuadratureResult res;
    if (near.empty()) {
        int n = cfg.order;
        Complex prev = chebyshev_pass(f, n);
        while (2 * n <= cfg.max_order) {
            n *= 2;
            const Complex cur = chebyshev_pass(f, n);
            const double change = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
            if (change <= cfg.rel_tol) {
                res.value = cur;
                res.order = n;
                res.rel_change = change;
                return res;
            }
            prev = cur;
        }
        throw NumericalError(describe_failure("segment_period: no convergence at max_order", prev,
                                              chebyshev_pass(f, n / 2)));
    }

    const std::vector<double> breaks = graded_breaks(near);
    const int panels = static_cast<int>(breaks.size()) - 1;
    int n = 16;
    Complex prev = panel_pass(f, breaks, n);
    while (n * panels <= 8 * cfg.max_order && n < 512) {
        n *= 2;
        const Complex cur = panel_pass(f, breaks, n);
        const double change = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
        if (change <= cfg.rel_tol) {
            res.value = cur;
            res.order = n * panels;
            res.rel_change = change;
            res.graded = true;
            return res;
        }
        prev = cur;
    }
    throw NumericalError(describe_failure("segment_period: graded panels did not converge", prev,
                                          panel_pass(f, breaks, n / 2)));
}

Complex segment_period(const SegmentIntegral& si, const QuadratureConfig& cfg)
{
    return segment_period_detailed(si, cfg).value;
}

Complex adaptive_integrate(const std::function<Complex(double)>& f, double a, double b, double rel_tol)
{
    if (a == b)
        return {0.0, 0.0};
    const GaussRule& rule = gauss_legendre(15);
    auto gl = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        Complex acc{0.0, 0.0};
        for (int i = 0; i < 15; ++i)
            acc += rule.weights[i] * f(c + h * rule.nodes[i]);
        return acc * h;
    };

    // Coarse estimate fixes the absolute tolerance.
    constexpr int kCoarse = 32;
    Complex coarse{0.0, 0.0};
    for (int i = 0; i < kCoarse; ++i)
        coarse += gl(a + (b - a) * i / kCoarse, a + (b - a) * (i + 1) / kCoarse);
    const double abs_tol = rel_tol * std::max(std::abs(coarse), 1e-300);

    struct Item {
        double lo, hi;
        Complex whole;
        int depth;
    };
    std::vector<Item> stack;
    for (int i = kCoarse - 1; i >= 0; --i) {
        const double lo = a + (b - a) * i / kCoarse, hi = a + (b - a) * (i + 1) / kCoarse;
        stack.push_back({lo, hi, gl(lo, hi), 0});
    }
    Complex total{0.0, 0.0};
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        const double m = 0.5 * (it.lo + it.hi);
        const Complex left = gl(it.lo, m), right = gl(m, it.hi);
        const double local_tol = abs_tol * std::max((it.hi - it.lo) / (b - a), 1e-6);
        if (std::abs(left + right - it.whole) <= local_tol) {
            total += left + right;
            continue;
        }
        if (it.depth >= 60)
            throw NumericalError("adaptive_integrate: maximum subdivision depth reached");
        stack.push_back({m, it.hi, right, it.depth + 1});
        stack.push_back({it.lo, m, left, it.depth + 1});
    }
    return total;
}

Complex adaptive_integrate_sqrt_end(const std::function<Complex(double)>& f, double a, double b,
                                    double rel_tol)
{
    const double m = 0.5 * (a + b);
    const Complex lower = adaptive_integrate([&](double s) { return f(s) / std::sqrt(b - s); }, a, m, rel_tol);
    const Complex upper = adaptive_integrate([&](double u) { return 2.0 * f(b - u * u); }, 0.0,
                                             std::sqrt(b - m), rel_tol);
    return lower + upper;
}

Complex adaptive_oracle(const SegmentIntegral& si)
{
    si.validate();
    const SegmentBranch br = resolve_branch(si);
    const RemainderFactor rem(si, br);
    const Complex d = si.q - si.p;
    const double sqrt_len = std::sqrt(std::abs(d));
    const Complex phase_p = std::polar(1.0, 0.5 * br.arg_p);
    const Complex phase_q = std::polar(1.0, 0.5 * br.arg_q);
    const double u_max = std::sqrt(0.5);

    // s = u^2 near p: sqrt(x - p) = sqrt|d| u e^{i arg_p / 2}, ds = 2u du.
    auto near_p = [&](double u) {
        const Complex t = d * (u * u);
        const Complex sq = std::polar(std::sqrt(std::abs(t - d)), 0.5 * br.arg_q);
        return 2.0 * d * ipow(si.p + t, si.power) * rem.from_p(t) / (sqrt_len * phase_p * sq);
    };
    // 1 - s = u^2 near q: sqrt(x - q) = sqrt|d| u e^{i arg_q / 2}.
    auto near_q = [&](double u) {
        const Complex s = -d * (u * u);
        const Complex sp = std::polar(std::sqrt(std::abs(d + s)), 0.5 * br.arg_p);
        return 2.0 * d * ipow(si.q + s, si.power) * rem.from_q(s) / (sqrt_len * phase_q * sp);
    };
    return adaptive_integrate(near_p, 0.0, u_max) + adaptive_integrate(near_q, 0.0, u_max);
}

}  // namespace degen
