#include "degen/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace degen {

void require_finite(Complex v, const std::string& what)
{
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::invalid_argument(what + ": non-finite complex value");
}

RootPoly::RootPoly(std::vector<Complex> roots, Complex leading)
    : roots_(std::move(roots)), leading_(leading)
{
    require_finite(leading_, "RootPoly leading coefficient");
    if (leading_ == Complex{0.0, 0.0})
        throw std::invalid_argument("RootPoly: leading coefficient must be nonzero");
    for (const auto& r : roots_)
        require_finite(r, "RootPoly root");
}

Complex RootPoly::operator()(Complex x) const noexcept
{
    Complex acc = leading_;
    for (const auto& r : roots_)
        acc *= (x - r);
    return acc;
}

RootPoly poly_from_roots(std::vector<Complex> roots, Complex leading)
{
    return RootPoly(std::move(roots), leading);
}

Complex poly_eval(const RootPoly& p, Complex x)
{
    return p(x);
}

double distance_to_segment(Complex pt, Complex a, Complex b) noexcept
{
    const Complex d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0)
        return std::abs(pt - a);
    const double t = std::clamp(((pt - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(pt - (a + t * d));
}

bool violates_tube(Complex root, Complex a, Complex b) noexcept
{
    const double near = std::min(std::abs(root - a), std::abs(root - b));
    return distance_to_segment(root, a, b) <= kExclusionTube * near;
}

namespace {

// Argument increment of (x - root) along the straight piece from a to b,
// accumulated in sub-steps that each turn by less than pi/4.
double arg_increment(Complex root, Complex a, Complex b)
{
    const double total = std::arg((b - root) / (a - root));
    const int steps = 1 + static_cast<int>(std::floor(std::abs(total) / (kPi / 4.0)));
    double acc = 0.0;
    Complex prev = a - root;
    for (int s = 1; s <= steps; ++s) {
        const Complex cur = a + (b - a) * (static_cast<double>(s) / steps) - root;
        acc += std::arg(cur / prev);
        prev = cur;
    }
    return acc;
}

}  // namespace

double continued_arg(Complex root, std::span<const Complex> path, Complex x)
{
    if (path.empty())
        throw std::invalid_argument("continued_arg: empty path");
    require_finite(root, "continued_arg root");
    require_finite(x, "continued_arg point");

    double scale = std::abs(path.front()) + std::abs(x);
    for (const auto& w : path)
        scale = std::max(scale, std::abs(w));
    const double on_path = 1e-12 * std::max(scale, 1.0);

    if (path.front() == root)
        throw NumericalError("continued_arg: path starts at the root");
    double arg = std::arg(path.front() - root);
    if (std::abs(x - path.front()) <= on_path)
        return arg + std::arg((x - root) / (path.front() - root));

    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const Complex a = path[i];
        const Complex b = path[i + 1];
        if (violates_tube(root, a, b))
            throw NumericalError("continued_arg: path enters the exclusion tube of a root");
        if (distance_to_segment(x, a, b) <= on_path)
            return arg + arg_increment(root, a, x);
        arg += arg_increment(root, a, b);
    }
    throw std::invalid_argument("continued_arg: point does not lie on the path");
}

Complex continued_sqrt_factor(Complex root, std::span<const Complex> path, Complex x)
{
    const double arg = continued_arg(root, path, x);
    return std::polar(std::sqrt(std::abs(x - root)), 0.5 * arg);
}

}  // namespace degen
