#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace degen {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Raised when a numerical procedure cannot produce a trustworthy value
/// (non-convergence, contour too close to a singularity, ill-conditioning).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument unless both parts of `v` are finite.
void require_finite(Complex v, const std::string& what);

/// Polynomial held as leading * prod (x - r_j). Never expanded.
class RootPoly {
public:
    RootPoly() = default;
    RootPoly(std::vector<Complex> roots, Complex leading);

    [[nodiscard]] const std::vector<Complex>& roots() const noexcept { return roots_; }
    [[nodiscard]] Complex leading() const noexcept { return leading_; }
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(roots_.size()); }

    [[nodiscard]] Complex operator()(Complex x) const noexcept;

private:
    std::vector<Complex> roots_;
    Complex leading_{1.0, 0.0};
};

RootPoly poly_from_roots(std::vector<Complex> roots, Complex leading = Complex{1.0, 0.0});
Complex poly_eval(const RootPoly& p, Complex x);

/// Relative exclusion tube around a root: a straight path [a, b] is rejected
/// when dist(root, [a, b]) <= kExclusionTube * min(|root - a|, |root - b|).
inline constexpr double kExclusionTube = 1e-3;

/// Euclidean distance from `pt` to the closed segment [a, b].
double distance_to_segment(Complex pt, Complex a, Complex b) noexcept;

/// True when `root` violates the exclusion tube of the segment [a, b].
bool violates_tube(Complex root, Complex a, Complex b) noexcept;

/// Continuous argument of (x - root) along a polyline, starting from the
/// principal argument at path.front(). `x` must lie on the polyline; the
/// argument is continued up to the first point of the polyline equal to x.
double continued_arg(Complex root, std::span<const Complex> path, Complex x);

/// (x - root)^{1/2} on the branch obtained by continuing the argument along `path`.
Complex continued_sqrt_factor(Complex root, std::span<const Complex> path, Complex x);

}  // namespace degen
