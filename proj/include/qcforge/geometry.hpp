#pragma once

#include <array>
#include <complex>
#include <span>

#include "qcforge/errors.hpp"

namespace qcforge {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
    friend constexpr bool operator==(Point a, Point b) = default;
};

double distance(Point a, Point b);

/// Twice the signed area of (a, b, c); positive for counter-clockwise order.
double orient2d(Point a, Point b, Point c);

/// z -> M z + t with M = [[m11, m12], [m21, m22]].
///
/// The struct itself accepts any finite entries so that validators can
/// represent broken maps; operations that need an orientation-preserving
/// map check det() > 0 and throw OrientationError otherwise.
struct AffineMap {
    double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
    double tx = 0.0, ty = 0.0;

    static constexpr AffineMap identity() { return {}; }
    static constexpr AffineMap translation(double dx, double dy) { return {1.0, 0.0, 0.0, 1.0, dx, dy}; }
    /// z -> center_dst + scale * (z - center_src), no rotation.
    static AffineMap scaling_about(Point center_src, Point center_dst, double scale);

    double det() const { return m11 * m22 - m12 * m21; }
    bool orientation_preserving() const { return det() > 0.0; }
    bool finite() const;

    Point operator()(Point p) const { return {m11 * p.x + m12 * p.y + tx, m21 * p.x + m22 * p.y + ty}; }

    friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// (outer ∘ inner)(z) = outer(inner(z)).
AffineMap compose(const AffineMap& outer, const AffineMap& inner);

/// Always positively oriented; the constructor swaps v2 and v3 when given a
/// clockwise triple and throws GeometryError on a degenerate one.
class Triangle {
public:
    Triangle(Point a, Point b, Point c);
    explicit Triangle(const std::array<Point, 3>& v) : Triangle(v[0], v[1], v[2]) {}

    const std::array<Point, 3>& vertices() const { return v_; }
    Point operator[](std::size_t i) const { return v_[i]; }
    double area() const;
    /// Barycentric coordinates of p (sum to one).
    std::array<double, 3> barycentric(Point p) const;
    /// Closed containment with absolute slack `tol` on barycentric coordinates.
    bool contains(Point p, double tol = 1e-12) const;

    friend bool operator==(const Triangle&, const Triangle&) = default;

private:
    std::array<Point, 3> v_;
};

/// Unique affine map with src[i] -> dst[i]. Requires a non-collinear source
/// triple; returns the exact identity when the triples are bitwise equal.
AffineMap affine_from_points(const std::array<Point, 3>& src, const std::array<Point, 3>& dst);

/// Affine map taking the vertices of src to those of dst in order.
/// Throws OrientationError if the result is not orientation-preserving.
AffineMap affine_three_point(const Triangle& src, const Triangle& dst);

/// Complex derivatives of z -> A z: (∂, ∂̄).
std::complex<double> holomorphic_derivative(const AffineMap& a);
std::complex<double> antiholomorphic_derivative(const AffineMap& a);

/// Complex dilatation ∂̄/∂.
std::complex<double> beltrami(const AffineMap& a);

/// Real dilatation K = (|∂| + |∂̄|) / (|∂| − |∂̄|) >= 1.
double dilatation(const AffineMap& a);

/// Dilatation of the affine map of the plane fixing 0 and 1 and sending z to w,
/// both strictly in the upper half-plane (points read as complex numbers).
double dilatation_three_point(Point z, Point w);

AffineMap invert_affine(const AffineMap& a);

}  // namespace qcforge
