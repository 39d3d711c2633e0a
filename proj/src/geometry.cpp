#include "qcforge/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace qcforge {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double orient2d(Point a, Point b, Point c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

AffineMap AffineMap::scaling_about(Point center_src, Point center_dst, double scale) {
    return {scale, 0.0, 0.0, scale, center_dst.x - scale * center_src.x, center_dst.y - scale * center_src.y};
}

bool AffineMap::finite() const {
    return std::isfinite(m11) && std::isfinite(m12) && std::isfinite(m21) && std::isfinite(m22) &&
           std::isfinite(tx) && std::isfinite(ty);
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
    return {
        outer.m11 * inner.m11 + outer.m12 * inner.m21,
        outer.m11 * inner.m12 + outer.m12 * inner.m22,
        outer.m21 * inner.m11 + outer.m22 * inner.m21,
        outer.m21 * inner.m12 + outer.m22 * inner.m22,
        outer.m11 * inner.tx + outer.m12 * inner.ty + outer.tx,
        outer.m21 * inner.tx + outer.m22 * inner.ty + outer.ty,
    };
}

Triangle::Triangle(Point a, Point b, Point c) : v_{a, b, c} {
    for (const Point& p : v_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw GeometryError("triangle vertex is not finite");
    }
    const double o = orient2d(a, b, c);
    if (!(o != 0.0)) throw GeometryError("degenerate triangle");
    if (o < 0.0) std::swap(v_[1], v_[2]);
}

double Triangle::area() const { return 0.5 * orient2d(v_[0], v_[1], v_[2]); }

std::array<double, 3> Triangle::barycentric(Point p) const {
    const double total = orient2d(v_[0], v_[1], v_[2]);
    const double l0 = orient2d(p, v_[1], v_[2]) / total;
    const double l1 = orient2d(v_[0], p, v_[2]) / total;
    return {l0, l1, 1.0 - l0 - l1};
}

bool Triangle::contains(Point p, double tol) const {
    const auto l = barycentric(p);
    return l[0] >= -tol && l[1] >= -tol && l[2] >= -tol;
}

AffineMap affine_from_points(const std::array<Point, 3>& src, const std::array<Point, 3>& dst) {
    if (src == dst) return AffineMap::identity();
    // Solve M [e1 e2] = [f1 f2] with e_i = src[i] - src[0], f_i = dst[i] - dst[0].
    const Point e1 = src[1] - src[0], e2 = src[2] - src[0];
    const Point f1 = dst[1] - dst[0], f2 = dst[2] - dst[0];
    const double d = e1.x * e2.y - e2.x * e1.y;
    if (!(d != 0.0) || !std::isfinite(d)) throw GeometryError("collinear source points");
    AffineMap m;
    m.m11 = (f1.x * e2.y - f2.x * e1.y) / d;
    m.m12 = (f2.x * e1.x - f1.x * e2.x) / d;
    m.m21 = (f1.y * e2.y - f2.y * e1.y) / d;
    m.m22 = (f2.y * e1.x - f1.y * e2.x) / d;
    m.tx = dst[0].x - (m.m11 * src[0].x + m.m12 * src[0].y);
    m.ty = dst[0].y - (m.m21 * src[0].x + m.m22 * src[0].y);
    return m;
}

AffineMap affine_three_point(const Triangle& src, const Triangle& dst) {
    AffineMap m = affine_from_points(src.vertices(), dst.vertices());
    if (!m.orientation_preserving()) throw OrientationError("affine map between triangles reverses orientation");
    return m;
}

std::complex<double> holomorphic_derivative(const AffineMap& a) {
    return {0.5 * (a.m11 + a.m22), 0.5 * (a.m21 - a.m12)};
}

std::complex<double> antiholomorphic_derivative(const AffineMap& a) {
    return {0.5 * (a.m11 - a.m22), 0.5 * (a.m21 + a.m12)};
}

namespace {
void require_orientation(const AffineMap& a) {
    if (!a.orientation_preserving()) throw OrientationError("map is not orientation-preserving");
}
}  // namespace

std::complex<double> beltrami(const AffineMap& a) {
    require_orientation(a);
    return antiholomorphic_derivative(a) / holomorphic_derivative(a);
}

double dilatation(const AffineMap& a) {
    require_orientation(a);
    const double dz = std::abs(holomorphic_derivative(a));
    const double dzbar = std::abs(antiholomorphic_derivative(a));
    if (dzbar == 0.0) return 1.0;
    // |∂|² − |∂̄|² = det, so the denominator is det / (|∂| + |∂̄|) without cancellation.
    const double sum = dz + dzbar;
    return sum * sum / a.det();
}

double dilatation_three_point(Point z, Point w) {
    if (!(z.y > 0.0) || !(w.y > 0.0)) throw DomainError("points must lie in the open upper half-plane");
    const std::complex<double> zc{z.x, z.y}, wc{w.x, w.y};
    const double far = std::abs(zc - std::conj(wc));
    const double near = std::abs(zc - wc);
    return (far + near) / (far - near);
}

AffineMap invert_affine(const AffineMap& a) {
    require_orientation(a);
    const double d = a.det();
    AffineMap inv{a.m22 / d, -a.m12 / d, -a.m21 / d, a.m11 / d, 0.0, 0.0};
    inv.tx = -(inv.m11 * a.tx + inv.m12 * a.ty);
    inv.ty = -(inv.m21 * a.tx + inv.m22 * a.ty);
    return inv;
}

}  // namespace qcforge
