#include "qcforge/qcmaps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcforge {

Piece Piece::from_map(const Triangle& cell, const AffineMap& map) {
    const auto& v = cell.vertices();
    Piece p{cell, {map(v[0]), map(v[1]), map(v[2])}, map, AffineMap::identity(),
            std::numeric_limits<double>::infinity()};
    if (map.orientation_preserving()) {
        p.inverse = invert_affine(map);
        p.dilatation = qcforge::dilatation(map);
    }
    return p;
}

Piece Piece::from_points(const std::array<Point, 3>& cell, const std::array<Point, 3>& image) {
    const AffineMap m = affine_from_points(cell, image);
    Piece p = from_map(Triangle(cell), m);
    // Keep the supplied image coordinates exactly (orientation-preserving pieces keep vertex order).
    if (p.cell.vertices() == cell) p.image = image;
    return p;
}

Piece Piece::inverted() const {
    if (!map.orientation_preserving()) throw OrientationError("cannot invert an orientation-reversing cell");
    return Piece{Triangle(image), cell.vertices(), inverse, map, dilatation};
}

std::string to_string(DomainKind kind) {
    switch (kind) {
        case DomainKind::annulus: return "annulus";
        case DomainKind::twist: return "twist";
        case DomainKind::composite: return "composite";
    }
    return "composite";
}

PiecewiseAffineMap::PiecewiseAffineMap(DomainKind kind, std::vector<double> params, std::vector<Piece> pieces,
                                       BoundaryData boundary)
    : kind_(kind), params_(std::move(params)), pieces_(std::move(pieces)), boundary_(std::move(boundary)) {}

double PiecewiseAffineMap::domain_area() const {
    double total = 0.0;
    for (const Piece& p : pieces_) total += p.cell.area();
    return total;
}

double PiecewiseAffineMap::image_area() const {
    double total = 0.0;
    for (const Piece& p : pieces_) total += p.image_area();
    return total;
}

double PiecewiseAffineMap::max_dilatation() const {
    double k = 1.0;
    for (const Piece& p : pieces_) k = std::max(k, p.dilatation);
    return k;
}

std::optional<std::size_t> PiecewiseAffineMap::locate(Point p, double tol) const {
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (pieces_[i].cell.contains(p, tol)) return i;
    }
    return std::nullopt;
}

std::size_t PiecewiseAffineMap::nearest_cell(Point p) const {
    std::size_t best = 0;
    double best_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto l = pieces_[i].cell.barycentric(p);
        const double margin = std::min({l[0], l[1], l[2]});
        if (margin >= 0.0) return i;
        if (margin > best_margin) {
            best_margin = margin;
            best = i;
        }
    }
    return best;
}

Point PiecewiseAffineMap::apply(Point p) const {
    if (pieces_.empty()) return p;
    return pieces_[nearest_cell(p)].map(p);
}

PiecewiseAffineMap PiecewiseAffineMap::inverted() const {
    std::vector<Piece> inv;
    inv.reserve(pieces_.size());
    for (const Piece& p : pieces_) inv.push_back(p.inverted());
    BoundaryData b{boundary_.outer, {}};
    for (const auto& h : boundary_.holes) b.holes.push_back({h.dst_center, h.dst_side, h.src_center, h.src_side});
    return {kind_, params_, std::move(inv), std::move(b)};
}

PiecewiseAffineMap PiecewiseAffineMap::placed(const AffineMap& src, const AffineMap& dst) const {
    const AffineMap src_inv = invert_affine(src);
    const double src_scale = std::sqrt(src.det()), dst_scale = std::sqrt(dst.det());
    std::vector<Piece> out;
    out.reserve(pieces_.size());
    for (const Piece& p : pieces_) {
        const auto& v = p.cell.vertices();
        Piece q = Piece::from_map(Triangle(src(v[0]), src(v[1]), src(v[2])), compose(dst, compose(p.map, src_inv)));
        q.dilatation = p.dilatation;
        out.push_back(q);
    }
    BoundaryData b;
    for (const Point& o : boundary_.outer) b.outer.push_back(src(o));
    for (const auto& h : boundary_.holes) {
        b.holes.push_back({src(h.src_center), h.src_side * src_scale, dst(h.dst_center), h.dst_side * dst_scale});
    }
    return {kind_, params_, std::move(out), std::move(b)};
}

namespace {

double segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a, ap = p - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    const double t = len2 > 0.0 ? std::clamp((ap.x * ab.x + ap.y * ab.y) / len2, 0.0, 1.0) : 0.0;
    return distance(p, a + t * ab);
}

bool on_outer(const std::vector<Point>& outer, Point p, double tol) {
    for (std::size_t i = 0; i < outer.size(); ++i) {
        if (segment_distance(p, outer[i], outer[(i + 1) % outer.size()]) <= tol) return true;
    }
    return false;
}

bool on_hole(const HoleCorrespondence& h, Point p, double tol) {
    const double dx = std::abs(p.x - h.src_center.x), dy = std::abs(p.y - h.src_center.y);
    const double half = 0.5 * h.src_side;
    return dx <= half + tol && dy <= half + tol && std::max(dx, dy) >= half - tol;
}

}  // namespace

ValidationReport validate(const PiecewiseAffineMap& map, double target_area, double tol) {
    ValidationReport r;
    const auto& pieces = map.pieces();
    r.max_dilatation = 1.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const Piece& p = pieces[i];
        if (!p.map.orientation_preserving() || !(p.image_area() > 0.0)) r.oriented = false;
        r.dilatation_by_cell.emplace_back(i, p.dilatation);
        r.max_dilatation = std::max(r.max_dilatation, p.dilatation);
    }
    r.surjective_area_defect = std::abs(map.image_area() - target_area);

    // Every cell vertex lying in another cell must have the same image there;
    // this covers shared edges and T-junctions alike.
    for (std::size_t i = 0; i < pieces.size() && r.continuous; ++i) {
        for (std::size_t k = 0; k < 3 && r.continuous; ++k) {
            const Point v = pieces[i].cell[k];
            const Point w = pieces[i].image[k];
            for (std::size_t j = 0; j < pieces.size(); ++j) {
                if (j == i || !pieces[j].cell.contains(v, 1e-9)) continue;
                if (distance(pieces[j].map(v), w) > tol) {
                    r.continuous = false;
                    break;
                }
            }
        }
    }

    const auto& bd = map.boundary();
    for (const Piece& p : pieces) {
        for (std::size_t k = 0; k < 3; ++k) {
            const Point v = p.cell[k];
            const Point w = p.image[k];
            if (!bd.outer.empty() && on_outer(bd.outer, v, tol) && distance(v, w) > tol) r.boundary_ok = false;
            for (const auto& h : bd.holes) {
                if (on_hole(h, v, tol) && distance(h.similarity()(v), w) > tol) r.boundary_ok = false;
            }
        }
    }
    return r;
}

std::vector<Piece> rectangle_annulus(Point lo, Point hi, const HoleCorrespondence& hole) {
    auto corners = [](Point c, double hx, double hy) {
        return std::array<Point, 4>{Point{c.x - hx, c.y - hy}, Point{c.x + hx, c.y - hy}, Point{c.x + hx, c.y + hy},
                                    Point{c.x - hx, c.y + hy}};
    };
    const Point mid = 0.5 * (lo + hi);
    const auto outer = corners(mid, 0.5 * (hi.x - lo.x), 0.5 * (hi.y - lo.y));
    const auto inner = corners(hole.src_center, 0.5 * hole.src_side, 0.5 * hole.src_side);
    const auto inner_img = corners(hole.dst_center, 0.5 * hole.dst_side, 0.5 * hole.dst_side);
    for (const auto* sq : {&inner, &inner_img}) {
        if (!((*sq)[0].x > lo.x && (*sq)[0].y > lo.y && (*sq)[2].x < hi.x && (*sq)[2].y < hi.y))
            throw GeometryError("hole must lie strictly inside the rectangle");
    }
    std::vector<Piece> out;
    out.reserve(8);
    for (std::size_t i = 0; i < 4; ++i) {
        const std::size_t j = (i + 1) % 4;
        out.push_back(Piece::from_points({outer[i], outer[j], inner[j]}, {outer[i], outer[j], inner_img[j]}));
        out.push_back(Piece::from_points({outer[i], inner[j], inner[i]}, {outer[i], inner_img[j], inner_img[i]}));
    }
    return out;
}

double annulus_bound(double a, double b) { return b * (1.0 - 2.0 * a) / (a * (1.0 - 2.0 * b)); }

PiecewiseAffineMap annulus_extension(double a, double b) {
    if (!(a > 0.0) || !(a <= b) || !(b < 0.5)) throw DomainError("annulus extension needs 0 < a <= b < 1/2");
    const HoleCorrespondence hole{{0.0, 0.0}, 1.0 - 2.0 * a, {0.0, 0.0}, 1.0 - 2.0 * b};
    BoundaryData bd{{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}, {hole}};
    return {DomainKind::annulus, {a, b}, rectangle_annulus({-0.5, -0.5}, {0.5, 0.5}, hole), std::move(bd)};
}

std::vector<Point> clip_convex(const std::vector<Point>& subject, const std::vector<Point>& clipper) {
    std::vector<Point> out = subject;
    for (std::size_t e = 0; e < clipper.size() && !out.empty(); ++e) {
        const Point a = clipper[e], b = clipper[(e + 1) % clipper.size()];
        const std::vector<Point> in = std::move(out);
        out.clear();
        for (std::size_t i = 0; i < in.size(); ++i) {
            const Point p = in[i], q = in[(i + 1) % in.size()];
            const double sp = orient2d(a, b, p), sq = orient2d(a, b, q);
            if (sp >= 0.0) out.push_back(p);
            if ((sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0)) {
                const double t = sp / (sp - sq);
                out.push_back(p + t * (q - p));
            }
        }
    }
    // Drop repeated vertices produced by touching edges.
    std::vector<Point> clean;
    for (const Point& p : out) {
        if (clean.empty() || distance(clean.back(), p) > 1e-15) clean.push_back(p);
    }
    while (clean.size() > 1 && distance(clean.front(), clean.back()) <= 1e-15) clean.pop_back();
    return clean;
}

PiecewiseAffineMap compose_maps(const PiecewiseAffineMap& first, const PiecewiseAffineMap& second, DomainKind kind,
                                std::vector<double> params) {
    constexpr double kMinArea = 1e-14;
    std::vector<Piece> out;
    for (const Piece& f : first.pieces()) {
        const std::vector<Point> img(f.image.begin(), f.image.end());
        for (const Piece& s : second.pieces()) {
            const auto& sv = s.cell.vertices();
            const auto poly = clip_convex(img, {sv.begin(), sv.end()});
            if (poly.size() < 3) continue;
            const AffineMap m = compose(s.map, f.map);
            for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
                if (0.5 * orient2d(poly[0], poly[k], poly[k + 1]) < kMinArea) continue;
                const Point p0 = f.inverse(poly[0]), p1 = f.inverse(poly[k]), p2 = f.inverse(poly[k + 1]);
                if (orient2d(p0, p1, p2) <= 0.0) continue;
                out.push_back(Piece::from_map(Triangle(p0, p1, p2), m));
            }
        }
    }
    BoundaryData bd{first.boundary().outer, {}};
    for (const auto& h : first.boundary().holes) {
        // Follow each hole through the second map's hole with the matching source.
        HoleCorrespondence c = h;
        for (const auto& g : second.boundary().holes) {
            if (distance(g.src_center, h.dst_center) < 1e-12 && std::abs(g.src_side - h.dst_side) < 1e-12) {
                c.dst_center = g.dst_center;
                c.dst_side = g.dst_side;
            }
        }
        bd.holes.push_back(c);
    }
    return {kind, std::move(params), std::move(out), std::move(bd)};
}

namespace {

PiecewiseAffineMap two_hole_map(Point lo1, Point hi1, const HoleCorrespondence& h1, Point lo2, Point hi2,
                                const HoleCorrespondence& h2) {
    auto pieces = rectangle_annulus(lo1, hi1, h1);
    auto more = rectangle_annulus(lo2, hi2, h2);
    pieces.insert(pieces.end(), more.begin(), more.end());
    BoundaryData bd{{{0.0, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {0.0, 0.5}}, {h1, h2}};
    return {DomainKind::composite, {}, std::move(pieces), std::move(bd)};
}

}  // namespace

PiecewiseAffineMap twist_extension(double a) {
    if (!(a > 0.0) || !(a < 0.2)) throw DomainError("twist extension needs 0 < a < 1/5");
    constexpr double s = 0.125;
    // Left hole up, right hole down, each inside its own column.
    const PiecewiseAffineMap shift = two_hole_map({0.0, -0.5}, {0.25, 0.5}, {{0.125, 0.0}, s, {0.125, 0.125}, s},
                                                  {0.25, -0.5}, {0.5, 0.5}, {{0.375, 0.0}, s, {0.375, -0.125}, s});
    // Shifted holes grow into the top and bottom holes, each inside its own half.
    const double side = 0.5 - 2.0 * a;
    const PiecewiseAffineMap expand =
        two_hole_map({0.0, 0.0}, {0.5, 0.5}, {{0.125, 0.125}, s, {0.25, 0.25}, side}, {0.0, -0.5}, {0.5, 0.0},
                     {{0.375, -0.125}, s, {0.25, -0.25}, side});
    return compose_maps(shift, expand, DomainKind::twist, {a});
}

}  // namespace qcforge
