#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcforge/geometry.hpp"

namespace qcforge {

/// One cell of a piecewise-affine map. `image` keeps vertex correspondence
/// with `cell` and is not re-oriented, so a reversing map stays visible.
struct Piece {
    Triangle cell;
    std::array<Point, 3> image;
    AffineMap map;
    AffineMap inverse;  // identity placeholder when map reverses orientation
    double dilatation;  // +inf when map reverses orientation

    static Piece from_map(const Triangle& cell, const AffineMap& map);
    /// Map determined by cell vertices -> image vertices.
    static Piece from_points(const std::array<Point, 3>& cell, const std::array<Point, 3>& image);

    double image_area() const { return 0.5 * orient2d(image[0], image[1], image[2]); }
    /// Cell and image swapped; the cell's dilatation is carried over unchanged.
    Piece inverted() const;
};

/// Square hole whose boundary is mapped by z -> dst.center + (dst.side/src.side)(z - src.center).
struct HoleCorrespondence {
    Point src_center;
    double src_side = 0.0;
    Point dst_center;
    double dst_side = 0.0;

    AffineMap similarity() const { return AffineMap::scaling_about(src_center, dst_center, dst_side / src_side); }
};

/// Declared boundary behaviour: identity on the outer polygon, similarities on holes.
struct BoundaryData {
    std::vector<Point> outer;  // counter-clockwise
    std::vector<HoleCorrespondence> holes;
};

enum class DomainKind { annulus, twist, composite };

std::string to_string(DomainKind kind);

class PiecewiseAffineMap {
public:
    PiecewiseAffineMap() = default;
    PiecewiseAffineMap(DomainKind kind, std::vector<double> params, std::vector<Piece> pieces, BoundaryData boundary);

    DomainKind domain_kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    const BoundaryData& boundary() const { return boundary_; }

    double domain_area() const;
    double image_area() const;
    double max_dilatation() const;

    /// Index of a cell containing p (closed, slack tol), else nullopt.
    std::optional<std::size_t> locate(Point p, double tol = 1e-12) const;
    /// Index of the containing cell, or of the cell p is least outside of.
    std::size_t nearest_cell(Point p) const;
    Point apply(Point p) const;

    PiecewiseAffineMap inverted() const;
    /// z -> dst(T(src^-1(z))) for similarities src, dst.
    PiecewiseAffineMap placed(const AffineMap& src, const AffineMap& dst) const;

private:
    DomainKind kind_ = DomainKind::composite;
    std::vector<double> params_;
    std::vector<Piece> pieces_;
    BoundaryData boundary_;
};

struct ValidationReport {
    bool continuous = true;
    bool oriented = true;
    double surjective_area_defect = 0.0;
    bool boundary_ok = true;
    double max_dilatation = 1.0;
    std::vector<std::pair<std::size_t, double>> dilatation_by_cell;

    bool ok(double tol) const { return continuous && oriented && boundary_ok && surjective_area_defect <= tol; }
};

ValidationReport validate(const PiecewiseAffineMap& map, double target_area, double tol = 1e-9);

/// Fixed outer rectangle [x0,x1]×[y0,y1] with inner hole src mapped onto hole dst
/// (both axis-aligned squares strictly inside). Eight cells: each outer corner
/// joined to its inner corner, each trapezoid cut along outer_i -> inner_{i+1}.
std::vector<Piece> rectangle_annulus(Point lo, Point hi, const HoleCorrespondence& hole);

/// Square annulus A_a -> A_b, identity on max(|x|,|y|) = 1/2 and a central
/// similarity on the inner square. 0 < a <= b < 1/2; a == b gives the identity.
PiecewiseAffineMap annulus_extension(double a, double b);

/// Triply connected twist on the half square [0,1/2]×[-1/2,1/2]: holes
/// S(1/8, 1/8) and S(3/8, 1/8) go to S((1+i)/4, 1/2-2a) and S((1-i)/4, 1/2-2a).
/// Built as the composite of a fixed hole-shifting map (left hole up, right
/// hole down by 1/8) with an a-dependent expansion of the shifted holes.
PiecewiseAffineMap twist_extension(double a);

/// second ∘ first, cells from the overlay of first's images with second's cells.
/// Each overlay polygon is fan-triangulated; zero-area pieces are dropped.
PiecewiseAffineMap compose_maps(const PiecewiseAffineMap& first, const PiecewiseAffineMap& second,
                                DomainKind kind, std::vector<double> params);

/// Convex polygon clip of subject against a counter-clockwise convex clipper.
std::vector<Point> clip_convex(const std::vector<Point>& subject, const std::vector<Point>& clipper);

double annulus_bound(double a, double b);

}  // namespace qcforge
