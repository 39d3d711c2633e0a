#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcforge/cantor.hpp"
#include "qcforge/qcmaps.hpp"

namespace qcforge {

/// Depth limit for hierarchical maps (nothing is materialized per square).
inline constexpr int kMaxHierarchicalDepth = 64;

/// One of the two nested-square constructions: Λ(gauge) or Σ.
struct Construction {
    CantorFamily family = CantorFamily::lambda;
    GaugeSequence gauge;

    static Construction lambda(GaugeSequence g) { return {CantorFamily::lambda, std::move(g)}; }
    static Construction sigma() { return {CantorFamily::sigma, GaugeSequence::geometric(1.0)}; }

    double side(int level) const;
    double log_side(int level) const;
    ChildLayout children(int level) const;
    std::string describe() const;

    friend bool operator==(const Construction&, const Construction&) = default;
};

enum class Direction { forward, inverse };

/// Gasket between a level-(k-1) square and its four children, in the unit
/// frame of the parent (source and target squares both [-1/2,1/2]²).
struct LevelTemplate {
    int level = 0;
    PiecewiseAffineMap gasket;
    double max_dilatation = 1.0;
    /// Annulus inset pair (a, b) or the twist parameter a.
    std::vector<double> params;
    /// Gasket regions per parent square: 4 annuli or 2 twist regions.
    int regions_per_parent = 4;
};

struct SquareFrame {
    Point center;
    double side = 1.0;
};

struct EvalResult {
    Point value;
    double error_bound = 0.0;
    /// Level whose gasket contained the point, or the depth reached inside a square.
    int level = 0;
    bool exact = true;
};

/// Level-indexed approximant φ_n between two constructions. Square i of level
/// k in the source corresponds to square i of level k in the target.
class HierarchicalMap {
public:
    HierarchicalMap(int depth, Construction source, Construction target, std::vector<LevelTemplate> levels,
                    Direction direction);

    int depth() const { return depth_; }
    const Construction& source() const { return source_; }
    const Construction& target() const { return target_; }
    Direction direction() const { return direction_; }
    const std::vector<LevelTemplate>& levels() const { return levels_; }
    const LevelTemplate& level(int k) const { return levels_.at(static_cast<std::size_t>(k - 1)); }

    /// Frame of square `index` (base-4 path) at level k on either side.
    SquareFrame source_square(int k, std::uint64_t index) const;
    SquareFrame target_square(int k, std::uint64_t index) const;
    /// Similarity carrying source square `index` of level k onto its target square.
    AffineMap square_similarity(int k, std::uint64_t index) const;

    EvalResult evaluate(Point z, double tol = 0.0) const;

    /// Same map truncated at a smaller depth.
    HierarchicalMap truncated(int depth) const;

    friend bool operator==(const HierarchicalMap&, const HierarchicalMap&);

private:
    int depth_;
    Construction source_, target_;
    std::vector<LevelTemplate> levels_;
    Direction direction_;
};

/// Standard homeomorphism Λ(src) -> Λ(dst): index-preserving square
/// correspondence, annulus extensions on each quadrant annulus.
HierarchicalMap standard_homeo(const GaugeSequence& src, const GaugeSequence& dst, int n);

/// Σ -> Λ(sqrt): Σ children left to right go to the NW, SW, NE, SE children;
/// gaskets are the right-half twist and its rotation by π on the left half.
HierarchicalMap theoremB_homeo(int n);

/// Level-k twist parameter (1 - d_k/d_{k-1}) / 4 for the sqrt gauge.
double twist_parameter(int k);

std::vector<std::pair<int, double>> max_dilatation_per_level(const HierarchicalMap& map);

HierarchicalMap invert(const HierarchicalMap& map);

struct Polyline {
    std::vector<Point> vertices;
    /// Source parameter t in [-1/2, 1/2] of each vertex (its x coordinate on the real axis).
    std::vector<double> marks;
    /// Deepest-level square indices in the order the curve crosses them.
    std::vector<std::uint64_t> square_order;
};

/// Image of [-1/2,1/2]×{0} under a Σ-sourced map: exact vertices at every
/// crossing of a gasket cell edge, straight runs through deepest squares.
Polyline curve_polyline(const HierarchicalMap& map, double tol = 0.0);

/// Number of level-n target squares met by the curve, counted per congruence
/// class of the segment's position inside a square (no materialization).
std::uint64_t curve_square_count(const HierarchicalMap& map, int n);

}  // namespace qcforge
