#include "qcforge/homeo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace qcforge {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void check_hierarchical_depth(int n) {
    if (n < 0) throw DomainError("depth must be non-negative");
    if (n > kMaxHierarchicalDepth) {
        throw DepthGuardError("hierarchical depth " + std::to_string(n) + " exceeds limit " +
                              std::to_string(kMaxHierarchicalDepth));
    }
}

BoundaryData unit_boundary() {
    BoundaryData b;
    b.outer = {Point{-0.5, -0.5}, Point{0.5, -0.5}, Point{0.5, 0.5}, Point{-0.5, 0.5}};
    return b;
}

// Gasket of the unit square with the four children of each layout as holes,
// assembled from per-region maps already expressed in the unit frame.
LevelTemplate assemble(int k, const std::vector<PiecewiseAffineMap>& parts, const ChildLayout& src,
                       const ChildLayout& dst, DomainKind kind, std::vector<double> params, int regions) {
    std::vector<Piece> pieces;
    for (const auto& p : parts) pieces.insert(pieces.end(), p.pieces().begin(), p.pieces().end());
    BoundaryData b = unit_boundary();
    for (std::size_t j = 0; j < 4; ++j) {
        b.holes.push_back({src.offsets[j], src.relative_side, dst.offsets[j], dst.relative_side});
    }
    LevelTemplate t;
    t.level = k;
    t.gasket = PiecewiseAffineMap(kind, params, std::move(pieces), std::move(b));
    t.max_dilatation = t.gasket.max_dilatation();
    t.params = std::move(params);
    t.regions_per_parent = regions;
    return t;
}

bool same_piece(const Piece& a, const Piece& b) {
    return a.cell == b.cell && a.image == b.image && a.map == b.map && a.inverse == b.inverse &&
           (a.dilatation == b.dilatation || (std::isnan(a.dilatation) && std::isnan(b.dilatation)));
}

bool same_template(const LevelTemplate& a, const LevelTemplate& b) {
    const auto& pa = a.gasket.pieces();
    const auto& pb = b.gasket.pieces();
    if (a.level != b.level || a.params != b.params || a.regions_per_parent != b.regions_per_parent ||
        a.max_dilatation != b.max_dilatation || pa.size() != pb.size()) {
        return false;
    }
    for (std::size_t i = 0; i < pa.size(); ++i) {
        if (!same_piece(pa[i], pb[i])) return false;
    }
    return true;
}

SquareFrame walk(const Construction& c, int k, std::uint64_t index) {
    SquareFrame f;
    for (int j = 1; j <= k; ++j) {
        const auto digit = static_cast<std::size_t>((index >> (2 * (k - j))) & 3u);
        const ChildLayout layout = c.children(j);
        f.center = f.center + f.side * layout.offsets[digit];
        f.side *= layout.relative_side;
    }
    return f;
}

bool inside(Point z, const SquareFrame& f) {
    const double h = 0.5 * f.side;
    return std::abs(z.x - f.center.x) <= h && std::abs(z.y - f.center.y) <= h;
}

Point similarity(Point z, const SquareFrame& from, const SquareFrame& to) {
    return to.center + (to.side / from.side) * (z - from.center);
}

}  // namespace

double Construction::log_side(int level) const {
    if (family == CantorFamily::sigma) return -3.0 * level * kLn2;
    return gauge.log_value(level) - level * kLn2;
}

double Construction::side(int level) const { return std::exp(log_side(level)); }

ChildLayout Construction::children(int level) const {
    return family == CantorFamily::sigma ? sigma_children() : lambda_children(gauge, level);
}

std::string Construction::describe() const {
    return family == CantorFamily::sigma ? std::string("sigma") : "lambda(" + gauge.describe() + ")";
}

HierarchicalMap::HierarchicalMap(int depth, Construction source, Construction target,
                                 std::vector<LevelTemplate> levels, Direction direction)
    : depth_(depth), source_(std::move(source)), target_(std::move(target)), levels_(std::move(levels)),
      direction_(direction) {
    check_hierarchical_depth(depth_);
    if (levels_.size() != static_cast<std::size_t>(depth_)) throw DomainError("one template per level required");
}

SquareFrame HierarchicalMap::source_square(int k, std::uint64_t index) const { return walk(source_, k, index); }
SquareFrame HierarchicalMap::target_square(int k, std::uint64_t index) const { return walk(target_, k, index); }

AffineMap HierarchicalMap::square_similarity(int k, std::uint64_t index) const {
    const SquareFrame s = source_square(k, index), t = target_square(k, index);
    return AffineMap::scaling_about(s.center, t.center, t.side / s.side);
}

EvalResult HierarchicalMap::evaluate(Point z, double tol) const {
    SquareFrame s, t;
    if (!inside(z, s)) return {z, 0.0, 0, true};
    for (int k = 1; k <= depth_; ++k) {
        const double bound = std::numbers::sqrt2 * t.side;
        if (tol > 0.0 && bound <= tol) return {similarity(z, s, t), bound, k - 1, false};
        const ChildLayout cs = source_.children(k), ct = target_.children(k);
        bool descended = false;
        for (std::size_t j = 0; j < 4; ++j) {
            const SquareFrame child{s.center + s.side * cs.offsets[j], s.side * cs.relative_side};
            if (inside(z, child)) {
                s = child;
                t = {t.center + t.side * ct.offsets[j], t.side * ct.relative_side};
                descended = true;
                break;
            }
        }
        if (!descended) {
            const Point u = (1.0 / s.side) * (z - s.center);
            const Point w = level(k).gasket.apply(u);
            return {t.center + t.side * w, 0.0, k, true};
        }
    }
    if (depth_ == 0) return {z, 0.0, 0, true};
    return {similarity(z, s, t), std::numbers::sqrt2 * t.side, depth_, false};
}

HierarchicalMap HierarchicalMap::truncated(int depth) const {
    if (depth < 0 || depth > depth_) throw DomainError("truncation depth out of range");
    std::vector<LevelTemplate> lv(levels_.begin(), levels_.begin() + depth);
    return {depth, source_, target_, std::move(lv), direction_};
}

bool operator==(const HierarchicalMap& a, const HierarchicalMap& b) {
    if (a.depth_ != b.depth_ || !(a.source_ == b.source_) || !(a.target_ == b.target_) ||
        a.direction_ != b.direction_) {
        return false;
    }
    for (std::size_t i = 0; i < a.levels_.size(); ++i) {
        if (!same_template(a.levels_[i], b.levels_[i])) return false;
    }
    return true;
}

HierarchicalMap standard_homeo(const GaugeSequence& src, const GaugeSequence& dst, int n) {
    check_hierarchical_depth(n);
    const Construction cs = Construction::lambda(src), ct = Construction::lambda(dst);
    std::vector<LevelTemplate> levels;
    for (int k = 1; k <= n; ++k) {
        // Quadrant annulus inset in the quadrant's own unit frame.
        const double a = -0.5 * std::expm1(src.log_value(k) - src.log_value(k - 1));
        const double b = -0.5 * std::expm1(dst.log_value(k) - dst.log_value(k - 1));
        const PiecewiseAffineMap ann = a <= b ? annulus_extension(a, b) : annulus_extension(b, a).inverted();
        const ChildLayout ls = cs.children(k), lt = ct.children(k);
        std::vector<PiecewiseAffineMap> parts;
        for (const Point& c : ls.offsets) {
            const AffineMap q = AffineMap::scaling_about(Point{}, c, 0.5);
            parts.push_back(ann.placed(q, q));
        }
        levels.push_back(assemble(k, parts, ls, lt, DomainKind::annulus, {a, b}, 4));
    }
    return {n, cs, ct, std::move(levels), Direction::forward};
}

double twist_parameter(int k) {
    const GaugeSequence g = GaugeSequence::sqrt();
    return -0.25 * std::expm1(g.log_value(k) - g.log_value(k - 1));
}

HierarchicalMap theoremB_homeo(int n) {
    check_hierarchical_depth(n);
    const Construction cs = Construction::sigma(), ct = Construction::lambda(GaugeSequence::sqrt());
    const AffineMap rot{-1.0, 0.0, 0.0, -1.0, 0.0, 0.0};
    std::vector<LevelTemplate> levels;
    for (int k = 1; k <= n; ++k) {
        const double a = twist_parameter(k);
        const PiecewiseAffineMap right = twist_extension(a);
        levels.push_back(assemble(k, {right.placed(rot, rot), right}, cs.children(k), ct.children(k),
                                  DomainKind::twist, {a}, 2));
    }
    return {n, cs, ct, std::move(levels), Direction::forward};
}

std::vector<std::pair<int, double>> max_dilatation_per_level(const HierarchicalMap& map) {
    std::vector<std::pair<int, double>> out;
    for (const auto& t : map.levels()) out.emplace_back(t.level, t.max_dilatation);
    return out;
}

HierarchicalMap invert(const HierarchicalMap& map) {
    std::vector<LevelTemplate> levels;
    for (const auto& t : map.levels()) {
        LevelTemplate u = t;
        u.gasket = t.gasket.inverted();
        levels.push_back(std::move(u));
    }
    const Direction d = map.direction() == Direction::forward ? Direction::inverse : Direction::forward;
    return {map.depth(), map.target(), map.source(), std::move(levels), d};
}

Polyline curve_polyline(const HierarchicalMap& map, double tol) {
    if (map.source().family != CantorFamily::sigma) throw DomainError("curve requires a sigma-sourced map");
    int depth = map.depth();
    if (tol > 0.0) {
        for (int k = 0; k <= map.depth(); ++k) {
            if (std::numbers::sqrt2 * map.target().side(k) <= tol) {
                depth = k;
                break;
            }
        }
    }
    if (depth > depth_guard()) {
        throw DepthGuardError("curve depth " + std::to_string(depth) + " exceeds guard " +
                              std::to_string(depth_guard()));
    }

    Polyline out;
    if (depth == 0) {
        out.vertices = {Point{-0.5, 0.0}, Point{0.5, 0.0}};
        out.marks = {-0.5, 0.5};
        out.square_order = {0};
        return out;
    }

    // Per level: for each of the five gaps between children, the parameters
    // where the axis crosses a gasket cell edge and their unit-frame images.
    const ChildLayout sc = sigma_children();
    const double h = 0.5 * sc.relative_side;
    struct Gap {
        std::vector<double> t;
        std::vector<Point> w;
    };
    std::vector<std::array<Gap, 5>> plans(static_cast<std::size_t>(depth));
    for (int k = 1; k <= depth; ++k) {
        const PiecewiseAffineMap& g = map.level(k).gasket;
        std::vector<double> cuts;
        for (const Piece& p : g.pieces()) {
            for (std::size_t i = 0; i < 3; ++i) {
                const Point a = p.cell[i], b = p.cell[(i + 1) % 3];
                if (a.y == 0.0) cuts.push_back(a.x);
                if ((a.y < 0.0 && b.y > 0.0) || (a.y > 0.0 && b.y < 0.0)) {
                    cuts.push_back(a.x + (0.0 - a.y) * (b.x - a.x) / (b.y - a.y));
                }
            }
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t gi = 0; gi < 5; ++gi) {
            const double lo = gi == 0 ? -0.5 : sc.offsets[gi - 1].x + h;
            const double hi = gi == 4 ? 0.5 : sc.offsets[gi].x - h;
            Gap& gap = plans[static_cast<std::size_t>(k - 1)][gi];
            gap.t.push_back(lo);
            for (double c : cuts) {
                if (c > lo + 1e-14 && c < hi - 1e-14 && c - gap.t.back() > 1e-14) gap.t.push_back(c);
            }
            gap.t.push_back(hi);
            for (double t : gap.t) gap.w.push_back(g.apply(Point{t, 0.0}));
        }
    }

    std::function<void(int, SquareFrame, SquareFrame, std::uint64_t)> emit = [&](int k, SquareFrame s, SquareFrame t,
                                                                                 std::uint64_t index) {
        const ChildLayout ct = map.target().children(k);
        const auto& plan = plans[static_cast<std::size_t>(k - 1)];
        for (std::size_t gi = 0; gi < 5; ++gi) {
            const Gap& gap = plan[gi];
            for (std::size_t i = 0; i < gap.t.size(); ++i) {
                // Square endpoints are emitted by the parent gap that ends or starts there.
                if (k > 1 && ((gi == 0 && i == 0) || (gi == 4 && i + 1 == gap.t.size()))) continue;
                out.marks.push_back(s.center.x + s.side * gap.t[i]);
                out.vertices.push_back(t.center + t.side * gap.w[i]);
            }
            if (gi == 4) break;
            const SquareFrame cs{s.center + s.side * sc.offsets[gi], s.side * sc.relative_side};
            const SquareFrame ctf{t.center + t.side * ct.offsets[gi], t.side * ct.relative_side};
            const std::uint64_t child = index * 4 + gi;
            if (k == depth) {
                out.square_order.push_back(child);
            } else {
                emit(k + 1, cs, ctf, child);
            }
        }
    };
    emit(1, SquareFrame{}, SquareFrame{}, 0);
    return out;
}

std::uint64_t curve_square_count(const HierarchicalMap& map, int n) {
    check_hierarchical_depth(n);
    const Construction& c = map.source();
    std::map<std::pair<int, double>, std::uint64_t> memo;
    // Squares of levels k..n met by the line y = y0 in a unit square at level k-1.
    std::function<std::uint64_t(int, double)> count = [&](int k, double y0) -> std::uint64_t {
        if (k > n) return 1;
        const auto key = std::make_pair(k, y0);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const ChildLayout layout = c.children(k);
        std::uint64_t total = 0;
        for (const Point& off : layout.offsets) {
            if (std::abs(y0 - off.y) <= 0.5 * layout.relative_side) {
                total += count(k + 1, (y0 - off.y) / layout.relative_side);
            }
        }
        memo[key] = total;
        return total;
    };
    return count(1, 0.0);
}

}  // namespace qcforge
