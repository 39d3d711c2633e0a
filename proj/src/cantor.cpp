#include "qcforge/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>

namespace qcforge {

namespace {
constexpr double kLn2 = std::numbers::ln2;
}

GaugeSequence GaugeSequence::geometric(double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("geometric gauge needs nu > 0");
    GaugeSequence g;
    g.kind_ = GaugeKind::geometric;
    g.nu_ = nu;
    return g;
}

GaugeSequence GaugeSequence::slow() {
    GaugeSequence g;
    g.kind_ = GaugeKind::slow;
    g.nu_ = 0.0;
    return g;
}

GaugeSequence GaugeSequence::fast() {
    GaugeSequence g;
    g.kind_ = GaugeKind::fast;
    g.nu_ = 0.0;
    return g;
}

GaugeSequence GaugeSequence::sqrt() {
    GaugeSequence g;
    g.kind_ = GaugeKind::sqrt;
    g.nu_ = 0.0;
    return g;
}

GaugeSequence GaugeSequence::custom(std::vector<double> table) {
    if (table.empty() || table.front() != 1.0) throw ValidationError("custom gauge must start with d_0 = 1");
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (!(table[i] > 0.0) || !(table[i] < table[i - 1]))
            throw ValidationError("custom gauge must be positive and strictly decreasing");
    }
    GaugeSequence g;
    g.kind_ = GaugeKind::custom;
    g.nu_ = 0.0;
    g.table_ = std::move(table);
    return g;
}

GaugeSequence GaugeSequence::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    if (kind == "geometric") {
        if (colon == std::string::npos) throw DomainError("geometric gauge needs a parameter, e.g. geometric:1");
        const std::string arg = spec.substr(colon + 1);
        char* end = nullptr;
        const double nu = std::strtod(arg.c_str(), &end);
        if (arg.empty() || *end != '\0') throw DomainError("bad geometric parameter: " + arg);
        return geometric(nu);
    }
    if (colon != std::string::npos) throw DomainError("gauge '" + kind + "' takes no parameter");
    if (kind == "slow") return slow();
    if (kind == "fast") return fast();
    if (kind == "sqrt") return sqrt();
    throw DomainError("unknown gauge kind: " + kind);
}

std::string GaugeSequence::describe() const {
    switch (kind_) {
        case GaugeKind::geometric: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "geometric:%.17g", nu_);
            return buf;
        }
        case GaugeKind::slow: return "slow";
        case GaugeKind::fast: return "fast";
        case GaugeKind::sqrt: return "sqrt";
        case GaugeKind::custom: return "custom";
    }
    return "custom";
}

int GaugeSequence::max_index() const {
    if (kind_ == GaugeKind::custom) return static_cast<int>(table_.size()) - 1;
    return 1 << 20;
}

double GaugeSequence::log_value(int n) const {
    if (n < 0 || n > max_index()) throw DomainError("gauge index out of range");
    const double x = n;
    switch (kind_) {
        case GaugeKind::geometric: return -nu_ * x * kLn2;
        case GaugeKind::slow: return -x / std::log(x + std::numbers::e) * kLn2;
        case GaugeKind::fast: return -x * std::log(x + 1.0) * kLn2;
        case GaugeKind::sqrt: return -std::sqrt(x) * kLn2;
        case GaugeKind::custom: return std::log(table_[static_cast<std::size_t>(n)]);
    }
    return 0.0;
}

double GaugeSequence::operator()(int n) const {
    if (kind_ == GaugeKind::custom) {
        if (n < 0 || n > max_index()) throw DomainError("gauge index out of range");
        return table_[static_cast<std::size_t>(n)];
    }
    return std::exp(log_value(n));
}

double GaugeSequence::ratio(int n) const {
    if (n < 1) throw DomainError("gauge ratio needs n >= 1");
    return std::exp(log_value(n) - log_value(n - 1));
}

double GaugeSequence::inset(int n) const {
    if (n < 1) throw DomainError("inset needs n >= 1");
    // 2^-(n+1) d_{n-1} (1 - d_n/d_{n-1}), with expm1 for the small-gap regime.
    const double gap = -std::expm1(log_value(n) - log_value(n - 1));
    return std::ldexp((*this)(n - 1) * gap, -(n + 1));
}

int depth_guard() {
    if (const char* env = std::getenv("QCFORGE_DEPTH_GUARD")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0) return static_cast<int>(std::min<long>(v, 30));
    }
    return 14;
}

ChildLayout lambda_children(const GaugeSequence& gauge, int n) {
    // Children sit at the quadrant centers of the parent; the inset a_n fixes only their size.
    ChildLayout c;
    c.offsets = {Point{-0.25, 0.25}, Point{-0.25, -0.25}, Point{0.25, 0.25}, Point{0.25, -0.25}};
    c.relative_side = 0.5 * gauge.ratio(n);
    return c;
}

ChildLayout sigma_children() {
    ChildLayout c;
    for (int j = 1; j <= 4; ++j) c.offsets[static_cast<std::size_t>(j - 1)] = Point{(2.0 * j - 5.0) / 8.0, 0.0};
    c.relative_side = 0.125;
    return c;
}

namespace {

void check_depth(int n) {
    if (n < 0) throw DomainError("level must be non-negative");
    if (n > depth_guard()) throw DepthGuardError("level " + std::to_string(n) + " exceeds the depth guard");
}

template <class Layout>
CantorLevel refine(CantorFamily family, int n, Layout&& layout_for) {
    check_depth(n);
    CantorLevel level;
    level.family = family;
    level.squares = {Square{{0.0, 0.0}, 1.0}};
    for (int k = 1; k <= n; ++k) {
        const ChildLayout layout = layout_for(k);
        std::vector<Square> next;
        next.reserve(level.squares.size() * 4);
        for (const Square& s : level.squares) {
            for (const Point& off : layout.offsets) {
                next.push_back({s.center + s.side * off, s.side * layout.relative_side});
            }
        }
        level.squares = std::move(next);
    }
    level.level = n;
    level.side = level.squares.front().side;
    return level;
}

}  // namespace

CantorLevel build_level(const GaugeSequence& gauge, int n) {
    CantorLevel level = refine(CantorFamily::lambda, n, [&](int k) { return lambda_children(gauge, k); });
    // Side from the closed form rather than the product of ratios.
    level.side = std::ldexp(gauge(n), -n);
    for (Square& s : level.squares) s.side = level.side;
    return level;
}

CantorLevel build_sigma_level(int n) {
    CantorLevel level = refine(CantorFamily::sigma, n, [](int) { return sigma_children(); });
    level.side = std::ldexp(1.0, -3 * n);
    for (Square& s : level.squares) s.side = level.side;
    return level;
}

DimensionEstimate dimension_bounds(const GaugeSequence& gauge, int N) {
    if (N < 3) throw DomainError("dimension_bounds needs N >= 3");
    if (N + 1 > gauge.max_index()) throw DomainError("gauge too short for requested N");
    const int first = std::max(1, N - N / 4);
    double sup_lower = -INFINITY, inf_upper = INFINITY;
    DimensionEstimate est;
    est.method = DimensionMethod::lemma_bounds;
    for (int n = first; n <= N; ++n) {
        const double denom = -gauge.log_value(n) + n * kLn2;
        sup_lower = std::max(sup_lower, -2.0 * gauge.log_value(n + 1) / denom);
        inf_upper = std::min(inf_upper, -2.0 * gauge.log_value(n) / denom);
        est.scales_used.push_back(std::ldexp(1.0, -n) * gauge(n));
    }
    est.lower = std::clamp(2.0 - sup_lower, 0.0, 2.0);
    est.upper = std::clamp(2.0 - inf_upper, 0.0, 2.0);
    est.value = 0.5 * (est.lower + est.upper);
    return est;
}

namespace {

struct BoxKeyHash {
    std::size_t operator()(std::uint64_t k) const { return std::hash<std::uint64_t>{}(k * 0x9E3779B97F4A7C15ull); }
};

std::uint64_t box_key(std::int64_t i, std::int64_t j) {
    return (static_cast<std::uint64_t>(i) << 32) ^ (static_cast<std::uint64_t>(j) & 0xffffffffull);
}

// Grid cells crossed by the closed segment p -> q (Amanatides–Woo traversal).
void mark_segment(Point p, Point q, double h, std::unordered_set<std::uint64_t, BoxKeyHash>& boxes) {
    std::int64_t i = static_cast<std::int64_t>(std::floor(p.x / h));
    std::int64_t j = static_cast<std::int64_t>(std::floor(p.y / h));
    const std::int64_t i_end = static_cast<std::int64_t>(std::floor(q.x / h));
    const std::int64_t j_end = static_cast<std::int64_t>(std::floor(q.y / h));
    const double dx = q.x - p.x, dy = q.y - p.y;
    const int si = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const int sj = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
    auto next_t = [h](double start, double delta, std::int64_t cell, int step) -> double {
        if (step == 0) return std::numeric_limits<double>::infinity();
        const double boundary = (step > 0 ? static_cast<double>(cell + 1) : static_cast<double>(cell)) * h;
        return (boundary - start) / delta;
    };
    double tx = next_t(p.x, dx, i, si), ty = next_t(p.y, dy, j, sj);
    const double step_tx = si != 0 ? h / std::abs(dx) : INFINITY;
    const double step_ty = sj != 0 ? h / std::abs(dy) : INFINITY;
    boxes.insert(box_key(i, j));
    std::int64_t guard = std::abs(i_end - i) + std::abs(j_end - j) + 2;
    while ((i != i_end || j != j_end) && guard-- > 0) {
        if (tx < ty) {
            i += si;
            tx += step_tx;
        } else {
            j += sj;
            ty += step_ty;
        }
        boxes.insert(box_key(i, j));
    }
}

}  // namespace

std::uint64_t count_boxes(const BoxSample& sample) {
    if (!(sample.scale > 0.0)) throw ValidationError("box scale must be positive");
    const double h = sample.scale;
    std::unordered_set<std::uint64_t, BoxKeyHash> boxes;
    boxes.reserve(sample.squares.size() * 4 + sample.polyline.size() * 2);
    for (const Square& s : sample.squares) {
        const double half = 0.5 * s.side;
        // Open overlap: cell k meets (lo, hi) iff k*h < hi and (k+1)*h > lo.
        const auto i0 = static_cast<std::int64_t>(std::floor((s.center.x - half) / h));
        const auto i1 = static_cast<std::int64_t>(std::ceil((s.center.x + half) / h)) - 1;
        const auto j0 = static_cast<std::int64_t>(std::floor((s.center.y - half) / h));
        const auto j1 = static_cast<std::int64_t>(std::ceil((s.center.y + half) / h)) - 1;
        for (auto i = i0; i <= i1; ++i)
            for (auto j = j0; j <= j1; ++j) boxes.insert(box_key(i, j));
    }
    for (std::size_t k = 0; k + 1 < sample.polyline.size(); ++k) {
        mark_segment(sample.polyline[k], sample.polyline[k + 1], h, boxes);
    }
    return boxes.size();
}

DimensionEstimate box_dimension(const std::function<BoxSample(int)>& source, const std::vector<int>& depths) {
    if (depths.size() < 2) throw ValidationError("box counting needs at least two scales");
    DimensionEstimate est;
    est.method = DimensionMethod::box_counting;
    std::vector<double> xs, ys;
    for (int n : depths) {
        const BoxSample sample = source(n);
        const auto count = static_cast<double>(count_boxes(sample));
        est.scales_used.push_back(sample.scale);
        est.counts.push_back(count);
        xs.push_back(-std::log(sample.scale));
        ys.push_back(std::log(count));
    }
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    if (!(sxx > 0.0)) throw ValidationError("box counting needs at least two distinct scales");
    const double slope = sxy / sxx;
    // Spread of the pointwise estimates brackets the fitted slope.
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double pw = ys[k] / xs[k];
        lo = std::min(lo, pw);
        hi = std::max(hi, pw);
    }
    est.value = std::clamp(slope, 0.0, 2.0);
    est.lower = std::clamp(std::min(lo, est.value), 0.0, 2.0);
    est.upper = std::clamp(std::max(hi, est.value), 0.0, 2.0);
    return est;
}

BoxSample box_sample(const CantorLevel& level) {
    BoxSample s;
    s.scale = level.side;
    s.squares = level.squares;
    return s;
}

double pointwise_dimension(const CantorLevel& level) {
    if (level.level == 0) return 0.0;
    return 2.0 * level.level * kLn2 / -std::log(level.side);
}

namespace {

// Area of {0 <= u <= x, 0 <= v <= y, u² + v² <= r²} for x, y >= 0.
double quadrant_area(double x, double y, double r) {
    x = std::min(x, r);
    y = std::min(y, r);
    if (x * x + y * y <= r * r) return x * y;
    const double u_star = std::sqrt(r * r - y * y);
    auto F = [r](double u) { return 0.5 * (u * std::sqrt(std::max(0.0, r * r - u * u)) + r * r * std::asin(u / r)); };
    return y * u_star + F(x) - F(u_star);
}

double signed_quadrant_area(double x, double y, double r) {
    const double sx = x < 0 ? -1.0 : 1.0, sy = y < 0 ? -1.0 : 1.0;
    return sx * sy * quadrant_area(std::abs(x), std::abs(y), r);
}

}  // namespace

double disk_rectangle_area(Point c, double r, double x0, double x1, double y0, double y1) {
    if (!(r > 0.0) || x1 <= x0 || y1 <= y0) return 0.0;
    x0 -= c.x;
    x1 -= c.x;
    y0 -= c.y;
    y1 -= c.y;
    const double a = signed_quadrant_area(x1, y1, r) - signed_quadrant_area(x0, y1, r) -
                     signed_quadrant_area(x1, y0, r) + signed_quadrant_area(x0, y0, r);
    return std::max(0.0, a);
}

namespace {

double measure_rec(const GaugeSequence& g, int n, int k, const Square& sq, double mass, Point c, double r) {
    const double half = 0.5 * sq.side;
    const double x0 = sq.center.x - half, x1 = sq.center.x + half;
    const double y0 = sq.center.y - half, y1 = sq.center.y + half;
    // Nearest and farthest points of the square from the center.
    const double nx = std::max({x0 - c.x, 0.0, c.x - x1}), ny = std::max({y0 - c.y, 0.0, c.y - y1});
    if (nx * nx + ny * ny >= r * r) return 0.0;
    const double fx = std::max(std::abs(x0 - c.x), std::abs(x1 - c.x));
    const double fy = std::max(std::abs(y0 - c.y), std::abs(y1 - c.y));
    if (fx * fx + fy * fy <= r * r) return mass;
    if (k == n) return mass * disk_rectangle_area(c, r, x0, x1, y0, y1) / (sq.side * sq.side);
    const ChildLayout layout = lambda_children(g, k + 1);
    double total = 0.0;
    for (const Point& off : layout.offsets) {
        total += measure_rec(g, n, k + 1, Square{sq.center + sq.side * off, sq.side * layout.relative_side},
                             0.25 * mass, c, r);
    }
    return total;
}

}  // namespace

double level_measure(const GaugeSequence& gauge, int n, Point center, double radius) {
    if (n < 0) throw DomainError("level must be non-negative");
    return measure_rec(gauge, n, 0, Square{{0.0, 0.0}, 1.0}, 1.0, center, radius);
}

std::vector<FrostmanSample> frostman_profile(const GaugeSequence& gauge, int n, double s, int samples,
                                             std::uint64_t seed) {
    if (!(s >= 0.0 && s < 2.0)) throw DomainError("frostman exponent must lie in [0, 2)");
    if (n < 0 || samples < 1) throw DomainError("frostman check needs n >= 0 and samples >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> quadrant(0, 3);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    std::vector<Point> centers;
    centers.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        Square sq{{0.0, 0.0}, 1.0};
        for (int k = 1; k <= n; ++k) {
            const ChildLayout layout = lambda_children(gauge, k);
            sq = Square{sq.center + sq.side * layout.offsets[static_cast<std::size_t>(quadrant(rng))],
                        sq.side * layout.relative_side};
        }
        centers.push_back(sq.center + sq.side * Point{unit(rng), unit(rng)});
    }
    const double smallest = std::ldexp(gauge(n), -n);
    std::vector<FrostmanSample> out;
    for (int m = 0;; ++m) {
        const double eps = std::ldexp(1.0, -m);
        if (eps < smallest) break;
        FrostmanSample fs{eps, 0.0};
        for (const Point& c : centers) {
            fs.max_ratio = std::max(fs.max_ratio, level_measure(gauge, n, c, eps) / std::pow(eps, s));
        }
        out.push_back(fs);
    }
    return out;
}

double frostman_check(const GaugeSequence& gauge, int n, double s, int samples, std::uint64_t seed) {
    double best = 0.0;
    for (const auto& fs : frostman_profile(gauge, n, s, samples, seed)) best = std::max(best, fs.max_ratio);
    return best;
}

double frostman_trend(const std::vector<FrostmanSample>& profile) {
    if (profile.size() < 2) return 0.0;
    double mx = 0, my = 0;
    for (const auto& p : profile) {
        mx += -std::log(p.radius);
        my += std::log(p.max_ratio);
    }
    mx /= profile.size();
    my /= profile.size();
    double sxx = 0, sxy = 0;
    for (const auto& p : profile) {
        const double x = -std::log(p.radius) - mx;
        sxx += x * x;
        sxy += x * (std::log(p.max_ratio) - my);
    }
    return sxy / sxx;
}

}  // namespace qcforge
