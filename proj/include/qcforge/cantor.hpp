#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcforge/geometry.hpp"

namespace qcforge {

enum class GaugeKind { geometric, slow, fast, sqrt, custom };

/// Strictly decreasing side-length gauge {d_n} with d_0 = 1.
///
/// Builtin kinds (natural logarithms throughout):
///   geometric(ν): d_n = 2^(-ν n)
///   slow:         d_n = 2^(-n / log(n + e))
///   fast:         d_n = 2^(-n log(n + 1))
///   sqrt:         d_n = 2^(-√n)
class GaugeSequence {
public:
    static GaugeSequence geometric(double nu);
    static GaugeSequence slow();
    static GaugeSequence fast();
    static GaugeSequence sqrt();
    static GaugeSequence custom(std::vector<double> table);

    /// Parses "geometric:1", "slow", "fast", "sqrt".
    static GaugeSequence parse(const std::string& spec);

    GaugeKind kind() const { return kind_; }
    double parameter() const { return nu_; }
    /// Canonical text form, inverse of parse() for builtin kinds.
    std::string describe() const;

    double operator()(int n) const;
    /// Natural log of d_n; exact for builtin kinds even where d_n underflows.
    double log_value(int n) const;
    /// d_n / d_{n-1} for n >= 1.
    double ratio(int n) const;
    /// Boundary inset a_n = 2^-(n+1) (d_{n-1} - d_n), n >= 1.
    double inset(int n) const;
    /// Largest n the gauge can evaluate (custom tables are finite).
    int max_index() const;

    friend bool operator==(const GaugeSequence&, const GaugeSequence&) = default;

private:
    GaugeKind kind_ = GaugeKind::geometric;
    double nu_ = 1.0;
    std::vector<double> table_;
};

/// Depth limit for materialized square lists: QCFORGE_DEPTH_GUARD or 14.
int depth_guard();

struct Square {
    Point center;
    double side = 0.0;
};

enum class CantorFamily { lambda, sigma };

/// Finite stage Λ_n or Σ_n. Square i has base-4 digit path i (most
/// significant digit = level-1 choice). Λ children are ordered NW, SW, NE, SE;
/// Σ children left to right.
struct CantorLevel {
    CantorFamily family = CantorFamily::lambda;
    int level = 0;
    double side = 1.0;
    std::vector<Square> squares;

    double total_area() const { return static_cast<double>(squares.size()) * side * side; }
};

/// Relative position of the children of a unit square centered at the origin.
struct ChildLayout {
    std::array<Point, 4> offsets;
    double relative_side = 0.5;
};

ChildLayout lambda_children(const GaugeSequence& gauge, int n);
ChildLayout sigma_children();

CantorLevel build_level(const GaugeSequence& gauge, int n);
CantorLevel build_sigma_level(int n);

enum class DimensionMethod { lemma_bounds, box_counting };

struct DimensionEstimate {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    DimensionMethod method = DimensionMethod::lemma_bounds;
    std::vector<double> scales_used;
    std::vector<double> counts;
};

/// Finite-N reading of the limsup/liminf bounds: both limits are replaced by
/// the max/min over the tail window [N - N/4, N].
DimensionEstimate dimension_bounds(const GaugeSequence& gauge, int N);

/// Point set described either by squares or by a polyline, at one depth.
struct BoxSample {
    double scale = 0.0;
    std::vector<Square> squares;
    std::vector<Point> polyline;
};

/// Number of origin-anchored grid boxes of size `scale` whose interior meets
/// the set (squares: positive-area overlap; polylines: any crossing).
std::uint64_t count_boxes(const BoxSample& sample);

/// Least-squares slope of log(count) against -log(scale) over the depths.
DimensionEstimate box_dimension(const std::function<BoxSample(int)>& source, const std::vector<int>& depths);

BoxSample box_sample(const CantorLevel& level);

/// log(4^n) / -log(side): the cover-count estimate at a single level.
double pointwise_dimension(const CantorLevel& level);

/// Area of the intersection of a disk with an axis-aligned rectangle.
double disk_rectangle_area(Point center, double radius, double x0, double x1, double y0, double y1);

/// Level-n uniform measure of a disk (mass 4^-n per square, spread by area).
double level_measure(const GaugeSequence& gauge, int n, Point center, double radius);

struct FrostmanSample {
    double radius = 0.0;
    double max_ratio = 0.0;
};

/// Per dyadic radius ε in [2^-n d_n, 1], the max over sampled centers of μ(D(x, ε)) / ε^s.
std::vector<FrostmanSample> frostman_profile(const GaugeSequence& gauge, int n, double s, int samples,
                                             std::uint64_t seed);

/// Max over the profile.
double frostman_check(const GaugeSequence& gauge, int n, double s, int samples, std::uint64_t seed = 1);

/// Least-squares slope of log(max ratio) against log(1/ε); <= 0 means bounded.
double frostman_trend(const std::vector<FrostmanSample>& profile);

}  // namespace qcforge
