#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qcforge/cantor.hpp"
#include "qcforge/homeo.hpp"

namespace qcforge {

enum class ProfileSide { domain, image };

std::string to_string(ProfileSide side);

struct ProfileEntry {
    double K = 1.0;
    /// Area of the cells whose dilatation is strictly greater than K.
    double exceedance_area = 0.0;
};

/// Exceedance areas area{K_φ > K} at the distinct cell dilatations, plus the
/// area of the deepest-level squares where nothing has been classified yet.
struct DilatationProfile {
    ProfileSide side = ProfileSide::domain;
    std::vector<ProfileEntry> entries;  // ascending K
    double truncation_bound = 0.0;
    double classified_area = 0.0;
    int depth = 0;

    double exceedance(double K) const;
    double max_threshold() const { return entries.empty() ? 1.0 : entries.back().K; }
};

DilatationProfile dilatation_profile(const HierarchicalMap& map, ProfileSide side);

struct DavidParams {
    double C = 1.0;
    double alpha = 1.0;
    double K0 = 1.0;
};

struct DavidVerdict {
    bool passed = true;
    /// min over tested thresholds of log(C e^{-αK} / (area + truncation)); +inf when none tested.
    double margin = std::numeric_limits<double>::infinity();
    int thresholds_tested = 0;
    /// Threshold attaining the margin (0 when none tested).
    double worst_K = 0.0;
};

/// area + truncation <= C e^{-αK} at every threshold K > K0.
DavidVerdict check_david(const DilatationProfile& profile, const DavidParams& params);

/// Log-linear least squares over the thresholds above the median of those
/// with positive area; K0 is the smallest threshold past which the fitted
/// bound holds.
DavidParams fit_david(const DilatationProfile& profile);

/// Dimension interval reachable from α under a K-quasiconformal map.
std::pair<double, double> qc_dimension_bounds(double K, double alpha);

double p_of_K(double K);

enum class TheoremACase { slow_to_geometric, geometric_to_fast, slow_to_fast };

struct ScenarioSpec {
    TheoremACase kind = TheoremACase::slow_to_geometric;
    double nu = 1.0;

    /// Parses "slow-to-geometric:1", "geometric-to-fast:1", "slow-to-fast".
    static ScenarioSpec parse(const std::string& text);
    std::string describe() const;
    GaugeSequence source() const;
    GaugeSequence target() const;
    /// Growth rate the level-k dilatation is compared against.
    double rate(int k) const;
};

/// Measured K0 for the (C, α) = (1, 1) check, per scenario and direction.
double frozen_K0(const ScenarioSpec& scenario, Direction direction);
double frozen_K0_theoremB(Direction direction);

struct LevelRow {
    int level = 0;
    double K = 1.0;
    double ratio = 0.0;  // K / rate(level)
};

struct DepthRow {
    int depth = 0;
    Direction direction = Direction::forward;
    double K = 1.0;  // running max up to this depth
    DavidVerdict david;
    double conservation_error = 0.0;
};

struct ScenarioReport {
    std::string scenario;
    int n_max = 0;
    std::vector<LevelRow> forward_levels, inverse_levels;
    std::vector<DepthRow> depths;
    DimensionEstimate source_dimension, target_dimension;

    bool all_passed() const;
};

/// Level rows 1..n_max; David rows at depths 3..n_max, both directions.
ScenarioReport theoremA_report(const ScenarioSpec& scenario, int n_max, int dimension_N = 400);

struct CurveRow {
    int depth = 0;
    std::uint64_t squares = 0;
    double estimate = 0.0;
    double expected = 0.0;
};

struct TheoremBReport {
    int n_max = 0;
    std::vector<LevelRow> levels;  // ratio = K / √k
    std::vector<double> twist_parameters;
    std::vector<DepthRow> depths;
    std::vector<CurveRow> curve;

    bool all_passed() const;
};

/// Curve dimension estimate log(count) / -log(2^{-n} d_n) from the congruence count.
CurveRow curve_dimension(int n);

TheoremBReport theoremB_report(int n_max, const std::vector<int>& curve_depths);

}  // namespace qcforge
