#include "qcforge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qcforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DepthRow depth_row(const HierarchicalMap& map, int n, Direction d, const DavidParams& params) {
    const HierarchicalMap m = map.truncated(n);
    const DilatationProfile p = dilatation_profile(m, ProfileSide::domain);
    DepthRow row;
    row.depth = n;
    row.direction = d;
    for (const auto& t : m.levels()) row.K = std::max(row.K, t.max_dilatation);
    row.david = check_david(p, params);
    row.conservation_error = std::abs(p.classified_area + p.truncation_bound - 1.0);
    return row;
}

}  // namespace

std::string to_string(ProfileSide side) { return side == ProfileSide::domain ? "domain" : "image"; }

double DilatationProfile::exceedance(double K) const {
    // Entries are ascending; the first threshold >= K has the same cells above it.
    auto it = std::lower_bound(entries.begin(), entries.end(), K,
                               [](const ProfileEntry& e, double k) { return e.K < k; });
    if (it == entries.end()) return 0.0;
    if (it->K == K) return it->exceedance_area;
    return it == entries.begin() ? classified_area : std::prev(it)->exceedance_area;
}

DilatationProfile dilatation_profile(const HierarchicalMap& map, ProfileSide side) {
    const Construction& c = side == ProfileSide::domain ? map.source() : map.target();
    std::vector<std::pair<double, double>> cells;
    DilatationProfile p;
    p.side = side;
    p.depth = map.depth();
    for (const auto& t : map.levels()) {
        const int k = t.level;
        // 4^{k-1} congruent gaskets, each in a square of side S_{k-1}.
        const double weight = std::exp(2.0 * c.log_side(k - 1) + (k - 1) * 2.0 * std::numbers::ln2);
        for (const Piece& piece : t.gasket.pieces()) {
            const double a = (side == ProfileSide::domain ? piece.cell.area() : piece.image_area()) * weight;
            cells.emplace_back(piece.dilatation, a);
        }
    }
    p.truncation_bound = std::exp(2.0 * c.log_side(map.depth()) + map.depth() * 2.0 * std::numbers::ln2);
    std::sort(cells.begin(), cells.end());
    double total = 0.0;
    for (const auto& [K, a] : cells) total += a;
    p.classified_area = total;
    if (cells.empty()) {
        p.entries.push_back({1.0, 0.0});
        return p;
    }
    // Sweep ascending: exceedance at a threshold is everything strictly above it.
    double below = 0.0;
    for (std::size_t i = 0; i < cells.size();) {
        std::size_t j = i;
        while (j < cells.size() && cells[j].first == cells[i].first) below += cells[j++].second;
        p.entries.push_back({cells[i].first, std::max(0.0, total - below)});
        i = j;
    }
    if (p.entries.front().K > 1.0) p.entries.insert(p.entries.begin(), {1.0, total});
    return p;
}

DavidVerdict check_david(const DilatationProfile& profile, const DavidParams& params) {
    DavidVerdict v;
    for (const ProfileEntry& e : profile.entries) {
        if (!(e.K > params.K0)) continue;
        ++v.thresholds_tested;
        const double lhs = e.exceedance_area + profile.truncation_bound;
        const double log_bound = std::log(params.C) - params.alpha * e.K;
        const double m = lhs > 0.0 ? log_bound - std::log(lhs) : kInf;
        if (m < v.margin || v.thresholds_tested == 1) {
            v.margin = m;
            v.worst_K = e.K;
        }
        if (lhs > std::exp(log_bound)) v.passed = false;
    }
    return v;
}

DavidParams fit_david(const DilatationProfile& profile) {
    std::vector<ProfileEntry> pos;
    for (const auto& e : profile.entries) {
        if (e.exceedance_area > 0.0) pos.push_back(e);
    }
    if (pos.size() < 3) throw DegenerateFitError("need at least three thresholds with positive area");
    const double median = pos[pos.size() / 2].K;
    std::vector<ProfileEntry> tail;
    for (const auto& e : pos) {
        if (e.K >= median) tail.push_back(e);
    }
    if (tail.size() < 2) tail = pos;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(tail.size());
    for (const auto& e : tail) {
        const double y = std::log(e.exceedance_area);
        sx += e.K;
        sy += y;
        sxx += e.K * e.K;
        sxy += e.K * y;
    }
    const double den = m * sxx - sx * sx;
    if (!(den > 0.0)) throw DegenerateFitError("thresholds do not spread");
    const double slope = (m * sxy - sx * sy) / den;
    const double intercept = (sy - slope * sx) / m;
    DavidParams p{std::exp(intercept), -slope, 1.0};
    if (!(p.alpha > 0.0) || !std::isfinite(p.C)) throw DegenerateFitError("exceedance does not decay");

    p.K0 = profile.max_threshold();
    for (auto it = profile.entries.rbegin(); it != profile.entries.rend(); ++it) {
        DavidParams trial = p;
        trial.K0 = it->K;
        if (!check_david(profile, trial).passed) break;
        p.K0 = it->K;
    }
    return p;
}

std::pair<double, double> qc_dimension_bounds(double K, double alpha) {
    if (!(K >= 1.0)) throw DomainError("K must be at least 1");
    if (!(alpha >= 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in [0, 2]");
    if (alpha == 0.0) return {0.0, 0.0};
    if (K == 1.0) return {alpha, alpha};
    const double lo = 2.0 * alpha / (2.0 * K - (K - 1.0) * alpha);
    const double hi = 2.0 * K * alpha / (2.0 + (K - 1.0) * alpha);
    return {lo, hi};
}

double p_of_K(double K) {
    if (!(K > 1.0)) throw DomainError("p(K) needs K > 1");
    return K / (K - 1.0);
}

ScenarioSpec ScenarioSpec::parse(const std::string& text) {
    ScenarioSpec s;
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (colon != std::string::npos) {
        try {
            std::size_t used = 0;
            s.nu = std::stod(text.substr(colon + 1), &used);
            if (used != text.size() - colon - 1) throw DomainError("bad scenario parameter");
        } catch (const std::logic_error&) {
            throw DomainError("bad scenario parameter in '" + text + "'");
        }
        if (!(s.nu > 0.0)) throw DomainError("scenario parameter must be positive");
    }
    if (head == "slow-to-geometric") {
        s.kind = TheoremACase::slow_to_geometric;
    } else if (head == "geometric-to-fast") {
        s.kind = TheoremACase::geometric_to_fast;
    } else if (head == "slow-to-fast" && colon == std::string::npos) {
        s.kind = TheoremACase::slow_to_fast;
    } else {
        throw DomainError("unknown scenario '" + text + "'");
    }
    return s;
}

std::string ScenarioSpec::describe() const {
    switch (kind) {
        case TheoremACase::slow_to_geometric: return "slow-to-" + GaugeSequence::geometric(nu).describe();
        case TheoremACase::geometric_to_fast: return GaugeSequence::geometric(nu).describe() + "-to-fast";
        case TheoremACase::slow_to_fast: return "slow-to-fast";
    }
    return {};
}

GaugeSequence ScenarioSpec::source() const {
    return kind == TheoremACase::geometric_to_fast ? GaugeSequence::geometric(nu) : GaugeSequence::slow();
}

GaugeSequence ScenarioSpec::target() const {
    return kind == TheoremACase::slow_to_geometric ? GaugeSequence::geometric(nu) : GaugeSequence::fast();
}

double ScenarioSpec::rate(int k) const {
    const double lk = std::log(static_cast<double>(k));
    const double pk = std::pow(static_cast<double>(k), std::numbers::ln2);
    switch (kind) {
        case TheoremACase::slow_to_geometric: return lk;
        case TheoremACase::geometric_to_fast: return pk;
        case TheoremACase::slow_to_fast: return pk * lk;
    }
    return 1.0;
}

double frozen_K0(const ScenarioSpec& scenario, Direction direction) {
    // Smallest K0 passing at every depth 3..64 for ν = 1. Slow-to-fast and the
    // Σ map have no such constant below depth 64; theirs cover depths <= 12.
    if (scenario.kind != TheoremACase::slow_to_fast && scenario.nu != 1.0) {
        throw DomainError("no frozen K0 for " + scenario.describe());
    }
    const bool fwd = direction == Direction::forward;
    switch (scenario.kind) {
        case TheoremACase::slow_to_geometric: return fwd ? 10.26 : 4.20;
        case TheoremACase::geometric_to_fast: return fwd ? 26.36 : 1.92;
        case TheoremACase::slow_to_fast: return 97.41;
    }
    return 1.0;
}

double frozen_K0_theoremB(Direction) { return 450.77; }

bool ScenarioReport::all_passed() const {
    return std::all_of(depths.begin(), depths.end(), [](const DepthRow& r) { return r.david.passed; });
}

ScenarioReport theoremA_report(const ScenarioSpec& scenario, int n_max, int dimension_N) {
    if (n_max < 3) throw DomainError("n_max must be at least 3");
    ScenarioReport r;
    r.scenario = scenario.describe();
    r.n_max = n_max;
    const HierarchicalMap fwd = standard_homeo(scenario.source(), scenario.target(), n_max);
    const HierarchicalMap inv = invert(fwd);
    for (const auto& [k, K] : max_dilatation_per_level(fwd)) r.forward_levels.push_back({k, K, K / scenario.rate(k)});
    for (const auto& [k, K] : max_dilatation_per_level(inv)) r.inverse_levels.push_back({k, K, K / scenario.rate(k)});
    for (int n = 3; n <= n_max; ++n) {
        for (Direction d : {Direction::forward, Direction::inverse}) {
            const DavidParams params{1.0, 1.0, frozen_K0(scenario, d)};
            r.depths.push_back(depth_row(d == Direction::forward ? fwd : inv, n, d, params));
        }
    }
    r.source_dimension = dimension_bounds(scenario.source(), dimension_N);
    r.target_dimension = dimension_bounds(scenario.target(), dimension_N);
    return r;
}

CurveRow curve_dimension(int n) {
    CurveRow row;
    row.depth = n;
    row.squares = curve_square_count(theoremB_homeo(0), n);
    const Construction target = Construction::lambda(GaugeSequence::sqrt());
    row.estimate = n == 0 ? 1.0 : std::log(static_cast<double>(row.squares)) / -target.log_side(n);
    row.expected = n == 0 ? 1.0 : 2.0 / (1.0 + 1.0 / std::sqrt(static_cast<double>(n)));
    return row;
}

bool TheoremBReport::all_passed() const {
    return std::all_of(depths.begin(), depths.end(), [](const DepthRow& r) { return r.david.passed; });
}

TheoremBReport theoremB_report(int n_max, const std::vector<int>& curve_depths) {
    if (n_max < 1) throw DomainError("n_max must be positive");
    TheoremBReport r;
    r.n_max = n_max;
    const HierarchicalMap fwd = theoremB_homeo(n_max);
    const HierarchicalMap inv = invert(fwd);
    for (const auto& [k, K] : max_dilatation_per_level(fwd)) {
        r.levels.push_back({k, K, K / std::sqrt(static_cast<double>(k))});
        r.twist_parameters.push_back(twist_parameter(k));
    }
    for (int n = 1; n <= n_max; ++n) {
        for (Direction d : {Direction::forward, Direction::inverse}) {
            const DavidParams params{1.0, 1.0, frozen_K0_theoremB(d)};
            r.depths.push_back(depth_row(d == Direction::forward ? fwd : inv, n, d, params));
        }
    }
    for (int n : curve_depths) r.curve.push_back(curve_dimension(n));
    return r;
}

}  // namespace qcforge
