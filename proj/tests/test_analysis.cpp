#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qcforge/analysis.hpp"

using namespace qcforge;

namespace {

// Pointwise dilatation from central differences of evaluate; NaN when the
// stencil straddles a cell edge (one-sided quotients disagree).
double sampled_dilatation(const HierarchicalMap& m, Point z, double h) {
    const Point f0 = m.evaluate(z).value;
    const Point fx = m.evaluate(z + Point{h, 0}).value, bx = m.evaluate(z - Point{h, 0}).value;
    const Point fy = m.evaluate(z + Point{0, h}).value, by = m.evaluate(z - Point{0, h}).value;
    const Point dxp = (1.0 / h) * (fx - f0), dxm = (1.0 / h) * (f0 - bx);
    const Point dyp = (1.0 / h) * (fy - f0), dym = (1.0 / h) * (f0 - by);
    const double scale = std::max(std::hypot(dxp.x, dxp.y), std::hypot(dyp.x, dyp.y));
    if (distance(dxp, dxm) > 1e-5 * scale || distance(dyp, dym) > 1e-5 * scale) return std::nan("");
    return oracle::singular_ratio(dxp.x, dyp.x, dxp.y, dyp.y);
}

}  // namespace

TEST_CASE("profile conservation and monotonicity") {
    for (const auto& m : {standard_homeo(GaugeSequence::slow(), GaugeSequence::geometric(1.0), 10),
                          standard_homeo(GaugeSequence::geometric(1.0), GaugeSequence::fast(), 10),
                          standard_homeo(GaugeSequence::slow(), GaugeSequence::fast(), 10), theoremB_homeo(10)}) {
        for (const auto& map : {m, invert(m)}) {
            for (ProfileSide side : {ProfileSide::domain, ProfileSide::image}) {
                const auto p = dilatation_profile(map, side);
                CHECK(std::abs(p.classified_area + p.truncation_bound - 1.0) <= 1e-9);
                REQUIRE_FALSE(p.entries.empty());
                CHECK(p.entries.front().exceedance_area <= p.classified_area + 1e-15);
                for (std::size_t i = 1; i < p.entries.size(); ++i) {
                    REQUIRE(p.entries[i].K > p.entries[i - 1].K);
                    REQUIRE(p.entries[i].exceedance_area <= p.entries[i - 1].exceedance_area);
                }
                CHECK(p.entries.back().exceedance_area == 0.0);
                CHECK(p.exceedance(1e300) == 0.0);
            }
        }
    }
}

TEST_CASE("truncation bound is the area of the deepest squares") {
    const auto g = GaugeSequence::slow();
    for (int n : {1, 4, 8}) {
        const auto p = dilatation_profile(standard_homeo(g, GaugeSequence::fast(), n), ProfileSide::domain);
        CHECK(p.truncation_bound == doctest::Approx(build_level(g, n).total_area()).epsilon(1e-12));
        const auto q = dilatation_profile(standard_homeo(g, GaugeSequence::fast(), n), ProfileSide::image);
        CHECK(q.truncation_bound == doctest::Approx(build_level(GaugeSequence::fast(), n).total_area()).epsilon(1e-12));
    }
}

TEST_CASE("image side equals the domain side of the inverse") {
    const auto m = standard_homeo(GaugeSequence::slow(), GaugeSequence::fast(), 9);
    const auto a = dilatation_profile(m, ProfileSide::image);
    const auto b = dilatation_profile(invert(m), ProfileSide::domain);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].K == b.entries[i].K);
        CHECK(a.entries[i].exceedance_area == doctest::Approx(b.entries[i].exceedance_area).epsilon(1e-12));
    }
}

TEST_CASE("exceedance agrees with Monte Carlo sampling") {
    const auto m = standard_homeo(GaugeSequence::slow(), GaugeSequence::geometric(1.0), 6);
    const auto p = dilatation_profile(m, ProfileSide::domain);
    const auto deepest = build_level(GaugeSequence::slow(), 6);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<double> ks;
    int skipped = 0;
    while (ks.size() < 20000) {
        const Point z{u(rng), u(rng)};
        if (oracle::locate_square(deepest, z) >= 0) {
            ks.push_back(1.0);  // unclassified area is tracked by the truncation bound
            continue;
        }
        const double k = sampled_dilatation(m, z, 1e-9);
        if (std::isnan(k)) {
            ++skipped;
            continue;
        }
        ks.push_back(k);
    }
    CHECK(skipped < 200);
    for (double t : {1.5, 2.0, 3.0, 5.0}) {
        const double frac = std::count_if(ks.begin(), ks.end(), [&](double k) { return k > t * (1.0 + 1e-6); }) /
                            static_cast<double>(ks.size());
        CHECK(std::abs(frac - p.exceedance(t)) <= 0.015);
    }
}

TEST_CASE("dilatation above the running maximum lives inside the level squares") {
    const auto g = GaugeSequence::slow();
    const auto m = standard_homeo(g, GaugeSequence::geometric(1.0), 12);
    const auto p = dilatation_profile(m, ProfileSide::domain);
    double running = 1.0;
    for (int j = 1; j <= 12; ++j) {
        running = std::max(running, m.level(j).max_dilatation);
        CHECK(p.exceedance(running) <= build_level(g, j).total_area() * (1.0 + 1e-12));
    }
}

TEST_CASE("deeper profiles refine shallower ones") {
    const auto g = GaugeSequence::geometric(1.0), h = GaugeSequence::fast();
    const auto shallow = dilatation_profile(standard_homeo(g, h, 6), ProfileSide::domain);
    const auto deep = dilatation_profile(standard_homeo(g, h, 9), ProfileSide::domain);
    CHECK(deep.truncation_bound < shallow.truncation_bound);
    for (const auto& e : shallow.entries) {
        // new levels only add area, and only at the cost of the truncated squares
        CHECK(deep.exceedance(e.K) >= e.exceedance_area - 1e-15);
        CHECK(deep.exceedance(e.K) <= e.exceedance_area + shallow.truncation_bound + 1e-15);
    }
}

TEST_CASE("check_david is monotone in its parameters") {
    const auto p = dilatation_profile(standard_homeo(GaugeSequence::slow(), GaugeSequence::geometric(1.0), 12),
                                      ProfileSide::domain);
    const auto base = check_david(p, {1.0, 1.0, 2.0});
    CHECK(check_david(p, {2.0, 1.0, 2.0}).margin >= base.margin);
    CHECK(check_david(p, {1.0, 0.5, 2.0}).margin >= base.margin);
    CHECK(check_david(p, {1.0, 1.0, 4.0}).margin >= base.margin);
    CHECK(check_david(p, {1.0, 1.0, 4.0}).thresholds_tested <= base.thresholds_tested);

    const auto none = check_david(p, {1.0, 1.0, 1e9});
    CHECK(none.passed);
    CHECK(none.thresholds_tested == 0);
    CHECK(std::isinf(none.margin));

    const auto strict = check_david(p, {1.0, 1.0, 1.0});
    CHECK(strict.thresholds_tested > 0);
    CHECK(strict.passed == (strict.margin >= 0.0));
    const double bound = std::exp(-strict.worst_K);
    CHECK(strict.margin == doctest::Approx(std::log(bound / (p.exceedance(strict.worst_K) + p.truncation_bound))));
}

TEST_CASE("fit_david recovers an exact exponential") {
    DilatationProfile p;
    for (int i = 0; i <= 20; ++i) {
        const double K = 1.0 + 0.5 * i;
        p.entries.push_back({K, std::exp(-K)});
    }
    p.classified_area = 1.0;
    const auto fit = fit_david(p);
    CHECK(fit.C == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.alpha == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(check_david(p, fit).passed);

    DilatationProfile flat;
    flat.entries = {{1.0, 0.5}, {2.0, 0.0}};
    CHECK_THROWS_AS(fit_david(flat), DegenerateFitError);
    DilatationProfile rising;
    for (int i = 0; i < 10; ++i) rising.entries.push_back({1.0 + i, 0.01 * (i + 1)});
    CHECK_THROWS_AS(fit_david(rising), DegenerateFitError);
}

TEST_CASE("qc dimension bounds") {
    const auto [lo, hi] = qc_dimension_bounds(2.0, 1.0);
    CHECK(lo == doctest::Approx(2.0 / 3.0));
    CHECK(hi == doctest::Approx(4.0 / 3.0));
    const auto [a, b] = qc_dimension_bounds(1.0, 1.3);
    CHECK(a == 1.3);
    CHECK(b == 1.3);
    CHECK(qc_dimension_bounds(5.0, 0.0) == std::pair{0.0, 0.0});
    const auto [c, d] = qc_dimension_bounds(7.0, 2.0);
    CHECK(c == doctest::Approx(2.0));
    CHECK(d == doctest::Approx(2.0));
    // the interval grows with K
    for (double alpha : {0.3, 1.0, 1.7}) {
        double prev_lo = alpha, prev_hi = alpha;
        for (double K : {1.0, 1.5, 3.0, 10.0}) {
            const auto [l, h] = qc_dimension_bounds(K, alpha);
            CHECK(l <= prev_lo + 1e-15);
            CHECK(h >= prev_hi - 1e-15);
            CHECK(l <= alpha);
            CHECK(h <= 2.0);
            prev_lo = l;
            prev_hi = h;
        }
    }
    CHECK_THROWS_AS(qc_dimension_bounds(0.5, 1.0), DomainError);
    CHECK_THROWS_AS(qc_dimension_bounds(2.0, 2.5), DomainError);
    CHECK_THROWS_AS(qc_dimension_bounds(2.0, -0.1), DomainError);
}

TEST_CASE("critical exponent") {
    CHECK(p_of_K(2.0) == 2.0);
    CHECK(p_of_K(3.0) == doctest::Approx(1.5));
    for (double K : {1.5, 2.0, 4.0}) CHECK(p_of_K(p_of_K(K)) == doctest::Approx(K).epsilon(1e-14));
    CHECK_THROWS_AS(p_of_K(1.0), DomainError);
    CHECK_THROWS_AS(p_of_K(0.9), DomainError);
}

TEST_CASE("scenario parsing") {
    const auto a = ScenarioSpec::parse("slow-to-geometric:1");
    CHECK(a.kind == TheoremACase::slow_to_geometric);
    CHECK(a.source() == GaugeSequence::slow());
    CHECK(a.target() == GaugeSequence::geometric(1.0));
    CHECK(ScenarioSpec::parse(a.describe()).describe() == a.describe());
    const auto b = ScenarioSpec::parse("geometric-to-fast:2");
    CHECK(b.nu == 2.0);
    CHECK(b.target() == GaugeSequence::fast());
    CHECK(ScenarioSpec::parse("slow-to-fast").kind == TheoremACase::slow_to_fast);
    CHECK_THROWS_AS(ScenarioSpec::parse("fast-to-slow"), DomainError);
    CHECK_THROWS_AS(ScenarioSpec::parse("slow-to-geometric:-1"), DomainError);
    CHECK_THROWS_AS(frozen_K0(b, Direction::forward), DomainError);
}

TEST_CASE("growth rates stay in their bands") {
    struct Band {
        const char* name;
        double lo, hi;
    };
    for (const Band& band : {Band{"slow-to-geometric:1", 3.0, 4.2}, Band{"geometric-to-fast:1", 1.8, 3.6},
                             Band{"slow-to-fast", 6.0, 7.5}}) {
        const auto r = theoremA_report(ScenarioSpec::parse(band.name), 14);
        for (const auto* rows : {&r.forward_levels, &r.inverse_levels}) {
            for (const auto& row : *rows) {
                if (row.level < 3) continue;
                CHECK(row.ratio >= band.lo);
                CHECK(row.ratio <= band.hi);
            }
        }
    }
}

TEST_CASE("reports with the frozen constants") {
    for (const char* name : {"slow-to-geometric:1", "geometric-to-fast:1", "slow-to-fast"}) {
        const auto r = theoremA_report(ScenarioSpec::parse(name), 12);
        CHECK(r.all_passed());
        CHECK(r.depths.size() == 2 * (12 - 3 + 1));
        for (const auto& d : r.depths) CHECK(d.conservation_error <= 1e-9);
    }
    const auto b = theoremB_report(12, {4, 9, 16});
    CHECK(b.all_passed());
    for (const auto& c : b.curve) CHECK(c.estimate == doctest::Approx(c.expected).epsilon(1e-12));
    CHECK(b.curve[2].squares == (std::uint64_t{1} << 32));
    CHECK_THROWS_AS(theoremA_report(ScenarioSpec::parse("slow-to-fast"), 2), DomainError);
}
