#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qcforge/qcmaps.hpp"

using namespace qcforge;

namespace {

// Comparability bands measured on the implemented decompositions.
constexpr double kAnnulusLo = 0.99, kAnnulusHi = 2.0;
constexpr double kTwistLo = 4.5, kTwistHi = 11.5;

double annulus_target(double b) { return 1.0 - (1.0 - 2.0 * b) * (1.0 - 2.0 * b); }
double twist_target(double a) { return 0.5 - 2.0 * (0.5 - 2.0 * a) * (0.5 - 2.0 * a); }

}  // namespace

TEST_CASE("identity annulus") {
    const auto m = annulus_extension(0.1, 0.1);
    const auto r = validate(m, annulus_target(0.1));
    CHECK(r.ok(1e-12));
    CHECK(r.surjective_area_defect < 1e-12);
    CHECK(m.max_dilatation() == 1.0);
    for (const Piece& p : m.pieces()) CHECK(p.map == AffineMap::identity());
}

TEST_CASE("annulus examples") {
    const auto m = annulus_extension(0.1, 0.3);
    CHECK(annulus_bound(0.1, 0.3) == doctest::Approx(6.0));
    const auto r = validate(m, annulus_target(0.3));
    CHECK(r.continuous);
    CHECK(r.oriented);
    CHECK(r.boundary_ok);
    CHECK(r.surjective_area_defect < 1e-9);
    CHECK(m.domain_area() == doctest::Approx(1.0 - 0.64));
    CHECK(m.max_dilatation() / 6.0 >= kAnnulusLo);
    CHECK(m.max_dilatation() / 6.0 <= kAnnulusHi);
    CHECK(m.pieces().size() == 8);

    CHECK(annulus_bound(0.05, 0.45) == doctest::Approx(81.0));
    const double k = annulus_extension(0.05, 0.45).max_dilatation();
    CHECK(k / 81.0 >= kAnnulusLo);
    CHECK(k / 81.0 <= kAnnulusHi);
}

TEST_CASE("annulus parameter checks") {
    CHECK_THROWS_AS(annulus_extension(0.3, 0.1), DomainError);
    CHECK_THROWS_AS(annulus_extension(0.0, 0.1), DomainError);
    CHECK_THROWS_AS(annulus_extension(0.1, 0.5), DomainError);
    CHECK_THROWS_AS(annulus_extension(-0.1, 0.2), DomainError);
}

TEST_CASE("annulus comparability over the grid") {
    double lo = 1e300, hi = 0.0;
    for (int i = 1; i <= 9; ++i) {
        double previous = 0.0;
        for (int j = i; j <= 9; ++j) {
            const double a = 0.05 * i, b = 0.05 * j;
            const auto m = annulus_extension(a, b);
            REQUIRE(validate(m, annulus_target(b)).ok(1e-9));
            const double ratio = m.max_dilatation() / annulus_bound(a, b);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            // nondecreasing in b
            REQUIRE(m.max_dilatation() >= previous);
            previous = m.max_dilatation();
        }
    }
    CHECK(lo >= kAnnulusLo);
    CHECK(hi <= kAnnulusHi);
    CHECK(hi / lo <= 16.0);
}

TEST_CASE("annulus dilatation matches the singular value oracle cell by cell") {
    const auto m = annulus_extension(0.07, 0.33);
    for (const Piece& p : m.pieces()) CHECK(p.dilatation == doctest::Approx(oracle::singular_ratio(p.map)).epsilon(1e-10));
}

TEST_CASE("twist comparability") {
    double lo = 1e300, hi = 0.0;
    for (int i = 1; i <= 9; ++i) {
        const double a = 0.02 * i;
        const auto m = twist_extension(a);
        const auto r = validate(m, twist_target(a), 1e-9);
        REQUIRE(r.continuous);
        REQUIRE(r.oriented);
        REQUIRE(r.boundary_ok);
        REQUIRE(r.surjective_area_defect <= 1e-9);
        lo = std::min(lo, m.max_dilatation() * a);
        hi = std::max(hi, m.max_dilatation() * a);
    }
    const double top = twist_extension(0.19).max_dilatation() * 0.19;
    lo = std::min(lo, top);
    hi = std::max(hi, top);
    CHECK(lo >= kTwistLo);
    CHECK(hi <= kTwistHi);
    CHECK(hi / lo <= 16.0);

    const double k = twist_extension(0.1).max_dilatation();
    CHECK(k * 0.1 >= kTwistLo);
    CHECK(k * 0.1 <= kTwistHi);
}

TEST_CASE("twist boundary correspondence") {
    const double a = 0.08;
    const auto m = twist_extension(a);
    const double h = 0.5 - 2.0 * a;
    const auto& holes = m.boundary().holes;
    REQUIRE(holes.size() == 2);
    CHECK(holes[0].src_center == Point{0.125, 0.0});
    CHECK(holes[0].dst_center == Point{0.25, 0.25});
    CHECK(holes[1].src_center == Point{0.375, 0.0});
    CHECK(holes[1].dst_center == Point{0.25, -0.25});
    CHECK(holes[0].dst_side == doctest::Approx(h));

    // hole corners go to hole corners, so horizontal and vertical sides are preserved
    for (const auto& hole : holes) {
        const AffineMap s = hole.similarity();
        for (double sx : {-0.5, 0.5}) {
            for (double sy : {-0.5, 0.5}) {
                const Point corner = hole.src_center + hole.src_side * Point{sx, sy};
                const Point image = m.apply(corner);
                CHECK(distance(image, s(corner)) < 1e-12);
                CHECK(distance(image, hole.dst_center + hole.dst_side * Point{sx, sy}) < 1e-12);
            }
        }
    }
    // the outer boundary is fixed
    for (const Point& p : {Point{0.0, 0.3}, Point{0.5, -0.2}, Point{0.2, 0.5}, Point{0.4, -0.5}}) {
        CHECK(distance(m.apply(p), p) < 1e-12);
    }
}

TEST_CASE("twist parameter checks") {
    CHECK_THROWS_AS(twist_extension(0.0), DomainError);
    CHECK_THROWS_AS(twist_extension(0.2), DomainError);
    CHECK_THROWS_AS(twist_extension(0.25), DomainError);
}

TEST_CASE("a flipped cell is reported") {
    const auto m = annulus_extension(0.1, 0.2);
    std::vector<Piece> pieces = m.pieces();
    const AffineMap flip{1.0, 0.0, 0.0, -1.0, 0.0, 0.0};
    pieces[3] = Piece::from_map(pieces[3].cell, flip);
    const PiecewiseAffineMap broken(m.domain_kind(), m.params(), pieces, m.boundary());
    const auto r = validate(broken, annulus_target(0.2));
    CHECK_FALSE(r.oriented);
    CHECK_FALSE(r.ok(1e-9));
    CHECK(std::isinf(broken.max_dilatation()));
}

TEST_CASE("a torn map is reported") {
    const auto m = annulus_extension(0.1, 0.2);
    std::vector<Piece> pieces = m.pieces();
    const auto& v = pieces[0].cell.vertices();
    std::array<Point, 3> img = pieces[0].image;
    img[0] = img[0] + Point{1e-3, 0.0};
    pieces[0] = Piece::from_points(v, img);
    const PiecewiseAffineMap torn(m.domain_kind(), m.params(), pieces, m.boundary());
    CHECK_FALSE(validate(torn, annulus_target(0.2)).continuous);
}

TEST_CASE("inverses validate with identical dilatation") {
    for (const auto& m : {annulus_extension(0.1, 0.3), annulus_extension(0.05, 0.45), twist_extension(0.06)}) {
        const auto inv = m.inverted();
        const auto r = validate(inv, m.domain_area(), 1e-9);
        CHECK(r.ok(1e-9));
        CHECK(inv.max_dilatation() == m.max_dilatation());
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            // random point in a random cell
            const Piece& p = m.pieces()[rng() % m.pieces().size()];
            double s = u(rng), t = u(rng);
            if (s + t > 1.0) {
                s = 1.0 - s;
                t = 1.0 - t;
            }
            const Point z = p.cell[0] + s * (p.cell[1] - p.cell[0]) + t * (p.cell[2] - p.cell[0]);
            REQUIRE(distance(inv.apply(m.apply(z)), z) < 1e-12);
        }
    }
}

TEST_CASE("placing a map conjugates by similarities") {
    const auto m = annulus_extension(0.1, 0.25);
    const AffineMap src = AffineMap::scaling_about({0, 0}, {3.0, -1.0}, 0.25);
    const auto placed = m.placed(src, src);
    CHECK(placed.max_dilatation() == m.max_dilatation());
    CHECK(validate(placed, annulus_target(0.25) / 16.0).ok(1e-12));
    CHECK(distance(placed.apply(src({0.3, 0.35})), src(m.apply({0.3, 0.35}))) < 1e-14);
}

TEST_CASE("composition of two annulus maps") {
    const auto first = annulus_extension(0.1, 0.2);
    const auto second = annulus_extension(0.2, 0.3);
    const auto both = compose_maps(first, second, DomainKind::composite, {0.1, 0.3});
    CHECK(validate(both, annulus_target(0.3)).ok(1e-9));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    int tested = 0;
    while (tested < 300) {
        const Point z{u(rng), u(rng)};
        if (std::max(std::abs(z.x), std::abs(z.y)) < 0.4) continue;
        ++tested;
        REQUIRE(distance(both.apply(z), second.apply(first.apply(z))) < 1e-12);
    }
}

TEST_CASE("convex clipping") {
    const std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const std::vector<Point> tri{{0.5, -1}, {2, 0.5}, {0.5, 2}};
    const auto piece = clip_convex(square, tri);
    // the triangle covers exactly the right half of the square
    CHECK(oracle::polygon_area(piece) == doctest::Approx(0.5));
    CHECK(clip_convex(square, {{5, 5}, {6, 5}, {5, 6}}).empty());
    CHECK(oracle::polygon_area(clip_convex(square, square)) == doctest::Approx(1.0));
}
