#include "chances/conics.hpp"
#include "chances/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

namespace cn = chances::conics;

namespace {

constexpr double kPi = std::numbers::pi;

double distance(cn::Point p, cn::Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

// Circumradius through three nearby points of the curve.
double circumradius(const cn::Ellipse& e, double theta, double h) {
    cn::Point p = e.point(theta - h), q = e.point(theta), r = e.point(theta + h);
    double ab = distance(p, q), bc = distance(q, r), ca = distance(r, p);
    double cross = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    return ab * bc * ca / (2.0 * std::fabs(cross));
}

}  // namespace

TEST_CASE("ellipse construction") {
    CHECK_THROWS_AS(cn::Ellipse(1.0, 2.0), chances::DomainError);
    CHECK_THROWS_AS(cn::Ellipse(1.0, 0.0), chances::DomainError);
    CHECK(cn::Ellipse(5.0, 3.0).c() == 4.0);
}

TEST_CASE("focal product") {
    const cn::Ellipse circle(2.0, 2.0);
    for (double th : {0.0, 0.4, 2.0}) {
        auto fp = cn::focal_product(circle, th);
        CHECK(fp.product == doctest::Approx(4.0));
        CHECK(fp.halfdiam_sq == doctest::Approx(4.0));
    }
    const cn::Ellipse e(2.0, 1.0);
    auto at0 = cn::focal_product(e, 0.0);
    CHECK(at0.product == doctest::Approx(1.0));
    CHECK(at0.halfdiam_sq == doctest::Approx(1.0));
    auto top = cn::focal_product(e, kPi / 2);
    CHECK(top.product == doctest::Approx(4.0));
    CHECK(top.halfdiam_sq == doctest::Approx(4.0));

    // Conjugate semi-diameter lies at theta + pi/2.
    const cn::Ellipse f(3.7, 1.3);
    for (int k = 0; k < 720; ++k) {
        const double th = 2 * kPi * k / 720;
        cn::Point m = f.point(th), conj = f.point(th + kPi / 2);
        const double direct = distance(m, {f.c(), 0}) * distance(m, {-f.c(), 0});
        auto fp = cn::focal_product(f, th);
        CHECK(std::fabs(fp.product - direct) <= 1e-12 * direct);
        CHECK(std::fabs(fp.halfdiam_sq - (conj.x * conj.x + conj.y * conj.y)) <= 1e-12 * fp.halfdiam_sq);
        CHECK(std::fabs(fp.product - fp.halfdiam_sq) <= 1e-12 * fp.product);
    }
}

TEST_CASE("radius of curvature") {
    const cn::Ellipse e(2.0, 1.0);
    CHECK(cn::radius_of_curvature(e, 0.0) == doctest::Approx(0.5));
    CHECK(cn::radius_of_curvature(e, kPi / 2) == doctest::Approx(4.0));
    CHECK(cn::radius_of_curvature(cn::Ellipse(1.5, 1.5), 1.0) == doctest::Approx(1.5));

    const cn::Ellipse f(3.0, 2.0);
    for (double th = 0.05; th < 2 * kPi; th += 0.3) {
        CHECK(cn::radius_of_curvature(f, th) == doctest::Approx(circumradius(f, th, 1e-4)).epsilon(1e-6));
        CHECK(cn::radius_of_curvature(f, th) == doctest::Approx(cn::radius_of_curvature(f, -th)).epsilon(1e-14));
        CHECK(cn::radius_of_curvature(f, th) == doctest::Approx(cn::radius_of_curvature(f, kPi - th)).epsilon(1e-14));
    }
}

TEST_CASE("central force") {
    for (double r : {0.5, 1.0, 3.0}) {
        const cn::Ellipse circle(r, r);
        CHECK(cn::centripetal_force(circle, 0.7) == doctest::Approx(1.0 / (r * r * r)));
    }
    const cn::Ellipse e(2.0, 1.0);
    for (double th : {0.0, 0.3, kPi / 2, 2.5, kPi}) {
        auto parts = cn::force_parts(e, th);
        CHECK(parts.force * parts.focal_radius * parts.focal_radius == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(parts.force == cn::centripetal_force(e, th));
        // Perpendicular from the focus to the tangent line, computed directly.
        cn::Point m = e.point(th), t = e.tangent(th);
        const double fp = std::fabs((e.c() - m.x) * t.y - (0.0 - m.y) * t.x) / std::hypot(t.x, t.y);
        CHECK(parts.perpendicular == doctest::Approx(fp).epsilon(1e-12));
    }

    auto check = cn::inverse_square_constant(cn::Ellipse(3.0, 2.0), 720);
    CHECK(check.constant == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(check.max_relative_dev <= 1e-9);
    CHECK_THROWS_AS(cn::inverse_square_constant(cn::Ellipse(3.0, 2.0), 2), chances::DomainError);

    for (double a : {1.0, 2.5, 10.0})
        for (double ratio : {1.0, 0.8, 0.3, 0.05}) {
            const cn::Ellipse f(a, a * ratio);
            auto c = cn::inverse_square_constant(f, 720);
            CHECK(c.constant == doctest::Approx(f.a() / (f.b() * f.b())).epsilon(1e-11));
            CHECK(c.max_relative_dev <= 1e-9);
        }
}
