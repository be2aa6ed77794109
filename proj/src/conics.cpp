#include "chances/conics.hpp"

#include "chances/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace chances::conics {

Ellipse::Ellipse(double a, double b) : a_(a), b_(b), c_(0.0) {
    if (!(b > 0.0) || !(a >= b) || !std::isfinite(a))
        throw DomainError("ellipse needs a >= b > 0");
    c_ = std::sqrt((a - b) * (a + b));
}

Point Ellipse::point(double theta) const { return {a_ * std::cos(theta), b_ * std::sin(theta)}; }

Point Ellipse::tangent(double theta) const { return {-a_ * std::sin(theta), b_ * std::cos(theta)}; }

FocalProduct focal_product(const Ellipse& e, double theta) {
    const Point m = e.point(theta);
    const double to_right = std::hypot(m.x - e.c(), m.y);
    const double to_left = std::hypot(m.x + e.c(), m.y);

    // Ray from the centre along the unit tangent direction d meets the
    // ellipse at distance s with s^2 (dx^2/a^2 + dy^2/b^2) = 1.
    const Point t = e.tangent(theta);
    const double len = std::hypot(t.x, t.y);
    const double dx = t.x / len, dy = t.y / len;
    const double halfdiam_sq = 1.0 / (dx * dx / (e.a() * e.a()) + dy * dy / (e.b() * e.b()));
    return {to_right * to_left, halfdiam_sq};
}

double radius_of_curvature(const Ellipse& e, double theta) {
    const double s = std::sin(theta), c = std::cos(theta);
    const double q = e.a() * e.a() * s * s + e.b() * e.b() * c * c;
    return q * std::sqrt(q) / (e.a() * e.b());
}

ForceParts force_parts(const Ellipse& e, double theta) {
    const Point m = e.point(theta);
    const Point t = e.tangent(theta);
    const double fx = m.x - e.c(), fy = m.y;
    const double fm = std::hypot(fx, fy);
    // Distance from the focus to the tangent line through M: |(M - F) x t| / |t|.
    const double fp = std::fabs(fx * t.y - fy * t.x) / std::hypot(t.x, t.y);
    const double r = radius_of_curvature(e, theta);
    return {fm, fp, r, fm / (r * fp * fp * fp)};
}

double centripetal_force(const Ellipse& e, double theta) { return force_parts(e, theta).force; }

InverseSquareCheck inverse_square_constant(const Ellipse& e, std::size_t samples) {
    if (samples < 3) throw DomainError("need at least 3 samples");
    std::vector<double> values(samples);
    double mean = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples);
        const auto parts = force_parts(e, theta);
        values[k] = parts.force * parts.focal_radius * parts.focal_radius;
        mean += values[k];
    }
    mean /= static_cast<double>(samples);
    double dev = 0.0;
    for (double v : values) dev = std::max(dev, std::fabs(v - mean) / std::fabs(mean));
    return {mean, dev};
}

}  // namespace chances::conics
