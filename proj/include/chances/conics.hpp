#pragma once

// Ellipse geometry behind the focal-product identity and the central-force
// law FM / (R FP^3) with the force centre at the focus (+c, 0).

#include <cstddef>

namespace chances::conics {

struct Point {
    double x;
    double y;
};

class Ellipse {
public:
    Ellipse(double a, double b);  // requires a >= b > 0

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double c() const noexcept { return c_; }  // sqrt(a^2 - b^2)

    Point point(double theta) const;    // (a cos theta, b sin theta)
    Point tangent(double theta) const;  // d/dtheta of point(), not normalized

private:
    double a_;
    double b_;
    double c_;
};

struct FocalProduct {
    double product;       // FM * F'M
    double halfdiam_sq;   // squared centre-to-curve length parallel to the tangent
};

FocalProduct focal_product(const Ellipse& e, double theta);

double radius_of_curvature(const Ellipse& e, double theta);

struct ForceParts {
    double focal_radius;  // FM
    double perpendicular; // FP: focus to the tangent line
    double curvature_radius;
    double force;         // FM / (R FP^3)
};

ForceParts force_parts(const Ellipse& e, double theta);
double centripetal_force(const Ellipse& e, double theta);

struct InverseSquareCheck {
    double constant;           // mean of force * FM^2 over the grid
    double max_relative_dev;
};

/// force * FM^2 on `samples` equally spaced eccentric angles in [0, 2 pi).
InverseSquareCheck inverse_square_constant(const Ellipse& e, std::size_t samples);

}  // namespace chances::conics
