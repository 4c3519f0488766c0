#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace openarc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
    friend double norm(Vec2 a) { return std::hypot(a.x, a.y); }
};

/// Built-in open-arc families. All are parametrized over t in [-1, 1].
enum class ArcKind { Strip, Spiral, Parabola, HalfCircle, CircleCavity };

ArcKind parse_arc_kind(std::string_view name);
std::string to_string(ArcKind kind);

struct ArcPoint {
    Vec2 point;
    Vec2 tangent;  // r'(t), not normalized
    Vec2 normal;   // unit normal, orientation * (y', -x') / tau
    double tau;    // |r'(t)|
};

/**
 * Smooth open arc r(t), t in [-1, 1], with analytic first derivatives.
 *
 * Parametrizations:
 *   strip         r(t) = (t, 0)
 *   spiral        r(t) = (e^t cos 5t, e^t sin 5t)
 *   parabola      r(t) = (1 - 2t^2, t)
 *   halfcircle    r(t) = (cos(pi(t+1)/2), sin(pi(t+1)/2))
 *   circlecavity  r(t) = R (cos a(t), sin a(t)),  a(t) = a0 + (2 pi - d)(t+1)/2
 *                 params = {R, gap}, d = gap / R, a0 = -pi/2 + d/2 so the
 *                 aperture is centered at the bottom of the circle.
 *
 * Immutable after construction.
 */
class Arc {
public:
    Arc(ArcKind kind, std::vector<double> params, int orientation = +1);

    ArcKind kind() const { return kind_; }
    std::span<const double> params() const { return params_; }
    int orientation() const { return orientation_; }
    double length() const { return length_; }

    Vec2 point(double t) const;
    ArcPoint eval(double t) const;

private:
    Vec2 derivative(double t) const;

    ArcKind kind_;
    std::vector<double> params_;
    int orientation_;
    double length_ = 0.0;
};

/// Validates params for the family and computes the arc length.
/// Throws std::invalid_argument on bad params or a degenerate parametrization.
Arc make_arc(ArcKind kind, std::span<const double> params = {}, int orientation = +1);

/// k = 2 pi (L / lambda) / L.
double wavenumber_for_ratio(const Arc& arc, double length_over_wavelength);

}  // namespace openarc
