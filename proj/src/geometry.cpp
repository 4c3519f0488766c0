#include "openarc/geometry.hpp"

#include <numbers>
#include <stdexcept>

namespace openarc {

namespace {

constexpr double pi = std::numbers::pi;

// Midpoint rule in theta of tau(cos theta) sin theta: spectrally accurate for
// these smooth even integrands.
template <class Tau>
double length_on_grid(const Tau& tau, int n)
{
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const double theta = pi * (2.0 * j + 1.0) / (2.0 * n);
        sum += tau(std::cos(theta)) * std::sin(theta);
    }
    return sum * pi / n;
}

std::vector<double> checked_params(ArcKind kind, std::vector<double> params)
{
    switch (kind) {
    case ArcKind::CircleCavity:
        if (params.empty()) {
            return {1.0, 0.2};
        }
        if (params.size() != 2) {
            throw std::invalid_argument("circlecavity expects params R,gap");
        }
        if (!(params[0] > 0.0) || !std::isfinite(params[0])) {
            throw std::invalid_argument("circlecavity radius must be positive");
        }
        if (!(params[1] > 0.0) || !(params[1] < 2.0 * pi * params[0])) {
            throw std::invalid_argument("circlecavity gap must lie in (0, 2 pi R)");
        }
        return params;
    default:
        if (!params.empty()) {
            throw std::invalid_argument(to_string(kind) + " takes no params");
        }
        return params;
    }
}

}  // namespace

ArcKind parse_arc_kind(std::string_view name)
{
    if (name == "strip") return ArcKind::Strip;
    if (name == "spiral") return ArcKind::Spiral;
    if (name == "parabola") return ArcKind::Parabola;
    if (name == "halfcircle") return ArcKind::HalfCircle;
    if (name == "circlecavity") return ArcKind::CircleCavity;
    throw std::invalid_argument("unknown arc kind: " + std::string(name));
}

std::string to_string(ArcKind kind)
{
    switch (kind) {
    case ArcKind::Strip: return "strip";
    case ArcKind::Spiral: return "spiral";
    case ArcKind::Parabola: return "parabola";
    case ArcKind::HalfCircle: return "halfcircle";
    case ArcKind::CircleCavity: return "circlecavity";
    }
    return "unknown";
}

Arc::Arc(ArcKind kind, std::vector<double> params, int orientation)
    : kind_(kind), params_(checked_params(kind, std::move(params))), orientation_(orientation)
{
    if (orientation_ != 1 && orientation_ != -1) {
        throw std::invalid_argument("orientation must be +1 or -1");
    }
    for (double t : {-1.0, 0.0, 1.0}) {
        const Vec2 r = point(t);
        if (!std::isfinite(r.x) || !std::isfinite(r.y)) {
            throw std::invalid_argument("arc has non-finite coordinates");
        }
    }

    auto tau = [this](double t) { return norm(derivative(t)); };
    int n = 8192;
    double previous = length_on_grid(tau, n);
    for (;;) {
        n *= 2;
        length_ = length_on_grid(tau, n);
        if (std::abs(length_ - previous) <= 1e-12 * length_ || n >= (1 << 20)) {
            break;
        }
        previous = length_;
    }
    if (!std::isfinite(length_) || !(length_ > 0.0)) {
        throw std::invalid_argument("arc has non-finite or zero length");
    }
    for (int j = 0; j <= 256; ++j) {
        const double t = std::cos(pi * j / 256.0);
        if (!(tau(t) > 0.0)) {
            throw std::invalid_argument("arc parametrization has vanishing speed");
        }
    }
}

Vec2 Arc::point(double t) const
{
    switch (kind_) {
    case ArcKind::Strip:
        return {t, 0.0};
    case ArcKind::Spiral: {
        const double e = std::exp(t);
        return {e * std::cos(5.0 * t), e * std::sin(5.0 * t)};
    }
    case ArcKind::Parabola:
        return {1.0 - 2.0 * t * t, t};
    case ArcKind::HalfCircle: {
        const double a = pi * (t + 1.0) / 2.0;
        return {std::cos(a), std::sin(a)};
    }
    case ArcKind::CircleCavity: {
        const double radius = params_[0];
        const double gap = params_[1] / radius;
        const double a = -pi / 2.0 + gap / 2.0 + (2.0 * pi - gap) * (t + 1.0) / 2.0;
        return {radius * std::cos(a), radius * std::sin(a)};
    }
    }
    return {};
}

Vec2 Arc::derivative(double t) const
{
    switch (kind_) {
    case ArcKind::Strip:
        return {1.0, 0.0};
    case ArcKind::Spiral: {
        const double e = std::exp(t);
        const double c = std::cos(5.0 * t);
        const double s = std::sin(5.0 * t);
        return {e * (c - 5.0 * s), e * (s + 5.0 * c)};
    }
    case ArcKind::Parabola:
        return {-4.0 * t, 1.0};
    case ArcKind::HalfCircle: {
        const double a = pi * (t + 1.0) / 2.0;
        return {-pi / 2.0 * std::sin(a), pi / 2.0 * std::cos(a)};
    }
    case ArcKind::CircleCavity: {
        const double radius = params_[0];
        const double gap = params_[1] / radius;
        const double rate = (2.0 * pi - gap) / 2.0;
        const double a = -pi / 2.0 + gap / 2.0 + rate * (t + 1.0);
        return {-radius * rate * std::sin(a), radius * rate * std::cos(a)};
    }
    }
    return {};
}

ArcPoint Arc::eval(double t) const
{
    ArcPoint p;
    p.point = point(t);
    p.tangent = derivative(t);
    p.tau = norm(p.tangent);
    p.normal = (orientation_ / p.tau) * Vec2{p.tangent.y, -p.tangent.x};
    return p;
}

Arc make_arc(ArcKind kind, std::span<const double> params, int orientation)
{
    return Arc(kind, std::vector<double>(params.begin(), params.end()), orientation);
}

double wavenumber_for_ratio(const Arc& arc, double length_over_wavelength)
{
    if (!(length_over_wavelength > 0.0)) {
        throw std::invalid_argument("L/lambda must be positive");
    }
    return 2.0 * pi * length_over_wavelength / arc.length();
}

}  // namespace openarc
