#pragma once

// Piecewise-constant phantoms: weighted sums of closed discs and
// axis-aligned rectangles, with closed-form point values, line integrals
// and local (small-circle) averages.

#include "kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace abel {

/// Points within this signed distance of a piece boundary are treated as on it.
inline constexpr double kBoundaryTolerance = 1e-12;

template <typename Scalar = double>
struct Disc {
    Vec2<Scalar> center = Vec2<Scalar>::Zero();
    Scalar radius = Scalar(1);
    Scalar amplitude = Scalar(1);
};

template <typename Scalar = double>
struct Rect {
    Vec2<Scalar> center = Vec2<Scalar>::Zero();
    Vec2<Scalar> half_widths = Vec2<Scalar>::Ones();
    Scalar amplitude = Scalar(1);
};

template <typename Scalar = double>
using Piece = std::variant<Disc<Scalar>, Rect<Scalar>>;

template <typename Scalar = double>
struct Phantom {
    std::vector<Piece<Scalar>> pieces;

    Phantom() = default;
    Phantom(std::initializer_list<Piece<Scalar>> init) : pieces(init) { validate(); }

    Phantom& add(const Piece<Scalar>& piece) {
        pieces.push_back(piece);
        validate();
        return *this;
    }

    void validate() const;
};

template <typename Scalar>
void validate_piece(const Disc<Scalar>& d) {
    if (!(d.radius > Scalar(0)) || !std::isfinite(d.radius))
        throw std::invalid_argument("disc radius must be positive and finite");
    if (!std::isfinite(d.amplitude) || !d.center.allFinite())
        throw std::invalid_argument("disc center and amplitude must be finite");
}

template <typename Scalar>
void validate_piece(const Rect<Scalar>& r) {
    if (!(r.half_widths.minCoeff() > Scalar(0)) || !r.half_widths.allFinite())
        throw std::invalid_argument("rectangle half-widths must be positive and finite");
    if (!std::isfinite(r.amplitude) || !r.center.allFinite())
        throw std::invalid_argument("rectangle center and amplitude must be finite");
}

template <typename Scalar>
void Phantom<Scalar>::validate() const {
    for (const auto& p : pieces) std::visit([](const auto& q) { validate_piece(q); }, p);
}

enum class PointClass { Interior, Edge, Corner, Exterior };

/// Limit of the fraction of a small circle around a point of this class lying in the piece.
inline double local_weight(PointClass c) {
    switch (c) {
        case PointClass::Interior: return 1.0;
        case PointClass::Edge: return 0.5;
        case PointClass::Corner: return 0.25;
        case PointClass::Exterior: return 0.0;
    }
    return 0.0;
}

template <typename Scalar>
PointClass classify(const Disc<Scalar>& d, const Vec2<Scalar>& x) {
    const Scalar dist = (x - d.center).norm() - d.radius;
    if (dist < -Scalar(kBoundaryTolerance)) return PointClass::Interior;
    if (dist > Scalar(kBoundaryTolerance)) return PointClass::Exterior;
    return PointClass::Edge;
}

template <typename Scalar>
PointClass classify(const Rect<Scalar>& r, const Vec2<Scalar>& x) {
    using std::abs;
    const Vec2<Scalar> excess = (x - r.center).cwiseAbs() - r.half_widths;
    const Scalar tol(kBoundaryTolerance);
    if (excess.maxCoeff() > tol) return PointClass::Exterior;
    const bool on_x = abs(excess.x()) <= tol;
    const bool on_y = abs(excess.y()) <= tol;
    if (on_x && on_y) return PointClass::Corner;
    if (on_x || on_y) return PointClass::Edge;
    return PointClass::Interior;
}

template <typename Scalar>
Scalar amplitude_of(const Piece<Scalar>& p) {
    return std::visit([](const auto& q) { return q.amplitude; }, p);
}

template <typename Scalar>
PointClass classify(const Piece<Scalar>& p, const Vec2<Scalar>& x) {
    return std::visit([&](const auto& q) { return classify(q, x); }, p);
}

/// Point value of the phantom; each piece is closed, so boundary points count as inside.
template <typename Scalar>
Scalar eval(const Phantom<Scalar>& phantom, const Vec2<Scalar>& x) {
    Scalar sum(0);
    for (const auto& p : phantom.pieces)
        if (classify(p, x) != PointClass::Exterior) sum += amplitude_of(p);
    return sum;
}

/// Limit of circle averages around x as the circle radius shrinks to zero.
template <typename Scalar>
Scalar local_average(const Phantom<Scalar>& phantom, const Vec2<Scalar>& x) {
    Scalar sum(0);
    for (const auto& p : phantom.pieces) sum += amplitude_of(p) * Scalar(local_weight(classify(p, x)));
    return sum;
}

/// Average of eval over n_samples equally spaced points of the circle |y - x| = r.
/// Sample angles are offset by half a step so axis-aligned boundaries are never hit exactly.
template <typename Scalar>
Scalar ring_average(const Phantom<Scalar>& phantom, const Vec2<Scalar>& x, Scalar r, int n_samples) {
    using std::cos;
    using std::sin;
    if (!(r > Scalar(0))) throw std::invalid_argument("ring radius must be positive");
    if (n_samples < 8) throw std::invalid_argument("ring_average needs at least 8 samples");
    const Scalar step = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(n_samples);
    Scalar sum(0);
    for (int i = 0; i < n_samples; ++i) {
        const Scalar theta = (Scalar(i) + Scalar(0.5)) * step;
        sum += eval(phantom, Vec2<Scalar>(x.x() + r * cos(theta), x.y() + r * sin(theta)));
    }
    return sum / Scalar(n_samples);
}

/// Line integral of a single piece along {y : y . (cos psi, sin psi) = t}.
template <typename Scalar>
Scalar radon(const Disc<Scalar>& d, Scalar t, Scalar psi) {
    using std::sqrt;
    const Scalar tau = t - projection(d.center, psi);
    const Scalar gap = d.radius * d.radius - tau * tau;
    if (!(gap > Scalar(0))) return Scalar(0);
    return Scalar(2) * d.amplitude * sqrt(gap);
}

namespace detail {

/// Clip the parameter range [lo, hi] of p(u) = origin + u * dir against |p_k - c_k| <= h_k.
template <typename Scalar>
bool clip_slab(Scalar origin, Scalar dir, Scalar center, Scalar half, Scalar& lo, Scalar& hi) {
    using std::abs;
    if (dir == Scalar(0)) return abs(origin - center) <= half;
    Scalar a = (center - half - origin) / dir;
    Scalar b = (center + half - origin) / dir;
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    return lo < hi;
}

template <typename Scalar>
std::optional<std::pair<Scalar, Scalar>> clip_rect(const Rect<Scalar>& r, const Vec2<Scalar>& origin,
                                                   const Vec2<Scalar>& dir, Scalar lo, Scalar hi) {
    for (int axis = 0; axis < 2; ++axis)
        if (!clip_slab(origin[axis], dir[axis], r.center[axis], r.half_widths[axis], lo, hi))
            return std::nullopt;
    return std::make_pair(lo, hi);
}

}  // namespace detail

template <typename Scalar>
Scalar radon(const Rect<Scalar>& r, Scalar t, Scalar psi) {
    using std::cos;
    using std::sin;
    const Vec2<Scalar> normal(cos(psi), sin(psi));
    const Vec2<Scalar> along(-normal.y(), normal.x());
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    const auto chord = detail::clip_rect(r, Vec2<Scalar>(t * normal), along, -inf, inf);
    if (!chord) return Scalar(0);
    return r.amplitude * (chord->second - chord->first);
}

template <typename Scalar>
Scalar radon(const Phantom<Scalar>& phantom, Scalar t, Scalar psi) {
    Scalar sum(0);
    for (const auto& p : phantom.pieces) sum += std::visit([&](const auto& q) { return radon(q, t, psi); }, p);
    return sum;
}

/// Parameter interval [r_in, r_out] with r_in >= 0 where the ray x + r*dir lies in the piece.
/// r_out may be +inf only for unbounded pieces, which do not exist here.
template <typename Scalar>
std::optional<std::pair<Scalar, Scalar>> ray_interval(const Disc<Scalar>& d, const Vec2<Scalar>& x,
                                                      const Vec2<Scalar>& dir) {
    using std::sqrt;
    const Vec2<Scalar> rel = d.center - x;
    const Scalar b = rel.dot(dir);
    const Scalar disc = b * b - (rel.squaredNorm() - d.radius * d.radius);
    if (!(disc > Scalar(0))) return std::nullopt;
    const Scalar s = sqrt(disc);
    const Scalar r_out = b + s;
    if (!(r_out > Scalar(0))) return std::nullopt;
    return std::make_pair(std::max(Scalar(0), b - s), r_out);
}

template <typename Scalar>
std::optional<std::pair<Scalar, Scalar>> ray_interval(const Rect<Scalar>& r, const Vec2<Scalar>& x,
                                                      const Vec2<Scalar>& dir) {
    return detail::clip_rect(r, x, dir, Scalar(0), std::numeric_limits<Scalar>::infinity());
}

/// Radius of the smallest origin-centered disc containing every piece.
template <typename Scalar>
Scalar support_radius(const Phantom<Scalar>& phantom) {
    Scalar radius(0);
    for (const auto& p : phantom.pieces) {
        const Scalar reach = std::visit(
            [](const auto& q) -> Scalar {
                using Q = std::decay_t<decltype(q)>;
                if constexpr (std::is_same_v<Q, Disc<Scalar>>)
                    return q.center.norm() + q.radius;
                else
                    return (q.center.cwiseAbs() + q.half_widths).norm();
            },
            p);
        radius = std::max(radius, reach);
    }
    return radius;
}

/// Integral of the phantom over the plane.
template <typename Scalar>
Scalar total_mass(const Phantom<Scalar>& phantom) {
    Scalar mass(0);
    for (const auto& p : phantom.pieces) {
        mass += std::visit(
            [](const auto& q) -> Scalar {
                using Q = std::decay_t<decltype(q)>;
                if constexpr (std::is_same_v<Q, Disc<Scalar>>)
                    return q.amplitude * std::numbers::pi_v<Scalar> * q.radius * q.radius;
                else
                    return q.amplitude * Scalar(4) * q.half_widths.prod();
            },
            p);
    }
    return mass;
}

/// Bounds on the phantom's values: the sums of its negative and positive amplitudes.
/// Tight whenever all same-sign pieces share a common point (and zero is attained).
template <typename Scalar>
std::pair<Scalar, Scalar> value_bounds(const Phantom<Scalar>& phantom) {
    Scalar lo(0), hi(0);
    for (const auto& p : phantom.pieces) {
        const Scalar a = amplitude_of(p);
        (a < Scalar(0) ? lo : hi) += a;
    }
    return {lo, hi};
}

}  // namespace abel
