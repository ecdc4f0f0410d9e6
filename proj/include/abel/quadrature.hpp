#pragma once

// Fixed-grid composite quadrature. Every rule sums its samples strictly left to
// right so results are bit-reproducible for a given rule and domain.

#include "errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace abel {

enum class Rule { Midpoint, Simpson };

template <typename Scalar = double>
struct Interval {
    Scalar lo{};
    Scalar hi{};

    Scalar length() const { return hi - lo; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
    bool operator==(const Interval&) const = default;
};

/// A composite rule independent of where it is applied.
struct QuadRule {
    Rule rule = Rule::Simpson;
    int n_panels = 64;

    void validate() const {
        if (rule == Rule::Simpson && (n_panels < 2 || n_panels % 2 != 0))
            throw std::invalid_argument("simpson needs an even panel count >= 2");
        if (rule == Rule::Midpoint && n_panels < 1)
            throw std::invalid_argument("midpoint needs at least one panel");
    }
};

template <typename Scalar = double>
struct QuadSpec {
    QuadRule rule;
    Interval<Scalar> domain;
};

/// Three-interval rule for integrands peaked at `center`: the window
/// [center - half_width, center + half_width] uses `inner`, each tail uses `outer`.
template <typename Scalar = double>
struct SplitSpec {
    Scalar center{};
    Scalar half_width{};
    QuadRule inner{Rule::Simpson, 64};
    QuadRule outer{Rule::Simpson, 512};
};

namespace detail {

template <typename Scalar>
[[noreturn]] void throw_non_finite(Scalar x, Scalar value) {
    std::ostringstream os;
    os.precision(17);
    os << "non-finite integrand value " << value << " at abscissa " << x;
    throw NumericalError(os.str());
}

template <typename Scalar, typename F>
Scalar sample(F& f, Scalar x) {
    const Scalar v = f(x);
    if (!std::isfinite(v)) throw_non_finite(x, v);
    return v;
}

}  // namespace detail

template <typename Scalar, typename F>
Scalar integrate_1d(F&& f, const QuadSpec<Scalar>& spec) {
    spec.rule.validate();
    const int n = spec.rule.n_panels;
    const Scalar a = spec.domain.lo;
    const Scalar width = spec.domain.length();
    const Scalar h = width / Scalar(n);
    Scalar sum(0);
    if (spec.rule.rule == Rule::Midpoint) {
        for (int i = 0; i < n; ++i) sum += detail::sample(f, a + (Scalar(i) + Scalar(0.5)) * h);
        return sum * h;
    }
    for (int i = 0; i <= n; ++i) {
        // last node pinned to the exact endpoint
        const Scalar x = i == n ? spec.domain.hi : a + Scalar(i) * h;
        const Scalar w = (i == 0 || i == n) ? Scalar(1) : (i % 2 == 1 ? Scalar(4) : Scalar(2));
        sum += w * detail::sample(f, x);
    }
    return sum * h / Scalar(3);
}

template <typename Scalar, typename F>
Scalar integrate_split(F&& f, const SplitSpec<Scalar>& spec, const Interval<Scalar>& tails) {
    if (!(spec.half_width > Scalar(0))) throw std::invalid_argument("split half-width must be positive");
    const Interval<Scalar> window{spec.center - spec.half_width, spec.center + spec.half_width};
    if (!tails.contains(window)) throw std::invalid_argument("split window extends beyond the tail interval");

    Scalar sum(0);
    if (tails.lo < window.lo) sum += integrate_1d(f, QuadSpec<Scalar>{spec.outer, {tails.lo, window.lo}});
    sum += integrate_1d(f, QuadSpec<Scalar>{spec.inner, window});
    if (window.hi < tails.hi) sum += integrate_1d(f, QuadSpec<Scalar>{spec.outer, {window.hi, tails.hi}});
    return sum;
}

/// Integral of f over [lo, inf) by the map r = lo + scale * u / (1 - u), u in [0, 1),
/// with an n-panel midpoint rule in u. `scale` should match the decay length of f;
/// the transformed integrand is bounded whenever f decays at least like 1/r^2.
template <typename Scalar, typename F>
Scalar integrate_half_line(F&& f, Scalar lo, Scalar scale, int n_panels) {
    if (!(scale > Scalar(0))) throw std::invalid_argument("half-line scale must be positive");
    if (n_panels < 1) throw std::invalid_argument("half-line rule needs at least one panel");
    const Scalar h = Scalar(1) / Scalar(n_panels);
    Scalar sum(0);
    for (int i = 0; i < n_panels; ++i) {
        const Scalar u = (Scalar(i) + Scalar(0.5)) * h;
        const Scalar v = Scalar(1) - u;
        const Scalar r = lo + scale * u / v;
        sum += detail::sample(f, r) * scale / (v * v);
    }
    return sum * h;
}

/// Product midpoint rule for the integral of f(r, theta) r dr dtheta over the
/// disc of radius r_max. With radial_scale > 0 the radial midpoint rule runs in
/// u, r = radial_scale * u / (1 - u), which concentrates nodes near r = 0 and
/// admits r_max = +inf.
template <typename Scalar, typename F>
Scalar integrate_2d_polar(F&& f, Scalar r_max, int n_r, int n_theta, Scalar radial_scale = Scalar(0)) {
    if (!(r_max > Scalar(0))) throw std::invalid_argument("r_max must be positive");
    if (n_r < 1 || n_theta < 1) throw std::invalid_argument("polar rule needs positive node counts");
    const bool mapped = radial_scale > Scalar(0);
    if (!mapped && !std::isfinite(r_max)) throw std::invalid_argument("infinite r_max requires a radial scale");

    const Scalar u_max = !mapped ? r_max : (std::isfinite(r_max) ? r_max / (radial_scale + r_max) : Scalar(1));
    const Scalar du = u_max / Scalar(n_r);
    const Scalar dtheta = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(n_theta);

    Scalar sum(0);
    for (int j = 0; j < n_theta; ++j) {
        const Scalar theta = (Scalar(j) + Scalar(0.5)) * dtheta;
        Scalar ring(0);
        for (int i = 0; i < n_r; ++i) {
            const Scalar u = (Scalar(i) + Scalar(0.5)) * du;
            Scalar r = u;
            Scalar jacobian(1);
            if (mapped) {
                const Scalar v = Scalar(1) - u;
                r = radial_scale * u / v;
                jacobian = radial_scale / (v * v);
            }
            const Scalar value = f(r, theta);
            if (!std::isfinite(value)) detail::throw_non_finite(r, value);
            ring += value * r * jacobian;
        }
        sum += ring;
    }
    return sum * du * dtheta;
}

}  // namespace abel
