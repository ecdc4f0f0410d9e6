#pragma once

// Abel-means reconstruction A_a f(x) by three independent routes:
//
//   naive   integral over psi in [0, pi) and t of phi(x, t, psi) Rf(t, psi),
//           one composite rule in t;
//   split   the same double integral with the t-range cut at beta -/+ eps so the
//           kernel peak gets its own finer rule;
//   oracle  the spatial convolution (h * f)(x), evaluated in polar coordinates
//           around x with the radial integral done in closed form per ray.
//
// Rf comes from a Radon source: analytic line integrals of a phantom, or a
// sampled sinogram.

#include "kernel.hpp"
#include "phantom.hpp"
#include "quadrature.hpp"
#include "sinogram.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace abel {

/// Quadrature settings shared by the Radon-domain paths.
struct RadonQuadrature {
    QuadRule naive{Rule::Simpson, 512};  // single t-rule over the whole support
    QuadRule inner{Rule::Simpson, 64};   // [beta - eps, beta + eps]
    QuadRule outer{Rule::Simpson, 512};  // each tail
    int n_psi = 180;                     // midpoint angles for analytic sources
    /// t-range for analytic sources; defaults to [-R, R], R the phantom's support radius.
    std::optional<Interval<double>> t_support;

    void validate() const {
        naive.validate();
        inner.validate();
        outer.validate();
        if (n_psi < 1) throw std::invalid_argument("n_psi must be positive");
        if (t_support && !(t_support->lo < t_support->hi)) throw std::invalid_argument("t_support needs lo < hi");
    }
};

/// Line integrals of a phantom along lines with a fixed normal angle.
template <typename Scalar>
class RadonRow {
public:
    RadonRow(const Phantom<Scalar>& phantom, Scalar psi)
        : phantom_(&phantom), normal_(std::cos(psi), std::sin(psi)), along_(-normal_.y(), normal_.x()) {
        offsets_.reserve(phantom.pieces.size());
        for (const auto& p : phantom.pieces)
            offsets_.push_back(std::visit([&](const auto& q) { return q.center.dot(normal_); }, p));
    }

    Scalar operator()(Scalar t) const {
        using std::sqrt;
        Scalar sum(0);
        const auto& pieces = phantom_->pieces;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (const auto* d = std::get_if<Disc<Scalar>>(&pieces[i])) {
                const Scalar tau = t - offsets_[i];
                const Scalar gap = d->radius * d->radius - tau * tau;
                if (gap > Scalar(0)) sum += Scalar(2) * d->amplitude * sqrt(gap);
            } else {
                const auto& r = std::get<Rect<Scalar>>(pieces[i]);
                const Scalar inf = std::numeric_limits<Scalar>::infinity();
                if (const auto chord = detail::clip_rect(r, Vec2<Scalar>(t * normal_), along_, -inf, inf))
                    sum += r.amplitude * (chord->second - chord->first);
            }
        }
        return sum;
    }

private:
    const Phantom<Scalar>* phantom_;
    Vec2<Scalar> normal_;
    Vec2<Scalar> along_;
    std::vector<Scalar> offsets_;
};

/// Radon source backed by a phantom's closed-form line integrals. Angles are
/// midpoints psi_k = (k + 1/2) pi / n.
template <typename Scalar = double>
struct AnalyticSource {
    const Phantom<Scalar>& phantom;
    int n_psi = 180;
    std::optional<Interval<Scalar>> t_support = std::nullopt;

    int angle_count() const { return n_psi; }
    Scalar angle(int k) const { return (Scalar(k) + Scalar(0.5)) * std::numbers::pi_v<Scalar> / Scalar(n_psi); }
    Scalar angle_weight() const { return std::numbers::pi_v<Scalar> / Scalar(n_psi); }
    Interval<Scalar> support() const {
        if (t_support) return *t_support;
        const Scalar r = support_radius(phantom);
        return {-r, r};
    }
    RadonRow<Scalar> row(int k) const { return RadonRow<Scalar>(phantom, angle(k)); }
};

/// Radon source backed by a sinogram. Angles are the sinogram rows, so the psi
/// rule is the periodic rectangle rule on the acquisition angles.
struct SampledSource {
    const Sinogram& sinogram;

    int angle_count() const { return sinogram.n_psi; }
    double angle(int k) const { return sinogram.psi(k); }
    double angle_weight() const { return std::numbers::pi / sinogram.n_psi; }
    Interval<double> support() const { return {sinogram.t_min, sinogram.t_max}; }
    auto row(int k) const {
        return [this, k](double t) { return sinogram.row_value(k, t); };
    }
};

template <typename Source, typename Scalar>
Scalar abel_naive(const Source& source, const KernelParams<Scalar>& params, const Vec2<Scalar>& x,
                  const QuadRule& t_rule) {
    params.validate();
    const Interval<Scalar> support = source.support();
    Scalar sum(0);
    for (int k = 0; k < source.angle_count(); ++k) {
        const Scalar beta = projection(x, source.angle(k));
        const auto rf = source.row(k);
        sum += integrate_1d([&](Scalar t) { return phi_offset(params.alpha, beta - t) * rf(t); },
                            QuadSpec<Scalar>{t_rule, support});
    }
    return sum * source.angle_weight();
}

/// The window rule with its panel count raised, if needed, so that its panels are
/// no wider than those of the outer rule spread over the support.
template <typename Scalar>
QuadRule refined_inner_rule(const QuadRule& inner, const QuadRule& outer, Scalar window, Scalar support_length) {
    QuadRule rule = inner;
    if (!(support_length > Scalar(0))) return rule;
    const Scalar outer_width = support_length / Scalar(outer.n_panels);
    const auto needed = static_cast<long long>(std::ceil(window / outer_width));
    if (needed > rule.n_panels) {
        rule.n_panels = static_cast<int>(std::min<long long>(needed, 1 << 24));
        if (rule.rule == Rule::Simpson && rule.n_panels % 2 != 0) ++rule.n_panels;
    }
    return rule;
}

template <typename Source, typename Scalar>
Scalar abel_split(const Source& source, const KernelParams<Scalar>& params, const Vec2<Scalar>& x,
                  const QuadRule& inner, const QuadRule& outer) {
    using std::max;
    using std::min;
    params.validate();
    const Interval<Scalar> support = source.support();
    const Scalar eps = params.epsilon();
    const QuadRule window_rule = refined_inner_rule(inner, outer, Scalar(2) * eps, support.length());
    Scalar sum(0);
    for (int k = 0; k < source.angle_count(); ++k) {
        const Scalar beta = projection(x, source.angle(k));
        const auto rf = source.row(k);
        // Rf vanishes off the support, so widening the tails to cover the window is exact
        const Interval<Scalar> tails{min(support.lo, beta - eps), max(support.hi, beta + eps)};
        sum += integrate_split([&](Scalar t) { return phi_offset(params.alpha, beta - t) * rf(t); },
                               SplitSpec<Scalar>{beta, eps, window_rule, outer}, tails);
    }
    return sum * source.angle_weight();
}

template <typename Scalar>
AnalyticSource<Scalar> analytic_source(const Phantom<Scalar>& phantom, const RadonQuadrature& quad) {
    AnalyticSource<Scalar> source{phantom, quad.n_psi};
    if (quad.t_support) source.t_support = Interval<Scalar>{Scalar(quad.t_support->lo), Scalar(quad.t_support->hi)};
    return source;
}

template <typename Scalar>
Scalar abel_naive(const Phantom<Scalar>& phantom, const KernelParams<Scalar>& params, const Vec2<Scalar>& x,
                  const RadonQuadrature& quad = {}) {
    return abel_naive(analytic_source(phantom, quad), params, x, quad.naive);
}

template <typename Scalar>
Scalar abel_split(const Phantom<Scalar>& phantom, const KernelParams<Scalar>& params, const Vec2<Scalar>& x,
                  const RadonQuadrature& quad = {}) {
    return abel_split(analytic_source(phantom, quad), params, x, quad.inner, quad.outer);
}

inline double abel_naive(const Sinogram& sinogram, const KernelParams<double>& params, const Vec2<double>& x,
                         const RadonQuadrature& quad = {}) {
    return abel_naive(SampledSource{sinogram}, params, x, quad.naive);
}

inline double abel_split(const Sinogram& sinogram, const KernelParams<double>& params, const Vec2<double>& x,
                         const RadonQuadrature& quad = {}) {
    return abel_split(SampledSource{sinogram}, params, x, quad.inner, quad.outer);
}

/// Convolution (h * f)(x) = (1/2pi) int_0^2pi dtheta int_0^inf a r f(x + r e_theta) / (a^2 + r^2)^{3/2} dr.
/// Each piece meets a ray in one interval [r0, r1], on which the radial integral is
/// a (G(r0) - G(r1)) with G(r) = a / sqrt(a^2 + r^2); theta uses an n_theta-point midpoint rule.
/// No truncation is involved. For phantoms with values in [A, B] the result lies in [A, B].
template <typename Scalar>
Scalar abel_oracle(const Phantom<Scalar>& phantom, const KernelParams<Scalar>& params, const Vec2<Scalar>& x,
                   int n_theta = 4096) {
    using std::cos;
    using std::sin;
    params.validate();
    if (n_theta < 1) throw std::invalid_argument("n_theta must be positive");
    const Scalar a = params.alpha;
    const Scalar step = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(n_theta);
    Scalar sum(0);
    for (int j = 0; j < n_theta; ++j) {
        const Scalar theta = (Scalar(j) + Scalar(0.5)) * step;
        const Vec2<Scalar> dir(cos(theta), sin(theta));
        Scalar ray(0);
        for (const auto& p : phantom.pieces) {
            const auto hit = std::visit([&](const auto& q) { return ray_interval(q, x, dir); }, p);
            if (!hit) continue;
            ray += amplitude_of(p) * (radial_tail_mass(a, hit->first) - radial_tail_mass(a, hit->second));
        }
        sum += ray;
    }
    return sum / Scalar(n_theta);
}

// ---------------------------------------------------------------------------
// Grids

enum class Method { Naive, Split, Oracle };

const char* to_string(Method m);
Method parse_method(const std::string& name);

/// Rectangular lattice of evaluation points. By default points sit at cell
/// centres; with `include_edges` they span the ranges endpoint to endpoint.
struct GridGeometry {
    Interval<double> x_range{-3.0, 3.0};
    Interval<double> y_range{-3.0, 3.0};
    int nx = 101;
    int ny = 101;
    bool include_edges = false;

    void validate() const;
    double x(int ix) const;
    double y(int iy) const;
    Vec2<double> point(int ix, int iy) const { return {x(ix), y(iy)}; }
    bool operator==(const GridGeometry&) const = default;
};

struct ReconGrid {
    GridGeometry geometry;
    Eigen::ArrayXXd values;  // nx x ny, values(ix, iy)
};

using RadonData = std::variant<Phantom<double>, Sinogram>;

struct ReconSettings {
    KernelParams<double> params{1.0};
    Method method = Method::Split;
    RadonQuadrature quad;
    int n_theta = 4096;
    int threads = 1;
};

/// A_a f(x) by the selected method. The oracle needs a phantom.
double reconstruct_point(const RadonData& source, const ReconSettings& settings, const Vec2<double>& x);

/// Per-point evaluation over the grid; points are independent, so the result
/// does not depend on the thread count. Failures name the point.
ReconGrid reconstruct_grid(const RadonData& source, const GridGeometry& geometry, const ReconSettings& settings);

/// Exact local averages Sf on the grid.
ReconGrid truth_grid(const Phantom<double>& phantom, const GridGeometry& geometry);

struct ReconReport {
    std::string method;
    double alpha = 0.0;
    double epsilon = 0.0;
    double rmse = 0.0;
    double max_abs_err = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
    std::string reference;
    std::optional<std::size_t> bound_violations;
};

/// Error metrics of `grid` against `reference`; geometries must match.
ReconReport compare(const ReconGrid& grid, const ReconGrid& reference);

/// Number of grid values outside [lo - tol, hi + tol].
std::size_t count_outside(const ReconGrid& grid, double lo, double hi, double tol);

std::string format_report(const ReconReport& report);

}  // namespace abel
