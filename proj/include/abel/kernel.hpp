#pragma once

// Abel-means kernels.
//
//   phi(x, t, psi) = (a^2 - (beta - t)^2) / (2 pi^2 (a^2 + (beta - t)^2)^2),
//       beta = x1 cos(psi) + x2 sin(psi)    (Radon-domain kernel)
//   h(y)  = a / (2 pi (a^2 + |y|^2)^{3/2})  (spatial convolution kernel)
//   k(r)  = a r / (a^2 + r^2)^{3/2} for r > 0, else 0 (radial kernel)
//
// h and k are approximate identities; phi integrates to zero in t.

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace abel {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar = double>
struct KernelParams {
    Scalar alpha = Scalar(1);
    /// Half-width of the refined window around the kernel peak, in units of alpha.
    Scalar epsilon_factor = Scalar(2);

    KernelParams() = default;
    KernelParams(Scalar a, Scalar eps_factor = Scalar(2)) : alpha(a), epsilon_factor(eps_factor) {
        validate();
    }

    void validate() const {
        if (!(alpha > Scalar(0)) || !std::isfinite(alpha))
            throw std::invalid_argument("alpha must be positive and finite");
        if (!(epsilon_factor > Scalar(0)) || !std::isfinite(epsilon_factor))
            throw std::invalid_argument("epsilon_factor must be positive and finite");
    }

    Scalar epsilon() const { return epsilon_factor * alpha; }
};

/// Signed distance of the origin-to-line offset along (cos psi, sin psi).
template <typename Scalar>
Scalar projection(const Vec2<Scalar>& x, Scalar psi) {
    using std::cos;
    using std::sin;
    return x.x() * cos(psi) + x.y() * sin(psi);
}

/// phi as a function of the offset u = beta - t only.
template <typename Scalar>
Scalar phi_offset(Scalar alpha, Scalar u) {
    const Scalar a2 = alpha * alpha;
    const Scalar u2 = u * u;
    const Scalar den = a2 + u2;
    return (a2 - u2) / (Scalar(2) * std::numbers::pi_v<Scalar> * std::numbers::pi_v<Scalar> * den * den);
}

template <typename Scalar>
Scalar phi(const KernelParams<Scalar>& params, const Vec2<Scalar>& x, Scalar t, Scalar psi) {
    return phi_offset(params.alpha, projection(x, psi) - t);
}

/// Radial profile of h: h evaluated at any point with |y| = r.
template <typename Scalar>
Scalar h_radial(Scalar alpha, Scalar r) {
    using std::sqrt;
    const Scalar s = alpha * alpha + r * r;
    return alpha / (Scalar(2) * std::numbers::pi_v<Scalar> * s * sqrt(s));
}

template <typename Scalar>
Scalar h(const KernelParams<Scalar>& params, const Vec2<Scalar>& y) {
    return h_radial(params.alpha, y.norm());
}

template <typename Scalar>
Scalar k(const KernelParams<Scalar>& params, Scalar r) {
    using std::sqrt;
    if (!(r > Scalar(0))) return Scalar(0);
    const Scalar s = params.alpha * params.alpha + r * r;
    return params.alpha * r / (s * sqrt(s));
}

/// Mass of the radial kernel k beyond r, i.e. of h outside the disc of radius r.
template <typename Scalar>
Scalar radial_tail_mass(Scalar alpha, Scalar r) {
    using std::sqrt;
    return alpha / sqrt(alpha * alpha + r * r);
}

/// Critical points of t -> phi(x, t, psi) for fixed x and psi.
template <typename Scalar = double>
struct KernelProfile {
    Scalar beta{};
    Scalar t_max{};
    Scalar peak_value{};
    Scalar t_min_left{};
    Scalar t_min_right{};
    Scalar min_value{};
    Scalar zero_left{};
    Scalar zero_right{};
};

template <typename Scalar>
KernelProfile<Scalar> profile(const KernelParams<Scalar>& params, const Vec2<Scalar>& x, Scalar psi) {
    using std::sqrt;
    const Scalar a = params.alpha;
    const Scalar beta = projection(x, psi);
    const Scalar offset = a * sqrt(Scalar(3));

    KernelProfile<Scalar> p;
    p.beta = beta;
    p.t_max = beta;
    p.peak_value = phi_offset(a, Scalar(0));
    p.t_min_left = beta - offset;
    p.t_min_right = beta + offset;
    // phi_offset(a, a*sqrt(3)) = -2a^2 / (2 pi^2 16 a^4), exactly one eighth of the peak
    p.min_value = -p.peak_value / Scalar(8);
    p.zero_left = beta - a;
    p.zero_right = beta + a;
    return p;
}

}  // namespace abel
