#include "abel/reconstruction.hpp"

#include "abel/parallel.hpp"
#include "text_util.hpp"

#include <cmath>
#include <sstream>

namespace abel {

const char* to_string(Method m) {
    switch (m) {
        case Method::Naive: return "naive";
        case Method::Split: return "split";
        case Method::Oracle: return "oracle";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    if (name == "naive") return Method::Naive;
    if (name == "split") return Method::Split;
    if (name == "oracle") return Method::Oracle;
    throw std::invalid_argument("unknown method '" + name + "' (expected naive, split or oracle)");
}

void GridGeometry::validate() const {
    if (nx < 1 || ny < 1) throw std::invalid_argument("grid needs nx, ny >= 1");
    if (!(x_range.lo < x_range.hi) || !(y_range.lo < y_range.hi))
        throw std::invalid_argument("grid ranges must satisfy lo < hi");
}

namespace {

double lattice(const Interval<double>& range, int n, int i, bool edges) {
    if (edges) return n == 1 ? 0.5 * (range.lo + range.hi) : range.lo + range.length() * i / (n - 1);
    return range.lo + range.length() * (i + 0.5) / n;
}

}  // namespace

double GridGeometry::x(int ix) const { return lattice(x_range, nx, ix, include_edges); }
double GridGeometry::y(int iy) const { return lattice(y_range, ny, iy, include_edges); }

double reconstruct_point(const RadonData& source, const ReconSettings& settings, const Vec2<double>& x) {
    const auto& quad = settings.quad;
    if (const auto* phantom = std::get_if<Phantom<double>>(&source)) {
        switch (settings.method) {
            case Method::Naive: return abel_naive(*phantom, settings.params, x, quad);
            case Method::Split: return abel_split(*phantom, settings.params, x, quad);
            case Method::Oracle: return abel_oracle(*phantom, settings.params, x, settings.n_theta);
        }
    }
    const auto& sinogram = std::get<Sinogram>(source);
    switch (settings.method) {
        case Method::Naive: return abel_naive(sinogram, settings.params, x, quad);
        case Method::Split: return abel_split(sinogram, settings.params, x, quad);
        case Method::Oracle: break;
    }
    throw std::invalid_argument("the oracle method needs an analytic phantom, not a sinogram");
}

ReconGrid reconstruct_grid(const RadonData& source, const GridGeometry& geometry, const ReconSettings& settings) {
    geometry.validate();
    settings.params.validate();
    settings.quad.validate();
    if (settings.method == Method::Oracle && std::holds_alternative<Sinogram>(source))
        throw std::invalid_argument("the oracle method needs an analytic phantom, not a sinogram");

    ReconGrid grid{geometry, Eigen::ArrayXXd::Zero(geometry.nx, geometry.ny)};
    const auto n = static_cast<std::size_t>(geometry.nx) * static_cast<std::size_t>(geometry.ny);
    parallel_for(n, settings.threads, [&](std::size_t idx) {
        const int ix = static_cast<int>(idx % geometry.nx);
        const int iy = static_cast<int>(idx / geometry.nx);
        const Vec2<double> x = geometry.point(ix, iy);
        try {
            grid.values(ix, iy) = reconstruct_point(source, settings, x);
        } catch (const NumericalError& e) {
            throw NumericalError("at point (" + detail::format_exact(x.x()) + ", " + detail::format_exact(x.y()) +
                                 "): " + e.what());
        }
    });
    return grid;
}

ReconGrid truth_grid(const Phantom<double>& phantom, const GridGeometry& geometry) {
    geometry.validate();
    ReconGrid grid{geometry, Eigen::ArrayXXd::Zero(geometry.nx, geometry.ny)};
    for (int iy = 0; iy < geometry.ny; ++iy)
        for (int ix = 0; ix < geometry.nx; ++ix) grid.values(ix, iy) = local_average(phantom, geometry.point(ix, iy));
    return grid;
}

ReconReport compare(const ReconGrid& grid, const ReconGrid& reference) {
    if (!(grid.geometry == reference.geometry) || grid.values.rows() != reference.values.rows() ||
        grid.values.cols() != reference.values.cols())
        throw std::invalid_argument("cannot compare grids with different geometry");
    ReconReport r;
    const Eigen::ArrayXXd diff = grid.values - reference.values;
    r.rmse = std::sqrt(diff.square().mean());
    r.max_abs_err = diff.abs().maxCoeff();
    r.min_value = grid.values.minCoeff();
    r.max_value = grid.values.maxCoeff();
    return r;
}

std::size_t count_outside(const ReconGrid& grid, double lo, double hi, double tol) {
    return static_cast<std::size_t>(((grid.values < lo - tol) || (grid.values > hi + tol)).count());
}

std::string format_report(const ReconReport& r) {
    std::ostringstream os;
    os << "method " << r.method << '\n'
       << "alpha " << detail::format_shortest(r.alpha) << '\n'
       << "epsilon " << detail::format_shortest(r.epsilon) << '\n'
       << "reference " << r.reference << '\n'
       << "rmse " << detail::format_exact(r.rmse) << '\n'
       << "max_abs_err " << detail::format_exact(r.max_abs_err) << '\n'
       << "min_value " << detail::format_exact(r.min_value) << '\n'
       << "max_value " << detail::format_exact(r.max_value) << '\n';
    if (r.bound_violations) os << "bound_violations " << *r.bound_violations << '\n';
    return os.str();
}

}  // namespace abel
