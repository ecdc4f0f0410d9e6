// abelrecon: phantoms, sinograms and Abel-means reconstructions from the command line.
//
// Exit codes: 0 success, 2 usage error, 3 input-file error, 4 numerical failure.

#include "abel/io.hpp"
#include "abel/kernel.hpp"
#include "abel/parallel.hpp"
#include "abel/reconstruction.hpp"
#include "abel/sinogram.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace abel;

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitNumerical = 4;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GridFlags {
    GridGeometry geometry;

    void attach(CLI::App* app) {
        app->add_option("--nx", geometry.nx, "Grid points along x")->check(CLI::PositiveNumber);
        app->add_option("--ny", geometry.ny, "Grid points along y")->check(CLI::PositiveNumber);
        app->add_option("--xmin", geometry.x_range.lo, "Grid x lower bound");
        app->add_option("--xmax", geometry.x_range.hi, "Grid x upper bound");
        app->add_option("--ymin", geometry.y_range.lo, "Grid y lower bound");
        app->add_option("--ymax", geometry.y_range.hi, "Grid y upper bound");
        app->add_flag("--edges", geometry.include_edges, "Place points on range endpoints instead of cell centres");
    }

    void validate() const {
        try {
            geometry.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double to_number(const std::string& token, const std::string& flag) {
    double v = 0.0;
    const char* first = token.data() + (token.starts_with('+') ? 1 : 0);
    const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v))
        throw UsageError(flag + ": '" + token + "' is not a finite number");
    return v;
}

void emit(const std::string& out, const std::string& content) {
    if (out.empty() || out == "-")
        std::cout << content;
    else
        write_file_atomic(out, content);
}

struct Common {
    std::string out;
    int threads = default_thread_count();
    bool quiet = false;

    void attach(CLI::App* app, const std::string& out_help) {
        app->add_option("--out", out, out_help);
        app->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
        app->add_flag("--quiet", quiet, "Suppress warnings and reports on stdout/stderr");
    }

    void warn(const std::string& msg) const {
        if (!quiet) std::cerr << "warning: " << msg << '\n';
    }
};

// ---------------------------------------------------------------------------

struct PhantomCmd {
    Common common;
    GridFlags grid;
    std::vector<std::vector<std::string>> discs;
    std::vector<std::vector<std::string>> rects;
    std::string truth_grid;
    CLI::App* app = nullptr;
    CLI::Option* disc_opt = nullptr;
    CLI::Option* rect_opt = nullptr;

    void attach(CLI::App& root) {
        app = root.add_subcommand("phantom", "Write a phantom file (and optionally its exact local-average grid)");
        disc_opt = app->add_option("--disc", discs, "Disc piece: CX CY RADIUS AMPLITUDE")->type_size(4)->allow_extra_args(false);
        rect_opt = app->add_option("--rect", rects, "Rectangle piece: CX CY HX HY AMPLITUDE")->type_size(5)->allow_extra_args(false);
        app->add_option("--truth-grid", truth_grid, "Write exact local averages on the grid to this CSV");
        common.attach(app, "Phantom file (default stdout)");
        grid.attach(app);
    }

    int run() const {
        grid.validate();
        Phantom<double> phantom;
        std::size_t next_disc = 0, next_rect = 0, disc_tokens = 0, rect_tokens = 0;
        // parse_order lists one entry per consumed token
        for (const CLI::Option* opt : app->parse_order()) {
            if (opt == disc_opt && ++disc_tokens % 4 == 0) {
                const auto& v = discs.at(next_disc++);
                const std::string where = "--disc #" + std::to_string(next_disc);
                Disc<double> d{{to_number(v[0], where + " token 1"), to_number(v[1], where + " token 2")},
                               to_number(v[2], where + " token 3"),
                               to_number(v[3], where + " token 4")};
                if (!(d.radius > 0.0)) throw UsageError(where + " token 3: radius must be positive");
                phantom.pieces.emplace_back(d);
            } else if (opt == rect_opt && ++rect_tokens % 5 == 0) {
                const auto& v = rects.at(next_rect++);
                const std::string where = "--rect #" + std::to_string(next_rect);
                Rect<double> r{{to_number(v[0], where + " token 1"), to_number(v[1], where + " token 2")},
                               {to_number(v[2], where + " token 3"), to_number(v[3], where + " token 4")},
                               to_number(v[4], where + " token 5")};
                if (!(r.half_widths.minCoeff() > 0.0)) throw UsageError(where + " tokens 3-4: half-widths must be positive");
                phantom.pieces.emplace_back(r);
            }
        }
        std::ostringstream os;
        write_phantom(os, phantom);
        emit(common.out, os.str());
        if (!truth_grid.empty()) write_grid_csv(truth_grid, abel::truth_grid(phantom, grid.geometry));
        return 0;
    }
};

struct SinogramCmd {
    Common common;
    std::string phantom_path;
    int n_psi = 180;
    int n_t = 512;
    double t_min = -3.0;
    double t_max = 3.0;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("sinogram", "Sample a phantom's Radon transform into a SINOGRAM v1 file");
        app->add_option("--phantom", phantom_path, "Phantom file")->required();
        app->add_option("--npsi", n_psi, "Number of angles in [0, pi)")->check(CLI::Range(2, 1 << 20));
        app->add_option("--nt", n_t, "Number of offsets")->check(CLI::Range(2, 1 << 24));
        app->add_option("--tmin", t_min, "Smallest offset");
        app->add_option("--tmax", t_max, "Largest offset");
        common.attach(app, "Output path (required)");
        app->get_option("--out")->required();
    }

    int run() const {
        if (!(t_min < t_max)) throw UsageError("--tmin must be below --tmax");
        const auto phantom = read_phantom(phantom_path);
        const Interval<double> range{t_min, t_max};
        if (!covers_support(phantom, range))
            common.warn("t-range [" + fmt(t_min) + ", " + fmt(t_max) + "] does not cover the phantom support radius " +
                        fmt(support_radius(phantom)));
        write_sinogram(common.out, sample(phantom, n_psi, n_t, range, common.threads));
        return 0;
    }
};

struct ReconstructCmd {
    Common common;
    GridFlags grid;
    std::string phantom_path;
    std::string sinogram_path;
    std::string method = "split";
    double alpha = 0.1;
    double epsilon_factor = 2.0;
    int t_inner = 64;
    int t_outer = 512;
    int t_naive = 512;
    int n_psi = 180;
    int n_theta = 4096;
    double bound_tol = 1e-6;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("reconstruct", "Evaluate A_alpha f on a grid; writes PREFIX.csv, PREFIX.pgm, PREFIX.txt");
        auto* ph = app->add_option("--phantom", phantom_path, "Phantom file (analytic Radon data)");
        auto* si = app->add_option("--sinogram", sinogram_path, "SINOGRAM v1 file");
        ph->excludes(si);
        app->add_option("--method", method, "naive, split or oracle")
            ->check(CLI::IsMember({"naive", "split", "oracle"}));
        app->add_option("--alpha", alpha, "Abel parameter alpha > 0")->check(CLI::PositiveNumber);
        app->add_option("--epsilon-factor", epsilon_factor, "Split half-width in units of alpha")
            ->check(CLI::PositiveNumber);
        app->add_option("--t-inner", t_inner, "Simpson panels on [beta - eps, beta + eps]")->check(CLI::PositiveNumber);
        app->add_option("--t-outer", t_outer, "Simpson panels on each tail")->check(CLI::PositiveNumber);
        app->add_option("--t-naive", t_naive, "Simpson panels of the single t-rule (naive)")->check(CLI::PositiveNumber);
        app->add_option("--npsi", n_psi, "Midpoint angles in psi (analytic source)")->check(CLI::PositiveNumber);
        app->add_option("--ntheta", n_theta, "Ray directions of the oracle")->check(CLI::PositiveNumber);
        app->add_option("--bound-tol", bound_tol, "Tolerance when counting values outside the phantom's range")
            ->check(CLI::NonNegativeNumber);
        common.attach(app, "Output prefix (default 'recon')");
        grid.attach(app);
    }

    int run() const {
        grid.validate();
        if (phantom_path.empty() == sinogram_path.empty())
            throw UsageError("reconstruct needs exactly one of --phantom or --sinogram");
        const Method m = parse_method(method);
        if (m == Method::Oracle && !sinogram_path.empty())
            throw UsageError("--method oracle needs --phantom (the oracle does not use Radon data)");

        ReconSettings settings;
        settings.params = KernelParams<double>(alpha, epsilon_factor);
        settings.method = m;
        settings.quad.inner = {Rule::Simpson, t_inner};
        settings.quad.outer = {Rule::Simpson, t_outer};
        settings.quad.naive = {Rule::Simpson, t_naive};
        settings.quad.n_psi = n_psi;
        settings.n_theta = n_theta;
        settings.threads = common.threads;
        try {
            settings.quad.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }

        RadonData source = phantom_path.empty() ? RadonData(read_sinogram(sinogram_path))
                                                : RadonData(read_phantom(phantom_path));

        if (alpha < 1e-6)
            common.warn("alpha < 1e-6: kernel peak 1/(2 pi^2 alpha^2) exceeds 5e10; expect loss of accuracy");
        if (m == Method::Naive) {
            const double width = std::visit(
                [](const auto& s) {
                    if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Sinogram>)
                        return s.t_max - s.t_min;
                    else
                        return 2.0 * support_radius(s);
                },
                source);
            const double panel = width / t_naive;
            if (alpha < 4.0 * panel)
                common.warn("alpha = " + fmt(alpha) + " is below 4 t-panel widths (" + fmt(4.0 * panel) +
                            "); the kernel peak can fall between samples. Consider --method split.");
        }

        const ReconGrid result = reconstruct_grid(source, grid.geometry, settings);

        ReconReport report;
        if (const auto* phantom = std::get_if<Phantom<double>>(&source)) {
            report = compare(result, truth_grid(*phantom, grid.geometry));
            report.reference = "Sf";
            const auto [lo, hi] = value_bounds(*phantom);
            report.bound_violations = count_outside(result, lo, hi, bound_tol);
        } else {
            report.min_value = result.values.minCoeff();
            report.max_value = result.values.maxCoeff();
            report.reference = "none";
        }
        report.method = to_string(m);
        report.alpha = alpha;
        report.epsilon = m == Method::Split ? settings.params.epsilon() : 0.0;

        const std::string prefix = common.out.empty() ? "recon" : common.out;
        write_grid_csv(prefix + ".csv", result);
        write_grid_pgm(prefix + ".pgm", result);
        const std::string text = format_report(report);
        write_file_atomic(prefix + ".txt", text);
        if (!common.quiet) std::cout << text;
        return 0;
    }
};

struct CompareCmd {
    Common common;
    std::vector<std::string> grids;
    std::string truth_path;
    double bound_tol = 1e-6;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("compare", "Error metrics of a grid CSV against another grid or a phantom's Sf");
        app->add_option("grids", grids, "GRID.csv [REFERENCE.csv]")->required()->expected(1, 2);
        app->add_option("--truth", truth_path, "Phantom file whose exact Sf is the reference");
        app->add_option("--bound-tol", bound_tol, "Tolerance when counting values outside the phantom's range")
            ->check(CLI::NonNegativeNumber);
        common.attach(app, "Report file (default stdout)");
    }

    int run() const {
        if ((grids.size() == 2) == !truth_path.empty())
            throw UsageError("compare needs either a reference grid or --truth, not both");
        const ReconGrid grid = read_grid_csv(grids[0]);
        ReconReport report;
        if (!truth_path.empty()) {
            const auto phantom = read_phantom(truth_path);
            report = compare(grid, truth_grid(phantom, grid.geometry));
            report.reference = "Sf";
            const auto [lo, hi] = value_bounds(phantom);
            report.bound_violations = count_outside(grid, lo, hi, bound_tol);
        } else {
            const ReconGrid reference = read_grid_csv(grids[1]);
            if (!(reference.geometry == grid.geometry)) throw UsageError("grids have different geometry");
            report = compare(grid, reference);
            report.reference = grids[1];
        }
        report.method = grids[0];
        const std::string text = format_report(report);
        if (common.out.empty() || common.out == "-") {
            if (!common.quiet) std::cout << text;
        } else {
            write_file_atomic(common.out, text);
        }
        return 0;
    }
};

struct KernelProfileCmd {
    Common common;
    double alpha = 0.2;
    double t_min = -1.0;
    double t_max = 1.0;
    int n = 401;
    std::vector<double> x{0.0, 0.0};
    double psi = 0.0;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("kernel-profile", "Sample t -> phi_alpha(x, t, psi) with its critical points");
        app->add_option("--alpha", alpha, "Abel parameter alpha > 0")->check(CLI::PositiveNumber);
        app->add_option("--tmin", t_min, "First t sample");
        app->add_option("--tmax", t_max, "Last t sample");
        app->add_option("--n", n, "Number of samples")->check(CLI::Range(2, 1 << 24));
        app->add_option("--x", x, "Evaluation point X1 X2")->expected(2);
        app->add_option("--psi", psi, "Line normal angle");
        common.attach(app, "CSV file (default stdout)");
    }

    int run() const {
        if (!(t_min < t_max)) throw UsageError("--tmin must be below --tmax");
        const KernelParams<double> params(alpha);
        const Vec2<double> point(x[0], x[1]);
        const auto p = profile(params, point, psi);
        if (alpha < 1e-6)
            common.warn("alpha < 1e-6: kernel peak 1/(2 pi^2 alpha^2) exceeds 5e10");
        std::ostringstream os;
        os.precision(17);
        os << "# beta=" << p.beta << " t_max=" << p.t_max << " peak_value=" << p.peak_value
           << " t_min_left=" << p.t_min_left << " t_min_right=" << p.t_min_right << " min_value=" << p.min_value
           << " zero_left=" << p.zero_left << " zero_right=" << p.zero_right << '\n';
        os << "t,phi\n";
        for (int i = 0; i < n; ++i) {
            const double t = i == n - 1 ? t_max : t_min + (t_max - t_min) * i / (n - 1);
            os << t << ',' << phi(params, point, t, psi) << '\n';
        }
        emit(common.out, os.str());
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Abel-means inverse Radon transform: phantoms, sinograms, reconstructions"};
    app.require_subcommand(1);
    PhantomCmd phantom;
    SinogramCmd sinogram;
    ReconstructCmd reconstruct;
    CompareCmd compare_cmd;
    KernelProfileCmd kernel_profile;
    phantom.attach(app);
    sinogram.attach(app);
    reconstruct.attach(app);
    compare_cmd.attach(app);
    kernel_profile.attach(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        for (const CLI::App* sub : app.get_subcommands()) {
            const std::string name = sub->get_name();
            if (name == "phantom") return phantom.run();
            if (name == "sinogram") return sinogram.run();
            if (name == "reconstruct") return reconstruct.run();
            if (name == "compare") return compare_cmd.run();
            if (name == "kernel-profile") return kernel_profile.run();
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const FormatError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
