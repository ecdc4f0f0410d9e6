// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "abel/io.hpp"
#include "abel/kernel.hpp"
#include "abel/parallel.hpp"
#include "abel/phantom.hpp"
#include "abel/quadrature.hpp"
#include "abel/reconstruction.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace abel;
using V = Vec2<double>;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += what;
        if (!ok) detail += " [violated]";
    }
};

std::string num(double v, int digits = 6) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

const double kInf = std::numeric_limits<double>::infinity();

Phantom<double> two_disc_overlay() { return {Disc<double>{V(0, 0), 2.0, 1.0}, Disc<double>{V(1, 0), 0.5, 1.0}}; }

Phantom<double> centered_disc(double rho) { return {Disc<double>{V(0, 0), rho, 1.0}}; }

double disc_center_value(double rho, double a) { return 1.0 - a / std::sqrt(a * a + rho * rho); }

double max_over(const std::vector<V>& pts, const std::function<double(const V&)>& f) {
    double m = -kInf;
    for (const V& x : pts) m = std::max(m, f(x));
    return m;
}

std::vector<V> lattice(double lo, double hi, int n, bool cell_centres) {
    std::vector<V> pts;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const auto at = [&](int k) {
                return cell_centres ? lo + (k + 0.5) * (hi - lo) / n : lo + k * (hi - lo) / (n - 1);
            };
            pts.emplace_back(at(i), at(j));
        }
    return pts;
}

// Golden-section search for an extremum of f inside [a, b].
double golden_extremum(const std::function<double(double)>& f, double a, double b, bool maximize) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    const auto better = [&](double u, double v) { return maximize ? f(u) > f(v) : f(u) < f(v); };
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        if (better(c, d))
            b = d;
        else
            a = c;
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------

Outcome kernel_normalization() {
    Outcome o;
    for (double a : {0.01, 0.1, 1.0, 10.0}) {
        const KernelParams<double> p(a);
        const auto kk = [&](double r) { return k(p, r); };
        const double whole = integrate_half_line(kk, 0.0, a, 4000);
        o.require(std::abs(whole - 1.0) <= 1e-6, "a=" + num(a) + " int_0^inf K = " + num(whole, 12));
        // the literal truncated domain misses a tail of mass a/sqrt(a^2+R^2)
        const double r_max = 1e4 * a;
        const double cut = integrate_1d(kk, QuadSpec<double>{{Rule::Simpson, 200000}, {0.0, r_max}});
        const double expected = 1.0 - radial_tail_mass(a, r_max);
        o.require(std::abs(cut - expected) <= 1e-6,
                  "int_0^(1e4 a) K = " + num(cut, 12) + " (exact " + num(expected, 12) + ")");
    }
    return o;
}

Outcome h_normalization() {
    Outcome o;
    for (double a : {0.1, 1.0}) {
        const auto hr = [a](double r, double) { return h_radial(a, r); };
        const double whole = integrate_2d_polar(hr, kInf, 4000, 8, a);
        o.require(std::abs(whole - 1.0) <= 1e-6, "a=" + num(a) + " int_R2 H = " + num(whole, 12));
    }
    return o;
}

Outcome kernel_profile() {
    Outcome o;
    struct Case {
        double a;
        V x;
        double psi;
    };
    for (const Case& c : {Case{0.2, V(0, 0), 0.0}, Case{0.05, V(0.7, -0.3), 1.1}, Case{1.5, V(-2.0, 1.0), 2.6}}) {
        const KernelParams<double> p(c.a);
        const double beta = projection(c.x, c.psi);
        const auto f = [&](double t) { return phi(p, c.x, t, c.psi); };

        // dense scan over [beta - 6a, beta + 6a], then golden-section refinement
        const int n = 120001;
        const double lo = beta - 6 * c.a, step = 12 * c.a / (n - 1);
        int imax = 0, imin_l = 0, imin_r = n - 1;
        for (int i = 0; i < n; ++i) {
            const double t = lo + i * step;
            if (f(t) > f(lo + imax * step)) imax = i;
            if (t < beta && f(t) < f(lo + imin_l * step)) imin_l = i;
            if (t > beta && f(t) < f(lo + imin_r * step)) imin_r = i;
        }
        const auto refine = [&](int i, bool maximize) {
            return golden_extremum(f, lo + (i - 1) * step, lo + (i + 1) * step, maximize);
        };
        const double t_max = refine(imax, true);
        const double t_l = refine(imin_l, false), t_r = refine(imin_r, false);
        const double tol = c.a / 100;
        const double s3 = std::sqrt(3.0) * c.a;
        o.require(std::abs(t_max - beta) <= tol, "a=" + num(c.a) + " argmax-beta = " + num(t_max - beta, 3));
        o.require(std::abs(t_l - (beta - s3)) <= tol && std::abs(t_r - (beta + s3)) <= tol,
                  "minima offsets " + num(t_l - beta, 8) + ", " + num(t_r - beta, 8));
        const double ratio = f(t_l) / f(t_max);
        o.require(std::abs(ratio + 0.125) <= 1e-10 && std::abs(f(t_r) / f(t_max) + 0.125) <= 1e-10,
                  "min/max = " + num(ratio, 15));
    }
    return o;
}

Outcome disc_center() {
    Outcome o;
    struct Case {
        double rho, a;
    };
    for (const Case& c : {Case{2, 0.1}, Case{0.5, 0.05}, Case{1, 1}}) {
        const auto f = centered_disc(c.rho);
        const KernelParams<double> p(c.a);
        const double exact = disc_center_value(c.rho, c.a);
        const double oracle = abel_oracle(f, p, V(0, 0));
        const double split = abel_split(f, p, V(0, 0));
        o.require(std::abs(oracle - exact) <= 1e-6, "rho=" + num(c.rho) + " a=" + num(c.a) + " oracle err " +
                                                         num(oracle - exact, 3));
        o.require(std::abs(split - exact) <= 1e-3, "split err " + num(split - exact, 3));
    }
    return o;
}

Outcome convolution_equivalence() {
    Outcome o;
    const auto f = two_disc_overlay();
    const std::vector<V> pts = lattice(-2.5, 2.5, 5, false);
    for (double a : {0.5, 0.2}) {
        const KernelParams<double> p(a);
        const double diff = max_over(pts, [&](const V& x) { return std::abs(abel_split(f, p, x) - abel_oracle(f, p, x)); });
        o.require(diff <= 1e-2, "a=" + num(a) + " max|split-oracle| = " + num(diff, 3));
    }
    return o;
}

Outcome pointwise_convergence() {
    Outcome o;
    const auto f = centered_disc(2.0);
    double previous = kInf;
    bool decreasing = true;
    for (double a : {0.8, 0.4, 0.2, 0.1}) {
        const double err = 1.0 - abel_split(f, KernelParams<double>(a), V(0, 0));
        const double predicted = a / std::sqrt(a * a + 4.0);
        o.require(std::abs(err - predicted) <= 1e-3, "a=" + num(a) + " err " + num(err, 5) + " vs " + num(predicted, 5));
        decreasing = decreasing && err < previous;
        previous = err;
    }
    o.require(decreasing, "centre errors strictly decreasing");
    const double boundary = abel_split(f, KernelParams<double>(0.05), V(2, 0));
    o.require(std::abs(boundary - 0.5) <= 0.05, "A f(2,0) at a=0.05 = " + num(boundary, 6));
    return o;
}

Outcome bounds_no_overshoot() {
    Outcome o;
    GridGeometry g;
    g.nx = g.ny = 33;
    ReconSettings oracle, split;
    oracle.params = split.params = KernelParams<double>(0.1);
    oracle.method = Method::Oracle;
    split.method = Method::Split;
    oracle.threads = split.threads = default_thread_count();

    // disjoint discs, so f takes only the values 0 and 1
    const Phantom<double> zero_one{Disc<double>{V(-0.5, 0), 2.0, 1.0}, Disc<double>{V(2.2, 0), 0.5, 1.0}};
    // the overlaid pair from the figure, whose values are 0, 1 and 2
    const Phantom<double> overlay = two_disc_overlay();
    struct Case {
        const Phantom<double>* f;
        const char* name;
        double lo, hi;
    };
    for (const Case& c : {Case{&zero_one, "0/1 discs", 0.0, 1.0}, Case{&overlay, "overlay", 0.0, 2.0}}) {
        const auto* f = c.f;
        const double lo = c.lo, hi = c.hi;
        const std::string name = c.name;
        const ReconGrid ro = reconstruct_grid(*f, g, oracle);
        const ReconGrid rs = reconstruct_grid(*f, g, split);
        o.require(ro.values.minCoeff() >= lo - 1e-6 && ro.values.maxCoeff() <= hi + 1e-6,
                  name + " oracle in [" + num(ro.values.minCoeff(), 8) + ", " + num(ro.values.maxCoeff(), 8) +
                      "] vs [" + num(lo) + ", " + num(hi) + "]");
        o.require(rs.values.minCoeff() >= lo - 1e-2 && rs.values.maxCoeff() <= hi + 1e-2,
                  "split in [" + num(rs.values.minCoeff(), 8) + ", " + num(rs.values.maxCoeff(), 8) + "]");
    }
    return o;
}

Outcome uniform_convergence() {
    Outcome o;
    const auto f = centered_disc(2.0);
    const std::vector<V> pts = lattice(-1.0, 1.0, 9, true);
    const auto worst = [&](double a) {
        return max_over(pts, [&](const V& x) { return std::abs(abel_split(f, KernelParams<double>(a), x) - 1.0); });
    };
    const double e1 = worst(0.05), e2 = worst(0.025);
    const double at_corner = std::abs(abel_oracle(f, KernelParams<double>(0.05), pts.back()) - 1.0);
    o.require(e1 <= 0.03, "max err a=0.05: " + num(e1, 5) + " (oracle at " + num(pts.back().x(), 4) + "," +
                              num(pts.back().y(), 4) + ": " + num(at_corner, 5) + ")");
    o.require(e2 < e1, "max err a=0.025: " + num(e2, 5));
    return o;
}

Outcome figure_reproduction() {
    Outcome o;
    const auto f = two_disc_overlay();
    const GridGeometry g;  // 101 x 101 on [-3, 3]^2
    ReconSettings s;
    s.params = KernelParams<double>(0.01);
    s.threads = default_thread_count();
    const ReconGrid truth = truth_grid(f, g);
    s.method = Method::Split;
    const double split = compare(reconstruct_grid(f, g, s), truth).rmse;
    s.method = Method::Naive;
    const double naive = compare(reconstruct_grid(f, g, s), truth).rmse;
    o.require(split < naive, "rmse split " + num(split, 5) + " < naive " + num(naive, 5));
    o.require(split <= 0.05, "rmse split <= 0.05");
    return o;
}

Outcome unit_square_averages() {
    Outcome o;
    const Phantom<double> sq{Rect<double>{V(0, 0), V(1, 1), 1.0}};
    struct Case {
        V x;
        double value;
    };
    for (const Case& c : {Case{V(0.3, -0.2), 1.0}, Case{V(1, 0.4), 0.5}, Case{V(-1, 1), 0.25}, Case{V(1.5, 0.2), 0.0}}) {
        const double sf = local_average(sq, c.x);
        o.require(sf == c.value, "S(" + num(c.x.x()) + "," + num(c.x.y()) + ") = " + num(sf));
        double previous = kInf;
        for (double r : {1e-1, 1e-2, 1e-3, 1e-4}) {
            const double err = std::abs(ring_average(sq, c.x, r, 4096) - c.value);
            o.require(err <= 10 * r && err <= previous, "r=" + num(r) + " ring err " + num(err, 3));
            previous = err;
        }
    }
    return o;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + ABELRECON_PATH + "\" " + args;
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

Outcome determinism() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / ("abel_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    write_phantom(dir / "p.txt", two_disc_overlay());
    const std::string base = "reconstruct --phantom \"" + (dir / "p.txt").string() + "\" --alpha 0.1 --quiet";
    const int c1 = run_cli(base + " --threads 1 --out \"" + (dir / "t1").string() + "\"");
    const int c8 = run_cli(base + " --threads 8 --out \"" + (dir / "t8").string() + "\"");
    o.require(c1 == 0 && c8 == 0, "exit codes " + std::to_string(c1) + ", " + std::to_string(c8));
    const std::string a = slurp(dir / "t1.csv"), b = slurp(dir / "t8.csv");
    o.require(!a.empty() && a == b, "101x101 CSV byte-identical (" + std::to_string(a.size()) + " bytes)");
    fs::remove_all(dir);
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
    Outcome (*check)();
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "kernel normalization", 1, kernel_normalization},
        {2, "H normalization", 1, h_normalization},
        {3, "kernel profile", 1, kernel_profile},
        {4, "closed-form disc centre", 10, disc_center},
        {5, "convolution equivalence", 30, convolution_equivalence},
        {6, "pointwise convergence", 10, pointwise_convergence},
        {7, "bounds without overshoot", 60, bounds_no_overshoot},
        {8, "uniform convergence", 60, uniform_convergence},
        {9, "figure reproduction", 300, figure_reproduction},
        {10, "unit-square local averages", 1, unit_square_averages},
        {11, "thread determinism", 120, determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.require(secs < c.time_limit_s, "runtime " + num(secs, 3) + " s < " + num(c.time_limit_s) + " s");
        if (!o.pass) ++failures;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
