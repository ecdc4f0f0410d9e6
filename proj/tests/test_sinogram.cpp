#include "abel/errors.hpp"
#include "abel/reconstruction.hpp"
#include "abel/sinogram.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

using namespace abel;
using V = Vec2<double>;

namespace {

const double pi = std::numbers::pi;

Phantom<double> disc_and_square() {
    return {Disc<double>{V(0.3, -0.2), 1.0, 1.0}, Rect<double>{V(-0.5, 0.5), V(0.4, 0.3), 0.5}};
}

std::string expect_format_error(const std::string& text) {
    std::istringstream is(text);
    try {
        read_sinogram(is);
    } catch (const FormatError& e) {
        return e.what();
    }
    FAIL("no FormatError for: " << text);
    return {};
}

}  // namespace

TEST_CASE("grid layout") {
    const Sinogram s(4, 8, -2.0, 2.0);
    CHECK(s.psi(0) == 0.0);
    CHECK(s.psi(2) == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(s.dt() == 0.5);
    CHECK(s.t(0) == -1.75);
    CHECK(s.t(7) == 1.75);
    CHECK((s.values == 0.0).all());
    CHECK_THROWS_AS(Sinogram(1, 8, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Sinogram(4, 8, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("samples match the closed-form transform") {
    const auto f = disc_and_square();
    const Sinogram s = sample(f, 12, 40, {-2.0, 2.0});
    for (int i = 0; i < s.n_psi; ++i)
        for (int j = 0; j < s.n_t; ++j) CHECK(s.values(i, j) == radon(f, s.t(j), s.psi(i)));
}

TEST_CASE("centred disc gives identical rows") {
    const Phantom<double> disc{Disc<double>{V(0, 0), 1.5, 2.0}};
    const Sinogram s = sample(disc, 36, 64, {-2.0, 2.0});
    for (int i = 1; i < s.n_psi; ++i) CHECK((s.values.row(i) - s.values.row(0)).abs().maxCoeff() <= 1e-15);
    // and each row is even in t
    for (int j = 0; j < s.n_t; ++j) CHECK(std::abs(s.values(0, j) - s.values(0, s.n_t - 1 - j)) <= 1e-15);
}

TEST_CASE("sampling is additive and vanishes for an empty phantom") {
    const Phantom<double> f{Disc<double>{V(0.2, 0.1), 0.8, 1.0}};
    const Phantom<double> g{Rect<double>{V(-0.4, 0.3), V(0.5, 0.2), -0.7}};
    Phantom<double> fg = f;
    fg.add(g.pieces[0]);
    const Sinogram a = sample(f, 10, 33, {-2.0, 2.0});
    const Sinogram b = sample(g, 10, 33, {-2.0, 2.0});
    const Sinogram ab = sample(fg, 10, 33, {-2.0, 2.0});
    CHECK((ab.values - a.values - b.values).abs().maxCoeff() <= 1e-14);
    CHECK((sample(Phantom<double>{}, 6, 9, {-1.0, 1.0}).values == 0.0).all());
}

TEST_CASE("thread count does not change the samples") {
    const auto f = disc_and_square();
    const Sinogram one = sample(f, 30, 50, {-2.0, 2.0}, 1);
    const Sinogram four = sample(f, 30, 50, {-2.0, 2.0}, 4);
    CHECK((one.values == four.values).all());
}

TEST_CASE("row interpolation") {
    Sinogram s(2, 4, 0.0, 4.0);  // centres at 0.5 1.5 2.5 3.5
    s.values.row(0) << 1.0, 3.0, 5.0, 7.0;
    CHECK(s.row_value(0, 0.5) == 1.0);
    CHECK(s.row_value(0, 1.0) == 2.0);
    CHECK(s.row_value(0, 3.5) == 7.0);
    CHECK(s.row_value(0, 0.25) == 0.5);  // ramps to zero at the edge
    CHECK(s.row_value(0, 3.75) == 3.5);
    CHECK(s.row_value(0, 0.0) == 0.0);
    CHECK(s.row_value(0, 4.0) == 0.0);
    CHECK(s.row_value(0, -1.0) == 0.0);
    CHECK(s.row_value(0, 9.0) == 0.0);
}

TEST_CASE("lookup wraps angles using the evenness of the transform") {
    const Phantom<double> f{Disc<double>{V(0.6, 0.3), 0.5, 1.0}};
    const Sinogram s = sample(f, 180, 801, {-2.0, 2.0});
    for (double psi : {0.3, 1.2, 2.9}) {
        const int row = static_cast<int>(std::lround(psi / pi * s.n_psi)) % s.n_psi;
        for (double t : {-0.4, 0.1, 0.7}) {
            const double direct = s.row_value(row, t);
            CHECK(s.at(t, psi) == direct);
            CHECK(s.at(-t, psi + pi) == direct);
            CHECK(s.at(t, psi + 2 * pi) == direct);
            CHECK(s.at(-t, psi - pi) == direct);
        }
    }
    // psi just below pi rounds to row n_psi, which is row 0 reflected
    CHECK(s.at(0.4, pi - 1e-9) == s.row_value(0, -0.4));
}

TEST_CASE("interpolated samples approximate the transform") {
    // rectangle chords jump in t, so only a disc is checked pointwise
    const Phantom<double> f{Disc<double>{V(0.3, -0.2), 1.0, 1.0}};
    const Sinogram s = sample(f, 90, 2048, {-2.5, 2.5});
    for (int i : {0, 17, 45, 80})
        for (double t : {-0.9, -0.11, 0.37, 1.05}) CHECK(std::abs(s.row_value(i, t) - radon(f, t, s.psi(i))) <= 1e-4);
}

TEST_CASE("support coverage") {
    const Phantom<double> f{Disc<double>{V(1, 0), 0.5, 1.0}};
    CHECK(covers_support(f, {-1.5, 1.5}));
    CHECK(covers_support(f, {-2.0, 2.0}));
    CHECK_FALSE(covers_support(f, {-1.0, 1.0}));
    CHECK_FALSE(covers_support(f, {-1.0, 2.0}));
}

TEST_CASE("write and read round-trip exactly") {
    const Sinogram s = sample(disc_and_square(), 7, 13, {-2.0 / 3.0, 1.9});
    std::stringstream ss;
    write_sinogram(ss, s);
    CHECK(ss.str().rfind("SINOGRAM v1 7 13 ", 0) == 0);
    const Sinogram back = read_sinogram(ss);
    CHECK(back.n_psi == 7);
    CHECK(back.n_t == 13);
    CHECK(back.t_min == s.t_min);
    CHECK(back.t_max == s.t_max);
    CHECK((back.values == s.values).all());

    std::stringstream again;
    write_sinogram(again, back);
    CHECK(again.str() == ss.str());
}

TEST_CASE("file round trip leaves no temporary behind") {
    const auto dir = std::filesystem::temp_directory_path() / "abel_test_sinogram";
    std::filesystem::create_directories(dir);
    const auto path = dir / "s.sino";
    const Sinogram s = sample(disc_and_square(), 5, 9, {-2.0, 2.0});
    write_sinogram(path, s);
    CHECK_FALSE(std::filesystem::exists(dir / "s.sino.tmp"));
    CHECK((read_sinogram(path).values == s.values).all());
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(read_sinogram(dir / "missing.sino"), FormatError);
}

TEST_CASE("header accepts key=value fields") {
    std::istringstream is("SINOGRAM v1 n_psi=2 n_t=3 t_min=-1 t_max=+1\n1 2 3\n\n4 5 6\n");
    const Sinogram s = read_sinogram(is);
    CHECK(s.n_psi == 2);
    CHECK(s.t_min == -1.0);
    CHECK(s.t_max == 1.0);
    CHECK(s.values(1, 2) == 6.0);
}

TEST_CASE("malformed files name the offending line") {
    CHECK(expect_format_error("").find("line 1") != std::string::npos);
    CHECK(expect_format_error("SINOGRAM v2 2 3 -1 1\n").find("line 1") != std::string::npos);
    CHECK(expect_format_error("SINOGRAM v1 n_t=2 n_psi=3 -1 1\n").find("n_psi") != std::string::npos);
    CHECK(expect_format_error("SINOGRAM v1 2 3 1 -1\n").find("t_min") != std::string::npos);

    const std::string truncated = expect_format_error("SINOGRAM v1 3 2 -1 1\n1 2\n3 4\n");
    CHECK(truncated.find("line 4") != std::string::npos);
    CHECK(truncated.find("truncated") != std::string::npos);
    CHECK(truncated.find("missing row 2 of 3") != std::string::npos);

    const std::string short_row = expect_format_error("SINOGRAM v1 2 3 -1 1\n1 2 3\n4 5\n");
    CHECK(short_row.find("line 3") != std::string::npos);
    CHECK(short_row.find("has 2 values, expected 3") != std::string::npos);

    const std::string text = expect_format_error("SINOGRAM v1 2 2 -1 1\n1 x\n3 4\n");
    CHECK(text.find("line 2") != std::string::npos);
    CHECK(text.find("non-numeric value 'x'") != std::string::npos);

    CHECK(expect_format_error("SINOGRAM v1 2 2 -1 1\n1 nan\n3 4\n").find("non-numeric") != std::string::npos);
    CHECK(expect_format_error("SINOGRAM v1 2 2 -1 1\n1 2\n3 4\n5 6\n").find("line 4") != std::string::npos);
}

TEST_CASE("reconstruction from a fine sinogram tracks the analytic data") {
    const auto f = disc_and_square();
    const Sinogram s = sample(f, 180, 2048, {-2.5, 2.5});
    const KernelParams<double> p(0.1);
    double sum = 0.0;
    int n = 0;
    for (double x1 = -1.8; x1 <= 1.8; x1 += 0.45)
        for (double x2 = -1.8; x2 <= 1.8; x2 += 0.45) {
            const V x(x1, x2);
            const double d = abel_split(s, p, x) - abel_split(f, p, x);
            sum += d * d;
            ++n;
        }
    CHECK(std::sqrt(sum / n) <= 2e-2);
}
