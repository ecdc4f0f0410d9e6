#include "abel/sinogram.hpp"

#include "abel/parallel.hpp"
#include "text_util.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace abel {

Sinogram::Sinogram(int n_psi_, int n_t_, double t_min_, double t_max_)
    : n_psi(n_psi_), n_t(n_t_), t_min(t_min_), t_max(t_max_), values(Eigen::ArrayXXd::Zero(n_psi_, n_t_)) {
    validate();
}

double Sinogram::psi(int i) const { return i * std::numbers::pi / n_psi; }

double Sinogram::t(int j) const { return t_min + (j + 0.5) * dt(); }

double Sinogram::row_value(int i, double t) const {
    if (!(t > t_min && t < t_max)) return 0.0;
    // position in units of cells, relative to the first centre
    const double s = (t - t_min) / dt() - 0.5;
    if (s < 0.0) return values(i, 0) * (s + 0.5) / 0.5;
    if (s >= n_t - 1) return values(i, n_t - 1) * (n_t - 0.5 - s) / 0.5;
    const int j = static_cast<int>(s);
    const double frac = s - j;
    return (1.0 - frac) * values(i, j) + frac * values(i, j + 1);
}

double Sinogram::at(double t, double psi) const {
    const double period = std::numbers::pi;
    double wrapped = std::fmod(psi, period);
    bool flipped = std::fmod(std::floor(psi / period), 2.0) != 0.0;
    if (wrapped < 0.0) wrapped += period;
    long row = std::lround(wrapped / period * n_psi);
    if (row == n_psi) {
        row = 0;
        flipped = !flipped;
    }
    return row_value(static_cast<int>(row), flipped ? -t : t);
}

void Sinogram::validate() const {
    if (n_psi < 2 || n_t < 2) throw std::invalid_argument("sinogram needs n_psi >= 2 and n_t >= 2");
    if (!(t_min < t_max) || !std::isfinite(t_min) || !std::isfinite(t_max))
        throw std::invalid_argument("sinogram needs finite t_min < t_max");
    if (values.rows() != n_psi || values.cols() != n_t) throw std::invalid_argument("sinogram shape mismatch");
    if (!values.allFinite()) throw std::invalid_argument("sinogram values must be finite");
}

Sinogram sample(const Phantom<double>& phantom, int n_psi, int n_t, Interval<double> t_range, int threads) {
    Sinogram s(n_psi, n_t, t_range.lo, t_range.hi);
    parallel_for(static_cast<std::size_t>(n_psi), threads, [&](std::size_t i) {
        const double psi = s.psi(static_cast<int>(i));
        for (int j = 0; j < n_t; ++j) s.values(static_cast<Eigen::Index>(i), j) = radon(phantom, s.t(j), psi);
    });
    return s;
}

bool covers_support(const Phantom<double>& phantom, Interval<double> t_range) {
    const double r = support_radius(phantom);
    return t_range.lo <= -r && r <= t_range.hi;
}

void write_sinogram(std::ostream& os, const Sinogram& s) {
    s.validate();
    os << "SINOGRAM v1 " << s.n_psi << ' ' << s.n_t << ' ' << detail::format_exact(s.t_min) << ' '
       << detail::format_exact(s.t_max) << '\n';
    std::string line;
    for (int i = 0; i < s.n_psi; ++i) {
        line.clear();
        for (int j = 0; j < s.n_t; ++j) {
            if (j) line += ' ';
            line += detail::format_exact(s.values(i, j));
        }
        line += '\n';
        os << line;
    }
}

namespace {

// Header fields may be positional or written as key=value.
void parse_header(const std::vector<std::string_view>& tok, Sinogram& s) {
    if (tok.size() != 6 || tok[0] != "SINOGRAM" || tok[1] != "v1")
        throw detail::line_error(1, "expected header 'SINOGRAM v1 n_psi n_t t_min t_max'");
    const char* keys[] = {"n_psi", "n_t", "t_min", "t_max"};
    std::string_view fields[4];
    for (int f = 0; f < 4; ++f) {
        std::string_view v = tok[2 + f];
        const auto eq = v.find('=');
        if (eq != std::string_view::npos) {
            if (v.substr(0, eq) != keys[f])
                throw detail::line_error(1, "expected key '" + std::string(keys[f]) + "' in header");
            v.remove_prefix(eq + 1);
        }
        fields[f] = v;
    }
    if (!detail::parse_int(fields[0], s.n_psi) || !detail::parse_int(fields[1], s.n_t))
        throw detail::line_error(1, "n_psi and n_t must be integers");
    if (!detail::parse_double(fields[2], s.t_min) || !detail::parse_double(fields[3], s.t_max))
        throw detail::line_error(1, "t_min and t_max must be numbers");
    if (s.n_psi < 2 || s.n_t < 2) throw detail::line_error(1, "n_psi and n_t must be at least 2");
    if (!(s.t_min < s.t_max)) throw detail::line_error(1, "t_min must be below t_max");
}

}  // namespace

Sinogram read_sinogram(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw detail::line_error(1, "empty file, missing SINOGRAM header");
    Sinogram s;
    parse_header(detail::split_ws(line), s);
    s.values.resize(s.n_psi, s.n_t);

    std::size_t line_no = 1;
    int row = 0;
    while (row < s.n_psi && std::getline(is, line)) {
        ++line_no;
        const auto tok = detail::split_ws(line);
        if (tok.empty()) continue;
        if (static_cast<int>(tok.size()) != s.n_t)
            throw detail::line_error(line_no, "row " + std::to_string(row) + " has " + std::to_string(tok.size()) +
                                                  " values, expected " + std::to_string(s.n_t));
        for (int j = 0; j < s.n_t; ++j) {
            double v = 0.0;
            if (!detail::parse_double(tok[j], v) || !std::isfinite(v))
                throw detail::line_error(line_no, "non-numeric value '" + std::string(tok[j]) + "' in column " +
                                                      std::to_string(j));
            s.values(row, j) = v;
        }
        ++row;
    }
    if (row < s.n_psi)
        throw detail::line_error(line_no + 1, "truncated file: missing row " + std::to_string(row) + " of " +
                                                  std::to_string(s.n_psi));
    while (std::getline(is, line)) {
        ++line_no;
        if (!detail::split_ws(line).empty()) throw detail::line_error(line_no, "unexpected data after last row");
    }
    return s;
}

void write_sinogram(const std::filesystem::path& path, const Sinogram& s) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw FormatError("cannot open " + tmp.string() + " for writing");
        write_sinogram(os, s);
        if (!os) throw FormatError("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

Sinogram read_sinogram(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open " + path.string());
    try {
        return read_sinogram(is);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace abel
