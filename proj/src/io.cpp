#include "abel/io.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace abel {

namespace {

std::string_view strip_comment(std::string_view line) {
    const auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

double number_at(const std::vector<std::string_view>& tok, std::size_t i, std::size_t line_no) {
    double v = 0.0;
    if (!detail::parse_double(tok[i], v) || !std::isfinite(v))
        throw detail::line_error(line_no, "token " + std::to_string(i + 1) + " '" + std::string(tok[i]) +
                                              "' is not a finite number");
    return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open " + path.string());
    return is;
}

template <typename F>
auto with_path(const std::filesystem::path& path, F&& f) {
    try {
        return f();
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace

Phantom<double> parse_phantom(std::istream& is) {
    Phantom<double> phantom;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto tok = detail::split_ws(strip_comment(line));
        if (tok.empty()) continue;
        if (tok[0] == "disc") {
            if (tok.size() != 5) throw detail::line_error(line_no, "disc expects 4 numbers: cx cy radius amplitude");
            Disc<double> d{{number_at(tok, 1, line_no), number_at(tok, 2, line_no)},
                           number_at(tok, 3, line_no),
                           number_at(tok, 4, line_no)};
            if (!(d.radius > 0.0)) throw detail::line_error(line_no, "token 4: disc radius must be positive");
            phantom.pieces.emplace_back(d);
        } else if (tok[0] == "rect") {
            if (tok.size() != 6) throw detail::line_error(line_no, "rect expects 5 numbers: cx cy hx hy amplitude");
            Rect<double> r{{number_at(tok, 1, line_no), number_at(tok, 2, line_no)},
                           {number_at(tok, 3, line_no), number_at(tok, 4, line_no)},
                           number_at(tok, 5, line_no)};
            if (!(r.half_widths.minCoeff() > 0.0))
                throw detail::line_error(line_no, "tokens 4-5: rect half-widths must be positive");
            phantom.pieces.emplace_back(r);
        } else {
            throw detail::line_error(line_no, "token 1: unknown piece '" + std::string(tok[0]) +
                                                  "' (expected disc or rect)");
        }
    }
    return phantom;
}

Phantom<double> read_phantom(const std::filesystem::path& path) {
    auto is = open_input(path);
    return with_path(path, [&] { return parse_phantom(is); });
}

std::string format_piece(const Piece<double>& piece) {
    using detail::format_shortest;
    if (const auto* d = std::get_if<Disc<double>>(&piece))
        return "disc " + format_shortest(d->center.x()) + ' ' + format_shortest(d->center.y()) + ' ' +
               format_shortest(d->radius) + ' ' + format_shortest(d->amplitude);
    const auto& r = std::get<Rect<double>>(piece);
    return "rect " + format_shortest(r.center.x()) + ' ' + format_shortest(r.center.y()) + ' ' +
           format_shortest(r.half_widths.x()) + ' ' + format_shortest(r.half_widths.y()) + ' ' +
           format_shortest(r.amplitude);
}

void write_phantom(std::ostream& os, const Phantom<double>& phantom) {
    for (const auto& p : phantom.pieces) os << format_piece(p) << '\n';
}

void write_phantom(const std::filesystem::path& path, const Phantom<double>& phantom) {
    std::ostringstream os;
    write_phantom(os, phantom);
    write_file_atomic(path, os.str());
}

void write_grid_csv(std::ostream& os, const ReconGrid& grid) {
    using detail::format_exact;
    const auto& g = grid.geometry;
    os << "# grid " << g.nx << ' ' << g.ny << ' ' << format_exact(g.x_range.lo) << ' ' << format_exact(g.x_range.hi)
       << ' ' << format_exact(g.y_range.lo) << ' ' << format_exact(g.y_range.hi) << ' '
       << (g.include_edges ? "edges" : "cells") << '\n';
    os << "x,y,value\n";
    std::string row;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            row = format_exact(g.x(ix));
            row += ',';
            row += format_exact(g.y(iy));
            row += ',';
            row += format_exact(grid.values(ix, iy));
            row += '\n';
            os << row;
        }
    }
}

void write_grid_csv(const std::filesystem::path& path, const ReconGrid& grid) {
    std::ostringstream os;
    write_grid_csv(os, grid);
    write_file_atomic(path, os.str());
}

ReconGrid read_grid_csv(std::istream& is) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(is, line)) throw detail::line_error(1, "empty file, missing '# grid' line");
    const auto tok = detail::split_ws(line);
    ReconGrid grid;
    auto& g = grid.geometry;
    if (tok.size() != 9 || tok[0] != "#" || tok[1] != "grid" || !detail::parse_int(tok[2], g.nx) ||
        !detail::parse_int(tok[3], g.ny) || !detail::parse_double(tok[4], g.x_range.lo) ||
        !detail::parse_double(tok[5], g.x_range.hi) || !detail::parse_double(tok[6], g.y_range.lo) ||
        !detail::parse_double(tok[7], g.y_range.hi) || (tok[8] != "cells" && tok[8] != "edges"))
        throw detail::line_error(1, "expected '# grid nx ny x_lo x_hi y_lo y_hi cells|edges'");
    g.include_edges = tok[8] == "edges";
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw detail::line_error(1, e.what());
    }
    ++line_no;
    if (!std::getline(is, line) || detail::split_ws(line).size() != 1 || detail::split_ws(line)[0] != "x,y,value")
        throw detail::line_error(2, "expected header 'x,y,value'");

    grid.values.resize(g.nx, g.ny);
    const long total = static_cast<long>(g.nx) * g.ny;
    long count = 0;
    while (count < total && std::getline(is, line)) {
        ++line_no;
        std::string_view rest = line;
        while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ')) rest.remove_suffix(1);
        if (rest.empty()) continue;
        double f[3];
        for (int c = 0; c < 3; ++c) {
            const auto comma = rest.find(',');
            const auto field = c < 2 ? rest.substr(0, comma) : rest;
            if ((c < 2 && comma == std::string_view::npos) || !detail::parse_double(field, f[c]))
                throw detail::line_error(line_no, "expected three comma-separated numbers");
            if (c < 2) rest.remove_prefix(comma + 1);
        }
        const int ix = static_cast<int>(count % g.nx);
        const int iy = static_cast<int>(count / g.nx);
        if (f[0] != g.x(ix) || f[1] != g.y(iy))
            throw detail::line_error(line_no, "point does not match the grid geometry");
        grid.values(ix, iy) = f[2];
        ++count;
    }
    if (count < total)
        throw detail::line_error(line_no + 1, "truncated file: " + std::to_string(count) + " of " +
                                                  std::to_string(total) + " points");
    return grid;
}

ReconGrid read_grid_csv(const std::filesystem::path& path) {
    auto is = open_input(path);
    return with_path(path, [&] { return read_grid_csv(is); });
}

int GrayMapping::gray(double v) const {
    if (!(max_value > min_value)) return 0;
    const double scaled = 255.0 * (v - min_value) / (max_value - min_value);
    return static_cast<int>(std::lround(std::clamp(scaled, 0.0, 255.0)));
}

void write_grid_pgm(std::ostream& os, const ReconGrid& grid) {
    const auto& g = grid.geometry;
    const GrayMapping map{grid.values.minCoeff(), grid.values.maxCoeff()};
    os << "P2\n"
       << "# gray = round(255 * (value - min) / (max - min)) min=" << detail::format_exact(map.min_value)
       << " max=" << detail::format_exact(map.max_value) << '\n'
       << g.nx << ' ' << g.ny << '\n'
       << "255\n";
    for (int iy = g.ny - 1; iy >= 0; --iy) {
        std::string line;
        for (int ix = 0; ix < g.nx; ++ix) {
            const std::string px = std::to_string(map.gray(grid.values(ix, iy)));
            // plain PGM lines must stay under 70 characters
            if (!line.empty() && line.size() + 1 + px.size() > 69) {
                os << line << '\n';
                line.clear();
            }
            if (!line.empty()) line += ' ';
            line += px;
        }
        os << line << '\n';
    }
}

void write_grid_pgm(const std::filesystem::path& path, const ReconGrid& grid) {
    std::ostringstream os;
    write_grid_pgm(os, grid);
    write_file_atomic(path, os.str());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw FormatError("cannot open " + tmp.string() + " for writing");
        os << content;
        if (!os) throw FormatError("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace abel
