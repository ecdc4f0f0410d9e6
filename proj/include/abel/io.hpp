#pragma once

// Text formats.
//
// Phantom file: one piece per line, '#' starts a comment.
//   disc <cx> <cy> <radius> <amplitude>
//   rect <cx> <cy> <hx> <hy> <amplitude>
//
// Grid CSV: a '# grid nx ny x_lo x_hi y_lo y_hi cells|edges' line, the header
// 'x,y,value', then one row per point with x varying fastest.
//
// PGM: plain (P2) 8-bit image, top row = largest y, values mapped affinely
// from [min, max] to [0, 255]; the mapping is recorded in a comment line.

#include "phantom.hpp"
#include "reconstruction.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace abel {

Phantom<double> parse_phantom(std::istream& is);
Phantom<double> read_phantom(const std::filesystem::path& path);
void write_phantom(std::ostream& os, const Phantom<double>& phantom);
void write_phantom(const std::filesystem::path& path, const Phantom<double>& phantom);
std::string format_piece(const Piece<double>& piece);

void write_grid_csv(std::ostream& os, const ReconGrid& grid);
void write_grid_csv(const std::filesystem::path& path, const ReconGrid& grid);
ReconGrid read_grid_csv(std::istream& is);
ReconGrid read_grid_csv(const std::filesystem::path& path);

struct GrayMapping {
    double min_value = 0.0;
    double max_value = 0.0;
    int gray(double v) const;
};

void write_grid_pgm(std::ostream& os, const ReconGrid& grid);
void write_grid_pgm(const std::filesystem::path& path, const ReconGrid& grid);

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace abel
