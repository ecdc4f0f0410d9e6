#pragma once

// Sampled parallel-beam Radon data. Row i holds angle psi_i = i*pi/n_psi,
// column j holds offset t_j = t_min + (j + 1/2) * (t_max - t_min) / n_t.
//
// File format (ASCII, one header line then n_psi rows of n_t values):
//   SINOGRAM v1 <n_psi> <n_t> <t_min> <t_max>
// Values are written with 17 significant digits, so doubles round-trip exactly.

#include "phantom.hpp"
#include "quadrature.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>

namespace abel {

struct Sinogram {
    int n_psi = 0;
    int n_t = 0;
    double t_min = 0.0;
    double t_max = 0.0;
    Eigen::ArrayXXd values;  // n_psi x n_t

    Sinogram() = default;
    Sinogram(int n_psi_, int n_t_, double t_min_, double t_max_);

    double psi(int i) const;
    double t(int j) const;
    double dt() const { return (t_max - t_min) / n_t; }

    /// Linear interpolation along row i between cell centres; the profile is
    /// pinned to zero at t_min and t_max and vanishes outside.
    double row_value(int i, double t) const;

    /// Nearest row in psi (wrapping with Rf(t, psi + pi) = Rf(-t, psi)), linear in t.
    double at(double t, double psi) const;

    void validate() const;
};

/// values(i, j) = radon(phantom, t_j, psi_i).
Sinogram sample(const Phantom<double>& phantom, int n_psi, int n_t, Interval<double> t_range, int threads = 1);

/// True when [-R, R] lies within t_range, R the phantom's support radius.
bool covers_support(const Phantom<double>& phantom, Interval<double> t_range);

void write_sinogram(std::ostream& os, const Sinogram& s);
Sinogram read_sinogram(std::istream& is);

/// Writes through a temporary file in the same directory, then renames.
void write_sinogram(const std::filesystem::path& path, const Sinogram& s);
Sinogram read_sinogram(const std::filesystem::path& path);

}  // namespace abel
