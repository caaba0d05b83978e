#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace eitmem {

using cplx = std::complex<double>;

/// Uniform periodic z-grid: z_j = z_min + j dz, dz = (z_max - z_min) / n.
struct GridSpec
{
    double z_min = -10e-3;
    double z_max = 10e-3;
    std::size_t n_points = 4096;

    double length() const { return z_max - z_min; }
    double dz() const { return length() / static_cast<double>(n_points); }
    double z(std::size_t j) const { return z_min + static_cast<double>(j) * dz(); }

    /// Wavenumber of DFT bin m in natural (unshifted) order, 2 pi m' / length
    /// with m' in [-n/2, n/2).
    double wavenumber(std::size_t m) const;
    std::vector<double> wavenumbers() const;

    /// n_points >= 64 and a power of two, z_max > z_min.
    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

struct FieldGrid
{
    GridSpec grid;
    std::vector<cplx> values;

    FieldGrid() = default;
    explicit FieldGrid(const GridSpec& g) : grid(g), values(g.n_points) {}
    FieldGrid(const GridSpec& g, std::vector<cplx> v);

    std::size_t size() const { return values.size(); }
    double max_abs() const;
    double max_abs_imag() const;
    /// integral of |f|^2 dz (rectangle rule, exact for the periodic DFT view)
    double norm2() const;
    bool all_finite() const;
    /// index of max |f|
    std::size_t argmax_abs() const;

    FieldGrid& operator*=(cplx a);
};

FieldGrid operator*(cplx a, const FieldGrid& f);
FieldGrid operator+(const FieldGrid& a, const FieldGrid& b);
FieldGrid operator-(const FieldGrid& a, const FieldGrid& b);

} // namespace eitmem
