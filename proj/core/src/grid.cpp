#include "eitmem/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "eitmem/error.hpp"

namespace eitmem {

double GridSpec::wavenumber(std::size_t m) const
{
    const auto n = static_cast<std::ptrdiff_t>(n_points);
    auto mm = static_cast<std::ptrdiff_t>(m);
    if (mm >= n / 2) {
        mm -= n;
    }
    return 2.0 * std::numbers::pi * static_cast<double>(mm) / length();
}

std::vector<double> GridSpec::wavenumbers() const
{
    std::vector<double> k(n_points);
    for (std::size_t m = 0; m < n_points; ++m) {
        k[m] = wavenumber(m);
    }
    return k;
}

void GridSpec::validate() const
{
    require(std::isfinite(z_min) && std::isfinite(z_max) && z_max > z_min,
            ErrorCategory::invalid_input, "grid needs finite z_max > z_min");
    require(n_points >= 64, ErrorCategory::invalid_input, "grid needs n_points >= 64");
    require(std::has_single_bit(n_points), ErrorCategory::invalid_input,
            "grid n_points must be a power of two");
}

FieldGrid::FieldGrid(const GridSpec& g, std::vector<cplx> v) : grid(g), values(std::move(v))
{
    require(values.size() == grid.n_points, ErrorCategory::invalid_input,
            "field length does not match grid");
}

double FieldGrid::max_abs() const
{
    double m = 0.0;
    for (const auto& v : values) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double FieldGrid::max_abs_imag() const
{
    double m = 0.0;
    for (const auto& v : values) {
        m = std::max(m, std::abs(v.imag()));
    }
    return m;
}

double FieldGrid::norm2() const
{
    double s = 0.0;
    for (const auto& v : values) {
        s += std::norm(v);
    }
    return s * grid.dz();
}

bool FieldGrid::all_finite() const
{
    return std::all_of(values.begin(), values.end(), [](const cplx& v) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
}

std::size_t FieldGrid::argmax_abs() const
{
    std::size_t best = 0;
    double m = -1.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double a = std::norm(values[j]);
        if (a > m) {
            m = a;
            best = j;
        }
    }
    return best;
}

FieldGrid& FieldGrid::operator*=(cplx a)
{
    for (auto& v : values) {
        v *= a;
    }
    return *this;
}

FieldGrid operator*(cplx a, const FieldGrid& f)
{
    FieldGrid out = f;
    out *= a;
    return out;
}

FieldGrid operator+(const FieldGrid& a, const FieldGrid& b)
{
    require(a.grid == b.grid, ErrorCategory::invalid_input, "field grids differ");
    FieldGrid out = a;
    for (std::size_t j = 0; j < out.values.size(); ++j) {
        out.values[j] += b.values[j];
    }
    return out;
}

FieldGrid operator-(const FieldGrid& a, const FieldGrid& b)
{
    return a + (-1.0 * b);
}

} // namespace eitmem
