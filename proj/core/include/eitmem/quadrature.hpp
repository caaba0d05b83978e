#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace eitmem {

struct QuadratureSpec
{
    double abs_tol = 1e-10;
    // Panels whose estimate is large are accepted at rel_tol * |estimate|
    // when that exceeds abs_tol.
    double rel_tol = 1e-13;
    int max_depth = 48;
    double min_panel = 0.0; // s; 0 disables
};

template <std::size_t K>
struct QuadratureResult
{
    std::array<double, K> value{};
    std::array<double, K> error_estimate{};
    std::size_t evaluations = 0;
    bool converged = true;
    /// abscissae where the integrand was sampled, ascending
    std::vector<double> nodes;
};

/// Vector-valued adaptive Simpson on [a, b]. Each component must meet
/// max(abs_tol, rel_tol |panel|) on every accepted panel.
template <std::size_t K>
QuadratureResult<K> adaptive_simpson(const std::function<std::array<double, K>(double)>& f,
                                     double a, double b, const QuadratureSpec& spec,
                                     bool record_nodes = false);

extern template QuadratureResult<1> adaptive_simpson<1>(
    const std::function<std::array<double, 1>(double)>&, double, double, const QuadratureSpec&, bool);
extern template QuadratureResult<2> adaptive_simpson<2>(
    const std::function<std::array<double, 2>(double)>&, double, double, const QuadratureSpec&, bool);
extern template QuadratureResult<4> adaptive_simpson<4>(
    const std::function<std::array<double, 4>(double)>&, double, double, const QuadratureSpec&, bool);

} // namespace eitmem
