#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "eitmem/grid.hpp"

namespace gen {

// Seeded draws for property tests; every suite fixes its own seed.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : m_engine(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(m_engine); }

    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

    double signed_log_uniform(double a, double b) { return (coin() ? 1.0 : -1.0) * log_uniform(a, b); }

    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(m_engine); }

    bool coin() { return integer(0, 1) == 1; }

    eitmem::cplx complex_normal() { return {m_normal(m_engine), m_normal(m_engine)}; }

    /// White complex noise on the grid.
    eitmem::FieldGrid noise(const eitmem::GridSpec& g)
    {
        eitmem::FieldGrid f(g);
        for (auto& v : f.values) {
            v = complex_normal();
        }
        return f;
    }

    /// Smooth random pulse: sum of a few Gaussians well inside the grid.
    eitmem::FieldGrid smooth_pulse(const eitmem::GridSpec& g, int lobes = 3)
    {
        eitmem::FieldGrid f(g);
        const double span = g.length();
        for (int l = 0; l < lobes; ++l) {
            const double c = g.z_min + span * uniform(0.35, 0.5);
            const double w = span * uniform(0.02, 0.05);
            const eitmem::cplx a = complex_normal();
            for (std::size_t j = 0; j < g.n_points; ++j) {
                const double u = (g.z(j) - c) / w;
                f.values[j] += a * std::exp(-u * u);
            }
        }
        return f;
    }

private:
    std::mt19937_64 m_engine;
    std::normal_distribution<double> m_normal{0.0, 1.0};
};

} // namespace gen
