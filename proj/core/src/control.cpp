#include "eitmem/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "eitmem/error.hpp"

namespace eitmem {

namespace {

constexpr double half_pi = 0.5 * std::numbers::pi;

// 1 / (1 + exp(2u)) without overflow; equals (1 - tanh u) / 2.
double lower_half(double u)
{
    if (u > 0.0) {
        const double e = std::exp(-2.0 * u);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(2.0 * u));
}

double sech2(double u)
{
    const double e = std::exp(-2.0 * std::abs(u));
    const double d = 1.0 + e;
    return 4.0 * e / (d * d);
}

// cot(theta) and its time derivative for the tanh profile.
std::pair<double, double> tanh_cot(const TanhControl& p, double t)
{
    const double a = p.steepness * (t - p.t1);
    const double b = p.steepness * (t - p.t2);
    // 1 - tanh(a)/2 + tanh(b)/2 written as a sum of two positive terms
    const double brace = lower_half(a) + lower_half(-b);
    const double brace_dot = 0.5 * p.steepness * (sech2(b) - sech2(a));
    return {p.scale * brace + p.floor, p.scale * brace_dot};
}

void validate_tanh(const TanhControl& p)
{
    require(std::isfinite(p.floor) && p.floor > 0.0, ErrorCategory::invalid_input,
            "control floor must be > 0: the control field is only reduced to a small value during "
            "storage, never switched off, otherwise tan(theta) diverges and the low-intensity "
            "limit breaks");
    require(std::isfinite(p.scale) && p.scale >= 0.0, ErrorCategory::invalid_input,
            "control scale must be >= 0");
    require(std::isfinite(p.steepness) && p.steepness > 0.0, ErrorCategory::invalid_input,
            "control steepness must be > 0");
    require(std::isfinite(p.t1) && std::isfinite(p.t2) && p.t2 > p.t1, ErrorCategory::invalid_input,
            "control needs t2 > t1");
}

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    std::vector<double> h(n - 1), d(n - 1), m(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        d[k] = (y[k + 1] - y[k]) / h[k];
    }
    if (n == 2) {
        m[0] = m[1] = d[0];
        return m;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (d[k - 1] * d[k] <= 0.0) {
            m[k] = 0.0;
            continue;
        }
        const double w1 = 2.0 * h[k] + h[k - 1];
        const double w2 = h[k] + 2.0 * h[k - 1];
        m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
    }
    auto edge = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) {
            s = 0.0;
        } else if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) {
            s = 3.0 * d0;
        }
        return s;
    };
    m[0] = edge(h[0], h[1], d[0], d[1]);
    m[n - 1] = edge(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    return m;
}

struct Hermite
{
    double value;
    double slope;
};

Hermite hermite(double x0, double x1, double y0, double y1, double m0, double m1, double x)
{
    const double h = x1 - x0;
    const double s = (x - x0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double value = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 +
                         (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1;
    const double slope = ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * h * m0 +
                          (-6 * s2 + 6 * s) * y1 + (3 * s2 - 2 * s) * h * m1) /
                         h;
    return {value, slope};
}

} // namespace

double theta_from_omega(double omega, double g, double N)
{
    require(std::isfinite(omega) && omega > 0.0, ErrorCategory::invalid_input,
            "control Rabi frequency must be > 0; the field is never switched fully off");
    return std::atan2(g * std::sqrt(N), omega);
}

double omega_from_theta(double theta, double g, double N)
{
    require(theta > 0.0 && theta < half_pi, ErrorCategory::invalid_input,
            "theta must lie in (0, pi/2)");
    return g * std::sqrt(N) / std::tan(theta);
}

ControlSchedule::ControlSchedule(Profile profile) : m_profile(std::move(profile))
{
    if (const auto* c = std::get_if<ConstantControl>(&m_profile)) {
        require(std::isfinite(c->omega) && c->omega > 0.0, ErrorCategory::invalid_input,
                "constant control omega must be > 0: the control field is never switched off");
    } else if (const auto* p = std::get_if<TanhControl>(&m_profile)) {
        validate_tanh(*p);
    } else {
        const auto& tab = std::get<TabulatedControl>(m_profile);
        require(tab.t.size() >= 2 && tab.t.size() == tab.theta.size(), ErrorCategory::invalid_input,
                "tabulated control needs >= 2 (t, theta) samples of equal length");
        require(std::isfinite(tab.floor) && tab.floor > 0.0, ErrorCategory::invalid_input,
                "tabulated control floor must be > 0: the control field is never switched off");
        for (std::size_t i = 0; i < tab.t.size(); ++i) {
            require(std::isfinite(tab.t[i]), ErrorCategory::invalid_input, "tabulated t must be finite");
            if (i > 0) {
                require(tab.t[i] > tab.t[i - 1], ErrorCategory::invalid_input,
                        "tabulated t must be strictly increasing");
            }
            const double th = tab.theta[i];
            require(th > 0.0 && th < half_pi, ErrorCategory::invalid_input,
                    "tabulated theta must lie in (0, pi/2)");
            require(1.0 / std::tan(th) >= tab.floor, ErrorCategory::invalid_input,
                    "tabulated theta violates the cot(theta) floor");
        }
        m_slopes = pchip_slopes(tab.t, tab.theta);
        // midpoint refinement: cubic and linear interpolants must agree
        for (std::size_t i = 0; i + 1 < tab.t.size(); ++i) {
            const double mid = 0.5 * (tab.t[i] + tab.t[i + 1]);
            const double cubic = hermite(tab.t[i], tab.t[i + 1], tab.theta[i], tab.theta[i + 1],
                                         m_slopes[i], m_slopes[i + 1], mid)
                                     .value;
            const double linear = 0.5 * (tab.theta[i] + tab.theta[i + 1]);
            require(std::abs(cubic - linear) < 1e-6, ErrorCategory::invalid_input,
                    "tabulated control too coarse near t = " + std::to_string(mid) +
                        " s: interpolation error exceeds 1e-6 rad");
        }
    }
}

ControlSchedule ControlSchedule::tabulated(std::vector<double> t, std::vector<double> theta, double floor)
{
    return ControlSchedule(TabulatedControl{std::move(t), std::move(theta), floor});
}

double ControlSchedule::turn_time() const
{
    if (const auto* p = std::get_if<TanhControl>(&m_profile)) {
        return 1.0 / p->steepness;
    }
    if (const auto* tab = std::get_if<TabulatedControl>(&m_profile)) {
        const auto [lo, hi] = std::minmax_element(tab->theta.begin(), tab->theta.end());
        double max_rate = 0.0;
        for (double s : m_slopes) {
            max_rate = std::max(max_rate, std::abs(s));
        }
        if (max_rate == 0.0 || *hi == *lo) {
            return std::numeric_limits<double>::infinity();
        }
        return (*hi - *lo) / max_rate;
    }
    return std::numeric_limits<double>::infinity();
}

std::vector<double> ControlSchedule::breakpoints() const
{
    if (const auto* p = std::get_if<TanhControl>(&m_profile)) {
        return {p->t1, p->t2};
    }
    if (const auto* tab = std::get_if<TabulatedControl>(&m_profile)) {
        return tab->t;
    }
    return {};
}

std::pair<double, double> ControlSchedule::nominal_span() const
{
    if (const auto* p = std::get_if<TanhControl>(&m_profile)) {
        return {std::min(0.0, p->t1), p->t2 + 10.0 / p->steepness};
    }
    if (const auto* tab = std::get_if<TabulatedControl>(&m_profile)) {
        return {tab->t.front(), tab->t.back()};
    }
    return {0.0, 0.0};
}

ControlState ControlSchedule::evaluate_tabulated(const TabulatedControl& tab, const MediumParams& params,
                                                 double t) const
{
    require(t >= tab.t.front() && t <= tab.t.back(), ErrorCategory::invalid_input,
            "time " + std::to_string(t) + " s outside tabulated control range");
    auto it = std::upper_bound(tab.t.begin(), tab.t.end(), t);
    std::size_t i = static_cast<std::size_t>(std::distance(tab.t.begin(), it));
    i = std::clamp<std::size_t>(i, 1, tab.t.size() - 1) - 1;
    const Hermite hv = hermite(tab.t[i], tab.t[i + 1], tab.theta[i], tab.theta[i + 1], m_slopes[i],
                               m_slopes[i + 1], t);
    ControlState s;
    s.theta = hv.value;
    s.theta_dot = hv.slope;
    s.omega = params.g_sqrtN() / std::tan(s.theta);
    return s;
}

ControlState ControlSchedule::evaluate(const MediumParams& params, double t) const
{
    if (const auto* c = std::get_if<ConstantControl>(&m_profile)) {
        return {theta_from_omega(c->omega, params.g, params.N), 0.0, c->omega};
    }
    if (const auto* p = std::get_if<TanhControl>(&m_profile)) {
        const auto [x, x_dot] = tanh_cot(*p, t);
        ControlState s;
        s.theta = std::atan2(1.0, x);
        s.theta_dot = -x_dot / (1.0 + x * x);
        s.omega = params.g_sqrtN() * x;
        return s;
    }
    return evaluate_tabulated(std::get<TabulatedControl>(m_profile), params, t);
}

ControlState eval_schedule(const ControlSchedule& schedule, const MediumParams& params, double t)
{
    return schedule.evaluate(params, t);
}

} // namespace eitmem
