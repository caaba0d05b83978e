#include "eitmem/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "eitmem/error.hpp"

namespace eitmem {

namespace {

template <std::size_t K>
using Vec = std::array<double, K>;

template <std::size_t K>
Vec<K> simpson(double h, const Vec<K>& fa, const Vec<K>& fm, const Vec<K>& fb)
{
    Vec<K> s{};
    for (std::size_t i = 0; i < K; ++i) {
        s[i] = h / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]);
    }
    return s;
}

template <std::size_t K>
struct Panel
{
    double a, b;
    Vec<K> fa, fm, fb;
    Vec<K> whole;
    int depth;
};

} // namespace

template <std::size_t K>
QuadratureResult<K> adaptive_simpson(const std::function<Vec<K>(double)>& f, double a, double b,
                                     const QuadratureSpec& spec, bool record_nodes)
{
    QuadratureResult<K> result;
    require(b >= a, ErrorCategory::invalid_input, "quadrature interval must have b >= a");
    if (b == a) {
        if (record_nodes) {
            result.nodes.push_back(a);
        }
        return result;
    }
    const double span = b - a;

    auto eval = [&](double t) {
        ++result.evaluations;
        if (record_nodes) {
            result.nodes.push_back(t);
        }
        return f(t);
    };

    const double m0 = 0.5 * (a + b);
    Panel<K> root{a, b, eval(a), eval(m0), eval(b), {}, 0};
    root.whole = simpson<K>(span, root.fa, root.fm, root.fb);

    // Depth-first, left panel first, so accumulation order is deterministic.
    std::vector<Panel<K>> stack;
    stack.push_back(root);
    while (!stack.empty()) {
        Panel<K> p = stack.back();
        stack.pop_back();

        const double m = 0.5 * (p.a + p.b);
        const double lm = 0.5 * (p.a + m);
        const double rm = 0.5 * (m + p.b);
        const Vec<K> flm = eval(lm);
        const Vec<K> frm = eval(rm);
        const double h = p.b - p.a;
        const Vec<K> left = simpson<K>(0.5 * h, p.fa, flm, p.fm);
        const Vec<K> right = simpson<K>(0.5 * h, p.fm, frm, p.fb);

        bool accept = true;
        Vec<K> err{};
        for (std::size_t i = 0; i < K; ++i) {
            const double refined = left[i] + right[i];
            err[i] = std::abs(refined - p.whole[i]) / 15.0;
            const double tol = std::max(spec.abs_tol * h / span, spec.rel_tol * std::abs(refined));
            if (!(err[i] <= tol)) {
                accept = false;
            }
        }
        const bool too_deep = p.depth >= spec.max_depth || (spec.min_panel > 0.0 && h <= spec.min_panel);
        if (accept || too_deep) {
            if (!accept) {
                result.converged = false;
            }
            for (std::size_t i = 0; i < K; ++i) {
                const double refined = left[i] + right[i];
                result.value[i] += refined + (refined - p.whole[i]) / 15.0;
                result.error_estimate[i] += err[i];
            }
            continue;
        }
        // push right first so the left half is processed next
        stack.push_back(Panel<K>{m, p.b, p.fm, frm, p.fb, right, p.depth + 1});
        stack.push_back(Panel<K>{p.a, m, p.fa, flm, p.fm, left, p.depth + 1});
    }

    if (record_nodes) {
        std::sort(result.nodes.begin(), result.nodes.end());
        result.nodes.erase(std::unique(result.nodes.begin(), result.nodes.end()), result.nodes.end());
    }
    return result;
}

template QuadratureResult<1> adaptive_simpson<1>(const std::function<Vec<1>(double)>&, double, double,
                                                 const QuadratureSpec&, bool);
template QuadratureResult<2> adaptive_simpson<2>(const std::function<Vec<2>(double)>&, double, double,
                                                 const QuadratureSpec&, bool);
template QuadratureResult<4> adaptive_simpson<4>(const std::function<Vec<4>(double)>&, double, double,
                                                 const QuadratureSpec&, bool);

} // namespace eitmem
