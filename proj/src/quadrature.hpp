#ifndef HEATCALC_QUADRATURE_HPP
#define HEATCALC_QUADRATURE_HPP

#include <cmath>
#include <vector>

namespace heatcalc::detail
{

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration.
struct GaussLegendre
{
    std::vector<long double> nodes;
    std::vector<long double> weights;

    explicit GaussLegendre(int n);
    static const GaussLegendre &order20();
};

struct QuadSum
{
    long double value = 0.0L;
    long double error = 0.0L;
    bool converged = true;
    /// Bisections left before refinement stops and the sum is marked unconverged.
    long budget = 1L << 13;
};

template <class F> long double panel_rule(F &&fn, long double a, long double b, long double *abs_sum = nullptr)
{
    const auto &gl = GaussLegendre::order20();
    const long double half = 0.5L * (b - a);
    const long double mid = 0.5L * (a + b);
    long double s = 0.0L, sa = 0.0L;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const long double v = gl.weights[i] * fn(mid + half * gl.nodes[i]);
        s += v;
        sa += std::fabs(v);
    }
    if (abs_sum != nullptr) {
        *abs_sum = sa * std::fabs(half);
    }
    return s * half;
}

template <class F>
void adapt_panel(F &fn, long double a, long double b, long double whole, long double tol, int depth, QuadSum &acc)
{
    const long double m = 0.5L * (a + b);
    const long double coarse = panel_rule(fn, a, b);
    long double abs_left = 0.0L, abs_right = 0.0L;
    const long double left = panel_rule(fn, a, m, &abs_left);
    const long double right = panel_rule(fn, m, b, &abs_right);
    const long double fine = left + right;
    const long double diff = std::fabs(fine - coarse);
    const long double local_tol = tol * (b - a) / whole;
    // Roundoff in the node sums; refining below it cannot help.
    const long double floor = 64.0L * 1.1e-19L * (abs_left + abs_right);
    if (diff <= local_tol || diff <= floor || depth <= 0 || acc.budget <= 0) {
        if (diff > local_tol && diff > floor) {
            acc.converged = false;
        }
        acc.value += fine;
        acc.error += diff;
        return;
    }
    --acc.budget;
    adapt_panel(fn, a, m, whole, tol, depth - 1, acc);
    adapt_panel(fn, m, b, whole, tol, depth - 1, acc);
}

/// Adaptive bisection starting from uniform panels no wider than max_width.
template <class F>
QuadSum integrate(F &&fn, long double a, long double b, long double max_width, long double abs_tol, int max_depth)
{
    QuadSum acc;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
    const long double w = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        adapt_panel(fn, a + i * w, a + (i + 1) * w, b - a, abs_tol, max_depth, acc);
    }
    return acc;
}

/// Fixed composite rule: the same nodes for every call.
template <class F> long double integrate_fixed(F &&fn, long double a, long double b, int panels)
{
    long double s = 0.0L;
    const long double w = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        s += panel_rule(fn, a + i * w, a + (i + 1) * w);
    }
    return s;
}

} // namespace heatcalc::detail

#endif
