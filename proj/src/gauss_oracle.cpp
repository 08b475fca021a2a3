#include "heatcalc/gauss_oracle.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <string>

#include "quadrature.hpp"

namespace heatcalc
{

namespace detail
{

GaussLegendre::GaussLegendre(int n) : nodes(n), weights(n)
{
    const long double pi = std::numbers::pi_v<long double>;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        long double x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
        long double dp = 0.0L;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1.0L, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0L);
            const long double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-21L) {
                break;
            }
        }
        const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

const GaussLegendre &GaussLegendre::order20()
{
    static const GaussLegendre rule(20);
    return rule;
}

} // namespace detail

GaussianMixture::GaussianMixture(std::vector<Component> components) : components_(std::move(components))
{
    if (components_.empty()) {
        throw std::invalid_argument("mixture needs at least one component");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
        const auto &c = components_[i];
        if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
            throw std::invalid_argument("component " + std::to_string(i) + ": weight must be positive");
        }
        if (!(c.variance > 0.0) || !std::isfinite(c.variance)) {
            throw std::invalid_argument("component " + std::to_string(i) + ": variance must be positive");
        }
        if (!std::isfinite(c.mean)) {
            throw std::invalid_argument("component " + std::to_string(i) + ": mean must be finite");
        }
        total += c.weight;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("mixture weights sum to " + std::to_string(total) + ", expected 1");
    }
    for (auto &c : components_) {
        c.weight /= total;
    }
}

GaussianMixture GaussianMixture::bimodal_reference() { return GaussianMixture({{0.5, 0.0, 0.1}, {0.5, 10.0, 0.1}}); }

double GaussianMixture::min_variance() const
{
    return std::min_element(components_.begin(), components_.end(),
                            [](const auto &a, const auto &b) { return a.variance < b.variance; })
        ->variance;
}

double GaussianMixture::max_variance() const
{
    return std::max_element(components_.begin(), components_.end(),
                            [](const auto &a, const auto &b) { return a.variance < b.variance; })
        ->variance;
}

double GaussianMixture::min_mean() const
{
    return std::min_element(components_.begin(), components_.end(),
                            [](const auto &a, const auto &b) { return a.mean < b.mean; })
        ->mean;
}

double GaussianMixture::max_mean() const
{
    return std::max_element(components_.begin(), components_.end(),
                            [](const auto &a, const auto &b) { return a.mean < b.mean; })
        ->mean;
}

DensityJet density_jet(const GaussianMixture &mix, long double t, long double y, int max_order)
{
    const auto &comps = mix.components();
    const std::size_t nc = comps.size();
    constexpr std::size_t kInline = 8;
    long double log_terms_buf[kInline];
    std::vector<long double> log_terms_heap;
    long double *log_terms = log_terms_buf;
    if (nc > kInline) {
        log_terms_heap.resize(nc);
        log_terms = log_terms_heap.data();
    }
    const long double log_2pi = std::log(2.0L * std::numbers::pi_v<long double>);
    long double top = -INFINITY;
    for (std::size_t i = 0; i < nc; ++i) {
        const long double s = comps[i].variance + t;
        const long double d = y - comps[i].mean;
        log_terms[i] = std::log(static_cast<long double>(comps[i].weight)) - 0.5L * (log_2pi + std::log(s)) -
                       d * d / (2.0L * s);
        top = std::max(top, log_terms[i]);
    }
    long double sum = 0.0L;
    for (std::size_t i = 0; i < nc; ++i) {
        sum += std::exp(log_terms[i] - top);
    }
    DensityJet jet;
    jet.log_f = top + std::log(sum);
    jet.ratio.assign(static_cast<std::size_t>(max_order) + 1, 0.0L);
    for (std::size_t i = 0; i < nc; ++i) {
        const long double post = std::exp(log_terms[i] - jet.log_f);
        if (post == 0.0L) {
            continue;
        }
        const long double s = comps[i].variance + t;
        const long double inv_sd = 1.0L / std::sqrt(s);
        const long double z = (y - comps[i].mean) * inv_sd;
        // phi^{(m)} / phi = (-1)^m s^{-m/2} He_m(z)
        long double he_prev = 1.0L, he = z;
        long double scale = 1.0L;
        jet.ratio[0] += post;
        for (int m = 1; m <= max_order; ++m) {
            scale *= -inv_sd;
            if (m >= 2) {
                const long double next = z * he - (m - 1) * he_prev;
                he_prev = he;
                he = next;
            }
            jet.ratio[static_cast<std::size_t>(m)] += post * scale * he;
        }
    }
    return jet;
}

double density_deriv(const GaussianMixture &mix, double t, double y, int m)
{
    if (t < 0.0) {
        throw std::invalid_argument("t must be >= 0");
    }
    if (m < 0) {
        throw std::invalid_argument("derivative order must be >= 0");
    }
    if (t == 0.0 && m > 0) {
        throw std::invalid_argument("derivatives at t = 0 are not supported");
    }
    const DensityJet jet = density_jet(mix, t, y, m);
    return static_cast<double>(std::exp(jet.log_f) * jet.ratio[static_cast<std::size_t>(m)]);
}

long double monomial_value(const DerivMonomial &m, const DensityJet &jet)
{
    long double v = std::exp(jet.log_f);
    for (const auto &[order, exp] : m.factors()) {
        const long double r = jet.ratio.at(static_cast<std::size_t>(order));
        for (int k = 0; k < exp; ++k) {
            v *= r;
        }
    }
    return v;
}

namespace
{

struct Window
{
    long double lo;
    long double hi;
    long double panel_width;
};

// Tails beyond 12 standard deviations of the widest component are dropped.
Window window(const GaussianMixture &mix, long double t_lo, long double t_hi)
{
    const long double spread = 12.0L * std::sqrt(mix.max_variance() + t_hi);
    return {mix.min_mean() - spread, mix.max_mean() + spread, 0.5L * std::sqrt(mix.min_variance() + t_lo)};
}

void require_positive_t(double t)
{
    if (!(t > 0.0)) {
        throw std::invalid_argument("t must be > 0");
    }
}

template <class F> Estimate run_adaptive(F &&fn, const GaussianMixture &mix, double t, const QuadOptions &opts)
{
    const Window w = window(mix, t, t);
    const detail::QuadSum q = detail::integrate(fn, w.lo, w.hi, w.panel_width, opts.abs_tol, opts.max_depth);
    return {static_cast<double>(q.value), static_cast<double>(q.error), q.converged};
}

double checked(const Estimate &e, const char *what)
{
    if (!e.converged) {
        throw QuadratureError(std::string(what) + ": quadrature did not converge, error estimate " +
                                  std::to_string(e.error),
                              e.error);
    }
    return e.value;
}

long double entropy_density(const GaussianMixture &mix, long double t, long double y)
{
    const DensityJet jet = density_jet(mix, t, y, 0);
    return -std::exp(jet.log_f) * jet.log_f;
}

} // namespace

Estimate entropy_estimate(const GaussianMixture &mix, double t, const QuadOptions &opts)
{
    require_positive_t(t);
    return run_adaptive([&](long double y) { return entropy_density(mix, t, y); }, mix, t, opts);
}

Estimate fisher_estimate(const GaussianMixture &mix, double t, const QuadOptions &opts)
{
    require_positive_t(t);
    return run_adaptive(
        [&](long double y) {
            const DensityJet jet = density_jet(mix, t, y, 1);
            return std::exp(jet.log_f) * jet.ratio[1] * jet.ratio[1];
        },
        mix, t, opts);
}

Estimate functional_estimate(const Combination &c, const GaussianMixture &mix, double t, const QuadOptions &opts)
{
    require_positive_t(t);
    int max_order = 0;
    std::vector<std::pair<const DerivMonomial *, long double>> terms;
    for (const auto &[m, coeff] : c.terms()) {
        max_order = std::max(max_order, m.max_order());
        terms.emplace_back(&m, coeff.to_long_double());
    }
    return run_adaptive(
        [&](long double y) {
            const DensityJet jet = density_jet(mix, t, y, max_order);
            long double s = 0.0L;
            for (const auto &[m, coeff] : terms) {
                s += coeff * monomial_value(*m, jet);
            }
            return s;
        },
        mix, t, opts);
}

double entropy(const GaussianMixture &mix, double t, const QuadOptions &opts)
{
    return checked(entropy_estimate(mix, t, opts), "entropy");
}

double fisher(const GaussianMixture &mix, double t, const QuadOptions &opts)
{
    return checked(fisher_estimate(mix, t, opts), "fisher");
}

double functional(const Combination &c, const GaussianMixture &mix, double t, const QuadOptions &opts)
{
    return checked(functional_estimate(c, mix, t, opts), "functional");
}

double default_fd_step(double t) { return std::max(1e-3, 0.02 * t); }

double default_fd_step(const GaussianMixture &mix, double t, int max_order)
{
    // The density changes on the scale t + min variance, not t alone.
    const double scaled = std::min(0.01 * (t + mix.min_variance()), t / (2.0 * max_order));
    return std::max(default_fd_step(t), scaled);
}

std::vector<long double> central_weights(int n, int half_width)
{
    // Fornberg's recursion on the integer grid -k..k, expansion point 0.
    const int npts = 2 * half_width + 1;
    std::vector<long double> x(static_cast<std::size_t>(npts));
    for (int i = 0; i < npts; ++i) {
        x[static_cast<std::size_t>(i)] = static_cast<long double>(i - half_width);
    }
    std::vector<std::vector<long double>> c(static_cast<std::size_t>(npts),
                                            std::vector<long double>(static_cast<std::size_t>(n) + 1, 0.0L));
    long double c1 = 1.0L;
    long double c4 = x[0];
    c[0][0] = 1.0L;
    for (int i = 1; i < npts; ++i) {
        const int mn = std::min(i, n);
        long double c2 = 1.0L;
        const long double c5 = c4;
        c4 = x[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) {
            const long double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<long double> w(static_cast<std::size_t>(npts));
    for (int i = 0; i < npts; ++i) {
        w[static_cast<std::size_t>(i)] = c[i][n];
    }
    return w;
}

std::vector<FdEstimate> fd_entropy_derivs(const GaussianMixture &mix, double t, int max_order, double step)
{
    if (max_order < 1) {
        throw std::invalid_argument("derivative order must be >= 1");
    }
    const long double h = step > 0.0 ? step : default_fd_step(mix, t, max_order);
    if (!(t - max_order * h > 0.0L)) {
        throw std::invalid_argument("finite-difference stencil reaches t <= 0; reduce the step");
    }
    const int kmax = (max_order + 1) / 2;
    // Values on the half-step lattice t + j h/2, j = -2 kmax .. 2 kmax.
    const int span = 2 * kmax;
    const long double half = 0.5L * h;
    const Window w = window(mix, t - kmax * h, t + kmax * h);
    const int panels = std::max(1, static_cast<int>(std::ceil((w.hi - w.lo) / w.panel_width)));
    std::vector<long double> values(static_cast<std::size_t>(2 * span + 1));
    long double scale = 1.0L;
    for (int j = -span; j <= span; ++j) {
        const long double tj = t + j * half;
        values[static_cast<std::size_t>(j + span)] =
            detail::integrate_fixed([&](long double y) { return entropy_density(mix, tj, y); }, w.lo, w.hi, panels);
        scale = std::max(scale, std::fabs(values[static_cast<std::size_t>(j + span)]));
    }
    const auto at = [&](int j) { return values[static_cast<std::size_t>(j + span)]; };

    std::vector<FdEstimate> out;
    for (int n = 1; n <= max_order; ++n) {
        const int k = (n + 1) / 2;
        const auto wts = central_weights(n, k);
        long double coarse = 0.0L, fine = 0.0L, wsum = 0.0L;
        for (int i = -k; i <= k; ++i) {
            const long double wi = wts[static_cast<std::size_t>(i + k)];
            coarse += wi * at(2 * i);
            fine += wi * at(i);
            wsum += std::fabs(wi);
        }
        coarse /= std::pow(h, static_cast<long double>(n));
        fine /= std::pow(half, static_cast<long double>(n));
        const long double rich = (4.0L * fine - coarse) / 3.0L;
        const long double roundoff = 32.0L * LDBL_EPSILON * scale * wsum *
                                     (4.0L / 3.0L / std::pow(half, static_cast<long double>(n)) +
                                      1.0L / 3.0L / std::pow(h, static_cast<long double>(n)));
        FdEstimate e;
        e.value = static_cast<double>(rich);
        e.error = static_cast<double>(std::fabs(rich - fine) + roundoff);
        e.reliable = e.error <= 0.1 * std::fabs(e.value);
        out.push_back(e);
    }
    return out;
}

FdEstimate fd_entropy_deriv(const GaussianMixture &mix, double t, int n, double step)
{
    return fd_entropy_derivs(mix, t, n, step).back();
}

} // namespace heatcalc
