#ifndef HEATCALC_GAUSS_ORACLE_HPP
#define HEATCALC_GAUSS_ORACLE_HPP

#include <stdexcept>
#include <vector>

#include "heatcalc/term_algebra.hpp"

namespace heatcalc
{

struct Component
{
    double weight = 1.0;
    double mean = 0.0;
    double variance = 1.0;
};

/// Finite mixture of normals. Weights must be positive and sum to one within
/// 1e-12 (they are then renormalised); variances must be positive.
class GaussianMixture
{
public:
    explicit GaussianMixture(std::vector<Component> components);

    static GaussianMixture normal(double mean, double variance) { return GaussianMixture({{1.0, mean, variance}}); }
    /// 0.5 N(0, 0.1) + 0.5 N(10, 0.1), the bimodal reference input.
    static GaussianMixture bimodal_reference();

    const std::vector<Component> &components() const { return components_; }
    double min_variance() const;
    double max_variance() const;
    double min_mean() const;
    double max_mean() const;

private:
    std::vector<Component> components_;
};

/// Value with an absolute error estimate.
struct Estimate
{
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

class QuadratureError : public std::runtime_error
{
public:
    QuadratureError(const std::string &what, double achieved) : std::runtime_error(what), achieved_(achieved) {}
    double achieved_error() const { return achieved_; }

private:
    double achieved_;
};

struct QuadOptions
{
    double abs_tol = 1e-10;
    int max_depth = 24;
};

/// log f and the ratios f_m / f, m = 0..max_order, at one point. The ratios
/// are posterior-weighted Hermite terms, so they stay finite where f underflows.
struct DensityJet
{
    long double log_f = 0.0L;
    std::vector<long double> ratio;
};

DensityJet density_jet(const GaussianMixture &mix, long double t, long double y, int max_order);

/// m-th y-derivative of the density of X + sqrt(t) Z at y.
double density_deriv(const GaussianMixture &mix, double t, double y, int m);

/// f * prod (f_m / f)^{k_m} evaluated from a jet.
long double monomial_value(const DerivMonomial &m, const DensityJet &jet);

Estimate entropy_estimate(const GaussianMixture &mix, double t, const QuadOptions &opts = {});
Estimate fisher_estimate(const GaussianMixture &mix, double t, const QuadOptions &opts = {});
Estimate functional_estimate(const Combination &c, const GaussianMixture &mix, double t,
                             const QuadOptions &opts = {});

/// Differential entropy h(X + sqrt(t) Z) in nats. Throws QuadratureError.
double entropy(const GaussianMixture &mix, double t, const QuadOptions &opts = {});
/// Fisher information J(X + sqrt(t) Z). Throws QuadratureError.
double fisher(const GaussianMixture &mix, double t, const QuadOptions &opts = {});
/// integral of c over y. Throws QuadratureError.
double functional(const Combination &c, const GaussianMixture &mix, double t, const QuadOptions &opts = {});

struct FdEstimate
{
    double value = 0.0;
    /// Truncation plus roundoff estimate.
    double error = 0.0;
    /// False when error exceeds 10% of |value|.
    bool reliable = true;
};

/// Step floor max(1e-3, 0.02 t).
double default_fd_step(double t);
/// The floor, raised to 0.01 (t + min variance) when that is larger, but no
/// more than t / (2 max_order). Used when no step is given.
double default_fd_step(const GaussianMixture &mix, double t, int max_order);

/// n-th t-derivative of h(X + sqrt(t) Z) by central differences with one
/// Richardson step (h and h/2). All stencil points share one quadrature
/// rule, so the quadrature error is a smooth function of t.
FdEstimate fd_entropy_deriv(const GaussianMixture &mix, double t, int n, double step = 0.0);
/// Orders 1..max_order from one shared stencil.
std::vector<FdEstimate> fd_entropy_derivs(const GaussianMixture &mix, double t, int max_order, double step = 0.0);

/// Central-difference weights for the n-th derivative on offsets -k..k.
std::vector<long double> central_weights(int n, int half_width);

} // namespace heatcalc

#endif
