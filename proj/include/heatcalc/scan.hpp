#ifndef HEATCALC_SCAN_HPP
#define HEATCALC_SCAN_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "heatcalc/gauss_oracle.hpp"

namespace heatcalc
{

enum class Spacing
{
    linear,
    log
};

struct TimeGrid
{
    double start = 0.05;
    double stop = 100.0;
    int points = 400;
    Spacing spacing = Spacing::log;

    /// Strictly increasing grid; throws std::invalid_argument on bad bounds.
    std::vector<double> values() const;
};

enum class Verdict
{
    pass,
    fail,
    inconclusive
};

const char *to_string(Verdict v);

/// Pass if expected_sign * value clears zero by more than factor * error,
/// fail if it is below zero by the same margin, inconclusive otherwise.
Verdict sign_verdict(double value, double error, int expected_sign, double factor = 3.0);

struct ScanOptions
{
    unsigned threads = 0;
    /// Absolute tolerance for entropy, Fisher and symbolic functionals.
    double quad_tol = 1e-12;
    double sign_factor = 3.0;
    /// Orders above this are conjectural and never fail a scan.
    int asserted_order = 4;
};

/// One grid point of a heat-flow scan of Y_t = X + sqrt(t) Z.
struct ScanRow
{
    double t = 0.0;
    Estimate h;
    Estimate J;
    /// d^n h/dt^n for n = 1..max_order by finite differences.
    std::vector<FdEstimate> d_fd;
    /// d^n h/dt^n for n = 1..4 from the canonical integrands.
    std::vector<Estimate> d_sym;
    /// Second t-derivatives via the chain rule from d_sym.
    Estimate logJ_dd;
    Estimate invJ_dd;
    Estimate e2h_dd;
    /// -J' - J^2 (nonnegative iff e^{2h} is concave at t).
    Estimate costa_slack;
    bool costa_ok = true;
    /// Per order n = 1..max_order: sign of d^n h equals (-1)^{n+1}.
    std::vector<Verdict> sign_verdicts;
    /// No failing verdict among all orders.
    bool signs_ok = true;
    Verdict logJ_convex = Verdict::inconclusive;
};

struct ScanResult
{
    int max_order = 4;
    std::vector<ScanRow> rows;

    /// A failing sign verdict at an order <= asserted_order, or a Costa failure.
    bool asserted_checks_pass(int asserted_order = 4) const;
    int count_sign_failures(int order) const;
    int count_inconclusive(int order) const;
};

ScanResult scan_conjectures(const GaussianMixture &mix, const std::vector<double> &t_grid, int max_order,
                            const ScanOptions &opts = {});

/// Header t,h,J,d1_fd..d4_fd,d1_sym..d4_sym,logJ_dd,invJ_dd,e2h_dd,costa_ok,signs_ok.
void write_scan_csv(std::ostream &os, const ScanResult &result);
extern const char *const kScanCsvHeader;

/// Quantities for W_t = sqrt(t) X + sqrt(1-t) Z, through
/// h(W_t) = h(X + sqrt(1/t - 1) Z) + log(t)/2 and J(W_t) = J(X + sqrt(1/t - 1) Z)/t.
struct WtRow
{
    double t = 0.0;
    double s = 0.0;
    Estimate hW;
    Estimate JW;
    /// -J'(Y_s) + t^2 - 2 t J(Y_s).
    Estimate txz_slack;
    bool txz_ok = true;
    /// Discrete second differences on the grid; NaN at the two end points.
    Estimate hW_dd;
    Estimate JW_dd;
    /// 2J/t^3 + 4J'/t^4 + J''/t^5 at s.
    Estimate JW_dd_exact;
};

struct WtReport
{
    std::vector<WtRow> rows;
    bool concave_ok = true;
    bool txz_ok = true;
    int jw_dd_positive = 0;
    int jw_dd_negative = 0;
    bool jw_both_signs() const { return jw_dd_positive > 0 && jw_dd_negative > 0; }
};

struct WtOptions
{
    unsigned threads = 0;
    double quad_tol = 1e-14;
    /// hW_dd passes when <= concave_tol + error_factor * error.
    double concave_tol = 1e-8;
    double error_factor = 3.0;
};

WtReport wt_checks(const GaussianMixture &mix, const std::vector<double> &t_grid, const WtOptions &opts = {});

void write_wt_csv(std::ostream &os, const WtReport &report);

} // namespace heatcalc

#endif
