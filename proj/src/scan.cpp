#include "heatcalc/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include "heatcalc/ibp_reduce.hpp"

namespace heatcalc
{

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class F> void parallel_for(std::size_t count, unsigned threads, F &&fn)
{
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                fn(i);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
}

Estimate halve(Estimate e)
{
    e.value *= 0.5;
    e.error *= 0.5;
    return e;
}

/// Second divided difference on a non-uniform grid, with error propagation.
Estimate second_difference(const std::vector<double> &t, const std::vector<Estimate> &v, std::size_t i)
{
    const double hm = t[i] - t[i - 1];
    const double hp = t[i + 1] - t[i];
    const double denom = 0.5 * (hm + hp);
    Estimate out;
    out.value = ((v[i + 1].value - v[i].value) / hp - (v[i].value - v[i - 1].value) / hm) / denom;
    out.error = (v[i + 1].error / hp + v[i].error * (1.0 / hp + 1.0 / hm) + v[i - 1].error / hm) / denom;
    return out;
}

void put(std::ostream &os, double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

} // namespace

std::vector<double> TimeGrid::values() const
{
    if (!(start > 0.0) || !(stop > start)) {
        throw std::invalid_argument("time grid needs 0 < start < stop");
    }
    if (points < 3) {
        throw std::invalid_argument("time grid needs at least 3 points");
    }
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double u = static_cast<double>(i) / (points - 1);
        out[static_cast<std::size_t>(i)] = spacing == Spacing::linear
                                               ? start + u * (stop - start)
                                               : std::exp(std::log(start) + u * (std::log(stop) - std::log(start)));
    }
    out.front() = start;
    out.back() = stop;
    return out;
}

const char *to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass:
        return "pass";
    case Verdict::fail:
        return "fail";
    default:
        return "inconclusive";
    }
}

Verdict sign_verdict(double value, double error, int expected_sign, double factor)
{
    if (!std::isfinite(value) || !std::isfinite(error)) {
        return Verdict::inconclusive;
    }
    const double signed_value = expected_sign * value;
    if (signed_value > factor * error) {
        return Verdict::pass;
    }
    if (signed_value < -factor * error) {
        return Verdict::fail;
    }
    return Verdict::inconclusive;
}

bool ScanResult::asserted_checks_pass(int asserted_order) const
{
    for (const auto &row : rows) {
        if (!row.costa_ok) {
            return false;
        }
        for (std::size_t n = 0; n < row.sign_verdicts.size() && static_cast<int>(n) < asserted_order; ++n) {
            if (row.sign_verdicts[n] == Verdict::fail) {
                return false;
            }
        }
    }
    return true;
}

int ScanResult::count_sign_failures(int order) const
{
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [order](const ScanRow &r) {
        return order <= static_cast<int>(r.sign_verdicts.size()) &&
               r.sign_verdicts[static_cast<std::size_t>(order - 1)] == Verdict::fail;
    }));
}

int ScanResult::count_inconclusive(int order) const
{
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [order](const ScanRow &r) {
        return order <= static_cast<int>(r.sign_verdicts.size()) &&
               r.sign_verdicts[static_cast<std::size_t>(order - 1)] == Verdict::inconclusive;
    }));
}

ScanResult scan_conjectures(const GaussianMixture &mix, const std::vector<double> &t_grid, int max_order,
                            const ScanOptions &opts)
{
    if (max_order < 1) {
        throw std::invalid_argument("max_order must be >= 1");
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
            throw std::invalid_argument("t grid must be positive and strictly increasing");
        }
    }
    constexpr int kSymbolic = 4;
    std::vector<Combination> integrands;
    for (int n = 1; n <= kSymbolic; ++n) {
        integrands.push_back(entropy_derivative(n));
    }
    QuadOptions q;
    q.abs_tol = opts.quad_tol;

    ScanResult result;
    result.max_order = max_order;
    result.rows.resize(t_grid.size());
    parallel_for(t_grid.size(), opts.threads, [&](std::size_t i) {
        ScanRow &row = result.rows[i];
        const double t = t_grid[i];
        row.t = t;
        row.h = entropy_estimate(mix, t, q);
        row.J = fisher_estimate(mix, t, q);
        try {
            row.d_fd = fd_entropy_derivs(mix, t, max_order);
        } catch (const std::invalid_argument &) {
            row.d_fd.assign(static_cast<std::size_t>(max_order), FdEstimate{kNaN, kNaN, false});
        }
        for (const auto &c : integrands) {
            row.d_sym.push_back(halve(functional_estimate(c, mix, t, q)));
        }

        const double J = row.J.value;
        const double eJ = row.J.error;
        const double J1 = 2.0 * row.d_sym[1].value;
        const double eJ1 = 2.0 * row.d_sym[1].error;
        const double J2 = 2.0 * row.d_sym[2].value;
        const double eJ2 = 2.0 * row.d_sym[2].error;

        row.logJ_dd.value = (J2 * J - J1 * J1) / (J * J);
        row.logJ_dd.error = eJ2 / J + 2.0 * std::fabs(J1) * eJ1 / (J * J) +
                            (std::fabs(J2) / (J * J) + 2.0 * J1 * J1 / (J * J * J)) * eJ;
        row.invJ_dd.value = (2.0 * J1 * J1 - J * J2) / (J * J * J);
        row.invJ_dd.error = (4.0 * std::fabs(J1) * eJ1 + std::fabs(J) * eJ2) / (J * J * J) +
                            (std::fabs(J2) / (J * J * J) + 6.0 * J1 * J1 / (J * J * J * J)) * eJ;
        const double e2h = std::exp(2.0 * row.h.value);
        row.e2h_dd.value = e2h * (J1 + J * J);
        row.e2h_dd.error = e2h * (eJ1 + 2.0 * J * eJ + 2.0 * std::fabs(J1 + J * J) * row.h.error);
        row.costa_slack.value = -J1 - J * J;
        row.costa_slack.error = eJ1 + 2.0 * J * eJ;
        row.costa_ok =
            row.costa_slack.value >= -(opts.sign_factor * row.costa_slack.error + 1e-12 * std::max(1.0, J * J));

        for (int n = 1; n <= max_order; ++n) {
            const int expected = n % 2 == 1 ? 1 : -1;
            std::vector<Verdict> sources;
            const FdEstimate &fd = row.d_fd[static_cast<std::size_t>(n - 1)];
            if (fd.reliable) {
                sources.push_back(sign_verdict(fd.value, fd.error, expected, opts.sign_factor));
            }
            if (n <= kSymbolic) {
                const Estimate &sym = row.d_sym[static_cast<std::size_t>(n - 1)];
                sources.push_back(sign_verdict(sym.value, sym.error, expected, opts.sign_factor));
            }
            Verdict v = Verdict::inconclusive;
            if (std::find(sources.begin(), sources.end(), Verdict::fail) != sources.end()) {
                v = Verdict::fail;
            } else if (std::find(sources.begin(), sources.end(), Verdict::pass) != sources.end()) {
                v = Verdict::pass;
            }
            row.sign_verdicts.push_back(v);
            if (v == Verdict::fail) {
                row.signs_ok = false;
            }
        }
        row.logJ_convex = sign_verdict(row.logJ_dd.value, row.logJ_dd.error, 1, opts.sign_factor);
    });
    return result;
}

const char *const kScanCsvHeader =
    "t,h,J,d1_fd,d2_fd,d3_fd,d4_fd,d1_sym,d2_sym,d3_sym,d4_sym,logJ_dd,invJ_dd,e2h_dd,costa_ok,signs_ok";

void write_scan_csv(std::ostream &os, const ScanResult &result)
{
    os << kScanCsvHeader << '\n';
    for (const auto &row : result.rows) {
        put(os, row.t);
        os << ',';
        put(os, row.h.value);
        os << ',';
        put(os, row.J.value);
        for (std::size_t n = 0; n < 4; ++n) {
            os << ',';
            put(os, n < row.d_fd.size() ? row.d_fd[n].value : kNaN);
        }
        for (std::size_t n = 0; n < 4; ++n) {
            os << ',';
            put(os, n < row.d_sym.size() ? row.d_sym[n].value : kNaN);
        }
        os << ',';
        put(os, row.logJ_dd.value);
        os << ',';
        put(os, row.invJ_dd.value);
        os << ',';
        put(os, row.e2h_dd.value);
        os << ',' << (row.costa_ok ? 1 : 0) << ',' << (row.signs_ok ? 1 : 0) << '\n';
    }
}

WtReport wt_checks(const GaussianMixture &mix, const std::vector<double> &t_grid, const WtOptions &opts)
{
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0 && t_grid[i] < 1.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
            throw std::invalid_argument("W_t grid must be strictly increasing inside (0, 1)");
        }
    }
    const Combination second = entropy_derivative(2);
    const Combination third = entropy_derivative(3);
    QuadOptions q;
    q.abs_tol = opts.quad_tol;

    WtReport report;
    report.rows.resize(t_grid.size());
    parallel_for(t_grid.size(), opts.threads, [&](std::size_t i) {
        WtRow &row = report.rows[i];
        const double t = t_grid[i];
        const double s = 1.0 / t - 1.0;
        row.t = t;
        row.s = s;
        const Estimate h = entropy_estimate(mix, s, q);
        const Estimate J = fisher_estimate(mix, s, q);
        const Estimate J1 = functional_estimate(second, mix, s, q);
        const Estimate J2 = functional_estimate(third, mix, s, q);
        row.hW = {h.value + 0.5 * std::log(t), h.error, h.converged};
        row.JW = {J.value / t, J.error / t, J.converged};
        row.txz_slack.value = -J1.value + t * t - 2.0 * t * J.value;
        row.txz_slack.error = J1.error + 2.0 * t * J.error;
        row.txz_ok = row.txz_slack.value >= -(opts.error_factor * row.txz_slack.error + 1e-12);
        const double t3 = t * t * t;
        row.JW_dd_exact.value = 2.0 * J.value / t3 + 4.0 * J1.value / (t3 * t) + J2.value / (t3 * t * t);
        row.JW_dd_exact.error = 2.0 * J.error / t3 + 4.0 * J1.error / (t3 * t) + J2.error / (t3 * t * t);
        row.hW_dd = {kNaN, kNaN, true};
        row.JW_dd = {kNaN, kNaN, true};
    });

    std::vector<Estimate> hw, jw;
    for (const auto &row : report.rows) {
        hw.push_back(row.hW);
        jw.push_back(row.JW);
        report.txz_ok = report.txz_ok && row.txz_ok;
    }
    for (std::size_t i = 1; i + 1 < report.rows.size(); ++i) {
        WtRow &row = report.rows[i];
        row.hW_dd = second_difference(t_grid, hw, i);
        row.JW_dd = second_difference(t_grid, jw, i);
        if (row.hW_dd.value > opts.concave_tol + opts.error_factor * row.hW_dd.error) {
            report.concave_ok = false;
        }
        const Verdict v = sign_verdict(row.JW_dd.value, row.JW_dd.error, 1, opts.error_factor);
        report.jw_dd_positive += v == Verdict::pass ? 1 : 0;
        report.jw_dd_negative += v == Verdict::fail ? 1 : 0;
    }
    return report;
}

void write_wt_csv(std::ostream &os, const WtReport &report)
{
    os << "t,s,hW,JW,txz_slack,txz_ok,hW_dd,JW_dd,JW_dd_exact\n";
    for (const auto &row : report.rows) {
        put(os, row.t);
        os << ',';
        put(os, row.s);
        os << ',';
        put(os, row.hW.value);
        os << ',';
        put(os, row.JW.value);
        os << ',';
        put(os, row.txz_slack.value);
        os << ',' << (row.txz_ok ? 1 : 0) << ',';
        put(os, row.hW_dd.value);
        os << ',';
        put(os, row.JW_dd.value);
        os << ',';
        put(os, row.JW_dd_exact.value);
        os << '\n';
    }
}

} // namespace heatcalc
