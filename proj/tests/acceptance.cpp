// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "heatcalc/gauss_oracle.hpp"
#include "heatcalc/ibp_reduce.hpp"
#include "heatcalc/scan.hpp"
#include "heatcalc/sos_certify.hpp"
#include "support/properties.hpp"

using namespace heatcalc;

namespace
{

struct Check
{
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool cond, const std::string &what)
    {
        if (!cond) {
            ok = false;
            notes.push_back("failed: " + what);
        }
    }
    void note(const std::string &what) { notes.push_back(what); }
};

Rational R(long p, long q = 1) { return Rational(p, q); }
Combination C(const char *text) { return Combination::deserialize(text); }

double gaussian_dn(int n, double s) { return (n % 2 ? 1.0 : -1.0) * std::tgamma(n) / 2.0 * std::pow(s, -n); }

std::string run_cli(std::vector<std::string> args, int &code)
{
    args.insert(args.begin(), "heatcalc");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return out.str();
}

std::string fmt(const char *f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Check canonical_forms()
{
    Check c;
    const char *expected[] = {
        "1 f1^2/f^1\n",
        "-1 f2^2/f^1\n1/3 f1^4/f^3\n",
        "1 f3^2/f^1\n1 f2^3/f^2\n-3 f1^2 f2^2/f^3\n6/5 f1^6/f^5\n",
        "-1 f4^2/f^1\n-4 f2 f3^2/f^2\n4 f1^2 f3^2/f^3\n-3 f2^4/f^3\n24 f1^2 f2^3/f^4\n-36 f1^4 f2^2/f^5\n"
        "90/7 f1^8/f^7\n",
    };
    for (int n = 1; n <= 4; ++n) {
        int code = 0;
        const std::string out = run_cli({"derive", "--order", std::to_string(n), "--lines"}, code);
        c.require(code == 0 && out == expected[n - 1], "derive --order " + std::to_string(n));
        c.require(entropy_derivative(n) == Combination::deserialize(expected[n - 1]),
                  "entropy_derivative(" + std::to_string(n) + ")");
    }
    return c;
}

Check identities()
{
    Check c;
    int code = 0;
    const std::string out = run_cli({"verify-identities"}, code);
    c.require(code == 0, "verify-identities exit code");
    c.require(out.find("13/13 identities verified") != std::string::npos, "13/13 summary line");
    int zero = 0;
    for (const auto &row : verify_ibp_identities()) {
        zero += row.passed && row.residual.empty() ? 1 : 0;
    }
    c.require(zero == 13, "zero residual on all 13 rows");
    return c;
}

Check certificates()
{
    Check c;
    for (int n : {3, 4}) {
        const CertificateCheck chk = verify_certificate(*known_certificate(n));
        c.require(chk.verified && chk.residual.empty(), "certificate n=" + std::to_string(n));
    }
    c.require(expand_square(SquareForm::over_basis(4, {R(1), R(-6, 5), R(-7, 10), R(8, 5), R(-1, 2)})) ==
                  C("1 f4^2/f\n-104/25 f1^2 f3^2/f^3\n899/300 f2^4/f^3\n1839/50 f1^4 f2^2/f^5\n"
                    "-1837/140 f1^8/f^7\n4 f2 f3^2/f^2\n-122/5 f1^2 f2^3/f^4"),
              "first square expansion");
    c.require(expand_square(SquareForm::over_basis(4, {R(0), R(2, 5), R(0), R(-1, 3), R(9, 100)})) ==
                  C("4/25 f1^2 f3^2/f^3\n-704/900 f1^4 f2^2/f^5\n18567/70000 f1^8/f^7\n2/5 f1^2 f2^3/f^4"),
              "second square expansion");
    c.require(expand_square(SquareForm::over_basis(4, {R(0), R(0), R(0), R(-4, 100), R(4, 100)})) ==
                  C("16/10000 f1^4 f2^2/f^5\n-80/70000 f1^8/f^7"),
              "third square expansion");
    return c;
}

Check families()
{
    Check c;
    int mismatches = 0;
    for (int k = -120; k <= 60; ++k) {
        const Rational b = R(k, 60);
        const bool inside = b >= R(-1) && b <= R(-1, 3);
        mismatches += second_order_family_ok(R(1), b, R(0)) != inside ? 1 : 0;
    }
    c.require(mismatches == 0, "second-order family on step-1/60 grid");
    const ThirdOrderFamily third = third_order_family(R(1, 3));
    c.require(third.ok && third.cross_coeff.is_zero() && third.pure_coeff == R(1, 45),
              "third-order family at 1/3 gives (0, 1/45)");
    c.require(!third_order_family(R(1, 2)).ok, "third-order family rejects 1/2");
    const QuadraticSurd pure = third_order_pure_coeff(third_order_upper_endpoint());
    c.require(pure.sign() == 0, "6/5 - 16b/5 - b^2 vanishes at the upper endpoint");
    c.note("upper endpoint b = " + third_order_upper_endpoint().str());
    return c;
}

Check gaussian_closed_forms()
{
    Check c;
    double worst_h = 0, worst_J = 0, worst_fd = 0;
    for (double var : {0.5, 1.0, 4.0}) {
        const GaussianMixture g = GaussianMixture::normal(0.0, var);
        for (double t : {0.3, 1.0, 3.0}) {
            const double s = var + t;
            worst_h = std::max(worst_h, std::fabs(entropy(g, t) - 0.5 * std::log(2 * M_PI * M_E * s)));
            worst_J = std::max(worst_J, std::fabs(fisher(g, t) - 1.0 / s));
            const auto fd = fd_entropy_derivs(g, t, 4);
            for (int n = 1; n <= 4; ++n) {
                worst_fd = std::max(worst_fd, std::fabs(fd[n - 1].value / gaussian_dn(n, s) - 1.0));
            }
        }
    }
    c.require(worst_h <= 1e-8, "entropy within 1e-8");
    c.require(worst_J <= 1e-8, "fisher within 1e-8");
    c.require(worst_fd <= 1e-6, "finite differences within 1e-6 relative");
    c.note(fmt("max |dh| %.2e", worst_h) + fmt(", max |dJ| %.2e", worst_J) + fmt(", max fd rel %.2e", worst_fd));
    return c;
}

Check symbolic_agreement()
{
    Check c;
    const GaussianMixture mix = GaussianMixture::bimodal_reference();
    double worst = 0;
    for (double t : {0.5, 2.0, 10.0}) {
        const auto fd = fd_entropy_derivs(mix, t, 4);
        for (int n = 1; n <= 4; ++n) {
            const double sym = functional(entropy_derivative(n), mix, t, {1e-13, 30});
            worst = std::max(worst, std::fabs(sym / (2.0 * fd[n - 1].value) - 1.0));
        }
    }
    c.require(worst <= 1e-3, "relative agreement within 1e-3");
    c.note(fmt("max relative gap %.2e", worst));
    return c;
}

Check bimodal_scan()
{
    Check c;
    const ScanResult res = scan_conjectures(GaussianMixture::bimodal_reference(), TimeGrid{}.values(), 4);
    for (int n = 1; n <= 4; ++n) {
        const int fails = res.count_sign_failures(n);
        const int passes = static_cast<int>(res.rows.size()) - fails - res.count_inconclusive(n);
        c.require(fails == 0, "sign of d" + std::to_string(n) + " h at every conclusive point");
        c.require(passes > 0, "conclusive points exist for d" + std::to_string(n) + " h");
    }
    int pos = 0, neg = 0;
    for (const auto &row : res.rows) {
        const Verdict v = sign_verdict(row.invJ_dd.value, row.invJ_dd.error, +1);
        pos += v == Verdict::pass ? 1 : 0;
        neg += v == Verdict::fail ? 1 : 0;
    }
    c.require(pos > 0 && neg > 0, "invJ_dd takes both signs");
    c.note("invJ_dd conclusive: " + std::to_string(pos) + " positive, " + std::to_string(neg) + " negative");
    return c;
}

Check conjecture_reports()
{
    Check c;
    double worst_log = 0, worst_cn = 0;
    for (double var : {0.5, 1.0, 4.0}) {
        const GaussianMixture g = GaussianMixture::normal(0.0, var);
        const std::vector<double> grid = {0.3, 1.0, 3.0};
        const ScanResult res = scan_conjectures(g, grid, 6);
        for (const auto &row : res.rows) {
            const double s = var + row.t;
            worst_log = std::max(worst_log, std::fabs(row.logJ_dd.value - 1.0 / (s * s)));
            c.require(row.logJ_convex == Verdict::pass, "Gaussian log J convex");
            c.require(row.signs_ok, "Gaussian signs up to order 6");
        }
        for (double t : grid) {
            for (int n = 1; n <= 6; ++n) {
                const double sym = functional(entropy_derivative(n), g, t, {1e-11, 30}) / 2.0;
                worst_cn = std::max(worst_cn, std::fabs(sym / gaussian_dn(n, var + t) - 1.0));
            }
        }
    }
    c.require(worst_log <= 1e-8, "Gaussian logJ_dd within 1e-8");
    c.require(worst_cn <= 1e-8, "Gaussian d^n h closed form up to n=6 within 1e-8");
    c.note(fmt("logJ_dd max err %.2e", worst_log) + fmt(", d^n h max rel err %.2e", worst_cn));

    const ScanResult mix = scan_conjectures(GaussianMixture::bimodal_reference(),
                                            TimeGrid{0.1, 20.0, 12, Spacing::log}.values(), 6);
    int log_fail = 0;
    for (const auto &row : mix.rows) {
        log_fail += row.logJ_convex == Verdict::fail ? 1 : 0;
    }
    c.note("mixture (report only): logJ convex failures " + std::to_string(log_fail) + ", order 5/6 sign failures " +
           std::to_string(mix.count_sign_failures(5)) + "/" + std::to_string(mix.count_sign_failures(6)));
    return c;
}

Check wt()
{
    Check c;
    const auto grid = TimeGrid{0.05, 0.95, 91, Spacing::linear}.values();
    const WtReport g = wt_checks(GaussianMixture::normal(0.0, 1.0), grid);
    c.require(g.concave_ok, "Gaussian h(W_t) concave");
    c.require(g.txz_ok, "Gaussian pointwise inequality");
    const WtReport m = wt_checks(GaussianMixture::bimodal_reference(), grid);
    c.require(m.concave_ok, "mixture h(W_t) concave");
    c.require(m.txz_ok, "mixture pointwise inequality");
    c.require(m.jw_both_signs(), "mixture J(W_t) second differences take both signs");
    c.note("J(W_t) second differences: " + std::to_string(m.jw_dd_positive) + " positive, " +
           std::to_string(m.jw_dd_negative) + " negative");
    return c;
}

Check properties()
{
    Check c;
    for (const auto &o : testing::run_property_suite(120, 7)) {
        c.require(o.ok() && o.cases >= 100, o.name + (o.first_failure.empty() ? "" : ": " + o.first_failure));
        c.note(o.name + ": " + std::to_string(o.cases) + " cases");
    }
    return c;
}

} // namespace

int main()
{
    struct Criterion
    {
        int id;
        const char *name;
        std::function<Check()> run;
        double budget_s;
    };
    const std::vector<Criterion> criteria = {
        {1, "canonical forms n=1..4", canonical_forms, 5},
        {2, "13 IBP identities", identities, 5},
        {3, "third/fourth-order certificates and square expansions", certificates, 0},
        {4, "second/third-order families", families, 0},
        {5, "Gaussian closed forms", gaussian_closed_forms, 0},
        {6, "symbolic vs finite differences on the bimodal mixture", symbolic_agreement, 120},
        {7, "bimodal heat-flow scan", bimodal_scan, 600},
        {8, "conjecture scans (Gaussian exact, mixture report only)", conjecture_reports, 0},
        {9, "W_t checks", wt, 0},
        {10, "property suite", properties, 0},
    };
    int failed = 0;
    for (const auto &cr : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Check c;
        try {
            c = cr.run();
        } catch (const std::exception &e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.budget_s > 0) {
            c.require(secs < cr.budget_s, fmt("runtime under %.0f s", cr.budget_s));
        }
        std::printf("[%s] %d %s (%.2f s)\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name, secs);
        for (const auto &n : c.notes) {
            std::printf("       %s\n", n.c_str());
        }
        std::fflush(stdout);
        failed += c.ok ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
