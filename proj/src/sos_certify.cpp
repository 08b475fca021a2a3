#include "heatcalc/sos_certify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "heatcalc/ibp_reduce.hpp"

namespace heatcalc
{

namespace
{

void partitions_rec(int remaining, int max_part, std::vector<int> &prefix, std::vector<std::vector<int>> &out)
{
    if (remaining == 0) {
        out.push_back(prefix);
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        prefix.push_back(part);
        partitions_rec(remaining - part, part, prefix, out);
        prefix.pop_back();
    }
}

int expected_sign(int n) { return n % 2 == 1 ? 1 : -1; }

} // namespace

std::vector<std::vector<int>> integer_partitions(int n)
{
    if (n < 1) {
        throw std::invalid_argument("partitions need n >= 1");
    }
    std::vector<std::vector<int>> out;
    std::vector<int> prefix;
    partitions_rec(n, n, prefix, out);
    return out;
}

std::vector<DerivMonomial> square_basis(int n)
{
    std::vector<DerivMonomial> out;
    for (const auto &p : integer_partitions(n)) {
        out.push_back(DerivMonomial::from_orders(p));
    }
    return out;
}

SquareForm SquareForm::over_basis(int n, const std::vector<Rational> &dense)
{
    const auto basis = square_basis(n);
    if (dense.size() != basis.size()) {
        throw std::invalid_argument("square needs " + std::to_string(basis.size()) + " coefficients for order " +
                                    std::to_string(n));
    }
    SquareForm s;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (!dense[i].is_zero()) {
            s.coeffs.emplace(basis[i], dense[i]);
        }
    }
    return s;
}

int SquareForm::order() const
{
    if (coeffs.empty()) {
        return 0;
    }
    const int w = coeffs.begin()->first.weight();
    for (const auto &kv : coeffs) {
        if (kv.first.weight() != w) {
            return -1;
        }
    }
    return w;
}

Combination expand_square(const SquareForm &s)
{
    if (s.order() < 0) {
        throw std::invalid_argument("square mixes basis monomials of different weights");
    }
    Combination raw;
    for (auto i = s.coeffs.begin(); i != s.coeffs.end(); ++i) {
        raw.add(i->first.times(i->first), i->second * i->second);
        for (auto j = std::next(i); j != s.coeffs.end(); ++j) {
            raw.add(i->first.times(j->first), Rational(2) * i->second * j->second);
        }
    }
    return reduce(raw);
}

CertificateCheck verify_certificate(const Certificate &cert)
{
    CertificateCheck out;
    const int n = cert.order;
    if (n < 1) {
        out.defect = "order must be >= 1";
        return out;
    }
    if (cert.sign != expected_sign(n)) {
        out.defect = "sign must be " + std::to_string(expected_sign(n)) + " for order " + std::to_string(n);
    }
    Combination total;
    for (std::size_t i = 0; i < cert.squares.size(); ++i) {
        const int w = cert.squares[i].order();
        if (w != n && w != 0) {
            out.defect = "square " + std::to_string(i) + " is not over the order-" + std::to_string(n) + " basis";
            continue;
        }
        total += expand_square(cert.squares[i]);
    }
    for (const auto &[m, c] : cert.remainder.terms()) {
        if (!m.all_exponents_even()) {
            out.defect = "remainder monomial " + m.str() + " has an odd exponent";
        } else if (c.sign() < 0) {
            out.defect = "remainder coefficient of " + m.str() + " is negative";
        } else if (m.weight() != 2 * n) {
            out.defect = "remainder monomial " + m.str() + " has wrong weight";
        }
    }
    total += cert.remainder;
    out.residual = entropy_derivative(n) - total * Rational(cert.sign);
    out.verified = out.defect.empty() && out.residual.empty();
    return out;
}

std::optional<Certificate> known_certificate(int n)
{
    const auto m = [](std::initializer_list<int> o) { return DerivMonomial::from_orders(o); };
    Certificate c;
    c.order = n;
    c.sign = expected_sign(n);
    switch (n) {
    case 1:
        c.squares.push_back(SquareForm::over_basis(1, {Rational(1)}));
        break;
    case 2:
        c.squares.push_back(SquareForm::over_basis(2, {Rational(1), Rational(-1)}));
        break;
    case 3:
        c.squares.push_back(SquareForm::over_basis(3, {Rational(1), Rational(-1), Rational(1, 3)}));
        c.remainder.add(m({1, 1, 1, 1, 1, 1}), Rational(1, 45));
        break;
    case 4:
        c.squares.push_back(SquareForm::over_basis(
            4, {Rational(1), Rational(-6, 5), Rational(-7, 10), Rational(8, 5), Rational(-1, 2)}));
        c.squares.push_back(
            SquareForm::over_basis(4, {Rational(0), Rational(2, 5), Rational(0), Rational(-1, 3), Rational(9, 100)}));
        c.squares.push_back(
            SquareForm::over_basis(4, {Rational(0), Rational(0), Rational(0), Rational(-4, 100), Rational(4, 100)}));
        c.remainder.add(m({2, 2, 2, 2}), Rational(1, 300));
        c.remainder.add(m({1, 1, 1, 1, 2, 2}), Rational(56, 90000));
        c.remainder.add(m({1, 1, 1, 1, 1, 1, 1, 1}), Rational(13, 70000));
        break;
    default:
        return std::nullopt;
    }
    return c;
}

bool second_order_family_ok(const Rational &a, const Rational &b, const Rational &c)
{
    const Rational first = Rational(1) - a * a;
    const Rational second = -(b * b) - c * c - Rational(4, 3) * a * b - Rational(1, 3);
    return first.sign() >= 0 && second.sign() >= 0;
}

Certificate second_order_family_certificate(const Rational &a, const Rational &b, const Rational &c)
{
    Certificate cert;
    cert.order = 2;
    cert.sign = -1;
    cert.squares.push_back(SquareForm::over_basis(2, {a, b}));
    cert.squares.push_back(SquareForm::over_basis(2, {Rational(0), c}));
    cert.remainder.add(DerivMonomial::from_orders({2, 2}), Rational(1) - a * a);
    cert.remainder.add(DerivMonomial::from_orders({1, 1, 1, 1}),
                       -(b * b) - c * c - Rational(4, 3) * a * b - Rational(1, 3));
    return cert;
}

ThirdOrderFamily third_order_family(const Rational &b)
{
    ThirdOrderFamily out;
    out.cross_coeff = Rational(6) * b - Rational(2);
    out.pure_coeff = Rational(6, 5) - Rational(16, 5) * b - b * b;
    out.ok = out.cross_coeff.sign() >= 0 && out.pure_coeff.sign() >= 0;
    const auto known = known_certificate(3);
    const Certificate member = third_order_family_certificate(b);
    out.matches_known = member.remainder == known->remainder &&
                        member.squares.front().coeffs == known->squares.front().coeffs;
    return out;
}

Certificate third_order_family_certificate(const Rational &b)
{
    Certificate cert;
    cert.order = 3;
    cert.sign = 1;
    cert.squares.push_back(SquareForm::over_basis(3, {Rational(1), Rational(-1), b}));
    cert.remainder.add(DerivMonomial::from_orders({1, 1, 2, 2}), Rational(6) * b - Rational(2));
    cert.remainder.add(DerivMonomial::from_orders({1, 1, 1, 1, 1, 1}),
                       Rational(6, 5) - Rational(16, 5) * b - b * b);
    return cert;
}

int QuadraticSurd::sign() const
{
    // sign(a + b sqrt d) by comparing a^2 with b^2 d when signs disagree.
    const int sa = a.sign();
    const int sb = d == 0 ? 0 : b.sign();
    if (sb == 0) {
        return sa;
    }
    if (sa == 0 || sa == sb) {
        return sa == 0 ? sb : sa;
    }
    const Rational lhs = a * a;
    const Rational rhs = b * b * Rational(d);
    if (lhs == rhs) {
        return 0;
    }
    return lhs > rhs ? sa : sb;
}

namespace
{
void check_same_radicand(const QuadraticSurd &x, const QuadraticSurd &y)
{
    if (x.d != y.d && x.d != 0 && y.d != 0) {
        throw std::invalid_argument("surds over different radicands");
    }
}
} // namespace

QuadraticSurd operator+(const QuadraticSurd &x, const QuadraticSurd &y)
{
    check_same_radicand(x, y);
    return {x.a + y.a, x.b + y.b, std::max(x.d, y.d)};
}

QuadraticSurd operator-(const QuadraticSurd &x, const QuadraticSurd &y)
{
    check_same_radicand(x, y);
    return {x.a - y.a, x.b - y.b, std::max(x.d, y.d)};
}

QuadraticSurd operator*(const QuadraticSurd &x, const QuadraticSurd &y)
{
    check_same_radicand(x, y);
    const long d = std::max(x.d, y.d);
    return {x.a * y.a + x.b * y.b * Rational(d), x.a * y.b + x.b * y.a, d};
}

std::string QuadraticSurd::str() const { return a.str() + " + " + b.str() + " sqrt(" + std::to_string(d) + ")"; }

QuadraticSurd third_order_upper_endpoint() { return {Rational(-8, 5), Rational(1, 5), 94}; }

QuadraticSurd third_order_pure_coeff(const QuadraticSurd &b)
{
    const QuadraticSurd six_fifths{Rational(6, 5), Rational(0), b.d};
    const QuadraticSurd sixteen_fifths{Rational(16, 5), Rational(0), b.d};
    return six_fifths - sixteen_fifths * b - b * b;
}

// ---------------------------------------------------------------------------
// Numeric certificate search.

namespace
{

/// Coefficient-matching system  sum_j (x_j . B)^2 + remainder = sign * C_n in
/// canonical coordinates. Square j uses basis positions j..P-1. The remainder
/// on each even coordinate is margin + s^2, so the problem is a smooth
/// nonlinear least-squares system in (x, s).
struct MatchingSystem
{
    int n = 0;
    int sign = 1;
    std::vector<DerivMonomial> basis;
    std::vector<DerivMonomial> coords;
    std::vector<bool> even;
    std::vector<int> slack_coord;
    std::vector<int> odd_coord;
    Combination target;
    Eigen::VectorXd target_vec;
    // products[a][b]: reduce(B_a B_b) as a coordinate vector.
    std::vector<std::vector<Eigen::VectorXd>> products;
    std::vector<std::vector<Combination>> exact;
    std::vector<std::pair<int, int>> vars; // (square, basis position)

    explicit MatchingSystem(int order) : n(order), sign(expected_sign(order)), basis(square_basis(order))
    {
        target = entropy_derivative(n) * Rational(sign);
        const int P = static_cast<int>(basis.size());
        exact.assign(P, std::vector<Combination>(P));
        Combination::Terms all;
        for (const auto &[m, c] : target.terms()) {
            all.emplace(m, Rational(0));
        }
        for (int a = 0; a < P; ++a) {
            for (int b = a; b < P; ++b) {
                exact[a][b] = reduce(Combination(basis[a].times(basis[b])));
                exact[b][a] = exact[a][b];
                for (const auto &[m, c] : exact[a][b].terms()) {
                    all.emplace(m, Rational(0));
                }
            }
        }
        // Every even canonical monomial of weight 2n may carry remainder.
        for (const auto &p : integer_partitions(2 * n)) {
            const DerivMonomial m = DerivMonomial::from_orders(p);
            if (is_canonical(m) && m.all_exponents_even()) {
                all.emplace(m, Rational(0));
            }
        }
        for (const auto &kv : all) {
            (kv.first.all_exponents_even() ? slack_coord : odd_coord).push_back(static_cast<int>(coords.size()));
            coords.push_back(kv.first);
            even.push_back(kv.first.all_exponents_even());
        }
        const auto to_vec = [&](const Combination &c) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(coords.size()));
            for (std::size_t k = 0; k < coords.size(); ++k) {
                v[static_cast<Eigen::Index>(k)] = c.coefficient(coords[k]).to_double();
            }
            return v;
        };
        target_vec = to_vec(target);
        products.assign(P, std::vector<Eigen::VectorXd>(P));
        for (int a = 0; a < P; ++a) {
            for (int b = 0; b < P; ++b) {
                products[a][b] = to_vec(exact[a][b]);
            }
        }
        for (int j = 0; j < P; ++j) {
            for (int a = j; a < P; ++a) {
                vars.emplace_back(j, a);
            }
        }
    }

    int num_square_vars() const { return static_cast<int>(vars.size()); }
    int num_slacks() const { return static_cast<int>(slack_coord.size()); }
    int num_unknowns() const { return num_square_vars() + num_slacks(); }
    int num_coords() const { return static_cast<int>(coords.size()); }

    Eigen::VectorXd quadratic(const Eigen::VectorXd &z) const
    {
        Eigen::VectorXd q = Eigen::VectorXd::Zero(num_coords());
        for (int u = 0; u < num_square_vars(); ++u) {
            for (int v = 0; v < num_square_vars(); ++v) {
                if (vars[u].first == vars[v].first) {
                    q += z[u] * z[v] * products[vars[u].second][vars[v].second];
                }
            }
        }
        return q;
    }

    /// Remainder implied by the square coefficients in z.
    Eigen::VectorXd remainder(const Eigen::VectorXd &z) const { return target_vec - quadratic(z); }

    Eigen::VectorXd residual(const Eigen::VectorXd &z, double margin) const
    {
        Eigen::VectorXd r = remainder(z);
        for (int j = 0; j < num_slacks(); ++j) {
            const double s = z[num_square_vars() + j];
            r[slack_coord[j]] -= margin + s * s;
        }
        return r;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd &z) const
    {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(num_coords(), num_unknowns());
        for (int u = 0; u < num_square_vars(); ++u) {
            Eigen::VectorXd dq = Eigen::VectorXd::Zero(num_coords());
            for (int v = 0; v < num_square_vars(); ++v) {
                if (vars[u].first == vars[v].first) {
                    dq += 2.0 * z[v] * products[vars[u].second][vars[v].second];
                }
            }
            J.col(u) = -dq;
        }
        for (int j = 0; j < num_slacks(); ++j) {
            J(slack_coord[j], num_square_vars() + j) = -2.0 * z[num_square_vars() + j];
        }
        return J;
    }

    double cost(const Eigen::VectorXd &z, double margin) const { return residual(z, margin).squaredNorm(); }

    /// Distance from a valid certificate: odd coordinates off target and
    /// negative remainder on even ones.
    double violation(const Eigen::VectorXd &z) const
    {
        const Eigen::VectorXd r = remainder(z);
        double v = 0.0;
        for (int k = 0; k < num_coords(); ++k) {
            const double e = even[k] ? std::min(0.0, r[k]) : r[k];
            v += e * e;
        }
        return std::sqrt(v);
    }

    /// Slacks that reproduce the current remainder as closely as possible.
    void fit_slacks(Eigen::VectorXd &z, double margin) const
    {
        const Eigen::VectorXd r = remainder(z);
        for (int j = 0; j < num_slacks(); ++j) {
            z[num_square_vars() + j] = std::sqrt(std::max(0.0, r[slack_coord[j]] - margin));
        }
    }
};

/// Levenberg-Marquardt over the unknowns not marked fixed; returns the final cost.
double levenberg_marquardt(const MatchingSystem &sys, Eigen::VectorXd &z, const std::vector<bool> &fixed,
                           double margin, int max_iterations)
{
    double lambda = 1e-3;
    double cost = sys.cost(z, margin);
    const int N = sys.num_unknowns();
    for (int it = 0; it < max_iterations && cost > 1e-30; ++it) {
        Eigen::MatrixXd J = sys.jacobian(z);
        for (int u = 0; u < N; ++u) {
            if (fixed[u]) {
                J.col(u).setZero();
            }
        }
        const Eigen::VectorXd r = sys.residual(z, margin);
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        bool improved = false;
        while (lambda < 1e14) {
            Eigen::MatrixXd A = JtJ;
            for (int u = 0; u < N; ++u) {
                A(u, u) += fixed[u] ? 1.0 : lambda * (1.0 + JtJ(u, u));
            }
            const Eigen::VectorXd step = A.ldlt().solve(-g);
            const Eigen::VectorXd trial = z + step;
            const double trial_cost = sys.cost(trial, margin);
            if (std::isfinite(trial_cost) && trial_cost < cost) {
                z = trial;
                const double gain = cost - trial_cost;
                cost = trial_cost;
                lambda = std::max(lambda / 5.0, 1e-15);
                improved = gain > 1e-32;
                break;
            }
            lambda *= 4.0;
        }
        if (!improved) {
            break;
        }
    }
    return cost;
}

Certificate build_certificate(const MatchingSystem &sys, const std::vector<Rational> &values)
{
    const int P = static_cast<int>(sys.basis.size());
    std::vector<std::vector<Rational>> rows(P, std::vector<Rational>(P, Rational(0)));
    for (int u = 0; u < sys.num_square_vars(); ++u) {
        rows[sys.vars[u].first][sys.vars[u].second] = values[u];
    }
    Certificate cert;
    cert.order = sys.n;
    cert.sign = sys.sign;
    Combination squares_total;
    for (int j = 0; j < P; ++j) {
        SquareForm s = SquareForm::over_basis(sys.n, rows[j]);
        if (s.coeffs.empty()) {
            continue;
        }
        squares_total += expand_square(s);
        cert.squares.push_back(std::move(s));
    }
    cert.remainder = sys.target - squares_total;
    return cert;
}

struct StartOutcome
{
    double residual_norm = 1e300;
    Eigen::VectorXd best;
    std::optional<Certificate> certificate;
};

constexpr double kFeasible = 1e-11;

/// Square coefficients held back for the exact solve, one per odd
/// coordinate and each in a different square. B_a^2 reduces to a single even
/// monomial, so the odd coordinates are linear in these unknowns once the
/// others are fixed. Chosen greedily by column norm after orthogonalisation.
std::vector<int> choose_pivots(const MatchingSystem &sys, const Eigen::VectorXd &z)
{
    const int m = static_cast<int>(sys.odd_coord.size());
    const Eigen::MatrixXd J = sys.jacobian(z);
    Eigen::MatrixXd cols(m, sys.num_square_vars());
    for (int u = 0; u < sys.num_square_vars(); ++u) {
        for (int k = 0; k < m; ++k) {
            cols(k, u) = J(sys.odd_coord[k], u);
        }
    }
    std::vector<int> pivots;
    std::vector<bool> square_used(sys.basis.size(), false);
    for (int step = 0; step < m; ++step) {
        int pick = -1;
        double best = 1e-8;
        for (int u = 0; u < sys.num_square_vars(); ++u) {
            if (!square_used[sys.vars[u].first] && cols.col(u).norm() > best) {
                best = cols.col(u).norm();
                pick = u;
            }
        }
        if (pick < 0) {
            return {};
        }
        pivots.push_back(pick);
        square_used[sys.vars[pick].first] = true;
        const Eigen::VectorXd q = cols.col(pick).normalized();
        for (int u = 0; u < sys.num_square_vars(); ++u) {
            cols.col(u) -= q * q.dot(cols.col(u));
        }
    }
    return pivots;
}

/// Solves the odd coordinates exactly for the pivot coefficients given all
/// other square coefficients. False if the linear system is singular.
bool solve_pivots(const MatchingSystem &sys, const std::vector<int> &pivots, std::vector<Rational> &values)
{
    const int m = static_cast<int>(pivots.size());
    std::vector<bool> is_pivot(sys.num_square_vars(), false);
    for (int p : pivots) {
        is_pivot[p] = true;
    }
    const auto P = [&](int a, int b, int k) { return sys.exact[a][b].coefficient(sys.coords[sys.odd_coord[k]]); };
    // Rows: L p = rhs.
    std::vector<std::vector<Rational>> A(m, std::vector<Rational>(m + 1, Rational(0)));
    for (int k = 0; k < m; ++k) {
        Rational rhs = sys.target.coefficient(sys.coords[sys.odd_coord[k]]);
        for (int u = 0; u < sys.num_square_vars(); ++u) {
            for (int v = 0; v < sys.num_square_vars(); ++v) {
                if (is_pivot[u] || is_pivot[v] || sys.vars[u].first != sys.vars[v].first) {
                    continue;
                }
                rhs -= values[u] * values[v] * P(sys.vars[u].second, sys.vars[v].second, k);
            }
        }
        A[k][m] = rhs;
        for (int i = 0; i < m; ++i) {
            const int pu = pivots[i];
            Rational lin(0);
            for (int v = 0; v < sys.num_square_vars(); ++v) {
                if (!is_pivot[v] && sys.vars[v].first == sys.vars[pu].first) {
                    lin += values[v] * P(sys.vars[pu].second, sys.vars[v].second, k);
                }
            }
            A[k][i] = lin * Rational(2);
        }
    }
    for (int col = 0; col < m; ++col) {
        int row = col;
        while (row < m && A[row][col].is_zero()) {
            ++row;
        }
        if (row == m) {
            return false;
        }
        std::swap(A[row], A[col]);
        for (int r = 0; r < m; ++r) {
            if (r != col && !A[r][col].is_zero()) {
                const Rational f = A[r][col] / A[col][col];
                for (int c = col; c <= m; ++c) {
                    A[r][c] -= f * A[col][c];
                }
            }
        }
    }
    for (int i = 0; i < m; ++i) {
        values[pivots[i]] = A[i][m] / A[i][i];
    }
    return true;
}

/// Fixes square coefficients one at a time to simple rationals, re-solving
/// the rest, solves the pivots exactly and checks the exact certificate.
std::optional<Certificate> snap_and_verify(const MatchingSystem &sys, Eigen::VectorXd z, double margin,
                                           const SearchConfig &cfg)
{
    const std::vector<int> pivots = choose_pivots(sys, z);
    if (pivots.size() != sys.odd_coord.size()) {
        return std::nullopt;
    }
    std::vector<bool> fixed(sys.num_unknowns(), false);
    std::vector<Rational> values(sys.num_square_vars(), Rational(0));
    static constexpr double tolerances[] = {1e-2, 1e-4, 1e-6, 1e-9, 1e-12};
    for (int u = 0; u < sys.num_square_vars(); ++u) {
        if (std::find(pivots.begin(), pivots.end(), u) != pivots.end()) {
            continue;
        }
        bool done = false;
        std::vector<Rational> tried;
        std::vector<Rational> candidates;
        if (std::fabs(z[u]) < 0.05) {
            candidates.emplace_back(0);
        }
        for (const double tol : tolerances) {
            candidates.push_back(rationalize(z[u], cfg.max_denominator, tol));
        }
        for (const Rational &cand : candidates) {
            if (std::find(tried.begin(), tried.end(), cand) != tried.end()) {
                continue;
            }
            tried.push_back(cand);
            Eigen::VectorXd trial = z;
            trial[u] = cand.to_double();
            std::vector<bool> trial_fixed = fixed;
            trial_fixed[u] = true;
            // Staying at the start's margin keeps the remainder clear of zero.
            if (std::sqrt(levenberg_marquardt(sys, trial, trial_fixed, margin, cfg.max_iterations)) <= kFeasible) {
                z = trial;
                fixed = trial_fixed;
                values[u] = cand;
                done = true;
                break;
            }
        }
        if (!done) {
            return std::nullopt;
        }
    }
    if (!solve_pivots(sys, pivots, values)) {
        return std::nullopt;
    }
    Certificate cert = build_certificate(sys, values);
    if (!verify_certificate(cert).verified) {
        return std::nullopt;
    }
    return cert;
}

StartOutcome run_start(const MatchingSystem &sys, const Eigen::VectorXd &z0, bool is_seed, const SearchConfig &cfg)
{
    StartOutcome out;
    const std::vector<bool> none_fixed(sys.num_unknowns(), false);
    // Interior margins first: a remainder bounded away from zero survives rounding.
    const std::vector<double> margins =
        is_seed ? std::vector<double>{0.0} : std::vector<double>{1e-3, 1e-4, 1e-5, 1e-7, 0.0};
    for (const double margin : margins) {
        Eigen::VectorXd z = z0;
        if (is_seed) {
            sys.fit_slacks(z, margin);
        }
        levenberg_marquardt(sys, z, none_fixed, margin, cfg.max_iterations);
        const double norm = sys.violation(z);
        if (norm < out.residual_norm) {
            out.residual_norm = norm;
            out.best = z;
        }
        if (std::sqrt(sys.cost(z, margin)) <= kFeasible) {
            out.certificate = snap_and_verify(sys, z, margin, cfg);
            if (out.certificate) {
                break;
            }
        }
    }
    return out;
}

} // namespace

SearchResult search_certificate(int n, const SearchConfig &config)
{
    if (n < 2) {
        throw std::invalid_argument("certificate search needs order >= 2");
    }
    const MatchingSystem sys(n);
    std::vector<Eigen::VectorXd> starts;
    if (config.seed_known) {
        if (const auto known = known_certificate(n)) {
            Eigen::VectorXd z = Eigen::VectorXd::Zero(sys.num_unknowns());
            for (int u = 0; u < sys.num_square_vars(); ++u) {
                const auto j = static_cast<std::size_t>(sys.vars[u].first);
                if (j < known->squares.size()) {
                    const auto &coeffs = known->squares[j].coeffs;
                    const auto it = coeffs.find(sys.basis[sys.vars[u].second]);
                    z[u] = it == coeffs.end() ? 0.0 : it->second.to_double();
                }
            }
            starts.push_back(z);
        }
    }
    const int n_seeded = static_cast<int>(starts.size());
    for (int s = 0; s < config.starts; ++s) {
        std::mt19937_64 rng(config.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(s));
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd z(sys.num_unknowns());
        for (int u = 0; u < sys.num_square_vars(); ++u) {
            z[u] = normal(rng);
        }
        for (int j = 0; j < sys.num_slacks(); ++j) {
            z[sys.num_square_vars() + j] = 0.1 * std::fabs(normal(rng));
        }
        starts.push_back(z);
    }

    unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, starts.size())));
    std::vector<StartOutcome> outcomes(starts.size());
    for (std::size_t begin = 0; begin < starts.size(); begin += threads) {
        std::vector<std::future<StartOutcome>> batch;
        for (std::size_t i = begin; i < std::min(starts.size(), begin + threads); ++i) {
            batch.push_back(std::async(std::launch::async, [&, i] {
                return run_start(sys, starts[i], static_cast<int>(i) < n_seeded, config);
            }));
        }
        for (std::size_t k = 0; k < batch.size(); ++k) {
            outcomes[begin + k] = batch[k].get();
        }
        // Starts are independent; stop at the first batch holding a certificate.
        const bool found = std::any_of(outcomes.begin(), outcomes.begin() + static_cast<long>(begin + batch.size()),
                                       [](const StartOutcome &o) { return o.certificate.has_value(); });
        if (found) {
            outcomes.resize(begin + batch.size());
            break;
        }
    }

    SearchResult result;
    result.starts_run = static_cast<int>(outcomes.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].certificate && result.winning_start < 0) {
            result.winning_start = static_cast<int>(i);
            result.certificate = outcomes[i].certificate;
        }
        if (outcomes[i].residual_norm < outcomes[best].residual_norm) {
            best = i;
        }
    }
    const std::size_t report = result.winning_start >= 0 ? static_cast<std::size_t>(result.winning_start) : best;
    result.residual_norm = outcomes[report].residual_norm;
    const int P = static_cast<int>(sys.basis.size());
    result.best_squares.assign(P, std::vector<double>(P, 0.0));
    if (outcomes[report].best.size() == sys.num_unknowns()) {
        for (int u = 0; u < sys.num_square_vars(); ++u) {
            result.best_squares[sys.vars[u].first][sys.vars[u].second] = outcomes[report].best[u];
        }
    }
    return result;
}

} // namespace heatcalc
