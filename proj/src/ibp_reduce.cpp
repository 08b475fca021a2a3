#include "heatcalc/ibp_reduce.hpp"

#include <array>
#include <stdexcept>

namespace heatcalc
{

bool is_canonical(const DerivMonomial &m)
{
    if (m.is_density()) {
        return true;
    }
    return m.factors().back().second >= 2;
}

Combination ibp_rewrite(const DerivMonomial &m)
{
    if (is_canonical(m)) {
        throw std::logic_error("ibp_rewrite on canonical monomial " + m.str());
    }
    const int top = m.max_order();
    if (top == 1) {
        // m == f1 == (f)'
        return {};
    }
    const int e = m.exponent(top - 1);
    const DerivMonomial rest = m.without_factor(top).without_factor(top - 1, e);
    const DerivMonomial base = rest.with_factor(top - 1, e + 1);
    const int p = m.denominator_power();

    Combination out;
    for (const auto &[order, exp] : rest.factors()) {
        out.add(base.without_factor(order).with_factor(order + 1), Rational(exp));
    }
    if (p != 0) {
        out.add(base.with_factor(1), Rational(-p));
    }
    out *= Rational(-1, e + 1);
    return out;
}

namespace
{

// Rewrite priority: larger top order, then larger degree, then display order.
bool rewrites_before(const DerivMonomial &a, const DerivMonomial &b)
{
    if (a.max_order() != b.max_order()) {
        return a.max_order() > b.max_order();
    }
    if (a.degree() != b.degree()) {
        return a.degree() > b.degree();
    }
    return MonomialOrder{}(a, b);
}

std::string rule_text(const DerivMonomial &m)
{
    const int top = m.max_order();
    if (top == 1) {
        return "f1 = (f)'";
    }
    const int e = m.exponent(top - 1);
    const std::string lower = "f" + std::to_string(top - 1);
    return lower + (e > 0 ? "^" + std::to_string(e) : std::string("^0")) + " f" + std::to_string(top) + " = (" +
           lower + "^" + std::to_string(e + 1) + ")'/" + std::to_string(e + 1);
}

Combination reduce_impl(const Combination &c, ReductionTrace *trace, const ReduceOptions &opts)
{
    Combination current = c;
    const long bound = static_cast<long>(opts.max_steps_per_term) * std::max<long>(1, static_cast<long>(c.size()));
    long steps = 0;
    for (;;) {
        const DerivMonomial *pick = nullptr;
        for (const auto &term : current.terms()) {
            if (!is_canonical(term.first) && (pick == nullptr || rewrites_before(term.first, *pick))) {
                pick = &term.first;
            }
        }
        if (pick == nullptr) {
            break;
        }
        if (++steps > bound) {
            throw ReductionDepthError("reduction exceeded " + std::to_string(bound) + " rewrites at " + pick->str());
        }
        const DerivMonomial m = *pick;
        const Rational coeff = current.coefficient(m);
        Combination replacement = ibp_rewrite(m);
        current.add(m, -coeff);
        current += replacement * coeff;
        if (trace != nullptr) {
            trace->steps.push_back({m, rule_text(m), std::move(replacement)});
        }
    }
    if (trace != nullptr) {
        trace->final = current;
    }
    return current;
}

} // namespace

Combination reduce(const Combination &c, const ReduceOptions &opts) { return reduce_impl(c, nullptr, opts); }

Combination reduce(const Combination &c, ReductionTrace &trace, const ReduceOptions &opts)
{
    trace = {};
    return reduce_impl(c, &trace, opts);
}

Combination replay(const Combination &input, const ReductionTrace &trace)
{
    Combination current = input;
    for (const auto &step : trace.steps) {
        const Rational coeff = current.coefficient(step.monomial);
        current.add(step.monomial, -coeff);
        current += step.replacement * coeff;
    }
    return current;
}

Combination entropy_derivative(int n, const ReduceOptions &opts)
{
    if (n < 1) {
        throw std::invalid_argument("derivative order must be >= 1");
    }
    // de Bruijn: 2 dh/dt = J = integral f1^2/f.
    Combination c(DerivMonomial::from_orders({1, 1}));
    for (int k = 1; k < n; ++k) {
        c = reduce(d_dt(c), opts);
    }
    return c;
}

std::vector<IdentityCheck> verify_ibp_identities()
{
    struct Row
    {
        const char *label;
        const char *lhs;
        const char *rhs;
    };
    static constexpr std::array<Row, 13> rows{{
        {"w6-1", "1 f1^4 f2/f^4", "4/5 f1^6/f^5"},
        {"w6-2", "1 f1^3 f3/f^3", "-3 f1^2 f2^2/f^3\n12/5 f1^6/f^5"},
        {"w6-3", "1 f1 f2 f3/f^2", "-1/2 f2^3/f^2\n1 f1^2 f2^2/f^3"},
        {"w6-4", "1 f2 f4/f^1", "-1 f3^2/f^1\n-1/2 f2^3/f^2\n1 f1^2 f2^2/f^3"},
        {"w8-1", "1 f1^6 f2/f^6", "6/7 f1^8/f^7"},
        {"w8-2", "1 f1^5 f3/f^5", "-5 f1^4 f2^2/f^5\n30/7 f1^8/f^7"},
        {"w8-3", "1 f1^3 f2 f3/f^4", "-3/2 f1^2 f2^3/f^4\n2 f1^4 f2^2/f^5"},
        {"w8-4", "1 f1 f2^2 f3/f^3", "-1/3 f2^4/f^3\n1 f1^2 f2^3/f^4"},
        {"w8-5", "1 f1^4 f4/f^4", "6 f1^2 f2^3/f^4\n-28 f1^4 f2^2/f^5\n120/7 f1^8/f^7"},
        {"w8-6", "1 f1^2 f2 f4/f^3", "2/3 f2^4/f^3\n-13/2 f1^2 f2^3/f^4\n-1 f1^2 f3^2/f^3\n6 f1^4 f2^2/f^5"},
        {"w8-7", "1 f2^2 f4/f^2", "-2 f2 f3^2/f^2\n-2/3 f2^4/f^3\n2 f1^2 f2^3/f^4"},
        {"w8-8", "1 f1 f3 f4/f^2", "-1/2 f2 f3^2/f^2\n1 f1^2 f3^2/f^3"},
        {"w8-9", "1 f3 f5/f^1", "-1 f4^2/f^1\n-1/2 f2 f3^2/f^2\n1 f1^2 f3^2/f^3"},
    }};
    std::vector<IdentityCheck> out;
    out.reserve(rows.size());
    for (const auto &row : rows) {
        IdentityCheck chk;
        chk.label = row.label;
        chk.lhs = Combination::deserialize(row.lhs);
        chk.expected = Combination::deserialize(row.rhs);
        chk.residual = reduce(chk.lhs) - chk.expected;
        chk.passed = chk.residual.empty();
        out.push_back(std::move(chk));
    }
    return out;
}

} // namespace heatcalc
