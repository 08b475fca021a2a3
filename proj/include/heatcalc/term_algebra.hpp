#ifndef HEATCALC_TERM_ALGEBRA_HPP
#define HEATCALC_TERM_ALGEBRA_HPP

#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heatcalc/rational.hpp"

namespace heatcalc
{

/// One derivative monomial  prod_m f_m^{k_m} / f^{K-1},  K = sum_m k_m.
///
/// f_m is the m-th y-derivative of the density of X + sqrt(t) Z. The
/// denominator power is implied by the factor count, so every monomial is
/// homogeneous of degree one in f. The empty monomial is f itself.
class DerivMonomial
{
public:
    /// (order, exponent) pairs, strictly increasing order, exponents > 0.
    using Factors = std::vector<std::pair<int, int>>;

    DerivMonomial() = default;

    /// Builds from a multiset of derivative orders; throws
    /// std::invalid_argument on orders < 1.
    static DerivMonomial from_orders(std::span<const int> orders);
    static DerivMonomial from_orders(std::initializer_list<int> orders)
    {
        return from_orders(std::span<const int>(orders.begin(), orders.size()));
    }
    /// Builds from (order, exponent) pairs in any order; repeated orders merge.
    static DerivMonomial from_factors(Factors factors);

    const Factors &factors() const { return factors_; }
    bool is_density() const { return factors_.empty(); }

    int weight() const;
    int degree() const;
    int denominator_power() const { return degree() - 1; }
    /// Highest derivative order present, 0 for f.
    int max_order() const { return factors_.empty() ? 0 : factors_.back().first; }
    int exponent(int order) const;
    /// Orders with multiplicity, ascending.
    std::vector<int> orders() const;

    /// Product with another monomial (numerators multiply; the implied
    /// denominator follows the combined factor count).
    DerivMonomial times(const DerivMonomial &other) const;
    DerivMonomial with_factor(int order, int count = 1) const;
    /// Removes `count` copies of f_order; throws std::logic_error if absent.
    DerivMonomial without_factor(int order, int count = 1) const;

    bool all_exponents_even() const;

    /// "f3^2/f^1", "f1 f2/f^1", "f1", "f".
    std::string str() const;
    /// Inverse of str(); also accepts a missing or "/f" denominator but
    /// rejects a denominator power that disagrees with the factor count.
    static DerivMonomial parse(std::string_view text);

    friend bool operator==(const DerivMonomial &, const DerivMonomial &) = default;

private:
    Factors factors_;
};

/// Display order: compare (order, exponent) pairs from the highest derivative
/// order downward; larger comes first. Ties cannot occur for distinct keys.
struct MonomialOrder
{
    bool operator()(const DerivMonomial &a, const DerivMonomial &b) const;
};

/// Exact rational linear combination of derivative monomials. Zero
/// coefficients are never stored.
class Combination
{
public:
    using Terms = std::map<DerivMonomial, Rational, MonomialOrder>;

    Combination() = default;
    Combination(const DerivMonomial &m, Rational c = Rational(1)) { add(m, std::move(c)); }
    Combination(std::initializer_list<std::pair<DerivMonomial, Rational>> terms);

    const Terms &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Rational coefficient(const DerivMonomial &m) const;

    void add(const DerivMonomial &m, const Rational &c);
    Combination &operator+=(const Combination &o);
    Combination &operator-=(const Combination &o);
    Combination &operator*=(const Rational &s);

    friend Combination operator+(Combination a, const Combination &b) { return a += b; }
    friend Combination operator-(Combination a, const Combination &b) { return a -= b; }
    friend Combination operator*(Combination a, const Rational &s) { return a *= s; }
    friend Combination operator*(const Rational &s, Combination a) { return a *= s; }
    Combination operator-() const { return *this * Rational(-1); }

    friend bool operator==(const Combination &a, const Combination &b) { return a.terms_ == b.terms_; }

    /// True when every monomial has the same weight (vacuously for zero).
    bool is_homogeneous() const;

    /// Single line, e.g. "f3^2/f^1 + f2^3/f^2 - 3 f1^2 f2^2/f^3 + 6/5 f1^6/f^5".
    /// The zero combination prints as "0".
    std::string str() const;
    /// One "coeff monomial" line per term in display order.
    std::string serialize() const;
    /// Inverse of serialize(); blank lines and '#' comments are skipped.
    static Combination deserialize(std::string_view text);

private:
    Terms terms_;
};

/// y-derivative (product rule with the implied f^{-(K-1)} denominator).
Combination d_dy(const DerivMonomial &m);
Combination d_dy(const Combination &c);

/// t-derivative along the heat flow, using f_t = f_2 / 2 on every factor.
Combination d_dt(const DerivMonomial &m);
Combination d_dt(const Combination &c);

} // namespace heatcalc

#endif
