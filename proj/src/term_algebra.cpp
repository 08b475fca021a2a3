#include "heatcalc/term_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace heatcalc
{

DerivMonomial DerivMonomial::from_orders(std::span<const int> orders)
{
    Factors f;
    f.reserve(orders.size());
    for (const int o : orders) {
        f.emplace_back(o, 1);
    }
    return from_factors(std::move(f));
}

DerivMonomial DerivMonomial::from_factors(Factors factors)
{
    for (const auto &[order, exp] : factors) {
        if (order < 1) {
            throw std::invalid_argument("derivative order must be >= 1, got " + std::to_string(order));
        }
        if (exp < 1) {
            throw std::invalid_argument("exponent must be >= 1, got " + std::to_string(exp));
        }
    }
    std::sort(factors.begin(), factors.end());
    DerivMonomial m;
    for (const auto &[order, exp] : factors) {
        if (!m.factors_.empty() && m.factors_.back().first == order) {
            m.factors_.back().second += exp;
        } else {
            m.factors_.emplace_back(order, exp);
        }
    }
    return m;
}

int DerivMonomial::weight() const
{
    int w = 0;
    for (const auto &[order, exp] : factors_) {
        w += order * exp;
    }
    return w;
}

int DerivMonomial::degree() const
{
    int k = 0;
    for (const auto &fe : factors_) {
        k += fe.second;
    }
    return k;
}

int DerivMonomial::exponent(int order) const
{
    for (const auto &[o, e] : factors_) {
        if (o == order) {
            return e;
        }
    }
    return 0;
}

std::vector<int> DerivMonomial::orders() const
{
    std::vector<int> out;
    for (const auto &[o, e] : factors_) {
        out.insert(out.end(), static_cast<std::size_t>(e), o);
    }
    return out;
}

DerivMonomial DerivMonomial::times(const DerivMonomial &other) const
{
    Factors f = factors_;
    f.insert(f.end(), other.factors_.begin(), other.factors_.end());
    return from_factors(std::move(f));
}

DerivMonomial DerivMonomial::with_factor(int order, int count) const
{
    if (count == 0) {
        return *this;
    }
    Factors f = factors_;
    f.emplace_back(order, count);
    return from_factors(std::move(f));
}

DerivMonomial DerivMonomial::without_factor(int order, int count) const
{
    if (count == 0) {
        return *this;
    }
    DerivMonomial m = *this;
    for (auto it = m.factors_.begin(); it != m.factors_.end(); ++it) {
        if (it->first == order) {
            if (it->second < count) {
                break;
            }
            it->second -= count;
            if (it->second == 0) {
                m.factors_.erase(it);
            }
            return m;
        }
    }
    throw std::logic_error("monomial " + str() + " lacks factor f" + std::to_string(order));
}

bool DerivMonomial::all_exponents_even() const
{
    return std::all_of(factors_.begin(), factors_.end(), [](const auto &fe) { return fe.second % 2 == 0; });
}

std::string DerivMonomial::str() const
{
    if (factors_.empty()) {
        return "f";
    }
    std::string s;
    for (const auto &[o, e] : factors_) {
        if (!s.empty()) {
            s += ' ';
        }
        s += 'f' + std::to_string(o);
        if (e != 1) {
            s += '^' + std::to_string(e);
        }
    }
    const int den = denominator_power();
    if (den > 0) {
        s += "/f^" + std::to_string(den);
    }
    return s;
}

namespace
{

int parse_int(std::string_view s, std::size_t &pos)
{
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        ++pos;
    }
    if (pos == start) {
        throw std::invalid_argument("expected integer in monomial '" + std::string(s) + "'");
    }
    return std::stoi(std::string(s.substr(start, pos - start)));
}

void skip_ws(std::string_view s, std::size_t &pos)
{
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '*')) {
        ++pos;
    }
}

} // namespace

DerivMonomial DerivMonomial::parse(std::string_view text)
{
    std::size_t pos = 0;
    skip_ws(text, pos);
    if (text.substr(pos) == "f") {
        return {};
    }
    Factors factors;
    int den = -1;
    while (pos < text.size()) {
        skip_ws(text, pos);
        if (pos >= text.size()) {
            break;
        }
        if (text[pos] == '/') {
            ++pos;
            skip_ws(text, pos);
            if (pos >= text.size() || text[pos] != 'f') {
                throw std::invalid_argument("malformed denominator in '" + std::string(text) + "'");
            }
            ++pos;
            den = 1;
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                den = parse_int(text, pos);
            }
            skip_ws(text, pos);
            if (pos != text.size()) {
                throw std::invalid_argument("trailing text in monomial '" + std::string(text) + "'");
            }
            break;
        }
        if (text[pos] != 'f') {
            throw std::invalid_argument("unexpected character in monomial '" + std::string(text) + "'");
        }
        ++pos;
        const int order = parse_int(text, pos);
        int exp = 1;
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            exp = parse_int(text, pos);
        }
        factors.emplace_back(order, exp);
    }
    if (factors.empty()) {
        throw std::invalid_argument("empty monomial '" + std::string(text) + "'");
    }
    DerivMonomial m = from_factors(std::move(factors));
    const int expected = m.denominator_power();
    if (den >= 0 && den != expected) {
        throw std::invalid_argument("denominator power in '" + std::string(text) + "' should be " +
                                    std::to_string(expected));
    }
    return m;
}

bool MonomialOrder::operator()(const DerivMonomial &a, const DerivMonomial &b) const
{
    const auto &fa = a.factors();
    const auto &fb = b.factors();
    auto ia = fa.rbegin();
    auto ib = fb.rbegin();
    for (; ia != fa.rend() && ib != fb.rend(); ++ia, ++ib) {
        if (*ia != *ib) {
            return *ia > *ib;
        }
    }
    // A monomial that still has factors left sorts first.
    return ia != fa.rend() && ib == fb.rend();
}

Combination::Combination(std::initializer_list<std::pair<DerivMonomial, Rational>> terms)
{
    for (const auto &[m, c] : terms) {
        add(m, c);
    }
}

Rational Combination::coefficient(const DerivMonomial &m) const
{
    const auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Combination::add(const DerivMonomial &m, const Rational &c)
{
    if (c.is_zero()) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

Combination &Combination::operator+=(const Combination &o)
{
    for (const auto &[m, c] : o.terms_) {
        add(m, c);
    }
    return *this;
}

Combination &Combination::operator-=(const Combination &o)
{
    for (const auto &[m, c] : o.terms_) {
        add(m, -c);
    }
    return *this;
}

Combination &Combination::operator*=(const Rational &s)
{
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto &tc : terms_) {
        tc.second *= s;
    }
    return *this;
}

bool Combination::is_homogeneous() const
{
    if (terms_.empty()) {
        return true;
    }
    const int w = terms_.begin()->first.weight();
    return std::all_of(terms_.begin(), terms_.end(), [w](const auto &t) { return t.first.weight() == w; });
}

std::string Combination::str() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::string s;
    bool first = true;
    for (const auto &[m, c] : terms_) {
        const Rational mag = abs(c);
        if (first) {
            s += c.sign() < 0 ? "-" : "";
        } else {
            s += c.sign() < 0 ? " - " : " + ";
        }
        first = false;
        if (mag != Rational(1)) {
            s += mag.str() + ' ';
        }
        s += m.str();
    }
    return s;
}

std::string Combination::serialize() const
{
    std::string s;
    for (const auto &[m, c] : terms_) {
        s += c.str() + ' ' + m.str() + '\n';
    }
    return s;
}

Combination Combination::deserialize(std::string_view text)
{
    Combination out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') {
            continue;
        }
        line = line.substr(b);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.pop_back();
        }
        const auto sp = line.find(' ');
        if (sp == std::string::npos) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected '<coeff> <monomial>'");
        }
        try {
            out.add(DerivMonomial::parse(line.substr(sp + 1)), Rational::parse(line.substr(0, sp)));
        } catch (const std::invalid_argument &e) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

Combination d_dy(const DerivMonomial &m)
{
    Combination out;
    for (const auto &[order, exp] : m.factors()) {
        out.add(m.without_factor(order).with_factor(order + 1), Rational(exp));
    }
    // d/dy f^{-(K-1)} = -(K-1) f_1 f^{-K}
    const int den = m.denominator_power();
    if (den != 0) {
        out.add(m.with_factor(1), Rational(-den));
    }
    return out;
}

Combination d_dy(const Combination &c)
{
    Combination out;
    for (const auto &[m, coeff] : c.terms()) {
        out += d_dy(m) * coeff;
    }
    return out;
}

Combination d_dt(const DerivMonomial &m)
{
    Combination out;
    const Rational half(1, 2);
    for (const auto &[order, exp] : m.factors()) {
        out.add(m.without_factor(order).with_factor(order + 2), Rational(exp) * half);
    }
    const int den = m.denominator_power();
    if (den != 0) {
        out.add(m.with_factor(2), Rational(-den) * half);
    }
    return out;
}

Combination d_dt(const Combination &c)
{
    Combination out;
    for (const auto &[m, coeff] : c.terms()) {
        out += d_dt(m) * coeff;
    }
    return out;
}

} // namespace heatcalc
