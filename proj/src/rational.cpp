#include "heatcalc/rational.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace heatcalc
{

Rational::Rational(long num, long den)
{
    if (den == 0) {
        throw std::invalid_argument("rational with zero denominator");
    }
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational Rational::parse(std::string_view text)
{
    std::string s(text);
    const auto trim = [](std::string &x) {
        const auto b = x.find_first_not_of(" \t");
        const auto e = x.find_last_not_of(" \t");
        x = (b == std::string::npos) ? std::string() : x.substr(b, e - b + 1);
    };
    trim(s);
    if (s.empty()) {
        throw std::invalid_argument("empty rational literal");
    }
    const auto valid_int = [](const std::string &x) {
        std::size_t i = (!x.empty() && (x[0] == '-' || x[0] == '+')) ? 1 : 0;
        if (i == x.size()) {
            return false;
        }
        for (; i < x.size(); ++i) {
            if (x[i] < '0' || x[i] > '9') {
                return false;
            }
        }
        return true;
    };
    const auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    trim(num);
    trim(den);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') {
        throw std::invalid_argument("malformed rational literal '" + s + "'");
    }
    if (num[0] == '+') {
        num.erase(0, 1);
    }
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) {
        throw std::invalid_argument("rational with zero denominator '" + s + "'");
    }
    return Rational(mpq_class(n, d));
}

long double Rational::to_long_double() const
{
    // Split so that huge numerators/denominators still divide accurately.
    const mpz_class &n = v_.get_num();
    const mpz_class &d = v_.get_den();
    long ne = 0, de = 0;
    const long double nm = mpz_get_d_2exp(&ne, n.get_mpz_t());
    const long double dm = mpz_get_d_2exp(&de, d.get_mpz_t());
    if (n.fits_slong_p() && d.fits_slong_p()) {
        return static_cast<long double>(n.get_si()) / static_cast<long double>(d.get_si());
    }
    return std::ldexp(nm / dm, static_cast<int>(ne - de));
}

std::string Rational::str() const
{
    if (is_integer()) {
        return v_.get_num().get_str();
    }
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational &Rational::operator/=(const Rational &o)
{
    if (o.is_zero()) {
        throw std::domain_error("rational division by zero");
    }
    v_ /= o.v_;
    return *this;
}

Rational abs(const Rational &r) { return r.sign() < 0 ? -r : r; }

Rational pow(const Rational &r, unsigned e)
{
    Rational out(1);
    for (unsigned i = 0; i < e; ++i) {
        out *= r;
    }
    return out;
}

Rational rationalize(double x, std::int64_t max_den, double rel_tol)
{
    if (!std::isfinite(x)) {
        throw std::invalid_argument("cannot rationalize a non-finite value");
    }
    const double tol = rel_tol * std::max(1.0, std::fabs(x));
    // Convergents h/k of the continued fraction of x.
    mpz_class h_prev = 1, h = static_cast<long>(std::floor(x));
    mpz_class k_prev = 0, k = 1;
    double rem = x - std::floor(x);
    Rational best(mpq_class(h, k));
    for (int iter = 0; iter < 64; ++iter) {
        if (std::fabs(best.to_double() - x) <= tol || rem < 1e-300) {
            return best;
        }
        const double inv = 1.0 / rem;
        const double a_d = std::floor(inv);
        rem = inv - a_d;
        const mpz_class a = static_cast<long>(a_d);
        mpz_class h_next = a * h + h_prev;
        mpz_class k_next = a * k + k_prev;
        if (k_next > max_den) {
            return best;
        }
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        best = Rational(mpq_class(h, k));
    }
    return best;
}

std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.str(); }

} // namespace heatcalc
