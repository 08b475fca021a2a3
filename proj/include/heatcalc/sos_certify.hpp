#ifndef HEATCALC_SOS_CERTIFY_HPP
#define HEATCALC_SOS_CERTIFY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heatcalc/term_algebra.hpp"

namespace heatcalc
{

/// Integer partitions of n, each as a non-increasing sequence, ordered by
/// decreasing largest part and then lexicographically (descending).
std::vector<std::vector<int>> integer_partitions(int n);

/// One monomial per partition of n. Inside a square the partition
/// (l_1..l_r) stands for prod f_{l_i} / f^r; as a DerivMonomial it is the
/// weight-n monomial with orders {l_1..l_r}.
std::vector<DerivMonomial> square_basis(int n);

/// f * (sum_i c_i B_i)^2 over partition-basis monomials B_i of weight n.
struct SquareForm
{
    std::map<DerivMonomial, Rational, MonomialOrder> coeffs;

    /// Coefficients aligned with square_basis(n); zeros are skipped.
    static SquareForm over_basis(int n, const std::vector<Rational> &dense);
    /// Common weight of the basis monomials (0 if empty, -1 if mixed).
    int order() const;
};

/// Expands the square into weight-2n monomials and reduces to canonical form.
Combination expand_square(const SquareForm &s);

/// sign * (sum of squares + remainder) represents 2 d^n h / dt^n.
struct Certificate
{
    int order = 0;
    int sign = 1;
    std::vector<SquareForm> squares;
    /// Nonnegative coefficients on monomials whose exponents are all even.
    Combination remainder;
};

struct CertificateCheck
{
    bool verified = false;
    /// entropy_derivative(n) - sign * (sum expand_square + remainder).
    Combination residual;
    /// Non-empty when the certificate is malformed.
    std::string defect;
};

CertificateCheck verify_certificate(const Certificate &cert);

/// Built-in certificates for n = 1..4; nullopt otherwise.
std::optional<Certificate> known_certificate(int n);

/// Second-order family: squares (a f2/f + b f1^2/f^2), (c f1^2/f^2) and
/// remainder (1 - a^2) f2^2/f + (-b^2 - c^2 - 4ab/3 - 1/3) f1^4/f^3.
bool second_order_family_ok(const Rational &a, const Rational &b, const Rational &c);
Certificate second_order_family_certificate(const Rational &a, const Rational &b, const Rational &c);

/// Third-order family: square (f3/f - f1 f2/f^2 + b f1^3/f^3) with remainder
/// (6b - 2) f1^2 f2^2/f^3 + (6/5 - 16b/5 - b^2) f1^6/f^5.
struct ThirdOrderFamily
{
    bool ok = false;
    Rational cross_coeff;
    Rational pure_coeff;
    /// True when the member coincides with the built-in third-order certificate.
    bool matches_known = false;
};
ThirdOrderFamily third_order_family(const Rational &b);
Certificate third_order_family_certificate(const Rational &b);

/// a + b sqrt(d), exact.
struct QuadraticSurd
{
    Rational a;
    Rational b;
    long d = 0;

    int sign() const;
    friend QuadraticSurd operator+(const QuadraticSurd &x, const QuadraticSurd &y);
    friend QuadraticSurd operator-(const QuadraticSurd &x, const QuadraticSurd &y);
    friend QuadraticSurd operator*(const QuadraticSurd &x, const QuadraticSurd &y);
    friend bool operator==(const QuadraticSurd &, const QuadraticSurd &) = default;
    std::string str() const;
};

/// (-8 + sqrt 94)/5, the upper end of the third-order family.
QuadraticSurd third_order_upper_endpoint();
/// 6/5 - 16b/5 - b^2 evaluated exactly.
QuadraticSurd third_order_pure_coeff(const QuadraticSurd &b);

struct SearchConfig
{
    int starts = 64;
    std::uint64_t seed = 1;
    int max_iterations = 400;
    std::int64_t max_denominator = 1000000;
    /// Include the built-in certificate (when one exists) as the first start.
    bool seed_known = true;
    unsigned threads = 0;
};

struct SearchResult
{
    std::optional<Certificate> certificate;
    /// Matching residual norm of the best numeric candidate.
    double residual_norm = 0.0;
    /// Best candidate, one dense coefficient row per square (triangular).
    std::vector<std::vector<double>> best_squares;
    int starts_run = 0;
    /// Index of the start that produced the certificate, -1 if none.
    int winning_start = -1;
};

/// Multi-start damped least squares over triangular square coefficients,
/// followed by rational snapping and exact re-verification.
SearchResult search_certificate(int n, const SearchConfig &config = {});

} // namespace heatcalc

#endif
