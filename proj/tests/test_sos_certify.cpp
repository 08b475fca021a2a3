#include <gtest/gtest.h>

#include <random>

#include "heatcalc/gauss_oracle.hpp"
#include "heatcalc/ibp_reduce.hpp"
#include "heatcalc/sos_certify.hpp"

using namespace heatcalc;

namespace
{

DerivMonomial M(std::initializer_list<int> orders) { return DerivMonomial::from_orders(orders); }
Combination C(const char *text) { return Combination::deserialize(text); }
Rational R(long p, long q = 1) { return Rational(p, q); }

SquareForm random_square(std::mt19937_64 &rng, int n)
{
    std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
    std::vector<Rational> dense;
    for (std::size_t i = 0; i < square_basis(n).size(); ++i) {
        dense.push_back(R(num(rng), den(rng)));
    }
    return SquareForm::over_basis(n, dense);
}

SquareForm scaled_sum(const SquareForm &x, const Rational &a, const SquareForm &y, const Rational &b)
{
    SquareForm out;
    for (const auto &[m, c] : x.coeffs) {
        out.coeffs[m] += a * c;
    }
    for (const auto &[m, c] : y.coeffs) {
        out.coeffs[m] += b * c;
    }
    std::erase_if(out.coeffs, [](const auto &kv) { return kv.second.is_zero(); });
    return out;
}

} // namespace

TEST(Partitions, CountsAndOrder)
{
    EXPECT_EQ(integer_partitions(1).size(), 1u);
    EXPECT_EQ(integer_partitions(5).size(), 7u);
    EXPECT_EQ(integer_partitions(8).size(), 22u);
    EXPECT_EQ(integer_partitions(4), (std::vector<std::vector<int>>{{4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}}));
    EXPECT_THROW(integer_partitions(0), std::invalid_argument);
}

TEST(SquareBasis, Examples)
{
    EXPECT_EQ(square_basis(2), (std::vector<DerivMonomial>{M({2}), M({1, 1})}));
    EXPECT_EQ(square_basis(3), (std::vector<DerivMonomial>{M({3}), M({1, 2}), M({1, 1, 1})}));
    EXPECT_EQ(square_basis(4),
              (std::vector<DerivMonomial>{M({4}), M({1, 3}), M({2, 2}), M({1, 1, 2}), M({1, 1, 1, 1})}));
}

TEST(ExpandSquare, FourthOrderDisplays)
{
    const auto s1 = SquareForm::over_basis(4, {R(1), R(-6, 5), R(-7, 10), R(8, 5), R(-1, 2)});
    EXPECT_EQ(expand_square(s1), C("1 f4^2/f\n-104/25 f1^2 f3^2/f^3\n899/300 f2^4/f^3\n1839/50 f1^4 f2^2/f^5\n"
                                   "-1837/140 f1^8/f^7\n4 f2 f3^2/f^2\n-122/5 f1^2 f2^3/f^4"));
    const auto s2 = SquareForm::over_basis(4, {R(0), R(2, 5), R(0), R(-1, 3), R(9, 100)});
    EXPECT_EQ(expand_square(s2),
              C("4/25 f1^2 f3^2/f^3\n-704/900 f1^4 f2^2/f^5\n18567/70000 f1^8/f^7\n2/5 f1^2 f2^3/f^4"));
    const auto s3 = SquareForm::over_basis(4, {R(0), R(0), R(0), R(-4, 100), R(4, 100)});
    EXPECT_EQ(expand_square(s3), C("16/10000 f1^4 f2^2/f^5\n-80/70000 f1^8/f^7"));
    EXPECT_THROW(SquareForm::over_basis(4, {R(1)}), std::invalid_argument);
}

TEST(ExpandSquare, EvenUnderNegation)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i) {
        const int n = 2 + i % 4;
        const SquareForm s = random_square(rng, n);
        SquareForm neg = s;
        for (auto &kv : neg.coeffs) {
            kv.second = -kv.second;
        }
        EXPECT_EQ(expand_square(s), expand_square(neg));
    }
}

// (aA + B)^2 + (bA + C)^2 = (a^2 + b^2)(A + (aB + bC)/(a^2 + b^2))^2 + B^2 + C^2 - (aB + bC)^2/(a^2 + b^2)
TEST(ExpandSquare, MergingTwoSquares)
{
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    for (int i = 0; i < 30; ++i) {
        const int n = 3 + i % 2;
        Rational a = R(num(rng), den(rng)), b = R(num(rng), den(rng));
        if (a.is_zero() && b.is_zero()) {
            a = R(1);
        }
        const SquareForm A = random_square(rng, n), B = random_square(rng, n), Cs = random_square(rng, n);
        const Rational s = a * a + b * b;
        const SquareForm aB_bC = scaled_sum(B, a, Cs, b);
        const Combination lhs = expand_square(scaled_sum(A, a, B, R(1))) + expand_square(scaled_sum(A, b, Cs, R(1)));
        const Combination rhs = expand_square(scaled_sum(A, R(1), aB_bC, R(1) / s)) * s + expand_square(B) +
                                expand_square(Cs) - expand_square(aB_bC) * (R(1) / s);
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(Certificates, KnownOnesVerifyExactly)
{
    for (int n = 1; n <= 4; ++n) {
        const auto cert = known_certificate(n);
        ASSERT_TRUE(cert.has_value());
        const CertificateCheck chk = verify_certificate(*cert);
        EXPECT_TRUE(chk.verified) << n << ": " << chk.residual.str() << " " << chk.defect;
        EXPECT_TRUE(chk.residual.empty());
        EXPECT_EQ(cert->sign, n % 2 ? 1 : -1);
    }
    EXPECT_FALSE(known_certificate(5).has_value());
    EXPECT_EQ(known_certificate(4)->remainder,
              C("1/300 f2^4/f^3\n56/90000 f1^4 f2^2/f^5\n13/70000 f1^8/f^7"));
}

TEST(Certificates, PerturbedRemainderFailsWithExactResidual)
{
    Certificate cert = *known_certificate(3);
    cert.remainder = C("1/44 f1^6/f^5");
    const CertificateCheck chk = verify_certificate(cert);
    EXPECT_FALSE(chk.verified);
    EXPECT_EQ(chk.residual, Combination(M({1, 1, 1, 1, 1, 1}), R(1, 45) - R(1, 44)));
}

TEST(Certificates, MalformedAreRejected)
{
    Certificate wrong_sign = *known_certificate(3);
    wrong_sign.sign = -1;
    EXPECT_FALSE(verify_certificate(wrong_sign).verified);
    EXPECT_FALSE(verify_certificate(wrong_sign).defect.empty());

    Certificate negative = *known_certificate(4);
    negative.remainder.add(M({2, 2, 2, 2}), R(-1));
    EXPECT_NE(verify_certificate(negative).defect.find("negative"), std::string::npos);

    Certificate odd = *known_certificate(3);
    odd.remainder.add(M({2, 2, 2}), R(1));
    EXPECT_NE(verify_certificate(odd).defect.find("odd"), std::string::npos);

    Certificate mixed = *known_certificate(3);
    mixed.squares.push_back(SquareForm::over_basis(2, {R(1), R(0)}));
    EXPECT_FALSE(verify_certificate(mixed).verified);

    Certificate zero_order;
    EXPECT_FALSE(verify_certificate(zero_order).verified);
}

TEST(SecondOrderFamily, IntervalOnRationalGrid)
{
    for (int k = -120; k <= 60; ++k) {
        const Rational b = R(k, 60);
        const bool inside = b >= R(-1) && b <= R(-1, 3);
        EXPECT_EQ(second_order_family_ok(R(1), b, R(0)), inside) << b.str();
        if (inside) {
            EXPECT_TRUE(verify_certificate(second_order_family_certificate(R(1), b, R(0))).verified) << b.str();
        }
    }
    EXPECT_TRUE(second_order_family_ok(R(1), R(-1), R(0)));
    EXPECT_TRUE(second_order_family_ok(R(1), R(-1, 3), R(0)));
    EXPECT_FALSE(second_order_family_ok(R(1), R(-1, 4), R(0)));
    EXPECT_FALSE(second_order_family_ok(R(2), R(-1), R(0)));
    // Interior members with a < 1 exist, e.g. a = 9/10, b = -3/5.
    EXPECT_TRUE(second_order_family_ok(R(9, 10), R(-3, 5), R(0)));
    EXPECT_TRUE(verify_certificate(second_order_family_certificate(R(9, 10), R(-3, 5), R(1, 10))).verified);
}

TEST(ThirdOrderFamily, Members)
{
    const ThirdOrderFamily third = third_order_family(R(1, 3));
    EXPECT_TRUE(third.ok);
    EXPECT_EQ(third.cross_coeff, R(0));
    EXPECT_EQ(third.pure_coeff, R(1, 45));
    EXPECT_TRUE(third.matches_known);
    EXPECT_TRUE(verify_certificate(third_order_family_certificate(R(1, 3))).verified);

    // 0.34 sits just above the upper end (-8 + sqrt 94)/5 = 0.33907..., so the
    // pure coefficient 6/5 - 16(17/50)/5 - (17/50)^2 = -9/2500 is negative.
    const ThirdOrderFamily above = third_order_family(R(17, 50));
    EXPECT_EQ(above.cross_coeff, R(1, 25));
    EXPECT_EQ(above.pure_coeff, R(-9, 2500));
    EXPECT_FALSE(above.ok);
    EXPECT_FALSE(above.matches_known);

    const ThirdOrderFamily inside = third_order_family(R(339, 1000));
    EXPECT_TRUE(inside.ok);
    EXPECT_TRUE(verify_certificate(third_order_family_certificate(R(339, 1000))).verified);

    const ThirdOrderFamily half = third_order_family(R(1, 2));
    EXPECT_FALSE(half.ok);
    EXPECT_EQ(half.pure_coeff, R(-13, 20));
    EXPECT_FALSE(third_order_family(R(1, 4)).ok);
}

TEST(ThirdOrderFamily, UpperEndpointIsExactRoot)
{
    const QuadraticSurd b = third_order_upper_endpoint();
    const QuadraticSurd pure = third_order_pure_coeff(b);
    EXPECT_EQ(pure.sign(), 0);
    EXPECT_TRUE(pure.a.is_zero());
    EXPECT_TRUE(pure.b.is_zero());
    // The endpoint lies between 1/3 and 17/50.
    EXPECT_EQ((b - QuadraticSurd{R(1, 3), R(0), 94}).sign(), 1);
    EXPECT_EQ((b - QuadraticSurd{R(17, 50), R(0), 94}).sign(), -1);
    EXPECT_EQ((QuadraticSurd{R(0), R(-1), 2}).sign(), -1);
    EXPECT_EQ((QuadraticSurd{R(3, 2), R(-1), 2}).sign(), 1);
}

TEST(Search, RediscoversLowOrdersFromRandomStarts)
{
    for (int n : {2, 3}) {
        SearchConfig cfg;
        cfg.seed_known = false;
        cfg.starts = 16;
        const SearchResult res = search_certificate(n, cfg);
        ASSERT_TRUE(res.certificate.has_value()) << n;
        EXPECT_TRUE(verify_certificate(*res.certificate).verified);
        EXPECT_GE(res.winning_start, 0);
        EXPECT_LT(res.residual_norm, 1e-9);
    }
}

TEST(Search, FourthOrder)
{
    const SearchResult seeded = search_certificate(4);
    ASSERT_TRUE(seeded.certificate.has_value());
    EXPECT_TRUE(verify_certificate(*seeded.certificate).verified);
    EXPECT_EQ(seeded.winning_start, 0);

    SearchConfig cfg;
    cfg.seed_known = false;
    cfg.threads = 2;
    const SearchResult fresh = search_certificate(4, cfg);
    ASSERT_TRUE(fresh.certificate.has_value());
    EXPECT_TRUE(verify_certificate(*fresh.certificate).verified);
}

TEST(Search, FifthOrderIsReportedNotAsserted)
{
    SearchConfig cfg;
    cfg.starts = 4;
    const SearchResult res = search_certificate(5, cfg);
    EXPECT_EQ(res.starts_run, 4);
    EXPECT_EQ(res.best_squares.size(), 7u);
    EXPECT_GE(res.residual_norm, 0.0);
    if (res.certificate) {
        EXPECT_TRUE(verify_certificate(*res.certificate).verified);
    }
    EXPECT_THROW(search_certificate(1), std::invalid_argument);
}

TEST(Search, DeterministicForFixedSeed)
{
    SearchConfig cfg;
    cfg.seed_known = false;
    cfg.starts = 6;
    cfg.seed = 42;
    const SearchResult a = search_certificate(5, cfg);
    cfg.threads = 3;
    const SearchResult b = search_certificate(5, cfg);
    EXPECT_EQ(a.residual_norm, b.residual_norm);
    EXPECT_EQ(a.best_squares, b.best_squares);
}

// Every accepted certificate must agree with the numeric sign of the integral.
TEST(Certificates, SignAgreesWithQuadrature)
{
    const std::vector<GaussianMixture> mixes = {GaussianMixture::normal(0.0, 1.0), GaussianMixture::bimodal_reference(),
                                                GaussianMixture({{0.2, -1.0, 0.3}, {0.8, 1.5, 2.0}})};
    for (int n = 1; n <= 4; ++n) {
        const Certificate cert = *known_certificate(n);
        for (const auto &mix : mixes) {
            for (double t : {0.3, 1.0, 3.0}) {
                const double v = functional(entropy_derivative(n), mix, t, {1e-12, 30});
                EXPECT_GT(cert.sign * v, 0.0) << "n=" << n << " t=" << t;
                for (const auto &sq : cert.squares) {
                    EXPECT_GE(functional(expand_square(sq), mix, t, {1e-12, 30}), -1e-10);
                }
            }
        }
    }
}
