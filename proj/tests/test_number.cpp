#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "randlitt/number.hpp"

using namespace randlitt;

TEST_SUITE("core-number") {

TEST_CASE("dist_to_nearest_int examples")
{
    CHECK(dist_to_nearest_int(0.75) == 0.25);
    CHECK(dist_to_nearest_int(-3.0) == 0.0);
    CHECK(dist_to_nearest_int(10.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(dist_to_nearest_int(0.5) == 0.5);
    CHECK_THROWS_AS(dist_to_nearest_int(NAN), DomainError);
    CHECK_THROWS_AS(dist_to_nearest_int(INFINITY), DomainError);
}

TEST_CASE("dist_to_nearest_int is 1-periodic, even and bounded")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int i = 0; i < 100000; ++i) {
        const double x = dist(rng);
        const double d = dist_to_nearest_int(x);
        REQUIRE(d >= 0.0);
        REQUIRE(d <= 0.5);
        REQUIRE(dist_to_nearest_int(-x) == d);
        REQUIRE(std::abs(dist_to_nearest_int(x + 1.0) - d) <= 1e-9);
    }
}

TEST_CASE("shifted_norm examples")
{
    CHECK(shifted_norm(2, 0.5, 0.0) == 0.0);
    CHECK(shifted_norm(1, 0.25, 0.5) == 0.25);
    CHECK_THROWS_AS(shifted_norm(0, 0.25, 0.5), DomainError);

    // 987 is a Fibonacci denominator of the golden ratio; value from the
    // 166-bit oracle: 0.0004531038537848220727944811...
    const double phi = named_value(NamedConstant::Golden);
    CHECK(oracle::shifted_norm(987, oracle::golden(), 0.0) ==
          doctest::Approx(0.0004531038537848220727944811).epsilon(1e-15));
    CHECK(shifted_norm(987, phi, 0.0) == doctest::Approx(0.0004531038537848220727944811).epsilon(1e-9));
    CHECK(shifted_norm_high(987, named_fraction(NamedConstant::Golden), 0.0) ==
          doctest::Approx(0.0004531038537848220727944811).epsilon(1e-14));
}

TEST_CASE("shifted_norm is 1-periodic in x")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        const std::uint64_t n = 1 + rng() % 10000;
        const double x = unit(rng), g = unit(rng);
        REQUIRE(std::abs(shifted_norm(n, x, g) - shifted_norm(n, x + 1.0, g)) <= 1e-9);
    }
}

TEST_CASE("double path agrees with the 166-bit oracle for |n x| <= 1e7")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const double x = unit(rng), shift = unit(rng);
        const std::uint64_t n = 1 + rng() % 10'000'000;
        const double expected = oracle::shifted_norm(n, oracle::HP(x), shift);
        REQUIRE(std::abs(shifted_norm(n, x, shift) - expected) <= 1e-6);
        // The 128-bit path holds the same double exactly.
        REQUIRE(std::abs(shifted_norm_high(n, Fraction128::from_double(x), shift) - expected) <= 1e-15);
    }
}

TEST_CASE("littlewood_statistic examples")
{
    const ShiftPair zero{};
    for (std::uint64_t n : {2u, 3u, 17u, 1000u}) CHECK(littlewood_statistic(n, 3.0, -2.0, zero) == 0.0);
    CHECK(littlewood_statistic(2, 0.25, 0.25, zero) == doctest::Approx(std::log(2.0) / 2));
    CHECK_THROWS_AS(littlewood_statistic(1, 0.25, 0.25, zero), DomainError);
    CHECK_THROWS_AS(littlewood_statistic_high(1, {}, {}, zero), DomainError);

    // n = 10^4, golden/silver, seed-0 shifts against the oracle.
    const ShiftStream stream(0);
    const auto s = stream(10000);
    const double expected = oracle::statistic(10000, oracle::golden(), oracle::silver(), s.gamma, s.delta);
    CHECK(littlewood_statistic(10000, named_value(NamedConstant::Golden),
                               named_value(NamedConstant::Silver), s) ==
          doctest::Approx(expected).epsilon(1e-9));
    CHECK(littlewood_statistic_high(10000, named_fraction(NamedConstant::Golden),
                                    named_fraction(NamedConstant::Silver), s) ==
          doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("deterministic_statistics")
{
    const auto [first, second] = deterministic_statistics(2, 0.25, 0.25);
    CHECK(first == doctest::Approx(std::log(2.0) / 2));
    CHECK(second == doctest::Approx(std::log(2.0) * std::log(2.0) / 2));
    CHECK_THROWS_AS(deterministic_statistics(1, 0.1, 0.1), DomainError);

    // Rational alpha = beta = p/q vanishes exactly at multiples of q.
    for (std::uint64_t n = 8; n <= 800; n += 8) {
        CHECK(deterministic_statistics(n, 0.375, 0.375).first == 0.0);
        CHECK(deterministic_statistics_high(n, Fraction128::from_rational(3, 8),
                                            Fraction128::from_rational(3, 8))
                  .second == 0.0);
    }
    // Non-dyadic rationals vanish up to representation error.
    CHECK(deterministic_statistics_high(7, Fraction128::from_rational(3, 7),
                                        Fraction128::from_rational(3, 7))
              .first < 1e-60);
}

TEST_CASE("golden/golden unshifted statistic keeps a positive floor up to 1e6")
{
    // Oracle: the minimum sits at the Fibonacci number 832040, with value
    // 832040 log(832040) ||832040 phi||^2 = 3.276677995183618e-06.
    const auto g = named_fraction(NamedConstant::Golden);
    double best = INFINITY;
    std::uint64_t arg = 0;
    for (std::uint64_t n = 2; n <= 1'000'000; ++n) {
        const double v = deterministic_statistics_high(n, g, g).first;
        if (v < best) best = v, arg = n;
    }
    CHECK(arg == 832040);
    CHECK(best == doctest::Approx(3.276677995183618117e-06).epsilon(1e-12));
    const oracle::HP nn(832040);
    CHECK(static_cast<double>(nn * boost::multiprecision::log(nn) *
                              oracle::norm(nn * oracle::golden()) * oracle::norm(nn * oracle::golden())) ==
          doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("Fraction128 conversions")
{
    CHECK(Fraction128::from_double(0.5).bits() == (static_cast<Fraction128::Bits>(1) << 127));
    CHECK(Fraction128::from_double(-0.25) == Fraction128::from_double(0.75));
    CHECK(Fraction128::from_double(7.125) == Fraction128::from_double(0.125));
    CHECK(Fraction128::from_rational(1, 4) == Fraction128::from_double(0.25));
    CHECK(Fraction128::from_rational(-1, 4) == Fraction128::from_double(0.75));
    CHECK(Fraction128::from_double(0.3).to_double() == 0.3);
    CHECK((4 * Fraction128::from_double(0.25)).distance_to_integer() == 0.0);
    CHECK_THROWS_AS(Fraction128::from_double(NAN), DomainError);
    CHECK_THROWS_AS(Fraction128::from_rational(1, 0), DomainError);
}

TEST_CASE("named constants carry 128 correct fractional bits")
{
    // floor(c * 2^128), computed with 60-digit arithmetic.
    auto parse = [](const char* s) {
        Fraction128::Bits v = 0;
        for (; *s; ++s) v = v * 10 + static_cast<unsigned>(*s - '0');
        return v;
    };
    CHECK(named_fraction(NamedConstant::Golden).bits() ==
          parse("210306068529402873165736369884012333108"));
    CHECK(named_fraction(NamedConstant::Silver).bits() ==
          parse("140949571415070559626692937523481902398"));
    CHECK(named_fraction(NamedConstant::Cbrt2).bits() ==
          parse("88446550070802784088865883063882943756"));
    CHECK(named_value(NamedConstant::Golden) == static_cast<double>(oracle::golden()));
    CHECK(named_value(NamedConstant::Silver) == static_cast<double>(oracle::silver()));
    CHECK(named_value(NamedConstant::Cbrt2) == static_cast<double>(oracle::cbrt2_frac()));
    CHECK(parse_named_constant("silver") == NamedConstant::Silver);
    CHECK_THROWS_AS(parse_named_constant("pi"), DomainError);
}

TEST_CASE("ShiftStream is counter-addressed")
{
    const ShiftStream a(42), b(42), c(43);
    std::vector<std::uint64_t> order(5000);
    std::iota(order.begin(), order.end(), 1);
    std::vector<ShiftPair> forward;
    for (auto n : order) forward.push_back(a(n));
    std::shuffle(order.begin(), order.end(), std::mt19937_64(3));
    for (auto n : order) {
        const auto p = b(n);
        REQUIRE(p.gamma == forward[n - 1].gamma);
        REQUIRE(p.delta == forward[n - 1].delta);
    }
    int same = 0;
    for (std::uint64_t n = 1; n <= 5000; ++n) {
        const auto p = a(n);
        REQUIRE(p.gamma >= 0.0);
        REQUIRE(p.gamma < 1.0);
        REQUIRE(p.delta >= 0.0);
        REQUIRE(p.delta < 1.0);
        same += c(n).gamma == p.gamma;
    }
    CHECK(same == 0);
    CHECK(ShiftStream::zero()(17).gamma == 0.0);
    CHECK(ShiftStream::zero().is_zero());
}

TEST_CASE("ShiftStream marginals pass a Kolmogorov-Smirnov check")
{
    const ShiftStream s(0);
    const std::size_t count = 200000;
    std::vector<double> gammas, deltas;
    double cross = 0.0;
    for (std::uint64_t n = 1; n <= count; ++n) {
        const auto p = s(n);
        gammas.push_back(p.gamma);
        deltas.push_back(p.delta);
        cross += (p.gamma - 0.5) * (p.delta - 0.5);
    }
    auto ks = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        double d = 0.0;
        const double m = static_cast<double>(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            d = std::max({d, (i + 1) / m - v[i], v[i] - i / m});
        return d;
    };
    // 0.1% critical value 1.95 / sqrt(n).
    const double critical = 1.95 / std::sqrt(static_cast<double>(count));
    CHECK(ks(gammas) < critical);
    CHECK(ks(deltas) < critical);
    // gamma_n and delta_n uncorrelated: |corr| well inside 4 sigma.
    CHECK(std::abs(cross / count * 12.0) < 4.0 / std::sqrt(static_cast<double>(count)));
}

} // TEST_SUITE
