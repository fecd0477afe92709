#include <doctest.h>

#include <cmath>

#include "randlitt/errors.hpp"
#include "randlitt/parse.hpp"
#include "randlitt/psi.hpp"

using namespace randlitt;

TEST_SUITE("psi") {

TEST_CASE("paper family values")
{
    const auto psi = PsiSpec::paper(0.5);
    CHECK(psi(1) == doctest::Approx(1.5 / std::log(2.0)));
    CHECK(psi(2) == doctest::Approx(1.5 / (2 * std::log(3.0))));
    CHECK(psi(1000) == doctest::Approx(1.5 / (1000 * std::log(1001.0))).epsilon(1e-14));
    CHECK(psi.is_paper());
    CHECK(psi.paper_delta() == 0.5);
    CHECK(psi.first_partial_index(100) == 4);
    CHECK_THROWS_AS(PsiSpec::paper(0.0), DomainError);
    CHECK_THROWS_AS(PsiSpec::paper(-1.0), DomainError);
    CHECK_THROWS_AS(psi(0), DomainError);
}

TEST_CASE("families are nonincreasing")
{
    for (const char* text : {"paper:0.5", "paper:3", "constant:0.2", "custom:0.3,0.2,0.2,0.01"}) {
        const auto psi = PsiSpec::parse(text);
        for (std::uint64_t n = 1; n < 2000; ++n) REQUIRE(psi(n + 1) <= psi(n));
    }
}

TEST_CASE("custom tables")
{
    const auto psi = PsiSpec::custom({0.5, 0.25, 0.1});
    CHECK(psi(3) == 0.1);
    CHECK(psi(4) == 0.0);
    CHECK(psi.first_partial_index(10) == 3);
    CHECK(std::isnan(psi.paper_delta()));
    CHECK_THROWS_AS(PsiSpec::custom({0.1, 0.2}), DomainError);
    CHECK_THROWS_AS(PsiSpec::custom({0.1, -0.2}), DomainError);
    CHECK_THROWS_AS(PsiSpec::custom({}), DomainError);
    CHECK(PsiSpec::constant(0.3).first_partial_index(50) == 51);
    CHECK_THROWS_AS(PsiSpec::constant(-0.1), DomainError);
    CHECK_THROWS_AS(PsiSpec::constant(INFINITY), DomainError);
}

TEST_CASE("parse round-trips")
{
    for (const char* text : {"paper:0.5", "constant:0.1", "custom:1.1,1.1", "custom:0.3,0.1,0"}) {
        const auto psi = PsiSpec::parse(text);
        CHECK(psi.to_string() == text);
        CHECK(PsiSpec::parse(psi.to_string()).to_string() == text);
    }
    const auto odd = PsiSpec::paper(0.1 + 0.2);
    CHECK(PsiSpec::parse(odd.to_string())(7) == odd(7));
    for (const char* bad : {"", "paper", "paper:", "paper:x", "paper:0.5x", "gauss:1", "custom:",
                            "custom:0.1,,0.05", "constant:nan"})
        CHECK_THROWS_AS(PsiSpec::parse(bad), DomainError);
}

TEST_CASE("number parsing")
{
    CHECK(parse_count("1e6", "n") == 1'000'000);
    CHECK(parse_count("1000", "n") == 1000);
    CHECK_THROWS_AS(parse_count("1.5", "n"), DomainError);
    CHECK_THROWS_AS(parse_count("-3", "n"), DomainError);
    CHECK_THROWS_AS(parse_count("1e6x", "n"), DomainError);
    CHECK(parse_real("0.25", "x") == 0.25);
    CHECK_THROWS_AS(parse_real("inf", "x"), DomainError);
    CHECK_THROWS_AS(parse_real("0.25 ", "x"), DomainError);
}

} // TEST_SUITE
