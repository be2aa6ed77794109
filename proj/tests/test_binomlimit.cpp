#include "chances/binomlimit.hpp"
#include "chances/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using chances::ExactInt;
using chances::ExactRational;
namespace bl = chances::binomlimit;

namespace {

const ExactRational kHalf{ExactInt(1), ExactInt(2)};

// Every one of the 2^n coin sequences, counted by hand.
ExactRational enumerate_band(unsigned n, double c) {
    const double half_width = c * std::sqrt(static_cast<double>(n)) / 2.0;
    std::uint64_t inside = 0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        int heads = __builtin_popcountll(mask);
        if (std::fabs(heads - n / 2.0) <= half_width) ++inside;
    }
    return {ExactInt(inside), ExactInt(1) << n};
}

// log-space pmf sum in double: a second, inexact route to the band.
double lgamma_band(unsigned n, double p, double c) {
    const double hw = c * std::sqrt(static_cast<double>(n)) / 2.0, center = n * p;
    double sum = 0.0;
    for (unsigned k = 0; k <= n; ++k) {
        if (std::fabs(k - center) > hw + 1e-9) continue;
        sum += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
                        (n - k) * std::log1p(-p));
    }
    return sum;
}

// Smallest n by exact rational scan: P(|X - n p| <= n c) >= 1 - alpha.
std::uint64_t scan_sample_size(const ExactRational& p, const ExactRational& c, const ExactRational& alpha) {
    for (std::uint64_t n = 1;; ++n) {
        ExactRational mass = 0;
        const ExactRational center = p * ExactRational(ExactInt(n)), reach = c * ExactRational(ExactInt(n));
        for (std::uint64_t k = 0; k <= n; ++k) {
            ExactRational d = ExactRational(ExactInt(k)) - center;
            if (d.sign() < 0) d = -d;
            if (d <= reach)
                mass += ExactRational(chances::binomial_coefficient(n, static_cast<std::int64_t>(k)) *
                                          ExactInt(boost::multiprecision::pow(p.numerator(), static_cast<unsigned>(k))) *
                                          ExactInt(boost::multiprecision::pow(p.denominator() - p.numerator(),
                                                                              static_cast<unsigned>(n - k))),
                                      ExactInt(boost::multiprecision::pow(p.denominator(), static_cast<unsigned>(n))));
        }
        if (mass >= ExactRational(1) - alpha) return n;
    }
}

}  // namespace

TEST_CASE("exact central probability") {
    CHECK(bl::exact_central_probability({2, kHalf}, 1.0).exact == kHalf);
    CHECK(*bl::exact_central_probability({4, kHalf}, 1.0).exact == ExactRational(ExactInt(14), ExactInt(16)));
    for (unsigned n = 1; n <= 16; ++n)
        for (double c : {0.3, 0.5, 1.0, 1.5, 2.0, 3.0}) CHECK(*bl::exact_central_probability({n, kHalf}, c).exact == enumerate_band(n, c));

    auto r3600 = bl::exact_central_probability({3600, kHalf}, 1.0);
    REQUIRE(r3600.exact);
    CHECK(std::fabs(r3600.value - 0.6827) < 0.01);
    CHECK(r3600.value == doctest::Approx(lgamma_band(3600, 0.5, 1.0)).epsilon(1e-11));

    SUBCASE("asymmetric p") {
        ExactRational p = ExactRational::parse("3/10");
        auto r = bl::exact_central_probability({50, p}, 1.0);
        CHECK(r.value == doctest::Approx(lgamma_band(50, 0.3, 1.0)).epsilon(1e-12));
    }
    SUBCASE("long double path above the rational limit") {
        auto r = bl::exact_central_probability({6400, kHalf}, 1.0);
        CHECK_FALSE(r.exact);
        CHECK(r.value == doctest::Approx(lgamma_band(6400, 0.5, 1.0)).epsilon(1e-10));
        auto at_limit = bl::exact_central_probability_rational({6400, kHalf}, 1.0);
        CHECK(r.value == doctest::Approx(at_limit.to_double()).epsilon(1e-14));
    }
    CHECK_THROWS_AS(bl::exact_central_probability({0, kHalf}, 1.0), chances::DomainError);
    CHECK_THROWS_AS(bl::exact_central_probability({5, ExactRational(1)}, 1.0), chances::DomainError);
}

TEST_CASE("band probability invariants") {
    for (unsigned n : {5u, 36u, 101u}) {
        double previous = 0.0;
        for (double c = 0.0; c <= std::sqrt(n) + 0.5; c += 0.05) {
            double v = bl::exact_central_probability({n, kHalf}, c).value;
            CHECK(v >= previous);
            previous = v;
        }
        CHECK(*bl::exact_central_probability({n, kHalf}, std::sqrt(static_cast<double>(n))).exact == ExactRational(1));
    }
    double previous_gap = 1.0;
    for (unsigned n : {100u, 400u, 1600u, 6400u}) {
        double gap = std::fabs(bl::exact_central_probability({n, kHalf}, 1.0).value - 0.682688);
        CHECK(gap < previous_gap);
        previous_gap = gap;
    }
}

TEST_CASE("demoivre_term") {
    CHECK(bl::demoivre_term(100, 0) == doctest::Approx(2.0 / std::sqrt(200.0 * std::numbers::pi)).epsilon(1e-15));
    CHECK(bl::demoivre_term(100, 0) == doctest::Approx(0.079788).epsilon(1e-5));
    const double exact100 = 0.07958923738717877;  // C(100,50)/2^100
    CHECK(std::fabs(bl::demoivre_term(100, 0) / exact100 - 1.0) < 0.01);
    const double exact10000 = ExactRational(chances::binomial_coefficient(10000, 5000), ExactInt(1) << 10000).to_double();
    CHECK(std::fabs(bl::demoivre_term(10000, 0) / exact10000 - 1.0) < 0.001);

    SUBCASE("Riemann sum approaches the limit") {
        for (unsigned n : {400u, 1600u, 6400u}) {
            double hw = std::sqrt(static_cast<double>(n)) / 2.0, sum = 0.0;
            for (int l = static_cast<int>(-hw); l <= static_cast<int>(hw); ++l) sum += bl::demoivre_term(n, l);
            CHECK(std::fabs(sum - bl::limit_central_probability(1.0)) <= 2.0 / std::sqrt(n));
        }
    }
}

TEST_CASE("stirling") {
    for (unsigned n : {10u, 50u, 200u}) {
        double exact = static_cast<double>(std::log(ExactRational(chances::factorial(n)).to_long_double()));
        CHECK(std::fabs(bl::stirling_log_factorial(n) - exact) < 1.0 / (12.0 * n) + 1e-9);
        CHECK(std::fabs(bl::stirling_log_factorial(n) - exact) > 1.0 / (12.0 * n + 1.0));
    }
}

TEST_CASE("limit central probability") {
    CHECK(std::fabs(bl::limit_central_probability(1.0) - 0.682688) < 1e-5);
    CHECK(std::fabs(bl::limit_central_probability(2.0) - 0.954500) < 1e-5);
    CHECK(bl::limit_central_probability(0.0) == 0.0);
    CHECK(bl::limit_central_probability(1e-9) < 1e-8);
    for (double c = 0.1; c < 8.0; c += 0.37) {
        CHECK(std::fabs(bl::limit_central_probability(c) - std::erf(c / std::sqrt(2.0))) < 1e-12);
        CHECK(std::fabs(bl::limit_central_probability(c) + bl::limit_tail_probability(c) - 1.0) < 1e-10);
    }
    CHECK_THROWS_AS(bl::limit_central_probability(-1.0), chances::DomainError);
}

TEST_CASE("remark1 fractions") {
    CHECK(bl::remark1_fraction(3600) == ExactRational(ExactInt(1), ExactInt(120)));
    CHECK(bl::remark1_fraction(14400) == ExactRational(ExactInt(1), ExactInt(240)));  // printed as 260, a typo
    CHECK(bl::remark1_fraction(1000000) == ExactRational(ExactInt(1), ExactInt(2000)));
    CHECK(bl::remark1_fraction(1) == kHalf);
    CHECK_THROWS_AS(bl::remark1_fraction(3601), chances::DomainError);
    CHECK_THROWS_AS(bl::remark1_fraction(0), chances::DomainError);
}

TEST_CASE("sample size") {
    CHECK(bl::sample_size(0.5, 0.5, 0.5) == 1);
    CHECK(bl::sample_size(0.5, 0.05, 0.05) == 371);
    CHECK(bl::sample_size(0.5, 0.05, 0.05) ==
          scan_sample_size(kHalf, ExactRational::parse("0.05"), ExactRational::parse("0.05")));
    CHECK(bl::sample_size(0.5, 0.1, 0.05) == scan_sample_size(kHalf, ExactRational::parse("0.1"), ExactRational::parse("0.05")));
    CHECK(bl::sample_size(0.3, 0.1, 0.1) ==
          scan_sample_size(ExactRational::parse("0.3"), ExactRational::parse("0.1"), ExactRational::parse("0.1")));

    SUBCASE("boundary: satisfied at n, violated at n - 1") {
        for (double c : {0.2, 0.1, 0.05})
            for (double alpha : {0.2, 0.05, 0.01}) {
                auto n = bl::sample_size(0.5, c, alpha);
                CHECK(bl::frequency_band_probability(n, 0.5, c) >= 1 - alpha);
                if (n > 1) CHECK(bl::frequency_band_probability(n - 1, 0.5, c) < 1 - alpha);
            }
    }
    SUBCASE("halving c increases n") {
        for (double c : {0.2, 0.1, 0.05})
            for (double alpha : {0.2, 0.1, 0.05, 0.01}) CHECK(bl::sample_size(0.5, c / 2, alpha) > bl::sample_size(0.5, c, alpha));
    }
    CHECK_THROWS_AS(bl::sample_size(0.0, 0.1, 0.1), chances::DomainError);
    CHECK_THROWS_AS(bl::sample_size(0.5, 0.0, 0.1), chances::DomainError);
    CHECK_THROWS_AS(bl::sample_size(0.5, 0.1, 1.0), chances::DomainError);
}

TEST_CASE("simulate band") {
    CHECK(bl::simulate_band({1, kHalf}, 2.0, 1000, 99).fraction() == 1.0);

    auto a = bl::simulate_band({3600, kHalf}, 1.0, 2000, 1733, 1);
    auto b = bl::simulate_band({3600, kHalf}, 1.0, 2000, 1733, 1);
    auto c = bl::simulate_band({3600, kHalf}, 1.0, 2000, 1733, 3);
    auto d = bl::simulate_band({3600, kHalf}, 1.0, 2000, 1733, 8);
    CHECK(a.inside == b.inside);
    CHECK(a.inside == c.inside);
    CHECK(a.inside == d.inside);
    CHECK(bl::simulate_band({3600, kHalf}, 1.0, 2000, 1734).inside != a.inside);

    // Within 4 binomial standard deviations of the exact band probability.
    const double truth = bl::exact_central_probability({3600, kHalf}, 1.0).value;
    CHECK(std::fabs(a.fraction() - truth) < 4.0 * std::sqrt(truth * (1 - truth) / 2000));

    auto biased = bl::simulate_band({200, ExactRational::parse("0.3")}, 1.5, 4000, 7);
    const double truth_biased = bl::exact_central_probability({200, ExactRational::parse("0.3")}, 1.5).value;
    CHECK(std::fabs(biased.fraction() - truth_biased) < 4.0 * std::sqrt(truth_biased * (1 - truth_biased) / 4000));

    CHECK_THROWS_AS(bl::simulate_band({10, kHalf}, 1.0, 0, 1), chances::DomainError);
}
