#pragma once

/**
 * @file exactnum.hpp
 * @brief Exact integers, rationals and odds.
 *
 * ExactInt is an arbitrary-precision signed integer. ExactRational is kept in
 * lowest terms with a positive denominator at all times, so two rationals are
 * equal iff their numerators and denominators are equal. Odds are a reduced
 * for:against pair and convert to and from probabilities without loss.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace chances {

using ExactInt = boost::multiprecision::cpp_int;

class ExactRational {
public:
    ExactRational() : num_(0), den_(1) {}
    ExactRational(ExactInt n) : num_(std::move(n)), den_(1) {}  // NOLINT: implicit by design of arithmetic
    ExactRational(std::int64_t n) : num_(n), den_(1) {}          // NOLINT
    ExactRational(int n) : num_(n), den_(1) {}                   // NOLINT
    ExactRational(ExactInt n, ExactInt d);

    /// Parses "p/q", a signed integer, or a finite decimal such as "-0.05".
    static ExactRational parse(std::string_view text);

    const ExactInt& numerator() const noexcept { return num_; }
    const ExactInt& denominator() const noexcept { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_.sign(); }

    ExactRational reciprocal() const;

    // Correctly rounded to within one unit in the last place even when the
    // numerator and denominator individually exceed the double range.
    long double to_long_double() const;
    double to_double() const { return static_cast<double>(to_long_double()); }

    // Always "num/den", including integers ("3/1") and zero ("0/1").
    std::string str() const;

    ExactRational operator-() const;
    friend ExactRational operator+(const ExactRational& a, const ExactRational& b);
    friend ExactRational operator-(const ExactRational& a, const ExactRational& b);
    friend ExactRational operator*(const ExactRational& a, const ExactRational& b);
    friend ExactRational operator/(const ExactRational& a, const ExactRational& b);

    ExactRational& operator+=(const ExactRational& o) { return *this = *this + o; }
    ExactRational& operator-=(const ExactRational& o) { return *this = *this - o; }
    ExactRational& operator*=(const ExactRational& o) { return *this = *this * o; }
    ExactRational& operator/=(const ExactRational& o) { return *this = *this / o; }

    friend bool operator==(const ExactRational& a, const ExactRational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b);

private:
    struct NoReduce {};
    ExactRational(ExactInt n, ExactInt d, NoReduce) : num_(std::move(n)), den_(std::move(d)) {}

    ExactInt num_;
    ExactInt den_;  // > 0
};

std::ostream& operator<<(std::ostream& os, const ExactRational& r);

/// Ratio of the integer quotient a/b as a long double, exact to rounding.
long double ratio_to_long_double(const ExactInt& a, const ExactInt& b);

/// Reduced odds `for : against`. Not both zero.
class Odds {
public:
    Odds(ExactInt for_count, ExactInt against_count);

    const ExactInt& for_count() const noexcept { return for_; }
    const ExactInt& against_count() const noexcept { return against_; }

    std::string str() const;  // "for:against"

    friend bool operator==(const Odds&, const Odds&) = default;

private:
    ExactInt for_;
    ExactInt against_;
};

ExactInt factorial(std::uint64_t n);

// Zero outside 0 <= k <= n.
ExactInt binomial_coefficient(std::uint64_t n, std::int64_t k);

// p = 0 gives 0:1 and p = 1 gives 1:0. Throws DomainError outside [0, 1].
Odds odds_from_probability(const ExactRational& p);
ExactRational probability_from_odds(const Odds& odds);

/// Renders |x| as "d1d2...dk x 10^e" keeping `lead_digits` leading digits,
/// truncating the rest, e.g. 32! -> "26313083 x 10^28".
std::string scaled_decimal(const ExactInt& x, unsigned lead_digits = 8);

}  // namespace chances
