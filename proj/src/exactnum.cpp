#include "chances/exactnum.hpp"

#include "chances/errors.hpp"

#include <boost/integer/common_factor_rt.hpp>

#include <cctype>
#include <cmath>
#include <ostream>

namespace chances {

namespace mp = boost::multiprecision;

ExactRational::ExactRational(ExactInt n, ExactInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_ == 0) throw DomainError("rational with zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    ExactInt g = mp::gcd(num_, den_);
    if (g != 1) {
        num_ /= g;
        den_ /= g;
    }
}

ExactRational ExactRational::parse(std::string_view text) {
    auto bad = [&] { return DomainError("not a rational number: '" + std::string(text) + "'"); };
    if (text.empty()) throw bad();

    auto parse_int = [&](std::string_view s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size()) throw bad();
        for (std::size_t j = i; j < s.size(); ++j)
            if (!std::isdigit(static_cast<unsigned char>(s[j]))) throw bad();
        ExactInt v(std::string(s.substr(i)));
        return s[0] == '-' ? ExactInt(-v) : v;
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        ExactInt d = parse_int(text.substr(slash + 1));
        if (d == 0) throw DomainError("rational with zero denominator");
        return {parse_int(text.substr(0, slash)), d};
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.remove_prefix(1);
        if (whole.empty() && frac.empty()) throw bad();
        std::string digits = std::string(whole) + std::string(frac);
        for (char ch : digits)
            if (!std::isdigit(static_cast<unsigned char>(ch))) throw bad();
        ExactInt n(digits.empty() ? std::string("0") : digits);
        ExactInt d = mp::pow(ExactInt(10), static_cast<unsigned>(frac.size()));
        return {negative ? ExactInt(-n) : n, d};
    }
    return {parse_int(text), ExactInt(1)};
}

ExactRational ExactRational::reciprocal() const {
    if (num_ == 0) throw DomainError("reciprocal of zero");
    return {den_, num_};
}

long double ratio_to_long_double(const ExactInt& a, const ExactInt& b) {
    if (b == 0) throw DomainError("division by zero");
    if (a == 0) return 0.0L;
    bool negative = (a < 0) != (b < 0);
    ExactInt na = mp::abs(a), nb = mp::abs(b);

    // Scale so the integer quotient carries ~96 significant bits, then let
    // ldexp restore the exponent.
    constexpr long shift_bits = 96;
    long ea = static_cast<long>(mp::msb(na));
    long eb = static_cast<long>(mp::msb(nb));
    long shift = shift_bits - (ea - eb);
    ExactInt q = shift >= 0 ? ExactInt((na << shift) / nb) : ExactInt(na / (nb << -shift));

    // q < 2^98; split into two exact 64-bit-or-less halves.
    ExactInt hi = q >> 48;
    ExactInt lo = q - (hi << 48);
    long double value = std::ldexp(static_cast<long double>(hi.convert_to<std::uint64_t>()), 48) +
                        static_cast<long double>(lo.convert_to<std::uint64_t>());
    value = std::ldexp(value, static_cast<int>(-shift));
    return negative ? -value : value;
}

long double ExactRational::to_long_double() const { return ratio_to_long_double(num_, den_); }

std::string ExactRational::str() const { return num_.str() + "/" + den_.str(); }

ExactRational ExactRational::operator-() const { return {ExactInt(-num_), den_, NoReduce{}}; }

ExactRational operator+(const ExactRational& a, const ExactRational& b) {
    if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

ExactRational operator-(const ExactRational& a, const ExactRational& b) { return a + (-b); }

ExactRational operator*(const ExactRational& a, const ExactRational& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
}

ExactRational operator/(const ExactRational& a, const ExactRational& b) {
    if (b.num_ == 0) throw DomainError("division by zero");
    return {a.num_ * b.den_, a.den_ * b.num_};
}

std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    ExactInt lhs = a.num_ * b.den_;
    ExactInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const ExactRational& r) { return os << r.str(); }

Odds::Odds(ExactInt for_count, ExactInt against_count)
    : for_(std::move(for_count)), against_(std::move(against_count)) {
    if (for_ < 0 || against_ < 0) throw DomainError("odds must be non-negative");
    if (for_ == 0 && against_ == 0) throw DomainError("odds 0:0 are undefined");
    ExactInt g = mp::gcd(for_, against_);
    for_ /= g;
    against_ /= g;
}

std::string Odds::str() const { return for_.str() + ":" + against_.str(); }

ExactInt factorial(std::uint64_t n) {
    ExactInt result = 1;
    for (std::uint64_t k = 2; k <= n; ++k) result *= k;
    return result;
}

ExactInt binomial_coefficient(std::uint64_t n, std::int64_t k) {
    if (k < 0 || static_cast<std::uint64_t>(k) > n) return 0;
    std::uint64_t kk = static_cast<std::uint64_t>(k);
    if (kk > n - kk) kk = n - kk;
    // Each prefix product is itself a binomial coefficient, so division is exact.
    ExactInt result = 1;
    for (std::uint64_t i = 1; i <= kk; ++i) {
        result *= (n - kk + i);
        result /= i;
    }
    return result;
}

Odds odds_from_probability(const ExactRational& p) {
    if (p.sign() < 0 || p > ExactRational(1))
        throw DomainError("probability " + p.str() + " outside [0, 1]");
    // Lowest terms already make num and den - num coprime.
    return {p.numerator(), p.denominator() - p.numerator()};
}

ExactRational probability_from_odds(const Odds& odds) {
    return {odds.for_count(), odds.for_count() + odds.against_count()};
}

std::string scaled_decimal(const ExactInt& x, unsigned lead_digits) {
    std::string digits = ExactInt(mp::abs(x)).str();
    std::string sign = x < 0 ? "-" : "";
    if (lead_digits == 0) lead_digits = 1;
    if (digits.size() <= lead_digits) return sign + digits + " x 10^0";
    std::size_t exponent = digits.size() - lead_digits;
    return sign + digits.substr(0, lead_digits) + " x 10^" + std::to_string(exponent);
}

}  // namespace chances
