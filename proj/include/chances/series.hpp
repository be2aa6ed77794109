#pragma once

/**
 * @file series.hpp
 * @brief Truncated formal power series without constant term.
 *
 * A PowerSeries<T> holds a_1 ... a_N, the coefficients of x ... x^N. The
 * constant term is implicitly zero, which is what makes composition and
 * reversion well defined at a finite truncation order.
 *
 * Powers are computed with the multinomial rule: the coefficient of x^m in
 * s^p is the sum, over every multiset of p degrees adding up to m, of the
 * product of the matching coefficients times the number of distinct
 * orderings of that multiset. The multiset is the "literal" part and the
 * ordering count the "numerical" part of each term.
 *
 * T is ExactRational for exact work or double for interop with real-valued
 * code; everything here is written against the field operations only.
 */

#include "chances/errors.hpp"
#include "chances/exactnum.hpp"

#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace chances::series {

template <typename T>
class PowerSeries {
public:
    PowerSeries() = default;

    // coeffs[i] is the coefficient of x^(i+1).
    explicit PowerSeries(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) {}

    static PowerSeries zero(std::size_t order) { return PowerSeries(std::vector<T>(order, T(0))); }
    static PowerSeries identity(std::size_t order) {
        auto s = zero(order);
        if (order > 0) s.coeffs_[0] = T(1);
        return s;
    }

    std::size_t order() const noexcept { return coeffs_.size(); }

    // Coefficient of x^degree; zero beyond the stored order and at degree 0.
    T coefficient(std::size_t degree) const {
        if (degree == 0 || degree > coeffs_.size()) return T(0);
        return coeffs_[degree - 1];
    }
    void set_coefficient(std::size_t degree, T value) {
        if (degree == 0) throw DomainError("power series carry no constant term");
        if (degree > coeffs_.size()) coeffs_.resize(degree, T(0));
        coeffs_[degree - 1] = std::move(value);
    }

    const std::vector<T>& coefficients() const noexcept { return coeffs_; }

    PowerSeries truncated(std::size_t order) const {
        std::vector<T> c(order, T(0));
        for (std::size_t i = 0; i < order && i < coeffs_.size(); ++i) c[i] = coeffs_[i];
        return PowerSeries(std::move(c));
    }

    friend bool operator==(const PowerSeries&, const PowerSeries&) = default;

private:
    std::vector<T> coeffs_;
};

/// One term of the multinomial expansion: `degrees` is the non-decreasing
/// list of p coefficient indices (e.g. {1, 3} for a*c) and `count` the
/// number of orderings p! / (c_1! c_2! ...).
struct MultinomialTerm {
    std::vector<unsigned> degrees;
    ExactInt count;

    friend bool operator==(const MultinomialTerm&, const MultinomialTerm&) = default;
};

/// Every way of writing m as a sum of p positive degrees (order ignored),
/// with its ordering count. Empty when m < p or p == 0. Terms are listed in
/// lexicographic order of `degrees`.
std::vector<MultinomialTerm> multinomial_coefficient_terms(unsigned m, unsigned p);

/// Renders terms with letters a, b, c, ... for degrees 1, 2, 3, ...; e.g.
/// the (4, 2) terms render as "2ac + b^2". Degrees past 26 print as a_k.
std::string render_literal(const std::vector<MultinomialTerm>& terms);

/// s^p truncated at degree `order`, via the multinomial rule.
template <typename T>
PowerSeries<T> raise_series(const PowerSeries<T>& s, unsigned p, std::size_t order) {
    if (p == 0) throw DomainError("raise_series needs p >= 1");
    auto result = PowerSeries<T>::zero(order);
    for (std::size_t m = p; m <= order; ++m) {
        T total(0);
        for (const auto& term : multinomial_coefficient_terms(static_cast<unsigned>(m), p)) {
            T product(1);
            for (unsigned d : term.degrees) product = product * s.coefficient(d);
            if constexpr (std::is_same_v<T, ExactRational>)
                total += product * ExactRational(term.count);
            else
                total += product * term.count.template convert_to<T>();
        }
        result.set_coefficient(m, total);
    }
    return result;
}

/// Truncated Cauchy product; the result has no x^1 term.
template <typename T>
PowerSeries<T> multiply(const PowerSeries<T>& f, const PowerSeries<T>& g, std::size_t order) {
    auto result = PowerSeries<T>::zero(order);
    for (std::size_t i = 1; i <= f.order(); ++i) {
        if (f.coefficient(i) == T(0)) continue;
        for (std::size_t j = 1; j <= g.order() && i + j <= order; ++j)
            result.set_coefficient(i + j, result.coefficient(i + j) + f.coefficient(i) * g.coefficient(j));
    }
    return result;
}

/// f(g(x)) truncated at `order`.
template <typename T>
PowerSeries<T> compose_series(const PowerSeries<T>& f, const PowerSeries<T>& g, std::size_t order) {
    auto result = PowerSeries<T>::zero(order);
    auto power = g.truncated(order);  // g^k, starting at k = 1
    for (std::size_t k = 1; k <= order; ++k) {
        T fk = f.coefficient(k);
        if (!(fk == T(0)))
            for (std::size_t m = k; m <= order; ++m)
                result.set_coefficient(m, result.coefficient(m) + fk * power.coefficient(m));
        if (k < order) power = multiply(power, g, order);
    }
    return result;
}

/// The compositional inverse t with s(t(x)) = x through degree `order`.
///
/// Solved degree by degree: the x^m coefficient of s(t) is a_1 b_m plus terms
/// that involve only b_1 ... b_{m-1}, so each b_m follows from one division.
/// Throws DomainError when a_1 is zero.
template <typename T>
PowerSeries<T> revert_series(const PowerSeries<T>& s, std::size_t order) {
    const T a1 = s.coefficient(1);
    if (a1 == T(0)) throw DomainError("series with zero linear coefficient is not invertible");
    auto t = PowerSeries<T>::zero(order);
    if (order == 0) return t;
    t.set_coefficient(1, T(1) / a1);
    for (std::size_t m = 2; m <= order; ++m) {
        // With b_m still zero, the x^m coefficient of s(t) is the residual.
        T residual = compose_series(s, t, m).coefficient(m);
        t.set_coefficient(m, (T(0) - residual) / a1);
    }
    return t;
}

}  // namespace chances::series
