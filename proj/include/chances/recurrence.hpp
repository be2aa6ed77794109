#pragma once

/**
 * @file recurrence.hpp
 * @brief Recurrent series, their geometric decomposition, the duration of
 *        play, and factorization of x^n +- 1 over the reals.
 *
 * A recurrent series satisfies a_n = b_1 a_{n-1} + ... + b_k a_{n-k}. When the
 * characteristic polynomial x^k - b_1 x^{k-1} - ... - b_k has distinct roots
 * r_j, the series splits into geometric progressions a_n = sum_j C_j r_j^n.
 */

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace chances::recurrence {

using Complex = std::complex<double>;

struct Recurrence {
    std::vector<double> coefficients;   // b_1 ... b_k
    std::vector<double> initial_terms;  // a_0 ... a_{k-1}

    std::size_t order() const { return coefficients.size(); }
    void validate() const;  // k >= 1, b_k != 0, k initial terms
};

struct GeometricTerm {
    Complex coefficient;
    Complex root;
};

struct ClosedForm {
    std::vector<GeometricTerm> terms;
    bool real = true;  // non-real terms come in conjugate pairs
};

/// Roots closer than this, relative to max(1, |r|), count as repeated. A
/// double root computes as two roots about sqrt(machine epsilon) apart, so
/// the cut sits well above 1e-8.
inline constexpr double kRootSeparation = 1e-6;

/// Decomposes the recurrence. Throws DegenerateSpectrum on repeated roots and
/// DomainError when b_k == 0.
ClosedForm solve_recurrence(const Recurrence& r);

/// sum_j C_j r_j^n. For real closed forms an imaginary residue above 1e-12
/// (relative to the term magnitudes) throws ConsistencyError.
double eval_closed_form(const ClosedForm& cf, std::uint64_t n);

/// sum_{n=0}^{N} a_n from the per-root geometric sums.
double partial_sum(const Recurrence& r, std::uint64_t N);

/// Direct iteration a_0 ... a_N; the reference the closed form is checked on.
std::vector<double> iterate(const Recurrence& r, std::uint64_t N);

/// Roots of x^k - b_1 x^{k-1} - ... - b_k (companion matrix eigenvalues,
/// Newton-polished).
std::vector<Complex> characteristic_roots(const std::vector<double>& coefficients);

// --- duration of play -------------------------------------------------------

struct DurationSpec {
    unsigned b;  // stakes per player
    double p;    // probability the first player wins a game
    std::uint64_t n;
};

/// P(duration > n) by pushing the probability mass of the walk on the 2b-1
/// interior states forward n games. Accepts any b >= 1.
double duration_exceeds_exact(const DurationSpec& spec);

struct DurationTerm {
    double t;  // 2pq[1 + cos((2j-1) pi / b)]
    double c;  // prod_{i!=j}(1 - t_i) / prod_{i!=j}(t_j - t_i)
};

/// The b/2 pairs (t_j, c_j), j = 1 ... b/2 in increasing angle. b must be even.
std::vector<DurationTerm> duration_terms(unsigned b, double p);

/// sum_j c_j t_j^{n/2}. For odd n the value at n - 1 is returned, since with
/// b even the game can only end after an even number of games.
double duration_exceeds_closed(const DurationSpec& spec);

// --- roots of unity ---------------------------------------------------------

struct UnityFactorization {
    unsigned degree;
    int sign;                          // +1: x^n + 1, -1: x^n - 1
    std::vector<double> linear_roots;  // factor (x - r)
    std::vector<double> quadratic_cos; // factor x^2 - 2 x cos(theta) + 1
};

UnityFactorization factor_unity(unsigned n, int sign);

/// Coefficients, lowest degree first, of the product of all factors.
std::vector<double> expand(const UnityFactorization& f);

struct PowerResult {
    double cos_value;
    double sin_value;
    double multiplication_gap;  // max difference between the two routes
};

/// (cos theta + i sin theta)^n evaluated as (cos n theta, sin n theta) and
/// cross-checked against |n|-fold complex multiplication (conjugate for n < 0).
/// Throws ConsistencyError if the routes differ by more than 1e-10.
PowerResult demoivre_power(double theta, std::int64_t n);

}  // namespace chances::recurrence
