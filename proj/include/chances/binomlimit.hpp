#pragma once

/**
 * @file binomlimit.hpp
 * @brief Central-band probabilities of the binomial: exact sums, the Gaussian
 *        limit, the central-term density approximation, the 1/(2 sqrt n)
 *        fractions, Bernoulli sample size and seeded simulation.
 *
 * The band for n trials with success probability p and multiplier c is the
 * set of success counts k with |k - n p| <= c sqrt(n) / 2, endpoints
 * included. For p = 1/2 this is the event |X/n - 1/2| <= c / (2 sqrt n).
 */

#include "chances/exactnum.hpp"

#include <cstdint>
#include <optional>

namespace chances::binomlimit {

struct TrialSpec {
    std::uint64_t n;
    ExactRational p{ExactInt(1), ExactInt(2)};

    void validate() const;  // n >= 1, 0 < p < 1
};

/// Sizes up to this use rational summation; beyond it, compensated long
/// double summation of log-gamma terms.
inline constexpr std::uint64_t kExactSummationLimit = 4096;

struct BandProbability {
    std::optional<ExactRational> exact;  // set when n <= kExactSummationLimit
    double value;
};

/// Inclusive [lo, hi] success counts in the band, or nullopt if empty.
struct CountRange {
    std::int64_t lo;
    std::int64_t hi;
};
std::optional<CountRange> band_counts(std::uint64_t n, double center, double half_width);

BandProbability exact_central_probability(const TrialSpec& spec, double c);

/// Exact rational band probability regardless of n (cost grows with n^2).
ExactRational exact_central_probability_rational(const TrialSpec& spec, double c);

/// 2 / sqrt(2 pi n) * exp(-2 l^2 / n): the symmetric binomial mass at n/2 +- l.
double demoivre_term(std::uint64_t n, double l);

/// ln n! ~ n ln n - n + ln(2 pi n) / 2.
double stirling_log_factorial(double n);

/// Limit of the band probability as n grows: the integral of
/// (2/sqrt(2 pi)) exp(-2 t^2) over |t| <= c/2, by composite Gauss-Legendre.
double limit_central_probability(double c);

/// Complementary integral over |t| > c/2, computed independently.
double limit_tail_probability(double c);

/// 1/(2 sqrt n) for a perfect square n; DomainError otherwise.
ExactRational remark1_fraction(std::uint64_t n);

/// Smallest n with P(|X/n - p| <= c) >= 1 - alpha under exact binomial sums.
std::uint64_t sample_size(double p, double c, double alpha);

/// P(|X/n - p| <= c) for X ~ Binomial(n, p); the quantity sample_size scans.
double frequency_band_probability(std::uint64_t n, double p, double c);

/// Normal-limit estimate (z_{alpha/2} / c)^2 p (1 - p) that sizes the scan.
double gaussian_sample_size_estimate(double p, double c, double alpha);

struct SimulationResult {
    std::uint64_t inside;
    std::uint64_t reps;
    double fraction() const { return static_cast<double>(inside) / static_cast<double>(reps); }
};

/// Fraction of `reps` simulated binomial experiments that land in the band.
///
/// Replicate r draws from its own SplitMix64 stream whose state starts at
/// mix(seed, r), so any split of replicates across `threads` workers gives
/// the same count. threads = 0 means hardware concurrency.
SimulationResult simulate_band(const TrialSpec& spec, double c, std::uint64_t reps, std::uint64_t seed,
                               unsigned threads = 1);

}  // namespace chances::binomlimit
