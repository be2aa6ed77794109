#include "chances/binomlimit.hpp"

#include "chances/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

namespace chances::binomlimit {

namespace mp = boost::multiprecision;

void TrialSpec::validate() const {
    if (n < 1) throw DomainError("number of trials must be at least 1");
    if (p.sign() <= 0 || p >= ExactRational(1)) throw DomainError("success probability must lie in (0, 1)");
}

std::optional<CountRange> band_counts(std::uint64_t n, double center, double half_width) {
    if (!(half_width >= 0.0)) throw DomainError("band half-width must be non-negative");
    // Endpoints are inclusive; the slack only absorbs rounding in c*sqrt(n)/2
    // so that an endpoint meant to be exact (e.g. sqrt(3600)/2 = 30) counts.
    const long double slack = 1e-12L * (1.0L + std::fabs(static_cast<long double>(center)) + half_width);
    long double lo = std::ceil(static_cast<long double>(center) - half_width - slack);
    long double hi = std::floor(static_cast<long double>(center) + half_width + slack);
    lo = std::max(lo, 0.0L);
    hi = std::min(hi, static_cast<long double>(n));
    if (lo > hi) return std::nullopt;
    return CountRange{static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)};
}

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(long double x) {
        long double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    long double value() const { return sum_ + comp_; }

private:
    long double sum_ = 0.0L;
    long double comp_ = 0.0L;
};

long double log_binomial_mass(std::uint64_t n, std::uint64_t k, long double log_p, long double log_q) {
    long double nn = static_cast<long double>(n), kk = static_cast<long double>(k);
    return std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) + kk * log_p + (nn - kk) * log_q;
}

long double summed_mass(std::uint64_t n, long double p, CountRange range) {
    const long double log_p = std::log(p), log_q = std::log1p(-p);
    CompensatedSum sum;
    for (auto k = range.lo; k <= range.hi; ++k)
        sum.add(std::exp(log_binomial_mass(n, static_cast<std::uint64_t>(k), log_p, log_q)));
    return sum.value();
}

std::optional<CountRange> trial_band(const TrialSpec& spec, double c) {
    if (!(c >= 0.0)) throw DomainError("band multiplier c must be non-negative");
    double center = static_cast<double>(spec.n) * spec.p.to_double();
    return band_counts(spec.n, center, c * std::sqrt(static_cast<double>(spec.n)) / 2.0);
}

}  // namespace

ExactRational exact_central_probability_rational(const TrialSpec& spec, double c) {
    spec.validate();
    auto range = trial_band(spec, c);
    if (!range) return ExactRational(0);

    const ExactInt& a = spec.p.numerator();
    const ExactInt& b = spec.p.denominator();
    const ExactInt fail = b - a;
    const auto n = spec.n;
    const auto lo = static_cast<std::uint64_t>(range->lo);

    // term_k = C(n,k) a^k (b-a)^(n-k); the total is divided by b^n once.
    ExactInt term = binomial_coefficient(n, range->lo) * mp::pow(a, static_cast<unsigned>(lo)) *
                    mp::pow(fail, static_cast<unsigned>(n - lo));
    ExactInt total = 0;
    for (auto k = lo;; ++k) {
        total += term;
        if (k == static_cast<std::uint64_t>(range->hi)) break;
        term = term * (n - k) * a / ((k + 1) * fail);
    }
    return {total, mp::pow(b, static_cast<unsigned>(n))};
}

BandProbability exact_central_probability(const TrialSpec& spec, double c) {
    spec.validate();
    if (spec.n <= kExactSummationLimit) {
        auto exact = exact_central_probability_rational(spec, c);
        double value = exact.to_double();
        return {std::move(exact), value};
    }
    auto range = trial_band(spec, c);
    if (!range) return {std::nullopt, 0.0};
    long double v = summed_mass(spec.n, spec.p.to_long_double(), *range);
    return {std::nullopt, static_cast<double>(std::min(v, 1.0L))};
}

double demoivre_term(std::uint64_t n, double l) {
    if (n < 1) throw DomainError("demoivre_term needs n >= 1");
    const double nn = static_cast<double>(n);
    return 2.0 / std::sqrt(2.0 * std::numbers::pi * nn) * std::exp(-2.0 * l * l / nn);
}

double stirling_log_factorial(double n) {
    if (n <= 0.0) return 0.0;
    return n * std::log(n) - n + 0.5 * std::log(2.0 * std::numbers::pi * n);
}

namespace {

// 20-point Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_20.
struct GaussLegendre20 {
    static constexpr int kPoints = 20;
    std::array<long double, kPoints> nodes{};
    std::array<long double, kPoints> weights{};

    GaussLegendre20() {
        for (int i = 0; i < kPoints; ++i) {
            long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (kPoints + 0.5L));
            long double dp = 0.0L;
            for (int iter = 0; iter < 100; ++iter) {
                long double p0 = 1.0L, p1 = x;
                for (int k = 2; k <= kPoints; ++k) {
                    long double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = kPoints * (x * p1 - p0) / (x * x - 1.0L);
                long double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-19L) break;
            }
            nodes[i] = x;
            weights[i] = 2.0L / ((1.0L - x * x) * dp * dp);
        }
    }
};

const GaussLegendre20& gauss_rule() {
    static const GaussLegendre20 rule;
    return rule;
}

long double gaussian_kernel(long double t) {
    return 2.0L / std::sqrt(2.0L * std::numbers::pi_v<long double>) * std::exp(-2.0L * t * t);
}

// Composite rule with panels no wider than 1/8; far below 1e-10 error for
// this kernel.
long double integrate_kernel(long double lo, long double hi) {
    if (hi <= lo) return 0.0L;
    const auto& rule = gauss_rule();
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * 8.0L)));
    const long double width = (hi - lo) / panels;
    CompensatedSum sum;
    for (int j = 0; j < panels; ++j) {
        long double mid = lo + (j + 0.5L) * width;
        for (int i = 0; i < GaussLegendre20::kPoints; ++i)
            sum.add(rule.weights[i] * gaussian_kernel(mid + rule.nodes[i] * width / 2) * width / 2);
    }
    return sum.value();
}

// exp(-2 t^2) < 1e-300 well before this distance.
constexpr long double kTailCutoff = 20.0L;

}  // namespace

double limit_central_probability(double c) {
    if (!(c >= 0.0)) throw DomainError("band multiplier c must be non-negative");
    long double half = std::min<long double>(c / 2.0L, kTailCutoff);
    return static_cast<double>(2.0L * integrate_kernel(0.0L, half));
}

double limit_tail_probability(double c) {
    if (!(c >= 0.0)) throw DomainError("band multiplier c must be non-negative");
    long double from = c / 2.0L;
    if (from >= kTailCutoff) return 0.0;
    return static_cast<double>(2.0L * integrate_kernel(from, kTailCutoff));
}

ExactRational remark1_fraction(std::uint64_t n) {
    if (n == 0) throw DomainError("n must be a positive perfect square");
    auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (root * root > n) --root;
    while ((root + 1) * (root + 1) <= n) ++root;
    if (root * root != n)
        throw DomainError(std::to_string(n) + " is not a perfect square; 1/(2 sqrt n) is irrational");
    return {ExactInt(1), ExactInt(2 * root)};
}

double frequency_band_probability(std::uint64_t n, double p, double c) {
    if (n < 1) throw DomainError("number of trials must be at least 1");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
    const double nn = static_cast<double>(n);
    auto range = band_counts(n, nn * p, nn * c);
    if (!range) return 0.0;
    return static_cast<double>(std::min(summed_mass(n, p, *range), 1.0L));
}

double gaussian_sample_size_estimate(double p, double c, double alpha) {
    // Upper alpha/2 normal quantile by bisection on the limit integral:
    // P(|Z| <= z) = limit_central_probability(2 z).
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (limit_central_probability(2.0 * mid) < 1.0 - alpha)
            lo = mid;
        else
            hi = mid;
    }
    double z = hi;
    return z * z * p * (1.0 - p) / (c * c);
}

std::uint64_t sample_size(double p, double c, double alpha) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
    if (!(c > 0.0)) throw DomainError("c must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");

    // The exact band probability is not monotone in n, so the smallest
    // qualifying n is found by scanning upward from 1. The normal estimate
    // only bounds the scan.
    const double estimate = gaussian_sample_size_estimate(p, c, alpha);
    const auto limit = static_cast<std::uint64_t>(std::ceil(4.0 * estimate)) + 10000;
    for (std::uint64_t n = 1; n <= limit; ++n)
        if (frequency_band_probability(n, p, c) >= 1.0 - alpha) return n;
    throw DomainError("no sample size found below " + std::to_string(limit));
}

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}
    std::uint64_t next() { return mix64(state_ += kGolden); }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

std::uint64_t count_inside(std::uint64_t first, std::uint64_t last, std::uint64_t n, double p, CountRange band,
                           std::uint64_t seed) {
    std::uint64_t inside = 0;
    for (std::uint64_t r = first; r < last; ++r) {
        SplitMix64 rng(seed ^ mix64(r + 1));
        std::int64_t successes = 0;
        for (std::uint64_t i = 0; i < n; ++i) successes += rng.uniform() < p ? 1 : 0;
        if (successes >= band.lo && successes <= band.hi) ++inside;
    }
    return inside;
}

}  // namespace

SimulationResult simulate_band(const TrialSpec& spec, double c, std::uint64_t reps, std::uint64_t seed,
                               unsigned threads) {
    spec.validate();
    if (reps < 1) throw DomainError("reps must be at least 1");
    auto band = trial_band(spec, c);
    if (!band) return {0, reps};

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, reps));
    const double p = spec.p.to_double();

    std::vector<std::uint64_t> counts(threads, 0);
    std::vector<std::thread> workers;
    const std::uint64_t chunk = (reps + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::uint64_t first = std::min(reps, t * chunk);
        std::uint64_t last = std::min(reps, first + chunk);
        if (t + 1 == threads) {
            counts[t] = count_inside(first, last, spec.n, p, *band, seed);
        } else {
            workers.emplace_back(
                [&, t, first, last] { counts[t] = count_inside(first, last, spec.n, p, *band, seed); });
        }
    }
    for (auto& w : workers) w.join();

    std::uint64_t inside = 0;
    for (auto v : counts) inside += v;
    return {inside, reps};
}

}  // namespace chances::binomlimit
