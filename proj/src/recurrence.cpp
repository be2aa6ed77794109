#include "chances/recurrence.hpp"

#include "chances/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace chances::recurrence {

void Recurrence::validate() const {
    if (coefficients.empty()) throw DomainError("recurrence order must be at least 1");
    if (coefficients.back() == 0.0)
        throw DomainError("last recurrence coefficient is zero; the true order is lower");
    if (initial_terms.size() != coefficients.size())
        throw DomainError("recurrence of order " + std::to_string(coefficients.size()) + " needs " +
                          std::to_string(coefficients.size()) + " initial terms, got " +
                          std::to_string(initial_terms.size()));
}

namespace {

// p(x) = x^k - b_1 x^{k-1} - ... - b_k and its derivative, by Horner.
std::pair<Complex, Complex> characteristic_eval(const std::vector<double>& b, Complex x) {
    Complex value = 1.0, deriv = 0.0;
    for (double coeff : b) {
        deriv = deriv * x + value;
        value = value * x - coeff;
    }
    return {value, deriv};
}

Complex ipow(Complex base, std::uint64_t n) {
    Complex result = 1.0;
    while (n) {
        if (n & 1) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

}  // namespace

std::vector<Complex> characteristic_roots(const std::vector<double>& coefficients) {
    const auto k = static_cast<Eigen::Index>(coefficients.size());
    if (k == 0) return {};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) companion(0, j) = coefficients[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 1; i < k; ++i) companion(i, i - 1) = 1.0;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw ConsistencyError("companion eigenvalue iteration failed");

    std::vector<Complex> roots;
    for (Eigen::Index i = 0; i < k; ++i) {
        Complex x = solver.eigenvalues()[i];
        // Steps that do not shrink |p(x)| are rejected; near a multiple root
        // Newton would otherwise run off.
        auto [value, deriv] = characteristic_eval(coefficients, x);
        for (int iter = 0; iter < 8 && std::abs(deriv) != 0.0; ++iter) {
            const Complex next = x - value / deriv;
            auto [next_value, next_deriv] = characteristic_eval(coefficients, next);
            if (std::abs(next_value) >= std::abs(value)) break;
            const bool settled = std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(next));
            x = next;
            value = next_value;
            deriv = next_deriv;
            if (settled) break;
        }
        roots.push_back(x);
    }
    return roots;
}

ClosedForm solve_recurrence(const Recurrence& r) {
    r.validate();
    auto roots = characteristic_roots(r.coefficients);
    const std::size_t k = roots.size();

    for (auto& x : roots)
        if (std::abs(x.imag()) <= 1e-12 * std::max(1.0, std::abs(x))) x = {x.real(), 0.0};

    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (std::abs(roots[i] - roots[j]) < kRootSeparation * std::max({1.0, std::abs(roots[i]), std::abs(roots[j])}))
                throw DegenerateSpectrum("characteristic roots " + std::to_string(i) + " and " + std::to_string(j) +
                                         " coincide; no geometric decomposition");

    // Pair each upper-half-plane root with the nearest lower-half-plane root
    // and make them exact conjugates.
    std::vector<int> partner(k, -1);
    for (std::size_t i = 0; i < k; ++i) {
        if (roots[i].imag() <= 0.0) continue;
        double best = INFINITY;
        int best_j = -1;
        for (std::size_t j = 0; j < k; ++j) {
            if (roots[j].imag() >= 0.0 || partner[j] != -1) continue;
            double d = std::abs(roots[j] - std::conj(roots[i]));
            if (d < best) best = d, best_j = static_cast<int>(j);
        }
        if (best_j < 0 || best > 1e-6 * std::max(1.0, std::abs(roots[i])))
            throw ConsistencyError("complex root without a conjugate partner");
        partner[i] = best_j;
        partner[static_cast<std::size_t>(best_j)] = static_cast<int>(i);
        Complex mean = 0.5 * (roots[i] + std::conj(roots[static_cast<std::size_t>(best_j)]));
        roots[i] = mean;
        roots[static_cast<std::size_t>(best_j)] = std::conj(mean);
    }

    // Vandermonde system: sum_j C_j r_j^m = a_m for m < k.
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXcd vandermonde(kk, kk);
    Eigen::VectorXcd rhs(kk);
    for (Eigen::Index m = 0; m < kk; ++m) {
        for (Eigen::Index j = 0; j < kk; ++j)
            vandermonde(m, j) = ipow(roots[static_cast<std::size_t>(j)], static_cast<std::uint64_t>(m));
        rhs(m) = r.initial_terms[static_cast<std::size_t>(m)];
    }
    Eigen::VectorXcd coeffs = vandermonde.fullPivLu().solve(rhs);

    ClosedForm cf;
    cf.real = true;
    for (std::size_t j = 0; j < k; ++j) {
        Complex c = coeffs(static_cast<Eigen::Index>(j));
        if (roots[j].imag() == 0.0) {
            c = {c.real(), 0.0};
        } else if (partner[j] >= 0 && roots[j].imag() < 0.0) {
            c = std::conj(coeffs(partner[j]));
        }
        cf.terms.push_back({c, roots[j]});
    }
    return cf;
}

double eval_closed_form(const ClosedForm& cf, std::uint64_t n) {
    Complex sum = 0.0;
    double scale = 0.0;
    for (const auto& term : cf.terms) {
        Complex v = term.coefficient * ipow(term.root, n);
        sum += v;
        scale += std::abs(v);
    }
    if (cf.real && std::abs(sum.imag()) > 1e-12 * std::max(1.0, scale))
        throw ConsistencyError("closed form marked real has imaginary residue " + std::to_string(sum.imag()));
    return sum.real();
}

std::vector<double> iterate(const Recurrence& r, std::uint64_t N) {
    r.validate();
    std::vector<double> a(r.initial_terms.begin(), r.initial_terms.end());
    const std::size_t k = r.order();
    while (a.size() <= N) {
        double next = 0.0;
        for (std::size_t i = 0; i < k; ++i) next += r.coefficients[i] * a[a.size() - 1 - i];
        a.push_back(next);
    }
    a.resize(N + 1);
    return a;
}

double partial_sum(const Recurrence& r, std::uint64_t N) {
    const ClosedForm cf = solve_recurrence(r);
    Complex sum = 0.0;
    for (const auto& term : cf.terms) {
        if (std::abs(term.root - 1.0) < 1e-14)
            sum += term.coefficient * static_cast<double>(N + 1);
        else
            sum += term.coefficient * (ipow(term.root, N + 1) - 1.0) / (term.root - 1.0);
    }
    return sum.real();
}

double duration_exceeds_exact(const DurationSpec& spec) {
    if (spec.b < 1) throw DomainError("stakes b must be at least 1");
    if (!(spec.p > 0.0 && spec.p < 1.0)) throw DomainError("p must lie in (0, 1)");
    // Index i holds position i - (b - 1); positions +-b absorb.
    const std::size_t states = 2 * spec.b - 1;
    const double q = 1.0 - spec.p;
    std::vector<double> mass(states, 0.0), next(states);
    mass[spec.b - 1] = 1.0;
    for (std::uint64_t step = 0; step < spec.n; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < states; ++i) {
            if (mass[i] == 0.0) continue;
            if (i + 1 < states) next[i + 1] += spec.p * mass[i];
            if (i > 0) next[i - 1] += q * mass[i];
        }
        mass.swap(next);
    }
    double alive = 0.0;
    for (double m : mass) alive += m;
    return alive;
}

std::vector<DurationTerm> duration_terms(unsigned b, double p) {
    if (b < 2 || b % 2 != 0) throw DomainError("closed form requires an even number of stakes b");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
    const double q = 1.0 - p;
    const unsigned half = b / 2;
    std::vector<DurationTerm> terms(half);
    for (unsigned j = 1; j <= half; ++j)
        terms[j - 1].t = 2.0 * p * q * (1.0 + std::cos((2.0 * j - 1.0) * std::numbers::pi / b));
    for (unsigned j = 0; j < half; ++j) {
        double num = 1.0, den = 1.0;
        for (unsigned i = 0; i < half; ++i) {
            if (i == j) continue;
            num *= 1.0 - terms[i].t;
            den *= terms[j].t - terms[i].t;
        }
        terms[j].c = num / den;
    }
    return terms;
}

double duration_exceeds_closed(const DurationSpec& spec) {
    const auto terms = duration_terms(spec.b, spec.p);
    const std::uint64_t half_n = spec.n / 2;  // odd n reduces to n - 1
    double sum = 0.0;
    for (const auto& term : terms) {
        double power = 1.0, base = term.t;
        for (std::uint64_t e = half_n; e; e >>= 1) {
            if (e & 1) power *= base;
            base *= base;
        }
        sum += term.c * power;
    }
    return sum;
}

UnityFactorization factor_unity(unsigned n, int sign) {
    if (n < 1) throw DomainError("degree must be at least 1");
    if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
    UnityFactorization f{n, sign, {}, {}};
    const double pi = std::numbers::pi;
    if (sign == 1) {
        // Roots at angles (2k-1) pi / n.
        for (unsigned k = 1; 2 * k - 1 < n; ++k) f.quadratic_cos.push_back(std::cos((2.0 * k - 1.0) * pi / n));
        if (n % 2 == 1) f.linear_roots.push_back(-1.0);
    } else {
        // Roots at angles 2 k pi / n.
        f.linear_roots.push_back(1.0);
        for (unsigned k = 1; 2 * k < n; ++k) f.quadratic_cos.push_back(std::cos(2.0 * k * pi / n));
        if (n % 2 == 0) f.linear_roots.push_back(-1.0);
    }
    return f;
}

std::vector<double> expand(const UnityFactorization& f) {
    std::vector<double> poly{1.0};
    auto multiply = [&poly](const std::vector<double>& factor) {
        std::vector<double> out(poly.size() + factor.size() - 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i)
            for (std::size_t j = 0; j < factor.size(); ++j) out[i + j] += poly[i] * factor[j];
        poly = std::move(out);
    };
    for (double r : f.linear_roots) multiply({-r, 1.0});
    for (double c : f.quadratic_cos) multiply({1.0, -2.0 * c, 1.0});
    return poly;
}

PowerResult demoivre_power(double theta, std::int64_t n) {
    constexpr std::int64_t kMaxSteps = 100000;
    if (n > kMaxSteps || n < -kMaxSteps)
        throw DomainError("|n| above " + std::to_string(kMaxSteps) + " for repeated multiplication");
    const double nd = static_cast<double>(n);
    PowerResult result{std::cos(nd * theta), std::sin(nd * theta), 0.0};

    Complex unit(std::cos(theta), std::sin(theta));
    if (n < 0) unit = std::conj(unit);
    Complex product = 1.0;
    for (std::int64_t i = 0; i < (n < 0 ? -n : n); ++i) product *= unit;

    result.multiplication_gap =
        std::max(std::fabs(product.real() - result.cos_value), std::fabs(product.imag() - result.sin_value));
    if (result.multiplication_gap > 1e-10)
        throw ConsistencyError("multiple-angle and repeated-product routes disagree by " +
                               std::to_string(result.multiplication_gap));
    return result;
}

}  // namespace chances::recurrence
