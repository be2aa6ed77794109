#include "chances/series.hpp"

#include <map>

namespace chances::series {

namespace {

// Non-decreasing sequences of `parts` positive integers, each >= min_part,
// summing to `remaining`.
void enumerate(unsigned remaining, unsigned parts, unsigned min_part, std::vector<unsigned>& prefix,
               std::vector<std::vector<unsigned>>& out) {
    if (parts == 0) {
        if (remaining == 0) out.push_back(prefix);
        return;
    }
    for (unsigned d = min_part; d * parts <= remaining; ++d) {
        prefix.push_back(d);
        enumerate(remaining - d, parts - 1, d, prefix, out);
        prefix.pop_back();
    }
}

ExactInt ordering_count(const std::vector<unsigned>& degrees) {
    ExactInt count = factorial(degrees.size());
    std::size_t run = 1;
    for (std::size_t i = 1; i <= degrees.size(); ++i) {
        if (i < degrees.size() && degrees[i] == degrees[i - 1]) {
            ++run;
        } else {
            count /= factorial(run);
            run = 1;
        }
    }
    return count;
}

std::string letter(unsigned degree) {
    if (degree >= 1 && degree <= 26) return std::string(1, static_cast<char>('a' + degree - 1));
    return "a_" + std::to_string(degree);
}

}  // namespace

std::vector<MultinomialTerm> multinomial_coefficient_terms(unsigned m, unsigned p) {
    std::vector<MultinomialTerm> terms;
    if (p == 0 || m < p) return terms;
    std::vector<std::vector<unsigned>> multisets;
    std::vector<unsigned> prefix;
    enumerate(m, p, 1, prefix, multisets);
    terms.reserve(multisets.size());
    for (auto& degrees : multisets) {
        ExactInt count = ordering_count(degrees);
        terms.push_back({std::move(degrees), std::move(count)});
    }
    return terms;
}

std::string render_literal(const std::vector<MultinomialTerm>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    for (const auto& term : terms) {
        if (!out.empty()) out += " + ";
        if (term.count != 1) out += term.count.str();
        std::map<unsigned, unsigned> powers;
        for (unsigned d : term.degrees) ++powers[d];
        for (auto [degree, power] : powers) {
            // A lone letter repeated once stays juxtaposed ("ac"); repeats get
            // an exponent ("b^2").
            out += letter(degree);
            if (power > 1) out += "^" + std::to_string(power);
        }
    }
    return out;
}

}  // namespace chances::series
