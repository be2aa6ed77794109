#include "chances/cli.hpp"

#include "chances/binomlimit.hpp"
#include "chances/conics.hpp"
#include "chances/errors.hpp"
#include "chances/exactnum.hpp"
#include "chances/games.hpp"
#include "chances/lifeannuity.hpp"
#include "chances/recurrence.hpp"
#include "chances/series.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace chances::cli {

namespace {

using Json = nlohmann::ordered_json;

// Flag combinations CLI11 cannot express; reported like parse errors.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_real(double v) {
    if (!std::isfinite(v)) throw DomainError("non-finite result");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // Keep reals recognizable as reals in the JSON text.
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

void write_json(std::string& out, const Json& j) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ", ";
                first = false;
                out += Json(key).dump();
                out += ": ";
                write_json(out, value);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                write_json(out, j[i]);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float: out += format_real(j.get<double>()); break;
        default: out += j.dump(); break;
    }
}

std::string scalar_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_float()) return format_real(j.get<double>());
    if (j.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) s += ", ";
            s += j[i].is_structured() ? [&] { std::string t; write_json(t, j[i]); return t; }() : scalar_text(j[i]);
        }
        return s;
    }
    std::string t;
    write_json(t, j);
    return t;
}

std::string render_text(const Json& doc) {
    std::ostringstream os;
    os << "op: " << doc["op"].get<std::string>() << '\n';
    const Json& result = doc["result"];
    if (result.is_object()) {
        for (const auto& [key, value] : result.items()) os << key << ": " << scalar_text(value) << '\n';
    } else {
        os << "result: " << scalar_text(result) << '\n';
    }
    return os.str();
}

const std::vector<CommandInfo> kCommands = {
    {"exact", "factorial", "factorial", "piquet deck: 1 in 32!"},
    {"exact", "binomial", "binomial_coefficient", "exact binomial coefficients"},
    {"exact", "odds", "odds_from_probability", "odds 28 to 13 for the central band"},
    {"exact", "probability", "probability_from_odds", "odds 28 to 13 for the central band"},
    {"binom", "exact", "exact_central_probability", "De Moivre 1733: P(|X - n/2| <= c sqrt(n)/2), exact"},
    {"binom", "limit", "limit_central_probability", "De Moivre 1733: limit probabilities 0.682688, 0.95428, 0.99874"},
    {"binom", "term", "demoivre_term", "De Moivre 1733: P(X = n/2 +- l) ~ 2/sqrt(2 pi n) exp(-2 l^2/n)"},
    {"binom", "remark1", "remark1_fraction", "De Moivre 1733, Remark I: 1/(2 sqrt n)"},
    {"binom", "sample-size", "sample_size", "Bernoulli: smallest n with P(|X/n - p| <= c) >= 1 - alpha"},
    {"binom", "simulate", "simulate_band", "trials made at De Moivre's request"},
    {"duration", "exact", "duration_exceeds_exact", "duration of play, b stakes each: absorbing walk"},
    {"duration", "closed", "duration_exceeds_closed", "duration of play: sum_j c_j t_j^(n/2), b even"},
    {"recur", "solve", "solve_recurrence", "recurrent series as sums of geometric progressions"},
    {"recur", "eval", "eval_closed_form", "recurrent series: any given term"},
    {"recur", "sum", "partial_sum", "recurrent series: sum of a given number of terms"},
    {"factor", "unity", "factor_unity", "Cotes factorization of x^n +- 1"},
    {"factor", "demoivre-power", "demoivre_power", "De Moivre's identity (cos t + i sin t)^n = cos nt + i sin nt"},
    {"series", "raise", "raise_series", "raising a multinomial to a power"},
    {"series", "multinomial", "multinomial_coefficient_terms", "literal and numerical parts: 2ac + b^2"},
    {"series", "revert", "revert_series", "series reversion: b_1 = 1/a_1, b_2 = -a_2/a_1^3"},
    {"series", "compose", "compose_series", "series composition"},
    {"annuity", "table", "reconstruct_maty_table", "646 adults of 12 years of age (Breslau)"},
    {"annuity", "survival", "survival_probability", "probability of living t more years"},
    {"annuity", "value", "annuity_value", "curtate life annuity, year-of-death payment forfeited"},
    {"annuity", "law-closed", "demoivre_annuity_closed", "De Moivre's hypothesis: one death per year to 86"},
    {"annuity", "joint", "joint_annuity_value", "joint lives"},
    {"annuity", "error-table", "approximation_error_table", "percentage overprice of the linear-law annuity"},
    {"conic", "focal-product", "focal_product", "focal radii product xy = z^2"},
    {"conic", "curvature", "radius_of_curvature", "diameter of the evolute (radius of curvature)"},
    {"conic", "force", "centripetal_force", "centripetal force FM/(R FP^3)"},
    {"conic", "inverse-square", "inverse_square_constant", "inverse-square consequence along one orbit"},
    {"games", "deck-odds", "deck_match_odds", "piquet deck: 1 in 32!"},
    {"games", "tour", "find_tour", "knight's tour covering all 64 squares"},
    {"games", "validate", "validate_tour", "knight's tour covering all 64 squares"},
};

const CommandInfo& info_for(std::string_view group, std::string_view name) {
    for (const auto& c : kCommands)
        if (c.group == group && c.name == name) return c;
    throw std::logic_error("command missing from table: " + std::string(group) + " " + std::string(name));
}

Json rational_list(const std::vector<ExactRational>& v) {
    Json out = Json::array();
    for (const auto& r : v) out.push_back(r.str());
    return out;
}

std::vector<ExactRational> parse_rationals(const std::vector<std::string>& items) {
    std::vector<ExactRational> out;
    for (const auto& s : items) out.push_back(ExactRational::parse(s));
    return out;
}

Json complex_pair(recurrence::Complex z) { return Json::array({z.real(), z.imag()}); }

Json double_list(const std::vector<double>& v) {
    Json out = Json::array();
    for (double d : v) out.push_back(d);
    return out;
}

struct ModelFlags {
    bool maty = false;
    bool tail100 = false;
    std::string table;
    std::optional<int> law;

    void add(CLI::App* app, const std::string& suffix) {
        app->add_flag("--maty" + suffix, maty, "reconstructed 646-at-age-12 table");
        app->add_flag("--tail100" + suffix, tail100, "extend the reconstructed table linearly to age 100");
        app->add_option("--table" + suffix, table, "life table CSV with header age,lx");
        app->add_option("--law" + suffix, law, "linear law with this terminal age");
    }

    lifeannuity::Mortality resolve(const std::string& suffix) const {
        int chosen = (maty ? 1 : 0) + (!table.empty() ? 1 : 0) + (law ? 1 : 0);
        if (chosen != 1)
            throw UsageError("choose exactly one of --maty" + suffix + ", --table" + suffix + ", --law" + suffix);
        if (tail100 && !maty) throw UsageError("--tail100" + suffix + " applies only to --maty" + suffix);
        if (maty)
            return lifeannuity::reconstruct_maty_table(tail100 ? lifeannuity::MatyTail::kLinearToHundred
                                                               : lifeannuity::MatyTail::kEndAt86);
        if (!table.empty()) return lifeannuity::read_life_table_csv_file(table);
        return lifeannuity::DeMoivreLaw(*law);
    }

    lifeannuity::LifeTable resolve_table(const std::string& suffix) const {
        if (law) throw UsageError("this command compares against a life table; --law is not accepted");
        auto model = resolve(suffix);
        return std::get<lifeannuity::LifeTable>(std::move(model));
    }
};

void add_note(Json& result, const lifeannuity::Mortality& model, const std::string& key = "note") {
    if (const auto* t = std::get_if<lifeannuity::LifeTable>(&model); t && !t->note().empty()) result[key] = t->note();
}

using Runner = std::function<Json()>;

struct Registry {
    CLI::App* app;
    std::vector<std::pair<CLI::App*, const CommandInfo*>> leaves;
    std::vector<std::pair<CLI::App*, Runner>> runners;

    CLI::App* group(const std::string& name, const std::string& description) {
        auto* g = app->add_subcommand(name, description);
        g->require_subcommand(1);
        return g;
    }

    CLI::App* leaf(CLI::App* group, const std::string& name, const std::string& description) {
        const auto& info = info_for(group->get_name(), name);
        auto* sub = group->add_subcommand(name, description);
        leaves.emplace_back(sub, &info);
        return sub;
    }

    void bind(CLI::App* sub, Runner r) { runners.emplace_back(sub, std::move(r)); }
};

struct Options {
    // Shared scratch storage; each leaf binds only what it uses.
    std::uint64_t n = 0, k_unsigned = 0, reps = 0, seed = 0, index = 0;
    std::int64_t k = 0, power_n = 0;
    unsigned b = 0, degree = 0, power = 0, order = 0, threads = 1, samples = 0, deck = 0;
    int sign = 0, x = 0, y = 0, t = 0, omega = 86;
    double c = 0, p = 0, alpha = 0, l = 0, theta = 0, rate = 0, a_axis = 0, b_axis = 0, pd = 0.5;
    std::string rational, for_count, against_count, start, tour;
    std::vector<double> coeffs_real, init_real, rates;
    std::vector<int> ages;
    std::vector<std::string> coeffs, f_coeffs, g_coeffs;
    ModelFlags model, model2;
};

void build(Registry& reg, Options& o) {
    using namespace std::string_literals;

    // exact ---------------------------------------------------------------
    auto* exact = reg.group("exact", "exact integers, rationals and odds");
    {
        auto* s = reg.leaf(exact, "factorial", "n!");
        s->add_option("--n", o.n, "n")->required();
        reg.bind(s, [&] {
            auto f = factorial(o.n);
            return Json{{"value", f.str()}, {"scaled", scaled_decimal(f)}};
        });
    }
    {
        auto* s = reg.leaf(exact, "binomial", "C(n, k)");
        s->add_option("--n", o.n)->required();
        s->add_option("--k", o.k)->required();
        reg.bind(s, [&] { return Json(binomial_coefficient(o.n, o.k).str()); });
    }
    {
        auto* s = reg.leaf(exact, "odds", "odds for a rational probability");
        s->add_option("--p", o.rational, "probability as p/q or decimal")->required();
        reg.bind(s, [&] {
            auto odds = odds_from_probability(ExactRational::parse(o.rational));
            return Json{{"odds", odds.str()}, {"for", odds.for_count().str()}, {"against", odds.against_count().str()}};
        });
    }
    {
        auto* s = reg.leaf(exact, "probability", "probability for odds");
        s->add_option("--for", o.for_count)->required();
        s->add_option("--against", o.against_count)->required();
        reg.bind(s, [&] {
            auto parse = [](const std::string& v) {
                auto r = ExactRational::parse(v);
                if (!r.is_integer()) throw DomainError("odds must be integers");
                return r.numerator();
            };
            auto pr = probability_from_odds(Odds(parse(o.for_count), parse(o.against_count)));
            return Json{{"probability", pr.str()}, {"decimal", pr.to_double()}};
        });
    }

    // binom ---------------------------------------------------------------
    auto* binom = reg.group("binom", "binomial central bands and their limit");
    {
        auto* s = reg.leaf(binom, "exact", "exact central band probability");
        s->add_option("--n", o.n)->required();
        s->add_option("--p", o.rational, "success probability (p/q or decimal)")->default_str("1/2");
        s->add_option("--c", o.c)->required();
        reg.bind(s, [&] {
            binomlimit::TrialSpec spec{o.n, o.rational.empty() ? ExactRational(ExactInt(1), ExactInt(2))
                                                               : ExactRational::parse(o.rational)};
            auto r = binomlimit::exact_central_probability(spec, o.c);
            Json out{{"probability", r.value}};
            out["exact"] = r.exact ? Json(r.exact->str()) : Json(nullptr);
            out["method"] = r.exact ? "rational" : "compensated long double";
            return out;
        });
    }
    {
        auto* s = reg.leaf(binom, "limit", "Gaussian limit of the central band");
        s->add_option("--c", o.c)->required();
        reg.bind(s, [&] {
            return Json{{"probability", binomlimit::limit_central_probability(o.c)},
                        {"tail", binomlimit::limit_tail_probability(o.c)}};
        });
    }
    {
        auto* s = reg.leaf(binom, "term", "density approximation to one binomial term");
        s->add_option("--n", o.n)->required();
        s->add_option("--l", o.l)->default_val(0.0);
        reg.bind(s, [&] {
            Json out{{"approximation", binomlimit::demoivre_term(o.n, o.l)}};
            double center = static_cast<double>(o.n) / 2 + o.l;
            if (o.n % 2 == 0 && std::floor(o.l) == o.l && center >= 0 && center <= static_cast<double>(o.n)) {
                double exact = ratio_to_long_double(binomial_coefficient(o.n, static_cast<std::int64_t>(center)),
                                                    boost::multiprecision::pow(ExactInt(2), static_cast<unsigned>(o.n)));
                out["exact"] = exact;
                out["relative_error"] = std::fabs(out["approximation"].get<double>() - exact) / exact;
            }
            return out;
        });
    }
    {
        auto* s = reg.leaf(binom, "remark1", "1/(2 sqrt n) for a perfect square n");
        s->add_option("--n", o.n)->required();
        reg.bind(s, [&] { return Json(binomlimit::remark1_fraction(o.n).str()); });
    }
    {
        auto* s = reg.leaf(binom, "sample-size", "smallest n meeting a frequency band with given risk");
        s->add_option("--p", o.p)->required();
        s->add_option("--c", o.c)->required();
        s->add_option("--alpha", o.alpha)->required();
        reg.bind(s, [&] {
            return Json{{"n", binomlimit::sample_size(o.p, o.c, o.alpha)},
                        {"gaussian_estimate", binomlimit::gaussian_sample_size_estimate(o.p, o.c, o.alpha)}};
        });
    }
    {
        auto* s = reg.leaf(binom, "simulate", "seeded simulation of the central band");
        s->add_option("--n", o.n)->required();
        s->add_option("--p", o.rational)->default_str("1/2");
        s->add_option("--c", o.c)->required();
        s->add_option("--reps", o.reps)->required();
        s->add_option("--seed", o.seed)->required();
        s->add_option("--threads", o.threads)->default_val(1u);
        reg.bind(s, [&] {
            binomlimit::TrialSpec spec{o.n, o.rational.empty() ? ExactRational(ExactInt(1), ExactInt(2))
                                                               : ExactRational::parse(o.rational)};
            auto r = binomlimit::simulate_band(spec, o.c, o.reps, o.seed, o.threads);
            return Json{{"fraction", r.fraction()}, {"inside", r.inside}, {"reps", r.reps}};
        });
    }

    // duration --------------------------------------------------------------
    auto* duration = reg.group("duration", "probability the play lasts more than n games");
    for (std::string name : {"exact"s, "closed"s}) {
        auto* s = reg.leaf(duration, name, name == "exact" ? "absorbing-walk iteration" : "closed form (b even)");
        s->add_option("--b", o.b)->required();
        s->add_option("--p", o.p)->required();
        s->add_option("--n", o.n)->required();
        reg.bind(s, [&o, name] {
            recurrence::DurationSpec spec{o.b, o.p, o.n};
            return Json(name == "exact" ? recurrence::duration_exceeds_exact(spec)
                                        : recurrence::duration_exceeds_closed(spec));
        });
    }

    // recur -----------------------------------------------------------------
    auto* recur = reg.group("recur", "recurrent series");
    auto add_recurrence = [&](CLI::App* s) {
        s->add_option("--coeffs", o.coeffs_real, "b_1,...,b_k")->required()->delimiter(',');
        s->add_option("--init", o.init_real, "a_0,...,a_{k-1}")->required()->delimiter(',');
    };
    {
        auto* s = reg.leaf(recur, "solve", "geometric decomposition");
        add_recurrence(s);
        reg.bind(s, [&] {
            auto cf = recurrence::solve_recurrence({o.coeffs_real, o.init_real});
            Json terms = Json::array();
            for (const auto& t : cf.terms)
                terms.push_back(Json{{"coefficient", complex_pair(t.coefficient)}, {"root", complex_pair(t.root)}});
            return Json{{"terms", terms}, {"real", cf.real}};
        });
    }
    {
        auto* s = reg.leaf(recur, "eval", "term a_n from the closed form");
        add_recurrence(s);
        s->add_option("--index", o.index)->required();
        reg.bind(s, [&] {
            return Json(recurrence::eval_closed_form(recurrence::solve_recurrence({o.coeffs_real, o.init_real}),
                                                     o.index));
        });
    }
    {
        auto* s = reg.leaf(recur, "sum", "a_0 + ... + a_N");
        add_recurrence(s);
        s->add_option("--upto", o.index)->required();
        reg.bind(s, [&] { return Json(recurrence::partial_sum({o.coeffs_real, o.init_real}, o.index)); });
    }

    // factor ----------------------------------------------------------------
    auto* factor = reg.group("factor", "roots of unity");
    {
        auto* s = reg.leaf(factor, "unity", "real factors of x^n + 1 or x^n - 1");
        s->add_option("--n", o.degree)->required();
        s->add_option("--sign", o.sign)->required()->check(CLI::IsMember({-1, 1}));
        reg.bind(s, [&] {
            auto f = recurrence::factor_unity(o.degree, o.sign);
            return Json{{"linear_roots", double_list(f.linear_roots)},
                        {"quadratic_cos", double_list(f.quadratic_cos)},
                        {"expanded", double_list(recurrence::expand(f))}};
        });
    }
    {
        auto* s = reg.leaf(factor, "demoivre-power", "(cos theta + i sin theta)^n");
        s->add_option("--theta", o.theta)->required();
        s->add_option("--n", o.power_n)->required();
        reg.bind(s, [&] {
            auto r = recurrence::demoivre_power(o.theta, o.power_n);
            return Json{{"cos", r.cos_value}, {"sin", r.sin_value}, {"gap", r.multiplication_gap}};
        });
    }

    // series ----------------------------------------------------------------
    auto* series = reg.group("series", "truncated power series (coefficients from degree 1)");
    {
        auto* s = reg.leaf(series, "raise", "s^p");
        s->add_option("--coeffs", o.coeffs, "a_1,a_2,... as rationals")->required()->delimiter(',');
        s->add_option("--power", o.power)->required();
        s->add_option("--order", o.order)->required();
        reg.bind(s, [&] {
            series::PowerSeries<ExactRational> ps(parse_rationals(o.coeffs));
            return rational_list(series::raise_series(ps, o.power, o.order).coefficients());
        });
    }
    {
        auto* s = reg.leaf(series, "multinomial", "literal and numerical parts of one coefficient");
        s->add_option("--degree", o.degree)->required();
        s->add_option("--power", o.power)->required();
        reg.bind(s, [&] {
            auto terms = series::multinomial_coefficient_terms(o.degree, o.power);
            Json list = Json::array();
            for (const auto& t : terms) list.push_back(Json{{"degrees", t.degrees}, {"count", t.count.str()}});
            return Json{{"terms", list}, {"literal", series::render_literal(terms)}};
        });
    }
    {
        auto* s = reg.leaf(series, "revert", "compositional inverse");
        s->add_option("--coeffs", o.coeffs)->required()->delimiter(',');
        s->add_option("--order", o.order)->required();
        reg.bind(s, [&] {
            series::PowerSeries<ExactRational> ps(parse_rationals(o.coeffs));
            return rational_list(series::revert_series(ps, o.order).coefficients());
        });
    }
    {
        auto* s = reg.leaf(series, "compose", "f(g(x))");
        s->add_option("--f", o.f_coeffs)->required()->delimiter(',');
        s->add_option("--g", o.g_coeffs)->required()->delimiter(',');
        s->add_option("--order", o.order)->required();
        reg.bind(s, [&] {
            series::PowerSeries<ExactRational> f(parse_rationals(o.f_coeffs)), g(parse_rationals(o.g_coeffs));
            return rational_list(series::compose_series(f, g, o.order).coefficients());
        });
    }

    // annuity ---------------------------------------------------------------
    auto* annuity = reg.group("annuity", "life tables and annuities");
    {
        auto* s = reg.leaf(annuity, "table", "the reconstructed 646-at-12 survivor table");
        s->add_flag("--tail100", o.model.tail100);
        reg.bind(s, [&] {
            auto table = lifeannuity::reconstruct_maty_table(o.model.tail100 ? lifeannuity::MatyTail::kLinearToHundred
                                                                            : lifeannuity::MatyTail::kEndAt86);
            Json ages = Json::array();
            for (int a = table.start_age(); a <= table.terminal_age(); ++a) ages.push_back(a);
            return Json{{"ages", ages}, {"lx", double_list(table.survivors())}, {"note", table.note()}};
        });
    }
    {
        auto* s = reg.leaf(annuity, "survival", "probability of surviving t years from age x");
        o.model.add(s, "");
        s->add_option("--x", o.x)->required();
        s->add_option("--t", o.t)->required();
        reg.bind(s, [&] {
            auto m = o.model.resolve("");
            Json out{{"probability", lifeannuity::survival_probability(m, o.x, o.t)}};
            add_note(out, m);
            return out;
        });
    }
    {
        auto* s = reg.leaf(annuity, "value", "single-life curtate annuity");
        o.model.add(s, "");
        s->add_option("--x", o.x)->required();
        s->add_option("--rate", o.rate)->required();
        reg.bind(s, [&] {
            auto m = o.model.resolve("");
            Json out{{"value", lifeannuity::annuity_value(m, o.x, lifeannuity::RateSpec(o.rate))}};
            add_note(out, m);
            return out;
        });
    }
    {
        auto* s = reg.leaf(annuity, "law-closed", "closed-form price under the linear law");
        s->add_option("--omega", o.omega)->default_val(86);
        s->add_option("--x", o.x)->required();
        s->add_option("--rate", o.rate)->required();
        reg.bind(s, [&] {
            return Json(lifeannuity::demoivre_annuity_closed(lifeannuity::DeMoivreLaw(o.omega), o.x,
                                                             lifeannuity::RateSpec(o.rate)));
        });
    }
    {
        auto* s = reg.leaf(annuity, "joint", "joint-life annuity on two independent lives");
        o.model.add(s, "");
        o.model2.add(s, "2");
        s->add_option("--x", o.x)->required();
        s->add_option("--y", o.y)->required();
        s->add_option("--rate", o.rate)->required();
        reg.bind(s, [&] {
            auto a = o.model.resolve("");
            auto b = o.model2.resolve("2");
            Json out{{"value", lifeannuity::joint_annuity_value(a, o.x, b, o.y, lifeannuity::RateSpec(o.rate))}};
            add_note(out, a);
            add_note(out, b, "note2");
            return out;
        });
    }
    {
        auto* s = reg.leaf(annuity, "error-table", "percentage overprice of the linear law against a table");
        o.model.add(s, "");
        s->add_option("--ages", o.ages)->required()->delimiter(',');
        s->add_option("--rates", o.rates)->required()->delimiter(',');
        s->add_option("--omega", o.omega)->default_val(86);
        reg.bind(s, [&] {
            auto table = o.model.resolve_table("");
            auto grid = lifeannuity::approximation_error_table(table, o.ages, o.rates, o.omega);
            Json percent = Json::array();
            for (const auto& row : grid.percent) percent.push_back(double_list(row));
            Json out{{"ages", grid.ages}, {"rates", double_list(grid.rates)}, {"percent", percent}};
            if (!table.note().empty()) out["note"] = table.note();
            return out;
        });
    }

    // conic -----------------------------------------------------------------
    auto* conic = reg.group("conic", "ellipse focal product and central force");
    auto add_ellipse = [&](CLI::App* s, bool with_theta) {
        s->add_option("--a", o.a_axis)->required();
        s->add_option("--b", o.b_axis)->required();
        if (with_theta) s->add_option("--theta", o.theta)->required();
    };
    {
        auto* s = reg.leaf(conic, "focal-product", "FM * F'M against the parallel half-diameter squared");
        add_ellipse(s, true);
        reg.bind(s, [&] {
            auto r = conics::focal_product(conics::Ellipse(o.a_axis, o.b_axis), o.theta);
            return Json{{"product", r.product}, {"halfdiam_sq", r.halfdiam_sq}};
        });
    }
    {
        auto* s = reg.leaf(conic, "curvature", "radius of curvature");
        add_ellipse(s, true);
        reg.bind(s, [&] { return Json(conics::radius_of_curvature(conics::Ellipse(o.a_axis, o.b_axis), o.theta)); });
    }
    {
        auto* s = reg.leaf(conic, "force", "FM / (R FP^3) with the centre of force at a focus");
        add_ellipse(s, true);
        reg.bind(s, [&] {
            auto parts = conics::force_parts(conics::Ellipse(o.a_axis, o.b_axis), o.theta);
            return Json{{"force", parts.force},
                        {"focal_radius", parts.focal_radius},
                        {"perpendicular", parts.perpendicular},
                        {"curvature_radius", parts.curvature_radius},
                        {"force_times_fm_sq", parts.force * parts.focal_radius * parts.focal_radius}};
        });
    }
    {
        auto* s = reg.leaf(conic, "inverse-square", "constancy of force * FM^2 along the orbit");
        add_ellipse(s, false);
        s->add_option("--samples", o.samples)->default_val(720u);
        reg.bind(s, [&] {
            auto r = conics::inverse_square_constant(conics::Ellipse(o.a_axis, o.b_axis), o.samples);
            return Json{{"constant", r.constant}, {"max_relative_deviation", r.max_relative_dev}};
        });
    }

    // games -----------------------------------------------------------------
    auto* games = reg.group("games", "deck odds and the knight's tour");
    {
        auto* s = reg.leaf(games, "deck-odds", "odds against two decks matching card for card");
        s->add_option("--size", o.deck)->required();
        reg.bind(s, [&] {
            auto odds = games::deck_match_odds(o.deck);
            return Json{{"odds", odds.str()},
                        {"for", odds.for_count().str()},
                        {"against", odds.against_count().str()},
                        {"scaled", scaled_decimal(odds.for_count())}};
        });
    }
    {
        auto* s = reg.leaf(games, "tour", "knight's tour from a square");
        s->add_option("--start", o.start)->default_val("a1");
        reg.bind(s, [&] {
            auto start = games::parse_algebraic(o.start);
            if (!start) throw DomainError("bad square '" + o.start + "'");
            auto tour = games::find_tour(*start);
            return Json{{"tour", games::serialize_tour(tour)}, {"valid", games::validate_tour(tour).valid()}};
        });
    }
    {
        auto* s = reg.leaf(games, "validate", "check a comma-separated tour");
        s->add_option("--tour", o.tour)->required();
        reg.bind(s, [&] {
            auto verdict = games::validate_tour(games::parse_tour(o.tour));
            Json out{{"valid", verdict.valid()}};
            if (!verdict.valid()) {
                out["fault"] = std::string(games::fault_name(verdict.fault));
                out["index"] = verdict.index;
            }
            return out;
        });
    }
}

Json echo_inputs(const CLI::App* leaf) {
    Json inputs = Json::object();
    for (const CLI::Option* opt : leaf->get_options()) {
        if (opt->get_lnames().empty() || opt->count() == 0) continue;
        const std::string& name = opt->get_lnames().front();
        if (opt->get_expected_max() == 0) {
            inputs[name] = true;
        } else if (opt->get_items_expected_max() > 1) {
            inputs[name] = opt->results();
        } else {
            inputs[name] = opt->results().front();
        }
    }
    return inputs;
}

}  // namespace

const std::vector<CommandInfo>& command_table() { return kCommands; }

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Classical probability and annuity computations", "chances"};
    app.require_subcommand(1);
    std::string format = "json";
    app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    app.fallthrough();

    Options options;
    Registry reg{&app, {}, {}};
    build(reg, options);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::ostringstream help_out, help_err;
        int status = app.exit(e, help_out, help_err);
        out << help_out.str();
        err << help_err.str();
        return status;
    } catch (const CLI::ParseError& e) {
        std::ostringstream sink, message;
        app.exit(e, sink, message);
        err << message.str();
        return kExitUsage;
    }

    for (const auto& [leaf, info] : reg.leaves) {
        if (!leaf->parsed()) continue;
        Runner runner;
        for (const auto& [sub, r] : reg.runners)
            if (sub == leaf) runner = r;
        try {
            Json doc;
            doc["op"] = std::string(info->group) + "." + std::string(info->name);
            doc["inputs"] = echo_inputs(leaf);
            doc["result"] = runner();
            doc["provenance"] = std::string(info->provenance);
            std::string text;
            if (format == "json") {
                write_json(text, doc);
                text += '\n';
            } else {
                text = render_text(doc);
            }
            out << text;
            return kExitOk;
        } catch (const UsageError& e) {
            err << "usage error: " << e.what() << '\n';
            return kExitUsage;
        } catch (const DomainError& e) {
            err << "domain error: " << e.what() << '\n';
            return kExitDomain;
        } catch (const ConsistencyError& e) {
            err << "consistency error: " << e.what() << '\n';
            return kExitDomain;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kExitDomain;
        }
    }
    err << "no command given\n";
    return kExitUsage;
}

}  // namespace chances::cli
