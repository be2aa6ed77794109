#pragma once

/**
 * @file lifeannuity.hpp
 * @brief Life tables, the linear ("one death per year") mortality law, and
 *        curtate life annuities on one or two lives.
 *
 * Annuities pay 1 at the end of each year the annuitant survives; the
 * payment for the year of death is forfeited. With survival s(x, t) and
 * discount v = 1/(1+i) the price is sum_{t>=1} v^t s(x, t).
 */

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace chances::lifeannuity {

class LifeTable {
public:
    /// survivors[j] is l at age start_age + j; must be positive and
    /// non-increasing. Survival past the last row is zero.
    LifeTable(int start_age, std::vector<double> survivors, std::string note = {});

    int start_age() const noexcept { return start_age_; }
    int terminal_age() const noexcept { return start_age_ + static_cast<int>(survivors_.size()) - 1; }
    const std::vector<double>& survivors() const noexcept { return survivors_; }

    /// l_x; zero beyond the table end. DomainError below start_age.
    double lx(int age) const;

    /// Free-text caveat carried into every output that prices with the table.
    const std::string& note() const noexcept { return note_; }

    void check_age(int x) const;  // start_age <= x <= terminal_age
    double survival(int x, int t) const;
    int horizon(int x) const { return terminal_age() - x; }  // survival is 0 past this many years

    /// Sum over t >= 1 of v^t l_{x+t}, the numerator of the annuity price.
    double discounted_survivors(int x, double v) const;

private:
    int start_age_;
    std::vector<double> survivors_;
    std::string note_;
};

/// Linear survival to a terminal age: of the n = omega - x years remaining,
/// one in n of the starting group dies each year.
class DeMoivreLaw {
public:
    explicit DeMoivreLaw(int omega = 86);

    int omega() const noexcept { return omega_; }
    void check_age(int x) const;  // 0 <= x < omega
    double survival(int x, int t) const;
    int horizon(int x) const { return omega_ - x; }
    double discounted_survivors(int x, double v) const;  // sum v^t (n - t), t = 1 ... n-1

private:
    int omega_;
};

struct RateSpec {
    double i;
    explicit RateSpec(double rate);
    double v() const { return 1.0 / (1.0 + i); }
};

template <typename M>
concept SurvivalModel = requires(const M& m, int x, int t) {
    { m.check_age(x) };
    { m.survival(x, t) } -> std::convertible_to<double>;
    { m.horizon(x) } -> std::convertible_to<int>;
};

/// How the reconstructed table continues past age 86.
enum class MatyTail {
    kEndAt86,          // the table's last row is age 86 (default)
    kLinearToHundred,  // 20 survivors at 86 run down linearly to 0 at 100
};

/// Survivor counts from 646 at age 12, following the stated annual deaths.
LifeTable reconstruct_maty_table(MatyTail tail = MatyTail::kEndAt86);

/// Reads `age,lx` CSV. Violations raise TableFormatError with the line number.
LifeTable read_life_table_csv(std::istream& in);
LifeTable read_life_table_csv_file(const std::string& path);
void write_life_table_csv(std::ostream& out, const LifeTable& table);

using Mortality = std::variant<LifeTable, DeMoivreLaw>;

double survival_probability(const Mortality& model, int x, int t);
double annuity_value(const Mortality& model, int x, const RateSpec& rate);

/// Sum of v^t s(x, t) computed term by term from a SurvivalModel.
template <SurvivalModel M>
double annuity_by_summation(const M& model, int x, const RateSpec& rate) {
    model.check_age(x);
    const double v = rate.v();
    double total = 0.0, vt = 1.0;
    const int horizon = model.horizon(x);
    for (int t = 1; t <= horizon; ++t) {
        vt *= v;
        total += vt * model.survival(x, t);
    }
    return total;
}

/// Pays while both lives survive, lives independent.
template <SurvivalModel A, SurvivalModel B>
double joint_annuity_value(const A& a, int x, const B& b, int y, const RateSpec& rate) {
    a.check_age(x);
    b.check_age(y);
    const double v = rate.v();
    const int horizon = std::min(a.horizon(x), b.horizon(y));
    double total = 0.0, vt = 1.0;
    for (int t = 1; t <= horizon; ++t) {
        vt *= v;
        total += vt * a.survival(x, t) * b.survival(y, t);
    }
    return total;
}

double joint_annuity_value(const Mortality& a, int x, const Mortality& b, int y, const RateSpec& rate);

/// The law's price in closed form (valid for i != 0):
/// a_n - ((1+i) a_n - n v^n) / (i n), with n = omega - x and a_n the
/// certain annuity for n years.
double demoivre_annuity_closed(const DeMoivreLaw& law, int x, const RateSpec& rate);

struct ErrorTable {
    std::vector<int> ages;
    std::vector<double> rates;
    std::vector<std::vector<double>> percent;  // [rate][age]: 100 (law / table - 1)
};

/// Percentage by which the law (terminal age `omega`) overprices each
/// annuity relative to the table.
ErrorTable approximation_error_table(const LifeTable& table, const std::vector<int>& ages,
                                     const std::vector<double>& rates, int omega = 86);

}  // namespace chances::lifeannuity
