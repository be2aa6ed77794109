#include "chances/lifeannuity.hpp"

#include "chances/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace chances::lifeannuity {

LifeTable::LifeTable(int start_age, std::vector<double> survivors, std::string note)
    : start_age_(start_age), survivors_(std::move(survivors)), note_(std::move(note)) {
    if (start_age_ < 0) throw DomainError("life table start age must be non-negative");
    if (survivors_.empty()) throw DomainError("life table has no rows");
    for (std::size_t j = 0; j < survivors_.size(); ++j) {
        if (!(survivors_[j] > 0.0) || !std::isfinite(survivors_[j]))
            throw DomainError("l at age " + std::to_string(start_age_ + static_cast<int>(j)) + " is not positive");
        if (j > 0 && survivors_[j] > survivors_[j - 1])
            throw DomainError("l increases at age " + std::to_string(start_age_ + static_cast<int>(j)));
    }
}

double LifeTable::lx(int age) const {
    if (age < start_age_) throw DomainError("age " + std::to_string(age) + " precedes the table");
    if (age > terminal_age()) return 0.0;
    return survivors_[static_cast<std::size_t>(age - start_age_)];
}

void LifeTable::check_age(int x) const {
    if (x < start_age_ || x > terminal_age())
        throw DomainError("age " + std::to_string(x) + " outside table ages " + std::to_string(start_age_) + "-" +
                          std::to_string(terminal_age()));
}

double LifeTable::survival(int x, int t) const {
    check_age(x);
    if (t < 0) throw DomainError("survival period must be non-negative");
    return lx(x + t) / lx(x);
}

double LifeTable::discounted_survivors(int x, double v) const {
    double total = 0.0, vt = 1.0;
    for (int age = x + 1; age <= terminal_age(); ++age) {
        vt *= v;
        total += vt * lx(age);
    }
    return total;
}

DeMoivreLaw::DeMoivreLaw(int omega) : omega_(omega) {
    if (omega_ < 1) throw DomainError("terminal age must be at least 1");
}

void DeMoivreLaw::check_age(int x) const {
    if (x < 0 || x >= omega_)
        throw DomainError("age " + std::to_string(x) + " not below the terminal age " + std::to_string(omega_));
}

double DeMoivreLaw::survival(int x, int t) const {
    check_age(x);
    if (t < 0) throw DomainError("survival period must be non-negative");
    const int n = omega_ - x;
    return t >= n ? 0.0 : static_cast<double>(n - t) / n;
}

double DeMoivreLaw::discounted_survivors(int x, double v) const {
    const int n = omega_ - x;
    double total = 0.0, vt = 1.0;
    for (int t = 1; t < n; ++t) {
        vt *= v;
        total += vt * static_cast<double>(n - t);
    }
    return total;
}

RateSpec::RateSpec(double rate) : i(rate) {
    if (!(rate > -1.0) || !std::isfinite(rate)) throw DomainError("interest rate must exceed -1");
}

LifeTable reconstruct_maty_table(MatyTail tail) {
    struct Stretch {
        int until;  // age reached at the end of the stretch
        int deaths; // per year
    };
    // Annual deaths from age 12: six to 25, seven to 29, eight to 34, nine to
    // 42, ten to 49, eleven to 54, ten to 70, eleven to 74, ten to 78, then
    // nine, eight, seven, six. The 82-86 split (nine deaths, l_82 = 29 to
    // l_86 = 20) is not stated; 3, 2, 2, 2 continues the decline.
    static constexpr Stretch kStretches[] = {
        {25, 6}, {29, 7}, {34, 8}, {42, 9}, {49, 10}, {54, 11}, {70, 10}, {74, 11}, {78, 10},
        {79, 9}, {80, 8}, {81, 7}, {82, 6}, {83, 3}, {84, 2}, {85, 2}, {86, 2},
    };
    std::vector<double> l{646.0};
    int age = 12;
    for (const auto& s : kStretches) {
        for (; age < s.until; ++age) l.push_back(l.back() - s.deaths);
    }
    std::string note = "reconstructed from the stated annual deaths; ages 82-86 split 3,2,2,2";
    if (tail == MatyTail::kLinearToHundred) {
        for (int k = 1; k < 14; ++k) l.push_back(20.0 - 20.0 * k / 14.0);
        note += "; ages 87-99 extrapolated linearly to 0 at 100";
    }
    return LifeTable(12, std::move(l), std::move(note));
}

namespace {

std::string trim(std::string s) {
    auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

}  // namespace

LifeTable read_life_table_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    int start = 0, expected_age = 0;
    std::vector<double> l;

    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (!header_seen) {
            std::string compact;
            for (char ch : line)
                if (!std::isspace(static_cast<unsigned char>(ch))) compact += ch;
            if (compact != "age,lx") throw TableFormatError(line_no, "expected header 'age,lx'");
            header_seen = true;
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw TableFormatError(line_no, "expected two fields 'age,lx'");
        std::string age_text = trim(line.substr(0, comma));
        std::string lx_text = trim(line.substr(comma + 1));

        int age = 0;
        auto [aptr, aerr] = std::from_chars(age_text.data(), age_text.data() + age_text.size(), age);
        if (aerr != std::errc{} || aptr != age_text.data() + age_text.size() || age_text.empty())
            throw TableFormatError(line_no, "age '" + age_text + "' is not an integer");

        double lx = 0.0;
        std::istringstream lx_stream(lx_text);
        lx_stream.imbue(std::locale::classic());
        if (!(lx_stream >> lx) || !(lx_stream >> std::ws).eof())
            throw TableFormatError(line_no, "lx '" + lx_text + "' is not a number");

        if (l.empty()) {
            if (age < 0) throw TableFormatError(line_no, "negative age");
            start = expected_age = age;
        }
        if (age != expected_age)
            throw TableFormatError(line_no, "expected age " + std::to_string(expected_age) + ", got " +
                                                std::to_string(age));
        if (!(lx > 0.0) || !std::isfinite(lx)) throw TableFormatError(line_no, "lx must be positive");
        if (!l.empty() && lx > l.back()) throw TableFormatError(line_no, "lx increases with age");
        l.push_back(lx);
        ++expected_age;
    }
    if (!header_seen) throw TableFormatError(line_no + 1, "missing header 'age,lx'");
    if (l.empty()) throw TableFormatError(line_no + 1, "no data rows");
    return LifeTable(start, std::move(l));
}

LifeTable read_life_table_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open life table '" + path + "'");
    return read_life_table_csv(in);
}

void write_life_table_csv(std::ostream& out, const LifeTable& table) {
    out << "age,lx\n";
    for (int age = table.start_age(); age <= table.terminal_age(); ++age)
        out << age << ',' << std::setprecision(17) << table.lx(age) << '\n';
}

double survival_probability(const Mortality& model, int x, int t) {
    return std::visit([&](const auto& m) { return m.survival(x, t); }, model);
}

double annuity_value(const Mortality& model, int x, const RateSpec& rate) {
    return std::visit(
        [&](const auto& m) -> double {
            m.check_age(x);
            using M = std::decay_t<decltype(m)>;
            // Scaled by l_x (or n) once at the end, so an integer-valued sum
            // at i = 0 stays exact.
            if constexpr (std::is_same_v<M, LifeTable>)
                return m.discounted_survivors(x, rate.v()) / m.lx(x);
            else
                return m.discounted_survivors(x, rate.v()) / static_cast<double>(m.horizon(x));
        },
        model);
}

double joint_annuity_value(const Mortality& a, int x, const Mortality& b, int y, const RateSpec& rate) {
    return std::visit([&](const auto& ma, const auto& mb) { return joint_annuity_value(ma, x, mb, y, rate); }, a,
                      b);
}

double demoivre_annuity_closed(const DeMoivreLaw& law, int x, const RateSpec& rate) {
    law.check_age(x);
    if (rate.i == 0.0) throw DomainError("closed form needs a non-zero interest rate");
    const int n = law.horizon(x);
    const double v = rate.v();
    const double vn = std::pow(v, n);
    const double certain = (1.0 - vn) / rate.i;
    return certain - ((1.0 + rate.i) * certain - n * vn) / (rate.i * n);
}

ErrorTable approximation_error_table(const LifeTable& table, const std::vector<int>& ages,
                                     const std::vector<double>& rates, int omega) {
    const DeMoivreLaw law(omega);
    ErrorTable out{ages, rates, {}};
    for (double i : rates) {
        const RateSpec rate(i);
        std::vector<double> row;
        for (int x : ages) {
            const double truth = annuity_value(table, x, rate);
            if (truth == 0.0)
                throw DomainError("table annuity at age " + std::to_string(x) + " is zero; no percentage defined");
            row.push_back(100.0 * (annuity_value(law, x, rate) / truth - 1.0));
        }
        out.percent.push_back(std::move(row));
    }
    return out;
}

}  // namespace chances::lifeannuity
