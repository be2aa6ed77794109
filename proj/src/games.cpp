#include "chances/games.hpp"

#include "chances/errors.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

namespace chances::games {

namespace {

constexpr std::array<std::array<int, 2>, 8> kKnightSteps{{
    {1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2},
}};

bool knight_move(Square from, Square to) {
    int df = std::abs(from.file - to.file), dr = std::abs(from.rank - to.rank);
    return (df == 1 && dr == 2) || (df == 2 && dr == 1);
}

int cell(Square s) { return s.file * kBoardSize + s.rank; }

class TourSearch {
public:
    explicit TourSearch(Square start) { path_.push_back(start), visited_[cell(start)] = true; }

    bool extend() {
        if (path_.size() == kTourLength) return true;
        for (Square next : ordered_moves(path_.back())) {
            visited_[cell(next)] = true;
            path_.push_back(next);
            if (extend()) return true;
            path_.pop_back();
            visited_[cell(next)] = false;
        }
        return false;
    }

    std::vector<Square> take() { return std::move(path_); }

private:
    std::vector<Square> unvisited_neighbours(Square s) const {
        std::vector<Square> out;
        for (auto [df, dr] : kKnightSteps) {
            Square n{s.file + df, s.rank + dr};
            if (on_board(n) && !visited_[cell(n)]) out.push_back(n);
        }
        return out;
    }

    std::vector<Square> ordered_moves(Square s) const {
        struct Candidate {
            std::size_t degree;
            Square square;
        };
        std::vector<Candidate> candidates;
        for (Square n : unvisited_neighbours(s)) candidates.push_back({unvisited_neighbours(n).size(), n});
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.degree != b.degree) return a.degree < b.degree;
            return a.square < b.square;
        });
        std::vector<Square> out;
        for (const auto& c : candidates) out.push_back(c.square);
        return out;
    }

    std::vector<Square> path_;
    std::array<bool, kTourLength> visited_{};
};

}  // namespace

bool on_board(Square s) { return s.file >= 0 && s.file < kBoardSize && s.rank >= 0 && s.rank < kBoardSize; }

std::string to_algebraic(Square s) {
    if (!on_board(s)) throw DomainError("square off the board");
    return {static_cast<char>('a' + s.file), static_cast<char>('1' + s.rank)};
}

std::optional<Square> parse_algebraic(std::string_view text) {
    if (text.size() != 2) return std::nullopt;
    Square s{text[0] - 'a', text[1] - '1'};
    if (!on_board(s)) return std::nullopt;
    return s;
}

Odds deck_match_odds(std::uint64_t deck_size) {
    if (deck_size < 1) throw DomainError("deck size must be at least 1");
    return {factorial(deck_size) - 1, ExactInt(1)};
}

std::string_view fault_name(TourFault f) {
    switch (f) {
        case TourFault::kNone: return "none";
        case TourFault::kLength: return "length";
        case TourFault::kOffBoard: return "off board";
        case TourFault::kRepeat: return "repeat";
        case TourFault::kIllegalMove: return "illegal move";
    }
    return "unknown";
}

TourVerdict validate_tour(const std::vector<Square>& squares) {
    if (squares.size() != kTourLength) return {TourFault::kLength, std::min(squares.size(), kTourLength)};
    std::array<bool, kTourLength> seen{};
    for (std::size_t i = 0; i < squares.size(); ++i) {
        const Square s = squares[i];
        if (!on_board(s)) return {TourFault::kOffBoard, i};
        if (seen[cell(s)]) return {TourFault::kRepeat, i};
        seen[cell(s)] = true;
        if (i > 0 && !knight_move(squares[i - 1], s)) return {TourFault::kIllegalMove, i};
    }
    return {};
}

std::vector<Square> find_tour(Square start) {
    if (!on_board(start)) throw DomainError("start square off the board");
    TourSearch search(start);
    if (!search.extend()) throw DomainError("no knight's tour from " + to_algebraic(start));
    return search.take();
}

std::string serialize_tour(const std::vector<Square>& squares) {
    std::string out;
    for (std::size_t i = 0; i < squares.size(); ++i) {
        if (i) out += ',';
        out += to_algebraic(squares[i]);
    }
    return out;
}

std::vector<Square> parse_tour(std::string_view text) {
    std::vector<Square> out;
    if (text.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        auto comma = text.find(',', pos);
        auto token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        auto square = parse_algebraic(token);
        if (!square) throw DomainError("bad square '" + std::string(token) + "'");
        out.push_back(*square);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace chances::games
