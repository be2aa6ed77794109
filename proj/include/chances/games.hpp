#pragma once

// Deck-matching odds and the knight's tour on the 8x8 board.

#include "chances/exactnum.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chances::games {

struct Square {
    int file;  // 0-7, a-h
    int rank;  // 0-7, 1-8

    friend bool operator==(const Square&, const Square&) = default;
    friend auto operator<=>(const Square&, const Square&) = default;
};

inline constexpr int kBoardSize = 8;
inline constexpr std::size_t kTourLength = 64;

bool on_board(Square s);
std::string to_algebraic(Square s);               // {0,0} -> "a1"
std::optional<Square> parse_algebraic(std::string_view text);

/// Odds (k! - 1) : 1 against two shuffled decks of k cards matching.
Odds deck_match_odds(std::uint64_t deck_size);

enum class TourFault { kNone, kLength, kOffBoard, kRepeat, kIllegalMove };

std::string_view fault_name(TourFault f);  // "length", "off board", "repeat", "illegal move"

struct TourVerdict {
    TourFault fault = TourFault::kNone;
    std::size_t index = 0;  // first offending position in the list
    bool valid() const { return fault == TourFault::kNone; }
};

/// Checks length 64, on-board squares, no repeats and knight moves between
/// neighbours, reporting the earliest violation by list position.
TourVerdict validate_tour(const std::vector<Square>& squares);

/// Open tour from `start`: Warnsdorff ordering (fewest onward moves first,
/// ties to the lowest (file, rank)) inside a depth-first search that
/// backtracks if the heuristic dead-ends. Deterministic for each start.
std::vector<Square> find_tour(Square start);

std::string serialize_tour(const std::vector<Square>& squares);  // "a1,c2,..."
std::vector<Square> parse_tour(std::string_view text);           // DomainError on bad squares

}  // namespace chances::games
