#pragma once

#include <cstdint>
#include <string>

namespace tiebreak::chess {

enum class Color : int8_t { White = 0, Black = 1 };

constexpr Color opposite(Color c) { return c == Color::White ? Color::Black : Color::White; }

inline std::string color_name(Color c) { return c == Color::White ? "white" : "black"; }

enum class PieceType : int8_t { None = 0, Pawn, Knight, Bishop, Rook, Queen, King };

// Board squares are 0..63, a1 = 0, h1 = 7, a8 = 56.
using Square = int;

constexpr Square make_square(int file, int rank) { return rank * 8 + file; }
constexpr int file_of(Square s) { return s & 7; }
constexpr int rank_of(Square s) { return s >> 3; }

inline std::string square_name(Square s) {
    return {static_cast<char>('a' + file_of(s)), static_cast<char>('1' + rank_of(s))};
}

struct Move {
    Square from = -1;
    Square to = -1;
    PieceType promotion = PieceType::None;

    bool operator==(const Move&) const = default;
};

// Coordinate ("UCI") notation: e2e4, a7a8q.
std::string move_to_uci(const Move& m);
Move move_from_uci(const std::string& text);

}  // namespace tiebreak::chess
