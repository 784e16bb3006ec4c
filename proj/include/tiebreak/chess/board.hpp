#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tiebreak/chess/types.hpp"

namespace tiebreak::chess {

// Castling-right bits.
enum CastleRight : uint8_t {
    kWhiteKingside = 1,
    kWhiteQueenside = 2,
    kBlackKingside = 4,
    kBlackQueenside = 8,
};

// Mailbox position with full FEN state. Copy-make: make() mutates, callers
// keep a copy to undo.
class Position {
public:
    Position();  // standard initial position

    static Position from_fen(const std::string& fen);
    std::string fen() const;

    Color side_to_move() const { return stm_; }
    int halfmove_clock() const { return halfmove_clock_; }
    int fullmove_number() const { return fullmove_number_; }

    // Signed piece code: 0 empty, +t white, -t black (t = PieceType).
    int8_t piece_at(Square s) const { return board_[s]; }
    PieceType piece_type_at(Square s) const {
        int8_t p = board_[s];
        return static_cast<PieceType>(p < 0 ? -p : p);
    }

    bool square_attacked(Square s, Color by) const;
    Square king_square(Color c) const;
    bool in_check(Color c) const { return square_attacked(king_square(c), opposite(c)); }
    bool in_check() const { return in_check(stm_); }

    std::vector<Move> legal_moves() const;
    bool is_legal(const Move& m) const;
    bool is_capture(const Move& m) const;

    void make(const Move& m);
    Position after(const Move& m) const;

    // No legal moves: checkmate if in check, stalemate otherwise.
    bool is_checkmate() const;
    bool is_stalemate() const;

    // Standard algebraic notation for a legal move, with +/# suffix.
    std::string san(const Move& m) const;
    // Parses SAN (suffixes and over-disambiguation tolerated); throws
    // DomainError if the token matches no legal move or is ambiguous.
    Move parse_san(const std::string& token) const;

    bool operator==(const Position&) const = default;

private:
    struct raw_tag {};
    explicit Position(raw_tag) {}

    void generate_pseudo_legal(std::vector<Move>& out) const;
    void add_pawn_moves(Square from, std::vector<Move>& out) const;

    std::array<int8_t, 64> board_{};
    Color stm_ = Color::White;
    uint8_t castling_ = 0;
    Square ep_square_ = -1;  // capture target square, -1 if none
    int halfmove_clock_ = 0;
    int fullmove_number_ = 1;
};

inline const std::string kStartFen = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

uint64_t perft(const Position& pos, int depth);

}  // namespace tiebreak::chess
