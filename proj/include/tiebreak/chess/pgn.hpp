#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tiebreak/chess/board.hpp"
#include "tiebreak/chess/types.hpp"

namespace tiebreak::pgn {

enum class GameResult { WhiteWin, BlackWin, Draw, Unfinished };
enum class Termination { Normal, TimeForfeit, Other };

std::string result_string(GameResult r);
std::string termination_string(Termination t);
std::optional<GameResult> result_from_string(const std::string& s);
std::optional<Termination> termination_from_string(const std::string& s);

struct PlayedMove {
    int ply = 0;  // 1-based
    chess::Color mover = chess::Color::White;
    std::string san;
    chess::Move move;
    std::string comment;  // empty if none
};

struct DrawOffer {
    int ply = 0;
    chess::Color player = chess::Color::White;
};

// One game of a PGN file, replay-validated against the legality kernel.
struct GameRecord {
    std::vector<std::pair<std::string, std::string>> headers;
    chess::Position start;
    std::vector<PlayedMove> moves;
    GameResult result = GameResult::Unfinished;
    Termination termination = Termination::Normal;
    std::vector<DrawOffer> draw_offers;

    const std::string* header(const std::string& key) const;
    std::string player_name(chess::Color c) const;
    chess::Position position_before(int ply) const;  // ply 1 -> start
    chess::Position final_position() const;

    // True when the game is a draw and the last ply carries a draw offer.
    bool ended_by_agreed_draw() const;
};

// Parses every game in the text. Comments equal to "draw offered" mark a
// draw offer by the player who made the annotated move. Variations are
// skipped; NAGs are ignored.
std::vector<GameRecord> parse_pgn(const std::string& text);

}  // namespace tiebreak::pgn
