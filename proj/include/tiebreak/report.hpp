#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tiebreak/analysis.hpp"
#include "tiebreak/chess/pgn.hpp"
#include "tiebreak/scoring.hpp"
#include "tiebreak/tournament.hpp"

namespace tiebreak::report {

enum class Format { Csv, Json };

struct EngineStamp {
    std::string name;
    std::string settings;
    std::string fingerprint;

    bool operator==(const EngineStamp&) const = default;
};

struct MoveRow {
    int ply = 0;
    chess::Color mover = chess::Color::White;
    std::string played;
    std::string best;
    double value_best = 0;
    double value_played = 0;
    double pawn_loss = 0;
    bool synthetic = false;
    std::vector<std::string> raw;
    std::optional<double> reeval_value_best;

    bool operator==(const MoveRow&) const = default;
};

struct GameRow {
    int index = 0;
    std::string white;
    std::string black;
    pgn::GameResult result = pgn::GameResult::Unfinished;
    pgn::Termination termination = pgn::Termination::Normal;
    double tplv_white = 0;
    double tplv_black = 0;
    int moves_white = 0;
    int moves_black = 0;
    bool has_moves = false;  // summary-only rows omit per-move detail
    std::vector<MoveRow> moves;
    std::optional<scoring::GameScore> score;
    std::optional<std::string> error;

    bool operator==(const GameRow&) const = default;
};

struct Report {
    EngineStamp engine;
    std::vector<GameRow> games;
    std::vector<tournament::Standing> standings;

    bool operator==(const Report&) const = default;
};

GameRow game_row(const analysis::AnnotatedGame& game, int index);

// Pawn-unit rendering used by the CSV tables: two decimals, truncated
// toward zero (159.21, 14.50).
std::string format_pawn_units(double value);

// CSV renders the standings table when standings are present, else the
// per-game summary table. JSON carries the full structure at full
// precision; parse_report(emit_report(r, Json)) == r.
std::string emit_report(const Report& report, Format format);
Report parse_report(const std::string& json_text);

}  // namespace tiebreak::report
