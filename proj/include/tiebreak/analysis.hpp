#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tiebreak/chess/pgn.hpp"
#include "tiebreak/chess/types.hpp"
#include "tiebreak/engine/engine.hpp"

namespace tiebreak::analysis {

// One scored decision: a played move, or a synthetic draw-offer row.
struct MoveAnnotation {
    int ply = 0;  // 1-based; synthetic rows carry the ply of the offer
    chess::Color mover = chess::Color::White;
    std::string played;     // SAN, or "(draw offer)" / "(draw acceptance)"
    std::string best_move;  // engine's move in coordinate notation
    double value_best = 0;
    double value_played = 0;
    double pawn_loss = 0;  // max(0, value_best - value_played)
    bool synthetic = false;
    std::vector<std::string> raw;  // engine protocol lines behind this row
    std::optional<double> reeval_value_best;

    bool operator==(const MoveAnnotation&) const = default;
};

struct AnnotatedGame {
    pgn::GameRecord record;
    std::vector<MoveAnnotation> annotations;
    double tplv_white = 0;
    double tplv_black = 0;
    std::string engine_name;
    std::string engine_fingerprint;
    std::optional<std::string> error;  // set when annotation stopped mid-game

    bool partial() const { return error.has_value(); }
    double stored_tplv(chess::Color c) const {
        return c == chess::Color::White ? tplv_white : tplv_black;
    }
    int move_count(chess::Color c) const;
    // Which color the named player holds; nullopt if not in this game.
    std::optional<chess::Color> side_of(const std::string& player) const;
};

struct AnnotateOptions {
    int skip_plies = 0;             // book plies charged nothing and not annotated
    bool charge_acceptance = false; // also charge the accepting side of a final draw offer
    bool charge_all_offers = false; // charge declined offers at their ply too
    std::vector<int> reeval_plies;  // plies to re-query, recording both values
};

// Walks the game once, evaluating each position: a ply's loss is the
// pre-move position's best value minus the post-move position's value,
// re-signed to the mover and clamped at zero. If the game ended by an
// accepted draw offer, a synthetic annotation charges the offerer
// max(0, best value at the final position). Engine failure mid-game yields
// a partial result with the error recorded instead of throwing.
AnnotatedGame annotate_game(const pgn::GameRecord& game, engine::EngineSession& session,
                            const engine::EngineConfig& config, const AnnotateOptions& options = {});

// The per-player sum. Throws PartialAnnotationError (carrying the prefix
// sum) when annotation did not complete.
double tplv(const AnnotatedGame& game, chess::Color player);

// Sum of the named player's TPLVs across games; the player must appear in
// every game.
double cumulative_tplv(const std::vector<AnnotatedGame>& games, const std::string& player);

// 100 x cumulative TPLV / annotated move count (synthetic rows included).
double average_centipawn_loss(const std::vector<AnnotatedGame>& games, const std::string& player);

// Cumulative TPLV / game count: the per-game average, a distinct statistic
// from average centipawn loss.
double average_game_tplv(const std::vector<AnnotatedGame>& games, const std::string& player);

}  // namespace tiebreak::analysis
