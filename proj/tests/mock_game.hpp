#pragma once

#include <random>
#include <string>
#include <vector>

#include "tiebreak/chess/pgn.hpp"
#include "tiebreak/engine/engine.hpp"

// Builds a mock table covering every position of the game, one entry per
// position, from side-to-move centipawn scores (root first, moves.size()+1
// entries). The best-move column holds the played move when the ply loses
// nothing, otherwise some other legal move.
inline tiebreak::engine::MockTable table_for_game(const tiebreak::pgn::GameRecord& game,
                                                  const std::vector<int>& cp) {
    using namespace tiebreak;
    engine::MockTable table;
    chess::Position pos = game.start;
    for (size_t j = 0; j <= game.moves.size(); ++j) {
        engine::MockEntry entry;
        entry.score = {engine::ScoreKind::Centipawns, cp[j], engine::Perspective::SideToMove};
        auto legal = pos.legal_moves();
        if (j < game.moves.size()) {
            chess::Move played = game.moves[j].move;
            bool lossless = j + 1 < cp.size() && cp[j] + cp[j + 1] <= 0;
            entry.best_move = chess::move_to_uci(played);
            if (!lossless) {
                for (const chess::Move& m : legal) {
                    if (!(m == played)) {
                        entry.best_move = chess::move_to_uci(m);
                        break;
                    }
                }
            }
        } else if (!legal.empty()) {
            entry.best_move = chess::move_to_uci(legal.front());
        }
        table[pos.fen()] = entry;
        if (j < game.moves.size()) pos.make(game.moves[j].move);
    }
    return table;
}

// Deterministic pseudo-random legal game of up to max_plies; stops early
// only if every available move would end the game.
inline tiebreak::pgn::GameRecord random_game_record(std::mt19937_64& rng, int max_plies) {
    using namespace tiebreak;
    pgn::GameRecord game;
    game.headers = {{"White", "RandW"}, {"Black", "RandB"}, {"Event", "randomized"}};
    game.result = pgn::GameResult::Draw;
    chess::Position pos;
    for (int ply = 1; ply <= max_plies; ++ply) {
        auto legal = pos.legal_moves();
        if (legal.empty()) break;
        // Prefer a move that keeps the game alive.
        chess::Move pick = legal[rng() % legal.size()];
        for (int tries = 0; tries < 8; ++tries) {
            if (!pos.after(pick).legal_moves().empty()) break;
            pick = legal[rng() % legal.size()];
        }
        if (pos.after(pick).legal_moves().empty()) break;
        game.moves.push_back({ply, pos.side_to_move(), pos.san(pick), pick, ""});
        pos.make(pick);
    }
    return game;
}
