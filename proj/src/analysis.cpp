#include "tiebreak/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "tiebreak/error.hpp"

namespace tiebreak::analysis {

using chess::Color;

namespace {

// Game value of a position with no legal moves, from the last mover's view.
double terminal_value_for_mover(const chess::Position& pos, double mate_cap) {
    return pos.is_checkmate() ? mate_cap : 0.0;
}

}  // namespace

int AnnotatedGame::move_count(Color c) const {
    int n = 0;
    for (const MoveAnnotation& a : annotations)
        if (a.mover == c) ++n;
    return n;
}

std::optional<Color> AnnotatedGame::side_of(const std::string& player) const {
    if (record.player_name(Color::White) == player) return Color::White;
    if (record.player_name(Color::Black) == player) return Color::Black;
    return std::nullopt;
}

AnnotatedGame annotate_game(const pgn::GameRecord& game, engine::EngineSession& session,
                            const engine::EngineConfig& config, const AnnotateOptions& options) {
    AnnotatedGame out;
    out.record = game;
    out.engine_name = session.name();
    out.engine_fingerprint = engine_fingerprint(session.name(), config);

    size_t plies = game.moves.size();
    double cap = config.mate_cap;

    // Positions P_0..P_L; position j is reached after j plies.
    std::vector<chess::Position> positions;
    positions.reserve(plies + 1);
    positions.push_back(game.start);
    std::vector<std::string> uci_moves;
    for (const pgn::PlayedMove& m : game.moves) {
        uci_moves.push_back(chess::move_to_uci(m.move));
        positions.push_back(positions.back().after(m.move));
    }

    bool standard_start = game.start == chess::Position();
    std::string start_fen = game.start.fen();
    auto ref_at = [&](size_t idx) {
        std::vector<std::string> ms(uci_moves.begin(), uci_moves.begin() + idx);
        return standard_start ? engine::PositionRef::startpos(std::move(ms))
                              : engine::PositionRef::from_fen(start_fen, std::move(ms));
    };

    // Each position is searched once; a ply reads eval j-1 and eval j.
    std::vector<std::optional<engine::Evaluation>> evals(plies + 1);
    auto eval_at = [&](size_t idx) -> const engine::Evaluation& {
        if (!evals[idx]) evals[idx] = session.evaluate(ref_at(idx));
        return *evals[idx];
    };

    double sums[2] = {0.0, 0.0};
    std::vector<MoveAnnotation> synthetic;

    try {
        for (size_t j = 1; j <= plies; ++j) {
            const pgn::PlayedMove& played = game.moves[j - 1];
            if (played.ply <= options.skip_plies) continue;
            Color mover = played.mover;

            const engine::Evaluation& pre = eval_at(j - 1);
            MoveAnnotation a;
            a.ply = played.ply;
            a.mover = mover;
            a.played = played.san;
            a.best_move = pre.best_move;
            a.value_best = engine::normalize_eval(pre.score, mover, mover, cap);
            a.raw = pre.raw;

            const chess::Position& after = positions[j];
            if (after.legal_moves().empty()) {
                a.value_played = terminal_value_for_mover(after, cap);
                a.raw.push_back(after.is_checkmate() ? "terminal: checkmate"
                                                     : "terminal: stalemate");
            } else {
                const engine::Evaluation& post = eval_at(j);
                a.value_played = engine::normalize_eval(post.score, mover, opposite(mover), cap);
                a.raw.insert(a.raw.end(), post.raw.begin(), post.raw.end());
            }
            a.pawn_loss = std::max(0.0, a.value_best - a.value_played);

            if (std::find(options.reeval_plies.begin(), options.reeval_plies.end(), a.ply) !=
                options.reeval_plies.end()) {
                engine::Evaluation re = session.evaluate(ref_at(j - 1));
                a.reeval_value_best = engine::normalize_eval(re.score, mover, mover, cap);
                a.raw.insert(a.raw.end(), re.raw.begin(), re.raw.end());
            }

            sums[static_cast<int>(mover)] += a.pawn_loss;
            out.annotations.push_back(std::move(a));
        }

        // Draw offers: the accepted final offer is always charged; earlier
        // (declined) offers only with charge_all_offers.
        for (const pgn::DrawOffer& offer : game.draw_offers) {
            bool accepted_final = game.ended_by_agreed_draw() &&
                                  offer.ply == game.moves.back().ply;
            if (!accepted_final && !options.charge_all_offers) continue;

            const chess::Position& at = positions[offer.ply];
            Color offerer = offer.player;
            MoveAnnotation a;
            a.ply = offer.ply;
            a.mover = offerer;
            a.played = "(draw offer)";
            a.synthetic = true;
            a.value_played = 0.0;  // an agreed draw is worth exactly zero
            if (at.legal_moves().empty()) {
                a.value_best = terminal_value_for_mover(at, cap);
            } else {
                const engine::Evaluation& fe = eval_at(offer.ply);
                a.best_move = fe.best_move;
                a.value_best = engine::normalize_eval(fe.score, offerer, opposite(offerer), cap);
                a.raw = fe.raw;
            }
            a.pawn_loss = std::max(0.0, a.value_best);
            sums[static_cast<int>(offerer)] += a.pawn_loss;

            if (accepted_final && options.charge_acceptance) {
                MoveAnnotation acc = a;
                acc.mover = opposite(offerer);
                acc.played = "(draw acceptance)";
                acc.value_best = -a.value_best;
                acc.pawn_loss = std::max(0.0, acc.value_best);
                sums[static_cast<int>(acc.mover)] += acc.pawn_loss;
                synthetic.push_back(std::move(a));
                synthetic.push_back(std::move(acc));
            } else {
                synthetic.push_back(std::move(a));
            }
        }
    } catch (const EngineError& e) {
        out.error = e.what();
    }

    // Keep rows in ply order, synthetic rows after the move they follow.
    for (MoveAnnotation& s : synthetic) out.annotations.push_back(std::move(s));
    std::stable_sort(out.annotations.begin(), out.annotations.end(),
                     [](const MoveAnnotation& x, const MoveAnnotation& y) {
                         if (x.ply != y.ply) return x.ply < y.ply;
                         return x.synthetic < y.synthetic;
                     });

    out.tplv_white = sums[0];
    out.tplv_black = sums[1];
    return out;
}

double tplv(const AnnotatedGame& game, Color player) {
    double stored = game.stored_tplv(player);
    if (game.partial())
        throw PartialAnnotationError(
            "annotation incomplete (" + *game.error + "); prefix TPLV " + std::to_string(stored),
            stored);
    return stored;
}

namespace {

Color side_or_throw(const AnnotatedGame& game, const std::string& player) {
    if (auto side = game.side_of(player)) return *side;
    throw DomainError("player '" + player + "' is not in game '" +
                      game.record.player_name(Color::White) + " vs " +
                      game.record.player_name(Color::Black) + "'");
}

}  // namespace

double cumulative_tplv(const std::vector<AnnotatedGame>& games, const std::string& player) {
    double sum = 0;
    for (const AnnotatedGame& g : games) sum += tplv(g, side_or_throw(g, player));
    return sum;
}

double average_centipawn_loss(const std::vector<AnnotatedGame>& games, const std::string& player) {
    int moves = 0;
    for (const AnnotatedGame& g : games) moves += g.move_count(side_or_throw(g, player));
    if (moves == 0) throw DomainError("player '" + player + "' has no annotated moves");
    return 100.0 * cumulative_tplv(games, player) / moves;
}

double average_game_tplv(const std::vector<AnnotatedGame>& games, const std::string& player) {
    if (games.empty()) throw DomainError("no games to average");
    return cumulative_tplv(games, player) / static_cast<double>(games.size());
}

}  // namespace tiebreak::analysis
