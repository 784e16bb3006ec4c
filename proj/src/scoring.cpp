#include "tiebreak/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "tiebreak/error.hpp"

namespace tiebreak::scoring {

std::optional<Variant> variant_from_string(const std::string& s) {
    if (s == "def4") return Variant::Standard;
    if (s == "norway") return Variant::Norway;
    return std::nullopt;
}

std::string variant_string(Variant v) { return v == Variant::Standard ? "def4" : "norway"; }

std::string basis_string(ScoreBasis b) {
    switch (b) {
        case ScoreBasis::Win: return "win";
        case ScoreBasis::Draw: return "draw";
        default: return "time-forfeit-exception";
    }
}

std::optional<ScoreBasis> basis_from_string(const std::string& s) {
    if (s == "win") return ScoreBasis::Win;
    if (s == "draw") return ScoreBasis::Draw;
    if (s == "time-forfeit-exception") return ScoreBasis::TimeForfeitException;
    return std::nullopt;
}

TplvOrder tplv_compare(double tplv_a, double tplv_b, const ScoringRule& rule) {
    if (tplv_a < 0 || tplv_b < 0) throw DomainError("TPLV must be non-negative");
    double gap = std::abs(tplv_a - tplv_b);
    if (gap <= rule.absolute_epsilon) return TplvOrder::Tie;
    if (rule.threshold_mode == ThresholdMode::Relative &&
        gap <= rule.threshold_value * std::max({tplv_a, tplv_b, rule.absolute_epsilon}))
        return TplvOrder::Tie;
    return tplv_a < tplv_b ? TplvOrder::ALower : TplvOrder::BLower;
}

GameScore score_game(pgn::GameResult result, pgn::Termination termination, double tplv_white,
                     double tplv_black, const ScoringRule& rule) {
    using chess::Color;
    using pgn::GameResult;

    if (result == GameResult::Unfinished)
        throw DomainError("cannot score an unfinished game");

    TplvOrder order = tplv_compare(tplv_white, tplv_black, rule);
    GameScore score;
    if (order == TplvOrder::ALower) score.tiebreak_winner = Color::White;
    if (order == TplvOrder::BLower) score.tiebreak_winner = Color::Black;

    bool draw = result == GameResult::Draw;
    Color winner = result == GameResult::WhiteWin ? Color::White : Color::Black;
    Color loser = opposite(winner);
    bool forfeit_exception = !draw && termination == pgn::Termination::TimeForfeit &&
                             score.tiebreak_winner == loser;

    if (rule.variant == Variant::Standard) {
        score.white = draw ? 1.0 : (winner == Color::White ? 2.0 : 0.0);
        score.black = draw ? 1.0 : (winner == Color::Black ? 2.0 : 0.0);
        if (score.tiebreak_winner == Color::White) score.white += 1.0;
        else if (score.tiebreak_winner == Color::Black) score.black += 1.0;
        else {
            score.white += 0.5;
            score.black += 0.5;
        }
    } else {
        if (draw) {
            score.white = score.black = 1.0;
            if (score.tiebreak_winner == Color::White) score.white += 0.5;
            else if (score.tiebreak_winner == Color::Black) score.black += 0.5;
            else {
                // Splits the 2.5-point drawn-game pot evenly.
                score.white = score.black = 1.25;
            }
        } else {
            score.white = winner == Color::White ? 3.0 : 0.0;
            score.black = winner == Color::Black ? 3.0 : 0.0;
            if (forfeit_exception) (loser == Color::White ? score.white : score.black) = 1.0;
        }
    }

    score.basis = forfeit_exception ? ScoreBasis::TimeForfeitException
                                    : (draw ? ScoreBasis::Draw : ScoreBasis::Win);
    return score;
}

}  // namespace tiebreak::scoring
