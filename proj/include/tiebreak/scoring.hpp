#pragma once

#include <optional>
#include <string>

#include "tiebreak/chess/pgn.hpp"
#include "tiebreak/chess/types.hpp"

namespace tiebreak::scoring {

// Standard: outcome points (2/0 win, 1/1 draw) plus a tiebreak bonus of
// +1 to the strictly lower-TPLV player (+0.5 each on a tie); totals always
// sum to 3. Norway: 3/0 for a win regardless of TPLV; drawn games pay the
// tiebreak winner 1.5 and the loser 1 (1.25 each on a TPLV tie).
enum class Variant { Standard, Norway };

enum class ThresholdMode { Exact, Relative };

struct ScoringRule {
    Variant variant = Variant::Standard;
    ThresholdMode threshold_mode = ThresholdMode::Exact;
    double threshold_value = 0.0;  // fraction of the larger TPLV, in [0, 1)
    double absolute_epsilon = 1e-9;
};

// CLI/config rule ids: "def4" = Standard, "norway" = Norway.
std::optional<Variant> variant_from_string(const std::string& s);
std::string variant_string(Variant v);

enum class TplvOrder { ALower, BLower, Tie };

// Tie when |a-b| <= epsilon, or in relative mode when |a-b| <=
// threshold * max(a, b, epsilon); otherwise the strictly lower side.
TplvOrder tplv_compare(double tplv_a, double tplv_b, const ScoringRule& rule);

enum class ScoreBasis { Win, Draw, TimeForfeitException };

struct GameScore {
    double white = 0;
    double black = 0;
    std::optional<chess::Color> tiebreak_winner;  // nullopt = tie / no tiebreak
    ScoreBasis basis = ScoreBasis::Draw;

    bool operator==(const GameScore&) const = default;
};

std::string basis_string(ScoreBasis b);
std::optional<ScoreBasis> basis_from_string(const std::string& s);

// Scores one finished game from its outcome and the two TPLVs.
GameScore score_game(pgn::GameResult result, pgn::Termination termination, double tplv_white,
                     double tplv_black, const ScoringRule& rule);

}  // namespace tiebreak::scoring
