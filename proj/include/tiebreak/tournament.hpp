#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tiebreak/analysis.hpp"

namespace tiebreak::tournament {

enum class TiebreakUsed { None, CumulativeTplv, AvgCpl, Unresolved, Champion };

std::string tiebreak_used_string(TiebreakUsed t);
std::optional<TiebreakUsed> tiebreak_used_from_string(const std::string& s);

struct Standing {
    std::string player;
    double raw_score = 0;
    double cumulative_tplv = 0;
    double avg_centipawn_loss = 0;
    double avg_game_tplv = 0;
    int games = 0;
    int rank = 0;  // 1-based; equal only for unresolved ties
    TiebreakUsed tiebreak_used = TiebreakUsed::None;

    bool operator==(const Standing&) const = default;
};

// Per-player tournament totals; the shape rank_players actually sorts.
struct PlayerAggregate {
    std::string player;
    double raw_score = 0;
    double cumulative_tplv = 0;
    int move_count = 0;
    int game_count = 0;
};

struct PlayerRecord {
    std::string player;
    double raw_score = 0;
    std::vector<analysis::AnnotatedGame> games;
};

// Sorts by raw score (desc), then cumulative TPLV (asc), then average
// centipawn loss (asc). Players equal on all three share the minimum rank
// and are flagged unresolved; if `champion` names one of an unresolved
// two-way tie, the title holder is placed first instead.
std::vector<Standing> rank_players(const std::vector<PlayerAggregate>& players,
                                   const std::optional<std::string>& champion = std::nullopt);
std::vector<Standing> rank_players(const std::vector<PlayerRecord>& records,
                                   const std::optional<std::string>& champion = std::nullopt);

// Tiebreak final: repeated two-game mini-matches with alternating colors.
struct PlayoffGame {
    std::string white;
    std::string black;

    bool operator==(const PlayoffGame&) const = default;
};

class PlayoffPlan {
public:
    PlayoffPlan(std::string a, std::string b);

    const std::vector<PlayoffGame>& games() const { return games_; }
    const std::optional<std::string>& winner() const { return winner_; }

    // Feeds the two-game mini-match result back: a decided match names the
    // winner, a tied one appends another two-game cycle.
    void ingest_cycle(double points_a, double points_b);

private:
    void append_cycle();
    std::string a_;
    std::string b_;
    std::vector<PlayoffGame> games_;
    std::optional<std::string> winner_;
};

// Exactly two tied players are supported.
PlayoffPlan playoff_schedule(const std::vector<std::string>& tied_players);

}  // namespace tiebreak::tournament
