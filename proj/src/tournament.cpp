#include "tiebreak/tournament.hpp"

#include <algorithm>
#include <cmath>

#include "tiebreak/error.hpp"

namespace tiebreak::tournament {

namespace {

constexpr double kEps = 1e-9;

bool close(double a, double b) { return std::abs(a - b) <= kEps; }

struct Keyed {
    PlayerAggregate agg;
    double avg_cpl = 0;
    double avg_game = 0;
};

}  // namespace

std::string tiebreak_used_string(TiebreakUsed t) {
    switch (t) {
        case TiebreakUsed::None: return "none";
        case TiebreakUsed::CumulativeTplv: return "cumulative-tplv";
        case TiebreakUsed::AvgCpl: return "avg-cpl";
        case TiebreakUsed::Unresolved: return "unresolved";
        default: return "champion";
    }
}

std::optional<TiebreakUsed> tiebreak_used_from_string(const std::string& s) {
    if (s == "none") return TiebreakUsed::None;
    if (s == "cumulative-tplv") return TiebreakUsed::CumulativeTplv;
    if (s == "avg-cpl") return TiebreakUsed::AvgCpl;
    if (s == "unresolved") return TiebreakUsed::Unresolved;
    if (s == "champion") return TiebreakUsed::Champion;
    return std::nullopt;
}

std::vector<Standing> rank_players(const std::vector<PlayerAggregate>& players,
                                   const std::optional<std::string>& champion) {
    if (players.empty()) throw DomainError("no players to rank");

    std::vector<Keyed> keyed;
    keyed.reserve(players.size());
    for (const PlayerAggregate& p : players) {
        Keyed k{p, 0, 0};
        if (p.move_count > 0) k.avg_cpl = 100.0 * p.cumulative_tplv / p.move_count;
        if (p.game_count > 0) k.avg_game = p.cumulative_tplv / p.game_count;
        keyed.push_back(k);
    }

    std::sort(keyed.begin(), keyed.end(), [](const Keyed& x, const Keyed& y) {
        if (!close(x.agg.raw_score, y.agg.raw_score)) return x.agg.raw_score > y.agg.raw_score;
        if (!close(x.agg.cumulative_tplv, y.agg.cumulative_tplv))
            return x.agg.cumulative_tplv < y.agg.cumulative_tplv;
        if (!close(x.avg_cpl, y.avg_cpl)) return x.avg_cpl < y.avg_cpl;
        return x.agg.player < y.agg.player;  // deterministic listing of full ties
    });

    auto fully_tied = [&](const Keyed& x, const Keyed& y) {
        return close(x.agg.raw_score, y.agg.raw_score) &&
               close(x.agg.cumulative_tplv, y.agg.cumulative_tplv) && close(x.avg_cpl, y.avg_cpl);
    };

    // Champion terminal rule: an unresolved tie of exactly two players that
    // includes the reigning champion is decided in the champion's favor.
    size_t n = keyed.size();
    std::vector<bool> champ_resolved(n, false);
    if (champion) {
        for (size_t i = 0; i + 1 < n; ++i) {
            if (!fully_tied(keyed[i], keyed[i + 1])) continue;
            bool pair_only = (i == 0 || !fully_tied(keyed[i - 1], keyed[i])) &&
                             (i + 2 >= n || !fully_tied(keyed[i + 1], keyed[i + 2]));
            if (!pair_only) continue;
            if (keyed[i].agg.player == *champion || keyed[i + 1].agg.player == *champion) {
                if (keyed[i + 1].agg.player == *champion) std::swap(keyed[i], keyed[i + 1]);
                champ_resolved[i] = champ_resolved[i + 1] = true;
            }
        }
    }

    std::vector<Standing> out(n);
    for (size_t i = 0; i < n; ++i) {
        const Keyed& k = keyed[i];
        Standing s;
        s.player = k.agg.player;
        s.raw_score = k.agg.raw_score;
        s.cumulative_tplv = k.agg.cumulative_tplv;
        s.avg_centipawn_loss = k.avg_cpl;
        s.avg_game_tplv = k.avg_game;
        s.games = k.agg.game_count;

        bool tied_prev = i > 0 && fully_tied(keyed[i - 1], keyed[i]) && !champ_resolved[i];
        bool tied_next = i + 1 < n && fully_tied(keyed[i], keyed[i + 1]) && !champ_resolved[i];
        s.rank = tied_prev ? out[i - 1].rank : static_cast<int>(i) + 1;

        bool raw_tied = (i > 0 && close(keyed[i - 1].agg.raw_score, k.agg.raw_score)) ||
                        (i + 1 < n && close(keyed[i + 1].agg.raw_score, k.agg.raw_score));
        if (!raw_tied) {
            s.tiebreak_used = TiebreakUsed::None;
        } else if (champ_resolved[i]) {
            s.tiebreak_used = TiebreakUsed::Champion;
        } else if (tied_prev || tied_next) {
            s.tiebreak_used = TiebreakUsed::Unresolved;
        } else {
            // Raw score tied with another player: find which key decided.
            bool cum_decides = true;
            for (size_t j = 0; j < n; ++j) {
                if (j == i || !close(keyed[j].agg.raw_score, k.agg.raw_score)) continue;
                if (close(keyed[j].agg.cumulative_tplv, k.agg.cumulative_tplv)) cum_decides = false;
            }
            s.tiebreak_used = cum_decides ? TiebreakUsed::CumulativeTplv : TiebreakUsed::AvgCpl;
        }
        out[i] = std::move(s);
    }
    return out;
}

std::vector<Standing> rank_players(const std::vector<PlayerRecord>& records,
                                   const std::optional<std::string>& champion) {
    if (records.empty()) throw DomainError("no players to rank");
    std::vector<PlayerAggregate> aggregates;
    aggregates.reserve(records.size());
    for (const PlayerRecord& r : records) {
        if (r.games.empty()) throw DomainError("player '" + r.player + "' has no games");
        PlayerAggregate a;
        a.player = r.player;
        a.raw_score = r.raw_score;
        a.cumulative_tplv = analysis::cumulative_tplv(r.games, r.player);
        for (const analysis::AnnotatedGame& g : r.games) {
            auto side = g.side_of(r.player);
            a.move_count += g.move_count(*side);
        }
        a.game_count = static_cast<int>(r.games.size());
        aggregates.push_back(std::move(a));
    }
    return rank_players(aggregates, champion);
}

PlayoffPlan::PlayoffPlan(std::string a, std::string b) : a_(std::move(a)), b_(std::move(b)) {
    append_cycle();
}

void PlayoffPlan::append_cycle() {
    games_.push_back({a_, b_});
    games_.push_back({b_, a_});
}

void PlayoffPlan::ingest_cycle(double points_a, double points_b) {
    if (winner_) throw DomainError("playoff already decided");
    if (points_a > points_b) winner_ = a_;
    else if (points_b > points_a) winner_ = b_;
    else append_cycle();
}

PlayoffPlan playoff_schedule(const std::vector<std::string>& tied_players) {
    if (tied_players.size() != 2)
        throw DomainError("playoff scheduling supports exactly two tied players, got " +
                          std::to_string(tied_players.size()));
    return PlayoffPlan(tied_players[0], tied_players[1]);
}

}  // namespace tiebreak::tournament
