#include <atomic>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "tiebreak/analysis.hpp"
#include "tiebreak/chess/pgn.hpp"
#include "tiebreak/engine/engine.hpp"
#include "tiebreak/error.hpp"
#include "tiebreak/game/game_tree.hpp"
#include "tiebreak/report.hpp"
#include "tiebreak/scoring.hpp"
#include "tiebreak/tournament.hpp"

using namespace tiebreak;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;       // I/O, usage, engine startup
constexpr int kExitGameFailed = 2;  // parse error or failed annotation
constexpr int kExitViolations = 3;  // TSP violations found
constexpr int kExitBound = 4;       // play-enumeration bound exceeded

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    out << text;
}

struct EngineFlags {
    std::string engine_path;
    std::string mock_table;
    int depth = 0;
    int movetime = 0;
    double mate_cap = 10.0;
    std::vector<std::string> options;  // name=value

    engine::EngineConfig to_config() const {
        engine::EngineConfig config;
        config.engine_path = engine_path;
        config.mock_table_path = mock_table;
        if (engine_path.empty() == mock_table.empty())
            throw DomainError("exactly one of --engine and --mock is required");
        if (depth > 0 && movetime > 0)
            throw DomainError("--depth and --movetime are mutually exclusive");
        if (movetime > 0) config.limit = {engine::SearchLimit::Kind::MoveTime, movetime};
        else config.limit = {engine::SearchLimit::Kind::Depth, depth > 0 ? depth : 12};
        config.mate_cap = mate_cap;
        for (const std::string& opt : options) {
            size_t eq = opt.find('=');
            if (eq == std::string::npos) config.options.emplace_back(opt, "");
            else config.options.emplace_back(opt.substr(0, eq), opt.substr(eq + 1));
        }
        return config;
    }
};

void add_engine_flags(CLI::App* cmd, EngineFlags& flags) {
    cmd->add_option("--engine", flags.engine_path, "UCI engine executable");
    cmd->add_option("--mock", flags.mock_table, "mock engine table file");
    cmd->add_option("--depth", flags.depth, "search depth limit");
    cmd->add_option("--movetime", flags.movetime, "search time limit per position, ms");
    cmd->add_option("--mate-cap", flags.mate_cap, "pawn-unit cap for mate scores (default 10)");
    cmd->add_option("--option", flags.options, "engine option as name=value (repeatable)");
}

struct RuleFlags {
    std::string rule = "def4";
    std::string threshold_mode = "exact";
    double threshold = 0.0;

    scoring::ScoringRule to_rule() const {
        scoring::ScoringRule out;
        auto variant = scoring::variant_from_string(rule);
        if (!variant) throw DomainError("unknown rule '" + rule + "' (use def4 or norway)");
        out.variant = *variant;
        if (threshold_mode == "relative") out.threshold_mode = scoring::ThresholdMode::Relative;
        else if (threshold_mode != "exact")
            throw DomainError("unknown threshold mode '" + threshold_mode + "'");
        if (threshold < 0.0 || threshold >= 1.0)
            throw DomainError("--threshold must be a fraction in [0, 1)");
        out.threshold_value = threshold;
        return out;
    }
};

void add_rule_flags(CLI::App* cmd, RuleFlags& flags) {
    cmd->add_option("--rule", flags.rule, "scoring rule: def4 (default) or norway");
    cmd->add_option("--threshold", flags.threshold, "TPLV tie threshold fraction (default 0)");
    cmd->add_option("--threshold-mode", flags.threshold_mode, "exact (default) or relative");
}

void warn_if_relative(const scoring::ScoringRule& rule) {
    if (rule.threshold_mode != scoring::ThresholdMode::Relative) return;
    std::cerr << "warning: relative TPLV threshold of " << rule.threshold_value * 100
              << "% in effect; gaps inside it score as ties, which can void tiebreaks that "
                 "exact mode (the default) would decide\n";
}

report::Format parse_format(const std::string& format) {
    if (format == "csv") return report::Format::Csv;
    if (format == "json") return report::Format::Json;
    throw DomainError("unknown format '" + format + "'");
}

// ---- analyze ----------------------------------------------------------

int cmd_analyze(const std::string& pgn_path, const EngineFlags& engine_flags, int jobs,
                int skip_book, const std::vector<int>& draw_offers,
                const std::vector<int>& reeval, bool charge_acceptance, bool charge_all_offers,
                const std::string& format, const std::string& out_path) {
    engine::EngineConfig config = engine_flags.to_config();

    std::vector<pgn::GameRecord> games;
    try {
        games = pgn::parse_pgn(read_file(pgn_path));
    } catch (const ParseError& e) {
        std::cerr << "error: " << pgn_path << ": " << e.what() << "\n";
        return kExitGameFailed;
    } catch (const IllegalMoveError& e) {
        std::cerr << "error: " << pgn_path << ": " << e.what() << "\n";
        return kExitGameFailed;
    }

    for (pgn::GameRecord& game : games) {
        for (int ply : draw_offers) {
            if (ply < 1 || ply > static_cast<int>(game.moves.size()))
                throw DomainError("--draw-offer ply " + std::to_string(ply) + " out of range");
            game.draw_offers.push_back({ply, game.moves[ply - 1].mover});
        }
        std::sort(game.draw_offers.begin(), game.draw_offers.end(),
                  [](const pgn::DrawOffer& a, const pgn::DrawOffer& b) { return a.ply < b.ply; });
        game.draw_offers.erase(
            std::unique(game.draw_offers.begin(), game.draw_offers.end(),
                        [](const pgn::DrawOffer& a, const pgn::DrawOffer& b) {
                            return a.ply == b.ply;
                        }),
            game.draw_offers.end());
    }

    analysis::AnnotateOptions options;
    options.skip_plies = skip_book;
    options.charge_acceptance = charge_acceptance;
    options.charge_all_offers = charge_all_offers;
    options.reeval_plies = reeval;

    // One engine session per worker; games fan out by index.
    int workers = std::max(1, std::min<int>(jobs, static_cast<int>(games.size())));
    if (games.empty()) workers = 0;
    std::vector<analysis::AnnotatedGame> annotated(games.size());
    std::vector<std::unique_ptr<engine::EngineSession>> sessions;
    for (int w = 0; w < workers; ++w) sessions.push_back(engine::start_session(config));

    std::atomic<size_t> cursor{0};
    auto work = [&](int w) {
        while (true) {
            size_t index = cursor.fetch_add(1);
            if (index >= games.size()) return;
            try {
                annotated[index] =
                    analysis::annotate_game(games[index], *sessions[w], config, options);
            } catch (const std::exception& e) {
                annotated[index].record = games[index];
                annotated[index].error = e.what();
            }
        }
    };
    if (workers <= 1) {
        if (workers == 1) work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (std::thread& t : pool) t.join();
    }

    report::Report rep;
    if (!sessions.empty()) {
        rep.engine.name = sessions[0]->name();
        rep.engine.settings = config.settings_string();
        rep.engine.fingerprint = engine::engine_fingerprint(rep.engine.name, config);
    }
    bool any_failed = false;
    for (size_t i = 0; i < annotated.size(); ++i) {
        if (annotated[i].partial()) {
            any_failed = true;
            std::cerr << "warning: game " << i << " annotation incomplete: "
                      << *annotated[i].error << "\n";
        }
        rep.games.push_back(report::game_row(annotated[i], static_cast<int>(i)));
    }

    write_output(report::emit_report(rep, parse_format(format)), out_path);
    return any_failed ? kExitGameFailed : kExitOk;
}

// ---- score ------------------------------------------------------------

int cmd_score(const std::string& report_path, const RuleFlags& rule_flags,
              const std::string& format, const std::string& out_path) {
    scoring::ScoringRule rule = rule_flags.to_rule();
    warn_if_relative(rule);

    report::Report rep = report::parse_report(read_file(report_path));
    for (report::GameRow& game : rep.games) {
        if (game.result == pgn::GameResult::Unfinished || game.error) {
            std::cerr << "warning: skipping unfinished/failed game " << game.index << " ("
                      << game.white << " vs " << game.black << ")\n";
            continue;
        }
        game.score = scoring::score_game(game.result, game.termination, game.tplv_white,
                                         game.tplv_black, rule);
    }
    write_output(report::emit_report(rep, parse_format(format)), out_path);
    return kExitOk;
}

// ---- rank -------------------------------------------------------------

int cmd_rank(const std::vector<std::string>& report_paths, const std::string& champion,
             const std::string& format, const std::string& out_path) {
    std::map<std::string, tournament::PlayerAggregate> players;
    report::EngineStamp stamp;

    for (const std::string& path : report_paths) {
        report::Report rep = report::parse_report(read_file(path));
        if (stamp.name.empty()) stamp = rep.engine;
        for (const report::GameRow& game : rep.games) {
            if (game.result == pgn::GameResult::Unfinished || game.error) {
                std::cerr << "warning: skipping unfinished/failed game " << game.index << "\n";
                continue;
            }
            auto credit = [&](const std::string& name, chess::Color side) {
                tournament::PlayerAggregate& agg = players[name];
                agg.player = name;
                if (game.result == pgn::GameResult::Draw) agg.raw_score += 0.5;
                else if ((game.result == pgn::GameResult::WhiteWin) ==
                         (side == chess::Color::White))
                    agg.raw_score += 1.0;
                agg.cumulative_tplv +=
                    side == chess::Color::White ? game.tplv_white : game.tplv_black;
                agg.move_count += side == chess::Color::White ? game.moves_white : game.moves_black;
                agg.game_count += 1;
            };
            credit(game.white, chess::Color::White);
            credit(game.black, chess::Color::Black);
        }
    }
    if (players.empty()) {
        std::cerr << "error: no finished games in the given reports\n";
        return kExitError;
    }

    std::vector<tournament::PlayerAggregate> aggregates;
    for (auto& [name, agg] : players) aggregates.push_back(agg);
    std::optional<std::string> champion_opt;
    if (!champion.empty()) champion_opt = champion;

    report::Report out;
    out.engine = stamp;
    out.standings = tournament::rank_players(aggregates, champion_opt);
    write_output(report::emit_report(out, parse_format(format)), out_path);
    return kExitOk;
}

// ---- verify-tsp -------------------------------------------------------

game::ScoringMechanism mechanism_by_id(const std::string& id, const game::TreeFixture& fixture) {
    if (id == "tplv") return game::tplv_mechanism();
    if (id == "fastchess-demo") {
        if (!fixture.tiebreak_terminal || !fixture.tiebreak_winner)
            throw DomainError(
                "fastchess-demo needs a tree fixture with tiebreak_terminal/tiebreak_winner");
        return game::fast_chess_proxy_mechanism(*fixture.tiebreak_terminal,
                                                *fixture.tiebreak_winner);
    }
    throw DomainError("unknown mechanism '" + id + "' (use tplv or fastchess-demo)");
}

void print_violations(const std::vector<game::TspViolation>& violations) {
    for (const game::TspViolation& v : violations)
        std::cout << "violation: player " << v.player << " at node " << v.node
                  << " (play to terminal " << v.play_terminal << "): f with best response "
                  << v.f_with_best_response << " > f original " << v.f_original << "\n";
}

int cmd_verify_tsp(const std::string& tree_path, const std::vector<int>& random_spec,
                   const std::string& mechanism_id, uint64_t max_plays) {
    game::TreeFixture fixture = [&] {
        if (!tree_path.empty()) return game::parse_tree_fixture(read_file(tree_path));
        if (random_spec.size() != 3)
            throw DomainError("--random needs depth, branching and seed");
        auto [tree, eval] = game::generate_random_tree(random_spec[0], random_spec[1], 2,
                                                       static_cast<uint64_t>(random_spec[2]));
        return game::TreeFixture{std::move(tree), std::move(eval), std::nullopt, std::nullopt};
    }();

    game::ScoringMechanism mechanism = mechanism_by_id(mechanism_id, fixture);
    game::TspOptions options;
    options.max_plays = max_plays;

    std::vector<game::TspViolation> violations;
    try {
        violations =
            game::check_tsp_mechanism(mechanism, fixture.tree, fixture.evaluation, options);
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBound;
    }

    uint64_t plays = fixture.tree.terminal_count();
    if (violations.empty()) {
        std::cout << "TSP: mechanism '" << mechanism.name << "' has no violations over " << plays
                  << " plays\n";
        return kExitOk;
    }
    std::cout << "NOT TSP: mechanism '" << mechanism.name << "' has " << violations.size()
              << " violation(s) over " << plays << " plays\n";
    print_violations(violations);
    return kExitViolations;
}

// ---- demo-manipulation -------------------------------------------------

int cmd_demo(uint64_t seed, const std::string& only_mechanism) {
    game::TreeFixture fixture = game::draw_offer_demo_fixture();
    if (seed != 0) {
        // Bounded evaluation noise; small enough to keep the move ordering.
        std::mt19937_64 rng(seed);
        for (game::PlayerId p = 0; p < fixture.tree.num_players(); ++p)
            for (game::NodeId n = 0; n < fixture.tree.size(); ++n) {
                double noise = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 0.8;
                fixture.evaluation.set(p, n, fixture.evaluation.value(p, n) + noise);
            }
    }

    if (!only_mechanism.empty()) {
        game::ScoringMechanism mechanism = mechanism_by_id(only_mechanism, fixture);
        auto violations =
            game::check_tsp_mechanism(mechanism, fixture.tree, fixture.evaluation, {});
        std::cout << "mechanism '" << mechanism.name << "': " << violations.size()
                  << " violation(s)\n";
        print_violations(violations);
        return violations.empty() ? kExitOk : kExitViolations;
    }

    std::cout << "Model: a championship game where the trailing player in classical time\n"
                 "control is the stronger fast-chess player. At node 1 they hold a winning\n"
                 "position (best-move value +1.0) and may instead offer a draw (value 0.0),\n"
                 "sending the match to a fast tiebreak they expect to win.\n\n";

    game::Play history = game::draw_offer_demo_play();
    game::ScoringMechanism fast = mechanism_by_id("fastchess-demo", fixture);
    auto fast_violations = game::check_tsp_play(fast, fixture.tree, fixture.evaluation, history);
    std::cout << "(a) fast-chess tiebreak scoring on the historical play: "
              << fast_violations.size() << " violation(s)\n";
    print_violations(fast_violations);
    std::cout << "    The sub-optimal draw offer strictly improves the offerer's outcome:\n"
                 "    the mechanism rewards deviating from the engine-best move.\n\n";

    auto tplv_violations =
        game::check_tsp_mechanism(game::tplv_mechanism(), fixture.tree, fixture.evaluation, {});
    std::cout << "(b) TPLV scoring rule over all " << fixture.tree.terminal_count()
              << " plays of the model: " << tplv_violations.size() << " violation(s)\n";
    print_violations(tplv_violations);
    std::cout << "    Under TPLV scoring no deviation from the engine-best move ever helps.\n";

    bool as_expected = !fast_violations.empty() && tplv_violations.empty();
    std::cout << "\ndemonstration " << (as_expected ? "holds" : "FAILED") << "\n";
    return as_expected ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Move-quality tiebreak toolkit: annotates chess games with per-move pawn\n"
                 "loss and TPLV, scores and ranks by move quality, and verifies tiebreak\n"
                 "strategyproofness of scoring mechanisms on game trees."};
    app.set_config("--config");
    app.require_subcommand(1);
    app.fallthrough();  // parent flags like --config may follow the subcommand

    // analyze
    auto* analyze = app.add_subcommand("analyze", "annotate a PGN file with pawn losses");
    std::string pgn_path, format = "json", out_path;
    EngineFlags engine_flags;
    int jobs = 1, skip_book = 0;
    std::vector<int> draw_offers, reeval;
    bool charge_acceptance = false, charge_all_offers = false;
    analyze->add_option("pgn", pgn_path, "PGN file to analyze")->required();
    add_engine_flags(analyze, engine_flags);
    analyze->add_option("--jobs", jobs, "parallel engine sessions (default 1)");
    analyze->add_option("--skip-book", skip_book, "leave the first N plies uncharged");
    analyze->add_option("--draw-offer", draw_offers, "mark a draw offer at this ply (repeatable)");
    analyze->add_option("--reeval", reeval, "re-query this ply and record both values");
    analyze->add_flag("--charge-acceptance", charge_acceptance,
                      "also charge the acceptance of a final draw offer");
    analyze->add_flag("--charge-all-offers", charge_all_offers,
                      "charge declined draw offers too");
    analyze->add_option("--format", format, "csv or json (default json)");
    analyze->add_option("--out", out_path, "output path (default stdout)");

    // score
    auto* score = app.add_subcommand("score", "append game scores to an analyzed report");
    std::string score_report, score_format = "json", score_out;
    RuleFlags rule_flags;
    score->add_option("report", score_report, "JSON report from analyze")->required();
    add_rule_flags(score, rule_flags);
    score->add_option("--format", score_format, "csv or json (default json)");
    score->add_option("--out", score_out, "output path (default stdout)");

    // rank
    auto* rank = app.add_subcommand("rank", "rank players across analyzed reports");
    std::vector<std::string> rank_reports;
    std::string champion, rank_format = "csv", rank_out;
    rank->add_option("reports", rank_reports, "JSON reports")->required();
    rank->add_option("--champion", champion, "reigning champion wins an unresolved 2-way tie");
    rank->add_option("--format", rank_format, "csv (default) or json");
    rank->add_option("--out", rank_out, "output path (default stdout)");

    // verify-tsp
    auto* verify = app.add_subcommand("verify-tsp",
                                      "check a scoring mechanism for tiebreak strategyproofness");
    std::string tree_path, mechanism_id = "tplv";
    std::vector<int> random_spec;
    uint64_t max_plays = 1'000'000;
    verify->add_option("tree", tree_path, "tree fixture JSON");
    verify->add_option("--random", random_spec, "random tree: depth branching seed")->expected(3);
    verify->add_option("--mechanism", mechanism_id, "tplv (default) or fastchess-demo");
    verify->add_option("--max-plays", max_plays, "play-enumeration guard (default 1e6)");

    // demo-manipulation
    auto* demo = app.add_subcommand("demo-manipulation",
                                    "show the draw-offer manipulation and its TPLV-rule fix");
    uint64_t demo_seed = 0;
    std::string demo_mechanism;
    demo->add_option("--seed", demo_seed, "perturb the model's evaluations");
    demo->add_option("--mechanism", demo_mechanism, "run a single mechanism instead of both");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze)
            return cmd_analyze(pgn_path, engine_flags, jobs, skip_book, draw_offers, reeval,
                               charge_acceptance, charge_all_offers, format, out_path);
        if (*score) return cmd_score(score_report, rule_flags, score_format, score_out);
        if (*rank) return cmd_rank(rank_reports, champion, rank_format, rank_out);
        if (*verify) return cmd_verify_tsp(tree_path, random_spec, mechanism_id, max_plays);
        if (*demo) return cmd_demo(demo_seed, demo_mechanism);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGameFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
