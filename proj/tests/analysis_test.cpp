#include <doctest.h>

#include <random>

#include "mock_game.hpp"
#include "tiebreak/analysis.hpp"
#include "tiebreak/error.hpp"

using namespace tiebreak;
using namespace tiebreak::analysis;
using tiebreak::chess::Color;

namespace {

engine::EngineConfig cfg() {
    engine::EngineConfig c;
    c.mock_table_path = "in-memory";
    return c;
}

AnnotatedGame annotate(const pgn::GameRecord& game, const std::vector<int>& cp,
                       const AnnotateOptions& options = {}) {
    auto session = engine::make_mock_session(table_for_game(game, cp), "mock:test");
    return annotate_game(game, *session, cfg(), options);
}

// Minimal by-hand game for aggregate-level tests; no engine involved.
AnnotatedGame synthetic_game(const std::string& white, const std::string& black,
                             double tplv_white, double tplv_black, int moves_each = 1) {
    AnnotatedGame g;
    g.record.headers = {{"White", white}, {"Black", black}};
    g.record.result = pgn::GameResult::Draw;
    for (int i = 0; i < moves_each; ++i) {
        double w = i == 0 ? tplv_white : 0.0;
        double b = i == 0 ? tplv_black : 0.0;
        g.annotations.push_back({2 * i + 1, Color::White, "m", "m", w, 0, w, false, {}, {}});
        g.annotations.push_back({2 * i + 2, Color::Black, "m", "m", b, 0, b, false, {}, {}});
    }
    g.tplv_white = tplv_white;
    g.tplv_black = tplv_black;
    return g;
}

}  // namespace

TEST_CASE("four-ply game against hand-computed sums") {
    auto games = pgn::parse_pgn("1. e4 e5 2. Nf3 Nc6 *");
    // Side-to-move cp per position; ply loss = max(0, cp[j-1] + cp[j]) / 100.
    // Losses: W 0, B 0.5, W 0, B 0.4.
    AnnotatedGame g = annotate(games[0], {30, -30, 80, -80, 120});
    CHECK_FALSE(g.partial());
    REQUIRE(g.annotations.size() == 4);
    CHECK(g.annotations[0].pawn_loss == doctest::Approx(0.0));
    CHECK(g.annotations[1].pawn_loss == doctest::Approx(0.5));
    CHECK(g.annotations[2].pawn_loss == doctest::Approx(0.0));
    CHECK(g.annotations[3].pawn_loss == doctest::Approx(0.4));
    CHECK(tplv(g, Color::White) == doctest::Approx(0.0));
    CHECK(tplv(g, Color::Black) == doctest::Approx(0.9));

    // Mover perspective: ply 2 is Black's; cp -30 with Black to move is
    // -0.3 for Black, and the successor's cp 80 (White to move) is -0.8.
    CHECK(g.annotations[1].mover == Color::Black);
    CHECK(g.annotations[1].value_best == doctest::Approx(-0.3));
    CHECK(g.annotations[1].value_played == doctest::Approx(-0.8));
    CHECK(!g.annotations[1].raw.empty());
}

TEST_CASE("perfect play gives zero TPLV") {
    auto games = pgn::parse_pgn("1. d4 d5 2. c4 e6 3. Nc3 Nf6 *");
    AnnotatedGame g = annotate(games[0], {20, -20, 20, -20, 20, -20, 20});
    CHECK(tplv(g, Color::White) == 0.0);
    CHECK(tplv(g, Color::Black) == 0.0);
    for (const MoveAnnotation& a : g.annotations) {
        CHECK(a.pawn_loss == 0.0);
        CHECK(a.best_move == chess::move_to_uci(g.record.moves[a.ply - 1].move));
    }
}

TEST_CASE("negative raw loss clamps to zero") {
    auto games = pgn::parse_pgn("1. e4 e5 *");
    // Ply 2: cp[1] + cp[2] = -80 -> raw loss -0.8, clamped.
    AnnotatedGame g = annotate(games[0], {10, -10, -70});
    CHECK(g.annotations[1].pawn_loss == 0.0);
    CHECK(g.annotations[1].value_best == doctest::Approx(-0.1));
    CHECK(g.annotations[1].value_played == doctest::Approx(0.7));
    CHECK(tplv(g, Color::Black) == 0.0);
}

TEST_CASE("checkmate ending needs no engine query of the mated position") {
    auto games = pgn::parse_pgn("1. f3 e5 2. g4 Qh4# 0-1");
    // P3 is evaluated as mate-in-1 for Black; P4 is terminal.
    pgn::GameRecord game = games[0];
    engine::MockTable table = table_for_game(game, {10, -10, 10, 0, 0});
    chess::Position p3 = game.position_before(4);
    table[p3.fen()] = {"d8h4", {engine::ScoreKind::MateIn, 1, engine::Perspective::SideToMove}};
    auto session = engine::make_mock_session(std::move(table), "mock:test");
    AnnotatedGame g = annotate_game(game, *session, cfg());

    CHECK_FALSE(g.partial());
    const MoveAnnotation& mate_ply = g.annotations[3];
    CHECK(mate_ply.value_best == doctest::Approx(10.0));    // mate-in-1, capped
    CHECK(mate_ply.value_played == doctest::Approx(10.0));  // delivered mate
    CHECK(mate_ply.pawn_loss == 0.0);
    // White's g4 walked into the mate: best 0.1, played -10.
    CHECK(g.annotations[2].pawn_loss == doctest::Approx(10.1));
}

TEST_CASE("accepted draw offer charges the offerer") {
    auto games = pgn::parse_pgn("1. e4 c5 2. Nf3 d6 {draw offered} 1/2-1/2");
    pgn::GameRecord game = games[0];
    REQUIRE(game.ended_by_agreed_draw());

    // Final position: White to move, cp -100 => the offerer (Black) was +1.0.
    AnnotatedGame g = annotate(game, {20, -20, 20, -20, -100});
    REQUIRE(g.annotations.size() == 5);  // 4 plies + 1 synthetic offer row

    const MoveAnnotation& offer = g.annotations.back();
    CHECK(offer.synthetic);
    CHECK(offer.ply == 4);
    CHECK(offer.mover == Color::Black);
    CHECK(offer.played == "(draw offer)");
    CHECK(offer.value_best == doctest::Approx(1.0));
    CHECK(offer.value_played == 0.0);
    CHECK(offer.pawn_loss == doctest::Approx(1.0));

    // Ply 4 itself: cp[3] + cp[4] = -120 -> clamped to 0.
    CHECK(g.annotations[3].pawn_loss == 0.0);
    CHECK(tplv(g, Color::Black) == doctest::Approx(1.0));
    CHECK(tplv(g, Color::White) == doctest::Approx(0.0));

    SUBCASE("acceptance charged only when asked, and zero when behind") {
        AnnotateOptions opt;
        opt.charge_acceptance = true;
        AnnotatedGame g2 = annotate(game, {20, -20, 20, -20, -100}, opt);
        REQUIRE(g2.annotations.size() == 6);
        const MoveAnnotation& acc = g2.annotations.back();
        CHECK(acc.played == "(draw acceptance)");
        CHECK(acc.mover == Color::White);
        CHECK(acc.value_best == doctest::Approx(-1.0));
        CHECK(acc.pawn_loss == 0.0);  // accepting was weakly best
        CHECK(tplv(g2, Color::White) == doctest::Approx(0.0));
    }
}

TEST_CASE("declined offers are charged only with charge_all_offers") {
    auto games = pgn::parse_pgn("1. e4 {draw offered} e5 2. Nf3 Nc6 *");
    pgn::GameRecord game = games[0];
    REQUIRE(game.draw_offers.size() == 1);
    CHECK_FALSE(game.ended_by_agreed_draw());

    AnnotatedGame plain = annotate(game, {30, -50, 50, -50, 50});
    CHECK(plain.annotations.size() == 4);  // no synthetic row by default

    AnnotateOptions opt;
    opt.charge_all_offers = true;
    AnnotatedGame charged = annotate(game, {30, -50, 50, -50, 50}, opt);
    REQUIRE(charged.annotations.size() == 5);
    const MoveAnnotation& offer = charged.annotations[1];  // after ply 1
    CHECK(offer.synthetic);
    CHECK(offer.ply == 1);
    CHECK(offer.mover == Color::White);
    // White was +0.5 at the position where the offer stood.
    CHECK(offer.pawn_loss == doctest::Approx(0.5));
}

TEST_CASE("engine failure yields a partial annotation") {
    auto games = pgn::parse_pgn("1. e4 e5 2. Nf3 Nc6 *");
    pgn::GameRecord game = games[0];
    engine::MockTable table = table_for_game(game, {30, -30, 40, -40, 40});
    table.erase(game.position_before(4).fen());  // entry for P3 vanishes
    auto session = engine::make_mock_session(std::move(table), "mock:test");
    AnnotatedGame g = annotate_game(game, *session, cfg());

    CHECK(g.partial());
    CHECK(g.annotations.size() == 2);  // plies 1-2 complete before the failure
    try {
        tplv(g, Color::Black);
        FAIL("expected PartialAnnotationError");
    } catch (const PartialAnnotationError& e) {
        CHECK(e.prefix_tplv == doctest::Approx(0.1));  // ply 2: (-30+40)/100
    }
}

TEST_CASE("skip_plies and reeval") {
    auto games = pgn::parse_pgn("1. e4 e5 2. Nf3 Nc6 *");
    AnnotateOptions opt;
    opt.skip_plies = 2;
    opt.reeval_plies = {3};
    AnnotatedGame g = annotate(games[0], {30, -30, 80, -80, 120}, opt);
    REQUIRE(g.annotations.size() == 2);  // plies 3 and 4 only
    CHECK(g.annotations[0].ply == 3);
    REQUIRE(g.annotations[0].reeval_value_best.has_value());
    CHECK(*g.annotations[0].reeval_value_best == doctest::Approx(g.annotations[0].value_best));
    CHECK_FALSE(g.annotations[1].reeval_value_best.has_value());
    // Skipped plies charge nothing.
    CHECK(tplv(g, Color::Black) == doctest::Approx(0.4));
}

TEST_CASE("cumulative TPLV over the championship round values") {
    const double yu[] = {15.96, 5.52, 21.46, 9,    20.3,  20.79, 19.22,
                         6.66,  6.16, 20.9,  8.45, 20.52, 13.68};
    const double krush[] = {15.05, 23.1, 6.24,  7.5,  11.84, 13.53, 14.28,
                            7.52,  16.08, 5.27, 15.6, 11.02, 12.18};
    std::vector<AnnotatedGame> yu_games, krush_games;
    for (int i = 0; i < 13; ++i) {
        yu_games.push_back(synthetic_game("Yu", "Opp" + std::to_string(i), yu[i], 0.0));
        krush_games.push_back(synthetic_game("Krush", "Opp" + std::to_string(i), krush[i], 0.0));
    }
    CHECK(cumulative_tplv(yu_games, "Yu") == doctest::Approx(188.62).epsilon(1e-9));
    CHECK(cumulative_tplv(krush_games, "Krush") == doctest::Approx(159.21).epsilon(1e-9));
    CHECK(average_game_tplv(yu_games, "Yu") == doctest::Approx(188.62 / 13));
    CHECK(average_game_tplv(krush_games, "Krush") == doctest::Approx(159.21 / 13));

    CHECK(cumulative_tplv({}, "Yu") == 0.0);
    CHECK_THROWS_AS(cumulative_tplv(yu_games, "Krush"), DomainError);
}

TEST_CASE("tplv returns the stored per-player sums") {
    AnnotatedGame g = synthetic_game("Topalov", "Carlsen", 3.15, 3.4, 4);
    CHECK(tplv(g, Color::White) == doctest::Approx(3.15));
    CHECK(tplv(g, Color::Black) == doctest::Approx(3.4));

    AnnotatedGame empty = synthetic_game("W", "B", 0.0, 0.0, 0);
    CHECK(tplv(empty, Color::White) == 0.0);
}

TEST_CASE("average centipawn loss counts offer annotations") {
    // TPLV 6.2 over 62 moves plus one offer annotation = 63 rows.
    AnnotatedGame g;
    g.record.headers = {{"White", "W"}, {"Black", "B"}};
    for (int i = 0; i < 62; ++i) {
        double loss = i == 0 ? 5.2 : 0.0;
        g.annotations.push_back({2 * (i + 1), Color::Black, "m", "m", loss, 0, loss, false, {}, {}});
    }
    g.annotations.push_back({124, Color::Black, "(draw offer)", "m", 1.0, 0, 1.0, true, {}, {}});
    g.tplv_black = 6.2;
    CHECK(average_centipawn_loss({g}, "B") == doctest::Approx(100.0 * 6.2 / 63));

    AnnotatedGame empty;
    empty.record.headers = {{"White", "W"}, {"Black", "B"}};
    CHECK_THROWS_AS(average_centipawn_loss({empty}, "W"), DomainError);

    // A perfect game has zero average loss.
    AnnotatedGame perfect = synthetic_game("W", "B", 0.0, 0.0, 10);
    CHECK(average_centipawn_loss({perfect}, "W") == 0.0);
}

TEST_CASE("randomized invariants: non-negativity, additivity, monotone append") {
    std::mt19937_64 rng(777);
    std::vector<AnnotatedGame> pool;
    for (int trial = 0; trial < 15; ++trial) {
        pgn::GameRecord game = random_game_record(rng, 10 + trial % 20);
        std::vector<int> cp(game.moves.size() + 1);
        for (int& v : cp) v = static_cast<int>(rng() % 601) - 300;
        AnnotatedGame g = annotate(game, cp);
        REQUIRE_FALSE(g.partial());

        double sum_w = 0, sum_b = 0;
        for (const MoveAnnotation& a : g.annotations) {
            CHECK(a.pawn_loss >= 0.0);
            (a.mover == Color::White ? sum_w : sum_b) += a.pawn_loss;
        }
        CHECK(tplv(g, Color::White) == doctest::Approx(sum_w).epsilon(1e-9));
        CHECK(tplv(g, Color::Black) == doctest::Approx(sum_b).epsilon(1e-9));

        // Zeroing any single annotation can only lower the player's TPLV.
        for (const MoveAnnotation& a : g.annotations)
            CHECK(tplv(g, a.mover) - a.pawn_loss <= tplv(g, a.mover) + 1e-12);

        pool.push_back(g);
    }
    // Cumulative TPLV grows monotonically as games are appended.
    std::vector<AnnotatedGame> prefix;
    double last = 0.0;
    for (AnnotatedGame& g : pool) {
        g.record.headers = {{"White", "P"}, {"Black", "Q"}};
        prefix.push_back(g);
        double cum = cumulative_tplv(prefix, "P");
        CHECK(cum >= last - 1e-12);
        last = cum;
    }
}
