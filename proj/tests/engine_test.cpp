#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "tiebreak/engine/engine.hpp"
#include "tiebreak/error.hpp"

using namespace tiebreak;
using namespace tiebreak::engine;
using tiebreak::chess::Color;

TEST_CASE("normalize_eval basics") {
    // cp -100 from White's view means Black is a pawn up.
    EngineScore minus_one{ScoreKind::Centipawns, -100, Perspective::White};
    CHECK(normalize_eval(minus_one, Color::Black, Color::Black, 10.0) == doctest::Approx(1.0));
    CHECK(normalize_eval(minus_one, Color::White, Color::Black, 10.0) == doctest::Approx(-1.0));

    EngineScore zero{ScoreKind::Centipawns, 0, Perspective::SideToMove};
    CHECK(normalize_eval(zero, Color::White, Color::White, 10.0) == 0.0);
    CHECK(normalize_eval(zero, Color::Black, Color::White, 10.0) == 0.0);

    EngineScore mate3{ScoreKind::MateIn, 3, Perspective::SideToMove};
    CHECK(normalize_eval(mate3, Color::White, Color::White, 10.0) == doctest::Approx(10.0));
    CHECK(normalize_eval(mate3, Color::Black, Color::White, 10.0) == doctest::Approx(-10.0));

    EngineScore mated{ScoreKind::MateIn, -5, Perspective::SideToMove};
    CHECK(normalize_eval(mated, Color::Black, Color::Black, 7.5) == doctest::Approx(-7.5));

    CHECK_THROWS_AS(normalize_eval(zero, Color::White, Color::White, 0.0), DomainError);
    CHECK_THROWS_AS(normalize_eval(EngineScore{ScoreKind::MateIn, 0, Perspective::SideToMove},
                                   Color::White, Color::White, 10.0),
                    DomainError);
}

TEST_CASE("normalize_eval antisymmetry and clamping") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> cp(-4000, 4000);
    for (int i = 0; i < 500; ++i) {
        EngineScore s{ScoreKind::Centipawns, cp(rng),
                      i % 2 ? Perspective::SideToMove : Perspective::White};
        Color stm = i % 3 ? Color::White : Color::Black;
        double w = normalize_eval(s, Color::White, stm, 10.0);
        double b = normalize_eval(s, Color::Black, stm, 10.0);
        CHECK(w == -b);
        CHECK(std::abs(w) <= 10.0);  // a mate always outranks any centipawn score
    }
    // Monotone in the centipawn value for a fixed perspective.
    EngineScore lo{ScoreKind::Centipawns, 40, Perspective::SideToMove};
    EngineScore hi{ScoreKind::Centipawns, 90, Perspective::SideToMove};
    CHECK(normalize_eval(lo, Color::White, Color::White, 10.0) <
          normalize_eval(hi, Color::White, Color::White, 10.0));
}

TEST_CASE("mock table parsing") {
    const char* text =
        "# comment line\n"
        "\n"
        "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1 | e2e4 | cp 30\n"
        "7k/8/5KQ1/8/8/8/8/8 w - - 0 1 | g6g7 | mate 1\n";
    MockTable table = parse_mock_table(text);
    REQUIRE(table.size() == 2);
    const MockEntry& start = table.at("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1");
    CHECK(start.best_move == "e2e4");
    CHECK(start.score == EngineScore{ScoreKind::Centipawns, 30, Perspective::SideToMove});

    CHECK_THROWS_AS(parse_mock_table("just one field\n"), ParseError);
    CHECK_THROWS_AS(parse_mock_table("a | b | cp x\n"), ParseError);
    CHECK_THROWS_AS(parse_mock_table("a | b | mate 0\n"), ParseError);
    CHECK_THROWS_AS(parse_mock_table("a | b | pawns 3\n"), ParseError);
}

namespace {

EngineConfig mock_config(const std::string& table_file) {
    EngineConfig cfg;
    cfg.mock_table_path = fixture_path(table_file);
    return cfg;
}

}  // namespace

TEST_CASE("mock session evaluation and determinism") {
    // Write a throwaway table next to nothing -- use the in-repo one.
    std::string path = fixture_path("basic_mock.tbl");
    EngineConfig cfg;
    cfg.mock_table_path = path;
    auto s1 = start_session(cfg);
    auto s2 = start_session(cfg);

    auto run = [](EngineSession& s) {
        std::vector<std::string> log;
        auto e1 = s.evaluate(PositionRef::startpos());
        log.push_back(e1.best_move);
        auto e2 = s.evaluate(PositionRef::startpos({"e2e4"}));
        log.push_back(e2.best_move);
        return std::make_pair(log, s.transcript());
    };
    auto [log1, tr1] = run(*s1);
    auto [log2, tr2] = run(*s2);
    CHECK(log1 == log2);
    CHECK(tr1 == tr2);
    CHECK(log1[0] == "e2e4");

    auto ev = s1->evaluate(PositionRef::startpos());
    CHECK(ev.score == EngineScore{ScoreKind::Centipawns, 30, Perspective::SideToMove});
    CHECK(!ev.raw.empty());

    // A position missing from the table is an engine error.
    CHECK_THROWS_AS(s1->evaluate(PositionRef::startpos({"d2d4"})), EngineError);
}

TEST_CASE("evaluating a finished game is rejected") {
    auto session = start_session(mock_config("basic_mock.tbl"));
    // Fool's mate final position: White is checkmated.
    PositionRef mated = PositionRef::from_fen(
        "rnb1kbnr/pppp1ppp/8/4p3/6Pq/5P2/PPPPP2P/RNBQKBNR w KQkq - 1 3");
    CHECK_THROWS_AS(session->evaluate(mated), DomainError);
}

TEST_CASE("missing executable is a spawn error") {
    EngineConfig cfg;
    cfg.engine_path = "/no/such/engine-binary";
    CHECK_THROWS_AS(start_session(cfg), EngineError);

    EngineConfig bad_cap = mock_config("basic_mock.tbl");
    bad_cap.mate_cap = 0.0;
    CHECK_THROWS_AS(start_session(bad_cap), DomainError);
}

TEST_CASE("uci subprocess session") {
    EngineConfig cfg;
    cfg.engine_path = fixture_path("fake_uci.py");
    cfg.limit = {SearchLimit::Kind::Depth, 12};

    auto session = start_session(cfg);
    CHECK(session->name() == "Scripted UCI 1.2");

    SUBCASE("depth-dependent canned scores") {
        auto shallow = session->evaluate(PositionRef::startpos());
        CHECK(shallow.best_move == "d2d4");
        CHECK(shallow.score == EngineScore{ScoreKind::Centipawns, 31, Perspective::SideToMove});

        EngineConfig deep = cfg;
        deep.limit = {SearchLimit::Kind::Depth, 18};
        auto deep_session = start_session(deep);
        auto deeper = deep_session->evaluate(PositionRef::startpos());
        CHECK(deeper.best_move == "e2e4");
        CHECK(deeper.score == EngineScore{ScoreKind::Centipawns, 74, Perspective::SideToMove});
    }

    SUBCASE("mate score over the wire") {
        auto ev = session->evaluate(PositionRef::from_fen("7k/8/5KQ1/8/8/8/8/8 w - - 0 1"));
        CHECK(ev.score == EngineScore{ScoreKind::MateIn, 3, Perspective::SideToMove});
        CHECK(normalize_eval(ev.score, Color::White, Color::White, 10.0) == doctest::Approx(10.0));
    }

    SUBCASE("crash mid-search") {
        CHECK_THROWS_AS(session->evaluate(PositionRef::startpos({"h2h4"})), EngineError);
    }

    SUBCASE("malformed score line") {
        CHECK_THROWS_AS(session->evaluate(PositionRef::startpos({"a2a3"})), EngineError);
    }

    SUBCASE("transcript retained") {
        session->evaluate(PositionRef::startpos());
        bool saw_go = false, saw_best = false;
        for (const auto& line : session->transcript()) {
            if (line == "> go depth 12") saw_go = true;
            if (line == "< bestmove d2d4") saw_best = true;
        }
        CHECK(saw_go);
        CHECK(saw_best);
    }

    SUBCASE("movetime limit") {
        EngineConfig timed = cfg;
        timed.limit = {SearchLimit::Kind::MoveTime, 50};
        auto timed_session = start_session(timed);
        auto ev = timed_session->evaluate(PositionRef::startpos());
        CHECK(ev.score.kind == ScoreKind::Centipawns);
        bool saw_go = false;
        for (const auto& line : timed_session->transcript())
            if (line == "> go movetime 50") saw_go = true;
        CHECK(saw_go);
    }
}

TEST_CASE("rejected option and handshake timeout") {
    EngineConfig bad;
    bad.engine_path = fixture_path("fake_uci.py");
    bad.options = {{"BadOption", "1"}};
    CHECK_THROWS_AS(start_session(bad), EngineError);

    EngineConfig mute;
    mute.engine_path = fixture_path("fake_uci_mute.py");
    mute.handshake_timeout_ms = 200;
    CHECK_THROWS_AS(start_session(mute), EngineError);
}

TEST_CASE("fingerprint covers name and settings") {
    EngineConfig a;
    a.engine_path = "engine";
    EngineConfig b = a;
    b.limit = {SearchLimit::Kind::Depth, 20};
    CHECK(engine_fingerprint("X", a) != engine_fingerprint("X", b));
    CHECK(engine_fingerprint("X", a) != engine_fingerprint("Y", a));
    CHECK(engine_fingerprint("X", a) == engine_fingerprint("X", a));
}
