#include <doctest.h>

#include <string>
#include <vector>

#include "tiebreak/chess/board.hpp"
#include "tiebreak/error.hpp"

using namespace tiebreak;
using namespace tiebreak::chess;

TEST_CASE("fen round trip") {
    Position start;
    CHECK(start.fen() == kStartFen);

    const char* fens[] = {
        "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
        "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1",
        "rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8",
        "4k3/8/8/8/8/8/8/4K2R w K - 3 17",
        "rnbqkbnr/ppp1pppp/8/3p4/4P3/8/PPPP1PPP/RNBQKBNR w KQkq d6 0 2",
    };
    for (const char* f : fens) CHECK(Position::from_fen(f).fen() == f);

    CHECK_THROWS_AS(Position::from_fen("not a fen"), DomainError);
    CHECK_THROWS_AS(Position::from_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP w KQkq - 0 1"),
                    DomainError);
}

// Standard perft reference positions; node counts are the well-known values.
TEST_CASE("perft reference suite") {
    struct Case {
        const char* fen;
        std::vector<uint64_t> nodes;  // depth 1..n
    };
    const Case cases[] = {
        {kStartFen.c_str(), {20, 400, 8902, 197281, 4865609}},
        {"r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
         {48, 2039, 97862, 4085603}},
        {"8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1", {14, 191, 2812, 43238, 674624}},
        {"r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1",
         {6, 264, 9467, 422333}},
        {"rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8",
         {44, 1486, 62379, 2103487}},
        {"r4rk1/1pp1qppp/p1np1n2/2b1p1B1/2B1P1b1/P1NP1N2/1PP1QPPP/R4RK1 w - - 0 10",
         {46, 2079, 89890, 3894594}},
    };
    for (const Case& c : cases) {
        Position pos = Position::from_fen(c.fen);
        for (size_t d = 0; d < c.nodes.size(); ++d) {
            CAPTURE(c.fen);
            CAPTURE(d + 1);
            CHECK(perft(pos, static_cast<int>(d + 1)) == c.nodes[d]);
        }
    }
}

TEST_CASE("san replay of a known game") {
    // Morphy vs. Allies, Paris 1858.
    const char* moves[] = {
        "e4",    "e5",   "Nf3",  "d6",   "d4",    "Bg4",  "dxe5", "Bxf3", "Qxf3",
        "dxe5",  "Bc4",  "Nf6",  "Qb3",  "Qe7",   "Nc3",  "c6",   "Bg5",  "b5",
        "Nxb5",  "cxb5", "Bxb5+", "Nbd7", "O-O-O", "Rd8",  "Rxd7", "Rxd7", "Rd1",
        "Qe6",   "Bxd7+", "Nxd7", "Qb8+", "Nxb8",  "Rd8#",
    };
    Position pos;
    for (const char* tok : moves) {
        Move m = pos.parse_san(tok);
        // Emitted SAN must reproduce the input token exactly.
        CHECK(pos.san(m) == tok);
        pos.make(m);
    }
    CHECK(pos.is_checkmate());
    CHECK(pos.side_to_move() == Color::Black);
}

TEST_CASE("san parse/emit agree on every legal move") {
    const char* fens[] = {
        kStartFen.c_str(),
        "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
        "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1",
        "rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8",
        "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 b - - 0 1",
    };
    for (const char* f : fens) {
        Position pos = Position::from_fen(f);
        for (const Move& m : pos.legal_moves()) {
            CAPTURE(f);
            CAPTURE(move_to_uci(m));
            CHECK(pos.parse_san(pos.san(m)) == m);
        }
    }
}

TEST_CASE("san disambiguation") {
    // Knights on b1 and f3 both reach d2; rooks doubled on the a-file.
    Position pos = Position::from_fen("4k3/8/8/8/8/5N2/8/RN2K3 w Q - 0 1");
    Move nf3d2{make_square(5, 2), make_square(3, 1), PieceType::None};
    Move nf3g5{make_square(5, 2), make_square(6, 4), PieceType::None};
    CHECK(pos.san(nf3d2) == "Nfd2");
    CHECK(pos.parse_san("Nfd2") == nf3d2);
    CHECK(pos.san(nf3g5) == "Ng5");
    CHECK_THROWS_AS(pos.parse_san("Nd2"), DomainError);  // ambiguous

    Position rooks = Position::from_fen("4k3/8/8/R7/8/R7/8/4K3 w - - 0 1");
    Move ra5a4{make_square(0, 4), make_square(0, 3), PieceType::None};
    CHECK(rooks.san(ra5a4) == "R5a4");
    CHECK(rooks.parse_san("R5a4") == ra5a4);
}

TEST_CASE("en passant and promotion") {
    Position pos;
    for (const char* tok : {"e4", "Nf6", "e5", "d5"}) pos.make(pos.parse_san(tok));
    Move ep = pos.parse_san("exd6");
    CHECK(pos.is_capture(ep));
    pos.make(ep);
    CHECK(pos.fen() == "rnbqkb1r/ppp1pppp/3P1n2/8/8/8/PPPP1PPP/RNBQKBNR b KQkq - 0 3");

    Position promo = Position::from_fen("8/P6k/8/8/8/8/8/K7 w - - 0 1");
    Move under = promo.parse_san("a8=N");
    CHECK(under.promotion == PieceType::Knight);
    CHECK(promo.san(under) == "a8=N");
    promo.make(under);
    CHECK(promo.piece_type_at(make_square(0, 7)) == PieceType::Knight);
}

TEST_CASE("checkmate and stalemate detection") {
    Position fools;
    for (const char* tok : {"f3", "e5", "g4", "Qh4#"}) fools.make(fools.parse_san(tok));
    CHECK(fools.is_checkmate());
    CHECK_FALSE(fools.is_stalemate());

    Position stale = Position::from_fen("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1");
    CHECK(stale.is_stalemate());
    CHECK_FALSE(stale.is_checkmate());
    CHECK(stale.legal_moves().empty());
}

TEST_CASE("uci coordinate moves") {
    CHECK(move_to_uci({make_square(4, 1), make_square(4, 3), PieceType::None}) == "e2e4");
    Move m = move_from_uci("a7a8q");
    CHECK(m.promotion == PieceType::Queen);
    CHECK(move_to_uci(m) == "a7a8q");
    CHECK_THROWS_AS(move_from_uci("zz"), DomainError);
    CHECK_THROWS_AS(move_from_uci("e2e4k"), DomainError);
}
