// Regenerates the deterministic test fixtures under tests/fixtures/:
//   wcc2018_game12.pgn  - 124-ply drawn game ending in an accepted draw offer
//   wcc2018_game12.tbl  - mock engine table covering all 125 positions
//   krush_yu_report.json - 26 summary game rows of the 2022 championship
//   demo_tree.json       - the bundled draw-offer manipulation model
//
// The game-12 evaluation schedule pins White's TPLV at 5.90, Black's at
// 5.20 before the offer, and the final position at cp -100 (White to move),
// so the offer costs Black exactly 1.00.
//
// Usage: make_fixtures <output-dir>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "tiebreak/chess/board.hpp"
#include "tiebreak/chess/pgn.hpp"
#include "tiebreak/game/game_tree.hpp"
#include "tiebreak/report.hpp"

using namespace tiebreak;
using chess::Color;
using chess::Move;
using chess::Position;

namespace {

struct GeneratedGame {
    std::vector<Move> moves;
    std::vector<std::string> san;
    std::vector<Position> positions;  // size moves + 1
};

// Quiet deterministic shuffle: lowest-UCI non-capture non-check piece move
// whose resulting position is fresh; a pawn push when the halfmove clock
// creeps up. Never checks, so never ends the game.
GeneratedGame generate_shuffle_game(int plies) {
    GeneratedGame game;
    Position pos;
    game.positions.push_back(pos);
    std::map<std::string, int> seen;

    auto key = [](const Position& p) {
        std::string fen = p.fen();
        return fen.substr(0, fen.rfind(' ', fen.rfind(' ') - 1));  // drop clocks
    };
    seen[key(pos)]++;

    for (int ply = 1; ply <= plies; ++ply) {
        bool want_pawn = pos.halfmove_clock() >= 40;
        Move chosen{};
        std::string chosen_uci;
        bool found = false;
        for (const Move& m : pos.legal_moves()) {
            if (pos.is_capture(m) || m.promotion != chess::PieceType::None) continue;
            bool pawn = pos.piece_type_at(m.from) == chess::PieceType::Pawn;
            if (pawn != want_pawn) continue;
            Position next = pos.after(m);
            if (next.in_check()) continue;
            if (next.legal_moves().empty()) continue;
            if (seen[key(next)] >= 2) continue;
            std::string uci = chess::move_to_uci(m);
            if (!found || uci < chosen_uci) {
                chosen = m;
                chosen_uci = uci;
                found = true;
            }
        }
        if (!found) {
            std::cerr << "no quiet move at ply " << ply << "\n";
            std::exit(1);
        }
        game.san.push_back(pos.san(chosen));
        game.moves.push_back(chosen);
        pos.make(chosen);
        seen[key(pos)]++;
        game.positions.push_back(pos);
    }
    return game;
}

// Per-ply raw evaluation swings in centipawns (positive = pawn loss of that
// ply's mover; negative = the engine liked the played move better).
std::map<int, int> game12_deltas() {
    return {
        // White: losses sum to 590 cp, plus one -15 clamped ply.
        {5, 30}, {21, 80}, {37, 120}, {53, 45}, {61, -15}, {81, 95}, {97, 60}, {113, 160},
        // Black: losses sum to 520 cp, plus one -10 clamped ply.
        {12, 70}, {28, 110}, {34, -10}, {44, 90}, {72, 55}, {96, 125}, {110, 70},
    };
}

void write_game12(const std::string& dir) {
    const int plies = 124;
    GeneratedGame game = generate_shuffle_game(plies);

    auto deltas = game12_deltas();
    // Side-to-move score of every position: s_j = delta_{j+1}... recurrence
    // s_j = d_j - s_{j-1} with s_0 chosen so the final position is cp -100.
    int sum_w_raw = 0, sum_b_raw = 0;
    for (auto [ply, cp] : deltas) (ply % 2 ? sum_w_raw : sum_b_raw) += cp;
    std::vector<int> score(plies + 1);
    score[0] = -100 + sum_w_raw - sum_b_raw;
    for (int j = 1; j <= plies; ++j) {
        auto it = deltas.find(j);
        int d = it == deltas.end() ? 0 : it->second;
        score[j] = d - score[j - 1];
    }
    if (score[plies] != -100) {
        std::cerr << "schedule error: final score " << score[plies] << "\n";
        std::exit(1);
    }

    // PGN with the draw offer on Black's final move.
    std::ofstream pgn(dir + "/wcc2018_game12.pgn");
    pgn << "[Event \"World Chess Championship 2018\"]\n"
        << "[Site \"London ENG\"]\n"
        << "[Date \"2018.11.26\"]\n"
        << "[Round \"12\"]\n"
        << "[White \"Caruana, Fabiano\"]\n"
        << "[Black \"Carlsen, Magnus\"]\n"
        << "[Result \"1/2-1/2\"]\n"
        << "[Termination \"normal\"]\n\n";
    for (int j = 0; j < plies; ++j) {
        if (j % 2 == 0) pgn << (j / 2 + 1) << ". ";
        pgn << game.san[j];
        if (j == plies - 1) pgn << " {draw offered}";
        pgn << (j % 16 == 15 ? "\n" : " ");
    }
    pgn << "1/2-1/2\n";
    pgn.close();

    // Mock table: one entry per position. The best-move column names the
    // played move on lossless plies and some other legal move otherwise.
    std::ofstream tbl(dir + "/wcc2018_game12.tbl");
    tbl << "# Recorded evaluations for the 2018 championship game-12 fixture.\n"
        << "# White TPLV 5.90, Black TPLV 5.20 before the offer; the final\n"
        << "# position is cp -100 with White to move.\n";
    for (int j = 0; j <= plies; ++j) {
        const Position& p = game.positions[j];
        std::string best;
        if (j < plies) {
            auto it = deltas.find(j + 1);
            bool lossy = it != deltas.end() && it->second > 0;
            best = chess::move_to_uci(game.moves[j]);
            if (lossy) {
                for (const Move& m : p.legal_moves()) {
                    if (!(m == game.moves[j])) {
                        best = chess::move_to_uci(m);
                        break;
                    }
                }
            }
        } else {
            best = chess::move_to_uci(p.legal_moves().front());
        }
        tbl << p.fen() << " | " << best << " | cp " << score[j] << "\n";
    }
    tbl.close();

    double w = 0, b = 0;
    for (auto [ply, cp] : deltas) {
        if (cp <= 0) continue;
        (ply % 2 ? w : b) += cp / 100.0;
    }
    std::printf("game12: %d plies, White losses %.2f, Black losses %.2f, final cp %d\n", plies, w,
                b, score[plies]);
}

void write_krush_yu(const std::string& dir) {
    const double krush[] = {15.05, 23.1, 6.24,  7.5,  11.84, 13.53, 14.28,
                            7.52,  16.08, 5.27, 15.6, 11.02, 12.18};
    const double yu[] = {15.96, 5.52, 21.46, 9,    20.3,  20.79, 19.22,
                         6.66,  6.16, 20.9,  8.45, 20.52, 13.68};
    // Round results worth 9/13 points each: Krush 7W 4D 2L, Yu 8W 2D 3L.
    const double krush_pts[] = {1, 1, 0.5, 1, 0, 0.5, 1, 0.5, 1, 1, 0, 0.5, 1};
    const double yu_pts[] = {1, 1, 1, 0.5, 1, 0, 1, 0, 1, 0.5, 1, 0, 1};

    report::Report rep;
    rep.engine = {"mock:krush_yu_2022", "depth=20 mate_cap=10", "fixture"};

    auto add_games = [&rep](const std::string& player, const double* tplvs, const double* pts,
                            const std::string& tag) {
        for (int i = 0; i < 13; ++i) {
            report::GameRow g;
            g.index = static_cast<int>(rep.games.size());
            bool plays_white = i % 2 == 0;
            std::string opponent = tag + "-R" + std::to_string(i + 1);
            g.white = plays_white ? player : opponent;
            g.black = plays_white ? opponent : player;
            double p = pts[i];
            if (p == 0.5) g.result = pgn::GameResult::Draw;
            else if ((p == 1.0) == plays_white) g.result = pgn::GameResult::WhiteWin;
            else g.result = pgn::GameResult::BlackWin;
            g.termination = pgn::Termination::Normal;
            double own = tplvs[i];
            double theirs = own + 2.0 + (i % 5);  // the field scored worse
            g.tplv_white = plays_white ? own : theirs;
            g.tplv_black = plays_white ? theirs : own;
            int own_moves = 38 + (i * 7) % 21;
            g.moves_white = plays_white ? own_moves : own_moves + 3;
            g.moves_black = plays_white ? own_moves + 3 : own_moves;
            g.has_moves = false;
            rep.games.push_back(g);
        }
    };
    add_games("Krush, Irina", krush, krush_pts, "FieldK");
    add_games("Yu, Jennifer", yu, yu_pts, "FieldY");

    std::ofstream out(dir + "/krush_yu_report.json");
    out << report::emit_report(rep, report::Format::Json);

    double ks = 0, ys = 0, kt = 0, yt = 0;
    for (int i = 0; i < 13; ++i) {
        ks += krush_pts[i];
        ys += yu_pts[i];
        kt += krush[i];
        yt += yu[i];
    }
    std::printf("krush_yu: Krush %.1f pts cum %.2f, Yu %.1f pts cum %.2f\n", ks, kt, ys, yt);
}

void write_demo_tree(const std::string& dir) {
    std::ofstream out(dir + "/demo_tree.json");
    out << game::emit_tree_fixture(game::draw_offer_demo_fixture());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures <output-dir>\n";
        return 1;
    }
    std::string dir = argv[1];
    write_game12(dir);
    write_krush_yu(dir);
    write_demo_tree(dir);
    return 0;
}
