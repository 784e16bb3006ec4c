#include "tiebreak/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "tiebreak/error.hpp"

namespace tiebreak::report {

using nlohmann::json;

GameRow game_row(const analysis::AnnotatedGame& game, int index) {
    GameRow row;
    row.index = index;
    row.white = game.record.player_name(chess::Color::White);
    row.black = game.record.player_name(chess::Color::Black);
    row.result = game.record.result;
    row.termination = game.record.termination;
    row.tplv_white = game.tplv_white;
    row.tplv_black = game.tplv_black;
    row.moves_white = game.move_count(chess::Color::White);
    row.moves_black = game.move_count(chess::Color::Black);
    row.has_moves = true;
    row.error = game.error;
    for (const analysis::MoveAnnotation& a : game.annotations) {
        MoveRow m;
        m.ply = a.ply;
        m.mover = a.mover;
        m.played = a.played;
        m.best = a.best_move;
        m.value_best = a.value_best;
        m.value_played = a.value_played;
        m.pawn_loss = a.pawn_loss;
        m.synthetic = a.synthetic;
        m.raw = a.raw;
        m.reeval_value_best = a.reeval_value_best;
        row.moves.push_back(std::move(m));
    }
    return row;
}

std::string format_pawn_units(double value) {
    long long scaled = std::llround(value * 10000.0) / 100;  // truncate at 2 decimals
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld", scaled < 0 ? "-" : "",
                  std::llabs(scaled) / 100, std::llabs(scaled) % 100);
    return buf;
}

namespace {

std::string format_points(double value) {
    // Tournament points are halves; keep them short (9, 8.5).
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", value);
    return buf;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string emit_csv(const Report& report) {
    std::string out;
    auto row = [&out](const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += csv_quote(fields[i]);
        }
        out += '\n';
    };

    if (!report.standings.empty()) {
        row({"rank", "player", "raw_score", "cumulative_tplv", "avg_game_tplv", "avg_cpl",
             "games", "tiebreak_used"});
        for (const tournament::Standing& s : report.standings)
            row({std::to_string(s.rank), s.player, format_points(s.raw_score),
                 format_pawn_units(s.cumulative_tplv), format_pawn_units(s.avg_game_tplv),
                 format_pawn_units(s.avg_centipawn_loss), std::to_string(s.games),
                 tournament::tiebreak_used_string(s.tiebreak_used)});
        return out;
    }

    row({"index", "white", "black", "result", "termination", "tplv_white", "tplv_black",
         "moves_white", "moves_black", "score_white", "score_black", "tiebreak_winner", "basis",
         "error"});
    for (const GameRow& g : report.games) {
        std::string score_w, score_b, tb, basis;
        if (g.score) {
            score_w = format_points(g.score->white);
            score_b = format_points(g.score->black);
            tb = g.score->tiebreak_winner ? chess::color_name(*g.score->tiebreak_winner) : "none";
            basis = scoring::basis_string(g.score->basis);
        }
        row({std::to_string(g.index), g.white, g.black, pgn::result_string(g.result),
             pgn::termination_string(g.termination), format_pawn_units(g.tplv_white),
             format_pawn_units(g.tplv_black), std::to_string(g.moves_white),
             std::to_string(g.moves_black), score_w, score_b, tb, basis, g.error.value_or("")});
    }
    return out;
}

json move_to_json(const MoveRow& m) {
    json j;
    j["ply"] = m.ply;
    j["mover"] = chess::color_name(m.mover);
    j["played"] = m.played;
    j["best"] = m.best;
    j["value_best"] = m.value_best;
    j["value_played"] = m.value_played;
    j["pawn_loss"] = m.pawn_loss;
    j["synthetic"] = m.synthetic;
    j["raw"] = m.raw;
    if (m.reeval_value_best) j["reeval_value_best"] = *m.reeval_value_best;
    return j;
}

MoveRow move_from_json(const json& j) {
    MoveRow m;
    m.ply = j.at("ply").get<int>();
    m.mover = j.at("mover").get<std::string>() == "white" ? chess::Color::White
                                                          : chess::Color::Black;
    m.played = j.at("played").get<std::string>();
    m.best = j.at("best").get<std::string>();
    m.value_best = j.at("value_best").get<double>();
    m.value_played = j.at("value_played").get<double>();
    m.pawn_loss = j.at("pawn_loss").get<double>();
    m.synthetic = j.at("synthetic").get<bool>();
    m.raw = j.at("raw").get<std::vector<std::string>>();
    if (j.contains("reeval_value_best")) m.reeval_value_best = j["reeval_value_best"].get<double>();
    return m;
}

json game_to_json(const GameRow& g) {
    json j;
    j["index"] = g.index;
    j["white"] = g.white;
    j["black"] = g.black;
    j["result"] = pgn::result_string(g.result);
    j["termination"] = pgn::termination_string(g.termination);
    j["tplv_white"] = g.tplv_white;
    j["tplv_black"] = g.tplv_black;
    j["moves_white"] = g.moves_white;
    j["moves_black"] = g.moves_black;
    if (g.has_moves) {
        j["moves"] = json::array();
        for (const MoveRow& m : g.moves) j["moves"].push_back(move_to_json(m));
    }
    if (g.score) {
        json s;
        s["white"] = g.score->white;
        s["black"] = g.score->black;
        s["tiebreak_winner"] =
            g.score->tiebreak_winner ? chess::color_name(*g.score->tiebreak_winner) : "none";
        s["basis"] = scoring::basis_string(g.score->basis);
        j["score"] = s;
    }
    if (g.error) j["error"] = *g.error;
    return j;
}

GameRow game_from_json(const json& j) {
    GameRow g;
    g.index = j.at("index").get<int>();
    g.white = j.at("white").get<std::string>();
    g.black = j.at("black").get<std::string>();
    auto result = pgn::result_from_string(j.at("result").get<std::string>());
    if (!result) throw DomainError("bad result in report: " + j.at("result").get<std::string>());
    g.result = *result;
    g.termination = *pgn::termination_from_string(j.at("termination").get<std::string>());
    g.tplv_white = j.at("tplv_white").get<double>();
    g.tplv_black = j.at("tplv_black").get<double>();
    g.moves_white = j.at("moves_white").get<int>();
    g.moves_black = j.at("moves_black").get<int>();
    if (j.contains("moves")) {
        g.has_moves = true;
        for (const json& m : j["moves"]) g.moves.push_back(move_from_json(m));
    }
    if (j.contains("score")) {
        const json& s = j["score"];
        scoring::GameScore score;
        score.white = s.at("white").get<double>();
        score.black = s.at("black").get<double>();
        std::string tb = s.at("tiebreak_winner").get<std::string>();
        if (tb == "white") score.tiebreak_winner = chess::Color::White;
        else if (tb == "black") score.tiebreak_winner = chess::Color::Black;
        auto basis = scoring::basis_from_string(s.at("basis").get<std::string>());
        if (!basis) throw DomainError("bad score basis in report");
        score.basis = *basis;
        g.score = score;
    }
    if (j.contains("error")) g.error = j["error"].get<std::string>();
    return g;
}

json standing_to_json(const tournament::Standing& s) {
    json j;
    j["player"] = s.player;
    j["raw_score"] = s.raw_score;
    j["cumulative_tplv"] = s.cumulative_tplv;
    j["avg_cpl"] = s.avg_centipawn_loss;
    j["avg_game_tplv"] = s.avg_game_tplv;
    j["games"] = s.games;
    j["rank"] = s.rank;
    j["tiebreak_used"] = tournament::tiebreak_used_string(s.tiebreak_used);
    return j;
}

tournament::Standing standing_from_json(const json& j) {
    tournament::Standing s;
    s.player = j.at("player").get<std::string>();
    s.raw_score = j.at("raw_score").get<double>();
    s.cumulative_tplv = j.at("cumulative_tplv").get<double>();
    s.avg_centipawn_loss = j.at("avg_cpl").get<double>();
    s.avg_game_tplv = j.at("avg_game_tplv").get<double>();
    s.games = j.at("games").get<int>();
    s.rank = j.at("rank").get<int>();
    auto used = tournament::tiebreak_used_from_string(j.at("tiebreak_used").get<std::string>());
    if (!used) throw DomainError("bad tiebreak_used in report");
    s.tiebreak_used = *used;
    return s;
}

}  // namespace

std::string emit_report(const Report& report, Format format) {
    if (format == Format::Csv) return emit_csv(report);

    json doc;
    doc["engine"] = {{"name", report.engine.name},
                     {"settings", report.engine.settings},
                     {"fingerprint", report.engine.fingerprint}};
    doc["games"] = json::array();
    for (const GameRow& g : report.games) doc["games"].push_back(game_to_json(g));
    doc["standings"] = json::array();
    for (const tournament::Standing& s : report.standings)
        doc["standings"].push_back(standing_to_json(s));
    return doc.dump(2) + "\n";
}

Report parse_report(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("bad report JSON: ") + e.what(), 1, 1);
    }
    try {
        Report report;
        const json& engine = doc.at("engine");
        report.engine.name = engine.at("name").get<std::string>();
        report.engine.settings = engine.at("settings").get<std::string>();
        report.engine.fingerprint = engine.at("fingerprint").get<std::string>();
        for (const json& g : doc.at("games")) report.games.push_back(game_from_json(g));
        for (const json& s : doc.at("standings")) report.standings.push_back(standing_from_json(s));
        return report;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad report JSON: ") + e.what(), 1, 1);
    }
}

}  // namespace tiebreak::report
