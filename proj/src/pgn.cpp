#include "tiebreak/chess/pgn.hpp"

#include <cctype>

#include "tiebreak/error.hpp"

namespace tiebreak::pgn {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Character cursor with 1-based line/column tracking.
struct Cursor {
    const std::string& text;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char next() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }
    void skip_space() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) next();
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }
};

bool is_token_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '=' || c == '+' ||
           c == '#' || c == '/' || c == '*' || c == '.' || c == '!' || c == '?';
}

std::string read_token(Cursor& cur) {
    std::string tok;
    while (!cur.eof() && is_token_char(cur.peek())) tok += cur.next();
    return tok;
}

std::string read_comment(Cursor& cur) {
    int line = cur.line, col = cur.col;
    cur.next();  // '{'
    std::string body;
    while (true) {
        if (cur.eof()) throw ParseError("unterminated comment", line, col);
        char c = cur.next();
        if (c == '}') break;
        body += c;
    }
    return body;
}

void skip_variation(Cursor& cur) {
    int line = cur.line, col = cur.col;
    cur.next();  // '('
    int depth = 1;
    while (depth > 0) {
        if (cur.eof()) throw ParseError("unterminated variation", line, col);
        char c = cur.next();
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        else if (c == '{') {
            while (!cur.eof() && cur.next() != '}') {}
        }
    }
}

bool is_move_number(const std::string& tok) {
    size_t i = 0;
    while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
    if (i == 0) return false;
    while (i < tok.size() && tok[i] == '.') ++i;
    return i == tok.size();
}

void parse_tag(Cursor& cur, GameRecord& game) {
    cur.next();  // '['
    cur.skip_space();
    std::string key;
    while (!cur.eof() && (std::isalnum(static_cast<unsigned char>(cur.peek())) || cur.peek() == '_'))
        key += cur.next();
    if (key.empty()) cur.fail("expected tag name");
    cur.skip_space();
    if (cur.eof() || cur.peek() != '"') cur.fail("expected tag value string");
    cur.next();
    std::string value;
    while (true) {
        if (cur.eof()) cur.fail("unterminated tag string");
        char c = cur.next();
        if (c == '"') break;
        if (c == '\\' && !cur.eof() && (cur.peek() == '"' || cur.peek() == '\\')) c = cur.next();
        value += c;
    }
    cur.skip_space();
    if (cur.eof() || cur.peek() != ']') cur.fail("expected ']' after tag value");
    cur.next();
    game.headers.emplace_back(key, value);
}

}  // namespace

std::string result_string(GameResult r) {
    switch (r) {
        case GameResult::WhiteWin: return "1-0";
        case GameResult::BlackWin: return "0-1";
        case GameResult::Draw: return "1/2-1/2";
        default: return "*";
    }
}

std::string termination_string(Termination t) {
    switch (t) {
        case Termination::Normal: return "normal";
        case Termination::TimeForfeit: return "time forfeit";
        default: return "other";
    }
}

std::optional<GameResult> result_from_string(const std::string& s) {
    if (s == "1-0") return GameResult::WhiteWin;
    if (s == "0-1") return GameResult::BlackWin;
    if (s == "1/2-1/2") return GameResult::Draw;
    if (s == "*") return GameResult::Unfinished;
    return std::nullopt;
}

std::optional<Termination> termination_from_string(const std::string& s) {
    if (s == "normal") return Termination::Normal;
    if (s == "time forfeit") return Termination::TimeForfeit;
    return Termination::Other;
}

const std::string* GameRecord::header(const std::string& key) const {
    for (const auto& [k, v] : headers)
        if (k == key) return &v;
    return nullptr;
}

std::string GameRecord::player_name(chess::Color c) const {
    const std::string* name = header(c == chess::Color::White ? "White" : "Black");
    return name && !name->empty() ? *name : chess::color_name(c);
}

chess::Position GameRecord::position_before(int ply) const {
    chess::Position pos = start;
    for (int i = 0; i + 1 < ply && i < static_cast<int>(moves.size()); ++i)
        pos.make(moves[i].move);
    return pos;
}

chess::Position GameRecord::final_position() const {
    return position_before(static_cast<int>(moves.size()) + 1);
}

bool GameRecord::ended_by_agreed_draw() const {
    if (result != GameResult::Draw || draw_offers.empty() || moves.empty()) return false;
    return draw_offers.back().ply == moves.back().ply;
}

std::vector<GameRecord> parse_pgn(const std::string& text) {
    std::vector<GameRecord> games;
    Cursor cur{text};

    while (true) {
        cur.skip_space();
        if (cur.eof()) break;

        GameRecord game;
        while (!cur.eof() && cur.peek() == '[') {
            parse_tag(cur, game);
            cur.skip_space();
        }

        if (const std::string* fen = game.header("FEN")) {
            try {
                game.start = chess::Position::from_fen(*fen);
            } catch (const DomainError& e) {
                throw ParseError(std::string("bad FEN tag: ") + e.what(), cur.line, cur.col);
            }
        }
        if (const std::string* term = game.header("Termination"))
            game.termination = *termination_from_string(*term);

        chess::Position pos = game.start;
        bool terminated = false;
        while (!terminated) {
            cur.skip_space();
            if (cur.eof()) cur.fail("game has no result token");
            char c = cur.peek();
            if (c == '{') {
                std::string body = trim(read_comment(cur));
                if (!game.moves.empty()) {
                    PlayedMove& last = game.moves.back();
                    if (!last.comment.empty()) last.comment += ' ';
                    last.comment += body;
                    if (body == "draw offered")
                        game.draw_offers.push_back({last.ply, last.mover});
                }
                continue;
            }
            if (c == ';') {
                while (!cur.eof() && cur.peek() != '\n') cur.next();
                continue;
            }
            if (c == '(') {
                skip_variation(cur);
                continue;
            }
            if (c == '$') {
                cur.next();
                while (!cur.eof() && std::isdigit(static_cast<unsigned char>(cur.peek()))) cur.next();
                continue;
            }
            if (c == '[') cur.fail("tag pair inside movetext (missing result token?)");

            int tok_line = cur.line, tok_col = cur.col;
            std::string tok = read_token(cur);
            if (tok.empty()) cur.fail(std::string("unexpected character '") + c + "'");

            if (auto r = result_from_string(tok)) {
                if (const std::string* hr = game.header("Result")) {
                    if (*hr != tok)
                        throw ParseError("result token '" + tok + "' contradicts Result header '" +
                                             *hr + "'",
                                         tok_line, tok_col);
                }
                game.result = *r;
                terminated = true;
                continue;
            }
            if (is_move_number(tok)) continue;
            // "12.Nf3" style: split the move number off the move itself.
            if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
                size_t i = 0;
                while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
                size_t dots = i;
                while (dots < tok.size() && tok[dots] == '.') ++dots;
                if (dots > i) tok = tok.substr(dots);
                if (tok.empty()) continue;
            }

            int ply = static_cast<int>(game.moves.size()) + 1;
            chess::Move move;
            try {
                move = pos.parse_san(tok);
            } catch (const DomainError& e) {
                throw IllegalMoveError(std::string(e.what()) + " at line " +
                                           std::to_string(tok_line) + ", column " +
                                           std::to_string(tok_col),
                                       ply);
            }
            game.moves.push_back({ply, pos.side_to_move(), tok, move, ""});
            pos.make(move);
        }

        games.push_back(std::move(game));
    }
    return games;
}

}  // namespace tiebreak::pgn
