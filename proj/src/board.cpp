#include "tiebreak/chess/board.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "tiebreak/error.hpp"

namespace tiebreak::chess {

namespace {

constexpr int8_t kEmpty = 0;

int8_t signed_piece(PieceType t, Color c) {
    return c == Color::White ? static_cast<int8_t>(t) : static_cast<int8_t>(-static_cast<int8_t>(t));
}

Color color_of(int8_t p) { return p > 0 ? Color::White : Color::Black; }

char piece_char(int8_t p) {
    static const char* white = " PNBRQK";
    char c = white[p < 0 ? -p : p];
    return p < 0 ? static_cast<char>(std::tolower(c)) : c;
}

PieceType piece_from_char(char c) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
        case 'P': return PieceType::Pawn;
        case 'N': return PieceType::Knight;
        case 'B': return PieceType::Bishop;
        case 'R': return PieceType::Rook;
        case 'Q': return PieceType::Queen;
        case 'K': return PieceType::King;
        default: return PieceType::None;
    }
}

constexpr int kKnightSteps[8][2] = {{1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}};
constexpr int kKingSteps[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
constexpr int kRookDirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
constexpr int kBishopDirs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

}  // namespace

std::string move_to_uci(const Move& m) {
    std::string s = square_name(m.from) + square_name(m.to);
    if (m.promotion != PieceType::None) {
        static const char* promo = "  nbrqk";
        s += promo[static_cast<int>(m.promotion)];
    }
    return s;
}

Move move_from_uci(const std::string& text) {
    if (text.size() < 4 || text.size() > 5) throw DomainError("bad coordinate move: " + text);
    auto sq = [&](int i) -> Square {
        char f = text[i], r = text[i + 1];
        if (f < 'a' || f > 'h' || r < '1' || r > '8')
            throw DomainError("bad coordinate move: " + text);
        return make_square(f - 'a', r - '1');
    };
    Move m{sq(0), sq(2), PieceType::None};
    if (text.size() == 5) {
        m.promotion = piece_from_char(text[4]);
        if (m.promotion == PieceType::None || m.promotion == PieceType::Pawn || m.promotion == PieceType::King)
            throw DomainError("bad promotion piece: " + text);
    }
    return m;
}

Position::Position() { *this = from_fen(kStartFen); }

Position Position::from_fen(const std::string& fen) {
    Position p{raw_tag{}};

    std::istringstream in(fen);
    std::string placement, stm, castling, ep;
    if (!(in >> placement >> stm)) throw DomainError("bad FEN: " + fen);

    int rank = 7, file = 0;
    for (char c : placement) {
        if (c == '/') {
            if (file != 8 || rank == 0) throw DomainError("bad FEN ranks: " + fen);
            --rank;
            file = 0;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            file += c - '0';
        } else {
            PieceType t = piece_from_char(c);
            if (t == PieceType::None || file > 7) throw DomainError("bad FEN piece: " + fen);
            Color col = std::isupper(static_cast<unsigned char>(c)) ? Color::White : Color::Black;
            p.board_[make_square(file, rank)] = signed_piece(t, col);
            ++file;
        }
    }
    if (rank != 0 || file != 8) throw DomainError("bad FEN ranks: " + fen);

    if (stm == "w") p.stm_ = Color::White;
    else if (stm == "b") p.stm_ = Color::Black;
    else throw DomainError("bad FEN side: " + fen);

    if (in >> castling) {
        for (char c : castling) {
            switch (c) {
                case 'K': p.castling_ |= kWhiteKingside; break;
                case 'Q': p.castling_ |= kWhiteQueenside; break;
                case 'k': p.castling_ |= kBlackKingside; break;
                case 'q': p.castling_ |= kBlackQueenside; break;
                case '-': break;
                default: throw DomainError("bad FEN castling: " + fen);
            }
        }
    }
    if (in >> ep && ep != "-") {
        if (ep.size() != 2 || ep[0] < 'a' || ep[0] > 'h' || ep[1] < '1' || ep[1] > '8')
            throw DomainError("bad FEN ep square: " + fen);
        p.ep_square_ = make_square(ep[0] - 'a', ep[1] - '1');
    }
    in >> p.halfmove_clock_;
    in >> p.fullmove_number_;
    if (p.fullmove_number_ < 1) p.fullmove_number_ = 1;
    return p;
}

std::string Position::fen() const {
    std::string out;
    for (int rank = 7; rank >= 0; --rank) {
        int gap = 0;
        for (int file = 0; file < 8; ++file) {
            int8_t p = board_[make_square(file, rank)];
            if (p == kEmpty) {
                ++gap;
            } else {
                if (gap) out += static_cast<char>('0' + gap);
                gap = 0;
                out += piece_char(p);
            }
        }
        if (gap) out += static_cast<char>('0' + gap);
        if (rank) out += '/';
    }
    out += stm_ == Color::White ? " w " : " b ";
    if (!castling_) {
        out += '-';
    } else {
        if (castling_ & kWhiteKingside) out += 'K';
        if (castling_ & kWhiteQueenside) out += 'Q';
        if (castling_ & kBlackKingside) out += 'k';
        if (castling_ & kBlackQueenside) out += 'q';
    }
    out += ' ';
    out += ep_square_ >= 0 ? square_name(ep_square_) : "-";
    out += ' ' + std::to_string(halfmove_clock_) + ' ' + std::to_string(fullmove_number_);
    return out;
}

Square Position::king_square(Color c) const {
    int8_t target = signed_piece(PieceType::King, c);
    for (Square s = 0; s < 64; ++s)
        if (board_[s] == target) return s;
    throw DomainError("position has no " + color_name(c) + " king");
}

bool Position::square_attacked(Square s, Color by) const {
    int fs = file_of(s), rs = rank_of(s);

    // Pawns attack toward higher ranks for White, lower for Black.
    int pr = by == Color::White ? rs - 1 : rs + 1;
    if (pr >= 0 && pr <= 7) {
        for (int df : {-1, 1}) {
            int pf = fs + df;
            if (pf >= 0 && pf <= 7 && board_[make_square(pf, pr)] == signed_piece(PieceType::Pawn, by))
                return true;
        }
    }

    for (auto& d : kKnightSteps) {
        int f = fs + d[0], r = rs + d[1];
        if (f >= 0 && f <= 7 && r >= 0 && r <= 7 &&
            board_[make_square(f, r)] == signed_piece(PieceType::Knight, by))
            return true;
    }
    for (auto& d : kKingSteps) {
        int f = fs + d[0], r = rs + d[1];
        if (f >= 0 && f <= 7 && r >= 0 && r <= 7 &&
            board_[make_square(f, r)] == signed_piece(PieceType::King, by))
            return true;
    }

    auto ray_hits = [&](const int dirs[4][2], PieceType slider) {
        for (int i = 0; i < 4; ++i) {
            int f = fs + dirs[i][0], r = rs + dirs[i][1];
            while (f >= 0 && f <= 7 && r >= 0 && r <= 7) {
                int8_t p = board_[make_square(f, r)];
                if (p != kEmpty) {
                    if (p == signed_piece(slider, by) || p == signed_piece(PieceType::Queen, by))
                        return true;
                    break;
                }
                f += dirs[i][0];
                r += dirs[i][1];
            }
        }
        return false;
    };
    return ray_hits(kRookDirs, PieceType::Rook) || ray_hits(kBishopDirs, PieceType::Bishop);
}

void Position::add_pawn_moves(Square from, std::vector<Move>& out) const {
    int dir = stm_ == Color::White ? 1 : -1;
    int start_rank = stm_ == Color::White ? 1 : 6;
    int promo_rank = stm_ == Color::White ? 7 : 0;
    int f = file_of(from), r = rank_of(from);

    auto push = [&](Square to) {
        if (rank_of(to) == promo_rank) {
            for (PieceType t : {PieceType::Queen, PieceType::Rook, PieceType::Bishop, PieceType::Knight})
                out.push_back({from, to, t});
        } else {
            out.push_back({from, to, PieceType::None});
        }
    };

    Square one = make_square(f, r + dir);
    if (board_[one] == kEmpty) {
        push(one);
        if (r == start_rank) {
            Square two = make_square(f, r + 2 * dir);
            if (board_[two] == kEmpty) out.push_back({from, two, PieceType::None});
        }
    }
    for (int df : {-1, 1}) {
        int cf = f + df;
        if (cf < 0 || cf > 7) continue;
        Square to = make_square(cf, r + dir);
        int8_t victim = board_[to];
        if ((victim != kEmpty && color_of(victim) != stm_) || to == ep_square_) push(to);
    }
}

void Position::generate_pseudo_legal(std::vector<Move>& out) const {
    for (Square from = 0; from < 64; ++from) {
        int8_t p = board_[from];
        if (p == kEmpty || color_of(p) != stm_) continue;
        PieceType t = static_cast<PieceType>(p < 0 ? -p : p);
        int f = file_of(from), r = rank_of(from);

        auto step_moves = [&](const int steps[8][2]) {
            for (int i = 0; i < 8; ++i) {
                int tf = f + steps[i][0], tr = r + steps[i][1];
                if (tf < 0 || tf > 7 || tr < 0 || tr > 7) continue;
                Square to = make_square(tf, tr);
                if (board_[to] == kEmpty || color_of(board_[to]) != stm_)
                    out.push_back({from, to, PieceType::None});
            }
        };
        auto slide_moves = [&](const int dirs[4][2]) {
            for (int i = 0; i < 4; ++i) {
                int tf = f + dirs[i][0], tr = r + dirs[i][1];
                while (tf >= 0 && tf <= 7 && tr >= 0 && tr <= 7) {
                    Square to = make_square(tf, tr);
                    if (board_[to] == kEmpty) {
                        out.push_back({from, to, PieceType::None});
                    } else {
                        if (color_of(board_[to]) != stm_) out.push_back({from, to, PieceType::None});
                        break;
                    }
                    tf += dirs[i][0];
                    tr += dirs[i][1];
                }
            }
        };

        switch (t) {
            case PieceType::Pawn: add_pawn_moves(from, out); break;
            case PieceType::Knight: step_moves(kKnightSteps); break;
            case PieceType::King: step_moves(kKingSteps); break;
            case PieceType::Bishop: slide_moves(kBishopDirs); break;
            case PieceType::Rook: slide_moves(kRookDirs); break;
            case PieceType::Queen: slide_moves(kRookDirs); slide_moves(kBishopDirs); break;
            default: break;
        }
    }

    // Castling: king and rook on home squares with rights, path empty,
    // king's start/transit squares not attacked.
    Color us = stm_;
    Color them = opposite(us);
    int home = us == Color::White ? 0 : 7;
    Square e = make_square(4, home);
    if (board_[e] == signed_piece(PieceType::King, us) && !square_attacked(e, them)) {
        uint8_t ks = us == Color::White ? kWhiteKingside : kBlackKingside;
        uint8_t qs = us == Color::White ? kWhiteQueenside : kBlackQueenside;
        if ((castling_ & ks) && board_[make_square(7, home)] == signed_piece(PieceType::Rook, us) &&
            board_[make_square(5, home)] == kEmpty && board_[make_square(6, home)] == kEmpty &&
            !square_attacked(make_square(5, home), them) && !square_attacked(make_square(6, home), them))
            out.push_back({e, make_square(6, home), PieceType::None});
        if ((castling_ & qs) && board_[make_square(0, home)] == signed_piece(PieceType::Rook, us) &&
            board_[make_square(1, home)] == kEmpty && board_[make_square(2, home)] == kEmpty &&
            board_[make_square(3, home)] == kEmpty &&
            !square_attacked(make_square(3, home), them) && !square_attacked(make_square(2, home), them))
            out.push_back({e, make_square(2, home), PieceType::None});
    }
}

std::vector<Move> Position::legal_moves() const {
    std::vector<Move> pseudo;
    pseudo.reserve(64);
    generate_pseudo_legal(pseudo);
    std::vector<Move> legal;
    legal.reserve(pseudo.size());
    for (const Move& m : pseudo) {
        Position next = *this;
        next.make(m);
        if (!next.square_attacked(next.king_square(stm_), next.stm_)) legal.push_back(m);
    }
    return legal;
}

bool Position::is_legal(const Move& m) const {
    for (const Move& lm : legal_moves())
        if (lm == m) return true;
    return false;
}

bool Position::is_capture(const Move& m) const {
    if (board_[m.to] != kEmpty) return true;
    return piece_type_at(m.from) == PieceType::Pawn && m.to == ep_square_;
}

void Position::make(const Move& m) {
    int8_t piece = board_[m.from];
    PieceType t = static_cast<PieceType>(piece < 0 ? -piece : piece);
    bool capture = board_[m.to] != kEmpty;

    if (t == PieceType::Pawn && m.to == ep_square_ && file_of(m.to) != file_of(m.from)) {
        board_[make_square(file_of(m.to), rank_of(m.from))] = kEmpty;
        capture = true;
    }
    if (t == PieceType::King && std::abs(file_of(m.to) - file_of(m.from)) == 2) {
        int home = rank_of(m.from);
        if (file_of(m.to) == 6) {
            board_[make_square(5, home)] = board_[make_square(7, home)];
            board_[make_square(7, home)] = kEmpty;
        } else {
            board_[make_square(3, home)] = board_[make_square(0, home)];
            board_[make_square(0, home)] = kEmpty;
        }
    }

    board_[m.to] = m.promotion == PieceType::None ? piece : signed_piece(m.promotion, stm_);
    board_[m.from] = kEmpty;

    auto clear_rook_rights = [&](Square s) {
        switch (s) {
            case 0: castling_ &= ~kWhiteQueenside; break;
            case 7: castling_ &= ~kWhiteKingside; break;
            case 56: castling_ &= ~kBlackQueenside; break;
            case 63: castling_ &= ~kBlackKingside; break;
            default: break;
        }
    };
    if (t == PieceType::King)
        castling_ &= stm_ == Color::White ? ~(kWhiteKingside | kWhiteQueenside)
                                          : ~(kBlackKingside | kBlackQueenside);
    clear_rook_rights(m.from);
    clear_rook_rights(m.to);

    ep_square_ = -1;
    if (t == PieceType::Pawn && std::abs(m.to - m.from) == 16) ep_square_ = (m.to + m.from) / 2;

    halfmove_clock_ = (t == PieceType::Pawn || capture) ? 0 : halfmove_clock_ + 1;
    if (stm_ == Color::Black) ++fullmove_number_;
    stm_ = opposite(stm_);
}

Position Position::after(const Move& m) const {
    Position next = *this;
    next.make(m);
    return next;
}

bool Position::is_checkmate() const { return in_check() && legal_moves().empty(); }
bool Position::is_stalemate() const { return !in_check() && legal_moves().empty(); }

std::string Position::san(const Move& m) const {
    PieceType t = piece_type_at(m.from);
    std::string out;

    if (t == PieceType::King && std::abs(file_of(m.to) - file_of(m.from)) == 2) {
        out = file_of(m.to) == 6 ? "O-O" : "O-O-O";
    } else if (t == PieceType::Pawn) {
        if (is_capture(m)) {
            out += static_cast<char>('a' + file_of(m.from));
            out += 'x';
        }
        out += square_name(m.to);
        if (m.promotion != PieceType::None) {
            out += '=';
            out += " PNBRQK"[static_cast<int>(m.promotion)];
        }
    } else {
        out += " PNBRQK"[static_cast<int>(t)];
        bool need_file = false, need_rank = false, clash = false;
        for (const Move& other : legal_moves()) {
            if (other == m || other.to != m.to || other.from == m.from) continue;
            if (piece_type_at(other.from) != t) continue;
            clash = true;
            if (file_of(other.from) == file_of(m.from)) need_rank = true;
            if (rank_of(other.from) == rank_of(m.from)) need_file = true;
        }
        if (clash && !need_file && !need_rank) need_file = true;
        if (need_file) out += static_cast<char>('a' + file_of(m.from));
        if (need_rank) out += static_cast<char>('1' + rank_of(m.from));
        if (is_capture(m)) out += 'x';
        out += square_name(m.to);
    }

    Position next = after(m);
    if (next.in_check()) out += next.legal_moves().empty() ? '#' : '+';
    return out;
}

Move Position::parse_san(const std::string& token) const {
    std::string s = token;
    while (!s.empty() && (s.back() == '+' || s.back() == '#' || s.back() == '!' || s.back() == '?'))
        s.pop_back();
    if (s.size() > 4 && s.substr(s.size() - 4) == "e.p.") s.resize(s.size() - 4);
    while (!s.empty() && s.back() == '.') s.pop_back();
    if (s.empty()) throw DomainError("empty move token");

    auto candidates = legal_moves();

    if (s == "O-O" || s == "0-0" || s == "O-O-O" || s == "0-0-0") {
        int delta = s.size() == 3 ? 2 : -2;
        for (const Move& m : candidates)
            if (piece_type_at(m.from) == PieceType::King && file_of(m.to) - file_of(m.from) == delta)
                return m;
        throw DomainError("illegal move '" + token + "'");
    }

    PieceType promo = PieceType::None;
    if (s.size() >= 2 && std::string("NBRQ").find(s.back()) != std::string::npos &&
        !std::isupper(static_cast<unsigned char>(s.front()))) {
        promo = piece_from_char(s.back());
        s.pop_back();
        if (!s.empty() && s.back() == '=') s.pop_back();
    }

    if (s.size() < 2) throw DomainError("bad move token '" + token + "'");
    std::string dest = s.substr(s.size() - 2);
    if (dest[0] < 'a' || dest[0] > 'h' || dest[1] < '1' || dest[1] > '8')
        throw DomainError("bad destination in '" + token + "'");
    Square to = make_square(dest[0] - 'a', dest[1] - '1');
    s.resize(s.size() - 2);

    bool capture = !s.empty() && s.back() == 'x';
    if (capture) s.pop_back();

    PieceType piece = PieceType::Pawn;
    if (!s.empty() && std::isupper(static_cast<unsigned char>(s.front()))) {
        piece = piece_from_char(s.front());
        if (piece == PieceType::None) throw DomainError("bad piece in '" + token + "'");
        s.erase(s.begin());
    }
    int from_file = -1, from_rank = -1;
    for (char c : s) {
        if (c >= 'a' && c <= 'h') from_file = c - 'a';
        else if (c >= '1' && c <= '8') from_rank = c - '1';
        else throw DomainError("bad disambiguation in '" + token + "'");
    }

    Move found{};
    int matches = 0;
    for (const Move& m : candidates) {
        if (m.to != to || piece_type_at(m.from) != piece || m.promotion != promo) continue;
        if (from_file >= 0 && file_of(m.from) != from_file) continue;
        if (from_rank >= 0 && rank_of(m.from) != from_rank) continue;
        if (piece == PieceType::Pawn && capture != is_capture(m)) continue;
        found = m;
        ++matches;
    }
    if (matches == 0) throw DomainError("illegal move '" + token + "'");
    if (matches > 1) throw DomainError("ambiguous move '" + token + "'");
    return found;
}

uint64_t perft(const Position& pos, int depth) {
    if (depth == 0) return 1;
    uint64_t nodes = 0;
    for (const Move& m : pos.legal_moves()) {
        if (depth == 1) {
            ++nodes;
        } else {
            nodes += perft(pos.after(m), depth - 1);
        }
    }
    return nodes;
}

}  // namespace tiebreak::chess
