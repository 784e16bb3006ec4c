#include "tiebreak/engine/engine.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tiebreak/error.hpp"

namespace tiebreak::engine {

namespace {

using Clock = std::chrono::steady_clock;

int64_t ms_until(Clock::time_point deadline) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// Pulls "score cp X" / "score mate N" out of a UCI info line.
std::optional<EngineScore> parse_info_score(const std::string& line) {
    auto toks = split_ws(line);
    for (size_t i = 0; i + 2 < toks.size(); ++i) {
        if (toks[i] != "score") continue;
        const std::string& kind = toks[i + 1];
        int value;
        try {
            value = std::stoi(toks[i + 2]);
        } catch (const std::exception&) {
            throw EngineError("malformed score line: " + line);
        }
        if (kind == "cp") return EngineScore{ScoreKind::Centipawns, value, Perspective::SideToMove};
        if (kind == "mate") {
            if (value == 0) throw EngineError("malformed score line (mate 0): " + line);
            return EngineScore{ScoreKind::MateIn, value, Perspective::SideToMove};
        }
        throw EngineError("malformed score line: " + line);
    }
    return std::nullopt;
}

void require_playable(const PositionRef& pos) {
    chess::Position p = pos.resolve();
    if (p.legal_moves().empty())
        throw DomainError(std::string("no legal moves: position is ") +
                          (p.is_checkmate() ? "checkmate" : "stalemate"));
}

}  // namespace

double normalize_eval(const EngineScore& score, chess::Color player, chess::Color side_to_move,
                      double mate_cap) {
    if (mate_cap <= 0) throw DomainError("mate_cap must be positive");
    double v;
    if (score.kind == ScoreKind::Centipawns) {
        v = std::clamp(score.value / 100.0, -mate_cap, mate_cap);
    } else {
        if (score.value == 0) throw DomainError("mate score must be nonzero");
        v = score.value > 0 ? mate_cap : -mate_cap;
    }
    chess::Color owner =
        score.perspective == Perspective::White ? chess::Color::White : side_to_move;
    return player == owner ? v : -v;
}

std::string SearchLimit::to_go_command() const {
    return kind == Kind::Depth ? "go depth " + std::to_string(value)
                               : "go movetime " + std::to_string(value);
}

std::string EngineConfig::settings_string() const {
    std::ostringstream out;
    out << (limit.kind == SearchLimit::Kind::Depth ? "depth=" : "movetime=") << limit.value;
    out << " mate_cap=" << mate_cap;
    auto sorted = options;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [k, v] : sorted) out << " option:" << k << '=' << v;
    return out.str();
}

PositionRef PositionRef::startpos(std::vector<std::string> moves) {
    return PositionRef{std::nullopt, std::move(moves)};
}

PositionRef PositionRef::from_fen(std::string fen, std::vector<std::string> moves) {
    return PositionRef{std::move(fen), std::move(moves)};
}

chess::Position PositionRef::resolve() const {
    chess::Position pos = fen ? chess::Position::from_fen(*fen) : chess::Position();
    for (const std::string& m : moves) {
        chess::Move move = chess::move_from_uci(m);
        if (!pos.is_legal(move)) throw DomainError("illegal move in position: " + m);
        pos.make(move);
    }
    return pos;
}

std::string PositionRef::to_uci_command() const {
    std::string cmd = fen ? "position fen " + *fen : "position startpos";
    if (!moves.empty()) {
        cmd += " moves";
        for (const std::string& m : moves) cmd += ' ' + m;
    }
    return cmd;
}

std::string engine_fingerprint(const std::string& name, const EngineConfig& config) {
    // FNV-1a over name + settings.
    std::string input = name + '\n' + config.settings_string();
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : input) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

MockTable parse_mock_table(const std::string& text) {
    MockTable table;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;

        std::vector<std::string> fields;
        size_t start = 0;
        while (true) {
            size_t bar = t.find('|', start);
            fields.push_back(trim(t.substr(start, bar == std::string::npos ? bar : bar - start)));
            if (bar == std::string::npos) break;
            start = bar + 1;
        }
        if (fields.size() != 3) throw ParseError("mock table entry needs 3 '|' fields", lineno, 1);

        auto score_toks = split_ws(fields[2]);
        if (score_toks.size() != 2) throw ParseError("bad mock score field", lineno, 1);
        EngineScore score;
        try {
            score.value = std::stoi(score_toks[1]);
        } catch (const std::exception&) {
            throw ParseError("bad mock score value", lineno, 1);
        }
        if (score_toks[0] == "cp") {
            score.kind = ScoreKind::Centipawns;
        } else if (score_toks[0] == "mate") {
            score.kind = ScoreKind::MateIn;
            if (score.value == 0) throw ParseError("mate score must be nonzero", lineno, 1);
        } else {
            throw ParseError("unknown score kind '" + score_toks[0] + "'", lineno, 1);
        }
        table[fields[0]] = MockEntry{fields[1], score};
    }
    return table;
}

MockTable load_mock_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EngineError("cannot open mock table: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_mock_table(buf.str());
}

namespace {

class MockSession : public EngineSession {
public:
    MockSession(MockTable table, std::string name)
        : table_(std::move(table)), name_(std::move(name)) {
        transcript_.push_back("< id name " + name_);
        transcript_.push_back("< uciok");
    }

    Evaluation evaluate(const PositionRef& pos) override {
        require_playable(pos);
        std::string fen = pos.resolve().fen();
        auto it = table_.find(fen);
        if (it == table_.end()) throw EngineError("mock table has no entry for FEN: " + fen);

        Evaluation result;
        result.best_move = it->second.best_move;
        result.score = it->second.score;
        const EngineScore& s = it->second.score;
        std::string info = std::string("info score ") +
                           (s.kind == ScoreKind::Centipawns ? "cp " : "mate ") +
                           std::to_string(s.value);
        result.raw = {"> " + pos.to_uci_command(), "< " + info, "< bestmove " + result.best_move};
        for (const std::string& l : result.raw) transcript_.push_back(l);
        return result;
    }

    const std::string& name() const override { return name_; }

private:
    MockTable table_;
    std::string name_;
};

// Line-oriented pipe pair to a child process with deadline-based reads.
class Subprocess {
public:
    explicit Subprocess(const std::string& path) {
        // A write to a dead engine must surface as EPIPE, not kill us.
        static const int ignore_sigpipe = [] {
            signal(SIGPIPE, SIG_IGN);
            return 0;
        }();
        (void)ignore_sigpipe;

        int to_child[2], from_child[2], status[2];
        if (pipe(to_child) || pipe(from_child) || pipe2(status, O_CLOEXEC))
            throw EngineError("pipe failed: " + std::string(std::strerror(errno)));

        pid_ = fork();
        if (pid_ < 0) throw EngineError("fork failed: " + std::string(std::strerror(errno)));
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execlp(path.c_str(), path.c_str(), static_cast<char*>(nullptr));
            int err = errno;
            ssize_t n = write(status[1], &err, sizeof err);
            (void)n;
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        close(status[1]);
        write_fd_ = to_child[1];
        read_fd_ = from_child[0];

        int err = 0;
        if (read(status[0], &err, sizeof err) > 0) {
            close(status[0]);
            wait_child(1000);
            throw EngineError("cannot spawn engine '" + path + "': " + std::strerror(err));
        }
        close(status[0]);
    }

    ~Subprocess() {
        if (write_fd_ >= 0) close(write_fd_);
        if (read_fd_ >= 0) close(read_fd_);
        if (pid_ > 0 && !wait_child(2000)) {
            kill(pid_, SIGKILL);
            waitpid(pid_, nullptr, 0);
        }
    }

    Subprocess(const Subprocess&) = delete;
    Subprocess& operator=(const Subprocess&) = delete;

    void write_line(const std::string& line) {
        std::string data = line + '\n';
        size_t off = 0;
        while (off < data.size()) {
            ssize_t n = write(write_fd_, data.data() + off, data.size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw EngineError("engine stdin closed: " + std::string(std::strerror(errno)));
            }
            off += static_cast<size_t>(n);
        }
    }

    // Returns the next line, or throws on deadline/EOF.
    std::string read_line(Clock::time_point deadline, const std::string& what) {
        while (true) {
            size_t nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return line;
            }
            int64_t remaining = ms_until(deadline);
            if (remaining <= 0) throw EngineError("timeout waiting for " + what);
            pollfd pfd{read_fd_, POLLIN, 0};
            int rc = poll(&pfd, 1, static_cast<int>(std::min<int64_t>(remaining, 1000)));
            if (rc < 0 && errno != EINTR)
                throw EngineError("poll failed: " + std::string(std::strerror(errno)));
            if (rc <= 0) continue;
            char chunk[4096];
            ssize_t n = read(read_fd_, chunk, sizeof chunk);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw EngineError("engine read failed: " + std::string(std::strerror(errno)));
            }
            if (n == 0) throw EngineError("engine terminated while waiting for " + what);
            buffer_.append(chunk, static_cast<size_t>(n));
        }
    }

private:
    bool wait_child(int timeout_ms) {
        auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms);
        while (Clock::now() < deadline) {
            if (waitpid(pid_, nullptr, WNOHANG) != 0) {
                pid_ = -1;
                return true;
            }
            usleep(10000);
        }
        return false;
    }

    pid_t pid_ = -1;
    int write_fd_ = -1;
    int read_fd_ = -1;
    std::string buffer_;
};

class UciProcessSession : public EngineSession {
public:
    explicit UciProcessSession(const EngineConfig& config)
        : config_(config), proc_(config.engine_path) {
        auto deadline = Clock::now() + std::chrono::milliseconds(config.handshake_timeout_ms);
        send("uci");
        while (true) {
            std::string line = receive(deadline, "uciok");
            if (line.rfind("id name ", 0) == 0) name_ = line.substr(8);
            if (line == "uciok") break;
        }
        if (name_.empty()) name_ = config.engine_path;
        for (const auto& [k, v] : config.options)
            send(v.empty() ? "setoption name " + k : "setoption name " + k + " value " + v);
        send("isready");
        while (true) {
            std::string line = receive(deadline, "readyok");
            if (line.find("No such option") != std::string::npos ||
                line.find("Unknown option") != std::string::npos)
                throw EngineError("engine rejected option: " + line);
            if (line == "readyok") break;
        }
    }

    ~UciProcessSession() override {
        try {
            proc_.write_line("quit");
        } catch (const EngineError&) {
        }
    }

    Evaluation evaluate(const PositionRef& pos) override {
        require_playable(pos);
        int budget = config_.search_timeout_ms;
        if (config_.limit.kind == SearchLimit::Kind::MoveTime) budget += config_.limit.value;
        auto deadline = Clock::now() + std::chrono::milliseconds(budget);

        Evaluation result;
        send(pos.to_uci_command());
        send(config_.limit.to_go_command());
        result.raw.push_back("> " + pos.to_uci_command());
        result.raw.push_back("> " + config_.limit.to_go_command());

        std::optional<EngineScore> score;
        while (true) {
            std::string line = receive(deadline, "bestmove");
            if (line.rfind("info", 0) == 0) {
                if (auto s = parse_info_score(line)) {
                    score = s;
                    result.raw.push_back("< " + line);
                }
                continue;
            }
            if (line.rfind("bestmove", 0) == 0) {
                auto toks = split_ws(line);
                if (toks.size() < 2) throw EngineError("malformed bestmove line: " + line);
                result.best_move = toks[1];
                result.raw.push_back("< " + line);
                break;
            }
        }
        if (!score) throw EngineError("engine sent no score before bestmove");
        result.score = *score;
        return result;
    }

    const std::string& name() const override { return name_; }

private:
    void send(const std::string& line) {
        proc_.write_line(line);
        transcript_.push_back("> " + line);
    }
    std::string receive(Clock::time_point deadline, const std::string& what) {
        std::string line = proc_.read_line(deadline, what);
        transcript_.push_back("< " + line);
        return line;
    }

    EngineConfig config_;
    Subprocess proc_;
    std::string name_;
};

}  // namespace

std::unique_ptr<EngineSession> make_mock_session(MockTable table, std::string name) {
    return std::make_unique<MockSession>(std::move(table), std::move(name));
}

std::unique_ptr<EngineSession> start_session(const EngineConfig& config) {
    if (config.mate_cap <= 0) throw DomainError("mate_cap must be positive");
    if (config.is_mock()) {
        std::string base = config.mock_table_path;
        size_t slash = base.find_last_of('/');
        if (slash != std::string::npos) base = base.substr(slash + 1);
        return std::make_unique<MockSession>(load_mock_table(config.mock_table_path),
                                             "mock:" + base);
    }
    if (config.engine_path.empty()) throw DomainError("engine config names no engine and no mock");
    return std::make_unique<UciProcessSession>(config);
}

}  // namespace tiebreak::engine
