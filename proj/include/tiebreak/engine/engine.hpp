#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tiebreak/chess/board.hpp"
#include "tiebreak/chess/types.hpp"

namespace tiebreak::engine {

enum class ScoreKind { Centipawns, MateIn };
enum class Perspective { SideToMove, White };

struct EngineScore {
    ScoreKind kind = ScoreKind::Centipawns;
    int value = 0;  // centipawns, or signed moves-to-mate (never 0 for mate)
    Perspective perspective = Perspective::SideToMove;

    bool operator==(const EngineScore&) const = default;
};

// Converts an engine score to pawn units from `player`'s point of view.
// Centipawn magnitudes are clamped to mate_cap; mate scores map to
// +/-mate_cap. normalize_eval(s, White, .) == -normalize_eval(s, Black, .).
double normalize_eval(const EngineScore& score, chess::Color player, chess::Color side_to_move,
                      double mate_cap);

struct SearchLimit {
    enum class Kind { Depth, MoveTime };
    Kind kind = Kind::Depth;
    int value = 12;  // plies, or milliseconds

    std::string to_go_command() const;
};

struct EngineConfig {
    std::string engine_path;      // empty when a mock table is used
    std::string mock_table_path;  // empty when a real engine is used
    SearchLimit limit;
    std::vector<std::pair<std::string, std::string>> options;
    double mate_cap = 10.0;
    int handshake_timeout_ms = 10000;
    int search_timeout_ms = 120000;

    bool is_mock() const { return !mock_table_path.empty(); }
    std::string settings_string() const;
};

// A position given as start (or FEN) plus coordinate moves.
struct PositionRef {
    std::optional<std::string> fen;  // nullopt = standard initial position
    std::vector<std::string> moves;

    static PositionRef startpos(std::vector<std::string> moves = {});
    static PositionRef from_fen(std::string fen, std::vector<std::string> moves = {});

    // Replays the moves, validating legality.
    chess::Position resolve() const;
    std::string to_uci_command() const;
};

struct Evaluation {
    std::string best_move;  // coordinate notation
    EngineScore score;
    std::vector<std::string> raw;  // protocol lines behind this result
};

class EngineSession {
public:
    virtual ~EngineSession() = default;

    // Searches the position at the configured limit. Throws EngineError on
    // protocol or process failure, DomainError if the game is over.
    virtual Evaluation evaluate(const PositionRef& pos) = 0;

    virtual const std::string& name() const = 0;
    const std::vector<std::string>& transcript() const { return transcript_; }

protected:
    std::vector<std::string> transcript_;
};

// Mock engine: a deterministic FEN-keyed response table. File format, one
// entry per line (blank lines and '#' comments skipped):
//   <FEN> | <bestmove> | cp <centipawns>
//   <FEN> | <bestmove> | mate <moves>
// Scores are from the side to move's perspective.
struct MockEntry {
    std::string best_move;
    EngineScore score;
};
using MockTable = std::map<std::string, MockEntry>;

MockTable parse_mock_table(const std::string& text);
MockTable load_mock_table(const std::string& path);
std::unique_ptr<EngineSession> make_mock_session(MockTable table, std::string name);

// Spawns a UCI engine process or opens the mock table and completes the
// protocol handshake.
std::unique_ptr<EngineSession> start_session(const EngineConfig& config);

std::string engine_fingerprint(const std::string& name, const EngineConfig& config);

}  // namespace tiebreak::engine
