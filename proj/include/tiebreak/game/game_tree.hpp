#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tiebreak::game {

using NodeId = int;
using PlayerId = int;

struct TreeNode {
    NodeId id = -1;
    std::vector<NodeId> children;  // empty = terminal
    PlayerId active_player = -1;   // meaningful for non-terminals
    std::vector<double> payoffs;   // per player, terminals only

    bool operator==(const TreeNode&) const = default;
};

// Finite extensive-form zero-sum game tree. Immutable after construction;
// the constructor validates tree structure and the zero-sum condition.
class GameTree {
public:
    GameTree(std::vector<TreeNode> nodes, NodeId root, int num_players);

    NodeId root() const { return root_; }
    int num_players() const { return num_players_; }
    int size() const { return static_cast<int>(nodes_.size()); }

    bool is_terminal(NodeId n) const { return nodes_[n].children.empty(); }
    const std::vector<NodeId>& children(NodeId n) const { return nodes_[n].children; }
    PlayerId active_player(NodeId n) const { return nodes_[n].active_player; }
    const std::vector<double>& payoffs(NodeId n) const { return nodes_[n].payoffs; }
    const TreeNode& node(NodeId n) const { return nodes_[n]; }

    uint64_t terminal_count() const;
    // The constant c with payoff sums == c at every terminal.
    double payoff_constant() const;

    bool operator==(const GameTree&) const = default;

private:
    std::vector<TreeNode> nodes_;
    NodeId root_;
    int num_players_;
};

// Per-player node valuation (the engine abstraction): values[player][node].
class AIEvaluation {
public:
    AIEvaluation() = default;
    AIEvaluation(int num_players, int num_nodes)
        : values_(num_players, std::vector<double>(num_nodes, 0.0)) {}

    double value(PlayerId p, NodeId n) const { return values_[p][n]; }
    void set(PlayerId p, NodeId n, double v) { values_[p][n] = v; }
    int num_players() const { return static_cast<int>(values_.size()); }
    int num_nodes() const { return values_.empty() ? 0 : static_cast<int>(values_[0].size()); }

    AIEvaluation scaled(double factor) const;

    bool operator==(const AIEvaluation&) const = default;

private:
    std::vector<std::vector<double>> values_;
};

// A root-to-terminal path through the tree.
struct Play {
    std::vector<NodeId> path;

    NodeId terminal() const { return path.back(); }
    // The player's (decision node, chosen successor) pairs, in path order.
    std::vector<std::pair<NodeId, NodeId>> actions_of(const GameTree& tree, PlayerId p) const;

    bool operator==(const Play&) const = default;
};

// A play with at most one action replaced. A deviated play generally is
// not itself a play, so it stays represented as base + deviation.
struct ModifiedPlay {
    Play base;
    std::optional<NodeId> deviation_node;
    NodeId deviation_action = -1;

    static ModifiedPlay unmodified(Play p) { return {std::move(p), std::nullopt, -1}; }

    // Chosen successor of base.path[k] with the deviation applied.
    NodeId chosen_at(size_t k) const {
        if (deviation_node && *deviation_node == base.path[k]) return deviation_action;
        return base.path[k + 1];
    }

    bool operator==(const ModifiedPlay&) const = default;
};

using ScoreFn =
    std::function<std::vector<double>(const GameTree&, const AIEvaluation&, const ModifiedPlay&)>;

// Per-player quality scores for (modified) plays; lower is better.
struct ScoringMechanism {
    std::string name;
    ScoreFn score;
};

// The child of `node` maximizing the active player's evaluation; ties go to
// the lowest child index. Throws DomainError on terminals.
NodeId ai_best_response(const GameTree& tree, const AIEvaluation& ai, NodeId node);

// Per player: sum over that player's decision nodes of
// (best-response value - chosen value); the deviation replaces the chosen
// action at the deviation node.
std::vector<double> scoring_rule_f(const GameTree& tree, const AIEvaluation& ai,
                                   const ModifiedPlay& play);

ScoringMechanism tplv_mechanism();

// Toy fast-chess tiebreak: scores depend only on whether the play reaches
// the designated terminal, where `winner` wins the tiebreak outright.
ScoringMechanism fast_chess_proxy_mechanism(NodeId tiebreak_terminal, PlayerId winner);

// Replaces the action at `node` (which must lie on the play's path) with
// `action` (which must be a child of it).
ModifiedPlay modify_play(const GameTree& tree, const Play& play, NodeId node, NodeId action);

struct TspViolation {
    PlayerId player = -1;
    NodeId node = -1;
    double f_with_best_response = 0;
    double f_original = 0;
    NodeId play_terminal = -1;
};

struct TspOptions {
    double tolerance = 1e-9;
    uint64_t max_plays = 1'000'000;
};

// For every player and decision node on the path, checks that switching the
// action to the AI best response does not increase that player's score.
// Empty result = the play is tiebreak strategyproof under the mechanism.
std::vector<TspViolation> check_tsp_play(const ScoringMechanism& mechanism, const GameTree& tree,
                                         const AIEvaluation& ai, const Play& play,
                                         double tolerance = 1e-9);

// Enumerates every play of the tree and aggregates check_tsp_play verdicts.
// Throws ResourceError if the play count exceeds options.max_plays.
std::vector<TspViolation> check_tsp_mechanism(const ScoringMechanism& mechanism,
                                              const GameTree& tree, const AIEvaluation& ai,
                                              const TspOptions& options = {});

std::vector<Play> enumerate_plays(const GameTree& tree);
Play random_play(const GameTree& tree, std::mt19937_64& rng);

struct RandomGame {
    GameTree tree;
    AIEvaluation evaluation;
};

// Complete tree of the given depth/branching with players alternating by
// level, zero-sum terminal payoffs and bounded evaluations. Deterministic
// for a fixed seed.
RandomGame generate_random_tree(int depth, int branching, int num_players, uint64_t seed);

// JSON fixture: tree, evaluations and the optional designated tiebreak
// terminal consumed by the fast-chess proxy mechanism.
struct TreeFixture {
    GameTree tree;
    AIEvaluation evaluation;
    std::optional<NodeId> tiebreak_terminal;
    std::optional<PlayerId> tiebreak_winner;
};

TreeFixture parse_tree_fixture(const std::string& json_text);
std::string emit_tree_fixture(const TreeFixture& fixture);

// Bundled model of a championship game where the trailing side can secure a
// favorable fast-chess tiebreak by offering a draw from a winning position.
TreeFixture draw_offer_demo_fixture();
// The historical line of that model: main line, then the draw offer.
Play draw_offer_demo_play();

}  // namespace tiebreak::game
