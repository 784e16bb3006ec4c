#include "tiebreak/game/game_tree.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "tiebreak/error.hpp"

namespace tiebreak::game {

namespace {

constexpr double kZeroSumTolerance = 1e-9;

// Portable uniform double in [lo, hi) from the top 53 bits.
double uniform(std::mt19937_64& rng, double lo, double hi) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

}  // namespace

GameTree::GameTree(std::vector<TreeNode> nodes, NodeId root, int num_players)
    : nodes_(std::move(nodes)), root_(root), num_players_(num_players) {
    int n = static_cast<int>(nodes_.size());
    if (n == 0) throw DomainError("game tree has no nodes");
    if (num_players_ < 1) throw DomainError("game tree needs at least one player");
    if (root_ < 0 || root_ >= n) throw DomainError("root node out of range");

    std::vector<int> parents(n, -1);
    for (int id = 0; id < n; ++id) {
        if (nodes_[id].id != id) throw DomainError("node ids must be contiguous 0..n-1");
        const TreeNode& node = nodes_[id];
        if (node.children.empty()) {
            if (static_cast<int>(node.payoffs.size()) != num_players_)
                throw DomainError("terminal node " + std::to_string(id) +
                                  " needs one payoff per player");
        } else {
            if (node.active_player < 0 || node.active_player >= num_players_)
                throw DomainError("node " + std::to_string(id) + " has no valid active player");
            for (NodeId c : node.children) {
                if (c < 0 || c >= n) throw DomainError("child id out of range");
                if (c == root_ || parents[c] != -1)
                    throw DomainError("node " + std::to_string(c) + " has two parents");
                parents[c] = id;
            }
        }
    }
    for (int id = 0; id < n; ++id)
        if (id != root_ && parents[id] == -1)
            throw DomainError("node " + std::to_string(id) + " is unreachable from the root");

    // Zero-sum: payoffs at every terminal sum to one shared constant.
    std::optional<double> constant;
    for (const TreeNode& node : nodes_) {
        if (!node.children.empty()) continue;
        double sum = 0;
        for (double p : node.payoffs) sum += p;
        if (!constant) constant = sum;
        else if (std::abs(sum - *constant) > kZeroSumTolerance)
            throw DomainError("terminal payoffs are not zero-sum (sums " +
                              std::to_string(*constant) + " vs " + std::to_string(sum) + ")");
    }
}

uint64_t GameTree::terminal_count() const {
    uint64_t count = 0;
    for (const TreeNode& node : nodes_)
        if (node.children.empty()) ++count;
    return count;
}

double GameTree::payoff_constant() const {
    for (const TreeNode& node : nodes_) {
        if (!node.children.empty()) continue;
        double sum = 0;
        for (double p : node.payoffs) sum += p;
        return sum;
    }
    throw DomainError("tree has no terminal nodes");
}

AIEvaluation AIEvaluation::scaled(double factor) const {
    AIEvaluation out = *this;
    for (auto& row : out.values_)
        for (double& v : row) v *= factor;
    return out;
}

std::vector<std::pair<NodeId, NodeId>> Play::actions_of(const GameTree& tree, PlayerId p) const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (size_t k = 0; k + 1 < path.size(); ++k)
        if (tree.active_player(path[k]) == p) out.emplace_back(path[k], path[k + 1]);
    return out;
}

NodeId ai_best_response(const GameTree& tree, const AIEvaluation& ai, NodeId node) {
    if (tree.is_terminal(node))
        throw DomainError("best response undefined at terminal node " + std::to_string(node));
    PlayerId player = tree.active_player(node);
    const auto& children = tree.children(node);
    NodeId best = children[0];
    double best_value = ai.value(player, best);
    for (NodeId c : children) {
        double v = ai.value(player, c);
        if (v > best_value) {
            best = c;
            best_value = v;
        }
    }
    return best;
}

std::vector<double> scoring_rule_f(const GameTree& tree, const AIEvaluation& ai,
                                   const ModifiedPlay& play) {
    std::vector<double> scores(tree.num_players(), 0.0);
    const auto& path = play.base.path;
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        NodeId x = path[k];
        PlayerId i = tree.active_player(x);
        NodeId chosen = play.chosen_at(k);
        NodeId best = ai_best_response(tree, ai, x);
        scores[i] += ai.value(i, best) - ai.value(i, chosen);
    }
    return scores;
}

ScoringMechanism tplv_mechanism() {
    return {"tplv", [](const GameTree& tree, const AIEvaluation& ai, const ModifiedPlay& play) {
                return scoring_rule_f(tree, ai, play);
            }};
}

ScoringMechanism fast_chess_proxy_mechanism(NodeId tiebreak_terminal, PlayerId winner) {
    return {"fastchess-demo",
            [tiebreak_terminal, winner](const GameTree& tree, const AIEvaluation&,
                                        const ModifiedPlay& play) {
                // Reached iff some effective action leads into the
                // designated terminal.
                bool reached = false;
                for (size_t k = 0; k + 1 < play.base.path.size(); ++k)
                    if (play.chosen_at(k) == tiebreak_terminal) reached = true;
                std::vector<double> f(tree.num_players(), reached ? 1.0 : 0.0);
                f[winner] = reached ? 0.0 : 1.0;
                return f;
            }};
}

ModifiedPlay modify_play(const GameTree& tree, const Play& play, NodeId node, NodeId action) {
    for (size_t k = 0; k + 1 < play.path.size(); ++k) {
        if (play.path[k] != node) continue;
        const auto& children = tree.children(node);
        if (std::find(children.begin(), children.end(), action) == children.end())
            throw DomainError("action " + std::to_string(action) + " is not a child of node " +
                              std::to_string(node));
        if (action == play.path[k + 1]) return ModifiedPlay::unmodified(play);
        return {play, node, action};
    }
    throw DomainError("node " + std::to_string(node) + " is not a decision node of the play");
}

std::vector<TspViolation> check_tsp_play(const ScoringMechanism& mechanism, const GameTree& tree,
                                         const AIEvaluation& ai, const Play& play,
                                         double tolerance) {
    std::vector<TspViolation> violations;
    std::vector<double> original = mechanism.score(tree, ai, ModifiedPlay::unmodified(play));
    for (size_t k = 0; k + 1 < play.path.size(); ++k) {
        NodeId x = play.path[k];
        PlayerId i = tree.active_player(x);
        NodeId best = ai_best_response(tree, ai, x);
        if (best == play.path[k + 1]) continue;  // deviation equals the play
        std::vector<double> deviated = mechanism.score(tree, ai, modify_play(tree, play, x, best));
        if (deviated[i] > original[i] + tolerance)
            violations.push_back({i, x, deviated[i], original[i], play.terminal()});
    }
    return violations;
}

std::vector<Play> enumerate_plays(const GameTree& tree) {
    std::vector<Play> plays;
    std::vector<NodeId> path{tree.root()};
    // Iterative DFS over the child index at each path depth.
    std::vector<size_t> cursor{0};
    while (!path.empty()) {
        NodeId here = path.back();
        if (tree.is_terminal(here)) {
            plays.push_back({path});
            path.pop_back();
            cursor.pop_back();
            continue;
        }
        const auto& kids = tree.children(here);
        if (cursor.back() >= kids.size()) {
            path.pop_back();
            cursor.pop_back();
            continue;
        }
        NodeId next = kids[cursor.back()++];
        path.push_back(next);
        cursor.push_back(0);
    }
    return plays;
}

std::vector<TspViolation> check_tsp_mechanism(const ScoringMechanism& mechanism,
                                              const GameTree& tree, const AIEvaluation& ai,
                                              const TspOptions& options) {
    uint64_t plays = tree.terminal_count();
    if (plays > options.max_plays)
        throw ResourceError("tree has " + std::to_string(plays) +
                            " plays, over the enumeration bound of " +
                            std::to_string(options.max_plays));
    std::vector<TspViolation> all;
    for (const Play& play : enumerate_plays(tree)) {
        auto v = check_tsp_play(mechanism, tree, ai, play, options.tolerance);
        all.insert(all.end(), v.begin(), v.end());
    }
    return all;
}

Play random_play(const GameTree& tree, std::mt19937_64& rng) {
    Play play;
    NodeId here = tree.root();
    play.path.push_back(here);
    while (!tree.is_terminal(here)) {
        const auto& kids = tree.children(here);
        here = kids[rng() % kids.size()];
        play.path.push_back(here);
    }
    return play;
}

RandomGame generate_random_tree(int depth, int branching, int num_players, uint64_t seed) {
    if (depth < 1) throw DomainError("depth must be positive");
    if (branching < 1) throw DomainError("branching must be positive");
    if (num_players < 1) throw DomainError("num_players must be positive");

    std::mt19937_64 rng(seed);
    std::vector<TreeNode> nodes;
    // Complete tree, breadth-first ids, players alternating by level.
    struct Pending {
        NodeId id;
        int level;
    };
    std::vector<Pending> frontier{{0, 0}};
    nodes.push_back({0, {}, 0, {}});
    size_t next = 0;
    while (next < frontier.size()) {
        Pending p = frontier[next++];
        if (p.level == depth) {
            std::vector<double> payoffs(num_players);
            double sum = 0;
            for (int i = 0; i + 1 < num_players; ++i) {
                payoffs[i] = uniform(rng, -1.0, 1.0);
                sum += payoffs[i];
            }
            payoffs[num_players - 1] = -sum;  // zero-sum with c = 0
            nodes[p.id].payoffs = std::move(payoffs);
            nodes[p.id].active_player = -1;
            continue;
        }
        nodes[p.id].active_player = p.level % num_players;
        for (int b = 0; b < branching; ++b) {
            NodeId child = static_cast<NodeId>(nodes.size());
            nodes.push_back({child, {}, 0, {}});
            nodes[p.id].children.push_back(child);
            frontier.push_back({child, p.level + 1});
        }
    }

    GameTree tree(std::move(nodes), 0, num_players);
    AIEvaluation eval(num_players, tree.size());
    for (PlayerId p = 0; p < num_players; ++p)
        for (NodeId n = 0; n < tree.size(); ++n) eval.set(p, n, uniform(rng, -10.0, 10.0));
    return {std::move(tree), std::move(eval)};
}

TreeFixture parse_tree_fixture(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("bad tree fixture: ") + e.what(), 1, 1);
    }
    try {
        int num_players = doc.at("num_players").get<int>();
        NodeId root = doc.at("root").get<NodeId>();
        std::vector<TreeNode> nodes(doc.at("nodes").size());
        AIEvaluation eval(num_players, static_cast<int>(nodes.size()));
        for (const auto& jn : doc.at("nodes")) {
            TreeNode node;
            node.id = jn.at("id").get<NodeId>();
            if (node.id < 0 || node.id >= static_cast<int>(nodes.size()))
                throw DomainError("node id out of range in fixture");
            if (jn.contains("children")) node.children = jn["children"].get<std::vector<NodeId>>();
            if (node.children.empty())
                node.payoffs = jn.at("payoffs").get<std::vector<double>>();
            else
                node.active_player = jn.at("player").get<PlayerId>();
            auto values = jn.at("values").get<std::vector<double>>();
            if (static_cast<int>(values.size()) != num_players)
                throw DomainError("fixture node needs one value per player");
            for (int p = 0; p < num_players; ++p) eval.set(p, node.id, values[p]);
            nodes[node.id] = std::move(node);
        }
        TreeFixture fixture{GameTree(std::move(nodes), root, num_players), std::move(eval),
                            std::nullopt, std::nullopt};
        if (doc.contains("tiebreak_terminal"))
            fixture.tiebreak_terminal = doc["tiebreak_terminal"].get<NodeId>();
        if (doc.contains("tiebreak_winner"))
            fixture.tiebreak_winner = doc["tiebreak_winner"].get<PlayerId>();
        return fixture;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad tree fixture: ") + e.what(), 1, 1);
    }
}

std::string emit_tree_fixture(const TreeFixture& fixture) {
    nlohmann::json doc;
    doc["num_players"] = fixture.tree.num_players();
    doc["root"] = fixture.tree.root();
    doc["nodes"] = nlohmann::json::array();
    for (int id = 0; id < fixture.tree.size(); ++id) {
        nlohmann::json jn;
        jn["id"] = id;
        if (fixture.tree.is_terminal(id)) {
            jn["payoffs"] = fixture.tree.payoffs(id);
        } else {
            jn["player"] = fixture.tree.active_player(id);
            jn["children"] = fixture.tree.children(id);
        }
        std::vector<double> values;
        for (PlayerId p = 0; p < fixture.tree.num_players(); ++p)
            values.push_back(fixture.evaluation.value(p, id));
        jn["values"] = values;
        doc["nodes"].push_back(jn);
    }
    if (fixture.tiebreak_terminal) doc["tiebreak_terminal"] = *fixture.tiebreak_terminal;
    if (fixture.tiebreak_winner) doc["tiebreak_winner"] = *fixture.tiebreak_winner;
    return doc.dump(2) + "\n";
}

TreeFixture draw_offer_demo_fixture() {
    // Player 0 = the side pressing for the tiebreak's opponent (White),
    // player 1 = the side that is better placed in fast chess (Black) and
    // holds an advantage at the offer node. Node 4 is the agreed draw that
    // sends the match to the fast tiebreak.
    std::vector<TreeNode> nodes(7);
    nodes[0] = {0, {1, 2}, 0, {}};
    nodes[1] = {1, {3, 4}, 1, {}};
    nodes[2] = {2, {}, -1, {0.0, 1.0}};
    nodes[3] = {3, {5, 6}, 0, {}};
    nodes[4] = {4, {}, -1, {0.5, 0.5}};
    nodes[5] = {5, {}, -1, {0.5, 0.5}};
    nodes[6] = {6, {}, -1, {0.0, 1.0}};
    GameTree tree(std::move(nodes), 0, 2);

    AIEvaluation eval(2, tree.size());
    const double black_values[7] = {0.9, 1.0, 2.0, 1.0, 0.0, 0.0, 3.0};
    for (NodeId n = 0; n < tree.size(); ++n) {
        eval.set(1, n, black_values[n]);
        eval.set(0, n, -black_values[n]);
    }
    return {std::move(tree), std::move(eval), 4, 1};
}

Play draw_offer_demo_play() { return Play{{0, 1, 4}}; }

}  // namespace tiebreak::game
