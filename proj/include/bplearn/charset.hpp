#pragma once

#include "bplearn/protocol.hpp"
#include "bplearn/samples.hpp"

namespace bpl {

struct NoFixpointWithinCap : Error {
    NoFixpointWithinCap(const std::string& msg, int level) : Error(msg), level(level) {}
    int level;
};

struct TreeNode {
    std::optional<Config> annotation;   // nullopt = bottom
    bool leaf = false;
};

// Nodes keyed by word. Children of a non-leaf positive node are all present.
struct ExplorationTree {
    int level = 0;
    std::map<Word, TreeNode> nodes;
};

ExplorationTree initial_tree(const Protocol& p);   // T_0
ExplorationTree advance_tree(const Protocol& p, const ExplorationTree& t, Budget b = {});
bool trees_equal(const ExplorationTree& t1, const ExplorationTree& t2);
std::string dump_tree(const Protocol& p, const ExplorationTree& t);

struct CharacteristicSet {
    Sample sample;
    int final_level = 0;
    std::vector<ExplorationTree> trees;   // T_0 .. T_final
};

enum class CsMode {
    Literal,   // only the tree nodes
    Replay,    // plus, below each repeating node v with twin u, every word v.s for u.s in the tree
};

struct CsOptions {
    int level_cap = 16;
    CsMode mode = CsMode::Replay;
    int replay_depth = 3;   // suffix length cap for replayed words, < 0 = unbounded
    Budget budget{};
};

CharacteristicSet generate_cs(const Protocol& p, const CsOptions& opts = {});

}  // namespace bpl
