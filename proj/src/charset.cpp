#include "bplearn/charset.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace bpl {

namespace {

std::optional<Config> annotate(const Protocol& p, int n, const Word& w) {
    auto r = run(p, n, w);
    if (!r.feasible) return std::nullopt;
    return r.config;
}

// node v is a leaf when some strict prefix u of its parent repeats the
// parent's annotation; the root never is
bool is_leaf(const ExplorationTree& t, const Word& w) {
    if (w.empty()) return false;
    Word v(w.begin(), w.end() - 1);
    const auto& pv = t.nodes.at(v).annotation;
    if (!pv) return true;
    for (std::size_t len = 0; len < v.size(); ++len) {
        Word u(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(len));
        const auto& pu = t.nodes.at(u).annotation;
        if (pu && *pu == *pv) return true;
    }
    return false;
}

void expand(const Protocol& p, ExplorationTree& t, Budget b) {
    std::deque<Word> work;
    for (const auto& [w, node] : t.nodes) work.push_back(w);
    while (!work.empty()) {
        Word w = std::move(work.front());
        work.pop_front();
        auto& node = t.nodes.at(w);
        node.leaf = !node.annotation || is_leaf(t, w);
        if (node.leaf) continue;
        Word c = w;
        c.push_back(0);
        for (ActionId a = 0; a < p.num_actions(); ++a) {
            c.back() = a;
            if (t.nodes.count(c)) continue;
            if (t.nodes.size() >= b.nodes) throw BudgetExceeded("exploration tree: node budget exhausted");
            t.nodes.emplace(c, TreeNode{annotate(p, t.level, c), false});
            work.push_back(c);
        }
    }
}

}  // namespace

ExplorationTree initial_tree(const Protocol& p) {
    ExplorationTree t;
    t.level = 0;
    t.nodes.emplace(Word{}, TreeNode{initial_config(p, 0), false});
    expand(p, t, Budget{});
    return t;
}

ExplorationTree advance_tree(const Protocol& p, const ExplorationTree& t, Budget b) {
    ExplorationTree next;
    next.level = t.level + 1;
    for (const auto& [w, node] : t.nodes) next.nodes.emplace(w, TreeNode{annotate(p, next.level, w), false});
    expand(p, next, b);
    return next;
}

bool trees_equal(const ExplorationTree& t1, const ExplorationTree& t2) {
    if (t1.nodes.size() != t2.nodes.size()) return false;
    for (auto i = t1.nodes.begin(), j = t2.nodes.begin(); i != t1.nodes.end(); ++i, ++j)
        if (i->first != j->first) return false;
    return true;
}

std::string dump_tree(const Protocol& p, const ExplorationTree& t) {
    std::string out;
    for (const auto& [w, node] : t.nodes) {
        out += p.format(w);
        out += '\t';
        out += node.annotation ? format_config(*node.annotation) : std::string("BOT");
        out += '\n';
    }
    return out;
}

CharacteristicSet generate_cs(const Protocol& p, const CsOptions& opts) {
    const Budget b = opts.budget;
    const int level_cap = opts.level_cap;
    CharacteristicSet cs;
    cs.trees.push_back(initial_tree(p));
    for (;;) {
        const auto& last = cs.trees.back();
        if (last.level >= level_cap)
            throw NoFixpointWithinCap("no tree fixpoint up to level " + std::to_string(level_cap), last.level);
        cs.trees.push_back(advance_tree(p, last, b));
        if (trees_equal(cs.trees[cs.trees.size() - 2], cs.trees.back())) break;
    }
    cs.final_level = cs.trees.back().level;

    // positives at the first level they show up, negatives at the last level
    // they are still negative
    std::map<Word, int> pos, neg;
    for (const auto& t : cs.trees) {
        if (t.level == 0) continue;
        for (const auto& [w, node] : t.nodes) {
            if (node.annotation) pos.emplace(w, t.level);
            else neg[w] = t.level;
        }
    }
    cs.sample.alphabet = p.action_names;
    for (const auto& [w, n] : pos) cs.sample.entries.push_back({w, n, true});
    for (const auto& [w, n] : neg) cs.sample.entries.push_back({w, n, false});

    // Two nodes with equal vectors only look alike through one letter of
    // lookahead in the tree; replaying the twin's subtree below the repeat
    // pins down the responses that distinguish them later.
    if (opts.mode == CsMode::Replay) {
        std::set<std::pair<Word, int>> added;
        for (const auto& t : cs.trees) {
            if (t.level == 0) continue;
            for (const auto& [v, node] : t.nodes) {
                if (!node.annotation || v.empty()) continue;
                std::optional<Word> twin;
                // deepest twin: its subtree is the smallest
                for (std::size_t len = v.size(); len-- > 0 && !twin;) {
                    Word u(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(len));
                    const auto& pu = t.nodes.at(u).annotation;
                    if (pu && *pu == *node.annotation) twin = u;
                }
                if (!twin) continue;
                for (auto it = t.nodes.upper_bound(*twin); it != t.nodes.end(); ++it) {
                    const Word& us = it->first;
                    if (us.size() <= twin->size() || !std::equal(twin->begin(), twin->end(), us.begin())) break;
                    if (opts.replay_depth >= 0 && us.size() - twin->size() > static_cast<std::size_t>(opts.replay_depth))
                        continue;
                    Word vs = v;
                    vs.insert(vs.end(), us.begin() + static_cast<std::ptrdiff_t>(twin->size()), us.end());
                    if (t.nodes.count(vs) || !added.insert({vs, t.level}).second) continue;
                    if (added.size() >= b.nodes) throw BudgetExceeded("replay words: budget exhausted");
                    cs.sample.entries.push_back({vs, t.level, feasible(p, t.level, vs)});
                }
            }
        }
    }
    cs.sample = normalize(cs.sample);
    return cs;
}

}  // namespace bpl
