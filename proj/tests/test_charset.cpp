#include <deque>
#include <unordered_map>

#include "bplearn/charset.hpp"
#include "bplearn/random_bp.hpp"
#include "doctest.h"

using namespace bpl;

namespace {

std::set<std::string> node_names(const Protocol& p, const ExplorationTree& t) {
    std::set<std::string> out;
    for (const auto& [w, n] : t.nodes) out.insert(p.format(w));
    return out;
}

// every configuration reachable in B^n, with one shortest word for it
std::unordered_map<Config, Word, ConfigHash> reachable(const Protocol& p, int n) {
    std::unordered_map<Config, Word, ConfigHash> seen;
    std::deque<Config> q{initial_config(p, n)};
    seen[q.front()] = {};
    while (!q.empty()) {
        Config c = q.front();
        q.pop_front();
        for (ActionId a : enabled_actions(p, c)) {
            Config d = step(p, c, a);
            if (seen.count(d)) continue;
            Word w = seen[c];
            w.push_back(a);
            seen[d] = w;
            q.push_back(d);
        }
    }
    return seen;
}

}  // namespace

TEST_CASE("B1 tree levels by hand") {
    auto b1 = twin_b1();
    auto t0 = initial_tree(b1);
    CHECK(node_names(b1, t0) == std::set<std::string>{"", "a", "b"});
    auto t1 = advance_tree(b1, t0);
    CHECK(node_names(b1, t1) == std::set<std::string>{"", "a", "b", "a a", "a b"});
    CHECK(*t1.nodes.at({0}).annotation == Config{1, 0});
    CHECK(t1.nodes.at({0, 0}).leaf);
    CHECK(t1.nodes.at({0, 1}).leaf);
    CHECK_FALSE(t1.nodes.at({1}).annotation);

    auto t2 = advance_tree(b1, t1);
    CHECK_FALSE(t2.nodes.at({1}).annotation);
    CHECK(*t2.nodes.at({0, 1}).annotation == Config{1, 1});
    CHECK(node_names(b1, t2) ==
          std::set<std::string>{"", "a", "b", "a a", "a b", "a a a", "a a b", "a b a", "a b b"});
    CHECK_FALSE(trees_equal(t1, t2));
    CHECK(trees_equal(t2, t2));

    // at n=3 "a" already gives [1,2], which "a a" repeats
    auto t3 = advance_tree(b1, t2);
    CHECK(*t3.nodes.at({0}).annotation == Config{1, 2});
    CHECK(trees_equal(t2, t3));
    CHECK(trees_equal(t3, advance_tree(b1, t3)));

    auto cs = generate_cs(b1);
    CHECK(cs.final_level == 3);
    CHECK(consistent_with(cs.sample, b1).consistent);
    auto dump = dump_tree(b1, t1);
    CHECK(dump.find("b\tBOT") != std::string::npos);
    CHECK(dump.find("a a\t1,0") != std::string::npos);
}

TEST_CASE("single state loop") {
    ProtocolBuilder b;
    b.st("s");
    b.send("a", "s", "s");
    auto p = b.build();
    auto cs = generate_cs(p);
    CHECK(cs.final_level == 2);
    for (const auto& e : cs.sample.entries) {
        CHECK(e.label);
        CHECK(e.n == 1);
    }
}

TEST_CASE("no fixpoint within cap") {
    auto b1 = twin_b1();
    CHECK_THROWS_AS(generate_cs(b1, {.level_cap = 2}), NoFixpointWithinCap);
}

TEST_CASE("tree covers every reachable configuration") {
    Rng rng(5);
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        auto p = random_protocol(rng, 1 + i % 3, 3);
        if (!detect_cutoff(p, 4)) continue;
        CharacteristicSet cs;
        try {
            cs = generate_cs(p, {.level_cap = 10});
        } catch (const NoFixpointWithinCap&) {
            continue;
        }
        ++checked;
        CHECK(consistent_with(cs.sample, p).consistent);
        for (const auto& t : cs.trees) {
            if (t.level == 0) continue;
            std::set<Config> present;
            for (const auto& [w, node] : t.nodes)
                if (node.annotation) present.insert(*node.annotation);
            for (const auto& [c, w] : reachable(p, t.level)) CHECK(present.count(c));
        }
    }
    CHECK(checked > 10);
}
