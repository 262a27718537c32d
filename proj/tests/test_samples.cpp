#include "bplearn/charset.hpp"
#include "bplearn/random_bp.hpp"
#include "bplearn/samples.hpp"
#include "doctest.h"

using namespace bpl;

namespace {
Sample make(std::initializer_list<std::tuple<const char*, int, bool>> xs) {
    Sample s;
    for (auto [w, n, l] : xs) s.add(w, n, l);
    return s;
}
}  // namespace

TEST_CASE("consistent_with") {
    auto b1 = twin_b1();
    CHECK(consistent_with(make({{"a", 1, true}, {"b", 1, false}, {"a b", 2, true}}), b1).consistent);
    auto r = consistent_with(make({{"b", 1, true}}), b1);
    CHECK_FALSE(r.consistent);
    CHECK(r.violations == std::vector<std::size_t>{0});
    CHECK(consistent_with(Sample{}, b1).consistent);
    CHECK_THROWS_AS(consistent_with(make({{"z", 1, true}}), b1), UnknownAction);
}

TEST_CASE("positive/negative sets") {
    auto pn = positive_negative_sets(make({{"a", 1, true}, {"a", 2, true}}));
    CHECK(pn.min_positive.at({0}) == 1);
    auto pn2 = positive_negative_sets(make({{"a b", 1, false}, {"a b", 3, false}}));
    CHECK(pn2.max_negative.at({0, 1}) == 3);

    auto cs = generate_cs(twin_b1());
    auto pn3 = positive_negative_sets(cs.sample);
    for (const auto& w : pn3.P.at(1))
        for (ActionId x : w) CHECK(cs.sample.alphabet[x] == "a");
    CHECK(pn3.min_positive.at(cs.sample.alphabet[0] == "a" ? Word{0, 1} : Word{1, 0}) == 2);
}

TEST_CASE("apartness and similarity") {
    auto s = make({{"a", 1, true}, {"b", 1, false}});
    CHECK(apart(s, 0, 1));
    CHECK(apart(s, 1, 0));
    CHECK_FALSE(apart(make({{"a", 1, true}, {"b", 2, true}}), 0, 1));
    // n' < n gives no witness
    CHECK_FALSE(apart(make({{"a", 2, true}, {"b", 1, false}}), 0, 1));

    auto cs = generate_cs(twin_b1());
    CHECK(apart(cs.sample, 0, 1));
    auto classes = similarity_partition(cs.sample);
    CHECK(classes == std::vector<std::vector<ActionId>>{{0}, {1}});
    CHECK(similarity_partition(make({{"a", 1, true}})) == std::vector<std::vector<ActionId>>{{0}});

    // a ~ b, b ~ c, a apart c
    auto bad = make({{"a", 1, true}, {"b", 1, true}, {"c", 1, true}, {"x a", 1, true}, {"x c", 1, false}});
    try {
        similarity_partition(bad);
        FAIL("expected NotTransitive");
    } catch (const NotTransitive& e) {
        CHECK(e.a == bad.find("a"));
        CHECK(e.c == bad.find("c"));
    }
}

TEST_CASE("normalize") {
    auto n1 = normalize(make({{"a", 1, true}, {"a", 2, true}}));
    CHECK(n1.entries == std::vector<SampleEntry>{{{0}, 1, true}});
    auto n2 = normalize(make({{"b", 3, false}, {"b", 1, false}}));
    CHECK(n2.entries == std::vector<SampleEntry>{{{0}, 3, false}});
    auto n3 = normalize(make({{"a", 2, true}, {"a", 1, false}}));
    CHECK(n3.entries.size() == 2);
    CHECK_THROWS_AS(normalize(make({{"a", 2, true}, {"a", 3, false}})), Contradiction);
    CHECK(make({{"a b", 1, true}, {"c", 2, false}}).size() == 3);

    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        auto p = random_protocol(rng, 3, 3);
        auto q = random_protocol(rng, 3, 3);
        Sample s;
        for (int j = 0; j < 12; ++j) {
            Word w = random_walk(rng, p, 1 + j % 3, 1 + j % 4);
            int n = 1 + static_cast<int>(rng() % 3);
            s.add(p, w, n, feasible(p, n, w));
        }
        auto ns = normalize(s);
        CHECK(consistent_with(ns, q).consistent == consistent_with(s, q).consistent);
        CHECK(consistent_with(ns, p).consistent);
    }
}
