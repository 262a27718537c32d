#include "bplearn/io.hpp"
#include "bplearn/random_bp.hpp"
#include "doctest.h"

using namespace bpl;

namespace {

const char* kB1Missing = R"({
  "format": 1,
  "initial": "s0",
  "states": ["s0", "s1"],
  "actions": {
    "a": {"send": {"from": "s0", "to": "s0"}, "recv": {"s0": "s1"}},
    "b": {"send": {"from": "s1", "to": "s0"}, "recv": {"s0": "s1", "s1": "s1"}}
  }
})";

const char* kTwoSends = R"({
  "initial": "s0",
  "states": ["s0", "s1"],
  "actions": {
    "a": {"send": {"from": "s0", "to": "s0"}, "send": {"from": "s1", "to": "s1"},
          "recv": {"s0": "s1", "s1": "s1"}}
  }
})";

}  // namespace

TEST_CASE("protocol documents") {
    const Protocol b1 = twin_b1();
    const std::string text = serialize_bp(b1);
    CHECK(parse_bp(text) == b1);
    CHECK(serialize_bp(parse_bp(text)) == text);
    CHECK(text.find("\"action_order\"") < text.find("\"actions\""));

    Rng rng(3);
    for (int i = 0; i < 30; ++i) {
        const Protocol p = random_protocol(rng, 1 + i % 4, 4);
        CHECK(parse_bp(serialize_bp(p)) == p);
    }

    try {
        parse_bp(kB1Missing);
        FAIL("no error");
    } catch (const TotalityError& e) {
        CHECK(e.action == "a");
        CHECK(e.state == "s1");
    }
    try {
        parse_bp(kTwoSends);
        FAIL("no error");
    } catch (const DuplicateSend& e) {
        CHECK(e.action == "a");
    }
    try {
        parse_bp("{\n  \"states\": [\"s0\",\n  }");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }
    // a state nobody sends from
    std::string hidden = serialize_bp(twin_b2());
    hidden.replace(hidden.find("\"from\": \"t1\""), 12, "\"from\": \"t0\"");
    CHECK_THROWS_WITH_AS(parse_bp(hidden), doctest::Contains("hidden-state t1"), InvalidProtocol);
}

TEST_CASE("sample documents") {
    auto one = parse_sample("a\t1\tT\n");
    REQUIRE(one.sample.entries.size() == 1);
    CHECK(one.sample.describe(one.sample.entries[0]) == "(a, 1, T)");

    auto mixed = parse_sample("# comment\na b\t2\tT\na b\t1\tF\n\n");
    CHECK(mixed.sample.entries.size() == 2);

    try {
        parse_sample("a\t2\tT\nb\t1\tT\na\t3\tF\n");
        FAIL("no error");
    } catch (const Contradiction& e) {
        CHECK(e.first == 1);
        CHECK(e.second == 3);
    }
    auto noted = parse_sample("a\t1\tT\na\t2\tT\n");
    CHECK(noted.sample.entries.size() == 1);
    CHECK(noted.notes.size() == 1);

    CHECK_THROWS_AS(parse_sample("a\t0\tT\n"), ParseError);
    CHECK_THROWS_AS(parse_sample("a\t1\tX\n"), ParseError);
    CHECK_THROWS_AS(parse_sample("a 1 T\n"), ParseError);

    // empty word, alphabet order kept
    auto eps = parse_sample("# alphabet: b a\n\t1\tT\na\t1\tF\n");
    CHECK(eps.sample.alphabet == std::vector<std::string>{"b", "a"});
    const std::string text = serialize_sample(eps.sample);
    CHECK(serialize_sample(parse_sample(text).sample) == text);
}

TEST_CASE("dfa, dfa sample and cnf documents") {
    const Dfa d{{"0", "1"}, {"q0", "q1"}, 0, {{0, 1}, {0, 1}}, {0, 1}};
    const std::string text = serialize_dfa(d);
    const Dfa back = parse_dfa(text);
    CHECK(back.states == d.states);
    CHECK(back.delta == d.delta);
    CHECK(back.accepting == d.accepting);
    CHECK(serialize_dfa(back) == text);

    auto ds = parse_dfa_sample("1\tT\n0 1 0\tF\n\tF\n");
    REQUIRE(ds.size() == 3);
    CHECK(ds[1].first == std::vector<std::string>{"0", "1", "0"});
    CHECK(ds[2].first.empty());

    auto phi = parse_cnf("c tiny\np cnf 3 2\n1 2 3 0\n-1 -2\n-3 0\n");
    CHECK(phi.num_vars == 3);
    CHECK(phi.clauses.size() == 2);
    CHECK_FALSE(phi.positive(1));
    CHECK_THROWS_WITH_AS(parse_cnf("p cnf 3 1\n1 -2 3 0\n"), doctest::Contains("mixed polarity"), ParseError);
    CHECK_THROWS_AS(parse_cnf("p cnf 3 1\n1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse_cnf("p cnf 3 2\n1 2 3 0\n"), ParseError);
}
