#include "bplearn/charset.hpp"
#include "bplearn/inference.hpp"
#include "bplearn/random_bp.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bpl;

namespace {
Sample make(std::initializer_list<std::tuple<const char*, int, bool>> xs) {
    Sample s;
    for (auto [w, n, l] : xs) s.add(w, n, l);
    return s;
}

}  // namespace

TEST_CASE("build_constraints shapes") {
    auto p1 = build_constraints(make({{"a", 1, true}}), 1);
    CHECK(p1.count_family(3) == 1);
    CHECK(p1.count_family(4) == 1);
    CHECK(p1.count_family(5) == 1);
    CHECK(p1.count_family(1) == 0);

    auto s2 = make({{"a", 1, true}, {"b", 1, false}});
    auto p2 = build_constraints(s2, 2, {Mode::Iprime, 0});
    // b is not in A_S, so no apartness constraint mentions it
    CHECK(p2.count_family(1) == 0);
    CHECK(p2.count_family(2) == 2);
    CHECK(apart(s2, 0, 1));

    // CS of B1: families 4/5 once per extreme entry
    auto cs = generate_cs(twin_b1());
    auto prog = build_constraints(cs.sample, 2);
    CHECK(prog.count_family(4) == static_cast<int>(cs.sample.entries.size()));
    CHECK(prog.count_family(5) == static_cast<int>(cs.sample.entries.size()));
    CHECK(prog.count_family(1) == 1);   // a apart b
    CHECK(prog.count_family(3) == 1);   // only a starts a feasible word
}

TEST_CASE("solve examples") {
    auto r1 = solve(build_constraints(make({{"a", 1, true}}), 1));
    REQUIRE(r1.hypothesis);
    CHECK(r1.hypothesis->st[0] == 0);
    CHECK(r1.hypothesis->bang[0] == 0);

    auto s = make({{"a", 1, true}, {"a a", 1, false}});
    CHECK_FALSE(solve(build_constraints(s, 1)).hypothesis);
    CHECK_FALSE(solve_native(s, 1).hypothesis);
    auto r2 = solve(build_constraints(s, 2));
    REQUIRE(r2.hypothesis);
    CHECK(r2.hypothesis->bang[0] != r2.hypothesis->s0);
    auto n2 = solve_native(s, 2);
    REQUIRE(n2.hypothesis);
    CHECK(n2.hypothesis->bang[0] != 0);
    CHECK(oracle::brute_force_sat(s, 2));
    CHECK_FALSE(oracle::brute_force_sat(s, 1));
}

TEST_CASE("export is deterministic") {
    auto prog = build_constraints(make({{"a", 1, true}}), 1);
    auto t1 = export_smtlib(prog), t2 = export_smtlib(build_constraints(make({{"a", 1, true}}), 1));
    CHECK(t1 == t2);
    CHECK(t1.find("(declare-datatype State ((S0)))") != std::string::npos);
    CHECK(t1.find("(check-sat)") != std::string::npos);
    CHECK(t1.find("; action 0 = a") != std::string::npos);
}

TEST_CASE("infer_I / infer_Iprime / infer_A") {
    auto s = make({{"a", 1, true}, {"b", 1, false}, {"a b", 2, true}, {"b a", 2, false}});
    auto bp = infer_I(s);
    CHECK(bp.num_states() == 2);
    CHECK(consistent_with(s, bp).consistent);

    auto one = infer_I(make({{"a", 1, true}}));
    CHECK(one.num_states() == 1);
    CHECK(one.response[0][0] == 0);

    auto empty = infer_I(Sample{});
    CHECK(empty.num_states() == 1);
    CHECK(validate(empty).empty());

    auto b1 = twin_b1();
    auto cs = generate_cs(b1);
    auto bi = infer_I(cs.sample);
    for (int n = 1; n <= 3; ++n) CHECK(lang_equal_at(bi, b1, n).equal);

    auto ip = infer_Iprime(cs.sample);
    REQUIRE(ip.bp);
    CHECK(ip.bp->num_states() == 2);
    CHECK(ip.bp->send_source[0] != ip.bp->send_source[1]);
    CHECK(infer_Iprime(make({{"a", 1, true}})).bp->num_states() == 1);
    auto bad = make({{"a", 1, true}, {"b", 1, true}, {"c", 1, true}, {"x a", 1, true}, {"x c", 1, false}});
    auto ipb = infer_Iprime(bad);
    CHECK_FALSE(ipb.bp);
    CHECK(ipb.reason.find("not transitive") != std::string::npos);

    auto a1 = infer_A(cs.sample);
    CHECK(a1.used_iprime);
    CHECK(a1.bp.num_states() == 2);
    for (int n = 1; n <= 3; ++n) CHECK(lang_equal_at(a1.bp, b1, n).equal);

    auto b2 = twin_b2();
    auto a2 = infer_A(generate_cs(b2).sample);
    CHECK(a2.bp.num_states() == 2);
    for (int n = 1; n <= 3; ++n) {
        CHECK(lang_equal_at(a2.bp, b2, n).equal);
        CHECK(lang_equal_at(a2.bp, b1, n).equal);
    }
    CHECK(consistent_with(make({{"a", 1, true}}), infer_A(make({{"a", 1, true}})).bp).consistent);
}

TEST_CASE("consistency_decision") {
    auto d = consistency_decision(Sample{}, 1);
    CHECK(d.sat);
    auto s = make({{"a", 1, true}, {"a a", 1, false}});
    CHECK_FALSE(consistency_decision(s, 1).sat);
    auto d2 = consistency_decision(s, 3);
    CHECK(d2.sat);
    CHECK(d2.k == 2);
}

TEST_CASE("native search vs brute force and program evaluation") {
    Rng rng(99);
    for (int i = 0; i < 60; ++i) {
        auto p = random_protocol(rng, 2, 2);
        Sample s;
        for (int j = 0; j < 5; ++j) {
            Word w = random_walk(rng, p, 1 + j % 2, 1 + static_cast<int>(rng() % 3));
            int n = 1 + static_cast<int>(rng() % 2);
            s.add(p, w, n, feasible(p, n, w));
        }
        s = normalize(s);
        for (int k = 1; k <= 2; ++k) {
            auto nat = solve_native(s, k);
            auto prog = build_constraints(s, k);
            auto viaprog = solve(prog);
            CHECK(nat.hypothesis.has_value() == viaprog.hypothesis.has_value());
            CHECK(nat.hypothesis.has_value() == oracle::brute_force_sat(s, k));
            if (nat.hypothesis) {
                CHECK(consistent_with(s, nat.hypothesis->to_protocol()).consistent);
                CHECK(evaluate(prog, *nat.hypothesis));
            }
            if (viaprog.hypothesis) CHECK(consistent_with(s, viaprog.hypothesis->to_protocol()).consistent);
        }
    }
}
