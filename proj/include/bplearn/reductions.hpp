#pragma once

#include <array>

#include "bplearn/protocol.hpp"
#include "bplearn/random_bp.hpp"
#include "bplearn/samples.hpp"

namespace bpl {

struct Dfa {
    std::vector<std::string> sigma;
    std::vector<std::string> states;
    int initial = 0;
    std::vector<std::vector<int>> delta;   // [state][letter]
    std::vector<char> accepting;

    std::optional<int> letter(std::string_view name) const;
    int run(const std::vector<int>& w) const;
    bool accepts(const std::vector<int>& w) const;
    bool accepts(const std::vector<std::string>& w) const;
    std::vector<std::string> validate() const;   // empty when well formed and complete
};

Dfa random_dfa(Rng& rng, int states, const std::vector<std::string>& sigma);

struct AllEq3Cnf {
    int num_vars = 0;
    std::vector<std::array<int, 3>> clauses;   // literals +-v, v in 1..num_vars

    bool positive(std::size_t clause) const { return clauses[clause][0] > 0; }
    std::vector<std::string> validate() const;
    bool satisfied_by(const std::vector<bool>& assignment) const;   // assignment[v-1]
};

struct AssignmentDoesNotSatisfy : Error {
    using Error::Error;
};
struct ReservedNameCollision : Error {
    using Error::Error;
};

// Names for the auxiliary states and actions the constructions add. The
// defaults are namespaced so they never clash with a user alphabet.
struct ReservedNames {
    std::string i = "__i", dollar = "__$", top = "__top", bot = "__bot", x = "__x";
    std::string c = "__c", s = "__s", h = "__h", g = "__g";
    std::string pad_prefix = "__q:";   // padding action for DFA state q
    static ReservedNames literal();
    std::vector<std::string> all() const;
};

// Simulation of a DFA, with the $ step deciding between top and bot.
Protocol dfa_to_bp(const Dfa& d, const ReservedNames& names = {});

using DfaSample = std::vector<std::pair<std::vector<std::string>, bool>>;

// DFA consistency sample to BP sample; returns the sample and k+5.
std::pair<Sample, int> dfa_sample_to_bp_sample(const DfaSample& s, int k, const std::vector<std::string>& sigma,
                                                const ReservedNames& names = {});

enum class SatSampleVariant {
    Literal,        // the four word sets exactly as listed
    Strengthened,   // plus triples closing the loopholes the literal sets leave open
};

std::pair<Sample, int> alleq3sat_to_sample(const AllEq3Cnf& phi,
                                            SatSampleVariant variant = SatSampleVariant::Strengthened);
Protocol assignment_to_bp(const AllEq3Cnf& phi, const std::vector<bool>& assignment);

// Intersection of k DFAs over a shared alphabet.
Protocol intersection_bp(const std::vector<Dfa>& dfas, const ReservedNames& names = {});
// Membership answers the DFA-intersection predictor hands to a BP predictor.
bool answer_bp_mq(const std::vector<Dfa>& dfas, const std::vector<std::string>& w, int n,
                  const ReservedNames& names = {});
// h_1 .. h_k s
std::vector<std::string> intersection_prefix(int k, const ReservedNames& names = {});

enum class QuadraticVariant {
    Literal,    // transitions as originally stated
    Repaired,   // H?? from left-loop states other than the last one goes to bot
};

Protocol family_quadratic(int m, int n, int l, QuadraticVariant v = QuadraticVariant::Repaired);

std::vector<int> primes_up_to(int n);
Protocol family_exponential(int n);

// u_0 (v h'_1 v h'_2 ...) u_t a_top built from the loop arithmetic; for P_5 this is
// i0 i1 i2 i3 v h'1 v c d a_top with v = u h1 u h2 u, u = a1 a2 a3 a4.
Word exponential_witness(const Protocol& p, int n);

}  // namespace bpl
