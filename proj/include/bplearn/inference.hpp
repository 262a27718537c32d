#pragma once

#include "bplearn/protocol.hpp"
#include "bplearn/samples.hpp"

namespace bpl {

struct TimeBudgetExceeded : Error {
    using Error::Error;
};

struct Unsatisfiable : Error {
    Unsatisfiable(const std::string& msg, int k_max, std::vector<std::string> evidence)
        : Error(msg), k_max(k_max), evidence(std::move(evidence)) {}
    int k_max;
    std::vector<std::string> evidence;   // one line per k tried
};

enum class Mode { I, Iprime };

// A candidate BP over the sample alphabet plus fresh padding actions.
// Padding actions come last; they self-loop and respond with the identity.
struct Hypothesis {
    int k = 1;
    State s0 = 0;
    std::vector<std::string> actions;
    int sample_actions = 0;   // actions[0..sample_actions) mirror Sample::alphabet
    std::vector<State> st, bang;
    std::vector<std::vector<State>> resp;   // [action][state]

    std::vector<std::string> fresh_actions() const;
    Protocol to_protocol() const;
};

// ---- constraint program

enum class TermKind { S0, Const, St, Bang, Resp, PVar };
struct Term {
    TermKind kind;
    int index = -1;   // constant value, action id, or p-var id
    int arg = -1;     // Resp: term id of the argument
};

enum class FormulaKind { True, False, Eq, Neq, And, Or };
struct Formula {
    FormulaKind kind;
    int lhs = -1, rhs = -1;   // term ids for Eq/Neq
    std::vector<int> kids;    // formula ids for And/Or
};

struct Assertion {
    int formula;
    int family;        // 1..5
    int entry = -1;    // sample entry index, -1 if none; also the p-var scope
    std::string origin;
};

struct PVar {
    int entry, process, step;
};

struct ConstraintProgram {
    int k = 1;
    Mode mode = Mode::I;
    std::vector<std::string> actions;   // sample alphabet, then padding
    int sample_actions = 0;
    std::vector<Term> terms;
    std::vector<Formula> formulas;
    std::vector<Assertion> assertions;
    std::vector<PVar> pvars;

    int count_family(int family) const;
};

struct BuildOptions {
    Mode mode = Mode::I;
    int fresh_budget = 8;   // padding actions available: min(fresh_budget, k); none in I' mode
};

ConstraintProgram build_constraints(const Sample& s, int k, const BuildOptions& opts = {});

// Truth of every assertion under h, p-variables existential per entry.
bool evaluate(const ConstraintProgram& prog, const Hypothesis& h);

std::string export_smtlib(const ConstraintProgram& prog);

// ---- solving

struct SolveOptions {
    Mode mode = Mode::I;
    int fresh_budget = 8;
    long time_ms = 120000;
};

struct SolveResult {
    std::optional<Hypothesis> hypothesis;   // nullopt = UNSAT
    std::size_t nodes = 0;
};

// Backtracking over the program's symbols in the fixed order
// s0, st, bang, resp (row-major), padding st. Assertions decide pruning.
SolveResult solve(const ConstraintProgram& prog, long time_ms = 120000);

// Demand-driven search that checks sample entries by lazy simulation.
SolveResult solve_native(const Sample& s, int k, const SolveOptions& opts = {});

struct InferOptions {
    int k_max = 6;
    int fresh_budget = 8;
    long time_ms = 120000;   // per solver call
};

Protocol infer_I(const Sample& s, const InferOptions& opts = {});

struct IprimeResult {
    std::optional<Protocol> bp;
    std::string reason;   // why UNSAT
};
IprimeResult infer_Iprime(const Sample& s, const InferOptions& opts = {});

struct InferAResult {
    Protocol bp;
    bool used_iprime = false;
};
InferAResult infer_A(const Sample& s, const InferOptions& opts = {});

struct Decision {
    bool sat = false;
    int k = 0;   // smallest k that worked
    std::optional<Protocol> witness;
};
Decision consistency_decision(const Sample& s, int k, const InferOptions& opts = {});

}  // namespace bpl
