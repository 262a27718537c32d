#pragma once

#include "bplearn/reductions.hpp"
#include "bplearn/samples.hpp"

namespace bpl {

struct ParseError : Error {
    ParseError(const std::string& msg, int line, int col)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg), line(line), col(col) {}
    int line, col;   // 1-based
};
struct TotalityError : Error {
    TotalityError(const std::string& action, const std::string& state)
        : Error("action " + action + " has no response in state " + state), action(action), state(state) {}
    std::string action, state;
};
struct DuplicateSend : Error {
    explicit DuplicateSend(const std::string& action) : Error("action " + action + " has two sends"), action(action) {}
    std::string action;
};

// Broadcast protocol document:
// {"format": 1, "initial": s, "states": [...], "action_order": [...],
//  "actions": {a: {"send": {"from": s, "to": t}, "recv": {s: t, ...}}}}
Protocol parse_bp(const std::string& text);
std::string serialize_bp(const Protocol& p);

// word <TAB> n <TAB> T|F per line, # comments. The sample comes back
// normalized; notes say what normalization dropped.
struct SampleLoad {
    Sample sample;
    std::vector<std::string> notes;
};
SampleLoad parse_sample(const std::string& text);   // Contradiction carries line numbers
std::string serialize_sample(const Sample& s);

// {"alphabet": [...], "states": [...], "initial": q, "accepting": [...], "delta": {q: {letter: q'}}}
Dfa parse_dfa(const std::string& text);
std::string serialize_dfa(const Dfa& d);

// word <TAB> T|F per line
DfaSample parse_dfa_sample(const std::string& text);

// DIMACS: "p cnf V C", then clauses of three literals ending in 0
AllEq3Cnf parse_cnf(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace bpl
