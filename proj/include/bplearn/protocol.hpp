#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bpl {

using State = int;
using ActionId = int;
using Word = std::vector<ActionId>;
using Config = std::vector<int>;   // process count per state

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ActionNotEnabled : Error {
    using Error::Error;
};
struct UnknownAction : Error {
    using Error::Error;
};
struct BudgetExceeded : Error {
    using Error::Error;
};
struct AlphabetMismatch : Error {
    using Error::Error;
};
struct InvalidProtocol : Error {
    using Error::Error;
};

// Function-table form. Every action has exactly one send and a total
// response row, so the matrix M_a is never stored.
struct Protocol {
    std::vector<std::string> state_names;
    std::vector<std::string> action_names;
    State initial = 0;
    std::vector<State> send_source;
    std::vector<State> send_target;
    std::vector<std::vector<State>> response;   // [action][state]

    int num_states() const { return static_cast<int>(state_names.size()); }
    int num_actions() const { return static_cast<int>(action_names.size()); }

    std::optional<ActionId> find_action(std::string_view name) const;
    std::optional<State> find_state(std::string_view name) const;
    ActionId action(std::string_view name) const;   // throws UnknownAction
    State state(std::string_view name) const;

    Word word(const std::vector<std::string>& names) const;
    Word word(std::string_view spaced) const;   // "a b c"
    std::string format(const Word& w) const;

    bool operator==(const Protocol&) const = default;
};

// Transition-list form used for hand-built and parsed protocols; it can hold
// the malformed shapes that validate() reports on.
class ProtocolBuilder {
public:
    State add_state(const std::string& name);
    ActionId add_action(const std::string& name);
    State st(const std::string& name);      // add if missing
    ActionId act(const std::string& name);  // add if missing
    void set_initial(State s) { initial_ = s; }

    ProtocolBuilder& send(ActionId a, State from, State to);
    ProtocolBuilder& recv(ActionId a, State from, State to);
    ProtocolBuilder& send(const std::string& a, const std::string& from, const std::string& to);
    ProtocolBuilder& recv(const std::string& a, const std::string& from, const std::string& to);
    void remove_sends(ActionId a);

    // Unspecified responses become self-loops when the flag is set.
    std::vector<std::string> diagnostics(bool default_self_loops) const;
    Protocol build(bool default_self_loops = true) const;

    const std::vector<std::string>& states() const { return states_; }
    const std::vector<std::string>& actions() const { return actions_; }

private:
    std::vector<std::string> states_, actions_;
    State initial_ = 0;
    struct Edge {
        ActionId a;
        State from, to;
    };
    std::vector<Edge> sends_, recvs_;
};

std::vector<std::string> validate(const Protocol& p);
std::vector<std::string> validate(const ProtocolBuilder& b, bool default_self_loops = true);

struct RunOutcome {
    bool feasible = true;
    std::size_t failed_index = 0;   // meaningful only when !feasible
    Config config;                  // final, or the one before the failing action
};

Config initial_config(const Protocol& p, int n);
bool enabled(const Protocol& p, const Config& c, ActionId a);
std::vector<ActionId> enabled_actions(const Protocol& p, const Config& c);
Config step(const Protocol& p, const Config& c, ActionId a);
RunOutcome run(const Protocol& p, int n, const Word& w);
bool feasible(const Protocol& p, int n, const Word& w);

struct Budget {
    std::size_t nodes = 2'000'000;
};

std::vector<Word> enumerate_language(const Protocol& p, int n, int max_len, Budget b = {});

struct Equivalence {
    bool equal = true;
    std::optional<Word> counterexample;   // shortest, in the symmetric difference
};
Equivalence lang_equal(const Protocol& p1, int n1, const Protocol& p2, int n2, Budget b = {});
Equivalence lang_equal_at(const Protocol& p1, const Protocol& p2, int n, Budget b = {});
std::optional<int> detect_cutoff(const Protocol& p, int k_max, Budget b = {});
std::optional<int> min_processes(const Protocol& p, const Word& w, int n_max);
std::optional<Word> shortest_word_with_action(const Protocol& p, ActionId a, int n, int len_budget,
                                              Budget b = {});

// Least n <= n_max for which some feasible word ends with a.
std::optional<int> min_processes_for_action(const Protocol& p, ActionId a, int n_max, int len_budget,
                                            Budget b = {});

std::string format_config(const Config& c);
std::string format_matrices(const Protocol& p);   // debug view of M_a, v_a, v_a'
std::string to_dot(const Protocol& p);

struct ConfigHash {
    std::size_t operator()(const Config& c) const noexcept;
};

// Fixtures from the worked examples.
Protocol demo_protocol();
Protocol twin_b1();
Protocol twin_b2();

}  // namespace bpl
