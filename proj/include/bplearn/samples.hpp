#pragma once

#include <map>
#include <set>

#include "bplearn/protocol.hpp"

namespace bpl {

// Words are over the sample's own alphabet; ids index Sample::alphabet.
struct SampleEntry {
    Word word;
    int n = 1;
    bool label = true;   // true = feasible
    auto operator<=>(const SampleEntry&) const = default;
};

struct Contradiction : Error {
    Contradiction(const std::string& msg, std::size_t first, std::size_t second)
        : Error(msg), first(first), second(second) {}
    std::size_t first, second;   // entry indices (or line numbers, when loaded from text)
};

struct NotTransitive : Error {
    NotTransitive(const std::string& msg, ActionId a, ActionId b, ActionId c)
        : Error(msg), a(a), b(b), c(c) {}
    ActionId a, b, c;   // a ~ b, b ~ c, a apart from c
};

struct Sample {
    std::vector<std::string> alphabet;   // every action name mentioned
    std::vector<SampleEntry> entries;

    ActionId intern(const std::string& name);
    std::optional<ActionId> find(std::string_view name) const;
    void add(const std::vector<std::string>& word, int n, bool label);
    void add(std::string_view spaced, int n, bool label);
    void add(const Protocol& p, const Word& w, int n, bool label);   // word over p's alphabet

    // A_S: actions occurring in at least one feasible word, ascending id.
    std::vector<ActionId> positive_alphabet() const;
    std::size_t size() const;   // sum of word lengths
    std::string format(const Word& w) const;
    std::string describe(const SampleEntry& e) const;
};

// First pair (w,n,T),(w,n',F) with n' >= n, if any.
std::optional<std::pair<std::size_t, std::size_t>> find_contradiction(const Sample& s);

// Dedup and keep only min-n positives / max-n negatives per word. Entries come
// out sorted by (|w|, w, n, label). Throws Contradiction.
Sample normalize(const Sample& s);

// Map a sample word into the protocol's action ids. Throws UnknownAction.
Word translate(const Sample& s, const Word& w, const Protocol& p);

struct ConsistencyReport {
    bool consistent = true;
    std::vector<std::size_t> violations;   // entry indices
};
ConsistencyReport consistent_with(const Sample& s, const Protocol& p);

struct PNSets {
    std::map<int, std::set<Word>> P, N;   // by n
    std::map<Word, int> min_positive, max_negative;
    std::set<Word> positives() const;
    std::set<Word> negatives() const;
};
PNSets positive_negative_sets(const Sample& s);

// apart[a][b] over the whole alphabet; symmetric.
std::vector<std::vector<char>> apartness(const Sample& s);
bool apart(const Sample& s, ActionId a, ActionId b);

// Classes of ~ over A_S, each sorted, ordered by smallest member.
std::vector<std::vector<ActionId>> similarity_partition(const Sample& s);

}  // namespace bpl
