#include "bplearn/samples.hpp"

#include <algorithm>
#include <sstream>

namespace bpl {

ActionId Sample::intern(const std::string& name) {
    if (name.empty()) throw Error("empty action name");
    if (auto a = find(name)) return *a;
    alphabet.push_back(name);
    return static_cast<ActionId>(alphabet.size() - 1);
}

std::optional<ActionId> Sample::find(std::string_view name) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == name) return static_cast<ActionId>(i);
    return std::nullopt;
}

void Sample::add(const std::vector<std::string>& word, int n, bool label) {
    if (n < 1) throw Error("sample entries need n >= 1");
    SampleEntry e{{}, n, label};
    for (const auto& x : word) e.word.push_back(intern(x));
    entries.push_back(std::move(e));
}

void Sample::add(std::string_view spaced, int n, bool label) {
    std::vector<std::string> names;
    std::istringstream in{std::string(spaced)};
    for (std::string tok; in >> tok;) names.push_back(tok);
    add(names, n, label);
}

void Sample::add(const Protocol& p, const Word& w, int n, bool label) {
    std::vector<std::string> names;
    for (ActionId a : w) names.push_back(p.action_names.at(a));
    add(names, n, label);
}

std::vector<ActionId> Sample::positive_alphabet() const {
    std::vector<char> seen(alphabet.size(), 0);
    for (const auto& e : entries)
        if (e.label)
            for (ActionId a : e.word) seen[a] = 1;
    std::vector<ActionId> out;
    for (std::size_t a = 0; a < seen.size(); ++a)
        if (seen[a]) out.push_back(static_cast<ActionId>(a));
    return out;
}

std::size_t Sample::size() const {
    std::size_t total = 0;
    for (const auto& e : entries) total += e.word.size();
    return total;
}

std::string Sample::format(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += alphabet.at(w[i]);
    }
    return out;
}

std::string Sample::describe(const SampleEntry& e) const {
    return "(" + (e.word.empty() ? std::string("eps") : format(e.word)) + ", " + std::to_string(e.n) + ", " +
           (e.label ? "T" : "F") + ")";
}

std::optional<std::pair<std::size_t, std::size_t>> find_contradiction(const Sample& s) {
    // per word: smallest positive n and largest negative n, with their indices
    std::map<Word, std::pair<int, std::size_t>> pos, neg;
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
        const auto& e = s.entries[i];
        auto& m = e.label ? pos : neg;
        auto it = m.find(e.word);
        if (it == m.end()) m.emplace(e.word, std::pair{e.n, i});
        else if (e.label ? e.n < it->second.first : e.n > it->second.first) it->second = {e.n, i};
    }
    for (const auto& [w, p] : pos) {
        auto it = neg.find(w);
        if (it != neg.end() && it->second.first >= p.first)
            return std::pair{std::min(p.second, it->second.second), std::max(p.second, it->second.second)};
    }
    return std::nullopt;
}

Sample normalize(const Sample& s) {
    if (auto c = find_contradiction(s))
        throw Contradiction("contradictory entries " + s.describe(s.entries[c->first]) + " and " +
                                s.describe(s.entries[c->second]),
                            c->first, c->second);
    std::map<Word, int> pos, neg;
    for (const auto& e : s.entries) {
        if (e.label) {
            auto [it, fresh] = pos.emplace(e.word, e.n);
            if (!fresh) it->second = std::min(it->second, e.n);
        } else {
            auto [it, fresh] = neg.emplace(e.word, e.n);
            if (!fresh) it->second = std::max(it->second, e.n);
        }
    }
    Sample out;
    out.alphabet = s.alphabet;
    for (const auto& [w, n] : pos) out.entries.push_back({w, n, true});
    for (const auto& [w, n] : neg) out.entries.push_back({w, n, false});
    std::sort(out.entries.begin(), out.entries.end(), [](const SampleEntry& x, const SampleEntry& y) {
        if (x.word.size() != y.word.size()) return x.word.size() < y.word.size();
        return x < y;
    });
    return out;
}

Word translate(const Sample& s, const Word& w, const Protocol& p) {
    Word out;
    out.reserve(w.size());
    for (ActionId a : w) out.push_back(p.action(s.alphabet.at(a)));
    return out;
}

ConsistencyReport consistent_with(const Sample& s, const Protocol& p) {
    ConsistencyReport r;
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
        const auto& e = s.entries[i];
        if (feasible(p, e.n, translate(s, e.word, p)) != e.label) r.violations.push_back(i);
    }
    r.consistent = r.violations.empty();
    return r;
}

std::set<Word> PNSets::positives() const {
    std::set<Word> out;
    for (const auto& [w, n] : min_positive) out.insert(w);
    return out;
}

std::set<Word> PNSets::negatives() const {
    std::set<Word> out;
    for (const auto& [w, n] : max_negative) out.insert(w);
    return out;
}

PNSets positive_negative_sets(const Sample& s) {
    PNSets r;
    for (const auto& e : s.entries) {
        (e.label ? r.P : r.N)[e.n].insert(e.word);
        if (e.label) {
            auto [it, fresh] = r.min_positive.emplace(e.word, e.n);
            if (!fresh) it->second = std::min(it->second, e.n);
        } else {
            auto [it, fresh] = r.max_negative.emplace(e.word, e.n);
            if (!fresh) it->second = std::max(it->second, e.n);
        }
    }
    return r;
}

std::vector<std::vector<char>> apartness(const Sample& s) {
    const std::size_t na = s.alphabet.size();
    std::vector<std::vector<char>> ap(na, std::vector<char>(na, 0));
    const auto pn = positive_negative_sets(s);
    for (const auto& [wa, n] : pn.min_positive) {
        if (wa.empty()) continue;
        Word wb(wa.begin(), wa.end() - 1);
        const ActionId a = wa.back();
        wb.push_back(0);
        for (std::size_t b = 0; b < na; ++b) {
            wb.back() = static_cast<ActionId>(b);
            auto it = pn.max_negative.find(wb);
            if (it != pn.max_negative.end() && it->second >= n) ap[a][b] = ap[b][a] = 1;
        }
    }
    return ap;
}

bool apart(const Sample& s, ActionId a, ActionId b) { return apartness(s).at(a).at(b) != 0; }

std::vector<std::vector<ActionId>> similarity_partition(const Sample& s) {
    const auto ap = apartness(s);
    const auto as = s.positive_alphabet();
    for (ActionId a : as)
        for (ActionId b : as)
            for (ActionId c : as)
                if (!ap[a][b] && !ap[b][c] && ap[a][c])
                    throw NotTransitive("similarity is not transitive: " + s.alphabet[a] + " ~ " + s.alphabet[b] +
                                            " ~ " + s.alphabet[c] + " but " + s.alphabet[a] + " apart " +
                                            s.alphabet[c],
                                        a, b, c);
    std::vector<std::vector<ActionId>> classes;
    std::vector<char> placed(s.alphabet.size(), 0);
    for (ActionId a : as) {
        if (placed[a]) continue;
        std::vector<ActionId> cls;
        for (ActionId b : as)
            if (!placed[b] && !ap[a][b]) {
                cls.push_back(b);
                placed[b] = 1;
            }
        classes.push_back(std::move(cls));
    }
    return classes;
}

}  // namespace bpl
