#include "bplearn/protocol.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace bpl {

std::optional<ActionId> Protocol::find_action(std::string_view name) const {
    for (int a = 0; a < num_actions(); ++a)
        if (action_names[a] == name) return a;
    return std::nullopt;
}

std::optional<State> Protocol::find_state(std::string_view name) const {
    for (int s = 0; s < num_states(); ++s)
        if (state_names[s] == name) return s;
    return std::nullopt;
}

ActionId Protocol::action(std::string_view name) const {
    auto a = find_action(name);
    if (!a) throw UnknownAction("unknown action '" + std::string(name) + "'");
    return *a;
}

State Protocol::state(std::string_view name) const {
    auto s = find_state(name);
    if (!s) throw Error("unknown state '" + std::string(name) + "'");
    return *s;
}

Word Protocol::word(const std::vector<std::string>& names) const {
    Word w;
    w.reserve(names.size());
    for (const auto& n : names) w.push_back(action(n));
    return w;
}

Word Protocol::word(std::string_view spaced) const {
    std::vector<std::string> names;
    std::istringstream in{std::string(spaced)};
    for (std::string tok; in >> tok;) names.push_back(tok);
    return word(names);
}

std::string Protocol::format(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += action_names.at(w[i]);
    }
    return out;
}

// ---------------------------------------------------------------- builder

State ProtocolBuilder::add_state(const std::string& name) {
    states_.push_back(name);
    return static_cast<State>(states_.size() - 1);
}

ActionId ProtocolBuilder::add_action(const std::string& name) {
    actions_.push_back(name);
    return static_cast<ActionId>(actions_.size() - 1);
}

State ProtocolBuilder::st(const std::string& name) {
    auto it = std::find(states_.begin(), states_.end(), name);
    if (it != states_.end()) return static_cast<State>(it - states_.begin());
    return add_state(name);
}

ActionId ProtocolBuilder::act(const std::string& name) {
    auto it = std::find(actions_.begin(), actions_.end(), name);
    if (it != actions_.end()) return static_cast<ActionId>(it - actions_.begin());
    return add_action(name);
}

ProtocolBuilder& ProtocolBuilder::send(ActionId a, State from, State to) {
    sends_.push_back({a, from, to});
    return *this;
}

ProtocolBuilder& ProtocolBuilder::recv(ActionId a, State from, State to) {
    recvs_.push_back({a, from, to});
    return *this;
}

ProtocolBuilder& ProtocolBuilder::send(const std::string& a, const std::string& from,
                                       const std::string& to) {
    return send(act(a), st(from), st(to));
}

ProtocolBuilder& ProtocolBuilder::recv(const std::string& a, const std::string& from,
                                       const std::string& to) {
    return recv(act(a), st(from), st(to));
}

void ProtocolBuilder::remove_sends(ActionId a) {
    std::erase_if(sends_, [a](const Edge& e) { return e.a == a; });
}

std::vector<std::string> ProtocolBuilder::diagnostics(bool default_self_loops) const {
    std::vector<std::string> out;
    const int ns = static_cast<int>(states_.size()), na = static_cast<int>(actions_.size());
    auto names_unique = [&](const std::vector<std::string>& v, const char* what) {
        std::set<std::string> seen;
        for (const auto& n : v) {
            if (n.empty()) out.push_back(std::string("empty-") + what + "-name");
            else if (!seen.insert(n).second) out.push_back(std::string("duplicate-") + what + " " + n);
        }
    };
    names_unique(states_, "state");
    names_unique(actions_, "action");
    if (ns == 0) out.push_back("no-states");
    else if (initial_ < 0 || initial_ >= ns) out.push_back("initial-out-of-range");

    std::vector<int> send_count(na, 0);
    std::vector<char> has_send(ns, 0);
    for (const auto& e : sends_) {
        if (e.a < 0 || e.a >= na || e.from < 0 || e.from >= ns || e.to < 0 || e.to >= ns) {
            out.push_back("send-out-of-range");
            continue;
        }
        if (++send_count[e.a] == 2) out.push_back("duplicate-send " + actions_[e.a]);
        has_send[e.from] = 1;
    }
    for (int s = 0; s < ns; ++s)
        if (!has_send[s]) out.push_back("hidden-state " + states_[s]);
    for (int a = 0; a < na; ++a)
        if (send_count[a] == 0) out.push_back("action-without-send " + actions_[a]);

    std::map<std::pair<int, int>, int> resp;
    for (const auto& e : recvs_) {
        if (e.a < 0 || e.a >= na || e.from < 0 || e.from >= ns || e.to < 0 || e.to >= ns) {
            out.push_back("response-out-of-range");
            continue;
        }
        auto [it, fresh] = resp.emplace(std::pair{e.a, e.from}, e.to);
        if (!fresh && it->second != e.to)
            out.push_back("conflicting-response " + actions_[e.a] + " " + states_[e.from]);
    }
    if (!default_self_loops)
        for (int a = 0; a < na; ++a)
            for (int s = 0; s < ns; ++s)
                if (!resp.count({a, s})) out.push_back("missing-response " + actions_[a] + " " + states_[s]);
    return out;
}

Protocol ProtocolBuilder::build(bool default_self_loops) const {
    auto diag = diagnostics(default_self_loops);
    if (!diag.empty()) {
        std::string msg = "invalid protocol:";
        for (const auto& d : diag) msg += " [" + d + "]";
        throw InvalidProtocol(msg);
    }
    Protocol p;
    p.state_names = states_;
    p.action_names = actions_;
    p.initial = initial_;
    const int ns = static_cast<int>(states_.size()), na = static_cast<int>(actions_.size());
    p.send_source.assign(na, 0);
    p.send_target.assign(na, 0);
    for (const auto& e : sends_) {
        p.send_source[e.a] = e.from;
        p.send_target[e.a] = e.to;
    }
    p.response.assign(na, std::vector<State>(ns));
    for (int a = 0; a < na; ++a) std::iota(p.response[a].begin(), p.response[a].end(), 0);
    for (const auto& e : recvs_) p.response[e.a][e.from] = e.to;
    return p;
}

std::vector<std::string> validate(const ProtocolBuilder& b, bool default_self_loops) {
    return b.diagnostics(default_self_loops);
}

std::vector<std::string> validate(const Protocol& p) {
    std::vector<std::string> out;
    const int ns = p.num_states(), na = p.num_actions();
    std::set<std::string> seen;
    for (const auto& n : p.state_names)
        if (!seen.insert(n).second) out.push_back("duplicate-state " + n);
    seen.clear();
    for (const auto& n : p.action_names)
        if (n.empty() || !seen.insert(n).second) out.push_back("duplicate-action " + n);
    if (ns == 0) return out.push_back("no-states"), out;
    if (p.initial < 0 || p.initial >= ns) out.push_back("initial-out-of-range");
    if (static_cast<int>(p.send_source.size()) != na || static_cast<int>(p.send_target.size()) != na ||
        static_cast<int>(p.response.size()) != na) {
        out.push_back("table-size-mismatch");
        return out;
    }
    std::vector<char> has_send(ns, 0);
    for (int a = 0; a < na; ++a) {
        auto in = [ns](State s) { return s >= 0 && s < ns; };
        if (!in(p.send_source[a]) || !in(p.send_target[a])) {
            out.push_back("send-out-of-range " + p.action_names[a]);
            continue;
        }
        has_send[p.send_source[a]] = 1;
        if (static_cast<int>(p.response[a].size()) != ns) {
            out.push_back("response-not-total " + p.action_names[a]);
            continue;
        }
        for (State s = 0; s < ns; ++s)
            if (!in(p.response[a][s])) out.push_back("response-out-of-range " + p.action_names[a]);
    }
    for (State s = 0; s < ns; ++s)
        if (!has_send[s]) out.push_back("hidden-state " + p.state_names[s]);
    return out;
}

// ---------------------------------------------------------------- semantics

Config initial_config(const Protocol& p, int n) {
    Config c(p.num_states(), 0);
    c[p.initial] = n;
    return c;
}

bool enabled(const Protocol& p, const Config& c, ActionId a) {
    return c[p.send_source[a]] > 0;
}

std::vector<ActionId> enabled_actions(const Protocol& p, const Config& c) {
    if (static_cast<int>(c.size()) != p.num_states())
        throw Error("configuration has " + std::to_string(c.size()) + " entries, protocol has " +
                    std::to_string(p.num_states()) + " states");
    std::vector<ActionId> out;
    for (int a = 0; a < p.num_actions(); ++a)
        if (enabled(p, c, a)) out.push_back(a);
    return out;
}

Config step(const Protocol& p, const Config& c, ActionId a) {
    if (a < 0 || a >= p.num_actions()) throw UnknownAction("action id out of range");
    const State src = p.send_source[a];
    if (c[src] == 0) throw ActionNotEnabled("action " + p.action_names[a] + " not enabled");
    Config q(c.size(), 0);
    const auto& row = p.response[a];
    for (std::size_t s = 0; s < c.size(); ++s) q[row[s]] += c[s] - (static_cast<State>(s) == src);
    q[p.send_target[a]] += 1;
    return q;
}

RunOutcome run(const Protocol& p, int n, const Word& w) {
    if (n < 0) throw Error("negative process count");
    RunOutcome r;
    r.config = initial_config(p, n);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] < 0 || w[i] >= p.num_actions()) throw UnknownAction("action id out of range");
        if (!enabled(p, r.config, w[i])) {
            r.feasible = false;
            r.failed_index = i;
            return r;
        }
        r.config = step(p, r.config, w[i]);
    }
    return r;
}

bool feasible(const Protocol& p, int n, const Word& w) { return run(p, n, w).feasible; }

std::size_t ConfigHash::operator()(const Config& c) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (int x : c) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL + (h >> 29);
    return h;
}

std::vector<Word> enumerate_language(const Protocol& p, int n, int max_len, Budget b) {
    if (max_len < 0) throw Error("negative length bound");
    std::vector<Word> out;
    std::unordered_map<Config, std::vector<ActionId>, ConfigHash> memo;
    Word cur;
    std::function<void(const Config&)> go = [&](const Config& c) {
        if (out.size() >= b.nodes) throw BudgetExceeded("enumerate_language: node budget exhausted");
        out.push_back(cur);
        if (static_cast<int>(cur.size()) == max_len) return;
        auto it = memo.find(c);
        if (it == memo.end()) it = memo.emplace(c, enabled_actions(p, c)).first;
        const auto en = it->second;
        for (ActionId a : en) {
            cur.push_back(a);
            go(step(p, c, a));
            cur.pop_back();
        }
    };
    go(initial_config(p, n));
    std::sort(out.begin(), out.end(), [](const Word& x, const Word& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    return out;
}

namespace {

std::vector<ActionId> align_alphabets(const Protocol& p1, const Protocol& p2) {
    if (p1.num_actions() != p2.num_actions()) throw AlphabetMismatch("alphabets differ in size");
    std::vector<ActionId> map(p1.num_actions());
    for (int a = 0; a < p1.num_actions(); ++a) {
        auto b = p2.find_action(p1.action_names[a]);
        if (!b) throw AlphabetMismatch("action " + p1.action_names[a] + " missing from second protocol");
        map[a] = *b;
    }
    return map;
}

}  // namespace

Equivalence lang_equal(const Protocol& p1, int n1, const Protocol& p2, int n2, Budget b) {
    const auto map = align_alphabets(p1, p2);
    using Pair = std::pair<Config, Config>;
    struct PairHash {
        std::size_t operator()(const Pair& x) const noexcept {
            return ConfigHash{}(x.first) * 31 + ConfigHash{}(x.second);
        }
    };
    struct Node {
        Pair cfg;
        int parent;
        ActionId via;
    };
    std::vector<Node> nodes;
    std::unordered_map<Pair, int, PairHash> seen;
    Pair start{initial_config(p1, n1), initial_config(p2, n2)};
    nodes.push_back({start, -1, -1});
    seen.emplace(start, 0);
    auto path = [&](int i) {
        Word w;
        for (; nodes[i].parent >= 0; i = nodes[i].parent) w.push_back(nodes[i].via);
        std::reverse(w.begin(), w.end());
        return w;
    };
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        const Pair cur = nodes[head].cfg;
        for (ActionId a = 0; a < p1.num_actions(); ++a) {
            const bool e1 = enabled(p1, cur.first, a), e2 = enabled(p2, cur.second, map[a]);
            if (e1 != e2) {
                Word w = path(static_cast<int>(head));
                w.push_back(a);
                return {false, w};
            }
            if (!e1) continue;
            Pair nxt{step(p1, cur.first, a), step(p2, cur.second, map[a])};
            if (seen.count(nxt)) continue;
            if (nodes.size() >= b.nodes) throw BudgetExceeded("lang_equal: pair budget exhausted");
            seen.emplace(nxt, static_cast<int>(nodes.size()));
            nodes.push_back({std::move(nxt), static_cast<int>(head), a});
        }
    }
    return {true, std::nullopt};
}

Equivalence lang_equal_at(const Protocol& p1, const Protocol& p2, int n, Budget b) {
    return lang_equal(p1, n, p2, n, b);
}

std::optional<int> detect_cutoff(const Protocol& p, int k_max, Budget b) {
    if (k_max < 1) throw Error("k_max must be >= 1");
    for (int k = 1; k <= k_max; ++k)
        if (lang_equal(p, k, p, k + 1, b).equal) return k;
    return std::nullopt;
}

std::optional<int> min_processes(const Protocol& p, const Word& w, int n_max) {
    if (n_max < 1) throw Error("n_max must be >= 1");
    for (ActionId a : w)
        if (a < 0 || a >= p.num_actions()) throw UnknownAction("action id out of range");
    if (!feasible(p, n_max, w)) return std::nullopt;
    int lo = 1, hi = n_max;   // feasibility is monotone in n
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        if (feasible(p, mid, w)) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

std::optional<Word> shortest_word_with_action(const Protocol& p, ActionId a, int n, int len_budget,
                                              Budget b) {
    if (a < 0 || a >= p.num_actions()) throw UnknownAction("action id out of range");
    if (len_budget < 1) return std::nullopt;
    struct Node {
        Config cfg;
        int parent;
        ActionId via;
        int depth;
    };
    std::vector<Node> nodes;
    std::unordered_map<Config, int, ConfigHash> seen;
    nodes.push_back({initial_config(p, n), -1, -1, 0});
    seen.emplace(nodes[0].cfg, 0);
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        const Config cur = nodes[head].cfg;
        const int depth = nodes[head].depth;
        if (enabled(p, cur, a)) {
            Word w{a};
            for (int i = static_cast<int>(head); nodes[i].parent >= 0; i = nodes[i].parent)
                w.push_back(nodes[i].via);
            std::reverse(w.begin(), w.end());
            return w;
        }
        if (depth + 1 >= len_budget) continue;
        for (ActionId x = 0; x < p.num_actions(); ++x) {
            if (!enabled(p, cur, x)) continue;
            Config nxt = step(p, cur, x);
            if (seen.count(nxt)) continue;
            if (nodes.size() >= b.nodes) throw BudgetExceeded("shortest_word: node budget exhausted");
            seen.emplace(nxt, static_cast<int>(nodes.size()));
            nodes.push_back({std::move(nxt), static_cast<int>(head), x, depth + 1});
        }
    }
    return std::nullopt;
}

std::optional<int> min_processes_for_action(const Protocol& p, ActionId a, int n_max, int len_budget,
                                            Budget b) {
    for (int n = 1; n <= n_max; ++n)
        if (shortest_word_with_action(p, a, n, len_budget, b)) return n;
    return std::nullopt;
}

std::string format_config(const Config& c) {
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(c[i]);
    }
    return out;
}

std::string format_matrices(const Protocol& p) {
    std::ostringstream os;
    const int ns = p.num_states();
    for (int a = 0; a < p.num_actions(); ++a) {
        os << "M_" << p.action_names[a] << ":\n";
        for (int row = 0; row < ns; ++row) {
            os << "  [";
            for (int col = 0; col < ns; ++col) os << (col ? " " : "") << (p.response[a][col] == row ? 1 : 0);
            os << "]\n";
        }
        os << "  v  = e_" << p.state_names[p.send_source[a]] << "\n";
        os << "  v' = e_" << p.state_names[p.send_target[a]] << "\n";
    }
    return os.str();
}

namespace {
std::string dot_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out;
}
}  // namespace

std::string to_dot(const Protocol& p) {
    std::ostringstream os;
    os << "digraph bp {\n  rankdir=LR;\n";
    for (int s = 0; s < p.num_states(); ++s)
        os << "  s" << s << " [label=\"" << dot_escape(p.state_names[s]) << "\""
           << (s == p.initial ? ", shape=doublecircle" : ", shape=circle") << "];\n";
    // group labels per edge so the picture stays readable
    std::map<std::pair<int, int>, std::vector<std::string>> solid, dashed;
    for (int a = 0; a < p.num_actions(); ++a) {
        solid[{p.send_source[a], p.send_target[a]}].push_back(p.action_names[a] + "!!");
        for (int s = 0; s < p.num_states(); ++s)
            if (p.response[a][s] != s) dashed[{s, p.response[a][s]}].push_back(p.action_names[a] + "??");
    }
    auto emit = [&](const auto& edges, const char* style) {
        for (const auto& [e, labels] : edges) {
            std::string l;
            for (const auto& x : labels) l += (l.empty() ? "" : ", ") + x;
            os << "  s" << e.first << " -> s" << e.second << " [label=\"" << dot_escape(l) << "\", style=" << style
               << "];\n";
        }
    };
    emit(solid, "solid");
    emit(dashed, "dashed");
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------- fixtures

Protocol demo_protocol() {
    ProtocolBuilder b;
    b.st("s0");
    b.st("s1");
    b.send("a", "s0", "s1").recv("a", "s0", "s0").recv("a", "s1", "s0");
    b.send("b", "s1", "s1").recv("b", "s0", "s1").recv("b", "s1", "s1");
    return b.build(false);
}

Protocol twin_b1() {
    ProtocolBuilder b;
    b.st("s0");
    b.st("s1");
    b.send("a", "s0", "s0").recv("a", "s0", "s1").recv("a", "s1", "s1");
    b.send("b", "s1", "s0").recv("b", "s0", "s1").recv("b", "s1", "s1");
    return b.build(false);
}

Protocol twin_b2() {
    ProtocolBuilder b;
    b.st("t0");
    b.st("t1");
    b.send("a", "t0", "t0").recv("a", "t0", "t1").recv("a", "t1", "t1");
    b.send("b", "t1", "t1").recv("b", "t0", "t0").recv("b", "t1", "t1");
    return b.build(false);
}

}  // namespace bpl
