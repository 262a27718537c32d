// Independent checks shared by the unit tests and the acceptance binary.
#pragma once

#include <functional>
#include <set>
#include <sstream>

#include "bplearn/inference.hpp"
#include "bplearn/reductions.hpp"

namespace oracle {

using namespace bpl;

// Same protocol up to the order of states and actions.
inline bool same_by_names(const Protocol& p, const Protocol& q, std::string* why = nullptr) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (std::set(p.state_names.begin(), p.state_names.end()) != std::set(q.state_names.begin(), q.state_names.end()))
        return fail("state sets differ");
    if (std::set(p.action_names.begin(), p.action_names.end()) !=
        std::set(q.action_names.begin(), q.action_names.end()))
        return fail("action sets differ");
    if (p.state_names[p.initial] != q.state_names[q.initial]) return fail("initial states differ");
    for (ActionId a = 0; a < p.num_actions(); ++a) {
        const std::string& an = p.action_names[a];
        const ActionId b = q.action(an);
        if (p.state_names[p.send_source[a]] != q.state_names[q.send_source[b]] ||
            p.state_names[p.send_target[a]] != q.state_names[q.send_target[b]])
            return fail("send of " + an + " differs");
        for (State s = 0; s < p.num_states(); ++s)
            if (p.state_names[p.response[a][s]] != q.state_names[q.response[b][q.state(p.state_names[s])]])
                return fail("response of " + an + " in " + p.state_names[s] + " differs");
    }
    return true;
}

// P_5 written out by hand, plus the auxiliary sends and the two
// receive repairs (helpers mid-loop and during initialization go to bot).
inline Protocol p5_fixture() {
    ProtocolBuilder b;
    for (const char* s : {"i0", "i1", "i2", "i3", "1", "2", "1'", "2'", "3'", "1''", "2''", "3''", "4''", "5''",
                          "h1", "h2", "h3", "h'1", "h'2", "d", "top", "bot"})
        b.st(s);
    b.send("i0", "i0", "1").recv("i0", "i0", "i1");
    b.send("i1", "i1", "h1").recv("i1", "i1", "i2");
    b.send("i2", "i2", "1'").recv("i2", "i2", "i3");
    b.send("i3", "i3", "h'1").recv("i3", "i3", "1''");
    const std::vector<std::string> big{"1''", "2''", "3''", "4''", "5''"};
    auto small = [&](const std::string& act) {
        b.recv(act, "1", "2").recv(act, "2", "1");
        b.recv(act, "1'", "2'").recv(act, "2'", "3'").recv(act, "3'", "1'");
    };
    for (int j = 1; j <= 4; ++j) {
        const std::string a = "a" + std::to_string(j);
        b.send(a, big[j - 1], "bot").recv(a, big[j - 1], big[j]);
        small(a);
    }
    b.send("h1", "h1", "h2").send("h2", "h2", "h3").send("h3", "h3", "bot");
    b.send("h'1", "h'1", "h'2").send("h'2", "h'2", "bot");
    for (const char* h : {"h1", "h2", "h3", "h'1", "h'2"}) {
        b.recv(h, "5''", "1''");
        for (int j = 0; j < 4; ++j) b.recv(h, big[j], "bot");
        for (const char* i : {"i0", "i1", "i2", "i3"}) b.recv(h, i, "bot");
        small(h);
    }
    b.recv("h'1", "h3", "h1").recv("h'2", "h3", "h1");
    b.send("c", "5''", "bot");
    for (const auto& s : b.states()) {
        if (s == "top" || s == "bot") continue;
        b.recv("c", s, s == "2" || s == "3'" ? "d" : "bot");
    }
    b.send("d", "d", "bot").recv("d", "d", "top");
    b.send("a_top", "top", "top");
    for (const char* s : {"1", "2", "1'", "2'", "3'"}) b.send(std::string("z") + s, s, s);
    b.send("zbot", "bot", "bot");
    return b.build();
}

// w in L iff i w $ top feasible at n=2, iff i w $ bot infeasible, for every word up to max_len; returns the first failing word.
inline std::optional<std::string> dfa_sim_violation(const Dfa& d, int max_len) {
    const Protocol p = dfa_to_bp(d);
    const ReservedNames nm;
    const ActionId i = p.action(nm.i), dollar = p.action(nm.dollar), top = p.action(nm.top), bot = p.action(nm.bot);
    std::vector<int> w;
    std::function<std::optional<std::string>()> rec = [&]() -> std::optional<std::string> {
        Word bw{i};
        for (int l : w) bw.push_back(p.action(d.sigma[l]));
        bw.push_back(dollar);
        Word wt = bw, wb = bw;
        wt.push_back(top);
        wb.push_back(bot);
        const bool in = d.accepts(w);
        if (feasible(p, 2, wt) != in || feasible(p, 2, wb) != !in) {
            std::string s;
            for (int l : w) s += d.sigma[l];
            return s.empty() ? std::string("(empty)") : s;
        }
        if (static_cast<int>(w.size()) == max_len) return std::nullopt;
        for (int l = 0; l < static_cast<int>(d.sigma.size()); ++l) {
            w.push_back(l);
            if (auto r = rec()) return r;
            w.pop_back();
        }
        return std::nullopt;
    };
    return rec();
}

// Feasible words at n=1 projected onto the non-padding actions.
inline std::set<std::string> dfa_sim_projection_n1(const Dfa& d, int max_len) {
    const Protocol p = dfa_to_bp(d);
    const ReservedNames nm;
    std::set<std::string> out;
    for (const Word& w : enumerate_language(p, 1, max_len)) {
        std::string s;
        for (ActionId a : w) {
            const auto& name = p.action_names[a];
            if (name.rfind(nm.pad_prefix, 0) == 0) continue;
            s += s.empty() ? name : " " + name;
        }
        out.insert(s);
    }
    return out;
}

// Every word over the non-padding actions up to max_len, for n = 1..n_max:
// answer_bp_mq against direct simulation. Returns the number of (w,n) pairs
// checked and the first disagreement.
struct MqReport {
    std::size_t checked = 0;
    std::optional<std::string> disagreement;
};

inline MqReport mq_agreement(const std::vector<Dfa>& dfas, int max_len, int n_max) {
    const Protocol p = intersection_bp(dfas);
    const ReservedNames nm;
    std::vector<ActionId> letters;
    for (ActionId a = 0; a < p.num_actions(); ++a)
        if (p.action_names[a].rfind(nm.pad_prefix, 0) != 0) letters.push_back(a);
    MqReport rep;
    for (int n = 1; n <= n_max && !rep.disagreement; ++n) {
        std::vector<std::string> names;
        std::function<void(const std::optional<Config>&)> rec = [&](const std::optional<Config>& c) {
            if (rep.disagreement) return;
            ++rep.checked;
            if (answer_bp_mq(dfas, names, n) != c.has_value()) {
                std::ostringstream o;
                o << "n=" << n << " w=";
                for (const auto& s : names) o << s << ' ';
                rep.disagreement = o.str();
                return;
            }
            if (static_cast<int>(names.size()) == max_len) return;
            for (ActionId a : letters) {
                std::optional<Config> next;
                if (c && enabled(p, *c, a)) next = step(p, *c, a);
                names.push_back(p.action_names[a]);
                rec(next);
                names.pop_back();
            }
        };
        rec(initial_config(p, n));
    }
    return rep;
}

// Least process count enabling the action, and the shortest witness over all
// counts from there up to n_max.
struct WitnessReport {
    std::optional<int> min_n;
    std::optional<Word> shortest;
    int shortest_n = 0;
};

inline WitnessReport action_witness(const Protocol& p, ActionId a, int n_max, int len_budget) {
    WitnessReport r;
    r.min_n = min_processes_for_action(p, a, n_max, len_budget);
    if (!r.min_n) return r;
    for (int n = *r.min_n; n <= n_max; ++n) {
        auto w = shortest_word_with_action(p, a, n, len_budget);
        if (w && (!r.shortest || w->size() < r.shortest->size())) {
            r.shortest = w;
            r.shortest_n = n;
        }
    }
    return r;
}

// every k-state hypothesis over the sample alphabet, checked by simulation;
// s0 = 0 up to renaming
inline bool brute_force_sat(const Sample& s, int k) {
    const int na = static_cast<int>(s.alphabet.size());
    const int vars = 2 * na + na * k;
    long total = 1;
    for (int i = 0; i < vars; ++i) total *= k;
    for (long code = 0; code < total; ++code) {
        long c = code;
        Hypothesis h;
        h.k = k;
        h.actions = s.alphabet;
        h.sample_actions = na;
        h.st.resize(na);
        h.bang.resize(na);
        h.resp.assign(na, std::vector<State>(k));
        for (int a = 0; a < na; ++a) {
            h.st[a] = static_cast<int>(c % k), c /= k;
            h.bang[a] = static_cast<int>(c % k), c /= k;
            for (int x = 0; x < k; ++x) h.resp[a][x] = static_cast<int>(c % k), c /= k;
        }
        // padding covers whatever the sample actions leave uncovered
        std::vector<char> cov(k, 0);
        for (int a = 0; a < na; ++a) cov[h.st[a]] = 1;
        for (int x = 0; x < k; ++x)
            if (!cov[x]) {
                h.actions.push_back("pad" + std::to_string(x));
                h.st.push_back(x);
                h.bang.push_back(x);
                std::vector<State> id(k);
                for (int y = 0; y < k; ++y) id[y] = y;
                h.resp.push_back(id);
            }
        if (consistent_with(s, h.to_protocol()).consistent) return true;
    }
    return false;
}

}  // namespace oracle
