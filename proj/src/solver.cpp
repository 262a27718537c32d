// Demand-driven backtracking. Entries are simulated lazily: a run stops at
// the first function value that is still open and that value becomes the
// next branching variable. Entries already satisfied stay satisfied as the
// assignment only grows, so each branch resumes at the entry that asked.

#include <algorithm>
#include <chrono>
#include <numeric>

#include "bplearn/inference.hpp"

namespace bpl {

namespace {

enum class Outcome { Satisfied, Violated, Need };
enum class VarKind { St, Bang, Resp };

struct Need {
    VarKind kind;
    int a, s;
};

struct Native {
    int k;
    int num_actions;
    Mode mode;
    int pads;
    std::vector<SampleEntry> entries;

    std::vector<int> st, bang;
    std::vector<std::vector<int>> resp;
    std::vector<int> cover;   // st-image multiplicity per state
    int unassigned_st;

    // I' bookkeeping
    std::vector<int> cls, class_state, state_class;

    std::chrono::steady_clock::time_point deadline;
    std::size_t nodes = 0;
    Need need{};
    Config cfg, nxt;

    Outcome check(const SampleEntry& e) {
        cfg.assign(k, 0);
        cfg[0] = e.n;
        for (ActionId x : e.word) {
            if (st[x] < 0) {
                need = {VarKind::St, x, -1};
                return Outcome::Need;
            }
            if (cfg[st[x]] == 0) return e.label ? Outcome::Violated : Outcome::Satisfied;
            if (bang[x] < 0) {
                need = {VarKind::Bang, x, -1};
                return Outcome::Need;
            }
            cfg[st[x]] -= 1;
            nxt.assign(k, 0);
            for (int s = 0; s < k; ++s) {
                if (cfg[s] == 0) continue;
                if (resp[x][s] < 0) {
                    need = {VarKind::Resp, x, s};
                    return Outcome::Need;
                }
                nxt[resp[x][s]] += cfg[s];
            }
            nxt[bang[x]] += 1;
            std::swap(cfg, nxt);
        }
        return e.label ? Outcome::Satisfied : Outcome::Violated;
    }

    bool coverable() const {
        int uncovered = 0;
        for (int s = 0; s < k; ++s) uncovered += cover[s] == 0;
        return uncovered <= unassigned_st + pads;
    }

    void set_st(int a, int v) {
        st[a] = v;
        ++cover[v];
        --unassigned_st;
        if (mode == Mode::Iprime && cls[a] >= 0 && class_state[cls[a]] < 0) {
            class_state[cls[a]] = v;
            state_class[v] = cls[a];
        }
    }
    void unset_st(int a, bool owned_class) {
        --cover[st[a]];
        ++unassigned_st;
        if (owned_class) {
            state_class[st[a]] = -1;
            class_state[cls[a]] = -1;
        }
        st[a] = -1;
    }

    bool dfs(std::size_t idx, int max_used) {
        if ((++nodes & 4095) == 0 && std::chrono::steady_clock::now() > deadline)
            throw TimeBudgetExceeded("solver: time budget exhausted at k=" + std::to_string(k));
        // Every entry is replayed as far as the assignment allows, so a word
        // that is already decided wrong prunes here rather than after the
        // branching on all entries ahead of it.
        std::size_t first = entries.size();
        Need nd{};
        for (std::size_t i = idx; i < entries.size(); ++i) {
            Outcome o = check(entries[i]);
            if (o == Outcome::Violated) return false;
            if (o == Outcome::Satisfied) {
                if (first == entries.size()) idx = i + 1;
                continue;
            }
            if (first == entries.size()) {
                first = i;
                nd = need;
            }
        }
        if (first < entries.size()) {
            idx = first;
            const int top = std::min(k - 1, max_used + 1);
            if (nd.kind == VarKind::St) {
                const int c = mode == Mode::Iprime ? cls[nd.a] : -1;
                if (c >= 0 && class_state[c] >= 0) {
                    set_st(nd.a, class_state[c]);
                    const bool ok = coverable() && dfs(idx, max_used);
                    if (ok) return true;
                    unset_st(nd.a, false);
                    return false;
                }
                for (int v = 0; v <= top; ++v) {
                    if (c >= 0 && state_class[v] >= 0) continue;
                    set_st(nd.a, v);
                    if (coverable() && dfs(idx, std::max(max_used, v))) return true;
                    unset_st(nd.a, c >= 0);
                }
                return false;
            }
            int& slot = nd.kind == VarKind::Bang ? bang[nd.a] : resp[nd.a][nd.s];
            for (int v = 0; v <= top; ++v) {
                slot = v;
                if (dfs(idx, std::max(max_used, v))) return true;
            }
            slot = -1;
            return false;
        }
        return coverable();
    }
};

}  // namespace

SolveResult solve_native(const Sample& raw, int k, const SolveOptions& opts) {
    if (k < 1) throw Error("k must be >= 1");
    const Sample s = normalize(raw);
    Native nv;
    nv.k = k;
    nv.num_actions = static_cast<int>(s.alphabet.size());
    nv.mode = opts.mode;
    nv.pads = opts.mode == Mode::Iprime ? 0 : std::min(opts.fresh_budget, k);
    nv.entries = s.entries;
    // small n and short words prune hardest
    std::stable_sort(nv.entries.begin(), nv.entries.end(), [](const SampleEntry& x, const SampleEntry& y) {
        if (x.n != y.n) return x.n < y.n;
        return x.word.size() < y.word.size();
    });
    nv.st.assign(nv.num_actions, -1);
    nv.bang.assign(nv.num_actions, -1);
    nv.resp.assign(nv.num_actions, std::vector<int>(k, -1));
    nv.cover.assign(k, 0);
    nv.unassigned_st = nv.num_actions;
    nv.cls.assign(nv.num_actions, -1);
    nv.class_state.clear();
    nv.state_class.assign(k, -1);
    if (opts.mode == Mode::Iprime) {
        const auto classes = similarity_partition(s);
        if (static_cast<int>(classes.size()) != k) return {};
        for (std::size_t c = 0; c < classes.size(); ++c)
            for (ActionId a : classes[c]) nv.cls[a] = static_cast<int>(c);
        nv.class_state.assign(classes.size(), -1);
    }
    nv.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(opts.time_ms);

    SolveResult r;
    const bool sat = nv.dfs(0, 0);
    r.nodes = nv.nodes;
    if (!sat) return r;

    // complete the open values: uncovered states first, then self-loops
    Hypothesis h;
    h.k = k;
    h.s0 = 0;
    h.actions = s.alphabet;
    h.sample_actions = nv.num_actions;
    std::vector<int> uncovered;
    if (opts.mode == Mode::Iprime) {
        for (int st = 0; st < k; ++st)
            if (nv.state_class[st] < 0) uncovered.push_back(st);
        std::size_t next = 0;
        for (std::size_t c = 0; c < nv.class_state.size(); ++c)
            if (nv.class_state[c] < 0) nv.class_state[c] = uncovered.at(next++);
        for (int a = 0; a < nv.num_actions; ++a)
            if (nv.st[a] < 0) nv.st[a] = nv.cls[a] >= 0 ? nv.class_state[nv.cls[a]] : 0;
        uncovered.clear();
    } else {
        for (int st = 0; st < k; ++st)
            if (nv.cover[st] == 0) uncovered.push_back(st);
        std::size_t next = 0;
        for (int a = 0; a < nv.num_actions; ++a)
            if (nv.st[a] < 0) nv.st[a] = next < uncovered.size() ? uncovered[next++] : 0;
        uncovered.erase(uncovered.begin(), uncovered.begin() + static_cast<std::ptrdiff_t>(next));
    }
    h.st = nv.st;
    h.bang = nv.bang;
    h.resp = nv.resp;
    for (int a = 0; a < nv.num_actions; ++a) {
        if (h.bang[a] < 0) h.bang[a] = h.st[a];
        for (int st = 0; st < k; ++st)
            if (h.resp[a][st] < 0) h.resp[a][st] = st;
    }
    std::vector<int> id(k);
    std::iota(id.begin(), id.end(), 0);
    for (std::size_t i = 0; i < uncovered.size(); ++i) {
        std::string name = "pad" + std::to_string(i);
        while (s.find(name)) name = "_" + name;
        h.actions.push_back(name);
        h.st.push_back(uncovered[i]);
        h.bang.push_back(uncovered[i]);
        h.resp.push_back(id);
    }
    r.hypothesis = std::move(h);
    return r;
}

}  // namespace bpl
