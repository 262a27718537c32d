#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>

#include "bplearn/inference.hpp"

namespace bpl {

std::vector<std::string> Hypothesis::fresh_actions() const {
    return {actions.begin() + sample_actions, actions.end()};
}

Protocol Hypothesis::to_protocol() const {
    ProtocolBuilder b;
    for (int s = 0; s < k; ++s) b.add_state("q" + std::to_string(s));
    b.set_initial(s0);
    for (std::size_t a = 0; a < actions.size(); ++a) {
        ActionId id = b.add_action(actions[a]);
        b.send(id, st[a], bang[a]);
        for (int s = 0; s < k; ++s) b.recv(id, s, resp[a][s]);
    }
    return b.build(false);
}

int ConstraintProgram::count_family(int family) const {
    return static_cast<int>(
        std::count_if(assertions.begin(), assertions.end(), [family](const Assertion& a) { return a.family == family; }));
}

namespace {

struct Builder {
    ConstraintProgram& prog;

    int term(TermKind k, int index = -1, int arg = -1) {
        prog.terms.push_back({k, index, arg});
        return static_cast<int>(prog.terms.size() - 1);
    }
    int formula(Formula f) {
        prog.formulas.push_back(std::move(f));
        return static_cast<int>(prog.formulas.size() - 1);
    }
    int eq(int l, int r) { return formula({FormulaKind::Eq, l, r, {}}); }
    int neq(int l, int r) { return formula({FormulaKind::Neq, l, r, {}}); }
    int conj(std::vector<int> kids) {
        if (kids.size() == 1) return kids[0];
        return formula({kids.empty() ? FormulaKind::True : FormulaKind::And, -1, -1, std::move(kids)});
    }
    int disj(std::vector<int> kids) {
        if (kids.size() == 1) return kids[0];
        return formula({kids.empty() ? FormulaKind::False : FormulaKind::Or, -1, -1, std::move(kids)});
    }
    void assert_(int f, int family, int entry, std::string origin) {
        prog.assertions.push_back({f, family, entry, std::move(origin)});
    }
};

}  // namespace

ConstraintProgram build_constraints(const Sample& s, int k, const BuildOptions& opts) {
    if (k < 1) throw Error("k must be >= 1");
    ConstraintProgram prog;
    prog.k = k;
    prog.mode = opts.mode;
    prog.actions = s.alphabet;
    prog.sample_actions = static_cast<int>(s.alphabet.size());
    const int pads = opts.mode == Mode::Iprime ? 0 : std::min(opts.fresh_budget, k);
    for (int i = 0; i < pads; ++i) {
        std::string name = "pad" + std::to_string(i);
        while (s.find(name)) name = "_" + name;
        prog.actions.push_back(name);
    }
    Builder b{prog};
    const int s0 = b.term(TermKind::S0);
    std::vector<int> st(prog.actions.size()), konst(k);
    for (std::size_t a = 0; a < prog.actions.size(); ++a) st[a] = b.term(TermKind::St, static_cast<int>(a));
    for (int c = 0; c < k; ++c) konst[c] = b.term(TermKind::Const, c);

    const auto as = s.positive_alphabet();
    const auto ap = apartness(s);
    for (std::size_t i = 0; i < as.size(); ++i)
        for (std::size_t j = i + 1; j < as.size(); ++j) {
            const ActionId x = as[i], y = as[j];
            const std::string tag = s.alphabet[x] + "," + s.alphabet[y];
            if (ap[x][y]) b.assert_(b.neq(st[x], st[y]), 1, -1, "apart " + tag);
            else if (opts.mode == Mode::Iprime) b.assert_(b.eq(st[x], st[y]), 1, -1, "similar " + tag);
        }

    for (int c = 0; c < k; ++c) {
        std::vector<int> kids;
        for (std::size_t a = 0; a < prog.actions.size(); ++a) kids.push_back(b.eq(st[a], konst[c]));
        b.assert_(b.disj(kids), 2, -1, "state " + std::to_string(c) + " sends something");
    }

    std::vector<char> initial(s.alphabet.size(), 0);
    for (const auto& e : s.entries)
        if (e.label && !e.word.empty()) initial[e.word[0]] = 1;
    for (ActionId a : as)
        if (initial[a]) b.assert_(b.eq(st[a], s0), 3, -1, "initial " + s.alphabet[a]);

    // one assertion pair per extreme entry; processes are numbered 0..n-1 and
    // the sender at each step is the lowest-numbered process in st(a), which
    // keeps every p-variable functionally determined
    const auto pn = positive_negative_sets(s);
    std::set<std::pair<Word, bool>> done;
    for (std::size_t ei = 0; ei < s.entries.size(); ++ei) {
        const auto& e = s.entries[ei];
        const int extreme = e.label ? pn.min_positive.at(e.word) : pn.max_negative.at(e.word);
        if (e.n != extreme || !done.insert({e.word, e.label}).second) continue;
        const int entry = static_cast<int>(ei);
        const int L = static_cast<int>(e.word.size());
        std::vector<std::vector<int>> p(L + 1, std::vector<int>(e.n));
        for (int l = 0; l <= L; ++l)
            for (int j = 0; j < e.n; ++j) {
                prog.pvars.push_back({entry, j, l});
                p[l][j] = b.term(TermKind::PVar, static_cast<int>(prog.pvars.size() - 1));
            }
        const std::string who = s.describe(e);
        std::vector<int> init;
        for (int j = 0; j < e.n; ++j) init.push_back(b.eq(p[0][j], s0));
        b.assert_(b.conj(init), 4, entry, who);

        std::vector<int> steps, fails;
        for (int l = 1; l <= L; ++l) {
            const ActionId a = e.word[l - 1];
            std::vector<int> senders, fail;
            for (int j = 0; j < e.n; ++j) {
                std::vector<int> parts;
                for (int j2 = 0; j2 < j; ++j2) parts.push_back(b.neq(p[l - 1][j2], st[a]));
                parts.push_back(b.eq(p[l - 1][j], st[a]));
                parts.push_back(b.eq(p[l][j], b.term(TermKind::Bang, a)));
                for (int j2 = 0; j2 < e.n; ++j2)
                    if (j2 != j) parts.push_back(b.eq(p[l][j2], b.term(TermKind::Resp, a, p[l - 1][j2])));
                senders.push_back(b.conj(parts));
                fail.push_back(b.neq(p[l - 1][j], st[a]));
            }
            const int T = b.disj(senders), F = b.conj(fail);
            if (e.label) steps.push_back(T);
            else {
                steps.push_back(b.disj({F, T}));
                fails.push_back(F);
            }
        }
        if (!e.label) steps.push_back(b.disj(fails));
        b.assert_(b.conj(steps), 5, entry, who);
    }
    return prog;
}

// ---------------------------------------------------------------- evaluation

namespace {

enum V : char { F = 0, T = 1, U = 2 };

struct Assign {
    int s0 = -1;
    std::vector<int> st, bang;
    std::vector<std::vector<int>> resp;
    std::vector<int> p;
};

struct Eval {
    const ConstraintProgram& prog;
    Assign& as;
    bool blocked = false;

    int term(int t) {
        const Term& x = prog.terms[t];
        int v = -1;
        switch (x.kind) {
            case TermKind::S0: v = as.s0; break;
            case TermKind::Const: return x.index;
            case TermKind::St: v = as.st[x.index]; break;
            case TermKind::Bang: v = as.bang[x.index]; break;
            case TermKind::PVar: return as.p[x.index];
            case TermKind::Resp: {
                const int arg = term(x.arg);
                if (arg < 0) return -1;
                v = as.resp[x.index][arg];
                break;
            }
        }
        if (v < 0) blocked = true;
        return v;
    }

    V formula(int f) {
        const Formula& x = prog.formulas[f];
        switch (x.kind) {
            case FormulaKind::True: return T;
            case FormulaKind::False: return F;
            case FormulaKind::Eq:
            case FormulaKind::Neq: {
                const int l = term(x.lhs), r = term(x.rhs);
                if (l < 0 || r < 0) return U;
                return ((l == r) == (x.kind == FormulaKind::Eq)) ? T : F;
            }
            case FormulaKind::And: {
                V out = T;
                for (int c : x.kids) {
                    V v = formula(c);
                    if (v == F) return F;
                    if (v == U) out = U;
                }
                return out;
            }
            case FormulaKind::Or: {
                V out = F;
                for (int c : x.kids) {
                    V v = formula(c);
                    if (v == T) return T;
                    if (v == U) out = U;
                }
                return out;
            }
        }
        return U;
    }
};

struct Scope {
    std::vector<int> assertions;
    std::vector<int> pvars;
};

std::vector<Scope> scopes_of(const ConstraintProgram& prog) {
    // scope 0 holds the p-free assertions
    std::map<int, Scope> by_entry;
    for (std::size_t i = 0; i < prog.assertions.size(); ++i)
        by_entry[prog.assertions[i].entry].assertions.push_back(static_cast<int>(i));
    for (std::size_t v = 0; v < prog.pvars.size(); ++v) by_entry[prog.pvars[v].entry].pvars.push_back(static_cast<int>(v));
    std::vector<Scope> out;
    for (auto& [e, sc] : by_entry) out.push_back(std::move(sc));
    return out;
}

// Existential search over the scope's p-variables. U means an unassigned
// function symbol was needed.
V scope_value(const ConstraintProgram& prog, Assign& as, const Scope& sc, std::size_t next = 0) {
    Eval ev{prog, as};
    V all = T;
    for (int a : sc.assertions) {
        V v = ev.formula(prog.assertions[a].formula);
        if (v == F) return F;
        if (v == U) all = U;
    }
    if (all == T) return T;
    if (ev.blocked) return U;
    while (next < sc.pvars.size() && as.p[sc.pvars[next]] >= 0) ++next;
    if (next == sc.pvars.size()) return U;   // cannot happen without blocking
    const int var = sc.pvars[next];
    bool unknown = false;
    for (int v = 0; v < prog.k; ++v) {
        as.p[var] = v;
        V r = scope_value(prog, as, sc, next + 1);
        as.p[var] = -1;
        if (r == T) return T;
        if (r == U) unknown = true;
    }
    return unknown ? U : F;
}

Assign empty_assign(const ConstraintProgram& prog) {
    Assign as;
    as.st.assign(prog.actions.size(), -1);
    as.bang.assign(prog.sample_actions, -1);
    as.resp.assign(prog.sample_actions, std::vector<int>(prog.k, -1));
    as.p.assign(prog.pvars.size(), -1);
    return as;
}

}  // namespace

bool evaluate(const ConstraintProgram& prog, const Hypothesis& h) {
    if (h.k != prog.k) return false;
    if (h.sample_actions != prog.sample_actions) throw Error("hypothesis and program disagree on the alphabet");
    Assign as = empty_assign(prog);
    as.s0 = h.s0;
    for (int a = 0; a < prog.sample_actions; ++a) {
        as.st[a] = h.st[a];
        as.bang[a] = h.bang[a];
        as.resp[a] = h.resp[a];
    }
    // the hypothesis may use fewer padding actions than declared; the spare
    // ones sit on the initial state
    const std::size_t hp = h.actions.size() - h.sample_actions;
    const std::size_t pp = prog.actions.size() - prog.sample_actions;
    if (hp > pp) return false;
    for (std::size_t i = 0; i < pp; ++i) as.st[prog.sample_actions + i] = i < hp ? h.st[h.sample_actions + i] : h.s0;
    for (const auto& sc : scopes_of(prog))
        if (scope_value(prog, as, sc) != T) return false;
    return true;
}

// ---------------------------------------------------------------- program solver

namespace {

struct ProgramSearch {
    const ConstraintProgram& prog;
    std::vector<Scope> scopes;
    Assign as;
    std::chrono::steady_clock::time_point deadline;
    std::size_t nodes = 0;

    // variable order: s0, st[*], bang[*], resp[a][s]
    int num_vars() const {
        return 1 + static_cast<int>(as.st.size()) + prog.sample_actions * (1 + prog.k);
    }
    int& slot(int v) {
        if (v == 0) return as.s0;
        v -= 1;
        if (v < static_cast<int>(as.st.size())) return as.st[v];
        v -= static_cast<int>(as.st.size());
        if (v < prog.sample_actions) return as.bang[v];
        v -= prog.sample_actions;
        return as.resp[v / prog.k][v % prog.k];
    }

    bool dfs(int var, int max_used, std::vector<char> done) {
        if ((++nodes & 1023) == 0 && std::chrono::steady_clock::now() > deadline)
            throw TimeBudgetExceeded("program solver: time budget exhausted");
        bool all = true;
        for (std::size_t i = 0; i < scopes.size(); ++i) {
            if (done[i]) continue;
            V v = scope_value(prog, as, scopes[i]);
            if (v == F) return false;
            if (v == T) done[i] = 1;
            else all = false;
        }
        if (var == num_vars()) return all;
        int& x = slot(var);
        const int top = std::min(prog.k - 1, max_used + 1);
        for (int v = 0; v <= top; ++v) {
            x = v;
            if (dfs(var + 1, std::max(max_used, v), done)) return true;
        }
        x = -1;
        return false;
    }
};

}  // namespace

SolveResult solve(const ConstraintProgram& prog, long time_ms) {
    ProgramSearch ps{prog, scopes_of(prog), empty_assign(prog),
                     std::chrono::steady_clock::now() + std::chrono::milliseconds(time_ms)};
    SolveResult r;
    const bool sat = ps.dfs(0, -1, std::vector<char>(ps.scopes.size(), 0));
    r.nodes = ps.nodes;
    if (!sat) return r;
    Hypothesis h;
    h.k = prog.k;
    h.s0 = ps.as.s0;
    h.actions = prog.actions;
    h.sample_actions = prog.sample_actions;
    h.st = ps.as.st;
    h.bang = ps.as.bang;
    h.resp = ps.as.resp;
    for (std::size_t a = prog.sample_actions; a < prog.actions.size(); ++a) {
        h.bang.push_back(h.st[a]);
        std::vector<int> id(prog.k);
        std::iota(id.begin(), id.end(), 0);
        h.resp.push_back(id);
    }
    r.hypothesis = std::move(h);
    return r;
}

// ---------------------------------------------------------------- export

namespace {

struct Printer {
    const ConstraintProgram& prog;
    std::vector<std::string> pname;

    std::string term(int t) const {
        const Term& x = prog.terms[t];
        switch (x.kind) {
            case TermKind::S0: return "s0";
            case TermKind::Const: return "S" + std::to_string(x.index);
            case TermKind::St: return "st_" + std::to_string(x.index);
            case TermKind::Bang: return "bang_" + std::to_string(x.index);
            case TermKind::PVar: return pname[x.index];
            case TermKind::Resp: return "(resp_" + std::to_string(x.index) + " " + term(x.arg) + ")";
        }
        return "?";
    }
    std::string formula(int f) const {
        const Formula& x = prog.formulas[f];
        switch (x.kind) {
            case FormulaKind::True: return "true";
            case FormulaKind::False: return "false";
            case FormulaKind::Eq: return "(= " + term(x.lhs) + " " + term(x.rhs) + ")";
            case FormulaKind::Neq: return "(distinct " + term(x.lhs) + " " + term(x.rhs) + ")";
            case FormulaKind::And:
            case FormulaKind::Or: {
                std::string out = x.kind == FormulaKind::And ? "(and" : "(or";
                for (int c : x.kids) out += " " + formula(c);
                return out + ")";
            }
        }
        return "?";
    }
};

}  // namespace

std::string export_smtlib(const ConstraintProgram& prog) {
    std::ostringstream os;
    os << "; broadcast protocol consistency, k = " << prog.k
       << (prog.mode == Mode::Iprime ? ", similarity classes forced" : "") << "\n";
    os << "(set-logic ALL)\n";
    for (std::size_t a = 0; a < prog.actions.size(); ++a)
        os << "; action " << a << " = " << prog.actions[a]
           << (static_cast<int>(a) >= prog.sample_actions ? " (padding)" : "") << "\n";
    os << "(declare-datatype State (";
    for (int c = 0; c < prog.k; ++c) os << (c ? " " : "") << "(S" << c << ")";
    os << "))\n(declare-const s0 State)\n";
    for (std::size_t a = 0; a < prog.actions.size(); ++a) {
        os << "(declare-const st_" << a << " State)\n";
        if (static_cast<int>(a) < prog.sample_actions)
            os << "(declare-const bang_" << a << " State)\n(declare-fun resp_" << a << " (State) State)\n";
    }
    Printer pr{prog, {}};
    for (const auto& v : prog.pvars) {
        pr.pname.push_back("p_e" + std::to_string(v.entry) + "_j" + std::to_string(v.process) + "_l" +
                           std::to_string(v.step));
        os << "(declare-const " << pr.pname.back() << " State)\n";
    }
    for (const auto& a : prog.assertions) {
        os << "; family " << a.family << ": " << a.origin << "\n";
        os << "(assert " << pr.formula(a.formula) << ")\n";
    }
    os << "(check-sat)\n";
    return os.str();
}

}  // namespace bpl
