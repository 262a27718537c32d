#include "bplearn/reductions.hpp"

#include <algorithm>
#include <set>

namespace bpl {

// ---------- DFA ----------

std::optional<int> Dfa::letter(std::string_view name) const {
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (sigma[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

int Dfa::run(const std::vector<int>& w) const {
    int q = initial;
    for (int l : w) q = delta[q][l];
    return q;
}

bool Dfa::accepts(const std::vector<int>& w) const { return accepting[run(w)] != 0; }

bool Dfa::accepts(const std::vector<std::string>& w) const {
    std::vector<int> ids;
    for (const auto& s : w) {
        auto l = letter(s);
        if (!l) throw UnknownAction("letter not in the DFA alphabet: " + s);
        ids.push_back(*l);
    }
    return accepts(ids);
}

std::vector<std::string> Dfa::validate() const {
    std::vector<std::string> out;
    const int nq = static_cast<int>(states.size());
    if (nq == 0) out.push_back("no states");
    if (sigma.empty()) out.push_back("empty alphabet");
    if (std::set<std::string>(states.begin(), states.end()).size() != states.size()) out.push_back("duplicate state");
    if (std::set<std::string>(sigma.begin(), sigma.end()).size() != sigma.size()) out.push_back("duplicate letter");
    if (initial < 0 || initial >= nq) out.push_back("initial state out of range");
    if (static_cast<int>(accepting.size()) != nq) out.push_back("accepting flags do not match the states");
    if (static_cast<int>(delta.size()) != nq) {
        out.push_back("transition table does not match the states");
        return out;
    }
    for (int q = 0; q < nq; ++q) {
        if (delta[q].size() != sigma.size()) {
            out.push_back("incomplete transitions from " + states[q]);
            continue;
        }
        for (int t : delta[q])
            if (t < 0 || t >= nq) out.push_back("transition target out of range from " + states[q]);
    }
    return out;
}

Dfa random_dfa(Rng& rng, int states, const std::vector<std::string>& sigma) {
    Dfa d;
    d.sigma = sigma;
    std::uniform_int_distribution<int> pick(0, states - 1), coin(0, 1);
    for (int q = 0; q < states; ++q) {
        d.states.push_back("q" + std::to_string(q));
        std::vector<int> row;
        for (std::size_t l = 0; l < sigma.size(); ++l) row.push_back(pick(rng));
        d.delta.push_back(std::move(row));
        d.accepting.push_back(static_cast<char>(coin(rng)));
    }
    return d;
}

// ---------- CNF ----------

std::vector<std::string> AllEq3Cnf::validate() const {
    std::vector<std::string> out;
    if (num_vars < 1) out.push_back("no variables");
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        const auto& c = clauses[i];
        const std::string where = "clause " + std::to_string(i + 1);
        for (int l : c)
            if (l == 0 || std::abs(l) > num_vars) out.push_back(where + ": literal out of range");
        if (!((c[0] > 0 && c[1] > 0 && c[2] > 0) || (c[0] < 0 && c[1] < 0 && c[2] < 0)))
            out.push_back(where + ": mixed polarity");
    }
    return out;
}

bool AllEq3Cnf::satisfied_by(const std::vector<bool>& assignment) const {
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        bool sat = false;
        for (int l : clauses[i]) sat = sat || (assignment.at(std::abs(l) - 1) == (l > 0));
        if (!sat) return false;
    }
    return true;
}

// ---------- reserved names ----------

ReservedNames ReservedNames::literal() {
    ReservedNames r;
    r.i = "i";
    r.dollar = "$";
    r.top = "⊤";
    r.bot = "⊥";
    r.x = "x";
    r.c = "c";
    r.s = "s";
    r.h = "h";
    r.g = "g";
    r.pad_prefix = "";
    return r;
}

std::vector<std::string> ReservedNames::all() const { return {i, dollar, top, bot, x}; }

namespace {

void check_disjoint(const std::vector<std::string>& user, const std::vector<std::string>& reserved,
                    const std::string& what) {
    std::set<std::string> r(reserved.begin(), reserved.end());
    if (r.size() != reserved.size()) throw ReservedNameCollision(what + ": generated names collide with each other");
    for (const auto& u : user)
        if (r.count(u)) throw ReservedNameCollision(what + ": '" + u + "' is a reserved name");
}

void require_valid(const Dfa& d) {
    auto diag = d.validate();
    if (!diag.empty()) throw InvalidProtocol("invalid DFA: " + diag.front());
}

}  // namespace

// ---------- DFA simulation ----------

Protocol dfa_to_bp(const Dfa& d, const ReservedNames& nm) {
    require_valid(d);
    std::vector<std::string> pads;
    for (const auto& q : d.states) pads.push_back(nm.pad_prefix + q);
    {
        std::vector<std::string> reserved_states{nm.i, nm.c, nm.x, nm.top, nm.bot};
        check_disjoint(d.states, reserved_states, "states");
        std::vector<std::string> reserved_actions = nm.all();
        reserved_actions.insert(reserved_actions.end(), pads.begin(), pads.end());
        check_disjoint(d.sigma, reserved_actions, "actions");
    }

    ProtocolBuilder b;
    const State si = b.st(nm.i);
    std::vector<State> q;
    for (const auto& name : d.states) q.push_back(b.st(name));
    const State sc = b.st(nm.c), sx = b.st(nm.x), stop = b.st(nm.top), sbot = b.st(nm.bot);
    b.set_initial(si);

    const ActionId ai = b.act(nm.i);
    b.send(ai, si, q[d.initial]).recv(ai, si, sc);
    for (std::size_t l = 0; l < d.sigma.size(); ++l) {
        const ActionId a = b.act(d.sigma[l]);
        b.send(a, sc, sc);
        for (std::size_t p = 0; p < q.size(); ++p) b.recv(a, q[p], q[d.delta[p][l]]);
    }
    const ActionId ad = b.act(nm.dollar);
    b.send(ad, sc, sx).recv(ad, sc, sx);
    for (std::size_t p = 0; p < q.size(); ++p) b.recv(ad, q[p], d.accepting[p] ? stop : sbot);
    const ActionId ax = b.act(nm.x);
    b.send(ax, sx, sx);
    const ActionId at = b.act(nm.top);
    b.send(at, stop, stop).recv(at, sx, stop);
    const ActionId ab = b.act(nm.bot);
    b.send(ab, sbot, sbot).recv(ab, sx, sbot);
    for (std::size_t p = 0; p < q.size(); ++p) b.send(b.act(pads[p]), q[p], q[p]);
    return b.build();
}

std::pair<Sample, int> dfa_sample_to_bp_sample(const DfaSample& src, int k, const std::vector<std::string>& sigma,
                                                const ReservedNames& nm) {
    const auto reserved = nm.all();
    check_disjoint(sigma, reserved, "alphabet");
    for (const auto& [w, label] : src)
        for (const auto& l : w)
            if (std::find(sigma.begin(), sigma.end(), l) == sigma.end()) {
                if (std::find(reserved.begin(), reserved.end(), l) != reserved.end())
                    throw ReservedNameCollision("sample word uses reserved name '" + l + "'");
                throw AlphabetMismatch("sample word uses a letter outside the alphabet: " + l);
            }

    Sample s;
    s.intern(nm.i);
    for (const auto& l : sigma) s.intern(l);
    for (const auto& r : {nm.dollar, nm.x, nm.top, nm.bot}) s.intern(r);

    using W = std::vector<std::string>;
    auto cat = [](W a, const W& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    const std::string &I = nm.i, &D = nm.dollar, &X = nm.x, &T = nm.top, &B = nm.bot;

    s.add(W{I}, 1, true);
    s.add(W{I, I}, 2, false);
    s.add(W{I, X}, 2, false);
    s.add(W{I, T}, 2, false);
    s.add(W{I, B}, 2, false);
    for (const auto& l : sigma) {
        s.add(W{I, l, I}, 2, false);
        s.add(W{I, l, X}, 2, false);
        s.add(W{I, l, D, X, I}, 2, false);
    }
    for (const auto& [w, label] : src) {
        const W iw = cat(W{I}, w);
        const W iwd = cat(iw, W{D});
        // accepted words end in top, rejected ones in bot
        const std::string& good = label ? T : B;
        const std::string& bad = label ? B : T;
        s.add(cat(iwd, W{good, good}), 2, true);
        s.add(cat(iwd, W{X, X, good, good}), 2, true);
        s.add(cat(iwd, W{T, B}), 2, false);
        s.add(cat(iwd, W{B, T}), 2, false);
        s.add(cat(iw, W{good}), 2, false);
        s.add(cat(iwd, W{bad}), 2, false);
        if (label) s.add(cat(iwd, W{T, I}), 2, false);
        s.add(cat(iwd, W{good, X}), 2, false);
        for (const auto& l : sigma) {
            s.add(cat(iwd, W{good, l}), 2, false);
            s.add(cat(iwd, W{l}), 2, false);
        }
    }
    return {std::move(s), k + 5};
}

// ---------- all-eq-3SAT ----------

namespace {

std::string a_name(int j) { return "a" + std::to_string(j); }

}  // namespace

std::pair<Sample, int> alleq3sat_to_sample(const AllEq3Cnf& phi, SatSampleVariant variant) {
    auto diag = phi.validate();
    if (!diag.empty()) throw InvalidProtocol("invalid formula: " + diag.front());
    const int m = static_cast<int>(phi.clauses.size()), n = phi.num_vars, L = m + n;

    Sample s;
    for (int j = 1; j <= L; ++j) s.intern(a_name(j));
    for (const char* x : {"a", "b", "c", "t", "f"}) s.intern(x);

    using W = std::vector<std::string>;
    auto prefix = [](int i) {
        W w;
        for (int j = 1; j <= i; ++j) w.push_back(a_name(j));
        return w;
    };
    auto with = [](W w, std::initializer_list<std::string> tail) {
        w.insert(w.end(), tail);
        return w;
    };
    auto in_clause = [&](int i, int v) {
        for (int l : phi.clauses[i - 1])
            if (std::abs(l) == v) return true;
        return false;
    };

    // P_1
    s.add(with(prefix(L), {"a", "a"}), 1, true);
    s.add(W{"b", "c", "c"}, 1, true);
    // P_2
    for (int i = 1; i <= m; ++i) {
        if (phi.positive(i - 1)) s.add(with(prefix(i), {"b", "c", "t", "t"}), 2, true);
        else s.add(with(prefix(i), {"b", "c", "f", "f"}), 2, true);
    }
    // N_1
    for (int i = 1; i < L; ++i)
        for (int j = 1; j <= L; ++j)
            if (j != i + 1) s.add(with(prefix(i), {a_name(j)}), 1, false);
    for (const W& w : {W{"a"}, W{"b", "a"}, W{"b", "b"}, W{"c"}, W{"t"}, W{"f"}, W{"b", "c", "a"},
                       W{"b", "c", "t"}, W{"b", "c", "f"}})
        s.add(w, 1, false);
    // N_2
    const bool strong = variant == SatSampleVariant::Strengthened;
    for (int i = 1; i <= m; ++i) {
        for (int j = strong ? 1 : i; j <= m; ++j) {
            W w = with(prefix(i), {"b"});
            for (int t = j; t <= L; ++t) w.push_back(a_name(t));
            s.add(w, 2, false);
        }
        for (int v = 1; v <= n; ++v) {
            if (in_clause(i, v)) continue;
            W w = with(prefix(i), {"b"});
            for (int t = m + v; t <= L; ++t) w.push_back(a_name(t));
            s.add(w, 2, false);
        }
        s.add(with(prefix(i), {"b", "c", "t", "f"}), 2, false);
        s.add(with(prefix(i), {"b", "c", "f", "t"}), 2, false);
    }
    for (int i = 1; i <= L; ++i)
        for (const char* x : {"c", "t", "f"}) s.add(with(prefix(i), {x}), 2, false);
    for (int i = 1; i < L; ++i) s.add(with(prefix(i), {"a"}), 2, false);
    for (int i = 1; i <= m; ++i)
        for (int j = m; j <= L - 1; ++j)
            for (int k = j; k <= L - 1; ++k) {
                W w = with(prefix(i), {"b"});
                for (int t = j + 1; t <= k; ++t) w.push_back(a_name(t));
                w.push_back("a");
                s.add(w, 2, false);
            }
    if (strong) {
        // Without these a hypothesis can route b?? to a state that never
        // reaches t or f, or let the b-sender answer a second b.
        for (int i = 1; i <= m; ++i) {
            s.add(with(prefix(i), {"b", "t"}), 2, false);
            s.add(with(prefix(i), {"b", "f"}), 2, false);
        }
        s.add(W{"b", "b", "c", "t"}, 2, false);
        s.add(W{"b", "b", "c", "f"}, 2, false);
        // Three processes pin the c state: two b's leave two processes in c,
        // and a c?? out of c into T or F would fake a satisfied clause.
        s.add(W{"b", "b"}, 3, true);
        s.add(W{"b", "b", "b", "b"}, 3, false);
        for (const char* x : {"a", "t", "f"}) s.add(W{"b", "b", x}, 3, false);
        for (int j = 2; j <= L; ++j) s.add(W{"b", "b", a_name(j)}, 3, false);
        s.add(W{"b", "b", "c", "t"}, 3, false);
        s.add(W{"b", "b", "c", "f"}, 3, false);
    }
    return {normalize(s), n + m + 4};
}

Protocol assignment_to_bp(const AllEq3Cnf& phi, const std::vector<bool>& assignment) {
    auto diag = phi.validate();
    if (!diag.empty()) throw InvalidProtocol("invalid formula: " + diag.front());
    if (static_cast<int>(assignment.size()) != phi.num_vars)
        throw AssignmentDoesNotSatisfy("assignment has the wrong number of variables");
    const int m = static_cast<int>(phi.clauses.size()), n = phi.num_vars, L = m + n;

    // the variable each clause points at
    std::vector<int> chosen(m + 1, 0);
    for (int i = 1; i <= m; ++i) {
        for (int l : phi.clauses[i - 1])
            if (assignment[std::abs(l) - 1] == (l > 0)) {
                chosen[i] = std::abs(l);
                break;
            }
        if (chosen[i] == 0) throw AssignmentDoesNotSatisfy("clause " + std::to_string(i) + " is not satisfied");
    }

    ProtocolBuilder b;
    // states 1..m are the clause states, m+v the state of variable v
    std::vector<State> st(L + 1);
    for (int j = 1; j <= L; ++j) st[j] = b.st(std::to_string(j));
    const State sc = b.st("c");
    b.st("a");
    const State sT = b.st("T"), sF = b.st("F");
    b.set_initial(st[1]);
    for (int j = 1; j <= L; ++j) b.send(a_name(j), std::to_string(j), j == L ? "a" : std::to_string(j + 1));
    b.send("a", "a", "a");
    const ActionId ab = b.act("b");
    b.send(ab, st[1], sc);
    // a process that has sent a_1..a_i sits in state i+1 when b arrives
    for (int i = 1; i <= m; ++i) b.recv(ab, st[i + 1], st[m + chosen[i]]);
    const ActionId ac = b.act("c");
    b.send(ac, sc, sc);
    for (int v = 1; v <= n; ++v) b.recv(ac, st[m + v], assignment[v - 1] ? sT : sF);
    b.send(b.act("t"), sT, sT);
    b.send(b.act("f"), sF, sF);
    return b.build();
}

// ---------- DFA intersection ----------

namespace {

struct IntersectionNames {
    std::vector<std::string> h, g, pads;
    std::vector<std::vector<std::string>> q;   // per DFA
};

IntersectionNames intersection_names(const std::vector<Dfa>& dfas, const ReservedNames& nm) {
    IntersectionNames out;
    for (std::size_t i = 0; i < dfas.size(); ++i) {
        out.h.push_back(nm.h + std::to_string(i + 1));
        out.g.push_back(nm.g + std::to_string(i + 1));
        std::vector<std::string> qs;
        for (const auto& q : dfas[i].states) {
            qs.push_back("D" + std::to_string(i + 1) + "." + q);
            out.pads.push_back(nm.pad_prefix + qs.back());
        }
        out.q.push_back(std::move(qs));
    }
    return out;
}

void check_intersection_input(const std::vector<Dfa>& dfas) {
    if (dfas.empty()) throw InvalidProtocol("need at least one DFA");
    for (const auto& d : dfas) {
        require_valid(d);
        if (d.sigma != dfas.front().sigma) throw AlphabetMismatch("DFAs do not share an alphabet");
    }
}

}  // namespace

std::vector<std::string> intersection_prefix(int k, const ReservedNames& nm) {
    std::vector<std::string> w;
    for (int i = 1; i <= k; ++i) w.push_back(nm.h + std::to_string(i));
    w.push_back(nm.s);
    return w;
}

Protocol intersection_bp(const std::vector<Dfa>& dfas, const ReservedNames& nm) {
    check_intersection_input(dfas);
    const auto names = intersection_names(dfas, nm);
    const int k = static_cast<int>(dfas.size());
    const auto& sigma = dfas.front().sigma;
    {
        std::vector<std::string> reserved{nm.s, nm.dollar, nm.bot, nm.x};
        for (auto* v : {&names.h, &names.g, &names.pads}) reserved.insert(reserved.end(), v->begin(), v->end());
        check_disjoint(sigma, reserved, "actions");
    }

    ProtocolBuilder b;
    std::vector<State> h, g;
    for (int i = 0; i < k; ++i) h.push_back(b.st(names.h[i]));
    for (int i = 0; i < k; ++i) g.push_back(b.st(names.g[i]));
    const State ss = b.st(nm.s), sc = b.st(nm.c), sx = b.st(nm.x), sbot = b.st(nm.bot);
    std::vector<std::vector<State>> q(k);
    for (int i = 0; i < k; ++i)
        for (const auto& name : names.q[i]) q[i].push_back(b.st(name));
    b.set_initial(h[0]);

    // h_i!! peels one process off into g_i, the rest walk on
    for (int i = 0; i < k; ++i) {
        const ActionId a = b.act(names.h[i]);
        b.send(a, h[i], g[i]).recv(a, h[i], i + 1 < k ? h[i + 1] : ss);
    }
    const ActionId as = b.act(nm.s);
    b.send(as, ss, sc).recv(as, ss, sc);
    for (int i = 0; i < k; ++i) b.recv(as, g[i], q[i][dfas[i].initial]);
    for (std::size_t l = 0; l < sigma.size(); ++l) {
        const ActionId a = b.act(sigma[l]);
        b.send(a, sc, sc);
        for (int i = 0; i < k; ++i)
            for (std::size_t p = 0; p < q[i].size(); ++p) b.recv(a, q[i][p], q[i][dfas[i].delta[p][l]]);
    }
    const ActionId ad = b.act(nm.dollar);
    b.send(ad, sc, sx).recv(ad, sc, sx);
    for (int i = 0; i < k; ++i)
        for (std::size_t p = 0; p < q[i].size(); ++p) b.recv(ad, q[i][p], dfas[i].accepting[p] ? sx : sbot);
    const ActionId ab = b.act(nm.bot);
    b.send(ab, sbot, sx).recv(ab, sbot, sx);
    b.send(b.act(nm.x), sx, sx);
    for (int i = 0; i < k; ++i) b.send(b.act(names.g[i]), g[i], g[i]);
    std::size_t pad = 0;
    for (int i = 0; i < k; ++i)
        for (auto st : q[i]) b.send(b.act(names.pads[pad++]), st, st);
    return b.build();
}

bool answer_bp_mq(const std::vector<Dfa>& dfas, const std::vector<std::string>& w, int n, const ReservedNames& nm) {
    check_intersection_input(dfas);
    const auto names = intersection_names(dfas, nm);
    const int k = static_cast<int>(dfas.size());
    const Dfa& d0 = dfas.front();

    enum class Kind { H, G, S, Sigma, Dollar, Bot, X };
    struct Letter {
        Kind kind;
        int index;
    };
    // w' = w without the letters outside A (the state paddings)
    std::vector<Letter> v;
    for (const auto& l : w) {
        if (std::find(names.pads.begin(), names.pads.end(), l) != names.pads.end()) continue;
        if (auto s = d0.letter(l)) v.push_back({Kind::Sigma, *s});
        else if (auto it = std::find(names.h.begin(), names.h.end(), l); it != names.h.end())
            v.push_back({Kind::H, static_cast<int>(it - names.h.begin())});
        else if (auto jt = std::find(names.g.begin(), names.g.end(), l); jt != names.g.end())
            v.push_back({Kind::G, static_cast<int>(jt - names.g.begin())});
        else if (l == nm.s) v.push_back({Kind::S, 0});
        else if (l == nm.dollar) v.push_back({Kind::Dollar, 0});
        else if (l == nm.bot) v.push_back({Kind::Bot, 0});
        else if (l == nm.x) v.push_back({Kind::X, 0});
        else throw UnknownAction("not an action of the intersection protocol: " + l);
    }

    // pattern: prefix of h_1 u_1 ... h_k u_k s Sigma* $ {bot,x}*, u_i over g_1..g_i
    std::size_t pos = 0;
    int hs = 0;
    while (pos < v.size()) {
        if (v[pos].kind == Kind::H && v[pos].index == hs) ++hs;
        else if (!(v[pos].kind == Kind::G && v[pos].index < hs)) break;
        ++pos;
    }
    if (pos == v.size()) return n > k || hs <= n;   // no s yet
    if (hs < k || v[pos].kind != Kind::S) return false;
    ++pos;
    std::vector<int> u;
    while (pos < v.size() && v[pos].kind == Kind::Sigma) u.push_back(v[pos++].index);
    if (pos < v.size()) {
        if (v[pos].kind != Kind::Dollar) return false;
        ++pos;
    }
    int bots = 0;
    for (; pos < v.size(); ++pos) {
        if (v[pos].kind == Kind::Bot) ++bots;
        else if (v[pos].kind != Kind::X) return false;
    }
    if (bots > 1) return false;
    if (n <= k) return false;
    if (bots == 0) return true;
    bool in_all = true;
    for (const auto& d : dfas) in_all = in_all && d.accepts(u);
    return !in_all;
}

}  // namespace bpl
