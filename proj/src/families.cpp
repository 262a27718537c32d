#include "bplearn/reductions.hpp"

#include <set>

namespace bpl {

Protocol family_quadratic(int m, int n, int l, QuadraticVariant variant) {
    if (m < 2 || n < 2 || l < 1) throw InvalidProtocol("family_quadratic needs m,n >= 2 and l >= 1");
    ProtocolBuilder b;
    const State i1 = b.st("i1"), i2 = b.st("i2");
    std::vector<State> left, right, help;
    for (int j = 1; j <= n; ++j) left.push_back(b.st(std::to_string(j) + "'"));
    for (int j = 1; j <= m; ++j) right.push_back(b.st(std::to_string(j)));
    for (int j = 1; j <= l; ++j) help.push_back(b.st("h" + std::to_string(j)));
    const State bot = b.st("bot"), top = b.st("top");
    b.set_initial(i1);

    const ActionId ai1 = b.act("i1"), ai2 = b.act("i2");
    b.send(ai1, i1, right[0]).recv(ai1, i1, i2);
    b.send(ai2, i2, help[0]).recv(ai2, i2, left[0]);

    std::vector<ActionId> A, H;
    for (int j = 1; j < n; ++j) {
        const ActionId a = b.act("a" + std::to_string(j));
        A.push_back(a);
        b.send(a, left[j - 1], bot).recv(a, left[j - 1], left[j]);
    }
    for (int j = 1; j <= l; ++j) {
        const ActionId h = b.act("h" + std::to_string(j));
        H.push_back(h);
        b.send(h, help[j - 1], j < l ? help[j] : bot);
        b.recv(h, left[n - 1], left[0]);
        if (variant == QuadraticVariant::Repaired)
            for (int k = 0; k + 1 < n; ++k) b.recv(h, left[k], bot);
    }
    for (ActionId a : A)
        for (int j = 0; j < m; ++j) b.recv(a, right[j], right[(j + 1) % m]);
    for (ActionId h : H)
        for (int j = 0; j < m; ++j) b.recv(h, right[j], right[(j + 1) % m]);

    const ActionId c = b.act("c");
    b.send(c, left[n - 1], bot);
    for (State s = 0; s < static_cast<State>(b.states().size()); ++s) b.recv(c, s, s == right[m - 1] ? top : bot);
    for (int j = 1; j <= m; ++j) b.send("b" + std::to_string(j), std::to_string(j), std::to_string(j));
    const ActionId at = b.act("a_top");
    b.send(at, top, top);
    for (State s = 0; s < static_cast<State>(b.states().size()); ++s) b.recv(at, s, top);
    // bot needs a send of its own
    b.send("z", "bot", "bot");
    return b.build();
}

std::vector<int> primes_up_to(int n) {
    std::vector<int> out;
    for (int p = 2; p <= n; ++p) {
        bool prime = true;
        for (int d : out) prime = prime && p % d != 0;
        if (prime) out.push_back(p);
    }
    return out;
}

namespace {

std::string primes(int count) { return std::string(static_cast<std::size_t>(count), '\''); }

struct ExpShape {
    std::vector<int> p;   // p_1 < ... < p_k
    int k = 0;
    // helper chain r (1-based) has length p_{k-r}
    int chain_len(int r) const { return p[k - r - 1]; }
    std::string chain_state(int r, int j) const { return "h" + primes(r - 1) + std::to_string(j); }
    std::string loop_state(int loop, int j) const { return std::to_string(j) + primes(loop - 1); }   // loop 1..k
    std::string d_state(int j) const { return k - 2 == 1 ? std::string("d") : "d" + std::to_string(j); }
};

ExpShape exp_shape(int n) {
    if (n < 3) throw InvalidProtocol("family_exponential needs n >= 3");
    ExpShape s;
    s.p = primes_up_to(n);
    s.k = static_cast<int>(s.p.size());
    return s;
}

}  // namespace

Protocol family_exponential(int n) {
    const ExpShape sh = exp_shape(n);
    const int k = sh.k, pk = sh.p.back();
    ProtocolBuilder b;

    std::vector<State> init;
    for (int j = 0; j < 2 * (k - 1); ++j) init.push_back(b.st("i" + std::to_string(j)));
    std::vector<std::vector<State>> loop(k + 1), chain(k);
    for (int r = 1; r < k; ++r)
        for (int j = 1; j <= sh.p[r - 1]; ++j) loop[r].push_back(b.st(sh.loop_state(r, j)));
    for (int j = 1; j <= pk; ++j) loop[k].push_back(b.st(sh.loop_state(k, j)));
    for (int r = 1; r < k; ++r)
        for (int j = 1; j <= sh.chain_len(r); ++j) chain[r].push_back(b.st(sh.chain_state(r, j)));
    std::vector<State> d;
    for (int j = 1; j <= k - 2; ++j) d.push_back(b.st(sh.d_state(j)));
    const State top = b.st("top"), bot = b.st("bot");
    b.set_initial(init[0]);

    // i_{2(r-1)} puts a token on small loop r, i_{2r-1} starts helper chain r,
    // the last receive sends everyone left into the big loop
    for (int j = 0; j < 2 * (k - 1); ++j) {
        const ActionId a = b.act("i" + std::to_string(j));
        const int r = j / 2 + 1;
        b.send(a, init[j], j % 2 == 0 ? loop[r][0] : chain[r][0]);
        b.recv(a, init[j], j + 1 < 2 * (k - 1) ? init[j + 1] : loop[k][0]);
    }

    std::vector<ActionId> A;
    for (int j = 1; j < pk; ++j) {
        const ActionId a = b.act("a" + std::to_string(j));
        A.push_back(a);
        b.send(a, loop[k][j - 1], bot).recv(a, loop[k][j - 1], loop[k][j]);
    }
    std::vector<std::vector<ActionId>> H(k);
    for (int r = 1; r < k; ++r)
        for (int j = 1; j <= sh.chain_len(r); ++j) {
            const ActionId h = b.act(sh.chain_state(r, j));
            H[r].push_back(h);
            b.send(h, chain[r][j - 1], j < sh.chain_len(r) ? chain[r][j] : bot);
        }
    for (int r = 1; r < k; ++r)
        for (ActionId h : H[r]) {
            // closing the big loop needs a helper; mid-loop it kills the runners
            b.recv(h, loop[k][pk - 1], loop[k][0]);
            for (int j = 0; j + 1 < pk; ++j) b.recv(h, loop[k][j], bot);
            // sending before the big loop is filled would desynchronize the loops
            for (State s : init) b.recv(h, s, bot);
            // a higher chain resets the last state of every lower one
            for (int r2 = 1; r2 < r; ++r2) b.recv(h, chain[r2].back(), chain[r2][0]);
        }
    // small loops advance on every A, H, H', ...
    std::vector<ActionId> advance = A;
    for (int r = 1; r < k; ++r) advance.insert(advance.end(), H[r].begin(), H[r].end());
    for (int r = 1; r < k; ++r) {
        const int len = static_cast<int>(loop[r].size());
        for (ActionId a : advance)
            for (int j = 0; j < len; ++j) b.recv(a, loop[r][j], loop[r][(j + 1) % len]);
    }

    const ActionId c = b.act("c");
    b.send(c, loop[k][pk - 1], bot);
    const State after_c = k == 2 ? top : d[0];
    std::set<State> ends;
    for (int r = 1; r < k; ++r) ends.insert(loop[r].back());
    for (State s = 0; s < static_cast<State>(b.states().size()); ++s) {
        if (s == top || s == bot) continue;
        b.recv(c, s, ends.count(s) ? after_c : bot);
    }
    for (int j = 0; j < k - 2; ++j) {
        const ActionId a = b.act(sh.d_state(j + 1));
        b.send(a, d[j], bot).recv(a, d[j], j + 1 < k - 2 ? d[j + 1] : top);
    }
    b.send("a_top", "top", "top");

    // auxiliary sends for states that would otherwise be hidden
    for (int r = 1; r < k; ++r)
        for (State s : loop[r]) {
            const std::string& name = b.states()[s];
            b.send("z" + name, name, name);
        }
    b.send("zbot", "bot", "bot");
    return b.build();
}

Word exponential_witness(const Protocol& p, int n) {
    const ExpShape sh = exp_shape(n);
    const int k = sh.k, pk = sh.p.back();
    std::vector<std::string> w;
    for (int j = 0; j < 2 * (k - 1); ++j) w.push_back("i" + std::to_string(j));
    long long rounds = 1;
    for (int r = 0; r + 1 < k; ++r) rounds *= sh.p[r];

    // helper chains act as a mixed-radix counter: the lowest chain that is not
    // yet at its last state sends, which resets every lower chain
    std::vector<int> pos(k, 0);
    for (long long t = 0; t < rounds; ++t) {
        for (int j = 1; j < pk; ++j) w.push_back("a" + std::to_string(j));
        if (t + 1 == rounds) break;
        int r = 1;
        while (pos[r] == sh.chain_len(r) - 1) ++r;
        w.push_back(sh.chain_state(r, pos[r] + 1));
        ++pos[r];
        for (int r2 = 1; r2 < r; ++r2) pos[r2] = 0;
    }
    w.push_back("c");
    for (int j = 1; j <= k - 2; ++j) w.push_back(sh.d_state(j));
    w.push_back("a_top");
    return p.word(w);
}

}  // namespace bpl
