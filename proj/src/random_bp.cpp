#include "bplearn/random_bp.hpp"

#include <algorithm>
#include <numeric>

namespace bpl {

Protocol random_protocol(Rng& rng, int states, int actions) {
    if (states < 1 || actions < states) throw Error("random_protocol needs 1 <= states <= actions");
    std::uniform_int_distribution<int> pick(0, states - 1);
    // every state hosts at least one send
    std::vector<State> src(actions);
    std::iota(src.begin(), src.begin() + states, 0);
    for (int a = states; a < actions; ++a) src[a] = pick(rng);
    std::shuffle(src.begin(), src.end(), rng);

    ProtocolBuilder b;
    for (int s = 0; s < states; ++s) b.add_state("s" + std::to_string(s));
    for (int a = 0; a < actions; ++a) b.add_action(std::string(1, static_cast<char>('a' + a)));
    b.set_initial(0);
    for (int a = 0; a < actions; ++a) {
        b.send(a, src[a], pick(rng));
        for (int s = 0; s < states; ++s) b.recv(a, s, pick(rng));
    }
    return b.build(false);
}

Word random_word(Rng& rng, const Protocol& p, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len), act(0, p.num_actions() - 1);
    Word w(len(rng));
    for (auto& x : w) x = act(rng);
    return w;
}

Word random_walk(Rng& rng, const Protocol& p, int n, int len) {
    Word w;
    Config c = initial_config(p, n);
    bool alive = true;
    std::uniform_int_distribution<int> any(0, p.num_actions() - 1);
    for (int i = 0; i < len; ++i) {
        auto en = alive ? enabled_actions(p, c) : std::vector<ActionId>{};
        ActionId a;
        if (!en.empty()) {
            a = en[std::uniform_int_distribution<std::size_t>(0, en.size() - 1)(rng)];
            c = step(p, c, a);
        } else {
            a = any(rng);
            alive = false;
        }
        w.push_back(a);
    }
    return w;
}

}  // namespace bpl
