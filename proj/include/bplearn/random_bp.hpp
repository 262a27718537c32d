#pragma once

#include <random>

#include "bplearn/protocol.hpp"

namespace bpl {

using Rng = std::mt19937_64;

// Uniform random BP without hidden states. Needs actions >= states.
Protocol random_protocol(Rng& rng, int states, int actions);

// Random word over the protocol's alphabet, length in [0, max_len].
Word random_word(Rng& rng, const Protocol& p, int max_len);

// Random feasible-biased word: each letter picked among the enabled actions
// of B^n when possible, otherwise uniformly.
Word random_walk(Rng& rng, const Protocol& p, int n, int len);

}  // namespace bpl
