#include "bplearn/inference.hpp"

namespace bpl {

Protocol infer_I(const Sample& raw, const InferOptions& opts) {
    const Sample s = normalize(raw);
    std::vector<std::string> evidence;
    for (int k = 1; k <= opts.k_max; ++k) {
        auto r = solve_native(s, k, {Mode::I, opts.fresh_budget, opts.time_ms});
        if (r.hypothesis) return r.hypothesis->to_protocol();
        evidence.push_back("k=" + std::to_string(k) + ": UNSAT after " + std::to_string(r.nodes) + " nodes");
    }
    throw Unsatisfiable("no consistent BP with at most " + std::to_string(opts.k_max) + " states", opts.k_max,
                        std::move(evidence));
}

IprimeResult infer_Iprime(const Sample& raw, const InferOptions& opts) {
    const Sample s = normalize(raw);
    std::vector<std::vector<ActionId>> classes;
    try {
        classes = similarity_partition(s);
    } catch (const NotTransitive& e) {
        return {std::nullopt, e.what()};
    }
    if (classes.empty()) return {std::nullopt, "no action occurs in a feasible word"};
    const int k = static_cast<int>(classes.size());
    auto r = solve_native(s, k, {Mode::Iprime, 0, opts.time_ms});
    if (!r.hypothesis) return {std::nullopt, "UNSAT with k=" + std::to_string(k) + " forced by the similarity classes"};
    return {r.hypothesis->to_protocol(), {}};
}

InferAResult infer_A(const Sample& s, const InferOptions& opts) {
    auto ip = infer_Iprime(s, opts);
    if (ip.bp) return {std::move(*ip.bp), true};
    return {infer_I(s, opts), false};
}

Decision consistency_decision(const Sample& raw, int k, const InferOptions& opts) {
    const Sample s = normalize(raw);
    for (int kk = 1; kk <= k; ++kk) {
        auto r = solve_native(s, kk, {Mode::I, opts.fresh_budget, opts.time_ms});
        if (r.hypothesis) return {true, kk, r.hypothesis->to_protocol()};
    }
    return {};
}

}  // namespace bpl
