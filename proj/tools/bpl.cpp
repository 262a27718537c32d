// bpl: command-line front end. Exit 0 = success / positive verdict,
// 1 = negative verdict (infeasible, UNSAT, not equal, inconsistent), 2 = usage or I/O error.

#include <iostream>

#include "CLI11.hpp"
#include "bplearn/charset.hpp"
#include "bplearn/inference.hpp"
#include "bplearn/io.hpp"
#include "bplearn/random_bp.hpp"
#include "bplearn/reductions.hpp"

using namespace bpl;

namespace {

constexpr int kOk = 0, kNo = 1, kUsage = 2;

// "-" means stdout
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else write_file(path, text);
}

Protocol load_bp(const std::string& path) { return parse_bp(read_file(path)); }

Sample load_sample(const std::string& path) {
    auto l = parse_sample(read_file(path));
    for (const auto& n : l.notes) std::cerr << path << ": " << n << "\n";
    return std::move(l.sample);
}

Mode parse_mode(const std::string& m) { return m == "Iprime" ? Mode::Iprime : Mode::I; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"broadcast protocol learning toolkit"};
    app.require_subcommand(1);
    int verdict = kOk;
    std::string out;

    // --- semantics
    std::string bp_path, bp2_path, word;
    int n = 1, n2 = 0, max_len = 6, k = 1;

    auto* sim = app.add_subcommand("simulate", "print the configuration after every action");
    sim->add_option("bp", bp_path)->required();
    sim->add_option("n", n)->required()->check(CLI::PositiveNumber);
    sim->add_option("word", word)->required();
    sim->callback([&] {
        const Protocol p = load_bp(bp_path);
        const Word w = p.word(word);
        Config c = initial_config(p, n);
        std::cout << "start\t" << format_config(c) << "\n";
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!enabled(p, c, w[i])) {
                std::cout << "blocked at index " << i << " (" << p.action_names[w[i]] << ")\n";
                verdict = kNo;
                return;
            }
            c = step(p, c, w[i]);
            std::cout << p.action_names[w[i]] << "\t" << format_config(c) << "\n";
        }
    });

    auto* fea = app.add_subcommand("feasible", "decide whether a word is feasible with n processes");
    fea->add_option("bp", bp_path)->required();
    fea->add_option("n", n)->required()->check(CLI::PositiveNumber);
    fea->add_option("word", word)->required();
    fea->callback([&] {
        const Protocol p = load_bp(bp_path);
        const auto r = run(p, n, p.word(word));
        if (r.feasible) std::cout << format_config(r.config) << "\n";
        else std::cout << "infeasible at index " << r.failed_index << "\n";
        verdict = r.feasible ? kOk : kNo;
    });

    auto* en = app.add_subcommand("enumerate", "list the feasible words up to a length");
    en->add_option("bp", bp_path)->required();
    en->add_option("n", n)->required()->check(CLI::PositiveNumber);
    en->add_option("max_len", max_len)->required()->check(CLI::NonNegativeNumber);
    en->callback([&] {
        const Protocol p = load_bp(bp_path);
        for (const auto& w : enumerate_language(p, n, max_len)) std::cout << (w.empty() ? "eps" : p.format(w)) << "\n";
    });

    auto* eq = app.add_subcommand("equiv", "compare L(B1^n) and L(B2^m)");
    eq->add_option("bp1", bp_path)->required();
    eq->add_option("bp2", bp2_path)->required();
    eq->add_option("n", n)->required()->check(CLI::PositiveNumber);
    eq->add_option("m", n2, "process count for bp2 (default n)");
    eq->callback([&] {
        const Protocol p = load_bp(bp_path), q = load_bp(bp2_path);
        const auto r = lang_equal(p, n, q, n2 > 0 ? n2 : n);
        if (r.equal) {
            std::cout << "equal\n";
        } else {
            const Word& w = *r.counterexample;
            std::cout << "differ on: " << (w.empty() ? "eps" : p.format(w)) << "\n";
            verdict = kNo;
        }
    });

    int k_max = 6;
    auto* cut = app.add_subcommand("cutoff", "smallest c <= kmax with L(B^c) = L(B^(c+1))");
    cut->add_option("bp", bp_path)->required();
    cut->add_option("kmax", k_max)->required()->check(CLI::PositiveNumber);
    cut->callback([&] {
        const auto c = detect_cutoff(load_bp(bp_path), k_max);
        if (c) std::cout << *c << "\n";
        else {
            std::cout << "no cutoff up to " << k_max << "\n";
            verdict = kNo;
        }
    });

    auto* dot = app.add_subcommand("dot", "GraphViz view of a protocol");
    dot->add_option("bp", bp_path)->required();
    dot->callback([&] { std::cout << to_dot(load_bp(bp_path)); });

    // --- learning
    CsOptions cs_opts;
    bool cs_literal = false;
    auto* cs = app.add_subcommand("charset", "characteristic sample of a protocol");
    cs->add_option("bp", bp_path)->required();
    cs->add_option("-o,--out", out, "output file (default stdout)");
    cs->add_option("--cap", cs_opts.level_cap, "highest tree level to try");
    cs->add_option("--replay-depth", cs_opts.replay_depth, "suffix cap for replayed words, <0 = none");
    cs->add_flag("--literal", cs_literal, "tree nodes only, no replayed words");
    cs->callback([&] {
        if (cs_literal) cs_opts.mode = CsMode::Literal;
        const auto r = generate_cs(load_bp(bp_path), cs_opts);
        std::cerr << "final level " << r.final_level << ", " << r.sample.entries.size() << " entries\n";
        emit(out, serialize_sample(r.sample));
    });

    std::string sample_path, mode = "A";
    InferOptions inf;
    auto* infer = app.add_subcommand("infer", "learn a protocol from a sample");
    infer->add_option("sample", sample_path)->required();
    infer->add_option("--kmax", inf.k_max, "largest state count to try");
    infer->add_option("--mode", mode)->check(CLI::IsMember({"I", "Iprime", "A"}));
    infer->add_option("--time-ms", inf.time_ms, "solver budget per call");
    infer->add_option("-o,--out", out, "output file (default stdout)");
    infer->callback([&] {
        const Sample s = load_sample(sample_path);
        try {
            if (mode == "I") {
                emit(out, serialize_bp(infer_I(s, inf)));
            } else if (mode == "Iprime") {
                auto r = infer_Iprime(s, inf);
                if (!r.bp) {
                    std::cout << "no answer: " << r.reason << "\n";
                    verdict = kNo;
                    return;
                }
                emit(out, serialize_bp(*r.bp));
            } else {
                auto r = infer_A(s, inf);
                std::cerr << (r.used_iprime ? "similarity classes fixed the states\n" : "fell back to search\n");
                emit(out, serialize_bp(r.bp));
            }
        } catch (const Unsatisfiable& e) {
            std::cout << e.what() << "\n";
            verdict = kNo;
        }
    });

    auto* dec = app.add_subcommand("decide", "is there a protocol with at most k states consistent with the sample");
    dec->add_option("sample", sample_path)->required();
    dec->add_option("k", k)->required()->check(CLI::PositiveNumber);
    dec->add_option("--time-ms", inf.time_ms, "solver budget per call");
    dec->add_option("-o,--out", out, "write the witness here");
    dec->callback([&] {
        const auto d = consistency_decision(load_sample(sample_path), k, inf);
        if (!d.sat) {
            std::cout << "UNSAT\n";
            verdict = kNo;
            return;
        }
        std::cout << "SAT with " << d.k << " states\n";
        if (!out.empty()) emit(out, serialize_bp(*d.witness));
    });

    auto* exp = app.add_subcommand("export-constraints", "SMT-LIB text of the constraint program");
    exp->add_option("sample", sample_path)->required();
    exp->add_option("k", k)->required()->check(CLI::PositiveNumber);
    exp->add_option("--mode", mode)->check(CLI::IsMember({"I", "Iprime"}));
    exp->add_option("-o,--out", out, "output file (default stdout)");
    exp->callback([&] {
        const auto prog = build_constraints(load_sample(sample_path), k, {parse_mode(mode), inf.fresh_budget});
        emit(out, export_smtlib(prog));
    });

    auto* chk = app.add_subcommand("check", "is a protocol consistent with a sample");
    chk->add_option("sample", sample_path)->required();
    chk->add_option("bp", bp_path)->required();
    chk->callback([&] {
        const Sample s = load_sample(sample_path);
        const auto r = consistent_with(s, load_bp(bp_path));
        for (auto i : r.violations) std::cout << "violated: " << s.describe(s.entries[i]) << "\n";
        if (r.consistent) std::cout << "consistent\n";
        verdict = r.consistent ? kOk : kNo;
    });

    // --- generators
    auto* gen = app.add_subcommand("gen", "build protocols and samples from the constructions");
    gen->require_subcommand(1);
    gen->fallthrough();
    gen->add_option("-o,--out", out, "output file (default stdout)");
    bool symbol_names = false, literal = false;
    int m = 2, l = 1;
    std::string dfa_path, alphabet;
    std::vector<std::string> dfa_paths;
    std::uint64_t seed = 1;
    int states = 2, actions = 2;

    auto* gq = gen->add_subcommand("quadratic", "the m,n,l family with quadratic cutoffs");
    gq->add_option("m", m)->required();
    gq->add_option("n", n)->required();
    gq->add_option("l", l)->required();
    gq->add_flag("--literal", literal, "transitions as originally stated (no repair)");
    gq->callback([&] {
        emit(out, serialize_bp(family_quadratic(m, n, l, literal ? QuadraticVariant::Literal : QuadraticVariant::Repaired)));
    });

    auto* ge = gen->add_subcommand("exponential", "P_n, one loop per prime <= n");
    ge->add_option("n", n)->required();
    bool witness = false;
    ge->add_flag("--witness", witness, "print the synchronizing word instead");
    ge->callback([&] {
        const Protocol p = family_exponential(n);
        emit(out, witness ? p.format(exponential_witness(p, n)) + "\n" : serialize_bp(p));
    });

    auto names = [&] { return symbol_names ? ReservedNames::literal() : ReservedNames{}; };

    auto* gd = gen->add_subcommand("dfa2bp", "simulate a DFA");
    gd->add_option("dfa", dfa_path)->required();
    gd->add_flag("--symbol-names", symbol_names, "use the bare i, $, x, top and bottom symbols");
    gd->callback([&] { emit(out, serialize_bp(dfa_to_bp(parse_dfa(read_file(dfa_path)), names()))); });

    auto* gs = gen->add_subcommand("dfasample2bp", "DFA consistency sample to protocol sample");
    gs->add_option("dfa_sample", sample_path)->required();
    gs->add_option("k", k)->required();
    gs->add_option("--alphabet", alphabet, "space separated letters (default: letters of the sample)");
    gs->add_flag("--symbol-names", symbol_names, "use the bare i, $, x, top and bottom symbols");
    gs->callback([&] {
        const auto ds = parse_dfa_sample(read_file(sample_path));
        std::vector<std::string> sigma;
        std::istringstream in(alphabet);
        for (std::string x; in >> x;) sigma.push_back(x);
        if (sigma.empty())
            for (const auto& [w, lab] : ds)
                for (const auto& x : w)
                    if (std::find(sigma.begin(), sigma.end(), x) == sigma.end()) sigma.push_back(x);
        auto [s, kk] = dfa_sample_to_bp_sample(ds, k, sigma, names());
        std::cerr << "k = " << kk << "\n";
        emit(out, serialize_sample(normalize(s)));
    });

    std::string cnf_path;
    auto* g3 = gen->add_subcommand("sat2sample", "all-equal 3SAT formula to sample");
    g3->add_option("cnf", cnf_path)->required();
    g3->add_flag("--literal", literal, "only the four word sets as listed");
    g3->callback([&] {
        auto [s, kk] = alleq3sat_to_sample(parse_cnf(read_file(cnf_path)),
                                           literal ? SatSampleVariant::Literal : SatSampleVariant::Strengthened);
        std::cerr << "k = " << kk << "\n";
        emit(out, serialize_sample(s));
    });

    auto* gi = gen->add_subcommand("intersection", "protocol for the intersection of DFAs");
    gi->add_option("dfas", dfa_paths)->required();
    gi->add_flag("--symbol-names", symbol_names, "use the bare reserved symbols");
    gi->callback([&] {
        std::vector<Dfa> ds;
        for (const auto& pth : dfa_paths) ds.push_back(parse_dfa(read_file(pth)));
        emit(out, serialize_bp(intersection_bp(ds, names())));
    });

    auto* gr = gen->add_subcommand("random-bp", "random protocol");
    gr->add_option("--seed", seed);
    gr->add_option("--states", states);
    gr->add_option("--actions", actions);
    gr->callback([&] {
        Rng rng(seed);
        emit(out, serialize_bp(random_protocol(rng, states, std::max(states, actions))));
    });

    auto* grd = gen->add_subcommand("random-dfa", "random complete DFA over 0,1");
    grd->add_option("--seed", seed);
    grd->add_option("--states", states);
    grd->callback([&] {
        Rng rng(seed);
        emit(out, serialize_dfa(random_dfa(rng, states, {"0", "1"})));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return verdict;
}
