#include "bplearn/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bpl {

using nlohmann::json;

namespace {

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

[[noreturn]] void fail_at(const std::string& text, std::size_t byte, const std::string& msg) {
    auto [l, c] = line_col(text, byte);
    throw ParseError(msg, l, c);
}

// nlohmann keeps the last of two equal keys; we want to hear about it
json parse_json_strict(const std::string& text, const std::function<void(const std::vector<std::string>&,
                                                                          const std::string&)>& on_dup) {
    struct Frame {
        std::set<std::string> keys;
        std::string last;
    };
    std::vector<Frame> stack;
    std::vector<std::string> path;
    json::parser_callback_t cb = [&](int, json::parse_event_t ev, json& parsed) {
        switch (ev) {
        case json::parse_event_t::object_start:
            path.push_back(stack.empty() ? std::string() : stack.back().last);
            stack.emplace_back();
            break;
        case json::parse_event_t::object_end:
            stack.pop_back();
            path.pop_back();
            break;
        case json::parse_event_t::key: {
            const std::string k = parsed.get<std::string>();
            if (!stack.back().keys.insert(k).second) on_dup(path, k);
            stack.back().last = k;
            break;
        }
        default:
            break;
        }
        return true;
    };
    try {
        return json::parse(text, cb);
    } catch (const json::parse_error& e) {
        fail_at(text, e.byte == 0 ? 0 : e.byte - 1, e.what());
    }
}

std::size_t second_occurrence(const std::string& text, const std::string& key) {
    const std::string q = "\"" + key + "\"";
    auto first = text.find(q);
    if (first == std::string::npos) return 0;
    auto second = text.find(q, first + 1);
    return second == std::string::npos ? first : second;
}

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw InvalidProtocol(where + ": missing \"" + key + "\"");
    return j.at(key);
}

std::string str(const json& j, const std::string& where) {
    if (!j.is_string()) throw InvalidProtocol(where + ": expected a string");
    return j.get<std::string>();
}

std::vector<std::string> str_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw InvalidProtocol(where + ": expected a list of strings");
    std::vector<std::string> out;
    for (const auto& x : j) out.push_back(str(x, where));
    return out;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto t = line.find('\t', start);
        out.push_back(line.substr(start, t == std::string::npos ? std::string::npos : t - start));
        if (t == std::string::npos) break;
        start = t + 1;
    }
    return out;
}

std::vector<std::string> words_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

bool skip_line(const std::string& line) {
    auto p = line.find_first_not_of(" \t");
    return p == std::string::npos || line[p] == '#';
}

bool parse_label(const std::string& f, int line, int col) {
    if (f == "T") return true;
    if (f == "F") return false;
    throw ParseError("label must be T or F, got '" + f + "'", line, col);
}

}  // namespace

// ---------- protocols ----------

Protocol parse_bp(const std::string& text) {
    json doc = parse_json_strict(text, [&](const std::vector<std::string>& path, const std::string& key) {
        // path: root, "actions", <action>
        if (key == "send" && path.size() == 3 && path[1] == "actions") throw DuplicateSend(path[2]);
        fail_at(text, second_occurrence(text, key), "duplicate key \"" + key + "\"");
    });
    const std::string where = "protocol";
    if (doc.contains("format") && doc.at("format") != 1) throw InvalidProtocol("unsupported format version");
    const auto states = str_list(field(doc, "states", where), "states");
    const auto& acts = field(doc, "actions", where);
    if (!acts.is_object()) throw InvalidProtocol("actions: expected an object");
    std::vector<std::string> order;
    if (doc.contains("action_order")) {
        order = str_list(doc.at("action_order"), "action_order");
        std::vector<std::string> a = order, b;
        for (auto it = acts.begin(); it != acts.end(); ++it) b.push_back(it.key());
        std::sort(a.begin(), a.end());
        if (a != b) throw InvalidProtocol("action_order does not list exactly the actions");
    } else {
        for (auto it = acts.begin(); it != acts.end(); ++it) order.push_back(it.key());
    }

    ProtocolBuilder b;
    for (const auto& s : states) b.add_state(s);
    for (const auto& a : order) b.add_action(a);
    auto state_id = [&](const std::string& name, const std::string& ctx) {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i] == name) return static_cast<State>(i);
        throw InvalidProtocol(ctx + ": unknown state " + name);
    };
    b.set_initial(state_id(str(field(doc, "initial", where), "initial"), "initial"));
    for (std::size_t ai = 0; ai < order.size(); ++ai) {
        const std::string& a = order[ai];
        const json& spec = acts.at(a);
        const std::string ctx = "action " + a;
        const json& send = field(spec, "send", ctx);
        if (send.is_array()) {
            if (send.size() > 1) throw DuplicateSend(a);
            if (send.empty()) throw InvalidProtocol(ctx + ": no send");
        }
        const json& s1 = send.is_array() ? send.front() : send;
        b.send(static_cast<ActionId>(ai), state_id(str(field(s1, "from", ctx), ctx), ctx),
               state_id(str(field(s1, "to", ctx), ctx), ctx));
        const json& recv = field(spec, "recv", ctx);
        if (!recv.is_object()) throw InvalidProtocol(ctx + ": recv must map states to states");
        for (auto it = recv.begin(); it != recv.end(); ++it)
            b.recv(static_cast<ActionId>(ai), state_id(it.key(), ctx), state_id(str(it.value(), ctx), ctx));
        for (const auto& s : states)
            if (!recv.contains(s)) throw TotalityError(a, s);
    }
    return b.build(false);
}

std::string serialize_bp(const Protocol& p) {
    json doc;
    doc["format"] = 1;
    doc["states"] = p.state_names;
    doc["initial"] = p.state_names[p.initial];
    doc["action_order"] = p.action_names;
    json acts = json::object();
    for (ActionId a = 0; a < p.num_actions(); ++a) {
        json recv = json::object();
        for (State s = 0; s < p.num_states(); ++s) recv[p.state_names[s]] = p.state_names[p.response[a][s]];
        acts[p.action_names[a]] = {
            {"send", {{"from", p.state_names[p.send_source[a]]}, {"to", p.state_names[p.send_target[a]]}}},
            {"recv", recv}};
    }
    doc["actions"] = acts;
    return doc.dump(2) + "\n";
}

// ---------- samples ----------

SampleLoad parse_sample(const std::string& text) {
    SampleLoad out;
    Sample& s = out.sample;
    std::vector<int> line_of;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        const int ln = static_cast<int>(i) + 1;
        if (line.rfind("# alphabet:", 0) == 0) {
            for (const auto& a : words_of(line.substr(11))) s.intern(a);
            continue;
        }
        if (skip_line(line)) continue;
        const auto f = split_tabs(line);
        if (f.size() != 3)
            throw ParseError("expected word<TAB>n<TAB>T|F, found " + std::to_string(f.size()) + " fields", ln, 1);
        const int col_n = static_cast<int>(f[0].size()) + 2;
        const int col_l = col_n + static_cast<int>(f[1].size()) + 1;
        int n = 0;
        auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), n);
        if (ec != std::errc() || ptr != f[1].data() + f[1].size() || n < 1)
            throw ParseError("process count must be a natural number >= 1, got '" + f[1] + "'", ln, col_n);
        const bool label = parse_label(f[2], ln, col_l);
        s.add(words_of(f[0]), n, label);
        line_of.push_back(ln);
    }
    if (auto c = find_contradiction(s)) {
        throw Contradiction("contradictory lines " + std::to_string(line_of[c->first]) + " and " +
                                std::to_string(line_of[c->second]) + ": " + s.describe(s.entries[c->first]) +
                                " vs " + s.describe(s.entries[c->second]),
                            static_cast<std::size_t>(line_of[c->first]), static_cast<std::size_t>(line_of[c->second]));
    }
    const std::size_t before = s.entries.size();
    s = normalize(s);
    if (s.entries.size() != before)
        out.notes.push_back("normalized: " + std::to_string(before) + " entries reduced to " +
                            std::to_string(s.entries.size()) + " (duplicates and entries implied by monotonicity)");
    return out;
}

std::string serialize_sample(const Sample& s) {
    std::string out = "# alphabet:";
    for (const auto& a : s.alphabet) out += " " + a;
    out += "\n";
    for (const auto& e : s.entries)
        out += s.format(e.word) + "\t" + std::to_string(e.n) + "\t" + (e.label ? "T" : "F") + "\n";
    return out;
}

// ---------- DFAs, DFA samples, CNF ----------

Dfa parse_dfa(const std::string& text) {
    json doc = parse_json_strict(text, [&](const std::vector<std::string>&, const std::string& key) {
        fail_at(text, second_occurrence(text, key), "duplicate key \"" + key + "\"");
    });
    Dfa d;
    d.sigma = str_list(field(doc, "alphabet", "dfa"), "alphabet");
    d.states = str_list(field(doc, "states", "dfa"), "states");
    auto state_id = [&](const std::string& name) {
        auto it = std::find(d.states.begin(), d.states.end(), name);
        if (it == d.states.end()) throw InvalidProtocol("dfa: unknown state " + name);
        return static_cast<int>(it - d.states.begin());
    };
    d.initial = state_id(str(field(doc, "initial", "dfa"), "initial"));
    d.accepting.assign(d.states.size(), 0);
    for (const auto& q : str_list(field(doc, "accepting", "dfa"), "accepting")) d.accepting[state_id(q)] = 1;
    const json& delta = field(doc, "delta", "dfa");
    for (const auto& q : d.states) {
        const json& row = field(delta, q.c_str(), "delta");
        std::vector<int> r;
        for (const auto& l : d.sigma) r.push_back(state_id(str(field(row, l.c_str(), "delta " + q), "delta")));
        d.delta.push_back(std::move(r));
    }
    auto diag = d.validate();
    if (!diag.empty()) throw InvalidProtocol("dfa: " + diag.front());
    return d;
}

std::string serialize_dfa(const Dfa& d) {
    json doc;
    doc["alphabet"] = d.sigma;
    doc["states"] = d.states;
    doc["initial"] = d.states[d.initial];
    std::vector<std::string> acc;
    json delta = json::object();
    for (std::size_t q = 0; q < d.states.size(); ++q) {
        if (d.accepting[q]) acc.push_back(d.states[q]);
        json row = json::object();
        for (std::size_t l = 0; l < d.sigma.size(); ++l) row[d.sigma[l]] = d.states[d.delta[q][l]];
        delta[d.states[q]] = row;
    }
    doc["accepting"] = acc;
    doc["delta"] = delta;
    return doc.dump(2) + "\n";
}

DfaSample parse_dfa_sample(const std::string& text) {
    DfaSample out;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (skip_line(lines[i])) continue;
        const int ln = static_cast<int>(i) + 1;
        const auto f = split_tabs(lines[i]);
        if (f.size() != 2) throw ParseError("expected word<TAB>T|F", ln, 1);
        out.emplace_back(words_of(f[0]), parse_label(f[1], ln, static_cast<int>(f[0].size()) + 2));
    }
    return out;
}

AllEq3Cnf parse_cnf(const std::string& text) {
    AllEq3Cnf phi;
    int declared = -1;
    std::vector<int> pending;
    int pending_line = 0;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int ln = static_cast<int>(i) + 1;
        const auto toks = words_of(lines[i]);
        if (toks.empty() || toks[0] == "c" || toks[0][0] == '%') continue;
        if (toks[0] == "p") {
            if (toks.size() != 4 || toks[1] != "cnf") throw ParseError("expected 'p cnf <vars> <clauses>'", ln, 1);
            phi.num_vars = std::stoi(toks[2]);
            declared = std::stoi(toks[3]);
            continue;
        }
        if (declared < 0) throw ParseError("clause before the 'p cnf' header", ln, 1);
        for (const auto& t : toks) {
            int lit = 0;
            auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), lit);
            if (ec != std::errc() || ptr != t.data() + t.size()) throw ParseError("not a literal: " + t, ln, 1);
            if (pending.empty()) pending_line = ln;
            if (lit != 0) {
                pending.push_back(lit);
                continue;
            }
            if (pending.size() != 3)
                throw ParseError("clause has " + std::to_string(pending.size()) + " literals, need 3", pending_line, 1);
            phi.clauses.push_back({pending[0], pending[1], pending[2]});
            pending.clear();
            auto diag = phi.validate();
            if (!diag.empty()) throw ParseError(diag.front(), pending_line, 1);
        }
    }
    if (!pending.empty()) throw ParseError("last clause is not terminated by 0", pending_line, 1);
    if (declared < 0) throw ParseError("missing 'p cnf' header", 1, 1);
    if (static_cast<int>(phi.clauses.size()) != declared)
        throw ParseError("header declares " + std::to_string(declared) + " clauses, found " +
                             std::to_string(phi.clauses.size()),
                         1, 1);
    return phi;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Error("cannot write " + path);
}

}  // namespace bpl
