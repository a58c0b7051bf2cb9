#include "anysyn/parse.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace anysyn {

namespace {

struct Line {
    int number = 0;
    std::vector<std::string> tokens;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool valid_identifier(const std::string& s) {
    if (s.empty() || !is_ident_start(s[0])) return false;
    return std::all_of(s.begin(), s.end(), is_ident_char);
}

// Comments run from '#' to end of line; tokens are whitespace-separated.
std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> out;
    int number = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        ++number;
        size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        Line line;
        line.number = number;
        std::string token;
        for (char c : raw) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!token.empty()) line.tokens.push_back(std::move(token)), token.clear();
            } else {
                token += c;
            }
        }
        if (!token.empty()) line.tokens.push_back(std::move(token));
        if (!line.tokens.empty()) out.push_back(std::move(line));
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return out;
}

double parse_probability(const std::string& token, int line) {
    size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        throw ParseError("bad probability '" + token + "'", line);
    }
    if (used != token.size()) throw ParseError("bad probability '" + token + "'", line);
    return value;
}

int parse_int(const std::string& token, int line) {
    size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(token, &used);
    } catch (const std::exception&) {
        throw ParseError("bad integer '" + token + "'", line);
    }
    if (used != token.size()) throw ParseError("bad integer '" + token + "'", line);
    return value;
}

// A bare name is namespaced with the component's agent index; an explicit
// `base@k` form is kept as written (used when re-reading rendered
// compositions whose labels span several namespaces).
Prop parse_label_prop(const std::string& token, int agent, int line) {
    size_t at = token.find('@');
    if (at == std::string::npos) {
        if (!valid_identifier(token)) throw ParseError("bad proposition '" + token + "'", line);
        return Prop{token, agent};
    }
    std::string base = token.substr(0, at);
    std::string idx = token.substr(at + 1);
    if (!valid_identifier(base) || idx.empty() ||
        !std::all_of(idx.begin(), idx.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw ParseError("bad proposition '" + token + "'", line);
    }
    return Prop{base, std::stoi(idx)};
}

struct ComponentDraft {
    std::string kind;
    std::string name;
    int agent = 0;
    std::vector<std::string> states;
    std::vector<std::string> actions;
    bool have_states = false;

    std::string dfts_init;
    SparseRow initial; // by state index
    std::vector<std::tuple<int, int, int>> dfts_trans;          // src, action, dst
    std::vector<std::tuple<int, int, double>> mc_trans;         // src, dst, p
    std::vector<std::tuple<int, int, int, double>> mdp_trans;   // src, action, dst, p
    std::vector<PropSet> labels;
    std::vector<char> label_seen;

    int state(const std::string& id, int line) const {
        for (size_t i = 0; i < states.size(); ++i) {
            if (states[i] == id) return static_cast<int>(i);
        }
        throw ParseError("unknown state id '" + id + "'", line);
    }

    int action(const std::string& id, int line) {
        for (size_t i = 0; i < actions.size(); ++i) {
            if (actions[i] == id) return static_cast<int>(i);
        }
        if (!valid_identifier(id)) throw ParseError("bad action id '" + id + "'", line);
        actions.push_back(id);
        return static_cast<int>(actions.size()) - 1;
    }
};

void require_states(const ComponentDraft& d, int line) {
    if (!d.have_states) throw ParseError("'states' line must come first", line);
}

void add_initial(ComponentDraft& d, int state, double p, int line) {
    for (const auto& [i, _] : d.initial) {
        if (i == state) {
            throw ParseError("duplicate init entry for state " + d.states[state], line);
        }
    }
    if (p != 0.0) d.initial.emplace_back(state, p);
}

bool has_target(const SparseRow& row, int dst) {
    return std::any_of(row.begin(), row.end(), [&](const auto& e) { return e.first == dst; });
}

Component finish_component(ComponentDraft& d) {
    std::sort(d.initial.begin(), d.initial.end());
    if (d.kind == "dfts") {
        Dfts t;
        t.name = d.name;
        t.agent = d.agent;
        t.states = d.states;
        t.actions = d.actions;
        t.labels = d.labels;
        t.next.assign(t.states.size(), std::vector<int>(t.actions.size(), -1));
        for (const auto& [src, act, dst] : d.dfts_trans) {
            int& slot = t.next[src][act];
            if (slot >= 0) {
                throw ValidationError("component " + t.name + ": nondeterministic transition from " +
                                      t.states[src] + " under " + t.actions[act]);
            }
            slot = dst;
        }
        t.initial = d.dfts_init.empty() ? -1 : t.state_index(d.dfts_init);
        validate(t);
        return t;
    }
    if (d.kind == "mc") {
        Mc m;
        m.name = d.name;
        m.agent = d.agent;
        m.states = d.states;
        m.labels = d.labels;
        m.initial = d.initial;
        m.rows.assign(m.states.size(), {});
        for (const auto& [src, dst, p] : d.mc_trans) {
            if (has_target(m.rows[src], dst)) {
                throw ParseError("duplicate transition " + m.states[src] + " -> " + m.states[dst]);
            }
            if (p != 0.0) m.rows[src].emplace_back(dst, p);
        }
        for (auto& row : m.rows) std::sort(row.begin(), row.end());
        validate(m);
        return m;
    }
    Mdp m;
    m.name = d.name;
    m.agent = d.agent;
    m.states = d.states;
    m.actions = d.actions;
    m.labels = d.labels;
    m.initial = d.initial;
    m.rows.assign(m.states.size(), std::vector<SparseRow>(m.actions.size()));
    for (const auto& [src, act, dst, p] : d.mdp_trans) {
        if (has_target(m.rows[src][act], dst)) {
            throw ParseError("duplicate transition " + m.states[src] + " " + m.actions[act] +
                             " -> " + m.states[dst]);
        }
        if (p != 0.0) m.rows[src][act].emplace_back(dst, p);
    }
    for (auto& per_state : m.rows) {
        for (auto& row : per_state) std::sort(row.begin(), row.end());
    }
    validate(m);
    return m;
}

} // namespace

Component parse_component(std::string_view text) {
    std::vector<Line> lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty component text");

    ComponentDraft d;
    bool have_states_line = false;
    bool seen_label = false;
    for (const Line& line : lines) {
        const std::string& key = line.tokens[0];
        const int n = line.number;
        auto arg_count = line.tokens.size() - 1;

        if (d.kind.empty() && key != "kind") {
            throw ParseError("expected 'kind dfts|mc|mdp' before '" + key + "'", n);
        }
        if (key == "kind") {
            if (!d.kind.empty()) throw ParseError("duplicate kind line", n);
            if (arg_count != 1 ||
                (line.tokens[1] != "dfts" && line.tokens[1] != "mc" && line.tokens[1] != "mdp")) {
                throw ParseError("expected 'kind dfts|mc|mdp'", n);
            }
            d.kind = line.tokens[1];
        } else if (key == "name") {
            if (arg_count != 1) throw ParseError("expected 'name <id>'", n);
            if (!valid_identifier(line.tokens[1])) {
                throw ParseError("bad component name '" + line.tokens[1] + "'", n);
            }
            d.name = line.tokens[1];
        } else if (key == "agent") {
            if (arg_count != 1) throw ParseError("expected 'agent <int>'", n);
            if (seen_label) {
                throw ParseError("'agent' must come before 'label' lines", n);
            }
            d.agent = parse_int(line.tokens[1], n);
            if (d.agent < 0) throw ParseError("agent index must be >= 0", n);
        } else if (key == "states") {
            if (have_states_line) throw ParseError("duplicate states line", n);
            if (arg_count == 0) throw ParseError("states line lists no states", n);
            for (size_t i = 1; i < line.tokens.size(); ++i) {
                if (!valid_identifier(line.tokens[i])) {
                    throw ParseError("bad state id '" + line.tokens[i] + "'", n);
                }
                if (std::find(d.states.begin(), d.states.end(), line.tokens[i]) != d.states.end()) {
                    throw ParseError("duplicate state id '" + line.tokens[i] + "'", n);
                }
                d.states.push_back(line.tokens[i]);
            }
            have_states_line = true;
            d.have_states = true;
            d.labels.assign(d.states.size(), {});
            d.label_seen.assign(d.states.size(), 0);
        } else if (key == "actions") {
            if (d.kind == "mc") throw ParseError("mc components have no actions line", n);
            for (size_t i = 1; i < line.tokens.size(); ++i) d.action(line.tokens[i], n);
        } else if (key == "init") {
            require_states(d, n);
            if (d.kind == "dfts") {
                if (arg_count != 1) throw ParseError("expected 'init <state>'", n);
                if (!d.dfts_init.empty()) throw ParseError("duplicate init line", n);
                d.state(line.tokens[1], n);
                d.dfts_init = line.tokens[1];
            } else {
                if (arg_count != 2) throw ParseError("expected 'init <state> <prob>'", n);
                int s = d.state(line.tokens[1], n);
                add_initial(d, s, parse_probability(line.tokens[2], n), n);
            }
        } else if (key == "trans") {
            require_states(d, n);
            if (d.kind == "dfts") {
                if (arg_count != 3) throw ParseError("expected 'trans <src> <action> <dst>'", n);
                int src = d.state(line.tokens[1], n);
                int act = d.action(line.tokens[2], n);
                int dst = d.state(line.tokens[3], n);
                d.dfts_trans.emplace_back(src, act, dst);
            } else if (d.kind == "mc") {
                if (arg_count != 3) throw ParseError("expected 'trans <src> <dst> <prob>'", n);
                int src = d.state(line.tokens[1], n);
                int dst = d.state(line.tokens[2], n);
                d.mc_trans.emplace_back(src, dst, parse_probability(line.tokens[3], n));
            } else {
                if (arg_count != 4) {
                    throw ParseError("expected 'trans <src> <action> <dst> <prob>'", n);
                }
                int src = d.state(line.tokens[1], n);
                int act = d.action(line.tokens[2], n);
                int dst = d.state(line.tokens[3], n);
                d.mdp_trans.emplace_back(src, act, dst, parse_probability(line.tokens[4], n));
            }
        } else if (key == "label") {
            require_states(d, n);
            seen_label = true;
            if (arg_count < 1) throw ParseError("expected 'label <state> <prop>...'", n);
            int s = d.state(line.tokens[1], n);
            if (d.label_seen[s]) throw ParseError("duplicate label line for state " + d.states[s], n);
            d.label_seen[s] = 1;
            for (size_t i = 2; i < line.tokens.size(); ++i) {
                insert(d.labels[s], parse_label_prop(line.tokens[i], d.agent, n));
            }
        } else {
            throw ParseError("unknown keyword '" + key + "'", n);
        }
    }
    if (!d.have_states) throw ParseError("missing states line");
    return finish_component(d);
}

// ---------------------------------------------------------------------------
// DFA parsing

namespace {

// expr := term ('|' term)* ; term := factor ('&' factor)* ;
// factor := '!' factor | '(' expr ')' | 'true' | 'false' | prop | macro-name
class GuardParser {
public:
    GuardParser(const std::vector<std::string>& tokens, size_t first,
                const std::map<std::string, Guard>& macros, int line)
        : tokens_(tokens), pos_(first), macros_(macros), line_(line) {}

    Guard parse() {
        Guard g = expr();
        if (pos_ < tokens_.size()) {
            throw ParseError("unexpected token '" + tokens_[pos_] + "' in guard", line_);
        }
        return g;
    }

private:
    Guard expr() {
        std::vector<Guard> terms;
        terms.push_back(term());
        while (accept("|")) terms.push_back(term());
        return Guard::disjunction(std::move(terms));
    }

    Guard term() {
        std::vector<Guard> factors;
        factors.push_back(factor());
        while (accept("&")) factors.push_back(factor());
        return Guard::conjunction(std::move(factors));
    }

    Guard factor() {
        if (accept("!")) return Guard::negate(factor());
        if (accept("(")) {
            Guard g = expr();
            expect(")");
            return g;
        }
        const std::string& tok = next();
        if (tok == "true") return Guard::constant(true);
        if (tok == "false") return Guard::constant(false);
        size_t at = tok.find('@');
        if (at != std::string::npos) {
            return Guard::literal(parse_label_prop(tok, 0, line_));
        }
        auto it = macros_.find(tok);
        if (it == macros_.end()) {
            throw ParseError("unknown macro '" + tok + "' (propositions need an @agent suffix)",
                             line_);
        }
        return it->second;
    }

    bool accept(std::string_view want) {
        if (pos_ < tokens_.size() && tokens_[pos_] == want) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(std::string_view want) {
        if (!accept(want)) {
            throw ParseError("expected '" + std::string(want) + "' in guard", line_);
        }
    }

    const std::string& next() {
        if (pos_ >= tokens_.size()) throw ParseError("guard ends unexpectedly", line_);
        return tokens_[pos_++];
    }

    const std::vector<std::string>& tokens_;
    size_t pos_;
    const std::map<std::string, Guard>& macros_;
    int line_;
};

// Guards need their own tokenization: operators may abut identifiers.
std::vector<std::string> tokenize_guard(const std::vector<std::string>& words, size_t first,
                                        int line) {
    std::vector<std::string> out;
    for (size_t w = first; w < words.size(); ++w) {
        const std::string& word = words[w];
        size_t i = 0;
        while (i < word.size()) {
            char c = word[i];
            if (c == '!' || c == '&' || c == '|' || c == '(' || c == ')') {
                out.emplace_back(1, c);
                ++i;
            } else if (is_ident_char(c) || c == '@') {
                size_t j = i;
                while (j < word.size() && (is_ident_char(word[j]) || word[j] == '@')) ++j;
                out.push_back(word.substr(i, j - i));
                i = j;
            } else {
                throw ParseError(std::string("bad character '") + c + "' in guard", line);
            }
        }
    }
    return out;
}

} // namespace

Dfa parse_dfa(std::string_view text) {
    std::vector<Line> lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty dfa text");

    Dfa d;
    std::map<std::string, Guard> macros;
    bool have_kind = false;
    bool have_states = false;
    bool have_init = false;
    std::vector<std::tuple<std::string, std::string, Guard, int>> trans;

    auto state_of = [&](const std::string& id, int n) {
        int q = d.state_index(id);
        if (q < 0) throw ParseError("unknown state id '" + id + "'", n);
        return q;
    };

    for (const Line& line : lines) {
        const std::string& key = line.tokens[0];
        const int n = line.number;
        auto arg_count = line.tokens.size() - 1;

        if (!have_kind && key != "kind") {
            throw ParseError("expected 'kind dfa' before '" + key + "'", n);
        }
        if (key == "kind") {
            if (have_kind) throw ParseError("duplicate kind line", n);
            if (arg_count != 1 || line.tokens[1] != "dfa") throw ParseError("expected 'kind dfa'", n);
            have_kind = true;
        } else if (key == "states") {
            if (have_states) throw ParseError("duplicate states line", n);
            if (arg_count == 0) throw ParseError("states line lists no states", n);
            for (size_t i = 1; i < line.tokens.size(); ++i) {
                if (!valid_identifier(line.tokens[i])) {
                    throw ParseError("bad state id '" + line.tokens[i] + "'", n);
                }
                if (d.state_index(line.tokens[i]) >= 0) {
                    throw ParseError("duplicate state id '" + line.tokens[i] + "'", n);
                }
                d.states.push_back(line.tokens[i]);
            }
            have_states = true;
        } else if (key == "init") {
            if (!have_states) throw ParseError("'states' line must come first", n);
            if (arg_count != 1) throw ParseError("expected 'init <state>'", n);
            d.initial = state_of(line.tokens[1], n);
            have_init = true;
        } else if (key == "accept") {
            if (!have_states) throw ParseError("'states' line must come first", n);
            for (size_t i = 1; i < line.tokens.size(); ++i) {
                int q = state_of(line.tokens[i], n);
                if (!std::count(d.accepting.begin(), d.accepting.end(), q)) {
                    d.accepting.push_back(q);
                }
            }
        } else if (key == "def") {
            if (arg_count < 3 || line.tokens[2] != "=") {
                throw ParseError("expected 'def <name> = <guard>'", n);
            }
            const std::string& name = line.tokens[1];
            if (!valid_identifier(name) || name == "true" || name == "false") {
                throw ParseError("bad macro name '" + name + "'", n);
            }
            if (macros.count(name)) throw ParseError("duplicate macro '" + name + "'", n);
            auto tokens = tokenize_guard(line.tokens, 3, n);
            macros.emplace(name, GuardParser(tokens, 0, macros, n).parse());
        } else if (key == "trans") {
            if (!have_states) throw ParseError("'states' line must come first", n);
            if (arg_count < 3) throw ParseError("expected 'trans <src> <dst> <guard>'", n);
            std::string src = line.tokens[1];
            std::string dst = line.tokens[2];
            state_of(src, n);
            state_of(dst, n);
            auto tokens = tokenize_guard(line.tokens, 3, n);
            trans.emplace_back(src, dst, GuardParser(tokens, 0, macros, n).parse(), n);
        } else {
            throw ParseError("unknown keyword '" + key + "'", n);
        }
    }
    if (!have_states) throw ParseError("missing states line");
    if (!have_init) throw ParseError("missing init line");

    std::sort(d.accepting.begin(), d.accepting.end());
    d.edges.assign(d.states.size(), {});
    for (auto& [src, dst, guard, n] : trans) {
        d.edges[d.state_index(src)].push_back(DfaEdge{std::move(guard), d.state_index(dst)});
    }
    for (auto& [name, guard] : macros) d.macros.emplace_back(name, guard);

    validate(d);
    return d;
}

// ---------------------------------------------------------------------------
// File loading

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

Component load_component(const std::string& path) {
    try {
        return parse_component(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

Dfa load_dfa(const std::string& path) {
    try {
        return parse_dfa(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

// Shortest decimal text that reparses to the same double.
std::string render_prob(double p) {
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, p);
        if (std::stod(buf) == p) break;
    }
    return buf;
}

std::string render_prop_for(const Prop& p, int agent) {
    return p.agent == agent ? p.base : to_string(p);
}

void render_header(std::string& out, const std::string& kind, const std::string& name, int agent,
                   const std::vector<std::string>& states) {
    out += "kind " + kind + "\n";
    if (!name.empty()) out += "name " + name + "\n";
    out += "agent " + std::to_string(agent) + "\n";
    out += "states";
    for (const std::string& s : states) out += " " + s;
    out += "\n";
}

void render_actions(std::string& out, const std::vector<std::string>& actions) {
    if (actions.empty()) return;
    out += "actions";
    for (const std::string& a : actions) out += " " + a;
    out += "\n";
}

void render_initial(std::string& out, const SparseRow& initial,
                    const std::vector<std::string>& states) {
    for (const auto& [s, p] : initial) {
        out += "init " + states[s] + " " + render_prob(p) + "\n";
    }
}

void render_labels(std::string& out, const std::vector<PropSet>& labels,
                   const std::vector<std::string>& states, int agent) {
    for (size_t s = 0; s < labels.size(); ++s) {
        if (labels[s].empty()) continue;
        out += "label " + states[s];
        for (const Prop& p : labels[s]) out += " " + render_prop_for(p, agent);
        out += "\n";
    }
}

} // namespace

std::string render_component(const Dfts& t) {
    std::string out;
    render_header(out, "dfts", t.name, t.agent, t.states);
    render_actions(out, t.actions);
    out += "init " + t.states[t.initial] + "\n";
    for (size_t s = 0; s < t.states.size(); ++s) {
        for (size_t a = 0; a < t.actions.size(); ++a) {
            if (t.next[s][a] >= 0) {
                out += "trans " + t.states[s] + " " + t.actions[a] + " " +
                       t.states[t.next[s][a]] + "\n";
            }
        }
    }
    render_labels(out, t.labels, t.states, t.agent);
    return out;
}

std::string render_component(const Mc& m) {
    std::string out;
    render_header(out, "mc", m.name, m.agent, m.states);
    render_initial(out, m.initial, m.states);
    for (size_t s = 0; s < m.states.size(); ++s) {
        for (const auto& [dst, p] : m.rows[s]) {
            out += "trans " + m.states[s] + " " + m.states[dst] + " " + render_prob(p) + "\n";
        }
    }
    render_labels(out, m.labels, m.states, m.agent);
    return out;
}

std::string render_component(const Mdp& m) {
    std::string out;
    render_header(out, "mdp", m.name, m.agent, m.states);
    render_actions(out, m.actions);
    render_initial(out, m.initial, m.states);
    for (size_t s = 0; s < m.states.size(); ++s) {
        for (size_t a = 0; a < m.actions.size(); ++a) {
            for (const auto& [dst, p] : m.rows[s][a]) {
                out += "trans " + m.states[s] + " " + m.actions[a] + " " + m.states[dst] + " " +
                       render_prob(p) + "\n";
            }
        }
    }
    render_labels(out, m.labels, m.states, m.agent);
    return out;
}

std::string render_component(const Component& c) {
    return std::visit([](const auto& x) { return render_component(x); }, c);
}

} // namespace anysyn
