#include "truecon/ccs.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

#include "truecon/error.hpp"

namespace truecon {

CcsRef ccs_nil() { return std::make_shared<const CcsTerm>(CcsTerm{CcsTerm::Kind::Nil, {}, {}}); }
CcsRef ccs_prefix(const std::string& a, CcsRef t) {
    return std::make_shared<const CcsTerm>(CcsTerm{CcsTerm::Kind::Prefix, a, {std::move(t)}});
}
CcsRef ccs_sum(std::vector<CcsRef> ts) {
    if (ts.size() == 1) return ts.front();
    return std::make_shared<const CcsTerm>(CcsTerm{CcsTerm::Kind::Sum, {}, std::move(ts)});
}
CcsRef ccs_par(std::vector<CcsRef> ts) {
    if (ts.size() == 1) return ts.front();
    return std::make_shared<const CcsTerm>(CcsTerm{CcsTerm::Kind::Par, {}, std::move(ts)});
}
CcsRef ccs_name(const std::string& n) {
    return std::make_shared<const CcsTerm>(CcsTerm{CcsTerm::Kind::Name, n, {}});
}

std::vector<CcsRef> CcsProgram::components() const {
    std::vector<CcsRef> out;
    std::function<void(const CcsRef&)> walk = [&](const CcsRef& t) {
        if (t->kind == CcsTerm::Kind::Par)
            for (const auto& a : t->args) walk(a);
        else
            out.push_back(t);
    };
    walk(root);
    return out;
}

namespace {

using K = CcsTerm::Kind;

int precedence(const CcsRef& t) {
    switch (t->kind) {
    case K::Par: return 0;
    case K::Sum: return 1;
    default: return 2;
    }
}

std::string print(const CcsRef& t, int ctx) {
    std::string s;
    switch (t->kind) {
    case K::Nil: s = "0"; break;
    case K::Name: s = t->label; break;
    case K::Prefix: s = t->label + "." + print(t->args[0], 2); break;
    case K::Sum:
    case K::Par:
        for (std::size_t i = 0; i < t->args.size(); ++i) {
            if (i) s += t->kind == K::Sum ? " + " : " | ";
            s += print(t->args[i], precedence(t) + 1);
        }
        break;
    }
    return precedence(t) < ctx ? "(" + s + ")" : s;
}

// ----------------------------------------------------------------- parser

struct Tok {
    enum Type { Ident, Zero, Dot, Plus, Bar, LParen, RParen, Eq, End } type;
    std::string text;
    std::size_t col;
};

std::vector<Tok> lex(const std::string& line, std::size_t ln) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        std::size_t col = i + 1;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
            out.push_back({Tok::Ident, line.substr(i, j - i), col});
            i = j;
            continue;
        }
        Tok::Type t;
        switch (c) {
        case '0': t = Tok::Zero; break;
        case '.': t = Tok::Dot; break;
        case '+': t = Tok::Plus; break;
        case '|': t = Tok::Bar; break;
        case '(': t = Tok::LParen; break;
        case ')': t = Tok::RParen; break;
        case '=': t = Tok::Eq; break;
        default: throw ParseError(ln, col, std::string("unexpected character '") + c + "'");
        }
        out.push_back({t, std::string(1, c), col});
        ++i;
    }
    out.push_back({Tok::End, "", line.size() + 1});
    return out;
}

struct NameUse {
    std::string name;
    std::size_t line, col;
};

class TermParser {
public:
    TermParser(const std::vector<Tok>& toks, std::size_t ln, std::vector<NameUse>& uses)
        : t_(toks), ln_(ln), uses_(uses) {}

    CcsRef parse() {
        CcsRef r = par();
        if (t_[i_].type != Tok::End) fail("unexpected '" + t_[i_].text + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(ln_, t_[i_].col, msg); }

    CcsRef par() {
        std::vector<CcsRef> xs{sum()};
        while (t_[i_].type == Tok::Bar) {
            ++i_;
            xs.push_back(sum());
        }
        return ccs_par(std::move(xs));
    }

    CcsRef sum() {
        std::vector<CcsRef> xs{prefix()};
        while (t_[i_].type == Tok::Plus) {
            ++i_;
            xs.push_back(prefix());
        }
        return ccs_sum(std::move(xs));
    }

    CcsRef prefix() {
        const Tok& k = t_[i_];
        switch (k.type) {
        case Tok::Zero: ++i_; return ccs_nil();
        case Tok::LParen: {
            ++i_;
            CcsRef r = par();
            if (t_[i_].type != Tok::RParen) fail("expected ')'");
            ++i_;
            return r;
        }
        case Tok::Ident:
            ++i_;
            if (t_[i_].type == Tok::Dot) {
                ++i_;
                return ccs_prefix(k.text, prefix());
            }
            uses_.push_back({k.text, ln_, k.col});
            return ccs_name(k.text);
        default: fail(k.type == Tok::End ? "unexpected end of line" : "unexpected '" + k.text + "'");
        }
    }

    const std::vector<Tok>& t_;
    std::size_t ln_;
    std::vector<NameUse>& uses_;
    std::size_t i_ = 0;
};

bool contains_par(const CcsRef& t) {
    if (t->kind == K::Par) return true;
    return std::any_of(t->args.begin(), t->args.end(), contains_par);
}

void unguarded_names(const CcsRef& t, std::set<std::string>& out) {
    switch (t->kind) {
    case K::Name: out.insert(t->label); break;
    case K::Sum:
    case K::Par:
        for (const auto& a : t->args) unguarded_names(a, out);
        break;
    default: break;
    }
}

void check_fragment(const CcsProgram& p, const std::map<std::string, std::size_t>& lines = {}) {
    auto at = [&](const std::string& name) {
        auto it = lines.find(name);
        return it == lines.end() ? std::string() : "line " + std::to_string(it->second) + ": ";
    };
    for (const auto& [name, body] : p.definitions)
        if (contains_par(body))
            throw FragmentViolation("parallel-under-recursion", at(name) + "definition " + name + " uses |");
    for (const auto& c : p.components())
        if (contains_par(c)) throw FragmentViolation("parallel-under-recursion", at("root") + "| below the top of the root term");
    // A name reachable from itself without passing a prefix is unguarded.
    std::map<std::string, std::set<std::string>> edges;
    for (const auto& [name, body] : p.definitions) unguarded_names(body, edges[name]);
    for (const auto& [name, _] : p.definitions) {
        std::set<std::string> seen;
        std::deque<std::string> todo(edges[name].begin(), edges[name].end());
        while (!todo.empty()) {
            auto n = todo.front();
            todo.pop_front();
            if (n == name) throw FragmentViolation("unguarded", at(name) + "definition " + name + " calls itself unguarded");
            if (!seen.insert(n).second) continue;
            for (const auto& m : edges[n]) todo.push_back(m);
        }
    }
}

} // namespace

std::string to_string(const CcsRef& t) { return print(t, 0); }

CcsRef canonical(const CcsRef& t) {
    switch (t->kind) {
    case K::Nil:
    case K::Name: return t;
    case K::Prefix: return ccs_prefix(t->label, canonical(t->args[0]));
    case K::Sum:
    case K::Par: {
        std::vector<CcsRef> flat;
        std::function<void(const CcsRef&)> walk = [&](const CcsRef& x) {
            if (x->kind == t->kind)
                for (const auto& a : x->args) walk(a);
            else
                flat.push_back(canonical(x));
        };
        walk(t);
        std::stable_sort(flat.begin(), flat.end(),
                         [](const CcsRef& a, const CcsRef& b) { return to_string(a) < to_string(b); });
        return t->kind == K::Sum ? ccs_sum(std::move(flat)) : ccs_par(std::move(flat));
    }
    }
    return t;
}

std::string canonical_string(const CcsRef& t) { return to_string(canonical(t)); }

CcsProgram parse_ccs(const std::string& text) {
    CcsProgram p;
    std::vector<NameUse> uses;
    std::map<std::string, std::size_t> lines;
    std::istringstream in(text);
    std::string line;
    std::size_t ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        auto toks = lex(line, ln);
        if (toks.front().type == Tok::End) continue;
        if (toks.size() < 3 || toks[0].type != Tok::Ident || toks[1].type != Tok::Eq)
            throw ParseError(ln, toks[0].col, "expected 'Name = term'");
        std::vector<Tok> rest(toks.begin() + 2, toks.end());
        CcsRef body = TermParser(rest, ln, uses).parse();
        const std::string& name = toks[0].text;
        lines.emplace(name, ln);
        if (name == "root") {
            if (p.root) throw ParseError(ln, toks[0].col, "second root definition");
            p.root = body;
        } else {
            if (p.definitions.count(name)) throw ParseError(ln, toks[0].col, "duplicate definition " + name);
            p.definitions.emplace(name, body);
        }
    }
    if (!p.root) throw ParseError(ln ? ln : 1, 1, "missing 'root = term'");
    for (const auto& u : uses)
        if (!p.definitions.count(u.name)) throw ParseError(u.line, u.col, "undefined name " + u.name);
    check_fragment(p, lines);
    return p;
}

std::string write_ccs(const CcsProgram& p) {
    std::string s;
    for (const auto& [name, body] : p.definitions) s += name + " = " + to_string(body) + "\n";
    return s + "root = " + to_string(p.root) + "\n";
}

std::vector<CcsMove> ccs_moves(const CcsProgram& p, const CcsRef& t) {
    std::vector<CcsMove> out;
    std::function<void(const CcsRef&, std::size_t)> walk = [&](const CcsRef& x, std::size_t depth) {
        if (depth > p.definitions.size() + 1) throw FragmentViolation("unguarded", "unguarded recursion through " + x->label);
        switch (x->kind) {
        case K::Nil: break;
        case K::Prefix: out.push_back({x->label, x->args[0], x.get()}); break;
        case K::Sum:
            for (const auto& a : x->args) walk(a, depth);
            break;
        case K::Name: walk(p.definitions.at(x->label), depth + 1); break;
        case K::Par: throw FragmentViolation("parallel-under-recursion", "moves of a parallel term");
        }
    };
    walk(t, 0);
    return out;
}

namespace {

std::set<std::string> names_in(const CcsRef& t) {
    std::set<std::string> out;
    std::function<void(const CcsRef&)> walk = [&](const CcsRef& x) {
        if (x->kind == K::Name) out.insert(x->label);
        for (const auto& a : x->args) walk(a);
    };
    walk(t);
    return out;
}

std::set<std::string> reachable_names(const CcsProgram& p, const CcsRef& t) {
    std::set<std::string> seen;
    std::deque<std::string> todo;
    for (const auto& n : names_in(t)) todo.push_back(n);
    while (!todo.empty()) {
        auto n = todo.front();
        todo.pop_front();
        if (!seen.insert(n).second) continue;
        for (const auto& m : names_in(p.definitions.at(n))) todo.push_back(m);
    }
    return seen;
}

CcsRef rebuild(const CcsRef& t, const std::map<std::string, std::string>& rename,
               const std::map<const CcsTerm*, std::string>& labels) {
    switch (t->kind) {
    case K::Nil: return t;
    case K::Name: {
        auto it = rename.find(t->label);
        return it == rename.end() ? t : ccs_name(it->second);
    }
    case K::Prefix: {
        auto it = labels.find(t.get());
        return ccs_prefix(it == labels.end() ? t->label : it->second, rebuild(t->args[0], rename, labels));
    }
    case K::Sum:
    case K::Par: {
        std::vector<CcsRef> xs;
        for (const auto& a : t->args) xs.push_back(rebuild(a, rename, labels));
        return std::make_shared<const CcsTerm>(CcsTerm{t->kind, {}, std::move(xs)});
    }
    }
    return t;
}

// Reachable sequential terms of one component, deduplicated by canonical form.
std::vector<CcsRef> reachable_terms(const CcsProgram& p, const CcsRef& start) {
    std::vector<CcsRef> out;
    std::set<std::string> seen;
    std::deque<CcsRef> todo{start};
    while (!todo.empty()) {
        CcsRef t = todo.front();
        todo.pop_front();
        if (!seen.insert(canonical_string(t)).second) continue;
        out.push_back(t);
        for (const auto& m : ccs_moves(p, t)) todo.push_back(m.residual);
    }
    return out;
}

} // namespace

Relabelled relabel_theta(const CcsProgram& p) {
    auto comps = p.components();
    // Copy definitions that several components reach.
    std::vector<std::set<std::string>> reach;
    std::map<std::string, std::size_t> users;
    for (const auto& c : comps) {
        reach.push_back(reachable_names(p, c));
        for (const auto& n : reach.back()) ++users[n];
    }
    std::set<std::string> taken;
    for (const auto& [n, _] : p.definitions) taken.insert(n);
    auto fresh = [&](const std::string& base) {
        std::string s = base;
        for (std::size_t k = 1; taken.count(s); ++k) s = base + "_" + std::to_string(k);
        taken.insert(s);
        return s;
    };
    CcsProgram q;
    std::vector<CcsRef> new_comps;
    std::vector<std::map<std::string, std::string>> renames(comps.size());
    for (std::size_t k = 0; k < comps.size(); ++k)
        for (const auto& n : reach[k])
            if (users[n] > 1) renames[k][n] = fresh(n + "_c" + std::to_string(k + 1));
    for (std::size_t k = 0; k < comps.size(); ++k) {
        new_comps.push_back(rebuild(comps[k], renames[k], {}));
        for (const auto& n : reach[k]) {
            std::string nn = renames[k].count(n) ? renames[k].at(n) : n;
            q.definitions[nn] = rebuild(p.definitions.at(n), renames[k], {});
        }
    }
    // Unreachable definitions are kept as they are.
    for (const auto& [n, body] : p.definitions)
        if (!users.count(n)) q.definitions[n] = body;
    q.root = ccs_par(new_comps);

    // Prefix occurrences per label, in a fixed traversal order.
    std::map<std::string, std::vector<const CcsTerm*>> occurrences;
    std::map<std::string, std::set<std::size_t>> component_of;
    std::set<const CcsTerm*> visited;
    std::function<void(const CcsRef&, std::size_t)> collect = [&](const CcsRef& t, std::size_t k) {
        if (t->kind == K::Prefix && visited.insert(t.get()).second) {
            occurrences[t->label].push_back(t.get());
            component_of[t->label].insert(k);
        }
        for (const auto& a : t->args) collect(a, k);
    };
    for (std::size_t k = 0; k < new_comps.size(); ++k) {
        collect(new_comps[k], k);
        for (const auto& n : reachable_names(q, new_comps[k])) collect(q.definitions.at(n), k);
    }
    std::set<std::string> clash;
    for (const auto& [label, ks] : component_of)
        if (ks.size() > 1) clash.insert(label);
    for (const auto& c : new_comps)
        for (const auto& t : reachable_terms(q, c)) {
            std::map<std::string, std::set<const CcsTerm*>> by_label;
            for (const auto& m : ccs_moves(q, t)) by_label[m.label].insert(m.prefix);
            for (const auto& [label, ps] : by_label)
                if (ps.size() > 1) clash.insert(label);
        }

    Relabelled out;
    std::set<std::string> labels;
    for (const auto& [label, _] : occurrences) labels.insert(label);
    std::map<const CcsTerm*, std::string> relabel;
    for (const auto& [label, occ] : occurrences) {
        if (!clash.count(label)) {
            out.inverse[label] = label;
            continue;
        }
        std::size_t k = 0;
        for (const auto* t : occ) {
            std::string nl;
            do nl = label + "_" + std::to_string(++k);
            while (labels.count(nl));
            labels.insert(nl);
            relabel[t] = nl;
            out.inverse[nl] = label;
        }
    }
    for (auto& [n, body] : q.definitions) body = rebuild(body, {}, relabel);
    std::vector<CcsRef> final_comps;
    for (const auto& c : new_comps) final_comps.push_back(rebuild(c, {}, relabel));
    q.root = ccs_par(final_comps);
    out.program = std::move(q);
    return out;
}

PetriNet ccs_to_net(const CcsProgram& p) {
    check_fragment(p);
    PetriNet n;
    std::set<std::string> used;
    auto comps = p.components();
    for (std::size_t k = 0; k < comps.size(); ++k) {
        auto terms = reachable_terms(p, comps[k]);
        std::map<std::string, std::string> place;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            std::string name = "c" + std::to_string(k) + "s" + std::to_string(i);
            place.emplace(canonical_string(terms[i]), name);
            n.add_place(name, i == 0);
        }
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string& from = place.at(canonical_string(terms[i]));
            std::set<std::pair<std::string, std::string>> done;
            for (const auto& m : ccs_moves(p, terms[i])) {
                const std::string& to = place.at(canonical_string(m.residual));
                if (!done.insert({m.label, to}).second) continue;
                // After relabelling a label names one move per place.
                std::string action = m.label + "@" + from;
                if (!used.insert(action).second) action += "_" + std::to_string(done.size());
                n.add_action(action, m.label);
                n.add_arc(from, action);
                n.add_arc(action, to);
            }
        }
    }
    return n;
}

CcsGenerator::CcsGenerator(CcsProgram p) : program_(std::move(p)) {
    check_fragment(program_);
    components_ = program_.components();
}

namespace {

std::pair<std::size_t, std::vector<std::size_t>> split_key(const std::string& key) {
    auto colon = key.find(':');
    std::size_t k = std::stoul(key.substr(0, colon));
    std::vector<std::size_t> path;
    std::string rest = key.substr(colon + 1);
    std::size_t start = 0;
    while (start <= rest.size() && !rest.empty()) {
        auto dot = rest.find('.', start);
        path.push_back(std::stoul(rest.substr(start, dot - start)));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return {k, path};
}

} // namespace

std::vector<CcsRef> CcsGenerator::residuals(const EventConfig& c) const {
    std::vector<std::string> deepest(components_.size());
    for (const auto& key : c) {
        auto k = std::stoul(key.substr(0, key.find(':')));
        if (k >= components_.size()) throw ModelError("event " + key + " names no component");
        if (key.size() > deepest[k].size()) deepest[k] = key;
    }
    std::vector<CcsRef> res = components_;
    for (std::size_t k = 0; k < components_.size(); ++k) {
        if (deepest[k].empty()) continue;
        for (auto idx : split_key(deepest[k]).second) {
            auto ms = ccs_moves(program_, res[k]);
            if (idx >= ms.size()) throw ModelError("event " + deepest[k] + " is not enabled");
            res[k] = ms[idx].residual;
        }
    }
    return res;
}

std::vector<EsStep> CcsGenerator::successors(const EventConfig& c) const {
    std::vector<std::string> deepest(components_.size());
    for (const auto& key : c) {
        auto k = std::stoul(key.substr(0, key.find(':')));
        if (key.size() > deepest[k].size()) deepest[k] = key;
    }
    auto res = residuals(c);
    std::vector<EsStep> out;
    for (std::size_t k = 0; k < components_.size(); ++k) {
        std::string base = deepest[k].empty() ? std::to_string(k) + ":" : deepest[k] + ".";
        auto ms = ccs_moves(program_, res[k]);
        for (std::size_t j = 0; j < ms.size(); ++j) out.push_back({base + std::to_string(j), ms[j].label});
    }
    return out;
}

bool CcsGenerator::concurrent(const std::string& e1, const std::string& e2) const {
    return e1.substr(0, e1.find(':')) != e2.substr(0, e2.find(':'));
}

std::string CcsOracle::canonical(const EventConfig& c) const {
    std::vector<std::string> parts;
    for (const auto& r : g_.residuals(c)) parts.push_back(canonical_string(r));
    std::sort(parts.begin(), parts.end());
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " | " : "") + parts[i];
    return s;
}

} // namespace truecon
