#include "truecon/formats.hpp"

#include <fstream>
#include <sstream>

#include "truecon/error.hpp"

namespace truecon {

namespace {

struct Token {
    std::string text;
    std::size_t column;
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        toks.push_back({line.substr(start, i - start), start + 1});
    }
    // Cut at the first comment token, sparing the conflict separator.
    for (std::size_t k = 0; k < toks.size(); ++k) {
        if (toks[k].text.empty() || toks[k].text[0] != '#') continue;
        if (k == 2 && toks[0].text == "conflict" && toks[k].text == "#") continue;
        toks.resize(k);
        break;
    }
    return toks;
}

// Drives a per-line callback and turns model errors into positioned parse errors.
template <class F>
void for_each_line(const std::string& text, F&& handle) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        try {
            handle(lineno, toks);
        } catch (const ModelError& e) {
            throw ParseError(lineno, toks[0].column, e.what());
        }
    }
}

[[noreturn]] void fail(std::size_t line, const std::vector<Token>& toks, std::size_t idx, const std::string& msg) {
    std::size_t col = idx < toks.size() ? toks[idx].column
                                         : toks.back().column + toks.back().text.size();
    throw ParseError(line, col, msg);
}

void expect_count(std::size_t line, const std::vector<Token>& toks, std::size_t lo, std::size_t hi,
                  const std::string& usage) {
    if (toks.size() < lo) fail(line, toks, toks.size(), "expected " + usage);
    if (toks.size() > hi) fail(line, toks, hi, "unexpected token '" + toks[hi].text + "', expected " + usage);
}

} // namespace

Tsi parse_tsi(const std::string& text) {
    TsiBuilder b;
    std::vector<std::string> declared;
    bool has_init = false;
    auto known = [&](const std::string& s) {
        return std::find(declared.begin(), declared.end(), s) != declared.end();
    };
    for_each_line(text, [&](std::size_t ln, const std::vector<Token>& t) {
        const std::string& kw = t[0].text;
        if (kw == "state") {
            expect_count(ln, t, 2, 3, "state <id> [init]");
            bool init = t.size() == 3;
            if (init && t[2].text != "init") fail(ln, t, 2, "expected 'init'");
            if (known(t[1].text)) fail(ln, t, 1, "duplicate state " + t[1].text);
            if (init && has_init) fail(ln, t, 2, "second initial state");
            has_init = has_init || init;
            declared.push_back(t[1].text);
            b.add_state(t[1].text, init);
        } else if (kw == "trans") {
            expect_count(ln, t, 5, 5, "trans <id> <src> <label> <dst>");
            if (!known(t[2].text)) fail(ln, t, 2, "unknown state " + t[2].text);
            if (!known(t[4].text)) fail(ln, t, 4, "unknown state " + t[4].text);
            b.add_transition(t[1].text, t[2].text, t[3].text, t[4].text);
        } else if (kw == "indep") {
            expect_count(ln, t, 3, 3, "indep <id> <id>");
            b.add_indep(t[1].text, t[2].text);
        } else {
            fail(ln, t, 0, "unknown declaration '" + kw + "', expected state, trans or indep");
        }
    });
    if (declared.empty()) throw ParseError(1, 1, "no states declared");
    if (!has_init) throw ParseError(1, 1, "no initial state declared");
    try {
        return b.build();
    } catch (const ModelError& e) {
        throw ParseError(0, 0, e.what());
    }
}

PetriNet parse_net(const std::string& text) {
    PetriNet n;
    for_each_line(text, [&](std::size_t ln, const std::vector<Token>& t) {
        const std::string& kw = t[0].text;
        if (kw == "place") {
            expect_count(ln, t, 2, 3, "place <id> [marked]");
            if (t.size() == 3 && t[2].text != "marked") fail(ln, t, 2, "expected 'marked'");
            n.add_place(t[1].text, t.size() == 3);
        } else if (kw == "action") {
            expect_count(ln, t, 3, 3, "action <id> <label>");
            n.add_action(t[1].text, t[2].text);
        } else if (kw == "arc") {
            expect_count(ln, t, 4, 4, "arc <from> -> <to>");
            if (t[2].text != "->") fail(ln, t, 2, "expected '->'");
            n.add_arc(t[1].text, t[3].text);
        } else {
            fail(ln, t, 0, "unknown declaration '" + kw + "', expected place, action or arc");
        }
    });
    return n;
}

EventStructure parse_es(const std::string& text) {
    EventStructure e;
    for_each_line(text, [&](std::size_t ln, const std::vector<Token>& t) {
        const std::string& kw = t[0].text;
        if (kw == "event") {
            expect_count(ln, t, 3, 3, "event <id> <label>");
            e.add_event(t[1].text, t[2].text);
        } else if (kw == "causal") {
            expect_count(ln, t, 4, 4, "causal <id> < <id>");
            if (t[2].text != "<") fail(ln, t, 2, "expected '<'");
            e.add_causal(t[1].text, t[3].text);
        } else if (kw == "conflict") {
            expect_count(ln, t, 4, 4, "conflict <id> # <id>");
            if (t[2].text != "#") fail(ln, t, 2, "expected '#'");
            e.add_conflict(t[1].text, t[3].text);
        } else {
            fail(ln, t, 0, "unknown declaration '" + kw + "', expected event, causal or conflict");
        }
    });
    return e;
}

std::string write_tsi(const Tsi& t) {
    std::ostringstream out;
    for (StateId s = 0; s < t.state_count(); ++s) {
        out << "state " << t.state_name(s);
        if (s == t.initial()) out << " init";
        out << '\n';
    }
    for (TransId i = 0; i < t.transition_count(); ++i)
        out << "trans " << t.transition_name(i) << ' ' << t.state_name(t.source(i)) << ' ' << t.label(i) << ' '
            << t.state_name(t.target(i)) << '\n';
    for (auto [a, b] : t.indep_pairs())
        out << "indep " << t.transition_name(a) << ' ' << t.transition_name(b) << '\n';
    return out.str();
}

std::string write_net(const PetriNet& n) {
    std::ostringstream out;
    const auto& m0 = n.initial_marking();
    for (PlaceId p = 0; p < n.place_count(); ++p) {
        out << "place " << n.place_name(p);
        if (std::binary_search(m0.begin(), m0.end(), p)) out << " marked";
        out << '\n';
    }
    for (ActionId a = 0; a < n.action_count(); ++a)
        out << "action " << n.action_name(a) << ' ' << n.action_label(a) << '\n';
    for (ActionId a = 0; a < n.action_count(); ++a) {
        for (PlaceId p : n.preset(a)) out << "arc " << n.place_name(p) << " -> " << n.action_name(a) << '\n';
        for (PlaceId p : n.postset(a)) out << "arc " << n.action_name(a) << " -> " << n.place_name(p) << '\n';
    }
    return out.str();
}

std::string write_es(const EventStructure& e) {
    std::ostringstream out;
    for (EventId x = 0; x < e.event_count(); ++x)
        out << "event " << e.event_name(x) << ' ' << e.event_label(x) << '\n';
    for (auto [a, b] : e.declared_causality())
        out << "causal " << e.event_name(a) << " < " << e.event_name(b) << '\n';
    for (EventId x = 0; x < e.event_count(); ++x)
        for (EventId y = x + 1; y < e.event_count(); ++y)
            if (e.conflict(x, y)) out << "conflict " << e.event_name(x) << " # " << e.event_name(y) << '\n';
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace truecon
