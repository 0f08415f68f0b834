#include "truecon/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "truecon/batch.hpp"
#include "truecon/bisim.hpp"
#include "truecon/ccs.hpp"
#include "truecon/error.hpp"
#include "truecon/es.hpp"
#include "truecon/folding.hpp"
#include "truecon/formats.hpp"
#include "truecon/formula.hpp"
#include "truecon/mc_game.hpp"
#include "truecon/net.hpp"
#include "truecon/order.hpp"
#include "truecon/semantics.hpp"

namespace truecon::cli {

namespace {

using json = nlohmann::ordered_json;

// Carries an exit code up to run().
struct Failure {
    int code;
    std::string message;
};

const char* kFormats = R"(Formats (one declaration per line, '#' starts a comment):
  .tsi  state <id> [init] | trans <id> <src> <label> <dst> | indep <id> <id>
  .net  place <id> [marked] | action <id> <label> | arc <from> -> <to>
  .es   event <id> <label> | causal <id> < <id> | conflict <id> # <id>
  .ccs  Name = term, and root = term;  term ::= 0 | a.term | term + term | term | term | Name | (term)
        '|' only at the top of root; recursion must be guarded
  .tfl  one formula per line: tt ff Z !f f&f f|f <a>c f <a>nc f [a]c f [a]nc f <a> f [a] f
        <co> f [co] f mu Z. f nu Z. f

Exit codes: 0 yes/equivalent, 1 no, 2 unknown, 64 usage, 65 bad input, 70 cap exceeded or internal error.)";

std::string extension(const std::string& path) {
    auto dot = path.rfind('.');
    return dot == std::string::npos ? "" : path.substr(dot + 1);
}

// Runs f, turning library errors into exit codes with the file name attached.
template <class F>
auto guarded(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError& e) {
        throw Failure{kExitData, where + ":" + e.what()};
    } catch (const CapExceeded& e) {
        throw Failure{kExitInternal, where + ": " + e.what()};
    } catch (const StateExplosion& e) {
        throw Failure{kExitInternal, where + ": " + e.what()};
    } catch (const Error& e) {
        throw Failure{kExitData, where + ": " + e.what()};
    }
}

struct Model {
    std::string kind;
    Tsi tsi;
    std::optional<PetriNet> net;
    std::optional<EventStructure> es;
    std::optional<Relabelled> ccs;
};

Relabelled load_ccs(const std::string& path) {
    auto text = guarded(path, [&] { return read_file(path); });
    return guarded(path, [&] { return relabel_theta(parse_ccs(text)); });
}

Model load_model(const std::string& path) {
    auto text = guarded(path, [&] { return read_file(path); });
    auto ext = extension(path);
    return guarded(path, [&] {
        Model m;
        m.kind = ext;
        if (ext == "tsi") {
            m.tsi = parse_tsi(text);
        } else if (ext == "net") {
            m.net = parse_net(text);
            m.tsi = net_to_tsi(*m.net);
        } else if (ext == "es") {
            m.es = parse_es(text);
            m.tsi = es_to_tsi(*m.es);
        } else if (ext == "ccs") {
            m.ccs = relabel_theta(parse_ccs(text));
            m.net = ccs_to_net(m.ccs->program);
            m.tsi = net_to_tsi(*m.net);
        } else {
            throw Failure{kExitUsage, path + ": unknown model format (expected .tsi, .net, .es or .ccs)"};
        }
        return m;
    });
}

std::vector<Formula> load_formulas(const std::vector<std::string>& inline_formulas, const std::string& file,
                                   const Tsi& model) {
    ParseOptions opts;
    opts.alphabet = model.alphabet();
    opts.require_closed = true;
    std::vector<Formula> fs;
    for (const auto& s : inline_formulas) fs.push_back(guarded("<formula>", [&] { return parse_formula(s, opts); }));
    if (!file.empty()) {
        auto text = guarded(file, [&] { return read_file(file); });
        auto more = guarded(file, [&] { return parse_formula_list(text, opts); });
        fs.insert(fs.end(), more.begin(), more.end());
    }
    if (fs.empty()) throw Failure{kExitUsage, "no formula given (use --formula or --formulas)"};
    return fs;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Failure{kExitData, "cannot write " + path};
    f << text;
}

std::string theta_comments(const Relabelled& r) {
    std::string s;
    for (const auto& [now, was] : r.inverse)
        if (now != was) s += "# label " + now + " = " + was + "\n";
    return s;
}

json report_json(const ValidationReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json j{{"name", c.name}, {"passed", c.passed}};
        if (!c.passed) j["witness"] = c.witness;
        checks.push_back(j);
    }
    return checks;
}

// ------------------------------------------------------------ validate

int cmd_validate(const std::string& path, bool as_json, std::ostream& out) {
    std::vector<std::pair<std::string, ValidationReport>> reports;
    auto ext = extension(path);
    if (ext == "tsi" || ext == "net" || ext == "ccs" || ext == "es") {
        auto text = guarded(path, [&] { return read_file(path); });
        guarded(path, [&] {
            if (ext == "tsi") {
                reports.emplace_back("tsi", validate_tsi(parse_tsi(text)));
            } else if (ext == "es") {
                auto e = parse_es(text);
                reports.emplace_back("es", validate_es(e));
                reports.emplace_back("tsi", validate_tsi(es_to_tsi(e)));
            } else {
                auto n = ext == "net" ? parse_net(text) : ccs_to_net(relabel_theta(parse_ccs(text)).program);
                reports.emplace_back("net", validate_net(n));
                if (reports.back().second.ok()) reports.emplace_back("tsi", validate_tsi(net_to_tsi(n)));
            }
            return 0;
        });
    } else {
        throw Failure{kExitUsage, path + ": unknown model format"};
    }
    bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.second.ok(); });
    if (as_json) {
        json j{{"file", path}, {"valid", ok}, {"reports", json::object()}};
        for (const auto& [what, rep] : reports) j["reports"][what] = report_json(rep);
        out << j.dump(2) << "\n";
    } else {
        for (const auto& [what, rep] : reports)
            for (const auto& c : rep.checks)
                out << what << " " << c.name << ": " << (c.passed ? "ok" : "FAILED " + c.witness) << "\n";
        out << (ok ? "valid" : "invalid") << "\n";
    }
    return ok ? kExitYes : kExitNo;
}

// ------------------------------------------------------------ translate

int cmd_translate(const std::string& path, const std::string& to, const std::string& output, std::ostream& out) {
    auto ext = extension(path);
    std::string text;
    if (ext == "ccs") {
        auto r = load_ccs(path);
        text = theta_comments(r);
        text += guarded(path, [&]() -> std::string {
            if (to == "net") return write_net(ccs_to_net(r.program));
            if (to == "es") {
                CcsGenerator g(r.program);
                return write_es(materialize(g));
            }
            if (to == "ccs") return write_ccs(r.program);
            return write_tsi(net_to_tsi(ccs_to_net(r.program)));
        });
    } else {
        auto m = load_model(path);
        if (to == "tsi") text = write_tsi(m.tsi);
        else if (to == "net" && m.net) text = write_net(*m.net);
        else if (to == "es" && m.es) text = write_es(*m.es);
        else throw Failure{kExitUsage, "cannot translate ." + ext + " to " + to};
    }
    write_output(output, text, out);
    return kExitYes;
}

// ------------------------------------------------------------ check

struct CheckResult {
    std::optional<bool> denot, game;
    json detail = json::object();
};

json game_json(const McGame& g, const McSolution& sol) {
    std::set<std::uint32_t> prios(g.arena.priority.begin(), g.arena.priority.end());
    // Winner's choices along the plays its strategy allows.
    json strategy = json::array();
    std::vector<char> seen(g.size(), 0);
    std::deque<std::uint32_t> todo{g.initial};
    seen[g.initial] = 1;
    while (!todo.empty()) {
        auto v = todo.front();
        todo.pop_front();
        std::vector<std::uint32_t> next;
        if (g.arena.owner[v] == sol.winner && sol.parity.strategy[v] != kNoMove) {
            auto w = static_cast<std::uint32_t>(sol.parity.strategy[v]);
            strategy.push_back({{"node", g.describe(v)}, {"move", g.describe(w)}});
            next.push_back(w);
        } else {
            next = g.arena.succ[v];
        }
        for (auto w : next)
            if (!seen[w]) {
                seen[w] = 1;
                todo.push_back(w);
            }
    }
    return json{{"winner", to_string(sol.winner)},
                {"node_count", g.size()},
                {"priorities_used", std::vector<std::uint32_t>(prios.begin(), prios.end())},
                {"strategy", strategy}};
}

CheckResult check_one(const Tsi& t, const std::shared_ptr<const ProcessSpace>& space, const Formula& f,
                      const std::string& engine) {
    CheckResult r;
    if (engine == "denot" || engine == "both") {
        auto d = denote(to_positive_normal_form(f), *space);
        r.denot = d.test(space->initial());
        json lengths = json::object();
        if (f->op == Op::Mu || f->op == Op::Nu) {
            auto tr = approximants(f, *space);
            lengths[tr.variable] = tr.chain.size();
        }
        r.detail["denot"] = {{"satisfied", *r.denot}, {"denotation_size", d.count()}, {"approximant_lengths", lengths}};
    }
    if (engine == "game" || engine == "both") {
        auto g = build_mc_game(space, space->initial(), f);
        auto sol = solve_mc(g);
        r.game = sol.winner == Player::Eve;
        r.detail["game"] = game_json(g, sol);
    }
    if (engine == "stirling") {
        r.game = solve_stirling(t, f) == Player::Eve;
        r.detail["stirling"] = {{"winner", r.game.value() ? "Eve" : "Adam"}};
    }
    return r;
}

int cmd_check(const std::string& model_path, const std::vector<std::string>& formulas, const std::string& formula_file,
              const std::string& engine, bool as_json, int jobs, std::ostream& out) {
    auto m = load_model(model_path);
    auto fs = load_formulas(formulas, formula_file, m.tsi);
    auto space = guarded(model_path, [&] { return std::make_shared<const ProcessSpace>(m.tsi); });
    std::vector<CheckResult> results(fs.size());
    guarded(model_path, [&] {
        parallel_for(fs.size(), jobs, [&](std::size_t i) { results[i] = check_one(m.tsi, space, fs[i], engine); });
        return 0;
    });
    bool all = true;
    json arr = json::array();
    for (std::size_t i = 0; i < fs.size(); ++i) {
        auto& r = results[i];
        if (r.denot && r.game && *r.denot != *r.game)
            throw Failure{kExitInternal, "engines disagree on " + to_string(fs[i])};
        bool sat = r.denot ? *r.denot : *r.game;
        all = all && sat;
        if (as_json) {
            json j{{"formula", to_string(fs[i])}, {"satisfied", sat}};
            for (auto& [k, v] : r.detail.items()) j[k] = v;
            arr.push_back(j);
        } else {
            out << to_string(fs[i]) << ": " << (sat ? "satisfied" : "not satisfied") << " [" << engine << "]\n";
        }
    }
    if (as_json) out << json{{"model", model_path}, {"engine", engine}, {"results", arr}}.dump(2) << "\n";
    return all ? kExitYes : kExitNo;
}

// ------------------------------------------------------------ bisim

Mode parse_mode(const std::string& s) {
    if (s == "exact") return Mode::exact();
    if (s == "local") return Mode::local();
    if (s.rfind("bounded=", 0) == 0) {
        try {
            std::size_t used = 0;
            auto k = std::stoul(s.substr(8), &used);
            if (used == s.size() - 8) return Mode::bounded(k);
        } catch (const std::exception&) {
        }
    }
    throw Failure{kExitUsage, "bad --mode '" + s + "' (exact, bounded=K or local)"};
}

int cmd_bisim(const std::string& rel_s, const std::string& mode_s, const std::string& left, const std::string& right,
              const std::string& explain, std::size_t depth, bool as_json, std::ostream& out) {
    auto rel = relation_from_string(rel_s);
    if (!rel) throw Failure{kExitUsage, "bad --rel '" + rel_s + "' (sb, hpb, hhpb or thpb)"};
    Mode mode = parse_mode(mode_s);
    auto l = load_model(left);
    auto r = load_model(right);
    Verdict v = guarded(left + " vs " + right, [&] { return bisim(l.tsi, r.tsi, *rel, mode); });
    std::optional<Formula> formula;
    if (v.outcome == Outcome::NotEquivalent && v.formula) formula = v.formula;
    if (!explain.empty() && v.outcome != Outcome::Equivalent) {
        auto frag = fragment_from_string(explain);
        if (!frag) throw Failure{kExitUsage, "bad --explain fragment '" + explain + "'"};
        formula = distinguishing_formula(l.tsi, r.tsi, *frag, depth);
    }
    int code = v.outcome == Outcome::Equivalent ? kExitYes : v.outcome == Outcome::NotEquivalent ? kExitNo : kExitUnknown;
    if (as_json) {
        json j{{"relation", to_string(*rel)}, {"mode", mode_s}, {"verdict", to_string(v.outcome)},
               {"witness", v.witness}, {"configurations", v.configurations}};
        if (v.bound) j["bound"] = *v.bound;
        j["formula"] = formula ? json(to_string(*formula)) : json(nullptr);
        out << j.dump(2) << "\n";
    } else {
        out << to_string(*rel) << " (" << mode_s << "): " << to_string(v.outcome) << "\n";
        for (const auto& w : v.witness) out << "  " << w << "\n";
        if (formula) out << "  distinguishing formula: " << to_string(*formula) << "\n";
    }
    return code;
}

// ------------------------------------------------------------ classify

int cmd_classify(const std::string& path, std::ostream& out) {
    auto m = load_model(path);
    const Tsi& t = m.tsi;
    auto name = [&](TransId x) { return t.transition_name(x); };
    json j;
    json ac = json::array();
    for (auto [a, b] : detect_auto_concurrency(t)) ac.push_back({name(a), name(b)});
    j["auto_concurrency"] = ac;
    json conf = json::array();
    for (const auto& c : classify_confusion(t))
        conf.push_back({{"t1", name(c.t1)}, {"t2", name(c.t2)}, {"t3", name(c.t3)},
                        {"variant", c.variant == ConfusionVariant::Symmetric ? "symmetric" : "asymmetric"},
                        {"deterministic", c.deterministic}});
    j["confusion"] = conf;
    auto fc = is_free_choice(t);
    j["free_choice"] = fc.free_choice;
    if (fc.witness) j["free_choice_witness"] = {name((*fc.witness)[0]), name((*fc.witness)[1]), name((*fc.witness)[2])};
    auto xi = is_xi_system(t);
    j["xi"] = xi.xi;
    if (!xi.xi) j["xi_reason"] = xi.reason;
    if (m.net) {
        auto fcn = is_free_choice_net(*m.net);
        j["free_choice_net"] = fcn.free_choice;
        if (fcn.witness) j["free_choice_net_witness"] = m.net->place_name(*fcn.witness);
    }
    out << j.dump(2) << "\n";
    return kExitYes;
}

// ------------------------------------------------------------ fold

int cmd_fold(const std::string& ccs_path, const std::string& verify_path, const std::string& output, std::size_t cap,
             const std::string& formula_file, std::size_t depth, bool original, bool as_json, int jobs,
             std::ostream& out) {
    if (ccs_path.empty() == verify_path.empty()) throw Failure{kExitUsage, "fold needs exactly one of --ccs or --verify"};
    const std::string& path = ccs_path.empty() ? verify_path : ccs_path;
    auto r = load_ccs(path);
    CcsGenerator g(r.program);
    CcsOracle q(g);
    auto rs = guarded(path, [&] { return representative_set(g, q, cap); });
    Tsi folded = guarded(path, [&] { return fold(g, q, cap); });

    if (!verify_path.empty()) {
        if (formula_file.empty()) throw Failure{kExitUsage, "fold --verify needs --formulas"};
        auto fs = load_formulas({}, formula_file, folded);
        auto rep = guarded(path, [&] { return verify_fold(folded, g, fs, depth, cap, jobs); });
        if (as_json) {
            json checks = json::array();
            for (const auto& c : rep.checks)
                checks.push_back({{"formula", to_string(c.formula)}, {"folded", c.folded},
                                  {"unfolded", c.unfolded ? json(*c.unfolded) : json(nullptr)},
                                  {"status", to_string(c.status)}});
            out << json{{"program", path}, {"depth", depth}, {"states", folded.state_count()},
                        {"agreements", rep.agreements}, {"undecided", rep.undecided},
                        {"disagreements", rep.disagreements}, {"checks", checks}}
                       .dump(2)
                << "\n";
        } else {
            for (const auto& c : rep.checks) out << to_string(c.status) << ": " << to_string(c.formula) << "\n";
            out << rep.agreements << " agree, " << rep.undecided << " undecided, " << rep.disagreements
                << " disagree (depth " << depth << ")\n";
        }
        return rep.disagreements == 0 ? kExitYes : kExitNo;
    }

    if (original) {
        std::vector<Transition> ts;
        std::vector<std::string> names;
        std::vector<std::pair<TransId, TransId>> indep;
        for (TransId x = 0; x < folded.transition_count(); ++x) {
            auto tr = folded.transition(x);
            tr.label = r.inverse.count(tr.label) ? r.inverse.at(tr.label) : tr.label;
            ts.push_back(tr);
            names.push_back(folded.transition_name(x));
            for (auto y : folded.independent_of(x))
                if (x < y) indep.emplace_back(x, y);
        }
        std::vector<std::string> states;
        for (StateId s = 0; s < folded.state_count(); ++s) states.push_back(folded.state_name(s));
        folded = Tsi(states, folded.initial(), ts, names, indep);
    }
    std::string text = original ? "" : theta_comments(r);
    for (std::size_t i = 0; i < rs.classes.size(); ++i) text += "# s" + std::to_string(i) + " = " + rs.classes[i] + "\n";
    text += write_tsi(folded);
    write_output(output, text, out);
    return kExitYes;
}

// ------------------------------------------------------------ play

int cmd_play(const std::string& model_path, const std::string& formula, std::istream& in, std::ostream& out) {
    auto m = load_model(model_path);
    auto f = load_formulas({formula}, "", m.tsi).front();
    auto g = guarded(model_path, [&] { return build_mc_game(m.tsi, f); });
    auto sol = solve_mc(g);
    Player you = opponent(sol.winner);
    out << to_string(sol.winner) << " wins this game; you play " << to_string(you)
        << " against a winning strategy.\n";
    std::size_t turn = 0;
    ChoiceFn choose = [&](const McGame& game, std::uint32_t v, const std::vector<std::uint32_t>& opts) -> std::size_t {
        ++turn;
        out << "\n" << game.describe(v) << "   (" << to_string(game.rule[v]) << ")\n";
        for (std::size_t i = 0; i < opts.size(); ++i) out << "  [" << i << "] " << game.describe(opts[i]) << "\n";
        for (;;) {
            out << "move> " << std::flush;
            std::string line;
            if (!std::getline(in, line)) throw IllegalMove(turn, "<end of input>");
            try {
                std::size_t used = 0;
                auto k = std::stoul(line, &used);
                if (k < opts.size()) return k;
            } catch (const std::exception&) {
            }
            out << "pick a number between 0 and " << opts.size() - 1 << "\n";
        }
    };
    auto tr = guarded("play", [&] { return replay(g, sol, choose); });
    out << "\n" << to_string(g, tr) << "\n";
    return tr.winner == Player::Eve ? kExitYes : kExitNo;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
    CLI::App app{"True-concurrency model checking and equivalence games", "truecon"};
    app.set_version_flag("--version", kVersion);
    app.footer(kFormats);
    app.require_subcommand(1);

    std::string path, to = "tsi", output, model, formula_file, engine = "both", rel = "hpb", mode = "exact", left, right,
                      explain, ccs, verify, play_formula;
    std::vector<std::string> formulas;
    bool as_json = false, original = false;
    int jobs = 1;
    std::size_t cap = kDefaultFoldCap, depth = 12, explain_depth = 4;

    auto* validate = app.add_subcommand("validate", "check model axioms and well-formedness");
    validate->add_option("file", path, "model (.tsi .net .es .ccs)")->required();
    validate->add_flag("--json", as_json);

    auto* translate = app.add_subcommand("translate", "convert a net, event structure or CCS program");
    translate->add_option("file", path, "input model")->required();
    translate->add_option("--to", to, "target format")->check(CLI::IsMember({"tsi", "net", "es", "ccs"}));
    translate->add_option("-o,--output", output, "output file (default stdout)");

    auto* check = app.add_subcommand("check", "model-check formulas");
    check->add_option("--model", model, "model file")->required();
    check->add_option("--formula", formulas, "inline formula (repeatable)");
    check->add_option("--formulas", formula_file, "file with one formula per line");
    check->add_option("--engine", engine, "denot, game, both or stirling")
        ->check(CLI::IsMember({"denot", "game", "both", "stirling"}));
    check->add_flag("--json", as_json);
    check->add_option("--jobs", jobs, "parallel formula checks")->check(CLI::PositiveNumber);

    auto* bis = app.add_subcommand("bisim", "decide an equivalence between two systems");
    bis->add_option("--rel", rel, "sb, hpb, hhpb or thpb");
    bis->add_option("--mode", mode, "exact, bounded=K or local");
    bis->add_option("--left", left)->required();
    bis->add_option("--right", right)->required();
    bis->add_option("--explain", explain, "search a distinguishing formula in this fragment when not equivalent");
    bis->add_option("--explain-depth", explain_depth, "depth for --explain");
    bis->add_flag("--json", as_json);

    auto* classify = app.add_subcommand("classify", "confusion, free choice and Xi analysis (JSON)");
    classify->add_option("file", path)->required();

    auto* fld = app.add_subcommand("fold", "fold a CCS program into a finite TSI");
    fld->add_option("--ccs", ccs, "program to fold");
    fld->add_option("--verify", verify, "program whose fold is checked against its unfolding");
    fld->add_option("-o,--output", output);
    fld->add_option("--cap", cap, "configuration cap")->check(CLI::PositiveNumber);
    fld->add_option("--formulas", formula_file);
    fld->add_option("--depth", depth, "unfolding depth for --verify");
    fld->add_flag("--original-labels", original, "map suffixed labels back to the program's labels");
    fld->add_flag("--json", as_json);
    fld->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

    auto* play = app.add_subcommand("play", "play the model-checking game against the computer");
    play->add_option("--model", model)->required();
    play->add_option("--formula", play_formula)->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitYes;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitYes;
    } catch (const CLI::CallForVersion&) {
        out << "truecon " << kVersion << "\n";
        return kExitYes;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*validate) return cmd_validate(path, as_json, out);
        if (*translate) return cmd_translate(path, to, output, out);
        if (*check) return cmd_check(model, formulas, formula_file, engine, as_json, jobs, out);
        if (*bis) return cmd_bisim(rel, mode, left, right, explain, explain_depth, as_json, out);
        if (*classify) return cmd_classify(path, out);
        if (*fld) return cmd_fold(ccs, verify, output, cap, formula_file, depth, original, as_json, jobs, out);
        if (*play) return cmd_play(model, play_formula, in, out);
    } catch (const Failure& f) {
        err << "error: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}

} // namespace truecon::cli
