#include "truecon/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "truecon/error.hpp"

namespace truecon {

namespace {

Formula make(Op op, std::string name = {}, Formula l = nullptr, Formula r = nullptr) {
    return std::make_shared<const Node>(Node{op, std::move(name), std::move(l), std::move(r)});
}

bool is_binder(Op op) { return op == Op::Mu || op == Op::Nu; }

bool is_modal(Op op) {
    switch (op) {
    case Op::DiaC: case Op::DiaNC: case Op::BoxC: case Op::BoxNC: case Op::DiaCo: case Op::BoxCo:
        return true;
    default:
        return false;
    }
}

} // namespace

Formula tt() { return make(Op::Tt); }
Formula ff() { return make(Op::Ff); }
Formula var(const std::string& z) { return make(Op::Var, z); }
Formula neg(Formula f) { return make(Op::Neg, {}, std::move(f)); }
Formula conj(Formula a, Formula b) { return make(Op::And, {}, std::move(a), std::move(b)); }
Formula disj(Formula a, Formula b) { return make(Op::Or, {}, std::move(a), std::move(b)); }
Formula dia_c(const std::string& a, Formula f) { return make(Op::DiaC, a, std::move(f)); }
Formula dia_nc(const std::string& a, Formula f) { return make(Op::DiaNC, a, std::move(f)); }
Formula box_c(const std::string& a, Formula f) { return make(Op::BoxC, a, std::move(f)); }
Formula box_nc(const std::string& a, Formula f) { return make(Op::BoxNC, a, std::move(f)); }
Formula dia_co(Formula f) { return make(Op::DiaCo, {}, std::move(f)); }
Formula box_co(Formula f) { return make(Op::BoxCo, {}, std::move(f)); }
Formula mu(const std::string& z, Formula f) { return make(Op::Mu, z, std::move(f)); }
Formula nu(const std::string& z, Formula f) { return make(Op::Nu, z, std::move(f)); }
Formula dia(const std::string& a, Formula f) { return disj(dia_c(a, f), dia_nc(a, f)); }
Formula box(const std::string& a, Formula f) { return conj(box_c(a, f), box_nc(a, f)); }

int compare(const Formula& a, const Formula& b) {
    if (a == b) return 0;
    if (!a) return -1;
    if (!b) return 1;
    if (a->op != b->op) return a->op < b->op ? -1 : 1;
    if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
    if (int c = compare(a->left, b->left)) return c;
    return compare(a->right, b->right);
}

bool equal(const Formula& a, const Formula& b) { return compare(a, b) == 0; }

namespace {

void collect_names(const Formula& f, std::set<std::string>& out) {
    if (!f) return;
    if (f->op == Op::Var || is_binder(f->op)) out.insert(f->name);
    collect_names(f->left, out);
    collect_names(f->right, out);
}

void free_vars(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    if (!f) return;
    if (f->op == Op::Var) {
        if (!bound.count(f->name)) out.insert(f->name);
        return;
    }
    if (is_binder(f->op)) {
        bool fresh = bound.insert(f->name).second;
        free_vars(f->left, bound, out);
        if (fresh) bound.erase(f->name);
        return;
    }
    free_vars(f->left, bound, out);
    free_vars(f->right, bound, out);
}

Formula rebuild(const Formula& f, Formula l, Formula r, std::string name) {
    if (l == f->left && r == f->right && name == f->name) return f;
    return make(f->op, std::move(name), std::move(l), std::move(r));
}

Formula rename(const Formula& f, std::map<std::string, std::string>& env,
               const std::function<std::string(const std::string&)>& pick) {
    if (!f) return f;
    if (f->op == Op::Var) {
        auto it = env.find(f->name);
        return it == env.end() ? f : rebuild(f, nullptr, nullptr, it->second);
    }
    if (is_binder(f->op)) {
        std::string fresh = pick(f->name);
        auto saved = env.find(f->name) == env.end() ? std::optional<std::string>{}
                                                    : std::optional<std::string>{env[f->name]};
        env[f->name] = fresh;
        Formula body = rename(f->left, env, pick);
        if (saved) env[f->name] = *saved; else env.erase(f->name);
        return rebuild(f, body, nullptr, fresh);
    }
    return rebuild(f, rename(f->left, env, pick), rename(f->right, env, pick), f->name);
}

} // namespace

std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    free_vars(f, bound, out);
    return out;
}

Formula rename_apart(const Formula& f) {
    std::set<std::string> taken;
    collect_names(f, taken);
    std::set<std::string> used = free_variables(f);
    std::map<std::string, std::string> env;
    auto pick = [&](const std::string& z) {
        if (!used.count(z)) {
            used.insert(z);
            return z;
        }
        for (std::size_t k = 1;; ++k) {
            std::string cand = z + "_" + std::to_string(k);
            if (!used.count(cand) && !taken.count(cand)) {
                used.insert(cand);
                return cand;
            }
        }
    };
    return rename(f, env, pick);
}

Formula alpha_normalize(const Formula& f) {
    std::size_t counter = 0;
    std::map<std::string, std::string> env;
    auto pick = [&](const std::string&) { return "_" + std::to_string(counter++); };
    return rename(f, env, pick);
}

bool alpha_equal(const Formula& a, const Formula& b) {
    return equal(alpha_normalize(a), alpha_normalize(b));
}

bool is_plain_dia(const Formula& f) {
    if (!f || f->op != Op::Or) return false;
    const auto &l = f->left, &r = f->right;
    bool shape = (l->op == Op::DiaC && r->op == Op::DiaNC) || (l->op == Op::DiaNC && r->op == Op::DiaC);
    return shape && l->name == r->name && alpha_equal(l->left, r->left);
}

bool is_plain_box(const Formula& f) {
    if (!f || f->op != Op::And) return false;
    const auto &l = f->left, &r = f->right;
    bool shape = (l->op == Op::BoxC && r->op == Op::BoxNC) || (l->op == Op::BoxNC && r->op == Op::BoxC);
    return shape && l->name == r->name && alpha_equal(l->left, r->left);
}

std::size_t formula_size(const Formula& f) {
    if (!f) return 0;
    return 1 + formula_size(f->left) + formula_size(f->right);
}

std::size_t modal_depth(const Formula& f) {
    if (!f) return 0;
    if (is_plain_dia(f) || is_plain_box(f)) return 1 + modal_depth(f->left->left);
    std::size_t inner = std::max(modal_depth(f->left), modal_depth(f->right));
    return is_modal(f->op) ? inner + 1 : inner;
}

bool has_fixpoint(const Formula& f) {
    if (!f) return false;
    if (is_binder(f->op) || f->op == Op::Var) return true;
    return has_fixpoint(f->left) || has_fixpoint(f->right);
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { Ident, LParen, RParen, Lt, Gt, LBr, RBr, Bang, Amp, Bar, Dot, Comma, Minus, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line, col;
    bool glued;  // no whitespace before it
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        bool glued = true;
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            glued = false;
            advance();
        }
        Token t{Tok::End, "", line_, col_, glued};
        if (pos_ >= s_.size()) return t;
        char c = s_[pos_];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
                advance();
            t.kind = Tok::Ident;
            t.text = s_.substr(start, pos_ - start);
            return t;
        }
        advance();
        t.text = std::string(1, c);
        switch (c) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '<': t.kind = Tok::Lt; break;
        case '>': t.kind = Tok::Gt; break;
        case '[': t.kind = Tok::LBr; break;
        case ']': t.kind = Tok::RBr; break;
        case '!': t.kind = Tok::Bang; break;
        case '&': t.kind = Tok::Amp; break;
        case '|': t.kind = Tok::Bar; break;
        case '.': t.kind = Tok::Dot; break;
        case ',': t.kind = Tok::Comma; break;
        case '-': t.kind = Tok::Minus; break;
        default: throw ParseError(t.line, t.col, std::string("unexpected character '") + c + "'");
        }
        return t;
    }

private:
    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& s_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

bool is_keyword(const std::string& s) { return s == "tt" || s == "ff" || s == "mu" || s == "nu"; }

class Parser {
public:
    Parser(const std::string& text, const ParseOptions& opts) : lex_(text), opts_(opts) { cur_ = lex_.next(); }

    Formula parse() {
        Formula f = disjunction();
        if (cur_.kind != Tok::End) error("end of formula");
        return f;
    }

private:
    [[noreturn]] void error(const std::string& expected) {
        std::string found = cur_.kind == Tok::End ? "end of input" : "'" + cur_.text + "'";
        throw ParseError(cur_.line, cur_.col, "expected " + expected + ", found " + found);
    }

    void expect(Tok k, const std::string& what) {
        if (cur_.kind != k) error(what);
        cur_ = lex_.next();
    }

    Formula disjunction() {
        Formula f = conjunction();
        while (cur_.kind == Tok::Bar) {
            cur_ = lex_.next();
            f = disj(f, conjunction());
        }
        return f;
    }

    Formula conjunction() {
        Formula f = unary();
        while (cur_.kind == Tok::Amp) {
            cur_ = lex_.next();
            f = conj(f, unary());
        }
        return f;
    }

    Formula unary() {
        switch (cur_.kind) {
        case Tok::Bang:
            cur_ = lex_.next();
            return neg(unary());
        case Tok::Lt:
            return modality(true);
        case Tok::LBr:
            return modality(false);
        case Tok::LParen: {
            cur_ = lex_.next();
            Formula f = disjunction();
            expect(Tok::RParen, "')'");
            return f;
        }
        case Tok::Ident:
            break;
        default:
            error("formula");
        }
        std::string word = cur_.text;
        if (word == "tt" || word == "ff") {
            cur_ = lex_.next();
            return word == "tt" ? tt() : ff();
        }
        if (word == "mu" || word == "nu") {
            cur_ = lex_.next();
            if (cur_.kind != Tok::Ident || is_keyword(cur_.text)) error("fixpoint variable");
            std::string z = cur_.text;
            cur_ = lex_.next();
            expect(Tok::Dot, "'.'");
            Formula body = disjunction();
            return word == "mu" ? mu(z, body) : nu(z, body);
        }
        cur_ = lex_.next();
        return var(word);
    }

    Formula modality(bool diamond) {
        Tok close = diamond ? Tok::Gt : Tok::RBr;
        std::string closer = diamond ? "'>'" : "']'";
        cur_ = lex_.next();
        if (cur_.kind == Tok::Ident && cur_.text == "co") {
            cur_ = lex_.next();
            expect(close, closer);
            Formula body = unary();
            return diamond ? dia_co(body) : box_co(body);
        }
        bool complement = false;
        if (cur_.kind == Tok::Minus) {
            complement = true;
            cur_ = lex_.next();
        }
        std::vector<std::string> labels;
        if (cur_.kind == Tok::Ident) {
            labels.push_back(cur_.text);
            cur_ = lex_.next();
            while (cur_.kind == Tok::Comma) {
                cur_ = lex_.next();
                if (cur_.kind != Tok::Ident) error("label");
                labels.push_back(cur_.text);
                cur_ = lex_.next();
            }
        } else if (!complement) {
            error("label");
        }
        if (cur_.kind != close) error(closer);
        cur_ = lex_.next();

        // c / nc suffix must touch the closing bracket.
        enum class Kind { Plain, Causal, NonCausal } kind = Kind::Plain;
        if (cur_.kind == Tok::Ident && cur_.glued && (cur_.text == "c" || cur_.text == "nc")) {
            kind = cur_.text == "c" ? Kind::Causal : Kind::NonCausal;
            cur_ = lex_.next();
        }
        if (complement) {
            if (opts_.alphabet.empty())
                throw ParseError(cur_.line, cur_.col, "complement label set needs the model alphabet");
            std::vector<std::string> keep;
            for (const auto& a : opts_.alphabet)
                if (std::find(labels.begin(), labels.end(), a) == labels.end()) keep.push_back(a);
            labels = keep;
        }
        Formula body = unary();
        Formula acc = nullptr;
        for (const auto& a : labels) {
            Formula m;
            switch (kind) {
            case Kind::Plain: m = diamond ? dia(a, body) : box(a, body); break;
            case Kind::Causal: m = diamond ? dia_c(a, body) : box_c(a, body); break;
            case Kind::NonCausal: m = diamond ? dia_nc(a, body) : box_nc(a, body); break;
            }
            acc = !acc ? m : (diamond ? disj(acc, m) : conj(acc, m));
        }
        if (!acc) return diamond ? ff() : tt();
        return acc;
    }

    Lexer lex_;
    const ParseOptions& opts_;
    Token cur_;
};

// Bound variables must sit under an even number of negations.
void check_polarity(const Formula& f, std::map<std::string, bool>& bound, bool negated) {
    if (!f) return;
    switch (f->op) {
    case Op::Var: {
        auto it = bound.find(f->name);
        if (it != bound.end() && it->second != negated)
            throw FormulaError("variable " + f->name + " occurs under an odd number of negations");
        return;
    }
    case Op::Neg:
        check_polarity(f->left, bound, !negated);
        return;
    case Op::Mu:
    case Op::Nu: {
        auto saved = bound.find(f->name) == bound.end() ? std::optional<bool>{}
                                                        : std::optional<bool>{bound[f->name]};
        bound[f->name] = negated;
        check_polarity(f->left, bound, negated);
        if (saved) bound[f->name] = *saved; else bound.erase(f->name);
        return;
    }
    default:
        check_polarity(f->left, bound, negated);
        check_polarity(f->right, bound, negated);
    }
}

} // namespace

Formula parse_formula(const std::string& text, const ParseOptions& opts) {
    Parser p(text, opts);
    Formula f = p.parse();
    std::map<std::string, bool> bound;
    check_polarity(f, bound, false);
    if (opts.require_closed) {
        auto fv = free_variables(f);
        if (!fv.empty()) throw UnboundVariable(*fv.begin());
    }
    return rename_apart(f);
}

std::vector<Formula> parse_formula_list(const std::string& text, const ParseOptions& opts) {
    std::vector<Formula> res;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        try {
            res.push_back(parse_formula(line, opts));
        } catch (const ParseError& e) {
            std::string msg = e.what();
            auto cut = msg.find(": ");
            throw ParseError(lineno, e.column(), cut == std::string::npos ? msg : msg.substr(cut + 2));
        }
    }
    return res;
}

// ---------------------------------------------------------------- printing

namespace {

void print(const Formula& f, int ctx, std::string& out) {
    auto wrap = [&](int prec, auto&& body) {
        bool paren = prec < ctx;
        if (paren) out += "(";
        body();
        if (paren) out += ")";
    };
    auto primary_body = [](const Formula& g) {
        // Body of the causal branch of a plain pattern.
        return g->left->op == Op::DiaC || g->left->op == Op::BoxC ? g->left->left : g->right->left;
    };
    switch (f->op) {
    case Op::Tt: out += "tt"; return;
    case Op::Ff: out += "ff"; return;
    case Op::Var: out += f->name; return;
    case Op::Neg:
        wrap(3, [&] { out += "!"; print(f->left, 3, out); });
        return;
    case Op::Or:
        if (is_plain_dia(f)) {
            wrap(3, [&] { out += "<" + f->left->name + "> "; print(primary_body(f), 3, out); });
            return;
        }
        wrap(1, [&] { print(f->left, 1, out); out += " | "; print(f->right, 2, out); });
        return;
    case Op::And:
        if (is_plain_box(f)) {
            wrap(3, [&] { out += "[" + f->left->name + "] "; print(primary_body(f), 3, out); });
            return;
        }
        wrap(2, [&] { print(f->left, 2, out); out += " & "; print(f->right, 3, out); });
        return;
    case Op::DiaC: wrap(3, [&] { out += "<" + f->name + ">c "; print(f->left, 3, out); }); return;
    case Op::DiaNC: wrap(3, [&] { out += "<" + f->name + ">nc "; print(f->left, 3, out); }); return;
    case Op::BoxC: wrap(3, [&] { out += "[" + f->name + "]c "; print(f->left, 3, out); }); return;
    case Op::BoxNC: wrap(3, [&] { out += "[" + f->name + "]nc "; print(f->left, 3, out); }); return;
    case Op::DiaCo: wrap(3, [&] { out += "<co> "; print(f->left, 3, out); }); return;
    case Op::BoxCo: wrap(3, [&] { out += "[co] "; print(f->left, 3, out); }); return;
    case Op::Mu:
    case Op::Nu:
        wrap(0, [&] {
            out += (f->op == Op::Mu ? "mu " : "nu ") + f->name + ". ";
            print(f->left, 0, out);
        });
        return;
    }
}

} // namespace

std::string to_string(const Formula& f) {
    std::string out;
    print(f, 0, out);
    return out;
}

// ---------------------------------------------------------------- normal forms

namespace {

Formula pnf(const Formula& f, bool negated, std::set<std::string>& flipped) {
    switch (f->op) {
    case Op::Tt: return negated ? ff() : f;
    case Op::Ff: return negated ? tt() : f;
    case Op::Var: {
        bool n = negated != (flipped.count(f->name) > 0);
        return n ? neg(f) : f;
    }
    case Op::Neg: return pnf(f->left, !negated, flipped);
    case Op::And: {
        auto l = pnf(f->left, negated, flipped), r = pnf(f->right, negated, flipped);
        return negated ? disj(l, r) : conj(l, r);
    }
    case Op::Or: {
        auto l = pnf(f->left, negated, flipped), r = pnf(f->right, negated, flipped);
        return negated ? conj(l, r) : disj(l, r);
    }
    case Op::DiaC: return (negated ? box_c : dia_c)(f->name, pnf(f->left, negated, flipped));
    case Op::BoxC: return (negated ? dia_c : box_c)(f->name, pnf(f->left, negated, flipped));
    case Op::DiaNC: return (negated ? box_nc : dia_nc)(f->name, pnf(f->left, negated, flipped));
    case Op::BoxNC: return (negated ? dia_nc : box_nc)(f->name, pnf(f->left, negated, flipped));
    case Op::DiaCo: return (negated ? box_co : dia_co)(pnf(f->left, negated, flipped));
    case Op::BoxCo: return (negated ? dia_co : box_co)(pnf(f->left, negated, flipped));
    case Op::Mu:
    case Op::Nu: {
        // ¬μZ.φ = νZ.¬φ[¬Z/Z]: occurrences of Z flip once more.
        bool was = flipped.count(f->name) > 0;
        if (negated) flipped.insert(f->name); else flipped.erase(f->name);
        Formula body = pnf(f->left, negated, flipped);
        if (was) flipped.insert(f->name); else flipped.erase(f->name);
        bool least = (f->op == Op::Mu) != negated;
        return least ? mu(f->name, body) : nu(f->name, body);
    }
    }
    return f;
}

} // namespace

Formula to_positive_normal_form(const Formula& f) {
    Formula g = rename_apart(f);
    std::set<std::string> flipped;
    return pnf(g, false, flipped);
}

bool is_positive_normal_form(const Formula& f) {
    if (!f) return true;
    if (f->op == Op::Neg) return f->left->op == Op::Var;
    return is_positive_normal_form(f->left) && is_positive_normal_form(f->right);
}

std::vector<Formula> fl_closure(const Formula& f) {
    std::vector<Formula> out;
    std::set<Formula, FormulaLess> seen;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (!g) return;
        if (!seen.insert(g).second) return;
        out.push_back(g);
        walk(g->left);
        walk(g->right);
    };
    walk(f);
    return out;
}

// ---------------------------------------------------------------- fragments

namespace {

bool only_plain(const Formula& f) {
    if (!f) return true;
    if (is_plain_dia(f) || is_plain_box(f)) return only_plain(f->left->left);
    switch (f->op) {
    case Op::DiaC: case Op::DiaNC: case Op::BoxC: case Op::BoxNC: return false;
    default: return only_plain(f->left) && only_plain(f->right);
    }
}

bool has_trace_modality(const Formula& f) {
    if (!f) return false;
    if (f->op == Op::DiaCo || f->op == Op::BoxCo) return true;
    return has_trace_modality(f->left) || has_trace_modality(f->right);
}

} // namespace

Fragment fragment_of(const Formula& f) {
    bool plain = only_plain(f);
    bool co = has_trace_modality(f);
    bool fix = has_fixpoint(f);
    if (plain && !co && !fix) return Fragment::HML;
    if (plain && !co) return Fragment::LMU;
    if (plain) return Fragment::TLMU;
    if (!co) return Fragment::CLMU;
    return Fragment::TFL;
}

std::string to_string(Fragment f) {
    switch (f) {
    case Fragment::HML: return "HML";
    case Fragment::LMU: return "LMU";
    case Fragment::TLMU: return "TLMU";
    case Fragment::CLMU: return "CLMU";
    case Fragment::TFL: return "TFL";
    }
    return "TFL";
}

std::optional<Fragment> fragment_from_string(const std::string& s) {
    for (auto f : {Fragment::HML, Fragment::LMU, Fragment::TLMU, Fragment::CLMU, Fragment::TFL})
        if (to_string(f) == s) return f;
    return std::nullopt;
}

bool fragment_within(Fragment inner, Fragment outer) {
    if (inner == outer || outer == Fragment::TFL) return true;
    switch (inner) {
    case Fragment::HML: return true;
    case Fragment::LMU: return outer == Fragment::TLMU || outer == Fragment::CLMU;
    default: return false;
    }
}

// ---------------------------------------------------------------- Lμ view

namespace lmu {

int compare(const Formula& a, const Formula& b) {
    if (a == b) return 0;
    if (!a) return -1;
    if (!b) return 1;
    if (a->op != b->op) return a->op < b->op ? -1 : 1;
    if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
    if (int c = compare(a->left, b->left)) return c;
    return compare(a->right, b->right);
}

std::string to_string(const Formula& f) {
    switch (f->op) {
    case Op::Tt: return "tt";
    case Op::Ff: return "ff";
    case Op::Var: return f->name;
    case Op::And: return "(" + to_string(f->left) + " & " + to_string(f->right) + ")";
    case Op::Or: return "(" + to_string(f->left) + " | " + to_string(f->right) + ")";
    case Op::Dia: return "<" + f->name + ">" + to_string(f->left);
    case Op::Box: return "[" + f->name + "]" + to_string(f->left);
    case Op::Mu: return "(mu " + f->name + ". " + to_string(f->left) + ")";
    case Op::Nu: return "(nu " + f->name + ". " + to_string(f->left) + ")";
    }
    return "?";
}

} // namespace lmu

namespace {

lmu::Formula lmake(lmu::Op op, std::string name = {}, lmu::Formula l = nullptr, lmu::Formula r = nullptr) {
    return std::make_shared<const lmu::Node>(lmu::Node{op, std::move(name), std::move(l), std::move(r)});
}

void mirror(const Formula& copy, const Formula& primary, LmuImage& image) {
    if (!copy) return;
    auto it = image.find(primary);
    if (it != image.end()) image.emplace(copy, it->second);
    mirror(copy->left, primary->left, image);
    mirror(copy->right, primary->right, image);
}

lmu::Formula convert(const Formula& f, LmuImage* image) {
    lmu::Formula res;
    bool plain_d = is_plain_dia(f), plain_b = is_plain_box(f);
    if (plain_d || plain_b) {
        bool causal_left = f->left->op == Op::DiaC || f->left->op == Op::BoxC;
        const Formula& primary = causal_left ? f->left : f->right;
        const Formula& copy = causal_left ? f->right : f->left;
        lmu::Formula body = convert(primary->left, image);
        res = lmake(plain_d ? lmu::Op::Dia : lmu::Op::Box, primary->name, body);
        if (image) {
            image->emplace(primary, res);
            image->emplace(copy, res);
            mirror(copy->left, primary->left, *image);
        }
    } else {
        switch (f->op) {
        case Op::Tt: res = lmake(lmu::Op::Tt); break;
        case Op::Ff: res = lmake(lmu::Op::Ff); break;
        case Op::Var: res = lmake(lmu::Op::Var, f->name); break;
        case Op::And: res = lmake(lmu::Op::And, {}, convert(f->left, image), convert(f->right, image)); break;
        case Op::Or: res = lmake(lmu::Op::Or, {}, convert(f->left, image), convert(f->right, image)); break;
        case Op::Mu:
        case Op::Nu:
            res = lmake(f->op == Op::Mu ? lmu::Op::Mu : lmu::Op::Nu, f->name, convert(f->left, image));
            // The games visit the bound variable even when the body never mentions it.
            if (image) image->emplace(var(f->name), lmake(lmu::Op::Var, f->name));
            break;
        default:
            throw NotLmuFragment("not a modal mu-calculus formula: " + to_string(f));
        }
    }
    if (image) image->emplace(f, res);
    return res;
}

} // namespace

lmu::Formula to_lmu(const Formula& f, LmuImage* image) { return convert(f, image); }

} // namespace truecon
