#include "truecon/semantics.hpp"

#include <bit>
#include <optional>

#include "truecon/error.hpp"

namespace truecon {

ProcessSet::ProcessSet(std::size_t n, bool full) : n_(n), words_((n + 63) / 64, full ? ~std::uint64_t{0} : 0) {
    trim();
}

void ProcessSet::trim() {
    if (n_ % 64 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
}

std::size_t ProcessSet::count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

ProcessSet ProcessSet::complement() const {
    ProcessSet r = *this;
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
}

bool ProcessSet::subset_of(const ProcessSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~o.words_[i]) return false;
    return true;
}

std::vector<std::size_t> ProcessSet::members() const {
    std::vector<std::size_t> res;
    for (std::size_t i = 0; i < n_; ++i)
        if (test(i)) res.push_back(i);
    return res;
}

ProcessSet& ProcessSet::operator|=(const ProcessSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}

ProcessSet& ProcessSet::operator&=(const ProcessSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}

MoveTable::MoveTable(const ProcessSpace& space) : modal_(space.size()), trace_(space.size()) {
    const Tsi& t = space.tsi();
    for (std::size_t p = 0; p < space.size(); ++p) {
        const auto& pr = space.process(p);
        for (TransId r : space.support(pr.support).members)
            modal_[p].push_back({r, space.after(r), !t.independent(pr.last, r)});
        for (auto m : space.traces_of(pr.support)) trace_[p].push_back(space.index(m, pr.last));
    }
}

namespace {

class Evaluator {
public:
    Evaluator(const ProcessSpace& space, const MoveTable& moves, const EvalOptions& opts)
        : space_(space), moves_(moves), opts_(opts), n_(space.size()) {}

    ProcessSet eval(const Formula& f, Valuation& env) {
        ProcessSet s = raw(f, env);
        if (opts_.frontier) {
            s &= opts_.frontier->complement();
            if (opts_.frontier_value) s |= *opts_.frontier;
        }
        return s;
    }

    // Knaster–Tarski iteration; `trace` receives every approximant.
    ProcessSet fixpoint(const Formula& f, Valuation& env, std::vector<ProcessSet>* trace) {
        bool least = f->op == Op::Mu;
        ProcessSet x(n_, !least);
        auto saved = env.find(f->name) == env.end() ? std::optional<ProcessSet>{}
                                                     : std::optional<ProcessSet>{env[f->name]};
        std::size_t steps = 0;
        if (trace) trace->push_back(x);
        for (;;) {
            env[f->name] = x;
            ProcessSet y = eval(f->left, env);
            ++steps;
            if (y == x) break;
            x = std::move(y);
            if (trace) trace->push_back(x);
        }
        if (saved) env[f->name] = *saved; else env.erase(f->name);
        if (opts_.approximant_lengths) (*opts_.approximant_lengths)[f->name] = steps;
        return x;
    }

private:
    ProcessSet raw(const Formula& f, Valuation& env) {
        const Tsi& t = space_.tsi();
        switch (f->op) {
        case Op::Tt: return ProcessSet(n_, true);
        case Op::Ff: return ProcessSet(n_, false);
        case Op::Var: {
            auto it = env.find(f->name);
            if (it == env.end()) throw OpenFormula(f->name);
            return it->second;
        }
        case Op::Neg: return eval(f->left, env).complement();
        case Op::And: {
            auto s = eval(f->left, env);
            s &= eval(f->right, env);
            return s;
        }
        case Op::Or: {
            auto s = eval(f->left, env);
            s |= eval(f->right, env);
            return s;
        }
        case Op::DiaC:
        case Op::DiaNC:
        case Op::BoxC:
        case Op::BoxNC: {
            bool want_causal = f->op == Op::DiaC || f->op == Op::BoxC;
            bool exists = f->op == Op::DiaC || f->op == Op::DiaNC;
            auto sub = eval(f->left, env);
            ProcessSet res(n_, false);
            for (std::size_t p = 0; p < n_; ++p) {
                bool hold = !exists;
                for (const auto& m : moves_.modal(p)) {
                    if (m.causal != want_causal || t.label(m.via) != f->name) continue;
                    if (exists && sub.test(m.target)) { hold = true; break; }
                    if (!exists && !sub.test(m.target)) { hold = false; break; }
                }
                if (hold) res.set(p);
            }
            return res;
        }
        case Op::DiaCo:
        case Op::BoxCo: {
            bool exists = f->op == Op::DiaCo;
            auto sub = eval(f->left, env);
            ProcessSet res(n_, false);
            for (std::size_t p = 0; p < n_; ++p) {
                bool hold = !exists;
                for (auto q : moves_.trace(p)) {
                    if (exists && sub.test(q)) { hold = true; break; }
                    if (!exists && !sub.test(q)) { hold = false; break; }
                }
                if (hold) res.set(p);
            }
            return res;
        }
        case Op::Mu:
        case Op::Nu:
            return fixpoint(f, env, nullptr);
        }
        return ProcessSet(n_, false);
    }

    const ProcessSpace& space_;
    const MoveTable& moves_;
    const EvalOptions& opts_;
    std::size_t n_;
};

} // namespace

ProcessSet denote(const Formula& f, const ProcessSpace& space, const MoveTable& moves, const Valuation& v,
                  const EvalOptions& opts) {
    for (const auto& [name, set] : v)
        if (set.size() != space.size()) throw Error("valuation for " + name + " does not match the process space");
    Valuation env = v;
    Evaluator e(space, moves, opts);
    return e.eval(f, env);
}

ProcessSet denote(const Formula& f, const ProcessSpace& space, const Valuation& v, const EvalOptions& opts) {
    MoveTable moves(space);
    return denote(f, space, moves, v, opts);
}

bool satisfies(const ProcessSpace& space, std::size_t process, const Formula& f) {
    if (auto fv = free_variables(f); !fv.empty()) throw OpenFormula(*fv.begin());
    return denote(f, space).test(process);
}

bool satisfies(const Tsi& t, const Formula& f) {
    ProcessSpace space(t);
    return satisfies(space, space.initial(), f);
}

ApproximantTrace approximants(const Formula& f, const ProcessSpace& space) {
    if (f->op != Op::Mu && f->op != Op::Nu) throw FormulaError("approximants need a fixpoint at the root");
    MoveTable moves(space);
    EvalOptions opts;
    Evaluator e(space, moves, opts);
    Valuation env;
    ApproximantTrace tr;
    tr.variable = f->name;
    tr.least = f->op == Op::Mu;
    e.fixpoint(f, env, &tr.chain);
    return tr;
}

} // namespace truecon
