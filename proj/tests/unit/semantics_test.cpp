#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "gen.hpp"
#include "oracles.hpp"
#include "truecon/error.hpp"
#include "truecon/formula.hpp"
#include "truecon/semantics.hpp"

using namespace truecon;

namespace {

Formula parse(const std::string& s) { return parse_formula(s); }

ProcessSet random_subset(gen::Rng& rng, std::size_t n) {
    ProcessSet s(n);
    for (std::size_t i = 0; i < n; ++i)
        if (gen::coin(rng)) s.set(i);
    return s;
}

// b-cycle s0 -> s1 -> s2 -> s0 with an a-exit at s2.
Tsi b_cycle() {
    TsiBuilder b;
    b.add_state("s0", true);
    b.add_transition("s0", "b", "s1");
    b.add_transition("s1", "b", "s2");
    b.add_transition("s2", "b", "s0");
    b.add_transition("s2", "a", "x");
    return b.build();
}

std::set<StateId> states_of(const ProcessSpace& sp, const ProcessSet& d) {
    std::set<StateId> out;
    for (auto p : d.members()) out.insert(sp.state_of(p));
    return out;
}

} // namespace

TEST_CASE("constants") {
    ProcessSpace sp(fx::tsi("diamond.tsi"));
    CHECK(denote(tt(), sp).count() == sp.size());
    CHECK(denote(ff(), sp).empty());
    CHECK(denote(parse("mu Z. Z"), sp).empty());
    CHECK(denote(parse("nu Z. Z"), sp).count() == sp.size());
}

TEST_CASE("the square") {
    auto t = fx::tsi("diamond.tsi");
    CHECK(satisfies(t, parse("<a> <b> tt")));
    CHECK(satisfies(t, parse("<b> <a> tt")));
    CHECK(satisfies(t, parse("<a>c <b>nc tt")));
    CHECK_FALSE(satisfies(t, parse("<a>c <b>c tt")));
    CHECK(satisfies(t, parse("<co> (<a> tt & <b> tt)")));
    CHECK_FALSE(satisfies(t, parse("<a> <a> tt")));
}

TEST_CASE("no non-causal step at the start") {
    gen::Rng rng(1);
    auto t = fx::tsi("diamond.tsi");
    for (int i = 0; i < 50; ++i) {
        auto psi = gen::formula(rng, gen::pick(rng, 4));
        CHECK_FALSE(satisfies(t, dia_nc("a", psi)));
        CHECK_FALSE(satisfies(t, dia_nc("b", psi)));
    }
}

TEST_CASE("the two squares are told apart") {
    auto f = parse("<co>(<a> <c> tt & <b> <d> tt)");
    bool l = satisfies(fx::tsi("ce1_top_left.tsi"), f), r = satisfies(fx::tsi("ce1_top_right.tsi"), f);
    CHECK(l != r);
    CHECK(l);
}

TEST_CASE("the two choice nets agree on random formulas") {
    auto a = fx::tsi("ce2_a.net"), b = fx::tsi("ce2_b.net");
    gen::Rng rng(2);
    gen::FormulaShape shape;
    shape.labels = {"a", "b", "c"};
    shape.negation = true;
    for (int i = 0; i < 30; ++i) {
        auto f = gen::formula(rng, 1 + gen::pick(rng, 4), shape);
        INFO(to_string(f));
        CHECK(satisfies(a, f) == satisfies(b, f));
    }
}

TEST_CASE("open formulas need a valuation") {
    ProcessSpace sp(fx::tsi("diamond.tsi"));
    CHECK_THROWS_AS(denote(parse("<a> Z"), sp), OpenFormula);
    Valuation v{{"Z", ProcessSet(sp.size(), true)}};
    CHECK(denote(parse("<a> Z"), sp, v).test(sp.initial()));
}

TEST_CASE("approximants of a least fixpoint on a cycle") {
    auto t = b_cycle();
    ProcessSpace sp(t);
    auto f = parse("mu Z. (<a> tt | <b> Z)");
    auto tr = approximants(f, sp);
    CHECK(tr.least);
    REQUIRE(tr.chain.size() >= 4);
    CHECK(tr.chain[0].empty());
    auto s = [&](const char* n) { return *t.find_state(n); };
    CHECK(states_of(sp, tr.chain[1]) == std::set<StateId>{s("s2")});
    CHECK(states_of(sp, tr.chain[2]) == std::set<StateId>{s("s1"), s("s2")});
    CHECK(states_of(sp, tr.chain[3]) == std::set<StateId>{s("s0"), s("s1"), s("s2")});
    CHECK(tr.chain.back() == denote(f, sp));
}

TEST_CASE("approximants of a greatest fixpoint") {
    TsiBuilder b;
    b.add_state("u", true);
    b.add_transition("u", "a", "v");
    b.add_transition("v", "a", "u");
    b.add_transition("u", "b", "w");
    auto t = b.build();
    ProcessSpace sp(t);
    auto tr = approximants(parse("nu Z. <a>c Z"), sp);
    CHECK_FALSE(tr.least);
    CHECK(tr.chain[0].count() == sp.size());
    CHECK(states_of(sp, tr.chain.back()) == std::set<StateId>{*t.find_state("u"), *t.find_state("v")});
    CHECK(approximants(parse("mu Z. Z"), sp).chain.back().empty());
    CHECK_THROWS_AS(approximants(parse("<a> tt"), sp), FormulaError);
}

TEST_CASE("approximant chains are monotone and short") {
    gen::Rng rng(3);
    for (const auto& t : gen::models(4, 30)) {
        ProcessSpace sp(t);
        for (int i = 0; i < 5; ++i) {
            auto body = gen::formula(rng, 1 + gen::pick(rng, 3));
            auto f = gen::coin(rng) ? mu("Top", disj(body, dia_co(var("Top")))) : nu("Top", conj(body, box("a", var("Top"))));
            auto tr = approximants(f, sp);
            CHECK(tr.chain.size() <= sp.size() + 2);
            for (std::size_t k = 1; k < tr.chain.size(); ++k) {
                if (tr.least) CHECK(tr.chain[k - 1].subset_of(tr.chain[k]));
                else CHECK(tr.chain[k].subset_of(tr.chain[k - 1]));
            }
            CHECK(tr.chain.back() == denote(f, sp));
        }
    }
}

TEST_CASE("trace diamond is idempotent") {
    gen::Rng rng(5);
    for (const auto& t : gen::models(6, 45)) {
        ProcessSpace sp(t);
        for (int i = 0; i < 8; ++i) {
            auto f = gen::formula(rng, 1 + gen::pick(rng, 4));
            CHECK(denote(dia_co(dia_co(f)), sp) == denote(dia_co(f), sp));
            CHECK(denote(box_co(box_co(f)), sp) == denote(box_co(f), sp));
        }
    }
}

TEST_CASE("trace diamond is not extensive") {
    auto t = fx::tsi("interleaving.tsi");
    auto f = parse_formula_list(fx::text("non_extensive.tfl")).at(0);
    ProcessSpace sp(t);
    auto plain = denote(f, sp), traced = denote(dia_co(f), sp);
    CHECK(plain.test(sp.initial()));
    CHECK_FALSE(traced.test(sp.initial()));
    CHECK_FALSE(plain.subset_of(traced));
}

TEST_CASE("negation is complement") {
    gen::Rng rng(7);
    gen::FormulaShape shape;
    shape.negation = true;
    for (const auto& t : gen::models(8, 30)) {
        ProcessSpace sp(t);
        for (int i = 0; i < 8; ++i) {
            auto f = gen::formula(rng, 1 + gen::pick(rng, 4), shape);
            CHECK(denote(neg(f), sp) == denote(f, sp).complement());
        }
    }
}

TEST_CASE("positive normal form keeps the denotation") {
    gen::Rng rng(9);
    gen::FormulaShape shape;
    shape.negation = true;
    for (const auto& t : gen::models(10, 30)) {
        ProcessSpace sp(t);
        for (int i = 0; i < 8; ++i) {
            auto f = gen::formula(rng, 1 + gen::pick(rng, 5), shape);
            INFO(to_string(f));
            CHECK(denote(to_positive_normal_form(f), sp) == denote(f, sp));
        }
    }
}

TEST_CASE("monotone in the valuation") {
    gen::Rng rng(11);
    for (const auto& t : gen::models(12, 30)) {
        ProcessSpace sp(t);
        for (int i = 0; i < 8; ++i) {
            std::vector<std::string> bound{"V"};
            std::size_t fresh = 0;
            auto f = gen::detail::formula(rng, 1 + gen::pick(rng, 4), gen::FormulaShape{}, bound, fresh);
            auto small = random_subset(rng, sp.size());
            auto large = small;
            large |= random_subset(rng, sp.size());
            CHECK(denote(f, sp, {{"V", small}}).subset_of(denote(f, sp, {{"V", large}})));
        }
    }
}

TEST_CASE("plain fixpoint formulas collapse to state semantics") {
    gen::Rng rng(13);
    gen::FormulaShape shape;
    shape.causal = false;
    shape.trace = false;
    for (const auto& t : gen::models(14, 45)) {
        ProcessSpace sp(t);
        for (int i = 0; i < 8; ++i) {
            auto f = gen::formula(rng, 1 + gen::pick(rng, 5), shape);
            auto truth = oracle::lmu_eval(t, to_lmu(rename_apart(f)));
            auto d = denote(f, sp);
            INFO(to_string(f));
            for (std::size_t p = 0; p < sp.size(); ++p) {
                if (sp.process(p).support != sp.maximal_support(sp.state_of(p))) continue;
                CHECK(d.test(p) == truth[sp.state_of(p)]);
            }
        }
    }
}

TEST_CASE("process sets") {
    ProcessSet s(130);
    s.set(0);
    s.set(64);
    s.set(129);
    CHECK(s.count() == 3);
    CHECK(s.complement().count() == 127);
    CHECK(s.members() == std::vector<std::size_t>{0, 64, 129});
    s.reset(64);
    CHECK_FALSE(s.test(64));
    ProcessSet full(130, true);
    CHECK(s.subset_of(full));
    CHECK_FALSE(full.subset_of(s));
    CHECK(ProcessSet(0).empty());
}
