#include <doctest.h>

#include "fixtures.hpp"
#include "gen.hpp"
#include "oracles.hpp"
#include "truecon/bisim.hpp"
#include "truecon/error.hpp"
#include "truecon/semantics.hpp"

using namespace truecon;

namespace {

bool eq(const Verdict& v) { return v.outcome == Outcome::Equivalent; }

// Same transitions, no independence: the interleaving shadow of t.
Tsi interleaving_of(const Tsi& t) {
    std::vector<std::string> states;
    for (StateId s = 0; s < t.state_count(); ++s) states.push_back(t.state_name(s));
    std::vector<Transition> ts;
    std::vector<std::string> names;
    for (TransId x = 0; x < t.transition_count(); ++x) {
        ts.push_back(t.transition(x));
        names.push_back(t.transition_name(x));
    }
    return Tsi(states, t.initial(), ts, names, {});
}

Tsi chain(const std::vector<std::string>& labels) {
    TsiBuilder b;
    b.add_state("s0", true);
    for (std::size_t i = 0; i < labels.size(); ++i)
        b.add_transition("s" + std::to_string(i), labels[i], "s" + std::to_string(i + 1));
    return b.build();
}

Tsi sum(const std::vector<std::vector<std::string>>& branches) {
    TsiBuilder b;
    b.add_state("r", true);
    for (std::size_t k = 0; k < branches.size(); ++k) {
        std::string prev = "r";
        for (std::size_t i = 0; i < branches[k].size(); ++i) {
            auto next = "b" + std::to_string(k) + "_" + std::to_string(i);
            b.add_transition(prev, branches[k][i], next);
            prev = next;
        }
    }
    return b.build();
}

struct Pair {
    std::string name;
    Tsi left, right;
};

// Acyclic pairs of small size: fixtures, shadows and random event structures.
std::vector<Pair> battery(std::uint64_t seed, std::size_t randoms) {
    std::vector<Pair> ps;
    ps.push_back({"ce1-top", fx::tsi("ce1_top_left.tsi"), fx::tsi("ce1_top_right.tsi")});
    ps.push_back({"ce1-bottom", fx::tsi("ce1_bottom_left.tsi"), fx::tsi("ce1_bottom_right.tsi")});
    ps.push_back({"ce2", fx::tsi("ce2_a.net"), fx::tsi("ce2_b.net")});
    ps.push_back({"square/interleaving", fx::tsi("diamond.tsi"), fx::tsi("interleaving.tsi")});
    ps.push_back({"square/self", fx::tsi("diamond.tsi"), fx::tsi("diamond.tsi")});
    ps.push_back({"square/net", fx::tsi("diamond.tsi"), fx::tsi("par_ab.net")});
    ps.push_back({"ab/ac", chain({"a", "b"}), chain({"a", "c"})});
    gen::Rng rng(seed);
    for (std::size_t i = 0; i < randoms; ++i) {
        auto e = gen::event_structure(rng, 2 + gen::pick(rng, 3), {"a", "b"});
        auto t = es_to_tsi(e);
        switch (i % 3) {
        case 0: ps.push_back({"es/shadow", t, interleaving_of(t)}); break;
        case 1: ps.push_back({"es/es", t, es_to_tsi(gen::event_structure(rng, 2 + gen::pick(rng, 3), {"a", "b"}))}); break;
        default: ps.push_back({"es/self", t, es_to_tsi(e)}); break;
        }
    }
    return ps;
}

} // namespace

TEST_CASE("strong bisimulation") {
    CHECK(eq(strong_bisim(fx::tsi("diamond.tsi"), fx::tsi("interleaving.tsi"))));
    auto v = strong_bisim(chain({"a", "b"}), chain({"a", "c"}));
    CHECK_FALSE(eq(v));
    REQUIRE(v.formula);
    CHECK(satisfies(chain({"a", "b"}), v.formula));
    CHECK_FALSE(satisfies(chain({"a", "c"}), v.formula));
    CHECK(fragment_of(v.formula) == Fragment::HML);
    CHECK_FALSE(v.witness.empty());
}

TEST_CASE("strong bisimulation against signature refinement") {
    gen::Rng rng(1);
    int equal_pairs = 0;
    for (int i = 0; i < 300; ++i) {
        auto l = gen::lts(rng, 2 + gen::pick(rng, 9), {"a", "b"}, 0.4);
        auto r = gen::coin(rng) ? gen::lts(rng, 2 + gen::pick(rng, 9), {"a", "b"}, 0.4) : l;
        bool expect = oracle::bisimilar(l, r);
        auto v = strong_bisim(l, r);
        CHECK(eq(v) == expect);
        CHECK(eq(strong_bisim(r, l)) == expect);
        if (!expect) {
            REQUIRE(v.formula);
            CHECK(satisfies(l, v.formula) != satisfies(r, v.formula));
        }
        equal_pairs += expect;
    }
    CHECK(equal_pairs > 0);
}

TEST_CASE("history-preserving games on the fixtures") {
    CHECK(eq(hpb(fx::tsi("ce1_top_left.tsi"), fx::tsi("ce1_top_right.tsi"))));
    CHECK_FALSE(eq(hpb(fx::tsi("ce1_bottom_left.tsi"), fx::tsi("ce1_bottom_right.tsi"))));
    CHECK_FALSE(eq(thpb(fx::tsi("ce1_top_left.tsi"), fx::tsi("ce1_top_right.tsi"))));
    CHECK(eq(thpb(fx::tsi("ce2_a.net"), fx::tsi("ce2_b.net"))));
    auto h = hhpb(fx::tsi("ce2_a.net"), fx::tsi("ce2_b.net"));
    CHECK_FALSE(eq(h));
    CHECK_FALSE(h.witness.empty());
    CHECK_FALSE(eq(hpb(fx::tsi("diamond.tsi"), fx::tsi("interleaving.tsi"))));
    CHECK(eq(hhpb(fx::tsi("diamond.tsi"), fx::tsi("par_ab.net"))));
}

TEST_CASE("modes and their preconditions") {
    TsiBuilder b;
    b.add_state("u", true);
    b.add_transition("u", "a", "u");
    auto loop = b.build();
    CHECK_THROWS_AS(hpb(loop, loop), NotAcyclic);
    CHECK_THROWS_AS(hhpb(loop, loop), NotAcyclic);
    auto v = hpb(loop, loop, Mode::bounded(4));
    CHECK(v.outcome == Outcome::Unknown);
    CHECK(v.bound == 4u);
    CHECK(thpb(loop, chain({"b"}), Mode::bounded(3)).outcome == Outcome::NotEquivalent);
    auto ac = parse_tsi("state s init\nstate u\nstate v\nstate w\ntrans t1 s a u\ntrans t2 s a v\ntrans t3 u a w\n"
                        "trans t4 v a w\nindep t1 t2\nindep t1 t3\nindep t2 t4\nindep t3 t4\n");
    CHECK_THROWS_AS(hpb(ac, ac, Mode::local()), NotXi);
    CHECK_THROWS_AS(bisim(loop, loop, Relation::HHPB, Mode::bounded(2)), Error);
    CHECK(relation_from_string("thpb") == Relation::THPB);
    CHECK_FALSE(relation_from_string("xyz"));
}

TEST_CASE("symmetry, self-equivalence and the hierarchy") {
    int separations[3] = {0, 0, 0};
    for (const auto& p : battery(3, 30)) {
        INFO(p.name);
        bool v[4];
        const Relation rels[4] = {Relation::HHPB, Relation::THPB, Relation::HPB, Relation::SB};
        for (int k = 0; k < 4; ++k) {
            v[k] = eq(bisim(p.left, p.right, rels[k]));
            CHECK(eq(bisim(p.right, p.left, rels[k])) == v[k]);
            CHECK(eq(bisim(p.left, p.left, rels[k])));
        }
        CHECK(v[3] == oracle::bisimilar(p.left, p.right));
        for (int k = 0; k < 3; ++k) {
            CHECK((!v[k] || v[k + 1]));
            if (!v[k] && v[k + 1]) ++separations[k];
        }
    }
    CHECK(separations[0] > 0);  // hhpb / thpb
    CHECK(separations[1] > 0);  // thpb / hpb
    CHECK(separations[2] > 0);  // hpb / sb
}

TEST_CASE("trace game equals strong bisimulation without independence") {
    gen::Rng rng(5);
    for (int i = 0; i < 60; ++i) {
        auto l = gen::lts(rng, 2 + gen::pick(rng, 5), {"a", "b"}, 0.6, true);
        auto r = gen::coin(rng) ? gen::lts(rng, 2 + gen::pick(rng, 5), {"a", "b"}, 0.6, true) : l;
        CHECK(eq(thpb(l, r)) == eq(strong_bisim(l, r)));
        CHECK(eq(hpb(l, r)) == eq(strong_bisim(l, r)));
    }
}

TEST_CASE("local game on Xi systems matches the exact game") {
    gen::Rng rng(7);
    std::size_t compared = 0;
    for (int i = 0; i < 400 && compared < 60; ++i) {
        auto l = es_to_tsi(gen::event_structure(rng, 2 + gen::pick(rng, 3), {"a", "b"}));
        auto r = gen::coin(rng) ? es_to_tsi(gen::event_structure(rng, 2 + gen::pick(rng, 3), {"a", "b"})) : interleaving_of(l);
        if (!is_xi_system(l).xi || !is_xi_system(r).xi) continue;
        CHECK(eq(hpb(l, r, Mode::local())) == eq(hpb(l, r)));
        ++compared;
    }
    CHECK(compared >= 50);
}

TEST_CASE("hp-isomorphic sets against permutations") {
    gen::Rng rng(9);
    auto models = gen::models(10, 30);
    for (int i = 0; i < 400; ++i) {
        const auto& l = models[gen::pick(rng, models.size())];
        const auto& r = models[gen::pick(rng, models.size())];
        auto anchor_and_set = [&](const Tsi& t, TransId& anchor, std::vector<TransId>& set) {
            if (gen::coin(rng, 0.3) || t.transition_count() == 0) {
                anchor = kEpsilon;
                for (auto x : t.out(t.initial())) set.push_back(x);
            } else {
                anchor = static_cast<TransId>(gen::pick(rng, t.transition_count()));
                for (auto x : t.out(t.target(anchor))) set.push_back(x);
            }
            while (set.size() > 4) set.erase(set.begin() + static_cast<long>(gen::pick(rng, set.size())));
        };
        TransId al, ar;
        std::vector<TransId> m, n;
        anchor_and_set(l, al, m);
        anchor_and_set(r, ar, n);
        auto got = hp_isomorphic_sets(l, m, al, r, n, ar);
        CHECK(got.has_value() == oracle::hp_iso_sets(l, m, al, r, n, ar));
        if (got) CHECK(got->size() == m.size());
    }
}

TEST_CASE("hp-isomorphic sets by pattern") {
    auto t = fx::tsi("diamond.tsi");
    auto a = *t.find_transition("t1"), b = *t.find_transition("t2");
    auto ab = *t.find_transition("t3");
    CHECK(hp_isomorphic_sets(t, {a, b}, kEpsilon, t, {b, a}, kEpsilon));
    CHECK_FALSE(hp_isomorphic_sets(t, {a}, kEpsilon, t, {b}, kEpsilon));
    // b after a is non-causal; from the start it is causal.
    CHECK_FALSE(hp_isomorphic_sets(t, {ab}, a, t, {b}, kEpsilon));
}

TEST_CASE("distinguishing formulas") {
    auto tl = fx::tsi("ce1_top_left.tsi"), tr = fx::tsi("ce1_top_right.tsi");
    auto f = distinguishing_formula(tl, tr, Fragment::TLMU, 3);
    REQUIRE(f);
    CHECK(satisfies(tl, *f));
    CHECK_FALSE(satisfies(tr, *f));
    CHECK(fragment_within(fragment_of(*f), Fragment::TLMU));
    CHECK(modal_depth(*f) <= 3);
    CHECK_FALSE(distinguishing_formula(tl, tr, Fragment::HML, 3));
    CHECK_FALSE(distinguishing_formula(tl, tl, Fragment::TFL, 3));
    CHECK_FALSE(distinguishing_formula(fx::tsi("ce1_bottom_left.tsi"), fx::tsi("ce1_bottom_right.tsi"), Fragment::TLMU, 4));
    auto c = distinguishing_formula(chain({"a", "b"}), chain({"a", "c"}), Fragment::HML, 2);
    REQUIRE(c);
    CHECK(satisfies(chain({"a", "b"}), *c));
    CHECK(distinguishing_formula(sum({{"a"}, {"b"}}), sum({{"a"}}), Fragment::HML, 1));
}

TEST_CASE("trace game agrees with formula search on the battery") {
    for (const auto& p : battery(11, 15)) {
        INFO(p.name);
        auto f = distinguishing_formula(p.left, p.right, Fragment::TFL, 3);
        if (f) CHECK_FALSE(eq(thpb(p.left, p.right)));
    }
}
