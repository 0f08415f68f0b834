#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "gen.hpp"
#include "oracles.hpp"
#include "truecon/error.hpp"
#include "truecon/formats.hpp"
#include "truecon/net.hpp"
#include "truecon/order.hpp"

using namespace truecon;

namespace {

TransId named(const Tsi& t, const std::string& src, const std::string& label) {
    auto s = *t.find_state(src);
    for (auto x : t.out(s))
        if (t.label(x) == label) return x;
    FAIL("no " << label << " from " << src);
    return 0;
}

std::set<std::pair<TransId, TransId>> as_set(const std::vector<std::pair<TransId, TransId>>& v) {
    return {v.begin(), v.end()};
}

} // namespace

TEST_CASE("dualities on the square") {
    auto t = fx::tsi("diamond.tsi");
    auto a = named(t, "s0", "a"), b = named(t, "s0", "b");
    auto ab = named(t, "s1", "b"), ba = named(t, "s2", "a");
    CHECK(immediately_concurrent(t, a, b));
    CHECK_FALSE(in_conflict(t, a, b));
    CHECK(in_conflict(t, a, a));
    CHECK(linearly_concurrent(t, a, ab));
    CHECK_FALSE(causally_dependent(t, a, ab));
    CHECK(causally_dependent(t, kEpsilon, a));
    CHECK(causally_dependent(t, kEpsilon, b));
    CHECK_FALSE(causally_dependent(t, kEpsilon, ab));
    CHECK(linearly_concurrent(t, b, ba));
}

TEST_CASE("dualities on the interleaving") {
    auto t = fx::tsi("interleaving.tsi");
    auto a = named(t, "s0", "a"), b = named(t, "s0", "b");
    CHECK(in_conflict(t, a, b));
    CHECK_FALSE(immediately_concurrent(t, a, b));
    CHECK(causally_dependent(t, a, named(t, "s1", "b")));
}

TEST_CASE("dualities partition same-source and consecutive pairs") {
    for (const auto& t : gen::models(11, 60)) {
        auto d = duality_relations(t);
        auto co = as_set(d.co_immediate), cf = as_set(d.conflict), lin = as_set(d.co_linear), cau = as_set(d.causal);
        for (TransId x = 0; x < t.transition_count(); ++x)
            for (TransId y = 0; y < t.transition_count(); ++y) {
                bool same_source = t.source(x) == t.source(y);
                bool consecutive = t.target(x) == t.source(y);
                std::pair<TransId, TransId> p{x, y};
                if (same_source) {
                    CHECK(co.count(p) + cf.count(p) == 1);
                    CHECK(co.count(p) == (oracle::indep(t, x, y) ? 1u : 0u));
                    CHECK(immediately_concurrent(t, x, y) == (co.count(p) == 1));
                    CHECK(in_conflict(t, x, y) == (cf.count(p) == 1));
                } else {
                    CHECK(co.count(p) + cf.count(p) == 0);
                }
                if (consecutive) {
                    CHECK(lin.count(p) + cau.count(p) == 1);
                    CHECK(lin.count(p) == (oracle::indep(t, x, y) ? 1u : 0u));
                    CHECK(causally_dependent(t, x, y) == (cau.count(p) == 1));
                } else {
                    CHECK(lin.count(p) + cau.count(p) == 0);
                }
            }
    }
}

TEST_CASE("maximal sets and complete traces") {
    for (const auto& t : gen::models(23, 60)) {
        for (StateId s = 0; s < t.state_count(); ++s) {
            auto r = maximal_set(t, s);
            std::vector<TransId> all(t.out(s).begin(), t.out(s).end());
            std::sort(all.begin(), all.end());
            CHECK(r.members == all);
            CHECK(r.owner == s);
            auto traces = complete_traces(t, r);
            std::set<std::vector<TransId>> got;
            for (const auto& tr : traces) {
                CHECK(conflict_free(t, tr.members));
                CHECK(tr.kind == SupportKind::ConflictFree);
                CHECK(tr.owner == s);
                got.insert(tr.members);
            }
            CHECK(got == oracle::complete_traces(t, all));
            CHECK(std::is_sorted(traces.begin(), traces.end(),
                                 [](const SupportSet& x, const SupportSet& y) { return x.members < y.members; }));
        }
    }
}

TEST_CASE("complete traces of the square") {
    auto t = fx::tsi("diamond.tsi");
    auto traces = complete_traces(t, maximal_set(t, t.initial()));
    REQUIRE(traces.size() == 1);
    CHECK(traces[0].members.size() == 2);
    auto i = fx::tsi("interleaving.tsi");
    CHECK(complete_traces(i, maximal_set(i, i.initial())).size() == 2);
}

TEST_CASE("process space matches the enumeration") {
    for (const auto& t : gen::models(37, 45)) {
        ProcessSpace space(t);
        CHECK(space.size() == oracle::process_count(t));
        const auto& p0 = space.process(space.initial());
        CHECK(p0.last == kEpsilon);
        CHECK(space.state_of(space.initial()) == t.initial());
        for (std::size_t p = 0; p < space.size(); ++p) {
            const auto& pr = space.process(p);
            CHECK(space.index(pr.support, pr.last) == p);
            if (pr.last != kEpsilon) CHECK(t.target(pr.last) == space.state_of(p));
        }
        for (TransId x = 0; x < t.transition_count(); ++x) CHECK(space.find(space.maximal_support(t.target(x)), x));
    }
}

TEST_CASE("process space cap") {
    gen::Rng rng(3);
    gen::NetShape shape;
    shape.components = 4;
    shape.places = 4;
    shape.local_actions = 4;
    auto t = net_to_tsi(gen::component_net(rng, shape));
    CHECK_THROWS_AS(ProcessSpace(t, 3), StateExplosion);
}

TEST_CASE("symmetric confusion") {
    auto t = fx::tsi("confusion_sym.net");
    auto tuples = classify_confusion(t);
    REQUIRE(tuples.size() == 1);
    CHECK(tuples[0].variant == ConfusionVariant::Symmetric);
    CHECK(tuples[0].deterministic);
    CHECK(t.label(tuples[0].t1) == "a");
    CHECK(t.label(tuples[0].t2) == "c");
    CHECK(t.label(tuples[0].t3) == "b");
}

TEST_CASE("asymmetric confusion") {
    auto t = fx::tsi("confusion_asym.net");
    auto tuples = classify_confusion(t);
    REQUIRE(tuples.size() == 1);
    CHECK(tuples[0].variant == ConfusionVariant::Asymmetric);
    CHECK(t.label(tuples[0].t1) == "a");
    CHECK(t.label(tuples[0].t2) == "b");
}

TEST_CASE("no confusion in the square or the interleaving") {
    CHECK(classify_confusion(fx::tsi("diamond.tsi")).empty());
    CHECK(classify_confusion(fx::tsi("interleaving.tsi")).empty());
}

TEST_CASE("confusion tuples are well formed") {
    for (const auto& t : gen::models(41, 60))
        for (const auto& c : classify_confusion(t)) {
            CHECK(t.source(c.t1) == t.source(c.t2));
            if (c.variant == ConfusionVariant::Symmetric) {
                CHECK(c.t1 < c.t2);
                CHECK(t.source(c.t3) == t.source(c.t1));
            }
        }
}

TEST_CASE("free choice") {
    CHECK(is_free_choice(fx::tsi("diamond.tsi")).free_choice);
    CHECK(is_free_choice(fx::tsi("interleaving.tsi")).free_choice);
    auto sym = is_free_choice(fx::tsi("confusion_sym.net"));
    CHECK_FALSE(sym.free_choice);
    REQUIRE(sym.witness.has_value());

    CHECK(is_free_choice_net(parse_net(fx::text("free_choice.net"))).free_choice);
    auto net = is_free_choice_net(parse_net(fx::text("confusion_sym.net")));
    CHECK_FALSE(net.free_choice);
    CHECK(net.witness.has_value());
    CHECK(is_free_choice_net(parse_net(fx::text("par_ab.net"))).free_choice);
}

TEST_CASE("free-choice witnesses are genuine") {
    for (const auto& t : gen::models(43, 60)) {
        auto fc = is_free_choice(t);
        if (fc.free_choice) continue;
        REQUIRE(fc.witness.has_value());
        auto [a, b, c] = *fc.witness;
        CHECK(in_conflict(t, a, b));
        CHECK(a != b);
        CHECK((oracle::indep(t, a, c) || oracle::indep(t, b, c)));
    }
}

TEST_CASE("Xi systems") {
    CHECK(is_xi_system(fx::tsi("diamond.tsi")).xi);
    CHECK(is_xi_system(fx::tsi("par_ab.net")).xi);
    auto r = is_xi_system(parse_tsi("state s init\nstate u\nstate v\nstate w\ntrans t1 s a u\ntrans t2 s a v\n"
                                    "trans t3 u a w\ntrans t4 v a w\nindep t1 t2\nindep t1 t3\nindep t2 t4\n"
                                    "indep t3 t4\n"));
    CHECK_FALSE(r.xi);
    CHECK_FALSE(r.reason.empty());
}
