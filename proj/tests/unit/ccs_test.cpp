#include <doctest.h>

#include <map>
#include <set>

#include "fixtures.hpp"
#include "gen.hpp"
#include "oracles.hpp"
#include "truecon/ccs.hpp"
#include "truecon/error.hpp"
#include "truecon/folding.hpp"
#include "truecon/formats.hpp"

using namespace truecon;

namespace {

// Random program text: up to three definitions, each name guarded by a prefix.
std::string random_program(gen::Rng& rng) {
    const std::vector<std::string> labels = {"a", "b", "c"};
    std::size_t defs = 1 + gen::pick(rng, 3);
    std::function<std::string(std::size_t)> term = [&](std::size_t depth) -> std::string {
        auto prefix = gen::one_of(rng, labels) + ".";
        if (depth == 0) return prefix + (gen::coin(rng) ? "0" : "X" + std::to_string(gen::pick(rng, defs)));
        switch (gen::pick(rng, 3)) {
        case 0: return prefix + term(depth - 1);
        case 1: return "(" + term(depth - 1) + " + " + term(depth - 1) + ")";
        default: return prefix + "X" + std::to_string(gen::pick(rng, defs));
        }
    };
    std::string text;
    for (std::size_t d = 0; d < defs; ++d) text += "X" + std::to_string(d) + " = " + term(2) + "\n";
    std::size_t comps = 1 + gen::pick(rng, 3);
    text += "root = ";
    for (std::size_t k = 0; k < comps; ++k) {
        if (k) text += " | ";
        text += gen::coin(rng) ? "X" + std::to_string(gen::pick(rng, defs)) : term(1);
    }
    return text + "\n";
}

// Configurations reachable within `depth` events.
std::vector<EventConfig> configurations(const EsGenerator& g, std::size_t depth) {
    std::vector<EventConfig> all{{}};
    std::set<EventConfig> seen{{}};
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (all[i].size() >= depth) continue;
        for (const auto& s : g.successors(all[i])) {
            auto next = add_event(all[i], s.event);
            if (seen.insert(next).second) all.push_back(next);
        }
    }
    return all;
}

std::multiset<std::pair<std::string, std::string>> moves_up_to(const CcsGenerator& g, const CcsOracle& q,
                                                               const EventConfig& c) {
    std::multiset<std::pair<std::string, std::string>> out;
    for (const auto& s : g.successors(c)) out.emplace(s.label, q.canonical(add_event(c, s.event)));
    return out;
}

} // namespace

TEST_CASE("parsing") {
    auto p = parse_ccs(fx::text("par_ab.ccs"));
    CHECK(p.components().size() == 2);
    CHECK(p.definitions.empty());
    auto loop = parse_ccs(fx::text("loop.ccs"));
    CHECK(loop.definitions.count("X") == 1);
    CHECK(to_string(loop.root) == "X");
    auto again = parse_ccs(write_ccs(loop));
    CHECK(write_ccs(again) == write_ccs(loop));
    CHECK(parse_ccs("root = 0\n").root->kind == CcsTerm::Kind::Nil);
}

TEST_CASE("fragment violations") {
    try {
        parse_ccs(fx::text("unguarded.ccs"));
        FAIL("accepted");
    } catch (const FragmentViolation& e) {
        CHECK(std::string(e.what()).find("unguarded") != std::string::npos);
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_ccs("X = a.(X | b.0)\nroot = X\n"), FragmentViolation);
    CHECK_THROWS_AS(parse_ccs("root = a.(b.0 | c.0)\n"), FragmentViolation);
    CHECK_THROWS_AS(parse_ccs("root = Y\n"), ParseError);
    CHECK_THROWS_AS(parse_ccs("X = a.X\n"), ParseError);
    CHECK_THROWS_AS(parse_ccs("root = a.\n"), ParseError);
    CHECK_THROWS_AS(parse_ccs("X = Y + a.0\nY = X\nroot = X\n"), FragmentViolation);
}

TEST_CASE("canonical terms") {
    auto a = parse_ccs("root = b.0 + (a.0 + c.0)\n").root;
    auto b = parse_ccs("root = (c.0 + a.0) + b.0\n").root;
    CHECK(canonical_string(a) == canonical_string(b));
    CHECK(canonical_string(canonical(a)) == canonical_string(a));
    CHECK(canonical_string(parse_ccs("root = a.0\n").root) != canonical_string(parse_ccs("root = b.0\n").root));
}

TEST_CASE("relabelling removes clashes") {
    auto r = relabel_theta(parse_ccs(fx::text("clash.ccs")));
    auto moves = ccs_moves(r.program, r.program.root);
    REQUIRE(moves.size() == 2);
    CHECK(moves[0].label != moves[1].label);
    CHECK(r.inverse.at(moves[0].label) == "a");
    CHECK(r.inverse.at(moves[1].label) == "a");

    auto par = relabel_theta(parse_ccs("root = a.0 | a.0\n"));
    auto comps = par.program.components();
    REQUIRE(comps.size() == 2);
    CHECK(ccs_moves(par.program, comps[0])[0].label != ccs_moves(par.program, comps[1])[0].label);

    auto clean = relabel_theta(parse_ccs(fx::text("par_ab.ccs")));
    for (const auto& [to, from] : clean.inverse) CHECK(to == from);
    CHECK(write_ccs(clean.program) == write_ccs(parse_ccs(fx::text("par_ab.ccs"))));
}

TEST_CASE("shared definitions are copied per component") {
    auto r = relabel_theta(parse_ccs(fx::text("shared_def.ccs")));
    CHECK(r.program.definitions.size() >= 2);
    auto net = ccs_to_net(r.program);
    CHECK(validate_net(net).ok());
    auto t = net_to_tsi(net);
    CHECK(validate_tsi(t).ok());
    CHECK(detect_auto_concurrency(t).empty());
}

TEST_CASE("compiled nets") {
    auto par = net_to_tsi(ccs_to_net(relabel_theta(parse_ccs(fx::text("par_ab.ccs"))).program));
    CHECK(oracle::isomorphic(par, fx::tsi("diamond.tsi")));

    auto loop = ccs_to_net(relabel_theta(parse_ccs(fx::text("loop.ccs"))).program);
    CHECK(loop.place_count() == 1);
    CHECK(loop.action_count() == 1);
    CHECK(loop.preset(0) == loop.postset(0));

    auto choice = relabel_theta(parse_ccs(fx::text("choice_c.ccs"))).program;
    auto es = materialize(CcsGenerator(choice));
    CHECK(es.event_count() == 4);
    CHECK(validate_net(ccs_to_net(choice)).ok());
}

TEST_CASE("random programs compile to safe nets that match the fold") {
    gen::Rng rng(1);
    std::size_t checked = 0;
    for (int i = 0; i < 150; ++i) {
        auto text = random_program(rng);
        INFO(text);
        auto p = parse_ccs(text);
        auto r = relabel_theta(p);
        // θ is injective: every new label maps back to one original.
        std::set<std::string> originals;
        for (const auto& [to, from] : r.inverse) originals.insert(from);
        CHECK(originals.size() <= r.inverse.size());

        auto net = ccs_to_net(r.program);
        CHECK(validate_net(net).ok());
        auto t = net_to_tsi(net);
        CHECK(validate_tsi(t).ok());
        CHECK(detect_auto_concurrency(t).empty());

        CcsGenerator g(r.program);
        CcsOracle q(g);
        auto folded = fold(g, q);
        CHECK(validate_tsi(folded).ok());
        CHECK(oracle::bisimilar(folded, t));
        ++checked;
    }
    CHECK(checked == 150);
}

TEST_CASE("relabelled programs are deterministic") {
    gen::Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        auto p = parse_ccs(random_program(rng));
        auto r = relabel_theta(p);
        CcsGenerator g(r.program);
        for (const auto& c : configurations(g, 4)) {
            std::set<std::string> labels;
            auto succ = g.successors(c);
            for (const auto& s : succ) labels.insert(s.label);
            CHECK(labels.size() == succ.size());
        }
    }
}

TEST_CASE("the residual oracle is a congruence") {
    gen::Rng rng(3);
    for (int i = 0; i < 60; ++i) {
        auto p = parse_ccs(random_program(rng));
        CcsGenerator g(relabel_theta(p).program);
        CcsOracle q(g);
        std::map<std::string, EventConfig> first;
        for (const auto& c : configurations(g, 5)) {
            auto key = q.canonical(c);
            CHECK(q.canonical(c) == key);
            auto [it, fresh] = first.emplace(key, c);
            if (!fresh) CHECK(moves_up_to(g, q, c) == moves_up_to(g, q, it->second));
        }
    }
}

TEST_CASE("generator concurrency follows components") {
    CcsGenerator g(relabel_theta(parse_ccs(fx::text("par_ab.ccs"))).program);
    auto succ = g.successors({});
    REQUIRE(succ.size() == 2);
    CHECK(g.concurrent(succ[0].event, succ[1].event));
    CcsGenerator c(relabel_theta(parse_ccs(fx::text("choice_c.ccs"))).program);
    auto cs = c.successors({});
    REQUIRE(cs.size() == 2);
    CHECK_FALSE(c.concurrent(cs[0].event, cs[1].event));
    CHECK(c.residuals({}).size() == 1);
}
