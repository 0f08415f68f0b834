#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "gen.hpp"
#include "oracles.hpp"
#include "truecon/bisim.hpp"
#include "truecon/ccs.hpp"
#include "truecon/error.hpp"
#include "truecon/folding.hpp"
#include "truecon/semantics.hpp"

using namespace truecon;

namespace {

CcsGenerator program(const std::string& fixture) { return CcsGenerator(relabel_theta(parse_ccs(fx::text(fixture))).program); }

std::size_t labelled(const std::set<std::string>& events, const CcsGenerator& g, const std::string& label) {
    // Event keys do not carry labels; replay them from the empty configuration.
    std::size_t n = 0;
    for (const auto& e : events) {
        EventConfig c;
        std::vector<std::string> path;
        // Keys are "k:i.j...": the prefix "k:i" is the first event of the chain.
        auto colon = e.find(':');
        std::string prefix = e.substr(0, colon + 1);
        std::string rest = e.substr(colon + 1);
        std::size_t pos = 0;
        std::string key = prefix;
        for (;;) {
            auto dot = rest.find('.', pos);
            key += rest.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
            path.push_back(key);
            if (dot == std::string::npos) break;
            key += ".";
            pos = dot + 1;
        }
        std::string last;
        for (const auto& k : path) {
            for (const auto& s : g.successors(c))
                if (s.event == k) last = s.label;
            c = add_event(c, k);
        }
        n += last == label;
    }
    return n;
}

} // namespace

TEST_CASE("the loop folds to one state") {
    auto g = program("loop.ccs");
    CcsOracle q(g);
    auto t = fold(g, q);
    CHECK(t.state_count() == 1);
    REQUIRE(t.transition_count() == 1);
    CHECK(t.source(0) == t.target(0));
    CHECK(t.label(0) == "a");
    CHECK(t.indep_pairs().empty());
    CHECK(validate_tsi(t).ok());

    auto rs = representative_set(g, q);
    CHECK(rs.classes.size() == 1);
    CHECK(rs.er.empty());
    auto full = complete_representative_set(rs, g);
    CHECK(full.ef.size() == 1);
    CHECK(labelled(full.ef, g, "a") == 1);
}

TEST_CASE("two loops") {
    auto g = program("two_loops.ccs");
    CcsOracle q(g);
    auto rs = complete_representative_set(representative_set(g, q), g);
    CHECK(rs.classes.size() == 1);
    CHECK(labelled(rs.ef, g, "a") == 1);
    CHECK(labelled(rs.ef, g, "b") == 1);
    auto t = fold(g, q);
    CHECK(t.state_count() == 1);
    CHECK(t.transition_count() == 2);
    CHECK(t.indep_pairs().size() == 1);
    CHECK(validate_tsi(t).ok());
}

TEST_CASE("the parallel program folds to the square") {
    auto g = program("par_ab.ccs");
    CcsOracle q(g);
    auto t = fold(g, q);
    CHECK(t.state_count() == 4);
    CHECK(representative_set(g, q).classes.size() == 4);
    CHECK(strong_bisim(t, fx::tsi("diamond.tsi")).outcome == Outcome::Equivalent);
    CHECK(oracle::isomorphic(t, fx::tsi("diamond.tsi")));
    CHECK(satisfies(t, parse_formula("<co>(<a> tt & <b> tt)")));
}

TEST_CASE("finite event structures fold to their translation") {
    gen::Rng rng(1);
    IdentityOracle id;
    for (int i = 0; i < 60; ++i) {
        auto e = gen::event_structure(rng, 1 + gen::pick(rng, 5), {"a", "b", "c"});
        ExplicitGenerator g(e);
        auto folded = fold(g, id);
        auto direct = es_to_tsi(e);
        CHECK(oracle::isomorphic(folded, direct));
        CHECK(validate_tsi(folded).ok());
        auto rs = representative_set(g, id);
        CHECK(rs.er.size() == e.event_count());
        CHECK(complete_representative_set(rs, g).ef == rs.er);
        // Same structure, same search order.
        CHECK(representative_set(g, id).classes == rs.classes);
    }
}

TEST_CASE("materialize recovers the structure") {
    gen::Rng rng(2);
    for (int i = 0; i < 60; ++i) {
        auto e = gen::event_structure(rng, 1 + gen::pick(rng, 5), {"a", "b"});
        ExplicitGenerator g(e);
        auto m = materialize(g);
        CHECK(oracle::isomorphic(es_to_tsi(m), es_to_tsi(e)));
        CHECK(validate_es(m).ok());
    }
    auto c = materialize(program("choice_c.ccs"));
    CHECK(c.event_count() == 4);
    CHECK_THROWS_AS(materialize(program("loop.ccs"), 50), CapExceeded);
}

TEST_CASE("class cap") {
    CHECK_THROWS_AS(representative_set(program("shared_def.ccs"), IdentityOracle{}, 20), CapExceeded);
}

TEST_CASE("truncated unfoldings") {
    auto u = truncated_unfolding(program("loop.ccs"), 5);
    CHECK(u.tsi.state_count() == 6);
    CHECK(u.frontier.size() == 1);
    auto p = truncated_unfolding(program("par_ab.ccs"), 5);
    CHECK(p.tsi.state_count() == 4);
    CHECK(p.frontier.empty());
}

TEST_CASE("fold verification") {
    auto formulas = parse_formula_list(fx::text("fold_suite.tfl"));
    REQUIRE(formulas.size() == 20);
    for (const char* f : {"loop.ccs", "two_loops.ccs", "par_ab.ccs", "shared_def.ccs", "choice_c.ccs"}) {
        INFO(f);
        auto g = program(f);
        CcsOracle q(g);
        auto folded = fold(g, q);
        auto rep = verify_fold(folded, g, formulas, 12);
        CHECK(rep.disagreements == 0);
        CHECK(rep.agreements + rep.undecided == formulas.size());
        CHECK(rep.agreements > 0);
        auto par = verify_fold(folded, g, formulas, 12, kDefaultFoldCap, 4);
        CHECK(par.agreements == rep.agreements);
        for (std::size_t i = 0; i < formulas.size(); ++i) CHECK(par.checks[i].status == rep.checks[i].status);
    }
    auto g = program("loop.ccs");
    auto rep = verify_fold(fold(g, CcsOracle(g)), g, {parse_formula("nu Z. <a>c Z")}, 6);
    CHECK(rep.checks[0].folded);
    auto fin = program("par_ab.ccs");
    auto all = verify_fold(fold(fin, CcsOracle(fin)), fin, {parse_formula("<co>(<a> tt & <b> tt)")}, 4);
    CHECK(all.agreements == 1);
    CHECK(all.checks[0].folded);
}

TEST_CASE("finite structures agree on random formulas") {
    gen::Rng rng(3);
    IdentityOracle id;
    for (int i = 0; i < 20; ++i) {
        auto e = gen::event_structure(rng, 1 + gen::pick(rng, 4), {"a", "b"});
        ExplicitGenerator g(e);
        std::vector<Formula> fs;
        for (int k = 0; k < 10; ++k) fs.push_back(gen::formula(rng, 1 + gen::pick(rng, 4)));
        auto rep = verify_fold(fold(g, id), g, fs, 6);
        CHECK(rep.agreements == fs.size());
    }
}
