// Serial versus OpenMP batch evaluation of independent (model, formula) queries.

#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "truecon/batch.hpp"
#include "truecon/ccs.hpp"
#include "truecon/folding.hpp"
#include "truecon/formula.hpp"
#include "truecon/mc_game.hpp"
#include "truecon/net.hpp"
#include "truecon/semantics.hpp"

using namespace truecon;

namespace {

// Three components with a choice and a loop each; a few hundred processes.
Tsi workload_model() {
    auto p = parse_ccs("X = a.b.X + c.X\nY = b.(a.Y + d.Y)\nZ = c.d.Z + a.Z\nroot = X | Y | Z\n");
    return net_to_tsi(ccs_to_net(relabel_theta(p).program));
}

std::vector<Formula> workload_formulas(const Tsi& t, std::size_t n) {
    const std::vector<std::string> shapes = {
        "nu Z. (<{a}> tt | [{b}] Z)",         "mu Z. (<{a}>c tt | <co> <{b}> Z)",
        "<co> (<{a}> <{b}> tt & <{c}> tt)",   "nu X. mu Y. ([{a}]nc X & <{b}> Y | <co> tt)",
        "[co] <{a}> tt | <{d}> <{c}> tt",     "mu Z. ([{a}] Z & <{b}>c tt)",
    };
    auto labels = t.alphabet();
    std::mt19937_64 rng(7);
    std::vector<Formula> fs;
    for (std::size_t i = 0; i < n; ++i) {
        auto text = shapes[i % shapes.size()];
        for (std::size_t at; (at = text.find("{")) != std::string::npos;)
            text.replace(at, 3, labels[rng() % labels.size()]);
        fs.push_back(parse_formula(text));
    }
    return fs;
}

void check_batch(benchmark::State& state) {
    static const Tsi model = workload_model();
    static const auto space = std::make_shared<const ProcessSpace>(model);
    static const auto formulas = workload_formulas(model, 48);
    int jobs = static_cast<int>(state.range(0));
    for (auto _ : state) {
        std::vector<char> verdicts(formulas.size());
        parallel_for(formulas.size(), jobs, [&](std::size_t i) {
            verdicts[i] = solve_mc(build_mc_game(space, space->initial(), formulas[i])).winner == Player::Eve;
        });
        benchmark::DoNotOptimize(verdicts.data());
    }
    state.counters["queries"] = static_cast<double>(formulas.size());
}

void fold_verification(benchmark::State& state) {
    static const CcsGenerator g(relabel_theta(parse_ccs("X = a.b.X + c.X\nroot = X | d.X\n")).program);
    static const Tsi folded = fold(g, CcsOracle(g));
    static const auto formulas = workload_formulas(folded, 24);
    int jobs = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(verify_fold(folded, g, formulas, 8, kDefaultFoldCap, jobs));
}

} // namespace

BENCHMARK(check_batch)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(fold_verification)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
