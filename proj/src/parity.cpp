#include "truecon/parity.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <random>
#include <unordered_map>

#include "truecon/error.hpp"

namespace truecon {

namespace {

class Zielonka {
public:
    explicit Zielonka(const ParityGame& g) : g_(g), pred_(g.size()), strategy_(g.size(), kNoMove) {
        for (std::uint32_t v = 0; v < g.size(); ++v)
            for (auto w : g.succ[v]) pred_[w].push_back(v);
    }

    std::vector<std::int64_t>& strategy() { return strategy_; }

    // Returns membership of Eve's and Adam's winning regions within `nodes`.
    std::array<std::vector<std::uint32_t>, 2> solve(const std::vector<std::uint32_t>& nodes, const std::vector<char>& in) {
        std::array<std::vector<std::uint32_t>, 2> win;
        if (nodes.empty()) return win;
        std::uint32_t top = 0;
        for (auto v : nodes) top = std::max(top, g_.priority[v]);
        auto i = static_cast<Player>(top & 1u);
        auto j = opponent(i);

        std::vector<std::uint32_t> target;
        for (auto v : nodes)
            if (g_.priority[v] == top) target.push_back(v);
        auto a = attractor(nodes, in, i, target);

        auto [rest, rest_in] = without(nodes, in, a);
        auto sub = solve(rest, rest_in);
        if (sub[idx(j)].empty()) {
            for (auto v : target)
                if (g_.owner[v] == i)
                    for (auto w : g_.succ[v])
                        if (in[w]) {
                            strategy_[v] = w;
                            break;
                        }
            win[idx(i)] = nodes;
            return win;
        }
        auto b = attractor(nodes, in, j, sub[idx(j)]);
        auto [rest2, rest2_in] = without(nodes, in, b);
        auto sub2 = solve(rest2, rest2_in);
        win[idx(i)] = std::move(sub2[idx(i)]);
        win[idx(j)] = std::move(sub2[idx(j)]);
        win[idx(j)].insert(win[idx(j)].end(), b.begin(), b.end());
        return win;
    }

private:
    static std::size_t idx(Player p) { return static_cast<std::size_t>(p); }

    std::vector<std::uint32_t> attractor(const std::vector<std::uint32_t>& nodes, const std::vector<char>& in, Player p,
                                         const std::vector<std::uint32_t>& target) {
        std::vector<char> mark(g_.size(), 0);
        std::vector<std::uint32_t> res;
        std::vector<std::uint32_t> queue;
        for (auto v : target) {
            mark[v] = 1;
            res.push_back(v);
            queue.push_back(v);
        }
        std::unordered_map<std::uint32_t, std::size_t> remaining;
        (void)nodes;
        for (std::size_t k = 0; k < queue.size(); ++k) {
            auto u = queue[k];
            for (auto v : pred_[u]) {
                if (!in[v] || mark[v]) continue;
                if (g_.owner[v] == p) {
                    strategy_[v] = u;
                } else {
                    auto it = remaining.find(v);
                    if (it == remaining.end()) {
                        std::size_t c = 0;
                        for (auto w : g_.succ[v]) c += in[w] ? 1 : 0;
                        it = remaining.emplace(v, c).first;
                    }
                    if (--it->second > 0) continue;
                }
                mark[v] = 1;
                res.push_back(v);
                queue.push_back(v);
            }
        }
        return res;
    }

    static std::pair<std::vector<std::uint32_t>, std::vector<char>> without(const std::vector<std::uint32_t>& nodes,
                                                                            const std::vector<char>& in,
                                                                            const std::vector<std::uint32_t>& drop) {
        std::vector<char> sub = in;
        for (auto v : drop) sub[v] = 0;
        std::vector<std::uint32_t> rest;
        for (auto v : nodes)
            if (sub[v]) rest.push_back(v);
        return {std::move(rest), std::move(sub)};
    }

    const ParityGame& g_;
    std::vector<std::vector<std::uint32_t>> pred_;
    std::vector<std::int64_t> strategy_;
};

} // namespace

ParitySolution solve_parity(const ParityGame& g) {
    // Dead ends become self-loops whose parity favours the player who is not stuck.
    ParityGame total = g;
    std::vector<char> dead(g.size(), 0);
    for (std::uint32_t v = 0; v < g.size(); ++v) {
        if (!g.succ[v].empty()) continue;
        dead[v] = 1;
        total.succ[v] = {v};
        total.priority[v] = g.owner[v] == Player::Eve ? 1 : 0;
    }
    Zielonka z(total);
    std::vector<std::uint32_t> nodes(g.size());
    for (std::uint32_t v = 0; v < g.size(); ++v) nodes[v] = v;
    std::vector<char> in(g.size(), 1);
    auto win = z.solve(nodes, in);

    ParitySolution sol;
    sol.winner.assign(g.size(), Player::Eve);
    for (auto v : win[1]) sol.winner[v] = Player::Adam;
    sol.strategy.assign(g.size(), kNoMove);
    for (std::uint32_t v = 0; v < g.size(); ++v)
        if (!dead[v] && sol.winner[v] == g.owner[v]) sol.strategy[v] = z.strategy()[v];
    return sol;
}

Player lasso_winner(const ParityGame& g, std::uint32_t start, const std::vector<std::int64_t>& choice) {
    std::unordered_map<std::uint32_t, std::size_t> seen;
    std::vector<std::uint32_t> path;
    std::uint32_t v = start;
    for (;;) {
        if (g.succ[v].empty()) return opponent(g.owner[v]);
        auto [it, fresh] = seen.emplace(v, path.size());
        if (!fresh) {
            std::uint32_t top = 0;
            for (std::size_t k = it->second; k < path.size(); ++k) top = std::max(top, g.priority[path[k]]);
            return (top & 1u) ? Player::Adam : Player::Eve;
        }
        path.push_back(v);
        if (choice[v] < 0) throw Error("positional choice missing at node " + std::to_string(v));
        v = static_cast<std::uint32_t>(choice[v]);
    }
}

std::size_t count_defeats(const ParityGame& g, const ParitySolution& sol, std::uint32_t start, Player who,
                          std::size_t plays, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::size_t defeats = 0;
    std::vector<std::int64_t> choice(g.size(), kNoMove);
    for (std::size_t k = 0; k < plays; ++k) {
        for (std::uint32_t v = 0; v < g.size(); ++v) {
            if (g.succ[v].empty()) continue;
            if (g.owner[v] == who && g.succ[v].size() > 1) {
                choice[v] = sol.strategy[v];
            } else if (g.succ[v].size() == 1) {
                choice[v] = g.succ[v][0];
            } else {
                std::uniform_int_distribution<std::size_t> pick(0, g.succ[v].size() - 1);
                choice[v] = g.succ[v][pick(rng)];
            }
        }
        if (lasso_winner(g, start, choice) != who) ++defeats;
    }
    return defeats;
}

} // namespace truecon
