#pragma once

#include <cstdint>
#include <vector>

namespace truecon {

enum class Player : std::uint8_t { Eve = 0, Adam = 1 };

inline Player opponent(Player p) { return p == Player::Eve ? Player::Adam : Player::Eve; }
inline const char* to_string(Player p) { return p == Player::Eve ? "Eve" : "Adam"; }

// Max-parity game: a play is won by Eve iff the highest priority seen
// infinitely often is even. A player who cannot move loses.
struct ParityGame {
    std::vector<Player> owner;
    std::vector<std::uint32_t> priority;
    std::vector<std::vector<std::uint32_t>> succ;

    [[nodiscard]] std::size_t size() const noexcept { return owner.size(); }
};

inline constexpr std::int64_t kNoMove = -1;

struct ParitySolution {
    std::vector<Player> winner;
    // Positional strategy of the winner at nodes it owns; kNoMove elsewhere.
    std::vector<std::int64_t> strategy;
};

// Recursive Zielonka procedure with attractor strategies.
ParitySolution solve_parity(const ParityGame& g);

// Winner of the lasso play obtained from fixed positional choices.
// `choice[v]` is the successor taken at v (ignored at dead ends).
Player lasso_winner(const ParityGame& g, std::uint32_t start, const std::vector<std::int64_t>& choice);

// Plays `plays` games from `start` where `who` follows the solution's strategy
// and the opponent fixes a fresh random positional strategy each time. Returns
// the number of plays `who` lost.
std::size_t count_defeats(const ParityGame& g, const ParitySolution& sol, std::uint32_t start, Player who,
                          std::size_t plays, std::uint64_t seed);

} // namespace truecon
