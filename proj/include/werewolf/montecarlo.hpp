#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "werewolf/core.hpp"
#include "werewolf/error.hpp"
#include "werewolf/rng.hpp"

namespace werewolf {

// Communication-free baseline simulator for the fixed 8-player setup
// (2 werewolves, 1 doctor, 1 seer, 4 plain villagers). There is no debate:
// every choice is a uniform draw. Optionally the seer investigates one new
// player per night; on unmasking a werewolf the accused is exiled on the
// spot (everyone blindly believes) and the day is skipped. Gives the
// information-free win rates the full engine is measured against.
namespace mc {

inline constexpr int kPlayers = 8;
inline constexpr int kWerewolves = 2;

struct State {
  std::vector<int> P;  // living players
  std::vector<int> W;  // living werewolves
  std::vector<int> V;  // living non-werewolves ("villagers" incl. doctor/seer)
  int d = -1;          // doctor id
  int s = -1;          // seer id, -1 when the variant runs without a seer
  std::vector<int> I;  // ever-investigated players
};

namespace detail {

inline int sample(const std::vector<int>& pool, Rng& rng) {
  if (pool.empty()) throw InternalError("mc: sample from an empty pool");
  return pool[rng.below(pool.size())];
}

inline bool member(const std::vector<int>& pool, int x) {
  return std::find(pool.begin(), pool.end(), x) != pool.end();
}

inline void remove(std::vector<int>& pool, int x) {
  pool.erase(std::remove(pool.begin(), pool.end(), x), pool.end());
}

}  // namespace detail

inline State setup(bool include_seer, Rng& rng) {
  State st;
  st.P.resize(kPlayers);
  std::iota(st.P.begin(), st.P.end(), 0);

  std::vector<int> pool = st.P;
  for (int i = 0; i < kWerewolves; ++i) {
    const int w = detail::sample(pool, rng);
    st.W.push_back(w);
    detail::remove(pool, w);
  }
  for (int p : st.P)
    if (!detail::member(st.W, p)) st.V.push_back(p);

  st.d = detail::sample(st.V, rng);
  if (include_seer) {
    std::vector<int> vs = st.V;
    detail::remove(vs, st.d);
    st.s = detail::sample(vs, rng);
  }
  return st;
}

inline bool running(const State& st) {
  return st.W.size() < st.V.size() && !st.W.empty();
}

// Night: werewolves draw a victim from the non-werewolves, the doctor's
// protection is drawn from everyone. The kill lands unless the doctor is
// still alive and the two draws coincide. Both draws happen even when the
// doctor is dead, exactly as specified.
inline void night(State& st, Rng& rng) {
  const int victim = detail::sample(st.V, rng);
  const int save = detail::sample(st.P, rng);
  if (!detail::member(st.V, st.d) || victim != save) {
    detail::remove(st.V, victim);
    detail::remove(st.P, victim);
  }
}

// Seer investigation; returns true when a werewolf was unmasked and
// instantly exiled, in which case the day phase is skipped. When every
// living player has already been investigated there is nothing left to
// learn and the step is a no-op.
inline bool seer(State& st, Rng& rng) {
  if (st.s < 0 || !detail::member(st.P, st.s)) return false;
  std::vector<int> pool;
  for (int p : st.P)
    if (p != st.s && !detail::member(st.I, p)) pool.push_back(p);
  if (pool.empty()) return false;
  const int target = detail::sample(pool, rng);
  st.I.push_back(target);
  if (detail::member(st.W, target)) {
    detail::remove(st.P, target);
    detail::remove(st.W, target);
    return true;
  }
  return false;
}

// Day: everyone votes; werewolves draw from the non-werewolves, everyone
// else from all living players but themselves. A strict majority (> half of
// the votes cast) exiles its target; otherwise nothing happens.
inline void day(State& st, Rng& rng) {
  std::array<int, kPlayers> votes{};
  for (int p : st.P) {
    int vote;
    if (detail::member(st.W, p)) {
      std::vector<int> pool;
      for (int q : st.P)
        if (!detail::member(st.W, q)) pool.push_back(q);
      vote = detail::sample(pool, rng);
    } else {
      std::vector<int> pool;
      for (int q : st.P)
        if (q != p) pool.push_back(q);
      vote = detail::sample(pool, rng);
    }
    votes[static_cast<size_t>(vote)] += 1;
  }

  int exile = -1, count = -1;
  for (int t : st.P) {
    if (votes[static_cast<size_t>(t)] > count) {
      count = votes[static_cast<size_t>(t)];
      exile = t;
    }
  }
  if (2 * count > static_cast<int>(st.P.size())) {
    detail::remove(st.P, exile);
    detail::remove(st.W, exile);
    detail::remove(st.V, exile);
  }
}

inline Winner winner(const State& st) {
  return st.W.size() >= st.V.size() ? Winner::Werewolves : Winner::Villagers;
}

struct Result {
  Winner winner = Winner::Villagers;
  int rounds = 0;
};

// Doctor-save + hung-vote rounds change nothing, so termination is only
// probabilistic; the cap exists to turn pathological RNG into a loud error
// instead of a hang. Never observed in practice.
inline constexpr int kRoundCap = 10000;

inline Result simulate_game(bool include_seer, Rng& rng) {
  State st = setup(include_seer, rng);
  int rounds = 0;
  while (running(st)) {
    if (++rounds > kRoundCap) throw InternalError("mc: round cap exceeded");
    night(st, rng);
    if (seer(st, rng)) continue;  // unmasking skips straight to the next night
    day(st, rng);
  }
  return {winner(st), rounds};
}

struct Estimate {
  int games = 0;
  int villager_wins = 0;
  bool with_seer = false;
  uint64_t seed = 0;

  double villager_rate() const {
    return games ? static_cast<double>(villager_wins) / games : 0.0;
  }
  double werewolf_rate() const { return games ? 1.0 - villager_rate() : 0.0; }
  // Normal-approximation half-width of the 95% confidence interval.
  double ci95() const {
    if (!games) return 0.0;
    const double p = villager_rate();
    return 1.96 * std::sqrt(p * (1.0 - p) / games);
  }
};

// Runs `games` independent simulations; game i uses the stream derived from
// (seed, i), so results do not depend on execution order.
inline Estimate estimate_win_rate(int games, bool include_seer, uint64_t seed) {
  if (games < 1) throw ConfigError("mc: games must be >= 1");
  Estimate est;
  est.games = games;
  est.with_seer = include_seer;
  est.seed = seed;
  for (int i = 0; i < games; ++i) {
    Rng rng(derive_seed(seed, {static_cast<uint64_t>(i)}));
    if (simulate_game(include_seer, rng).winner == Winner::Villagers) est.villager_wins += 1;
  }
  return est;
}

}  // namespace mc

}  // namespace werewolf
