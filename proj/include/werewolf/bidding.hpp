#pragma once

#include <map>
#include <set>
#include <vector>

#include "werewolf/error.hpp"
#include "werewolf/rng.hpp"

namespace werewolf {

// Turn-taking auction. Every living player submits a level 0-4:
//   0: observe, 1: something general, 2: something important,
//   3: urgent to speak, 4: must respond directly.
// The highest bidder speaks. Ties are settled by a weighted random draw in
// which players mentioned in the previous utterance carry `mention_weight`
// tickets and everyone else carries one, so the called-out get the floor
// more often.
inline int arbitrate_turn(const std::map<int, int>& bids, const std::set<int>& mentioned,
                          int mention_weight, Rng& rng) {
  if (bids.empty()) throw InternalError("arbitrate_turn: no bids");
  if (mention_weight < 1) throw InternalError("arbitrate_turn: mention_weight must be >= 1");

  int max_level = -1;
  for (const auto& [seat, level] : bids) {
    if (level < 0 || level > 4)
      throw InternalError("arbitrate_turn: bid level out of range 0..4");
    if (level > max_level) max_level = level;
  }

  std::vector<int> leaders;
  for (const auto& [seat, level] : bids)
    if (level == max_level) leaders.push_back(seat);  // map order: ascending seat

  if (leaders.size() == 1) return leaders.front();

  std::vector<uint64_t> weights;
  weights.reserve(leaders.size());
  for (int seat : leaders)
    weights.push_back(mentioned.count(seat) ? static_cast<uint64_t>(mention_weight) : 1u);
  return leaders[rng.pick_weighted(weights)];
}

}  // namespace werewolf
