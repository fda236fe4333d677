#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "werewolf/bidding.hpp"
#include "werewolf/mentions.hpp"
#include "werewolf/rng.hpp"

using namespace werewolf;

TEST_CASE("mentions are whole-word and case-insensitive", "[mentions]") {
  CHECK(mentions("I suspect mona.", "Mona"));
  CHECK(mentions("MONA is lying", "Mona"));
  CHECK(mentions("Mona", "Mona"));
  CHECK(mentions("what about Mona?", "Mona"));
  CHECK(mentions("Mona's story is off", "Mona"));  // apostrophe is a boundary
  CHECK(mentions("@Mona wake up", "Mona"));
  CHECK(mentions("Mona,Liam", "Mona"));
  CHECK(mentions("Mona,Liam", "Liam"));

  CHECK_FALSE(mentions("the monastery is quiet", "Mona"));
  CHECK_FALSE(mentions("Ramona spoke", "Mona"));
  CHECK_FALSE(mentions("Monas", "Mona"));
  CHECK_FALSE(mentions("", "Mona"));
  CHECK_FALSE(mentions("anything", ""));
}

TEST_CASE("mentioned_names filters a roster", "[mentions]") {
  const std::vector<std::string> names{"Alice", "Bruno", "Carla"};
  const auto hit = mentioned_names("i think ALICE and carla are suspicious", names);
  REQUIRE(hit.size() == 2);
  CHECK(hit[0] == "Alice");
  CHECK(hit[1] == "Carla");
}

TEST_CASE("a unique maximal bid always wins, mentions or not", "[bidding]") {
  Rng rng(100);
  Rng fuzz(200);
  for (int trial = 0; trial < 10000; ++trial) {
    const int players = 2 + static_cast<int>(fuzz.below(7));
    std::map<int, int> bids;
    std::set<int> mentioned;
    for (int s = 0; s < players; ++s) {
      bids[s] = static_cast<int>(fuzz.below(4));  // everyone 0..3
      if (fuzz.below(2)) mentioned.insert(s);
    }
    const int star = static_cast<int>(fuzz.below(static_cast<uint64_t>(players)));
    bids[star] = 4;  // unique maximum
    const int speaker = arbitrate_turn(bids, mentioned, 2, rng);
    REQUIRE(speaker == star);
  }
}

TEST_CASE("the winner always holds a maximal bid", "[bidding]") {
  Rng rng(300);
  Rng fuzz(400);
  for (int trial = 0; trial < 10000; ++trial) {
    const int players = 2 + static_cast<int>(fuzz.below(7));
    std::map<int, int> bids;
    std::set<int> mentioned;
    int max_level = 0;
    for (int s = 0; s < players; ++s) {
      bids[s] = static_cast<int>(fuzz.below(5));
      if (bids[s] > max_level) max_level = bids[s];
      if (fuzz.below(3) == 0) mentioned.insert(s);
    }
    const int speaker = arbitrate_turn(bids, mentioned, 3, rng);
    REQUIRE(bids.at(speaker) == max_level);
  }
}

TEST_CASE("two-way tie with one mention lands near two thirds", "[bidding]") {
  // Seats 3 and 5 tie at level 4; only seat 5 was mentioned and carries
  // weight 2, so it should win with probability 2/3. Expect the observed
  // frequency over 10,000 draws inside [0.657, 0.677].
  Rng rng(424242);
  const std::map<int, int> bids{{3, 4}, {5, 4}, {6, 1}};
  const std::set<int> mentioned{5};
  int wins = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i)
    if (arbitrate_turn(bids, mentioned, 2, rng) == 5) ++wins;
  const double freq = static_cast<double>(wins) / draws;
  INFO("observed frequency " << freq);
  CHECK(freq >= 0.657);
  CHECK(freq <= 0.677);
}

TEST_CASE("an unmentioned tie is a fair coin", "[bidding]") {
  Rng rng(5150);
  const std::map<int, int> bids{{0, 2}, {1, 2}};
  int zero = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i)
    if (arbitrate_turn(bids, {}, 2, rng) == 0) ++zero;
  const double freq = static_cast<double>(zero) / draws;
  CHECK(freq > 0.48);
  CHECK(freq < 0.52);
}

TEST_CASE("mention weight scales the tie odds", "[bidding]") {
  // weight 3: mentioned leader should win 3/4 of two-way ties.
  Rng rng(31337);
  const std::map<int, int> bids{{1, 3}, {2, 3}};
  const std::set<int> mentioned{2};
  int wins = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i)
    if (arbitrate_turn(bids, mentioned, 3, rng) == 2) ++wins;
  const double freq = static_cast<double>(wins) / draws;
  CHECK(freq > 0.74);
  CHECK(freq < 0.76);
}

TEST_CASE("arbitration is deterministic for a fixed generator state", "[bidding]") {
  const std::map<int, int> bids{{0, 4}, {1, 4}, {2, 4}};
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i)
    CHECK(arbitrate_turn(bids, {1}, 2, a) == arbitrate_turn(bids, {1}, 2, b));
}

TEST_CASE("arbitration rejects malformed input", "[bidding]") {
  Rng rng(1);
  CHECK_THROWS_AS(arbitrate_turn({}, {}, 2, rng), InternalError);
  CHECK_THROWS_AS(arbitrate_turn({{0, 5}}, {}, 2, rng), InternalError);
  CHECK_THROWS_AS(arbitrate_turn({{0, -1}}, {}, 2, rng), InternalError);
  CHECK_THROWS_AS(arbitrate_turn({{0, 2}}, {}, 0, rng), InternalError);
}
