#include <catch2/catch_amalgamated.hpp>

#include "werewolf/werewolf.hpp"
#include "werewolf/transport_httplib.hpp"

TEST_CASE("library smoke: a scripted game runs and replays", "[smoke]") {
  werewolf::GameConfig config;
  config.seed = 7;
  werewolf::GameMaster gm(config,
                          [](const werewolf::PlayerInfo&) {
                            return std::make_shared<werewolf::RandomPolicy>();
                          });
  const auto& state = gm.run();
  REQUIRE(state.winner.has_value());
  const auto log = gm.log();
  const auto replayed = werewolf::replay(log);
  REQUIRE(werewolf::state_digest(replayed) == werewolf::state_digest(state));
}
