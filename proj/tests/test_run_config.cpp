#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <memory>
#include <string>

#include "helpers.hpp"
#include "werewolf/werewolf.hpp"

using namespace werewolf;

namespace {

json full_sample() {
  return json::parse(R"({
    "game": {
      "villagers": 4,
      "werewolves": 2,
      "seers": 1,
      "doctors": 1,
      "debate_cap": 8,
      "seed": 1234,
      "synthetic_votes": true,
      "mention_tiebreak_weight": 2,
      "end_debate_on_consensus": false,
      "name_pool": ["Alice", "Bruno", "Carla", "Diego", "Elena", "Felix", "Greta", "Hugo"]
    },
    "providers": {
      "local": {
        "endpoint": "http://localhost:8000/v1/chat/completions",
        "model": "llama-3-8b",
        "temperature": 0.7,
        "max_tokens": 512
      },
      "hosted": {
        "endpoint": "https://api.example.com/v1/chat/completions",
        "model": "big-model",
        "auth_header": "Authorization",
        "auth_prefix": "Bearer ",
        "credential_env": "EXAMPLE_API_KEY"
      }
    },
    "agents": {
      "villagers": "llm:local",
      "werewolves": "heuristic"
    },
    "tournament": {
      "models": ["random", "heuristic", "llm:hosted"],
      "games_per_pair": 10,
      "selfplay_games": 5,
      "seed": 99,
      "workers": 2,
      "out_dir": "runs/tourney"
    },
    "output": {
      "log": "out/game.jsonl"
    }
  })");
}

// Expects a ConfigError whose message starts with the given field path.
template <typename Fn>
void expect_path_error(Fn&& fn, const std::string& path) {
  try {
    fn();
    FAIL("expected ConfigError for path " << path);
  } catch (const ConfigError& ex) {
    const std::string what = ex.what();
    INFO(what);
    CHECK(what.rfind(path + ":", 0) == 0);
  }
}

}  // namespace

TEST_CASE("a full run config parses field by field", "[run_config]") {
  const RunConfig rc = parse_run_config(full_sample());

  CHECK(rc.game.villagers == 4);
  CHECK(rc.game.werewolves == 2);
  CHECK(rc.game.seers == 1);
  CHECK(rc.game.doctors == 1);
  CHECK(rc.game.debate_cap == 8);
  CHECK(rc.game.seed == 1234);
  CHECK(rc.game.synthetic_votes);
  CHECK(rc.game.mention_tiebreak_weight == 2);
  CHECK_FALSE(rc.game.end_debate_on_consensus);
  REQUIRE(rc.game.name_pool.size() == 8);
  CHECK(rc.game.name_pool[0] == "Alice");

  REQUIRE(rc.providers.size() == 2);
  const auto& local = rc.providers.at("local");
  CHECK(local.name == "local");
  CHECK(local.endpoint == "http://localhost:8000/v1/chat/completions");
  CHECK(local.model == "llama-3-8b");
  CHECK(local.temperature == 0.7);
  CHECK(local.max_tokens == 512);
  CHECK(local.credential_env.empty());
  const auto& hosted = rc.providers.at("hosted");
  CHECK(hosted.credential_env == "EXAMPLE_API_KEY");
  CHECK(hosted.auth_prefix == "Bearer ");

  CHECK(rc.agents.villagers == "llm:local");
  CHECK(rc.agents.werewolves == "heuristic");

  REQUIRE(rc.tournament.models.size() == 3);
  CHECK(rc.tournament.models[2] == "llm:hosted");
  CHECK(rc.tournament.games_per_pair == 10);
  CHECK(rc.tournament.selfplay_games == 5);
  CHECK(rc.tournament.seed == 99);
  CHECK(rc.tournament.workers == 2);
  CHECK(rc.tournament.out_dir == "runs/tourney");

  CHECK(rc.out_log == "out/game.jsonl");
}

TEST_CASE("an empty object yields pure defaults", "[run_config]") {
  const RunConfig rc = parse_run_config(json::object());
  const GameConfig defaults;
  CHECK(rc.game.villagers == defaults.villagers);
  CHECK(rc.game.werewolves == defaults.werewolves);
  CHECK(rc.game.debate_cap == defaults.debate_cap);
  CHECK(rc.providers.empty());
  CHECK(rc.agents.villagers == "random");
  CHECK(rc.agents.werewolves == "random");
  CHECK(rc.tournament.models.empty());
  CHECK(rc.tournament.games_per_pair == 10);
  CHECK(rc.tournament.workers == 1);
  CHECK(rc.out_log == "game.jsonl");
}

TEST_CASE("config errors name the offending field path", "[run_config]") {
  auto mutate = [](std::function<void(json&)> fn) {
    json j = full_sample();
    fn(j);
    return j;
  };

  expect_path_error([&] { parse_run_config(json::parse("[1, 2]")); }, "config");
  expect_path_error([&] { parse_run_config(mutate([](json& j) { j["banana"] = 1; })); },
                    "config.banana");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["game"]["debate_cap"] = "lots"; })); },
      "game.debate_cap");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["game"]["debate_cap"] = 0; })); }, "game");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["game"]["mystery"] = true; })); },
      "game.mystery");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["game"]["seed"] = -5; })); }, "game.seed");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["game"]["name_pool"] = "Alice"; })); },
      "game.name_pool");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["game"]["synthetic_votes"] = 1; })); },
      "game.synthetic_votes");

  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["providers"]["local"].erase("endpoint"); })); },
      "providers.local.endpoint");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["providers"]["local"].erase("model"); })); },
      "providers.local.model");
  expect_path_error(
      [&] {
        parse_run_config(mutate([](json& j) { j["providers"]["local"]["temperature"] = -1; }));
      },
      "providers.local.temperature");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["providers"]["local"]["max_tokens"] = 0; })); },
      "providers.local.max_tokens");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["providers"]["local"]["surprise"] = 1; })); },
      "providers.local.surprise");

  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["agents"]["villagers"] = "psychic"; })); },
      "agents.villagers");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["agents"]["werewolves"] = "llm:nope"; })); },
      "agents.werewolves");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["agents"]["villagers"] = "llm:"; })); },
      "agents.villagers");

  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["tournament"]["models"][1] = 7; })); },
      "tournament.models[1]");
  expect_path_error(
      [&] {
        parse_run_config(mutate([](json& j) { j["tournament"]["models"][2] = "llm:ghost"; }));
      },
      "tournament.models[2]");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["tournament"]["workers"] = 0; })); },
      "tournament.workers");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["tournament"]["extra"] = 1; })); },
      "tournament.extra");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["output"]["log"] = 9; })); }, "output.log");
  expect_path_error(
      [&] { parse_run_config(mutate([](json& j) { j["output"]["fmt"] = "csv"; })); },
      "output.fmt");
}

TEST_CASE("agent specs follow the three-form grammar", "[run_config]") {
  std::map<std::string, ProviderProfile> providers;
  ProviderProfile p;
  p.name = "local";
  p.endpoint = "http://x";
  p.model = "m";
  providers["local"] = p;

  CHECK_NOTHROW(validate_agent_spec("random", providers, "x"));
  CHECK_NOTHROW(validate_agent_spec("heuristic", providers, "x"));
  CHECK_NOTHROW(validate_agent_spec("llm:local", providers, "x"));
  CHECK_THROWS_AS(validate_agent_spec("llm:other", providers, "x"), ConfigError);
  CHECK_THROWS_AS(validate_agent_spec("llm:", providers, "x"), ConfigError);
  CHECK_THROWS_AS(validate_agent_spec("LLM:local", providers, "x"), ConfigError);
  CHECK_THROWS_AS(validate_agent_spec("", providers, "x"), ConfigError);
  CHECK_THROWS_AS(validate_agent_spec("Random", providers, "x"), ConfigError);
}

TEST_CASE("make_policy dispatches on the agent spec string", "[run_config]") {
  std::map<std::string, ProviderProfile> providers;
  ProviderProfile p;
  p.name = "local";
  p.endpoint = "http://x";
  p.model = "m";
  providers["local"] = p;

  CHECK(std::dynamic_pointer_cast<RandomPolicy>(make_policy("random", providers, nullptr)));
  CHECK(std::dynamic_pointer_cast<HeuristicPolicy>(make_policy("heuristic", providers, nullptr)));

  struct NullTransport : HttpTransport {
    HttpResponse post(const std::string&, const HttpHeaders&, const std::string&) override {
      throw TransportError("offline");
    }
  };
  auto completer = std::make_shared<Completer>(std::make_shared<NullTransport>());
  auto llm = make_policy("llm:local", providers, completer);
  auto typed = std::dynamic_pointer_cast<LlmPolicy>(llm);
  REQUIRE(typed);
  CHECK(typed->profile().model == "m");

  CHECK_THROWS_AS(make_policy("llm:local", providers, nullptr), ConfigError);
  CHECK_THROWS_AS(make_policy("llm:ghost", providers, completer), ConfigError);
  CHECK_THROWS_AS(make_policy("psychic", providers, completer), ConfigError);
}

TEST_CASE("run configs load from disk with real I/O errors", "[run_config]") {
  testutil::TempDir dir;
  const std::string path = dir.file("config.json");
  {
    std::ofstream out(path);
    out << full_sample().dump(2);
  }
  const RunConfig rc = load_run_config(path);
  CHECK(rc.game.seed == 1234);
  CHECK(rc.tournament.out_dir == "runs/tourney");

  CHECK_THROWS_AS(load_run_config(dir.file("missing.json")), IoError);

  const std::string broken = dir.file("broken.json");
  {
    std::ofstream out(broken);
    out << "{ not json";
  }
  try {
    load_run_config(broken);
    FAIL("expected ConfigError");
  } catch (const ConfigError& ex) {
    CHECK(std::string(ex.what()).find("broken.json") != std::string::npos);
  }
}
