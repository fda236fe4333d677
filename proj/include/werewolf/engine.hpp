#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "werewolf/bidding.hpp"
#include "werewolf/core.hpp"
#include "werewolf/log.hpp"
#include "werewolf/memory.hpp"
#include "werewolf/mentions.hpp"
#include "werewolf/policy.hpp"
#include "werewolf/view.hpp"

namespace werewolf {

// Decision-coordinate stage codes. Every agent decision gets the seed
// derive_seed(config.seed, {round, stage, substep, seat}); distinct stages
// keep unrelated decisions on unrelated streams (notably: synthetic straw
// votes never share a seed with real votes, so turning them off cannot move
// any other draw).
namespace stage {
inline constexpr uint64_t night_wolf = 1;
inline constexpr uint64_t night_doctor = 2;
inline constexpr uint64_t night_seer = 3;
inline constexpr uint64_t bid = 4;
inline constexpr uint64_t speak = 5;
inline constexpr uint64_t synthetic_vote = 6;
inline constexpr uint64_t vote = 7;
inline constexpr uint64_t summarize = 8;
}  // namespace stage

inline std::string rules_text(const GameConfig& c) {
  std::string out;
  out += "Werewolf: a hidden-role elimination game with " +
         std::to_string(c.total_players()) + " players (" + std::to_string(c.villagers) +
         " villagers, " + std::to_string(c.werewolves) + " werewolves, " +
         std::to_string(c.seers) + " seer, " + std::to_string(c.doctors) + " doctor).\n";
  out +=
      "Each round: at night the werewolves pick one victim, the doctor may protect "
      "one player (a protected victim survives), and the seer may learn whether one "
      "player is a werewolf. In the morning the outcome is announced without "
      "explanation.\n";
  out += "Then " + std::to_string(c.debate_cap) +
         " debate turns are auctioned: everyone bids 0-4 (0: observe; 1: general "
         "thoughts; 2: something important; 3: urgent; 4: must respond because you "
         "were mentioned) and the highest bidder speaks; ties favour players "
         "mentioned in the previous turn.\n";
  out +=
      "After the debate everyone votes publicly; a strict majority exiles a player; "
      "self-votes are forbidden. Villagers win when every werewolf is gone; "
      "werewolves win when they equal or outnumber everyone else.\n";
  return out;
}

using PolicyFactory = std::function<PolicyPtr(const PlayerInfo&)>;

// Runs one complete game: owns the state, the per-agent memory streams, and
// the only Rng that gameplay consumes. All agent interaction goes through
// Policy; all state mutation goes through apply_event, so the emitted log
// replays to the same state.
class GameMaster {
 public:
  GameMaster(const GameConfig& config, const PolicyFactory& factory,
             std::map<std::string, std::string> labels = {})
      : state_(new_game(config)), labels_(std::move(labels)) {
    rules_ = rules_text(config);
    memories_.resize(state_.players.size());
    for (const auto& p : state_.players) {
      policies_.push_back(factory(p));
      if (!policies_.back()) throw ConfigError("policy factory returned null");
    }
    seed_wolf_knowledge();
  }

  GameMaster(const GameConfig& config, const std::vector<PolicyPtr>& by_seat,
             std::map<std::string, std::string> labels = {})
      : GameMaster(
            config,
            [&](const PlayerInfo& p) {
              if (p.seat < 0 || p.seat >= static_cast<int>(by_seat.size()))
                throw ConfigError("policy list does not cover seat " + std::to_string(p.seat));
              return by_seat[static_cast<size_t>(p.seat)];
            },
            std::move(labels)) {}

  bool finished() const { return state_.winner.has_value(); }
  const GameState& state() const { return state_; }
  const std::vector<MemoryStream>& memories() const { return memories_; }
  const std::vector<std::string>& transcript() const { return transcript_; }

  GameLog log() const { return GameLog{state_.config, labels_, state_.history}; }

  const GameState& run() {
    int guard = 0;
    while (!finished()) {
      if (++guard > kMaxRounds) throw InternalError("round cap exceeded; game will not end");
      play_round();
    }
    return state_;
  }

  // One full round: night, debate, vote, end-of-round reflections. Public so
  // tests can drive the engine stepwise.
  void play_round() {
    play_night();
    if (finished()) return;
    play_debate();
    play_vote();
    if (finished()) return;
    play_summaries();
  }

  void play_night() {
    if (finished()) throw InternalError("play_night on a finished game");
    const int r = state_.history.size() <= 1 ? 0 : state_.round + 1;
    transcript_.clear();
    last_utterance_.clear();

    // Werewolves: the lowest-seated living werewolf picks for the pack.
    std::vector<PlayerId> wolves, prey;
    for (PlayerId p : state_.living()) {
      if (state_.role_of(p) == Role::Werewolf)
        wolves.push_back(p);
      else
        prey.push_back(p);
    }
    if (wolves.empty() || prey.empty()) throw InternalError("night phase with a win already met");
    const PlayerId pack_leader = wolves.front();
    const PlayerId victim = ask_target(pack_leader, ActionKind::NightWerewolf, prey, r,
                                       stage::night_wolf, 0);
    for (PlayerId w : wolves)
      memories_[static_cast<size_t>(w.seat)].observe(
          r, "The werewolves chose to eliminate " + state_.name_of(victim) + ".");

    // Doctor: may protect anyone living, including themself.
    std::optional<PlayerId> protected_player;
    if (auto doctor = living_with_role(Role::Doctor)) {
      protected_player =
          ask_target(*doctor, ActionKind::NightDoctor, state_.living(), r, stage::night_doctor, 0);
      memories_[static_cast<size_t>(doctor->seat)].observe(
          r, "You protected " + state_.name_of(*protected_player) + ".");
    }

    // Seer: investigates any other living player; learns werewolf-or-not.
    if (auto seer = living_with_role(Role::Seer)) {
      std::vector<PlayerId> pool;
      for (PlayerId p : state_.living())
        if (p != *seer) pool.push_back(p);
      if (!pool.empty()) {
        const PlayerId target =
            ask_target(*seer, ActionKind::NightSeer, pool, r, stage::night_seer, 0);
        const Role true_role = state_.role_of(target);
        emit({r, Phase::Night, Visibility::Private, {seer->seat},
              SeerResult{*seer, target, true_role}});
        memories_[static_cast<size_t>(seer->seat)].observe(
            r, "You investigated " + state_.name_of(target) + ": " + state_.name_of(target) +
                   (true_role == Role::Werewolf ? " is a Werewolf." : " is not a Werewolf."));
      }
    }

    const bool saved = protected_player && *protected_player == victim;
    std::vector<int> wolf_seats;
    for (PlayerId w : wolves) wolf_seats.push_back(w.seat);
    emit({r, Phase::Night, Visibility::Private, wolf_seats, NightElimination{victim, saved}});

    const std::string morning =
        saved ? "Night " + std::to_string(r) + ": no one was eliminated."
              : "Night " + std::to_string(r) + ": " + state_.name_of(victim) +
                    " was eliminated.";
    for (PlayerId p : state_.living()) memories_[static_cast<size_t>(p.seat)].observe(r, morning);

    maybe_end(r);
  }

  void play_debate() {
    if (state_.phase != Phase::Debate) throw InternalError("play_debate outside debate phase");
    const int r = state_.round;
    while (state_.debate_turns < state_.config.debate_cap) {
      const int t = state_.debate_turns;
      const auto living = state_.living();

      std::map<int, int> bids;
      for (PlayerId p : living) {
        AgentView view = make_view(p, ActionKind::Bid, {}, r, Phase::Debate, stage::bid,
                                   static_cast<uint64_t>(t), false);
        const int level = policies_[static_cast<size_t>(p.seat)]->bid(view);
        if (level < 0 || level > 4)
          throw ProtocolError(p.seat, "bid level " + std::to_string(level) + " out of range 0..4");
        bids[p.seat] = level;
      }

      std::set<int> mentioned;
      if (!last_utterance_.empty())
        for (PlayerId p : living)
          if (mentions(last_utterance_, state_.name_of(p))) mentioned.insert(p.seat);

      const int speaker_seat =
          arbitrate_turn(bids, mentioned, state_.config.mention_tiebreak_weight, state_.rng);
      const PlayerId speaker{speaker_seat};

      AgentView view = make_view(speaker, ActionKind::Speak, {}, r, Phase::Debate, stage::speak,
                                 static_cast<uint64_t>(t), false);
      std::string utterance = policies_[static_cast<size_t>(speaker.seat)]->speak(view);
      emit({r, Phase::Debate, Visibility::Public, {}, DebateTurn{speaker, utterance, bids}});
      transcript_.push_back(state_.name_of(speaker) + ": " + utterance);
      last_utterance_ = utterance;

      if (state_.config.synthetic_votes) {
        SyntheticTally tally;
        for (PlayerId p : state_.living()) {
          std::vector<PlayerId> pool;
          for (PlayerId q : state_.living())
            if (q != p) pool.push_back(q);
          const PlayerId pick = ask_target(p, ActionKind::Vote, pool, r, stage::synthetic_vote,
                                           static_cast<uint64_t>(t), true);
          tally.votes[p.seat] = pick.seat;
        }
        emit({r, Phase::Debate, Visibility::Private, {}, std::move(tally)});
      }
    }
  }

  void play_vote() {
    if (state_.phase != Phase::Debate || state_.debate_turns != state_.config.debate_cap)
      throw InternalError("play_vote before the debate completed");
    const int r = state_.round;
    const auto voters = state_.living();

    std::string vote_lines;
    for (PlayerId p : voters) {
      std::vector<PlayerId> pool;
      for (PlayerId q : voters)
        if (q != p) pool.push_back(q);
      const PlayerId target = ask_target(p, ActionKind::Vote, pool, r, stage::vote, 0, false);
      emit({r, Phase::Vote, Visibility::Public, {}, VoteCast{p, target}});
      if (!vote_lines.empty()) vote_lines += "; ";
      vote_lines += state_.name_of(p) + " voted for " + state_.name_of(target);
    }

    const auto majority = tally_votes(state_.votes, state_.living_count());
    std::string outcome;
    if (majority) {
      emit({r, Phase::Vote, Visibility::Public, {}, Exile{*majority}});
      outcome = "Round " + std::to_string(r) + ": " + state_.name_of(*majority) +
                " was exiled by majority vote.";
    } else {
      emit({r, Phase::Vote, Visibility::Public, {}, NoExile{}});
      outcome = "Round " + std::to_string(r) + ": no majority was reached; no one was exiled.";
    }

    for (PlayerId p : state_.living()) {
      auto& mem = memories_[static_cast<size_t>(p.seat)];
      mem.observe(r, "Round " + std::to_string(r) + " votes: " + vote_lines + ".");
      mem.observe(r, outcome);
    }

    maybe_end(r);
  }

  void play_summaries() {
    if (state_.phase != Phase::Vote || !state_.vote_done)
      throw InternalError("play_summaries before the vote resolved");
    const int r = state_.round;
    for (PlayerId p : state_.living()) {
      AgentView view =
          make_view(p, ActionKind::Summarize, {}, r, Phase::Vote, stage::summarize, 0, false);
      std::string text = policies_[static_cast<size_t>(p.seat)]->summarize(view);
      if (text.empty()) continue;
      emit({r, Phase::Vote, Visibility::Private, {p.seat}, RoundSummary{p, text}});
      memories_[static_cast<size_t>(p.seat)].reflect(r, text);
    }
    transcript_.clear();
    last_utterance_.clear();
  }

  // The complete per-decision context handed to a policy. Exposed for tests.
  AgentView make_view(PlayerId seat, ActionKind kind, const std::vector<PlayerId>& candidates,
                      int round, Phase phase, uint64_t stage_code, uint64_t substep,
                      bool synthetic) const {
    AgentView v;
    v.seat = seat.seat;
    v.name = state_.name_of(seat);
    v.role = state_.role_of(seat);
    v.round = round;
    v.phase = phase;
    for (PlayerId p : state_.living()) v.living.push_back(state_.name_of(p));
    v.transcript = transcript_;
    v.memory = memories_[static_cast<size_t>(seat.seat)].entries();
    v.rules = rules_;
    v.request.kind = kind;
    v.request.synthetic = synthetic;
    for (PlayerId c : candidates) v.request.candidates.push_back(state_.name_of(c));
    v.request.seed = derive_seed(state_.config.seed, {static_cast<uint64_t>(round), stage_code,
                                                      substep, static_cast<uint64_t>(seat.seat)});
    return v;
  }

 private:
  static constexpr int kMaxRounds = 1000;

  void emit(GameEvent event) { apply_event(state_, std::move(event)); }

  void maybe_end(int round) {
    if (auto w = check_win(state_))
      emit({round, state_.phase, Visibility::Public, {}, GameEnded{*w}});
  }

  std::optional<PlayerId> living_with_role(Role role) const {
    for (PlayerId p : state_.living())
      if (state_.role_of(p) == role) return p;
    return std::nullopt;
  }

  PlayerId ask_target(PlayerId seat, ActionKind kind, const std::vector<PlayerId>& candidates,
                      int round, uint64_t stage_code, uint64_t substep, bool synthetic = false) {
    const Phase phase = (stage_code == stage::vote || stage_code == stage::synthetic_vote)
                            ? (synthetic ? Phase::Debate : Phase::Vote)
                            : Phase::Night;
    AgentView view = make_view(seat, kind, candidates, round, phase, stage_code, substep, synthetic);
    const std::string name =
        kind == ActionKind::Vote ? policies_[static_cast<size_t>(seat.seat)]->vote(view)
                                 : policies_[static_cast<size_t>(seat.seat)]->night_action(view);
    for (PlayerId c : candidates)
      if (state_.name_of(c) == name) return c;
    throw ProtocolError(seat.seat, std::string(to_string(kind)) + ": '" + name +
                                       "' is not a legal target");
  }

  // Werewolves learn their packmates before the first night.
  void seed_wolf_knowledge() {
    std::vector<PlayerId> wolves;
    for (const auto& p : state_.players)
      if (p.role == Role::Werewolf) wolves.push_back(PlayerId{p.seat});
    for (PlayerId w : wolves) {
      std::vector<std::string> others;
      for (PlayerId v : wolves)
        if (v != w) others.push_back(state_.name_of(v));
      std::string text;
      if (others.empty()) {
        text = "You are the only Werewolf.";
      } else if (others.size() == 1) {
        text = "Your fellow Werewolf is " + others.front() + ".";
      } else {
        text = "Your fellow Werewolves are ";
        for (size_t i = 0; i < others.size(); ++i) {
          if (i > 0) text += i + 1 == others.size() ? " and " : ", ";
          text += others[i];
        }
        text += ".";
      }
      memories_[static_cast<size_t>(w.seat)].observe(0, text);
    }
  }

  GameState state_;
  std::vector<PolicyPtr> policies_;
  std::map<std::string, std::string> labels_;
  std::vector<MemoryStream> memories_;
  std::vector<std::string> transcript_;
  std::string last_utterance_;
  std::string rules_;
};

}  // namespace werewolf
