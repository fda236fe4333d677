#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "werewolf/log.hpp"

namespace werewolf {

// One public role-reveal extracted from a debate utterance: the speaker
// either claims a role for themself ("I am the Seer") or asserts another
// player's role ("X is a Werewolf"). Outcome records what the same round's
// vote then did.
struct RevealEvent {
  enum class Outcome { ExiledTarget, ExiledRevealer, Neither };

  int game_index = 0;
  int round = 0;
  int revealer = -1;  // seat
  Role revealer_true_role = Role::Villager;
  int target = -1;  // seat; equals revealer for self-claims
  Role target_true_role = Role::Villager;
  Role claimed_role = Role::Villager;
  Outcome outcome = Outcome::Neither;
};

// A detector inspects one utterance and lists the role claims it makes.
// `subject` must be a display name from `names` (or the speaker).
struct RevealClaim {
  std::string subject;
  Role claimed = Role::Villager;
};

class RevealDetector {
 public:
  virtual ~RevealDetector() = default;
  virtual std::vector<RevealClaim> classify(const std::string& speaker,
                                            const std::string& utterance,
                                            const std::vector<std::string>& names) = 0;
};

// Reads the explicit markers scripted agents embed in their utterances:
//   [[claim seer]]            — the speaker claims the role for themself
//   [[reveal Name=werewolf]]  — the speaker asserts Name's role
// No natural-language guessing: exact markers only.
class StructuredRevealDetector : public RevealDetector {
 public:
  std::vector<RevealClaim> classify(const std::string& speaker, const std::string& utterance,
                                    const std::vector<std::string>& names) override {
    std::vector<RevealClaim> out;
    size_t pos = 0;
    while ((pos = utterance.find("[[claim ", pos)) != std::string::npos) {
      const size_t end = utterance.find("]]", pos);
      if (end == std::string::npos) break;
      if (auto role = parse(utterance.substr(pos + 8, end - pos - 8)))
        out.push_back({speaker, *role});
      pos = end + 2;
    }
    pos = 0;
    while ((pos = utterance.find("[[reveal ", pos)) != std::string::npos) {
      const size_t end = utterance.find("]]", pos);
      if (end == std::string::npos) break;
      const std::string body = utterance.substr(pos + 9, end - pos - 9);
      const size_t eq = body.find('=');
      if (eq != std::string::npos) {
        const std::string who = body.substr(0, eq);
        const bool known =
            who == speaker || std::find(names.begin(), names.end(), who) != names.end();
        if (known)
          if (auto role = parse(body.substr(eq + 1))) out.push_back({who, *role});
      }
      pos = end + 2;
    }
    return out;
  }

 private:
  static std::optional<Role> parse(const std::string& s) {
    if (s == "villager") return Role::Villager;
    if (s == "werewolf") return Role::Werewolf;
    if (s == "seer") return Role::Seer;
    if (s == "doctor") return Role::Doctor;
    return std::nullopt;
  }
};

// Chat-model-backed detector for free-form transcripts. `ask` runs one
// completion (the caller pins temperature 0); replies are cached by content
// hash so re-analyzing a log never re-queries and always agrees with itself.
//
// Expected reply: a JSON array like
//   [{"subject": "Mona", "role": "werewolf"}]
// (empty array when the utterance reveals nothing).
class ClassifierRevealDetector : public RevealDetector {
 public:
  using AskFn = std::function<std::string(const std::string& prompt)>;

  explicit ClassifierRevealDetector(AskFn ask) : ask_(std::move(ask)) {}

  std::vector<RevealClaim> classify(const std::string& speaker, const std::string& utterance,
                                    const std::vector<std::string>& names) override {
    const uint64_t key = hash(speaker + '\n' + utterance);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    const std::string reply = ask_(build_prompt(speaker, utterance, names));
    std::vector<RevealClaim> out;
    const auto arr = json::parse(reply, nullptr, false);
    if (arr.is_array()) {
      for (const auto& item : arr) {
        if (!item.is_object() || !item.contains("subject") || !item.contains("role")) continue;
        const auto subject = item["subject"].get<std::string>();
        const auto role = item["role"].get<std::string>();
        const bool known = subject == speaker ||
                           std::find(names.begin(), names.end(), subject) != names.end();
        if (!known) continue;
        if (role == "villager") out.push_back({subject, Role::Villager});
        else if (role == "werewolf") out.push_back({subject, Role::Werewolf});
        else if (role == "seer") out.push_back({subject, Role::Seer});
        else if (role == "doctor") out.push_back({subject, Role::Doctor});
      }
    }
    cache_.emplace(key, out);
    return out;
  }

  size_t cache_size() const { return cache_.size(); }

  static std::string build_prompt(const std::string& speaker, const std::string& utterance,
                                  const std::vector<std::string>& names) {
    std::string list;
    for (const auto& n : names) {
      if (!list.empty()) list += ", ";
      list += n;
    }
    return "You label role reveals in a Werewolf game transcript.\n"
           "Players: " + list + "\n" +
           "Statement by " + speaker + ": \"" + utterance + "\"\n" +
           "List every explicit role claim the statement makes about the speaker or another "
           "player. Respond with only a JSON array of {\"subject\": name, \"role\": one of "
           "villager|werewolf|seer|doctor}. Use [] if the statement reveals no role.";
  }

 private:
  static uint64_t hash(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

  AskFn ask_;
  std::map<uint64_t, std::vector<RevealClaim>> cache_;
};

// Walks one game log, runs the detector over every debate utterance, and
// tags each claim with the same round's vote outcome. Duplicate claims about
// the same (revealer, target) within a round collapse to the first. Detector
// failures on individual utterances are recorded in `warnings` and skipped;
// they never corrupt the remaining counts.
inline std::vector<RevealEvent> detect_reveals(const GameLog& log, int game_index,
                                               RevealDetector& detector,
                                               std::vector<std::string>* warnings = nullptr) {
  if (log.events.empty() || !std::holds_alternative<GameStarted>(log.events.front().payload))
    throw ReplayError("detect_reveals: log does not begin with game_started");
  const auto& roster = std::get<GameStarted>(log.events.front().payload).players;

  std::map<std::string, int> seat_of;
  std::vector<Role> role_of(roster.size());
  std::vector<bool> alive(roster.size(), true);
  for (const auto& p : roster) {
    seat_of[p.name] = p.seat;
    role_of[static_cast<size_t>(p.seat)] = p.role;
  }

  struct Raw {
    int round, revealer, target;
    Role claimed;
  };
  std::vector<Raw> raws;
  std::map<int, int> exiled_in_round;

  for (const auto& e : log.events) {
    if (const auto* dt = std::get_if<DebateTurn>(&e.payload)) {
      std::vector<std::string> names;
      for (const auto& p : roster)
        if (alive[static_cast<size_t>(p.seat)]) names.push_back(p.name);
      const std::string& speaker = roster[static_cast<size_t>(dt->speaker.seat)].name;
      std::vector<RevealClaim> claims;
      try {
        claims = detector.classify(speaker, dt->utterance, names);
      } catch (const std::exception& ex) {
        if (warnings)
          warnings->push_back("round " + std::to_string(e.round) + ", speaker " + speaker +
                              ": " + ex.what());
        continue;
      }
      for (const auto& c : claims) {
        const auto it = seat_of.find(c.subject);
        if (it == seat_of.end()) continue;
        raws.push_back({e.round, dt->speaker.seat, it->second, c.claimed});
      }
    } else if (const auto* ne = std::get_if<NightElimination>(&e.payload)) {
      if (!ne->saved) alive[static_cast<size_t>(ne->victim.seat)] = false;
    } else if (const auto* ex = std::get_if<Exile>(&e.payload)) {
      alive[static_cast<size_t>(ex->target.seat)] = false;
      exiled_in_round[e.round] = ex->target.seat;
    }
  }

  std::vector<RevealEvent> out;
  std::set<std::tuple<int, int, int>> seen;  // (revealer, target, round)
  for (const auto& r : raws) {
    if (!seen.insert({r.revealer, r.target, r.round}).second) continue;
    RevealEvent ev;
    ev.game_index = game_index;
    ev.round = r.round;
    ev.revealer = r.revealer;
    ev.revealer_true_role = role_of[static_cast<size_t>(r.revealer)];
    ev.target = r.target;
    ev.target_true_role = role_of[static_cast<size_t>(r.target)];
    ev.claimed_role = r.claimed;
    const auto it = exiled_in_round.find(r.round);
    if (it == exiled_in_round.end())
      ev.outcome = RevealEvent::Outcome::Neither;
    else if (it->second == r.target)
      ev.outcome = RevealEvent::Outcome::ExiledTarget;
    else if (it->second == r.revealer)
      ev.outcome = RevealEvent::Outcome::ExiledRevealer;
    else
      ev.outcome = RevealEvent::Outcome::Neither;
    out.push_back(ev);
  }
  return out;
}

}  // namespace werewolf
