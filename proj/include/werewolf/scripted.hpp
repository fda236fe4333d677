#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "werewolf/mentions.hpp"
#include "werewolf/policy.hpp"
#include "werewolf/rng.hpp"
#include "werewolf/view.hpp"

namespace werewolf {

namespace detail {

inline std::string pick_uniform(const std::vector<std::string>& candidates, uint64_t seed) {
  Rng rng(seed);
  return candidates[rng.below(candidates.size())];
}

// Splits a transcript line "Name: utterance" produced by the game master.
inline std::pair<std::string, std::string> split_line(const std::string& line) {
  const auto pos = line.find(": ");
  if (pos == std::string::npos) return {"", line};
  return {line.substr(0, pos), line.substr(pos + 2)};
}

inline bool contains_ci(const std::string& hay, const std::string& needle) {
  return lower_copy(hay).find(lower_copy(needle)) != std::string::npos;
}

}  // namespace detail

// Uniform-at-random baseline. Every choice is a pure function of the
// decision seed, so identical views produce identical actions.
class RandomPolicy : public Policy {
 public:
  int bid(const AgentView& view) override {
    Rng rng(view.request.seed);
    return static_cast<int>(rng.below(5));
  }

  std::string speak(const AgentView& view) override {
    static const std::vector<std::string> plain = {
        "I have nothing to add yet.",
        "Something about last night bothers me.",
        "Let us not rush to judgement.",
        "I am just trying to survive.",
        "The votes last round told us something.",
    };
    static const std::vector<std::string> pointed = {
        "I suspect %s is a werewolf.",
        "I think we should hear from %s.",
        "%s has been very quiet.",
    };
    Rng rng(view.request.seed);
    std::vector<std::string> others;
    for (const auto& n : view.living)
      if (n != view.name) others.push_back(n);
    if (others.empty() || rng.below(2) == 0) return plain[rng.below(plain.size())];
    const std::string& tmpl = pointed[rng.below(pointed.size())];
    const std::string& who = others[rng.below(others.size())];
    std::string out = tmpl;
    out.replace(out.find("%s"), 2, who);
    return out;
  }

  std::string vote(const AgentView& view) override {
    return detail::pick_uniform(view.request.candidates, view.request.seed);
  }

  std::string night_action(const AgentView& view) override {
    return detail::pick_uniform(view.request.candidates, view.request.seed);
  }

  std::string summarize(const AgentView&) override { return ""; }
};

// Rule-based policy exercising every channel the engine offers: the seer
// hunts and reveals, werewolves deflect and silence claimants, the doctor
// guards claimants, villagers follow accusations. Stateless: everything is
// recovered from the view (memory text + transcript), so replays and
// identical views always agree.
class HeuristicPolicy : public Policy {
 public:
  int bid(const AgentView& view) override {
    if (view.role == Role::Seer && !known_living_wolves(view).empty()) return 4;
    if (view.role == Role::Werewolf)
      return pack_mentioned_last_turn(view) ? 4 : 0;
    return mentioned_last_turn(view, view.name) ? 2 : 1;
  }

  std::string speak(const AgentView& view) override {
    if (view.role == Role::Seer) {
      const auto wolves = known_living_wolves(view);
      if (!wolves.empty()) {
        const std::string& w = wolves.front();
        return "I am the Seer. I investigated " + w + ": " + w +
               " is a Werewolf. [[claim seer]] [[reveal " + w + "=werewolf]]";
      }
    }
    if (view.role == Role::Werewolf) {
      if (auto accuser = pack_accuser(view))
        return "I do not trust " + *accuser + ". I suspect " + *accuser +
               " is the real werewolf.";
      return "I think we are chasing shadows. Let us look at who is steering the vote.";
    }
    if (mentioned_last_turn(view, view.name)) {
      const auto [speaker, _] = detail::split_line(view.transcript.back());
      if (!speaker.empty() && speaker != view.name)
        return "I am not a werewolf. I suspect " + speaker + " is deflecting.";
    }
    if (auto target = most_accused(view, {view.name}))
      return "I suspect " + *target + " is a werewolf.";
    return "I am not sure yet. Let us compare notes.";
  }

  std::string vote(const AgentView& view) override {
    const auto& cands = view.request.candidates;
    if (view.role == Role::Seer) {
      for (const auto& w : known_living_wolves(view))
        if (is_candidate(view, w)) return w;
    }
    if (view.role == Role::Werewolf) {
      const auto pack = pack_names(view);
      if (auto accuser = pack_accuser(view))
        if (is_candidate(view, *accuser) && !contains(pack, *accuser)) return *accuser;
      std::vector<std::string> skip = pack;
      skip.push_back(view.name);
      if (auto target = most_accused(view, skip))
        if (is_candidate(view, *target)) return *target;
      std::vector<std::string> legal;
      for (const auto& c : cands)
        if (!contains(pack, c)) legal.push_back(c);
      if (!legal.empty()) return detail::pick_uniform(legal, view.request.seed);
      return detail::pick_uniform(cands, view.request.seed);
    }
    if (auto target = most_accused(view, {view.name}))
      if (is_candidate(view, *target)) return *target;
    return detail::pick_uniform(cands, view.request.seed);
  }

  std::string night_action(const AgentView& view) override {
    const auto& cands = view.request.candidates;
    if (view.role == Role::Werewolf) {
      if (auto claimant = seer_claimant(view))
        if (is_candidate(view, *claimant)) return *claimant;
      return detail::pick_uniform(cands, view.request.seed);
    }
    if (view.role == Role::Doctor) {
      if (auto claimant = seer_claimant(view))
        if (is_candidate(view, *claimant)) return *claimant;
      return view.name;  // self-protect by default; self is always legal
    }
    if (view.role == Role::Seer) {
      std::vector<std::string> order = cands;
      Rng rng(view.request.seed);
      rng.shuffle(order);
      for (const auto& c : order)
        if (!investigated(view, c)) return c;
      return order.front();
    }
    return detail::pick_uniform(cands, view.request.seed);
  }

  // Records who claimed seer and who got publicly accused via a reveal, so
  // later rounds (werewolf kills, doctor protection) can act on it.
  std::string summarize(const AgentView& view) override {
    std::string out;
    for (const auto& line : view.transcript) {
      const auto [speaker, utterance] = detail::split_line(line);
      if (speaker.empty()) continue;
      if (utterance.find("[[claim seer]]") != std::string::npos)
        append(out, speaker + " claims to be the Seer.");
      for (const auto& name : view.living) {
        if (utterance.find("[[reveal " + name + "=werewolf]]") != std::string::npos)
          append(out, speaker + " accused " + name + " of being a werewolf.");
      }
    }
    return out;
  }

 private:
  static void append(std::string& out, const std::string& note) {
    if (!out.empty()) out += ' ';
    out += note;
  }

  static bool contains(const std::vector<std::string>& v, const std::string& s) {
    for (const auto& x : v)
      if (x == s) return true;
    return false;
  }

  static bool is_candidate(const AgentView& view, const std::string& name) {
    return contains(view.request.candidates, name);
  }

  static bool living(const AgentView& view, const std::string& name) {
    return contains(view.living, name);
  }

  // Names this seer has confirmed as werewolves and who are still alive.
  static std::vector<std::string> known_living_wolves(const AgentView& view) {
    std::vector<std::string> out;
    for (const auto& name : view.living) {
      for (const auto& e : view.memory) {
        if (e.kind != MemoryEntry::Kind::Observation) continue;
        if (e.text.find("You investigated " + name + ":") != std::string::npos &&
            e.text.find(name + " is a Werewolf.") != std::string::npos) {
          out.push_back(name);
          break;
        }
      }
    }
    return out;
  }

  static bool investigated(const AgentView& view, const std::string& name) {
    for (const auto& e : view.memory)
      if (e.kind == MemoryEntry::Kind::Observation &&
          e.text.find("You investigated " + name + ":") != std::string::npos)
        return true;
    return false;
  }

  // The werewolf pack, self included, recovered from the start-of-game brief.
  std::vector<std::string> pack_names(const AgentView& view) {
    std::vector<std::string> pack = {view.name};
    for (const auto& e : view.memory) {
      if (e.text.find("fellow Werewol") == std::string::npos) continue;
      for (const auto& p : view.living)
        if (p != view.name && mentions(e.text, p)) pack.push_back(p);
    }
    return pack;
  }

  bool pack_mentioned_last_turn(const AgentView& view) {
    if (view.transcript.empty()) return false;
    const auto [speaker, utterance] = detail::split_line(view.transcript.back());
    for (const auto& p : pack_names(view))
      if (speaker != p && mentions(utterance, p)) return true;
    return false;
  }

  static bool mentioned_last_turn(const AgentView& view, const std::string& name) {
    if (view.transcript.empty()) return false;
    const auto [speaker, utterance] = detail::split_line(view.transcript.back());
    return speaker != name && mentions(utterance, name);
  }

  // Most recent speaker who pointed at a pack member, if still living.
  std::optional<std::string> pack_accuser(const AgentView& view) {
    const auto pack = pack_names(view);
    for (auto it = view.transcript.rbegin(); it != view.transcript.rend(); ++it) {
      const auto [speaker, utterance] = detail::split_line(*it);
      if (speaker.empty() || contains(pack, speaker)) continue;
      for (const auto& p : pack)
        if (mentions(utterance, p) && living(view, speaker)) return speaker;
    }
    return std::nullopt;
  }

  // Latest seer claimant on record (own reflections mention claims across
  // rounds; the live transcript covers the current round).
  std::optional<std::string> seer_claimant(const AgentView& view) {
    std::optional<std::string> found;
    auto scan = [&](const std::string& text, const std::string& claim_mark) {
      for (const auto& name : view.living)
        if (text.find(name + claim_mark) != std::string::npos) found = name;
    };
    for (const auto& e : view.memory) scan(e.text, " claims to be the Seer.");
    for (const auto& line : view.transcript) {
      const auto [speaker, utterance] = detail::split_line(line);
      if (!speaker.empty() && utterance.find("[[claim seer]]") != std::string::npos &&
          living(view, speaker))
        found = speaker;
    }
    if (found && !living(view, *found)) return std::nullopt;
    return found;
  }

  // Accusation = an utterance containing a suspicion keyword that names a
  // living player other than the speaker. Ties break toward the earlier
  // seat (order of view.living).
  std::optional<std::string> most_accused(const AgentView& view,
                                          const std::vector<std::string>& skip) {
    static const std::vector<std::string> keywords = {"suspect", "werewolf", "accuse"};
    std::map<std::string, int> counts;
    for (const auto& line : view.transcript) {
      const auto [speaker, utterance] = detail::split_line(line);
      bool keyed = false;
      for (const auto& k : keywords)
        if (detail::contains_ci(utterance, k)) keyed = true;
      if (!keyed) continue;
      for (const auto& name : view.living)
        if (name != speaker && mentions(utterance, name)) counts[name]++;
    }
    std::optional<std::string> best;
    int best_count = 0;
    for (const auto& name : view.living) {
      if (contains(skip, name)) continue;
      const auto it = counts.find(name);
      if (it != counts.end() && it->second > best_count) {
        best = name;
        best_count = it->second;
      }
    }
    return best;
  }
};

}  // namespace werewolf
