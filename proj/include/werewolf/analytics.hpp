#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "werewolf/error.hpp"
#include "werewolf/log.hpp"
#include "werewolf/mentions.hpp"
#include "werewolf/reveals.hpp"

namespace werewolf {

// One straw-poll snapshot: vote counts per target after debate turn i of
// round r.
struct VoteTally {
  int round = 0;
  int debate_index = 0;
  std::map<int, int> counts;  // target seat -> votes received

  int total() const {
    int t = 0;
    for (const auto& [seat, c] : counts) t += c;
    return t;
  }
};

// Shannon entropy of the tally in bits: H = -sum p_i log2 p_i over targets
// that received at least one vote (0 log 0 taken as 0). High H means the
// room is split; 0 means everyone points at the same player.
inline double entropy(const VoteTally& tally) {
  const int total = tally.total();
  if (total < 1) throw std::domain_error("entropy: empty tally");
  double h = 0.0;
  for (const auto& [seat, count] : tally.counts) {
    if (count < 0) throw std::domain_error("entropy: negative count");
    if (count == 0) continue;
    const double p = static_cast<double>(count) / total;
    h -= p * std::log2(p);
  }
  // Rounding can leave a tiny negative residue at certainty; clamp it.
  return h < 0.0 ? 0.0 : h;
}

struct EntropyCell {
  int round = 0;
  int debate_index = 0;
  double h_mean = 0.0;
  int games = 0;  // games contributing at this (round, index)
};

struct EntropySeries {
  std::vector<EntropyCell> entries;  // sorted by (round, debate_index)
};

namespace detail {

// Extracts the straw-poll tallies of one game, tagged with (round, index of
// the preceding debate turn within that round).
inline std::vector<VoteTally> synthetic_tallies(const GameLog& log) {
  std::vector<VoteTally> out;
  std::map<int, int> turns_in_round;
  for (const auto& e : log.events) {
    if (std::holds_alternative<DebateTurn>(e.payload)) {
      turns_in_round[e.round] += 1;
    } else if (const auto* st = std::get_if<SyntheticTally>(&e.payload)) {
      VoteTally t;
      t.round = e.round;
      t.debate_index = turns_in_round[e.round] - 1;
      for (const auto& [voter, target] : st->votes) t.counts[target] += 1;
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace detail

// Average entropy per (round, debate index) over all games whose debate
// reaches that round. A game that ends before round r's debate contributes
// nothing to round r's cells.
inline EntropySeries average_entropy(const std::vector<GameLog>& logs) {
  std::map<std::pair<int, int>, std::pair<double, int>> acc;  // (r,i) -> (sum, n)
  for (const auto& log : logs) {
    for (const auto& t : detail::synthetic_tallies(log)) {
      auto& cell = acc[{t.round, t.debate_index}];
      cell.first += entropy(t);
      cell.second += 1;
    }
  }
  EntropySeries series;
  for (const auto& [key, cell] : acc)
    series.entries.push_back({key.first, key.second, cell.first / cell.second, cell.second});
  return series;
}

// First debate index at which some target holds a strict majority of the
// straw poll, if the round ever gets there. Input: one round's tallies in
// debate order.
inline std::optional<int> consensus_index(const std::vector<VoteTally>& tallies) {
  for (const auto& t : tallies) {
    const int total = t.total();
    for (const auto& [seat, count] : t.counts)
      if (2 * count > total) return t.debate_index;
  }
  return std::nullopt;
}

// Histogram row: at debate turn `turn` (index within its round), bid level
// `level` was placed `count` times. `mentioned` restricts to bidders whose
// name appeared in the immediately preceding utterance of the same round.
struct BidCell {
  int turn = 0;
  int level = 0;
  long count = 0;
  bool mentioned = false;
};

inline std::vector<BidCell> bid_distribution(const std::vector<GameLog>& logs) {
  // key: (turn, level, mentioned_flag)
  std::map<std::tuple<int, int, bool>, long> acc;
  for (const auto& log : logs) {
    if (log.events.empty() || !std::holds_alternative<GameStarted>(log.events.front().payload))
      throw ReplayError("bid_distribution: log does not begin with game_started");
    const auto& roster = std::get<GameStarted>(log.events.front().payload).players;

    int current_round = -1;
    int turn_in_round = 0;
    std::string prev_utterance;
    for (const auto& e : log.events) {
      const auto* dt = std::get_if<DebateTurn>(&e.payload);
      if (!dt) continue;
      if (e.round != current_round) {
        current_round = e.round;
        turn_in_round = 0;
        prev_utterance.clear();
      }
      for (const auto& [seat, level] : dt->bids) {
        acc[{turn_in_round, level, false}] += 1;
        if (!prev_utterance.empty() &&
            mentions(prev_utterance, roster[static_cast<size_t>(seat)].name))
          acc[{turn_in_round, level, true}] += 1;
      }
      prev_utterance = dt->utterance;
      turn_in_round += 1;
    }
  }
  std::vector<BidCell> out;
  for (const auto& [key, count] : acc)
    out.push_back({std::get<0>(key), std::get<1>(key), count, std::get<2>(key)});
  return out;
}

// The five Table-style seer statistics. Only reveals made by the true seer
// count. "Wolf-reveals" are claims that correctly named a living werewolf;
// believed/backfired are fractions of those (same-round exile of the target
// or of the revealer, respectively).
struct SeerRevealMetrics {
  int games = 0;
  int reveals = 0;       // unique seer reveals, all kinds
  int wolf_reveals = 0;  // correct werewolf identifications
  int believed = 0;
  int backfired = 0;
  double reveals_per_game = 0.0;
  double first_reveal_round = 0.0;  // mean over games with >= 1 reveal; 0 if none
  double unmasked_wolf_pct = 0.0;
  double believed_pct = 0.0;
  double backfired_pct = 0.0;
};

inline SeerRevealMetrics seer_metrics(const std::vector<RevealEvent>& events, int total_games) {
  if (total_games < 0) throw std::domain_error("seer_metrics: negative game count");
  SeerRevealMetrics m;
  m.games = total_games;

  std::set<std::tuple<int, int, int, int>> seen;  // (game, revealer, target, round)
  std::map<int, int> first_round;                 // game -> earliest reveal round
  for (const auto& e : events) {
    if (e.revealer_true_role != Role::Seer) continue;
    if (!seen.insert({e.game_index, e.revealer, e.target, e.round}).second) continue;
    m.reveals += 1;
    auto it = first_round.find(e.game_index);
    if (it == first_round.end() || e.round < it->second) first_round[e.game_index] = e.round;
    if (e.claimed_role == Role::Werewolf && e.target_true_role == Role::Werewolf) {
      m.wolf_reveals += 1;
      if (e.outcome == RevealEvent::Outcome::ExiledTarget) m.believed += 1;
      if (e.outcome == RevealEvent::Outcome::ExiledRevealer) m.backfired += 1;
    }
  }

  if (total_games > 0) m.reveals_per_game = static_cast<double>(m.reveals) / total_games;
  if (!first_round.empty()) {
    double sum = 0.0;
    for (const auto& [game, round] : first_round) sum += round;
    m.first_reveal_round = sum / static_cast<double>(first_round.size());
  }
  if (m.reveals > 0) m.unmasked_wolf_pct = 100.0 * m.wolf_reveals / m.reveals;
  if (m.wolf_reveals > 0) {
    m.believed_pct = 100.0 * m.believed / m.wolf_reveals;
    m.backfired_pct = 100.0 * m.backfired / m.wolf_reveals;
  }
  return m;
}

// Win counts per ordered (villager_model, werewolf_model) pairing, read
// from log labels; the self-play diagonal appears like any other cell.
struct WinCell {
  int games = 0;
  int villager_wins = 0;
  double ratio() const { return games ? static_cast<double>(villager_wins) / games : 0.0; }
};

struct WinMatrix {
  std::map<std::pair<std::string, std::string>, WinCell> cells;
};

inline WinMatrix win_matrix(const std::vector<GameLog>& logs) {
  WinMatrix m;
  for (const auto& log : logs) {
    const Winner* winner = nullptr;
    for (const auto& e : log.events)
      if (const auto* ge = std::get_if<GameEnded>(&e.payload)) winner = &ge->winner;
    if (!winner) continue;  // unfinished log carries no result
    const auto vm = log.labels.count("villager_model") ? log.labels.at("villager_model")
                                                       : std::string("unlabeled");
    const auto wm = log.labels.count("werewolf_model") ? log.labels.at("werewolf_model")
                                                       : std::string("unlabeled");
    auto& cell = m.cells[{vm, wm}];
    cell.games += 1;
    if (*winner == Winner::Villagers) cell.villager_wins += 1;
  }
  return m;
}

// ---------------------------------------------------------------------------
// CSV writers. Column orders are part of the tool contract; see README.

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  bool needs = false;
  for (char c : s)
    if (c == ',' || c == '"' || c == '\n') needs = true;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace detail

inline void write_entropy_csv(const EntropySeries& series, std::ostream& out) {
  out << "round,debate_index,h_mean,n_games\n";
  for (const auto& c : series.entries)
    out << c.round << ',' << c.debate_index << ',' << detail::fmt_double(c.h_mean) << ','
        << c.games << '\n';
}

inline void write_bids_csv(const std::vector<BidCell>& cells, std::ostream& out) {
  out << "turn,level,count,mentioned_flag\n";
  for (const auto& c : cells)
    out << c.turn << ',' << c.level << ',' << c.count << ',' << (c.mentioned ? 1 : 0) << '\n';
}

inline void write_seer_csv(const std::map<std::string, SeerRevealMetrics>& by_model,
                           std::ostream& out) {
  out << "model,reveals_per_game,first_reveal_round,unmasked_wolf_pct,believed_pct,"
         "backfired_pct\n";
  for (const auto& [model, m] : by_model)
    out << detail::csv_quote(model) << ',' << detail::fmt_double(m.reveals_per_game) << ','
        << detail::fmt_double(m.first_reveal_round) << ','
        << detail::fmt_double(m.unmasked_wolf_pct) << ',' << detail::fmt_double(m.believed_pct)
        << ',' << detail::fmt_double(m.backfired_pct) << '\n';
}

inline void write_win_matrix_csv(const WinMatrix& m, std::ostream& out) {
  out << "villager_model,werewolf_model,games,villager_wins,ratio\n";
  for (const auto& [key, cell] : m.cells)
    out << detail::csv_quote(key.first) << ',' << detail::csv_quote(key.second) << ','
        << cell.games << ',' << cell.villager_wins << ',' << detail::fmt_double(cell.ratio())
        << '\n';
}

}  // namespace werewolf
