#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "negkw/account.hpp"

namespace negkw {

/// A negative set compiled for fast membership tests. Reports the smallest
/// matching negative in canonical order, so the result is deterministic.
class NegativeFilter {
 public:
  NegativeFilter() = default;
  explicit NegativeFilter(const NegativeSet& negatives) {
    for (const auto& n : negatives) {
      switch (n.match_type) {
        case MatchType::Exact: exact_.insert(n.keyword.str()); break;
        case MatchType::Phrase: phrase_.insert(n.keyword.str()); break;
        case MatchType::Large: {
          large_.push_back(word_set(n.keyword));
          large_index_[large_.back().front()].push_back(large_.size() - 1);
          break;
        }
      }
    }
  }

  std::optional<NegativeKeyword> first_match(const Keyword& q, const WordSet& q_words) const {
    const auto& t = q.tokens();
    if (!exact_.empty()) {
      if (exact_.count(q.str())) return exact_neg(q);
    }
    if (!phrase_.empty()) {
      std::optional<Keyword> best;
      for (std::size_t i = 0; i < t.size(); ++i) {
        std::string run;
        for (std::size_t j = i; j < t.size(); ++j) {
          if (j > i) run += ' ';
          run += t[j];
          if (phrase_.count(run)) {
            Keyword k(std::vector<std::string>(t.begin() + static_cast<std::ptrdiff_t>(i),
                                               t.begin() + static_cast<std::ptrdiff_t>(j) + 1));
            if (!best || k < *best) best = std::move(k);
          }
        }
      }
      if (best) return phrase_neg(*best);
    }
    if (!large_.empty()) {
      const WordSet* best = nullptr;
      for (const auto& w : q_words) {
        auto it = large_index_.find(w);
        if (it == large_index_.end()) continue;
        for (auto idx : it->second) {
          const auto& ws = large_[idx];
          if (is_subset(ws, q_words) && (!best || ws < *best)) best = &ws;
        }
      }
      if (best) return large_neg(Keyword(*best));
    }
    return std::nullopt;
  }

  bool matches(const Keyword& q, const WordSet& q_words) const {
    return first_match(q, q_words).has_value();
  }

 private:
  std::unordered_set<std::string> exact_;
  std::unordered_set<std::string> phrase_;
  std::vector<WordSet> large_;
  std::unordered_map<std::string, std::vector<std::size_t>> large_index_;
};

struct TrajectoryStep {
  std::string campaign;
  std::optional<NegativeKeyword> blocked_by;  // empty: the query entered
  std::vector<std::string> open_adgroups;
  bool entered() const noexcept { return !blocked_by.has_value(); }
  friend bool operator==(const TrajectoryStep&, const TrajectoryStep&) = default;
};

enum class Disposition { Landed, DeadEnd, FellThrough, Ambiguous };

inline const char* to_string(Disposition d) {
  switch (d) {
    case Disposition::Landed: return "landed";
    case Disposition::DeadEnd: return "dead-end";
    case Disposition::FellThrough: return "fell-through";
    case Disposition::Ambiguous: return "ambiguous";
  }
  return "?";
}

struct Trajectory {
  Keyword query;
  std::vector<TrajectoryStep> steps;
  Disposition disposition = Disposition::FellThrough;
  std::string campaign;  // Landed / DeadEnd
  std::string adgroup;   // Landed
  std::string details;   // Ambiguous

  bool landed_in(const std::string& c, const std::string& a) const {
    return disposition == Disposition::Landed && campaign == c && adgroup == a;
  }
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Replays the priority cascade against an account compiled once up front.
/// The account must outlive the simulator.
class Simulator {
 public:
  explicit Simulator(const Account& account) : account_(&account) {
    for (const auto& c : account.campaigns) {
      order_.push_back(&c);
      CompiledCampaign cc;
      cc.filter = NegativeFilter(c.negatives);
      for (const auto& a : c.adgroups) cc.adgroups.emplace_back(a.negatives);
      compiled_.emplace(c.name, std::move(cc));
    }
    std::stable_sort(order_.begin(), order_.end(),
                     [](const Campaign* a, const Campaign* b) { return a->priority > b->priority; });
  }

  Trajectory simulate(const Keyword& q) const {
    Trajectory tr{q, {}, Disposition::FellThrough, {}, {}, {}};
    const WordSet q_words = word_set(q);
    std::size_t i = 0;
    while (i < order_.size()) {
      const Priority tier = order_[i]->priority;
      std::vector<std::size_t> admitted;  // indices into tr.steps
      for (; i < order_.size() && order_[i]->priority == tier; ++i) {
        const Campaign& c = *order_[i];
        const auto& cc = compiled_.at(c.name);
        TrajectoryStep step{c.name, cc.filter.first_match(q, q_words), {}};
        if (step.entered()) {
          for (std::size_t a = 0; a < c.adgroups.size(); ++a) {
            if (!cc.adgroups[a].matches(q, q_words)) step.open_adgroups.push_back(c.adgroups[a].name);
          }
          admitted.push_back(tr.steps.size());
        }
        tr.steps.push_back(std::move(step));
      }
      if (admitted.empty()) continue;
      if (admitted.size() > 1) {
        tr.disposition = Disposition::Ambiguous;
        tr.details = "admitted by";
        for (auto s : admitted) tr.details += " " + tr.steps[s].campaign;
        return tr;
      }
      const auto& step = tr.steps[admitted.front()];
      tr.campaign = step.campaign;
      if (step.open_adgroups.size() == 1) {
        tr.disposition = Disposition::Landed;
        tr.adgroup = step.open_adgroups.front();
      } else if (step.open_adgroups.empty()) {
        tr.disposition = Disposition::DeadEnd;
      } else {
        tr.disposition = Disposition::Ambiguous;
        tr.details = "open adgroups in " + step.campaign + ":";
        for (const auto& a : step.open_adgroups) tr.details += " [" + a + "]";
      }
      return tr;
    }
    return tr;
  }

  const Account& account() const noexcept { return *account_; }

 private:
  struct CompiledCampaign {
    NegativeFilter filter;
    std::vector<NegativeFilter> adgroups;
  };
  const Account* account_;
  std::vector<const Campaign*> order_;
  std::unordered_map<std::string, CompiledCampaign> compiled_;
};

inline Trajectory simulate(const Account& account, const Keyword& q) {
  return Simulator(account).simulate(q);
}

struct TrajectoryReport {
  std::vector<Trajectory> trajectories;
  std::map<Disposition, std::size_t> counts;

  std::size_t count(Disposition d) const {
    auto it = counts.find(d);
    return it == counts.end() ? 0 : it->second;
  }
};

inline TrajectoryReport trace_report(const Account& account, const std::vector<Keyword>& queries) {
  TrajectoryReport report;
  if (queries.empty()) return report;
  Simulator sim(account);
  report.trajectories.reserve(queries.size());
  for (const auto& q : queries) {
    report.trajectories.push_back(sim.simulate(q));
    ++report.counts[report.trajectories.back().disposition];
  }
  return report;
}

}  // namespace negkw
