#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "negkw/eraser.hpp"
#include "negkw/keyword.hpp"

namespace negkw {

/// ceil(sqrt(n)), computed without floating point drift.
inline std::size_t ceil_sqrt(std::size_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while (r * r < n) ++r;
  return r;
}

struct EraserImage {
  Eraser eraser;
  std::vector<Keyword> image;  // sorted subset of SK
  std::size_t size() const noexcept { return image.size(); }
  friend bool operator==(const EraserImage&, const EraserImage&) = default;
};

namespace detail {

/// Inverted index over a sorted keyword universe, for image computation.
class ImageIndex {
 public:
  explicit ImageIndex(const std::vector<Keyword>& universe) : universe_(&universe) {
    for (std::size_t i = 0; i < universe.size(); ++i) {
      for (const auto& w : word_set(universe[i])) postings_[w].push_back(static_cast<std::uint32_t>(i));
    }
  }

  /// Indices of universe keywords whose word set contains `words`.
  std::vector<std::uint32_t> image(const WordSet& words) const {
    if (words.empty()) return {};
    std::vector<const std::vector<std::uint32_t>*> lists;
    for (const auto& w : words) {
      auto it = postings_.find(w);
      if (it == postings_.end()) return {};
      lists.push_back(&it->second);
    }
    std::sort(lists.begin(), lists.end(), [](auto* a, auto* b) { return a->size() < b->size(); });
    std::vector<std::uint32_t> acc = *lists.front();
    for (std::size_t i = 1; i < lists.size() && !acc.empty(); ++i) {
      std::vector<std::uint32_t> next;
      std::set_intersection(acc.begin(), acc.end(), lists[i]->begin(), lists[i]->end(),
                            std::back_inserter(next));
      acc.swap(next);
    }
    return acc;
  }

  std::vector<Keyword> keywords(const std::vector<std::uint32_t>& ids) const {
    std::vector<Keyword> out;
    out.reserve(ids.size());
    for (auto i : ids) out.push_back((*universe_)[i]);
    return out;
  }

 private:
  const std::vector<Keyword>* universe_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> postings_;
};

/// Calls f(subset) for every non-empty subset of `words` with at most `max_words` entries.
template <typename F>
void for_each_subset(const WordSet& words, std::size_t max_words, F&& f) {
  WordSet cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    for (std::size_t i = start; i < words.size(); ++i) {
      cur.push_back(words[i]);
      f(cur);
      if (cur.size() < max_words) self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

inline std::vector<Keyword> sorted_unique(std::vector<Keyword> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace detail

/// Image of a single eraser over `universe`, by direct scan.
template <typename Range>
std::vector<Keyword> image_of(const Eraser& e, const Range& universe) {
  std::vector<Keyword> out;
  for (const Keyword& p : universe) {
    if (erases(e, p)) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Large erasers drawn from word subsets (size <= max_words) of single keywords,
/// keeping those with 2 <= |image| <= max_image. A word set is dropped when one
/// of its proper subsets already has the same image: it blocks the same keywords.
/// Ordered by image size descending, then word set.
inline std::vector<EraserImage> enumerate_candidates(const std::vector<Keyword>& sk_in,
                                                     std::size_t max_words, std::size_t max_image) {
  if (max_words == 0 || max_image == 0) {
    throw Error(ErrorKind::InvalidInput, "max_words and max_image must be positive");
  }
  const auto sk = detail::sorted_unique(sk_in);
  detail::ImageIndex index(sk);
  std::map<WordSet, std::size_t> image_size;
  auto size_of = [&](const WordSet& ws) {
    auto it = image_size.find(ws);
    if (it != image_size.end()) return it->second;
    auto s = index.image(ws).size();
    image_size.emplace(ws, s);
    return s;
  };

  std::set<WordSet> seen;
  std::vector<EraserImage> out;
  for (const auto& p : sk) {
    detail::for_each_subset(word_set(p), max_words, [&](const WordSet& ws) {
      if (!seen.insert(ws).second) return;
      auto ids = index.image(ws);
      if (ids.size() < 2 || ids.size() > max_image) return;
      if (ws.size() >= 2) {
        for (std::size_t drop = 0; drop < ws.size(); ++drop) {
          WordSet sub;
          for (std::size_t i = 0; i < ws.size(); ++i) {
            if (i != drop) sub.push_back(ws[i]);
          }
          if (size_of(sub) == ids.size()) return;
        }
      }
      out.push_back({Eraser::large(ws), index.keywords(ids)});
    });
  }
  std::sort(out.begin(), out.end(), [](const EraserImage& a, const EraserImage& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.eraser.words() < b.eraser.words();
  });
  return out;
}

/// Intersection graph of eraser images; node weight is the image size.
class EraserGraph {
 public:
  explicit EraserGraph(std::vector<EraserImage> nodes) : nodes_(std::move(nodes)) {
    adjacency_.resize(nodes_.size());
    std::map<Keyword, std::vector<std::size_t>> holders;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      for (const auto& k : nodes_[i].image) holders[k].push_back(i);
    }
    for (const auto& [k, ids] : holders) {
      for (std::size_t a = 0; a < ids.size(); ++a) {
        for (std::size_t b = a + 1; b < ids.size(); ++b) {
          adjacency_[ids[a]].push_back(ids[b]);
          adjacency_[ids[b]].push_back(ids[a]);
        }
      }
    }
    for (auto& adj : adjacency_) {
      std::sort(adj.begin(), adj.end());
      adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
      edge_count_ += adj.size();
    }
    edge_count_ /= 2;
  }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  const std::vector<EraserImage>& nodes() const noexcept { return nodes_; }
  const EraserImage& node(std::size_t i) const { return nodes_[i]; }
  std::size_t weight(std::size_t i) const { return nodes_[i].size(); }
  const std::vector<std::size_t>& neighbours(std::size_t i) const { return adjacency_[i]; }
  std::size_t degree(std::size_t i) const { return adjacency_[i].size(); }

  bool adjacent(std::size_t a, std::size_t b) const {
    return std::binary_search(adjacency_[a].begin(), adjacency_[a].end(), b);
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < adjacency_.size(); ++a) {
      for (auto b : adjacency_[a]) {
        if (a < b) out.emplace_back(a, b);
      }
    }
    return out;
  }

 private:
  std::vector<EraserImage> nodes_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::size_t edge_count_ = 0;
};

inline EraserGraph build_graph(std::vector<EraserImage> candidates) {
  return EraserGraph(std::move(candidates));
}

enum class ColoringOrder {
  /// Heaviest image first, then lightest neighbourhood, then node index.
  WeightThenNeighbourhood,
  /// Classic Welsh-Powell: highest degree first, then node index.
  DegreeDescending,
};

using Coloring = std::vector<int>;

/// Greedy sequential coloring: nodes are visited in the chosen order and each
/// takes the smallest color absent from its already-colored neighbours.
inline Coloring welsh_powell(const EraserGraph& g,
                             ColoringOrder order = ColoringOrder::WeightThenNeighbourhood) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> visit(n);
  std::iota(visit.begin(), visit.end(), std::size_t{0});
  if (order == ColoringOrder::DegreeDescending) {
    std::stable_sort(visit.begin(), visit.end(),
                     [&](std::size_t a, std::size_t b) { return g.degree(a) > g.degree(b); });
  } else {
    std::vector<std::size_t> nbr_weight(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto j : g.neighbours(i)) nbr_weight[i] += g.weight(j);
    }
    std::stable_sort(visit.begin(), visit.end(), [&](std::size_t a, std::size_t b) {
      if (g.weight(a) != g.weight(b)) return g.weight(a) > g.weight(b);
      return nbr_weight[a] < nbr_weight[b];
    });
  }

  Coloring color(n, -1);
  std::vector<char> used;
  for (auto v : visit) {
    used.assign(g.degree(v) + 1, 0);
    for (auto u : g.neighbours(v)) {
      if (color[u] >= 0 && static_cast<std::size_t>(color[u]) < used.size()) used[color[u]] = 1;
    }
    int c = 0;
    while (used[static_cast<std::size_t>(c)]) ++c;
    color[v] = c;
  }
  return color;
}

inline bool is_proper(const EraserGraph& g, const Coloring& color) {
  for (const auto& [a, b] : g.edges()) {
    if (color[a] == color[b]) return false;
  }
  return true;
}

struct ColorClass {
  int color = -1;
  std::vector<std::size_t> nodes;
  std::vector<EraserImage> erasers;
  std::set<Keyword> covered;
  std::size_t weight = 0;
};

/// Color class with the largest total image size; ties go to the lowest color.
inline ColorClass select_color_class(const EraserGraph& g, const Coloring& color) {
  ColorClass best;
  if (g.node_count() == 0) return best;
  const int colors = *std::max_element(color.begin(), color.end()) + 1;
  std::vector<std::size_t> sums(static_cast<std::size_t>(colors), 0);
  for (std::size_t i = 0; i < g.node_count(); ++i) sums[static_cast<std::size_t>(color[i])] += g.weight(i);
  best.color = static_cast<int>(std::max_element(sums.begin(), sums.end()) - sums.begin());
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (color[i] != best.color) continue;
    best.nodes.push_back(i);
    best.erasers.push_back(g.node(i));
    best.covered.insert(g.node(i).image.begin(), g.node(i).image.end());
    best.weight += g.weight(i);
  }
  return best;
}

struct GroupPlan {
  struct Group {
    std::vector<Keyword> keywords;  // sorted
    std::vector<Eraser> erasers;    // large first, in packing order
  };
  std::vector<Group> groups;
  std::vector<Keyword> exact_filled;  // SK keywords not covered by a selected eraser

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out;
    for (const auto& g : groups) out.push_back(g.keywords.size());
    return out;
  }
};

/// Packs the selected large erasers plus one exact eraser per uncovered keyword
/// into balanced groups of at most `target_size` keywords.
///
/// Items go largest image first into the lightest group. Among equally light
/// groups the one sharing the most words with the item wins, then the one
/// holding the most erasers, then the lowest index. A new group is opened when
/// the lightest one cannot take the item without exceeding `target_size`.
inline GroupPlan make_group_plan(const std::vector<Keyword>& sk_in, const std::vector<EraserImage>& selected,
                                 std::size_t target_size) {
  if (target_size == 0) throw Error(ErrorKind::InvalidInput, "target size must be positive");
  const auto sk = detail::sorted_unique(sk_in);
  std::set<Keyword> covered;
  for (const auto& s : selected) {
    if (s.size() > target_size) {
      throw Error(ErrorKind::InfeasibleTarget, "eraser " + s.eraser.str() + " has image " +
                                                   std::to_string(s.size()) + " > target " +
                                                   std::to_string(target_size));
    }
    for (const auto& k : s.image) {
      if (!covered.insert(k).second) {
        throw Error(ErrorKind::InvalidInput, "selected images overlap on '" + k.str() + "'");
      }
    }
  }

  GroupPlan plan;
  std::vector<EraserImage> items(selected.begin(), selected.end());
  std::stable_sort(items.begin(), items.end(),
                   [](const EraserImage& a, const EraserImage& b) { return a.size() > b.size(); });
  for (const auto& k : sk) {
    if (!covered.count(k)) {
      plan.exact_filled.push_back(k);
      items.push_back({Eraser::exact(k), {k}});
    }
  }
  if (items.empty()) return plan;

  const std::size_t k = (sk.size() + target_size - 1) / target_size;
  plan.groups.resize(std::max<std::size_t>(k, 1));
  std::vector<std::set<std::string>> group_words(plan.groups.size());

  for (const auto& item : items) {
    std::set<std::string> words;
    for (const auto& p : item.image) words.insert(p.tokens().begin(), p.tokens().end());

    std::size_t best = 0;
    auto load = [&](std::size_t g) { return plan.groups[g].keywords.size(); };
    auto affinity = [&](std::size_t g) {
      std::size_t a = 0;
      for (const auto& w : words) a += group_words[g].count(w);
      return a;
    };
    for (std::size_t g = 1; g < plan.groups.size(); ++g) {
      if (load(g) != load(best)) {
        if (load(g) < load(best)) best = g;
        continue;
      }
      const auto ag = affinity(g), ab = affinity(best);
      if (ag != ab) {
        if (ag > ab) best = g;
        continue;
      }
      if (plan.groups[g].erasers.size() > plan.groups[best].erasers.size()) best = g;
    }
    if (load(best) + item.size() > target_size) {
      plan.groups.emplace_back();
      group_words.emplace_back();
      best = plan.groups.size() - 1;
    }
    auto& grp = plan.groups[best];
    grp.erasers.push_back(item.eraser);
    grp.keywords.insert(grp.keywords.end(), item.image.begin(), item.image.end());
    group_words[best].insert(words.begin(), words.end());
  }
  plan.groups.erase(std::remove_if(plan.groups.begin(), plan.groups.end(),
                                   [](const GroupPlan::Group& g) { return g.keywords.empty(); }),
                    plan.groups.end());
  for (auto& g : plan.groups) std::sort(g.keywords.begin(), g.keywords.end());
  return plan;
}

struct ReduceOptions {
  std::size_t max_words = 3;
};

/// Strict erasers of `s` relative to `sp`: together they erase exactly `s`
/// among `sp`. Greedy cover by largest residual image, then one exact eraser
/// per keyword left over.
inline std::vector<Eraser> reduce(const std::vector<Keyword>& s_in, const std::vector<Keyword>& sp_in,
                                  const ReduceOptions& opts = {}) {
  const auto s = detail::sorted_unique(s_in);
  auto sp = detail::sorted_unique(sp_in);
  for (const auto& k : s) {
    if (!std::binary_search(sp.begin(), sp.end(), k)) {
      throw Error(ErrorKind::InvalidInput, "reduce: '" + k.str() + "' is not in the universe");
    }
  }
  detail::ImageIndex index(sp);
  std::vector<char> in_s(sp.size(), 0);
  for (const auto& k : s) in_s[static_cast<std::size_t>(std::lower_bound(sp.begin(), sp.end(), k) - sp.begin())] = 1;

  struct Cand {
    WordSet words;
    std::vector<std::uint32_t> ids;
  };
  std::vector<Cand> cands;
  std::set<WordSet> seen;
  for (const auto& p : s) {
    detail::for_each_subset(word_set(p), opts.max_words, [&](const WordSet& ws) {
      if (!seen.insert(ws).second) return;
      auto ids = index.image(ws);
      if (ids.size() < 2) return;
      for (auto i : ids) {
        if (!in_s[i]) return;  // not strict
      }
      cands.push_back({ws, std::move(ids)});
    });
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.ids.size() != b.ids.size()) return a.ids.size() > b.ids.size();
    return a.words < b.words;
  });

  std::vector<char> covered(sp.size(), 0);
  std::vector<char> used(cands.size(), 0);
  std::vector<Eraser> out;
  for (;;) {
    std::size_t best = cands.size(), best_gain = 1;
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (used[c] || cands[c].ids.size() <= best_gain) continue;
      std::size_t gain = 0;
      for (auto i : cands[c].ids) gain += covered[i] ? 0 : 1;
      if (gain > best_gain) {
        best = c;
        best_gain = gain;
      }
    }
    if (best == cands.size()) break;
    used[best] = 1;
    for (auto i : cands[best].ids) covered[i] = 1;
    out.push_back(Eraser::large(cands[best].words));
  }
  for (std::size_t i = 0; i < sp.size(); ++i) {
    if (in_s[i] && !covered[i]) out.push_back(Eraser::exact(sp[i]));
  }
  return out;
}

inline constexpr std::size_t kOracleLimit = 25;

struct PackingSolution {
  std::vector<std::size_t> chosen;  // candidate indices, ascending
  std::size_t coverage = 0;
};

/// Exact maximum-weight set packing by exhaustive branch and bound.
inline PackingSolution exact_packing_oracle(const std::vector<EraserImage>& candidates) {
  const std::size_t n = candidates.size();
  if (n > kOracleLimit) {
    throw Error(ErrorKind::SizeLimit, "exhaustive packing supports at most " +
                                          std::to_string(kOracleLimit) + " candidates, got " +
                                          std::to_string(n));
  }
  std::vector<std::uint32_t> conflict(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      std::vector<Keyword> common;
      std::set_intersection(candidates[a].image.begin(), candidates[a].image.end(),
                            candidates[b].image.begin(), candidates[b].image.end(),
                            std::back_inserter(common));
      if (!common.empty()) {
        conflict[a] |= 1u << b;
        conflict[b] |= 1u << a;
      }
    }
  }
  std::vector<std::size_t> suffix(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + candidates[i].size();

  std::uint32_t best_mask = 0;
  std::size_t best = 0;
  auto rec = [&](auto&& self, std::size_t i, std::uint32_t mask, std::uint32_t blocked, std::size_t w) -> void {
    if (w > best) {
      best = w;
      best_mask = mask;
    }
    if (i == n || w + suffix[i] <= best) return;
    if (!(blocked & (1u << i))) {
      self(self, i + 1, mask | (1u << i), blocked | conflict[i], w + candidates[i].size());
    }
    self(self, i + 1, mask, blocked, w);
  };
  rec(rec, 0, 0, 0, 0);

  PackingSolution sol;
  sol.coverage = best;
  for (std::size_t i = 0; i < n; ++i) {
    if (best_mask & (1u << i)) sol.chosen.push_back(i);
  }
  return sol;
}

struct EngineOptions {
  std::size_t max_words = 3;
  std::size_t max_image = 0;    // 0: ceil(sqrt(n))
  std::size_t target_size = 0;  // 0: ceil(sqrt(n))
  ColoringOrder order = ColoringOrder::WeightThenNeighbourhood;
};

/// Everything the reduction pipeline produced, for building and for stats.
struct EraserPlan {
  std::size_t n = 0;
  std::size_t neras = 0;
  std::size_t ntrans = 0;
  ColorClass selected;
  GroupPlan plan;
};

inline EraserPlan plan_erasers(const std::vector<Keyword>& sk_in, const EngineOptions& opts = {}) {
  const auto sk = detail::sorted_unique(sk_in);
  EraserPlan out;
  out.n = sk.size();
  const auto root = std::max<std::size_t>(ceil_sqrt(sk.size()), 1);
  const auto max_image = opts.max_image ? opts.max_image : root;
  const auto target = opts.target_size ? opts.target_size : root;
  auto graph = build_graph(enumerate_candidates(sk, opts.max_words, max_image));
  out.neras = graph.node_count();
  out.ntrans = graph.edge_count();
  out.selected = select_color_class(graph, welsh_powell(graph, opts.order));
  out.plan = make_group_plan(sk, out.selected.erasers, target);
  return out;
}

}  // namespace negkw
