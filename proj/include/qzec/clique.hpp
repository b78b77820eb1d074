#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "qzec/graph.hpp"

namespace qzec {

struct CliqueCertificate {
  std::vector<int> vertices;  // sorted ascending, pairwise adjacent
  int size = 0;
  bool exact = true;  // false when the search budget ran out (lower bound only)
};

inline bool verify_clique(const Graph& g, const std::vector<int>& vertices) {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (!g.has_edge(vertices[i], vertices[j])) return false;
    }
  }
  return true;
}

namespace detail {

// Branch and bound in the MCQ style: vertices are taken in reverse
// degeneracy order, candidate sets are greedily colored, and the color
// count bounds the clique size reachable from a branch. All tie-breaking
// is by vertex index, so the certificate is deterministic.
class CliqueSolver {
 public:
  CliqueSolver(const Graph& g, long long budget)
      : n_(g.vertex_count()), adj_(static_cast<std::size_t>(n_) * n_, 0), budget_(budget) {
    for (const auto& [u, v] : g.edges()) {
      adj_[static_cast<std::size_t>(u) * n_ + v] = 1;
      adj_[static_cast<std::size_t>(v) * n_ + u] = 1;
    }
  }

  CliqueCertificate solve() {
    const std::vector<int> order = initial_order();
    // Any single vertex is a clique, so even a budget of one node yields a
    // usable incumbent.
    if (!order.empty()) best_.push_back(order.front());
    expand(order);
    std::sort(best_.begin(), best_.end());
    return {best_, static_cast<int>(best_.size()), !exhausted_};
  }

 private:
  bool adjacent(int u, int v) const {
    return adj_[static_cast<std::size_t>(u) * n_ + v] != 0;
  }

  // Reverse degeneracy order: repeatedly remove a minimum-degree vertex
  // (smallest index on ties); survivors of deep cores end up first.
  std::vector<int> initial_order() const {
    std::vector<int> degree(n_, 0);
    for (int u = 0; u < n_; ++u) {
      for (int v = 0; v < n_; ++v) {
        if (adjacent(u, v)) ++degree[u];
      }
    }
    std::vector<char> removed(n_, 0);
    std::vector<int> order(n_);
    for (int step = n_ - 1; step >= 0; --step) {
      int pick = -1;
      for (int v = 0; v < n_; ++v) {
        if (!removed[v] && (pick < 0 || degree[v] < degree[pick])) pick = v;
      }
      if (pick < 0) break;
      removed[pick] = 1;
      order[step] = pick;
      for (int v = 0; v < n_; ++v) {
        if (!removed[v] && adjacent(pick, v)) --degree[v];
      }
    }
    return order;
  }

  void expand(const std::vector<int>& candidates) {
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return;
    }
    // Greedy sequential coloring in candidate order; `colored` ends up
    // sorted by color class, stable within a class.
    std::vector<std::vector<int>> classes;
    for (int v : candidates) {
      bool placed = false;
      for (auto& cls : classes) {
        bool conflict = false;
        for (int u : cls) {
          if (adjacent(u, v)) {
            conflict = true;
            break;
          }
        }
        if (!conflict) {
          cls.push_back(v);
          placed = true;
          break;
        }
      }
      if (!placed) classes.push_back({v});
    }
    std::vector<std::pair<int, int>> colored;  // (vertex, color)
    colored.reserve(candidates.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
      for (int v : classes[c]) colored.emplace_back(v, static_cast<int>(c) + 1);
    }
    for (int i = static_cast<int>(colored.size()) - 1; i >= 0; --i) {
      if (exhausted_) return;
      const auto [v, color] = colored[i];
      if (static_cast<int>(current_.size()) + color <= static_cast<int>(best_.size())) {
        return;  // every remaining candidate has an equal or smaller color
      }
      current_.push_back(v);
      std::vector<int> next;
      next.reserve(i);
      for (int k = 0; k < i; ++k) {
        if (adjacent(colored[k].first, v)) next.push_back(colored[k].first);
      }
      if (next.empty()) {
        if (current_.size() > best_.size()) best_ = current_;
      } else {
        expand(next);
      }
      current_.pop_back();
    }
  }

  int n_;
  std::vector<char> adj_;
  long long budget_;
  long long nodes_ = 0;
  bool exhausted_ = false;
  std::vector<int> current_;
  std::vector<int> best_;
};

}  // namespace detail

/// Exact maximum clique with certificate. If the node budget runs out the
/// best clique found so far is returned with exact = false; it is still a
/// valid clique and hence a valid lower bound.
inline CliqueCertificate clique_number(const Graph& g,
                                       long long budget = 10'000'000) {
  detail::CliqueSolver solver(g, budget);
  CliqueCertificate cert = solver.solve();
  if (!verify_clique(g, cert.vertices)) {
    throw std::logic_error("clique_number produced an invalid certificate");
  }
  return cert;
}

/// Testing oracle: enumerates every clique through bitmask DFS. Hard cap
/// at 25 vertices.
inline CliqueCertificate clique_number_bruteforce(const Graph& g) {
  const int n = g.vertex_count();
  if (n > 25) {
    throw std::invalid_argument("clique_number_bruteforce capped at 25 vertices");
  }
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& [u, v] : g.edges()) {
    adj[u] |= std::uint32_t{1} << v;
    adj[v] |= std::uint32_t{1} << u;
  }
  std::vector<int> best;
  std::vector<int> current;
  auto dfs = [&](auto&& self, std::uint32_t cand) -> void {
    if (current.size() > best.size()) best = current;
    while (cand != 0) {
      if (current.size() + std::popcount(cand) <= best.size()) return;
      const int v = std::countr_zero(cand);
      cand &= cand - 1;
      current.push_back(v);
      self(self, cand & adj[v]);
      current.pop_back();
    }
  };
  const std::uint32_t all = (n == 0) ? 0 : ((std::uint32_t{1} << n) - 1);
  dfs(dfs, all);
  if (!verify_clique(g, best)) {
    throw std::logic_error("clique_number_bruteforce produced an invalid certificate");
  }
  return {best, static_cast<int>(best.size()), true};
}

}  // namespace qzec
