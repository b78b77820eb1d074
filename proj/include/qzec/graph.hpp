#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qzec/distinguishability.hpp"

namespace qzec {

/// Undirected simple graph over vertices 0..n-1, with optional labels.
class Graph {
 public:
  explicit Graph(int vertex_count, std::vector<std::string> labels = {})
      : n_(vertex_count), adj_(static_cast<std::size_t>(vertex_count) * vertex_count, 0),
        labels_(std::move(labels)) {
    if (n_ < 0) throw std::invalid_argument("negative vertex count");
    if (!labels_.empty() && static_cast<int>(labels_.size()) != n_) {
      throw std::invalid_argument("label count must match vertex count");
    }
  }

  void add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("self-loops are not allowed");
    if (!at(u, v)) {
      at(u, v) = at(v, u) = 1;
      ++edge_count_;
    }
  }

  bool has_edge(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    return u != v && at(u, v);
  }

  int vertex_count() const { return n_; }
  int edge_count() const { return edge_count_; }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int u = 0; u < n_; ++u) {
      for (int v = u + 1; v < n_; ++v) {
        if (at(u, v)) out.emplace_back(u, v);
      }
    }
    return out;
  }

  bool has_labels() const { return !labels_.empty(); }
  const std::string& label(int v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  char& at(int u, int v) { return adj_[static_cast<std::size_t>(u) * n_ + v]; }
  char at(int u, int v) const { return adj_[static_cast<std::size_t>(u) * n_ + v]; }
  void check_vertex(int v) const {
    if (v < 0 || v >= n_) throw std::invalid_argument("vertex index out of range");
  }

  int n_;
  std::vector<char> adj_;
  std::vector<std::string> labels_;
  int edge_count_ = 0;
};

/// Disjunctive (co-normal) product: vertex (u, x) maps to index u*|h|+x,
/// and {(u,x),(v,y)} is an edge iff {u,v} is an edge of g or {x,y} is an
/// edge of h. A codeword pair is separable by per-letter measurements
/// exactly when some coordinate pair is, which is this product rule.
inline Graph disjunctive_product(const Graph& g, const Graph& h) {
  const int gn = g.vertex_count();
  const int hn = h.vertex_count();
  std::vector<std::string> labels;
  if (g.has_labels() && h.has_labels()) {
    labels.reserve(static_cast<std::size_t>(gn) * hn);
    for (int u = 0; u < gn; ++u) {
      for (int x = 0; x < hn; ++x) {
        labels.push_back(g.label(u) + "." + h.label(x));
      }
    }
  }
  Graph product(gn * hn, std::move(labels));
  for (int u = 0; u < gn; ++u) {
    for (int x = 0; x < hn; ++x) {
      const int a = u * hn + x;
      for (int v = u; v < gn; ++v) {
        const bool g_edge = (u != v) && g.has_edge(u, v);
        for (int y = (v == u ? x + 1 : 0); y < hn; ++y) {
          if (g_edge || ((x != y) && h.has_edge(x, y))) {
            product.add_edge(a, v * hn + y);
          }
        }
      }
    }
  }
  return product;
}

/// n-fold iterated disjunctive product; n = 1 returns g unchanged.
inline Graph graph_power(const Graph& g, int n) {
  if (n < 1) throw std::invalid_argument("graph_power: n must be >= 1");
  Graph out = g;
  for (int i = 1; i < n; ++i) {
    out = disjunctive_product(out, g);
  }
  return out;
}

/// Deterministic DOT text: vertices in index order, edges lexicographic.
inline std::string export_dot(const Graph& g) {
  std::ostringstream out;
  out << "graph G {\n";
  for (int v = 0; v < g.vertex_count(); ++v) {
    out << "  " << v;
    if (g.has_labels()) out << " [label=\"" << g.label(v) << "\"]";
    out << ";\n";
  }
  for (const auto& [u, v] : g.edges()) {
    out << "  " << u << " -- " << v << ";\n";
  }
  out << "}\n";
  return out.str();
}

/// Characteristic graph: vertex i is ensemble state i, and {i, j} is an
/// edge iff the states' A-sets under the POVM are disjoint.
inline Graph build_characteristic_graph(const KrausChannel& channel,
                                        const InputEnsemble& ensemble,
                                        const Povm& povm,
                                        double tol_prob = kTol.prob) {
  const std::vector<ASet> sets = ensemble_a_sets(channel, ensemble, povm, tol_prob);
  Graph g(ensemble.size(), ensemble.labels());
  for (int i = 0; i < ensemble.size(); ++i) {
    for (int j = i + 1; j < ensemble.size(); ++j) {
      if (disjoint(sets[i], sets[j])) g.add_edge(i, j);
    }
  }
  return g;
}

}  // namespace qzec
