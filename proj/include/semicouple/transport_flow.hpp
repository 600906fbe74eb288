#pragma once

// Successive shortest paths for transportation problems with many sources and
// few sinks.
//
// Sources carry integer supply, sinks integer demand, and arcs (source, sink)
// integer cost. Every augmenting path leaves the super source through a source
// with residual supply, then alternates sink -> (source holding flow to that
// sink) -> sink. Because each such detour passes through exactly one source,
// the residual graph collapses onto the sinks: the weight of sink j -> sink j'
// is the minimum over sources i with flow(i, j) > 0 of c(i, j') - c(i, j),
// kept in one lazy min-heap per ordered sink pair. Dijkstra then runs on
// K + 2 nodes with Johnson potentials, and the sink potentials at the end are
// the dual variables of the transportation LP.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "semicouple/errors.hpp"

namespace semicouple::flow {

struct SinkArc {
  std::int64_t cost;
  std::int32_t source;
};

struct FlowEntry {
  std::int32_t sink;
  std::int64_t units;
};

struct Certificate {
  std::vector<std::int64_t> sink_potential;
  std::int64_t max_violation = 0;
  // a violated dual constraint involves an arc that was not offered to the solver
  bool missing_arc_violated = false;
  std::uint64_t pairs_checked = 0;
  bool verified() const { return max_violation == 0; }
};

// Model requirements:
//   std::int64_t cost(int source, int sink) const;   // any pair
//   bool has_arc(int source, int sink) const;        // consistent with the arc lists
template <class Model>
class SuccessiveShortestPaths {
 public:
  SuccessiveShortestPaths(const Model& model, std::vector<std::int64_t> supply, std::vector<std::int64_t> demand,
                          std::vector<std::vector<SinkArc>> arcs_per_sink)
      : model_(model),
        supply_(std::move(supply)),
        demand_(std::move(demand)),
        arcs_(std::move(arcs_per_sink)),
        k_(static_cast<int>(demand_.size())) {
    if (static_cast<int>(arcs_.size()) != k_) throw ArgumentError("one arc list per sink required");
    residual_ = supply_;
    flows_.resize(supply_.size());
    received_.assign(static_cast<std::size_t>(k_), 0);
    cursor_.assign(static_cast<std::size_t>(k_), 0);
    potential_.assign(static_cast<std::size_t>(k_ + 2), 0);
    heaps_.resize(static_cast<std::size_t>(k_) * static_cast<std::size_t>(k_));
    for (auto& list : arcs_) {
      std::sort(list.begin(), list.end(), [](const SinkArc& a, const SinkArc& b) {
        return a.cost < b.cost || (a.cost == b.cost && a.source < b.source);
      });
    }
  }

  // Throws InfeasibleError if some demand cannot be routed through the arcs.
  void run() {
    while (true) {
      std::int64_t missing = 0;
      for (int j = 0; j < k_; ++j) missing += demand_[static_cast<std::size_t>(j)] - received_[static_cast<std::size_t>(j)];
      if (missing == 0) return;
      augment_once();
      ++iterations_;
    }
  }

  long iterations() const { return iterations_; }
  const std::vector<std::vector<FlowEntry>>& flows() const { return flows_; }
  const std::vector<std::int64_t>& residual_supply() const { return residual_; }
  const std::vector<std::int64_t>& received() const { return received_; }
  std::vector<std::int64_t> sink_potentials() const {
    return std::vector<std::int64_t>(potential_.begin(), potential_.begin() + k_);
  }

  std::int64_t flow(int source, int sink) const {
    for (const auto& f : flows_[static_cast<std::size_t>(source)]) {
      if (f.sink == sink) return f.units;
    }
    return 0;
  }

  // Checks the LP optimality conditions over every (source, sink) pair with
  // psi = sink potentials and u_i = min(0 if supply may stay unused, min_j c_ij - psi_j):
  // flow on (i, j) needs c_ij - psi_j == u_i; unused supply needs u_i == 0.
  Certificate certify(bool allow_unused_supply) const {
    Certificate cert;
    cert.sink_potential = sink_potentials();
    const auto& psi = cert.sink_potential;
    const int n = static_cast<int>(supply_.size());
    for (int i = 0; i < n; ++i) {
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      int best_sink = -1;
      for (int j = 0; j < k_; ++j) {
        const std::int64_t r = model_.cost(i, j) - psi[static_cast<std::size_t>(j)];
        if (r < best) {
          best = r;
          best_sink = j;
        }
      }
      cert.pairs_checked += static_cast<std::uint64_t>(k_);
      if (k_ == 0) best = 0;
      std::int64_t u = best;
      if (allow_unused_supply && u > 0) u = 0;
      auto record = [&](std::int64_t gap, bool missing) {
        if (gap > cert.max_violation) cert.max_violation = gap;
        if (gap > 0 && missing) cert.missing_arc_violated = true;
      };
      const auto& fl = flows_[static_cast<std::size_t>(i)];
      const bool missing_best = best_sink >= 0 && !model_.has_arc(i, best_sink);
      for (const auto& f : fl) {
        const std::int64_t r = model_.cost(i, f.sink) - psi[static_cast<std::size_t>(f.sink)];
        record(r - u, missing_best);
      }
      if (residual_[static_cast<std::size_t>(i)] > 0) {
        if (allow_unused_supply) {
          record(-best, missing_best);  // a free source must not undercut any sink
        } else {
          record(residual_[static_cast<std::size_t>(i)], false);
        }
      }
    }
    return cert;
  }

 private:
  struct HeapEntry {
    std::int64_t key;
    std::int32_t source;
  };
  static bool heap_after(const HeapEntry& a, const HeapEntry& b) {
    return a.key > b.key || (a.key == b.key && a.source > b.source);
  }

  static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

  std::vector<HeapEntry>& heap(int from, int to) {
    return heaps_[static_cast<std::size_t>(from) * static_cast<std::size_t>(k_) + static_cast<std::size_t>(to)];
  }

  // cheapest source with residual supply offered to `sink`, or -1
  int top_free(int sink) {
    auto& list = arcs_[static_cast<std::size_t>(sink)];
    auto& c = cursor_[static_cast<std::size_t>(sink)];
    while (c < list.size() && residual_[static_cast<std::size_t>(list[c].source)] == 0) ++c;
    return c < list.size() ? static_cast<int>(c) : -1;
  }

  const HeapEntry* top_move(int from, int to) {
    auto& h = heap(from, to);
    while (!h.empty() && flow(h.front().source, from) == 0) {
      std::pop_heap(h.begin(), h.end(), heap_after);
      h.pop_back();
    }
    return h.empty() ? nullptr : &h.front();
  }

  void add_flow(int source, int sink, std::int64_t units) {
    auto& fl = flows_[static_cast<std::size_t>(source)];
    for (auto it = fl.begin(); it != fl.end(); ++it) {
      if (it->sink == sink) {
        it->units += units;
        if (it->units < 0) throw std::logic_error("negative flow");
        if (it->units == 0) fl.erase(it);
        return;
      }
    }
    if (units < 0) throw std::logic_error("negative flow");
    fl.push_back({sink, units});
    const std::int64_t base = model_.cost(source, sink);
    for (int to = 0; to < k_; ++to) {
      if (to == sink || !model_.has_arc(source, to)) continue;
      auto& h = heap(sink, to);
      h.push_back({model_.cost(source, to) - base, source});
      std::push_heap(h.begin(), h.end(), heap_after);
    }
  }

  void augment_once() {
    const int s = k_;
    const int t = k_ + 1;
    const int nodes = k_ + 2;
    dist_.assign(static_cast<std::size_t>(nodes), kInf);
    done_.assign(static_cast<std::size_t>(nodes), 0);
    pred_node_.assign(static_cast<std::size_t>(nodes), -1);
    pred_source_.assign(static_cast<std::size_t>(nodes), -1);
    dist_[static_cast<std::size_t>(s)] = 0;
    auto relax = [&](int from, int to, std::int64_t reduced, int via) {
      if (reduced < 0) throw std::logic_error("negative reduced cost in shortest path search");
      const std::int64_t nd = dist_[static_cast<std::size_t>(from)] + reduced;
      if (nd < dist_[static_cast<std::size_t>(to)]) {
        dist_[static_cast<std::size_t>(to)] = nd;
        pred_node_[static_cast<std::size_t>(to)] = from;
        pred_source_[static_cast<std::size_t>(to)] = via;
      }
    };
    while (true) {
      int u = -1;
      std::int64_t best = kInf;
      for (int v = 0; v < nodes; ++v) {
        if (!done_[static_cast<std::size_t>(v)] && dist_[static_cast<std::size_t>(v)] < best) {
          best = dist_[static_cast<std::size_t>(v)];
          u = v;
        }
      }
      if (u < 0) break;
      done_[static_cast<std::size_t>(u)] = 1;
      if (u == t) break;
      const std::int64_t pu = potential_[static_cast<std::size_t>(u)];
      if (u == s) {
        for (int j = 0; j < k_; ++j) {
          const int c = top_free(j);
          if (c < 0) continue;
          const auto& arc = arcs_[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
          relax(s, j, arc.cost + pu - potential_[static_cast<std::size_t>(j)], arc.source);
        }
        continue;
      }
      if (received_[static_cast<std::size_t>(u)] < demand_[static_cast<std::size_t>(u)] && !done_[static_cast<std::size_t>(t)]) {
        relax(u, t, pu - potential_[static_cast<std::size_t>(t)], -1);
      }
      for (int to = 0; to < k_; ++to) {
        if (to == u || done_[static_cast<std::size_t>(to)]) continue;
        const HeapEntry* e = top_move(u, to);
        if (!e) continue;
        relax(u, to, e->key + pu - potential_[static_cast<std::size_t>(to)], e->source);
      }
    }
    const std::int64_t dt = dist_[static_cast<std::size_t>(t)];
    if (dt >= kInf) throw InfeasibleError("transport demand cannot be routed through the offered arcs");
    for (int v = 0; v < nodes; ++v) {
      potential_[static_cast<std::size_t>(v)] += std::min(dist_[static_cast<std::size_t>(v)], dt);
    }

    // walk back from t and find the bottleneck
    path_.clear();
    int v = t;
    while (v != s) {
      const int p = pred_node_[static_cast<std::size_t>(v)];
      path_.push_back({p, v, pred_source_[static_cast<std::size_t>(v)]});
      v = p;
    }
    const int last_sink = path_.front().from;
    std::int64_t delta = demand_[static_cast<std::size_t>(last_sink)] - received_[static_cast<std::size_t>(last_sink)];
    for (const auto& e : path_) {
      if (e.to == t) continue;
      if (e.from == s) {
        delta = std::min(delta, residual_[static_cast<std::size_t>(e.source)]);
      } else {
        delta = std::min(delta, flow(e.source, e.from));
      }
    }
    if (delta <= 0) throw std::logic_error("empty augmenting path");
    for (const auto& e : path_) {
      if (e.to == t) continue;
      if (e.from == s) {
        residual_[static_cast<std::size_t>(e.source)] -= delta;
      } else {
        add_flow(e.source, e.from, -delta);
      }
      add_flow(e.source, e.to, delta);
    }
    received_[static_cast<std::size_t>(last_sink)] += delta;
  }

  struct PathEdge {
    int from;
    int to;
    int source;
  };

  const Model& model_;
  std::vector<std::int64_t> supply_;
  std::vector<std::int64_t> demand_;
  std::vector<std::vector<SinkArc>> arcs_;
  int k_;
  std::vector<std::int64_t> residual_;
  std::vector<std::vector<FlowEntry>> flows_;
  std::vector<std::int64_t> received_;
  std::vector<std::size_t> cursor_;
  std::vector<std::int64_t> potential_;
  std::vector<std::vector<HeapEntry>> heaps_;
  std::vector<std::int64_t> dist_;
  std::vector<char> done_;
  std::vector<int> pred_node_;
  std::vector<int> pred_source_;
  std::vector<PathEdge> path_;
  long iterations_ = 0;
};

}  // namespace semicouple::flow
