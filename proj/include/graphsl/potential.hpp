#pragma once

#include <map>
#include <vector>

#include "graphsl/edge_solver.hpp"
#include "graphsl/metric_graph.hpp"

namespace graphsl {

// Whole-graph potential: per-edge samples in the edge's input orientation
// (index 0 at the tail) plus Robin coefficient values per boundary vertex.
// The graph's bc spec fixes the condition type; values here override the h
// stored in the graph file.
struct Potential {
  std::map<int, std::vector<double>> edge_samples;  // edge id -> N+1 samples
  std::map<int, double> robin;                      // vertex id -> h

  static Potential zero(const MetricGraph& g, int n) {
    Potential p;
    for (const auto& e : g.edges()) p.edge_samples[e.id] = std::vector<double>(n + 1, 0.0);
    for (int vi = 0; vi < g.vertex_count(); ++vi) {
      auto b = g.bc(vi);
      if (b && b->type == BcType::Robin) p.robin[g.vertex(vi).id] = 0.0;
    }
    return p;
  }
};

inline double effective_h(const MetricGraph& g, const Potential& p, int vidx) {
  auto it = p.robin.find(g.vertex(vidx).id);
  if (it != p.robin.end()) return it->second;
  auto b = g.bc(vidx);
  return b ? b->h : 0.0;
}

// Per-edge potential in the requested orientation. robin_h is left at zero;
// boundary data enters through condition rows, not through the basis.
inline EdgePotential make_edge_potential(const MetricGraph& g, const Potential& p, int eidx,
                                         bool from_head = false) {
  const EdgeSpec& e = g.edge(eidx);
  auto it = p.edge_samples.find(e.id);
  require(it != p.edge_samples.end(), Errc::DanglingReference,
          "no potential samples for edge " + std::to_string(e.id));
  EdgePotential ep;
  ep.length = e.length;
  ep.samples = it->second;
  if (from_head) std::reverse(ep.samples.begin(), ep.samples.end());
  ep.check();
  return ep;
}

}  // namespace graphsl
