#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "graphsl/errors.hpp"

namespace graphsl {

using Complex = std::complex<double>;

enum class BcType { Dirichlet, Neumann, Robin };

struct BoundaryCondition {
  BcType type = BcType::Dirichlet;
  double h = 0.0;  // Robin coefficient, inward derivative convention: dy/dn + h*y = 0
};

// General matching coefficients of one edge at one internal vertex.
struct MatchingCoeff {
  Complex a{1.0, 0.0};
  Complex a1{1.0, 0.0};
  Complex a0{0.0, 0.0};
};

struct VertexSpec {
  int id = 0;
  bool boundary = false;
};

struct EdgeSpec {
  int id = 0;
  int tail = 0;  // x = 0 endpoint
  int head = 0;  // x = length endpoint
  double length = 1.0;
};

// Parsed description of a graph file, before validation.
struct GraphSpec {
  std::vector<VertexSpec> vertices;
  std::vector<EdgeSpec> edges;
  bool standard_matching = true;
  std::map<int, std::map<int, MatchingCoeff>> matching;  // vertex id -> edge id -> coeff
  std::map<int, BoundaryCondition> boundary_conditions;  // vertex id -> bc
  std::vector<int> omega_signs;  // bush-graph sign data, stored and echoed only
};

// One end of an edge: (edge index, which end).
struct Endpoint {
  int edge = -1;       // edge index (not id)
  bool at_head = false;
  friend bool operator==(const Endpoint& a, const Endpoint& b) {
    return a.edge == b.edge && a.at_head == b.at_head;
  }
};

class MetricGraph {
 public:
  MetricGraph() = default;

  // Checks all structural invariants and expands the standard-matching shorthand.
  static MetricGraph validate(const GraphSpec& spec) {
    MetricGraph g = build(spec, /*strict=*/true);
    return g;
  }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::vector<VertexSpec>& vertices() const { return vertices_; }
  const std::vector<EdgeSpec>& edges() const { return edges_; }
  bool standard_matching() const { return standard_matching_; }
  const std::vector<int>& omega_signs() const { return omega_signs_; }

  int vindex(int id) const {
    auto it = vid_to_index_.find(id);
    require(it != vid_to_index_.end(), Errc::DanglingReference, "unknown vertex id");
    return it->second;
  }
  int eindex(int id) const {
    auto it = eid_to_index_.find(id);
    require(it != eid_to_index_.end(), Errc::DanglingReference, "unknown edge id");
    return it->second;
  }
  const VertexSpec& vertex(int idx) const { return vertices_[idx]; }
  const EdgeSpec& edge(int idx) const { return edges_[idx]; }

  // Endpoints incident to a vertex, sorted by (edge id, end). A self-loop
  // contributes two endpoints.
  const std::vector<Endpoint>& endpoints_at(int vidx) const { return incidence_[vidx]; }
  int valency(int vidx) const { return static_cast<int>(incidence_[vidx].size()); }

  int endpoint_vertex(const Endpoint& ep) const {
    const EdgeSpec& e = edges_[ep.edge];
    return vid_to_index_.at(ep.at_head ? e.head : e.tail);
  }

  bool is_boundary(int vidx) const { return vertices_[vidx].boundary; }

  std::optional<BoundaryCondition> bc(int vidx) const {
    auto it = bcs_.find(vertices_[vidx].id);
    if (it == bcs_.end()) return std::nullopt;
    return it->second;
  }

  MatchingCoeff matching_coeff(int vidx, int eidx) const {
    auto it = matching_.find(vertices_[vidx].id);
    if (it == matching_.end()) return MatchingCoeff{};
    auto jt = it->second.find(edges_[eidx].id);
    if (jt == it->second.end()) return MatchingCoeff{};
    return jt->second;
  }

  double total_length() const {
    double s = 0.0;
    for (const auto& e : edges_) s += e.length;
    return s;
  }

  std::vector<int> boundary_vertex_ids() const {
    std::vector<int> out;
    for (const auto& v : vertices_)
      if (v.boundary) out.push_back(v.id);
    return out;
  }

  // Subgraph induced by a set of edge ids. Vertex bc specs and matching
  // coefficients are inherited; vertices that become valency-1 are NOT
  // promoted to boundary vertices (the caller supplies conditions there).
  MetricGraph induced(const std::vector<int>& edge_ids) const {
    GraphSpec s;
    std::set<int> vids;
    std::set<int> eids(edge_ids.begin(), edge_ids.end());
    for (int id : edge_ids) {
      const EdgeSpec& e = edges_[eindex(id)];
      s.edges.push_back(e);
      vids.insert(e.tail);
      vids.insert(e.head);
    }
    for (const auto& v : vertices_)
      if (vids.count(v.id)) s.vertices.push_back(v);
    s.standard_matching = standard_matching_;
    for (const auto& [vid, coeffs] : matching_) {
      if (!vids.count(vid)) continue;
      for (const auto& [eid, c] : coeffs)
        if (eids.count(eid)) s.matching[vid][eid] = c;
    }
    for (const auto& [vid, b] : bcs_)
      if (vids.count(vid)) s.boundary_conditions[vid] = b;
    return build(s, /*strict=*/false);
  }

  // Detaches one endpoint of an edge onto a fresh valency-1 vertex. Used to
  // open a cycle edge at its chosen endpoint w into the graph G^xi.
  MetricGraph split_endpoint(int eidx, bool at_head, int new_vertex_id,
                             BoundaryCondition new_bc) const {
    GraphSpec s;
    s.vertices.reserve(vertices_.size() + 1);
    for (const auto& v : vertices_) s.vertices.push_back(v);
    require(vid_to_index_.find(new_vertex_id) == vid_to_index_.end(), Errc::BadInput,
            "split vertex id already used");
    s.vertices.push_back(VertexSpec{new_vertex_id, true});
    for (const auto& e : edges_) s.edges.push_back(e);
    EdgeSpec& e = s.edges[eidx];
    (at_head ? e.head : e.tail) = new_vertex_id;
    s.standard_matching = standard_matching_;
    s.matching = matching_;
    s.boundary_conditions = bcs_;
    s.boundary_conditions[new_vertex_id] = new_bc;
    return build(s, /*strict=*/false);
  }

  // Connected components over edges when vertex `blocked` may not be crossed.
  // Returns a component label per edge; edges meeting `blocked` only through
  // it are still grouped by their other connections.
  std::vector<int> edge_components_blocking(int blocked_vidx) const {
    std::vector<int> label(edges_.size(), -1);
    int next = 0;
    for (int e0 = 0; e0 < edge_count(); ++e0) {
      if (label[e0] >= 0) continue;
      label[e0] = next;
      std::queue<int> q;
      q.push(e0);
      while (!q.empty()) {
        int e = q.front();
        q.pop();
        for (bool at_head : {false, true}) {
          int v = endpoint_vertex(Endpoint{e, at_head});
          if (v == blocked_vidx) continue;
          for (const Endpoint& ep : incidence_[v]) {
            if (label[ep.edge] < 0) {
              label[ep.edge] = next;
              q.push(ep.edge);
            }
          }
        }
      }
      ++next;
    }
    return label;
  }

  // Bridge detection on the multigraph (self-loops and parallel edges are
  // never bridges). Returns a flag per edge index.
  std::vector<bool> find_bridges() const {
    int n = vertex_count(), m = edge_count();
    std::vector<bool> bridge(m, false);
    std::vector<int> tin(n, -1), low(n, 0);
    int timer = 0;
    // iterative DFS keeping the edge used to enter each vertex
    struct Frame {
      int v;
      int via_edge;
      std::size_t next;
    };
    for (int start = 0; start < n; ++start) {
      if (tin[start] >= 0) continue;
      std::vector<Frame> stack{{start, -1, 0}};
      tin[start] = low[start] = timer++;
      while (!stack.empty()) {
        Frame& f = stack.back();
        const auto& inc = incidence_[f.v];
        if (f.next < inc.size()) {
          Endpoint ep = inc[f.next++];
          int to = endpoint_vertex(Endpoint{ep.edge, !ep.at_head});
          if (ep.edge == f.via_edge) continue;   // do not reuse the entry edge
          if (to == f.v) continue;               // self-loop
          if (tin[to] >= 0) {
            low[f.v] = std::min(low[f.v], tin[to]);
          } else {
            tin[to] = low[to] = timer++;
            stack.push_back(Frame{to, ep.edge, 0});
          }
        } else {
          int v = f.v, via = f.via_edge;
          stack.pop_back();
          if (!stack.empty()) {
            int parent = stack.back().v;
            low[parent] = std::min(low[parent], low[v]);
            if (low[v] > tin[parent]) {
              // count parallel edges between parent and v
              int par = 0;
              for (const Endpoint& ep : incidence_[parent])
                if (endpoint_vertex(Endpoint{ep.edge, !ep.at_head}) == v) ++par;
              if (par == 1) bridge[via] = true;
            }
          }
        }
      }
    }
    return bridge;
  }

  bool is_connected() const {
    if (vertices_.empty()) return false;
    std::vector<bool> seen(vertex_count(), false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    int cnt = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const Endpoint& ep : incidence_[v]) {
        int to = endpoint_vertex(Endpoint{ep.edge, !ep.at_head});
        if (!seen[to]) {
          seen[to] = true;
          ++cnt;
          q.push(to);
        }
      }
    }
    return cnt == vertex_count();
  }

  bool is_tree() const {
    return is_connected() && edge_count() == vertex_count() - 1;
  }

  // Regularity sum r_k over the stored coefficients at an internal vertex.
  Complex regularity_sum(int vidx) const {
    Complex r = 0.0;
    for (const Endpoint& ep : incidence_[vidx]) {
      MatchingCoeff c = matching_coeff(vidx, ep.edge);
      r += c.a1 / c.a;
    }
    return r;
  }

 private:
  static MetricGraph build(const GraphSpec& spec, bool strict) {
    MetricGraph g;
    g.standard_matching_ = spec.standard_matching;
    g.omega_signs_ = spec.omega_signs;
    require(!spec.vertices.empty() && !spec.edges.empty(), Errc::BadInput,
            "graph needs at least one vertex and one edge");
    for (const auto& v : spec.vertices) {
      require(g.vid_to_index_.emplace(v.id, g.vertices_.size()).second, Errc::BadInput,
              "duplicate vertex id");
      g.vertices_.push_back(v);
    }
    for (const auto& e : spec.edges) {
      require(e.length > 0.0 && std::isfinite(e.length), Errc::BadLength,
              "edge length must be a positive real");
      require(g.vid_to_index_.count(e.tail) && g.vid_to_index_.count(e.head),
              Errc::DanglingReference, "edge endpoint refers to a missing vertex");
      require(g.eid_to_index_.emplace(e.id, g.edges_.size()).second, Errc::BadInput,
              "duplicate edge id");
      g.edges_.push_back(e);
    }
    g.incidence_.assign(g.vertices_.size(), {});
    for (int ei = 0; ei < g.edge_count(); ++ei) {
      const EdgeSpec& e = g.edges_[ei];
      g.incidence_[g.vid_to_index_[e.tail]].push_back(Endpoint{ei, false});
      g.incidence_[g.vid_to_index_[e.head]].push_back(Endpoint{ei, true});
    }
    for (auto& inc : g.incidence_) {
      std::sort(inc.begin(), inc.end(), [&](const Endpoint& a, const Endpoint& b) {
        int ia = g.edges_[a.edge].id, ib = g.edges_[b.edge].id;
        return ia != ib ? ia < ib : a.at_head < b.at_head;
      });
    }
    for (const auto& [vid, b] : spec.boundary_conditions) {
      require(g.vid_to_index_.count(vid), Errc::DanglingReference, "bc refers to a missing vertex");
      g.bcs_[vid] = b;
    }
    for (const auto& [vid, coeffs] : spec.matching) {
      require(g.vid_to_index_.count(vid), Errc::DanglingReference,
              "matching coeff refers to a missing vertex");
      for (const auto& [eid, c] : coeffs) {
        require(g.eid_to_index_.count(eid), Errc::DanglingReference,
                "matching coeff refers to a missing edge");
        require(std::abs(c.a) > 0.0 && std::abs(c.a1) > 0.0, Errc::BadInput,
                "matching coefficients a, a1 must be nonzero");
        g.matching_[vid][eid] = c;
      }
    }

    if (strict) {
      require(g.is_connected(), Errc::Disconnected, "graph is not connected");
      for (int vi = 0; vi < g.vertex_count(); ++vi) {
        const VertexSpec& v = g.vertices_[vi];
        bool val1 = g.valency(vi) == 1;
        require(v.boundary == val1, Errc::BadInput,
                "boundary flag must match valency 1 (vertex " + std::to_string(v.id) + ")");
        if (v.boundary) {
          require(g.bcs_.count(v.id) == 1, Errc::BadInput,
                  "boundary vertex needs a boundary condition");
        } else {
          require(g.bcs_.count(v.id) == 0, Errc::BadInput,
                  "internal vertex may not carry a boundary condition");
        }
      }
      if (!g.standard_matching_) {
        require(g.is_tree(), Errc::UnsupportedMatching,
                "general matching coefficients are supported on trees only");
        for (int vi = 0; vi < g.vertex_count(); ++vi) {
          if (g.vertices_[vi].boundary) continue;
          auto it = g.matching_.find(g.vertices_[vi].id);
          for (const Endpoint& ep : g.incidence_[vi]) {
            bool have = it != g.matching_.end() && it->second.count(g.edges_[ep.edge].id);
            require(have, Errc::BadInput, "general matching needs a coefficient triple per edge");
          }
        }
      } else {
        // expand the shorthand: explicit (a, a1, a0) = (1, 1, 0) everywhere
        for (int vi = 0; vi < g.vertex_count(); ++vi) {
          if (g.vertices_[vi].boundary) continue;
          for (const Endpoint& ep : g.incidence_[vi])
            g.matching_[g.vertices_[vi].id][g.edges_[ep.edge].id] = MatchingCoeff{};
        }
      }
      for (int vi = 0; vi < g.vertex_count(); ++vi) {
        if (g.vertices_[vi].boundary) continue;
        Complex r = g.regularity_sum(vi);
        require(std::abs(r + 1.0) > 1e-9, Errc::NonRegularMatching,
                "regularity condition r_k != -1 violated at vertex " +
                    std::to_string(g.vertices_[vi].id));
      }
    }
    return g;
  }

  std::vector<VertexSpec> vertices_;
  std::vector<EdgeSpec> edges_;
  std::vector<std::vector<Endpoint>> incidence_;
  std::map<int, int> vid_to_index_;
  std::map<int, int> eid_to_index_;
  bool standard_matching_ = true;
  std::map<int, std::map<int, MatchingCoeff>> matching_;
  std::map<int, BoundaryCondition> bcs_;
  std::vector<int> omega_signs_;
};

// Rooted ordering of a tree: orders |v|, mu, level sets, height and the
// canonical orientation (x = 0 at the endpoint farther from the root).
struct TreeOrdering {
  int root_vidx = -1;
  int rooted_edge = -1;                    // edge index of the unique root edge
  int height = 0;                          // sigma
  std::vector<int> vertex_order;           // |v| per vertex index
  std::vector<int> edge_order;             // mu per edge index
  std::vector<std::vector<int>> vertex_levels;  // V^(mu), vertex indices
  std::vector<std::vector<int>> edge_levels;    // E^(mu), edge indices; [0] empty
  std::vector<int> far_vertex;             // per edge: vertex index at canonical x = 0
  std::vector<int> near_vertex;            // per edge: vertex index at canonical x = length
  std::vector<int> parent_edge;            // per vertex: edge toward the root (-1 at root)
  std::vector<std::vector<int>> child_edges;    // per vertex: edges away from the root
  std::vector<int> paper_number;           // per edge: e_1..e_p boundary, e_{p+1} rooted, ...

  bool x0_at_input_tail(const MetricGraph& g, int eidx) const {
    return g.vindex(g.edge(eidx).tail) == far_vertex[eidx];
  }
};

inline TreeOrdering root_and_order(const MetricGraph& g, int root_vertex_id) {
  require(g.is_tree(), Errc::NotATree, "root_and_order needs a tree");
  int root = g.vindex(root_vertex_id);
  require(g.is_boundary(root), Errc::RootNotBoundary, "root must be a boundary vertex");

  TreeOrdering t;
  int n = g.vertex_count(), m = g.edge_count();
  t.root_vidx = root;
  t.vertex_order.assign(n, -1);
  t.edge_order.assign(m, -1);
  t.far_vertex.assign(m, -1);
  t.near_vertex.assign(m, -1);
  t.parent_edge.assign(n, -1);
  t.child_edges.assign(n, {});

  std::queue<int> q;
  q.push(root);
  t.vertex_order[root] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const Endpoint& ep : g.endpoints_at(v)) {
      int to = g.endpoint_vertex(Endpoint{ep.edge, !ep.at_head});
      if (t.vertex_order[to] >= 0) continue;
      t.vertex_order[to] = t.vertex_order[v] + 1;
      t.edge_order[ep.edge] = t.vertex_order[to];
      t.near_vertex[ep.edge] = v;
      t.far_vertex[ep.edge] = to;
      t.parent_edge[to] = ep.edge;
      t.child_edges[v].push_back(ep.edge);
      q.push(to);
    }
  }
  t.height = *std::max_element(t.vertex_order.begin(), t.vertex_order.end());
  t.vertex_levels.assign(t.height + 1, {});
  t.edge_levels.assign(t.height + 1, {});
  for (int v = 0; v < n; ++v) t.vertex_levels[t.vertex_order[v]].push_back(v);
  for (int e = 0; e < m; ++e) t.edge_levels[t.edge_order[e]].push_back(e);
  t.rooted_edge = t.child_edges[root].at(0);

  // Paper-style enumeration: non-root boundary edges first (by id), then the
  // rooted edge as e_{p+1}, then the rest by (order, id).
  t.paper_number.assign(m, 0);
  std::vector<int> bdry, rest;
  for (int e = 0; e < m; ++e) {
    if (e == t.rooted_edge) continue;
    if (g.is_boundary(t.far_vertex[e]))
      bdry.push_back(e);
    else
      rest.push_back(e);
  }
  auto by_id = [&](int a, int b) { return g.edge(a).id < g.edge(b).id; };
  std::sort(bdry.begin(), bdry.end(), by_id);
  std::sort(rest.begin(), rest.end(), [&](int a, int b) {
    if (t.edge_order[a] != t.edge_order[b]) return t.edge_order[a] < t.edge_order[b];
    return g.edge(a).id < g.edge(b).id;
  });
  int num = 1;
  for (int e : bdry) t.paper_number[e] = num++;
  t.paper_number[t.rooted_edge] = num++;
  for (int e : rest) t.paper_number[e] = num++;
  return t;
}

// Simple/cycle partition, the contracted tree G*, simple-edge orders and the
// chosen cut endpoint per cycle edge.
struct CycleClassification {
  std::vector<int> simple_edges;          // edge indices (bridges), sorted by id order
  std::vector<int> cycle_edges;           // edge indices forming the cycles
  std::vector<int> blob_of_vertex;        // contracted-class label per vertex index
  int root_vertex = -1;                   // vertex index used as the root
  int rooted_edge = -1;                   // edge index (order 0); -1 when no simple edges
  std::vector<int> omega;                 // per edge index: order of simple edges, -1 otherwise
  int omega_max = 0;
  std::vector<Endpoint> w_endpoints;      // per cycle edge (parallel to cycle_edges)
};

// epsilon[edge id] = 1 moves the cut endpoint w to the tail; default 0 keeps
// the terminal endpoint, matching the paper's free choice.
inline CycleClassification classify_cycles(const MetricGraph& g,
                                           std::optional<int> root_vertex_id = std::nullopt,
                                           const std::map<int, int>& epsilon = {}) {
  CycleClassification c;
  std::vector<bool> bridge = g.find_bridges();
  for (int e = 0; e < g.edge_count(); ++e)
    (bridge[e] ? c.simple_edges : c.cycle_edges).push_back(e);

  // contract cycle components (union-find over cycle-edge endpoints)
  int n = g.vertex_count();
  std::vector<int> uf(n);
  for (int i = 0; i < n; ++i) uf[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (int e : c.cycle_edges) {
    int a = find(g.vindex(g.edge(e).tail)), b = find(g.vindex(g.edge(e).head));
    if (a != b) uf[a] = b;
  }
  c.blob_of_vertex.assign(n, 0);
  for (int v = 0; v < n; ++v) c.blob_of_vertex[v] = find(v);

  // root: given vertex, else the largest-id boundary vertex, else the vertex
  // with the smallest id (p = 0 case of Remark-style graphs)
  if (root_vertex_id) {
    c.root_vertex = g.vindex(*root_vertex_id);
  } else {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (g.is_boundary(v) && (best < 0 || g.vertex(v).id > g.vertex(best).id)) best = v;
    c.root_vertex = best >= 0 ? best : 0;
  }

  // orders on G*: rooted edge = simple edge at the root blob's side nearest the
  // root vertex; BFS over blob adjacency through simple edges
  c.omega.assign(g.edge_count(), -1);
  if (!c.simple_edges.empty()) {
    // rooted edge: the simple edge incident to the root vertex if boundary,
    // else the smallest-id simple edge touching the root's blob
    int rooted = -1;
    for (int e : c.simple_edges) {
      int a = find(g.vindex(g.edge(e).tail)), b = find(g.vindex(g.edge(e).head));
      if (a == find(c.root_vertex) || b == find(c.root_vertex)) {
        if (rooted < 0 || g.edge(e).id < g.edge(rooted).id) rooted = e;
      }
    }
    require(rooted >= 0, Errc::BadInput, "root vertex touches no simple edge");
    c.rooted_edge = rooted;
    c.omega[rooted] = 0;
    // BFS in the edge-adjacency of G*: two simple edges are adjacent when they
    // share a blob
    std::map<int, std::vector<int>> edges_at_blob;
    for (int e : c.simple_edges)
      for (bool ah : {false, true})
        edges_at_blob[find(g.endpoint_vertex(Endpoint{e, ah}))].push_back(e);
    std::queue<int> q;
    q.push(rooted);
    while (!q.empty()) {
      int e = q.front();
      q.pop();
      for (bool ah : {false, true}) {
        int blob = find(g.endpoint_vertex(Endpoint{e, ah}));
        for (int e2 : edges_at_blob[blob]) {
          if (c.omega[e2] < 0) {
            c.omega[e2] = c.omega[e] + 1;
            q.push(e2);
          }
        }
      }
    }
    for (int e : c.simple_edges) c.omega_max = std::max(c.omega_max, c.omega[e]);
  }

  for (int e : c.cycle_edges) {
    int eps = 0;
    auto it = epsilon.find(g.edge(e).id);
    if (it != epsilon.end()) eps = it->second;
    c.w_endpoints.push_back(Endpoint{e, eps == 0});
  }
  return c;
}

struct PseudoCut {
  MetricGraph q;        // the part not containing keep_edge
  MetricGraph ghat;     // the part containing keep_edge
  std::vector<int> q_edge_ids;
  std::vector<int> ghat_edge_ids;
  int cut_vertex_id = 0;
  bool boundary_case = false;  // R(v, Q) is a single simple edge
};

// Splits G at v into Q and Ghat with Q cap Ghat = {v} and keep_edge in Ghat.
inline PseudoCut pseudo_cut(const MetricGraph& g, int vertex_id, int keep_edge_id) {
  int v = g.vindex(vertex_id);
  int ke = g.eindex(keep_edge_id);
  std::vector<bool> bridge = g.find_bridges();
  require(bridge[ke], Errc::NotSimpleEdge, "keep_edge must be a simple edge");
  bool incident = g.vindex(g.edge(ke).tail) == v || g.vindex(g.edge(ke).head) == v;
  require(incident, Errc::VertexNotOnEdge, "cut vertex must be an endpoint of keep_edge");

  std::vector<int> comp = g.edge_components_blocking(v);
  PseudoCut out;
  out.cut_vertex_id = vertex_id;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (comp[e] == comp[ke])
      out.ghat_edge_ids.push_back(g.edge(e).id);
    else
      out.q_edge_ids.push_back(g.edge(e).id);
  }
  require(!out.q_edge_ids.empty(), Errc::BadInput, "cut leaves Q empty");
  out.q = g.induced(out.q_edge_ids);
  out.ghat = g.induced(out.ghat_edge_ids);

  // boundary case: v keeps a single simple edge inside Q
  int q_deg = 0;
  int q_single_edge = -1;
  for (const Endpoint& ep : g.endpoints_at(v)) {
    if (comp[ep.edge] != comp[ke]) {
      ++q_deg;
      q_single_edge = ep.edge;
    }
  }
  out.boundary_case = (q_deg == 1) && bridge[q_single_edge];
  return out;
}

}  // namespace graphsl
