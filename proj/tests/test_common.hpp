#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "graphsl/metric_graph.hpp"
#include "graphsl/potential.hpp"

namespace gtest_graphs {

using namespace graphsl;

// Single edge: vertex 1 at the tail (x = 0), vertex 0 (root) at the head.
inline MetricGraph interval(double length, BoundaryCondition at_tail, BoundaryCondition at_root) {
  GraphSpec s;
  s.vertices = {{0, true}, {1, true}};
  s.edges = {{1, 1, 0, length}};
  s.boundary_conditions[0] = at_root;
  s.boundary_conditions[1] = at_tail;
  return MetricGraph::validate(s);
}

inline BoundaryCondition dirichlet() { return BoundaryCondition{BcType::Dirichlet, 0.0}; }
inline BoundaryCondition neumann() { return BoundaryCondition{BcType::Neumann, 0.0}; }
inline BoundaryCondition robin(double h) { return BoundaryCondition{BcType::Robin, h}; }

// Two-edge path: leaf 1 -- mid 5 -- root 0.
inline MetricGraph path2(double l1, double l2, BoundaryCondition leaf, BoundaryCondition root) {
  GraphSpec s;
  s.vertices = {{0, true}, {1, true}, {5, false}};
  s.edges = {{1, 1, 5, l1}, {2, 5, 0, l2}};
  s.boundary_conditions[0] = root;
  s.boundary_conditions[1] = leaf;
  return MetricGraph::validate(s);
}

// 3-star with center 10, leaves 1, 2, 3; root = leaf 3 (edge 3 oriented from
// the center). Unit lengths by default.
inline MetricGraph star3(BoundaryCondition b1, BoundaryCondition b2, BoundaryCondition b3,
                         double l1 = 1.0, double l2 = 1.0, double l3 = 1.0) {
  GraphSpec s;
  s.vertices = {{1, true}, {2, true}, {3, true}, {10, false}};
  s.edges = {{1, 1, 10, l1}, {2, 2, 10, l2}, {3, 10, 3, l3}};
  s.boundary_conditions[1] = b1;
  s.boundary_conditions[2] = b2;
  s.boundary_conditions[3] = b3;
  return MetricGraph::validate(s);
}

// Depth-2 caterpillar: root 0 - a(20) - b(21); leaf 1 on a, leaves 2, 3 on b.
inline MetricGraph caterpillar5(BoundaryCondition b1, BoundaryCondition b2, BoundaryCondition b3,
                                BoundaryCondition root) {
  GraphSpec s;
  s.vertices = {{0, true}, {1, true}, {2, true}, {3, true}, {20, false}, {21, false}};
  s.edges = {{1, 1, 20, 1.0}, {2, 2, 21, 1.0}, {3, 3, 21, 1.0}, {4, 21, 20, 1.0}, {5, 20, 0, 1.0}};
  s.boundary_conditions[0] = root;
  s.boundary_conditions[1] = b1;
  s.boundary_conditions[2] = b2;
  s.boundary_conditions[3] = b3;
  return MetricGraph::validate(s);
}

// Lasso: loop edge 2 of length loop_len at vertex 10, pendant edge 1 to the
// boundary vertex 1.
inline MetricGraph lasso(double loop_len = std::numbers::pi, double pendant_len = 1.0,
                         BoundaryCondition bc = dirichlet()) {
  GraphSpec s;
  s.vertices = {{1, true}, {10, false}};
  s.edges = {{1, 10, 1, pendant_len}, {2, 10, 10, loop_len}};
  s.boundary_conditions[1] = bc;
  return MetricGraph::validate(s);
}

// fig. 2.1 tree: 9 edges, boundary {0..5}, root 0, height 4.
inline MetricGraph fig21_tree() {
  GraphSpec s;
  s.vertices = {{0, true}, {1, true}, {2, true}, {3, true}, {4, true}, {5, true},
                {6, false}, {7, false}, {8, false}, {9, false}};
  s.edges = {{1, 1, 6, 1.0}, {2, 2, 9, 1.0}, {3, 3, 9, 1.0}, {4, 4, 8, 1.0}, {5, 5, 8, 1.0},
             {6, 6, 0, 1.0}, {7, 7, 6, 1.0}, {8, 8, 7, 1.0}, {9, 9, 7, 1.0}};
  for (int v : {0, 1, 2, 3, 4, 5}) s.boundary_conditions[v] = dirichlet();
  return MetricGraph::validate(s);
}

// fig. 3.3 graph: 10 edges, boundary {1..4}, two cycle blobs, omega = 1.
inline MetricGraph fig33_graph() {
  GraphSpec s;
  s.vertices = {{1, true}, {2, true}, {3, true}, {4, true},
                {5, false}, {6, false}, {7, false}, {8, false}};
  s.edges = {{1, 1, 6, 1.0}, {2, 2, 5, 1.0}, {3, 3, 5, 1.0}, {4, 7, 4, 1.0}, {5, 6, 5, 1.0},
             {6, 5, 6, 1.0}, {7, 8, 7, 1.0}, {8, 7, 6, 1.0}, {9, 6, 8, 1.0}, {10, 8, 7, 1.0}};
  for (int v : {1, 2, 3, 4}) s.boundary_conditions[v] = dirichlet();
  return MetricGraph::validate(s);
}

// Smooth seeded test potential: a short sum of sine modes.
inline std::vector<double> smooth_samples(int n, double length, std::uint64_t seed,
                                          double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double a1 = coef(rng), a2 = coef(rng), a3 = coef(rng);
  double p1 = coef(rng) * std::numbers::pi, p2 = coef(rng) * std::numbers::pi;
  std::vector<double> q(n + 1);
  for (int i = 0; i <= n; ++i) {
    double x = length * i / n;
    q[i] = amp * (a1 * std::sin(std::numbers::pi * x / length + p1) +
                  0.5 * a2 * std::sin(2 * std::numbers::pi * x / length + p2) +
                  0.3 * a3 * std::cos(3 * std::numbers::pi * x / length));
  }
  return q;
}

inline Potential random_smooth_potential(const MetricGraph& g, int n, std::uint64_t seed,
                                         double amp = 1.0) {
  Potential p;
  std::uint64_t k = 0;
  for (const auto& e : g.edges())
    p.edge_samples[e.id] = smooth_samples(n, e.length, seed + 1000 * (k++), amp);
  for (int vi = 0; vi < g.vertex_count(); ++vi) {
    auto b = g.bc(vi);
    if (b && b->type == BcType::Robin) p.robin[g.vertex(vi).id] = b->h;
  }
  return p;
}

}  // namespace gtest_graphs
