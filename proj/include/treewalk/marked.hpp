#pragma once

#include "treewalk/dense.hpp"
#include "treewalk/walk.hpp"

namespace treewalk {

/// Finite graph with symmetric arcs, per-arc weights alpha normalized so
/// that sum_{a: o(a)=v} |alpha(a)|^2 = 1 at every vertex, and a set of
/// marked vertices where the boundary operators are cut off.
struct MarkedGraph {
  int n_vertices = 0;
  std::vector<VertexId> arc_origin;
  std::vector<VertexId> arc_terminus;
  std::vector<ArcId> arc_reverse;
  std::vector<cplx> alpha;
  std::vector<char> is_marked;

  int arc_count() const { return static_cast<int>(arc_origin.size()); }
  int unmarked_count() const;

  // Isotropic weights alpha(a) = 1/sqrt(deg o(a)) unless custom weights are
  // supplied afterwards.
  static MarkedGraph from_edges(int n_vertices,
                                const std::vector<std::pair<int, int>>& edges,
                                const std::vector<int>& marked);
  static MarkedGraph cycle(int n, const std::vector<int>& marked);

  // The tree truncation as a marked graph: marked set = vertices beyond
  // depth cutoff, isotropic weights from declared degrees.
  static MarkedGraph from_tree(const TruncatedTree& tree, int cutoff);

  void validate(double tol = 1e-12) const;
};

std::vector<cplx> marked_boundary(const MarkedGraph& g, Boundary dir,
                                  const std::vector<cplx>& psi);
std::vector<cplx> marked_boundary_adjoint(const MarkedGraph& g, Boundary dir,
                                          const std::vector<cplx>& f);
std::vector<cplx> marked_shift(const MarkedGraph& g, const std::vector<cplx>& psi);
// U'_M = S'(2 d_{T,M}^* d_{T,M} - 1)
std::vector<cplx> marked_walk(const MarkedGraph& g, const std::vector<cplx>& psi);
// T'_M = d_{O,M} d_{T,M}^* = d_{T,M} d_{O,M}^*
std::vector<cplx> marked_transition(const MarkedGraph& g, const std::vector<cplx>& f);

LinearOperator marked_walk_operator(const MarkedGraph& g);
LinearOperator marked_transition_operator(const MarkedGraph& g);

}  // namespace treewalk
