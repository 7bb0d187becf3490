#include "treewalk/operators.hpp"

namespace treewalk {

namespace {

ArcState wrap_arcs(const TruncatedTree& tree, const std::vector<cplx>& x) {
  ArcState psi(tree);
  psi.a = x;
  return psi;
}

VertexFunction wrap_vertices(const TruncatedTree& tree, const std::vector<cplx>& x) {
  VertexFunction f(tree);
  f.f = x;
  return f;
}

}  // namespace

LinearOperator make_operator(OpTag tag, const TruncatedTree& tree,
                             std::optional<int> cutoff) {
  const int na = tree.arc_count();
  const int nv = tree.vertex_count();
  switch (tag) {
    case OpTag::shift:
      return {"S", na, na, [&tree](const std::vector<cplx>& x) {
                return apply_shift(wrap_arcs(tree, x)).a;
              }};
    case OpTag::boundary_terminus:
      return {"dT", nv, na, [&tree, cutoff](const std::vector<cplx>& x) {
                return apply_boundary(Boundary::terminus, wrap_arcs(tree, x), cutoff).f;
              }};
    case OpTag::boundary_origin:
      return {"dO", nv, na, [&tree, cutoff](const std::vector<cplx>& x) {
                return apply_boundary(Boundary::origin, wrap_arcs(tree, x), cutoff).f;
              }};
    case OpTag::boundary_terminus_adjoint:
      return {"dT_adj", na, nv, [&tree, cutoff](const std::vector<cplx>& x) {
                return apply_boundary_adjoint(Boundary::terminus,
                                              wrap_vertices(tree, x), cutoff)
                    .a;
              }};
    case OpTag::boundary_origin_adjoint:
      return {"dO_adj", na, nv, [&tree, cutoff](const std::vector<cplx>& x) {
                return apply_boundary_adjoint(Boundary::origin, wrap_vertices(tree, x),
                                              cutoff)
                    .a;
              }};
    case OpTag::coin:
      // C = S U since S is an involution
      return {"C", na, na, [&tree, cutoff](const std::vector<cplx>& x) {
                return apply_shift(apply_walk(wrap_arcs(tree, x), cutoff)).a;
              }};
    case OpTag::walk:
      return {"U_n", na, na, [&tree, cutoff](const std::vector<cplx>& x) {
                return apply_walk(wrap_arcs(tree, x), cutoff).a;
              }};
    case OpTag::transition:
      return {"T_n", nv, nv, [&tree, cutoff](const std::vector<cplx>& x) {
                return apply_transition(wrap_vertices(tree, x),
                                        cutoff.value_or(tree.depth()))
                    .f;
              }};
    default:
      throw SpecError("operator tag needs a marked graph, not a tree");
  }
}

LinearOperator make_operator(OpTag tag, const MarkedGraph& graph) {
  const int na = graph.arc_count();
  const int nv = graph.n_vertices;
  switch (tag) {
    case OpTag::shift:
      return {"S", na, na, [&graph](const std::vector<cplx>& x) {
                return marked_shift(graph, x);
              }};
    case OpTag::marked_boundary_terminus:
      return {"dTM", nv, na, [&graph](const std::vector<cplx>& x) {
                return marked_boundary(graph, Boundary::terminus, x);
              }};
    case OpTag::marked_boundary_origin:
      return {"dOM", nv, na, [&graph](const std::vector<cplx>& x) {
                return marked_boundary(graph, Boundary::origin, x);
              }};
    case OpTag::marked_walk:
      return marked_walk_operator(graph);
    case OpTag::marked_transition:
      return marked_transition_operator(graph);
    default:
      throw SpecError("operator tag needs a tree, not a marked graph");
  }
}

}  // namespace treewalk
