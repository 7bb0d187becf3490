#include "treewalk/marked.hpp"

namespace treewalk {

int MarkedGraph::unmarked_count() const {
  int c = 0;
  for (char m : is_marked)
    if (!m) ++c;
  return c;
}

MarkedGraph MarkedGraph::from_edges(int n_vertices,
                                    const std::vector<std::pair<int, int>>& edges,
                                    const std::vector<int>& marked) {
  MarkedGraph g;
  g.n_vertices = n_vertices;
  g.is_marked.assign(n_vertices, 0);
  for (int m : marked) {
    if (m < 0 || m >= n_vertices) throw SpecError("marked vertex out of range");
    g.is_marked[m] = 1;
  }
  std::vector<int> degree(n_vertices, 0);
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n_vertices || v < 0 || v >= n_vertices || u == v)
      throw SpecError("invalid edge");
    int a = g.arc_count();
    g.arc_origin.push_back(u);
    g.arc_terminus.push_back(v);
    g.arc_origin.push_back(v);
    g.arc_terminus.push_back(u);
    g.arc_reverse.push_back(a + 1);
    g.arc_reverse.push_back(a);
    ++degree[u];
    ++degree[v];
  }
  for (int v = 0; v < n_vertices; ++v)
    if (degree[v] == 0) throw SpecError("isolated vertex " + std::to_string(v));
  g.alpha.resize(g.arc_count());
  for (int a = 0; a < g.arc_count(); ++a)
    g.alpha[a] = 1.0 / std::sqrt(static_cast<double>(degree[g.arc_origin[a]]));
  return g;
}

MarkedGraph MarkedGraph::cycle(int n, const std::vector<int>& marked) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return from_edges(n, edges, marked);
}

MarkedGraph MarkedGraph::from_tree(const TruncatedTree& tree, int cutoff) {
  MarkedGraph g;
  g.n_vertices = tree.vertex_count();
  g.is_marked.assign(g.n_vertices, 0);
  VertexId keep = tree.count_within(cutoff);
  for (VertexId v = keep; v < tree.vertex_count(); ++v) g.is_marked[v] = 1;
  int na = tree.arc_count();
  g.arc_origin.resize(na);
  g.arc_terminus.resize(na);
  g.arc_reverse.resize(na);
  g.alpha.resize(na);
  for (ArcId a = 0; a < na; ++a) {
    g.arc_origin[a] = tree.arc_origin(a);
    g.arc_terminus[a] = tree.arc_terminus(a);
    g.arc_reverse[a] = tree.reverse(a);
    g.alpha[a] = 1.0 / std::sqrt(static_cast<double>(tree.declared_degree(g.arc_origin[a])));
  }
  return g;
}

void MarkedGraph::validate(double tol) const {
  std::vector<double> mass(n_vertices, 0.0);
  for (int a = 0; a < arc_count(); ++a) {
    if (arc_reverse[arc_reverse[a]] != a || arc_reverse[a] == a)
      throw SpecError("arc reversal is not a fixed-point-free involution");
    mass[arc_origin[a]] += std::norm(alpha[a]);
  }
  for (int v = 0; v < n_vertices; ++v) {
    // the boundary-operator identities only read the weight mass at unmarked
    // vertices; marked ones may have part of their arc set beyond the window
    if (is_marked[v] ? mass[v] > 1.0 + tol : std::abs(mass[v] - 1.0) > tol)
      throw SpecError("weight normalization violated at vertex " + std::to_string(v) +
                      " (sum " + std::to_string(mass[v]) + ")");
  }
}

std::vector<cplx> marked_boundary(const MarkedGraph& g, Boundary dir,
                                  const std::vector<cplx>& psi) {
  std::vector<cplx> out(g.n_vertices, cplx(0.0));
  if (dir == Boundary::terminus) {
    for (int e = 0; e < g.arc_count(); ++e)
      out[g.arc_terminus[e]] += g.alpha[g.arc_reverse[e]] * psi[e];
  } else {
    for (int e = 0; e < g.arc_count(); ++e)
      out[g.arc_origin[e]] += g.alpha[e] * psi[e];
  }
  for (int v = 0; v < g.n_vertices; ++v)
    if (g.is_marked[v]) out[v] = 0.0;
  return out;
}

std::vector<cplx> marked_boundary_adjoint(const MarkedGraph& g, Boundary dir,
                                          const std::vector<cplx>& f) {
  std::vector<cplx> out(g.arc_count(), cplx(0.0));
  if (dir == Boundary::terminus) {
    for (int e = 0; e < g.arc_count(); ++e) {
      VertexId v = g.arc_terminus[e];
      if (!g.is_marked[v]) out[e] = std::conj(g.alpha[g.arc_reverse[e]]) * f[v];
    }
  } else {
    for (int e = 0; e < g.arc_count(); ++e) {
      VertexId v = g.arc_origin[e];
      if (!g.is_marked[v]) out[e] = std::conj(g.alpha[e]) * f[v];
    }
  }
  return out;
}

std::vector<cplx> marked_shift(const MarkedGraph& g, const std::vector<cplx>& psi) {
  std::vector<cplx> out(g.arc_count());
  for (int e = 0; e < g.arc_count(); ++e) out[e] = psi[g.arc_reverse[e]];
  return out;
}

std::vector<cplx> marked_walk(const MarkedGraph& g, const std::vector<cplx>& psi) {
  std::vector<cplx> dt = marked_boundary(g, Boundary::terminus, psi);
  std::vector<cplx> out(g.arc_count());
  // (S C psi)(e) with C = 2 d_{T,M}^* d_{T,M} - 1, read through the reversal
  for (int e = 0; e < g.arc_count(); ++e) {
    ArcId r = g.arc_reverse[e];
    VertexId v = g.arc_terminus[r];  // = origin of e
    cplx val = -psi[r];
    if (!g.is_marked[v]) val += 2.0 * std::conj(g.alpha[e]) * dt[v];
    out[e] = val;
  }
  return out;
}

std::vector<cplx> marked_transition(const MarkedGraph& g, const std::vector<cplx>& f) {
  std::vector<cplx> lifted = marked_boundary_adjoint(g, Boundary::terminus, f);
  return marked_boundary(g, Boundary::origin, lifted);
}

LinearOperator marked_walk_operator(const MarkedGraph& g) {
  return LinearOperator{"U_M", g.arc_count(), g.arc_count(),
                        [&g](const std::vector<cplx>& x) { return marked_walk(g, x); }};
}

LinearOperator marked_transition_operator(const MarkedGraph& g) {
  return LinearOperator{
      "T_M", g.n_vertices, g.n_vertices,
      [&g](const std::vector<cplx>& x) { return marked_transition(g, x); }};
}

}  // namespace treewalk
