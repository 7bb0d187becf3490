#include "treewalk/walk.hpp"

namespace treewalk {

namespace {

int resolve_cutoff(const TruncatedTree& tree, std::optional<int> cutoff) {
  int n = cutoff.value_or(tree.depth());
  if (n < 0 || n > tree.depth())
    throw SpecError("cutoff " + std::to_string(n) + " outside truncation depth " +
                    std::to_string(tree.depth()));
  return n;
}

}  // namespace

VertexFunction apply_boundary(Boundary dir, const ArcState& psi,
                              std::optional<int> cutoff) {
  const TruncatedTree& t = *psi.tree;
  VertexFunction out(t);
  for (ArcId e = 0; e < t.arc_count(); ++e) {
    VertexId u = dir == Boundary::terminus ? t.arc_terminus(e) : t.arc_origin(e);
    out[u] += psi[e];
  }
  for (VertexId u = 0; u < t.vertex_count(); ++u)
    out[u] /= std::sqrt(static_cast<double>(t.declared_degree(u)));
  if (cutoff) out.restrict_within(resolve_cutoff(t, cutoff));
  return out;
}

ArcState apply_boundary_adjoint(Boundary dir, const VertexFunction& f,
                                std::optional<int> cutoff) {
  const TruncatedTree& t = *f.tree;
  VertexId keep = cutoff ? t.count_within(resolve_cutoff(t, cutoff)) : t.vertex_count();
  ArcState out(t);
  for (ArcId e = 0; e < t.arc_count(); ++e) {
    VertexId u = dir == Boundary::terminus ? t.arc_terminus(e) : t.arc_origin(e);
    if (u < keep)
      out[e] = f[u] / std::sqrt(static_cast<double>(t.declared_degree(u)));
  }
  return out;
}

ArcState apply_shift(const ArcState& psi) {
  const TruncatedTree& t = *psi.tree;
  ArcState out(t);
  for (ArcId e = 0; e < t.arc_count(); ++e) out[e] = psi[t.reverse(e)];
  return out;
}

ArcState apply_walk(const ArcState& psi, std::optional<int> cutoff) {
  const TruncatedTree& t = *psi.tree;
  int n = resolve_cutoff(t, cutoff);
  VertexId coin_end = t.count_within(n);

  // incoming amplitude sums per vertex
  std::vector<cplx> s(t.vertex_count(), cplx(0.0));
  for (ArcId e = 0; e < t.arc_count(); ++e) s[t.arc_terminus(e)] += psi[e];

  ArcState out(t);
  for (ArcId e = 0; e < t.arc_count(); ++e) {
    VertexId v = t.arc_origin(e);
    cplx val = -psi[t.reverse(e)];
    if (v < coin_end) val += (2.0 / t.declared_degree(v)) * s[v];
    out[e] = val;
  }
  return out;
}

VertexFunction apply_transition(const VertexFunction& f, int cutoff) {
  const TruncatedTree& t = *f.tree;
  VertexId keep = t.count_within(resolve_cutoff(t, cutoff));
  VertexFunction out(t);
  // one edge per non-root vertex, both directions
  for (VertexId v = 1; v < keep; ++v) {
    VertexId p = t.parent(v);
    if (p >= keep) continue;
    double w = 1.0 / std::sqrt(static_cast<double>(t.declared_degree(v)) *
                               static_cast<double>(t.declared_degree(p)));
    out[p] += w * f[v];
    out[v] += w * f[p];
  }
  return out;
}

}  // namespace treewalk
