#include "treewalk/dynamics.hpp"

#include <algorithm>
#include <numbers>

namespace treewalk {

ArcState make_initial(const TruncatedTree& tree, InitialKind kind, bool normalize) {
  ArcState psi(tree);
  int deg = tree.declared_degree(tree.root());
  for (int k = 0; k < deg; ++k) {
    ArcId e = tree.child_arc(tree.root(), k);
    psi[e] = kind == InitialKind::A
                 ? cplx(1.0)
                 : std::polar(1.0, 2.0 * std::numbers::pi * k / deg);
  }
  if (normalize) psi *= cplx(1.0 / std::sqrt(static_cast<double>(deg)));
  return psi;
}

double FindingDistribution::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double FindingDistribution::max_value() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

FindingDistribution measure(const ArcState& psi) {
  const TruncatedTree& tree = *psi.tree;
  FindingDistribution d;
  d.tree = &tree;
  d.values.assign(tree.vertex_count(), 0.0);
  for (ArcId a = 0; a < tree.arc_count(); ++a)
    d.values[tree.arc_terminus(a)] += std::norm(psi[a]);
  return d;
}

namespace {

int exactness_cutoff(const ArcState& psi0, int steps, std::optional<int> cutoff) {
  const TruncatedTree& tree = *psi0.tree;
  int n = cutoff.value_or(tree.depth());
  int required = psi0.support_depth() + steps;
  if (n < required)
    throw SpecError("exact semantics need cutoff >= support depth + steps = " +
                    std::to_string(required) + ", got " + std::to_string(n));
  return n;
}

}  // namespace

EvolveResult evolve(const ArcState& psi0, int steps, std::optional<int> cutoff,
                    bool exact_semantics) {
  if (steps < 0) throw SpecError("steps must be >= 0");
  int n = exact_semantics ? exactness_cutoff(psi0, steps, cutoff)
                          : cutoff.value_or(psi0.tree->depth());
  EvolveResult out;
  ArcState psi = psi0;
  double norm0 = psi.norm_sq();
  for (int t = 0; t <= steps; ++t) {
    FindingDistribution d = measure(psi);
    d.steps = t;
    d.exact_semantics = exact_semantics;
    out.per_step.push_back(std::move(d));
    if (t < steps) {
      psi = apply_walk(psi, n);
      if (std::abs(psi.norm_sq() - norm0) > 1e-10 * std::max(1.0, norm0))
        throw ConsistencyError("walk step failed to conserve the norm");
    }
  }
  out.final_state = std::move(psi);
  return out;
}

FindingDistribution cesaro_average(const ArcState& psi0, int steps,
                                   std::optional<int> cutoff, bool exact_semantics) {
  if (steps < 1) throw SpecError("time average needs steps >= 1");
  EvolveResult traj = evolve(psi0, steps - 1, cutoff, exact_semantics);
  FindingDistribution avg;
  avg.tree = psi0.tree;
  avg.values.assign(psi0.tree->vertex_count(), 0.0);
  for (const auto& d : traj.per_step)
    for (std::size_t i = 0; i < d.values.size(); ++i) avg.values[i] += d.values[i];
  for (double& v : avg.values) v /= steps;
  avg.time_averaged = true;
  avg.steps = steps;
  avg.exact_semantics = exact_semantics;
  return avg;
}

LimitDistribution limit_distribution(const ArcState& psi0) {
  const TruncatedTree& tree = *psi0.tree;
  LimitDistribution out;
  out.coefficients = birth_overlap_coefficients(psi0);
  out.hypothesis = tree.spec().kind == TreeKind::regular
                       ? "sigma(T) purely continuous (holds for regular trees)"
                       : "sigma(T)=sigma_c(T) hypothesis not verified for this spec";

  ArcState chi_plus(tree), chi_minus(tree);
  for (const auto& [idx, c] : out.coefficients) {
    FlowFunction flow = build_flow(tree, idx);
    ArcState& target = idx.sign == Sign::plus ? chi_plus : chi_minus;
    double mass = std::norm(c) * flow.norm_sq();
    (idx.sign == Sign::plus ? out.mass_plus : out.mass_minus) += mass;
    for (ArcId a = 0; a < tree.arc_count(); ++a) target[a] += c * flow.values[a];
  }

  out.primary.tree = &tree;
  out.primary.values.assign(tree.vertex_count(), 0.0);
  out.combined = out.primary;
  for (ArcId a = 0; a < tree.arc_count(); ++a) {
    VertexId u = tree.arc_terminus(a);
    out.primary.values[u] += std::norm(chi_plus[a]) + std::norm(chi_minus[a]);
    out.combined.values[u] += std::norm(chi_plus[a] + chi_minus[a]);
  }
  out.primary.time_averaged = true;
  out.combined.time_averaged = true;
  return out;
}

// --------------------------- radial engine ---------------------------------

double RadialDistribution::total() const {
  double s = 0.0;
  for (std::size_t d = 0; d < per_vertex.size(); ++d) s += per_vertex[d] * counts[d];
  return s;
}

double RadialDistribution::max_value() const {
  double m = 0.0;
  for (double v : per_vertex) m = std::max(m, v);
  return m;
}

double RadialState::norm_sq() const {
  double s = 0.0, count = 1.0;
  for (std::size_t lvl = 0; lvl < down.size(); ++lvl) {
    count *= spec.children_at_depth(static_cast<int>(lvl));  // vertices at lvl+1
    s += count * (std::norm(down[lvl]) + std::norm(up[lvl]));
  }
  return s;
}

RadialState radial_initial(const TreeSpec& spec, InitialKind kind, int levels) {
  if (!spec.is_spherical())
    throw SpecError("the radial engine needs a spherically symmetric spec");
  if (levels < 1) throw SpecError("radial state needs at least one level");
  RadialState st;
  st.spec = spec;
  st.character = kind == InitialKind::B;
  st.down.assign(levels, cplx(0.0));
  st.up.assign(levels, cplx(0.0));
  st.down[0] = 1.0 / std::sqrt(static_cast<double>(spec.degree_at_depth(0)));
  return st;
}

void radial_step(RadialState& st, int cutoff) {
  const int levels = static_cast<int>(st.down.size());
  std::vector<cplx> nd(levels, cplx(0.0)), nu(levels, cplx(0.0));

  // root: incoming sum vanishes for a nontrivial character, is deg*up[0]
  // for the uniform sector
  nd[0] = st.character ? -st.up[0] : st.up[0];

  for (int d = 1; d <= levels; ++d) {
    cplx from_parent = st.down[d - 1];
    cplx from_children = d < levels ? st.up[d] : cplx(0.0);
    int m = st.spec.children_at_depth(d);
    if (d <= cutoff) {
      int deg = st.spec.degree_at_depth(d);
      cplx coin = (2.0 / deg) * (from_parent + double(m) * from_children);
      nu[d - 1] = coin - from_parent;
      if (d < levels) nd[d] = coin - from_children;
    } else {
      nu[d - 1] = -from_parent;
      if (d < levels) nd[d] = -from_children;
    }
  }
  st.down = std::move(nd);
  st.up = std::move(nu);
}

RadialDistribution radial_measure(const RadialState& st) {
  const int levels = static_cast<int>(st.down.size());
  RadialDistribution out;
  out.spec = st.spec;
  out.per_vertex.assign(levels + 1, 0.0);
  out.counts.assign(levels + 1, 0.0);
  out.counts[0] = 1.0;
  double count = 1.0;
  for (int d = 1; d <= levels; ++d) {
    count *= st.spec.children_at_depth(d - 1);
    out.counts[d] = count;
  }
  int m0 = st.spec.degree_at_depth(0);
  out.per_vertex[0] = double(m0) * std::norm(st.up[0]);
  for (int d = 1; d <= levels; ++d) {
    double v = std::norm(st.down[d - 1]);
    if (d < levels) v += st.spec.children_at_depth(d) * std::norm(st.up[d]);
    out.per_vertex[d] = v;
  }
  return out;
}

RadialDistribution radial_cesaro(const TreeSpec& spec, InitialKind kind, int steps,
                                 int cutoff) {
  if (steps < 1) throw SpecError("time average needs steps >= 1");
  int levels = std::max(cutoff + 1, steps + 2);
  RadialState st = radial_initial(spec, kind, levels);

  RadialDistribution avg = radial_measure(st);
  for (double& v : avg.per_vertex) v = 0.0;
  double norm0 = st.norm_sq();
  for (int t = 0; t < steps; ++t) {
    RadialDistribution d = radial_measure(st);
    for (std::size_t i = 0; i < avg.per_vertex.size(); ++i)
      avg.per_vertex[i] += d.per_vertex[i];
    if (t + 1 < steps) {
      radial_step(st, cutoff);
      if (std::abs(st.norm_sq() - norm0) > 1e-10)
        throw ConsistencyError("radial walk step failed to conserve the norm");
    }
  }
  for (double& v : avg.per_vertex) v /= steps;
  avg.time_averaged = true;
  avg.steps = steps;
  avg.exact_semantics = cutoff >= steps;  // support depth 0 + steps
  avg.initial_tag = kind == InitialKind::A ? "A" : "B";
  return avg;
}

RadialLimit radial_limit(const TreeSpec& spec, InitialKind kind, int max_depth) {
  if (!spec.is_spherical())
    throw SpecError("the radial engine needs a spherically symmetric spec");
  RadialLimit out;
  out.primary.spec = spec;
  out.primary.per_vertex.assign(max_depth + 1, 0.0);
  out.primary.counts.assign(max_depth + 1, 0.0);
  out.primary.counts[0] = 1.0;
  double count = 1.0;
  for (int d = 1; d <= max_depth; ++d) {
    count *= spec.children_at_depth(d - 1);
    out.primary.counts[d] = count;
  }
  out.primary.time_averaged = true;
  out.primary.initial_tag = kind == InitialKind::A ? "A" : "B";
  out.combined = out.primary;
  if (kind == InitialKind::A) return out;  // orthogonal to every flow

  if (spec.min_degree() < 3)
    throw SpecError("no square-summable flows on this spec (minimum degree < 3)");

  int m0 = spec.degree_at_depth(0);
  double overlap = 1.0 / std::sqrt(static_cast<double>(m0));
  double flow_norm_sq = spherical_flow_norm_sq(spec, 0);
  double c = overlap / flow_norm_sq;  // same for both signs
  out.coefficient = c;
  out.mass_plus = c * c * flow_norm_sq;
  out.mass_minus = out.mass_plus;

  // per-arc magnitude of the flow on a downward level-s arc
  std::vector<double> g(max_depth + 2, 0.0);
  g[0] = 1.0 / m0;
  for (int s = 1; s <= max_depth + 1; ++s) g[s] = g[s - 1] / spec.children_at_depth(s);

  double c2 = c * c;
  out.primary.per_vertex[0] = 2.0 * c2 * m0 * g[0] * g[0];
  out.combined.per_vertex[0] = 0.0;
  for (int d = 1; d <= max_depth; ++d) {
    double child_term = spec.children_at_depth(d) * g[d] * g[d];
    // both sign sectors carry the same magnitudes
    out.primary.per_vertex[d] = 2.0 * c2 * (g[d - 1] * g[d - 1] + child_term);
    // (phi+ + phi-) doubles on even-generation downward arcs and odd-
    // generation upward arcs, cancels elsewhere
    double down_w = (d - 1) % 2 == 0 ? 4.0 : 0.0;
    double up_w = d % 2 == 1 ? 4.0 : 0.0;
    out.combined.per_vertex[d] =
        c2 * (down_w * g[d - 1] * g[d - 1] + up_w * child_term);
  }
  return out;
}

double printed_limit_value(int kappa, int dist) {
  double base = 1.0 / (kappa - 1);
  int exponent = 3 * dist + 1 - (dist == 0 ? 1 : 0);
  return 0.5 * (kappa - 2) * (kappa - 2) * std::pow(base, exponent);
}

}  // namespace treewalk
