#include "treewalk/flow.hpp"

#include <algorithm>
#include <numbers>

#include "treewalk/jacobi.hpp"

namespace treewalk {

namespace {

constexpr double kPi = std::numbers::pi;

cplx root_of_unity(int m, long long power) {
  long long p = ((power % m) + m) % m;
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(p) / m);
}

// Sum over t >= 1 of prod_{i=1..t} r(depth0 + i), where r(d) = 1/m(depth d)
// and m is periodic in depth. Converges because every m >= 2.
double spherical_tail_factor(const TreeSpec& spec, int depth0) {
  const int p = static_cast<int>(spec.kind == TreeKind::regular
                                     ? 1
                                     : spec.degrees_by_depth.size());
  double partial = 1.0, sum = 0.0;
  for (int i = 1; i <= p; ++i) {
    int m = spec.degree_at_depth(depth0 + i) - 1;  // depth0 + i >= 1
    partial /= m;
    sum += partial;
  }
  double q = partial;  // product over one full period
  return sum / (1.0 - q);
}

}  // namespace

double spherical_flow_norm_sq(const TreeSpec& spec, int u_depth) {
  if (!spec.is_spherical())
    throw SpecError("exact flow norms need a spherically symmetric spec");
  int m_u = spec.children_at_depth(u_depth);
  double v = 1.0 / m_u, total = v;
  // v_{s+1} = v_s / m(depth u+s+1); closed form via the periodic tail factor
  total += v * spherical_tail_factor(spec, u_depth);
  return 2.0 * total;
}

FlowFunction build_flow(const TruncatedTree& tree, const FlowIndex& idx) {
  const TreeSpec& spec = tree.spec();
  if (spec.min_degree() < 3)
    throw SpecError(
        "flows need minimum degree >= 3; the function generated by a flow on "
        "this tree is not square-summable");

  VertexId u = tree.find(idx.u);
  int m_u = tree.branching(u);
  if (m_u < 2)
    throw SpecError("degenerate flow vertex: m(u) = " + std::to_string(m_u) +
                    " < 2 at '" + idx.u.str() + "'");
  if (idx.j < 1 || idx.j > m_u - 1)
    throw SpecError("flow phase index j=" + std::to_string(idx.j) +
                    " outside 1.." + std::to_string(m_u - 1));
  int d_u = tree.vertex_depth(u);
  if (d_u > tree.depth())
    throw SpecError("flow vertex at depth " + std::to_string(d_u) +
                    " has no materialized child arcs (truncation depth " +
                    std::to_string(tree.depth()) + ")");

  FlowFunction flow;
  flow.index = idx;
  flow.values = ArcState(tree);
  flow.shallow = d_u == tree.depth();
  const double flip = idx.sign == Sign::plus ? -1.0 : 1.0;  // value on reverses
  const double step = idx.sign == Sign::plus ? 1.0 : -1.0;  // sign per generation

  // source shell: omega^k / m(u) on the k-th child arc of u
  std::vector<VertexId> frontier;
  for (int k = 0; k < m_u; ++k) {
    VertexId c = tree.child(u, k);
    cplx val = root_of_unity(m_u, static_cast<long long>(idx.j) * k) / double(m_u);
    flow.values[tree.down_arc(c)] = val;
    flow.values[tree.up_arc(c)] = flip * val;
    frontier.push_back(c);
  }
  // each generation divides by the local branching number
  while (!frontier.empty() && tree.vertex_depth(frontier.front()) <= tree.depth()) {
    std::vector<VertexId> next;
    for (VertexId v : frontier) {
      int m_v = tree.branching(v);
      cplx parent_val = flow.values[tree.down_arc(v)];
      cplx val = step * parent_val / double(m_v);
      for (int k = 0; k < tree.children_materialized(v); ++k) {
        VertexId c = tree.child(v, k);
        flow.values[tree.down_arc(c)] = val;
        flow.values[tree.up_arc(c)] = flip * val;
        next.push_back(c);
      }
    }
    frontier = std::move(next);
  }

  flow.truncated_norm_sq = flow.values.norm_sq();

  // mass of the last materialized downward shell (generation n - d_u)
  int last_gen = tree.depth() - d_u;
  double v_last = 1.0 / m_u;
  if (spec.is_spherical()) {
    for (int s = 1; s <= last_gen; ++s)
      v_last /= spec.degree_at_depth(d_u + s) - 1;
    flow.tail_norm_sq = 2.0 * v_last * spherical_tail_factor(spec, d_u + last_gen);
    flow.tail_exact = true;
  } else {
    double mass = 0.0;
    for (VertexId v : frontier)  // frontier now holds t(last shell)
      mass += std::norm(flow.values[tree.down_arc(v)]);
    int k0 = spec.min_degree() - 1;  // >= 2
    flow.tail_norm_sq = 2.0 * mass / (k0 - 1);
    flow.tail_exact = false;
  }
  return flow;
}

double verify_flow_eigen(const FlowFunction& flow, bool interior_only) {
  const TruncatedTree& tree = *flow.values.tree;
  ArcState walked = apply_walk(flow.values);
  double ev = sign_eigenvalue(flow.index.sign);
  double r2 = 0.0;
  for (ArcId a = 0; a < tree.arc_count(); ++a) {
    if (interior_only && tree.arc_depth(a) > tree.depth()) continue;
    r2 += std::norm(walked[a] - ev * flow.values[a]);
  }
  return std::sqrt(r2) / std::sqrt(flow.truncated_norm_sq);
}

std::vector<FlowIndex> flow_indices(const TruncatedTree& tree, int max_u_depth,
                                    Sign sign) {
  if (tree.spec().min_degree() < 3) return {};  // no square-summable flows
  std::vector<FlowIndex> out;
  VertexId end = tree.count_within(max_u_depth);
  for (VertexId v = 0; v < end; ++v) {
    int m = tree.branching(v);
    for (int j = 1; j <= m - 1; ++j)
      out.push_back(FlowIndex{tree.path_of(v), j, sign});
  }
  return out;
}

std::vector<FlowIndex> flow_indices(const TruncatedTree& tree, int max_u_depth) {
  auto plus = flow_indices(tree, max_u_depth, Sign::plus);
  auto minus = flow_indices(tree, max_u_depth, Sign::minus);
  plus.insert(plus.end(), minus.begin(), minus.end());
  return plus;
}

DMatrix gram(const std::vector<FlowFunction>& flows) {
  int n = static_cast<int>(flows.size());
  DMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    g(i, i) = flows[i].norm_sq();
    for (int j = i + 1; j < n; ++j) {
      cplx v = inner(flows[i].values, flows[j].values);
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  }
  return g;
}

ArcState project_inherited(const ArcState& psi, int cutoff) {
  const TruncatedTree& tree = *psi.tree;
  VertexFunction p = apply_boundary(Boundary::terminus, psi, cutoff);
  VertexFunction q = apply_boundary(Boundary::origin, psi, cutoff);

  // solve (I - T_n^2) a = p - T_n q by conjugate gradients; the operator is
  // positive definite because sigma(T_n) lies strictly inside (-1, 1)
  auto op = [&](const VertexFunction& x) {
    VertexFunction y = apply_transition(apply_transition(x, cutoff), cutoff);
    VertexFunction z = x;
    z -= y;
    return z;
  };
  VertexFunction rhs = p;
  rhs -= apply_transition(q, cutoff);

  VertexFunction a(tree);
  VertexFunction r = rhs, d = rhs;
  double rhs_norm = rhs.norm();
  double rr = r.norm_sq();
  const double tol = std::max(1e-14 * rhs_norm, 1e-300);
  const int max_iter = 10 * tree.count_within(cutoff) + 100;
  int it = 0;
  while (std::sqrt(rr) > tol) {
    if (++it > max_iter)
      throw ConsistencyError("inherited-projection Gram solve failed to converge");
    VertexFunction ad = op(d);
    double da = inner(d, ad).real();
    double alpha = rr / da;
    a += cplx(alpha) * d;
    r -= cplx(alpha) * ad;
    double rr_new = r.norm_sq();
    double beta = rr_new / rr;
    rr = rr_new;
    VertexFunction nd = r;
    nd += cplx(beta) * d;
    d = std::move(nd);
  }

  VertexFunction b = q;
  b -= apply_transition(a, cutoff);
  ArcState out = apply_boundary_adjoint(Boundary::terminus, a, cutoff);
  out += apply_boundary_adjoint(Boundary::origin, b, cutoff);
  return out;
}

namespace {

// The constructive extraction: at each vertex u (breadth-first), the phase
// components of the not-yet-explained amplitude on the child arcs of u are
// the coefficients C_{u,j} = sum_k g_u(e_k) omega_j^{-k}.
void extract_sign(const ArcState& xi, Sign sign, int max_depth,
                  std::map<FlowIndex, cplx>& coeffs, ArcState& recon,
                  double keep_eps) {
  const TruncatedTree& tree = *xi.tree;
  VertexId end = tree.count_within(max_depth);
  for (VertexId u = 0; u < end; ++u) {
    int m = tree.branching(u);
    if (m < 2) continue;
    std::vector<cplx> z(m);
    for (int k = 0; k < m; ++k) {
      ArcId e = tree.child_arc(u, k);
      z[k] = xi[e] - recon[e];
    }
    for (int j = 1; j <= m - 1; ++j) {
      cplx c = 0.0;
      for (int k = 0; k < m; ++k)
        c += z[k] * root_of_unity(m, -static_cast<long long>(j) * k);
      if (std::abs(c) <= keep_eps) continue;
      FlowIndex idx{tree.path_of(u), j, sign};
      FlowFunction flow = build_flow(tree, idx);
      for (ArcId a = 0; a < tree.arc_count(); ++a) recon[a] += c * flow.values[a];
      coeffs[idx] = c;
    }
  }
}

}  // namespace

BirthDecomposition decompose_birth(const ArcState& psi, int max_depth) {
  const TruncatedTree& tree = *psi.tree;
  if (max_depth > tree.depth())
    throw SpecError("decompose_birth: max_depth exceeds the truncation depth");

  ArcState inherited = project_inherited(psi, tree.depth());
  ArcState beta = psi;
  beta -= inherited;
  ArcState s_beta = apply_shift(beta);

  // the +1 eigenflows live in the antisymmetric sector, the -1 flows in the
  // symmetric one
  ArcState xi_plus = beta, xi_minus = beta;
  xi_plus -= s_beta;
  xi_plus *= 0.5;
  xi_minus += s_beta;
  xi_minus *= 0.5;

  BirthDecomposition out;
  out.remainder = psi;
  ArcState recon_plus(tree), recon_minus(tree);
  double keep_eps = 1e-12 * std::max(1.0, psi.norm());
  extract_sign(xi_plus, Sign::plus, max_depth, out.coefficients, recon_plus, keep_eps);
  extract_sign(xi_minus, Sign::minus, max_depth, out.coefficients, recon_minus, keep_eps);
  out.remainder -= recon_plus;
  out.remainder -= recon_minus;
  return out;
}

std::map<FlowIndex, cplx> birth_overlap_coefficients(const ArcState& psi,
                                                     int max_u_depth) {
  const TruncatedTree& tree = *psi.tree;
  int support = psi.support_depth();
  if (support < 0) return {};
  int depth_limit = std::min(support, tree.depth());
  if (max_u_depth >= 0) depth_limit = std::min(depth_limit, max_u_depth);

  std::map<FlowIndex, cplx> out;
  for (Sign sign : {Sign::plus, Sign::minus}) {
    auto indices = flow_indices(tree, depth_limit, sign);
    if (indices.empty()) continue;
    std::vector<FlowFunction> flows;
    flows.reserve(indices.size());
    std::vector<cplx> overlaps;
    for (const auto& idx : indices) {
      flows.push_back(build_flow(tree, idx));
      overlaps.push_back(inner(flows.back().values, psi));
    }
    std::vector<cplx> c(indices.size());
    if (tree.spec().is_spherical()) {
      for (std::size_t i = 0; i < indices.size(); ++i)
        c[i] = overlaps[i] / flows[i].norm_sq();
    } else {
      DMatrix g = gram(flows);
      HermEig eg = jacobi_hermitian(g);
      double cond = eg.values.back() / eg.values.front();
      if (!(eg.values.front() > 0.0) || cond > 1e10)
        throw ConsistencyError("flow Gram matrix is ill-conditioned (cond " +
                               std::to_string(cond) + ")");
      // c = G^{-1} overlaps through the eigenbasis
      int n = static_cast<int>(indices.size());
      for (int k = 0; k < n; ++k) {
        cplx proj = 0.0;
        for (int i = 0; i < n; ++i) proj += std::conj(eg.vectors(i, k)) * overlaps[i];
        proj /= eg.values[k];
        for (int i = 0; i < n; ++i) c[i] += eg.vectors(i, k) * proj;
      }
    }
    double keep_eps = 1e-12 * std::max(1.0, std::sqrt(psi.norm_sq()));
    for (std::size_t i = 0; i < indices.size(); ++i)
      if (std::abs(c[i]) > keep_eps) out[indices[i]] = c[i];
  }
  return out;
}

}  // namespace treewalk
