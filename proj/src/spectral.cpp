#include "treewalk/spectral.hpp"

#include <algorithm>

namespace treewalk {

cplx joukowski(cplx z) {
  if (z == cplx(0.0)) throw SpecError("Joukowski transform undefined at 0");
  return 0.5 * (z + 1.0 / z);
}

std::pair<cplx, cplx> inverse_joukowski(double lambda) {
  if (std::abs(lambda) > 1.0)
    throw SpecError("inverse Joukowski needs |lambda| <= 1, got " +
                    std::to_string(lambda));
  double theta = std::acos(lambda);
  return {std::polar(1.0, theta), std::polar(1.0, -theta)};
}

TransitionEig eig_transition(const TruncatedTree& tree, int cutoff,
                             const SpectralOptions& opt) {
  if (cutoff < 0 || cutoff > tree.depth())
    throw SpecError("cutoff outside truncation");
  const VertexId nv = tree.count_within(cutoff);
  if (nv > opt.eig_cap)
    throw SpecError("|V_n| = " + std::to_string(nv) + " exceeds dense eigensolve cap " +
                    std::to_string(opt.eig_cap));

  RMatrix t(nv, nv);
  for (VertexId v = 1; v < nv; ++v) {
    VertexId p = tree.parent(v);
    double w = 1.0 / std::sqrt(static_cast<double>(tree.declared_degree(v)) *
                               static_cast<double>(tree.declared_degree(p)));
    t(p, v) = w;
    t(v, p) = w;
  }
  RMatrix t_copy = t;
  SymEig eig = jacobi_symmetric(std::move(t), 1e-13);

  TransitionEig out;
  out.values = eig.values;
  out.vectors.reserve(nv);
  for (int k = 0; k < nv; ++k) {
    if (std::abs(eig.values[k]) >= 1.0 - 1e-12)
      throw ConsistencyError("spectral-range violation: |lambda| = " +
                             std::to_string(std::abs(eig.values[k])) +
                             " reaches 1; the Dirichlet cut-off spectrum must stay "
                             "inside (-1, 1)");
    VertexFunction f(tree);
    for (VertexId i = 0; i < nv; ++i) f[i] = eig.vectors(i, k);
    out.vectors.push_back(std::move(f));
  }

  // residuals against the stored matrix; full check at moderate sizes
  int stride = nv <= 1024 ? 1 : (nv + 1023) / 1024;
  std::vector<double> x(nv);
  for (int k = 0; k < nv; k += stride) {
    for (VertexId i = 0; i < nv; ++i) x[i] = eig.vectors(i, k);
    std::vector<double> y = t_copy.apply(x);
    double r2 = 0.0;
    for (VertexId i = 0; i < nv; ++i) {
      double d = y[i] - eig.values[k] * x[i];
      r2 += d * d;
    }
    out.max_residual = std::max(out.max_residual, std::sqrt(r2));
  }
  if (out.max_residual > 1e-10)
    throw ConsistencyError("transition eigensolve residual " +
                           std::to_string(out.max_residual) + " above 1e-10");
  return out;
}

std::pair<cplx, ArcState> lift_eigenpair(double lambda, const VertexFunction& f,
                                         Sign sign, int cutoff,
                                         const SpectralOptions& opt) {
  if (std::abs(lambda) >= 1.0 - opt.lambda_edge)
    throw SpecError("lift: |lambda| within " + std::to_string(opt.lambda_edge) +
                    " of 1; the normalization 1/sqrt(2(1-lambda^2)) degenerates");
  double theta = std::acos(lambda);
  cplx mu = std::polar(1.0, sign == Sign::plus ? theta : -theta);
  ArcState v = apply_boundary_adjoint(Boundary::terminus, f, cutoff);
  ArcState w = apply_boundary_adjoint(Boundary::origin, f, cutoff);
  w *= mu;
  v -= w;
  v *= cplx(1.0 / std::sqrt(2.0 * (1.0 - lambda * lambda)));
  return {mu, std::move(v)};
}

const char* eigen_kind_str(EigenKind k) {
  switch (k) {
    case EigenKind::inherited_plus: return "inherited_plus";
    case EigenKind::inherited_minus: return "inherited_minus";
    case EigenKind::birth_plus: return "birth_plus";
    case EigenKind::birth_minus: return "birth_minus";
  }
  return "?";
}

namespace {

double walk_residual(const ArcState& v, cplx mu) {
  ArcState w = apply_walk(v);
  ArcState scaled = v;
  scaled *= mu;
  w -= scaled;
  return w.norm() / v.norm();
}

// Max elementwise gap between two eigenvalue multisets, compared after
// sorting by the argument of a rotated copy so that no expected eigenvalue
// sits at the wrap point.
double multiset_gap(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return 2.0;
  auto key = [](cplx z) { return std::arg(z * std::polar(1.0, 0.6180339887)); };
  auto cmp = [&](cplx x, cplx y) { return key(x) < key(y); };
  std::sort(a.begin(), a.end(), cmp);
  std::sort(b.begin(), b.end(), cmp);
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

}  // namespace

SpectrumReport full_spectrum(const TruncatedTree& tree, int cutoff,
                             const SpectralOptions& opt) {
  if (cutoff != tree.depth())
    throw SpecError(
        "full_spectrum decomposes the walk on the truncation's own arc set; "
        "build the tree at the requested cutoff depth");
  SpectrumReport rep;
  rep.n = cutoff;
  rep.dim = tree.arc_count();

  TransitionEig te = eig_transition(tree, cutoff, opt);
  for (std::size_t k = 0; k < te.values.size(); ++k) {
    for (Sign s : {Sign::plus, Sign::minus}) {
      auto [mu, v] = lift_eigenpair(te.values[k], te.vectors[k], s, cutoff, opt);
      SpectrumEntry e;
      e.value = mu;
      e.residual = walk_residual(v, mu);
      e.vector = std::move(v);
      e.kind = s == Sign::plus ? EigenKind::inherited_plus : EigenKind::inherited_minus;
      e.source_lambda = te.values[k];
      rep.max_residual = std::max(rep.max_residual, e.residual);
      rep.eigen.push_back(std::move(e));
      if (s == Sign::plus)
        ++rep.count_inherited_plus;
      else
        ++rep.count_inherited_minus;
    }
  }

  for (Sign s : {Sign::plus, Sign::minus}) {
    std::vector<FlowFunction> flows;
    for (const FlowIndex& idx : flow_indices(tree, cutoff, s)) {
      FlowFunction flow = build_flow(tree, idx);
      SpectrumEntry e;
      e.value = sign_eigenvalue(s);
      e.residual = verify_flow_eigen(flow);
      e.kind = s == Sign::plus ? EigenKind::birth_plus : EigenKind::birth_minus;
      e.flow = idx;
      e.vector = flow.values;
      rep.max_residual = std::max(rep.max_residual, e.residual);
      rep.eigen.push_back(std::move(e));
      if (s == Sign::plus)
        ++rep.count_birth_plus;
      else
        ++rep.count_birth_minus;
      flows.push_back(std::move(flow));
    }
    (s == Sign::plus ? rep.gram_plus : rep.gram_minus) = gram(flows);
  }

  long long expected_birth = tree.count_within(cutoff + 1) - 1 - tree.count_within(cutoff);
  if (rep.count_birth_plus != expected_birth ||
      rep.count_birth_minus != expected_birth || rep.total() != rep.dim)
    throw ConsistencyError(
        "spectral completeness failure: counts " + std::to_string(rep.total()) +
        " do not fill dim " + std::to_string(rep.dim));
  if (rep.max_residual > opt.residual_tol)
    throw ConsistencyError("eigenpair residual " + std::to_string(rep.max_residual) +
                           " above tolerance");

  bool do_cross = opt.cross_validate.value_or(rep.dim <= 600);
  if (do_cross) {
    LinearOperator walk_op{
        "U_n", rep.dim, rep.dim, [&tree, cutoff](const std::vector<cplx>& x) {
          ArcState psi(tree);
          psi.a = x;
          return apply_walk(psi, cutoff).a;
        }};
    DMatrix u = materialize(walk_op, opt.dense_cap);
    UnitaryEig oracle = eig_unitary(u);
    std::vector<cplx> mine;
    mine.reserve(rep.eigen.size());
    for (const auto& e : rep.eigen) mine.push_back(e.value);
    rep.cross_validation_gap = multiset_gap(std::move(mine), oracle.values);
    if (rep.cross_validation_gap > opt.residual_tol)
      throw ConsistencyError("spectrum disagrees with the dense eigendecomposition "
                             "(gap " + std::to_string(rep.cross_validation_gap) + ")");
    rep.cross_validated = true;
  }
  return rep;
}

namespace {

void check_count_overflow(unsigned long long n, int m) {
  if (n > (1ULL << 62) / static_cast<unsigned long long>(std::max(m, 1)))
    throw SpecError("vertex counts overflow 64-bit range; lower max depth");
}

// Level populations N_0..N_{n_max+1} for an explicit spec: walk the override
// trie, spawning default-degree populations for unlisted children.
std::vector<unsigned long long> explicit_levels(const TreeSpec& spec, int n_max) {
  struct Node {
    std::map<int, int> children;  // child index -> trie node id
    int m = 0;
  };
  std::vector<Node> trie(1);
  auto node_m = [&spec](const std::string& path, int depth) {
    auto it = spec.children_counts.find(path);
    if (it != spec.children_counts.end()) return it->second;
    return depth == 0 ? spec.default_degree : spec.default_degree - 1;
  };
  trie[0].m = node_m("", 0);
  for (const auto& [key, m] : spec.children_counts) {
    VertexPath p = VertexPath::parse(key);
    int cur = 0;
    std::string prefix;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
      int k = p.steps[i];
      if (k >= trie[cur].m)
        throw SpecError("children_counts names nonexistent vertex '" + key + "'");
      auto it = trie[cur].children.find(k);
      if (it == trie[cur].children.end()) {
        if (!prefix.empty()) prefix += '.';
        prefix += std::to_string(k);
        trie.push_back(Node{{}, node_m(prefix, static_cast<int>(i) + 1)});
        it = trie[cur].children.emplace(k, static_cast<int>(trie.size() - 1)).first;
      } else {
        if (!prefix.empty()) prefix += '.';
        prefix += std::to_string(k);
      }
      cur = it->second;
    }
    (void)m;
  }

  int md = spec.default_degree;
  std::vector<unsigned long long> levels{1};
  std::vector<int> frontier{0};            // trie nodes at this depth
  unsigned long long default_pop = 0;      // default vertices at this depth
  for (int d = 0; d <= n_max; ++d) {
    check_count_overflow(default_pop, md);
    unsigned long long next_default = default_pop * (d == 0 ? 0 : md - 1);
    if (d == 0 && default_pop) next_default = default_pop * md;
    std::vector<int> next_frontier;
    unsigned long long next_total = next_default;
    for (int id : frontier) {
      next_total += trie[id].m;
      next_default += trie[id].m - static_cast<int>(trie[id].children.size());
      for (auto& [k, child] : trie[id].children) next_frontier.push_back(child);
    }
    check_count_overflow(next_total, 2);
    levels.push_back(next_total);
    frontier = std::move(next_frontier);
    default_pop = next_default;
  }
  return levels;
}

}  // namespace

DensitySeries birth_density(const TreeSpec& spec, int n_max) {
  spec.validate();
  if (n_max < 0) throw SpecError("max depth must be >= 0");

  std::vector<unsigned long long> levels;
  if (spec.is_spherical()) {
    levels.assign(1, 1);
    for (int d = 0; d <= n_max; ++d) {
      int m = spec.children_at_depth(d);
      check_count_overflow(levels.back(), m);
      levels.push_back(levels.back() * m);
    }
  } else {
    levels = explicit_levels(spec, n_max);
  }

  DensitySeries s;
  unsigned long long b = 1;  // |V_0|
  for (int n = 0; n <= n_max; ++n) {
    unsigned long long db = levels[n + 1];
    DensityRow r;
    r.n = n;
    r.b = static_cast<long long>(b);
    r.db = static_cast<long long>(db);
    r.ratio = static_cast<double>(db) / static_cast<double>(b);
    r.birth_per_sign = static_cast<long long>(b + db - 1 - b);
    r.dim_total = 2 * static_cast<long long>(b + db - 1);
    r.rho = static_cast<double>(r.birth_per_sign) / static_cast<double>(r.dim_total);
    s.rows.push_back(r);
    b += db;
  }

  if (s.rows.size() >= 3) {
    double r0 = s.rows[s.rows.size() - 3].ratio;
    double r1 = s.rows[s.rows.size() - 2].ratio;
    double r2 = s.rows[s.rows.size() - 1].ratio;
    double lo = std::min({r0, r1, r2}), hi = std::max({r0, r1, r2});
    if ((hi - lo) <= 1e-3 * std::abs(r2)) {
      s.converged = true;
      s.h = r2;
      s.rho_limit = density_limit_formula(r2);
    } else {
      s.h_minus = lo;
      s.h_plus = hi;
      s.rho_minus = density_limit_formula(lo);
      s.rho_plus = density_limit_formula(hi);
    }
  }
  return s;
}

}  // namespace treewalk
