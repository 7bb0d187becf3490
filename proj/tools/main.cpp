// Command-line workbench for Grover walks on truncated trees: spectra, flow
// eigenfunctions, birth densities, evolution, time averages and the full
// invariant verification table.

#include <CLI11.hpp>
#include <iostream>

#include "treewalk/io.hpp"

namespace tw = treewalk;

namespace {

struct CommonOpts {
  std::string tree_path;
  int depth = 3;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  std::string out;
};

tw::TreeSpec load_spec(const CommonOpts& c) { return tw::load_tree_spec(c.tree_path); }

void emit(const CommonOpts& c, const std::string& contents) {
  if (c.out.empty())
    std::cout << contents;
  else
    tw::write_file(c.out, contents);
}

enum class Engine { automatic, dense, radial };

struct InitialChoice {
  bool custom = false;
  tw::InitialKind kind = tw::InitialKind::A;
  std::string custom_path;
};

InitialChoice parse_initial(const std::string& text) {
  InitialChoice ic;
  if (text == "A") {
    ic.kind = tw::InitialKind::A;
  } else if (text == "B") {
    ic.kind = tw::InitialKind::B;
  } else if (text.rfind("custom:", 0) == 0) {
    ic.custom = true;
    ic.custom_path = text.substr(7);
  } else {
    throw tw::SpecError("--initial must be A, B or custom:PATH");
  }
  return ic;
}

bool use_radial(Engine engine, const tw::TreeSpec& spec, const InitialChoice& ic) {
  switch (engine) {
    case Engine::dense:
      return false;
    case Engine::radial:
      if (!spec.is_spherical() || ic.custom)
        throw tw::SpecError(
            "the radial engine needs a spherically symmetric tree and an A/B "
            "initial state");
      return true;
    case Engine::automatic:
      return spec.is_spherical() && !ic.custom;
  }
  return false;
}

// ---------------------------------------------------------------------------
// verify: the cross-module invariant table
// ---------------------------------------------------------------------------

struct CheckTable {
  struct Row {
    std::string name;
    double residual;
    double limit;
    bool pass;
    std::string note;
  };
  std::vector<Row> rows;

  void add(const std::string& name, double residual, double limit,
           const std::string& note = "") {
    rows.push_back(Row{name, residual, limit, residual <= limit, note});
  }
  void add_flag(const std::string& name, bool ok, const std::string& note = "") {
    rows.push_back(Row{name, ok ? 0.0 : 1.0, 0.5, ok, note});
  }

  int print() const {
    int failures = 0;
    std::printf("%-36s %-13s %-10s %s\n", "check", "residual", "limit", "result");
    for (const auto& r : rows) {
      std::printf("%-36s %-13.3e %-10.1e %s%s%s\n", r.name.c_str(), r.residual,
                  r.limit, r.pass ? "PASS" : "FAIL",
                  r.note.empty() ? "" : "  # ", r.note.c_str());
      if (!r.pass) ++failures;
    }
    std::printf("verify: %zu checks, %d failed\n", rows.size(), failures);
    return failures;
  }
};

double max_abs_diff(const std::vector<tw::cplx>& a, const std::vector<tw::cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

tw::ArcState random_arc_state(const tw::TruncatedTree& tree, std::mt19937_64& rng) {
  tw::ArcState psi(tree);
  psi.a = tw::random_unit(tree.arc_count(), rng);
  return psi;
}

tw::VertexFunction random_vertex_function(const tw::TruncatedTree& tree,
                                          std::mt19937_64& rng, int within) {
  tw::VertexFunction f(tree);
  f.f = tw::random_unit(tree.vertex_count(), rng);
  f.restrict_within(within);
  return f;
}

int run_verify(const CommonOpts& c) {
  tw::TreeSpec spec = load_spec(c);
  tw::TruncatedTree tree = tw::build_tree(spec, c.depth);
  const int n = tree.depth();
  std::mt19937_64 rng(c.seed);
  const double tol = c.tol;
  CheckTable table;

  {  // structure
    bool ok = true;
    for (tw::ArcId a = 0; a < tree.arc_count(); ++a)
      ok = ok && tree.reverse(tree.reverse(a)) == a && tree.reverse(a) != a &&
           tree.arc_origin(tree.reverse(a)) == tree.arc_terminus(a);
    table.add_flag("arc_reversal_involution", ok);
    table.add_flag("euler_arc_count",
                   tree.arc_count() == 2 * (tree.vertex_count() - 1));
    bool sums_ok = true;
    for (int i = 0; i <= n; ++i) {
      long long total = 0;
      auto [b, e] = tree.depth_range(i);
      for (tw::VertexId v = b; v < e; ++v) total += tree.branching(v);
      sums_ok = sums_ok &&
                total == tree.count_within(i + 1) - tree.count_within(i);
    }
    table.add_flag("children_sum_matches_shell", sums_ok);
    tw::TruncatedTree again = tw::build_tree(spec, c.depth);
    bool same = again.vertex_count() == tree.vertex_count();
    for (tw::VertexId v = 0; same && v < tree.vertex_count(); ++v)
      same = again.parent(v) == tree.parent(v) &&
             again.declared_degree(v) == tree.declared_degree(v);
    table.add_flag("rebuild_determinism", same);
  }

  {  // boundary operators
    double r_eq5 = 0.0, r_pair = 0.0, r_dots = 0.0, r_proj = 0.0;
    for (int it = 0; it < 50; ++it) {
      tw::VertexFunction f = random_vertex_function(tree, rng, n);
      tw::ArcState psi = random_arc_state(tree, rng);
      for (tw::Boundary dir : {tw::Boundary::terminus, tw::Boundary::origin}) {
        tw::VertexFunction ff =
            tw::apply_boundary(dir, tw::apply_boundary_adjoint(dir, f), std::nullopt);
        ff -= f;
        r_eq5 = std::max(r_eq5, ff.norm());
        tw::cplx lhs = inner(f, tw::apply_boundary(dir, psi));
        tw::cplx rhs = inner(tw::apply_boundary_adjoint(dir, f), psi);
        r_pair = std::max(r_pair, std::abs(lhs - rhs));
        tw::VertexFunction g = random_vertex_function(tree, rng, tree.depth() + 1);
        tw::VertexFunction pg =
            tw::apply_boundary(dir, tw::apply_boundary_adjoint(dir, g, n), n);
        g.restrict_within(n);
        pg -= g;
        r_proj = std::max(r_proj, pg.norm());
      }
      tw::VertexFunction d1 = tw::apply_boundary(tw::Boundary::origin, psi);
      tw::VertexFunction d2 =
          tw::apply_boundary(tw::Boundary::terminus, tw::apply_shift(psi));
      d1 -= d2;
      r_dots = std::max(r_dots, d1.norm());
    }
    table.add("boundary_product_identity", r_eq5, tol);
    table.add("boundary_adjoint_pairing", r_pair, tol);
    table.add("origin_equals_shifted_terminus", r_dots, tol);
    table.add("cutoff_boundary_projection", r_proj, tol);
  }

  {  // shift and walk
    double r_inv = 0.0, r_norm = 0.0, r_sub = 0.0, r_comm = 0.0;
    for (int it = 0; it < 50; ++it) {
      tw::ArcState psi = random_arc_state(tree, rng);
      tw::ArcState ss = tw::apply_shift(tw::apply_shift(psi));
      ss -= psi;
      r_inv = std::max(r_inv, ss.norm());
      tw::ArcState w = tw::apply_walk(psi);
      r_norm = std::max(r_norm, std::abs(w.norm() - psi.norm()));

      tw::VertexFunction f = random_vertex_function(tree, rng, n);
      tw::VertexFunction g = random_vertex_function(tree, rng, n);
      tw::ArcState ell = tw::apply_boundary_adjoint(tw::Boundary::terminus, f, n);
      ell += tw::apply_boundary_adjoint(tw::Boundary::origin, g, n);
      tw::ArcState lhs = tw::apply_walk(ell, n);
      tw::VertexFunction f2T = tw::apply_transition(g, n);
      f2T *= tw::cplx(2.0);
      f2T += f;
      tw::ArcState rhs = tw::apply_boundary_adjoint(tw::Boundary::origin, f2T, n);
      rhs -= tw::apply_boundary_adjoint(tw::Boundary::terminus, g, n);
      lhs -= rhs;
      r_sub = std::max(r_sub, lhs.norm());

      // U^(k) commutes with the projection onto the depth-(k+1) arc span
      int k = n - 1;
      if (k >= 0) {
        tw::ArcState p1 = tw::apply_walk(psi, k);
        for (tw::ArcId a = 0; a < tree.arc_count(); ++a)
          if (tree.arc_depth(a) > k + 1) p1[a] = 0.0;
        tw::ArcState p2 = psi;
        for (tw::ArcId a = 0; a < tree.arc_count(); ++a)
          if (tree.arc_depth(a) > k + 1) p2[a] = 0.0;
        p2 = tw::apply_walk(p2, k);
        p1 -= p2;
        r_comm = std::max(r_comm, p1.norm());
      }
    }
    table.add("shift_involution", r_inv, tol);
    table.add("walk_norm_preservation", r_norm, tol);
    table.add("walk_invariant_subspace_formula", r_sub, tol);
    table.add("walk_commutes_with_arc_projection", r_comm, tol);

    if (tree.arc_count() <= 600) {
      tw::LinearOperator walk_op{
          "U_n", tree.arc_count(), tree.arc_count(),
          [&tree](const std::vector<tw::cplx>& x) {
            tw::ArcState psi(tree);
            psi.a = x;
            return tw::apply_walk(psi).a;
          }};
      tw::DMatrix u = tw::materialize(walk_op);
      tw::DMatrix gap = u.adjoint() * u - tw::DMatrix::identity(u.rows);
      table.add("walk_unitarity_dense", gap.max_abs(), tol);
    }
  }

  {  // strong convergence of the cut-off walk
    double r_exact = 0.0, r_defect = 0.0;
    int d_support = std::max(n - 2, 0);
    for (int it = 0; it < 20; ++it) {
      tw::ArcState psi = random_arc_state(tree, rng);
      for (tw::ArcId a = 0; a < tree.arc_count(); ++a)
        if (tree.arc_depth(a) > d_support) psi[a] = 0.0;
      tw::ArcState full = tw::apply_walk(psi, n);
      for (int k = 0; k <= n; ++k) {
        tw::ArcState cut = tw::apply_walk(psi, k);
        cut -= full;
        tw::VertexFunction df = tw::apply_boundary(tw::Boundary::terminus, psi);
        df.restrict_within(k);
        tw::VertexFunction dfull = tw::apply_boundary(tw::Boundary::terminus, psi);
        dfull -= df;
        double rhs = 2.0 * dfull.norm();
        if (k >= d_support + 1)
          r_exact = std::max(r_exact, cut.norm());
        else
          r_defect = std::max(r_defect, std::abs(cut.norm() - rhs));
      }
    }
    table.add("cutoff_exact_inside_support", r_exact, 1e-15);
    table.add("cutoff_defect_identity", r_defect, tol);
  }

  {  // transition operator
    double r_fact = 0.0, r_sym = 0.0;
    for (int it = 0; it < 50; ++it) {
      tw::VertexFunction f = random_vertex_function(tree, rng, n);
      tw::VertexFunction g = random_vertex_function(tree, rng, n);
      tw::VertexFunction t1 = tw::apply_transition(f, n);
      tw::VertexFunction t2 = tw::apply_boundary(
          tw::Boundary::origin, tw::apply_boundary_adjoint(tw::Boundary::terminus, f, n), n);
      tw::VertexFunction t3 = tw::apply_boundary(
          tw::Boundary::terminus, tw::apply_boundary_adjoint(tw::Boundary::origin, f, n), n);
      tw::VertexFunction d12 = t1;
      d12 -= t2;
      tw::VertexFunction d13 = t1;
      d13 -= t3;
      r_fact = std::max({r_fact, d12.norm(), d13.norm()});
      r_sym = std::max(r_sym,
                       std::abs(inner(g, t1) - inner(tw::apply_transition(g, n), f)));
    }
    table.add("transition_factorization", r_fact, tol);
    table.add("transition_selfadjoint", r_sym, tol);

    if (tree.count_within(n) <= 600) {
      tw::TransitionEig te = tw::eig_transition(tree, n);
      double edge = std::max(std::abs(te.values.front()), std::abs(te.values.back()));
      table.add_flag("transition_spectral_range",
                     edge < 1.0,
                     "max |lambda| = " + tw::fmt(edge));
    }
  }

  bool flows_exist = spec.min_degree() >= 3;
  if (flows_exist) {  // flow eigenfunctions
    double r_ker = 0.0, r_eig = 0.0, r_parity = 0.0;
    auto indices = tw::flow_indices(tree, n);
    for (const auto& idx : indices) {
      tw::FlowFunction flow = tw::build_flow(tree, idx);
      tw::VertexFunction dO = tw::apply_boundary(tw::Boundary::origin, flow.values, n);
      tw::VertexFunction dT = tw::apply_boundary(tw::Boundary::terminus, flow.values, n);
      r_ker = std::max({r_ker, dO.norm(), dT.norm()});
      r_eig = std::max(r_eig, tw::verify_flow_eigen(flow));
      tw::ArcState s = tw::apply_shift(flow.values);
      double parity = idx.sign == tw::Sign::plus ? -1.0 : 1.0;
      tw::ArcState expect = flow.values;
      expect *= tw::cplx(parity);
      s -= expect;
      r_parity = std::max(r_parity, s.norm());
    }
    table.add("flow_kernel_membership", r_ker, tol);
    table.add("flow_eigen_residual", r_eig, 1e-10);
    table.add("flow_shift_parity", r_parity, 0.0);

    long long expected = tree.count_within(n + 1) - 1 - tree.count_within(n);
    table.add_flag("birth_dimension_count",
                   static_cast<long long>(indices.size()) == 2 * expected);

    if (spec.kind == tw::TreeKind::regular) {
      double kappa = spec.degree;
      double r_norm = 0.0;
      for (const auto& idx : indices) {
        tw::FlowFunction flow = tw::build_flow(tree, idx);
        double m = idx.u.is_root() ? kappa : kappa - 1;
        double expect = 2.0 * (kappa - 1) / (m * (kappa - 2));
        r_norm = std::max(r_norm, std::abs(flow.norm_sq() - expect) / expect);
      }
      table.add("flow_norm_formula", r_norm, 1e-10);
    }
    if (spec.is_spherical()) {
      std::vector<tw::FlowFunction> flows;
      for (const auto& idx : tw::flow_indices(tree, std::max(n - 1, 0)))
        flows.push_back(tw::build_flow(tree, idx));
      tw::DMatrix g = tw::gram(flows);
      double off = 0.0;
      for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j)
          if (i != j) off = std::max(off, std::abs(g(i, j)));
      table.add("flow_gram_off_diagonal", off, 1e-10);
    }

    // shell decay: one sample flow, downward shell masses fall at least
    // geometrically with ratio 1/k0. The closed uniform bound printed for the
    // total can undershoot the exact norm (source shell already carries
    // 2/m(u)); reported, not gated.
    {
      tw::FlowFunction flow =
          tw::build_flow(tree, tw::FlowIndex{tw::VertexPath{}, 1, tw::Sign::plus});
      int k0 = spec.min_degree() - 1;
      std::vector<double> shell(n + 1, 0.0);
      for (tw::ArcId a = 0; a < tree.arc_count(); ++a)
        if (tree.arc_downward(a) && flow.values[a] != tw::cplx(0.0))
          shell[tree.arc_depth(a) - 1] += std::norm(flow.values[a]);
      bool decays = true;
      for (int s = 0; s + 1 <= n; ++s)
        if (shell[s + 1] > shell[s] / k0 + 1e-15) decays = false;
      double bound = 2.0 / (static_cast<double>(k0) * (k0 - 1));
      table.add_flag("flow_shell_geometric_decay", decays,
                     "uniform-bound constant " + tw::fmt(bound) +
                         (flow.norm_sq() > bound ? " < exact norm_sq " : " >= norm_sq ") +
                         tw::fmt(flow.norm_sq()));
    }

    double r_complete = 0.0, r_orth = 0.0;
    for (int it = 0; it < 10; ++it) {
      tw::ArcState psi = random_arc_state(tree, rng);
      tw::ArcState inherited = tw::project_inherited(psi, n);
      tw::BirthDecomposition dec = tw::decompose_birth(psi, n);
      tw::ArcState recon = psi;
      recon -= dec.remainder;  // = sum of extracted flows
      recon += inherited;
      recon -= psi;
      r_complete = std::max(r_complete, recon.norm());
      for (const auto& [idx, cval] : dec.coefficients) {
        tw::FlowFunction flow = tw::build_flow(tree, idx);
        r_orth = std::max(r_orth,
                          std::abs(inner(flow.values, dec.remainder)) /
                              std::sqrt(flow.truncated_norm_sq));
      }
    }
    table.add("birth_inherited_completeness", r_complete, 1e-10);
    table.add("birth_remainder_orthogonality", r_orth, 1e-10);
  }

  if (tree.arc_count() <= 600 && flows_exist) {
    tw::SpectralOptions opt;
    opt.cross_validate = true;
    tw::SpectrumReport rep = tw::full_spectrum(tree, n, opt);
    table.add("spectral_mapping_crosscheck", rep.cross_validation_gap, 1e-8);
    table.add("spectral_max_residual", rep.max_residual, 1e-8);
  }

  {  // marked layer on the tree and on a cycle
    tw::MarkedGraph mg = tw::MarkedGraph::from_tree(tree, n);
    mg.validate();
    double r_repr = 0.0;
    for (int it = 0; it < 20; ++it) {
      tw::ArcState psi = random_arc_state(tree, rng);
      std::vector<tw::cplx> viaMarked = tw::marked_walk(mg, psi.a);
      tw::ArcState direct = tw::apply_walk(psi, n);
      r_repr = std::max(r_repr, max_abs_diff(viaMarked, direct.a));
    }
    table.add("marked_tree_reproduces_walk", r_repr, tol);

    tw::MarkedGraph c6 = tw::MarkedGraph::cycle(6, {0});
    double r_shift = 0.0, r_proj = 0.0, r_herm = 0.0;
    for (int it = 0; it < 50; ++it) {
      auto psi = tw::random_unit(c6.arc_count(), rng);
      auto f = tw::random_unit(c6.n_vertices, rng);
      auto lhs = tw::marked_boundary(c6, tw::Boundary::terminus, tw::marked_shift(c6, psi));
      auto rhs = tw::marked_boundary(c6, tw::Boundary::origin, psi);
      r_shift = std::max(r_shift, max_abs_diff(lhs, rhs));
      for (tw::Boundary dir : {tw::Boundary::terminus, tw::Boundary::origin}) {
        auto proj = tw::marked_boundary(c6, dir, tw::marked_boundary_adjoint(c6, dir, f));
        std::vector<tw::cplx> expect = f;
        for (int v = 0; v < c6.n_vertices; ++v)
          if (c6.is_marked[v]) expect[v] = 0.0;
        r_proj = std::max(r_proj, max_abs_diff(proj, expect));
      }
      auto tf = tw::marked_transition(c6, f);
      auto g = tw::random_unit(c6.n_vertices, rng);
      r_herm = std::max(r_herm,
                        std::abs(tw::inner(g, tf) - tw::inner(tw::marked_transition(c6, g), f)));
    }
    table.add("marked_shift_identity", r_shift, tol);
    table.add("marked_boundary_projection", r_proj, tol);
    table.add("marked_transition_selfadjoint", r_herm, tol);

    tw::DMatrix tm = tw::materialize(tw::marked_transition_operator(c6));
    tw::HermEig eig = tw::jacobi_hermitian(tm);
    double radius = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    table.add_flag("marked_transition_radius", radius < 1.0,
                   "spectral radius " + tw::fmt(radius));
  }

  if (flows_exist && spec.is_spherical()) {  // localization overlap criterion
    int pad = 8;
    tw::RadialLimit la = tw::radial_limit(spec, tw::InitialKind::A, pad);
    tw::RadialLimit lb = tw::radial_limit(spec, tw::InitialKind::B, pad);
    tw::TruncatedTree small = tw::build_tree(spec, 4);
    auto ca = tw::birth_overlap_coefficients(tw::make_initial(small, tw::InitialKind::A));
    auto cb = tw::birth_overlap_coefficients(tw::make_initial(small, tw::InitialKind::B));
    bool ok = la.total_mass() == 0.0 && ca.empty() && lb.total_mass() > 0.0 &&
              !cb.empty();
    table.add_flag("localization_overlap_criterion", ok);
  }

  {  // density identity against the built tree
    tw::DensitySeries s = tw::birth_density(spec, n);
    bool ok = true;
    for (const auto& row : s.rows)
      ok = ok && row.b == tree.count_within(row.n) &&
           row.b + row.db == tree.count_within(row.n + 1);
    table.add_flag("density_counts_match_tree", ok);
  }

  return table.print() == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// subcommand handlers
// ---------------------------------------------------------------------------

int run_spectrum(const CommonOpts& c, std::optional<bool> cross_validate) {
  tw::TreeSpec spec = load_spec(c);
  tw::TruncatedTree tree = tw::build_tree(spec, c.depth);
  tw::SpectralOptions opt;
  opt.cross_validate = cross_validate;
  opt.residual_tol = std::max(c.tol, 1e-12);
  tw::SpectrumReport rep = tw::full_spectrum(tree, tree.depth(), opt);
  emit(c, tw::spectrum_to_json(rep, spec).dump(2) + "\n");
  std::cout << "spectrum: dim " << rep.dim << ", inherited " << rep.count_inherited()
            << ", birth_plus " << rep.count_birth_plus << ", birth_minus "
            << rep.count_birth_minus << ", max residual " << tw::fmt(rep.max_residual)
            << (rep.cross_validated ? ", cross-validated" : "") << "\n";
  return 0;
}

int run_flows(const CommonOpts& c, const std::string& vertex, int j,
              const std::string& sign) {
  tw::TreeSpec spec = load_spec(c);
  tw::TruncatedTree tree = tw::build_tree(spec, c.depth);
  tw::Sign s = sign == "-" ? tw::Sign::minus : tw::Sign::plus;
  tw::FlowFunction flow =
      tw::build_flow(tree, tw::FlowIndex{tw::VertexPath::parse(vertex), j, s});
  emit(c, tw::flow_csv(flow));
  std::cout << "flow " << flow.index.str() << ": truncated norm_sq "
            << tw::fmt(flow.truncated_norm_sq) << ", tail "
            << tw::fmt(flow.tail_norm_sq) << (flow.tail_exact ? " (exact)" : " (bound)")
            << ", eigen residual " << tw::fmt(tw::verify_flow_eigen(flow)) << "\n";
  return 0;
}

int run_density(const CommonOpts& c, int max_depth) {
  tw::TreeSpec spec = load_spec(c);
  tw::DensitySeries s = tw::birth_density(spec, max_depth);
  emit(c, tw::density_csv(spec, s));
  const auto& last = s.rows.back();
  std::cout << "density: n " << last.n << ", rho " << tw::fmt(last.rho);
  if (s.converged)
    std::cout << ", limit estimate " << tw::fmt(s.rho_limit) << " (h "
              << tw::fmt(s.h) << ")";
  else if (s.rows.size() >= 3)
    std::cout << ", non-stabilized ratio window h in [" << tw::fmt(s.h_minus) << ", "
              << tw::fmt(s.h_plus) << "], rho in [" << tw::fmt(s.rho_minus) << ", "
              << tw::fmt(s.rho_plus) << "]";
  std::cout << "\n";
  return 0;
}

tw::ArcState dense_initial(const tw::TruncatedTree& tree, const InitialChoice& ic) {
  if (!ic.custom) return tw::make_initial(tree, ic.kind);
  std::ifstream in(ic.custom_path);
  if (!in) throw tw::SpecError("cannot read state file '" + ic.custom_path + "'");
  nlohmann::json j;
  in >> j;
  return tw::arc_state_from_json(tree, j, true);
}

std::string initial_tag(const InitialChoice& ic) {
  if (ic.custom) return "custom";
  return ic.kind == tw::InitialKind::A ? "A" : "B";
}

int run_evolve(const CommonOpts& c, const InitialChoice& ic, int steps, Engine engine,
               bool exact) {
  tw::TreeSpec spec = load_spec(c);
  if (use_radial(engine, spec, ic)) {
    int cutoff = exact ? std::max(c.depth, steps + 1) : c.depth;
    tw::RadialState st = tw::radial_initial(spec, ic.kind, cutoff + 1);
    std::string out = "# schema=treewalk.radial_trajectory/1 initial=" +
                      initial_tag(ic) + " engine=radial\n";
    out += "step,depth,vertex_count,value_per_vertex\n";
    for (int t = 0; t <= steps; ++t) {
      tw::RadialDistribution d = tw::radial_measure(st);
      for (std::size_t depth = 0; depth < d.per_vertex.size(); ++depth)
        out += std::to_string(t) + "," + std::to_string(depth) + "," +
               tw::fmt(d.counts[depth]) + "," + tw::fmt(d.per_vertex[depth]) + "\n";
      if (t < steps) tw::radial_step(st, cutoff);
    }
    emit(c, out);
    std::cout << "evolve: radial engine, " << steps << " steps, cutoff " << cutoff
              << (exact && cutoff >= steps + 1 ? ", exact semantics" : ", reflecting")
              << "\n";
    return 0;
  }
  int depth = c.depth;
  tw::TruncatedTree tree = tw::build_tree(spec, depth);
  tw::ArcState psi0 = dense_initial(tree, ic);
  if (exact) {
    int required = psi0.support_depth() + steps;
    if (depth < required) {
      std::cout << "evolve: padding depth to " << required
                << " for exact semantics (estimated state memory ";
      tw::TruncatedTree padded = tw::build_tree(spec, required);
      std::cout << (padded.arc_count() * 16 / 1024) << " KiB)\n";
      tree = std::move(padded);
      psi0 = dense_initial(tree, ic);
      depth = required;
    }
  }
  tw::EvolveResult res = tw::evolve(psi0, steps, depth, exact);
  for (auto& d : res.per_step) d.initial_tag = initial_tag(ic);
  emit(c, tw::trajectory_csv(res.per_step));
  std::cout << "evolve: dense engine, " << steps << " steps on depth " << depth
            << ", final norm_sq " << tw::fmt(res.final_state.norm_sq()) << "\n";
  return 0;
}

int run_timeavg(const CommonOpts& c, const InitialChoice& ic, int steps, Engine engine,
                bool exact) {
  tw::TreeSpec spec = load_spec(c);
  if (use_radial(engine, spec, ic)) {
    int cutoff = exact ? std::max(c.depth, steps + 1) : c.depth;
    tw::RadialDistribution avg = tw::radial_cesaro(spec, ic.kind, steps, cutoff);
    emit(c, tw::radial_distribution_csv(avg));
    std::cout << "timeavg: radial engine, T " << steps << ", max value "
              << tw::fmt(avg.max_value()) << ", total within window "
              << tw::fmt(avg.total()) << "\n";
    return 0;
  }
  tw::TruncatedTree tree = tw::build_tree(spec, c.depth);
  tw::ArcState psi0 = dense_initial(tree, ic);
  tw::FindingDistribution avg = tw::cesaro_average(psi0, steps, c.depth, exact);
  avg.initial_tag = initial_tag(ic);
  emit(c, tw::distribution_csv(avg));
  std::cout << "timeavg: dense engine, T " << steps << ", max value "
            << tw::fmt(avg.max_value()) << "\n";
  return 0;
}

int run_limit(const CommonOpts& c, const InitialChoice& ic, Engine engine) {
  tw::TreeSpec spec = load_spec(c);
  if (use_radial(engine, spec, ic)) {
    tw::RadialLimit lim = tw::radial_limit(spec, ic.kind, c.depth);
    lim.primary.initial_tag = initial_tag(ic);
    emit(c, tw::radial_distribution_csv(lim.primary));
    std::cout << "limit: radial engine, projection masses (" << tw::fmt(lim.mass_plus)
              << ", " << tw::fmt(lim.mass_minus) << ")\n";
    if (spec.kind == tw::TreeKind::regular && ic.kind == tw::InitialKind::B) {
      std::cout << "depth  per_vertex     combined_form  printed_form\n";
      for (int d = 0; d <= std::min(c.depth, 6); ++d)
        std::printf("%-6d %-14.8g %-14.8g %-14.8g\n", d, lim.primary.per_vertex[d],
                    lim.combined.per_vertex[d], tw::printed_limit_value(spec.degree, d));
    }
    return 0;
  }
  tw::TruncatedTree tree = tw::build_tree(spec, c.depth);
  tw::ArcState psi0 = dense_initial(tree, ic);
  tw::LimitDistribution lim = tw::limit_distribution(psi0);
  lim.primary.initial_tag = initial_tag(ic);
  emit(c, tw::distribution_csv(lim.primary));
  std::cout << "limit: dense engine, projection masses (" << tw::fmt(lim.mass_plus)
            << ", " << tw::fmt(lim.mass_minus) << "), " << lim.hypothesis << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grover walk workbench on Dirichlet-truncated trees"};
  app.require_subcommand(1);

  CommonOpts c;
  int steps = 16;
  int max_depth = 8;
  std::string initial_text = "A";
  std::string vertex = "";
  int flow_j = 1;
  std::string flow_sign = "+";
  bool exact = false;
  bool no_cross = false, force_cross = false;
  std::string engine_text = "auto";

  auto add_common = [&](CLI::App* cmd, bool needs_tree = true) {
    auto* opt = cmd->add_option("--tree", c.tree_path, "tree spec JSON file");
    if (needs_tree) opt->required();
    cmd->add_option("--depth", c.depth, "truncation depth n");
    cmd->add_option("--tol", c.tol, "residual tolerance for checks");
    cmd->add_option("--seed", c.seed, "seed for randomized checks");
    cmd->add_option("--out", c.out, "output file (stdout when omitted)");
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "full eigendecomposition of the cut-off walk");
  add_common(spectrum);
  spectrum->add_flag("--no-cross-validate", no_cross, "skip the dense oracle");
  spectrum->add_flag("--cross-validate", force_cross, "force the dense oracle");

  CLI::App* flows = app.add_subcommand("flows", "build one flow eigenfunction and dump it");
  add_common(flows);
  flows->add_option("--vertex", vertex, "source vertex path, e.g. '' or '0.2'");
  flows->add_option("--j", flow_j, "phase index, 1 <= j <= m(u)-1");
  flows->add_option("--sign", flow_sign, "+ or -")->check(CLI::IsMember({"+", "-"}));

  CLI::App* density = app.add_subcommand("density", "birth-eigenvalue density per depth");
  add_common(density);
  density->add_option("--max-depth", max_depth, "last depth of the series");

  CLI::App* evolve = app.add_subcommand("evolve", "run the walk and record distributions");
  add_common(evolve);
  evolve->add_option("--steps", steps, "number of steps");
  evolve->add_option("--initial", initial_text, "A, B or custom:PATH");
  evolve->add_flag("--exact", exact, "require exact infinite-tree semantics");
  evolve->add_option("--engine", engine_text, "auto, dense or radial")
      ->check(CLI::IsMember({"auto", "dense", "radial"}));

  CLI::App* timeavg = app.add_subcommand("timeavg", "Cesaro time-averaged distribution");
  add_common(timeavg);
  timeavg->add_option("--steps", steps, "number of averaged steps T");
  timeavg->add_option("--initial", initial_text, "A, B or custom:PATH");
  timeavg->add_flag("--exact", exact, "require exact infinite-tree semantics");
  timeavg->add_option("--engine", engine_text, "auto, dense or radial")
      ->check(CLI::IsMember({"auto", "dense", "radial"}));

  CLI::App* limit = app.add_subcommand("limit", "time-averaged limit via eigenspace projection");
  add_common(limit);
  limit->add_option("--initial", initial_text, "A, B or custom:PATH");
  limit->add_option("--engine", engine_text, "auto, dense or radial")
      ->check(CLI::IsMember({"auto", "dense", "radial"}));

  CLI::App* verify = app.add_subcommand("verify", "run the full invariant table");
  add_common(verify);

  CLI11_PARSE(app, argc, argv);

  try {
    Engine engine = engine_text == "dense"    ? Engine::dense
                    : engine_text == "radial" ? Engine::radial
                                              : Engine::automatic;
    if (spectrum->parsed()) {
      std::optional<bool> cross;
      if (no_cross) cross = false;
      if (force_cross) cross = true;
      return run_spectrum(c, cross);
    }
    if (flows->parsed()) return run_flows(c, vertex, flow_j, flow_sign);
    if (density->parsed()) return run_density(c, max_depth);
    if (evolve->parsed()) return run_evolve(c, parse_initial(initial_text), steps, engine, exact);
    if (timeavg->parsed()) return run_timeavg(c, parse_initial(initial_text), steps, engine, exact);
    if (limit->parsed()) return run_limit(c, parse_initial(initial_text), engine);
    if (verify->parsed()) return run_verify(c);
  } catch (const tw::ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return 2;
  } catch (const tw::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
