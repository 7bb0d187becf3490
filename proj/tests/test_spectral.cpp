#include <doctest.h>

#include <numeric>

#include "treewalk/spectral.hpp"

using namespace treewalk;
using doctest::Approx;

TEST_CASE("joukowski transform basics") {
  CHECK(std::abs(joukowski(cplx(0.0, 1.0))) < 1e-15);
  auto [p1, p2] = inverse_joukowski(1.0);
  CHECK(std::abs(p1 - cplx(1.0)) < 1e-12);
  CHECK(std::abs(p2 - cplx(1.0)) < 1e-12);
  auto [q1, q2] = inverse_joukowski(0.5);
  CHECK(q1.real() == Approx(0.5));
  CHECK(q1.imag() == Approx(std::sqrt(3.0) / 2.0));
  CHECK(q2.imag() == Approx(-std::sqrt(3.0) / 2.0));
  for (double lam : {-0.99, -0.5, 0.0, 0.3, 0.97}) {
    auto [a, b] = inverse_joukowski(lam);
    CHECK(std::abs(joukowski(a) - cplx(lam)) < 1e-14);
    CHECK(std::abs(joukowski(b) - cplx(lam)) < 1e-14);
  }
  CHECK_THROWS_AS(inverse_joukowski(1.5), SpecError);
}

TEST_CASE("transition eigensolve on the star") {
  TruncatedTree t = build_tree(TreeSpec::regular_tree(3), 1);
  TransitionEig e = eig_transition(t, 1);
  REQUIRE(e.values.size() == 4);
  CHECK(e.values[0] == Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(std::abs(e.values[1]) < 1e-12);
  CHECK(std::abs(e.values[2]) < 1e-12);
  CHECK(e.values[3] == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("transition spectrum stays inside the band and is symmetric") {
  TruncatedTree t = build_tree(TreeSpec::regular_tree(3), 4);
  TransitionEig e = eig_transition(t, 4);
  double band = 2.0 * std::sqrt(2.0) / 3.0;
  for (double v : e.values) CHECK(std::abs(v) <= band + 1e-9);
  // bipartite: flipping the sign on odd depths conjugates T_n to -T_n
  int n = static_cast<int>(e.values.size());
  for (int i = 0; i < n; ++i)
    CHECK(e.values[i] == Approx(-e.values[n - 1 - i]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("lift at lambda = 0 gives +-i") {
  TruncatedTree t = build_tree(TreeSpec::regular_tree(3), 1);
  TransitionEig e = eig_transition(t, 1);
  // values[1], values[2] vanish
  auto [mu, v] = lift_eigenpair(e.values[1], e.vectors[1], Sign::plus, 1);
  CHECK(std::abs(mu - cplx(0.0, 1.0)) < 1e-12);
  ArcState direct = apply_boundary_adjoint(Boundary::terminus, e.vectors[1], 1);
  ArcState io = apply_boundary_adjoint(Boundary::origin, e.vectors[1], 1);
  io *= cplx(0.0, 1.0);
  direct -= io;
  direct *= cplx(1.0 / std::sqrt(2.0));
  direct -= v;
  CHECK(direct.norm() < 1e-13);
}

TEST_CASE("lift eigenpair example and unit norm") {
  TruncatedTree t = build_tree(TreeSpec::regular_tree(3), 1);
  TransitionEig e = eig_transition(t, 1);
  double lam = e.values[3];  // 1/sqrt(3)
  auto [mu, v] = lift_eigenpair(lam, e.vectors[3], Sign::plus, 1);
  CHECK(mu.real() == Approx(0.5773502691896258).epsilon(1e-10));
  CHECK(mu.imag() == Approx(0.816496580927726).epsilon(1e-10));
  CHECK(v.norm() == Approx(1.0).epsilon(1e-12));

  ArcState walked = apply_walk(v, 1);
  ArcState expect = v;
  expect *= mu;
  walked -= expect;
  CHECK(walked.norm() < 1e-10);

  CHECK_THROWS_AS(lift_eigenpair(1.0 - 1e-10, e.vectors[3], Sign::plus, 1),
                  SpecError);
}

TEST_CASE("lifted vectors stay unit for random admissible pairs") {
  TruncatedTree t = build_tree(TreeSpec::regular_tree(3), 2);
  TransitionEig e = eig_transition(t, 2);
  for (std::size_t k = 0; k < e.values.size(); ++k) {
    for (Sign s : {Sign::plus, Sign::minus}) {
      auto [mu, v] = lift_eigenpair(e.values[k], e.vectors[k], s, 2);
      CHECK(v.norm() == Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("full spectrum counts at small depth") {
  TruncatedTree t1 = build_tree(TreeSpec::regular_tree(3), 1);
  SpectralOptions opt;
  opt.cross_validate = true;
  SpectrumReport r1 = full_spectrum(t1, 1, opt);
  CHECK(r1.count_inherited() == 8);
  CHECK(r1.count_birth_plus == 5);
  CHECK(r1.count_birth_minus == 5);
  CHECK(r1.total() == 18);
  CHECK(r1.cross_validated);

  TruncatedTree t2 = build_tree(TreeSpec::regular_tree(3), 2);
  SpectrumReport r2 = full_spectrum(t2, 2, opt);
  CHECK(r2.count_inherited() == 20);
  CHECK(r2.count_birth_plus == 11);
  CHECK(r2.count_birth_minus == 11);
  CHECK(r2.total() == 42);
  CHECK(r2.max_residual < 1e-8);
  CHECK(r2.cross_validation_gap < 1e-8);
}

TEST_CASE("full spectrum structural invariants") {
  TruncatedTree t = build_tree(TreeSpec::regular_tree(3), 2);
  SpectrumReport rep = full_spectrum(t, 2);

  for (const auto& e : rep.eigen) {
    CHECK(std::abs(std::abs(e.value) - 1.0) < 1e-10);
    if (e.kind == EigenKind::inherited_plus || e.kind == EigenKind::inherited_minus) {
      REQUIRE(e.source_lambda.has_value());
      CHECK(std::abs(joukowski(e.value).real() - *e.source_lambda) < 1e-10);
      // never at +-1: the transition spectrum stays strictly inside (-1,1)
      CHECK(std::abs(e.value - cplx(1.0)) > 1e-6);
      CHECK(std::abs(e.value + cplx(1.0)) > 1e-6);
    } else {
      CHECK(std::abs(e.value.imag()) == 0.0);
    }
  }

  // conjugate pairing of the inherited lifts
  std::map<double, std::pair<int, int>> pairing;
  for (const auto& e : rep.eigen) {
    if (!e.source_lambda) continue;
    auto& p = pairing[*e.source_lambda];
    if (e.kind == EigenKind::inherited_plus)
      ++p.first;
    else
      ++p.second;
  }
  for (const auto& [lam, counts] : pairing) CHECK(counts.first == counts.second);

  // inherited vectors orthogonal to birth vectors
  for (const auto& a : rep.eigen) {
    if (a.kind != EigenKind::inherited_plus) continue;
    for (const auto& b : rep.eigen) {
      if (b.kind == EigenKind::birth_plus || b.kind == EigenKind::birth_minus)
        CHECK(std::abs(inner(a.vector, b.vector)) / b.vector.norm() < 1e-8);
    }
  }
}

TEST_CASE("ranges of the adjoint boundary maps intersect trivially") {
  // stacked Gram [[I, T_n],[T_n, I]] is positive definite because
  // sigma(T_n) is strictly inside (-1, 1)
  TruncatedTree t = build_tree(TreeSpec::regular_tree(3), 2);
  int nv = t.count_within(2);
  TransitionEig e = eig_transition(t, 2);
  double lam_max = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
  CHECK(lam_max < 1.0);  // smallest Gram eigenvalue is 1 - lam_max > 0
  CHECK(nv == 10);
}

TEST_CASE("birth density series for the 3-regular tree") {
  DensitySeries s = birth_density(TreeSpec::regular_tree(3), 8);
  REQUIRE(s.rows.size() == 9);
  // exact rational rho_2 = 11/42
  CHECK(s.rows[2].birth_per_sign == 11);
  CHECK(s.rows[2].dim_total == 42);
  CHECK(s.rows[6].birth_per_sign == 191);
  CHECK(s.rows[6].dim_total == 762);
  CHECK(std::abs(s.rows[8].rho - 0.25) < 3e-3);
  // closed form |V_n| = 1 + 3(2^n - 1)
  for (const auto& r : s.rows) CHECK(r.b == 1 + 3 * ((1LL << r.n) - 1));

  DensitySeries s12 = birth_density(TreeSpec::regular_tree(3), 12);
  CHECK(s12.converged);
  CHECK(s12.rho_limit == Approx(0.25).epsilon(1e-3));
}

TEST_CASE("density limit formula") {
  CHECK(density_limit_formula(0.0) == 0.0);
  CHECK(density_limit_formula(1.0) == Approx(0.25));
  // rho_n tracks the measured ratio through the same formula up to O(1/B_n)
  DensitySeries s = birth_density(TreeSpec::spherical({4, 3}), 12);
  const auto& last = s.rows.back();
  CHECK(std::abs(last.rho - density_limit_formula(last.ratio)) < 1e-3);
  CHECK_FALSE(s.converged);  // period-2 branching keeps the ratio oscillating
  CHECK(s.h_minus < s.h_plus);
}

TEST_CASE("explicit tree density matches a built truncation") {
  TreeSpec spec = TreeSpec::explicit_tree({{"", 3}, {"0", 4}, {"0.1", 2}}, 3);
  DensitySeries s = birth_density(spec, 5);
  TruncatedTree t = build_tree(spec, 5);
  for (const auto& r : s.rows) {
    CHECK(r.b == t.count_within(r.n));
    CHECK(r.b + r.db == t.count_within(r.n + 1));
  }
  CHECK_THROWS_AS(birth_density(TreeSpec::explicit_tree({{"", 3}, {"7", 2}}, 3), 3),
                  SpecError);
}

TEST_CASE("eigensolve caps and errors") {
  TruncatedTree t = build_tree(TreeSpec::regular_tree(3), 3);
  SpectralOptions opt;
  opt.eig_cap = 5;
  CHECK_THROWS_AS(eig_transition(t, 3, opt), SpecError);
}
