#pragma once

#include <optional>

#include "treewalk/flow.hpp"
#include "treewalk/jacobi.hpp"

namespace treewalk {

// J(z) = (z + 1/z)/2, maps unit-circle walk eigenvalues onto [-1, 1].
cplx joukowski(cplx z);
// The two unit-circle preimages e^{+-i arccos(lambda)} for lambda in [-1, 1].
std::pair<cplx, cplx> inverse_joukowski(double lambda);

struct TransitionEig {
  std::vector<double> values;           // ascending, all in (-1, 1)
  std::vector<VertexFunction> vectors;  // orthonormal, supported within V_n
  double max_residual = 0.0;
};

struct SpectralOptions {
  int eig_cap = 2000;     // largest |V_n| for the dense symmetric solve
  int dense_cap = 5000;   // largest arc count for materializations
  double residual_tol = 1e-8;
  double lambda_edge = 1e-8;  // refuse lifts with 1 - |lambda| below this
  // Cross-validate against a dense eigendecomposition of the walk matrix.
  // Defaults to on whenever the arc count stays small.
  std::optional<bool> cross_validate;
};

// Complete orthonormal eigendecomposition of T_n.
TransitionEig eig_transition(const TruncatedTree& tree, int cutoff,
                             const SpectralOptions& opt = {});

// Lift an eigenpair of T_n through the inverse Joukowski transform:
// v = (d_T^(n),* f - e^{+-i arccos lambda} d_O^(n),* f) / sqrt(2(1-lambda^2)),
// a unit eigenvector of U^(n) with eigenvalue e^{+-i arccos lambda}.
std::pair<cplx, ArcState> lift_eigenpair(double lambda, const VertexFunction& f,
                                         Sign sign, int cutoff,
                                         const SpectralOptions& opt = {});

enum class EigenKind { inherited_plus, inherited_minus, birth_plus, birth_minus };
const char* eigen_kind_str(EigenKind k);

struct SpectrumEntry {
  cplx value;
  ArcState vector;
  EigenKind kind;
  double residual = 0.0;
  std::optional<double> source_lambda;
  std::optional<FlowIndex> flow;
};

struct SpectrumReport {
  int n = 0;
  int dim = 0;  // dim A_{n+1} = arc count of the truncation
  std::vector<SpectrumEntry> eigen;
  int count_inherited_plus = 0, count_inherited_minus = 0;
  int count_birth_plus = 0, count_birth_minus = 0;
  bool cross_validated = false;
  double max_residual = 0.0;
  double cross_validation_gap = 0.0;
  // Birth-sector Gram matrices (flows are reported unnormalized).
  DMatrix gram_plus, gram_minus;

  int count_inherited() const { return count_inherited_plus + count_inherited_minus; }
  int total() const {
    return count_inherited() + count_birth_plus + count_birth_minus;
  }
};

// Full decomposition of U^(n) restricted to the truncation's arcs: inherited
// pairs lifted from every T_n eigenpair, plus the two flow-spanned birth
// sectors at eigenvalues +1 and -1.
SpectrumReport full_spectrum(const TruncatedTree& tree, int cutoff,
                             const SpectralOptions& opt = {});

struct DensityRow {
  int n = 0;
  long long b = 0;            // B_n = |V_n|
  long long db = 0;           // |V_{n+1}| - |V_n|
  double ratio = 0.0;         // db / b
  long long birth_per_sign = 0;  // |V_{n+1}| - 1 - |V_n|
  long long dim_total = 0;       // 2(|V_{n+1}| - 1)
  double rho = 0.0;              // birth_per_sign / dim_total
};

struct DensitySeries {
  std::vector<DensityRow> rows;
  bool converged = false;
  double h = 0.0, rho_limit = 0.0;          // when converged
  double h_minus = 0.0, h_plus = 0.0;       // window estimates otherwise
  double rho_minus = 0.0, rho_plus = 0.0;
};

inline double density_limit_formula(double h) { return h / (2.0 * (1.0 + h)); }

// Birth-eigenvalue density per depth from pure vertex counts; no eigensolve.
DensitySeries birth_density(const TreeSpec& spec, int n_max);

}  // namespace treewalk
