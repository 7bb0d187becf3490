#pragma once

#include "treewalk/flow.hpp"

namespace treewalk {

enum class InitialKind { A, B };

// The two root-supported reference states: kind A is uniform over the root's
// out-arcs, kind B carries the deg(root)-th roots of unity. Normalized to 1
// unless normalize is off.
ArcState make_initial(const TruncatedTree& tree, InitialKind kind,
                      bool normalize = true);

/// Per-vertex finding probabilities mu(psi)(u) = sum_{e: t(e)=u} |psi(e)|^2.
struct FindingDistribution {
  const TruncatedTree* tree = nullptr;
  std::vector<double> values;
  std::string initial_tag;
  int steps = -1;             // -1 when time-averaged or a projection limit
  bool time_averaged = false;
  bool exact_semantics = false;

  double total() const;
  double max_value() const;
};

FindingDistribution measure(const ArcState& psi);

struct EvolveResult {
  std::vector<FindingDistribution> per_step;  // index t = 0..steps
  ArcState final_state;
};

// Iterates the cut-off walk. When exact_semantics is requested the cutoff
// must reach support depth + steps so no reflected amplitude returns; the
// trajectory then agrees with the infinite-tree walk.
EvolveResult evolve(const ArcState& psi0, int steps,
                    std::optional<int> cutoff = std::nullopt,
                    bool exact_semantics = false);

// (1/T) sum_{t<T} of the per-step distributions.
FindingDistribution cesaro_average(const ArcState& psi0, int steps,
                                   std::optional<int> cutoff = std::nullopt,
                                   bool exact_semantics = false);

struct LimitDistribution {
  // Per-eigenvalue form: sum over the +1 and -1 eigenspace projections of
  // |.|^2 separately. This is the Cesaro limit.
  FindingDistribution primary;
  // |(Pi_+ + Pi_-) psi|^2 combined form, reported alongside.
  FindingDistribution combined;
  double mass_plus = 0.0, mass_minus = 0.0;  // tail-inclusive projection masses
  std::map<FlowIndex, cplx> coefficients;
  std::string hypothesis;

  double total_mass() const { return mass_plus + mass_minus; }
};

// Time-averaged limit via the flow-eigenspace projections, exact within the
// truncation window for states supported well inside it.
LimitDistribution limit_distribution(const ArcState& psi0);

// ---------------------------------------------------------------------------
// Radial engine. On a spherically symmetric tree the walk started from a
// root-supported uniform or character state keeps one amplitude per (depth,
// orientation), up to the per-branch phase. That collapses the state to two
// complex values per level, which reaches depths far beyond what a per-arc
// vector can hold.
// ---------------------------------------------------------------------------

/// Depth-indexed distribution: one value per vertex at each depth.
struct RadialDistribution {
  TreeSpec spec;
  std::vector<double> per_vertex;  // index = depth
  std::vector<double> counts;      // vertices at that depth
  std::string initial_tag;
  int steps = -1;
  bool time_averaged = false;
  bool exact_semantics = false;

  double total() const;
  double max_value() const;
  double depth_mass(int d) const { return per_vertex[d] * counts[d]; }
};

struct RadialState {
  TreeSpec spec;
  bool character = false;  // false: uniform sector (kind A), true: kind B
  std::vector<cplx> down, up;  // level s arcs join depth s and s+1

  double norm_sq() const;
};

RadialState radial_initial(const TreeSpec& spec, InitialKind kind, int levels);
void radial_step(RadialState& st, int cutoff);
RadialDistribution radial_measure(const RadialState& st);

RadialDistribution radial_cesaro(const TreeSpec& spec, InitialKind kind, int steps,
                                 int cutoff);

struct RadialLimit {
  RadialDistribution primary;
  RadialDistribution combined;
  double mass_plus = 0.0, mass_minus = 0.0;
  cplx coefficient = 0.0;  // per-sign coefficient on the (root, 1) flow pair

  double total_mass() const { return mass_plus + mass_minus; }
};

RadialLimit radial_limit(const TreeSpec& spec, InitialKind kind, int max_depth);

// The closed-form time-averaged value printed for the character state on a
// regular tree, evaluated for comparison tables; not used as an oracle.
double printed_limit_value(int kappa, int dist);

}  // namespace treewalk
