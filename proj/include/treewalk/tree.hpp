#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treewalk/common.hpp"

namespace treewalk {

enum class TreeKind { regular, spherically_symmetric, explicit_counts };

/// Address of a vertex as the sequence of child indices from the root.
/// The root is the empty sequence; "0.2.1" is child 1 of child 2 of child 0.
struct VertexPath {
  std::vector<int> steps;

  VertexPath() = default;
  explicit VertexPath(std::vector<int> s) : steps(std::move(s)) {}

  static VertexPath parse(const std::string& text);
  std::string str() const;
  bool is_root() const { return steps.empty(); }
  int depth() const { return static_cast<int>(steps.size()); }

  bool operator==(const VertexPath& o) const { return steps == o.steps; }
  bool operator<(const VertexPath& o) const { return steps < o.steps; }
};

/// Finite description of a rooted infinite tree with no leaves.
///
/// regular               : every vertex has the same degree.
/// spherically_symmetric : degree depends only on the depth; the list of
///                         degrees repeats cyclically beyond its length.
/// explicit_counts       : per-vertex child counts keyed by vertex path,
///                         falling back to default_degree elsewhere.
struct TreeSpec {
  TreeKind kind = TreeKind::regular;
  int degree = 0;
  std::vector<int> degrees_by_depth;
  std::map<std::string, int> children_counts;  // path -> number of children
  int default_degree = 0;

  static TreeSpec regular_tree(int degree);
  static TreeSpec spherical(std::vector<int> degrees_by_depth);
  static TreeSpec explicit_tree(std::map<std::string, int> children_counts,
                                int default_degree);

  void validate() const;

  bool is_spherical() const { return kind != TreeKind::explicit_counts; }

  // Degree of any vertex at the given depth; spherical kinds only.
  int degree_at_depth(int depth) const;

  // Number of children of a vertex at the given depth; spherical kinds only.
  int children_at_depth(int depth) const;

  // Smallest degree that can appear anywhere in the infinite tree.
  int min_degree() const;
};

using VertexId = std::int32_t;
using ArcId = std::int32_t;

/// Finite truncation of the infinite tree described by a TreeSpec.
///
/// A truncation at depth n holds every vertex within depth n+1 and all arcs
/// with both endpoints inside, i.e. the arc set the cut-off walk at depth n
/// acts on. Each edge appears as a pair of mutually inverse arcs; the arc
/// with even id points away from the root. Indexing is breadth-first with
/// children ordered by child index, so two builds from the same spec agree.
class TruncatedTree {
 public:
  int depth() const { return depth_; }                       // n
  int max_vertex_depth() const { return depth_ + 1; }
  VertexId vertex_count() const { return static_cast<VertexId>(parent_.size()); }
  ArcId arc_count() const { return 2 * (vertex_count() - 1); }
  const TreeSpec& spec() const { return spec_; }

  VertexId root() const { return 0; }
  int vertex_depth(VertexId v) const { return vdepth_[v]; }
  VertexId parent(VertexId v) const { return parent_[v]; }
  int child_index(VertexId v) const { return child_index_[v]; }
  VertexId first_child(VertexId v) const { return first_child_[v]; }
  int children_materialized(VertexId v) const { return n_children_[v]; }
  VertexId child(VertexId v, int k) const { return first_child_[v] + k; }

  // Degree in the infinite tree, also for vertices whose child arcs are
  // beyond the truncation.
  int declared_degree(VertexId v) const { return declared_degree_[v]; }

  // m(u): number of children in the infinite tree (= degree for the root,
  // degree - 1 otherwise).
  int branching(VertexId v) const {
    return v == 0 ? declared_degree_[v] : declared_degree_[v] - 1;
  }

  // Arcs. down_arc(v) points parent -> v, up_arc(v) points v -> parent.
  ArcId down_arc(VertexId v) const { return 2 * (v - 1); }
  ArcId up_arc(VertexId v) const { return 2 * (v - 1) + 1; }
  ArcId child_arc(VertexId v, int k) const { return down_arc(child(v, k)); }
  ArcId reverse(ArcId a) const { return a ^ 1; }
  VertexId arc_origin(ArcId a) const {
    VertexId v = a / 2 + 1;
    return (a & 1) ? v : parent_[v];
  }
  VertexId arc_terminus(ArcId a) const {
    VertexId v = a / 2 + 1;
    return (a & 1) ? parent_[v] : v;
  }
  bool arc_downward(ArcId a) const { return (a & 1) == 0; }
  // Larger of the two endpoint depths.
  int arc_depth(ArcId a) const { return vdepth_[a / 2 + 1]; }

  // |V_d| = number of vertices within depth d.
  VertexId count_within(int d) const;
  // Vertices at exactly depth d are the contiguous id range [first, last).
  std::pair<VertexId, VertexId> depth_range(int d) const;

  VertexId find(const VertexPath& path) const;
  VertexPath path_of(VertexId v) const;

  friend TruncatedTree build_tree(const TreeSpec& spec, int depth,
                                  std::size_t vertex_cap);

 private:
  TreeSpec spec_;
  int depth_ = 0;
  std::vector<VertexId> parent_;
  std::vector<VertexId> first_child_;
  std::vector<std::int32_t> n_children_;
  std::vector<std::int32_t> vdepth_;
  std::vector<std::int32_t> declared_degree_;
  std::vector<std::int32_t> child_index_;
  std::vector<VertexId> depth_offset_;  // size max_vertex_depth + 2
};

TruncatedTree build_tree(const TreeSpec& spec, int depth,
                         std::size_t vertex_cap = 10'000'000);

// m(u) for a vertex addressed by path.
int branching_number(const TruncatedTree& tree, const VertexPath& u);

// (B_i, dB_i) = (|V_i|, |V_{i+1}| - |V_i|) for 0 <= i <= n.
std::vector<std::pair<long long, long long>> depth_counts(const TruncatedTree& tree);

// Minimum declared degree over vertices at distance >= r from the root,
// within the truncation window (r <= n+1).
int k_of_r(const TruncatedTree& tree, int r);

}  // namespace treewalk
