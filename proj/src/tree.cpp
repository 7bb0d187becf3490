#include "treewalk/tree.hpp"

#include <algorithm>
#include <charconv>

namespace treewalk {

VertexPath VertexPath::parse(const std::string& text) {
  VertexPath p;
  if (text.empty()) return p;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dot = text.find('.', pos);
    std::string_view tok(text.data() + pos,
                         (dot == std::string::npos ? text.size() : dot) - pos);
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 0)
      throw SpecError("invalid vertex path '" + text + "'");
    p.steps.push_back(value);
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return p;
}

std::string VertexPath::str() const {
  std::string s;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(steps[i]);
  }
  return s;
}

TreeSpec TreeSpec::regular_tree(int degree) {
  TreeSpec s;
  s.kind = TreeKind::regular;
  s.degree = degree;
  s.validate();
  return s;
}

TreeSpec TreeSpec::spherical(std::vector<int> degrees_by_depth) {
  TreeSpec s;
  s.kind = TreeKind::spherically_symmetric;
  s.degrees_by_depth = std::move(degrees_by_depth);
  s.validate();
  return s;
}

TreeSpec TreeSpec::explicit_tree(std::map<std::string, int> children_counts,
                                 int default_degree) {
  TreeSpec s;
  s.kind = TreeKind::explicit_counts;
  s.children_counts = std::move(children_counts);
  s.default_degree = default_degree;
  s.validate();
  return s;
}

void TreeSpec::validate() const {
  switch (kind) {
    case TreeKind::regular:
      if (degree < 2) throw SpecError("regular tree requires degree >= 2");
      break;
    case TreeKind::spherically_symmetric:
      if (degrees_by_depth.empty())
        throw SpecError("spherically symmetric tree requires a degree list");
      for (int d : degrees_by_depth)
        if (d < 2) throw SpecError("all degrees must be >= 2 (no leaves)");
      break;
    case TreeKind::explicit_counts:
      if (default_degree < 2) throw SpecError("default degree must be >= 2");
      for (const auto& [path, m] : children_counts) {
        VertexPath::parse(path);  // throws on malformed keys
        if (path.empty()) {
          if (m < 2) throw SpecError("root must have at least 2 children");
        } else if (m < 1) {
          throw SpecError("vertex '" + path + "' would be a leaf");
        }
      }
      break;
  }
}

int TreeSpec::degree_at_depth(int depth) const {
  switch (kind) {
    case TreeKind::regular:
      return degree;
    case TreeKind::spherically_symmetric:
      return degrees_by_depth[depth % degrees_by_depth.size()];
    default:
      throw SpecError("degree_at_depth requires a spherically symmetric spec");
  }
}

int TreeSpec::children_at_depth(int depth) const {
  int deg = degree_at_depth(depth);
  return depth == 0 ? deg : deg - 1;
}

int TreeSpec::min_degree() const {
  switch (kind) {
    case TreeKind::regular:
      return degree;
    case TreeKind::spherically_symmetric:
      return *std::min_element(degrees_by_depth.begin(), degrees_by_depth.end());
    case TreeKind::explicit_counts: {
      int m = default_degree;
      for (const auto& [path, c] : children_counts)
        m = std::min(m, path.empty() ? c : c + 1);
      return m;
    }
  }
  return 2;
}

namespace {

int declared_children(const TreeSpec& spec, const std::string& path, int depth) {
  if (spec.kind == TreeKind::explicit_counts) {
    auto it = spec.children_counts.find(path);
    if (it != spec.children_counts.end()) return it->second;
    return depth == 0 ? spec.default_degree : spec.default_degree - 1;
  }
  return spec.children_at_depth(depth);
}

}  // namespace

TruncatedTree build_tree(const TreeSpec& spec, int depth, std::size_t vertex_cap) {
  spec.validate();
  if (depth < 0) throw SpecError("truncation depth must be >= 0");

  TruncatedTree t;
  t.spec_ = spec;
  t.depth_ = depth;
  const int max_depth = depth + 1;
  const bool track_paths = spec.kind == TreeKind::explicit_counts;

  std::vector<std::string> paths;
  auto add_vertex = [&](VertexId par, int cidx, int d, const std::string& path) {
    if (t.parent_.size() >= vertex_cap)
      throw SpecError("vertex cap exceeded (cap " + std::to_string(vertex_cap) + ")");
    int m = declared_children(spec, path, d);
    t.parent_.push_back(par);
    t.child_index_.push_back(cidx);
    t.vdepth_.push_back(d);
    t.declared_degree_.push_back(d == 0 ? m : m + 1);
    t.first_child_.push_back(-1);
    t.n_children_.push_back(0);
    if (track_paths) paths.push_back(path);
    return static_cast<VertexId>(t.parent_.size() - 1);
  };

  t.depth_offset_.assign(max_depth + 2, 0);
  add_vertex(-1, -1, 0, "");
  t.depth_offset_[1] = 1;

  VertexId level_begin = 0, level_end = 1;
  for (int d = 0; d < max_depth; ++d) {
    for (VertexId v = level_begin; v < level_end; ++v) {
      int m = t.branching(v);
      t.first_child_[v] = static_cast<VertexId>(t.parent_.size());
      t.n_children_[v] = m;
      for (int k = 0; k < m; ++k) {
        std::string child_path;
        if (track_paths) {
          child_path = paths[v];
          if (!child_path.empty()) child_path += '.';
          child_path += std::to_string(k);
        }
        add_vertex(v, k, d + 1, child_path);
      }
    }
    level_begin = level_end;
    level_end = static_cast<VertexId>(t.parent_.size());
    t.depth_offset_[d + 2] = level_end;
  }
  return t;
}

VertexId TruncatedTree::count_within(int d) const {
  if (d < 0) return 0;
  int idx = std::min(d + 1, static_cast<int>(depth_offset_.size()) - 1);
  return depth_offset_[idx];
}

std::pair<VertexId, VertexId> TruncatedTree::depth_range(int d) const {
  if (d < 0 || d > max_vertex_depth()) return {0, 0};
  return {depth_offset_[d], depth_offset_[d + 1]};
}

VertexId TruncatedTree::find(const VertexPath& path) const {
  VertexId v = 0;
  for (int k : path.steps) {
    if (k < 0 || k >= n_children_[v])
      throw SpecError("vertex '" + path.str() + "' is not in the truncation");
    v = child(v, k);
  }
  return v;
}

VertexPath TruncatedTree::path_of(VertexId v) const {
  VertexPath p;
  while (v != 0) {
    p.steps.push_back(child_index_[v]);
    v = parent_[v];
  }
  std::reverse(p.steps.begin(), p.steps.end());
  return p;
}

int branching_number(const TruncatedTree& tree, const VertexPath& u) {
  return tree.branching(tree.find(u));
}

std::vector<std::pair<long long, long long>> depth_counts(const TruncatedTree& tree) {
  std::vector<std::pair<long long, long long>> out;
  for (int i = 0; i <= tree.depth(); ++i) {
    long long b = tree.count_within(i);
    long long db = tree.count_within(i + 1) - b;
    out.emplace_back(b, db);
  }
  return out;
}

int k_of_r(const TruncatedTree& tree, int r) {
  if (r < 0 || r > tree.max_vertex_depth())
    throw SpecError("K(r) needs r within the truncation, got r=" + std::to_string(r) +
                    " with max depth " + std::to_string(tree.max_vertex_depth()));
  int m = std::numeric_limits<std::int32_t>::max();
  for (VertexId v = tree.count_within(r - 1); v < tree.vertex_count(); ++v)
    m = std::min(m, tree.declared_degree(v));
  return m;
}

}  // namespace treewalk
