#include "treewalk/io.hpp"

#include <charconv>
#include <fstream>

namespace treewalk {

using nlohmann::json;

std::string fmt(double x) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

TreeSpec tree_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw SpecError("tree spec must be an object with a 'kind' field");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "regular") {
    return TreeSpec::regular_tree(j.at("degree").get<int>());
  }
  if (kind == "spherically_symmetric") {
    return TreeSpec::spherical(j.at("degrees_by_depth").get<std::vector<int>>());
  }
  if (kind == "explicit") {
    std::map<std::string, int> counts;
    if (j.contains("children_counts"))
      counts = j.at("children_counts").get<std::map<std::string, int>>();
    return TreeSpec::explicit_tree(std::move(counts),
                                   j.at("default_degree").get<int>());
  }
  throw SpecError("unknown tree kind '" + kind + "'");
}

json tree_spec_to_json(const TreeSpec& spec) {
  json j;
  switch (spec.kind) {
    case TreeKind::regular:
      j["kind"] = "regular";
      j["degree"] = spec.degree;
      break;
    case TreeKind::spherically_symmetric:
      j["kind"] = "spherically_symmetric";
      j["degrees_by_depth"] = spec.degrees_by_depth;
      break;
    case TreeKind::explicit_counts:
      j["kind"] = "explicit";
      j["children_counts"] = spec.children_counts;
      j["default_degree"] = spec.default_degree;
      break;
  }
  return j;
}

TreeSpec load_tree_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read tree spec file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SpecError("malformed tree spec '" + path + "': " + e.what());
  }
  return tree_spec_from_json(j);
}

MarkedGraph marked_graph_from_json(const json& j) {
  int nv = j.at("vertices").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw SpecError("edges must be [u,v] pairs");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  std::vector<int> marked;
  if (j.contains("marked")) marked = j.at("marked").get<std::vector<int>>();
  std::string alpha = j.value("alpha", std::string("isotropic"));
  if (alpha != "isotropic")
    throw SpecError("only isotropic weights are supported in graph files");
  MarkedGraph g = MarkedGraph::from_edges(nv, edges, marked);
  g.validate();
  return g;
}

MarkedGraph load_marked_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read graph file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SpecError("malformed graph file '" + path + "': " + e.what());
  }
  return marked_graph_from_json(j);
}

ArcState arc_state_from_json(const TruncatedTree& tree, const json& j,
                             bool normalize) {
  ArcState psi(tree);
  for (const auto& entry : j.at("entries")) {
    VertexId from = tree.find(VertexPath::parse(entry.at("from").get<std::string>()));
    VertexId to = tree.find(VertexPath::parse(entry.at("to").get<std::string>()));
    ArcId a;
    if (tree.parent(to) == from)
      a = tree.down_arc(to);
    else if (tree.parent(from) == to)
      a = tree.up_arc(from);
    else
      throw SpecError("state entry endpoints are not adjacent");
    psi[a] = cplx(entry.value("re", 0.0), entry.value("im", 0.0));
  }
  if (psi.norm() == 0.0) throw SpecError("custom state is zero");
  if (normalize) psi *= cplx(1.0 / psi.norm());
  return psi;
}

json spectrum_to_json(const SpectrumReport& rep, const TreeSpec& spec) {
  json j;
  j["schema"] = "treewalk.spectrum/1";
  j["tree"] = tree_spec_to_json(spec);
  j["n"] = rep.n;
  j["dim"] = rep.dim;
  j["counts"] = {{"inherited", rep.count_inherited()},
                 {"inherited_plus", rep.count_inherited_plus},
                 {"inherited_minus", rep.count_inherited_minus},
                 {"birth_plus", rep.count_birth_plus},
                 {"birth_minus", rep.count_birth_minus},
                 {"total", rep.total()}};
  j["cross_validated"] = rep.cross_validated;
  j["max_residual"] = rep.max_residual;
  json eigen = json::array();
  for (const auto& e : rep.eigen) {
    json entry;
    entry["re"] = e.value.real();
    entry["im"] = e.value.imag();
    entry["kind"] = eigen_kind_str(e.kind);
    entry["residual"] = e.residual;
    if (e.source_lambda)
      entry["lambda"] = *e.source_lambda;
    else
      entry["lambda"] = nullptr;
    if (e.flow) {
      entry["vertex"] = e.flow->u.str();
      entry["j"] = e.flow->j;
    }
    eigen.push_back(std::move(entry));
  }
  j["eigen"] = std::move(eigen);
  return j;
}

std::string density_csv(const TreeSpec& spec, const DensitySeries& series) {
  std::string out = "# schema=treewalk.density/1 tree=" + tree_spec_to_json(spec).dump() + "\n";
  out += "n,B_n,dB_n,ratio,rho\n";
  for (const auto& r : series.rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.b) + "," +
           std::to_string(r.db) + "," + fmt(r.ratio) + "," + fmt(r.rho) + "\n";
  }
  return out;
}

namespace {

std::string dist_meta(const char* schema, const std::string& tag, int steps,
                      bool averaged, bool exact) {
  std::string out = std::string("# schema=") + schema;
  if (!tag.empty()) out += " initial=" + tag;
  if (steps >= 0) out += " steps=" + std::to_string(steps);
  out += averaged ? " time_averaged=1" : " time_averaged=0";
  out += exact ? " semantics=exact\n" : " semantics=reflecting\n";
  return out;
}

}  // namespace

std::string distribution_csv(const FindingDistribution& dist) {
  const TruncatedTree& tree = *dist.tree;
  std::string out = dist_meta("treewalk.distribution/1", dist.initial_tag, dist.steps,
                              dist.time_averaged, dist.exact_semantics);
  out += "vertex_path,depth,value\n";
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    out += tree.path_of(v).str() + "," + std::to_string(tree.vertex_depth(v)) + "," +
           fmt(dist.values[v]) + "\n";
  }
  return out;
}

std::string radial_distribution_csv(const RadialDistribution& dist) {
  std::string out = dist_meta("treewalk.radial_distribution/1", dist.initial_tag,
                              dist.steps, dist.time_averaged, dist.exact_semantics);
  out += "depth,vertex_count,value_per_vertex,depth_mass\n";
  for (std::size_t d = 0; d < dist.per_vertex.size(); ++d) {
    out += std::to_string(d) + "," + fmt(dist.counts[d]) + "," +
           fmt(dist.per_vertex[d]) + "," + fmt(dist.depth_mass(static_cast<int>(d))) +
           "\n";
  }
  return out;
}

std::string trajectory_csv(const std::vector<FindingDistribution>& steps) {
  if (steps.empty()) throw SpecError("empty trajectory");
  const TruncatedTree& tree = *steps.front().tree;
  std::string out = "# schema=treewalk.trajectory/1\n";
  out += "step,vertex_path,value\n";
  for (const auto& d : steps)
    for (VertexId v = 0; v < tree.vertex_count(); ++v)
      out += std::to_string(d.steps) + "," + tree.path_of(v).str() + "," +
             fmt(d.values[v]) + "\n";
  return out;
}

std::string flow_csv(const FlowFunction& flow) {
  const TruncatedTree& tree = *flow.values.tree;
  std::string out = "# schema=treewalk.flow/1 vertex=" + flow.index.u.str() +
                    " j=" + std::to_string(flow.index.j) +
                    " sign=" + sign_str(flow.index.sign) +
                    " truncated_norm_sq=" + fmt(flow.truncated_norm_sq) +
                    " tail_norm_sq=" + fmt(flow.tail_norm_sq) +
                    (flow.tail_exact ? " tail=exact\n" : " tail=upper_bound\n");
  out += "arc_id,origin_path,terminus_path,re,im\n";
  for (ArcId a = 0; a < tree.arc_count(); ++a) {
    const cplx& v = flow.values[a];
    if (v == cplx(0.0)) continue;
    out += std::to_string(a) + "," + tree.path_of(tree.arc_origin(a)).str() + "," +
           tree.path_of(tree.arc_terminus(a)).str() + "," + fmt(v.real()) + "," +
           fmt(v.imag()) + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError("cannot open output file '" + path + "'");
  out << contents;
  if (!out) throw SpecError("failed writing output file '" + path + "'");
}

}  // namespace treewalk
