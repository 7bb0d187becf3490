#include <doctest.h>

#include "treewalk/io.hpp"

using namespace treewalk;

TEST_CASE("tree spec json round-trip") {
  for (const char* text :
       {R"({"kind":"regular","degree":3})",
        R"({"kind":"spherically_symmetric","degrees_by_depth":[4,3]})",
        R"({"kind":"explicit","children_counts":{"":3,"0":2},"default_degree":3})"}) {
    TreeSpec spec = tree_spec_from_json(nlohmann::json::parse(text));
    TreeSpec again = tree_spec_from_json(tree_spec_to_json(spec));
    CHECK(tree_spec_to_json(spec) == tree_spec_to_json(again));
  }
  CHECK_THROWS_AS(tree_spec_from_json(nlohmann::json::parse(R"({"kind":"möbius"})")),
                  SpecError);
  CHECK_THROWS_AS(
      tree_spec_from_json(nlohmann::json::parse(R"({"kind":"regular","degree":1})")),
      SpecError);
}

TEST_CASE("marked graph ingestion") {
  auto j = nlohmann::json::parse(
      R"({"vertices":4,"edges":[[0,1],[1,2],[2,3],[3,0]],"marked":[0],"alpha":"isotropic"})");
  MarkedGraph g = marked_graph_from_json(j);
  CHECK(g.n_vertices == 4);
  CHECK(g.arc_count() == 8);
  CHECK(g.is_marked[0] == 1);
  CHECK(g.unmarked_count() == 3);
  j["alpha"] = "haar";
  CHECK_THROWS_AS(marked_graph_from_json(j), SpecError);
}

TEST_CASE("custom arc state ingestion") {
  TruncatedTree t = build_tree(TreeSpec::regular_tree(3), 2);
  auto j = nlohmann::json::parse(
      R"({"schema":"treewalk.state/1","entries":[
            {"from":"","to":"0","re":1.0},
            {"from":"0","to":"","im":-1.0}]})");
  ArcState psi = arc_state_from_json(t, j, true);
  CHECK(psi.norm_sq() == doctest::Approx(1.0));
  CHECK(std::abs(psi[t.child_arc(t.root(), 0)] - cplx(1.0 / std::sqrt(2.0))) < 1e-14);
  auto bad = nlohmann::json::parse(
      R"({"entries":[{"from":"0","to":"1","re":1.0}]})");
  CHECK_THROWS_AS(arc_state_from_json(t, bad, true), SpecError);
}

TEST_CASE("csv and json emitters are deterministic") {
  TreeSpec spec = TreeSpec::regular_tree(3);
  DensitySeries s = birth_density(spec, 6);
  CHECK(density_csv(spec, s) == density_csv(spec, s));

  TruncatedTree t = build_tree(spec, 2);
  SpectrumReport rep = full_spectrum(t, 2);
  std::string a = spectrum_to_json(rep, spec).dump(2);
  std::string b = spectrum_to_json(full_spectrum(t, 2), spec).dump(2);
  CHECK(a == b);

  FlowFunction flow = build_flow(t, FlowIndex{VertexPath{}, 1, Sign::plus});
  std::string csv = flow_csv(flow);
  CHECK(csv.find("arc_id,origin_path,terminus_path,re,im") != std::string::npos);
  CHECK(csv.find("tail=exact") != std::string::npos);
}

TEST_CASE("distribution csv carries schema and metadata") {
  TruncatedTree t = build_tree(TreeSpec::regular_tree(3), 2);
  FindingDistribution d = measure(make_initial(t, InitialKind::A));
  d.initial_tag = "A";
  d.steps = 0;
  std::string csv = distribution_csv(d);
  CHECK(csv.rfind("# schema=treewalk.distribution/1", 0) == 0);
  CHECK(csv.find("initial=A") != std::string::npos);
  CHECK(csv.find("vertex_path,depth,value") != std::string::npos);

  RadialDistribution rd = radial_cesaro(TreeSpec::regular_tree(3), InitialKind::B, 4, 6);
  std::string rcsv = radial_distribution_csv(rd);
  CHECK(rcsv.rfind("# schema=treewalk.radial_distribution/1", 0) == 0);
  CHECK(rcsv.find("depth,vertex_count,value_per_vertex,depth_mass") != std::string::npos);
}

TEST_CASE("shortest round-trip formatting") {
  CHECK(fmt(0.25) == "0.25");
  CHECK(fmt(1.0 / 3.0) == "0.3333333333333333");
  double x = 0.1 + 0.2;
  CHECK(std::stod(fmt(x)) == x);
}
