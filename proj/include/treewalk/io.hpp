#pragma once

#include <json.hpp>

#include "treewalk/dynamics.hpp"
#include "treewalk/marked.hpp"
#include "treewalk/spectral.hpp"

namespace treewalk {

// Shortest round-trip decimal form; keeps emitted files byte-stable.
std::string fmt(double x);

TreeSpec tree_spec_from_json(const nlohmann::json& j);
nlohmann::json tree_spec_to_json(const TreeSpec& spec);
TreeSpec load_tree_spec(const std::string& path);

// {"vertices":N,"edges":[[u,v],...],"marked":[...],"alpha":"isotropic"}
MarkedGraph marked_graph_from_json(const nlohmann::json& j);
MarkedGraph load_marked_graph(const std::string& path);

// {"schema":"treewalk.state/1","entries":[{"from":"","to":"0","re":..,"im":..}]}
ArcState arc_state_from_json(const TruncatedTree& tree, const nlohmann::json& j,
                             bool normalize);

nlohmann::json spectrum_to_json(const SpectrumReport& rep, const TreeSpec& spec);

std::string density_csv(const TreeSpec& spec, const DensitySeries& series);
std::string distribution_csv(const FindingDistribution& dist);
std::string radial_distribution_csv(const RadialDistribution& dist);
std::string trajectory_csv(const std::vector<FindingDistribution>& steps);
std::string flow_csv(const FlowFunction& flow);

void write_file(const std::string& path, const std::string& contents);

}  // namespace treewalk
