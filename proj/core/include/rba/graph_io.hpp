#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rba/keypoints.hpp"

namespace rba {

/// {"width", "height", "nodes": [{index, x, y, type, step, parent, parent_index, child, child_index}]}
std::string serialize_graph(const VesselGraph& graph);
/// Throws FormatError on malformed documents or an inconsistent node table.
VesselGraph parse_graph(std::string_view text);

void write_graph(const VesselGraph& graph, const std::filesystem::path& path);
VesselGraph read_graph(const std::filesystem::path& path);

}  // namespace rba
