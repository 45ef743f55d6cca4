#include "rba/graph_io.hpp"

#include "json.hpp"
#include "rba/errors.hpp"
#include "rba/image_io.hpp"

namespace rba {
using ojson = nlohmann::ordered_json;

namespace {

ojson point_json(Point p) { return ojson::array({p.x, p.y}); }

Point json_point(const ojson& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw FormatError("expected an integer [x, y] pair");
    return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

std::string serialize_graph(const VesselGraph& graph) {
    ojson doc;
    doc["width"] = graph.width;
    doc["height"] = graph.height;
    ojson nodes = ojson::array();
    for (const KeyPoint& k : graph.nodes) {
        ojson n;
        n["index"] = k.index;
        n["x"] = k.position.x;
        n["y"] = k.position.y;
        n["type"] = std::string(to_string(k.type));
        n["step"] = k.step;
        n["parent"] = k.parent_position ? point_json(*k.parent_position) : ojson();
        n["parent_index"] = k.parent_index ? ojson(*k.parent_index) : ojson();
        ojson child = ojson::array();
        for (Point p : k.children_positions) child.push_back(point_json(p));
        n["child"] = std::move(child);
        n["child_index"] = k.children_indices;
        nodes.push_back(std::move(n));
    }
    doc["nodes"] = std::move(nodes);
    return doc.dump(2) + "\n";
}

VesselGraph parse_graph(std::string_view text) {
    VesselGraph g;
    try {
        const ojson doc = ojson::parse(text);
        g.width = doc.at("width").get<int>();
        g.height = doc.at("height").get<int>();
        for (const ojson& n : doc.at("nodes")) {
            KeyPoint k;
            k.index = n.at("index").get<int>();
            k.position = {n.at("x").get<int>(), n.at("y").get<int>()};
            k.type = parse_node_type(n.at("type").get<std::string>());
            k.step = n.at("step").get<int>();
            if (!n.at("parent").is_null()) k.parent_position = json_point(n.at("parent"));
            if (!n.at("parent_index").is_null()) k.parent_index = n.at("parent_index").get<int>();
            for (const ojson& c : n.at("child")) k.children_positions.push_back(json_point(c));
            k.children_indices = n.at("child_index").get<std::vector<int>>();
            g.nodes.push_back(std::move(k));
        }
    } catch (const ojson::exception& e) {
        throw FormatError(std::string("graph document: ") + e.what());
    }
    if (std::string problem = check_graph(g); !problem.empty()) throw FormatError("graph document: " + problem);
    return g;
}

void write_graph(const VesselGraph& graph, const std::filesystem::path& path) {
    const std::string text = serialize_graph(graph);
    write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

VesselGraph read_graph(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return parse_graph(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace rba
