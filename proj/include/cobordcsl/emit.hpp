#pragma once

#include <string>
#include <vector>

#include "cobordcsl/cobord.hpp"

namespace cobordcsl {

// A graph with printable node and edge labels, as written to disk.
struct LabeledGraph {
    AsyncGraph g;
    std::vector<std::string> node_label, edge_label;
    int point = -1;
};

LabeledGraph labeled(const AsyncGraph& g);
LabeledGraph labeled(const Cob& c);

// Canonical JSON: ids in increasing order, fixed key order, no whitespace
// beyond one newline at the end.
std::string to_json(const LabeledGraph& g);
LabeledGraph from_json(const std::string& text);
// Code edges solid, Frame edges dashed, Error nodes filled red.
std::string to_dot(const LabeledGraph& g, const std::string& name = "G");

}  // namespace cobordcsl
