#include "cobordcsl/emit.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cobordcsl {

using json = nlohmann::ordered_json;

namespace {

Pol pol_of(const std::string& s)
{
    for (Pol p : {Pol::None, Pol::C, Pol::F, Pol::C1, Pol::C2})
        if (s == pol_name(p))
            return p;
    throw std::invalid_argument("unknown polarity " + s);
}

bool is_error(const LabeledGraph& g, int v) { return v == g.point || g.node_label[v] == "Error"; }

std::string dot_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

LabeledGraph labeled(const AsyncGraph& g)
{
    LabeledGraph l;
    l.g = g;
    for (int v = 0; v < g.n; ++v)
        l.node_label.push_back(std::to_string(v));
    for (int e = 0; e < g.num_edges(); ++e)
        l.edge_label.push_back(std::to_string(e));
    return l;
}

LabeledGraph labeled(const Cob& c)
{
    LabeledGraph l;
    l.g = c.sup;
    l.point = c.point;
    for (int v = 0; v < c.sup.n; ++v)
        l.node_label.push_back(v == c.point ? "Error" : c.tpl->node_label(c.lambda.node[v]));
    for (int e = 0; e < c.sup.num_edges(); ++e)
        l.edge_label.push_back(c.tpl->edge_label(c.lambda.edge[e]));
    return l;
}

std::string to_json(const LabeledGraph& l)
{
    json j;
    j["nodes"] = json::array();
    for (int v = 0; v < l.g.n; ++v)
        j["nodes"].push_back({{"id", v}, {"label", l.node_label[v]}});
    j["edges"] = json::array();
    for (int e = 0; e < l.g.num_edges(); ++e)
        j["edges"].push_back({{"id", e},
                              {"src", l.g.edges[e].src},
                              {"tgt", l.g.edges[e].tgt},
                              {"label", l.edge_label[e]},
                              {"polarity", pol_name(l.g.pol[e])}});
    j["tiles"] = json::array();
    for (const Tile& t : l.g.tiles)
        j["tiles"].push_back({{"top", {t.top[0], t.top[1]}}, {"bottom", {t.bot[0], t.bot[1]}}});
    if (l.point >= 0)
        j["point"] = l.point;
    return j.dump() + "\n";
}

LabeledGraph from_json(const std::string& text)
{
    json j = json::parse(text);
    LabeledGraph l;
    for (const auto& v : j.at("nodes")) {
        if (v.at("id").get<int>() != l.g.n)
            throw std::invalid_argument("node ids must be 0..n-1 in order");
        l.g.add_node();
        l.node_label.push_back(v.at("label").get<std::string>());
    }
    for (const auto& e : j.at("edges")) {
        if (e.at("id").get<int>() != l.g.num_edges())
            throw std::invalid_argument("edge ids must be 0..m-1 in order");
        int s = e.at("src").get<int>(), t = e.at("tgt").get<int>();
        if (s < 0 || s >= l.g.n || t < 0 || t >= l.g.n)
            throw std::invalid_argument("edge endpoint out of range");
        l.g.add_edge(s, t, pol_of(e.at("polarity").get<std::string>()));
        l.edge_label.push_back(e.at("label").get<std::string>());
    }
    for (const auto& t : j.at("tiles")) {
        auto top = t.at("top").get<std::array<int, 2>>();
        auto bot = t.at("bottom").get<std::array<int, 2>>();
        for (int e : {top[0], top[1], bot[0], bot[1]})
            if (e < 0 || e >= l.g.num_edges())
                throw std::invalid_argument("tile edge out of range");
        l.g.add_tile_raw(top, bot);
    }
    l.g.close_symmetry();
    if (l.g.num_tiles() != static_cast<int>(j.at("tiles").size()))
        throw std::invalid_argument("tiles are not closed under symmetry");
    if (j.contains("point"))
        l.point = j["point"].get<int>();
    return l;
}

std::string to_dot(const LabeledGraph& l, const std::string& name)
{
    std::ostringstream o;
    o << "digraph \"" << dot_escape(name) << "\" {\n";
    for (int v = 0; v < l.g.n; ++v) {
        o << "  n" << v << " [label=\"" << dot_escape(l.node_label[v]) << "\"";
        if (is_error(l, v))
            o << ", shape=box, style=filled, fillcolor=red";
        o << "];\n";
    }
    for (int e = 0; e < l.g.num_edges(); ++e) {
        const Edge& d = l.g.edges[e];
        o << "  n" << d.src << " -> n" << d.tgt << " [label=\"" << dot_escape(l.edge_label[e]) << "\"";
        if (is_code(l.g.pol[e]))
            o << ", style=bold, color=blue";
        else if (l.g.pol[e] == Pol::F)
            o << ", style=dashed, color=gray";
        o << "];\n";
    }
    o << "}\n";
    return o.str();
}

}  // namespace cobordcsl
