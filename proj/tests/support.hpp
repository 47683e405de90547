#pragma once

// Brute-force oracles shared by the unit and acceptance suites.

#include <functional>
#include <random>
#include <vector>

#include "cobordcsl/agraph.hpp"

namespace oracle {

using cobordcsl::AsyncGraph;
using cobordcsl::GraphHom;

// Every homomorphism a -> b, in lexicographic order. Stops after limit.
inline std::vector<GraphHom> all_homs(const AsyncGraph& a, const AsyncGraph& b, size_t limit = 200000)
{
    std::vector<GraphHom> out;
    GraphHom h;
    h.node.assign(a.n, -1);
    h.edge.assign(a.edges.size(), -1);
    h.tile.assign(a.tiles.size(), -1);
    std::function<void(int)> tiles = [&](int t) {
        if (out.size() >= limit)
            return;
        if (t == a.num_tiles()) {
            out.push_back(h);
            return;
        }
        const auto& x = a.tiles[t];
        for (int u = 0; u < b.num_tiles(); ++u) {
            const auto& y = b.tiles[u];
            if (h.edge[x.top[0]] != y.top[0] || h.edge[x.top[1]] != y.top[1] || h.edge[x.bot[0]] != y.bot[0] ||
                h.edge[x.bot[1]] != y.bot[1])
                continue;
            if (x.partner < t && h.tile[x.partner] != y.partner)
                continue;
            if (x.partner == t && y.partner != u)
                continue;
            h.tile[t] = u;
            tiles(t + 1);
        }
        h.tile[t] = -1;
    };
    std::function<void(int)> edges = [&](int e) {
        if (out.size() >= limit)
            return;
        if (e == a.num_edges()) {
            tiles(0);
            return;
        }
        for (int d = 0; d < b.num_edges(); ++d) {
            if (b.edges[d].src != h.node[a.edges[e].src] || b.edges[d].tgt != h.node[a.edges[e].tgt])
                continue;
            h.edge[e] = d;
            edges(e + 1);
        }
    };
    std::function<void(int)> nodes = [&](int v) {
        if (out.size() >= limit)
            return;
        if (v == a.n) {
            edges(0);
            return;
        }
        for (int w = 0; w < b.n; ++w) {
            h.node[v] = w;
            nodes(v + 1);
        }
    };
    nodes(0);
    return out;
}

inline AsyncGraph random_graph(std::mt19937& rng, int maxn, int maxe, int maxt)
{
    AsyncGraph g;
    int n = std::uniform_int_distribution<int>(1, maxn)(rng);
    int m = std::uniform_int_distribution<int>(0, maxe)(rng);
    g.n = n;
    std::uniform_int_distribution<int> nd(0, n - 1);
    for (int i = 0; i < m; ++i)
        g.add_edge(nd(rng), nd(rng), rng() % 2 ? cobordcsl::Pol::C : cobordcsl::Pol::F);
    std::vector<std::pair<std::array<int, 2>, std::array<int, 2>>> squares;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            if (g.edges[a].tgt != g.edges[b].src)
                continue;
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d)
                    if (g.edges[c].tgt == g.edges[d].src && g.edges[c].src == g.edges[a].src &&
                        g.edges[d].tgt == g.edges[b].tgt && std::array{a, b} <= std::array{c, d})
                        squares.push_back({{a, b}, {c, d}});
        }
    std::shuffle(squares.begin(), squares.end(), rng);
    int t = std::min<int>(maxt, static_cast<int>(squares.size()));
    t = t ? std::uniform_int_distribution<int>(0, t)(rng) : 0;
    for (int i = 0; i < t; ++i)
        g.add_square(squares[i].first, squares[i].second);
    return g;
}

// A random hom a -> b among all homs, if one exists.
inline bool random_hom(std::mt19937& rng, const AsyncGraph& a, const AsyncGraph& b, GraphHom& out)
{
    auto hs = all_homs(a, b, 5000);
    if (hs.empty())
        return false;
    out = hs[rng() % hs.size()];
    return true;
}

}  // namespace oracle
