#include "cobordcsl/agraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace cobordcsl {

const char* pol_name(Pol p)
{
    switch (p) {
    case Pol::None: return "-";
    case Pol::C: return "C";
    case Pol::F: return "F";
    case Pol::C1: return "C1";
    case Pol::C2: return "C2";
    }
    return "?";
}

int AsyncGraph::add_edge(int s, int t, Pol p)
{
    edges.push_back({s, t});
    pol.push_back(p);
    return num_edges() - 1;
}

int AsyncGraph::add_square(std::array<int, 2> top, std::array<int, 2> bot)
{
    int i = num_tiles();
    if (top == bot) {
        tiles.push_back({top, bot, i});
        return i;
    }
    tiles.push_back({top, bot, i + 1});
    tiles.push_back({bot, top, i});
    return i;
}

int AsyncGraph::add_tile_raw(std::array<int, 2> top, std::array<int, 2> bot)
{
    tiles.push_back({top, bot, -1});
    return num_tiles() - 1;
}

void AsyncGraph::close_symmetry()
{
    std::map<std::pair<std::array<int, 2>, std::array<int, 2>>, std::vector<int>> open;
    for (int i = 0; i < num_tiles(); ++i) {
        Tile& t = tiles[i];
        if (t.partner >= 0)
            continue;
        if (t.top == t.bot) {
            t.partner = i;
            continue;
        }
        auto it = open.find({t.bot, t.top});
        if (it != open.end() && !it->second.empty()) {
            int j = it->second.back();
            it->second.pop_back();
            t.partner = j;
            tiles[j].partner = i;
        } else {
            open[{t.top, t.bot}].push_back(i);
        }
    }
    int n0 = num_tiles();
    for (int i = 0; i < n0; ++i) {
        if (tiles[i].partner >= 0)
            continue;
        Tile t{tiles[i].bot, tiles[i].top, i};
        tiles[i].partner = num_tiles();
        tiles.push_back(t);
    }
}

bool AsyncGraph::operator==(const AsyncGraph& o) const
{
    return n == o.n && edges == o.edges && pol == o.pol && tiles == o.tiles;
}

namespace {

std::string fmt_tile(const Tile& t)
{
    std::ostringstream os;
    os << "(" << t.top[0] << "," << t.top[1] << ")~(" << t.bot[0] << "," << t.bot[1] << ")";
    return os.str();
}

bool in_range(int x, int n) { return x >= 0 && x < n; }

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x)
    {
        while (p[x] != x) {
            p[x] = p[p[x]];
            x = p[x];
        }
        return x;
    }
    void unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (a < b)
            p[b] = a;
        else
            p[a] = b;
    }
};

// Dense ids in order of the minimal representative.
std::vector<int> dense_classes(UnionFind& uf, int n, int& k)
{
    std::vector<int> id(n, -1), out(n);
    k = 0;
    for (int i = 0; i < n; ++i) {
        int r = uf.find(i);
        if (id[r] < 0)
            id[r] = k++;
        out[i] = id[r];
    }
    return out;
}

}  // namespace

Report validate(const AsyncGraph& g)
{
    Report r;
    if (g.pol.size() != g.edges.size())
        r.add("polarity vector size mismatch");
    for (int e = 0; e < g.num_edges(); ++e) {
        const Edge& x = g.edges[e];
        if (!in_range(x.src, g.n) || !in_range(x.tgt, g.n))
            r.add("edge " + std::to_string(e) + " has a dangling endpoint");
    }
    if (!r.ok())
        return r;
    for (int t = 0; t < g.num_tiles(); ++t) {
        const Tile& x = g.tiles[t];
        bool ok = true;
        for (int e : {x.top[0], x.top[1], x.bot[0], x.bot[1]})
            ok = ok && in_range(e, g.num_edges());
        if (!ok) {
            r.add("tile " + std::to_string(t) + " references a missing edge");
            continue;
        }
        const auto& E = g.edges;
        if (E[x.top[0]].tgt != E[x.top[1]].src || E[x.bot[0]].tgt != E[x.bot[1]].src)
            r.add("tile " + std::to_string(t) + " has a non-composable path " + fmt_tile(x));
        else if (E[x.top[0]].src != E[x.bot[0]].src || E[x.top[1]].tgt != E[x.bot[1]].tgt)
            r.add("tile " + std::to_string(t) + " paths differ in endpoints " + fmt_tile(x));
        if (!in_range(x.partner, g.num_tiles())) {
            r.add("tile " + std::to_string(t) + " has no symmetry partner");
            continue;
        }
        const Tile& y = g.tiles[x.partner];
        if (y.top != x.bot || y.bot != x.top || y.partner != t)
            r.add("tile " + std::to_string(t) + " symmetry is not an involution");
    }
    return r;
}

Report check_hom(const GraphHom& f, const AsyncGraph& dom, const AsyncGraph& cod)
{
    Report r;
    if (static_cast<int>(f.node.size()) != dom.n || static_cast<int>(f.edge.size()) != dom.num_edges() ||
        static_cast<int>(f.tile.size()) != dom.num_tiles()) {
        r.add("map sizes do not match the domain");
        return r;
    }
    for (int v = 0; v < dom.n; ++v)
        if (!in_range(f.node[v], cod.n))
            r.add("node " + std::to_string(v) + " maps out of range");
    for (int e = 0; e < dom.num_edges(); ++e)
        if (!in_range(f.edge[e], cod.num_edges()))
            r.add("edge " + std::to_string(e) + " maps out of range");
    for (int t = 0; t < dom.num_tiles(); ++t)
        if (!in_range(f.tile[t], cod.num_tiles()))
            r.add("tile " + std::to_string(t) + " maps out of range");
    if (!r.ok())
        return r;
    for (int e = 0; e < dom.num_edges(); ++e) {
        const Edge& a = dom.edges[e];
        const Edge& b = cod.edges[f.edge[e]];
        if (f.node[a.src] != b.src || f.node[a.tgt] != b.tgt)
            r.add("edge " + std::to_string(e) + " endpoints not preserved");
    }
    for (int t = 0; t < dom.num_tiles(); ++t) {
        const Tile& a = dom.tiles[t];
        const Tile& b = cod.tiles[f.tile[t]];
        if (f.edge[a.top[0]] != b.top[0] || f.edge[a.top[1]] != b.top[1] || f.edge[a.bot[0]] != b.bot[0] ||
            f.edge[a.bot[1]] != b.bot[1])
            r.add("tile " + std::to_string(t) + " boundary not preserved");
        if (a.partner >= 0 && f.tile[a.partner] != b.partner)
            r.add("tile " + std::to_string(t) + " symmetry not preserved");
    }
    return r;
}

GraphHom identity(const AsyncGraph& g)
{
    GraphHom h;
    h.node.resize(g.n);
    h.edge.resize(g.edges.size());
    h.tile.resize(g.tiles.size());
    std::iota(h.node.begin(), h.node.end(), 0);
    std::iota(h.edge.begin(), h.edge.end(), 0);
    std::iota(h.tile.begin(), h.tile.end(), 0);
    return h;
}

GraphHom then(const GraphHom& f, const GraphHom& g)
{
    GraphHom h;
    h.node.reserve(f.node.size());
    for (int x : f.node)
        h.node.push_back(g.node[x]);
    h.edge.reserve(f.edge.size());
    for (int x : f.edge)
        h.edge.push_back(g.edge[x]);
    h.tile.reserve(f.tile.size());
    for (int x : f.tile)
        h.tile.push_back(g.tile[x]);
    return h;
}

GraphHom empty_hom() { return {}; }

AsyncGraph terminal()
{
    AsyncGraph g;
    g.add_node();
    int e = g.add_edge(0, 0);
    g.add_square({e, e}, {e, e});
    return g;
}

AsyncGraph omega(const std::vector<Pol>& labels)
{
    AsyncGraph g;
    g.add_node();
    int k = static_cast<int>(labels.size());
    for (Pol p : labels)
        g.add_edge(0, 0, p);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            g.tiles.push_back({{a, b}, {b, a}, b * k + a});
    return g;
}

Product product(const AsyncGraph& a, const AsyncGraph& b)
{
    Product p;
    AsyncGraph& g = p.g;
    int nb = b.n, eb = b.num_edges(), tb = b.num_tiles();
    g.n = a.n * nb;
    g.edges.reserve(static_cast<size_t>(a.num_edges()) * eb);
    for (int e = 0; e < a.num_edges(); ++e)
        for (int f = 0; f < eb; ++f) {
            Pol pl = a.pol[e] != Pol::None ? a.pol[e] : b.pol[f];
            g.add_edge(a.edges[e].src * nb + b.edges[f].src, a.edges[e].tgt * nb + b.edges[f].tgt, pl);
        }
    g.tiles.reserve(static_cast<size_t>(a.num_tiles()) * tb);
    for (int t = 0; t < a.num_tiles(); ++t)
        for (int u = 0; u < tb; ++u) {
            const Tile& x = a.tiles[t];
            const Tile& y = b.tiles[u];
            Tile z;
            for (int i = 0; i < 2; ++i) {
                z.top[i] = x.top[i] * eb + y.top[i];
                z.bot[i] = x.bot[i] * eb + y.bot[i];
            }
            z.partner = x.partner * tb + y.partner;
            g.tiles.push_back(z);
        }
    for (int i = 0; i < g.n; ++i) {
        p.p1.node.push_back(i / std::max(nb, 1));
        p.p2.node.push_back(i % std::max(nb, 1));
    }
    for (int i = 0; i < g.num_edges(); ++i) {
        p.p1.edge.push_back(i / eb);
        p.p2.edge.push_back(i % eb);
    }
    for (int i = 0; i < g.num_tiles(); ++i) {
        p.p1.tile.push_back(i / tb);
        p.p2.tile.push_back(i % tb);
    }
    return p;
}

namespace {

// For a map m into a set of size k, the fibres in index order: off/pos
// give the position of each element within its fibre.
void fibres(const std::vector<int>& m, int k, std::vector<std::vector<int>>& fib, std::vector<int>& pos)
{
    fib.assign(k, {});
    pos.assign(m.size(), 0);
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
        pos[i] = static_cast<int>(fib[m[i]].size());
        fib[m[i]].push_back(i);
    }
}

}  // namespace

Pullback pullback(const GraphHom& f, const AsyncGraph& a, const GraphHom& g, const AsyncGraph& b,
                  const AsyncGraph& c)
{
    Pullback r;
    AsyncGraph& p = r.g;
    std::vector<std::vector<int>> nf, ef, tf;
    fibres(g.node, c.n, nf, r.npos);
    fibres(g.edge, c.num_edges(), ef, r.epos);
    fibres(g.tile, c.num_tiles(), tf, r.tpos);

    r.noff.resize(a.n);
    for (int x = 0; x < a.n; ++x) {
        r.noff[x] = p.n;
        for (int y : nf[f.node[x]]) {
            p.n++;
            r.p1.node.push_back(x);
            r.p2.node.push_back(y);
        }
    }
    r.eoff.resize(a.num_edges());
    for (int e = 0; e < a.num_edges(); ++e) {
        r.eoff[e] = p.num_edges();
        const Edge& ea = a.edges[e];
        for (int d : ef[f.edge[e]]) {
            const Edge& eb = b.edges[d];
            Pol pl = a.pol[e] != Pol::None ? a.pol[e] : b.pol[d];
            p.add_edge(r.noff[ea.src] + r.npos[eb.src], r.noff[ea.tgt] + r.npos[eb.tgt], pl);
            r.p1.edge.push_back(e);
            r.p2.edge.push_back(d);
        }
    }
    r.toff.resize(a.num_tiles());
    for (int t = 0; t < a.num_tiles(); ++t) {
        r.toff[t] = p.num_tiles();
        for (int u : tf[f.tile[t]]) {
            r.p1.tile.push_back(t);
            r.p2.tile.push_back(u);
            p.tiles.push_back({});
        }
    }
    for (int t = 0; t < a.num_tiles(); ++t) {
        const Tile& x = a.tiles[t];
        for (int u : tf[f.tile[t]]) {
            const Tile& y = b.tiles[u];
            Tile& z = p.tiles[r.toff[t] + r.tpos[u]];
            for (int i = 0; i < 2; ++i) {
                z.top[i] = r.eoff[x.top[i]] + r.epos[y.top[i]];
                z.bot[i] = r.eoff[x.bot[i]] + r.epos[y.bot[i]];
            }
            z.partner = r.toff[x.partner] + r.tpos[y.partner];
        }
    }
    return r;
}

GraphHom Pullback::mediator(const GraphHom& x1, const GraphHom& x2) const
{
    GraphHom m;
    m.node.resize(x1.node.size());
    for (size_t i = 0; i < x1.node.size(); ++i)
        m.node[i] = noff[x1.node[i]] + npos[x2.node[i]];
    m.edge.resize(x1.edge.size());
    for (size_t i = 0; i < x1.edge.size(); ++i)
        m.edge[i] = eoff[x1.edge[i]] + epos[x2.edge[i]];
    m.tile.resize(x1.tile.size());
    for (size_t i = 0; i < x1.tile.size(); ++i)
        m.tile[i] = toff[x1.tile[i]] + tpos[x2.tile[i]];
    return m;
}

Coproduct coproduct(const AsyncGraph& a, const AsyncGraph& b)
{
    Coproduct c;
    AsyncGraph& g = c.g;
    g = a;
    int n0 = a.n, e0 = a.num_edges(), t0 = a.num_tiles();
    g.n += b.n;
    for (int e = 0; e < b.num_edges(); ++e)
        g.add_edge(b.edges[e].src + n0, b.edges[e].tgt + n0, b.pol[e]);
    for (const Tile& t : b.tiles)
        g.tiles.push_back(
            {{t.top[0] + e0, t.top[1] + e0}, {t.bot[0] + e0, t.bot[1] + e0}, t.partner + t0});
    c.i1 = identity(a);
    GraphHom id = identity(b);
    for (int& x : id.node)
        x += n0;
    for (int& x : id.edge)
        x += e0;
    for (int& x : id.tile)
        x += t0;
    c.i2 = id;
    return c;
}

Pushout pushout(const GraphHom& f, const AsyncGraph& a, const GraphHom& g, const AsyncGraph& b,
                const AsyncGraph& m)
{
    Coproduct s = coproduct(a, b);
    UnionFind un(s.g.n), ue(s.g.num_edges()), ut(s.g.num_tiles());
    for (int x = 0; x < m.n; ++x)
        un.unite(s.i1.node[f.node[x]], s.i2.node[g.node[x]]);
    for (int x = 0; x < m.num_edges(); ++x)
        ue.unite(s.i1.edge[f.edge[x]], s.i2.edge[g.edge[x]]);
    for (int x = 0; x < m.num_tiles(); ++x)
        ut.unite(s.i1.tile[f.tile[x]], s.i2.tile[g.tile[x]]);
    int kn, ke, kt;
    std::vector<int> cn = dense_classes(un, s.g.n, kn);
    std::vector<int> ce = dense_classes(ue, s.g.num_edges(), ke);
    std::vector<int> ct = dense_classes(ut, s.g.num_tiles(), kt);

    Pushout r;
    AsyncGraph& q = r.g;
    q.n = kn;
    q.edges.resize(ke);
    q.pol.resize(ke);
    std::vector<char> seen(ke, 0);
    for (int e = 0; e < s.g.num_edges(); ++e) {
        if (seen[ce[e]])
            continue;
        seen[ce[e]] = 1;
        q.edges[ce[e]] = {cn[s.g.edges[e].src], cn[s.g.edges[e].tgt]};
        q.pol[ce[e]] = s.g.pol[e];
    }
    q.tiles.resize(kt);
    std::vector<char> tseen(kt, 0);
    for (int t = 0; t < s.g.num_tiles(); ++t) {
        if (tseen[ct[t]])
            continue;
        tseen[ct[t]] = 1;
        const Tile& x = s.g.tiles[t];
        q.tiles[ct[t]] = {{ce[x.top[0]], ce[x.top[1]]}, {ce[x.bot[0]], ce[x.bot[1]]}, ct[x.partner]};
    }
    r.i1 = then(s.i1, GraphHom{cn, ce, ct});
    r.i2 = then(s.i2, GraphHom{cn, ce, ct});
    return r;
}

GraphHom Pushout::mediator(const GraphHom& h1, const GraphHom& h2) const
{
    GraphHom m;
    m.node.assign(g.n, -1);
    m.edge.assign(g.num_edges(), -1);
    m.tile.assign(g.num_tiles(), -1);
    for (size_t x = 0; x < h1.node.size(); ++x)
        m.node[i1.node[x]] = h1.node[x];
    for (size_t x = 0; x < h2.node.size(); ++x)
        m.node[i2.node[x]] = h2.node[x];
    for (size_t x = 0; x < h1.edge.size(); ++x)
        m.edge[i1.edge[x]] = h1.edge[x];
    for (size_t x = 0; x < h2.edge.size(); ++x)
        m.edge[i2.edge[x]] = h2.edge[x];
    for (size_t x = 0; x < h1.tile.size(); ++x)
        m.tile[i1.tile[x]] = h1.tile[x];
    for (size_t x = 0; x < h2.tile.size(); ++x)
        m.tile[i2.tile[x]] = h2.tile[x];
    return m;
}

AsyncGraph quotient_nodes(const AsyncGraph& g, const std::vector<int>& cls, int k, GraphHom* q)
{
    AsyncGraph r = g;
    r.n = k;
    for (Edge& e : r.edges) {
        e.src = cls[e.src];
        e.tgt = cls[e.tgt];
    }
    if (q) {
        *q = identity(g);
        q->node = cls;
    }
    return r;
}

AsyncGraph restrict(const AsyncGraph& g, const std::vector<char>& keep_node, const std::vector<char>& keep_edge,
                    GraphHom* inc)
{
    AsyncGraph r;
    std::vector<int> nid(g.n, -1), eid(g.num_edges(), -1), tid(g.num_tiles(), -1);
    GraphHom h;
    for (int v = 0; v < g.n; ++v)
        if (keep_node[v]) {
            nid[v] = r.add_node();
            h.node.push_back(v);
        }
    for (int e = 0; e < g.num_edges(); ++e) {
        const Edge& x = g.edges[e];
        if (keep_edge[e] && nid[x.src] >= 0 && nid[x.tgt] >= 0) {
            eid[e] = r.add_edge(nid[x.src], nid[x.tgt], g.pol[e]);
            h.edge.push_back(e);
        }
    }
    for (int t = 0; t < g.num_tiles(); ++t) {
        const Tile& x = g.tiles[t];
        if (eid[x.top[0]] >= 0 && eid[x.top[1]] >= 0 && eid[x.bot[0]] >= 0 && eid[x.bot[1]] >= 0) {
            tid[t] = r.num_tiles();
            r.tiles.push_back({{eid[x.top[0]], eid[x.top[1]]}, {eid[x.bot[0]], eid[x.bot[1]]}, -1});
            h.tile.push_back(t);
        }
    }
    for (int t = 0; t < r.num_tiles(); ++t)
        r.tiles[t].partner = tid[g.tiles[h.tile[t]].partner];
    if (inc)
        *inc = std::move(h);
    return r;
}

Report validate(const PointedGraph& p)
{
    Report r = validate(p.g);
    if (!in_range(p.point, p.g.n)) {
        r.add("point is not a node");
        return r;
    }
    for (int e = 0; e < p.g.num_edges(); ++e)
        if (p.g.edges[e].src == p.point)
            r.add("point has outgoing edge " + std::to_string(e));
    return r;
}

PointedGraph add_point(const AsyncGraph& g)
{
    PointedGraph p{g, g.n};
    p.g.n++;
    return p;
}

GraphHom point_unit(const AsyncGraph& g) { return identity(g); }

GraphHom point_mult(const AsyncGraph& g)
{
    GraphHom h = identity(add_point(add_point(g).g).g);
    h.node[g.n + 1] = g.n;
    return h;
}

Smash smash(const PointedGraph& a, const PointedGraph& b)
{
    Product p = product(a.g, b.g);
    std::vector<int> cls(p.g.n);
    int k = 0;
    for (int i = 0; i < p.g.n; ++i) {
        bool pt = p.p1.node[i] == a.point || p.p2.node[i] == b.point;
        cls[i] = pt ? -1 : k++;
    }
    int point = k++;
    for (int& c : cls)
        if (c < 0)
            c = point;
    Smash s;
    s.p.g = quotient_nodes(p.g, cls, k, &s.q);
    s.p.point = point;
    return s;
}

const char* shape_name(LiftingShape s)
{
    switch (s) {
    case LiftingShape::CodeAtSource: return "code-arrow-at-source";
    case LiftingShape::FrameAtSource: return "frame-arrow-at-source";
    case LiftingShape::FrameAtTarget: return "frame-arrow-at-target";
    case LiftingShape::TileOverTop: return "tile-over-top-path";
    }
    return "?";
}

std::string LiftFailure::describe() const
{
    std::ostringstream os;
    os << shape_name(shape) << ": ";
    if (shape == LiftingShape::TileOverTop)
        os << "path (" << anchor << "," << anchor2 << ") has no tile over tile " << target;
    else
        os << "node " << anchor << " has no edge over edge " << target;
    return os.str();
}

std::optional<LiftFailure> check_lifting(LiftingShape s, const GraphHom& f, const AsyncGraph& g,
                                         const AsyncGraph& h)
{
    if (s == LiftingShape::TileOverTop) {
        std::unordered_map<std::uint64_t, std::vector<int>> htiles;
        auto key = [](int x, int y) { return (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint32_t>(y); };
        for (int t = 0; t < h.num_tiles(); ++t)
            htiles[key(h.tiles[t].top[0], h.tiles[t].top[1])].push_back(t);
        std::unordered_map<std::uint64_t, std::vector<int>> gimg;
        for (int t = 0; t < g.num_tiles(); ++t)
            gimg[key(g.tiles[t].top[0], g.tiles[t].top[1])].push_back(f.tile[t]);
        std::vector<std::vector<int>> out(g.n);
        for (int e = 0; e < g.num_edges(); ++e)
            out[g.edges[e].src].push_back(e);
        for (int e1 = 0; e1 < g.num_edges(); ++e1)
            for (int e2 : out[g.edges[e1].tgt]) {
                auto it = htiles.find(key(f.edge[e1], f.edge[e2]));
                if (it == htiles.end())
                    continue;
                auto jt = gimg.find(key(e1, e2));
                for (int t : it->second) {
                    bool found = jt != gimg.end() &&
                                 std::find(jt->second.begin(), jt->second.end(), t) != jt->second.end();
                    if (!found)
                        return LiftFailure{s, e1, e2, t};
                }
            }
        return std::nullopt;
    }
    bool at_target = s == LiftingShape::FrameAtTarget;
    auto wanted = [&](Pol p) { return s == LiftingShape::CodeAtSource ? is_code(p) : p == Pol::F; };
    std::vector<std::vector<int>> hadj(h.n), gimg(g.n);
    for (int e = 0; e < h.num_edges(); ++e)
        if (wanted(h.pol[e]))
            hadj[at_target ? h.edges[e].tgt : h.edges[e].src].push_back(e);
    for (int e = 0; e < g.num_edges(); ++e)
        gimg[at_target ? g.edges[e].tgt : g.edges[e].src].push_back(f.edge[e]);
    for (auto& v : gimg)
        std::sort(v.begin(), v.end());
    for (int x = 0; x < g.n; ++x)
        for (int e : hadj[f.node[x]])
            if (!std::binary_search(gimg[x].begin(), gimg[x].end(), e))
                return LiftFailure{s, x, -1, e};
    return std::nullopt;
}

namespace {

bool injective(const std::vector<int>& m)
{
    std::vector<int> s = m;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
}

bool surjective(const std::vector<int>& m, int k)
{
    std::vector<char> hit(k, 0);
    for (int x : m)
        hit[x] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

}  // namespace

bool is_mono(const GraphHom& f) { return injective(f.node) && injective(f.edge) && injective(f.tile); }

bool is_epi(const GraphHom& f, const AsyncGraph& cod)
{
    return surjective(f.node, cod.n) && surjective(f.edge, cod.num_edges()) &&
           surjective(f.tile, cod.num_tiles());
}

bool is_iso(const GraphHom& f, const AsyncGraph& dom, const AsyncGraph& cod)
{
    return check_hom(f, dom, cod).ok() && is_mono(f) && is_epi(f, cod);
}

bool is_pullback(const GraphHom& p1, const GraphHom& p2, const AsyncGraph& p, const GraphHom& f,
                 const AsyncGraph& a, const GraphHom& g, const AsyncGraph& b, const AsyncGraph& c)
{
    if (then(p1, f) != then(p2, g))
        return false;
    Pullback pb = pullback(f, a, g, b, c);
    return is_iso(pb.mediator(p1, p2), p, pb.g);
}

bool is_pushout(const GraphHom& f, const AsyncGraph& a, const GraphHom& g, const AsyncGraph& b,
                const AsyncGraph& m, const GraphHom& i1, const GraphHom& i2, const AsyncGraph& q)
{
    if (then(f, i1) != then(g, i2))
        return false;
    Pushout po = pushout(f, a, g, b, m);
    GraphHom med = po.mediator(i1, i2);
    return check_hom(med, po.g, q).ok() && is_mono(med) && is_epi(med, q);
}

VanKampenResult verify_van_kampen(const Cube& c)
{
    VanKampenResult r;
    auto need = [&](bool ok, const char* what) {
        if (!ok) {
            r.precondition = false;
            r.report.add(what);
        }
    };
    need(check_hom(c.f, c.M, c.A).ok() && check_hom(c.g, c.M, c.B).ok() && check_hom(c.h, c.A, c.D).ok() &&
             check_hom(c.k, c.B, c.D).ok(),
         "bottom face maps are not homomorphisms");
    need(check_hom(c.fp, c.Mp, c.Ap).ok() && check_hom(c.gp, c.Mp, c.Bp).ok() &&
             check_hom(c.hp, c.Ap, c.Dp).ok() && check_hom(c.kp, c.Bp, c.Dp).ok(),
         "top face maps are not homomorphisms");
    need(check_hom(c.m, c.Mp, c.M).ok() && check_hom(c.a, c.Ap, c.A).ok() && check_hom(c.b, c.Bp, c.B).ok() &&
             check_hom(c.d, c.Dp, c.D).ok(),
         "vertical maps are not homomorphisms");
    if (!r.precondition) {
        r.holds = false;
        return r;
    }
    need(then(c.fp, c.a) == then(c.m, c.f) && then(c.gp, c.b) == then(c.m, c.g) &&
             then(c.hp, c.d) == then(c.a, c.h) && then(c.kp, c.d) == then(c.b, c.k) &&
             then(c.fp, c.hp) == then(c.gp, c.kp),
         "cube does not commute");
    need(is_mono(c.f), "bottom leg M -> A is not a monomorphism");
    need(is_pushout(c.f, c.A, c.g, c.B, c.M, c.h, c.k, c.D), "bottom face is not a pushout");
    need(is_pullback(c.fp, c.m, c.Mp, c.a, c.Ap, c.f, c.M, c.A), "back face over M -> A is not a pullback");
    need(is_pullback(c.gp, c.m, c.Mp, c.b, c.Bp, c.g, c.M, c.B), "back face over M -> B is not a pullback");
    if (!r.precondition) {
        r.holds = false;
        return r;
    }
    bool top = is_pushout(c.fp, c.Ap, c.gp, c.Bp, c.Mp, c.hp, c.kp, c.Dp);
    bool front1 = is_pullback(c.hp, c.a, c.Ap, c.d, c.Dp, c.h, c.A, c.D);
    bool front2 = is_pullback(c.kp, c.b, c.Bp, c.d, c.Dp, c.k, c.B, c.D);
    r.holds = top == (front1 && front2);
    if (!r.holds)
        r.report.add(top ? "top is a pushout but a front face is not a pullback"
                         : "front faces are pullbacks but top is not a pushout");
    return r;
}

}  // namespace cobordcsl
