#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cobordcsl {

// Edge polarity. None for graphs that are not labeled over Omega.
enum class Pol : std::uint8_t { None, C, F, C1, C2 };

inline bool is_code(Pol p) { return p == Pol::C || p == Pol::C1 || p == Pol::C2; }
const char* pol_name(Pol p);

struct Edge {
    int src = 0;
    int tgt = 0;
};

// A tile is a square top[0];top[1] ~ bot[0];bot[1]. The partner has the
// boundary swapped; a tile with top == bot is its own partner.
struct Tile {
    std::array<int, 2> top{};
    std::array<int, 2> bot{};
    int partner = -1;
};

struct AsyncGraph {
    int n = 0;
    std::vector<Edge> edges;
    std::vector<Pol> pol;
    std::vector<Tile> tiles;

    int add_node() { return n++; }
    int add_edge(int s, int t, Pol p = Pol::None);
    // Adds the tile and its partner (unless top == bot); returns the first.
    int add_square(std::array<int, 2> top, std::array<int, 2> bot);
    // Adds one tile without partner; close_symmetry() fixes it up later.
    int add_tile_raw(std::array<int, 2> top, std::array<int, 2> bot);
    void close_symmetry();

    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_tiles() const { return static_cast<int>(tiles.size()); }
    bool operator==(const AsyncGraph&) const;
};

inline bool operator==(const Edge& a, const Edge& b) { return a.src == b.src && a.tgt == b.tgt; }
inline bool operator==(const Tile& a, const Tile& b)
{
    return a.top == b.top && a.bot == b.bot && a.partner == b.partner;
}

struct GraphHom {
    std::vector<int> node;
    std::vector<int> edge;
    std::vector<int> tile;
    bool operator==(const GraphHom&) const = default;
};

struct Report {
    std::vector<std::string> issues;
    bool ok() const { return issues.empty(); }
    void add(std::string s) { issues.push_back(std::move(s)); }
};

Report validate(const AsyncGraph& g);
Report check_hom(const GraphHom& f, const AsyncGraph& dom, const AsyncGraph& cod);

GraphHom identity(const AsyncGraph& g);
// then(f, g) = g . f
GraphHom then(const GraphHom& f, const GraphHom& g);
GraphHom empty_hom();

AsyncGraph terminal();
AsyncGraph omega(const std::vector<Pol>& labels);

// Product. Node (i, j) has index i * b.n + j, likewise for edges and tiles.
// An edge takes the polarity of its left component unless that is None.
struct Product {
    AsyncGraph g;
    GraphHom p1, p2;
};
Product product(const AsyncGraph& a, const AsyncGraph& b);

struct Pullback {
    AsyncGraph g;
    GraphHom p1, p2;
    // Node and edge offsets, used to answer mediator queries in O(1).
    std::vector<int> noff, npos, eoff, epos, toff, tpos;
    GraphHom mediator(const GraphHom& x1, const GraphHom& x2) const;
};
Pullback pullback(const GraphHom& f, const AsyncGraph& a, const GraphHom& g, const AsyncGraph& b,
                  const AsyncGraph& c);

struct Coproduct {
    AsyncGraph g;
    GraphHom i1, i2;
};
Coproduct coproduct(const AsyncGraph& a, const AsyncGraph& b);

struct Pushout {
    AsyncGraph g;
    GraphHom i1, i2;
    GraphHom mediator(const GraphHom& h1, const GraphHom& h2) const;
};
Pushout pushout(const GraphHom& f, const AsyncGraph& a, const GraphHom& g, const AsyncGraph& b,
                const AsyncGraph& m);

// Quotient by a node map (class ids dense in [0, k)). Edges and tiles are kept.
AsyncGraph quotient_nodes(const AsyncGraph& g, const std::vector<int>& cls, int k, GraphHom* q = nullptr);

// Subgraph on the kept nodes and edges (edges need both endpoints kept);
// tiles survive when all four edges survive. inc is the inclusion.
AsyncGraph restrict(const AsyncGraph& g, const std::vector<char>& keep_node, const std::vector<char>& keep_edge,
                    GraphHom* inc = nullptr);

struct PointedGraph {
    AsyncGraph g;
    int point = -1;
};
Report validate(const PointedGraph& p);
PointedGraph add_point(const AsyncGraph& g);
// The unit g -> T(g) and the multiplication T(T(g)) -> T(g).
GraphHom point_unit(const AsyncGraph& g);
GraphHom point_mult(const AsyncGraph& g);
// Collapses every node with a point component into a single new point.
struct Smash {
    PointedGraph p;
    GraphHom q;  // from the product
};
Smash smash(const PointedGraph& a, const PointedGraph& b);

enum class LiftingShape { CodeAtSource, FrameAtSource, FrameAtTarget, TileOverTop };
const char* shape_name(LiftingShape s);

struct LiftFailure {
    LiftingShape shape;
    int anchor = -1;   // node of the domain, or the first edge of the path
    int anchor2 = -1;  // second edge of the path for TileOverTop
    int target = -1;   // edge or tile of the codomain with no preimage
    std::string describe() const;
};

// Right lifting of f: g -> h against the walking shape. The polarity of an
// edge of h decides whether it counts as Code or Frame.
std::optional<LiftFailure> check_lifting(LiftingShape s, const GraphHom& f, const AsyncGraph& g,
                                         const AsyncGraph& h);

bool is_mono(const GraphHom& f);
bool is_epi(const GraphHom& f, const AsyncGraph& cod);
bool is_iso(const GraphHom& f, const AsyncGraph& dom, const AsyncGraph& cod);

// Squares  p1: P -> A, p2: P -> B over f: A -> C, g: B -> C.
bool is_pullback(const GraphHom& p1, const GraphHom& p2, const AsyncGraph& p, const GraphHom& f,
                 const AsyncGraph& a, const GraphHom& g, const AsyncGraph& b, const AsyncGraph& c);
// Squares  f: M -> A, g: M -> B with i1: A -> Q, i2: B -> Q.
bool is_pushout(const GraphHom& f, const AsyncGraph& a, const GraphHom& g, const AsyncGraph& b,
                const AsyncGraph& m, const GraphHom& i1, const GraphHom& i2, const AsyncGraph& q);

// Bottom face M -> A, M -> B, A -> D, B -> D; top face primed; verticals
// from the top face down to the bottom face.
struct Cube {
    AsyncGraph M, A, B, D, Mp, Ap, Bp, Dp;
    GraphHom f, g, h, k;      // M->A, M->B, A->D, B->D
    GraphHom fp, gp, hp, kp;  // primed
    GraphHom m, a, b, d;      // Mp->M, Ap->A, Bp->B, Dp->D
};
struct VanKampenResult {
    bool precondition = true;
    bool holds = true;
    Report report;
};
VanKampenResult verify_van_kampen(const Cube& c);

}  // namespace cobordcsl
