#include <gtest/gtest.h>

#include <random>

#include "cobordcsl/agraph.hpp"
#include "support.hpp"

using namespace cobordcsl;

namespace {

AsyncGraph square_graph()
{
    // a -x-> b -y'-> d, a -y-> c -x'-> d with one tile.
    AsyncGraph g;
    g.n = 4;
    int x = g.add_edge(0, 1, Pol::C);
    int yp = g.add_edge(1, 3, Pol::F);
    int y = g.add_edge(0, 2, Pol::F);
    int xp = g.add_edge(2, 3, Pol::C);
    g.add_square({x, yp}, {y, xp});
    return g;
}

}  // namespace

TEST(AGraph, EmptyGraphIsValid) { EXPECT_TRUE(validate(AsyncGraph{}).ok()); }

TEST(AGraph, DanglingEdgeReported)
{
    AsyncGraph g;
    g.n = 1;
    g.add_edge(0, 3);
    EXPECT_EQ(validate(g).issues.size(), 1u);
}

TEST(AGraph, TileEndpointMismatchReported)
{
    AsyncGraph g = square_graph();
    g.edges[3].tgt = 1;
    auto r = validate(g);
    EXPECT_FALSE(r.ok());
}

TEST(AGraph, CloseSymmetryAddsPartners)
{
    AsyncGraph g;
    g.n = 4;
    g.add_edge(0, 1);
    g.add_edge(1, 3);
    g.add_edge(0, 2);
    g.add_edge(2, 3);
    g.add_tile_raw({0, 1}, {2, 3});
    g.close_symmetry();
    EXPECT_EQ(g.num_tiles(), 2);
    EXPECT_TRUE(validate(g).ok());
}

TEST(AGraph, IdentityAndSwappedNodes)
{
    AsyncGraph g = square_graph();
    EXPECT_TRUE(check_hom(identity(g), g, g).ok());
    GraphHom h = identity(g);
    std::swap(h.node[1], h.node[2]);
    EXPECT_FALSE(check_hom(h, g, g).ok());
}

TEST(AGraph, CheckHomAgreesWithEnumeration)
{
    std::mt19937 rng(7);
    for (int it = 0; it < 60; ++it) {
        AsyncGraph a = oracle::random_graph(rng, 3, 3, 2);
        AsyncGraph b = oracle::random_graph(rng, 4, 5, 4);
        auto homs = oracle::all_homs(a, b);
        for (const auto& h : homs)
            ASSERT_TRUE(check_hom(h, a, b).ok());
        // Random maps: valid exactly when listed.
        for (int k = 0; k < 30; ++k) {
            GraphHom h;
            for (int v = 0; v < a.n; ++v)
                h.node.push_back(rng() % b.n);
            bool feasible = true;
            for (int e = 0; e < a.num_edges(); ++e) {
                if (b.edges.empty()) {
                    feasible = false;
                    break;
                }
                h.edge.push_back(rng() % b.num_edges());
            }
            for (int t = 0; t < a.num_tiles(); ++t) {
                if (b.tiles.empty()) {
                    feasible = false;
                    break;
                }
                h.tile.push_back(rng() % b.num_tiles());
            }
            if (!feasible)
                continue;
            bool listed = std::find(homs.begin(), homs.end(), h) != homs.end();
            EXPECT_EQ(check_hom(h, a, b).ok(), listed);
        }
    }
}

TEST(AGraph, ProductWithTerminal)
{
    AsyncGraph g = square_graph();
    Product p = product(g, terminal());
    EXPECT_TRUE(validate(p.g).ok());
    EXPECT_EQ(p.g, g);
    EXPECT_TRUE(is_iso(p.p1, p.g, g));
}

TEST(AGraph, ProductCountsAndProjections)
{
    std::mt19937 rng(3);
    for (int it = 0; it < 20; ++it) {
        AsyncGraph a = oracle::random_graph(rng, 4, 4, 2);
        AsyncGraph b = oracle::random_graph(rng, 4, 4, 2);
        Product p = product(a, b);
        EXPECT_TRUE(validate(p.g).ok());
        EXPECT_EQ(p.g.n, a.n * b.n);
        EXPECT_EQ(p.g.num_edges(), a.num_edges() * b.num_edges());
        EXPECT_TRUE(check_hom(p.p1, p.g, a).ok());
        EXPECT_TRUE(check_hom(p.p2, p.g, b).ok());
    }
}

TEST(AGraph, OmegaShape)
{
    AsyncGraph o0 = omega({});
    EXPECT_EQ(o0.n, 1);
    EXPECT_EQ(o0.num_edges(), 0);
    AsyncGraph o = omega({Pol::C, Pol::F});
    EXPECT_TRUE(validate(o).ok());
    EXPECT_EQ(o.n, 1);
    EXPECT_EQ(o.num_edges(), 2);
    EXPECT_EQ(o.num_tiles(), 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            int found = 0;
            for (const Tile& t : o.tiles)
                found += t.top == std::array{a, b} && t.bot == std::array{b, a};
            EXPECT_EQ(found, 1);
        }
}

TEST(AGraph, PullbackAlongIdentity)
{
    AsyncGraph g = square_graph();
    AsyncGraph c = omega({Pol::C, Pol::F});
    GraphHom f;
    f.node.assign(4, 0);
    f.edge = {0, 1, 1, 0};
    f.tile = {1, 2};
    ASSERT_TRUE(check_hom(f, g, c).ok());
    Pullback pb = pullback(f, g, identity(c), c, c);
    EXPECT_TRUE(validate(pb.g).ok());
    EXPECT_TRUE(is_iso(pb.p1, pb.g, g));
}

TEST(AGraph, PullbackOverTerminalIsProduct)
{
    std::mt19937 rng(11);
    AsyncGraph a = oracle::random_graph(rng, 3, 3, 2);
    AsyncGraph b = oracle::random_graph(rng, 3, 3, 2);
    AsyncGraph t = terminal();
    GraphHom fa{std::vector<int>(a.n, 0), std::vector<int>(a.edges.size(), 0), std::vector<int>(a.tiles.size(), 0)};
    GraphHom fb{std::vector<int>(b.n, 0), std::vector<int>(b.edges.size(), 0), std::vector<int>(b.tiles.size(), 0)};
    Pullback pb = pullback(fa, a, fb, b, t);
    Product p = product(a, b);
    EXPECT_EQ(pb.g.n, p.g.n);
    EXPECT_EQ(pb.g.num_edges(), p.g.num_edges());
    EXPECT_EQ(pb.g.num_tiles(), p.g.num_tiles());
    EXPECT_TRUE(is_iso(pb.mediator(p.p1, p.p2), p.g, pb.g));
}

TEST(AGraph, CoproductLaws)
{
    AsyncGraph g = square_graph();
    Coproduct c = coproduct(g, AsyncGraph{});
    EXPECT_EQ(c.g, g);
    Coproduct d = coproduct(g, g);
    EXPECT_EQ(d.g.n, 8);
    EXPECT_TRUE(is_mono(d.i1));
    EXPECT_FALSE(is_epi(d.i1, d.g));
    std::vector<char> hit(d.g.n, 0);
    for (int x : d.i1.node)
        hit[x] = 1;
    for (int x : d.i2.node)
        hit[x] = 1;
    EXPECT_TRUE(std::all_of(hit.begin(), hit.end(), [](char h) { return h; }));
}

TEST(AGraph, PushoutGluesOneNode)
{
    AsyncGraph pt;
    pt.n = 1;
    AsyncGraph g = square_graph();
    GraphHom f{{3}, {}, {}}, h{{0}, {}, {}};
    Pushout po = pushout(f, g, h, g, pt);
    EXPECT_EQ(po.g.n, 7);
    EXPECT_TRUE(validate(po.g).ok());
    Pushout e = pushout(empty_hom(), g, empty_hom(), g, AsyncGraph{});
    EXPECT_EQ(e.g, coproduct(g, g).g);
}

TEST(AGraph, MonoEpi)
{
    AsyncGraph two;
    two.n = 2;
    AsyncGraph one;
    one.n = 1;
    GraphHom collapse{{0, 0}, {}, {}};
    EXPECT_TRUE(is_epi(collapse, one));
    EXPECT_FALSE(is_mono(collapse));
    EXPECT_TRUE(is_mono(identity(two)) && is_epi(identity(two), two));
}

TEST(AGraph, PointedAndSmash)
{
    PointedGraph e = add_point(AsyncGraph{});
    EXPECT_EQ(e.g.n, 1);
    EXPECT_TRUE(validate(e).ok());
    AsyncGraph g = square_graph();
    PointedGraph tg = add_point(g);
    EXPECT_EQ(tg.g.n, g.n + 1);
    EXPECT_EQ(tg.g.num_edges(), g.num_edges());
    // Multiplication after either unit is the identity.
    GraphHom mu = point_mult(g);
    GraphHom inner = identity(tg.g);
    EXPECT_EQ(then(inner, mu), identity(tg.g));
    GraphHom outer = identity(tg.g);  // T(eta) sends the point to the outer point
    outer.node[g.n] = g.n + 1;
    EXPECT_EQ(then(outer, mu), identity(tg.g));

    Smash s1 = smash(tg, e);
    EXPECT_EQ(s1.p.g.n, 1);
    PointedGraph two;
    two.g.n = 2;
    two.point = 1;
    Smash s2 = smash(two, two);
    EXPECT_EQ(s2.p.g.n, 2);
    EXPECT_TRUE(validate(s2.p).ok());
}

TEST(AGraph, LiftingBasics)
{
    AsyncGraph g = square_graph();
    for (auto s : {LiftingShape::CodeAtSource, LiftingShape::FrameAtSource, LiftingShape::FrameAtTarget,
                   LiftingShape::TileOverTop})
        EXPECT_FALSE(check_lifting(s, identity(g), g, g).has_value());
    AsyncGraph node;
    node.n = 1;
    AsyncGraph arrow;
    arrow.n = 2;
    arrow.add_edge(0, 1, Pol::C);
    GraphHom f{{0}, {}, {}};
    auto fail = check_lifting(LiftingShape::CodeAtSource, f, node, arrow);
    ASSERT_TRUE(fail.has_value());
    EXPECT_EQ(fail->target, 0);
    EXPECT_FALSE(check_lifting(LiftingShape::FrameAtSource, f, node, arrow).has_value());
}

TEST(AGraph, VanKampenIdentityCube)
{
    AsyncGraph g = square_graph();
    GraphHom id = identity(g);
    Cube c{g, g, g, g, g, g, g, g, id, id, id, id, id, id, id, id, id, id, id, id};
    auto r = verify_van_kampen(c);
    EXPECT_TRUE(r.precondition);
    EXPECT_TRUE(r.holds);

    AsyncGraph two;
    two.n = 2;
    AsyncGraph one;
    one.n = 1;
    GraphHom col{{0, 0}, {}, {}};
    Cube d{two, one, two, one, two, one, two, one, col, identity(two), col, col,
           col, identity(two), col, col, identity(two), identity(one), identity(two), identity(one)};
    auto r2 = verify_van_kampen(d);
    EXPECT_FALSE(r2.precondition);
}
