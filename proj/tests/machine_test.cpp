#include <gtest/gtest.h>

#include "cobordcsl/machine.hpp"

using namespace cobordcsl;

namespace {

ModelConfig small_cfg()
{
    ModelConfig c;
    c.vmin = 0;
    c.vmax = 2;
    c.locs = {1};
    c.vars = {"x", "y"};
    c.locks = {"r"};
    return c;
}

MachineState state(const ModelConfig& c, std::vector<int> st, std::vector<int> hp, std::uint32_t L = 0)
{
    MachineState s;
    s.mem.stack = std::move(st);
    s.mem.heap = std::move(hp);
    s.locks = L;
    (void)c;
    return s;
}

}  // namespace

TEST(Machine, EvalExpr)
{
    ModelConfig c = small_cfg();
    c.vmax = 9;
    MemoryState mu{{2, kUndef}, {kUndef}};
    EXPECT_EQ(eval_expr(Expr::bin(Expr::Add, Expr::num(3), Expr::num(4)), c, mu), 7);
    EXPECT_FALSE(eval_expr(Expr::var("y"), c, mu).has_value());
    EXPECT_EQ(eval_expr(Expr::bin(Expr::Add, Expr::var("x"), Expr::num(1)), c, mu), 3);
    EXPECT_FALSE(eval_expr(Expr::num(10), c, mu).has_value());
}

TEST(Machine, StepRules)
{
    ModelConfig c = small_cfg();
    MachineState s = state(c, {1, kUndef}, {kUndef});
    auto p = step(Instr::acquire("r"), s, c);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0].locks, 1u);
    EXPECT_TRUE(step(Instr::acquire("r"), p[0], c).empty());
    EXPECT_EQ(step(Instr::release("r"), p[0], c)[0].locks, 0u);
    auto e = step(Instr::assign("x", Expr::var("y")), s, c);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_TRUE(e[0].error);
    BExpr b{BExpr::Eq, {Expr::var("x"), Expr::num(0)}, {}};
    EXPECT_TRUE(step(Instr::test(b), s, c).empty());
    EXPECT_EQ(step(Instr::test(negate(b)), s, c).size(), 1u);
    EXPECT_TRUE(step(Instr::dispose(Expr::num(1)), s, c)[0].error);
    auto a = step(Instr::alloc("y", Expr::num(2), 1), s, c);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].mem.heap[0], 2);
    EXPECT_EQ(a[0].mem.stack[1], 1);
    EXPECT_TRUE(step(Instr::alloc("y", Expr::num(2), 1), a[0], c).empty());
    auto d = step(Instr::dispose(Expr::var("y")), a[0], c);
    EXPECT_EQ(d[0].mem.heap[0], kUndef);
}

TEST(Machine, Footprints)
{
    ModelConfig c = small_cfg();
    MachineState s = state(c, {1, 1}, {0});
    Footprint f = footprint(Instr::assign("x", Expr::bin(Expr::Add, Expr::var("y"), Expr::num(1))), s, c);
    EXPECT_EQ(f.rd, std::vector<int>{1});
    EXPECT_EQ(f.wr, std::vector<int>{0});
    Footprint p = footprint(Instr::acquire("r"), s, c);
    EXPECT_EQ(p.locks, std::vector<int>{0});
    EXPECT_TRUE(p.rd.empty() && p.wr.empty());
    Footprint d = footprint(Instr::dispose(Expr::var("y")), s, c);
    EXPECT_EQ(d.rd, std::vector<int>{1});
    EXPECT_EQ(d.alloc, std::vector<int>{c.loc_key(0)});
    EXPECT_TRUE(independent(footprint(Instr::assign("x", Expr::num(1)), s, c),
                            footprint(Instr::assign("y", Expr::num(2)), s, c)));
    EXPECT_FALSE(independent(footprint(Instr::assign("x", Expr::num(1)), s, c),
                             footprint(Instr::assign("x", Expr::num(2)), s, c)));
    EXPECT_FALSE(independent(p, footprint(Instr::release("r"), s, c)));
}

TEST(Machine, OneLockModel)
{
    ModelConfig c;
    c.vars = {};
    c.locs = {};
    c.locks = {"r"};
    Alphabet a;
    a.intern(Instr::acquire("r"));
    a.intern(Instr::release("r"));
    StatefulModel m = build_stateful(c, a);
    EXPECT_EQ(m.model.pg.g.n, 3);  // {}, {r}, Error
    EXPECT_EQ(m.model.pg.g.num_edges(), 2);
    EXPECT_TRUE(validate(m.model.pg).ok());
}

TEST(Machine, TilesCommuteInBothOrders)
{
    ModelConfig c = small_cfg();
    Alphabet a;
    a.intern(Instr::assign("x", Expr::num(1)));
    a.intern(Instr::assign("y", Expr::num(2)));
    a.intern(Instr::assign("x", Expr::bin(Expr::Add, Expr::var("y"), Expr::num(0))));
    a.intern(Instr::store(Expr::num(1), Expr::var("x")));
    a.intern(Instr::load("y", Expr::num(1)));
    a.intern(Instr::dispose(Expr::num(1)));
    a.intern(Instr::alloc("y", Expr::num(0), 1));
    a.intern(Instr::acquire("r"));
    a.intern(Instr::release("r"));
    a.intern(Instr::nop());
    StatefulModel m = build_stateful(c, a);
    const AsyncGraph& g = m.model.pg.g;
    ASSERT_TRUE(validate(m.model.pg).ok());
    EXPECT_GT(g.num_tiles(), 0);
    // Independent oracle: re-execute both interleavings from the source.
    for (const Tile& t : g.tiles) {
        int s = g.edges[t.top[0]].src;
        MachineState st = m.space.decode(s);
        const Instr& x = a.instrs[m.model.edge_label[t.top[0]]];
        const Instr& y = a.instrs[m.model.edge_label[t.bot[0]]];
        auto r1 = step(x, st, c);
        auto r2 = step(y, st, c);
        ASSERT_EQ(r1.size(), 1u);
        ASSERT_EQ(r2.size(), 1u);
        auto e1 = step(y, r1[0], c);
        auto e2 = step(x, r2[0], c);
        ASSERT_EQ(e1.size(), 1u);
        ASSERT_EQ(e2.size(), 1u);
        EXPECT_EQ(e1[0], e2[0]);
        EXPECT_EQ(m.space.encode(e1[0]), g.edges[t.top[1]].tgt);
    }
    // x := 1 then y := 2 tiles with the reverse order.
    MachineState s0 = state(c, {0, 0}, {kUndef});
    int n0 = m.space.encode(s0);
    int ex = m.find_edge(n0, m.space.encode(state(c, {1, 0}, {kUndef})), 0);
    int ey = m.find_edge(n0, m.space.encode(state(c, {0, 2}, {kUndef})), 1);
    ASSERT_GE(ex, 0);
    ASSERT_GE(ey, 0);
    bool found = false;
    for (const Tile& t : g.tiles)
        found = found || (t.top[0] == ex && t.bot[0] == ey);
    EXPECT_TRUE(found);
    for (int e = 0; e < g.num_edges(); ++e)
        EXPECT_NE(g.edges[e].src, m.model.pg.point);
}

TEST(Machine, StatelessModel)
{
    ModelConfig c;
    c.vars = {};
    c.locs = {};
    c.locks = {"r"};
    StatelessModel l = build_stateless(c);
    const AsyncGraph& g = l.model.pg.g;
    EXPECT_EQ(g.n, 3);
    EXPECT_TRUE(validate(l.model.pg).ok());
    int tau = 0, P = lock_instr_id({LockInstr::P, 0}, c), V = lock_instr_id({LockInstr::V, 0}, c);
    EXPECT_GE(l.find_edge(0, 1, P), 0);
    EXPECT_GE(l.find_edge(1, 0, V), 0);
    EXPECT_GE(l.find_edge(0, 0, tau), 0);
    EXPECT_GE(l.find_edge(1, 1, tau), 0);
    EXPECT_LT(l.find_edge(1, 1, P), 0);
    for (int L = 0; L < 2; ++L) {
        int e = l.find_edge(L, L, tau);
        bool self = false;
        for (const Tile& t : g.tiles)
            self = self || (t.top == std::array{e, e} && t.bot == t.top);
        EXPECT_TRUE(self);
    }
    for (const Tile& t : g.tiles) {
        bool pp = l.model.edge_label[t.top[0]] == P && l.model.edge_label[t.bot[0]] == P;
        EXPECT_FALSE(pp);
    }
}

TEST(Machine, PolarityExpansions)
{
    ModelConfig c = small_cfg();
    Alphabet a;
    a.intern(Instr::assign("x", Expr::num(1)));
    a.intern(Instr::assign("y", Expr::num(2)));
    StatefulModel m = build_stateful(c, a);
    Model two = two_player(m.model);
    Model three = three_player(m.model);
    EXPECT_EQ(two.pg.g.num_edges(), 2 * m.model.pg.g.num_edges());
    EXPECT_EQ(two.pg.g.num_tiles(), 4 * m.model.pg.g.num_tiles());
    EXPECT_EQ(three.pg.g.num_edges(), 3 * m.model.pg.g.num_edges());
    EXPECT_TRUE(validate(two.pg).ok());
    EXPECT_TRUE(validate(three.pg).ok());
    GraphHom eta = frame_embedding(m.model);
    EXPECT_TRUE(check_hom(eta, m.model.pg.g, two.pg.g).ok());
    for (int e : eta.edge)
        EXPECT_EQ(two.pg.g.pol[e], Pol::F);
}
