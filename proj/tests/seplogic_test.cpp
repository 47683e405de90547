#include <gtest/gtest.h>

#include "cobordcsl/seplogic.hpp"

using namespace cobordcsl;

namespace {

const Perm kHalf{1, 2};
const Perm kOne{1, 1};

ModelConfig heap_cfg()
{
    ModelConfig c;
    c.vmin = 0;
    c.vmax = 4;
    c.locs = {1};
    c.vars = {};
    c.perm_k = 2;
    return c;
}

ModelConfig var_cfg()
{
    ModelConfig c;
    c.vmin = 0;
    c.vmax = 1;
    c.locs = {};
    c.vars = {"x", "y"};
    c.perm_k = 1;
    return c;
}

Alphabet var_alphabet()
{
    Alphabet a;
    a.intern(Instr::assign("x", Expr::num(1)));
    a.intern(Instr::assign("y", Expr::num(0)));
    a.intern(Instr::assign("y", Expr::var("x")));
    a.intern(Instr::acquire("r"));
    a.intern(Instr::release("r"));
    a.intern(Instr::nop());
    return a;
}

}  // namespace

TEST(SepLogic, PermAdd)
{
    EXPECT_EQ(perm_add(kHalf, kHalf), kOne);
    EXPECT_FALSE(perm_add(kOne, Perm{1, 4}).has_value());
    EXPECT_EQ(perm_add(Perm{1, 4}, Perm{1, 4}), kHalf);
    EXPECT_EQ(perm_units(Perm{3, 4}, 2), 3);
    EXPECT_EQ(perm_units(Perm{1, 4}, 1), -1);
}

TEST(SepLogic, SepProduct)
{
    LUniverse u(heap_cfg(), {0});
    LState a{u.digit(4, 2)}, b{u.digit(4, 2)}, c{u.digit(3, 2)};
    auto ab = sep_product(u, a, b);
    ASSERT_TRUE(ab.has_value());
    EXPECT_EQ((*ab)[0], u.digit(4, 4));
    EXPECT_EQ(sep_product(u, a, LState{0}), a);
    EXPECT_FALSE(sep_product(u, a, c).has_value());
}

TEST(SepLogic, ProductCommutativeAssociative)
{
    ModelConfig cfg = var_cfg();
    LUniverse u(cfg, {0, 1});
    for (std::size_t i = 0; i < u.N; ++i)
        for (std::size_t j = 0; j < u.N; ++j) {
            auto x = sep_product(u, u.digits(i), u.digits(j));
            auto y = sep_product(u, u.digits(j), u.digits(i));
            ASSERT_EQ(x, y);
            for (std::size_t k = 0; k < u.N; ++k) {
                std::optional<LState> l, r;
                if (x)
                    l = sep_product(u, *x, u.digits(k));
                auto jk = sep_product(u, u.digits(j), u.digits(k));
                if (jk)
                    r = sep_product(u, u.digits(i), *jk);
                ASSERT_EQ(l, r);
            }
        }
}

TEST(SepLogic, Satisfaction)
{
    ModelConfig cfg = var_cfg();
    cfg.vmax = 3;
    cfg.perm_k = 2;
    LUniverse u(cfg, {0, 1});
    Satisfier sat(u);
    std::size_t x3 = u.index({u.digit(3, 4), 0});
    EXPECT_TRUE(sat.satisfies(x3, Pred::own("x", kOne)));
    EXPECT_FALSE(sat.satisfies(x3, Pred::own("x", kHalf)));
    EXPECT_TRUE(sat.satisfies(0, Pred::emp()));
    EXPECT_FALSE(sat.satisfies(x3, Pred::emp()));
    EXPECT_TRUE(sat.satisfies(x3, Pred::eq(Expr::var("x"), Expr::num(3))));
    // own_T(x) * x = v is unsatisfiable: the equality needs a share of x.
    Pred p = Pred::bin(Pred::Star, Pred::own("x", kOne), Pred::eq(Expr::var("x"), Expr::num(3)));
    const Bitset& b = sat.sat(p);
    EXPECT_TRUE(std::all_of(b.begin(), b.end(), [](std::uint64_t w) { return w == 0; }));
    // P * emp = P on every predicate below.
    std::vector<Pred> corpus{Pred::own("x", kOne), Pred::own("y", kHalf),
                             Pred::bin(Pred::Star, Pred::own("x", kHalf), Pred::own("x", kHalf)),
                             Pred::eq(Expr::var("x"), Expr::var("y")), Pred::tt(), Pred::ff(),
                             Pred::quant(Pred::Exists, "a", Pred::bin(Pred::And, Pred::own("x", kOne),
                                                                      Pred::eq(Expr::var("x"), Expr::meta("a"))))};
    for (const Pred& q : corpus)
        EXPECT_TRUE(sat.equivalent(Pred::bin(Pred::Star, q, Pred::emp()), q)) << to_string(q);
    EXPECT_TRUE(sat.equivalent(corpus[2], corpus[0]));
}

TEST(SepLogic, HalfHalfHeapCell)
{
    ModelConfig cfg = heap_cfg();
    LUniverse u(cfg, {cfg.loc_key(0)});
    Satisfier sat(u);
    std::size_t full = u.index({u.digit(4, 4)});
    Pred half = Pred::pts(Expr::num(1), kHalf, Expr::num(4));
    EXPECT_TRUE(sat.satisfies(full, Pred::bin(Pred::Star, half, half)));
    EXPECT_FALSE(sat.satisfies(full, half));

    Alphabet a;
    a.intern(Instr::nop());
    auto m = build_sep_model(cfg, {cfg.loc_key(0)}, LockContext{}, a, sat, 2);
    SepState s;
    s.val = {4};
    s.units = {2, 2};
    EXPECT_TRUE(sep_state_valid(*m, sat, s).ok);
    int node = m->find(s);
    ASSERT_GE(node, 0);
    MachineState e = m->erase(s);
    EXPECT_EQ(e.mem.heap[0], 4);
    EXPECT_EQ(e.locks, 0u);
}

TEST(SepLogic, InvariantValidity)
{
    ModelConfig cfg = var_cfg();
    LUniverse u(cfg, {0, 1});
    Satisfier sat(u);
    LockContext g;
    g.locks = {"r"};
    g.inv = {Pred::own("x", kOne)};
    auto m = build_sep_model(cfg, {0, 1}, g, var_alphabet(), sat, 2);
    SepState held;
    held.val = {kUndef, kUndef};
    held.units = std::vector<std::uint8_t>(6, 0);
    held.holder = {0};
    EXPECT_TRUE(sep_state_valid(*m, sat, held).ok);
    EXPECT_TRUE(m->erase(held).locks & 1u);
    SepState bad = held;
    bad.holder = {-1};
    auto v = sep_state_valid(*m, sat, bad);
    EXPECT_FALSE(v.ok);
    EXPECT_NE(v.reason.find("r"), std::string::npos);
}

TEST(SepLogic, SepModelMovesFollowDiscipline)
{
    ModelConfig cfg = var_cfg();
    LUniverse u(cfg, {0, 1});
    Satisfier sat(u);
    LockContext g;
    g.locks = {"r"};
    g.inv = {Pred::own("x", kOne)};
    Alphabet a = var_alphabet();
    auto m = build_sep_model(cfg, {0, 1}, g, a, sat, 2);
    ASSERT_TRUE(validate(m->model.pg.g).ok());
    ModelConfig mc = cfg;
    mc.locks = {"r"};
    StatefulModel s = build_stateful(mc, a);
    const AsyncGraph& G = m->model.pg.g;
    int pcount = 0;
    for (int e = 0; e < G.num_edges(); ++e) {
        int src = G.edges[e].src, tgt = G.edges[e].tgt;
        int instr = m->model.edge_label[e];
        EXPECT_GE(s.find_edge(m->erased[src], m->erased[tgt], instr), 0);
        const SepState& x = m->states[src];
        const SepState& y = m->states[tgt];
        int mover = G.pol[e] == Pol::C ? 0 : 1;
        int other = 1 - mover;
        EXPECT_EQ(m->party_lstate(x, other), m->party_lstate(y, other));
        const Instr& ins = a.instrs[instr];
        if (ins.k == Instr::Assign) {
            int slot = ins.x == "x" ? 0 : 1;
            EXPECT_EQ(x.units[slot * m->parties + other], 0);  // the mover alone owns what it writes
        }
        if (ins.k == Instr::P && mover == 0) {
            ++pcount;
            auto merged = sep_product(m->lu, m->lu.digits(m->party_lstate(x, 0)),
                                      m->lu.digits(m->party_lstate(x, 2)));
            ASSERT_TRUE(merged.has_value());
            EXPECT_EQ(m->lu.index(*merged), m->party_lstate(y, 0));
        }
    }
    EXPECT_GT(pcount, 0);
    // Tiles erase to stateful tiles.
    Model two = two_player(s.model);
    TileIndex ti(two.pg.g);
    auto lift = [&](int e) { return 2 * s.find_edge(m->erased[G.edges[e].src], m->erased[G.edges[e].tgt],
                                                    m->model.edge_label[e]) + (G.pol[e] == Pol::C ? 0 : 1); };
    for (const Tile& t : G.tiles)
        EXPECT_GE(ti.find(two.pg.g, {lift(t.top[0]), lift(t.top[1])}, {lift(t.bot[0]), lift(t.bot[1])}), 0);
}

TEST(SepLogic, ThreePlayerRegions)
{
    ModelConfig cfg = var_cfg();
    LUniverse u(cfg, {0, 1});
    Satisfier sat(u);
    auto m = build_sep_model(cfg, {0, 1}, LockContext{}, var_alphabet(), sat, 3);
    const AsyncGraph& G = m->model.pg.g;
    int c1 = 0;
    for (int e = 0; e < G.num_edges(); ++e) {
        if (G.pol[e] != Pol::C1)
            continue;
        ++c1;
        const SepState& x = m->states[G.edges[e].src];
        const SepState& y = m->states[G.edges[e].tgt];
        EXPECT_EQ(m->party_lstate(x, 1), m->party_lstate(y, 1));
        EXPECT_EQ(m->party_lstate(x, 2), m->party_lstate(y, 2));
    }
    EXPECT_GT(c1, 0);
}
