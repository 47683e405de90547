#include <gtest/gtest.h>

#include "cobordcsl/cobord.hpp"

using namespace cobordcsl;

namespace {

ModelConfig cfg2()
{
    ModelConfig c;
    c.vmin = 0;
    c.vmax = 1;
    c.locs = {};
    c.vars = {"x", "y"};
    c.perm_k = 1;
    return c;
}

BExpr x_is(int v) { return BExpr{BExpr::Eq, {Expr::var("x"), Expr::num(v)}, {}}; }

struct World {
    Alphabet alpha;
    std::unique_ptr<Template> S;
    World()
    {
        alpha.intern(Instr::nop());
        alpha.intern(Instr::assign("x", Expr::num(0)));
        alpha.intern(Instr::assign("x", Expr::num(1)));
        alpha.intern(Instr::assign("y", Expr::num(1)));
        alpha.intern(Instr::test(x_is(0)));
        alpha.intern(Instr::test(negate(x_is(0))));
        S = make_template_S(cfg2(), alpha);
    }
    CobP instr(const Instr& m)
    {
        int id = alpha.find(m);
        std::vector<char> code(S->one().num_edges(), 0);
        for (int e = 0; e < S->one().num_edges(); ++e)
            code[e] = S->two.edge_label[e] == id;
        return leaf(*S, 0, 0, code, true, to_string(m));
    }
};

void expect_ok(const Report& r)
{
    for (const auto& s : r.issues)
        ADD_FAILURE() << s;
}

Functor id_functor(Template& t)
{
    Functor f;
    f.src = f.dst = &t;
    f.one = identity(t.one());
    return f;
}

}  // namespace

// The instruction cobordism agrees with the pullback of A x Sigma along the
// polarity inclusion, built here from products and restriction.
TEST(Cobord, LeafMatchesPullbackConstruction)
{
    World w;
    Instr m = Instr::assign("x", Expr::num(1));
    CobP c = w.instr(m);
    expect_ok(check_cob(*c));
    expect_ok(check_structural(*c));

    AsyncGraph A;
    A.n = 2;
    int f1 = A.add_edge(0, 0, Pol::F), cc = A.add_edge(0, 1, Pol::C), f2 = A.add_edge(1, 1, Pol::F);
    A.add_square({f1, cc}, {cc, f2});
    A.add_square({f1, f1}, {f1, f1});
    A.add_square({f2, f2}, {f2, f2});
    const Model& plain = w.S->S->model;
    Product pr = product(A, plain.pg.g);
    int mid = w.alpha.find(m);
    std::vector<char> kn(pr.g.n, 1), ke(pr.g.num_edges());
    for (int e = 0; e < pr.g.num_edges(); ++e)
        ke[e] = pr.p1.edge[e] != cc || plain.edge_label[pr.p2.edge[e]] == mid;
    AsyncGraph G = restrict(pr.g, kn, ke);
    GraphHom glab;
    glab.edge.resize(G.num_edges());
    // restrict keeps edge order, so recover the kept product edges
    std::vector<int> kept;
    for (int e = 0; e < pr.g.num_edges(); ++e)
        if (ke[e])
            kept.push_back(e);
    for (int e = 0; e < G.num_edges(); ++e)
        glab.edge[e] = 2 * pr.p2.edge[kept[e]] + (pr.p1.edge[kept[e]] == cc ? 0 : 1);
    std::vector<int> nodes(G.n);
    const int n = plain.pg.g.n;
    for (int v = 0; v < G.n; ++v)
        nodes[v] = pr.p1.node[v] * n + pr.p2.node[v];

    std::vector<char> keepn(c->sup.n, 1), keepe(c->sup.num_edges(), 1);
    keepn[c->point] = 0;
    GraphHom inc;
    AsyncGraph L = restrict(c->sup, keepn, keepe, &inc);
    GraphHom llab = then(inc, c->lambda);
    LabelIndex li(L, llab);
    GraphHom h;
    ASSERT_TRUE(derive_hom(G, glab, identity(w.S->one()), nodes, L, li, h));
    EXPECT_TRUE(is_iso(h, G, L));
}

TEST(Cobord, SeqGluesMiddleBorder)
{
    World w;
    CobP a = w.instr(Instr::assign("x", Expr::num(1)));
    CobP b = w.instr(Instr::assign("y", Expr::num(1)));
    CobP s = seq(a, b);
    expect_ok(check_cob(*s));
    expect_ok(check_structural(*s));
    int n = w.S->color(0).zero.n;
    EXPECT_EQ(s->sup.n, 3 * n + 1);
    int code = 0;
    for (Pol p : s->sup.pol)
        code += p == Pol::C;
    int ca = 0, cb = 0;
    for (Pol p : a->sup.pol)
        ca += p == Pol::C;
    for (Pol p : b->sup.pol)
        cb += p == Pol::C;
    EXPECT_EQ(code, ca + cb);
}

TEST(Cobord, FillOfAGameWithItselfIsIdentityShaped)
{
    World w;
    GameP g = zero_game(*w.S, 0);
    CobP f = fill(g, g);
    expect_ok(check_cob(*f));
    EXPECT_EQ(f->sup.n, g->carrier->n);
    EXPECT_EQ(f->sup.num_edges(), g->carrier->num_edges());
    EXPECT_TRUE(is_iso(f->s, *g->carrier, f->sup));
}

TEST(Cobord, ParallelNodeCount)
{
    World w;
    auto sm = make_span_monoidal(*w.S);
    CobP a = w.instr(Instr::assign("x", Expr::num(1)));
    CobP b = w.instr(Instr::assign("y", Expr::num(1)));
    CobP p = par(a, b, *sm);
    expect_ok(check_cob(*p));
    expect_ok(check_structural(*p));
    int n = w.S->color(0).zero.n;  // includes Error
    EXPECT_EQ(p->sup.n, 4 * (n - 1) + 9);
    // independent writes commute: some C1/C2 tile exists
    bool mixed = false;
    const AsyncGraph& three = sm->three.pg.g;
    GraphHom z = then(p->pb[1]->p1, p->pb[0]->p2);
    for (int t = 0; t < p->sup.num_tiles(); ++t) {
        const Tile& x = p->sup.tiles[t];
        Pol a0 = three.pol[z.edge[x.top[0]]], a1 = three.pol[z.edge[x.top[1]]];
        mixed = mixed || (a0 == Pol::C1 && a1 == Pol::C2);
    }
    EXPECT_TRUE(mixed);
}

TEST(Cobord, WriteWriteRaceHasNoTile)
{
    World w;
    auto sm = make_span_monoidal(*w.S);
    CobP p = par(w.instr(Instr::assign("x", Expr::num(0))), w.instr(Instr::assign("x", Expr::num(1))), *sm);
    const AsyncGraph& three = sm->three.pg.g;
    GraphHom z = then(p->pb[1]->p1, p->pb[0]->p2);
    for (int t = 0; t < p->sup.num_tiles(); ++t) {
        const Tile& x = p->sup.tiles[t];
        Pol a0 = three.pol[z.edge[x.top[0]]], a1 = three.pol[z.edge[x.top[1]]];
        EXPECT_FALSE(a0 == Pol::C1 && a1 == Pol::C2);
    }
}

TEST(Cobord, UnionAndUnfoldingMaps)
{
    World w;
    CobP t = w.instr(Instr::test(x_is(0)));
    CobP tn = w.instr(Instr::test(negate(x_is(0))));
    CobP body = w.instr(Instr::assign("x", Expr::num(1)));
    auto F = [&](CobP X) { return cob_union(seq(t, seq(body, X)), tn, 0, 0); };
    CobP x0 = empty_cob(*w.S, 0, 0);
    CobP x1 = F(x0), x2 = F(x1), x3 = F(x2);
    for (const CobP& x : {x1, x2, x3})
        expect_ok(check_cob(*x));
    Functor id = id_functor(*w.S);
    CobMap m12 = map_unfold(*x1, *x2);
    expect_ok(is_simulation(m12, *x1, *x2, id));
    CobMap m23 = map_unfold(*x2, *x3);
    expect_ok(is_simulation(m23, *x2, *x3, id));
}

TEST(Cobord, HideChangeIsACobordism)
{
    Alphabet alpha;
    alpha.intern(Instr::nop());
    alpha.intern(Instr::assign("x", Expr::num(1)));
    alpha.intern(Instr::acquire("r"));
    alpha.intern(Instr::release("r"));
    ModelConfig ci = cfg2();
    ci.locks = {"r"};
    auto inner = make_template_S(ci, alpha);
    auto outer = make_template_S(cfg2(), alpha);
    std::vector<char> code(inner->one().num_edges(), 0);
    int p = alpha.find(Instr::acquire("r"));
    for (int e = 0; e < inner->one().num_edges(); ++e)
        code[e] = inner->two.edge_label[e] == p;
    CobP c = leaf(*inner, 0, 0, code, true, "P(r)");
    auto span = hide_span(*inner, *outer, "r");
    CobP h = change(*span, c);
    expect_ok(check_cob(*h));
    EXPECT_EQ(h->in->carrier->n, outer->color(0).zero.n);
    CobP h2 = change(*span, c);
    Functor id = id_functor(*outer);
    expect_ok(is_simulation(map_unfold(*h, *h2), *h, *h2, id));
}

TEST(Cobord, LiftT)
{
    World w;
    CobP c = lift_T(w.instr(Instr::assign("x", Expr::num(1))));
    expect_ok(check_cob(*c));
}
