#include <gtest/gtest.h>

#include <set>

#include "cobordcsl/template.hpp"

using namespace cobordcsl;

namespace {

ModelConfig small_cfg(std::vector<std::string> locks)
{
    ModelConfig c;
    c.vmin = 0;
    c.vmax = 1;
    c.locs = {};
    c.vars = {"x"};
    c.locks = std::move(locks);
    c.perm_k = 1;
    return c;
}

Alphabet small_alpha()
{
    Alphabet a;
    a.intern(Instr::nop());
    a.intern(Instr::assign("x", Expr::num(0)));
    a.intern(Instr::assign("x", Expr::num(1)));
    a.intern(Instr::test(BExpr{BExpr::Eq, {Expr::var("x"), Expr::num(0)}, {}}));
    a.intern(Instr::acquire("r"));
    a.intern(Instr::release("r"));
    return a;
}

void expect_ok(const Report& r)
{
    for (const auto& s : r.issues)
        ADD_FAILURE() << s;
}

struct SepFixture {
    ModelConfig cfg = small_cfg({});
    Alphabet alpha = small_alpha();
    LUniverse lu{cfg, {0}};
    Satisfier sat{lu};
};

}  // namespace

TEST(Template, PolyadLawsS)
{
    auto t = make_template_S(small_cfg({"r"}), small_alpha());
    expect_ok(check_polyad_laws(*t, 0));
    expect_ok(check_legs(*t, 0));
}

TEST(Template, PolyadLawsL)
{
    auto t = make_template_L(small_cfg({"r"}));
    expect_ok(check_polyad_laws(*t, 0));
    expect_ok(check_legs(*t, 0));
}

TEST(Template, PolyadLawsSepTwoColors)
{
    SepFixture f;
    auto t = make_template_Sep(f.cfg, {0}, LockContext{}, f.alpha, f.sat);
    int a = t->color_of(Pred::own("x", {1, 1}));
    int b = t->color_of(Pred::emp());
    EXPECT_NE(a, b);
    EXPECT_EQ(t->color_of(Pred::bin(Pred::Star, Pred::own("x", {1, 1}), Pred::emp())), a);
    for (int c : {a, b}) {
        expect_ok(check_polyad_laws(*t, c));
        expect_ok(check_legs(*t, c));
    }
}

TEST(Template, SpanMonoidalS)
{
    auto t = make_template_S(small_cfg({"r"}), small_alpha());
    auto sm = make_span_monoidal(*t);
    const AsyncGraph& g3 = sm->three.pg.g;
    expect_ok(check_hom(sm->pick_l, g3, t->one()));
    expect_ok(check_hom(sm->pick_r, g3, t->one()));
    expect_ok(check_hom(sm->pince, g3, t->one()));
    const auto& b = sm->border(0, 0);
    expect_ok(check_hom(b.inc, b.g, g3));
    EXPECT_EQ(then(b.inc, sm->pick_l), then(b.pick_l, t->color(0).inc));
}

TEST(Template, SpanMonoidalSep)
{
    SepFixture f;
    auto t = make_template_Sep(f.cfg, {0}, LockContext{}, f.alpha, f.sat);
    auto sm = make_span_monoidal(*t);
    const AsyncGraph& g3 = sm->three.pg.g;
    expect_ok(check_hom(sm->pick_l, g3, t->one()));
    expect_ok(check_hom(sm->pick_r, g3, t->one()));
    expect_ok(check_hom(sm->pince, g3, t->one()));
    int a = t->color_of(Pred::own("x", {1, 1}));
    int e = t->color_of(Pred::emp());
    const auto& b = sm->border(a, e);
    EXPECT_EQ(b.ck, a);
    expect_ok(check_hom(b.inc, b.g, g3));
    expect_ok(check_hom(b.pince, b.g, t->color(b.ck).zero));
    EXPECT_EQ(then(b.inc, sm->pince), then(b.pince, t->color(b.ck).inc));
    // pick is jointly monic on nodes
    std::set<std::pair<int, int>> seen;
    for (int v = 0; v < g3.n; ++v)
        EXPECT_TRUE(seen.emplace(sm->pick_l.node[v], sm->pick_r.node[v]).second);
}

TEST(Template, FunctorsAreHoms)
{
    ModelConfig cfg = small_cfg({"r"});
    auto s = make_template_S(cfg, small_alpha());
    auto l = make_template_L(cfg);
    auto s3 = make_span_monoidal(*s);
    auto l3 = make_span_monoidal(*l);
    Functor u = functor_u(*s, *l, s3.get(), l3.get());
    expect_ok(check_hom(u.one, s->one(), l->one()));
    expect_ok(check_hom(u.three, s3->three.pg.g, l3->three.pg.g));
    expect_ok(check_hom(u.zero(0), s->color(0).zero, l->color(0).zero));
    EXPECT_EQ(then(s3->pince, u.one), then(u.three, l3->pince));

    SepFixture f;
    f.cfg.locks = {"r"};
    LockContext gamma = LockContext{}.with("r", Pred::own("x", {1, 1}));
    auto sp = make_template_Sep(f.cfg, {0}, gamma, f.alpha, f.sat);
    auto sp3 = make_span_monoidal(*sp);
    Functor us = functor_u_sep(*sp, *s, sp3.get(), s3.get());
    expect_ok(check_hom(us.one, sp->one(), s->one()));
    expect_ok(check_hom(us.three, sp3->three.pg.g, s3->three.pg.g));
    EXPECT_EQ(then(sp3->pick_l, us.one), then(us.three, s3->pick_l));
    int c = sp->color_of(Pred::emp());
    expect_ok(check_hom(us.zero(c), sp->color(c).zero, s->color(0).zero));
}

TEST(Template, HideAndWhenSpans)
{
    auto inner = make_template_S(small_cfg({"r"}), small_alpha());
    auto outer = make_template_S(small_cfg({}), small_alpha());
    auto h = hide_span(*inner, *outer, "r");
    expect_ok(check_hom(h->lleg, h->apex, inner->one()));
    expect_ok(check_hom(h->rleg, h->apex, outer->one()));
    const auto& side = h->side(0);
    expect_ok(check_hom(side.rleg, side.g, outer->color(0).zero));
    EXPECT_EQ(side.g.n, outer->color(0).zero.n);

    auto w = when_span(*outer, *inner, "r");
    expect_ok(check_hom(w->lleg, w->apex, outer->one()));
    expect_ok(check_hom(w->rleg, w->apex, inner->one()));
    expect_ok(check_hom(w->side(0).lleg, w->side(0).g, outer->color(0).zero));

    auto li = make_template_L(small_cfg({"r"}));
    auto lo = make_template_L(small_cfg({}));
    auto hl = hide_span(*li, *lo, "r");
    expect_ok(check_hom(hl->rleg, hl->apex, lo->one()));
    auto wl = when_span(*lo, *li, "r");
    expect_ok(check_hom(wl->lleg, wl->apex, lo->one()));

    SepFixture f;
    Pred J = Pred::own("x", {1, 1});
    auto so = make_template_Sep(f.cfg, {0}, LockContext{}, f.alpha, f.sat);
    ModelConfig ci = f.cfg;
    ci.locks = {"r"};
    auto si = make_template_Sep(ci, {0}, LockContext{}.with("r", J), f.alpha, f.sat);
    auto hs = hide_span(*si, *so, "r");
    expect_ok(check_hom(hs->rleg, hs->apex, so->one()));
    int e = si->color_of(Pred::emp());
    const auto& sd = hs->side(e);
    EXPECT_TRUE(f.sat.equivalent(so->color(sd.rcolor).pred, J));
    expect_ok(check_hom(sd.rleg, sd.g, so->color(sd.rcolor).zero));

    auto ws = when_push_sep(*so, *si, "r");
    expect_ok(check_hom(ws->rleg, ws->apex, si->one()));
    int c = so->color_of(J);
    expect_ok(check_hom(ws->side(c).rleg, ws->side(c).g, si->color(ws->side(c).rcolor).zero));
}
