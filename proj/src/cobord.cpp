#include "cobordcsl/cobord.hpp"

#include <stdexcept>

namespace cobordcsl {

const char* op_name(Op o)
{
    switch (o) {
    case Op::Leaf: return "leaf";
    case Op::Identity: return "id";
    case Op::Empty: return "empty";
    case Op::Compose: return "compose";
    case Op::Fill: return "fill";
    case Op::Seq: return "seq";
    case Op::Union: return "union";
    case Op::Par: return "par";
    case Op::Change: return "change";
    case Op::LiftT: return "liftT";
    }
    return "?";
}

namespace {

using CobM = std::shared_ptr<Cob>;

GameP cached(Template& t, int color, int kind, const std::function<GameP()>& make)
{
    auto key = std::make_pair(color, kind);
    auto it = t.cache.find(key);
    if (it != t.cache.end())
        return std::static_pointer_cast<const Game>(it->second);
    GameP g = make();
    t.cache.emplace(key, g);
    return g;
}

std::shared_ptr<const Pullback> keep(Pullback&& p, AsyncGraph* take = nullptr)
{
    if (take)
        *take = std::move(p.g);
    else
        p.g = AsyncGraph{};
    return std::make_shared<const Pullback>(std::move(p));
}

void set_pol(Cob& c)
{
    const AsyncGraph& one = c.tpl->one();
    for (int e = 0; e < c.sup.num_edges(); ++e)
        c.sup.pol[e] = one.pol[c.lambda.edge[e]];
}

GraphHom recolor(Template& t, int from, int to)
{
    if (from == to)
        return identity(t.color(from).zero);
    return pull_into(t.color(from).inc, t.color(to).inv);
}

GraphHom lift_hom(const GraphHom& h, int dom_point, int cod_point)
{
    GraphHom r = h;
    if (static_cast<int>(r.node.size()) != dom_point)
        throw std::logic_error("lift_hom: point must be appended");
    r.node.push_back(cod_point);
    return r;
}

CobM compose_m(const CobP& a, const CobP& b)
{
    if (a->out != b->in)
        throw std::logic_error("compose: borders differ");
    if (a->tpl != b->tpl)
        throw std::logic_error("compose: templates differ");
    auto c = std::make_shared<Cob>();
    c->tpl = a->tpl;
    c->op = Op::Compose;
    c->parts = {a, b};
    c->in = a->in;
    c->out = b->out;
    Pushout po = pushout(a->t, a->sup, b->s, b->sup, *a->out->carrier);
    const Template::Mult& M = c->tpl->mult(a->out->color);
    c->lambda = then(po.mediator(then(a->lambda, M.il), then(b->lambda, M.ir)), M.mu);
    c->s = then(a->s, po.i1);
    c->t = then(b->t, po.i2);
    if (b->point >= 0)
        c->point = po.i2.node[b->point];
    c->truncated = a->truncated || b->truncated;
    c->sup = std::move(po.g);
    c->inj = {std::move(po.i1), std::move(po.i2)};
    set_pol(*c);
    return c;
}

}  // namespace

GameP zero_game(Template& t, int color)
{
    return cached(t, color, 0, [&] {
        auto g = std::make_shared<Game>();
        g->tpl = &t;
        g->color = color;
        const AsyncGraph& z = t.color(color).zero;
        g->carrier = std::shared_ptr<const AsyncGraph>(std::shared_ptr<void>{}, &z);
        g->lambda = identity(z);
        return g;
    });
}

GameP zero_game_T(Template& t, int color)
{
    if (t.error() < 0)
        throw std::logic_error("error lift needs an Error node");
    return cached(t, color, 1, [&] {
        auto g = std::make_shared<Game>();
        g->tpl = &t;
        g->color = color;
        const Color& c = t.color(color);
        g->carrier = std::make_shared<const AsyncGraph>(add_point(c.zero).g);
        g->lambda = lift_hom(identity(c.zero), c.zero.n, c.inv.node[t.error()]);
        g->pointed = true;
        return g;
    });
}

GameP empty_game(Template& t, int color)
{
    return cached(t, color, 2, [&] {
        auto g = std::make_shared<Game>();
        g->tpl = &t;
        g->color = color;
        g->carrier = std::make_shared<const AsyncGraph>();
        return g;
    });
}

CobP leaf(Template& t, int ci, int co, const std::vector<char>& code_edges, bool lift_out, std::string tag)
{
    auto c = std::make_shared<Cob>();
    c->tpl = &t;
    c->op = Op::Leaf;
    c->tag = std::move(tag);
    c->in = zero_game(t, ci);
    c->out = lift_out ? zero_game_T(t, co) : zero_game(t, co);
    const Color& A = t.color(ci);
    const Color& B = t.color(co);
    const AsyncGraph& one = t.one();
    AsyncGraph& g = c->sup;
    GraphHom& lam = c->lambda;
    const int na = A.zero.n, nb = B.zero.n;
    const int ea = A.zero.num_edges(), eb = B.zero.num_edges();
    const int ta = A.zero.num_tiles(), tb = B.zero.num_tiles();
    g.n = na + nb + (lift_out ? 1 : 0);
    lam.node = A.inc.node;
    lam.node.insert(lam.node.end(), B.inc.node.begin(), B.inc.node.end());
    if (lift_out) {
        c->point = na + nb;
        lam.node.push_back(t.error());
    }
    for (int e = 0; e < ea; ++e) {
        g.add_edge(A.zero.edges[e].src, A.zero.edges[e].tgt, Pol::F);
        lam.edge.push_back(A.inc.edge[e]);
    }
    for (int e = 0; e < eb; ++e) {
        g.add_edge(na + B.zero.edges[e].src, na + B.zero.edges[e].tgt, Pol::F);
        lam.edge.push_back(B.inc.edge[e]);
    }
    std::vector<int> cmap(one.num_edges(), -1);
    for (int e = 0; e < one.num_edges(); ++e) {
        if (!code_edges[e] || !is_code(one.pol[e]))
            continue;
        int a = A.inv.node[one.edges[e].src], b = B.inv.node[one.edges[e].tgt];
        if (a < 0 || b < 0)
            continue;
        cmap[e] = g.add_edge(a, na + b, Pol::C);
        lam.edge.push_back(e);
    }
    for (const Tile& x : A.zero.tiles)
        g.tiles.push_back(x);
    for (const Tile& x : B.zero.tiles)
        g.tiles.push_back({{x.top[0] + ea, x.top[1] + ea}, {x.bot[0] + ea, x.bot[1] + ea}, x.partner + ta});
    lam.tile = A.inc.tile;
    lam.tile.insert(lam.tile.end(), B.inc.tile.begin(), B.inc.tile.end());
    std::vector<int> tmap(one.num_tiles(), -1);
    auto fin = [&](int e) { return A.inv.edge[e]; };
    auto fout = [&](int e) { return B.inv.edge[e] < 0 ? -1 : ea + B.inv.edge[e]; };
    for (int u = 0; u < one.num_tiles(); ++u) {
        const Tile& x = one.tiles[u];
        std::array<int, 2> top{-1, -1}, bot{-1, -1};
        if (one.pol[x.top[0]] == Pol::F && cmap[x.top[1]] >= 0) {
            top = {fin(x.top[0]), cmap[x.top[1]]};
            bot = {cmap[x.bot[0]], fout(x.bot[1])};
        } else if (cmap[x.top[0]] >= 0 && one.pol[x.top[1]] == Pol::F) {
            top = {cmap[x.top[0]], fout(x.top[1])};
            bot = {fin(x.bot[0]), cmap[x.bot[1]]};
        } else {
            continue;
        }
        if (top[0] < 0 || top[1] < 0 || bot[0] < 0 || bot[1] < 0)
            continue;
        tmap[u] = g.num_tiles();
        g.tiles.push_back({top, bot, -1});
        lam.tile.push_back(u);
    }
    for (int u = 0; u < one.num_tiles(); ++u)
        if (tmap[u] >= 0) {
            int p = tmap[one.tiles[u].partner];
            if (p < 0)
                throw std::logic_error("leaf: mixed tile without partner");
            g.tiles[tmap[u]].partner = p;
        }
    c->s.node.resize(na);
    for (int v = 0; v < na; ++v)
        c->s.node[v] = v;
    c->s.edge.resize(ea);
    for (int e = 0; e < ea; ++e)
        c->s.edge[e] = e;
    c->s.tile.resize(ta);
    for (int x = 0; x < ta; ++x)
        c->s.tile[x] = x;
    c->t.node.resize(nb);
    for (int v = 0; v < nb; ++v)
        c->t.node[v] = na + v;
    if (lift_out)
        c->t.node.push_back(c->point);
    c->t.edge.resize(eb);
    for (int e = 0; e < eb; ++e)
        c->t.edge[e] = ea + e;
    c->t.tile.resize(tb);
    for (int x = 0; x < tb; ++x)
        c->t.tile[x] = ta + x;
    return c;
}

CobP identity_cob(GameP g)
{
    auto c = std::make_shared<Cob>();
    c->tpl = g->tpl;
    c->op = Op::Identity;
    c->in = g;
    c->out = g;
    c->sup = *g->carrier;
    c->s = c->t = identity(c->sup);
    c->lambda = then(g->lambda, g->tpl->color(g->color).inc);
    if (g->pointed)
        c->point = c->sup.n - 1;
    set_pol(*c);
    return c;
}

CobP empty_cob(Template& t, int ci, int co)
{
    auto c = std::make_shared<Cob>();
    c->tpl = &t;
    c->op = Op::Empty;
    c->in = empty_game(t, ci);
    c->out = empty_game(t, co);
    return c;
}

CobP compose(CobP a, CobP b) { return compose_m(a, b); }

CobP fill(GameP b, GameP a)
{
    if (a->tpl != b->tpl)
        throw std::logic_error("fill: templates differ");
    Template& t = *a->tpl;
    auto c = std::make_shared<Cob>();
    c->tpl = &t;
    c->op = Op::Fill;
    c->in = b;
    c->out = a;
    GraphHom fb = then(b->lambda, t.color(b->color).inc);
    GraphHom fa = then(a->lambda, t.color(a->color).inc);
    Pullback pb = pullback(fb, *b->carrier, fa, *a->carrier, t.one());
    Pushout po = pushout(pb.p1, *b->carrier, pb.p2, *a->carrier, pb.g);
    c->lambda = po.mediator(fb, fa);
    c->s = po.i1;
    c->t = po.i2;
    c->sup = std::move(po.g);
    c->inj = {std::move(po.i1), std::move(po.i2)};
    set_pol(*c);
    return c;
}

CobP seq(CobP a, CobP b)
{
    CobP f = fill(a->out, b->in);
    CobM c1 = compose_m(a, f);
    CobM c2 = compose_m(c1, b);
    c2->op = Op::Seq;
    c2->parts = {a, b};
    GraphHom j1 = c2->inj[0], j2 = c2->inj[1];
    c2->inj = {then(c1->inj[0], j1), j2, then(then(f->inj[0], c1->inj[1]), j1),
               then(then(f->inj[1], c1->inj[1]), j1)};
    return c2;
}

CobP cob_union(CobP a, CobP b, int ci, int co)
{
    if (a->tpl != b->tpl)
        throw std::logic_error("union: templates differ");
    Template& t = *a->tpl;
    auto c = std::make_shared<Cob>();
    c->tpl = &t;
    c->op = Op::Union;
    c->parts = {a, b};
    Coproduct cs = coproduct(a->sup, b->sup);
    auto game = [&](const GameP& x, const GameP& y, int col, std::vector<GraphHom>& inj) {
        Coproduct cg = coproduct(*x->carrier, *y->carrier);
        auto g = std::make_shared<Game>();
        g->tpl = &t;
        g->color = col;
        g->lambda = copair({&cg.i1, &cg.i2},
                           {then(x->lambda, recolor(t, x->color, col)), then(y->lambda, recolor(t, y->color, col))},
                           cg.g);
        g->carrier = std::make_shared<const AsyncGraph>(std::move(cg.g));
        inj = {std::move(cg.i1), std::move(cg.i2)};
        return g;
    };
    c->in = game(a->in, b->in, ci, c->inj_in);
    c->out = game(a->out, b->out, co, c->inj_out);
    c->s = copair({&c->inj_in[0], &c->inj_in[1]}, {then(a->s, cs.i1), then(b->s, cs.i2)}, *c->in->carrier);
    c->t = copair({&c->inj_out[0], &c->inj_out[1]}, {then(a->t, cs.i1), then(b->t, cs.i2)}, *c->out->carrier);
    c->lambda = copair({&cs.i1, &cs.i2}, {a->lambda, b->lambda}, cs.g);
    c->truncated = a->truncated || b->truncated;
    c->sup = std::move(cs.g);
    c->inj = {std::move(cs.i1), std::move(cs.i2)};
    return c;
}

CobP par(CobP a, CobP b, SpanMonoidal& sm)
{
    if (a->tpl != sm.base || b->tpl != sm.base)
        throw std::logic_error("par: template mismatch");
    Template& t = *sm.base;
    auto c = std::make_shared<Cob>();
    c->tpl = &t;
    c->op = Op::Par;
    c->parts = {a, b};
    c->sm = &sm;
    const AsyncGraph& three = sm.three.pg.g;
    Pullback P1 = pullback(a->lambda, a->sup, sm.pick_l, three, t.one());
    Pullback P = pullback(then(P1.p2, sm.pick_r), P1.g, b->lambda, b->sup, t.one());
    c->lambda = then(then(P.p1, P1.p2), sm.pince);
    auto border = [&](const GameP& x, const GameP& y, const GraphHom& sx, const GraphHom& sy,
                      const SpanMonoidal::Border& bd, std::shared_ptr<const Pullback>* slot, GraphHom& s) {
        Pullback Q1 = pullback(x->lambda, *x->carrier, bd.pick_l, bd.g, t.color(bd.ci).zero);
        Pullback Q = pullback(then(Q1.p2, bd.pick_r), Q1.g, y->lambda, *y->carrier, t.color(bd.cj).zero);
        auto g = std::make_shared<Game>();
        g->tpl = &t;
        g->color = bd.ck;
        g->lambda = then(then(Q.p1, Q1.p2), bd.pince);
        GraphHom m1 = P1.mediator(then(then(Q.p1, Q1.p1), sx), then(then(Q.p1, Q1.p2), bd.inc));
        s = P.mediator(m1, then(Q.p2, sy));
        AsyncGraph carrier;
        slot[0] = keep(std::move(Q1));
        slot[1] = keep(std::move(Q), &carrier);
        g->carrier = std::make_shared<const AsyncGraph>(std::move(carrier));
        return g;
    };
    c->bin = &sm.border(a->in->color, b->in->color);
    c->bout = &sm.border(a->out->color, b->out->color);
    c->in = border(a->in, b->in, a->s, b->s, *c->bin, c->pb + 2, c->s);
    c->out = border(a->out, b->out, a->t, b->t, *c->bout, c->pb + 4, c->t);
    c->truncated = a->truncated || b->truncated;
    c->pb[0] = keep(std::move(P1));
    c->pb[1] = keep(std::move(P), &c->sup);
    set_pol(*c);
    return c;
}

CobP change(AcuteSpan& span, CobP a)
{
    if (a->tpl != span.left)
        throw std::logic_error("change: template mismatch");
    Template& lt = *span.left;
    auto c = std::make_shared<Cob>();
    c->tpl = span.right;
    c->op = Op::Change;
    c->parts = {a};
    c->span = &span;
    Pullback P = pullback(a->lambda, a->sup, span.lleg, span.apex, lt.one());
    c->lambda = then(P.p2, span.rleg);
    auto border = [&](const GameP& x, const GraphHom& sx, const AcuteSpan::Side& sd, std::shared_ptr<const Pullback>& slot,
                      GraphHom& s) {
        Pullback Q = pullback(x->lambda, *x->carrier, sd.lleg, sd.g, lt.color(x->color).zero);
        auto g = std::make_shared<Game>();
        g->tpl = span.right;
        g->color = sd.rcolor;
        g->lambda = then(Q.p2, sd.rleg);
        s = P.mediator(then(Q.p1, sx), then(Q.p2, sd.inc));
        AsyncGraph carrier;
        slot = keep(std::move(Q), &carrier);
        g->carrier = std::make_shared<const AsyncGraph>(std::move(carrier));
        return g;
    };
    c->sin = &span.side(a->in->color);
    c->sout = &span.side(a->out->color);
    c->in = border(a->in, a->s, *c->sin, c->pb[1], c->s);
    c->out = border(a->out, a->t, *c->sout, c->pb[2], c->t);
    c->truncated = a->truncated;
    c->pb[0] = keep(std::move(P), &c->sup);
    set_pol(*c);
    return c;
}

CobP lift_T(CobP a)
{
    Template& t = *a->tpl;
    if (t.error() < 0)
        throw std::logic_error("lift_T: template has no Error node");
    auto c = std::make_shared<Cob>();
    c->tpl = &t;
    c->op = Op::LiftT;
    c->parts = {a};
    auto lift_game = [&](const GameP& x) {
        auto g = std::make_shared<Game>();
        g->tpl = &t;
        g->color = x->color;
        g->carrier = std::make_shared<const AsyncGraph>(add_point(*x->carrier).g);
        g->lambda = lift_hom(x->lambda, x->carrier->n, t.color(x->color).inv.node[t.error()]);
        g->pointed = true;
        return g;
    };
    c->in = lift_game(a->in);
    c->out = lift_game(a->out);
    c->sup = add_point(a->sup).g;
    c->point = a->sup.n;
    c->lambda = lift_hom(a->lambda, a->sup.n, t.error());
    c->s = lift_hom(a->s, a->in->carrier->n, c->point);
    c->t = lift_hom(a->t, a->out->carrier->n, c->point);
    c->truncated = a->truncated;
    return c;
}

Report check_cob(const Cob& c)
{
    Report r;
    const Template& t = *c.tpl;
    auto sub = [&](const std::string& what, const Report& x) {
        for (const auto& s : x.issues)
            r.add(what + ": " + s);
    };
    sub("support", validate(c.sup));
    sub("s", check_hom(c.s, *c.in->carrier, c.sup));
    sub("t", check_hom(c.t, *c.out->carrier, c.sup));
    sub("lambda", check_hom(c.lambda, c.sup, t.one()));
    sub("in lambda", check_hom(c.in->lambda, *c.in->carrier, t.color(c.in->color).zero));
    sub("out lambda", check_hom(c.out->lambda, *c.out->carrier, t.color(c.out->color).zero));
    if (!r.ok())
        return r;
    if (!(then(c.s, c.lambda) == then(c.in->lambda, t.color(c.in->color).inc)))
        r.add("in square does not commute");
    if (!(then(c.t, c.lambda) == then(c.out->lambda, t.color(c.out->color).inc)))
        r.add("out square does not commute");
    return r;
}

Report check_structural(const Cob& c)
{
    Report r;
    const Template& t = *c.tpl;
    if (!is_epi(c.in->lambda, t.color(c.in->color).zero))
        r.add("in-border labeling is not epi");
    if (auto f = check_lifting(LiftingShape::FrameAtSource, c.lambda, c.sup, t.one()))
        r.add("labeling: " + f->describe());
    if (!is_mono(c.t))
        r.add("t is not monic");
    std::vector<char> hit(c.sup.n, 0);
    for (int v : c.s.node)
        hit[v] = 1;
    for (int v : c.t.node)
        if (hit[v]) {
            r.add("s and t meet at node " + std::to_string(v));
            break;
        }
    return r;
}

GraphHom copair(const std::vector<const GraphHom*>& inj, const std::vector<GraphHom>& h, const AsyncGraph& cod)
{
    GraphHom r;
    r.node.assign(cod.n, -1);
    r.edge.assign(cod.num_edges(), -1);
    r.tile.assign(cod.num_tiles(), -1);
    for (size_t k = 0; k < inj.size(); ++k) {
        for (size_t x = 0; x < inj[k]->node.size(); ++x)
            r.node[inj[k]->node[x]] = h[k].node[x];
        for (size_t x = 0; x < inj[k]->edge.size(); ++x)
            r.edge[inj[k]->edge[x]] = h[k].edge[x];
        for (size_t x = 0; x < inj[k]->tile.size(); ++x)
            r.tile[inj[k]->tile[x]] = h[k].tile[x];
    }
    auto full = [](const std::vector<int>& v) {
        for (int x : v)
            if (x < 0)
                return false;
        return true;
    };
    if (!full(r.node) || !full(r.edge) || !full(r.tile))
        throw std::logic_error("copair: injections are not jointly surjective");
    return r;
}

Report is_simulation(const CobMap& m, const Cob& x, const Cob& y, const Functor& f)
{
    Report r;
    auto sub = [&](const std::string& what, const Report& z) {
        for (const auto& s : z.issues)
            r.add(what + ": " + s);
    };
    sub("sup", check_hom(m.sup, x.sup, y.sup));
    sub("in", check_hom(m.in, *x.in->carrier, *y.in->carrier));
    sub("out", check_hom(m.out, *x.out->carrier, *y.out->carrier));
    if (!r.ok())
        return r;
    if (!(then(x.s, m.sup) == then(m.in, y.s)))
        r.add("in square does not commute");
    if (!(then(x.t, m.sup) == then(m.out, y.t)))
        r.add("out square does not commute");
    if (!(then(x.lambda, f.one) == then(m.sup, y.lambda)))
        r.add("support labels do not commute with the functor");
    const Template& xt = *x.tpl;
    const Template& yt = *y.tpl;
    if (!(then(then(x.in->lambda, xt.color(x.in->color).inc), f.one) ==
          then(then(m.in, y.in->lambda), yt.color(y.in->color).inc)))
        r.add("in-border labels do not commute with the functor");
    if (!(then(then(x.out->lambda, xt.color(x.out->color).inc), f.one) ==
          then(then(m.out, y.out->lambda), yt.color(y.out->color).inc)))
        r.add("out-border labels do not commute with the functor");
    return r;
}

bool is_strict(const CobMap& m, const Cob& x, const Cob& y)
{
    return is_pullback(x.s, m.in, *x.in->carrier, m.sup, x.sup, y.s, *y.in->carrier, y.sup) &&
           is_pullback(x.t, m.out, *x.out->carrier, m.sup, x.sup, y.t, *y.out->carrier, y.sup);
}

CobMap map_identity(const Cob& x)
{
    return {identity(*x.in->carrier), identity(*x.out->carrier), identity(x.sup)};
}

CobMap map_compose(const Cob& x, const Cob& y, const CobMap& f1, const CobMap& f2)
{
    CobMap m;
    m.in = f1.in;
    m.out = f2.out;
    m.sup = copair({&x.inj[0], &x.inj[1]}, {then(f1.sup, y.inj[0]), then(f2.sup, y.inj[1])}, x.sup);
    return m;
}

CobMap map_seq(const Cob& x, const Cob& y, const CobMap& f1, const CobMap& f2)
{
    CobMap m;
    m.in = f1.in;
    m.out = f2.out;
    m.sup = copair({&x.inj[0], &x.inj[1], &x.inj[2], &x.inj[3]},
                   {then(f1.sup, y.inj[0]), then(f2.sup, y.inj[1]), then(f1.out, y.inj[2]), then(f2.in, y.inj[3])},
                   x.sup);
    return m;
}

CobMap map_fill(const Cob& x, const Cob& y, const GraphHom& fb, const GraphHom& fa)
{
    CobMap m;
    m.in = fb;
    m.out = fa;
    m.sup = copair({&x.inj[0], &x.inj[1]}, {then(fb, y.inj[0]), then(fa, y.inj[1])}, x.sup);
    return m;
}

CobMap map_union(const Cob& x, const Cob& y, const CobMap& f1, const CobMap& f2)
{
    CobMap m;
    m.sup = copair({&x.inj[0], &x.inj[1]}, {then(f1.sup, y.inj[0]), then(f2.sup, y.inj[1])}, x.sup);
    m.in = copair({&x.inj_in[0], &x.inj_in[1]}, {then(f1.in, y.inj_in[0]), then(f2.in, y.inj_in[1])},
                  *x.in->carrier);
    m.out = copair({&x.inj_out[0], &x.inj_out[1]}, {then(f1.out, y.inj_out[0]), then(f2.out, y.inj_out[1])},
                   *x.out->carrier);
    return m;
}

namespace {

// Map out of a two-stage pullback (a, z, b) into another, componentwise.
GraphHom pair(const Pullback& Px1, const Pullback& Px, const Pullback& Py1, const Pullback& Py, const GraphHom& h1,
              const GraphHom& h2, const GraphHom& hz)
{
    GraphHom a = then(Px.p1, Px1.p1);
    GraphHom z = then(Px.p1, Px1.p2);
    GraphHom m1 = Py1.mediator(then(a, h1), then(z, hz));
    return Py.mediator(m1, then(Px.p2, h2));
}

}  // namespace

CobMap map_par(const Cob& x, const Cob& y, const CobMap& f1, const CobMap& f2, const GraphHom& f3)
{
    CobMap m;
    m.sup = pair(*x.pb[0], *x.pb[1], *y.pb[0], *y.pb[1], f1.sup, f2.sup, f3);
    const AsyncGraph& y3 = y.sm->three.pg.g;
    GraphHom bin = pull_into(then(x.bin->inc, f3), Inverse(y.bin->inc, y3));
    GraphHom bout = pull_into(then(x.bout->inc, f3), Inverse(y.bout->inc, y3));
    m.in = pair(*x.pb[2], *x.pb[3], *y.pb[2], *y.pb[3], f1.in, f2.in, bin);
    m.out = pair(*x.pb[4], *x.pb[5], *y.pb[4], *y.pb[5], f1.out, f2.out, bout);
    return m;
}

CobMap map_change(const Cob& x, const Cob& y, const CobMap& f, const GraphHom& fo)
{
    CobMap m;
    GraphHom fa = pull_into(then(x.span->apex_inc, fo), y.span->apex_inv);
    m.sup = y.pb[0]->mediator(then(x.pb[0]->p1, f.sup), then(x.pb[0]->p2, fa));
    GraphHom fin = pull_into(then(x.sin->inc, fa), Inverse(y.sin->inc, y.span->apex));
    GraphHom fout = pull_into(then(x.sout->inc, fa), Inverse(y.sout->inc, y.span->apex));
    m.in = y.pb[1]->mediator(then(x.pb[1]->p1, f.in), then(x.pb[1]->p2, fin));
    m.out = y.pb[2]->mediator(then(x.pb[2]->p1, f.out), then(x.pb[2]->p2, fout));
    return m;
}

CobMap map_unfold(const Cob& a, const Cob& b)
{
    if (&a == &b)
        return map_identity(a);
    if (a.op == Op::Empty) {
        CobMap m;
        m.in = m.out = m.sup = empty_hom();
        return m;
    }
    if (a.op != b.op || a.parts.size() != b.parts.size())
        throw std::logic_error(std::string("map_unfold: shapes differ at ") + op_name(a.op));
    std::vector<CobMap> sub;
    for (size_t i = 0; i < a.parts.size(); ++i)
        sub.push_back(map_unfold(*a.parts[i], *b.parts[i]));
    switch (a.op) {
    case Op::Compose: return map_compose(a, b, sub[0], sub[1]);
    case Op::Seq: return map_seq(a, b, sub[0], sub[1]);
    case Op::Union: return map_union(a, b, sub[0], sub[1]);
    case Op::Par: return map_par(a, b, sub[0], sub[1], identity(a.sm->three.pg.g));
    case Op::Change: return map_change(a, b, sub[0], identity(a.span->owner->one()));
    case Op::LiftT: {
        CobMap m;
        m.in = lift_hom(sub[0].in, a.parts[0]->in->carrier->n, b.in->carrier->n - 1);
        m.out = lift_hom(sub[0].out, a.parts[0]->out->carrier->n, b.out->carrier->n - 1);
        m.sup = lift_hom(sub[0].sup, a.parts[0]->sup.n, b.point);
        return m;
    }
    default: throw std::logic_error(std::string("map_unfold: distinct ") + op_name(a.op) + " parts");
    }
}

CobMap hoare_map(const Cob& lhs, const Cob& rhs)
{
    if (lhs.op != Op::Seq || rhs.op != Op::Par || lhs.parts[0]->op != Op::Par || lhs.parts[1]->op != Op::Par ||
        rhs.parts[0]->op != Op::Seq || rhs.parts[1]->op != Op::Seq)
        throw std::logic_error("hoare_map: expects (a || b) ; (c || d) and (a ; c) || (b ; d)");
    const Cob& ps = *lhs.parts[0];
    const Cob& pt = *lhs.parts[1];
    const Cob& r1 = *rhs.parts[0];
    const Cob& r2 = *rhs.parts[1];
    const Pullback& y1 = *rhs.pb[0];
    const Pullback& y = *rhs.pb[1];
    GraphHom id3 = identity(rhs.sm->three.pg.g);
    GraphHom gs = pair(*ps.pb[0], *ps.pb[1], y1, y, r1.inj[0], r2.inj[0], id3);
    GraphHom gt = pair(*pt.pb[0], *pt.pb[1], y1, y, r1.inj[1], r2.inj[1], id3);
    GraphHom go = pair(*ps.pb[4], *ps.pb[5], y1, y, r1.inj[2], r2.inj[2], ps.bout->inc);
    GraphHom gi = pair(*pt.pb[2], *pt.pb[3], y1, y, r1.inj[3], r2.inj[3], pt.bin->inc);
    CobMap m;
    m.sup = copair({&lhs.inj[0], &lhs.inj[1], &lhs.inj[2], &lhs.inj[3]}, {gs, gt, go, gi}, lhs.sup);
    m.in = pair(*ps.pb[2], *ps.pb[3], *rhs.pb[2], *rhs.pb[3], identity(*r1.in->carrier), identity(*r2.in->carrier),
                identity(rhs.bin->g));
    m.out = pair(*pt.pb[4], *pt.pb[5], *rhs.pb[4], *rhs.pb[5], identity(*r1.out->carrier),
                 identity(*r2.out->carrier), identity(rhs.bout->g));
    return m;
}

}  // namespace cobordcsl
