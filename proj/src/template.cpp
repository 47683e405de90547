#include "cobordcsl/template.hpp"

#include <stdexcept>

namespace cobordcsl {

const char* kind_name(Kind k)
{
    switch (k) {
    case Kind::S: return "S";
    case Kind::L: return "L";
    case Kind::Sep: return "Sep";
    }
    return "?";
}

Inverse::Inverse(const GraphHom& mono, const AsyncGraph& cod)
{
    node.assign(cod.n, -1);
    edge.assign(cod.num_edges(), -1);
    tile.assign(cod.num_tiles(), -1);
    for (size_t i = 0; i < mono.node.size(); ++i)
        node[mono.node[i]] = static_cast<int>(i);
    for (size_t i = 0; i < mono.edge.size(); ++i)
        edge[mono.edge[i]] = static_cast<int>(i);
    for (size_t i = 0; i < mono.tile.size(); ++i)
        tile[mono.tile[i]] = static_cast<int>(i);
}

GraphHom pull_into(const GraphHom& h, const Inverse& inv)
{
    GraphHom r;
    auto go = [](const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out, const char* what) {
        out.resize(a.size());
        for (size_t i = 0; i < a.size(); ++i) {
            int x = b[a[i]];
            if (x < 0)
                throw std::logic_error(std::string("pull_into: ") + what + " " + std::to_string(i) +
                                       " leaves the subgraph");
            out[i] = x;
        }
    };
    go(h.node, inv.node, r.node, "node");
    go(h.edge, inv.edge, r.edge, "edge");
    go(h.tile, inv.tile, r.tile, "tile");
    return r;
}

EdgeMap3 model_edge_index(const Model& m)
{
    EdgeMap3 idx;
    const AsyncGraph& g = m.pg.g;
    idx.reserve(g.edges.size());
    for (int e = 0; e < g.num_edges(); ++e)
        idx.emplace(std::array<int, 3>{g.edges[e].src, g.edges[e].tgt, pol_key(m.edge_label[e], g.pol[e])}, e);
    return idx;
}

GraphHom map_into_model(const AsyncGraph& dom, const std::function<int(int)>& node_fn,
                        const std::function<int(int)>& edge_key_fn, const Model& cod, const EdgeMap3& cod_index,
                        const TileIndex& cod_tiles)
{
    GraphHom h;
    h.node.resize(dom.n);
    for (int v = 0; v < dom.n; ++v) {
        h.node[v] = node_fn(v);
        if (h.node[v] < 0)
            throw std::logic_error("map_into_model: node " + std::to_string(v) + " has no image");
    }
    h.edge.resize(dom.num_edges());
    for (int e = 0; e < dom.num_edges(); ++e) {
        auto it = cod_index.find({h.node[dom.edges[e].src], h.node[dom.edges[e].tgt], edge_key_fn(e)});
        if (it == cod_index.end())
            throw std::logic_error("map_into_model: edge " + std::to_string(e) + " has no image");
        h.edge[e] = it->second;
    }
    h.tile.resize(dom.num_tiles());
    for (int t = 0; t < dom.num_tiles(); ++t) {
        const Tile& x = dom.tiles[t];
        int y = cod_tiles.find(cod.pg.g, {h.edge[x.top[0]], h.edge[x.top[1]]}, {h.edge[x.bot[0]], h.edge[x.bot[1]]});
        if (y < 0)
            throw std::logic_error("map_into_model: tile " + std::to_string(t) + " has no image");
        h.tile[t] = y;
    }
    return h;
}

LabelIndex::LabelIndex(const AsyncGraph& g, const GraphHom& lambda) : tiles(g)
{
    edges.reserve(g.edges.size());
    for (int e = 0; e < g.num_edges(); ++e)
        edges.emplace(std::array<int, 3>{g.edges[e].src, g.edges[e].tgt, lambda.edge[e]}, e);
}

bool derive_hom(const AsyncGraph& dom, const GraphHom& dom_lambda, const GraphHom& label_map,
                const std::vector<int>& node_map, const AsyncGraph& cod, const LabelIndex& cod_index,
                GraphHom& out)
{
    out.node = node_map;
    out.edge.assign(dom.num_edges(), -1);
    out.tile.assign(dom.num_tiles(), -1);
    for (int e = 0; e < dom.num_edges(); ++e) {
        auto it = cod_index.edges.find(
            {node_map[dom.edges[e].src], node_map[dom.edges[e].tgt], label_map.edge[dom_lambda.edge[e]]});
        if (it == cod_index.edges.end())
            return false;
        out.edge[e] = it->second;
    }
    for (int t = 0; t < dom.num_tiles(); ++t) {
        const Tile& x = dom.tiles[t];
        int y = cod_index.tiles.find(cod, {out.edge[x.top[0]], out.edge[x.top[1]]},
                                     {out.edge[x.bot[0]], out.edge[x.bot[1]]});
        if (y < 0)
            return false;
        out.tile[t] = y;
    }
    return true;
}

namespace {

std::unique_ptr<Color> plain_color(const Model& plain, const AsyncGraph& one)
{
    auto c = std::make_unique<Color>();
    c->pred = Pred::tt();
    c->zero = plain.pg.g;
    c->inc = frame_embedding(plain);
    c->inv = Inverse(c->inc, one);
    return c;
}

std::uint32_t drop_bit(std::uint32_t x, int r)
{
    std::uint32_t low = x & ((1u << r) - 1);
    return low | (x >> (r + 1)) << r;
}

GraphHom expand_hom(const GraphHom& plain, int k)
{
    GraphHom h;
    h.node = plain.node;
    h.edge.resize(plain.edge.size() * k);
    for (size_t e = 0; e < plain.edge.size(); ++e)
        for (int a = 0; a < k; ++a)
            h.edge[e * k + a] = plain.edge[e] * k + a;
    int kk = k * k;
    h.tile.resize(plain.tile.size() * kk);
    for (size_t t = 0; t < plain.tile.size(); ++t)
        for (int c = 0; c < kk; ++c)
            h.tile[t * kk + c] = plain.tile[t] * kk + c;
    return h;
}

const Model& plain_model(const Template& t) { return t.S ? t.S->model : t.L->model; }

bool is_lock_op(const Instr& m, const std::string& r)
{
    return (m.k == Instr::P || m.k == Instr::V) && m.lock == r;
}

// Relabels a lock instruction of the inner context into one without lock ri.
int drop_lock_instr(int li, int ri, const ModelConfig& inner, const ModelConfig& outer)
{
    LockInstr x = lock_instr_of(li, inner);
    if (x.k == LockInstr::P || x.k == LockInstr::V) {
        if (x.arg == ri)
            return 0;
        if (x.arg > ri)
            --x.arg;
    }
    return lock_instr_id(x, outer);
}

int nop_id(const Alphabet& a)
{
    int id = a.find(Instr::nop());
    if (id < 0)
        throw std::logic_error("alphabet lacks nop");
    return id;
}

}  // namespace

int Template::color_of(const Pred& p)
{
    if (kind != Kind::Sep)
        return 0;
    const Bitset& b = sat->sat(p);
    for (size_t i = 0; i < colors.size(); ++i)
        if (colors[i]->sat == b)
            return static_cast<int>(i);
    auto c = std::make_unique<Color>();
    c->pred = p;
    c->sat = b;
    const AsyncGraph& g = one();
    std::vector<char> kn(g.n), ke(g.num_edges());
    for (int v = 0; v < g.n; ++v)
        kn[v] = bit(b, sep->party_lstate(v, 0));
    for (int e = 0; e < g.num_edges(); ++e)
        ke[e] = g.pol[e] == Pol::F;
    c->zero = restrict(g, kn, ke, &c->inc);
    c->inv = Inverse(c->inc, g);
    colors.push_back(std::move(c));
    return static_cast<int>(colors.size()) - 1;
}

const Template::Mult& Template::mult(int j)
{
    auto it = mults_.find(j);
    if (it != mults_.end())
        return it->second;
    const Color& c = color(j);
    Pushout po = pushout(c.inc, one(), c.inc, one(), c.zero);
    Mult m;
    m.mu = po.mediator(identity(one()), identity(one()));
    m.il = std::move(po.i1);
    m.ir = std::move(po.i2);
    m.two = std::move(po.g);
    return mults_.emplace(j, std::move(m)).first->second;
}

std::string Template::node_label(int v) const
{
    switch (kind) {
    case Kind::S: return S->space.label(v);
    case Kind::L: return L->label(v);
    case Kind::Sep: return sep->label(v);
    }
    return {};
}

std::string Template::edge_label(int e) const
{
    int lab = two.edge_label[e];
    switch (kind) {
    case Kind::S: return to_string(S->alpha.instrs[lab]);
    case Kind::L: return to_string(lock_instr_of(lab, cfg), cfg);
    case Kind::Sep: return to_string(sep->alpha.instrs[lab]);
    }
    return {};
}

std::unique_ptr<Template> make_template_S(const ModelConfig& cfg, const Alphabet& alpha)
{
    auto t = std::make_unique<Template>();
    t->kind = Kind::S;
    t->cfg = cfg;
    t->S = std::make_shared<StatefulModel>(build_stateful(cfg, alpha));
    t->two = two_player(t->S->model);
    t->colors.push_back(plain_color(t->S->model, t->one()));
    return t;
}

std::unique_ptr<Template> make_template_L(const ModelConfig& cfg)
{
    auto t = std::make_unique<Template>();
    t->kind = Kind::L;
    t->cfg = cfg;
    t->L = std::make_shared<StatelessModel>(build_stateless(cfg));
    t->two = two_player(t->L->model);
    t->colors.push_back(plain_color(t->L->model, t->one()));
    return t;
}

std::unique_ptr<Template> make_template_Sep(const ModelConfig& cfg, const std::vector<int>& keys,
                                            const LockContext& gamma, const Alphabet& alpha, Satisfier& sat)
{
    auto t = std::make_unique<Template>();
    t->kind = Kind::Sep;
    t->sep = build_sep_model(cfg, keys, gamma, alpha, sat, 2);
    t->cfg = t->sep->mcfg;
    t->gamma = gamma;
    t->sat = &sat;
    t->two = t->sep->model;
    return t;
}

Report check_polyad_laws(Template& t, int color)
{
    Report r;
    const Template::Mult& M = t.mult(color);
    const Color& c = t.color(color);
    for (const auto& s : check_hom(M.mu, M.two, t.one()).issues)
        r.add("mu: " + s);
    GraphHom id = identity(t.one());
    if (!(then(M.il, M.mu) == id))
        r.add("left unit law fails");
    if (!(then(M.ir, M.mu) == id))
        r.add("right unit law fails");
    Pushout p3 = pushout(then(c.inc, M.ir), M.two, c.inc, t.one(), c.zero);
    GraphHom route1 = then(p3.mediator(then(M.mu, M.il), M.ir), M.mu);
    GraphHom route2 = then(p3.mediator(identity(M.two), M.ir), M.mu);
    if (!(route1 == route2))
        r.add("associativity fails");
    return r;
}

Report check_legs(const Template& t, int color)
{
    Report r;
    const Color& c = t.color(color);
    if (!is_mono(c.inc))
        r.add("border inclusion is not monic");
    for (LiftingShape s : {LiftingShape::FrameAtSource, LiftingShape::FrameAtTarget, LiftingShape::TileOverTop})
        if (auto f = check_lifting(s, c.inc, c.zero, t.one()))
            r.add(f->describe());
    return r;
}

namespace {

// Sep views of a three-player state: 0 = left, 1 = right, 2 = pince.
SepState sep_view(const SepState& s, int nlocks, int which)
{
    const int P3 = 3 + nlocks, P2 = 2 + nlocks;
    auto code = [&](int player) {
        return which == 2 ? player < 2 : player == which;
    };
    SepState v;
    v.val = s.val;
    int K = static_cast<int>(s.val.size());
    v.units.assign(static_cast<size_t>(K) * P2, 0);
    for (int i = 0; i < K; ++i) {
        for (int p = 0; p < 3; ++p)
            v.units[i * P2 + (code(p) ? 0 : 1)] += s.units[i * P3 + p];
        for (int q = 0; q < nlocks; ++q)
            v.units[i * P2 + 2 + q] = s.units[i * P3 + 3 + q];
    }
    v.holder.resize(nlocks);
    for (int q = 0; q < nlocks; ++q)
        v.holder[q] = s.holder[q] < 0 ? -1 : code(s.holder[q]) ? 0 : 1;
    return v;
}

GraphHom sep_view_hom(const SepModel& m3, const Template& base, int which, const EdgeMap3& idx,
                      const TileIndex& tiles)
{
    int nl = static_cast<int>(m3.gamma.locks.size());
    auto node_fn = [&](int v) { return base.sep->find(sep_view(m3.states[v], nl, which)); };
    auto key_fn = [&](int e) {
        int p = m3.player_of(m3.model.pg.g.pol[e]);
        bool code = which == 2 ? p < 2 : p == which;
        return pol_key(m3.model.edge_label[e], code ? Pol::C : Pol::F);
    };
    return map_into_model(m3.model.pg.g, node_fn, key_fn, base.two, idx, tiles);
}

}  // namespace

std::unique_ptr<SpanMonoidal> make_span_monoidal(Template& base)
{
    auto sm = std::make_unique<SpanMonoidal>();
    sm->base = &base;
    if (base.kind != Kind::Sep) {
        sm->three = three_player(plain_model(base));
        const AsyncGraph& g = sm->three.pg.g;
        auto mk = [&](auto code) {
            GraphHom h;
            h.node.resize(g.n);
            for (int v = 0; v < g.n; ++v)
                h.node[v] = v;
            h.edge.resize(g.num_edges());
            for (int e = 0; e < g.num_edges(); ++e)
                h.edge[e] = 2 * (e / 3) + (code(e % 3) ? 0 : 1);
            h.tile.resize(g.num_tiles());
            for (int t = 0; t < g.num_tiles(); ++t) {
                int c = t % 9, a = c / 3, b = c % 3;
                h.tile[t] = 4 * (t / 9) + (code(a) ? 0 : 1) * 2 + (code(b) ? 0 : 1);
            }
            return h;
        };
        sm->pick_l = mk([](int p) { return p == 0; });
        sm->pick_r = mk([](int p) { return p == 1; });
        sm->pince = mk([](int p) { return p < 2; });
        return sm;
    }
    sm->sep3 = build_sep_model(base.cfg, base.sep->lu.keys, base.gamma, base.sep->alpha, *base.sat, 3);
    sm->three = sm->sep3->model;
    EdgeMap3 idx = model_edge_index(base.two);
    TileIndex tiles(base.one());
    sm->pick_l = sep_view_hom(*sm->sep3, base, 0, idx, tiles);
    sm->pick_r = sep_view_hom(*sm->sep3, base, 1, idx, tiles);
    sm->pince = sep_view_hom(*sm->sep3, base, 2, idx, tiles);
    return sm;
}

const SpanMonoidal::Border& SpanMonoidal::border(int ci, int cj)
{
    auto key = std::make_pair(ci, cj);
    auto it = borders_.find(key);
    if (it != borders_.end())
        return *it->second;
    auto b = std::make_unique<Border>();
    b->ci = ci;
    b->cj = cj;
    if (base->kind != Kind::Sep) {
        b->g = base->color(0).zero;
        b->inc = identity(b->g);
        for (int& e : b->inc.edge)
            e = 3 * e + 2;
        for (int& t : b->inc.tile)
            t = 9 * t + 8;
        b->pick_l = b->pick_r = b->pince = identity(b->g);
        b->ck = 0;
    } else {
        const Color& a = base->color(ci);
        const Color& c = base->color(cj);
        const AsyncGraph& g = three.pg.g;
        std::vector<char> kn(g.n), ke(g.num_edges());
        for (int v = 0; v < g.n; ++v)
            kn[v] = bit(a.sat, sep3->party_lstate(v, 0)) && bit(c.sat, sep3->party_lstate(v, 1));
        for (int e = 0; e < g.num_edges(); ++e)
            ke[e] = g.pol[e] == Pol::F;
        b->g = restrict(g, kn, ke, &b->inc);
        b->ck = base->color_of(Pred::bin(Pred::Star, a.pred, c.pred));
        b->pick_l = pull_into(then(b->inc, pick_l), base->color(ci).inv);
        b->pick_r = pull_into(then(b->inc, pick_r), base->color(cj).inv);
        b->pince = pull_into(then(b->inc, pince), base->color(b->ck).inv);
    }
    return *borders_.emplace(key, std::move(b)).first->second;
}

GraphHom Functor::zero(int color) const
{
    const Color& cs = src->color(color);
    const Color& cd = dst->color(color_map(color));
    return pull_into(then(cs.inc, one), cd.inv);
}

Functor functor_u(Template& s, Template& l, SpanMonoidal* s3, SpanMonoidal* l3)
{
    Functor f;
    f.src = &s;
    f.dst = &l;
    const Model& ps = s.S->model;
    const Model& pl = l.L->model;
    EdgeMap3 idx = model_edge_index(pl);
    TileIndex tiles(pl.pg.g);
    auto node_fn = [&](int v) {
        if (v == s.error())
            return l.error();
        return static_cast<int>(s.S->space.decode(v).locks);
    };
    auto key_fn = [&](int e) {
        MachineState st = s.S->space.decode(ps.pg.g.edges[e].src);
        LockInstr li = erase_instr(s.S->alpha.instrs[ps.edge_label[e]], st, s.cfg);
        return pol_key(lock_instr_id(li, l.cfg), Pol::None);
    };
    GraphHom plain = map_into_model(ps.pg.g, node_fn, key_fn, pl, idx, tiles);
    f.one = expand_hom(plain, 2);
    if (s3 && l3)
        f.three = expand_hom(plain, 3);
    return f;
}

Functor functor_u_sep(Template& sep, Template& s, SpanMonoidal* sep3, SpanMonoidal* s3)
{
    Functor f;
    f.src = &sep;
    f.dst = &s;
    f.color_map = [](int) { return 0; };
    {
        EdgeMap3 idx = model_edge_index(s.two);
        TileIndex tiles(s.one());
        const SepModel& m = *sep.sep;
        f.one = map_into_model(
            sep.one(), [&](int v) { return m.erased[v]; },
            [&](int e) { return pol_key(m.model.edge_label[e], m.model.pg.g.pol[e]); }, s.two, idx, tiles);
    }
    if (sep3 && s3) {
        EdgeMap3 idx = model_edge_index(s3->three);
        TileIndex tiles(s3->three.pg.g);
        const SepModel& m = *sep3->sep3;
        f.three = map_into_model(
            m.model.pg.g, [&](int v) { return m.erased[v]; },
            [&](int e) { return pol_key(m.model.edge_label[e], m.model.pg.g.pol[e]); }, s3->three, idx, tiles);
    }
    return f;
}

const AcuteSpan::Side& AcuteSpan::side(int color)
{
    auto it = sides_.find(color);
    if (it != sides_.end())
        return *it->second;
    auto sd = std::make_unique<Side>();
    int oc = side_owner_color(color);
    const Color& c = owner->color(oc);
    std::vector<char> kn(c.zero.n), ke(c.zero.num_edges());
    for (int v = 0; v < c.zero.n; ++v)
        kn[v] = side_keep(c.inc.node[v]);
    for (int e = 0; e < c.zero.num_edges(); ++e)
        ke[e] = apex_inv.edge[c.inc.edge[e]] >= 0;
    GraphHom sub;
    sd->g = restrict(c.zero, kn, ke, &sub);
    sd->inc = pull_into(then(sub, c.inc), apex_inv);
    sd->rcolor = side_right_color(color);
    sd->lleg = pull_into(then(sd->inc, lleg), left->color(color).inv);
    sd->rleg = pull_into(then(sd->inc, rleg), right->color(sd->rcolor).inv);
    return *sides_.emplace(color, std::move(sd)).first->second;
}

namespace {

void set_apex(AcuteSpan& sp, Template& owner, const std::vector<char>& kn, const std::vector<char>& ke)
{
    sp.owner = &owner;
    sp.apex = restrict(owner.one(), kn, ke, &sp.apex_inc);
    sp.apex_inv = Inverse(sp.apex_inc, owner.one());
}

// Drops lock ri from a separated state; an unheld region goes to the Code.
SepState sep_drop_lock(const SepState& s, int players, int nlocks, int ri)
{
    const int Pin = players + nlocks, Pout = Pin - 1;
    int K = static_cast<int>(s.val.size());
    SepState o;
    o.val = s.val;
    o.units.assign(static_cast<size_t>(K) * Pout, 0);
    for (int i = 0; i < K; ++i) {
        for (int q = 0; q < Pout; ++q) {
            int from = q < players ? q : (q - players >= ri ? q + 1 : q);
            o.units[i * Pout + q] = s.units[i * Pin + from];
        }
        if (s.holder[ri] < 0)
            o.units[i * Pout] = static_cast<std::uint8_t>(o.units[i * Pout] + s.units[i * Pin + players + ri]);
    }
    for (int q = 0; q < nlocks; ++q)
        if (q != ri)
            o.holder.push_back(s.holder[q]);
    return o;
}

// Inserts lock ri held by the Code.
SepState sep_add_held_lock(const SepState& s, int players, int nlocks, int ri)
{
    const int Pin = players + nlocks, Pout = Pin + 1;
    int K = static_cast<int>(s.val.size());
    SepState o;
    o.val = s.val;
    o.units.assign(static_cast<size_t>(K) * Pout, 0);
    for (int i = 0; i < K; ++i)
        for (int q = 0; q < Pin; ++q) {
            int to = q < players ? q : (q - players >= ri ? q + 1 : q);
            o.units[i * Pout + to] = s.units[i * Pin + q];
        }
    o.holder = s.holder;
    o.holder.insert(o.holder.begin() + ri, 0);
    return o;
}

}  // namespace

std::unique_ptr<AcuteSpan> hide_span(Template& inner, Template& outer, const std::string& r)
{
    auto sp = std::make_unique<AcuteSpan>();
    sp->left = &inner;
    sp->right = &outer;
    const AsyncGraph& g = inner.one();
    std::vector<char> kn(g.n, 1), ke(g.num_edges(), 1);
    int ri = inner.kind == Kind::Sep ? inner.gamma.find(r) : inner.cfg.lock_index(r);
    if (ri < 0)
        throw std::logic_error("hide: unknown lock " + r);
    for (int e = 0; e < g.num_edges(); ++e) {
        if (g.pol[e] != Pol::F)
            continue;
        int lab = inner.two.edge_label[e];
        if (inner.kind == Kind::L) {
            LockInstr x = lock_instr_of(lab, inner.cfg);
            ke[e] = !((x.k == LockInstr::P || x.k == LockInstr::V) && x.arg == ri);
        } else {
            const Alphabet& a = inner.kind == Kind::S ? inner.S->alpha : inner.sep->alpha;
            ke[e] = !is_lock_op(a.instrs[lab], r);
        }
    }
    if (inner.kind == Kind::Sep)
        for (int v = 0; v < g.n; ++v)
            kn[v] = inner.sep->states[v].holder[ri] != 1;
    set_apex(*sp, inner, kn, ke);
    sp->lleg = sp->apex_inc;
    EdgeMap3 idx = model_edge_index(outer.two);
    TileIndex tiles(outer.one());
    const GraphHom& inc = sp->apex_inc;
    std::function<int(int)> node_fn, key_fn;
    switch (inner.kind) {
    case Kind::S:
        node_fn = [&](int v) {
            int x = inc.node[v];
            if (x == inner.error())
                return outer.error();
            MachineState ms = inner.S->space.decode(x);
            ms.locks = drop_bit(ms.locks, ri);
            return outer.S->space.encode(ms);
        };
        key_fn = [&](int e) {
            int x = inc.edge[e];
            int lab = inner.two.edge_label[x];
            if (is_lock_op(inner.S->alpha.instrs[lab], r))
                lab = nop_id(inner.S->alpha);
            return pol_key(lab, g.pol[x]);
        };
        sp->side_keep = [&inner, ri](int v) {
            return v == inner.error() || !(inner.S->space.decode(v).locks >> ri & 1);
        };
        break;
    case Kind::L:
        node_fn = [&](int v) {
            int x = inc.node[v];
            return x == inner.error() ? outer.error() : static_cast<int>(drop_bit(x, ri));
        };
        key_fn = [&](int e) {
            int x = inc.edge[e];
            return pol_key(drop_lock_instr(inner.two.edge_label[x], ri, inner.cfg, outer.cfg), g.pol[x]);
        };
        sp->side_keep = [&inner, ri](int v) { return v == inner.error() || !(v >> ri & 1); };
        break;
    case Kind::Sep: {
        int nl = static_cast<int>(inner.gamma.locks.size());
        node_fn = [&, nl](int v) {
            return outer.sep->find(sep_drop_lock(inner.sep->states[inc.node[v]], 2, nl, ri));
        };
        key_fn = [&](int e) {
            int x = inc.edge[e];
            int lab = inner.two.edge_label[x];
            if (is_lock_op(inner.sep->alpha.instrs[lab], r))
                lab = nop_id(inner.sep->alpha);
            return pol_key(lab, g.pol[x]);
        };
        sp->side_keep = [&inner, ri](int v) { return inner.sep->states[v].holder[ri] < 0; };
        break;
    }
    }
    sp->rleg = map_into_model(sp->apex, node_fn, key_fn, outer.two, idx, tiles);
    sp->side_owner_color = [](int c) { return c; };
    if (inner.kind == Kind::Sep) {
        Pred J = inner.gamma.inv[ri];
        sp->side_right_color = [&inner, &outer, J](int c) {
            return outer.color_of(Pred::bin(Pred::Star, inner.color(c).pred, J));
        };
    } else {
        sp->side_right_color = [](int) { return 0; };
    }
    return sp;
}

std::unique_ptr<AcuteSpan> when_span(Template& body, Template& outer, const std::string& r)
{
    if (outer.kind == Kind::Sep)
        throw std::logic_error("when_span: use when_push_sep for Sep");
    auto sp = std::make_unique<AcuteSpan>();
    sp->left = &body;
    sp->right = &outer;
    const AsyncGraph& g = outer.one();
    int ri = outer.cfg.lock_index(r);
    if (ri < 0)
        throw std::logic_error("when: unknown lock " + r);
    auto is_r_op = [&](int e) {
        int lab = outer.two.edge_label[e];
        if (outer.kind == Kind::L) {
            LockInstr x = lock_instr_of(lab, outer.cfg);
            return (x.k == LockInstr::P || x.k == LockInstr::V) && x.arg == ri;
        }
        return is_lock_op(outer.S->alpha.instrs[lab], r);
    };
    std::vector<char> kn(g.n, 1), ke(g.num_edges(), 1);
    for (int e = 0; e < g.num_edges(); ++e)
        ke[e] = !(g.pol[e] == Pol::C && is_r_op(e));
    set_apex(*sp, outer, kn, ke);
    sp->rleg = sp->apex_inc;
    EdgeMap3 idx = model_edge_index(body.two);
    TileIndex tiles(body.one());
    const GraphHom& inc = sp->apex_inc;
    std::function<int(int)> node_fn, key_fn;
    if (outer.kind == Kind::S) {
        node_fn = [&](int v) {
            int x = inc.node[v];
            if (x == outer.error())
                return body.error();
            MachineState ms = outer.S->space.decode(x);
            ms.locks = drop_bit(ms.locks, ri);
            return body.S->space.encode(ms);
        };
        key_fn = [&](int e) {
            int x = inc.edge[e];
            int lab = outer.two.edge_label[x];
            if (is_lock_op(outer.S->alpha.instrs[lab], r))
                lab = nop_id(outer.S->alpha);
            return pol_key(lab, g.pol[x]);
        };
    } else {
        node_fn = [&](int v) {
            int x = inc.node[v];
            return x == outer.error() ? body.error() : static_cast<int>(drop_bit(x, ri));
        };
        key_fn = [&](int e) {
            int x = inc.edge[e];
            return pol_key(drop_lock_instr(outer.two.edge_label[x], ri, outer.cfg, body.cfg), g.pol[x]);
        };
    }
    sp->lleg = map_into_model(sp->apex, node_fn, key_fn, body.two, idx, tiles);
    sp->side_keep = [](int) { return true; };
    sp->side_owner_color = [](int) { return 0; };
    sp->side_right_color = [](int) { return 0; };
    return sp;
}

std::unique_ptr<AcuteSpan> when_push_sep(Template& body, Template& outer, const std::string& r)
{
    auto sp = std::make_unique<AcuteSpan>();
    sp->left = &body;
    sp->right = &outer;
    const AsyncGraph& g = body.one();
    int ro = outer.gamma.find(r);
    if (ro < 0)
        throw std::logic_error("when: unknown lock " + r);
    std::vector<char> kn(g.n, 1), ke(g.num_edges(), 1);
    set_apex(*sp, body, kn, ke);
    sp->lleg = sp->apex_inc;
    EdgeMap3 idx = model_edge_index(outer.two);
    TileIndex tiles(outer.one());
    int nl = static_cast<int>(body.gamma.locks.size());
    sp->rleg = map_into_model(
        sp->apex, [&](int v) { return outer.sep->find(sep_add_held_lock(body.sep->states[v], 2, nl, ro)); },
        [&](int e) { return pol_key(body.two.edge_label[e], g.pol[e]); }, outer.two, idx, tiles);
    sp->side_keep = [](int) { return true; };
    sp->side_owner_color = [](int c) { return c; };
    sp->side_right_color = [&body, &outer](int c) { return outer.color_of(body.color(c).pred); };
    return sp;
}

}  // namespace cobordcsl
