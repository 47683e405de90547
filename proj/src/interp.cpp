#include "cobordcsl/interp.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

namespace cobordcsl {

namespace {

std::string join(const std::vector<std::string>& v)
{
    std::string s;
    for (const auto& x : v)
        s += (s.empty() ? "" : ",") + x;
    return s;
}

void add_unique(std::vector<std::string>& v, const std::string& x)
{
    if (!x.empty() && std::find(v.begin(), v.end(), x) == v.end())
        v.push_back(x);
}

World::Locks without(const World::Locks& locks, const std::string& r)
{
    World::Locks out;
    for (const auto& x : locks)
        if (x != r)
            out.push_back(x);
    return out;
}

Pred star(Pred a, Pred b) { return Pred::bin(Pred::Star, std::move(a), std::move(b)); }
Pred conj(Pred a, Pred b) { return Pred::bin(Pred::And, std::move(a), std::move(b)); }
Pred disj(Pred a, Pred b) { return Pred::bin(Pred::Or, std::move(a), std::move(b)); }
Pred own1(const std::string& x) { return Pred::own(x, Perm{1, 1}); }

void collect_instrs(const Cmd& c, const ModelConfig& cfg, Alphabet& a)
{
    if (c.k == Cmd::If || c.k == Cmd::While) {
        a.intern(Instr::test(c.b));
        a.intern(Instr::test(negate(c.b)));
    } else if (c.atomic() && c.k != Cmd::Skip) {
        for (const Instr& m : instrs_of(c, cfg))
            a.intern(m);
    }
    for (const Cmd& s : c.sub)
        collect_instrs(s, cfg, a);
}

// Locations a command touches through closed addresses; false when some
// address is not closed or the heap changes shape.
bool program_locations(const Cmd& c, const ModelConfig& cfg, std::vector<int>& locs)
{
    if (c.k == Cmd::Malloc || c.k == Cmd::Dispose)
        return false;
    if (c.k == Cmd::Load || c.k == Cmd::Store) {
        std::vector<std::string> fv;
        free_vars(c.e, fv);
        if (!fv.empty())
            return false;
        MemoryState empty;
        if (auto v = eval_expr(c.e, cfg, empty))
            locs.push_back(*v);
    }
    for (const Cmd& s : c.sub)
        if (!program_locations(s, cfg, locs))
            return false;
    return true;
}

void proof_walk(const ProofTree& p, const std::function<void(const ProofTree&)>& f)
{
    f(p);
    for (const ProofTree& s : p.sub)
        proof_walk(s, f);
}

}  // namespace

std::vector<std::string> lock_key(const std::vector<std::string>& locks) { return locks; }

std::vector<Instr> instrs_of(const Cmd& c, const ModelConfig& cfg)
{
    switch (c.k) {
    case Cmd::Assign: return {Instr::assign(c.x, c.e)};
    case Cmd::Load: return {Instr::load(c.x, c.e)};
    case Cmd::Store: return {Instr::store(c.e, c.e2)};
    case Cmd::Dispose: return {Instr::dispose(c.e)};
    case Cmd::Malloc: {
        std::vector<Instr> out;
        for (int l : cfg.locs)
            out.push_back(Instr::alloc(c.x, c.e, l));
        return out;
    }
    default: throw std::logic_error("instrs_of: not an atomic command: " + to_string(c));
    }
}

Pred bexpr_pred(const BExpr& b, const ModelConfig& cfg)
{
    switch (b.k) {
    case BExpr::True: return Pred::tt();
    case BExpr::False: return Pred::ff();
    case BExpr::Eq: return Pred::eq(b.e[0], b.e[1]);
    case BExpr::Ne: return Pred::neg(Pred::eq(b.e[0], b.e[1]));
    case BExpr::Lt:
    case BExpr::Le: {
        Pred out = Pred::ff();
        for (int x = cfg.vmin; x <= cfg.vmax; ++x)
            for (int y = cfg.vmin; y <= cfg.vmax; ++y)
                if (x < y || (b.k == BExpr::Le && x == y))
                    out = disj(out, conj(Pred::eq(b.e[0], Expr::num(x)), Pred::eq(b.e[1], Expr::num(y))));
        return out;
    }
    case BExpr::And: return conj(bexpr_pred(b.b[0], cfg), bexpr_pred(b.b[1], cfg));
    case BExpr::Or: return disj(bexpr_pred(b.b[0], cfg), bexpr_pred(b.b[1], cfg));
    case BExpr::Not: return Pred::neg(bexpr_pred(b.b[0], cfg));
    }
    return Pred::ff();
}

// ---------------------------------------------------------------------------
// World

World::World(const ModelConfig& base, const Cmd& prog, const ProofTree* proof, int unfold_)
    : cfg(base), unfold(unfold_)
{
    cfg.locks.clear();
    std::vector<std::string> vars = base.vars, locks;
    cmd_vars(prog, vars);
    cmd_locks(prog, locks);
    std::vector<const Pred*> preds;
    if (proof)
        proof_walk(*proof, [&](const ProofTree& p) {
            for (const Pred* q : {&p.pre, &p.post, &p.aux}) {
                pred_vars(*q, vars);
                preds.push_back(q);
            }
            std::vector<std::string> fv;
            free_vars(p.value, fv);
            free_vars(p.cond, fv);
            for (const auto& x : fv)
                add_unique(vars, x);
            if (p.rule == Rule::AFF || p.rule == Rule::STORE || p.rule == Rule::LOAD)
                cmd_vars(p.cmd, vars);
            if (p.rule == Rule::RES || p.rule == Rule::WHEN)
                add_unique(locks, p.lock);
        });
    cfg.vars.clear();
    for (const auto& x : vars)
        add_unique(cfg.vars, x);

    alpha.intern(Instr::nop());
    for (const auto& r : locks) {
        alpha.intern(Instr::acquire(r));
        alpha.intern(Instr::release(r));
    }
    collect_instrs(prog, cfg, alpha);
    if (proof)
        proof_walk(*proof, [&](const ProofTree& p) {
            if (p.rule == Rule::AFF || p.rule == Rule::STORE || p.rule == Rule::LOAD)
                if (p.cmd.atomic() && p.cmd.k != Cmd::Skip)
                    for (const Instr& m : instrs_of(p.cmd, cfg))
                        alpha.intern(m);
            if (p.rule == Rule::IF) {
                alpha.intern(Instr::test(p.cond));
                alpha.intern(Instr::test(negate(p.cond)));
            }
        });

    for (const auto& x : cfg.vars)
        sep_keys.push_back(cfg.var_index(x));
    std::vector<int> locs;
    for (const Pred* q : preds)
        pred_locations(*q, cfg, locs);
    if (!program_locations(prog, cfg, locs))
        locs = cfg.locs;
    for (int l : locs) {
        int j = cfg.loc_index(l);
        if (j >= 0)
            sep_keys.push_back(cfg.loc_key(j));
    }
    std::sort(sep_keys.begin(), sep_keys.end());
    sep_keys.erase(std::unique(sep_keys.begin(), sep_keys.end()), sep_keys.end());
}

Template& World::S(const Locks& locks)
{
    std::string key = "S|" + join(locks);
    auto it = templates_.find(key);
    if (it != templates_.end())
        return *it->second;
    ModelConfig c = cfg;
    c.locks = locks;
    return *templates_.emplace(key, make_template_S(c, alpha)).first->second;
}

Template& World::L(const Locks& locks)
{
    std::string key = "L|" + join(locks);
    auto it = templates_.find(key);
    if (it != templates_.end())
        return *it->second;
    ModelConfig c = cfg;
    c.locks = locks;
    return *templates_.emplace(key, make_template_L(c)).first->second;
}

SpanMonoidal& World::three(Template& t)
{
    auto it = threes_.find(&t);
    if (it != threes_.end())
        return *it->second;
    return *threes_.emplace(&t, make_span_monoidal(t)).first->second;
}

Functor& World::register_functor(Functor f)
{
    std::pair<const Template*, const Template*> key{f.src, f.dst};
    auto& slot = owned_[key];
    slot = std::make_unique<Functor>(std::move(f));
    return *slot;
}

const Functor& World::u(const Locks& locks)
{
    Template& s = S(locks);
    Template& l = L(locks);
    auto it = owned_.find({&s, &l});
    if (it != owned_.end())
        return *it->second;
    return register_functor(functor_u(s, l));
}

Satisfier& World::sat()
{
    if (!sat_) {
        lu_ = std::make_unique<LUniverse>(cfg, sep_keys);
        sat_ = std::make_unique<Satisfier>(*lu_);
    }
    return *sat_;
}

Template& World::Sep(const LockContext& gamma)
{
    std::string key = "Sep|" + gamma.to_string();
    auto it = templates_.find(key);
    if (it != templates_.end())
        return *it->second;
    ModelConfig c = cfg;
    c.locks = gamma.locks;
    return *templates_.emplace(key, make_template_Sep(c, sep_keys, gamma, alpha, sat())).first->second;
}

const Functor& World::usep(const LockContext& gamma)
{
    Template& sp = Sep(gamma);
    Template& s = S(gamma.locks);
    auto it = owned_.find({&sp, &s});
    if (it != owned_.end())
        return *it->second;
    return register_functor(functor_u_sep(sp, s));
}

const Functor& World::functor(const Template* src, const Template* dst)
{
    auto it = owned_.find({src, dst});
    if (it != owned_.end())
        return *it->second;
    if (src->kind == Kind::S && dst->kind == Kind::L && src->cfg.locks == dst->cfg.locks &&
        &S(src->cfg.locks) == src && &L(dst->cfg.locks) == dst)
        return u(src->cfg.locks);
    if (src->kind == Kind::Sep && dst->kind == Kind::S && &Sep(src->gamma) == src && &S(src->gamma.locks) == dst)
        return usep(src->gamma);
    throw std::logic_error(std::string("no functor ") + kind_name(src->kind) + " -> " + kind_name(dst->kind));
}

const GraphHom& World::functor3(const Template* src, const Template* dst)
{
    functor(src, dst);
    Functor& f = *owned_.at({src, dst});
    if (!f.three.node.empty() || !f.three.edge.empty())
        return f.three;
    Template& s = *const_cast<Template*>(src);
    Template& d = *const_cast<Template*>(dst);
    if (src->kind == Kind::S)
        f.three = functor_u(s, d, &three(s), &three(d)).three;
    else if (src->kind == Kind::Sep)
        f.three = functor_u_sep(s, d, &three(s), &three(d)).three;
    else
        throw std::logic_error("functor3: unsupported templates");
    return f.three;
}

AcuteSpan& World::hide(Kind k, const Locks& inner, const std::string& r)
{
    std::string key = std::string(kind_name(k)) + "|hide|" + join(inner) + "|" + r;
    auto it = spans_.find(key);
    if (it != spans_.end())
        return *it->second;
    Template& in = plain(k, inner);
    Template& out = plain(k, without(inner, r));
    return *spans_.emplace(key, hide_span(in, out, r)).first->second;
}

AcuteSpan& World::when(Kind k, const Locks& outer, const std::string& r)
{
    std::string key = std::string(kind_name(k)) + "|when|" + join(outer) + "|" + r;
    auto it = spans_.find(key);
    if (it != spans_.end())
        return *it->second;
    Template& body = plain(k, without(outer, r));
    Template& out = plain(k, outer);
    return *spans_.emplace(key, when_span(body, out, r)).first->second;
}

AcuteSpan& World::hide_sep(const LockContext& inner, const std::string& r)
{
    std::string key = "Sep|hide|" + inner.to_string() + "|" + r;
    auto it = spans_.find(key);
    if (it != spans_.end())
        return *it->second;
    Template& in = Sep(inner);
    Template& out = Sep(inner.without(r));
    return *spans_.emplace(key, hide_span(in, out, r)).first->second;
}

AcuteSpan& World::when_sep(const LockContext& outer, const std::string& r)
{
    std::string key = "Sep|when|" + outer.to_string() + "|" + r;
    auto it = spans_.find(key);
    if (it != spans_.end())
        return *it->second;
    Template& body = Sep(outer.without(r));
    Template& out = Sep(outer);
    return *spans_.emplace(key, when_push_sep(body, out, r)).first->second;
}

const GraphHom& World::when_sep_functor(const LockContext& outer, const std::string& r)
{
    std::string key = outer.to_string() + "|" + r;
    auto it = when_functors_.find(key);
    if (it != when_functors_.end())
        return it->second;
    AcuteSpan& sp = when_sep(outer, r);
    return when_functors_.emplace(key, then(sp.rleg, usep(outer).one)).first->second;
}

void World::check_cap(const Cob& c) const
{
    if (static_cast<std::size_t>(c.sup.n) > cfg.node_cap)
        throw CapacityError("cobordism support has " + std::to_string(c.sup.n) + " nodes, cap is " +
                            std::to_string(cfg.node_cap));
}

// ---------------------------------------------------------------------------
// Code semantics

CobP sem_instr(World& w, Kind k, const World::Locks& locks, const std::vector<Instr>& ms, const std::string& tag)
{
    Template& t = w.plain(k, locks);
    std::vector<char> ok;
    if (k == Kind::S) {
        ok.assign(w.alpha.size(), 0);
        for (const Instr& m : ms) {
            int id = w.alpha.find(m);
            if (id < 0)
                throw std::logic_error("instruction not in the alphabet: " + to_string(m));
            ok[id] = 1;
        }
    } else {
        ok.assign(num_lock_instrs(t.cfg), 0);
        for (const Instr& m : ms)
            for (const LockInstr& li : lock_instrs_of(m, t.cfg))
                if (li.arg >= 0)
                    ok[lock_instr_id(li, t.cfg)] = 1;
    }
    const AsyncGraph& one = t.one();
    std::vector<char> code(one.num_edges(), 0);
    for (int e = 0; e < one.num_edges(); ++e)
        code[e] = is_code(one.pol[e]) && ok[t.two.edge_label[e]];
    return leaf(t, 0, 0, code, true, tag);
}

namespace {

std::vector<char> reachable(const Cob& c, bool code_only)
{
    std::vector<std::vector<int>> adj(c.sup.n);
    for (int e = 0; e < c.sup.num_edges(); ++e)
        if (!code_only || is_code(c.sup.pol[e]))
            adj[c.sup.edges[e].src].push_back(c.sup.edges[e].tgt);
    std::vector<char> seen(c.sup.n, 0);
    std::vector<int> st;
    for (int v : c.s.node)
        if (!seen[v]) {
            seen[v] = 1;
            st.push_back(v);
        }
    while (!st.empty()) {
        int v = st.back();
        st.pop_back();
        for (int u : adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                st.push_back(u);
            }
    }
    return seen;
}

std::vector<char> code_reachable(const Cob& c) { return reachable(c, true); }

// The unfolding map restricts to a bijection between the Code-reachable parts.
bool stable_step(const Cob& a, const Cob& b)
{
    CobMap m = map_unfold(a, b);
    std::vector<char> ra = code_reachable(a), rb = code_reachable(b);
    std::vector<char> hit(b.sup.n, 0);
    for (int v = 0; v < a.sup.n; ++v) {
        if (!ra[v])
            continue;
        int u = m.sup.node[v];
        if (!rb[u] || hit[u])
            return false;
        hit[u] = 1;
    }
    for (int u = 0; u < b.sup.n; ++u)
        if (rb[u] && !hit[u])
            return false;
    auto count = [](const Cob& c, const std::vector<char>& r) {
        int k = 0;
        for (int e = 0; e < c.sup.num_edges(); ++e)
            k += is_code(c.sup.pol[e]) && r[c.sup.edges[e].src];
        return k;
    };
    return count(a, ra) == count(b, rb);
}

struct Builder {
    World& w;
    Kind k;
    std::map<const Cmd*, int>& depth;

    CobP checked(CobP c)
    {
        w.check_cap(*c);
        return c;
    }

    CobP instr(const World::Locks& locks, std::vector<Instr> ms, const std::string& tag)
    {
        return checked(sem_instr(w, k, locks, ms, tag));
    }

    CobP build(const Cmd& c, const World::Locks& locks)
    {
        Template& t = w.plain(k, locks);
        switch (c.k) {
        case Cmd::Skip: return identity_cob(zero_game(t, 0));
        case Cmd::Seq: return checked(seq(build(c.sub[0], locks), build(c.sub[1], locks)));
        case Cmd::Par: {
            CobP a = build(c.sub[0], locks), b = build(c.sub[1], locks);
            return checked(par(a, b, w.three(t)));
        }
        case Cmd::If: {
            CobP tb = instr(locks, {Instr::test(c.b)}, "test " + to_string(c.b));
            CobP tn = instr(locks, {Instr::test(negate(c.b))}, "test " + to_string(negate(c.b)));
            CobP a = build(c.sub[0], locks), b = build(c.sub[1], locks);
            return checked(seq(identity_cob(zero_game(t, 0)), cob_union(seq(tb, a), seq(tn, b), 0, 0)));
        }
        case Cmd::While: return loop(c, locks);
        case Cmd::Resource: {
            if (std::find(locks.begin(), locks.end(), c.x) != locks.end())
                throw std::invalid_argument("resource " + c.x + " is already bound");
            World::Locks in = locks;
            in.push_back(c.x);
            CobP body = build(c.sub[0], in);
            return checked(change(w.hide(k, in, c.x), body));
        }
        case Cmd::With: {
            if (std::find(locks.begin(), locks.end(), c.x) == locks.end())
                throw std::invalid_argument("with " + c.x + ": no enclosing resource " + c.x);
            CobP body = build(c.sub[0], without(locks, c.x));
            CobP take = instr(locks, {Instr::acquire(c.x)}, "P(" + c.x + ")");
            CobP release = instr(locks, {Instr::release(c.x)}, "V(" + c.x + ")");
            CobP mid = checked(change(w.when(k, locks, c.x), body));
            return checked(seq(take, checked(seq(mid, release))));
        }
        default: return instr(locks, instrs_of(c, w.cfg), to_string(c));
        }
    }

    CobP loop(const Cmd& c, const World::Locks& locks)
    {
        Template& t = w.plain(k, locks);
        CobP tb = instr(locks, {Instr::test(c.b)}, "test " + to_string(c.b));
        CobP tn = instr(locks, {Instr::test(negate(c.b))}, "test " + to_string(negate(c.b)));
        CobP body = build(c.sub[0], locks);
        auto F = [&](const CobP& x) { return checked(cob_union(seq(tb, seq(body, x)), tn, 0, 0)); };
        CobP x = F(empty_cob(t, 0, 0));
        auto it = depth.find(&c);
        bool truncated = false;
        if (it != depth.end()) {
            int n = std::abs(it->second);
            for (int i = 1; i < n; ++i)
                x = F(x);
            truncated = it->second < 0;
        } else {
            int n = 1;
            bool stable = false;
            while (n < w.unfold) {
                CobP y = F(x);
                if (stable_step(*x, *y)) {
                    stable = true;
                    break;
                }
                x = y;
                ++n;
            }
            truncated = !stable;
            depth[&c] = stable ? n : -n;
        }
        if (truncated)
            std::const_pointer_cast<Cob>(x)->truncated = true;
        return x;
    }
};

// Map between two games over zero borders (optionally error-lifted).
GraphHom game_map(const Game& gx, const Game& gy, const Functor& F)
{
    const Color& cx = gx.tpl->color(gx.color);
    const Color& cy = gy.tpl->color(gy.color);
    const AsyncGraph& X = *gx.carrier;
    const AsyncGraph& Y = *gy.carrier;
    std::vector<int> nodes(X.n);
    for (int v = 0; v < X.n; ++v) {
        if (gx.pointed && v == X.n - 1) {
            if (!gy.pointed)
                throw std::logic_error("game_map: point has no image");
            nodes[v] = Y.n - 1;
            continue;
        }
        int z = cy.inv.node[F.one.node[cx.inc.node[gx.lambda.node[v]]]];
        if (z < 0 || z >= Y.n)
            throw std::logic_error("game_map: border node has no image");
        nodes[v] = z;
    }
    GraphHom out;
    if (!derive_hom(X, then(gx.lambda, cx.inc), F.one, nodes, Y, LabelIndex(Y, then(gy.lambda, cy.inc)), out))
        throw std::logic_error("game_map: border edge has no image");
    return out;
}

}  // namespace

CobMap leaf_map(const Cob& x, const Cob& y, const Functor& F)
{
    const Color& yi = y.tpl->color(y.in->color);
    const Color& yo = y.tpl->color(y.out->color);
    std::vector<int> nodes(x.sup.n, -1);
    auto image = [&](int xv, const Color& c, const GraphHom& side) {
        int z = c.inv.node[F.one.node[x.lambda.node[xv]]];
        if (z < 0)
            throw std::logic_error("leaf_map: state has no image in the border");
        return side.node[z];
    };
    for (int v = 0; v < x.in->carrier->n; ++v)
        nodes[x.s.node[v]] = image(x.s.node[v], yi, y.s);
    for (int v = 0; v < x.out->carrier->n; ++v) {
        int xv = x.t.node[v];
        if (xv == x.point) {
            if (y.point < 0)
                throw std::logic_error("leaf_map: point has no image");
            nodes[xv] = y.point;
        } else {
            nodes[xv] = image(xv, yo, y.t);
        }
    }
    for (int v = 0; v < x.sup.n; ++v)
        if (nodes[v] < 0)
            throw std::logic_error("leaf_map: support node off the borders");
    CobMap m;
    if (!derive_hom(x.sup, x.lambda, F.one, nodes, y.sup, LabelIndex(y.sup, y.lambda), m.sup))
        throw std::logic_error("leaf_map: step has no image (" + x.tag + " -> " + y.tag + ")");
    m.in = pull_into(then(x.s, m.sup), Inverse(y.s, y.sup));
    m.out = pull_into(then(x.t, m.sup), Inverse(y.t, y.sup));
    return m;
}

CobMap lockstep(World& w, const Cob& x, const Cob& y)
{
    if (x.op != y.op || x.parts.size() != y.parts.size())
        throw std::logic_error(std::string("lockstep: ") + op_name(x.op) + " against " + op_name(y.op));
    const Functor& F = w.functor(x.tpl, y.tpl);
    auto sub = [&](int i) { return lockstep(w, *x.parts[i], *y.parts[i]); };
    switch (x.op) {
    case Op::Leaf: return leaf_map(x, y, F);
    case Op::Identity: {
        GraphHom h = game_map(*x.in, *y.in, F);
        return {h, h, h};
    }
    case Op::Empty: return {empty_hom(), empty_hom(), empty_hom()};
    case Op::Compose: return map_compose(x, y, sub(0), sub(1));
    case Op::Fill: return map_fill(x, y, game_map(*x.in, *y.in, F), game_map(*x.out, *y.out, F));
    case Op::Seq: return map_seq(x, y, sub(0), sub(1));
    case Op::Union: return map_union(x, y, sub(0), sub(1));
    case Op::Par: {
        CobMap a = sub(0), b = sub(1);
        return map_par(x, y, a, b, w.functor3(x.tpl, y.tpl));
    }
    case Op::Change: return map_change(x, y, sub(0), w.functor(x.span->owner, y.span->owner).one);
    case Op::LiftT: break;
    }
    throw std::logic_error(std::string("lockstep: unsupported ") + op_name(x.op));
}

CobP sem_code_kind(World& w, Kind k, const Cmd& c, std::map<const Cmd*, int>& depth)
{
    Builder b{w, k, depth};
    return b.build(c, {});
}

CodeSem sem_code(World& w, const Cmd& c)
{
    CodeSem cs;
    std::map<const Cmd*, int> depth;
    cs.s = sem_code_kind(w, Kind::S, c, depth);
    cs.l = sem_code_kind(w, Kind::L, c, depth);
    cs.map = lockstep(w, *cs.s, *cs.l);
    cs.truncated = cs.s->truncated;
    return cs;
}

// ---------------------------------------------------------------------------
// Proof checking

std::string ProofIssue::describe() const
{
    return std::to_string(line) + ":" + std::to_string(col) + ": " + path + ": " + msg;
}

std::string Counterexample::describe() const
{
    std::string s = kind;
    if (node >= 0)
        s += " node " + std::to_string(node);
    if (edge >= 0)
        s += " edge " + std::to_string(edge);
    if (edge2 >= 0)
        s += " then edge " + std::to_string(edge2);
    if (target >= 0)
        s += " target " + std::to_string(target);
    if (!detail.empty())
        s += ": " + detail;
    return s;
}

namespace {

struct Validator {
    World& w;
    Satisfier& sat;
    std::vector<ProofIssue> out;

    void issue(const ProofTree& p, const std::string& path, const std::string& msg)
    {
        out.push_back({path, p.line, p.col, msg});
    }

    void same(const ProofTree& p, const std::string& path, const Pred& have, const Pred& want, const char* what)
    {
        if (!sat.equivalent(have, want))
            issue(p, path, std::string(what) + " " + to_string(have) + " does not match " + to_string(want));
    }

    bool defined(const Pred& P, const BExpr& b)
    {
        std::vector<std::string> fv;
        free_vars(b, fv);
        const LUniverse& u = sat.universe();
        std::vector<int> slots;
        for (const auto& x : fv) {
            int s = u.key_slot(w.cfg.var_index(x));
            if (s < 0)
                return false;
            slots.push_back(s);
        }
        const Bitset& bs = sat.sat(P);
        for (std::size_t i = 0; i < u.N; ++i) {
            if (!bit(bs, i))
                continue;
            std::vector<int> d = u.digits(i);
            for (int s : slots)
                if (d[s] == 0)
                    return false;
        }
        return true;
    }

    void check(const ProofTree& p, const LockContext& g, const std::string& prefix)
    {
        std::string path = prefix + rule_name(p.rule);
        try {
            rule(p, g, path);
        } catch (const PredError& e) {
            issue(p, path, e.what());
        }
    }

    void rule(const ProofTree& p, const LockContext& g, const std::string& path)
    {
        auto child = [&](int i) { return path + "." + std::to_string(i) + "."; };
        const ModelConfig& cfg = w.cfg;
        switch (p.rule) {
        case Rule::AFF: {
            if (p.cmd.k != Cmd::Assign) {
                issue(p, path, "AFF is about an assignment x := E");
                return;
            }
            Pred base = star(own1(p.cmd.x), p.aux);
            same(p, path, p.pre, conj(base, Pred::eq(p.cmd.e, p.value)), "precondition");
            same(p, path, p.post, conj(base, Pred::eq(Expr::var(p.cmd.x), p.value)), "postcondition");
            return;
        }
        case Rule::STORE: {
            if (p.cmd.k != Cmd::Store) {
                issue(p, path, "STORE is about a store [E] := E'");
                return;
            }
            std::vector<std::string> fv;
            free_vars(p.cmd.e, fv);
            free_vars(p.cmd.e2, fv);
            if (!fv.empty()) {
                issue(p, path, "STORE needs a closed address and value");
                return;
            }
            same(p, path, p.pre, Pred::quant(Pred::Exists, "_a", Pred::pts(p.cmd.e, Perm{1, 1}, Expr::meta("_a"))),
                 "precondition");
            same(p, path, p.post, Pred::pts(p.cmd.e, Perm{1, 1}, p.cmd.e2), "postcondition");
            return;
        }
        case Rule::LOAD: {
            if (p.cmd.k != Cmd::Load) {
                issue(p, path, "LOAD is about a load x := [E]");
                return;
            }
            std::vector<std::string> fv;
            free_vars(p.cmd.e, fv);
            if (std::find(fv.begin(), fv.end(), p.cmd.x) != fv.end()) {
                issue(p, path, p.cmd.x + " occurs in the address");
                return;
            }
            Pred base = star(Pred::pts(p.cmd.e, p.perm, p.value), own1(p.cmd.x));
            same(p, path, p.pre, base, "precondition");
            same(p, path, p.post, conj(base, Pred::eq(Expr::var(p.cmd.x), p.value)), "postcondition");
            return;
        }
        case Rule::IF: {
            if (!defined(p.pre, p.cond))
                issue(p, path, "precondition does not make " + to_string(p.cond) + " defined");
            same(p, path, p.sub[0].pre, conj(p.pre, bexpr_pred(p.cond, cfg)), "then-branch precondition");
            same(p, path, p.sub[1].pre, conj(p.pre, bexpr_pred(negate(p.cond), cfg)), "else-branch precondition");
            same(p, path, p.sub[0].post, p.post, "then-branch postcondition");
            same(p, path, p.sub[1].post, p.post, "else-branch postcondition");
            check(p.sub[0], g, child(0));
            check(p.sub[1], g, child(1));
            return;
        }
        case Rule::SEQ:
            same(p, path, p.sub[0].pre, p.pre, "first precondition");
            same(p, path, p.sub[1].pre, p.sub[0].post, "middle assertion");
            same(p, path, p.sub[1].post, p.post, "second postcondition");
            check(p.sub[0], g, child(0));
            check(p.sub[1], g, child(1));
            return;
        case Rule::DISJ:
            if (!(proof_command(p.sub[0]) == proof_command(p.sub[1])))
                issue(p, path, "premises are about different commands");
            same(p, path, p.pre, disj(p.sub[0].pre, p.sub[1].pre), "precondition");
            same(p, path, p.post, disj(p.sub[0].post, p.sub[1].post), "postcondition");
            check(p.sub[0], g, child(0));
            check(p.sub[1], g, child(1));
            return;
        case Rule::RES:
            if (g.find(p.lock) >= 0) {
                issue(p, path, "resource " + p.lock + " is already bound");
                return;
            }
            same(p, path, p.pre, star(p.sub[0].pre, p.aux), "precondition");
            same(p, path, p.post, star(p.sub[0].post, p.aux), "postcondition");
            check(p.sub[0], g.with(p.lock, p.aux), child(0));
            return;
        case Rule::WHEN: {
            int ri = g.find(p.lock);
            if (ri < 0) {
                issue(p, path, "resource " + p.lock + " is not bound");
                return;
            }
            const Pred& J = g.inv[ri];
            same(p, path, p.sub[0].pre, star(p.pre, J), "body precondition");
            same(p, path, p.sub[0].post, star(p.post, J), "body postcondition");
            check(p.sub[0], g.without(p.lock), child(0));
            return;
        }
        case Rule::PAR:
            same(p, path, p.pre, star(p.sub[0].pre, p.sub[1].pre), "precondition");
            same(p, path, p.post, star(p.sub[0].post, p.sub[1].post), "postcondition");
            check(p.sub[0], g, child(0));
            check(p.sub[1], g, child(1));
            return;
        case Rule::FRAME:
            same(p, path, p.pre, star(p.sub[0].pre, p.aux), "precondition");
            same(p, path, p.post, star(p.sub[0].post, p.aux), "postcondition");
            check(p.sub[0], g, child(0));
            return;
        }
    }
};

void expect_op(const Cob& y, Op op)
{
    if (y.op != op)
        throw ProofError(std::string("proof and program differ: expected ") + op_name(op) + ", program has " +
                         op_name(y.op));
}

struct ProofBuilder {
    World& w;

    CobP leaf_of(Template& T, int ci, int co, const std::vector<Instr>& ms, const std::string& tag)
    {
        std::vector<char> ok(w.alpha.size(), 0);
        for (const Instr& m : ms) {
            int id = w.alpha.find(m);
            if (id < 0)
                throw ProofError("instruction not in the alphabet: " + to_string(m));
            ok[id] = 1;
        }
        const AsyncGraph& one = T.one();
        std::vector<char> code(one.num_edges(), 0);
        for (int e = 0; e < one.num_edges(); ++e)
            code[e] = is_code(one.pol[e]) && ok[T.two.edge_label[e]];
        CobP c = leaf(T, ci, co, code, false, tag);
        w.check_cap(*c);
        return c;
    }

    ProofSem build(const ProofTree& p, const LockContext& g, const CobP& y)
    {
        Template& T = w.Sep(g);
        const Functor& U = w.functor(&T, y->tpl);
        int cP = T.color_of(p.pre), cQ = T.color_of(p.post);
        auto done = [&](CobP x, CobMap m) {
            w.check_cap(*x);
            return ProofSem{std::move(x), std::move(m)};
        };
        switch (p.rule) {
        case Rule::AFF:
        case Rule::STORE:
        case Rule::LOAD: {
            expect_op(*y, Op::Leaf);
            CobP x = leaf_of(T, cP, cQ, instrs_of(p.cmd, w.cfg), to_string(p.cmd));
            return done(x, leaf_map(*x, *y, U));
        }
        case Rule::SEQ: {
            expect_op(*y, Op::Seq);
            ProofSem a = build(p.sub[0], g, y->parts[0]);
            ProofSem b = build(p.sub[1], g, y->parts[1]);
            CobP x = seq(a.sep, b.sep);
            return done(x, map_seq(*x, *y, a.map, b.map));
        }
        case Rule::IF: {
            expect_op(*y, Op::Seq);
            const Cob& yu = *y->parts[1];
            expect_op(yu, Op::Union);
            int cB = T.color_of(conj(p.pre, bexpr_pred(p.cond, w.cfg)));
            int cN = T.color_of(conj(p.pre, bexpr_pred(negate(p.cond), w.cfg)));
            CobP tb = leaf_of(T, cP, cB, {Instr::test(p.cond)}, "test " + to_string(p.cond));
            CobP tn = leaf_of(T, cP, cN, {Instr::test(negate(p.cond))}, "test " + to_string(negate(p.cond)));
            ProofSem a = build(p.sub[0], g, yu.parts[0]->parts[1]);
            ProofSem b = build(p.sub[1], g, yu.parts[1]->parts[1]);
            CobP s1 = seq(tb, a.sep), s2 = seq(tn, b.sep);
            CobMap m1 = map_seq(*s1, *yu.parts[0], leaf_map(*tb, *yu.parts[0]->parts[0], U), a.map);
            CobMap m2 = map_seq(*s2, *yu.parts[1], leaf_map(*tn, *yu.parts[1]->parts[0], U), b.map);
            CobP u = cob_union(s1, s2, cP, cQ);
            CobMap mu = map_union(*u, yu, m1, m2);
            CobP id = identity_cob(zero_game(T, cP));
            GraphHom h = game_map(*id->in, *y->parts[0]->in, U);
            CobP x = seq(id, u);
            return done(x, map_seq(*x, *y, CobMap{h, h, h}, mu));
        }
        case Rule::PAR: {
            expect_op(*y, Op::Par);
            ProofSem a = build(p.sub[0], g, y->parts[0]);
            ProofSem b = build(p.sub[1], g, y->parts[1]);
            CobP x = par(a.sep, b.sep, w.three(T));
            return done(x, map_par(*x, *y, a.map, b.map, w.functor3(&T, y->tpl)));
        }
        case Rule::FRAME: {
            ProofSem a = build(p.sub[0], g, y);
            CobP x = par(a.sep, identity_cob(zero_game(T, T.color_of(p.aux))), w.three(T));
            CobMap m;
            m.sup = then(then(x->pb[1]->p1, x->pb[0]->p1), a.map.sup);
            m.in = then(then(x->pb[3]->p1, x->pb[2]->p1), a.map.in);
            m.out = then(then(x->pb[5]->p1, x->pb[4]->p1), a.map.out);
            return done(x, m);
        }
        case Rule::DISJ: {
            ProofSem a = build(p.sub[0], g, y);
            ProofSem b = build(p.sub[1], g, y);
            CobP x = cob_union(a.sep, b.sep, cP, cQ);
            CobMap m;
            m.sup = copair({&x->inj[0], &x->inj[1]}, {a.map.sup, b.map.sup}, x->sup);
            m.in = copair({&x->inj_in[0], &x->inj_in[1]}, {a.map.in, b.map.in}, *x->in->carrier);
            m.out = copair({&x->inj_out[0], &x->inj_out[1]}, {a.map.out, b.map.out}, *x->out->carrier);
            return done(x, m);
        }
        case Rule::RES: {
            expect_op(*y, Op::Change);
            if (g.find(p.lock) >= 0)
                throw ProofError("resource " + p.lock + " is already bound");
            LockContext in = g.with(p.lock, p.aux);
            ProofSem a = build(p.sub[0], in, y->parts[0]);
            CobP x = change(w.hide_sep(in, p.lock), a.sep);
            return done(x, map_change(*x, *y, a.map, w.functor(&w.Sep(in), y->parts[0]->tpl).one));
        }
        case Rule::WHEN: {
            expect_op(*y, Op::Seq);
            const Cob& yrest = *y->parts[1];
            expect_op(yrest, Op::Seq);
            const Cob& ych = *yrest.parts[0];
            expect_op(ych, Op::Change);
            int ri = g.find(p.lock);
            if (ri < 0)
                throw ProofError("resource " + p.lock + " is not bound");
            const Pred& J = g.inv[ri];
            int cPJ = T.color_of(star(p.pre, J)), cQJ = T.color_of(star(p.post, J));
            ProofSem a = build(p.sub[0], g.without(p.lock), ych.parts[0]);
            CobP take = leaf_of(T, cP, cPJ, {Instr::acquire(p.lock)}, "P(" + p.lock + ")");
            CobP release = leaf_of(T, cQJ, cQ, {Instr::release(p.lock)}, "V(" + p.lock + ")");
            CobP mid = change(w.when_sep(g, p.lock), a.sep);
            CobMap mm = map_change(*mid, ych, a.map, w.when_sep_functor(g, p.lock));
            CobP rest = seq(mid, release);
            CobMap mr = map_seq(*rest, yrest, mm, leaf_map(*release, *yrest.parts[1], U));
            CobP x = seq(take, rest);
            return done(x, map_seq(*x, *y, leaf_map(*take, *y->parts[0], U), mr));
        }
        }
        throw ProofError("unknown rule");
    }
};

}  // namespace

std::vector<ProofIssue> validate_proof(World& w, const ProofTree& p, const Cmd& prog)
{
    Validator v{w, w.sat(), {}};
    Cmd c = proof_command(p);
    if (!(c == prog))
        v.issue(p, rule_name(p.rule),
                "the proof is about '" + to_string(c) + "', the program is '" + to_string(prog) + "'");
    v.check(p, LockContext{}, "");
    return v.out;
}

ProofSem sem_proof(World& w, const ProofTree& p, const LockContext& gamma, const CobP& y)
{
    ProofBuilder b{w};
    return b.build(p, gamma, y);
}

// ---------------------------------------------------------------------------
// Checks

std::optional<Counterexample> find_error_edge(const Cob& s)
{
    std::vector<char> reach = code_reachable(s);
    int err = s.tpl->error();
    for (int e = 0; e < s.sup.num_edges(); ++e) {
        const Edge& x = s.sup.edges[e];
        if (is_code(s.sup.pol[e]) && reach[x.src] && s.lambda.node[x.tgt] == err)
            return Counterexample{"error", x.src, e, -1, -1,
                                  s.tpl->node_label(s.lambda.node[x.src]) + " --" +
                                      s.tpl->edge_label(s.lambda.edge[e]) + "--> Error"};
    }
    return std::nullopt;
}

namespace {

// Two consecutive Code edges of g (restricted to Code edges from the kept
// nodes) whose image under f tops a tile of h with no tile above it.
std::optional<LiftFailure> code_tile_lifting(const AsyncGraph& g, const std::vector<char>& keep, const GraphHom& f,
                                             const AsyncGraph& h, GraphHom& inc)
{
    std::vector<char> ke(g.num_edges(), 0);
    for (int e = 0; e < g.num_edges(); ++e)
        ke[e] = is_code(g.pol[e]) && keep[g.edges[e].src] && keep[g.edges[e].tgt];
    AsyncGraph r = restrict(g, keep, ke, &inc);
    auto fail = check_lifting(LiftingShape::TileOverTop, then(inc, f), r, h);
    if (fail) {
        fail->anchor = inc.edge[fail->anchor];
        fail->anchor2 = inc.edge[fail->anchor2];
    }
    return fail;
}

}  // namespace

RaceReport check_race(World& w, const CodeSem& cs)
{
    (void)w;
    RaceReport r;
    r.truncated = cs.truncated;
    const Cob& s = *cs.s;
    GraphHom inc;
    if (auto f = code_tile_lifting(s.sup, code_reachable(s), cs.map.sup, cs.l->sup, inc)) {
        r.race = true;
        const Template& t = *s.tpl;
        r.cex = Counterexample{"race", s.sup.edges[f->anchor].src, f->anchor, f->anchor2, f->target,
                               t.edge_label(s.lambda.edge[f->anchor]) + " ; " +
                                   t.edge_label(s.lambda.edge[f->anchor2]) + " at " +
                                   t.node_label(s.lambda.node[s.sup.edges[f->anchor].src])};
    }
    r.error_edge = find_error_edge(s);
    return r;
}

CheckResult check_soundness(World& w, const Cmd& prog, const ProofTree& p, bool validate)
{
    CheckResult res;
    SoundnessReport& r = res.report;
    if (validate) {
        r.proof_errors = validate_proof(w, p, prog);
        if (!r.proof_errors.empty())
            return res;
    }
    res.code = sem_code(w, prog);
    const CodeSem& cs = *res.code;
    r.truncated = cs.truncated;
    try {
        res.proof = sem_proof(w, p, LockContext{}, cs.s);
    } catch (const std::logic_error& e) {
        r.proof_errors.push_back({rule_name(p.rule), p.line, p.col, e.what()});
        return res;
    } catch (const ProofError& e) {
        r.proof_errors.push_back({rule_name(p.rule), p.line, p.col, e.what()});
        return res;
    }
    const Cob& x = *res.proof->sep;
    for (const auto& s : check_cob(x).issues)
        r.structural.push_back("proof cobordism: " + s);
    for (const auto& s : is_simulation(res.proof->map, x, *cs.s, w.functor(x.tpl, cs.s->tpl)).issues)
        r.simulation.push_back("Sep -> S: " + s);
    for (const auto& s : is_simulation(cs.map, *cs.s, *cs.l, w.functor(cs.s->tpl, cs.l->tpl)).issues)
        r.simulation.push_back("S -> L: " + s);
    r.strict = is_strict(cs.map, *cs.s, *cs.l);

    // Only states some run from the input border can reach are checked.
    std::vector<char> live = reachable(x, false);
    GraphHom inc;
    AsyncGraph xr = restrict(x.sup, live, std::vector<char>(x.sup.num_edges(), 1), &inc);
    if (auto f = check_lifting(LiftingShape::CodeAtSource, then(inc, res.proof->map.sup), xr, cs.s->sup)) {
        r.code_fibration = false;
        int v = inc.node[f->anchor];
        const Template& ts = *cs.s->tpl;
        r.code_cex = Counterexample{"code step without a proof step", v, -1, -1, f->target,
                                    x.tpl->node_label(x.lambda.node[v]) + " cannot follow " +
                                        ts.edge_label(cs.s->lambda.edge[f->target])};
    }
    if (auto f = code_tile_lifting(x.sup, live, then(res.proof->map.sup, cs.map.sup), cs.l->sup, inc)) {
        r.two_fibration = false;
        r.two_cex = Counterexample{"interference", x.sup.edges[f->anchor].src, f->anchor, f->anchor2, f->target,
                                   x.tpl->edge_label(x.lambda.edge[f->anchor]) + " ; " +
                                       x.tpl->edge_label(x.lambda.edge[f->anchor2])};
    }
    RaceReport race = check_race(w, cs);
    r.race = race.race;
    r.race_cex = race.cex;
    return res;
}

// ---------------------------------------------------------------------------
// Final states

std::set<int> cob_final_states(World& w, const CodeSem& cs, int init)
{
    (void)w;
    const Cob& s = *cs.s;
    CobP W = compose(fill(zero_game(*s.tpl, 0), s.in), cs.s);
    std::vector<std::vector<int>> adj(W->sup.n);
    for (int e = 0; e < W->sup.num_edges(); ++e)
        if (is_code(W->sup.pol[e]))
            adj[W->sup.edges[e].src].push_back(W->sup.edges[e].tgt);
    std::set<int> out;
    std::vector<char> seen(W->sup.n, 0);
    std::vector<int> st{W->s.node[init]};
    seen[st[0]] = 1;
    while (!st.empty()) {
        int v = st.back();
        st.pop_back();
        if (adj[v].empty())
            out.insert(W->lambda.node[v]);
        for (int u : adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                st.push_back(u);
            }
    }
    return out;
}

namespace {

struct Conf {
    Cmd c;
    MemoryState mem;
    std::vector<std::string> held;
    bool error = false;
};

Cmd release_marker(const std::string& r)
{
    Cmd c;
    c.k = Cmd::With;
    c.x = r;
    return c;
}

Cmd mk(Cmd::Kind k, Cmd a, Cmd b)
{
    Cmd c;
    c.k = k;
    c.sub = {std::move(a), std::move(b)};
    return c;
}

struct Interleaver {
    const ModelConfig& cfg;

    std::vector<Conf> steps(const Conf& k)
    {
        const Cmd& c = k.c;
        std::vector<Conf> out;
        auto with_cmd = [&](const Conf& s, Cmd nc) {
            Conf r = s;
            r.c = std::move(nc);
            return r;
        };
        auto err = [&] {
            Conf e;
            e.error = true;
            return e;
        };
        switch (c.k) {
        case Cmd::Skip: return out;
        case Cmd::Seq: {
            if (c.sub[0].k == Cmd::Skip)
                return steps(with_cmd(k, c.sub[1]));
            for (Conf& s : steps(with_cmd(k, c.sub[0]))) {
                if (s.error) {
                    out.push_back(s);
                    continue;
                }
                s.c = s.c.k == Cmd::Skip ? c.sub[1] : mk(Cmd::Seq, s.c, c.sub[1]);
                out.push_back(s);
            }
            return out;
        }
        case Cmd::Par: {
            for (int side = 0; side < 2; ++side)
                for (Conf& s : steps(with_cmd(k, c.sub[side]))) {
                    if (!s.error) {
                        Cmd a = side == 0 ? s.c : c.sub[0], b = side == 1 ? s.c : c.sub[1];
                        s.c = a.k == Cmd::Skip && b.k == Cmd::Skip ? Cmd{} : mk(Cmd::Par, a, b);
                    }
                    out.push_back(s);
                }
            return out;
        }
        case Cmd::If:
        case Cmd::While: {
            auto v = eval_bool(c.b, cfg, k.mem);
            if (!v)
                return {err()};
            if (c.k == Cmd::If)
                return {with_cmd(k, *v ? c.sub[0] : c.sub[1])};
            return {with_cmd(k, *v ? mk(Cmd::Seq, c.sub[0], c) : Cmd{})};
        }
        case Cmd::Resource: {
            for (Conf& s : steps(with_cmd(k, c.sub[0]))) {
                if (!s.error && s.c.k != Cmd::Skip) {
                    Cmd r = c;
                    r.sub = {s.c};
                    s.c = r;
                }
                out.push_back(s);
            }
            return out;
        }
        case Cmd::With: {
            auto it = std::find(k.held.begin(), k.held.end(), c.x);
            if (c.sub.empty()) {
                Conf s = with_cmd(k, Cmd{});
                s.held.erase(std::find(s.held.begin(), s.held.end(), c.x));
                return {s};
            }
            if (it != k.held.end())
                return out;
            Conf s = with_cmd(k, mk(Cmd::Seq, c.sub[0], release_marker(c.x)));
            s.held.push_back(c.x);
            return {s};
        }
        default: {
            MachineState ms;
            ms.mem = k.mem;
            for (const Instr& m : instrs_of(c, cfg))
                for (const MachineState& t : step(m, ms, cfg)) {
                    if (t.error) {
                        out.push_back(err());
                        continue;
                    }
                    Conf s = with_cmd(k, Cmd{});
                    s.mem = t.mem;
                    out.push_back(s);
                }
            return out;
        }
        }
    }
};

std::string cmd_key(const Cmd& c)
{
    if (c.atomic())
        return to_string(c);
    if (c.k == Cmd::With && c.sub.empty())
        return "release " + c.x;
    std::string s = std::to_string(static_cast<int>(c.k)) + "(" + c.x + ";" + to_string(c.b);
    for (const Cmd& x : c.sub)
        s += ";" + cmd_key(x);
    return s + ")";
}

std::string conf_key(const Conf& k)
{
    if (k.error)
        return "!";
    std::string s = cmd_key(k.c) + "|";
    for (int v : k.mem.stack)
        s += std::to_string(v) + ",";
    s += "|";
    for (int v : k.mem.heap)
        s += std::to_string(v) + ",";
    s += "|";
    std::vector<std::string> h = k.held;
    std::sort(h.begin(), h.end());
    for (const auto& r : h)
        s += r + ",";
    return s;
}

}  // namespace

std::set<int> interleave_final_states(World& w, const Cmd& c, int init)
{
    const StatefulSpace& space = w.S({}).S->space;
    Interleaver in{w.cfg};
    Conf start;
    start.c = c;
    start.mem = space.decode(init).mem;
    std::set<int> out;
    std::set<std::string> seen{conf_key(start)};
    std::deque<Conf> q{start};
    while (!q.empty()) {
        Conf k = q.front();
        q.pop_front();
        if (k.error) {
            out.insert(space.error_node());
            continue;
        }
        std::vector<Conf> next = in.steps(k);
        if (next.empty()) {
            MachineState ms;
            ms.mem = k.mem;
            out.insert(space.encode(ms));
        }
        for (Conf& s : next)
            if (seen.insert(conf_key(s)).second)
                q.push_back(std::move(s));
    }
    return out;
}

}  // namespace cobordcsl
