#include "cobordcsl/machine.hpp"

#include <algorithm>
#include <sstream>

namespace cobordcsl {

namespace {

const char* op_name(Expr::Kind k)
{
    switch (k) {
    case Expr::Add: return " + ";
    case Expr::Sub: return " - ";
    case Expr::Mul: return " * ";
    case Expr::Mod: return " % ";
    default: return "?";
    }
}

void add_unique(std::vector<std::string>& v, const std::string& x)
{
    if (std::find(v.begin(), v.end(), x) == v.end())
        v.push_back(x);
}

}  // namespace

BExpr negate(const BExpr& b)
{
    switch (b.k) {
    case BExpr::True: return {BExpr::False, {}, {}};
    case BExpr::False: return {BExpr::True, {}, {}};
    case BExpr::Not: return b.b[0];
    default: return {BExpr::Not, {}, {b}};
    }
}

std::string to_string(const Expr& e)
{
    switch (e.k) {
    case Expr::Const: return std::to_string(e.val);
    case Expr::Var:
    case Expr::Meta: return e.name;
    case Expr::Neg: return "-(" + to_string(e.args[0]) + ")";
    default: return "(" + to_string(e.args[0]) + op_name(e.k) + to_string(e.args[1]) + ")";
    }
}

std::string to_string(const BExpr& b)
{
    switch (b.k) {
    case BExpr::True: return "true";
    case BExpr::False: return "false";
    case BExpr::Eq: return to_string(b.e[0]) + " = " + to_string(b.e[1]);
    case BExpr::Ne: return to_string(b.e[0]) + " != " + to_string(b.e[1]);
    case BExpr::Lt: return to_string(b.e[0]) + " < " + to_string(b.e[1]);
    case BExpr::Le: return to_string(b.e[0]) + " <= " + to_string(b.e[1]);
    case BExpr::And: return "(" + to_string(b.b[0]) + " && " + to_string(b.b[1]) + ")";
    case BExpr::Or: return "(" + to_string(b.b[0]) + " || " + to_string(b.b[1]) + ")";
    case BExpr::Not: return "!(" + to_string(b.b[0]) + ")";
    }
    return "?";
}

void free_vars(const Expr& e, std::vector<std::string>& out)
{
    if (e.k == Expr::Var)
        add_unique(out, e.name);
    for (const Expr& a : e.args)
        free_vars(a, out);
}

void free_vars(const BExpr& b, std::vector<std::string>& out)
{
    for (const Expr& a : b.e)
        free_vars(a, out);
    for (const BExpr& a : b.b)
        free_vars(a, out);
}

void meta_vars(const Expr& e, std::vector<std::string>& out)
{
    if (e.k == Expr::Meta)
        add_unique(out, e.name);
    for (const Expr& a : e.args)
        meta_vars(a, out);
}

int ModelConfig::var_index(const std::string& x) const
{
    auto it = std::find(vars.begin(), vars.end(), x);
    return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
}

int ModelConfig::lock_index(const std::string& r) const
{
    auto it = std::find(locks.begin(), locks.end(), r);
    return it == locks.end() ? -1 : static_cast<int>(it - locks.begin());
}

int ModelConfig::loc_index(int v) const
{
    auto it = std::find(locs.begin(), locs.end(), v);
    return it == locs.end() ? -1 : static_cast<int>(it - locs.begin());
}

std::string ModelConfig::key_name(int key) const
{
    if (key < static_cast<int>(vars.size()))
        return vars[key];
    return "[" + std::to_string(locs[key - vars.size()]) + "]";
}

std::vector<int> default_locations(int vmin, int vmax, int n)
{
    std::vector<int> out;
    for (int v = std::max(vmin, 1); v <= vmax && static_cast<int>(out.size()) < n; ++v)
        out.push_back(v);
    return out;
}

namespace {

// Arithmetic is unbounded inside an expression; only the result is range checked.
std::optional<long long> eval_raw(const Expr& e, const ModelConfig& cfg, const MemoryState& mu, const MetaEnv* env)
{
    switch (e.k) {
    case Expr::Const: return e.val;
    case Expr::Var: {
        int i = cfg.var_index(e.name);
        if (i < 0 || mu.stack[i] == kUndef)
            return std::nullopt;
        return mu.stack[i];
    }
    case Expr::Meta:
        if (env)
            for (auto it = env->rbegin(); it != env->rend(); ++it)
                if (it->first == e.name)
                    return it->second;
        return std::nullopt;
    case Expr::Neg: {
        auto a = eval_raw(e.args[0], cfg, mu, env);
        if (!a)
            return std::nullopt;
        return -*a;
    }
    default: break;
    }
    auto a = eval_raw(e.args[0], cfg, mu, env);
    auto b = eval_raw(e.args[1], cfg, mu, env);
    if (!a || !b)
        return std::nullopt;
    switch (e.k) {
    case Expr::Add: return *a + *b;
    case Expr::Sub: return *a - *b;
    case Expr::Mul: return *a * *b;
    case Expr::Mod:
        if (*b == 0)
            return std::nullopt;
        return ((*a % *b) + *b) % *b;
    default: return std::nullopt;
    }
}

}  // namespace

std::optional<int> eval_expr(const Expr& e, const ModelConfig& cfg, const MemoryState& mu, const MetaEnv* env)
{
    auto v = eval_raw(e, cfg, mu, env);
    if (!v || *v < cfg.vmin || *v > cfg.vmax)
        return std::nullopt;
    return static_cast<int>(*v);
}

std::optional<bool> eval_bool(const BExpr& b, const ModelConfig& cfg, const MemoryState& mu, const MetaEnv* env)
{
    switch (b.k) {
    case BExpr::True: return true;
    case BExpr::False: return false;
    case BExpr::Not: {
        auto x = eval_bool(b.b[0], cfg, mu, env);
        if (!x)
            return std::nullopt;
        return !*x;
    }
    case BExpr::And:
    case BExpr::Or: {
        auto x = eval_bool(b.b[0], cfg, mu, env);
        auto y = eval_bool(b.b[1], cfg, mu, env);
        if (!x || !y)
            return std::nullopt;
        return b.k == BExpr::And ? (*x && *y) : (*x || *y);
    }
    default: break;
    }
    auto x = eval_expr(b.e[0], cfg, mu, env);
    auto y = eval_expr(b.e[1], cfg, mu, env);
    if (!x || !y)
        return std::nullopt;
    switch (b.k) {
    case BExpr::Eq: return *x == *y;
    case BExpr::Ne: return *x != *y;
    case BExpr::Lt: return *x < *y;
    case BExpr::Le: return *x <= *y;
    default: return std::nullopt;
    }
}

std::string to_string(const Instr& m)
{
    switch (m.k) {
    case Instr::Assign: return m.x + " := " + to_string(m.e);
    case Instr::Load: return m.x + " := [" + to_string(m.e) + "]";
    case Instr::Store: return "[" + to_string(m.e) + "] := " + to_string(m.e2);
    case Instr::Test: return "test(" + to_string(m.b) + ")";
    case Instr::Nop: return "nop";
    case Instr::Alloc: return m.x + " := alloc(" + to_string(m.e) + ", " + std::to_string(m.loc) + ")";
    case Instr::Dispose: return "dispose(" + to_string(m.e) + ")";
    case Instr::P: return "P(" + m.lock + ")";
    case Instr::V: return "V(" + m.lock + ")";
    }
    return "?";
}

int Alphabet::intern(const Instr& m)
{
    std::string k = to_string(m);
    auto it = ids.find(k);
    if (it != ids.end())
        return it->second;
    instrs.push_back(m);
    ids.emplace(k, size() - 1);
    return size() - 1;
}

int Alphabet::find(const Instr& m) const
{
    auto it = ids.find(to_string(m));
    return it == ids.end() ? -1 : it->second;
}

namespace {

bool meets(const std::vector<int>& a, const std::vector<int>& b)
{
    for (int x : a)
        if (std::find(b.begin(), b.end(), x) != b.end())
            return true;
    return false;
}

void sort_unique(std::vector<int>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

bool independent(const Footprint& a, const Footprint& b)
{
    return !meets(a.rd, b.wr) && !meets(a.wr, b.wr) && !meets(b.rd, a.wr) && !meets(a.locks, b.locks) &&
           !meets(a.alloc, b.alloc);
}

std::vector<MachineState> step(const Instr& m, const MachineState& s, const ModelConfig& cfg)
{
    std::vector<MachineState> out;
    MachineState err;
    err.error = true;
    if (s.error)
        return out;
    const MemoryState& mu = s.mem;
    auto setvar = [&](const std::string& x, int v) {
        MachineState t = s;
        t.mem.stack[cfg.var_index(x)] = v;
        return t;
    };
    switch (m.k) {
    case Instr::Assign: {
        auto v = eval_expr(m.e, cfg, mu);
        if (!v || cfg.var_index(m.x) < 0)
            out.push_back(err);
        else
            out.push_back(setvar(m.x, *v));
        break;
    }
    case Instr::Load: {
        auto a = eval_expr(m.e, cfg, mu);
        int j = a ? cfg.loc_index(*a) : -1;
        if (j < 0 || mu.heap[j] == kUndef || cfg.var_index(m.x) < 0)
            out.push_back(err);
        else
            out.push_back(setvar(m.x, mu.heap[j]));
        break;
    }
    case Instr::Store: {
        auto a = eval_expr(m.e, cfg, mu);
        auto v = eval_expr(m.e2, cfg, mu);
        int j = a ? cfg.loc_index(*a) : -1;
        if (j < 0 || mu.heap[j] == kUndef || !v) {
            out.push_back(err);
        } else {
            MachineState t = s;
            t.mem.heap[j] = *v;
            out.push_back(t);
        }
        break;
    }
    case Instr::Test: {
        auto b = eval_bool(m.b, cfg, mu);
        if (!b)
            out.push_back(err);
        else if (*b)
            out.push_back(s);
        break;
    }
    case Instr::Nop: out.push_back(s); break;
    case Instr::Alloc: {
        int j = cfg.loc_index(m.loc);
        auto v = eval_expr(m.e, cfg, mu);
        if (j < 0 || mu.heap[j] != kUndef)
            break;
        if (!v || cfg.var_index(m.x) < 0 || !cfg.in_range(m.loc)) {
            out.push_back(err);
            break;
        }
        MachineState t = setvar(m.x, m.loc);
        t.mem.heap[j] = *v;
        out.push_back(t);
        break;
    }
    case Instr::Dispose: {
        auto a = eval_expr(m.e, cfg, mu);
        int j = a ? cfg.loc_index(*a) : -1;
        if (j < 0 || mu.heap[j] == kUndef) {
            out.push_back(err);
        } else {
            MachineState t = s;
            t.mem.heap[j] = kUndef;
            out.push_back(t);
        }
        break;
    }
    case Instr::P: {
        int r = cfg.lock_index(m.lock);
        if (r >= 0 && !(s.locks >> r & 1u)) {
            MachineState t = s;
            t.locks |= 1u << r;
            out.push_back(t);
        }
        break;
    }
    case Instr::V: {
        int r = cfg.lock_index(m.lock);
        if (r >= 0 && (s.locks >> r & 1u)) {
            MachineState t = s;
            t.locks &= ~(1u << r);
            out.push_back(t);
        }
        break;
    }
    }
    return out;
}

Footprint footprint(const Instr& m, const MachineState& s, const ModelConfig& cfg)
{
    Footprint fp;
    auto vars_of = [&](const auto& x) {
        std::vector<std::string> names;
        free_vars(x, names);
        for (const auto& n : names) {
            int i = cfg.var_index(n);
            if (i >= 0)
                fp.rd.push_back(i);
        }
    };
    auto loc_key = [&](const Expr& e) {
        auto a = eval_expr(e, cfg, s.mem);
        int j = a ? cfg.loc_index(*a) : -1;
        return j < 0 ? -1 : cfg.loc_key(j);
    };
    switch (m.k) {
    case Instr::Assign:
        vars_of(m.e);
        if (cfg.var_index(m.x) >= 0)
            fp.wr.push_back(cfg.var_index(m.x));
        break;
    case Instr::Load: {
        vars_of(m.e);
        int k = loc_key(m.e);
        if (k >= 0)
            fp.rd.push_back(k);
        if (cfg.var_index(m.x) >= 0)
            fp.wr.push_back(cfg.var_index(m.x));
        break;
    }
    case Instr::Store: {
        vars_of(m.e);
        vars_of(m.e2);
        int k = loc_key(m.e);
        if (k >= 0)
            fp.wr.push_back(k);
        break;
    }
    case Instr::Test: vars_of(m.b); break;
    case Instr::Nop: break;
    case Instr::Alloc: {
        vars_of(m.e);
        if (cfg.var_index(m.x) >= 0)
            fp.wr.push_back(cfg.var_index(m.x));
        int j = cfg.loc_index(m.loc);
        if (j >= 0)
            fp.alloc.push_back(cfg.loc_key(j));
        break;
    }
    case Instr::Dispose: {
        vars_of(m.e);
        int k = loc_key(m.e);
        if (k >= 0)
            fp.alloc.push_back(k);
        break;
    }
    case Instr::P:
    case Instr::V:
        if (cfg.lock_index(m.lock) >= 0)
            fp.locks.push_back(cfg.lock_index(m.lock));
        break;
    }
    sort_unique(fp.rd);
    sort_unique(fp.wr);
    return fp;
}

int num_lock_instrs(const ModelConfig& cfg)
{
    return 1 + 2 * static_cast<int>(cfg.locks.size()) + 2 * static_cast<int>(cfg.locs.size());
}

int lock_instr_id(const LockInstr& li, const ModelConfig& cfg)
{
    int nl = static_cast<int>(cfg.locks.size());
    switch (li.k) {
    case LockInstr::Tau: return 0;
    case LockInstr::P: return 1 + 2 * li.arg;
    case LockInstr::V: return 2 + 2 * li.arg;
    case LockInstr::Alloc: return 1 + 2 * nl + 2 * li.arg;
    case LockInstr::Dispose: return 2 + 2 * nl + 2 * li.arg;
    }
    return 0;
}

LockInstr lock_instr_of(int id, const ModelConfig& cfg)
{
    int nl = static_cast<int>(cfg.locks.size());
    if (id == 0)
        return {};
    if (id <= 2 * nl)
        return {(id - 1) % 2 == 0 ? LockInstr::P : LockInstr::V, (id - 1) / 2};
    int j = id - 1 - 2 * nl;
    return {j % 2 == 0 ? LockInstr::Alloc : LockInstr::Dispose, j / 2};
}

std::string to_string(const LockInstr& li, const ModelConfig& cfg)
{
    switch (li.k) {
    case LockInstr::Tau: return "tau";
    case LockInstr::P: return "P(" + cfg.locks[li.arg] + ")";
    case LockInstr::V: return "V(" + cfg.locks[li.arg] + ")";
    case LockInstr::Alloc: return "alloc(" + std::to_string(cfg.locs[li.arg]) + ")";
    case LockInstr::Dispose: return "dispose(" + std::to_string(cfg.locs[li.arg]) + ")";
    }
    return "?";
}

Footprint lock_footprint(const LockInstr& li, const ModelConfig& cfg)
{
    Footprint fp;
    if (li.k == LockInstr::P || li.k == LockInstr::V)
        fp.locks.push_back(li.arg);
    if (li.k == LockInstr::Alloc || li.k == LockInstr::Dispose)
        fp.alloc.push_back(cfg.loc_key(li.arg));
    return fp;
}

LockInstr erase_instr(const Instr& m, const MachineState& s, const ModelConfig& cfg)
{
    switch (m.k) {
    case Instr::P: return {LockInstr::P, cfg.lock_index(m.lock)};
    case Instr::V: return {LockInstr::V, cfg.lock_index(m.lock)};
    case Instr::Alloc: return {LockInstr::Alloc, cfg.loc_index(m.loc)};
    case Instr::Dispose: {
        auto a = eval_expr(m.e, cfg, s.mem);
        int j = a ? cfg.loc_index(*a) : -1;
        if (j < 0)
            return {};
        return {LockInstr::Dispose, j};
    }
    default: return {};
    }
}

std::vector<LockInstr> lock_instrs_of(const Instr& m, const ModelConfig& cfg)
{
    switch (m.k) {
    case Instr::P: return {{LockInstr::P, cfg.lock_index(m.lock)}};
    case Instr::V: return {{LockInstr::V, cfg.lock_index(m.lock)}};
    case Instr::Alloc: return {{LockInstr::Alloc, cfg.loc_index(m.loc)}};
    case Instr::Dispose: {
        std::vector<LockInstr> out{{}};
        for (int j = 0; j < static_cast<int>(cfg.locs.size()); ++j)
            out.push_back({LockInstr::Dispose, j});
        return out;
    }
    default: return {{}};
    }
}

std::uint64_t edge_key(int src, int tgt, int label)
{
    return (static_cast<std::uint64_t>(src) << 42) | (static_cast<std::uint64_t>(tgt) << 21) |
           static_cast<std::uint64_t>(label);
}

TileIndex::TileIndex(const AsyncGraph& g)
{
    for (int t = 0; t < g.num_tiles(); ++t)
        by_top[(static_cast<std::uint64_t>(g.tiles[t].top[0]) << 32) | static_cast<std::uint32_t>(g.tiles[t].top[1])]
            .push_back(t);
}

int TileIndex::find(const AsyncGraph& g, std::array<int, 2> top, std::array<int, 2> bot) const
{
    auto it = by_top.find((static_cast<std::uint64_t>(top[0]) << 32) | static_cast<std::uint32_t>(top[1]));
    if (it == by_top.end())
        return -1;
    for (int t : it->second)
        if (g.tiles[t].bot == bot)
            return t;
    return -1;
}

void add_independent_tiles(AsyncGraph& g, const std::vector<int>& label, const std::vector<Footprint>& edge_fp)
{
    std::vector<std::vector<int>> out(g.n);
    for (int e = 0; e < g.num_edges(); ++e)
        out[g.edges[e].src].push_back(e);
    for (int s = 0; s < g.n; ++s) {
        const auto& os = out[s];
        for (size_t i = 0; i < os.size(); ++i)
            for (size_t j = i; j < os.size(); ++j) {
                int x = os[i], y = os[j];
                if (!independent(edge_fp[x], edge_fp[y]))
                    continue;
                for (int yp : out[g.edges[x].tgt]) {
                    if (label[yp] != label[y])
                        continue;
                    for (int xp : out[g.edges[y].tgt]) {
                        if (label[xp] != label[x] || g.edges[xp].tgt != g.edges[yp].tgt)
                            continue;
                        if (x == y && yp > xp)
                            continue;  // the partner is generated from the other order
                        g.add_square({x, yp}, {y, xp});
                    }
                }
            }
    }
}

StatefulSpace::StatefulSpace(const ModelConfig& c) : cfg(c)
{
    nv = static_cast<int>(cfg.vars.size());
    nl = static_cast<int>(cfg.locs.size());
    nlocks = static_cast<int>(cfg.locks.size());
    radix = cfg.nvals() + 1;
    double total = 1;
    for (int i = 0; i < nv + nl; ++i)
        total *= radix;
    total *= static_cast<double>(1u << nlocks);
    if (total + 1 > static_cast<double>(cfg.node_cap))
        throw CapacityError("stateful model needs " + std::to_string(static_cast<long long>(total) + 1) +
                            " nodes, cap is " + std::to_string(cfg.node_cap));
    count = static_cast<std::size_t>(total);
}

MachineState StatefulSpace::decode(int id) const
{
    MachineState s;
    if (id == error_node()) {
        s.error = true;
        return s;
    }
    s.locks = static_cast<std::uint32_t>(id) & ((1u << nlocks) - 1);
    int rest = id >> nlocks;
    s.mem.stack.resize(nv);
    s.mem.heap.resize(nl);
    for (int j = nl - 1; j >= 0; --j) {
        int d = rest % radix;
        rest /= radix;
        s.mem.heap[j] = d == 0 ? kUndef : cfg.vmin + d - 1;
    }
    for (int i = nv - 1; i >= 0; --i) {
        int d = rest % radix;
        rest /= radix;
        s.mem.stack[i] = d == 0 ? kUndef : cfg.vmin + d - 1;
    }
    return s;
}

int StatefulSpace::encode(const MachineState& s) const
{
    if (s.error)
        return error_node();
    int id = 0;
    for (int i = 0; i < nv; ++i)
        id = id * radix + (s.mem.stack[i] == kUndef ? 0 : s.mem.stack[i] - cfg.vmin + 1);
    for (int j = 0; j < nl; ++j)
        id = id * radix + (s.mem.heap[j] == kUndef ? 0 : s.mem.heap[j] - cfg.vmin + 1);
    return (id << nlocks) | static_cast<int>(s.locks);
}

std::string StatefulSpace::label(int id) const
{
    if (id == error_node())
        return "Error";
    MachineState s = decode(id);
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (int i = 0; i < nv; ++i)
        if (s.mem.stack[i] != kUndef) {
            os << (first ? "" : ", ") << cfg.vars[i] << "=" << s.mem.stack[i];
            first = false;
        }
    os << " |";
    for (int j = 0; j < nl; ++j)
        if (s.mem.heap[j] != kUndef)
            os << " " << cfg.locs[j] << "->" << s.mem.heap[j];
    os << " | L={";
    first = true;
    for (int r = 0; r < nlocks; ++r)
        if (s.locks >> r & 1u) {
            os << (first ? "" : ",") << cfg.locks[r];
            first = false;
        }
    os << "}}";
    return os.str();
}

int StatefulModel::find_edge(int src, int tgt, int instr) const
{
    auto it = edge_index.find(edge_key(src, tgt, instr));
    return it == edge_index.end() ? -1 : it->second;
}

StatefulModel build_stateful(const ModelConfig& cfg, const Alphabet& alpha)
{
    StatefulModel sm{StatefulSpace(cfg), alpha, {}, {}};
    AsyncGraph& g = sm.model.pg.g;
    g.n = static_cast<int>(sm.space.count) + 1;
    sm.model.pg.point = sm.space.error_node();
    std::vector<Footprint> fps;
    for (int s = 0; s < sm.space.error_node(); ++s) {
        MachineState st = sm.space.decode(s);
        for (int m = 0; m < alpha.size(); ++m) {
            auto succ = step(alpha.instrs[m], st, cfg);
            if (succ.empty())
                continue;
            Footprint fp = footprint(alpha.instrs[m], st, cfg);
            for (const MachineState& t : succ) {
                int tgt = sm.space.encode(t);
                int e = g.add_edge(s, tgt);
                sm.model.edge_label.push_back(m);
                sm.edge_index.emplace(edge_key(s, tgt, m), e);
                fps.push_back(fp);
            }
        }
    }
    add_independent_tiles(g, sm.model.edge_label, fps);
    return sm;
}

int StatelessModel::find_edge(int src, int tgt, int li) const
{
    auto it = edge_index.find(edge_key(src, tgt, li));
    return it == edge_index.end() ? -1 : it->second;
}

std::string StatelessModel::label(int id) const
{
    if (id == error_node())
        return "Error";
    std::string s = "{";
    bool first = true;
    for (int r = 0; r < static_cast<int>(cfg.locks.size()); ++r)
        if (id >> r & 1) {
            s += (first ? "" : ",") + cfg.locks[r];
            first = false;
        }
    return s + "}";
}

StatelessModel build_stateless(const ModelConfig& cfg)
{
    StatelessModel sl{cfg, {}, {}};
    int nlocks = static_cast<int>(cfg.locks.size());
    int nsets = 1 << nlocks;
    AsyncGraph& g = sl.model.pg.g;
    g.n = nsets + 1;
    sl.model.pg.point = nsets;
    std::vector<Footprint> fps;
    auto add = [&](int s, int t, int li) {
        int e = g.add_edge(s, t);
        sl.model.edge_label.push_back(li);
        sl.edge_index.emplace(edge_key(s, t, li), e);
        fps.push_back(lock_footprint(lock_instr_of(li, cfg), cfg));
    };
    for (int L = 0; L < nsets; ++L)
        for (int li = 0; li < num_lock_instrs(cfg); ++li) {
            LockInstr x = lock_instr_of(li, cfg);
            switch (x.k) {
            case LockInstr::P:
                if (!(L >> x.arg & 1))
                    add(L, L | 1 << x.arg, li);
                break;
            case LockInstr::V:
                if (L >> x.arg & 1)
                    add(L, L & ~(1 << x.arg), li);
                break;
            default: add(L, L, li); break;
            }
            add(L, nsets, li);
        }
    add_independent_tiles(g, sl.model.edge_label, fps);
    return sl;
}

namespace {

Model expand(const Model& m, const std::vector<Pol>& pols)
{
    Model r;
    Product p = product(m.pg.g, omega(pols));
    r.pg.g = std::move(p.g);
    r.pg.point = m.pg.point;
    r.players = static_cast<int>(pols.size());
    r.edge_label.reserve(r.pg.g.edges.size());
    for (int e = 0; e < r.pg.g.num_edges(); ++e)
        r.edge_label.push_back(m.edge_label[e / r.players]);
    return r;
}

}  // namespace

Model two_player(const Model& m) { return expand(m, {Pol::C, Pol::F}); }

Model three_player(const Model& m) { return expand(m, {Pol::C1, Pol::C2, Pol::F}); }

GraphHom frame_embedding(const Model& plain)
{
    GraphHom h = identity(plain.pg.g);
    for (int& e : h.edge)
        e = 2 * e + 1;
    for (int& t : h.tile)
        t = 4 * t + 3;
    return h;
}

}  // namespace cobordcsl
