#include "cobordcsl/seplogic.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace cobordcsl {

std::string to_string(const Perm& p)
{
    if (p.den == 1)
        return std::to_string(p.num);
    return std::to_string(p.num) + "/" + std::to_string(p.den);
}

int perm_units(const Perm& p, int k)
{
    int U = 1 << k;
    if (p.den <= 0 || p.num <= 0 || (p.num * U) % p.den != 0)
        return -1;
    int u = p.num * U / p.den;
    return u >= 1 && u <= U ? u : -1;
}

std::optional<Perm> perm_add(const Perm& a, const Perm& b)
{
    long long num = static_cast<long long>(a.num) * b.den + static_cast<long long>(b.num) * a.den;
    long long den = static_cast<long long>(a.den) * b.den;
    if (num > den)
        return std::nullopt;
    long long g = std::gcd(num, den);
    return Perm{static_cast<int>(num / g), static_cast<int>(den / g)};
}

std::string to_string(const Pred& p)
{
    switch (p.k) {
    case Pred::Emp: return "emp";
    case Pred::True: return "true";
    case Pred::False: return "false";
    case Pred::Star: return "(" + to_string(p.sub[0]) + " * " + to_string(p.sub[1]) + ")";
    case Pred::And: return "(" + to_string(p.sub[0]) + " /\\ " + to_string(p.sub[1]) + ")";
    case Pred::Or: return "(" + to_string(p.sub[0]) + " \\/ " + to_string(p.sub[1]) + ")";
    case Pred::Not: return "~" + to_string(p.sub[0]);
    case Pred::Own: return "own(" + p.name + ", " + to_string(p.p) + ")";
    case Pred::PointsTo: return "(" + to_string(p.e1) + " |->" + to_string(p.p) + " " + to_string(p.e2) + ")";
    case Pred::Eq: return "(" + to_string(p.e1) + " = " + to_string(p.e2) + ")";
    case Pred::Exists: return "(exists " + p.name + ". " + to_string(p.sub[0]) + ")";
    case Pred::Forall: return "(forall " + p.name + ". " + to_string(p.sub[0]) + ")";
    }
    return "?";
}

void pred_vars(const Pred& p, std::vector<std::string>& vars)
{
    if (p.k == Pred::Own && std::find(vars.begin(), vars.end(), p.name) == vars.end())
        vars.push_back(p.name);
    if (p.k == Pred::Eq || p.k == Pred::PointsTo) {
        free_vars(p.e1, vars);
        free_vars(p.e2, vars);
    }
    for (const Pred& q : p.sub)
        pred_vars(q, vars);
}

void pred_locations(const Pred& p, const ModelConfig& cfg, std::vector<int>& locs)
{
    if (p.k == Pred::PointsTo) {
        std::vector<std::string> metas;
        meta_vars(p.e1, metas);
        MemoryState mu{std::vector<int>(cfg.vars.size(), kUndef), std::vector<int>(cfg.locs.size(), kUndef)};
        if (metas.empty()) {
            auto v = eval_expr(p.e1, cfg, mu);
            if (v && cfg.loc_index(*v) >= 0)
                locs.push_back(*v);
        } else {
            for (int v : cfg.locs)
                locs.push_back(v);
        }
    }
    for (const Pred& q : p.sub)
        pred_locations(q, cfg, locs);
}

LUniverse::LUniverse(const ModelConfig& c, std::vector<int> ks) : cfg(c), keys(std::move(ks))
{
    U = 1 << cfg.perm_k;
    V = cfg.nvals();
    B = V * U + 1;
    double n = 1;
    for (size_t i = 0; i < keys.size(); ++i)
        n *= B;
    if (n > 4e7)
        throw CapacityError("logical-state universe too large (" + std::to_string(static_cast<long long>(n)) + ")");
    N = static_cast<std::size_t>(n);
}

int LUniverse::key_slot(int cfg_key) const
{
    auto it = std::find(keys.begin(), keys.end(), cfg_key);
    return it == keys.end() ? -1 : static_cast<int>(it - keys.begin());
}

std::vector<int> LUniverse::digits(std::size_t idx) const
{
    std::vector<int> d(keys.size());
    for (size_t i = 0; i < keys.size(); ++i) {
        d[i] = static_cast<int>(idx % B);
        idx /= B;
    }
    return d;
}

std::size_t LUniverse::index(const std::vector<int>& ds) const
{
    std::size_t idx = 0;
    for (size_t i = keys.size(); i-- > 0;)
        idx = idx * B + ds[i];
    return idx;
}

std::string LUniverse::label(std::size_t idx) const
{
    auto d = digits(idx);
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (int i = 0; i < K(); ++i) {
        if (!d[i])
            continue;
        int u = digit_units(d[i]);
        int g = std::gcd(u, U);
        os << (first ? "" : ", ") << cfg.key_name(keys[i]) << "->(" << digit_value(d[i]) << ","
           << (u == U ? std::string("1") : std::to_string(u / g) + "/" + std::to_string(U / g)) << ")";
        first = false;
    }
    os << "]";
    return os.str();
}

std::optional<LState> sep_product(const LUniverse& u, const LState& a, const LState& b)
{
    LState r(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i] || !b[i]) {
            r[i] = a[i] ? a[i] : b[i];
            continue;
        }
        if (u.digit_value(a[i]) != u.digit_value(b[i]))
            return std::nullopt;
        int units = u.digit_units(a[i]) + u.digit_units(b[i]);
        if (units > u.U)
            return std::nullopt;
        r[i] = u.digit(u.digit_value(a[i]), units);
    }
    return r;
}

namespace {

std::string env_key(const MetaEnv& env)
{
    std::string s;
    for (const auto& [n, v] : env)
        s += n + "=" + std::to_string(v) + ";";
    return s;
}

Bitset empty_set(std::size_t n) { return Bitset((n + 63) / 64, 0); }
void set_bit(Bitset& b, std::size_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); }

bool closed(const Expr& e)
{
    std::vector<std::string> v;
    free_vars(e, v);
    return v.empty();
}

}  // namespace

const Bitset& Satisfier::sat(const Pred& p)
{
    std::string key = to_string(p);
    auto it = cache_.find(key);
    if (it != cache_.end())
        return it->second;
    MetaEnv env;
    Bitset b = eval(p, env);
    return cache_.emplace(key, std::move(b)).first->second;
}

bool Satisfier::entails(const Pred& a, const Pred& b)
{
    const Bitset& x = sat(a);
    const Bitset& y = sat(b);
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] & ~y[i])
            return false;
    return true;
}

Bitset Satisfier::star(const Bitset& a, const Bitset& b)
{
    const LUniverse& u = u_;
    Bitset r = empty_set(u.N);
    bool ea = std::all_of(a.begin(), a.end(), [](std::uint64_t w) { return w == 0; });
    bool eb = std::all_of(b.begin(), b.end(), [](std::uint64_t w) { return w == 0; });
    if (ea || eb)
        return r;
    int K = u.K();
    std::vector<std::size_t> pw(K);
    for (int i = 0; i < K; ++i)
        pw[i] = i ? pw[i - 1] * u.B : 1;
    std::vector<std::vector<std::pair<int, int>>> opts(K);
    for (std::size_t s = 0; s < u.N; ++s) {
        auto d = u.digits(s);
        for (int i = 0; i < K; ++i) {
            opts[i].clear();
            if (!d[i]) {
                opts[i].push_back({0, 0});
                continue;
            }
            int v = u.digit_value(d[i]), un = u.digit_units(d[i]);
            opts[i].push_back({d[i], 0});
            opts[i].push_back({0, d[i]});
            for (int x = 1; x < un; ++x)
                opts[i].push_back({u.digit(v, x), u.digit(v, un - x)});
        }
        bool found = false;
        std::function<void(int, std::size_t, std::size_t)> rec = [&](int i, std::size_t l, std::size_t rr) {
            if (found)
                return;
            if (i == K) {
                found = bit(a, l) && bit(b, rr);
                return;
            }
            for (auto [x, y] : opts[i]) {
                rec(i + 1, l + x * pw[i], rr + y * pw[i]);
                if (found)
                    return;
            }
        };
        rec(0, 0, 0);
        if (found)
            set_bit(r, s);
    }
    return r;
}

Bitset Satisfier::eval(const Pred& p, MetaEnv& env)
{
    const LUniverse& u = u_;
    std::string key = to_string(p) + "|" + env_key(env);
    auto it = cache_.find(key);
    if (it != cache_.end())
        return it->second;
    Bitset r = empty_set(u.N);
    auto fill_if = [&](auto pred) {
        for (std::size_t s = 0; s < u.N; ++s)
            if (pred(s))
                set_bit(r, s);
    };
    switch (p.k) {
    case Pred::Emp: set_bit(r, 0); break;
    case Pred::True: fill_if([](std::size_t) { return true; }); break;
    case Pred::False: break;
    case Pred::Star: r = star(eval(p.sub[0], env), eval(p.sub[1], env)); break;
    case Pred::And:
    case Pred::Or: {
        Bitset a = eval(p.sub[0], env), b = eval(p.sub[1], env);
        for (size_t i = 0; i < r.size(); ++i)
            r[i] = p.k == Pred::And ? (a[i] & b[i]) : (a[i] | b[i]);
        break;
    }
    case Pred::Not: {
        Bitset a = eval(p.sub[0], env);
        fill_if([&](std::size_t s) { return !bit(a, s); });
        break;
    }
    case Pred::Own: {
        int vi = u.cfg.var_index(p.name);
        int slot = vi < 0 ? -1 : u.key_slot(vi);
        int units = perm_units(p.p, u.cfg.perm_k);
        if (units < 0)
            throw PredError("permission " + to_string(p.p) + " is not representable");
        if (slot < 0)
            break;
        std::size_t pw = 1;
        for (int i = 0; i < slot; ++i)
            pw *= u.B;
        for (int v = u.cfg.vmin; v <= u.cfg.vmax; ++v)
            set_bit(r, u.digit(v, units) * pw);
        break;
    }
    case Pred::PointsTo: {
        if (!closed(p.e1) || !closed(p.e2))
            throw PredError("points-to needs closed expressions: " + to_string(p));
        int units = perm_units(p.p, u.cfg.perm_k);
        if (units < 0)
            throw PredError("permission " + to_string(p.p) + " is not representable");
        MemoryState mu{std::vector<int>(u.cfg.vars.size(), kUndef), std::vector<int>(u.cfg.locs.size(), kUndef)};
        auto a = eval_expr(p.e1, u.cfg, mu, &env);
        auto w = eval_expr(p.e2, u.cfg, mu, &env);
        if (!a || !w)
            break;
        int j = u.cfg.loc_index(*a);
        int slot = j < 0 ? -1 : u.key_slot(u.cfg.loc_key(j));
        if (slot < 0)
            break;
        std::size_t pw = 1;
        for (int i = 0; i < slot; ++i)
            pw *= u.B;
        set_bit(r, u.digit(*w, units) * pw);
        break;
    }
    case Pred::Eq: {
        std::vector<std::string> fv;
        free_vars(p.e1, fv);
        free_vars(p.e2, fv);
        std::vector<int> slots;
        for (const auto& x : fv) {
            int vi = u.cfg.var_index(x);
            int slot = vi < 0 ? -1 : u.key_slot(vi);
            if (slot < 0)
                return cache_.emplace(key, r).first->second;
            slots.push_back(slot);
        }
        MemoryState mu{std::vector<int>(u.cfg.vars.size(), kUndef), std::vector<int>(u.cfg.locs.size(), kUndef)};
        fill_if([&](std::size_t s) {
            auto d = u.digits(s);
            for (size_t i = 0; i < fv.size(); ++i) {
                if (!d[slots[i]])
                    return false;
                mu.stack[u.cfg.var_index(fv[i])] = u.digit_value(d[slots[i]]);
            }
            auto x = eval_expr(p.e1, u.cfg, mu, &env);
            auto y = eval_expr(p.e2, u.cfg, mu, &env);
            return x && y && *x == *y;
        });
        break;
    }
    case Pred::Exists:
    case Pred::Forall: {
        bool ex = p.k == Pred::Exists;
        if (!ex)
            fill_if([](std::size_t) { return true; });
        for (int v = u.cfg.vmin; v <= u.cfg.vmax; ++v) {
            env.push_back({p.name, v});
            Bitset b = eval(p.sub[0], env);
            env.pop_back();
            for (size_t i = 0; i < r.size(); ++i)
                r[i] = ex ? (r[i] | b[i]) : (r[i] & b[i]);
        }
        if (!ex && u.N % 64)
            r.back() &= (std::uint64_t{1} << (u.N % 64)) - 1;
        break;
    }
    }
    return cache_.emplace(key, r).first->second;
}

int LockContext::find(const std::string& r) const
{
    auto it = std::find(locks.begin(), locks.end(), r);
    return it == locks.end() ? -1 : static_cast<int>(it - locks.begin());
}

LockContext LockContext::with(const std::string& r, const Pred& I) const
{
    LockContext c = *this;
    c.locks.push_back(r);
    c.inv.push_back(I);
    return c;
}

LockContext LockContext::without(const std::string& r) const
{
    LockContext c;
    for (size_t i = 0; i < locks.size(); ++i)
        if (locks[i] != r) {
            c.locks.push_back(locks[i]);
            c.inv.push_back(inv[i]);
        }
    return c;
}

std::string LockContext::to_string() const
{
    std::string s;
    for (size_t i = 0; i < locks.size(); ++i)
        s += (i ? ", " : "") + locks[i] + ": " + cobordcsl::to_string(inv[i]);
    return s;
}

namespace {

std::string pack(const SepState& s)
{
    std::string k;
    k.reserve(s.val.size() * 2 + s.units.size() + s.holder.size());
    for (int v : s.val) {
        int x = v == kUndef ? 0xffff : v + 0x8000;
        k.push_back(static_cast<char>(x & 0xff));
        k.push_back(static_cast<char>(x >> 8));
    }
    for (auto u : s.units)
        k.push_back(static_cast<char>(u));
    for (auto h : s.holder)
        k.push_back(static_cast<char>(h));
    return k;
}

}  // namespace

int SepModel::find(const SepState& s) const
{
    auto it = index.find(pack(s));
    return it == index.end() ? -1 : it->second;
}

std::size_t SepModel::party_lstate(const SepState& s, int party) const
{
    std::size_t idx = 0;
    for (int i = lu.K(); i-- > 0;) {
        int u = s.units[i * parties + party];
        idx = idx * lu.B + (u ? lu.digit(s.val[i], u) : 0);
    }
    return idx;
}

std::size_t SepModel::party_lstate(int node, int party) const { return party_lstate(states[node], party); }

MachineState SepModel::erase(const SepState& s) const
{
    MachineState m;
    m.mem.stack.assign(mcfg.vars.size(), kUndef);
    m.mem.heap.assign(mcfg.locs.size(), kUndef);
    for (int i = 0; i < lu.K(); ++i) {
        if (s.val[i] == kUndef)
            continue;
        int key = lu.keys[i];
        if (key < static_cast<int>(mcfg.vars.size()))
            m.mem.stack[key] = s.val[i];
        else
            m.mem.heap[key - mcfg.vars.size()] = s.val[i];
    }
    for (size_t r = 0; r < s.holder.size(); ++r)
        if (s.holder[r] >= 0)
            m.locks |= 1u << r;
    return m;
}

Pol SepModel::player_pol(int player) const
{
    if (players == 2)
        return player == 0 ? Pol::C : Pol::F;
    return player == 0 ? Pol::C1 : player == 1 ? Pol::C2 : Pol::F;
}

int SepModel::player_of(Pol p) const
{
    for (int x = 0; x < players; ++x)
        if (player_pol(x) == p)
            return x;
    return -1;
}

std::string SepModel::label(int node) const
{
    const SepState& s = states[node];
    static const char* two[] = {"C", "F"};
    static const char* three[] = {"C1", "C2", "F"};
    const char** names = players == 2 ? two : three;
    std::ostringstream os;
    os << "(";
    for (int x = 0; x < players; ++x) {
        if (x == players - 1) {
            os << "; [";
            for (size_t r = 0; r < s.holder.size(); ++r) {
                os << (r ? ", " : "") << gamma.locks[r] << ":";
                if (s.holder[r] >= 0)
                    os << names[s.holder[r]];
                else
                    os << lu.label(party_lstate(s, players + static_cast<int>(r)));
            }
            os << "]; ";
        } else if (x) {
            os << ", ";
        }
        os << lu.label(party_lstate(s, x));
    }
    os << ")";
    return os.str();
}

SepValidity sep_state_valid(const SepModel& m, Satisfier& sat, const SepState& s)
{
    SepValidity v;
    for (int i = 0; i < m.lu.K(); ++i) {
        int total = 0;
        for (int p = 0; p < m.parties; ++p)
            total += s.units[i * m.parties + p];
        if (total > m.lu.U) {
            v.ok = false;
            v.reason = "permissions on " + m.lu.cfg.key_name(m.lu.keys[i]) + " exceed 1";
            return v;
        }
        if ((total == 0) != (s.val[i] == kUndef)) {
            v.ok = false;
            v.reason = "value and ownership of " + m.lu.cfg.key_name(m.lu.keys[i]) + " disagree";
            return v;
        }
    }
    for (size_t r = 0; r < s.holder.size(); ++r) {
        int party = m.players + static_cast<int>(r);
        if (s.holder[r] >= 0) {
            for (int i = 0; i < m.lu.K(); ++i)
                if (s.units[i * m.parties + party]) {
                    v.ok = false;
                    v.reason = "held lock " + m.gamma.locks[r] + " still owns memory";
                    return v;
                }
            continue;
        }
        if (!sat.satisfies(m.party_lstate(s, party), m.gamma.inv[r])) {
            v.ok = false;
            v.reason = "invariant of " + m.gamma.locks[r] + " does not hold";
            return v;
        }
    }
    return v;
}

namespace {

// All ways to give units to the active parties, with total in [1, U].
void compositions(int parties, const std::vector<char>& active, int U,
                  std::vector<std::vector<std::uint8_t>>& out)
{
    std::vector<std::uint8_t> cur(parties, 0);
    std::function<void(int, int)> rec = [&](int p, int left) {
        if (p == parties) {
            if (left < U)
                out.push_back(cur);
            return;
        }
        int maxu = active[p] ? left : 0;
        for (int x = 0; x <= maxu; ++x) {
            cur[p] = static_cast<std::uint8_t>(x);
            rec(p + 1, left - x);
        }
        cur[p] = 0;
    };
    rec(0, U);
}

}  // namespace

std::shared_ptr<SepModel> build_sep_model(const ModelConfig& cfg, const std::vector<int>& keys,
                                          const LockContext& gamma, const Alphabet& alpha, Satisfier& inv_sat,
                                          int players)
{
    auto mp = std::make_shared<SepModel>();
    SepModel& m = *mp;
    m.mcfg = cfg;
    m.mcfg.locks = gamma.locks;
    m.lu = LUniverse(cfg, keys);
    m.gamma = gamma;
    m.players = players;
    int nlocks = static_cast<int>(gamma.locks.size());
    m.parties = players + nlocks;
    m.alpha = alpha;
    const int K = m.lu.K(), P = m.parties, U = m.lu.U;
    StatefulSpace space(m.mcfg);

    // Enumerate states per holder assignment.
    std::vector<std::int8_t> holder(nlocks, -1);
    std::function<void(int)> per_holder = [&](int r) {
        if (r < nlocks) {
            for (int h = -1; h < players; ++h) {
                holder[r] = static_cast<std::int8_t>(h);
                per_holder(r + 1);
            }
            return;
        }
        std::vector<char> active(P, 1);
        for (int q = 0; q < nlocks; ++q)
            active[players + q] = holder[q] < 0;
        std::vector<std::vector<std::uint8_t>> comps;
        compositions(P, active, U, comps);
        SepState s;
        s.val.assign(K, kUndef);
        s.units.assign(static_cast<size_t>(K) * P, 0);
        s.holder = holder;
        std::function<void(int)> per_key = [&](int i) {
            if (i == K) {
                if (!sep_state_valid(m, inv_sat, s).ok)
                    return;
                if (m.states.size() >= cfg.node_cap)
                    throw CapacityError("separated model exceeds node cap " + std::to_string(cfg.node_cap));
                m.index.emplace(pack(s), static_cast<int>(m.states.size()));
                m.states.push_back(s);
                return;
            }
            s.val[i] = kUndef;
            std::fill(s.units.begin() + i * P, s.units.begin() + (i + 1) * P, 0);
            per_key(i + 1);
            for (const auto& c : comps) {
                bool any = std::any_of(c.begin(), c.end(), [](std::uint8_t x) { return x != 0; });
                if (!any)
                    continue;
                std::copy(c.begin(), c.end(), s.units.begin() + i * P);
                for (int v = cfg.vmin; v <= cfg.vmax; ++v) {
                    s.val[i] = v;
                    per_key(i + 1);
                }
            }
            s.val[i] = kUndef;
            std::fill(s.units.begin() + i * P, s.units.begin() + (i + 1) * P, 0);
        };
        per_key(0);
    };
    per_holder(0);

    AsyncGraph& g = m.model.pg.g;
    g.n = static_cast<int>(m.states.size());
    m.model.pg.point = -1;
    m.model.players = players;
    m.erased.resize(m.states.size());
    std::vector<int> tile_label;
    std::vector<Footprint> fps;
    for (int node = 0; node < g.n; ++node) {
        const SepState& s = m.states[node];
        MachineState mu = m.erase(s);
        m.erased[node] = space.encode(mu);
        for (int instr = 0; instr < alpha.size(); ++instr) {
            const Instr& ins = alpha.instrs[instr];
            auto succ = step(ins, mu, m.mcfg);
            if (succ.empty() || succ[0].error)
                continue;
            const MachineState& t = succ[0];
            Footprint fp = footprint(ins, mu, m.mcfg);
            for (int X = 0; X < players; ++X) {
                auto owns = [&](int key) {
                    int slot = m.lu.key_slot(key);
                    return slot >= 0 && s.units[slot * P + X] > 0;
                };
                auto sole = [&](int slot) {
                    for (int q = 0; q < P; ++q)
                        if (q != X && s.units[slot * P + q])
                            return false;
                    return true;
                };
                bool ok = true;
                for (int k : fp.rd)
                    ok = ok && owns(k);
                for (int k : fp.wr)
                    ok = ok && owns(k) && sole(m.lu.key_slot(k));
                for (int r : fp.locks)
                    ok = ok && (s.holder[r] < 0 || s.holder[r] == X);
                if (!ok)
                    continue;
                SepState ns = s;
                auto value_in = [&](const MachineState& ms, int key) {
                    return key < static_cast<int>(m.mcfg.vars.size()) ? ms.mem.stack[key]
                                                                       : ms.mem.heap[key - m.mcfg.vars.size()];
                };
                for (int k : fp.wr)
                    ns.val[m.lu.key_slot(k)] = value_in(t, k);
                if (ins.k == Instr::Alloc) {
                    int slot = fp.alloc.empty() ? -1 : m.lu.key_slot(fp.alloc[0]);
                    if (slot < 0)
                        continue;
                    ns.val[slot] = value_in(t, fp.alloc[0]);
                    ns.units[slot * P + X] = static_cast<std::uint8_t>(U);
                }
                if (ins.k == Instr::Dispose) {
                    int slot = fp.alloc.empty() ? -1 : m.lu.key_slot(fp.alloc[0]);
                    if (slot < 0 || !s.units[slot * P + X] || !sole(slot))
                        continue;
                    ns.val[slot] = kUndef;
                    ns.units[slot * P + X] = 0;
                }
                std::vector<SepState> targets;
                if (ins.k == Instr::P) {
                    int r = fp.locks[0];
                    int reg = players + r;
                    ns.holder[r] = static_cast<std::int8_t>(X);
                    for (int i = 0; i < K; ++i) {
                        ns.units[i * P + X] = static_cast<std::uint8_t>(ns.units[i * P + X] + ns.units[i * P + reg]);
                        ns.units[i * P + reg] = 0;
                    }
                    targets.push_back(ns);
                } else if (ins.k == Instr::V) {
                    int r = fp.locks[0];
                    int reg = players + r;
                    ns.holder[r] = -1;
                    std::function<void(int)> split = [&](int i) {
                        if (i == K) {
                            if (inv_sat.satisfies(m.party_lstate(ns, reg), gamma.inv[r]))
                                targets.push_back(ns);
                            return;
                        }
                        int mine = s.units[i * P + X];
                        for (int a = 0; a <= mine; ++a) {
                            ns.units[i * P + X] = static_cast<std::uint8_t>(mine - a);
                            ns.units[i * P + reg] = static_cast<std::uint8_t>(a);
                            split(i + 1);
                        }
                        ns.units[i * P + X] = static_cast<std::uint8_t>(mine);
                        ns.units[i * P + reg] = 0;
                    };
                    split(0);
                } else {
                    targets.push_back(ns);
                }
                for (const SepState& x : targets) {
                    int tgt = m.find(x);
                    if (tgt < 0 || !(m.erase(x) == t))
                        continue;
                    g.add_edge(node, tgt, m.player_pol(X));
                    m.model.edge_label.push_back(instr);
                    tile_label.push_back(instr * players + X);
                    fps.push_back(fp);
                }
            }
        }
    }
    add_independent_tiles(g, tile_label, fps);
    return mp;
}

}  // namespace cobordcsl
