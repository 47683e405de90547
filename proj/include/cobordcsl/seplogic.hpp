#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cobordcsl/machine.hpp"

namespace cobordcsl {

// A dyadic permission num/den. Arithmetic is done in units of 1/2^k.
struct Perm {
    int num = 1;
    int den = 1;
    bool operator==(const Perm&) const = default;
};
std::string to_string(const Perm& p);
// Units of 1/2^k, or -1 if p is not representable or out of (0,1].
int perm_units(const Perm& p, int k);
std::optional<Perm> perm_add(const Perm& a, const Perm& b);

struct Pred {
    enum Kind { Emp, True, False, Star, And, Or, Not, Own, PointsTo, Eq, Exists, Forall };
    Kind k = Emp;
    std::vector<Pred> sub;
    Expr e1, e2;
    std::string name;  // variable for Own, metavariable for quantifiers
    Perm p;

    static Pred emp() { return {}; }
    static Pred tt() { return {True, {}, {}, {}, {}, {}}; }
    static Pred ff() { return {False, {}, {}, {}, {}, {}}; }
    static Pred own(std::string x, Perm p) { return {Own, {}, {}, {}, std::move(x), p}; }
    static Pred pts(Expr a, Perm p, Expr v) { return {PointsTo, {}, std::move(a), std::move(v), {}, p}; }
    static Pred eq(Expr a, Expr b) { return {Eq, {}, std::move(a), std::move(b), {}, {}}; }
    static Pred bin(Kind k, Pred a, Pred b) { return {k, {std::move(a), std::move(b)}, {}, {}, {}, {}}; }
    static Pred neg(Pred a) { return {Not, {std::move(a)}, {}, {}, {}, {}}; }
    static Pred quant(Kind k, std::string a, Pred body) { return {k, {std::move(body)}, {}, {}, std::move(a), {}}; }
    bool operator==(const Pred&) const = default;
};
std::string to_string(const Pred& p);
void pred_vars(const Pred& p, std::vector<std::string>& vars);
// Constant addresses of points-to atoms (after evaluating closed expressions).
void pred_locations(const Pred& p, const ModelConfig& cfg, std::vector<int>& locs);

struct PredError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Logical states over a finite key universe. Each key is absent or holds a
// value with a permission in units of 1/2^k.
struct LUniverse {
    ModelConfig cfg;
    std::vector<int> keys;  // cfg keys: variable indices, then location keys
    int U = 4;              // 2^k
    int V = 0;              // number of values
    int B = 0;              // digit base V*U + 1
    std::size_t N = 0;

    LUniverse() = default;
    LUniverse(const ModelConfig& c, std::vector<int> ks);
    int K() const { return static_cast<int>(keys.size()); }
    int key_slot(int cfg_key) const;  // -1 if not in the universe
    // digit: 0 absent, else 1 + (v - vmin) * U + (u - 1)
    int digit(int v, int u) const { return 1 + (v - cfg.vmin) * U + (u - 1); }
    int digit_value(int d) const { return cfg.vmin + (d - 1) / U; }
    int digit_units(int d) const { return (d - 1) % U + 1; }
    std::vector<int> digits(std::size_t idx) const;
    std::size_t index(const std::vector<int>& ds) const;
    std::string label(std::size_t idx) const;
};

using LState = std::vector<int>;  // digits per key
std::optional<LState> sep_product(const LUniverse& u, const LState& a, const LState& b);

using Bitset = std::vector<std::uint64_t>;
inline bool bit(const Bitset& b, std::size_t i) { return b[i >> 6] >> (i & 63) & 1u; }

// Satisfaction sets over the logical-state universe, memoized.
class Satisfier {
public:
    explicit Satisfier(const LUniverse& u) : u_(u) {}
    const Bitset& sat(const Pred& p);
    bool satisfies(std::size_t lstate, const Pred& p) { return bit(sat(p), lstate); }
    const LUniverse& universe() const { return u_; }
    // The predicates denote the same set of logical states.
    bool equivalent(const Pred& a, const Pred& b) { return sat(a) == sat(b); }
    bool entails(const Pred& a, const Pred& b);

private:
    Bitset eval(const Pred& p, MetaEnv& env);
    Bitset star(const Bitset& a, const Bitset& b);
    const LUniverse& u_;
    std::unordered_map<std::string, Bitset> cache_;
};

// Lock context Gamma = r1: I1, ..., rn: In.
struct LockContext {
    std::vector<std::string> locks;
    std::vector<Pred> inv;
    int find(const std::string& r) const;
    LockContext with(const std::string& r, const Pred& I) const;
    LockContext without(const std::string& r) const;
    std::string to_string() const;
};

// A separated state for n players. Parties are the players followed by one
// region per lock; units are stored key-major.
struct SepState {
    std::vector<int> val;                 // per key, kUndef when absent
    std::vector<std::uint8_t> units;      // [key * parties + party]
    std::vector<std::int8_t> holder;      // per lock: -1 unheld, else player
    bool operator==(const SepState&) const = default;
};

struct SepModel {
    LUniverse lu;
    LockContext gamma;
    ModelConfig mcfg;  // machine config with locks = dom(gamma)
    int players = 2;
    int parties = 2;
    std::vector<SepState> states;
    std::unordered_map<std::string, int> index;
    Model model;  // pg.point = -1: no Error node
    Alphabet alpha;
    std::vector<int> erased;  // node -> stateful node of StatefulSpace(mcfg)

    int find(const SepState& s) const;
    std::size_t party_lstate(int node, int party) const;
    std::size_t party_lstate(const SepState& s, int party) const;
    MachineState erase(const SepState& s) const;
    std::string label(int node) const;
    Pol player_pol(int player) const;
    int player_of(Pol p) const;
};

// Validity of a separated state: the big product is defined (guaranteed by
// the encoding) and every unheld lock region satisfies its invariant.
struct SepValidity {
    bool ok = true;
    std::string reason;
};
SepValidity sep_state_valid(const SepModel& m, Satisfier& sat, const SepState& s);

// Builds the two-player (players = 2) or three-player (players = 3)
// separated model. keys restricts the logical-state universe.
std::shared_ptr<SepModel> build_sep_model(const ModelConfig& cfg, const std::vector<int>& keys,
                                          const LockContext& gamma, const Alphabet& alpha, Satisfier& inv_sat,
                                          int players);

}  // namespace cobordcsl
