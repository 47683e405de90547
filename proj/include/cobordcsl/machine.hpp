#pragma once

#include <climits>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cobordcsl/agraph.hpp"

namespace cobordcsl {

inline constexpr int kUndef = INT_MIN;

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Expr {
    enum Kind { Const, Var, Meta, Add, Sub, Mul, Mod, Neg };
    Kind k = Const;
    int val = 0;
    std::string name;
    std::vector<Expr> args;

    static Expr num(int v) { return {Const, v, {}, {}}; }
    static Expr var(std::string x) { return {Var, 0, std::move(x), {}}; }
    static Expr meta(std::string a) { return {Meta, 0, std::move(a), {}}; }
    static Expr bin(Kind k, Expr a, Expr b) { return {k, 0, {}, {std::move(a), std::move(b)}}; }
    bool operator==(const Expr&) const = default;
};

struct BExpr {
    enum Kind { True, False, Eq, Ne, Lt, Le, And, Or, Not };
    Kind k = True;
    std::vector<Expr> e;
    std::vector<BExpr> b;
    bool operator==(const BExpr&) const = default;
};

BExpr negate(const BExpr& b);
std::string to_string(const Expr& e);
std::string to_string(const BExpr& b);
void free_vars(const Expr& e, std::vector<std::string>& out);
void free_vars(const BExpr& b, std::vector<std::string>& out);
void meta_vars(const Expr& e, std::vector<std::string>& out);

struct ModelConfig {
    int vmin = 0;
    int vmax = 3;
    std::vector<int> locs{1, 2};
    std::vector<std::string> vars;
    std::vector<std::string> locks;
    int perm_k = 2;
    std::size_t node_cap = 200000;

    int nvals() const { return vmax - vmin + 1; }
    int var_index(const std::string& x) const;
    int lock_index(const std::string& r) const;
    int loc_index(int v) const;
    bool in_range(int v) const { return v >= vmin && v <= vmax; }
    // Key universe for footprints: variables first, then locations.
    int nkeys() const { return static_cast<int>(vars.size() + locs.size()); }
    int loc_key(int j) const { return static_cast<int>(vars.size()) + j; }
    std::string key_name(int key) const;
};

// Default location set: the first n positive values of the range.
std::vector<int> default_locations(int vmin, int vmax, int n);

struct MemoryState {
    std::vector<int> stack;  // per variable, kUndef when unbound
    std::vector<int> heap;   // per location, kUndef when unallocated
    bool operator==(const MemoryState&) const = default;
};

struct MachineState {
    bool error = false;
    MemoryState mem;
    std::uint32_t locks = 0;  // held locks
    bool operator==(const MachineState&) const = default;
};

using MetaEnv = std::vector<std::pair<std::string, int>>;

std::optional<int> eval_expr(const Expr& e, const ModelConfig& cfg, const MemoryState& mu,
                             const MetaEnv* env = nullptr);
// nullopt when some value is undefined.
std::optional<bool> eval_bool(const BExpr& b, const ModelConfig& cfg, const MemoryState& mu,
                              const MetaEnv* env = nullptr);

struct Instr {
    enum Kind { Assign, Load, Store, Test, Nop, Alloc, Dispose, P, V };
    Kind k = Nop;
    std::string x;
    Expr e, e2;
    BExpr b;
    int loc = 0;  // alloc target location value
    std::string lock;

    static Instr nop() { return {}; }
    static Instr assign(std::string x, Expr e) { return {Assign, std::move(x), std::move(e), {}, {}, 0, {}}; }
    static Instr load(std::string x, Expr e) { return {Load, std::move(x), std::move(e), {}, {}, 0, {}}; }
    static Instr store(Expr e, Expr e2) { return {Store, {}, std::move(e), std::move(e2), {}, 0, {}}; }
    static Instr test(BExpr b) { return {Test, {}, {}, {}, std::move(b), 0, {}}; }
    static Instr alloc(std::string x, Expr e, int l) { return {Alloc, std::move(x), std::move(e), {}, {}, l, {}}; }
    static Instr dispose(Expr e) { return {Dispose, {}, std::move(e), {}, {}, 0, {}}; }
    static Instr acquire(std::string r) { return {P, {}, {}, {}, {}, 0, std::move(r)}; }
    static Instr release(std::string r) { return {V, {}, {}, {}, {}, 0, std::move(r)}; }
    bool operator==(const Instr&) const = default;
};

std::string to_string(const Instr& m);

// Instructions are interned; edges of the stateful models carry ids.
struct Alphabet {
    std::vector<Instr> instrs;
    std::unordered_map<std::string, int> ids;
    int intern(const Instr& m);
    int find(const Instr& m) const;
    int size() const { return static_cast<int>(instrs.size()); }
};

struct Footprint {
    std::vector<int> rd, wr;  // keys
    std::vector<int> locks;
    std::vector<int> alloc;   // location keys
};

bool independent(const Footprint& a, const Footprint& b);

// Successors of s under m; Error is a successor with error = true.
std::vector<MachineState> step(const Instr& m, const MachineState& s, const ModelConfig& cfg);
Footprint footprint(const Instr& m, const MachineState& s, const ModelConfig& cfg);

// Lock instructions of the stateless model.
struct LockInstr {
    enum Kind { Tau, P, V, Alloc, Dispose };
    Kind k = Tau;
    int arg = 0;  // lock index or location index
    bool operator==(const LockInstr&) const = default;
};
int lock_instr_id(const LockInstr& li, const ModelConfig& cfg);
LockInstr lock_instr_of(int id, const ModelConfig& cfg);
int num_lock_instrs(const ModelConfig& cfg);
std::string to_string(const LockInstr& li, const ModelConfig& cfg);
Footprint lock_footprint(const LockInstr& li, const ModelConfig& cfg);

// The lock instruction of a stateful transition (m at s).
LockInstr erase_instr(const Instr& m, const MachineState& s, const ModelConfig& cfg);
// Every lock instruction m may map to, at any state.
std::vector<LockInstr> lock_instrs_of(const Instr& m, const ModelConfig& cfg);

// A one-, two- or three-player model. Node labels come from the state
// table; edge labels are instruction ids (or lock instruction ids).
struct Model {
    PointedGraph pg;
    std::vector<int> edge_label;
    int players = 1;  // 1: plain, 2: {C, F}, 3: {C1, C2, F}
    // Edge of the plain model underlying an expanded edge.
    int base_edge(int e) const { return players == 1 ? e : e / players; }
    int base_tile(int t) const { return players == 1 ? t : t / (players * players); }
};

// Generic tile generation: squares whose opposite edges carry equal labels
// and whose footprints (taken at the source) are independent.
void add_independent_tiles(AsyncGraph& g, const std::vector<int>& label,
                           const std::vector<Footprint>& edge_fp);

struct StatefulSpace {
    ModelConfig cfg;
    int nv = 0, nl = 0, nlocks = 0, radix = 0;
    std::size_t count = 0;  // non-error states; Error has index count
    explicit StatefulSpace(const ModelConfig& c);
    MachineState decode(int id) const;
    int encode(const MachineState& s) const;
    int error_node() const { return static_cast<int>(count); }
    std::string label(int id) const;
};

struct StatefulModel {
    StatefulSpace space;
    Alphabet alpha;
    Model model;
    // (src, tgt, instr) -> edge
    std::unordered_map<std::uint64_t, int> edge_index;
    int find_edge(int src, int tgt, int instr) const;
};

StatefulModel build_stateful(const ModelConfig& cfg, const Alphabet& alpha);

struct StatelessModel {
    ModelConfig cfg;
    Model model;
    std::unordered_map<std::uint64_t, int> edge_index;
    int find_edge(int src, int tgt, int li) const;
    int error_node() const { return model.pg.point; }
    std::string label(int id) const;
};

StatelessModel build_stateless(const ModelConfig& cfg);

// Polarity expansions: Model x Omega({C,F}) and Model x Omega({C1,C2,F}).
Model two_player(const Model& m);
Model three_player(const Model& m);
// Embedding of the plain model as the Frame part of the two-player model.
GraphHom frame_embedding(const Model& plain);

// Tile lookup by boundary, shared by hom derivation code.
struct TileIndex {
    std::unordered_map<std::uint64_t, std::vector<int>> by_top;
    explicit TileIndex(const AsyncGraph& g);
    int find(const AsyncGraph& g, std::array<int, 2> top, std::array<int, 2> bot) const;
};

std::uint64_t edge_key(int src, int tgt, int label);

}  // namespace cobordcsl
