#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cobordcsl/cobord.hpp"
#include "cobordcsl/syntax.hpp"

namespace cobordcsl {

struct ProofError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shared state of one run: the configuration, the instruction alphabet and
// every template, span-monoidal structure, functor and span built so far.
class World {
public:
    // Variables come from the program and the proof; locks are introduced by
    // resource binders.
    World(const ModelConfig& base, const Cmd& prog, const ProofTree* proof = nullptr, int unfold = 8);
    World(const World&) = delete;
    World& operator=(const World&) = delete;

    ModelConfig cfg;  // locks empty
    Alphabet alpha;
    int unfold = 8;
    std::vector<int> sep_keys;

    using Locks = std::vector<std::string>;
    Template& S(const Locks& locks);
    Template& L(const Locks& locks);
    Template& plain(Kind k, const Locks& locks) { return k == Kind::S ? S(locks) : L(locks); }
    SpanMonoidal& three(Template& t);
    // S(locks) -> L(locks), with its three-player component.
    const Functor& u(const Locks& locks);
    AcuteSpan& hide(Kind k, const Locks& inner, const std::string& r);
    AcuteSpan& when(Kind k, const Locks& outer, const std::string& r);

    Satisfier& sat();
    Template& Sep(const LockContext& gamma);
    // Sep(gamma) -> S(dom gamma), with its three-player component.
    const Functor& usep(const LockContext& gamma);
    AcuteSpan& hide_sep(const LockContext& inner, const std::string& r);
    AcuteSpan& when_sep(const LockContext& outer, const std::string& r);
    // Lambda[1] of Sep(outer without r) -> Lambda[1] of S(dom outer), with r held.
    const GraphHom& when_sep_functor(const LockContext& outer, const std::string& r);

    // The functor between two templates (u or u_Sep built on demand).
    const Functor& functor(const Template* src, const Template* dst);
    // Its three-player component.
    const GraphHom& functor3(const Template* src, const Template* dst);
    void check_cap(const Cob& c) const;

private:
    Functor& register_functor(Functor f);
    std::map<std::string, std::unique_ptr<Template>> templates_;
    std::map<const Template*, std::unique_ptr<SpanMonoidal>> threes_;
    std::map<std::string, std::unique_ptr<AcuteSpan>> spans_;
    std::map<std::string, GraphHom> when_functors_;
    std::map<std::pair<const Template*, const Template*>, std::unique_ptr<Functor>> owned_;
    std::unique_ptr<LUniverse> lu_;
    std::unique_ptr<Satisfier> sat_;
};

std::vector<std::string> lock_key(const std::vector<std::string>& locks);

// The instruction cobordism over one of the plain templates: one Code edge
// per transition of any of the instructions.
CobP sem_instr(World& w, Kind k, const World::Locks& locks, const std::vector<Instr>& ms, const std::string& tag);
// Instructions of an atomic command (malloc: one alloc per location).
std::vector<Instr> instrs_of(const Cmd& c, const ModelConfig& cfg);
// Boolean expression as a predicate over stacks.
Pred bexpr_pred(const BExpr& b, const ModelConfig& cfg);

struct CodeSem {
    CobP s, l;   // [[C]]_S and [[C]]_L
    CobMap map;  // [[C]]_S -> [[C]]_L over u
    bool truncated = false;
};
CodeSem sem_code(World& w, const Cmd& c);
// One interpretation only; depth fixes the unfolding count of each loop
// (filled in when empty).
CobP sem_code_kind(World& w, Kind k, const Cmd& c, std::map<const Cmd*, int>& depth);

// Map between two cobordisms built by the same constructors, over the
// functors registered in the world.
CobMap lockstep(World& w, const Cob& x, const Cob& y);
// Map between two instruction cobordisms, by state.
CobMap leaf_map(const Cob& x, const Cob& y, const Functor& f);

struct ProofIssue {
    std::string path;
    int line = 0, col = 0;
    std::string msg;
    std::string describe() const;
};
// Rule schemas, side conditions and the command of the conclusion.
std::vector<ProofIssue> validate_proof(World& w, const ProofTree& p, const Cmd& prog);

struct ProofSem {
    CobP sep;
    CobMap map;  // -> the S cobordism of the same command
};
// y is [[C]]_S for the command of p (at the lock set dom gamma).
ProofSem sem_proof(World& w, const ProofTree& p, const LockContext& gamma, const CobP& y);

struct Counterexample {
    std::string kind;
    int node = -1;            // anchor node
    int edge = -1, edge2 = -1;  // anchor edge or path
    int target = -1;          // unlifted edge or tile of the codomain
    std::string detail;
    std::string describe() const;
};

struct SoundnessReport {
    std::vector<ProofIssue> proof_errors;
    std::vector<std::string> structural;
    std::vector<std::string> simulation;
    bool strict = true;
    bool code_fibration = true;
    std::optional<Counterexample> code_cex;  // node of [[pi]]_Sep, edge of [[C]]_S
    bool two_fibration = true;
    std::optional<Counterexample> two_cex;   // path of [[pi]]_Sep, tile of [[C]]_L
    bool race = false;
    std::optional<Counterexample> race_cex;  // path of [[C]]_S, tile of [[C]]_L
    bool truncated = false;
    bool ok() const
    {
        return proof_errors.empty() && structural.empty() && simulation.empty() && code_fibration && two_fibration;
    }
};

struct RaceReport {
    bool race = false;
    std::optional<Counterexample> cex;  // path of [[C]]_S, tile of [[C]]_L
    std::optional<Counterexample> error_edge;
    bool truncated = false;
};

// Two Code steps, reachable from the input border along Code edges, that
// commute in [[C]]_L but not in [[C]]_S.
RaceReport check_race(World& w, const CodeSem& cs);
// A Code edge of [[C]]_S, reachable along Code edges, that enters Error.
std::optional<Counterexample> find_error_edge(const Cob& s);

struct CheckResult {
    SoundnessReport report;
    std::optional<CodeSem> code;
    std::optional<ProofSem> proof;
};
// With validate = false the proof is interpreted even when it breaks a rule.
CheckResult check_soundness(World& w, const Cmd& prog, const ProofTree& p, bool validate = true);

// Final states (top-level state ids, Error included) at the ends of maximal
// Code paths of [[C]]_S from an initial state.
std::set<int> cob_final_states(World& w, const CodeSem& cs, int init);
// Independent small-step interleaving interpreter.
std::set<int> interleave_final_states(World& w, const Cmd& c, int init);

}  // namespace cobordcsl
