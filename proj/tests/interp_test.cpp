#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cobordcsl/interp.hpp"

using namespace cobordcsl;

namespace {

std::string slurp(const std::string& name)
{
    std::ifstream f(std::string(CORPUS_DIR) + "/" + name);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

ModelConfig small()
{
    ModelConfig c;
    c.vmin = 0;
    c.vmax = 1;
    c.locs = {};
    return c;
}

CheckResult check(const std::string& prog_src, const std::string& proof_src, ModelConfig cfg = small())
{
    Cmd prog = parse_program(prog_src);
    ProofTree p = parse_proof(proof_src);
    World w(cfg, prog, &p);
    return check_soundness(w, prog, p);
}

}  // namespace

TEST(Interp, WorldCollectsVariablesAndLocks)
{
    Cmd prog = parse_program("resource r do with r do x := y");
    World w(small(), prog);
    EXPECT_EQ(w.cfg.vars, (std::vector<std::string>{"x", "y"}));
    EXPECT_TRUE(w.cfg.locks.empty());
    EXPECT_GE(w.alpha.find(Instr::acquire("r")), 0);
    EXPECT_GE(w.alpha.find(Instr::nop()), 0);
}

TEST(Interp, ComparisonMapIsAStrictSimulation)
{
    for (const char* src : {"x := 1", "x := 1 ; y := x", "x := 1 || y := 1", "if x = 0 then x := 1 else skip",
                            "resource r do with r do x := 1"}) {
        Cmd prog = parse_program(src);
        World w(small(), prog);
        CodeSem cs = sem_code(w, prog);
        EXPECT_TRUE(check_structural(*cs.s).ok()) << src;
        EXPECT_TRUE(is_simulation(cs.map, *cs.s, *cs.l, w.functor(cs.s->tpl, cs.l->tpl)).ok()) << src;
        EXPECT_TRUE(is_strict(cs.map, *cs.s, *cs.l)) << src;
    }
}

TEST(Interp, LoopStabilizes)
{
    Cmd prog = parse_program("while x < 1 do x := x + 1");
    World w(small(), prog);
    CodeSem cs = sem_code(w, prog);
    EXPECT_FALSE(cs.truncated);
    int n = w.S({}).S->space.count;
    for (int i = 0; i < n; ++i)
        EXPECT_EQ(cob_final_states(w, cs, i), interleave_final_states(w, prog, i)) << i;
}

TEST(Interp, LoopTruncatesAtBound)
{
    Cmd prog = parse_program("while x < 3 do x := x + 1");
    World w(ModelConfig{}, prog, nullptr, 1);
    EXPECT_TRUE(sem_code(w, prog).truncated);
}

TEST(Interp, InterleavingOracle)
{
    Cmd prog = parse_program("x := 1 || x := 0");
    World w(small(), prog);
    // From x = 0 both orders are possible.
    MachineState s;
    s.mem.stack = {0};
    s.mem.heap.assign(w.cfg.locs.size(), kUndef);
    auto finals = interleave_final_states(w, prog, w.S({}).S->space.encode(s));
    EXPECT_EQ(finals.size(), 2u);
}

TEST(Interp, Race)
{
    Cmd prog = parse_program("x := 1 || x := 0");
    World w(small(), prog);
    RaceReport r = check_race(w, sem_code(w, prog));
    ASSERT_TRUE(r.race);
    EXPECT_GE(r.cex->target, 0);

    Cmd reads = parse_program("y := x || z := x");
    World w2(small(), reads);
    EXPECT_FALSE(check_race(w2, sem_code(w2, reads)).race);
}

TEST(Interp, ErrorEdge)
{
    Cmd prog = parse_program("x := y");
    World w(small(), prog);
    EXPECT_TRUE(find_error_edge(*sem_code(w, prog).s).has_value());
}

TEST(Interp, CorpusProofs)
{
    for (const char* name : {"par", "frame", "copy", "heap", "branch"}) {
        Cmd prog = parse_program(slurp(std::string(name) + ".prog"));
        ProofTree p = parse_proof(slurp(std::string(name) + ".proof"));
        World w(ModelConfig{}, prog, &p);
        CheckResult r = check_soundness(w, prog, p);
        EXPECT_TRUE(r.report.ok()) << name;
        EXPECT_TRUE(r.report.strict) << name;
    }
}

TEST(Interp, ValidationRejects)
{
    // Postcondition does not follow the AFF schema.
    auto r = check("x := 1", "(AFF {own(x,1)} {own(x,1) /\\ x = 0} [x := 1 ; emp ; 1])");
    EXPECT_FALSE(r.report.proof_errors.empty());
    // Proof of a different command.
    r = check("x := 1", "(AFF {own(x,1)} {own(x,1) /\\ x = 0} [x := 0 ; emp ; 0])");
    EXPECT_FALSE(r.report.proof_errors.empty());
    // PAR with overlapping footprints.
    r = check("x := 1 || y := 1", "(PAR {own(x,1) * own(y,1)} {(own(x,1) /\\ x = 1) * (own(y,1) /\\ y = 1)}"
                                  " (AFF {own(x,1)} {own(x,1) /\\ x = 1} [x := 1 ; emp ; 1])"
                                  " (AFF {own(y,1)} {own(y,1) /\\ y = 1} [y := 1 ; emp ; 1]))");
    EXPECT_TRUE(r.report.ok());
    r = check("x := 1 ; x := 0", "(SEQ {own(x,1)} {own(x,1) /\\ x = 0}"
                                 " (AFF {own(x,1)} {own(x,1) /\\ x = 1} [x := 1 ; emp ; 1])"
                                 " (AFF {own(x,1) /\\ x = 0} {own(x,1) /\\ x = 0} [x := 0 ; emp ; 0]))");
    EXPECT_FALSE(r.report.proof_errors.empty());
}

TEST(Interp, SequencedAssignments)
{
    auto r = check("x := 1 ; y := x",
                   "(SEQ {own(x,1) * own(y,1)} {(own(y,1) * (own(x,1) /\\ x = 1)) /\\ y = 1}"
                   " (AFF {own(x,1) * own(y,1)} {(own(x,1) * own(y,1)) /\\ x = 1} [x := 1 ; own(y,1) ; 1])"
                   " (AFF {own(y,1) * (own(x,1) /\\ x = 1)} {(own(y,1) * (own(x,1) /\\ x = 1)) /\\ y = 1}"
                   " [y := x ; own(x,1) /\\ x = 1 ; 1]))");
    EXPECT_TRUE(r.report.ok());
}

TEST(Interp, UnvalidatedWrongProofFailsFibration)
{
    Cmd prog = parse_program(slurp("store_wrong.prog"));
    ProofTree p = parse_proof(slurp("store_wrong.proof"));
    World w(ModelConfig{}, prog, &p);
    EXPECT_FALSE(validate_proof(w, p, prog).empty());
    CheckResult r = check_soundness(w, prog, p, false);
    EXPECT_FALSE(r.report.code_fibration);
    ASSERT_TRUE(r.report.code_cex.has_value());
    EXPECT_LT(r.report.code_cex->node, r.proof->sep->sup.n);
}

TEST(Interp, NodeCap)
{
    Cmd prog = parse_program("x := 1 || y := 1 || z := 1");
    ModelConfig cfg;
    cfg.node_cap = 100;
    EXPECT_THROW(
        {
            World w(cfg, prog);
            sem_code(w, prog);
        },
        CapacityError);
}
