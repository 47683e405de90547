#include <gtest/gtest.h>

#include "cobordcsl/syntax.hpp"

using namespace cobordcsl;

TEST(Syntax, ProgramsRoundTrip)
{
    for (const char* src :
         {"x := 1", "x := 1 || y := 1", "[1] := 2 ; y := [1]", "if x = 0 then x := x + 1 else skip",
          "while x < 3 do x := x + 1", "resource r do (with r do x := 1 || with r do x := 2)",
          "x := malloc(0) ; [x] := 1 ; dispose(x)"}) {
        Cmd c = parse_program(src);
        EXPECT_EQ(parse_program(to_string(c)), c) << src;
    }
}

TEST(Syntax, ParBindsTighterThanSeq)
{
    Cmd c = parse_program("x := 1 ; y := 1 || z := 1");
    ASSERT_EQ(c.k, Cmd::Seq);
    EXPECT_EQ(c.sub[1].k, Cmd::Par);
    EXPECT_EQ(parse_program("(x := 1 ; y := 1) || z := 1").k, Cmd::Par);
}

TEST(Syntax, VariablesAndLocks)
{
    Cmd c = parse_program("resource r do with r do (y := [x] ; z := 1)");
    std::vector<std::string> vs, ls;
    cmd_vars(c, vs);
    cmd_locks(c, ls);
    EXPECT_EQ(vs, (std::vector<std::string>{"y", "x", "z"}));
    EXPECT_EQ(ls, (std::vector<std::string>{"r"}));
}

TEST(Syntax, ErrorsCarryPositions)
{
    try {
        parse_program("x := 1 ;\n  y := ");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line, 2);
    }
    EXPECT_THROW(parse_program("x := 1 )"), SyntaxError);
    EXPECT_THROW(parse_program("x = 1"), SyntaxError);
}

TEST(Syntax, Predicates)
{
    Pred p = parse_predicate("own(x,1/2) * 1 |-> -");
    EXPECT_EQ(p.k, Pred::Star);
    Pred q = parse_predicate("own(x,1) /\\ (x = 0 \\/ x = 1)");
    EXPECT_EQ(q.k, Pred::And);
    EXPECT_EQ(parse_predicate(to_string(q)), q);
    EXPECT_THROW(parse_predicate("own(x)"), SyntaxError);
}

TEST(Syntax, ProofTree)
{
    ProofTree p = parse_proof("(PAR {own(x,1) * own(y,1)} {emp}\n"
                              "  (AFF {own(x,1)} {own(x,1) /\\ x = 1} [x := 1 ; emp ; 1])\n"
                              "  (AFF {own(y,1)} {own(y,1) /\\ y = 1} [y := 1 ; emp ; 1]))");
    EXPECT_EQ(p.rule, Rule::PAR);
    ASSERT_EQ(p.sub.size(), 2u);
    EXPECT_EQ(p.sub[1].line, 3);
    EXPECT_EQ(proof_command(p), parse_program("x := 1 || y := 1"));
    EXPECT_EQ(parse_proof(to_string(p)), p);
}

TEST(Syntax, ProofErrors)
{
    EXPECT_THROW(parse_proof("(CONSEQ {emp} {emp})"), SyntaxError);
    EXPECT_THROW(parse_proof("(AFF {emp} {emp})"), SyntaxError);
    EXPECT_THROW(parse_proof("(SEQ {emp} {emp} (AFF {emp} {emp} [x := 1 ; emp ; 1]))"), SyntaxError);
}
