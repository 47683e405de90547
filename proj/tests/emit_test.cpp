#include <gtest/gtest.h>

#include "cobordcsl/emit.hpp"
#include "cobordcsl/interp.hpp"

using namespace cobordcsl;

TEST(Emit, EmptyGraph)
{
    std::string j = to_json(labeled(AsyncGraph{}));
    EXPECT_EQ(j, "{\"nodes\":[],\"edges\":[],\"tiles\":[]}\n");
    EXPECT_EQ(to_json(from_json(j)), j);
}

TEST(Emit, CobordismRoundTrip)
{
    Cmd prog = parse_program("x := 1 || y := 1");
    ModelConfig cfg;
    cfg.vmin = 0;
    cfg.vmax = 1;
    cfg.locs = {};
    World w(cfg, prog);
    CodeSem cs = sem_code(w, prog);
    for (const CobP& c : {cs.s, cs.l}) {
        LabeledGraph l = labeled(*c);
        std::string j = to_json(l);
        LabeledGraph back = from_json(j);
        EXPECT_EQ(back.g, l.g);
        EXPECT_EQ(to_json(back), j);
        EXPECT_EQ(back.point, c->point);
    }
    std::string dot = to_dot(labeled(*cs.s));
    EXPECT_NE(dot.find("style=bold"), std::string::npos);
    EXPECT_NE(dot.find("style=dashed"), std::string::npos);
    EXPECT_NE(dot.find("fillcolor=red"), std::string::npos);
}

TEST(Emit, Deterministic)
{
    auto once = [] {
        Cmd prog = parse_program("x := 1 ; y := x");
        ModelConfig cfg;
        cfg.vmin = 0;
        cfg.vmax = 1;
        cfg.locs = {};
        World w(cfg, prog);
        return to_json(labeled(*sem_code(w, prog).s));
    };
    EXPECT_EQ(once(), once());
}

TEST(Emit, HalfPermissionLabels)
{
    Cmd prog = parse_program("y := [1]");
    ProofTree p = parse_proof("(LOAD {1 |->1/2 2 * own(y,1)} {(1 |->1/2 2 * own(y,1)) /\\ y = 2} [y := [1] ; 1/2 ; 2])");
    ModelConfig cfg;
    cfg.locs = {1};
    World w(cfg, prog, &p);
    CheckResult r = check_soundness(w, prog, p);
    ASSERT_TRUE(r.report.ok());
    std::string j = to_json(labeled(*r.proof->sep));
    EXPECT_NE(j.find("1/2"), std::string::npos);
}

TEST(Emit, RejectsMalformed)
{
    EXPECT_THROW(from_json("{\"nodes\":[{\"id\":1,\"label\":\"a\"}],\"edges\":[],\"tiles\":[]}"),
                 std::invalid_argument);
    EXPECT_THROW(from_json("{\"nodes\":[{\"id\":0,\"label\":\"a\"}],\"edges\":[{\"id\":0,\"src\":0,\"tgt\":3,"
                           "\"label\":\"e\",\"polarity\":\"C\"}],\"tiles\":[]}"),
                 std::invalid_argument);
}
