#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cobordcsl/emit.hpp"
#include "cobordcsl/interp.hpp"

using namespace cobordcsl;
using json = nlohmann::ordered_json;

namespace {

enum Exit { Ok = 0, Usage = 1, BadProof = 2, Unsound = 3, Race = 4, Capacity = 5 };

struct RunConfig {
    int vmin = 0, vmax = 3;
    int nlocs = 2;
    int k = 2;
    int unfold = 8;
    std::size_t cap = 200000;
    std::string emit;

    ModelConfig model() const
    {
        ModelConfig c;
        c.vmin = vmin;
        c.vmax = vmax;
        c.locs = default_locations(vmin, vmax, nlocs);
        c.perm_k = k;
        c.node_cap = cap;
        return c;
    }
};

std::string slurp(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw std::invalid_argument("cannot read " + path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + p.string());
    f << text;
}

// Writes name.json and name.dot under the emit directory, if any.
void emit(const RunConfig& rc, const std::string& name, const Cob& c, json& files)
{
    if (rc.emit.empty())
        return;
    std::filesystem::create_directories(rc.emit);
    LabeledGraph l = labeled(c);
    auto base = std::filesystem::path(rc.emit) / name;
    write_file(base.string() + ".json", to_json(l));
    write_file(base.string() + ".dot", to_dot(l, name));
    files[name] = base.string() + ".json";
}

json cex_json(const Counterexample& c, const std::string& graph, const std::string& target_graph,
              const std::string& target_kind)
{
    json j;
    j["kind"] = c.kind;
    j["graph"] = graph;
    if (c.node >= 0)
        j["node"] = c.node;
    if (c.edge >= 0) {
        j["path"] = json::array({c.edge});
        if (c.edge2 >= 0)
            j["path"].push_back(c.edge2);
    }
    if (c.target >= 0) {
        j["target_graph"] = target_graph;
        j[target_kind] = c.target;
    }
    j["detail"] = c.detail;
    return j;
}

int finish(const json& report, const std::string& summary, int code)
{
    std::cout << report.dump(2) << "\n";
    std::cerr << summary << "\n";
    return code;
}

int cmd_race(const RunConfig& rc, const std::string& file)
{
    Cmd prog = parse_program(slurp(file));
    World w(rc.model(), prog, nullptr, rc.unfold);
    CodeSem cs = sem_code(w, prog);
    RaceReport r = check_race(w, cs);
    json rep;
    rep["command"] = "race";
    rep["program"] = to_string(prog);
    rep["files"] = json::object();
    emit(rc, "stateful", *cs.s, rep["files"]);
    emit(rc, "stateless", *cs.l, rep["files"]);
    rep["nodes"] = {{"stateful", cs.s->sup.n}, {"stateless", cs.l->sup.n}};
    rep["truncated"] = r.truncated;
    rep["race"] = r.race;
    if (r.cex)
        rep["counterexample"] = cex_json(*r.cex, "stateful", "stateless", "tile");
    if (r.error_edge)
        rep["error_edge"] = cex_json(*r.error_edge, "stateful", "", "edge");
    rep["verdict"] = r.race ? "race" : "ok";
    if (r.race)
        return finish(rep, "race: " + r.cex->describe(), Race);
    return finish(rep, r.error_edge ? "no race (reaches Error: " + r.error_edge->describe() + ")" : "no race", Ok);
}

int cmd_check(const RunConfig& rc, const std::string& file, const std::string& proof_file)
{
    Cmd prog = parse_program(slurp(file));
    ProofTree p = parse_proof(slurp(proof_file));
    World w(rc.model(), prog, &p, rc.unfold);
    CheckResult res = check_soundness(w, prog, p);
    const SoundnessReport& r = res.report;
    json rep;
    rep["command"] = "check";
    rep["program"] = to_string(prog);
    rep["files"] = json::object();
    if (!r.proof_errors.empty()) {
        rep["verdict"] = "invalid proof";
        rep["proof_errors"] = json::array();
        std::string s = "invalid proof:";
        for (const auto& i : r.proof_errors) {
            rep["proof_errors"].push_back({{"rule", i.path}, {"line", i.line}, {"col", i.col}, {"message", i.msg}});
            s += "\n  " + i.describe();
        }
        return finish(rep, s, BadProof);
    }
    const CodeSem& cs = *res.code;
    emit(rc, "stateful", *cs.s, rep["files"]);
    emit(rc, "stateless", *cs.l, rep["files"]);
    emit(rc, "separated", *res.proof->sep, rep["files"]);
    rep["nodes"] = {{"separated", res.proof->sep->sup.n}, {"stateful", cs.s->sup.n}, {"stateless", cs.l->sup.n}};
    rep["truncated"] = r.truncated;
    rep["structural"] = r.structural;
    rep["simulation"] = r.simulation;
    rep["strict"] = r.strict;
    rep["code_fibration"] = r.code_fibration;
    rep["two_fibration"] = r.two_fibration;
    rep["race"] = r.race;
    if (r.code_cex)
        rep["code_counterexample"] = cex_json(*r.code_cex, "separated", "stateful", "edge");
    if (r.two_cex)
        rep["two_counterexample"] = cex_json(*r.two_cex, "separated", "stateless", "tile");
    if (r.race_cex)
        rep["race_counterexample"] = cex_json(*r.race_cex, "stateful", "stateless", "tile");
    rep["verdict"] = r.ok() ? "sound" : "unsound";
    if (r.ok())
        return finish(rep, "sound", Ok);
    std::string s = "soundness check failed";
    for (const auto& i : r.structural)
        s += "\n  " + i;
    for (const auto& i : r.simulation)
        s += "\n  " + i;
    if (r.code_cex)
        s += "\n  " + r.code_cex->describe();
    if (r.two_cex)
        s += "\n  " + r.two_cex->describe();
    return finish(rep, s, Unsound);
}

int cmd_interp(const RunConfig& rc, const std::string& file, const std::string& model)
{
    Cmd prog = parse_program(slurp(file));
    World w(rc.model(), prog, nullptr, rc.unfold);
    std::map<const Cmd*, int> depth;
    CobP c = sem_code_kind(w, model == "stateful" ? Kind::S : Kind::L, prog, depth);
    LabeledGraph l = labeled(*c);
    if (!rc.emit.empty()) {
        json files = json::object();
        emit(rc, model, *c, files);
        std::cerr << "wrote " << files[model].get<std::string>() << "\n";
    }
    std::cout << to_json(l);
    std::cerr << model << ": " << c->sup.n << " nodes, " << c->sup.num_edges() << " edges, " << c->sup.num_tiles()
              << " tiles" << (c->truncated ? " (truncated)" : "") << "\n";
    return Ok;
}

// Small oracle suites that run in seconds.
int cmd_selftest(const RunConfig& rc)
{
    int failed = 0;
    auto line = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        failed += !ok;
    };

    std::mt19937 rng(7);
    int good = 0, total = 0;
    for (int it = 0; it < 100; ++it) {
        AsyncGraph m, a, b;
        int nm = rng() % 3, na = 1 + rng() % 4, nb = 1 + rng() % 4;
        for (int i = 0; i < nm; ++i)
            m.add_node();
        for (int i = 0; i < na; ++i)
            a.add_node();
        for (int i = 0; i < nb; ++i)
            b.add_node();
        for (int i = 0; i < 3; ++i) {
            a.add_edge(rng() % na, rng() % na);
            b.add_edge(rng() % nb, rng() % nb);
        }
        GraphHom f, g;
        for (int i = 0; i < nm; ++i) {
            f.node.push_back(rng() % na);
            g.node.push_back(rng() % nb);
        }
        Pushout po = pushout(f, a, g, b, m);
        ++total;
        good += is_pushout(f, a, g, b, m, po.i1, po.i2, po.g);
    }
    line("pushouts satisfy their universal property (" + std::to_string(good) + "/" + std::to_string(total) + ")",
         good == total);

    ModelConfig cfg = rc.model();
    {
        Cmd prog = parse_program("x := 1 || x := 2");
        World w(cfg, prog, nullptr, rc.unfold);
        line("x := 1 || x := 2 races", check_race(w, sem_code(w, prog)).race);
    }
    {
        Cmd prog = parse_program("resource r do (with r do x := 1 || with r do x := 2)");
        World w(cfg, prog, nullptr, rc.unfold);
        line("lock-protected writes do not race", !check_race(w, sem_code(w, prog)).race);
    }
    {
        Cmd prog = parse_program("dispose(1) ; dispose(1)");
        World w(cfg, prog, nullptr, rc.unfold);
        line("double dispose reaches Error", find_error_edge(*sem_code(w, prog).s).has_value());
    }
    {
        Cmd prog = parse_program("x := 1 || y := 1");
        ProofTree p = parse_proof("(PAR {own(x,1) * own(y,1)} {(own(x,1) /\\ x = 1) * (own(y,1) /\\ y = 1)}"
                                  " (AFF {own(x,1)} {own(x,1) /\\ x = 1} [x := 1 ; emp ; 1])"
                                  " (AFF {own(y,1)} {own(y,1) /\\ y = 1} [y := 1 ; emp ; 1]))");
        World w(cfg, prog, &p, rc.unfold);
        line("disjoint parallel writes are proven", check_soundness(w, prog, p).report.ok());
    }
    for (const char* src : {"x := 1 ; y := x", "x := 1 || x := 2", "while x < 3 do x := x + 1"}) {
        Cmd prog = parse_program(src);
        World w(cfg, prog, nullptr, rc.unfold);
        CodeSem cs = sem_code(w, prog);
        int n = w.S({}).S->space.count, bad = 0;
        for (int i = 0; i < n; i += 13)
            bad += cob_final_states(w, cs, i) != interleave_final_states(w, prog, i);
        line(std::string("final states of ") + src + " match the interleaving interpreter", bad == 0);
    }
    return failed ? Unsound : Ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Executable semantics for concurrent separation logic over asynchronous graphs"};
    app.require_subcommand(1);
    RunConfig rc;
    if (const char* cap = std::getenv("COBORDCSL_NODE_CAP"))
        rc.cap = std::strtoull(cap, nullptr, 10);
    app.add_option("--vmin", rc.vmin, "smallest value")->capture_default_str();
    app.add_option("--vmax", rc.vmax, "largest value")->capture_default_str();
    app.add_option("--locations", rc.nlocs, "number of heap locations")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--perm-k", rc.k, "permissions are multiples of 2^-k")->capture_default_str()->check(CLI::NonNegativeNumber);
    app.add_option("--unfold", rc.unfold, "loop unfolding bound")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--cap", rc.cap, "node cap (also COBORDCSL_NODE_CAP)")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--emit", rc.emit, "directory for JSON and DOT output");

    std::string file, proof, model = "stateful";
    auto* check = app.add_subcommand("check", "check a proof against a program");
    check->add_option("FILE", file)->required();
    check->add_option("--proof", proof)->required();
    auto* race = app.add_subcommand("race", "look for a data race");
    race->add_option("FILE", file)->required();
    auto* interp = app.add_subcommand("interp", "print the cobordism of a program as JSON");
    interp->add_option("FILE", file)->required();
    interp->add_option("--model", model)->check(CLI::IsMember({"stateful", "stateless"}))->capture_default_str();
    auto* selftest = app.add_subcommand("selftest", "run the built-in oracle checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Ok : Usage;
    }
    if (rc.vmin > rc.vmax) {
        std::cerr << "error: --vmin exceeds --vmax\n";
        return Usage;
    }

    try {
        if (check->parsed())
            return cmd_check(rc, file, proof);
        if (race->parsed())
            return cmd_race(rc, file);
        if (interp->parsed())
            return cmd_interp(rc, file, model);
        if (selftest->parsed())
            return cmd_selftest(rc);
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return Usage;
    } catch (const CapacityError& e) {
        std::cerr << "capacity exceeded: " << e.what() << "\n";
        return Capacity;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    }
    return Usage;
}
