#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cobordcsl/machine.hpp"
#include "cobordcsl/seplogic.hpp"

namespace cobordcsl {

struct Cmd {
    enum Kind { Skip, Assign, Load, Store, Malloc, Dispose, Seq, Par, If, While, Resource, With };
    Kind k = Skip;
    std::string x;  // assigned variable, or lock name for Resource / With
    Expr e, e2;
    BExpr b;
    std::vector<Cmd> sub;

    bool operator==(const Cmd&) const = default;
    bool atomic() const { return k <= Dispose; }
};

std::string to_string(const Cmd& c);
// Variables and lock names occurring in c.
void cmd_vars(const Cmd& c, std::vector<std::string>& out);
void cmd_locks(const Cmd& c, std::vector<std::string>& out);

struct SyntaxError : std::runtime_error {
    int line = 0, col = 0;
    SyntaxError(int l, int c, const std::string& msg)
        : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c)
    {
    }
};

Cmd parse_program(std::string_view text);
Pred parse_predicate(std::string_view text);
BExpr parse_bexpr(std::string_view text);

enum class Rule { AFF, STORE, LOAD, IF, SEQ, DISJ, RES, WHEN, PAR, FRAME };
const char* rule_name(Rule r);
int rule_arity(Rule r);

struct ProofTree {
    Rule rule = Rule::AFF;
    Pred pre, post;
    Cmd cmd;           // AFF, STORE, LOAD: the instruction
    Pred aux;          // AFF: the frame P; FRAME: R; RES: the invariant J
    Expr value;        // AFF, LOAD: v
    Perm perm;         // LOAD: p
    BExpr cond;        // IF: B
    std::string lock;  // RES, WHEN
    std::vector<ProofTree> sub;
    int line = 0, col = 0;

    bool operator==(const ProofTree& o) const
    {
        return rule == o.rule && pre == o.pre && post == o.post && cmd == o.cmd && aux == o.aux &&
               value == o.value && perm == o.perm && cond == o.cond && lock == o.lock && sub == o.sub;
    }
};

ProofTree parse_proof(std::string_view text);
std::string to_string(const ProofTree& p);
// The command a proof tree is about.
Cmd proof_command(const ProofTree& p);

}  // namespace cobordcsl
