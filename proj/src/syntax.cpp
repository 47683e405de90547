#include "cobordcsl/syntax.hpp"

#include <algorithm>
#include <cctype>

namespace cobordcsl {

namespace {

struct Tok {
    enum Kind { Ident, Num, Sym, End };
    Kind k = End;
    std::string s;
    int line = 1, col = 1;
    bool spaced = false;  // whitespace before the token
};

std::vector<Tok> lex(std::string_view in)
{
    static const char* syms[] = {"|->", ":=", "||", "&&", "!=", "<=", ">=", "/\\", "\\/"};
    std::vector<Tok> out;
    int line = 1, col = 1;
    size_t i = 0;
    bool spaced = false;
    auto adv = [&](size_t n) {
        for (size_t j = 0; j < n; ++j, ++i) {
            if (in[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < in.size()) {
        char c = in[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            adv(1);
            spaced = true;
            continue;
        }
        if (c == '#' || (c == '/' && i + 1 < in.size() && in[i + 1] == '/')) {
            while (i < in.size() && in[i] != '\n')
                adv(1);
            spaced = true;
            continue;
        }
        Tok t;
        t.line = line;
        t.col = col;
        t.spaced = spaced;
        spaced = false;
        size_t j = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (j < in.size() && (std::isalnum(static_cast<unsigned char>(in[j])) || in[j] == '_' || in[j] == '\''))
                ++j;
            t.k = Tok::Ident;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            while (j < in.size() && std::isdigit(static_cast<unsigned char>(in[j])))
                ++j;
            t.k = Tok::Num;
        } else {
            t.k = Tok::Sym;
            j = i + 1;
            for (const char* s : syms) {
                std::string_view sv(s);
                if (in.substr(i, sv.size()) == sv) {
                    j = i + sv.size();
                    break;
                }
            }
            if (j == i + 1 && std::string_view("()[]{};,.:+-*%=<>!~/").find(c) == std::string_view::npos)
                throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
        }
        t.s = std::string(in.substr(i, j - i));
        adv(j - i);
        out.push_back(std::move(t));
    }
    Tok end;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

const char* const kRuleNames[] = {"AFF", "STORE", "LOAD", "IF", "SEQ", "DISJ", "RES", "WHEN", "PAR", "FRAME"};

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    const Tok& peek(int ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    bool at(const char* s) const { return peek().k != Tok::End && peek().k != Tok::Num && peek().s == s; }
    bool at_end() const { return peek().k == Tok::End; }
    [[noreturn]] void fail(const std::string& msg) const
    {
        const Tok& t = peek();
        std::string near = t.k == Tok::End ? "end of input" : "'" + t.s + "'";
        throw SyntaxError(t.line, t.col, msg + " near " + near);
    }
    void expect(const char* s)
    {
        if (!at(s))
            fail(std::string("expected '") + s + "'");
        ++pos_;
    }
    bool accept(const char* s)
    {
        if (!at(s))
            return false;
        ++pos_;
        return true;
    }
    std::string ident()
    {
        if (peek().k != Tok::Ident)
            fail("expected an identifier");
        return toks_[pos_++].s;
    }
    int number()
    {
        if (peek().k != Tok::Num)
            fail("expected a number");
        return std::stoi(toks_[pos_++].s);
    }
    void finish()
    {
        if (!at_end())
            fail("trailing input");
    }

    // Expressions. In predicates '*' is the separating conjunction, so
    // multiplication is only available in programs.
    Expr expr(bool mult)
    {
        Expr a = term(mult);
        while (at("+") || at("-")) {
            Expr::Kind k = toks_[pos_++].s == "+" ? Expr::Add : Expr::Sub;
            a = Expr::bin(k, std::move(a), term(mult));
        }
        return a;
    }
    Expr term(bool mult)
    {
        Expr a = factor(mult);
        while ((mult && at("*")) || at("%")) {
            Expr::Kind k = toks_[pos_++].s == "*" ? Expr::Mul : Expr::Mod;
            a = Expr::bin(k, std::move(a), factor(mult));
        }
        return a;
    }
    Expr factor(bool mult)
    {
        if (peek().k == Tok::Num)
            return Expr::num(number());
        if (accept("-")) {
            if (peek().k == Tok::Num && !peek().spaced)
                return Expr::num(-number());
            Expr n;
            n.k = Expr::Neg;
            n.args.push_back(factor(mult));
            return n;
        }
        if (accept("(")) {
            Expr e = expr(mult);
            expect(")");
            return e;
        }
        if (peek().k == Tok::Ident && !keyword(peek().s)) {
            std::string x = ident();
            if (std::find(metas_.begin(), metas_.end(), x) != metas_.end())
                return Expr::meta(x);
            return Expr::var(x);
        }
        fail("expected an expression");
    }
    static bool keyword(const std::string& s)
    {
        static const char* kw[] = {"skip", "if", "then", "else", "while", "do", "resource", "with", "malloc",
                                   "dispose", "true", "false", "emp", "own", "exists", "forall"};
        for (const char* k : kw)
            if (s == k)
                return true;
        return false;
    }

    // Boolean expressions.
    BExpr bexpr()
    {
        BExpr a = band();
        while (accept("||"))
            a = BExpr{BExpr::Or, {}, {std::move(a), band()}};
        return a;
    }
    BExpr band()
    {
        BExpr a = bnot();
        while (accept("&&"))
            a = BExpr{BExpr::And, {}, {std::move(a), bnot()}};
        return a;
    }
    BExpr bnot()
    {
        if (accept("!"))
            return BExpr{BExpr::Not, {}, {bnot()}};
        if (accept("true"))
            return BExpr{BExpr::True, {}, {}};
        if (accept("false"))
            return BExpr{BExpr::False, {}, {}};
        if (at("(")) {
            size_t save = pos_;
            try {
                return comparison();
            } catch (const SyntaxError&) {
                pos_ = save;
            }
            expect("(");
            BExpr b = bexpr();
            expect(")");
            return b;
        }
        return comparison();
    }
    BExpr comparison()
    {
        Expr a = expr(true);
        BExpr r;
        if (accept("="))
            r.k = BExpr::Eq;
        else if (accept("!="))
            r.k = BExpr::Ne;
        else if (accept("<"))
            r.k = BExpr::Lt;
        else if (accept("<="))
            r.k = BExpr::Le;
        else if (accept(">") || accept(">=")) {
            r.k = toks_[pos_ - 1].s == ">" ? BExpr::Lt : BExpr::Le;
            r.e = {expr(true), std::move(a)};
            return r;
        } else
            fail("expected a comparison");
        r.e = {std::move(a), expr(true)};
        return r;
    }

    // Commands: ';' binds looser than '||'.
    Cmd cmd()
    {
        Cmd a = par();
        while (accept(";")) {
            Cmd s;
            s.k = Cmd::Seq;
            s.sub = {std::move(a), par()};
            a = std::move(s);
        }
        return a;
    }
    Cmd par()
    {
        Cmd a = atom();
        while (accept("||")) {
            Cmd s;
            s.k = Cmd::Par;
            s.sub = {std::move(a), atom()};
            a = std::move(s);
        }
        return a;
    }
    Cmd atom()
    {
        Cmd c;
        if (accept("(")) {
            c = cmd();
            expect(")");
            return c;
        }
        if (accept("skip"))
            return c;
        if (accept("[")) {
            c.k = Cmd::Store;
            c.e = expr(true);
            expect("]");
            expect(":=");
            c.e2 = expr(true);
            return c;
        }
        if (accept("dispose")) {
            c.k = Cmd::Dispose;
            expect("(");
            c.e = expr(true);
            expect(")");
            return c;
        }
        if (accept("if")) {
            c.k = Cmd::If;
            c.b = bexpr();
            expect("then");
            c.sub.push_back(atom());
            expect("else");
            c.sub.push_back(atom());
            return c;
        }
        if (accept("while")) {
            c.k = Cmd::While;
            c.b = bexpr();
            expect("do");
            c.sub.push_back(atom());
            return c;
        }
        if (at("resource") || at("with")) {
            c.k = toks_[pos_++].s == "resource" ? Cmd::Resource : Cmd::With;
            c.x = ident();
            expect("do");
            c.sub.push_back(atom());
            return c;
        }
        if (peek().k == Tok::Ident && !keyword(peek().s)) {
            c.x = ident();
            expect(":=");
            if (accept("[")) {
                c.k = Cmd::Load;
                c.e = expr(true);
                expect("]");
            } else if (accept("malloc")) {
                c.k = Cmd::Malloc;
                expect("(");
                c.e = expr(true);
                expect(")");
            } else {
                c.k = Cmd::Assign;
                c.e = expr(true);
            }
            return c;
        }
        fail("expected a command");
    }

    // Predicates: '~' > '*' > '/\' > '\/'; quantifiers extend to the right.
    Pred pred()
    {
        Pred a = pconj();
        while (accept("\\/"))
            a = Pred::bin(Pred::Or, std::move(a), pconj());
        return a;
    }
    Pred pconj()
    {
        Pred a = pstar();
        while (accept("/\\"))
            a = Pred::bin(Pred::And, std::move(a), pstar());
        return a;
    }
    Pred pstar()
    {
        Pred a = punary();
        while (accept("*"))
            a = Pred::bin(Pred::Star, std::move(a), punary());
        return a;
    }
    Pred punary()
    {
        if (accept("~"))
            return Pred::neg(punary());
        return patom();
    }
    Perm perm()
    {
        Perm p;
        p.num = number();
        if (accept("/"))
            p.den = number();
        return p;
    }
    Pred patom()
    {
        if (accept("emp"))
            return Pred::emp();
        if (accept("true"))
            return Pred::tt();
        if (accept("false"))
            return Pred::ff();
        if (accept("own")) {
            expect("(");
            std::string x = ident();
            expect(",");
            Perm p = perm();
            expect(")");
            return Pred::own(x, p);
        }
        if (at("exists") || at("forall")) {
            Pred::Kind k = toks_[pos_++].s == "exists" ? Pred::Exists : Pred::Forall;
            std::string a = ident();
            expect(".");
            metas_.push_back(a);
            Pred body = pred();
            metas_.pop_back();
            return Pred::quant(k, a, std::move(body));
        }
        if (at("(")) {
            size_t save = pos_;
            try {
                return pcompare();
            } catch (const SyntaxError&) {
                pos_ = save;
            }
            expect("(");
            Pred p = pred();
            expect(")");
            return p;
        }
        return pcompare();
    }
    Pred pcompare()
    {
        Expr a = expr(false);
        if (accept("="))
            return Pred::eq(std::move(a), expr(false));
        if (accept("|->")) {
            Perm p;
            if (peek().k == Tok::Num && !peek().spaced)
                p = perm();
            if (accept("-")) {
                if (peek().k == Tok::Num && !peek().spaced) {
                    --pos_;
                    return Pred::pts(std::move(a), p, expr(false));
                }
                std::string m = "_v" + std::to_string(fresh_++);
                return Pred::quant(Pred::Exists, m, Pred::pts(std::move(a), p, Expr::meta(m)));
            }
            return Pred::pts(std::move(a), p, expr(false));
        }
        fail("expected '=' or '|->'");
    }

    ProofTree proof()
    {
        ProofTree t;
        t.line = peek().line;
        t.col = peek().col;
        expect("(");
        std::string name = ident();
        int r = -1;
        for (int i = 0; i < 10; ++i)
            if (name == kRuleNames[i])
                r = i;
        if (r < 0)
            throw SyntaxError(t.line, t.col + 1, "unknown rule '" + name + "'");
        t.rule = static_cast<Rule>(r);
        expect("{");
        t.pre = pred();
        expect("}");
        expect("{");
        t.post = pred();
        expect("}");
        if (accept("[")) {
            params(t);
            expect("]");
        } else if (t.rule != Rule::SEQ && t.rule != Rule::DISJ && t.rule != Rule::PAR) {
            fail(std::string(rule_name(t.rule)) + " needs parameters");
        }
        while (at("("))
            t.sub.push_back(proof());
        expect(")");
        int want = rule_arity(t.rule);
        if (static_cast<int>(t.sub.size()) != want)
            throw SyntaxError(t.line, t.col,
                              std::string("arity mismatch: ") + rule_name(t.rule) + " expects " +
                                  std::to_string(want) + " premise(s), got " + std::to_string(t.sub.size()));
        return t;
    }
    void params(ProofTree& t)
    {
        switch (t.rule) {
        case Rule::AFF:
            t.cmd = atom();
            expect(";");
            t.aux = pred();
            expect(";");
            t.value = expr(false);
            break;
        case Rule::STORE: t.cmd = atom(); break;
        case Rule::LOAD:
            t.cmd = atom();
            expect(";");
            t.perm = perm();
            expect(";");
            t.value = expr(false);
            break;
        case Rule::IF: t.cond = bexpr(); break;
        case Rule::FRAME: t.aux = pred(); break;
        case Rule::RES:
            t.lock = ident();
            expect(":");
            t.aux = pred();
            break;
        case Rule::WHEN: t.lock = ident(); break;
        default: break;
        }
    }

private:
    std::vector<Tok> toks_;
    size_t pos_ = 0;
    std::vector<std::string> metas_;
    int fresh_ = 0;
};

void add_unique(std::vector<std::string>& v, const std::string& x)
{
    if (!x.empty() && std::find(v.begin(), v.end(), x) == v.end())
        v.push_back(x);
}

std::string show(const Cmd& c, int level)
{
    auto paren = [&](std::string s, int need) { return level > need ? "(" + s + ")" : s; };
    switch (c.k) {
    case Cmd::Skip: return "skip";
    case Cmd::Assign: return c.x + " := " + to_string(c.e);
    case Cmd::Load: return c.x + " := [" + to_string(c.e) + "]";
    case Cmd::Store: return "[" + to_string(c.e) + "] := " + to_string(c.e2);
    case Cmd::Malloc: return c.x + " := malloc(" + to_string(c.e) + ")";
    case Cmd::Dispose: return "dispose(" + to_string(c.e) + ")";
    case Cmd::Seq: return paren(show(c.sub[0], 0) + " ; " + show(c.sub[1], 1), 0);
    case Cmd::Par: return paren(show(c.sub[0], 1) + " || " + show(c.sub[1], 2), 1);
    case Cmd::If:
        return "if " + to_string(c.b) + " then " + show(c.sub[0], 2) + " else " + show(c.sub[1], 2);
    case Cmd::While: return "while " + to_string(c.b) + " do " + show(c.sub[0], 2);
    case Cmd::Resource: return "resource " + c.x + " do " + show(c.sub[0], 2);
    case Cmd::With: return "with " + c.x + " do " + show(c.sub[0], 2);
    }
    return "?";
}

}  // namespace

std::string to_string(const Cmd& c) { return show(c, 0); }

void cmd_vars(const Cmd& c, std::vector<std::string>& out)
{
    std::vector<std::string> v;
    if (c.k == Cmd::Assign || c.k == Cmd::Load || c.k == Cmd::Malloc)
        add_unique(out, c.x);
    free_vars(c.e, v);
    free_vars(c.e2, v);
    free_vars(c.b, v);
    for (const auto& x : v)
        add_unique(out, x);
    for (const Cmd& s : c.sub)
        cmd_vars(s, out);
}

void cmd_locks(const Cmd& c, std::vector<std::string>& out)
{
    if (c.k == Cmd::Resource || c.k == Cmd::With)
        add_unique(out, c.x);
    for (const Cmd& s : c.sub)
        cmd_locks(s, out);
}

Cmd parse_program(std::string_view text)
{
    Parser p(text);
    Cmd c = p.cmd();
    p.finish();
    return c;
}

Pred parse_predicate(std::string_view text)
{
    Parser p(text);
    Pred r = p.pred();
    p.finish();
    return r;
}

BExpr parse_bexpr(std::string_view text)
{
    Parser p(text);
    BExpr b = p.bexpr();
    p.finish();
    return b;
}

const char* rule_name(Rule r) { return kRuleNames[static_cast<int>(r)]; }

int rule_arity(Rule r)
{
    switch (r) {
    case Rule::AFF:
    case Rule::STORE:
    case Rule::LOAD: return 0;
    case Rule::RES:
    case Rule::WHEN:
    case Rule::FRAME: return 1;
    default: return 2;
    }
}

ProofTree parse_proof(std::string_view text)
{
    Parser p(text);
    ProofTree t = p.proof();
    p.finish();
    return t;
}

std::string to_string(const ProofTree& p)
{
    std::string s = std::string("(") + rule_name(p.rule) + " {" + to_string(p.pre) + "} {" + to_string(p.post) + "}";
    switch (p.rule) {
    case Rule::AFF: s += " [" + to_string(p.cmd) + " ; " + to_string(p.aux) + " ; " + to_string(p.value) + "]"; break;
    case Rule::STORE: s += " [" + to_string(p.cmd) + "]"; break;
    case Rule::LOAD:
        s += " [" + to_string(p.cmd) + " ; " + to_string(p.perm) + " ; " + to_string(p.value) + "]";
        break;
    case Rule::IF: s += " [" + to_string(p.cond) + "]"; break;
    case Rule::FRAME: s += " [" + to_string(p.aux) + "]"; break;
    case Rule::RES: s += " [" + p.lock + " : " + to_string(p.aux) + "]"; break;
    case Rule::WHEN: s += " [" + p.lock + "]"; break;
    default: s += " []"; break;
    }
    for (const ProofTree& q : p.sub)
        s += " " + to_string(q);
    return s + ")";
}

Cmd proof_command(const ProofTree& p)
{
    Cmd c;
    switch (p.rule) {
    case Rule::AFF:
    case Rule::STORE:
    case Rule::LOAD: return p.cmd;
    case Rule::IF:
        c.k = Cmd::If;
        c.b = p.cond;
        c.sub = {proof_command(p.sub[0]), proof_command(p.sub[1])};
        return c;
    case Rule::SEQ:
    case Rule::PAR:
        c.k = p.rule == Rule::SEQ ? Cmd::Seq : Cmd::Par;
        c.sub = {proof_command(p.sub[0]), proof_command(p.sub[1])};
        return c;
    case Rule::RES:
    case Rule::WHEN:
        c.k = p.rule == Rule::RES ? Cmd::Resource : Cmd::With;
        c.x = p.lock;
        c.sub = {proof_command(p.sub[0])};
        return c;
    case Rule::DISJ:
    case Rule::FRAME: return proof_command(p.sub[0]);
    }
    return c;
}

}  // namespace cobordcsl
