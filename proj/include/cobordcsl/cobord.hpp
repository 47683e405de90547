#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cobordcsl/template.hpp"

namespace cobordcsl {

// A game of color i: a carrier graph labeled in Lambda[0, i].
struct Game {
    Template* tpl = nullptr;
    int color = 0;
    std::shared_ptr<const AsyncGraph> carrier;
    GraphHom lambda;
    bool pointed = false;  // the last carrier node is an added point
};
using GameP = std::shared_ptr<const Game>;

// The game (Lambda[0, i], id), and its error lift T(Lambda[0, i]).
GameP zero_game(Template& t, int color);
GameP zero_game_T(Template& t, int color);
GameP empty_game(Template& t, int color);

enum class Op { Leaf, Identity, Empty, Compose, Fill, Seq, Union, Par, Change, LiftT };
const char* op_name(Op o);

struct Cob {
    Template* tpl = nullptr;
    GameP in, out;
    AsyncGraph sup;
    GraphHom s, t, lambda;
    bool truncated = false;
    int point = -1;  // added point of the support, if any

    // How the cobordism was built; used to construct maps between
    // cobordisms assembled the same way.
    Op op = Op::Leaf;
    std::string tag;
    std::vector<std::shared_ptr<const Cob>> parts;
    // Support injections: Compose/Union/Fill one per part (Fill: its two
    // borders); Seq: left, right, then the fill's two borders.
    std::vector<GraphHom> inj;
    std::vector<GraphHom> inj_in, inj_out;   // border injections (Union)
    std::shared_ptr<const Pullback> pb[6];   // Par: sup1, sup2, in1, in2, out1, out2; Change: sup, in, out
    const SpanMonoidal* sm = nullptr;
    const SpanMonoidal::Border* bin = nullptr;
    const SpanMonoidal::Border* bout = nullptr;
    const AcuteSpan* span = nullptr;
    const AcuteSpan::Side* sin = nullptr;
    const AcuteSpan::Side* sout = nullptr;
};
using CobP = std::shared_ptr<const Cob>;

struct CobMap {
    GraphHom in, out, sup;
};

// Instruction cobordism: in border Lambda[0, ci], out border Lambda[0, co]
// (error-lifted when lift_out), one Code edge per selected Code edge of
// Lambda[1] from an in state to an out state, and the mixed tiles.
CobP leaf(Template& t, int ci, int co, const std::vector<char>& code_edges, bool lift_out, std::string tag);

CobP identity_cob(GameP g);
CobP empty_cob(Template& t, int ci, int co);
CobP compose(CobP a, CobP b);
CobP fill(GameP b, GameP a);
CobP seq(CobP a, CobP b);
// Disjoint union, borders recolored into ci / co.
CobP cob_union(CobP a, CobP b, int ci, int co);
CobP par(CobP a, CobP b, SpanMonoidal& sm);
// Pull along the left leg of the span, then push along the right leg.
CobP change(AcuteSpan& span, CobP a);
// Error lift of borders and support (S and L only).
CobP lift_T(CobP a);

Report check_cob(const Cob& c);
// Conditions on a well-formed cobordism: in labeling epi, support labeling a
// Frame 1-fibration, t monic, s and t with disjoint images.
Report check_structural(const Cob& c);

// Join of homs out of a jointly surjective family of injections.
GraphHom copair(const std::vector<const GraphHom*>& inj, const std::vector<GraphHom>& h, const AsyncGraph& cod);

// A map of cobordisms over a functor: commuting squares and labels.
Report is_simulation(const CobMap& m, const Cob& x, const Cob& y, const Functor& f);
// Both border squares of the map are pullbacks.
bool is_strict(const CobMap& m, const Cob& x, const Cob& y);

// Functorial action of the constructors, given maps of the parts.
CobMap map_compose(const Cob& x, const Cob& y, const CobMap& f1, const CobMap& f2);
CobMap map_seq(const Cob& x, const Cob& y, const CobMap& f1, const CobMap& f2);
CobMap map_fill(const Cob& x, const Cob& y, const GraphHom& fb, const GraphHom& fa);
CobMap map_union(const Cob& x, const Cob& y, const CobMap& f1, const CobMap& f2);
// f3: three-player functor of the span-monoidal supports.
CobMap map_par(const Cob& x, const Cob& y, const CobMap& f1, const CobMap& f2, const GraphHom& f3);
// fo: functor between the Lambda[1] of the span owners.
CobMap map_change(const Cob& x, const Cob& y, const CobMap& f, const GraphHom& fo);
CobMap map_identity(const Cob& x);
// Identity-shaped map between two cobordisms built with the same
// constructors, where b may replace empty parts of a by anything.
CobMap map_unfold(const Cob& a, const Cob& b);

// (s1 || s2) ; (t1 || t2)  ->  (s1 ; t1) || (s2 ; t2), over the identity.
CobMap hoare_map(const Cob& lhs, const Cob& rhs);

}  // namespace cobordcsl
