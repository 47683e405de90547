#pragma once

#include <functional>
#include <map>
#include <memory>
#include <unordered_map>
#include <array>
#include <string>
#include <vector>

#include "cobordcsl/agraph.hpp"
#include "cobordcsl/machine.hpp"
#include "cobordcsl/seplogic.hpp"

namespace cobordcsl {

enum class Kind { S, L, Sep };
const char* kind_name(Kind k);

// Inverse tables of a monic hom, -1 off the image.
struct Inverse {
    std::vector<int> node, edge, tile;
    Inverse() = default;
    Inverse(const GraphHom& mono, const AsyncGraph& cod);
};
// h followed by the inverse of a mono; throws std::logic_error off the image.
GraphHom pull_into(const GraphHom& h, const Inverse& inv);

struct Color {
    Pred pred;
    Bitset sat;       // Sep: satisfying logical states of the code part
    AsyncGraph zero;  // Lambda[0, i]
    GraphHom inc;     // Lambda[0, i] -> Lambda[1]
    Inverse inv;
};

// The internal opcategory of one machine model at one lock context.
struct Template {
    Kind kind = Kind::S;
    ModelConfig cfg;    // locks = the current lock context
    LockContext gamma;  // Sep only
    std::shared_ptr<StatefulModel> S;
    std::shared_ptr<StatelessModel> L;
    std::shared_ptr<SepModel> sep;
    Satisfier* sat = nullptr;
    Model two;          // Lambda[1] with its edge labels
    std::vector<std::unique_ptr<Color>> colors;

    struct Mult {
        AsyncGraph two;
        GraphHom il, ir, mu;
    };

    const AsyncGraph& one() const { return two.pg.g; }
    int error() const { return two.pg.point; }
    int color_of(const Pred& p);
    const Color& color(int i) const { return *colors[i]; }
    const Mult& mult(int j);
    std::string node_label(int v) const;
    std::string edge_label(int e) const;
    // The instruction carried by an edge of Lambda[1] (S and Sep).
    int instr_of(int e) const { return two.edge_label[e]; }

    // Opaque per-template cache used by the cobordism layer.
    std::map<std::pair<int, int>, std::shared_ptr<const void>> cache;

private:
    std::map<int, Mult> mults_;
};

std::unique_ptr<Template> make_template_S(const ModelConfig& cfg, const Alphabet& alpha);
std::unique_ptr<Template> make_template_L(const ModelConfig& cfg);
std::unique_ptr<Template> make_template_Sep(const ModelConfig& cfg, const std::vector<int>& keys,
                                            const LockContext& gamma, const Alphabet& alpha, Satisfier& sat);

// Polyad laws: mu . il = id, mu . ir = id, and associativity over the
// triple pushout. Returns an empty report when all hold.
Report check_polyad_laws(Template& t, int color);
// Cospan legs: monic, Frame 1-fibrations at source and target, 2-fibrations.
Report check_legs(const Template& t, int color);

// The span-monoidal structure: three-player support with pick and pince.
struct SpanMonoidal {
    Template* base = nullptr;
    Model three;
    GraphHom pick_l, pick_r, pince;
    struct Border {
        AsyncGraph g;
        GraphHom inc;             // -> three
        GraphHom pick_l, pick_r;  // -> zero of colors i, j
        GraphHom pince;           // -> zero of color k
        int ci = 0, cj = 0, ck = 0;
    };
    std::shared_ptr<SepModel> sep3;
    const Border& border(int ci, int cj);

private:
    std::map<std::pair<int, int>, std::unique_ptr<Border>> borders_;
};

std::unique_ptr<SpanMonoidal> make_span_monoidal(Template& base);

// Hom between Lambda[1] graphs of two templates, with the induced color map.
struct Functor {
    Template* src = nullptr;
    Template* dst = nullptr;
    GraphHom one;    // src Lambda[1] -> dst Lambda[1]
    GraphHom three;  // between span-monoidal supports, when built
    std::function<int(int)> color_map = [](int c) { return c; };
    // The border component, derived from one.
    GraphHom zero(int color) const;
};

// u : Sigma_S -> Sigma_L (memory forgotten, instructions to lock instructions).
Functor functor_u(Template& s, Template& l, SpanMonoidal* s3 = nullptr, SpanMonoidal* l3 = nullptr);
// u_Sep : Sigma_Sep(Gamma) -> Sigma_S(dom Gamma) (erasure).
Functor functor_u_sep(Template& sep, Template& s, SpanMonoidal* sep3 = nullptr, SpanMonoidal* s3 = nullptr);

// An acute span  left <- apex -> right of internal functors. The left leg
// is plain. Border apexes are built per color of the left template.
struct AcuteSpan {
    Template* left = nullptr;
    Template* right = nullptr;
    AsyncGraph apex;
    GraphHom lleg, rleg;
    struct Side {
        AsyncGraph g;
        GraphHom lleg;  // -> left zero(color)
        GraphHom rleg;  // -> right zero(rcolor)
        GraphHom inc;   // -> apex
        int rcolor = 0;
    };
    // The apex is a subgraph of owner's Lambda[1]; sides are subgraphs of
    // owner's borders.
    Template* owner = nullptr;
    GraphHom apex_inc;
    Inverse apex_inv;
    std::function<bool(int)> side_keep;          // owner Lambda[1] node kept on borders
    std::function<int(int)> side_owner_color;    // left color -> owner color
    std::function<int(int)> side_right_color;    // left color -> right color
    const Side& side(int color);

private:
    std::map<int, std::unique_ptr<Side>> sides_;
};

// Hiding r: apex = left template without Environment P(r)/V(r), borders
// restricted to r unheld; right leg gives the lock to the Code.
std::unique_ptr<AcuteSpan> hide_span(Template& inner, Template& outer, const std::string& r);
// Critical section (S/L): apex = inner template without Code P(r)/V(r); the
// left leg forgets r into the body's template.
std::unique_ptr<AcuteSpan> when_span(Template& body, Template& outer, const std::string& r);
// Critical section (Sep): push along sigma -> sigma[r -> C], as a span with identity left leg.
std::unique_ptr<AcuteSpan> when_push_sep(Template& body, Template& outer, const std::string& r);

// Hom derivation: extend a node map to edges and tiles by looking up, in the
// codomain, the edge with the mapped endpoints and mapped label.
struct Key3Hash {
    std::size_t operator()(const std::array<int, 3>& k) const
    {
        std::uint64_t h = static_cast<std::uint32_t>(k[0]);
        h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(k[1]);
        h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(k[2]);
        return static_cast<std::size_t>(h ^ h >> 29);
    }
};
using EdgeMap3 = std::unordered_map<std::array<int, 3>, int, Key3Hash>;

struct LabelIndex {
    EdgeMap3 edges;  // (src, tgt, label edge) -> edge
    TileIndex tiles;
    LabelIndex(const AsyncGraph& g, const GraphHom& lambda);
};

// Edge lookup in a model by (src, tgt, label * 8 + polarity).
EdgeMap3 model_edge_index(const Model& m);
inline int pol_key(int label, Pol p) { return label * 8 + static_cast<int>(p); }
// Builds a hom into a model from a node map and an edge relabeling; tiles
// follow by boundary. Throws std::logic_error when an image is missing.
GraphHom map_into_model(const AsyncGraph& dom, const std::function<int(int)>& node_fn,
                        const std::function<int(int)>& edge_key_fn, const Model& cod, const EdgeMap3& cod_index,
                        const TileIndex& cod_tiles);
// Returns false (and leaves out partial) if some edge or tile has no image.
bool derive_hom(const AsyncGraph& dom, const GraphHom& dom_lambda, const GraphHom& label_map,
                const std::vector<int>& node_map, const AsyncGraph& cod, const LabelIndex& cod_index,
                GraphHom& out);

}  // namespace cobordcsl
