#ifndef STACKLAB_GOG_HPP
#define STACKLAB_GOG_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stacklab/group.hpp"
#include "stacklab/rational.hpp"

namespace stacklab {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

/// A finite graph of groups: vertices and edges carry finite groups, and
/// each edge end carries an injective homomorphism of the edge group into
/// the incident vertex group. Loops and multiedges are allowed. The two
/// ends of an edge are ordered as listed; for a loop the first end is the
/// identified side of the HNN relation and the second the conjugated side.
class GraphOfGroups {
public:
  struct Vertex {
    std::string name;
    GroupPtr group;
  };
  struct Edge {
    std::string name;
    VertexId ends[2];
    GroupPtr group;
    GroupHom incl[2]; // edge group into the group of ends[0] / ends[1]
  };

  GraphOfGroups(std::vector<Vertex> vertices, std::vector<Edge> edges,
                VertexId basepoint);

  std::uint32_t num_vertices() const {
    return static_cast<std::uint32_t>(vertices_.size());
  }
  std::uint32_t num_edges() const {
    return static_cast<std::uint32_t>(edges_.size());
  }
  const Vertex &vertex(VertexId v) const { return vertices_[v]; }
  const Edge &edge(EdgeId e) const { return edges_[e]; }
  VertexId basepoint() const { return basepoint_; }

  bool is_connected() const;

  std::optional<VertexId> vertex_by_name(const std::string &name) const;

  /// Sum over vertices of 1/|G_v| minus sum over edges of 1/|G_e|.
  Rational euler_characteristic() const;

private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  VertexId basepoint_;
};

using GraphOfGroupsPtr = std::shared_ptr<const GraphOfGroups>;

/// Parses the line-oriented DSL (see the `docs/formats.md` grammar).
GraphOfGroupsPtr parse_gog(const std::string &text);

/// An oriented edge traversal: sign +1 runs from end 0 to end 1.
struct EdgeLetter {
  EdgeId edge;
  int sign; // +1 or -1
  VertexId from(const GraphOfGroups &g) const {
    return g.edge(edge).ends[sign > 0 ? 0 : 1];
  }
  VertexId to(const GraphOfGroups &g) const {
    return g.edge(edge).ends[sign > 0 ? 1 : 0];
  }
  EdgeLetter reversed() const { return {edge, -sign}; }
  bool operator==(const EdgeLetter &o) const {
    return edge == o.edge && sign == o.sign;
  }
};

/// A loop at the basepoint: alternating vertex-group elements and edge
/// letters whose underlying edge path is closed.
struct Word {
  struct Syllable {
    enum Kind { VertexElement, Edge } kind;
    VertexId vertex = 0; // for VertexElement
    ElemId element = 0;  // for VertexElement
    EdgeLetter letter{0, 1}; // for Edge
  };
  VertexId basepoint = 0;
  std::vector<Syllable> syllables;

  static Syllable elem(VertexId v, ElemId e) {
    Syllable s;
    s.kind = Syllable::VertexElement;
    s.vertex = v;
    s.element = e;
    return s;
  }
  static Syllable edge(EdgeId e, int sign) {
    Syllable s;
    s.kind = Syllable::Edge;
    s.letter = {e, sign};
    return s;
  }
};

/// Right-coset transversals of every edge-group image, with factorization
/// maps g = (edge-image part) * (representative). Representatives are the
/// least element of each coset, so the identity represents the trivial
/// coset. Frozen once per graph of groups.
class TransversalTables {
public:
  explicit TransversalTables(GraphOfGroupsPtr g);

  const GraphOfGroups &graph() const { return *graph_; }
  GraphOfGroupsPtr graph_ptr() const { return graph_; }

  /// The subgroup image of G_e in the vertex group at the given end.
  const std::vector<ElemId> &image_elements(EdgeId e, int end) const;
  /// Representative of the right coset (image * g).
  ElemId coset_rep(EdgeId e, int end, ElemId g) const;
  /// The factor a with g = a * rep, expressed in the *edge* group.
  ElemId image_factor_in_edge_group(EdgeId e, int end, ElemId g) const;
  /// Representatives of left cosets (g * image), least element each,
  /// ascending; used for tree-ball expansion.
  const std::vector<ElemId> &left_transversal(EdgeId e, int end) const;

private:
  struct EndTable {
    std::vector<ElemId> image;           // sorted image of G_e
    std::vector<ElemId> rep;             // per vertex-group element
    std::vector<ElemId> edge_factor;     // per vertex-group element
    std::vector<ElemId> left_reps;
  };
  GraphOfGroupsPtr graph_;
  std::vector<EndTable> tables_; // 2 per edge
};

/// Bass-Serre normal form: a leading basepoint-group element followed by
/// (edge letter, coset representative) steps, pinch-free.
struct ReducedWord {
  VertexId basepoint = 0;
  ElemId leading = 0;
  struct Step {
    EdgeLetter letter;
    ElemId rep; // coset representative at the target end of `letter`
  };
  std::vector<Step> steps;

  bool is_identity() const { return steps.empty() && leading == 0; }
  bool operator==(const ReducedWord &o) const;
};

/// Rewrites a loop word to its unique normal form. Idempotent; the result
/// is the identity exactly when the element is trivial in pi1.
ReducedWord reduce_word(const TransversalTables &tables, const Word &w);

bool words_equal(const TransversalTables &tables, const Word &w1,
                 const Word &w2);

Word reduced_to_word(const GraphOfGroups &g, const ReducedWord &r);

/// Checks the loop structure of a word; throws MalformedWord otherwise.
void check_word(const GraphOfGroups &g, const Word &w);

/// A finite presentation of pi1 of a connected graph of groups: one
/// generating set per vertex group plus one stable letter per non-tree
/// edge; relations are the vertex-group multiplication-table relations
/// over those generators, the spanning-tree edge identifications, and
/// t . incl_1(a) . t^-1 = incl_0(a) for every non-tree edge.
class Pi1Presentation {
public:
  struct Generator {
    enum Kind { VertexGen, StableLetter } kind;
    std::string symbol;
    VertexId vertex = 0; // VertexGen
    ElemId element = 0;  // VertexGen
    EdgeId edge = 0;     // StableLetter
  };
  using GenRef = std::pair<std::uint32_t, int>; // generator index, exponent +-1
  using Relation = std::vector<GenRef>;

  GraphOfGroupsPtr graph;
  VertexId basepoint = 0;
  std::vector<Generator> generators;
  std::vector<Relation> relations;
  std::vector<EdgeId> spanning_tree;       // edges in the BFS tree
  std::vector<bool> edge_in_tree;          // per edge
  // BFS geodesic from the basepoint to each vertex, as edge letters.
  std::vector<std::vector<EdgeLetter>> tree_path;
  // per vertex: factorization of each element over that vertex's generators
  std::vector<std::vector<std::vector<std::uint32_t>>> factorization;
  // per vertex: its generator indices into `generators`
  std::vector<std::vector<std::uint32_t>> vertex_generators;
  // per edge (non-tree): its stable-letter index
  std::vector<std::int64_t> stable_letter;

  std::optional<std::uint32_t>
  generator_by_symbol(const std::string &symbol) const;

  /// The relation as a loop word at the basepoint.
  Word relation_word(const Relation &rel) const;
  /// A single generator as a loop word at the basepoint.
  Word generator_word(std::uint32_t gen) const;
  /// A vertex-group element as a loop word (tree-conjugated).
  Word element_word(VertexId v, ElemId a) const;

  std::string display() const; // <a, b | a^2, b^3> style
};

Pi1Presentation pi1_presentation(GraphOfGroupsPtr g,
                                 std::optional<VertexId> basepoint = {});

/// One relation as a readable word, e.g. "a a b^-1".
std::string render_relation(const Pi1Presentation &p,
                            const Pi1Presentation::Relation &rel);

/// Renders a reduced word in presentation form: vertex elements over the
/// vertex generators, non-tree edge letters as stable letters, tree edges
/// silent. "1" for the identity.
std::string render_reduced(const Pi1Presentation &p, const ReducedWord &r);

/// Parses presentation-form input like "a a b^2 t^-1" into a loop word.
Word parse_presentation_word(const Pi1Presentation &p,
                             const std::string &text);

/// Smith normal form invariants of the abelianized presentation:
/// the torsion factors (> 1, each dividing the next) and the free rank.
struct AbelianInvariants {
  std::vector<std::uint64_t> torsion;
  std::uint32_t free_rank = 0;
  bool operator==(const AbelianInvariants &o) const {
    return torsion == o.torsion && free_rank == o.free_rank;
  }
  std::string str() const;
};
AbelianInvariants abelianization(const Pi1Presentation &p);

/// Smith-normal-form invariants of an integer relation matrix
/// (rows = relations); exposed for the test oracles.
AbelianInvariants
smith_invariants(std::vector<std::vector<std::int64_t>> rows,
                 std::uint32_t num_cols);

/// A ball of the Bass-Serre tree around the coset of the base vertex.
struct TreeBall {
  struct Node {
    VertexId base_vertex;      // orbit label
    std::uint32_t depth;
    std::string access;        // conjugacy data: the coset path from the root
  };
  struct TreeEdge {
    std::uint32_t from;
    std::uint32_t to;
    EdgeId base_edge;
  };
  std::vector<Node> nodes;
  std::vector<TreeEdge> edges;
  bool truncated = false; // true iff the ball reaches the radius bound
};
TreeBall bass_serre_ball(const TransversalTables &tables, VertexId basepoint,
                         std::uint32_t radius,
                         std::uint64_t node_cap = 100000);

/// The inertia graph of groups: one vertex per conjugacy class of each
/// vertex group, one edge per conjugacy class of each edge group, groups
/// the centralizers of the chosen least-id representatives. An edge class
/// [h] is incident to the vertex class of its image under the edge-end
/// inclusion; inclusions are conjugated into the centralizer of the class
/// representative by the least conjugator.
GraphOfGroupsPtr inertia_gog(GraphOfGroupsPtr g);

/// PASS report for the injectivity of every G_v -> pi1: reduces the
/// tree-conjugated inclusion of every nontrivial vertex-group element and
/// requires a non-identity normal form.
struct OmegaInjectivityReport {
  bool pass = false;
  std::vector<std::pair<VertexId, std::uint32_t>> checked; // per-vertex count
  std::string counterexample; // set when pass is false
};
OmegaInjectivityReport
omega_injectivity_certificate(const TransversalTables &tables);

/// The underlying graph with all groups forgotten.
struct PlainGraph {
  std::uint32_t num_vertices = 0;
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<std::string> vertex_names;
  std::vector<std::string> edge_names;
};
PlainGraph coarse_graph(const GraphOfGroups &g);

} // namespace stacklab

#endif
