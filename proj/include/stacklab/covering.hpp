#ifndef STACKLAB_COVERING_HPP
#define STACKLAB_COVERING_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stacklab/gog.hpp"

namespace stacklab {

/// A pi1-set of degree n: one permutation of {0..n-1} per presentation
/// generator. Permutation words act on the right: a word moves a point by
/// applying the images of its letters in word order.
struct Pi1Action {
  std::shared_ptr<const Pi1Presentation> presentation;
  std::uint32_t degree = 0;
  std::vector<Perm> images; // indexed like presentation->generators

  /// Where the word (over generator refs) sends the point.
  std::uint32_t apply(const Pi1Presentation::Relation &word,
                      std::uint32_t point) const;
};

/// True iff every presentation relation acts as the identity permutation;
/// otherwise reports the first failing relation.
struct ActionValidation {
  bool ok = false;
  std::string failing_relation;
};
ActionValidation validate_action(const Pi1Action &a);

bool is_connected_cover(const Pi1Action &a);

/// A covering graph of groups with its projection data. Over each base
/// vertex the covering vertices are the orbits of the vertex group on the
/// fiber; their groups are the stabilizers of the least orbit point.
/// Covering edge ends carry a coset position in the vertex group, which is
/// what path lifting consumes.
struct CoveringGoG {
  GraphOfGroupsPtr base;
  GraphOfGroupsPtr total;
  std::uint32_t degree = 0;

  struct VertexFiber {
    VertexId base_vertex;
    std::vector<std::uint32_t> orbit; // sorted fiber points
    ElemId anchor;                    // least orbit point
    GroupHom embedding;               // covering group -> base vertex group
  };
  struct EdgeFiber {
    EdgeId base_edge;
    std::vector<std::uint32_t> orbit; // sorted fiber points (first-end action)
    ElemId anchor;
    GroupHom embedding;   // covering edge group -> base edge group
    ElemId position[2];   // end attachment position d in the vertex group
  };
  std::vector<VertexFiber> vertex_fibers; // per total vertex
  std::vector<EdgeFiber> edge_fibers;     // per total edge
};

/// Builds the cover classified by the action. Throws InvalidAction when a
/// relation acts nontrivially.
CoveringGoG covering_from_action(GraphOfGroupsPtr g, const Pi1Action &a);

/// A fiber point of a cover over the base basepoint: a covering vertex over
/// the basepoint plus a right coset of its group in the base vertex group,
/// identified by the least coset element.
struct FiberPoint {
  std::uint32_t covering_vertex;
  ElemId coset_rep;
  bool operator==(const FiberPoint &o) const {
    return covering_vertex == o.covering_vertex && coset_rep == o.coset_rep;
  }
};

/// The fiber over the basepoint in a deterministic order.
std::vector<FiberPoint> cover_fiber(const CoveringGoG &c);

/// Lifts a loop word through the covering structure, starting at `start`.
FiberPoint lift_path(const CoveringGoG &c, const Word &loop,
                     const FiberPoint &start);

/// The permutation action of each presentation generator on the fiber,
/// computed by path lifting through the orbit data.
Pi1Action monodromy(const CoveringGoG &c,
                    std::shared_ptr<const Pi1Presentation> presentation);

/// True iff the stabilizer of the fiber point inside the image of G_v is
/// exactly the covering vertex group over that orbit (conjugated to the
/// point); the cartesian-square identity at one point.
bool inertia_cartesian_check(const CoveringGoG &c, const Pi1Action &a,
                             VertexId v, std::uint32_t fiber_point);

/// Radius-r ball of the universal cover; for a graph of groups this is the
/// Bass-Serre tree, so this delegates to bass_serre_ball.
TreeBall universal_cover_ball(const TransversalTables &tables,
                              std::uint32_t radius,
                              std::uint64_t node_cap = 100000);

/// Canonical form of an action under simultaneous conjugation: per-orbit
/// minimal BFS relabelings, components sorted. Equal forms iff conjugate.
std::vector<std::uint32_t> action_canonical_form(const Pi1Action &a);

bool actions_conjugate(const Pi1Action &a, const Pi1Action &b);

/// All transitive actions of degree <= n_max up to simultaneous
/// conjugation, by backtracking over generator images with relation
/// pruning. The cap guards the search space (default 7, STACKLAB_CAP aside).
std::vector<Pi1Action>
enumerate_actions(std::shared_ptr<const Pi1Presentation> presentation,
                  std::uint32_t n_max, std::uint32_t cap = 7);

} // namespace stacklab

#endif
