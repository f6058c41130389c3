#ifndef STACKLAB_GROUPOID_HPP
#define STACKLAB_GROUPOID_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "stacklab/group.hpp"

namespace stacklab {

using ObjId = std::uint32_t;
using ArrowId = std::uint32_t;

class FiniteGroupoid;
using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

struct ValidationFailure {
  std::string axiom;   // which axiom is violated
  std::string detail;  // the offending ids, human-readable
};

struct ValidationReport {
  std::vector<ValidationFailure> failures;
  bool ok() const { return failures.empty(); }
};

/// A finite groupoid: objects 0..num_objects-1, arrows 0..num_arrows-1 with
/// source/target, a composition table on composable pairs, identities and
/// inverses. Composition is diagrammatic: compose(f, g) is defined when
/// tgt(f) = src(g) and runs f first. Immutable after construction; the
/// hom-set index is memoized behind an internal lock.
class FiniteGroupoid {
public:
  struct Arrow {
    ObjId src;
    ObjId tgt;
  };

  FiniteGroupoid(std::uint32_t num_objects, std::vector<Arrow> arrows,
                 std::vector<ArrowId> identities, std::vector<ArrowId> inverses,
                 std::vector<std::array<ArrowId, 3>> compose_triples);

  /// The empty groupoid is legal; every operation returns empty results.
  static GroupoidPtr empty();

  std::uint32_t num_objects() const { return num_objects_; }
  std::uint32_t num_arrows() const {
    return static_cast<std::uint32_t>(arrows_.size());
  }

  ObjId src(ArrowId f) const { return arrows_[f].src; }
  ObjId tgt(ArrowId f) const { return arrows_[f].tgt; }
  ArrowId identity(ObjId x) const;
  ArrowId inverse(ArrowId f) const { return inverses_[f]; }

  bool composable(ArrowId f, ArrowId g) const { return tgt(f) == src(g); }
  /// compose(f, g): first f, then g. Throws ValidationError when the pair is
  /// not composable or missing from the table.
  ArrowId compose(ArrowId f, ArrowId g) const;

  /// Arrows x -> y in ascending id order; memoized.
  const std::vector<ArrowId> &hom(ObjId x, ObjId y) const;

  const std::vector<Arrow> &arrows() const { return arrows_; }
  const std::vector<ArrowId> &identities() const { return identities_; }
  const std::vector<ArrowId> &inverses() const { return inverses_; }
  /// Raw composition table as (f, g, fg) triples, sorted by (f, g).
  std::vector<std::array<ArrowId, 3>> compose_triples() const;

  /// Checks every groupoid axiom exhaustively and reports all violations
  /// with the offending ids; an empty report means the structure is valid.
  ValidationReport validate() const;

private:
  std::uint32_t num_objects_ = 0;
  std::vector<Arrow> arrows_;
  std::vector<ArrowId> identities_;
  std::vector<ArrowId> inverses_;
  std::unordered_map<std::uint64_t, ArrowId> compose_;

  mutable std::once_flag hom_once_;
  mutable std::vector<std::vector<std::vector<ArrowId>>> hom_index_;
};

/// A functor between finite groupoids, given by its object and arrow maps.
struct GroupoidFunctor {
  GroupoidPtr domain;
  GroupoidPtr codomain;
  std::vector<ObjId> obj_map;
  std::vector<ArrowId> arr_map;

  ObjId on_obj(ObjId x) const { return obj_map[x]; }
  ArrowId on_arr(ArrowId f) const { return arr_map[f]; }

  /// True iff src/tgt/identity/composition are preserved (exhaustive).
  bool check(std::string *why = nullptr) const;
};

GroupoidFunctor identity_functor(GroupoidPtr g);
GroupoidFunctor compose_functors(const GroupoidFunctor &first,
                                 const GroupoidFunctor &second);

/// A 2-morphism between parallel functors: one codomain arrow per domain
/// object, subject to the naturality squares.
struct NaturalTransformation {
  GroupoidFunctor source;
  GroupoidFunctor target;
  std::vector<ArrowId> component; // indexed by domain object
};

/// Exhaustively checks every naturality square
///   component(x) . target(u)  =  source(u) . component(y)
/// for u : x -> y, plus the typing of the components.
bool check_natural_transformation(const NaturalTransformation &nt);

ValidationReport validate_groupoid(const FiniteGroupoid &g);

/// The action groupoid of a left action: objects are the carrier points,
/// arrows are (g, x) : x -> act[g][x] with id g*|carrier|+x. Both action laws
/// are checked exhaustively first.
GroupoidPtr action_groupoid(GroupPtr group,
                            const std::vector<std::vector<ObjId>> &act);

/// B G: the action groupoid of G on one point.
GroupoidPtr classifying_groupoid(GroupPtr group);

/// For the action groupoid produced above, the arrow id of (g, x).
ArrowId action_arrow_id(const FiniteGroup &group, std::uint32_t carrier_size,
                        ElemId g, ObjId x);

/// The group of arrows x -> x. The product is a*b = compose(b, a), so the
/// isotropy of an action groupoid is literally the stabilizer subgroup of
/// the acting group. `arrow_of_element` labels group elements back to arrows.
struct IsotropyGroup {
  GroupPtr group;
  std::vector<ArrowId> arrow_of_element;
};
IsotropyGroup isotropy(const FiniteGroupoid &g, ObjId x);

/// Partition of objects into connected components (x ~ y iff Hom(x,y) is
/// nonempty). Classes are sorted internally and ordered by least object.
std::vector<std::vector<ObjId>> pi0(const FiniteGroupoid &g);

/// The orbit set X/R with its quotient map; for finite groupoids this is
/// pi0 with the discrete topology.
struct CoarseSpace {
  std::uint32_t num_points;
  std::vector<ObjId> projection; // object -> point
};
CoarseSpace coarse_space(const FiniteGroupoid &g);

/// The full subgroupoid on `sub`, with its inclusion functor.
struct RestrictedGroupoid {
  GroupoidPtr groupoid;
  GroupoidFunctor inclusion;
};
RestrictedGroupoid restrict_groupoid(GroupoidPtr g,
                                     const std::vector<ObjId> &sub);

/// Product groupoid g x h with the two projections (pairs in g-major order).
struct ProductGroupoid {
  GroupoidPtr groupoid;
  GroupoidFunctor proj_left;
  GroupoidFunctor proj_right;
  ObjId obj_pair(ObjId x, ObjId y) const;
  ArrowId arr_pair(ArrowId f, ArrowId g) const;
};
ProductGroupoid product_groupoid(GroupoidPtr g, GroupoidPtr h);

GroupoidFunctor diagonal_functor(GroupoidPtr g, const ProductGroupoid &gxg);

/// Disjoint union, objects and arrows of `a` first.
GroupoidPtr disjoint_union(const FiniteGroupoid &a, const FiniteGroupoid &b);

/// True iff there is a bijective functor with the given object/arrow maps;
/// `why` receives the first failure.
bool is_isomorphism_onto(const GroupoidFunctor &f, std::string *why = nullptr);

} // namespace stacklab

#endif
