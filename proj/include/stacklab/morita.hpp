#ifndef STACKLAB_MORITA_HPP
#define STACKLAB_MORITA_HPP

#include <optional>
#include <string>
#include <vector>

#include "stacklab/groupoid.hpp"

namespace stacklab {

/// Certificate for the weak-equivalence check: either the witnessing data
/// (an arrow to an image object per codomain object, plus the number of
/// hom-set bijections verified) or the first failure.
struct WeakEquivalenceCertificate {
  bool ok = false;
  std::string failure;
  std::vector<std::pair<ObjId, ArrowId>> essential_witness;
  std::size_t hom_pairs_checked = 0;
};

/// True iff the functor is fully faithful and essentially surjective.
WeakEquivalenceCertificate is_weak_equivalence(const GroupoidFunctor &f);

/// One object per pi0 class (the least object id), with the inclusion of the
/// full subgroupoid and, for each object, a chosen arrow to its class
/// representative.
struct Skeleton {
  GroupoidPtr groupoid;
  GroupoidFunctor inclusion;
  std::vector<ArrowId> retraction; // per original object: arrow to its rep
};
Skeleton skeleton(GroupoidPtr g);

/// Discrete reading of elementary Morita equivalence: the object map is
/// surjective and arrows(domain) -> (X' x X') x_{X x X} arrows(codomain)
/// is a bijection.
bool is_elementary_morita(const GroupoidFunctor &f,
                          std::string *why = nullptr);

/// Explicit isomorphism search: invariant screening (order, element-order
/// multiset, abelianization invariants), then generator-image backtracking.
/// Caps at order 512 and generating sets of size 4.
std::optional<std::vector<ElemId>> group_isomorphic(const FiniteGroup &a,
                                                    const FiniteGroup &b);

/// Witness for Morita equivalence: matched pi0 classes (by their least
/// object) and an isotropy-group isomorphism per matched pair.
struct MoritaWitness {
  bool equivalent = false;
  std::string reason; // set when not equivalent
  struct ClassMatch {
    ObjId left_representative;
    ObjId right_representative;
    std::vector<ElemId> group_isomorphism;
  };
  std::vector<ClassMatch> matches;
};
MoritaWitness morita_equivalent(GroupoidPtr g, GroupoidPtr h);

/// The span of weak equivalences g <- skeleton(g) -> h promised by a
/// positive Morita witness; used to verify the decision independently.
struct MoritaSpan {
  Skeleton apex;
  GroupoidFunctor to_left;  // the skeleton inclusion
  GroupoidFunctor to_right; // skeleton -> h along the witness
};
MoritaSpan morita_span(GroupoidPtr g, GroupoidPtr h,
                       const MoritaWitness &witness);

} // namespace stacklab

#endif
