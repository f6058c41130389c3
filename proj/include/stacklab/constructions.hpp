#ifndef STACKLAB_CONSTRUCTIONS_HPP
#define STACKLAB_CONSTRUCTIONS_HPP

#include <cstdint>
#include <vector>

#include "stacklab/groupoid.hpp"

namespace stacklab {

/// Result of a 2-fiber product along f : Y -> X <- Z : g. Objects of
/// `total` are triples (y, z, a) with a : f(y) -> g(z), numbered in
/// lexicographic (y, z, a) order; arrows are triples (u, v, a) attached at
/// their source object, numbered lexicographically by (u, v, a).
struct FiberProductResult {
  GroupoidPtr total;
  GroupoidFunctor proj_left;   // onto domain of f
  GroupoidFunctor proj_right;  // onto domain of g
  NaturalTransformation two_cell; // f . proj_left  =>  g . proj_right

  struct ObjectTriple {
    ObjId y;
    ObjId z;
    ArrowId alpha;
  };
  struct ArrowTriple {
    ArrowId u;
    ArrowId v;
    ArrowId alpha; // the 2-cell component at the source object
  };
  std::vector<ObjectTriple> objects;
  std::vector<ArrowTriple> arrow_triples;
};

/// Homotopy fiber product of finite groupoids. Throws MismatchedBase when
/// the codomains are not the same groupoid instance.
FiberProductResult fiber_product(const GroupoidFunctor &f,
                                 const GroupoidFunctor &g);

/// The inertia groupoid: objects (x, a) with a : x -> x, arrows
/// gamma : (x, a) -> (x', gamma^-1 a gamma), plus the forgetful projection.
struct InertiaResult {
  GroupoidPtr total;
  GroupoidFunctor projection;
  struct ObjectPair {
    ObjId x;
    ArrowId automorphism;
  };
  std::vector<ObjectPair> objects;
};
InertiaResult inertia(GroupoidPtr g);

/// One entry per conjugacy class of G: the least-id representative and its
/// centralizer as a subgroup.
struct InertiaComponent {
  ElemId representative;
  Subgroup centralizer;
};
std::vector<InertiaComponent> inertia_of_BG(GroupPtr group);

/// The decomposition G = union of H'aK' for f : H -> G, g : K -> G, with
/// H' = f(H), K' = g(K). Stabilizers C_a = {(h,k) | f(h) a g(k)^-1 = a}
/// live inside H x K.
struct DoubleCosetDecomposition {
  GroupPtr ambient;
  DirectProduct hk;
  struct Entry {
    ElemId representative;      // least element of the coset
    std::vector<ElemId> coset;  // sorted ascending
    Subgroup stabilizer;        // C_a as a subgroup of H x K
  };
  std::vector<Entry> entries;
};
DoubleCosetDecomposition double_coset_fiber_product(const GroupHom &f,
                                                    const GroupHom &g);

/// One group acting on a finite carrier, with the equivariance data of a map
/// to another action: a group homomorphism plus a carrier map.
struct GroupAction {
  GroupPtr group;
  std::vector<std::vector<ObjId>> act; // act[g][x]
};

struct EquivariantMap {
  GroupHom hom;                 // e.g. H -> G
  std::vector<ObjId> carrier;   // e.g. Y -> X
};

/// P0 = (Y x Z) x_{XxX} (G x X) with the H x K action sending (y, z, d) to
/// (h.y, k.z, psi(k) d phi(h)^-1); returns the acting group, the carrier
/// triples and the resulting action groupoid.
struct ActionFiberProduct {
  DirectProduct acting; // H x K
  struct Triple {
    ObjId y;
    ObjId z;
    ElemId d; // arrow d : phi-image of y -> psi-image of z in [G x X => X]
  };
  std::vector<Triple> carrier;
  GroupoidPtr groupoid;
};
ActionFiberProduct action_fiber_product(const GroupAction &h_action,
                                        const GroupAction &k_action,
                                        const GroupAction &target,
                                        const EquivariantMap &phi,
                                        const EquivariantMap &psi);

/// The residue gerbe at x: the isotropy group I_x together with B I_x.
struct ResidueGerbe {
  IsotropyGroup inertia_group;
  GroupoidPtr classifying;
};
ResidueGerbe residue_gerbe(GroupoidPtr g, ObjId x);

/// The functor B(dom) -> B(cod) induced by a group homomorphism.
GroupoidFunctor classifying_functor(const GroupHom &hom, GroupoidPtr b_dom,
                                    GroupoidPtr b_cod);

/// Size guard for the construction outputs (arrow count), configurable via
/// STACKLAB_CAP; default 10^6 arrows. Exceeding it is a hard error.
std::uint64_t construction_arrow_cap();

} // namespace stacklab

#endif
