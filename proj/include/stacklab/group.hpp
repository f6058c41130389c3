#ifndef STACKLAB_GROUP_HPP
#define STACKLAB_GROUP_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stacklab/perm.hpp"

namespace stacklab {

using ElemId = std::uint32_t;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// A finite group with elements 0..order-1, id 0 the identity. Groups up to
/// order 512 carry a full multiplication table; larger groups must be given
/// by permutation generators and multiply on the fly through their stored
/// permutation realization.
class FiniteGroup {
public:
  static constexpr std::uint32_t kTableCap = 512;

  /// Builds from a row-major table; order is inferred. Associativity,
  /// identity and inverses are checked exhaustively.
  static GroupPtr from_table(std::string name, std::vector<ElemId> table);

  /// Builds by closing the generators; element 0 is the identity, the rest
  /// are numbered in BFS discovery order (generators in input order).
  static GroupPtr from_perm_gens(std::string name, std::uint32_t degree,
                                 std::vector<Perm> gens);

  /// Table plus a permutation realization; checks the two agree under the
  /// BFS labeling of the generated group.
  static GroupPtr from_table_and_perm_gens(std::string name,
                                           std::vector<ElemId> table,
                                           std::uint32_t degree,
                                           std::vector<Perm> gens);

  const std::string &name() const { return name_; }
  std::uint32_t order() const { return order_; }

  ElemId mul(ElemId a, ElemId b) const;
  ElemId inv(ElemId a) const;
  ElemId conj(ElemId g, ElemId a) const; // g a g^-1
  std::uint32_t element_order(ElemId a) const;

  bool has_table() const { return !table_.empty(); }
  const std::vector<ElemId> &table() const { return table_; }

  bool has_perm_realization() const { return !elem_perms_.empty(); }
  std::uint32_t perm_degree() const { return perm_degree_; }
  const std::vector<Perm> &perm_gens() const { return perm_gens_; }
  const Perm &elem_perm(ElemId a) const { return elem_perms_[a]; }

  /// Ascending multiset of element orders; cheap isomorphism invariant.
  std::vector<std::uint32_t> element_order_multiset() const;

  bool is_abelian() const;

  /// Greedy deterministic generating set: repeatedly adjoins the least
  /// element outside the subgroup generated so far. Empty for the trivial
  /// group.
  std::vector<ElemId> small_generating_set() const;

  /// Closure of a subset under multiplication and inverse, sorted.
  std::vector<ElemId> generated_subgroup(const std::vector<ElemId> &gens) const;

private:
  FiniteGroup() = default;

  std::string name_;
  std::uint32_t order_ = 0;
  std::vector<ElemId> table_; // row-major, empty when order > kTableCap
  std::vector<ElemId> inverse_;
  std::uint32_t perm_degree_ = 0;
  std::vector<Perm> perm_gens_;
  std::vector<Perm> elem_perms_; // one per element when realized
  std::map<Perm, ElemId> perm_index_;
};

/// A homomorphism given by its full element-image table.
struct GroupHom {
  GroupPtr domain;
  GroupPtr codomain;
  std::vector<ElemId> image;

  ElemId operator()(ElemId a) const { return image[a]; }

  /// Checks image(a*b) = image(a)*image(b) and image(0) = 0.
  bool is_homomorphism() const;
  bool is_injective() const;
};

GroupHom identity_hom(GroupPtr g);
GroupHom compose_homs(const GroupHom &first, const GroupHom &second);

/// The subgroup on `elements` (must be closed), relabeled 0..k-1 with the
/// identity first and the rest in ascending parent-id order. Returns the new
/// group together with its inclusion into the parent.
struct Subgroup {
  GroupPtr group;
  GroupHom inclusion;
};
Subgroup subgroup_from_elements(GroupPtr parent, std::vector<ElemId> elements,
                                std::string name);

/// H x K with pair ids h*|K|+k, plus the two projections.
struct DirectProduct {
  GroupPtr group;
  GroupHom proj_left;
  GroupHom proj_right;
  ElemId pair(ElemId h, ElemId k) const;
  std::pair<ElemId, ElemId> unpair(ElemId e) const;
};
DirectProduct direct_product(GroupPtr h, GroupPtr k);

/// Conjugacy classes, each sorted ascending; classes ordered by their least
/// element, which is the representative.
std::vector<std::vector<ElemId>> conjugacy_classes(const FiniteGroup &g);

std::vector<ElemId> centralizer_elements(const FiniteGroup &g, ElemId a);

// Stock groups used throughout the tests and the documentation.
GroupPtr make_trivial_group(std::string name = "1");
GroupPtr make_cyclic_group(std::uint32_t n, std::string name = "");
GroupPtr make_symmetric_group(std::uint32_t n, std::string name = "");
GroupPtr make_dihedral_group(std::uint32_t n, std::string name = ""); // order 2n
GroupPtr make_quaternion_group();                                     // Q8
GroupPtr make_alternating_group(std::uint32_t n, std::string name = "");
GroupPtr make_klein_four_group();

} // namespace stacklab

#endif
