#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "helpers.hpp"
#include "stacklab/constructions.hpp"
#include "stacklab/errors.hpp"
#include "stacklab/morita.hpp"

using namespace stacklab;
using namespace stacklab::testing;

namespace {

ElemId element_of_order(const FiniteGroup &g, std::uint32_t order) {
  for (ElemId a = 0; a < g.order(); ++a)
    if (g.element_order(a) == order)
      return a;
  REQUIRE(false);
  return 0;
}

GroupHom cyclic_into(GroupPtr cyclic, GroupPtr target, ElemId generator_img) {
  GroupHom h;
  h.domain = cyclic;
  h.codomain = target;
  h.image.resize(cyclic->order());
  ElemId cur = 0;
  for (ElemId a = 0; a < cyclic->order(); ++a) {
    h.image[a] = cur;
    cur = target->mul(cur, generator_img);
  }
  REQUIRE(h.is_homomorphism());
  return h;
}

/// Independent oracle: the category of triples built directly from the
/// object/arrow description, with composition recovered by search.
struct OracleFiberProduct {
  GroupoidPtr groupoid;
  std::vector<std::tuple<ObjId, ObjId, ArrowId>> objects; // z-major order
  std::vector<std::tuple<ObjId, ArrowId, ArrowId>> arrows; // (src, u, v)
};

OracleFiberProduct oracle_fiber_product(const GroupoidFunctor &f,
                                        const GroupoidFunctor &g) {
  const auto &Y = *f.domain;
  const auto &Z = *g.domain;
  const auto &X = *f.codomain;
  OracleFiberProduct out;
  for (ObjId z = 0; z < Z.num_objects(); ++z)
    for (ObjId y = 0; y < Y.num_objects(); ++y)
      for (ArrowId alpha = 0; alpha < X.num_arrows(); ++alpha)
        if (X.src(alpha) == f.obj_map[y] && X.tgt(alpha) == g.obj_map[z])
          out.objects.push_back({y, z, alpha});
  std::vector<FiniteGroupoid::Arrow> arrows;
  for (std::size_t i = 0; i < out.objects.size(); ++i) {
    auto [y1, z1, a] = out.objects[i];
    for (std::size_t j = 0; j < out.objects.size(); ++j) {
      auto [y2, z2, b] = out.objects[j];
      for (ArrowId u : Y.hom(y1, y2))
        for (ArrowId v : Z.hom(z1, z2))
          if (X.compose(f.arr_map[u], b) == X.compose(a, g.arr_map[v])) {
            out.arrows.push_back({static_cast<ObjId>(i), u, v});
            arrows.push_back({static_cast<ObjId>(i),
                              static_cast<ObjId>(j)});
          }
    }
  }
  auto arrow_index = [&](ObjId src, ArrowId u, ArrowId v) {
    for (std::size_t k = 0; k < out.arrows.size(); ++k)
      if (out.arrows[k] == std::make_tuple(src, u, v))
        return static_cast<ArrowId>(k);
    REQUIRE(false);
    return ArrowId(0);
  };
  std::vector<ArrowId> identities(out.objects.size());
  for (std::size_t i = 0; i < out.objects.size(); ++i) {
    auto [y, z, a] = out.objects[i];
    identities[i] = arrow_index(static_cast<ObjId>(i), Y.identity(y),
                                Z.identity(z));
  }
  std::vector<ArrowId> inverses(out.arrows.size());
  std::vector<std::array<ArrowId, 3>> triples;
  for (std::size_t k = 0; k < out.arrows.size(); ++k) {
    auto [i, u, v] = out.arrows[k];
    ObjId j = arrows[k].tgt;
    inverses[k] = arrow_index(j, Y.inverse(u), Z.inverse(v));
    for (std::size_t k2 = 0; k2 < out.arrows.size(); ++k2) {
      auto [i2, u2, v2] = out.arrows[k2];
      if (i2 != j)
        continue;
      triples.push_back({static_cast<ArrowId>(k), static_cast<ArrowId>(k2),
                         arrow_index(i, Y.compose(u, u2), Z.compose(v, v2))});
    }
  }
  out.groupoid = std::make_shared<FiniteGroupoid>(
      static_cast<std::uint32_t>(out.objects.size()), std::move(arrows),
      std::move(identities), std::move(inverses), std::move(triples));
  return out;
}

/// Structural comparison of the implementation with the oracle.
void check_against_oracle(const GroupoidFunctor &f,
                          const GroupoidFunctor &g) {
  auto fp = fiber_product(f, g);
  auto oracle = oracle_fiber_product(f, g);
  REQUIRE(validate_groupoid(*fp.total).ok());
  REQUIRE(validate_groupoid(*oracle.groupoid).ok());
  REQUIRE(fp.objects.size() == oracle.objects.size());
  REQUIRE(fp.total->num_arrows() == oracle.groupoid->num_arrows());

  std::map<std::tuple<ObjId, ObjId, ArrowId>, ObjId> fp_obj;
  for (std::size_t i = 0; i < fp.objects.size(); ++i)
    fp_obj[{fp.objects[i].y, fp.objects[i].z, fp.objects[i].alpha}] =
        static_cast<ObjId>(i);
  std::map<std::tuple<ObjId, ArrowId, ArrowId>, ArrowId> fp_arr;
  for (std::size_t k = 0; k < fp.arrow_triples.size(); ++k) {
    const auto &t = fp.arrow_triples[k];
    ObjId src = fp.total->src(static_cast<ArrowId>(k));
    fp_arr[{src, t.u, t.v}] = static_cast<ArrowId>(k);
  }

  GroupoidFunctor iso;
  iso.domain = oracle.groupoid;
  iso.codomain = fp.total;
  for (const auto &[y, z, alpha] : oracle.objects)
    iso.obj_map.push_back(fp_obj.at({y, z, alpha}));
  for (const auto &[src, u, v] : oracle.arrows)
    iso.arr_map.push_back(fp_arr.at({iso.obj_map[src], u, v}));
  std::string why;
  CHECK_MESSAGE(is_isomorphism_onto(iso, &why), why);

  // projections and the 2-cell witness
  CHECK(fp.proj_left.check());
  CHECK(fp.proj_right.check());
  CHECK(check_natural_transformation(fp.two_cell));
  // object count identity
  std::size_t expected = 0;
  for (ObjId y = 0; y < f.domain->num_objects(); ++y)
    for (ObjId z = 0; z < g.domain->num_objects(); ++z)
      expected += f.codomain->hom(f.obj_map[y], g.obj_map[z]).size();
  CHECK(fp.objects.size() == expected);
}

std::vector<std::size_t> sorted_isotropy_orders(const FiniteGroupoid &g) {
  std::vector<std::size_t> out;
  for (const auto &cls : pi0(g))
    out.push_back(isotropy(g, cls[0]).group->order());
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST_CASE("fiber product requires a shared base") {
  auto a = classifying_groupoid(make_cyclic_group(2));
  auto b = classifying_groupoid(make_cyclic_group(2));
  auto ida = identity_functor(a);
  auto idb = identity_functor(b);
  CHECK_THROWS_AS(fiber_product(ida, idb), Error);
}

TEST_CASE("A x_A A along identities is equivalent to A") {
  for (GroupoidPtr a :
       {classifying_groupoid(make_symmetric_group(3)), z2_swap_groupoid(),
        unit_groupoid(2)}) {
    auto id = identity_functor(a);
    auto fp = fiber_product(id, id);
    REQUIRE(validate_groupoid(*fp.total).ok());
    CHECK(morita_equivalent(fp.total, a).equivalent);
  }
}

TEST_CASE("BZ2 x_BS3 BZ3 along subgroup inclusions is a point") {
  auto s3 = make_symmetric_group(3);
  auto z2 = make_cyclic_group(2);
  auto z3 = make_cyclic_group(3);
  auto bs3 = classifying_groupoid(s3);
  auto bz2 = classifying_groupoid(z2);
  auto bz3 = classifying_groupoid(z3);
  auto f = classifying_functor(
      cyclic_into(z2, s3, element_of_order(*s3, 2)), bz2, bs3);
  auto g = classifying_functor(
      cyclic_into(z3, s3, element_of_order(*s3, 3)), bz3, bs3);
  REQUIRE(f.check());
  REQUIRE(g.check());
  auto fp = fiber_product(f, g);
  CHECK(fp.objects.size() == 6);
  CHECK(pi0(*fp.total).size() == 1);
  CHECK(isotropy(*fp.total, 0).group->order() == 1);
  CHECK(morita_equivalent(fp.total, unit_groupoid()).equivalent);
  check_against_oracle(f, g);
}

TEST_CASE("BZ2 x_BZ2 BZ2 along identities is BZ2") {
  auto z2 = make_cyclic_group(2);
  auto bz2 = classifying_groupoid(z2);
  auto id = identity_functor(bz2);
  auto fp = fiber_product(id, id);
  CHECK(fp.objects.size() == 2);
  CHECK(pi0(*fp.total).size() == 1);
  CHECK(isotropy(*fp.total, 0).group->order() == 2);
  CHECK(morita_equivalent(fp.total, bz2).equivalent);
  check_against_oracle(id, id);
}

TEST_CASE("universal-property oracle over a corpus of functor pairs") {
  auto s3 = make_symmetric_group(3);
  auto z2 = make_cyclic_group(2);
  auto z3 = make_cyclic_group(3);
  auto bs3 = classifying_groupoid(s3);
  auto bz2 = classifying_groupoid(z2);
  auto bz3 = classifying_groupoid(z3);
  auto swap = z2_swap_groupoid();
  auto f_incl = classifying_functor(
      cyclic_into(z2, s3, element_of_order(*s3, 2)), bz2, bs3);
  auto g_incl = classifying_functor(
      cyclic_into(z3, s3, element_of_order(*s3, 3)), bz3, bs3);

  // swap -> BZ2 collapse functor
  GroupoidFunctor collapse;
  collapse.domain = swap;
  collapse.codomain = bz2;
  collapse.obj_map = {0, 0};
  collapse.arr_map.resize(swap->num_arrows());
  for (ArrowId a = 0; a < swap->num_arrows(); ++a)
    collapse.arr_map[a] = a / 2; // (g, x) -> g
  REQUIRE(collapse.check());

  std::vector<std::pair<GroupoidFunctor, GroupoidFunctor>> pairs{
      {f_incl, g_incl},
      {f_incl, f_incl},
      {g_incl, g_incl},
      {identity_functor(bs3), f_incl},
      {identity_functor(bz2), collapse},
      {collapse, collapse},
      {identity_functor(swap), identity_functor(swap)},
  };
  for (const auto &[f, g] : pairs)
    check_against_oracle(f, g);
}

TEST_CASE("inertia of a unit groupoid is itself") {
  auto u3 = unit_groupoid(3);
  auto in = inertia(u3);
  CHECK(in.objects.size() == 3);
  std::string why;
  GroupoidFunctor iso;
  iso.domain = in.total;
  iso.codomain = u3;
  iso.obj_map = in.projection.obj_map;
  iso.arr_map = in.projection.arr_map;
  CHECK(is_isomorphism_onto(iso, &why));
}

TEST_CASE("inertia of BS3 has one component per conjugacy class") {
  auto s3 = make_symmetric_group(3);
  auto in = inertia(classifying_groupoid(s3));
  REQUIRE(validate_groupoid(*in.total).ok());
  CHECK(in.objects.size() == 6);
  CHECK(in.projection.check());
  auto classes = pi0(*in.total);
  CHECK(classes.size() == 3);
  CHECK(sorted_isotropy_orders(*in.total) ==
        std::vector<std::size_t>{2, 3, 6});
}

TEST_CASE("inertia of an abelian BG is one copy of BG per element") {
  auto z4 = make_cyclic_group(4);
  auto in = inertia(classifying_groupoid(z4));
  auto classes = pi0(*in.total);
  CHECK(classes.size() == 4);
  for (const auto &cls : classes)
    CHECK(isotropy(*in.total, cls[0]).group->order() == 4);
}

TEST_CASE("inertia agrees with the restricted diagonal self fiber product") {
  for (GroupoidPtr g :
       {classifying_groupoid(make_symmetric_group(3)), z2_swap_groupoid(),
        coset_action_groupoid(make_cyclic_group(4), {2})}) {
    auto prod = product_groupoid(g, g);
    auto diag = diagonal_functor(g, prod);
    auto fp = fiber_product(diag, diag);
    // restrict to objects whose 2-cell has an identity second component
    std::vector<ObjId> keep;
    for (std::size_t i = 0; i < fp.objects.size(); ++i) {
      const auto &o = fp.objects[i];
      if (o.y != o.z)
        continue;
      ArrowId alpha = o.alpha; // arrow in g x g
      ArrowId second = prod.proj_right.arr_map[alpha];
      if (second == g->identity(o.y))
        keep.push_back(static_cast<ObjId>(i));
    }
    auto restricted = restrict_groupoid(fp.total, keep);
    auto in = inertia(g);

    // explicit isomorphism (x, a) -> (x, x, (a, id))
    std::map<ObjId, ObjId> fp_to_restricted;
    for (std::size_t i = 0; i < keep.size(); ++i)
      fp_to_restricted[keep[i]] = static_cast<ObjId>(i);
    std::map<std::tuple<ObjId, ObjId, ArrowId>, ObjId> fp_obj;
    for (std::size_t i = 0; i < fp.objects.size(); ++i)
      fp_obj[{fp.objects[i].y, fp.objects[i].z, fp.objects[i].alpha}] =
          static_cast<ObjId>(i);
    std::map<std::tuple<ArrowId, ArrowId, ArrowId>, ArrowId> fp_arr;
    for (std::size_t k = 0; k < fp.arrow_triples.size(); ++k)
      fp_arr[{fp.arrow_triples[k].u, fp.arrow_triples[k].v,
              fp.arrow_triples[k].alpha}] = static_cast<ArrowId>(k);
    std::map<ArrowId, ArrowId> fp_arr_to_restricted;
    for (std::size_t k = 0; k < restricted.inclusion.arr_map.size(); ++k)
      fp_arr_to_restricted[restricted.inclusion.arr_map[k]] =
          static_cast<ArrowId>(k);

    GroupoidFunctor iso;
    iso.domain = in.total;
    iso.codomain = restricted.groupoid;
    for (const auto &o : in.objects) {
      ArrowId pair_arrow = prod.arr_pair(o.automorphism,
                                         g->identity(o.x));
      iso.obj_map.push_back(
          fp_to_restricted.at(fp_obj.at({o.x, o.x, pair_arrow})));
    }
    for (ArrowId k = 0; k < in.total->num_arrows(); ++k) {
      ObjId src = in.total->src(k);
      ArrowId gamma = in.projection.arr_map[k];
      ArrowId pair_arrow = prod.arr_pair(in.objects[src].automorphism,
                                         g->identity(in.objects[src].x));
      iso.arr_map.push_back(fp_arr_to_restricted.at(
          fp_arr.at({gamma, gamma, pair_arrow})));
    }
    std::string why;
    CHECK_MESSAGE(is_isomorphism_onto(iso, &why), why);
    // and the coarser statement: inertia is equivalent to the full
    // diagonal self fiber product
    CHECK(morita_equivalent(in.total, fp.total).equivalent);
  }
}

TEST_CASE("inertia_of_BG lists conjugacy classes with centralizers") {
  auto trivial = make_trivial_group();
  auto entries = inertia_of_BG(trivial);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].centralizer.group->order() == 1);

  auto s3 = make_symmetric_group(3);
  auto s3_entries = inertia_of_BG(s3);
  REQUIRE(s3_entries.size() == 3);
  std::vector<std::size_t> orders;
  for (const auto &e : s3_entries)
    orders.push_back(e.centralizer.group->order());
  std::sort(orders.begin(), orders.end());
  CHECK(orders == std::vector<std::size_t>{2, 3, 6});

  auto z4_entries = inertia_of_BG(make_cyclic_group(4));
  REQUIRE(z4_entries.size() == 4);
  for (const auto &e : z4_entries)
    CHECK(e.centralizer.group->order() == 4);
}

TEST_CASE("inertia(BG) matches inertia_of_BG componentwise") {
  for (GroupPtr g : {make_symmetric_group(3), make_cyclic_group(4),
                     make_dihedral_group(4), make_quaternion_group(),
                     make_alternating_group(4)}) {
    auto in = inertia(classifying_groupoid(g));
    auto entries = inertia_of_BG(g);
    auto classes = pi0(*in.total);
    REQUIRE(classes.size() == entries.size());
    std::multiset<std::size_t> inertia_orders, centralizer_orders;
    for (const auto &cls : classes)
      inertia_orders.insert(isotropy(*in.total, cls[0]).group->order());
    for (const auto &e : entries)
      centralizer_orders.insert(e.centralizer.group->order());
    CHECK(inertia_orders == centralizer_orders);
    // strong form: the component through (pt, a) has isotropy isomorphic
    // to the centralizer of a
    for (const auto &e : entries) {
      ObjId obj = UINT32_MAX;
      for (std::size_t i = 0; i < in.objects.size(); ++i)
        if (in.objects[i].automorphism == e.representative)
          obj = static_cast<ObjId>(i);
      REQUIRE(obj != UINT32_MAX);
      auto iso = isotropy(*in.total, obj);
      CHECK(group_isomorphic(*iso.group, *e.centralizer.group).has_value());
    }
  }
}

TEST_CASE("double cosets: identity homs give one coset with diagonal") {
  auto s3 = make_symmetric_group(3);
  auto dec = double_coset_fiber_product(identity_hom(s3), identity_hom(s3));
  REQUIRE(dec.entries.size() == 1);
  CHECK(dec.entries[0].representative == 0);
  CHECK(dec.entries[0].coset.size() == 6);
  CHECK(dec.entries[0].stabilizer.group->order() == 6);
  CHECK(group_isomorphic(*dec.entries[0].stabilizer.group, *s3).has_value());
}

TEST_CASE("double cosets of Z2 and Z3 in S3") {
  auto s3 = make_symmetric_group(3);
  auto z2 = make_cyclic_group(2);
  auto z3 = make_cyclic_group(3);
  auto f = cyclic_into(z2, s3, element_of_order(*s3, 2));
  auto g = cyclic_into(z3, s3, element_of_order(*s3, 3));
  auto dec = double_coset_fiber_product(f, g);
  REQUIRE(dec.entries.size() == 1);
  CHECK(dec.entries[0].coset.size() == 6);
  CHECK(dec.entries[0].stabilizer.group->order() == 1);
}

TEST_CASE("double cosets of trivial subgroups enumerate the group") {
  auto s3 = make_symmetric_group(3);
  auto triv = make_trivial_group();
  GroupHom into = hom_of(triv, s3, {0});
  auto dec = double_coset_fiber_product(into, into);
  CHECK(dec.entries.size() == 6);
  for (const auto &e : dec.entries) {
    CHECK(e.coset.size() == 1);
    CHECK(e.stabilizer.group->order() == 1);
  }
}

TEST_CASE("double-coset completeness and the fiber-product cross-check") {
  auto s3 = make_symmetric_group(3);
  auto z2 = make_cyclic_group(2);
  auto z3 = make_cyclic_group(3);
  struct Case {
    GroupHom f, g;
  };
  std::vector<Case> cases;
  cases.push_back({identity_hom(s3), identity_hom(s3)});
  cases.push_back({cyclic_into(z2, s3, element_of_order(*s3, 2)),
                   cyclic_into(z3, s3, element_of_order(*s3, 3))});
  cases.push_back({cyclic_into(z2, s3, element_of_order(*s3, 2)),
                   cyclic_into(z2, s3, element_of_order(*s3, 2))});
  cases.push_back({hom_of(make_trivial_group(), s3, {0}),
                   cyclic_into(z3, s3, element_of_order(*s3, 3))});
  // a non-injective map: Z4 -> Z2 -> S3
  auto z4 = make_cyclic_group(4);
  GroupHom z4_to_s3;
  z4_to_s3.domain = z4;
  z4_to_s3.codomain = s3;
  ElemId t = element_of_order(*s3, 2);
  z4_to_s3.image = {0, t, 0, t};
  REQUIRE(z4_to_s3.is_homomorphism());
  cases.push_back({z4_to_s3, cyclic_into(z3, s3, element_of_order(*s3, 3))});

  for (const auto &c : cases) {
    auto dec = double_coset_fiber_product(c.f, c.g);
    std::size_t covered = 0;
    std::set<ElemId> all;
    for (const auto &e : dec.entries) {
      covered += e.coset.size();
      for (ElemId x : e.coset)
        CHECK(all.insert(x).second); // disjoint
      // C_a really stabilizes: f(h) a g(k)^-1 = a
      for (ElemId pair_id = 0; pair_id < e.stabilizer.group->order();
           ++pair_id) {
        auto [h, k] = dec.hk.unpair(e.stabilizer.inclusion(pair_id));
        CHECK(s3->mul(s3->mul(c.f(h), e.representative), s3->inv(c.g(k))) ==
              e.representative);
      }
    }
    CHECK(covered == s3->order());
    // orbit-stabilizer: |H'aK'| = |H| * |K| / |C_a|
    for (const auto &e : dec.entries)
      CHECK(e.coset.size() * e.stabilizer.group->order() ==
            c.f.domain->order() * c.g.domain->order());

    // pi0 of the fiber product matches the double cosets, with isotropy
    // groups isomorphic to the stabilizers
    auto bf = classifying_functor(c.f, classifying_groupoid(c.f.domain),
                                  classifying_groupoid(s3));
    auto bg = classifying_functor(c.g, classifying_groupoid(c.g.domain),
                                  bf.codomain);
    auto fp = fiber_product(bf, bg);
    auto classes = pi0(*fp.total);
    REQUIRE(classes.size() == dec.entries.size());
    std::multiset<std::vector<std::uint32_t>> fp_iso, dc_iso;
    for (const auto &cls : classes)
      fp_iso.insert(
          isotropy(*fp.total, cls[0]).group->element_order_multiset());
    for (const auto &e : dec.entries)
      dc_iso.insert(e.stabilizer.group->element_order_multiset());
    CHECK(fp_iso == dc_iso);
  }
}

TEST_CASE("action fiber product: points with identity maps recover the "
          "translation action on G") {
  auto s3 = make_symmetric_group(3);
  GroupAction target{s3, std::vector<std::vector<ObjId>>(6, {0})};
  EquivariantMap id_map{identity_hom(s3), {0}};
  auto afp = action_fiber_product(target, target, target, id_map, id_map);
  CHECK(afp.carrier.size() == 6);
  REQUIRE(validate_groupoid(*afp.groupoid).ok());
  // matches the double-coset picture: one orbit, diagonal stabilizer
  auto dec = double_coset_fiber_product(identity_hom(s3), identity_hom(s3));
  auto classes = pi0(*afp.groupoid);
  REQUIRE(classes.size() == dec.entries.size());
  CHECK(isotropy(*afp.groupoid, 0).group->order() ==
        dec.entries[0].stabilizer.group->order());
}

TEST_CASE("action fiber product of trivial groups is the plain product") {
  auto triv = make_trivial_group();
  GroupAction ya{triv, {{0, 1}}};          // two points
  GroupAction za{triv, {{0, 1, 2}}};       // three points
  GroupAction xa{triv, {{0}}};             // one point
  EquivariantMap y_to_x{identity_hom(triv), {0, 0}};
  EquivariantMap z_to_x{identity_hom(triv), {0, 0, 0}};
  auto afp = action_fiber_product(ya, za, xa, y_to_x, z_to_x);
  CHECK(afp.carrier.size() == 6);
  CHECK(pi0(*afp.groupoid).size() == 6);
}

TEST_CASE("action fiber product matches the general fiber product") {
  auto s3 = make_symmetric_group(3);
  auto z2 = make_cyclic_group(2);
  auto z3 = make_cyclic_group(3);
  GroupAction h_action{z2, {{0}, {0}}};
  GroupAction k_action{z3, {{0}, {0}, {0}}};
  GroupAction target{s3, std::vector<std::vector<ObjId>>(6, {0})};
  EquivariantMap phi{cyclic_into(z2, s3, element_of_order(*s3, 2)), {0}};
  EquivariantMap psi{cyclic_into(z3, s3, element_of_order(*s3, 3)), {0}};
  auto afp = action_fiber_product(h_action, k_action, target, phi, psi);
  CHECK(afp.carrier.size() == 6);
  CHECK(pi0(*afp.groupoid).size() == 1);
  CHECK(isotropy(*afp.groupoid, 0).group->order() == 1);

  auto bs3 = classifying_groupoid(s3);
  auto fp = fiber_product(
      classifying_functor(phi.hom, classifying_groupoid(z2), bs3),
      classifying_functor(psi.hom, classifying_groupoid(z3), bs3));
  // explicit isomorphism: (y, z, d) as triples in both constructions
  REQUIRE(fp.objects.size() == afp.carrier.size());
  CHECK(morita_equivalent(afp.groupoid, fp.total).equivalent);

  // non-equivariant maps are rejected: the target action moves the image
  // point while the source acts trivially
  std::vector<std::vector<ObjId>> s3_cosets_act(6, std::vector<ObjId>(3));
  {
    std::vector<ElemId> sub =
        s3->generated_subgroup({element_of_order(*s3, 2)});
    std::vector<std::int64_t> coset_of(6, -1);
    std::vector<ElemId> reps;
    for (ElemId x = 0; x < 6; ++x) {
      if (coset_of[x] >= 0)
        continue;
      for (ElemId h : sub)
        coset_of[s3->mul(x, h)] = static_cast<std::int64_t>(reps.size());
      reps.push_back(x);
    }
    for (ElemId a = 0; a < 6; ++a)
      for (std::size_t i = 0; i < reps.size(); ++i)
        s3_cosets_act[a][i] =
            static_cast<ObjId>(coset_of[s3->mul(a, reps[i])]);
  }
  GroupAction coset_target{s3, s3_cosets_act};
  EquivariantMap z3_into_cosets{psi.hom, {0}};
  CHECK_THROWS_AS(action_fiber_product(k_action, k_action, coset_target,
                                       z3_into_cosets, z3_into_cosets),
                  Error);
}

TEST_CASE("residue gerbes") {
  auto s3 = make_symmetric_group(3);
  auto bs3 = classifying_groupoid(s3);
  auto r = residue_gerbe(bs3, 0);
  CHECK(r.inertia_group.group->order() == 6);
  CHECK(group_isomorphic(*r.inertia_group.group, *s3).has_value());
  CHECK(morita_equivalent(r.classifying, bs3).equivalent);

  auto swap = z2_swap_groupoid();
  auto r2 = residue_gerbe(swap, 0);
  CHECK(r2.inertia_group.group->order() == 1);
  CHECK(morita_equivalent(r2.classifying, unit_groupoid()).equivalent);
  // the orbit restriction is the 2-object contractible groupoid,
  // equivalent to the point
  auto orbit = restrict_groupoid(swap, pi0(*swap)[0]);
  CHECK(morita_equivalent(orbit.groupoid, r2.classifying).equivalent);

  auto z2 = make_cyclic_group(2);
  auto trivial_action = action_groupoid(z2, {{0, 1}, {0, 1}});
  auto r3 = residue_gerbe(trivial_action, 0);
  CHECK(r3.inertia_group.group->order() == 2);
  CHECK(morita_equivalent(r3.classifying,
                          classifying_groupoid(z2)).equivalent);
  CHECK_THROWS_AS(residue_gerbe(swap, 9), Error);
}

TEST_CASE("action fiber product is isomorphic to the functor fiber product "
          "on nontrivial carriers") {
  auto s3 = make_symmetric_group(3);
  auto z2 = make_cyclic_group(2);
  auto z3 = make_cyclic_group(3);
  ElemId r = element_of_order(*s3, 3);

  // S3 acting on the two cosets of <r>
  std::vector<ElemId> sub = s3->generated_subgroup({r});
  std::vector<std::int64_t> coset_of(6, -1);
  std::vector<ElemId> reps;
  for (ElemId x = 0; x < 6; ++x) {
    if (coset_of[x] >= 0)
      continue;
    for (ElemId h : sub)
      coset_of[s3->mul(x, h)] = static_cast<std::int64_t>(reps.size());
    reps.push_back(x);
  }
  std::vector<std::vector<ObjId>> target_act(6, std::vector<ObjId>(2));
  for (ElemId a = 0; a < 6; ++a)
    for (std::size_t i = 0; i < 2; ++i)
      target_act[a][i] = static_cast<ObjId>(coset_of[s3->mul(a, reps[i])]);
  GroupAction target{s3, target_act};

  // Z2 swapping two points over the two cosets
  GroupAction h_action{z2, {{0, 1}, {1, 0}}};
  ElemId t = element_of_order(*s3, 2);
  // pick the coset-swapping transposition image for equivariance
  REQUIRE(target_act[t][0] == 1);
  EquivariantMap phi{hom_of(z2, s3, {0, t}), {0, 1}};

  // Z3 fixing one point over the identity coset
  GroupAction k_action{z3, {{0}, {0}, {0}}};
  EquivariantMap psi{hom_of(z3, s3, {0, r, s3->mul(r, r)}), {0}};

  auto afp = action_fiber_product(h_action, k_action, target, phi, psi);
  REQUIRE(validate_groupoid(*afp.groupoid).ok());

  // the same fiber product through the groupoid route
  auto target_groupoid = action_groupoid(s3, target_act);
  auto h_groupoid = action_groupoid(z2, h_action.act);
  auto k_groupoid = action_groupoid(z3, k_action.act);
  auto lift_functor = [&](GroupoidPtr dom, const GroupAction &src,
                          const EquivariantMap &m) {
    GroupoidFunctor f;
    f.domain = dom;
    f.codomain = target_groupoid;
    std::uint32_t carrier = static_cast<std::uint32_t>(src.act[0].size());
    f.obj_map.resize(carrier);
    for (ObjId x = 0; x < carrier; ++x)
      f.obj_map[x] = m.carrier[x];
    f.arr_map.resize(dom->num_arrows());
    for (ElemId g = 0; g < src.group->order(); ++g)
      for (ObjId x = 0; x < carrier; ++x)
        f.arr_map[g * carrier + x] = m.hom(g) * 2 + m.carrier[x];
    REQUIRE(f.check());
    return f;
  };
  auto fp = fiber_product(lift_functor(h_groupoid, h_action, phi),
                          lift_functor(k_groupoid, k_action, psi));
  REQUIRE(fp.objects.size() == afp.carrier.size());

  // explicit isomorphism: triples (y, z, d) match objects (y, z, (d, p(y)))
  std::map<std::tuple<ObjId, ObjId, ArrowId>, ObjId> fp_obj;
  for (std::size_t i = 0; i < fp.objects.size(); ++i)
    fp_obj[{fp.objects[i].y, fp.objects[i].z, fp.objects[i].alpha}] =
        static_cast<ObjId>(i);
  std::map<std::tuple<ArrowId, ArrowId, ArrowId>, ArrowId> fp_arr;
  for (std::size_t k = 0; k < fp.arrow_triples.size(); ++k)
    fp_arr[{fp.arrow_triples[k].u, fp.arrow_triples[k].v,
            fp.arrow_triples[k].alpha}] = static_cast<ArrowId>(k);

  GroupoidFunctor iso;
  iso.domain = afp.groupoid;
  iso.codomain = fp.total;
  for (const auto &triple : afp.carrier) {
    ArrowId alpha = triple.d * 2 + phi.carrier[triple.y];
    iso.obj_map.push_back(fp_obj.at({triple.y, triple.z, alpha}));
  }
  std::uint32_t n_carrier = static_cast<std::uint32_t>(afp.carrier.size());
  for (ElemId hk = 0; hk < afp.acting.group->order(); ++hk) {
    auto [h, k] = afp.acting.unpair(hk);
    for (std::uint32_t i = 0; i < n_carrier; ++i) {
      const auto &triple = afp.carrier[i];
      ArrowId u = h * 2 + triple.y;
      ArrowId v = k * 1 + triple.z;
      ArrowId alpha = triple.d * 2 + phi.carrier[triple.y];
      iso.arr_map.push_back(fp_arr.at({u, v, alpha}));
    }
  }
  std::string why;
  CHECK_MESSAGE(is_isomorphism_onto(iso, &why), why);
}
