#include "stacklab/selftest.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "stacklab/constructions.hpp"
#include "stacklab/covering.hpp"
#include "stacklab/errors.hpp"
#include "stacklab/formats.hpp"
#include "stacklab/gog.hpp"
#include "stacklab/groupoid.hpp"
#include "stacklab/morita.hpp"

namespace stacklab::selftest {

namespace {

/// Assertion collector shared by all suites.
struct Checker {
  bool pass = true;
  std::string first_failure;
  std::size_t checks = 0;

  void require(bool ok, const std::string &what) {
    ++checks;
    if (!ok && pass) {
      pass = false;
      first_failure = what;
    }
  }
};

GroupHom make_hom(GroupPtr dom, GroupPtr cod, std::vector<ElemId> image) {
  GroupHom h;
  h.domain = std::move(dom);
  h.codomain = std::move(cod);
  h.image = std::move(image);
  return h;
}

ElemId element_of_order(const FiniteGroup &g, std::uint32_t order) {
  for (ElemId a = 0; a < g.order(); ++a)
    if (g.element_order(a) == order)
      return a;
  return 0;
}

GroupoidPtr swap_groupoid() {
  return action_groupoid(make_cyclic_group(2), {{0, 1}, {1, 0}});
}

GroupoidPtr point_groupoid() {
  return action_groupoid(make_trivial_group(), {{0}});
}

GroupoidPtr coset_groupoid(GroupPtr g, std::vector<ElemId> subgroup_gens) {
  std::vector<ElemId> sub = g->generated_subgroup(subgroup_gens);
  std::vector<std::int64_t> coset_of(g->order(), -1);
  std::vector<ElemId> reps;
  for (ElemId x = 0; x < g->order(); ++x) {
    if (coset_of[x] >= 0)
      continue;
    for (ElemId h : sub)
      coset_of[g->mul(x, h)] = static_cast<std::int64_t>(reps.size());
    reps.push_back(x);
  }
  std::vector<std::vector<ObjId>> act(g->order(),
                                      std::vector<ObjId>(reps.size()));
  for (ElemId a = 0; a < g->order(); ++a)
    for (std::size_t i = 0; i < reps.size(); ++i)
      act[a][i] = static_cast<ObjId>(coset_of[g->mul(a, reps[i])]);
  return action_groupoid(g, act);
}

/// All homomorphisms A -> B by brute force over generator images.
std::vector<GroupHom> enumerate_homs(GroupPtr a, GroupPtr b) {
  std::vector<ElemId> gens = a->small_generating_set();
  std::vector<std::vector<std::size_t>> fact(a->order());
  std::vector<bool> known(a->order(), false);
  known[0] = true;
  std::vector<ElemId> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    ElemId x = queue[head];
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      ElemId y = a->mul(x, gens[gi]);
      if (!known[y]) {
        known[y] = true;
        fact[y] = fact[x];
        fact[y].push_back(gi);
        queue.push_back(y);
      }
    }
  }
  std::vector<GroupHom> out;
  std::vector<ElemId> images(gens.size(), 0);
  auto emit = [&]() {
    GroupHom h;
    h.domain = a;
    h.codomain = b;
    h.image.resize(a->order());
    for (ElemId x = 0; x < a->order(); ++x) {
      ElemId img = 0;
      for (std::size_t gi : fact[x])
        img = b->mul(img, images[gi]);
      h.image[x] = img;
    }
    if (h.is_homomorphism())
      out.push_back(std::move(h));
  };
  std::function<void(std::size_t)> rec = [&](std::size_t gi) {
    if (gi == gens.size()) {
      emit();
      return;
    }
    for (ElemId img = 0; img < b->order(); ++img) {
      images[gi] = img;
      rec(gi + 1);
    }
  };
  rec(0);
  return out;
}

/// Builds the triple category directly and compares it structurally with
/// the implementation output.
bool oracle_matches_fiber_product(const GroupoidFunctor &f,
                                  const GroupoidFunctor &g, Checker &check) {
  const auto &Y = *f.domain;
  const auto &Z = *g.domain;
  const auto &X = *f.codomain;
  auto fp = fiber_product(f, g);

  std::vector<std::tuple<ObjId, ObjId, ArrowId>> objects;
  for (ObjId z = 0; z < Z.num_objects(); ++z)
    for (ObjId y = 0; y < Y.num_objects(); ++y)
      for (ArrowId alpha = 0; alpha < X.num_arrows(); ++alpha)
        if (X.src(alpha) == f.obj_map[y] && X.tgt(alpha) == g.obj_map[z])
          objects.push_back({y, z, alpha});
  check.require(objects.size() == fp.objects.size(),
                "fiber-product object count");

  std::map<std::tuple<ObjId, ObjId, ArrowId>, ObjId> fp_obj;
  for (std::size_t i = 0; i < fp.objects.size(); ++i)
    fp_obj[{fp.objects[i].y, fp.objects[i].z, fp.objects[i].alpha}] =
        static_cast<ObjId>(i);

  std::size_t arrow_count = 0;
  for (const auto &[y1, z1, a] : objects) {
    check.require(fp_obj.count({y1, z1, a}) == 1,
                  "oracle object missing from the implementation");
    for (const auto &[y2, z2, b] : objects)
      for (ArrowId u : Y.hom(y1, y2))
        for (ArrowId v : Z.hom(z1, z2))
          if (X.compose(f.arr_map[u], b) == X.compose(a, g.arr_map[v])) {
            ++arrow_count;
            ObjId si = fp_obj.at({y1, z1, a});
            ObjId ti = fp_obj.at({y2, z2, b});
            bool found = false;
            for (ArrowId fa : fp.total->hom(si, ti)) {
              const auto &t = fp.arrow_triples[fa];
              if (t.u == u && t.v == v) {
                found = true;
                break;
              }
            }
            check.require(found, "oracle arrow missing");
          }
  }
  check.require(arrow_count == fp.total->num_arrows(),
                "fiber-product arrow count");
  check.require(validate_groupoid(*fp.total).ok(), "fiber product validates");
  check.require(fp.proj_left.check() && fp.proj_right.check(),
                "fiber-product projections");
  check.require(check_natural_transformation(fp.two_cell),
                "fiber-product 2-cell");
  std::size_t expected = 0;
  for (ObjId y = 0; y < Y.num_objects(); ++y)
    for (ObjId z = 0; z < Z.num_objects(); ++z)
      expected += X.hom(f.obj_map[y], g.obj_map[z]).size();
  check.require(fp.objects.size() == expected,
                "sum-of-hom-sets object formula");
  return check.pass;
}

SuiteResult suite_groupoid_axioms() {
  Checker check;
  auto s3 = make_symmetric_group(3);
  check.require(validate_groupoid(*classifying_groupoid(s3)).ok(),
                "BS3 validates");
  auto swap = swap_groupoid();
  check.require(swap->num_arrows() == 4, "swap groupoid has 4 arrows");
  for (ObjId x = 0; x < 2; ++x)
    for (ObjId y = 0; y < 2; ++y)
      check.require(swap->hom(x, y).size() == 1, "free action hom size");
  check.require(isotropy(*swap, 0).group->order() == 1,
                "free action stabilizer");

  for (GroupPtr g : {s3, GroupPtr(make_cyclic_group(4)),
                     GroupPtr(make_klein_four_group())})
    for (ElemId x = 0; x < g->order(); ++x) {
      auto gp = coset_groupoid(g, {x});
      check.require(gp->num_arrows() == g->order() * gp->num_objects(),
                    "arrow count of an action groupoid");
      check.require(validate_groupoid(*gp).ok(), "coset groupoid validates");
    }

  auto z3 = make_cyclic_group(3);
  Perm p = perm_from_cycles(6, {{1, 2, 3}, {4, 5, 6}});
  std::vector<std::vector<ObjId>> act(3, std::vector<ObjId>(6));
  for (ObjId x = 0; x < 6; ++x) {
    act[0][x] = x;
    act[1][x] = p[x];
    act[2][x] = p[p[x]];
  }
  check.require(pi0(*action_groupoid(z3, act)).size() == 2,
                "two orbits of (123)(456)");

  auto gp = coset_groupoid(s3, {element_of_order(*s3, 2)});
  for (const auto &cls : pi0(*gp)) {
    auto base = isotropy(*gp, cls[0]);
    for (ObjId x : cls)
      check.require(
          group_isomorphic(*base.group, *isotropy(*gp, x).group).has_value(),
          "isotropy constant along a component");
  }
  return {"groupoid-axioms", check.pass, check.first_failure};
}

SuiteResult suite_fiber_product_universal() {
  Checker check;
  std::vector<GroupPtr> small{make_trivial_group(), make_cyclic_group(2),
                              make_cyclic_group(3), make_cyclic_group(4),
                              make_klein_four_group(),
                              make_symmetric_group(3), make_cyclic_group(6)};
  auto s3 = make_symmetric_group(3);
  auto z6 = make_cyclic_group(6);
  std::size_t instances = 0;
  for (GroupPtr target : {s3, z6}) {
    auto bg = classifying_groupoid(target);
    std::vector<GroupoidFunctor> functors;
    for (GroupPtr source : small)
      for (const GroupHom &hom : enumerate_homs(source, target))
        functors.push_back(
            classifying_functor(hom, classifying_groupoid(source), bg));
    if (target == s3) {
      // multi-object domains: the swap groupoid and a 3-object coset
      // groupoid mapping down to BS3
      auto swap = swap_groupoid();
      ElemId t = element_of_order(*s3, 2);
      GroupoidFunctor collapse;
      collapse.domain = swap;
      collapse.codomain = bg;
      collapse.obj_map = {0, 0};
      collapse.arr_map.resize(4);
      for (ArrowId a = 0; a < 4; ++a)
        collapse.arr_map[a] = (a / 2 == 0) ? 0 : t;
      functors.push_back(collapse);
      auto cosets = coset_groupoid(s3, {element_of_order(*s3, 3)});
      GroupoidFunctor project;
      project.domain = cosets;
      project.codomain = bg;
      project.obj_map.assign(cosets->num_objects(), 0);
      project.arr_map.resize(cosets->num_arrows());
      for (ArrowId a = 0; a < cosets->num_arrows(); ++a)
        project.arr_map[a] = a / cosets->num_objects();
      functors.push_back(project);
    }
    // pair up a deterministic slice of the functor corpus
    std::size_t budget = target == s3 ? 40 : 15;
    std::size_t taken = 0;
    for (std::size_t i = 0; i < functors.size() && taken < budget; ++i)
      for (std::size_t j = i; j < functors.size() && taken < budget; j += 2) {
        if (!oracle_matches_fiber_product(functors[i], functors[j], check))
          return {"fiber-product-universal", false,
                  check.first_failure + " (pair " + std::to_string(i) + "," +
                      std::to_string(j) + ")"};
        ++taken;
        ++instances;
      }
  }
  check.require(instances >= 50,
                "instance count " + std::to_string(instances));
  return {"fiber-product-universal", check.pass,
          check.pass ? std::to_string(instances) + " instances"
                     : check.first_failure};
}

SuiteResult suite_inertia_conjugation() {
  Checker check;
  for (GroupPtr g : {make_symmetric_group(3), make_cyclic_group(4),
                     make_dihedral_group(4), make_quaternion_group(),
                     make_alternating_group(4)}) {
    std::vector<bool> seen(g->order(), false);
    std::vector<std::pair<ElemId, std::size_t>> classes;
    for (ElemId a = 0; a < g->order(); ++a) {
      if (seen[a])
        continue;
      std::size_t cls_size = 0;
      for (ElemId x = 0; x < g->order(); ++x) {
        ElemId c = g->mul(g->mul(x, a), g->inv(x));
        if (!seen[c]) {
          seen[c] = true;
          ++cls_size;
        }
      }
      classes.push_back({a, g->order() / cls_size});
    }
    auto in = inertia(classifying_groupoid(g));
    auto components = pi0(*in.total);
    check.require(components.size() == classes.size(),
                  g->name() + ": inertia component count");
    std::multiset<std::size_t> got, expected;
    for (const auto &cls : components)
      got.insert(isotropy(*in.total, cls[0]).group->order());
    for (const auto &[rep, cent] : classes)
      expected.insert(cent);
    check.require(got == expected, g->name() + ": centralizer orders");
    auto entries = inertia_of_BG(g);
    check.require(entries.size() == classes.size(),
                  g->name() + ": inertia_of_BG count");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      check.require(entries[i].representative == classes[i].first,
                    g->name() + ": least-id representative");
      check.require(entries[i].centralizer.group->order() ==
                        classes[i].second,
                    g->name() + ": centralizer order");
    }
  }
  return {"inertia-conjugation", check.pass, check.first_failure};
}

SuiteResult suite_double_cosets() {
  Checker check;
  auto s3 = make_symmetric_group(3);
  auto z2 = make_cyclic_group(2);
  auto z3 = make_cyclic_group(3);
  ElemId t = element_of_order(*s3, 2);
  ElemId r = element_of_order(*s3, 3);
  auto z2_in = make_hom(z2, s3, {0, t});
  auto z3_in = make_hom(z3, s3, {0, r, s3->mul(r, r)});

  struct Case {
    GroupHom f, g;
  };
  std::vector<Case> cases{{identity_hom(s3), identity_hom(s3)},
                          {z2_in, z3_in},
                          {z2_in, z2_in},
                          {make_hom(make_trivial_group(), s3, {0}),
                           make_hom(make_trivial_group(), s3, {0})}};
  for (const auto &c : cases) {
    auto dec = double_coset_fiber_product(c.f, c.g);
    std::set<ElemId> covered;
    std::size_t total = 0;
    for (const auto &e : dec.entries) {
      total += e.coset.size();
      for (ElemId h = 0; h < c.f.domain->order(); ++h)
        for (ElemId k = 0; k < c.g.domain->order(); ++k) {
          ElemId moved =
              s3->mul(s3->mul(c.f(h), e.representative), s3->inv(c.g(k)));
          covered.insert(moved);
          check.require(
              std::binary_search(e.coset.begin(), e.coset.end(), moved),
              "orbit stays inside its double coset");
        }
    }
    check.require(covered.size() == s3->order(), "double cosets cover G");
    check.require(total == s3->order(), "coset sizes sum to |G|");

    auto bg = classifying_groupoid(s3);
    auto fp = fiber_product(
        classifying_functor(c.f, classifying_groupoid(c.f.domain), bg),
        classifying_functor(c.g, classifying_groupoid(c.g.domain), bg));
    auto classes = pi0(*fp.total);
    check.require(classes.size() == dec.entries.size(),
                  "pi0 matches the double-coset count");
    std::multiset<std::size_t> fp_orders, dc_orders;
    for (const auto &cls : classes)
      fp_orders.insert(isotropy(*fp.total, cls[0]).group->order());
    for (const auto &e : dec.entries)
      dc_orders.insert(e.stabilizer.group->order());
    check.require(fp_orders == dc_orders,
                  "isotropy orders match the stabilizers");
  }

  auto dec = double_coset_fiber_product(z2_in, z3_in);
  check.require(dec.entries.size() == 1, "one double coset");
  check.require(dec.entries[0].stabilizer.group->order() == 1,
                "trivial stabilizer");

  GroupAction target{s3, std::vector<std::vector<ObjId>>(6, {0})};
  auto afp = action_fiber_product(GroupAction{z2, {{0}, {0}}},
                                  GroupAction{z3, {{0}, {0}, {0}}}, target,
                                  EquivariantMap{z2_in, {0}},
                                  EquivariantMap{z3_in, {0}});
  check.require(afp.carrier.size() == 6, "P0 has six triples");
  check.require(pi0(*afp.groupoid).size() == 1, "P0 action is transitive");
  check.require(isotropy(*afp.groupoid, 0).group->order() == 1,
                "P0 has trivial stabilizers");
  return {"double-cosets", check.pass, check.first_failure};
}

SuiteResult suite_morita_relation(std::uint64_t seed) {
  Checker check;
  std::mt19937_64 rng(seed ^ 0x5741434b4cULL);
  std::vector<GroupPtr> pool{
      make_trivial_group(),    make_cyclic_group(2),   make_cyclic_group(3),
      make_cyclic_group(4),    make_klein_four_group(),
      make_symmetric_group(3), make_cyclic_group(6)};
  auto random_groupoid = [&]() {
    std::uniform_int_distribution<std::size_t> comp_count(1, 3);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    GroupoidPtr acc;
    std::size_t n = comp_count(rng);
    for (std::size_t i = 0; i < n; ++i) {
      GroupPtr g = pool[pick(rng)];
      std::uniform_int_distribution<ElemId> elem(0, g->order() - 1);
      auto comp = coset_groupoid(g, {elem(rng)});
      acc = acc ? disjoint_union(*acc, *comp) : comp;
    }
    return acc;
  };
  auto thicken = [](GroupoidPtr g) {
    return product_groupoid(g, swap_groupoid()).groupoid;
  };

  std::vector<GroupoidPtr> corpus;
  for (int i = 0; i < 34; ++i) {
    auto g = random_groupoid();
    corpus.push_back(g);
    corpus.push_back(skeleton(g).groupoid);
    corpus.push_back(thicken(g));
  }
  check.require(corpus.size() >= 100, "corpus size");
  for (const auto &g : corpus)
    check.require(morita_equivalent(g, g).equivalent, "reflexivity");
  for (std::size_t i = 0; i + 2 < corpus.size(); i += 3) {
    check.require(morita_equivalent(corpus[i], corpus[i + 1]).equivalent,
                  "g ~ skeleton(g)");
    check.require(morita_equivalent(corpus[i + 1], corpus[i]).equivalent,
                  "symmetry");
    check.require(morita_equivalent(corpus[i + 1], corpus[i + 2]).equivalent,
                  "skeleton(g) ~ thicken(g)");
    check.require(morita_equivalent(corpus[i], corpus[i + 2]).equivalent,
                  "transitivity");
  }
  for (std::size_t i = 0; i + 7 < corpus.size(); i += 7) {
    bool ab = morita_equivalent(corpus[i], corpus[i + 7]).equivalent;
    bool ba = morita_equivalent(corpus[i + 7], corpus[i]).equivalent;
    check.require(ab == ba, "symmetry on arbitrary pairs");
  }
  for (std::size_t i = 0; i < 6; ++i) {
    auto g = corpus[i * 3];
    auto thick = corpus[i * 3 + 2];
    check.require(pi0(*g).size() == pi0(*thick).size(),
                  "pi0 is Morita invariant");
    auto orders = [](const FiniteGroupoid &x) {
      std::multiset<std::size_t> out;
      for (const auto &cls : pi0(x))
        out.insert(isotropy(x, cls[0]).group->order());
      return out;
    };
    check.require(orders(*g) == orders(*thick),
                  "isotropy multiset is Morita invariant");
    auto in_g = inertia(g);
    auto in_thick = inertia(thick);
    check.require(morita_equivalent(in_g.total, in_thick.total).equivalent,
                  "inertia is Morita invariant");
  }
  for (std::size_t i = 0; i < 12; ++i) {
    auto g = corpus[i * 3];
    if (pi0(*g).size() > 4)
      continue;
    auto w = morita_equivalent(g, corpus[i * 3 + 1]);
    check.require(w.equivalent, "witness for the span");
    auto span = morita_span(g, corpus[i * 3 + 1], w);
    check.require(is_weak_equivalence(span.to_left).ok, "span left leg");
    check.require(is_weak_equivalence(span.to_right).ok, "span right leg");
  }
  return {"morita-relation", check.pass, check.first_failure};
}

std::vector<GraphOfGroupsPtr> selftest_gog_corpus() {
  auto segment = [](std::uint32_t m, std::uint32_t n, std::uint32_t d) {
    auto gm = make_cyclic_group(m, "Zm");
    auto gn = make_cyclic_group(n, "Zn");
    auto gd = make_cyclic_group(d, "Zd");
    std::vector<ElemId> into_m(d), into_n(d);
    for (ElemId a = 0; a < d; ++a) {
      into_m[a] = a * (m / d) % m;
      into_n[a] = a * (n / d) % n;
    }
    std::vector<GraphOfGroups::Vertex> vertices{{"v1", gm}, {"v2", gn}};
    GraphOfGroups::Edge e;
    e.name = "e1";
    e.ends[0] = 0;
    e.ends[1] = 1;
    e.group = gd;
    e.incl[0] = make_hom(gd, gm, into_m);
    e.incl[1] = make_hom(gd, gn, into_n);
    return std::make_shared<GraphOfGroups>(
        std::move(vertices), std::vector<GraphOfGroups::Edge>{e}, 0);
  };
  auto loop = [](GroupPtr vg, GroupPtr eg, std::vector<ElemId> first,
                 std::vector<ElemId> second) {
    std::vector<GraphOfGroups::Vertex> vertices{{"v1", vg}};
    GraphOfGroups::Edge e;
    e.name = "e1";
    e.ends[0] = 0;
    e.ends[1] = 0;
    e.group = eg;
    e.incl[0] = make_hom(eg, vg, std::move(first));
    e.incl[1] = make_hom(eg, vg, std::move(second));
    return std::make_shared<GraphOfGroups>(
        std::move(vertices), std::vector<GraphOfGroups::Edge>{e}, 0);
  };
  auto theta = [](GroupPtr g1, GroupPtr g2) {
    auto triv = make_trivial_group();
    std::vector<GraphOfGroups::Vertex> vertices{{"v1", g1}, {"v2", g2}};
    std::vector<GraphOfGroups::Edge> edges;
    for (int i = 0; i < 2; ++i) {
      GraphOfGroups::Edge e;
      e.name = "e" + std::to_string(i + 1);
      e.ends[0] = 0;
      e.ends[1] = 1;
      e.group = triv;
      e.incl[0] = make_hom(triv, g1, {0});
      e.incl[1] = make_hom(triv, g2, {0});
      edges.push_back(std::move(e));
    }
    return std::make_shared<GraphOfGroups>(std::move(vertices),
                                           std::move(edges), 0);
  };
  auto s3 = make_symmetric_group(3);
  auto z2 = make_cyclic_group(2);
  auto z4 = make_cyclic_group(4);
  auto z3 = make_cyclic_group(3);
  auto triv = make_trivial_group();
  ElemId r = element_of_order(*s3, 3);

  std::vector<GraphOfGroupsPtr> corpus;
  corpus.push_back(segment(2, 3, 1));
  corpus.push_back(segment(2, 2, 1));
  corpus.push_back(segment(4, 6, 2));
  corpus.push_back(segment(6, 9, 3));
  corpus.push_back(loop(triv, triv, {0}, {0}));
  corpus.push_back(loop(z2, z2, {0, 1}, {0, 1}));
  corpus.push_back(loop(z4, z2, {0, 2}, {0, 2}));
  corpus.push_back(loop(s3, z3, {0, r, s3->mul(r, r)},
                        {0, s3->mul(r, r), r}));
  corpus.push_back(theta(z2, z2));
  corpus.push_back(theta(s3, z2));
  {
    std::vector<ElemId> ident{0, 1, 2, 3, 4, 5};
    std::vector<GraphOfGroups::Vertex> vertices{{"v1", s3}, {"v2", s3}};
    GraphOfGroups::Edge e;
    e.name = "e1";
    e.ends[0] = 0;
    e.ends[1] = 1;
    e.group = s3;
    e.incl[0] = make_hom(s3, s3, ident);
    e.incl[1] = make_hom(s3, s3, ident);
    corpus.push_back(std::make_shared<GraphOfGroups>(
        std::move(vertices), std::vector<GraphOfGroups::Edge>{e}, 0));
  }
  {
    // a 3-vertex path whose spanning tree has depth two
    auto z4 = make_cyclic_group(4);
    ElemId t = element_of_order(*s3, 2);
    std::vector<GraphOfGroups::Vertex> vertices{
        {"v1", z4}, {"v2", z2}, {"v3", s3}};
    std::vector<GraphOfGroups::Edge> edges(2);
    edges[0].name = "e1";
    edges[0].ends[0] = 0;
    edges[0].ends[1] = 1;
    edges[0].group = z2;
    edges[0].incl[0] = make_hom(z2, z4, {0, 2});
    edges[0].incl[1] = make_hom(z2, z2, {0, 1});
    edges[1].name = "e2";
    edges[1].ends[0] = 1;
    edges[1].ends[1] = 2;
    edges[1].group = z2;
    edges[1].incl[0] = make_hom(z2, z2, {0, 1});
    edges[1].incl[1] = make_hom(z2, s3, {0, t});
    corpus.push_back(std::make_shared<GraphOfGroups>(std::move(vertices),
                                                     std::move(edges), 0));
  }
  {
    // a triangle with trivial edge groups: one stable letter
    std::vector<GraphOfGroups::Vertex> vertices{
        {"v1", z2}, {"v2", z3}, {"v3", z2}};
    std::vector<GraphOfGroups::Edge> edges(3);
    VertexId ends[3][2] = {{0, 1}, {1, 2}, {2, 0}};
    for (int i = 0; i < 3; ++i) {
      edges[i].name = "e" + std::to_string(i + 1);
      edges[i].ends[0] = ends[i][0];
      edges[i].ends[1] = ends[i][1];
      edges[i].group = triv;
      edges[i].incl[0] = make_hom(triv, vertices[ends[i][0]].group, {0});
      edges[i].incl[1] = make_hom(triv, vertices[ends[i][1]].group, {0});
    }
    corpus.push_back(std::make_shared<GraphOfGroups>(std::move(vertices),
                                                     std::move(edges), 0));
  }
  return corpus;
}

Word random_loop(const GraphOfGroups &g, const Pi1Presentation &p,
                 std::mt19937_64 &rng, std::uint32_t max_steps) {
  Word w;
  w.basepoint = p.basepoint;
  VertexId cur = p.basepoint;
  std::uniform_int_distribution<int> coin(0, 2);
  std::uniform_int_distribution<std::uint32_t> steps(0, max_steps);
  std::uint32_t n = steps(rng);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (coin(rng) == 0) {
      const auto &vg = *g.vertex(cur).group;
      std::uniform_int_distribution<ElemId> elem(0, vg.order() - 1);
      w.syllables.push_back(Word::elem(cur, elem(rng)));
      continue;
    }
    std::vector<EdgeLetter> out;
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      for (int s = 0; s < 2; ++s)
        if (g.edge(e).ends[s] == cur)
          out.push_back({e, s == 0 ? 1 : -1});
    if (out.empty())
      continue;
    std::uniform_int_distribution<std::size_t> pick(0, out.size() - 1);
    EdgeLetter letter = out[pick(rng)];
    w.syllables.push_back(Word::edge(letter.edge, letter.sign));
    cur = letter.to(g);
  }
  std::vector<EdgeLetter> home = p.tree_path[cur];
  for (auto it = home.rbegin(); it != home.rend(); ++it)
    w.syllables.push_back(Word::edge(it->edge, -it->sign));
  return w;
}

SuiteResult suite_word_machine(std::uint64_t seed) {
  Checker check;
  std::mt19937_64 rng(seed ^ 0x574f5244ULL);
  auto corpus = selftest_gog_corpus();
  std::size_t words = 0;
  for (const auto &g : corpus) {
    auto p = pi1_presentation(g);
    TransversalTables tables(g);
    for (const auto &rel : p.relations)
      check.require(reduce_word(tables, p.relation_word(rel)).is_identity(),
                    "relation reduces to the identity");
    std::size_t per_gog = 10000 / corpus.size() + 1;
    for (std::size_t i = 0; i < per_gog; ++i) {
      Word w = random_loop(*g, p, rng, 12);
      auto reduced = reduce_word(tables, w);
      auto again = reduce_word(tables, reduced_to_word(*g, reduced));
      check.require(reduced == again, "reduce is idempotent");
      if (!p.relations.empty() && i % 7 == 0) {
        const auto &rel = p.relations[i % p.relations.size()];
        Word extended = w;
        Word rel_word = p.relation_word(rel);
        extended.syllables.insert(extended.syllables.end(),
                                  rel_word.syllables.begin(),
                                  rel_word.syllables.end());
        check.require(words_equal(tables, w, extended),
                      "appending a relation is neutral");
      }
      ++words;
    }
  }
  check.require(words >= 10000, "word count " + std::to_string(words));
  return {"word-machine", check.pass,
          check.pass ? std::to_string(words) + " words"
                     : check.first_failure};
}

SuiteResult suite_omega_injectivity() {
  Checker check;
  auto corpus = selftest_gog_corpus();
  check.require(corpus.size() >= 10, "corpus size");
  for (const auto &g : corpus) {
    TransversalTables tables(g);
    auto report = omega_injectivity_certificate(tables);
    check.require(report.pass,
                  "injectivity certificate: " + report.counterexample);
  }
  return {"omega-injectivity", check.pass, check.first_failure};
}

SuiteResult suite_ball_growth() {
  Checker check;
  struct Case {
    std::uint32_t m, n, d;
  };
  for (Case c :
       {Case{2, 3, 1}, Case{2, 2, 1}, Case{4, 6, 2}, Case{6, 9, 3}}) {
    auto gm = make_cyclic_group(c.m);
    auto gn = make_cyclic_group(c.n);
    auto gd = make_cyclic_group(c.d);
    std::vector<ElemId> into_m(c.d), into_n(c.d);
    for (ElemId a = 0; a < c.d; ++a) {
      into_m[a] = a * (c.m / c.d) % c.m;
      into_n[a] = a * (c.n / c.d) % c.n;
    }
    std::vector<GraphOfGroups::Vertex> vertices{{"v1", gm}, {"v2", gn}};
    GraphOfGroups::Edge e;
    e.name = "e1";
    e.ends[0] = 0;
    e.ends[1] = 1;
    e.group = gd;
    e.incl[0] = make_hom(gd, gm, into_m);
    e.incl[1] = make_hom(gd, gn, into_n);
    auto g = std::make_shared<GraphOfGroups>(
        std::move(vertices), std::vector<GraphOfGroups::Edge>{e}, 0);
    TransversalTables tables(g);
    std::uint32_t p = c.m / c.d, q = c.n / c.d;
    std::uint64_t level = 1, total = 1;
    for (std::uint32_t radius = 0; radius <= 4; ++radius) {
      if (radius > 0) {
        level = radius == 1 ? p : level * ((radius % 2 == 0 ? q : p) - 1);
        total += level;
      }
      auto ball = bass_serre_ball(tables, 0, radius);
      check.require(ball.nodes.size() == total,
                    "biregular tree count at radius " +
                        std::to_string(radius));
    }
  }
  return {"ball-growth", check.pass, check.first_failure};
}

SuiteResult suite_covering_galois() {
  Checker check;
  auto corpus = selftest_gog_corpus();
  std::vector<GraphOfGroupsPtr> bases{corpus[0], corpus[1], corpus[4],
                                      corpus[5], corpus[8],
                                      corpus[corpus.size() - 2]};
  std::size_t actions_checked = 0;
  for (const auto &g : bases) {
    auto p = std::make_shared<Pi1Presentation>(pi1_presentation(g));
    std::uint32_t max_degree = g->num_edges() >= 2 ? 3 : 4;
    for (const auto &a : enumerate_actions(p, max_degree)) {
      auto cover = covering_from_action(g, a);
      check.require(cover.total->is_connected() == is_connected_cover(a),
                    "connectivity matches transitivity");
      Rational expected = g->euler_characteristic() *
                          Rational(static_cast<std::int64_t>(a.degree));
      check.require(cover.total->euler_characteristic() == expected,
                    "chi multiplies by the degree");
      for (VertexId v = 0; v < g->num_vertices(); ++v) {
        std::uint32_t sum = 0;
        for (std::uint32_t cv = 0; cv < cover.vertex_fibers.size(); ++cv)
          if (cover.vertex_fibers[cv].base_vertex == v)
            sum += g->vertex(v).group->order() /
                   cover.total->vertex(cv).group->order();
        check.require(sum == a.degree, "degree sum over a vertex");
      }
      for (EdgeId e = 0; e < g->num_edges(); ++e) {
        std::uint32_t sum = 0;
        for (std::uint32_t ce = 0; ce < cover.edge_fibers.size(); ++ce)
          if (cover.edge_fibers[ce].base_edge == e)
            sum += g->edge(e).group->order() /
                   cover.total->edge(ce).group->order();
        check.require(sum == a.degree, "degree sum over an edge");
      }
      for (VertexId v = 0; v < g->num_vertices(); ++v)
        for (std::uint32_t pt = 0; pt < a.degree; ++pt)
          check.require(inertia_cartesian_check(cover, a, v, pt),
                        "cartesian identity");
      auto mono = monodromy(cover, a.presentation);
      check.require(validate_action(mono).ok, "monodromy validates");
      check.require(actions_conjugate(a, mono),
                    "monodromy round trip up to conjugacy");
      ++actions_checked;
    }
  }
  check.require(actions_checked >= 20,
                "action count " + std::to_string(actions_checked));
  return {"covering-galois", check.pass,
          check.pass ? std::to_string(actions_checked) + " covers"
                     : check.first_failure};
}

SuiteResult suite_serialization() {
  Checker check;
  std::vector<Json> docs;
  docs.push_back(
      make_document("groupoid", groupoid_to_json(*point_groupoid())));
  docs.push_back(make_document("groupoid", groupoid_to_json(*swap_groupoid())));
  docs.push_back(
      make_document("group", group_to_json(*make_symmetric_group(3))));
  docs.push_back(make_document("group", group_to_json(*make_cyclic_group(6))));
  auto corpus = selftest_gog_corpus();
  docs.push_back(make_document("gog", gog_to_json(*corpus[0])));
  docs.push_back(make_document("gog", gog_to_json(*inertia_gog(corpus[1]))));
  for (const auto &doc : docs) {
    auto text = serialize(doc);
    auto parsed = parse_document(text, document_kind(doc));
    check.require(serialize(parsed) == text, "serialize . parse = id");
  }
  auto text = serialize(docs[0]);
  std::string spaced;
  for (char c : text) {
    spaced += c;
    if (c == ':')
      spaced += "  ";
  }
  check.require(serialize(parse_document(spaced, "groupoid")) == text,
                "parse . serialize canonicalizes");
  check.require(rational_to_json(corpus[0]->euler_characteristic()).dump() ==
                    "{\"den\":6,\"num\":-1}",
                "chi of the modular segment is -1/6");
  check.require(to_dot(*corpus[0]) == to_dot(*corpus[0]),
                "gog DOT is stable");
  check.require(to_dot(*swap_groupoid()) == to_dot(*swap_groupoid()),
                "groupoid DOT is stable");
  return {"serialization", check.pass, check.first_failure};
}

} // namespace

std::vector<SuiteResult> run_all(std::uint64_t seed) {
  std::vector<SuiteResult> results;
  results.push_back(suite_groupoid_axioms());
  results.push_back(suite_fiber_product_universal());
  results.push_back(suite_inertia_conjugation());
  results.push_back(suite_double_cosets());
  results.push_back(suite_morita_relation(seed));
  results.push_back(suite_word_machine(seed));
  results.push_back(suite_omega_injectivity());
  results.push_back(suite_ball_growth());
  results.push_back(suite_covering_galois());
  results.push_back(suite_serialization());
  return results;
}

} // namespace stacklab::selftest
