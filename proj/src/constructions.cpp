#include "stacklab/constructions.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "stacklab/errors.hpp"

namespace stacklab {

std::uint64_t construction_arrow_cap() {
  if (const char *env = std::getenv("STACKLAB_CAP")) {
    char *end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0)
      return v;
  }
  return 1000000;
}

namespace {

void check_cap(std::uint64_t arrows, const char *what) {
  if (arrows > construction_arrow_cap())
    throw Error(ErrorKind::CapExceeded,
                std::string(what) + " would have " + std::to_string(arrows) +
                    " arrows, over the cap " +
                    std::to_string(construction_arrow_cap()));
}

} // namespace

FiberProductResult fiber_product(const GroupoidFunctor &f,
                                 const GroupoidFunctor &g) {
  if (f.codomain != g.codomain)
    throw Error(ErrorKind::MismatchedBase,
                "fiber product requires a shared codomain");
  const auto &Y = *f.domain;
  const auto &Z = *g.domain;
  const auto &X = *f.codomain;

  FiberProductResult out;
  std::map<std::tuple<ObjId, ObjId, ArrowId>, ObjId> obj_index;
  for (ObjId y = 0; y < Y.num_objects(); ++y)
    for (ObjId z = 0; z < Z.num_objects(); ++z)
      for (ArrowId a : X.hom(f.obj_map[y], g.obj_map[z])) {
        obj_index[{y, z, a}] = static_cast<ObjId>(out.objects.size());
        out.objects.push_back({y, z, a});
      }

  std::uint64_t arrow_estimate = 0;
  for (ArrowId u = 0; u < Y.num_arrows(); ++u)
    for (ArrowId v = 0; v < Z.num_arrows(); ++v)
      arrow_estimate +=
          X.hom(f.obj_map[Y.src(u)], g.obj_map[Z.src(v)]).size();
  check_cap(arrow_estimate, "fiber product");

  std::vector<FiniteGroupoid::Arrow> arrows;
  std::vector<ArrowId> inverses;
  std::map<std::tuple<ArrowId, ArrowId, ArrowId>, ArrowId> arr_index;
  // target component: the unique b with  f(u) . b  =  a . g(v)
  auto target_alpha = [&](ArrowId u, ArrowId v, ArrowId a) {
    return X.compose(X.inverse(f.arr_map[u]), X.compose(a, g.arr_map[v]));
  };
  for (ArrowId u = 0; u < Y.num_arrows(); ++u)
    for (ArrowId v = 0; v < Z.num_arrows(); ++v)
      for (ArrowId a : X.hom(f.obj_map[Y.src(u)], g.obj_map[Z.src(v)])) {
        arr_index[{u, v, a}] = static_cast<ArrowId>(out.arrow_triples.size());
        out.arrow_triples.push_back({u, v, a});
        arrows.push_back({obj_index.at({Y.src(u), Z.src(v), a}),
                          obj_index.at({Y.tgt(u), Z.tgt(v),
                                        target_alpha(u, v, a)})});
      }
  inverses.resize(out.arrow_triples.size());
  std::vector<ArrowId> identities(out.objects.size());
  for (std::size_t i = 0; i < out.objects.size(); ++i) {
    const auto &o = out.objects[i];
    identities[i] =
        arr_index.at({Y.identity(o.y), Z.identity(o.z), o.alpha});
  }
  for (std::size_t i = 0; i < out.arrow_triples.size(); ++i) {
    const auto &t = out.arrow_triples[i];
    inverses[i] = arr_index.at({Y.inverse(t.u), Z.inverse(t.v),
                                target_alpha(t.u, t.v, t.alpha)});
  }
  std::vector<std::array<ArrowId, 3>> triples;
  for (std::size_t i = 0; i < out.arrow_triples.size(); ++i) {
    const auto &t1 = out.arrow_triples[i];
    ArrowId beta = target_alpha(t1.u, t1.v, t1.alpha);
    for (ArrowId u2 = 0; u2 < Y.num_arrows(); ++u2) {
      if (!Y.composable(t1.u, u2))
        continue;
      for (ArrowId v2 = 0; v2 < Z.num_arrows(); ++v2) {
        if (!Z.composable(t1.v, v2))
          continue;
        auto it = arr_index.find({u2, v2, beta});
        if (it == arr_index.end())
          continue;
        triples.push_back({static_cast<ArrowId>(i), it->second,
                           arr_index.at({Y.compose(t1.u, u2),
                                         Z.compose(t1.v, v2), t1.alpha})});
      }
    }
  }
  out.total = std::make_shared<FiniteGroupoid>(
      static_cast<std::uint32_t>(out.objects.size()), std::move(arrows),
      std::move(identities), std::move(inverses), std::move(triples));

  out.proj_left.domain = out.total;
  out.proj_left.codomain = f.domain;
  out.proj_right.domain = out.total;
  out.proj_right.codomain = g.domain;
  for (const auto &o : out.objects) {
    out.proj_left.obj_map.push_back(o.y);
    out.proj_right.obj_map.push_back(o.z);
  }
  for (const auto &t : out.arrow_triples) {
    out.proj_left.arr_map.push_back(t.u);
    out.proj_right.arr_map.push_back(t.v);
  }

  out.two_cell.source = compose_functors(out.proj_left, f);
  out.two_cell.target = compose_functors(out.proj_right, g);
  for (const auto &o : out.objects)
    out.two_cell.component.push_back(o.alpha);
  return out;
}

InertiaResult inertia(GroupoidPtr g) {
  const auto &G = *g;
  InertiaResult out;
  std::map<std::pair<ObjId, ArrowId>, ObjId> obj_index;
  for (ObjId x = 0; x < G.num_objects(); ++x)
    for (ArrowId a : G.hom(x, x)) {
      obj_index[{x, a}] = static_cast<ObjId>(out.objects.size());
      out.objects.push_back({x, a});
    }

  // arrows: (source pair index, gamma); target automorphism gamma^-1 a gamma
  std::vector<FiniteGroupoid::Arrow> arrows;
  std::vector<std::pair<ObjId, ArrowId>> arrow_data;
  std::map<std::pair<ObjId, ArrowId>, ArrowId> arr_index;
  auto conj_auto = [&](ArrowId a, ArrowId gamma) {
    return G.compose(G.inverse(gamma), G.compose(a, gamma));
  };
  for (ObjId i = 0; i < out.objects.size(); ++i) {
    const auto &o = out.objects[i];
    for (ObjId x2 = 0; x2 < G.num_objects(); ++x2)
      for (ArrowId gamma : G.hom(o.x, x2)) {
        arr_index[{i, gamma}] = static_cast<ArrowId>(arrows.size());
        arrows.push_back({i, obj_index.at({x2, conj_auto(o.automorphism,
                                                         gamma)})});
        arrow_data.emplace_back(i, gamma);
      }
  }
  check_cap(arrows.size(), "inertia groupoid");
  std::vector<ArrowId> identities(out.objects.size());
  for (ObjId i = 0; i < out.objects.size(); ++i)
    identities[i] = arr_index.at({i, G.identity(out.objects[i].x)});
  std::vector<ArrowId> inverses(arrows.size());
  for (ArrowId k = 0; k < arrows.size(); ++k) {
    auto [i, gamma] = arrow_data[k];
    inverses[k] = arr_index.at({arrows[k].tgt, G.inverse(gamma)});
  }
  std::vector<std::array<ArrowId, 3>> triples;
  for (ArrowId k = 0; k < arrows.size(); ++k) {
    auto [i, gamma] = arrow_data[k];
    ObjId mid = arrows[k].tgt;
    for (ObjId x3 = 0; x3 < G.num_objects(); ++x3)
      for (ArrowId gamma2 : G.hom(out.objects[mid].x, x3))
        triples.push_back({k, arr_index.at({mid, gamma2}),
                           arr_index.at({i, G.compose(gamma, gamma2)})});
  }
  out.total = std::make_shared<FiniteGroupoid>(
      static_cast<std::uint32_t>(out.objects.size()), std::move(arrows),
      std::move(identities), std::move(inverses), std::move(triples));
  out.projection.domain = out.total;
  out.projection.codomain = g;
  for (const auto &o : out.objects)
    out.projection.obj_map.push_back(o.x);
  for (const auto &[i, gamma] : arrow_data)
    out.projection.arr_map.push_back(gamma);
  return out;
}

std::vector<InertiaComponent> inertia_of_BG(GroupPtr group) {
  std::vector<InertiaComponent> out;
  for (const auto &cls : conjugacy_classes(*group)) {
    InertiaComponent comp;
    comp.representative = cls[0];
    comp.centralizer = subgroup_from_elements(
        group, centralizer_elements(*group, cls[0]),
        "C(" + std::to_string(cls[0]) + ")");
    out.push_back(std::move(comp));
  }
  return out;
}

DoubleCosetDecomposition double_coset_fiber_product(const GroupHom &f,
                                                    const GroupHom &g) {
  if (f.codomain != g.codomain)
    throw Error(ErrorKind::MismatchedBase,
                "double cosets require a shared codomain");
  GroupPtr G = f.codomain;
  GroupPtr H = f.domain;
  GroupPtr K = g.domain;
  DoubleCosetDecomposition out;
  out.ambient = G;
  out.hk = direct_product(H, K);

  std::vector<bool> covered(G->order(), false);
  for (ElemId a = 0; a < G->order(); ++a) {
    if (covered[a])
      continue;
    DoubleCosetDecomposition::Entry entry;
    entry.representative = a;
    std::vector<ElemId> stab_pairs;
    for (ElemId h = 0; h < H->order(); ++h)
      for (ElemId k = 0; k < K->order(); ++k) {
        ElemId moved = G->mul(G->mul(f(h), a), G->inv(g(k)));
        if (!covered[moved]) {
          covered[moved] = true;
          entry.coset.push_back(moved);
        }
        if (moved == a)
          stab_pairs.push_back(out.hk.pair(h, k));
      }
    std::sort(entry.coset.begin(), entry.coset.end());
    entry.stabilizer = subgroup_from_elements(
        out.hk.group, std::move(stab_pairs),
        "C(" + std::to_string(a) + ")");
    out.entries.push_back(std::move(entry));
  }
  return out;
}

ActionFiberProduct action_fiber_product(const GroupAction &h_action,
                                        const GroupAction &k_action,
                                        const GroupAction &target,
                                        const EquivariantMap &phi,
                                        const EquivariantMap &psi) {
  const auto &G = *target.group;
  auto check_shape = [](const GroupAction &action, const char *what) {
    if (action.act.size() != action.group->order())
      throw Error(ErrorKind::NotAnAction,
                  std::string(what) + ": one action row per group element");
    for (const auto &row : action.act)
      if (row.size() != action.act[0].size())
        throw Error(ErrorKind::NotAnAction,
                    std::string(what) + ": ragged action table");
  };
  check_shape(h_action, "left action");
  check_shape(k_action, "right action");
  check_shape(target, "target action");
  auto check_equivariant = [&](const GroupAction &src,
                               const EquivariantMap &m, const char *side) {
    if (!m.hom.is_homomorphism())
      throw Error(ErrorKind::NotEquivariant,
                  std::string(side) + ": not a group homomorphism");
    if (m.carrier.size() != src.act[0].size())
      throw Error(ErrorKind::NotEquivariant,
                  std::string(side) + ": carrier map size mismatch");
    for (ObjId x : m.carrier)
      if (x >= target.act[0].size())
        throw Error(ErrorKind::NotEquivariant,
                    std::string(side) + ": carrier image out of range");
    for (ElemId a = 0; a < src.group->order(); ++a)
      for (ObjId x = 0; x < src.act[0].size(); ++x)
        if (m.carrier[src.act[a][x]] != target.act[m.hom(a)][m.carrier[x]])
          throw Error(ErrorKind::NotEquivariant,
                      std::string(side) + ": carrier map not equivariant at "
                                          "element " +
                          std::to_string(a) + ", point " + std::to_string(x));
  };
  check_equivariant(h_action, phi, "left map");
  check_equivariant(k_action, psi, "right map");

  ActionFiberProduct out;
  out.acting = direct_product(h_action.group, k_action.group);
  std::uint32_t ny = static_cast<std::uint32_t>(h_action.act[0].size());
  std::uint32_t nz = static_cast<std::uint32_t>(k_action.act[0].size());
  std::map<std::tuple<ObjId, ObjId, ElemId>, ObjId> index;
  for (ObjId y = 0; y < ny; ++y)
    for (ObjId z = 0; z < nz; ++z)
      for (ElemId d = 0; d < G.order(); ++d)
        if (target.act[d][phi.carrier[y]] == psi.carrier[z]) {
          index[{y, z, d}] = static_cast<ObjId>(out.carrier.size());
          out.carrier.push_back({y, z, d});
        }

  std::vector<std::vector<ObjId>> act(
      out.acting.group->order(), std::vector<ObjId>(out.carrier.size()));
  for (ElemId hk = 0; hk < out.acting.group->order(); ++hk) {
    auto [h, k] = out.acting.unpair(hk);
    for (std::size_t i = 0; i < out.carrier.size(); ++i) {
      const auto &t = out.carrier[i];
      ElemId d_new = G.mul(G.mul(psi.hom(k), t.d), G.inv(phi.hom(h)));
      act[hk][i] = index.at({h_action.act[h][t.y], k_action.act[k][t.z],
                             d_new});
    }
  }
  out.groupoid = action_groupoid(out.acting.group, act);
  return out;
}

ResidueGerbe residue_gerbe(GroupoidPtr g, ObjId x) {
  ResidueGerbe out;
  out.inertia_group = isotropy(*g, x);
  out.classifying = classifying_groupoid(out.inertia_group.group);
  return out;
}

GroupoidFunctor classifying_functor(const GroupHom &hom, GroupoidPtr b_dom,
                                    GroupoidPtr b_cod) {
  GroupoidFunctor f;
  f.domain = b_dom;
  f.codomain = b_cod;
  f.obj_map = {0};
  f.arr_map.resize(hom.domain->order());
  for (ElemId a = 0; a < hom.domain->order(); ++a)
    f.arr_map[a] = hom(a);
  return f;
}

} // namespace stacklab
