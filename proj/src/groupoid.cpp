#include "stacklab/groupoid.hpp"

#include <algorithm>
#include <deque>

#include "stacklab/errors.hpp"

namespace stacklab {

namespace {

inline std::uint64_t pair_key(ArrowId f, ArrowId g) {
  return (static_cast<std::uint64_t>(f) << 32) | g;
}

} // namespace

FiniteGroupoid::FiniteGroupoid(std::uint32_t num_objects,
                               std::vector<Arrow> arrows,
                               std::vector<ArrowId> identities,
                               std::vector<ArrowId> inverses,
                               std::vector<std::array<ArrowId, 3>> triples)
    : num_objects_(num_objects), arrows_(std::move(arrows)),
      identities_(std::move(identities)), inverses_(std::move(inverses)) {
  compose_.reserve(triples.size());
  for (const auto &t : triples)
    compose_[pair_key(t[0], t[1])] = t[2];
}

GroupoidPtr FiniteGroupoid::empty() {
  return std::make_shared<FiniteGroupoid>(
      0, std::vector<Arrow>{}, std::vector<ArrowId>{}, std::vector<ArrowId>{},
      std::vector<std::array<ArrowId, 3>>{});
}

ArrowId FiniteGroupoid::identity(ObjId x) const {
  if (x >= num_objects_)
    throw Error(ErrorKind::UnknownObject,
                "object " + std::to_string(x) + " out of range");
  return identities_[x];
}

ArrowId FiniteGroupoid::compose(ArrowId f, ArrowId g) const {
  auto it = compose_.find(pair_key(f, g));
  if (it == compose_.end())
    throw Error(ErrorKind::ValidationError,
                "composition undefined for arrows " + std::to_string(f) +
                    ", " + std::to_string(g));
  return it->second;
}

const std::vector<ArrowId> &FiniteGroupoid::hom(ObjId x, ObjId y) const {
  if (x >= num_objects_ || y >= num_objects_)
    throw Error(ErrorKind::UnknownObject, "hom-set object out of range");
  std::call_once(hom_once_, [this] {
    hom_index_.assign(num_objects_,
                      std::vector<std::vector<ArrowId>>(num_objects_));
    for (ArrowId f = 0; f < arrows_.size(); ++f)
      hom_index_[arrows_[f].src][arrows_[f].tgt].push_back(f);
  });
  return hom_index_[x][y];
}

std::vector<std::array<ArrowId, 3>> FiniteGroupoid::compose_triples() const {
  std::vector<std::array<ArrowId, 3>> out;
  out.reserve(compose_.size());
  for (const auto &[key, h] : compose_)
    out.push_back({static_cast<ArrowId>(key >> 32),
                   static_cast<ArrowId>(key & 0xffffffffu), h});
  std::sort(out.begin(), out.end());
  return out;
}

ValidationReport FiniteGroupoid::validate() const {
  ValidationReport report;
  auto fail = [&](std::string axiom, std::string detail) {
    report.failures.push_back({std::move(axiom), std::move(detail)});
  };

  std::uint32_t n_arr = num_arrows();
  for (ArrowId f = 0; f < n_arr; ++f) {
    if (arrows_[f].src >= num_objects_ || arrows_[f].tgt >= num_objects_)
      fail("arrow-endpoints", "arrow " + std::to_string(f));
  }
  if (identities_.size() != num_objects_)
    fail("identity-map", "one identity arrow per object required");
  if (inverses_.size() != n_arr)
    fail("inverse-map", "one inverse per arrow required");
  if (!report.ok())
    return report;

  for (ObjId x = 0; x < num_objects_; ++x) {
    ArrowId e = identities_[x];
    if (e >= n_arr || arrows_[e].src != x || arrows_[e].tgt != x)
      fail("identity-endpoints", "object " + std::to_string(x));
  }
  for (ArrowId f = 0; f < n_arr; ++f) {
    ArrowId i = inverses_[f];
    if (i >= n_arr || arrows_[i].src != arrows_[f].tgt ||
        arrows_[i].tgt != arrows_[f].src)
      fail("inverse-endpoints", "arrow " + std::to_string(f));
  }
  if (!report.ok())
    return report;

  // compose is defined exactly on pairs with tgt(f) = src(g)
  for (ArrowId f = 0; f < n_arr; ++f)
    for (ArrowId g = 0; g < n_arr; ++g) {
      auto it = compose_.find(pair_key(f, g));
      bool should = arrows_[f].tgt == arrows_[g].src;
      if (should && it == compose_.end()) {
        fail("compose-totality", "missing composite (" + std::to_string(f) +
                                     ", " + std::to_string(g) + ")");
      } else if (!should && it != compose_.end()) {
        fail("compose-domain", "composite defined on non-composable (" +
                                   std::to_string(f) + ", " +
                                   std::to_string(g) + ")");
      } else if (it != compose_.end()) {
        ArrowId h = it->second;
        if (h >= n_arr || arrows_[h].src != arrows_[f].src ||
            arrows_[h].tgt != arrows_[g].tgt)
          fail("compose-endpoints", "(" + std::to_string(f) + ", " +
                                        std::to_string(g) + ")");
      }
    }
  if (!report.ok())
    return report;

  for (ArrowId f = 0; f < n_arr; ++f) {
    if (compose_.at(pair_key(identities_[arrows_[f].src], f)) != f)
      fail("identity-neutral-left", "arrow " + std::to_string(f));
    if (compose_.at(pair_key(f, identities_[arrows_[f].tgt])) != f)
      fail("identity-neutral-right", "arrow " + std::to_string(f));
    if (compose_.at(pair_key(f, inverses_[f])) !=
        identities_[arrows_[f].src])
      fail("inverse-right", "arrow " + std::to_string(f));
    if (compose_.at(pair_key(inverses_[f], f)) !=
        identities_[arrows_[f].tgt])
      fail("inverse-left", "arrow " + std::to_string(f));
  }

  for (ArrowId f = 0; f < n_arr; ++f)
    for (ArrowId g = 0; g < n_arr; ++g) {
      if (arrows_[f].tgt != arrows_[g].src)
        continue;
      ArrowId fg = compose_.at(pair_key(f, g));
      for (ArrowId h = 0; h < n_arr; ++h) {
        if (arrows_[g].tgt != arrows_[h].src)
          continue;
        ArrowId gh = compose_.at(pair_key(g, h));
        if (compose_.at(pair_key(fg, h)) != compose_.at(pair_key(f, gh)))
          fail("associativity", "triple (" + std::to_string(f) + ", " +
                                    std::to_string(g) + ", " +
                                    std::to_string(h) + ")");
      }
    }
  return report;
}

ValidationReport validate_groupoid(const FiniteGroupoid &g) {
  return g.validate();
}

bool GroupoidFunctor::check(std::string *why) const {
  auto explain = [&](std::string msg) {
    if (why)
      *why = std::move(msg);
    return false;
  };
  if (obj_map.size() != domain->num_objects() ||
      arr_map.size() != domain->num_arrows())
    return explain("object/arrow map has wrong size");
  for (ObjId x : obj_map)
    if (x >= codomain->num_objects())
      return explain("object image out of range");
  for (ArrowId f : arr_map)
    if (f >= codomain->num_arrows())
      return explain("arrow image out of range");
  for (ArrowId f = 0; f < domain->num_arrows(); ++f) {
    if (codomain->src(arr_map[f]) != obj_map[domain->src(f)] ||
        codomain->tgt(arr_map[f]) != obj_map[domain->tgt(f)])
      return explain("endpoints not preserved at arrow " + std::to_string(f));
  }
  for (ObjId x = 0; x < domain->num_objects(); ++x)
    if (arr_map[domain->identity(x)] != codomain->identity(obj_map[x]))
      return explain("identity not preserved at object " + std::to_string(x));
  for (ArrowId f = 0; f < domain->num_arrows(); ++f)
    for (ArrowId g = 0; g < domain->num_arrows(); ++g) {
      if (!domain->composable(f, g))
        continue;
      if (arr_map[domain->compose(f, g)] !=
          codomain->compose(arr_map[f], arr_map[g]))
        return explain("composition not preserved at (" + std::to_string(f) +
                       ", " + std::to_string(g) + ")");
    }
  return true;
}

GroupoidFunctor identity_functor(GroupoidPtr g) {
  GroupoidFunctor f;
  f.domain = g;
  f.codomain = g;
  f.obj_map.resize(g->num_objects());
  f.arr_map.resize(g->num_arrows());
  for (ObjId x = 0; x < g->num_objects(); ++x)
    f.obj_map[x] = x;
  for (ArrowId a = 0; a < g->num_arrows(); ++a)
    f.arr_map[a] = a;
  return f;
}

GroupoidFunctor compose_functors(const GroupoidFunctor &first,
                                 const GroupoidFunctor &second) {
  GroupoidFunctor f;
  f.domain = first.domain;
  f.codomain = second.codomain;
  f.obj_map.resize(first.obj_map.size());
  f.arr_map.resize(first.arr_map.size());
  for (std::size_t x = 0; x < first.obj_map.size(); ++x)
    f.obj_map[x] = second.obj_map[first.obj_map[x]];
  for (std::size_t a = 0; a < first.arr_map.size(); ++a)
    f.arr_map[a] = second.arr_map[first.arr_map[a]];
  return f;
}

bool check_natural_transformation(const NaturalTransformation &nt) {
  const auto &f = nt.source;
  const auto &g = nt.target;
  if (f.domain != g.domain || f.codomain != g.codomain)
    return false;
  const auto &dom = *f.domain;
  const auto &cod = *f.codomain;
  if (nt.component.size() != dom.num_objects())
    return false;
  for (ObjId x = 0; x < dom.num_objects(); ++x) {
    ArrowId c = nt.component[x];
    if (c >= cod.num_arrows() || cod.src(c) != f.obj_map[x] ||
        cod.tgt(c) != g.obj_map[x])
      return false;
  }
  for (ArrowId u = 0; u < dom.num_arrows(); ++u) {
    ObjId x = dom.src(u), y = dom.tgt(u);
    if (cod.compose(nt.component[x], g.arr_map[u]) !=
        cod.compose(f.arr_map[u], nt.component[y]))
      return false;
  }
  return true;
}

ArrowId action_arrow_id(const FiniteGroup &group, std::uint32_t carrier_size,
                        ElemId g, ObjId x) {
  (void)group;
  return g * carrier_size + x;
}

GroupoidPtr action_groupoid(GroupPtr group,
                            const std::vector<std::vector<ObjId>> &act) {
  const std::uint32_t n = group->order();
  if (act.size() != n)
    throw Error(ErrorKind::NotAnAction, "action table must have one row per "
                                        "group element");
  const std::uint32_t m =
      act.empty() ? 0 : static_cast<std::uint32_t>(act[0].size());
  for (const auto &row : act) {
    if (row.size() != m)
      throw Error(ErrorKind::NotAnAction, "ragged action table");
    for (ObjId x : row)
      if (x >= m)
        throw Error(ErrorKind::NotAnAction, "action image out of range");
  }
  for (ObjId x = 0; x < m; ++x)
    if (act[0][x] != x)
      throw Error(ErrorKind::NotAnAction,
                  "identity moves point " + std::to_string(x));
  for (ElemId a = 0; a < n; ++a)
    for (ElemId b = 0; b < n; ++b)
      for (ObjId x = 0; x < m; ++x)
        if (act[group->mul(a, b)][x] != act[a][act[b][x]])
          throw Error(ErrorKind::NotAnAction,
                      "act(a*b, x) != act(a, act(b, x)) at a=" +
                          std::to_string(a) + " b=" + std::to_string(b) +
                          " x=" + std::to_string(x));

  std::vector<FiniteGroupoid::Arrow> arrows(static_cast<std::size_t>(n) * m);
  std::vector<ArrowId> identities(m);
  std::vector<ArrowId> inverses(arrows.size());
  for (ElemId g = 0; g < n; ++g)
    for (ObjId x = 0; x < m; ++x) {
      ArrowId f = g * m + x;
      arrows[f] = {x, act[g][x]};
      inverses[f] = group->inv(g) * m + act[g][x];
    }
  for (ObjId x = 0; x < m; ++x)
    identities[x] = x; // g = 0 block
  std::vector<std::array<ArrowId, 3>> triples;
  triples.reserve(static_cast<std::size_t>(n) * n * m);
  for (ElemId g = 0; g < n; ++g)
    for (ObjId x = 0; x < m; ++x)
      for (ElemId h = 0; h < n; ++h) {
        // (g, x) : x -> g.x, then (h, g.x) : g.x -> (hg).x
        ArrowId f1 = g * m + x;
        ArrowId f2 = h * m + act[g][x];
        triples.push_back({f1, f2, group->mul(h, g) * m + x});
      }
  return std::make_shared<FiniteGroupoid>(m, std::move(arrows),
                                          std::move(identities),
                                          std::move(inverses),
                                          std::move(triples));
}

GroupoidPtr classifying_groupoid(GroupPtr group) {
  std::vector<std::vector<ObjId>> act(group->order(), std::vector<ObjId>{0});
  return action_groupoid(std::move(group), act);
}

IsotropyGroup isotropy(const FiniteGroupoid &g, ObjId x) {
  if (x >= g.num_objects())
    throw Error(ErrorKind::UnknownObject,
                "object " + std::to_string(x) + " out of range");
  std::vector<ArrowId> loops = g.hom(x, x);
  ArrowId e = g.identity(x);
  std::vector<ArrowId> elems;
  elems.push_back(e);
  for (ArrowId f : loops)
    if (f != e)
      elems.push_back(f);
  std::vector<ElemId> back_index(g.num_arrows(), 0);
  for (std::size_t i = 0; i < elems.size(); ++i)
    back_index[elems[i]] = static_cast<ElemId>(i);
  auto n = static_cast<std::uint32_t>(elems.size());
  std::vector<ElemId> table(static_cast<std::size_t>(n) * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      // a*b = compose(b, a), so isotropy in an action groupoid equals the
      // stabilizer subgroup with its own multiplication.
      table[i * n + j] = back_index[g.compose(elems[j], elems[i])];
  IsotropyGroup out;
  out.group = FiniteGroup::from_table("I" + std::to_string(x),
                                      std::move(table));
  out.arrow_of_element = std::move(elems);
  return out;
}

std::vector<std::vector<ObjId>> pi0(const FiniteGroupoid &g) {
  std::vector<ObjId> parent(g.num_objects());
  for (ObjId x = 0; x < g.num_objects(); ++x)
    parent[x] = x;
  std::function<ObjId(ObjId)> find = [&](ObjId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (ArrowId f = 0; f < g.num_arrows(); ++f) {
    ObjId a = find(g.src(f)), b = find(g.tgt(f));
    if (a != b)
      parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<ObjId>> classes;
  std::vector<std::int64_t> class_of(g.num_objects(), -1);
  for (ObjId x = 0; x < g.num_objects(); ++x) {
    ObjId root = find(x);
    if (class_of[root] < 0) {
      class_of[root] = static_cast<std::int64_t>(classes.size());
      classes.emplace_back();
    }
    classes[class_of[root]].push_back(x);
  }
  return classes;
}

CoarseSpace coarse_space(const FiniteGroupoid &g) {
  auto classes = pi0(g);
  CoarseSpace out;
  out.num_points = static_cast<std::uint32_t>(classes.size());
  out.projection.resize(g.num_objects());
  for (std::uint32_t c = 0; c < classes.size(); ++c)
    for (ObjId x : classes[c])
      out.projection[x] = c;
  return out;
}

RestrictedGroupoid restrict_groupoid(GroupoidPtr g,
                                     const std::vector<ObjId> &sub) {
  std::vector<ObjId> objs = sub;
  std::sort(objs.begin(), objs.end());
  objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
  for (ObjId x : objs)
    if (x >= g->num_objects())
      throw Error(ErrorKind::UnknownObject,
                  "object " + std::to_string(x) + " out of range");
  std::vector<std::int64_t> obj_new(g->num_objects(), -1);
  for (std::size_t i = 0; i < objs.size(); ++i)
    obj_new[objs[i]] = static_cast<std::int64_t>(i);

  std::vector<ArrowId> kept;
  std::vector<std::int64_t> arr_new(g->num_arrows(), -1);
  for (ArrowId f = 0; f < g->num_arrows(); ++f)
    if (obj_new[g->src(f)] >= 0 && obj_new[g->tgt(f)] >= 0) {
      arr_new[f] = static_cast<std::int64_t>(kept.size());
      kept.push_back(f);
    }

  std::vector<FiniteGroupoid::Arrow> arrows(kept.size());
  std::vector<ArrowId> identities(objs.size());
  std::vector<ArrowId> inverses(kept.size());
  std::vector<std::array<ArrowId, 3>> triples;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    arrows[i] = {static_cast<ObjId>(obj_new[g->src(kept[i])]),
                 static_cast<ObjId>(obj_new[g->tgt(kept[i])])};
    inverses[i] = static_cast<ArrowId>(arr_new[g->inverse(kept[i])]);
  }
  for (std::size_t i = 0; i < objs.size(); ++i)
    identities[i] = static_cast<ArrowId>(arr_new[g->identity(objs[i])]);
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = 0; j < kept.size(); ++j)
      if (g->composable(kept[i], kept[j]))
        triples.push_back(
            {static_cast<ArrowId>(i), static_cast<ArrowId>(j),
             static_cast<ArrowId>(arr_new[g->compose(kept[i], kept[j])])});

  RestrictedGroupoid out;
  out.groupoid = std::make_shared<FiniteGroupoid>(
      static_cast<std::uint32_t>(objs.size()), std::move(arrows),
      std::move(identities), std::move(inverses), std::move(triples));
  out.inclusion.domain = out.groupoid;
  out.inclusion.codomain = g;
  out.inclusion.obj_map = objs;
  out.inclusion.arr_map = kept;
  return out;
}

ObjId ProductGroupoid::obj_pair(ObjId x, ObjId y) const {
  return x * proj_right.codomain->num_objects() + y;
}

ArrowId ProductGroupoid::arr_pair(ArrowId f, ArrowId g) const {
  return f * proj_right.codomain->num_arrows() + g;
}

ProductGroupoid product_groupoid(GroupoidPtr g, GroupoidPtr h) {
  std::uint32_t no = g->num_objects() * h->num_objects();
  std::uint32_t gh_arr = h->num_arrows();
  std::vector<FiniteGroupoid::Arrow> arrows(
      static_cast<std::size_t>(g->num_arrows()) * gh_arr);
  std::vector<ArrowId> identities(no);
  std::vector<ArrowId> inverses(arrows.size());
  for (ArrowId f = 0; f < g->num_arrows(); ++f)
    for (ArrowId k = 0; k < gh_arr; ++k) {
      ArrowId id = f * gh_arr + k;
      arrows[id] = {g->src(f) * h->num_objects() + h->src(k),
                    g->tgt(f) * h->num_objects() + h->tgt(k)};
      inverses[id] = g->inverse(f) * gh_arr + h->inverse(k);
    }
  for (ObjId x = 0; x < g->num_objects(); ++x)
    for (ObjId y = 0; y < h->num_objects(); ++y)
      identities[x * h->num_objects() + y] =
          g->identity(x) * gh_arr + h->identity(y);
  std::vector<std::array<ArrowId, 3>> triples;
  for (ArrowId f1 = 0; f1 < g->num_arrows(); ++f1)
    for (ArrowId k1 = 0; k1 < gh_arr; ++k1)
      for (ArrowId f2 = 0; f2 < g->num_arrows(); ++f2)
        for (ArrowId k2 = 0; k2 < gh_arr; ++k2) {
          if (!g->composable(f1, f2) || !h->composable(k1, k2))
            continue;
          triples.push_back({f1 * gh_arr + k1, f2 * gh_arr + k2,
                             g->compose(f1, f2) * gh_arr +
                                 h->compose(k1, k2)});
        }
  ProductGroupoid out;
  out.groupoid = std::make_shared<FiniteGroupoid>(
      no, std::move(arrows), std::move(identities), std::move(inverses),
      std::move(triples));
  auto make_proj = [&](GroupoidPtr cod, bool left) {
    GroupoidFunctor p;
    p.domain = out.groupoid;
    p.codomain = cod;
    p.obj_map.resize(no);
    p.arr_map.resize(out.groupoid->num_arrows());
    for (ObjId x = 0; x < g->num_objects(); ++x)
      for (ObjId y = 0; y < h->num_objects(); ++y)
        p.obj_map[x * h->num_objects() + y] = left ? x : y;
    for (ArrowId f = 0; f < g->num_arrows(); ++f)
      for (ArrowId k = 0; k < gh_arr; ++k)
        p.arr_map[f * gh_arr + k] = left ? f : k;
    return p;
  };
  out.proj_left = make_proj(g, true);
  out.proj_right = make_proj(h, false);
  return out;
}

GroupoidFunctor diagonal_functor(GroupoidPtr g, const ProductGroupoid &gxg) {
  GroupoidFunctor d;
  d.domain = g;
  d.codomain = gxg.groupoid;
  d.obj_map.resize(g->num_objects());
  d.arr_map.resize(g->num_arrows());
  for (ObjId x = 0; x < g->num_objects(); ++x)
    d.obj_map[x] = gxg.obj_pair(x, x);
  for (ArrowId f = 0; f < g->num_arrows(); ++f)
    d.arr_map[f] = gxg.arr_pair(f, f);
  return d;
}

GroupoidPtr disjoint_union(const FiniteGroupoid &a, const FiniteGroupoid &b) {
  std::uint32_t no = a.num_objects() + b.num_objects();
  std::vector<FiniteGroupoid::Arrow> arrows;
  arrows.reserve(a.num_arrows() + b.num_arrows());
  for (ArrowId f = 0; f < a.num_arrows(); ++f)
    arrows.push_back({a.src(f), a.tgt(f)});
  for (ArrowId f = 0; f < b.num_arrows(); ++f)
    arrows.push_back(
        {b.src(f) + a.num_objects(), b.tgt(f) + a.num_objects()});
  std::vector<ArrowId> identities;
  for (ObjId x = 0; x < a.num_objects(); ++x)
    identities.push_back(a.identity(x));
  for (ObjId x = 0; x < b.num_objects(); ++x)
    identities.push_back(b.identity(x) + a.num_arrows());
  std::vector<ArrowId> inverses;
  for (ArrowId f = 0; f < a.num_arrows(); ++f)
    inverses.push_back(a.inverse(f));
  for (ArrowId f = 0; f < b.num_arrows(); ++f)
    inverses.push_back(b.inverse(f) + a.num_arrows());
  std::vector<std::array<ArrowId, 3>> triples = a.compose_triples();
  for (auto t : b.compose_triples())
    triples.push_back({t[0] + a.num_arrows(), t[1] + a.num_arrows(),
                       t[2] + a.num_arrows()});
  return std::make_shared<FiniteGroupoid>(no, std::move(arrows),
                                          std::move(identities),
                                          std::move(inverses),
                                          std::move(triples));
}

bool is_isomorphism_onto(const GroupoidFunctor &f, std::string *why) {
  auto explain = [&](std::string msg) {
    if (why)
      *why = std::move(msg);
    return false;
  };
  if (!f.check(why))
    return false;
  if (f.domain->num_objects() != f.codomain->num_objects() ||
      f.domain->num_arrows() != f.codomain->num_arrows())
    return explain("object/arrow counts differ");
  std::vector<bool> obj_hit(f.codomain->num_objects(), false);
  for (ObjId x : f.obj_map) {
    if (obj_hit[x])
      return explain("object map not injective");
    obj_hit[x] = true;
  }
  std::vector<bool> arr_hit(f.codomain->num_arrows(), false);
  for (ArrowId a : f.arr_map) {
    if (arr_hit[a])
      return explain("arrow map not injective");
    arr_hit[a] = true;
  }
  return true;
}

} // namespace stacklab
