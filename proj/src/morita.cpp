#include "stacklab/morita.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "stacklab/errors.hpp"

namespace stacklab {

WeakEquivalenceCertificate is_weak_equivalence(const GroupoidFunctor &f) {
  WeakEquivalenceCertificate cert;
  std::string why;
  if (!f.check(&why)) {
    cert.failure = "not a functor: " + why;
    return cert;
  }
  const auto &D = *f.domain;
  const auto &C = *f.codomain;

  // fully faithful: every hom-set maps bijectively
  for (ObjId x = 0; x < D.num_objects(); ++x)
    for (ObjId y = 0; y < D.num_objects(); ++y) {
      const auto &hom = D.hom(x, y);
      const auto &target = C.hom(f.obj_map[x], f.obj_map[y]);
      std::set<ArrowId> images;
      for (ArrowId u : hom)
        images.insert(f.arr_map[u]);
      if (images.size() != hom.size()) {
        cert.failure = "not faithful on Hom(" + std::to_string(x) + ", " +
                       std::to_string(y) + ")";
        return cert;
      }
      if (images.size() != target.size()) {
        cert.failure = "not full on Hom(" + std::to_string(x) + ", " +
                       std::to_string(y) + "): |Hom| " +
                       std::to_string(hom.size()) + " vs " +
                       std::to_string(target.size());
        return cert;
      }
      ++cert.hom_pairs_checked;
    }

  // essentially surjective: every codomain object is isomorphic to an image
  std::vector<std::int64_t> witness(C.num_objects(), -1);
  for (ObjId x = 0; x < D.num_objects(); ++x) {
    ObjId im = f.obj_map[x];
    if (witness[im] < 0)
      witness[im] = C.identity(im);
  }
  for (ObjId c = 0; c < C.num_objects(); ++c) {
    if (witness[c] >= 0)
      continue;
    for (ObjId im = 0; im < C.num_objects() && witness[c] < 0; ++im) {
      if (witness[im] < 0)
        continue;
      // `im` is an image object (or isomorphic to one via identity witness)
      const auto &hom = C.hom(c, im);
      if (!hom.empty())
        witness[c] = hom[0];
    }
    if (witness[c] < 0) {
      cert.failure =
          "object " + std::to_string(c) + " misses every image object";
      return cert;
    }
  }
  for (ObjId c = 0; c < C.num_objects(); ++c)
    cert.essential_witness.emplace_back(c,
                                        static_cast<ArrowId>(witness[c]));
  cert.ok = true;
  return cert;
}

Skeleton skeleton(GroupoidPtr g) {
  auto classes = pi0(*g);
  std::vector<ObjId> reps;
  for (const auto &cls : classes)
    reps.push_back(cls[0]);
  auto restricted = restrict_groupoid(g, reps);

  Skeleton out;
  out.groupoid = restricted.groupoid;
  out.inclusion = restricted.inclusion;
  out.retraction.resize(g->num_objects());
  for (const auto &cls : classes) {
    ObjId rep = cls[0];
    for (ObjId x : cls) {
      if (x == rep) {
        out.retraction[x] = g->identity(x);
        continue;
      }
      out.retraction[x] = g->hom(x, rep)[0];
    }
  }
  return out;
}

bool is_elementary_morita(const GroupoidFunctor &f, std::string *why) {
  auto explain = [&](std::string msg) {
    if (why)
      *why = std::move(msg);
    return false;
  };
  std::string check_why;
  if (!f.check(&check_why))
    return explain("not a functor: " + check_why);
  const auto &D = *f.domain;
  const auto &C = *f.codomain;

  // F0 epimorphism, discrete reading: surjective on objects
  std::vector<bool> hit(C.num_objects(), false);
  for (ObjId x : f.obj_map)
    hit[x] = true;
  for (ObjId c = 0; c < C.num_objects(); ++c)
    if (!hit[c])
      return explain("object map misses object " + std::to_string(c));

  // arrows(D) -> (X' x X') x_{X x X} arrows(C) must be a bijection
  std::uint64_t pulled_back = 0;
  for (ObjId x = 0; x < D.num_objects(); ++x)
    for (ObjId y = 0; y < D.num_objects(); ++y)
      pulled_back += C.hom(f.obj_map[x], f.obj_map[y]).size();
  if (pulled_back != D.num_arrows())
    return explain("pulled-back arrow set has " + std::to_string(pulled_back) +
                   " elements, domain has " +
                   std::to_string(D.num_arrows()));
  std::set<std::tuple<ObjId, ObjId, ArrowId>> seen;
  for (ArrowId u = 0; u < D.num_arrows(); ++u)
    if (!seen.insert({D.src(u), D.tgt(u), f.arr_map[u]}).second)
      return explain("two arrows share endpoints and image (arrow " +
                     std::to_string(u) + ")");
  return true;
}

namespace {

std::vector<std::uint32_t> abelianization_invariant(const FiniteGroup &g) {
  // commutator subgroup: normal closure of all commutators
  std::vector<ElemId> comms;
  for (ElemId a = 0; a < g.order(); ++a)
    for (ElemId b = 0; b < g.order(); ++b)
      comms.push_back(
          g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
  std::sort(comms.begin(), comms.end());
  comms.erase(std::unique(comms.begin(), comms.end()), comms.end());
  // closure under multiplication and conjugation
  std::vector<ElemId> closure = g.generated_subgroup(comms);
  for (;;) {
    std::vector<ElemId> conjugates = closure;
    for (ElemId x = 0; x < g.order(); ++x)
      for (ElemId c : closure)
        conjugates.push_back(g.conj(x, c));
    std::sort(conjugates.begin(), conjugates.end());
    conjugates.erase(std::unique(conjugates.begin(), conjugates.end()),
                     conjugates.end());
    std::vector<ElemId> next = g.generated_subgroup(conjugates);
    if (next == closure)
      break;
    closure = std::move(next);
  }
  // quotient multiplication on cosets; the element-order multiset of a
  // finite abelian group determines its isomorphism type
  std::vector<ElemId> coset_of(g.order(), UINT32_MAX);
  std::vector<ElemId> rep;
  std::set<ElemId> in_closure(closure.begin(), closure.end());
  for (ElemId a = 0; a < g.order(); ++a) {
    if (coset_of[a] != UINT32_MAX)
      continue;
    ElemId c = static_cast<ElemId>(rep.size());
    rep.push_back(a);
    for (ElemId n : closure)
      coset_of[g.mul(a, n)] = c;
  }
  std::vector<std::uint32_t> orders;
  for (ElemId r : rep) {
    std::uint32_t k = 1;
    ElemId cur = r;
    while (coset_of[cur] != coset_of[0]) {
      cur = g.mul(cur, r);
      ++k;
    }
    orders.push_back(k);
  }
  std::sort(orders.begin(), orders.end());
  return orders;
}

bool extend_isomorphism(const FiniteGroup &a, const FiniteGroup &b,
                        const std::vector<ElemId> &gens, std::size_t pos,
                        std::vector<ElemId> &gen_images) {
  if (pos == gens.size())
    return true;
  for (ElemId img = 0; img < b.order(); ++img) {
    if (b.element_order(img) != a.element_order(gens[pos]))
      continue;
    gen_images[pos] = img;
    // close the partial map and check consistency
    std::vector<ElemId> map(a.order(), UINT32_MAX);
    map[0] = 0;
    bool consistent = true;
    std::vector<ElemId> frontier{0};
    std::vector<bool> used(b.order(), false);
    used[0] = true;
    while (consistent && !frontier.empty()) {
      std::vector<ElemId> next;
      for (ElemId x : frontier) {
        for (std::size_t gi = 0; gi <= pos && consistent; ++gi) {
          ElemId y = a.mul(x, gens[gi]);
          ElemId y_img = b.mul(map[x], gen_images[gi]);
          if (map[y] == UINT32_MAX) {
            if (used[y_img]) {
              consistent = false;
              break;
            }
            map[y] = y_img;
            used[y_img] = true;
            next.push_back(y);
          } else if (map[y] != y_img) {
            consistent = false;
          }
        }
      }
      frontier = std::move(next);
    }
    if (!consistent)
      continue;
    if (extend_isomorphism(a, b, gens, pos + 1, gen_images))
      return true;
  }
  return false;
}

} // namespace

std::optional<std::vector<ElemId>> group_isomorphic(const FiniteGroup &a,
                                                    const FiniteGroup &b) {
  if (a.order() != b.order())
    return std::nullopt;
  if (a.order() > 512)
    throw Error(ErrorKind::CapExceeded,
                "group_isomorphic caps at order 512");
  if (a.element_order_multiset() != b.element_order_multiset())
    return std::nullopt;
  if (abelianization_invariant(a) != abelianization_invariant(b))
    return std::nullopt;

  std::vector<ElemId> gens = a.small_generating_set();
  if (gens.size() > 4)
    throw Error(ErrorKind::CapExceeded,
                "group_isomorphic caps at generating sets of size 4");
  std::vector<ElemId> gen_images(gens.size());
  if (!extend_isomorphism(a, b, gens, 0, gen_images))
    return std::nullopt;

  // rebuild the full element map from the generator images
  std::vector<ElemId> map(a.order(), UINT32_MAX);
  map[0] = 0;
  std::vector<ElemId> frontier{0};
  while (!frontier.empty()) {
    std::vector<ElemId> next;
    for (ElemId x : frontier)
      for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        ElemId y = a.mul(x, gens[gi]);
        if (map[y] == UINT32_MAX) {
          map[y] = b.mul(map[x], gen_images[gi]);
          next.push_back(y);
        }
      }
    frontier = std::move(next);
  }
  return map;
}

MoritaWitness morita_equivalent(GroupoidPtr g, GroupoidPtr h) {
  MoritaWitness out;
  auto g_classes = pi0(*g);
  auto h_classes = pi0(*h);
  if (g_classes.size() != h_classes.size()) {
    out.reason = "pi0 sizes differ: " + std::to_string(g_classes.size()) +
                 " vs " + std::to_string(h_classes.size());
    return out;
  }
  std::vector<IsotropyGroup> g_iso, h_iso;
  for (const auto &cls : g_classes)
    g_iso.push_back(isotropy(*g, cls[0]));
  for (const auto &cls : h_classes)
    h_iso.push_back(isotropy(*h, cls[0]));

  std::vector<bool> taken(h_classes.size(), false);
  for (std::size_t i = 0; i < g_classes.size(); ++i) {
    bool matched = false;
    for (std::size_t j = 0; j < h_classes.size() && !matched; ++j) {
      if (taken[j])
        continue;
      auto iso = group_isomorphic(*g_iso[i].group, *h_iso[j].group);
      if (iso) {
        taken[j] = true;
        out.matches.push_back({g_classes[i][0], h_classes[j][0],
                               std::move(*iso)});
        matched = true;
      }
    }
    if (!matched) {
      out.reason = "no class of the right groupoid matches the isotropy at "
                   "object " +
                   std::to_string(g_classes[i][0]);
      out.matches.clear();
      return out;
    }
  }
  out.equivalent = true;
  return out;
}

MoritaSpan morita_span(GroupoidPtr g, GroupoidPtr h,
                       const MoritaWitness &witness) {
  if (!witness.equivalent)
    throw Error(ErrorKind::ValidationError,
                "cannot build a span from a negative witness");
  MoritaSpan span;
  span.apex = skeleton(g);
  span.to_left = span.apex.inclusion;

  const auto &S = *span.apex.groupoid;
  GroupoidFunctor to_right;
  to_right.domain = span.apex.groupoid;
  to_right.codomain = h;
  to_right.obj_map.resize(S.num_objects());
  to_right.arr_map.resize(S.num_arrows());

  for (const auto &match : witness.matches) {
    // locate the skeleton object for this class
    ObjId s_obj = UINT32_MAX;
    for (ObjId i = 0; i < S.num_objects(); ++i)
      if (span.apex.inclusion.obj_map[i] == match.left_representative) {
        s_obj = i;
        break;
      }
    if (s_obj == UINT32_MAX)
      throw Error(ErrorKind::ValidationError,
                  "witness names an unknown class representative");
    to_right.obj_map[s_obj] = match.right_representative;
    IsotropyGroup left = isotropy(S, s_obj);
    IsotropyGroup right = isotropy(*h, match.right_representative);
    for (ElemId e = 0; e < left.group->order(); ++e)
      to_right.arr_map[left.arrow_of_element[e]] =
          right.arrow_of_element[match.group_isomorphism[e]];
  }
  span.to_right = std::move(to_right);
  return span;
}

} // namespace stacklab
