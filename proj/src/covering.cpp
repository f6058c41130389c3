#include "stacklab/covering.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "stacklab/errors.hpp"

namespace stacklab {

std::uint32_t Pi1Action::apply(const Pi1Presentation::Relation &word,
                               std::uint32_t point) const {
  for (const auto &[gen, exp] : word) {
    if (exp > 0)
      point = images[gen][point];
    else
      point = perm_inverse(images[gen])[point];
  }
  return point;
}

ActionValidation validate_action(const Pi1Action &a) {
  ActionValidation out;
  const auto &p = *a.presentation;
  if (a.images.size() != p.generators.size())
    throw Error(ErrorKind::InvalidAction,
                "one image permutation per generator required");
  for (const Perm &perm : a.images)
    if (perm.size() != a.degree || !is_permutation(perm))
      throw Error(ErrorKind::InvalidAction,
                  "images must be permutations of the stated degree");
  for (const auto &rel : p.relations) {
    for (std::uint32_t x = 0; x < a.degree; ++x)
      if (a.apply(rel, x) != x) {
        out.failing_relation = render_relation(p, rel);
        return out;
      }
  }
  out.ok = true;
  return out;
}

bool is_connected_cover(const Pi1Action &a) {
  if (a.degree == 0)
    return false;
  std::vector<bool> seen(a.degree, false);
  seen[0] = true;
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    std::uint32_t x = stack.back();
    stack.pop_back();
    for (const Perm &perm : a.images) {
      for (std::uint32_t y : {perm[x], perm_inverse(perm)[x]})
        if (!seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

namespace {

/// Right action point.g for a vertex-group element.
std::uint32_t apply_elem(const Pi1Action &a, VertexId v, ElemId elem,
                         std::uint32_t point) {
  for (std::uint32_t gen : a.presentation->factorization[v][elem])
    point = a.images[gen][point];
  return point;
}

std::uint32_t apply_edge_letter(const Pi1Action &a, EdgeId e, int sign,
                                std::uint32_t point) {
  const auto &p = *a.presentation;
  if (p.edge_in_tree[e])
    return point;
  const Perm &t = a.images[static_cast<std::uint32_t>(p.stable_letter[e])];
  return sign > 0 ? t[point] : perm_inverse(t)[point];
}

} // namespace

CoveringGoG covering_from_action(GraphOfGroupsPtr g, const Pi1Action &a) {
  auto valid = validate_action(a);
  if (!valid.ok)
    throw Error(ErrorKind::InvalidAction,
                "relation acts nontrivially: " + valid.failing_relation);
  const auto &p = *a.presentation;
  if (p.graph != g)
    throw Error(ErrorKind::InvalidAction,
                "action presentation does not describe this graph");

  CoveringGoG cover;
  cover.base = g;
  cover.degree = a.degree;

  std::vector<GraphOfGroups::Vertex> vertices;
  std::vector<std::vector<std::uint32_t>> vertex_of_point(
      g->num_vertices(), std::vector<std::uint32_t>(a.degree));
  for (VertexId v = 0; v < g->num_vertices(); ++v) {
    const auto &vg = *g->vertex(v).group;
    std::vector<bool> seen(a.degree, false);
    for (std::uint32_t x = 0; x < a.degree; ++x) {
      if (seen[x])
        continue;
      CoveringGoG::VertexFiber fiber;
      fiber.base_vertex = v;
      fiber.anchor = x; // least point: discovered in ascending order
      for (std::uint32_t y = 0; y < a.degree; ++y)
        if (!seen[y]) {
          // same orbit iff some group element moves x to y
          for (ElemId e = 0; e < vg.order(); ++e)
            if (apply_elem(a, v, e, x) == y) {
              seen[y] = true;
              fiber.orbit.push_back(y);
              break;
            }
        }
      std::vector<ElemId> stab;
      for (ElemId e = 0; e < vg.order(); ++e)
        if (apply_elem(a, v, e, x) == x)
          stab.push_back(e);
      Subgroup sub = subgroup_from_elements(
          g->vertex(v).group, std::move(stab),
          g->vertex(v).name + "@" + std::to_string(x));
      fiber.embedding = sub.inclusion;
      for (std::uint32_t pt : fiber.orbit)
        vertex_of_point[v][pt] =
            static_cast<std::uint32_t>(cover.vertex_fibers.size());
      vertices.push_back({sub.group->name(), sub.group});
      cover.vertex_fibers.push_back(std::move(fiber));
    }
  }

  // least c in the vertex group with anchor.c == point
  auto conjugator_to = [&](VertexId v, ElemId anchor, std::uint32_t point) {
    const auto &vg = *g->vertex(v).group;
    for (ElemId c = 0; c < vg.order(); ++c)
      if (apply_elem(a, v, c, anchor) == point)
        return c;
    throw Error(ErrorKind::ValidationError,
                "point escapes its vertex orbit");
  };

  std::vector<GraphOfGroups::Edge> edges;
  for (EdgeId e = 0; e < g->num_edges(); ++e) {
    const auto &edge = g->edge(e);
    const auto &eg = *edge.group;
    VertexId v0 = edge.ends[0], v1 = edge.ends[1];
    std::vector<bool> seen(a.degree, false);
    for (std::uint32_t x = 0; x < a.degree; ++x) {
      if (seen[x])
        continue;
      CoveringGoG::EdgeFiber fiber;
      fiber.base_edge = e;
      fiber.anchor = x;
      for (std::uint32_t y = 0; y < a.degree; ++y)
        if (!seen[y]) {
          for (ElemId s = 0; s < eg.order(); ++s)
            if (apply_elem(a, v0, edge.incl[0](s), x) == y) {
              seen[y] = true;
              fiber.orbit.push_back(y);
              break;
            }
        }
      std::vector<ElemId> stab;
      for (ElemId s = 0; s < eg.order(); ++s)
        if (apply_elem(a, v0, edge.incl[0](s), x) == x)
          stab.push_back(s);
      Subgroup sub = subgroup_from_elements(
          edge.group, std::move(stab),
          edge.name + "@" + std::to_string(x));
      fiber.embedding = sub.inclusion;

      GraphOfGroups::Edge new_edge;
      new_edge.name = sub.group->name();
      new_edge.group = sub.group;
      // end 0: the anchor sits in a vertex orbit over v0
      std::uint32_t across = apply_edge_letter(a, e, 1, x);
      std::uint32_t end_fiber_point[2] = {x, across};
      VertexId end_vertex[2] = {v0, v1};
      for (int s = 0; s < 2; ++s) {
        std::uint32_t cv = vertex_of_point[end_vertex[s]][end_fiber_point[s]];
        new_edge.ends[s] = cv;
        ElemId anchor_v = cover.vertex_fibers[cv].anchor;
        ElemId c = conjugator_to(end_vertex[s], anchor_v,
                                 end_fiber_point[s]);
        fiber.position[s] = c;
        const auto &vg = *g->vertex(end_vertex[s]).group;
        const GroupHom &vertex_embed = cover.vertex_fibers[cv].embedding;
        GroupHom hom;
        hom.domain = sub.group;
        hom.codomain = vertices[cv].group;
        hom.image.resize(sub.group->order());
        for (ElemId q = 0; q < sub.group->order(); ++q) {
          ElemId in_vertex = edge.incl[s](sub.inclusion(q));
          // conjugate the stabilizer of the end point into the stabilizer
          // of the orbit anchor: c (in_vertex) c^-1
          ElemId conj = vg.mul(vg.mul(c, in_vertex), vg.inv(c));
          const auto &img = vertex_embed.image;
          auto it = std::lower_bound(img.begin(), img.end(), conj);
          if (it == img.end() || *it != conj)
            throw Error(ErrorKind::ValidationError,
                        "edge stabilizer escapes the vertex stabilizer");
          hom.image[q] = static_cast<ElemId>(it - img.begin());
        }
        new_edge.incl[s] = std::move(hom);
      }
      edges.push_back(std::move(new_edge));
      cover.edge_fibers.push_back(std::move(fiber));
    }
  }

  // basepoint: the covering vertex over the base basepoint containing 0
  std::uint32_t base_cv = vertex_of_point[g->basepoint()][0];
  cover.total = std::make_shared<GraphOfGroups>(std::move(vertices),
                                                std::move(edges), base_cv);
  return cover;
}

std::vector<FiberPoint> cover_fiber(const CoveringGoG &c) {
  std::vector<FiberPoint> fiber;
  const auto &g = *c.base;
  for (std::uint32_t cv = 0; cv < c.vertex_fibers.size(); ++cv) {
    const auto &vf = c.vertex_fibers[cv];
    if (vf.base_vertex != g.basepoint())
      continue;
    const auto &vg = *g.vertex(vf.base_vertex).group;
    // right cosets (stabilizer * g), least representative each, ascending
    std::vector<bool> seen(vg.order(), false);
    for (ElemId x = 0; x < vg.order(); ++x) {
      if (seen[x])
        continue;
      for (ElemId q = 0; q < vf.embedding.domain->order(); ++q)
        seen[vg.mul(vf.embedding(q), x)] = true;
      fiber.push_back({cv, x});
    }
  }
  return fiber;
}

namespace {

ElemId coset_canonical_rep(const GraphOfGroups &g,
                           const CoveringGoG::VertexFiber &vf, ElemId elem) {
  const auto &vg = *g.vertex(vf.base_vertex).group;
  ElemId best = UINT32_MAX;
  for (ElemId q = 0; q < vf.embedding.domain->order(); ++q)
    best = std::min(best, vg.mul(vf.embedding(q), elem));
  return best;
}

} // namespace

FiberPoint lift_path(const CoveringGoG &c, const Word &loop,
                     const FiberPoint &start) {
  const auto &g = *c.base;
  check_word(g, loop);
  std::uint32_t cv = start.covering_vertex;
  ElemId coset = start.coset_rep;
  for (const auto &syl : loop.syllables) {
    const auto &vf = c.vertex_fibers[cv];
    const auto &vg = *g.vertex(vf.base_vertex).group;
    if (syl.kind == Word::Syllable::VertexElement) {
      coset = coset_canonical_rep(g, vf, vg.mul(coset, syl.element));
      continue;
    }
    EdgeId e = syl.letter.edge;
    int enter = syl.letter.sign > 0 ? 0 : 1;
    int exit = 1 - enter;
    const auto &edge = g.edge(e);
    bool moved = false;
    for (std::uint32_t ce = 0; ce < c.edge_fibers.size() && !moved; ++ce) {
      const auto &ef = c.edge_fibers[ce];
      if (ef.base_edge != e || c.total->edge(ce).ends[enter] != cv)
        continue;
      // does this covering edge contain the current coset at its enter end?
      for (ElemId s = 0; s < edge.group->order(); ++s) {
        ElemId probe = vg.mul(ef.position[enter], edge.incl[enter](s));
        if (coset_canonical_rep(g, vf, probe) != coset)
          continue;
        // found the edge point (factor s); cross to the exit end
        std::uint32_t cv2 = c.total->edge(ce).ends[exit];
        const auto &vf2 = c.vertex_fibers[cv2];
        const auto &vg2 = *g.vertex(vf2.base_vertex).group;
        coset = coset_canonical_rep(
            g, vf2, vg2.mul(ef.position[exit], edge.incl[exit](s)));
        cv = cv2;
        moved = true;
        break;
      }
    }
    if (!moved)
      throw Error(ErrorKind::ValidationError,
                  "path lifting found no covering edge; invalid cover");
  }
  return {cv, coset};
}

Pi1Action monodromy(const CoveringGoG &c,
                    std::shared_ptr<const Pi1Presentation> presentation) {
  const auto &p = *presentation;
  auto fiber = cover_fiber(c);
  auto index_of = [&](const FiberPoint &pt) {
    for (std::uint32_t i = 0; i < fiber.size(); ++i)
      if (fiber[i] == pt)
        return i;
    throw Error(ErrorKind::ValidationError, "lifted point misses the fiber");
  };
  Pi1Action action;
  action.presentation = presentation;
  action.degree = static_cast<std::uint32_t>(fiber.size());
  for (std::uint32_t gen = 0; gen < p.generators.size(); ++gen) {
    Word loop = p.generator_word(gen);
    Perm perm(action.degree);
    for (std::uint32_t i = 0; i < fiber.size(); ++i)
      perm[i] = index_of(lift_path(c, loop, fiber[i]));
    if (!is_permutation(perm))
      throw Error(ErrorKind::ValidationError,
                  "monodromy image is not a permutation; invalid cover");
    action.images.push_back(std::move(perm));
  }
  return action;
}

bool inertia_cartesian_check(const CoveringGoG &c, const Pi1Action &a,
                             VertexId v, std::uint32_t fiber_point) {
  const auto &g = *c.base;
  const auto &vg = *g.vertex(v).group;
  // stabilizer of the point inside the image of G_v
  std::vector<ElemId> stab;
  for (ElemId e = 0; e < vg.order(); ++e)
    if (apply_elem(a, v, e, fiber_point) == fiber_point)
      stab.push_back(e);
  // the covering vertex whose orbit contains the point
  for (std::uint32_t cv = 0; cv < c.vertex_fibers.size(); ++cv) {
    const auto &vf = c.vertex_fibers[cv];
    if (vf.base_vertex != v ||
        !std::binary_search(vf.orbit.begin(), vf.orbit.end(), fiber_point))
      continue;
    // conjugate the anchored stabilizer to the point: Stab(p) = c^-1 S c
    ElemId conj = UINT32_MAX;
    for (ElemId x = 0; x < vg.order(); ++x)
      if (apply_elem(a, v, x, vf.anchor) == fiber_point) {
        conj = x;
        break;
      }
    std::vector<ElemId> expected;
    for (ElemId q = 0; q < vf.embedding.domain->order(); ++q)
      expected.push_back(
          vg.mul(vg.mul(vg.inv(conj), vf.embedding(q)), conj));
    std::sort(expected.begin(), expected.end());
    return expected == stab;
  }
  return false;
}

TreeBall universal_cover_ball(const TransversalTables &tables,
                              std::uint32_t radius, std::uint64_t node_cap) {
  return bass_serre_ball(tables, tables.graph().basepoint(), radius,
                         node_cap);
}

std::vector<std::uint32_t> action_canonical_form(const Pi1Action &a) {
  std::uint32_t n = a.degree;
  std::size_t k = a.images.size();
  std::vector<Perm> inverses;
  for (const Perm &perm : a.images)
    inverses.push_back(perm_inverse(perm));

  // split into orbit components
  std::vector<std::int64_t> comp(n, -1);
  std::uint32_t num_comps = 0;
  for (std::uint32_t x = 0; x < n; ++x) {
    if (comp[x] >= 0)
      continue;
    std::vector<std::uint32_t> stack{x};
    comp[x] = num_comps;
    while (!stack.empty()) {
      std::uint32_t y = stack.back();
      stack.pop_back();
      for (std::size_t gi = 0; gi < k; ++gi)
        for (std::uint32_t z : {a.images[gi][y], inverses[gi][y]})
          if (comp[z] < 0) {
            comp[z] = num_comps;
            stack.push_back(z);
          }
    }
    ++num_comps;
  }

  // canonical form of one component: BFS relabeling from each base point,
  // lexicographically least image tuple wins
  auto component_form = [&](const std::vector<std::uint32_t> &points) {
    std::vector<std::uint32_t> best;
    for (std::uint32_t base : points) {
      std::vector<std::int64_t> label(n, -1);
      std::vector<std::uint32_t> order;
      label[base] = 0;
      order.push_back(base);
      for (std::size_t head = 0; head < order.size(); ++head) {
        std::uint32_t y = order[head];
        for (std::size_t gi = 0; gi < k; ++gi)
          for (std::uint32_t z : {a.images[gi][y], inverses[gi][y]})
            if (label[z] < 0) {
              label[z] = static_cast<std::int64_t>(order.size());
              order.push_back(z);
            }
      }
      std::vector<std::uint32_t> form;
      form.push_back(static_cast<std::uint32_t>(points.size()));
      for (std::size_t gi = 0; gi < k; ++gi)
        for (std::uint32_t y : order)
          form.push_back(static_cast<std::uint32_t>(label[a.images[gi][y]]));
      if (best.empty() || form < best)
        best = std::move(form);
    }
    return best;
  };

  std::vector<std::vector<std::uint32_t>> forms;
  for (std::uint32_t ci = 0; ci < num_comps; ++ci) {
    std::vector<std::uint32_t> points;
    for (std::uint32_t x = 0; x < n; ++x)
      if (comp[x] == ci)
        points.push_back(x);
    forms.push_back(component_form(points));
  }
  std::sort(forms.begin(), forms.end());
  std::vector<std::uint32_t> out;
  out.push_back(n);
  for (const auto &form : forms)
    out.insert(out.end(), form.begin(), form.end());
  return out;
}

bool actions_conjugate(const Pi1Action &a, const Pi1Action &b) {
  if (a.degree != b.degree || a.images.size() != b.images.size())
    return false;
  return action_canonical_form(a) == action_canonical_form(b);
}

std::vector<Pi1Action>
enumerate_actions(std::shared_ptr<const Pi1Presentation> presentation,
                  std::uint32_t n_max, std::uint32_t cap) {
  if (const char *env = std::getenv("STACKLAB_CAP")) {
    char *end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0)
      cap = static_cast<std::uint32_t>(std::min<unsigned long long>(v, 12));
  }
  if (n_max > cap)
    throw Error(ErrorKind::CapExceeded,
                "enumeration capped at degree " + std::to_string(cap));
  const auto &p = *presentation;
  std::size_t k = p.generators.size();

  std::vector<Pi1Action> found;
  std::set<std::vector<std::uint32_t>> canon_seen;
  for (std::uint32_t n = 1; n <= n_max; ++n) {
    // relations become checkable once their highest generator is assigned
    std::vector<std::vector<const Pi1Presentation::Relation *>> ready(k + 1);
    for (const auto &rel : p.relations) {
      std::uint32_t high = 0;
      for (const auto &[gen, exp] : rel)
        high = std::max(high, gen + 1);
      ready[high].push_back(&rel);
    }

    Pi1Action action;
    action.presentation = presentation;
    action.degree = n;
    action.images.assign(k, perm_identity(n));

    std::function<void(std::size_t)> assign = [&](std::size_t gi) {
      if (gi == k) {
        if (!is_connected_cover(action))
          return;
        auto form = action_canonical_form(action);
        if (canon_seen.insert(form).second)
          found.push_back(action);
        return;
      }
      Perm perm = perm_identity(n);
      std::sort(perm.begin(), perm.end());
      do {
        action.images[gi] = perm;
        bool ok = true;
        for (const auto *rel : ready[gi + 1]) {
          for (std::uint32_t x = 0; x < n && ok; ++x)
            if (action.apply(*rel, x) != x)
              ok = false;
          if (!ok)
            break;
        }
        if (ok)
          assign(gi + 1);
      } while (std::next_permutation(perm.begin(), perm.end()));
    };
    if (k == 0) {
      if (n == 1) {
        found.push_back(action);
      }
      continue;
    }
    assign(0);
  }
  return found;
}

} // namespace stacklab
