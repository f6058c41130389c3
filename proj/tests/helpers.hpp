#ifndef STACKLAB_TEST_HELPERS_HPP
#define STACKLAB_TEST_HELPERS_HPP

#include <string>
#include <vector>

#include "stacklab/constructions.hpp"
#include "stacklab/gog.hpp"
#include "stacklab/group.hpp"
#include "stacklab/groupoid.hpp"

namespace stacklab::testing {

/// Z2 swapping {a, b}: the 2-object contractible (pair) groupoid.
inline GroupoidPtr z2_swap_groupoid() {
  auto z2 = make_cyclic_group(2);
  return action_groupoid(z2, {{0, 1}, {1, 0}});
}

inline GroupoidPtr unit_groupoid(std::uint32_t n_objects = 1) {
  auto triv = make_trivial_group();
  std::vector<ObjId> points(n_objects);
  for (ObjId i = 0; i < n_objects; ++i)
    points[i] = i;
  return action_groupoid(triv, {points});
}

/// The left-multiplication action of G on left cosets of the subgroup
/// generated by `subgroup_gens`.
inline GroupoidPtr coset_action_groupoid(GroupPtr g,
                                         std::vector<ElemId> subgroup_gens) {
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

/// hom G_e -> G_v given by the image of each edge-group element.
inline GroupHom hom_of(GroupPtr dom, GroupPtr cod,
                       std::vector<ElemId> image) {
  GroupHom h;
  h.domain = std::move(dom);
  h.codomain = std::move(cod);
  h.image = std::move(image);
  return h;
}

/// The segment with Z_m and Z_n vertex groups and edge group Z_d embedded
/// as the subgroups of indices m/d and n/d.
inline GraphOfGroupsPtr segment_gog(std::uint32_t m, std::uint32_t n,
                                    std::uint32_t d) {
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
  e.incl[0] = hom_of(gd, gm, into_m);
  e.incl[1] = hom_of(gd, gn, into_n);
  return std::make_shared<GraphOfGroups>(std::move(vertices),
                                         std::vector<GraphOfGroups::Edge>{e},
                                         0);
}

/// A loop at a single vertex: HNN datum with two embeddings of the edge
/// group given elementwise.
inline GraphOfGroupsPtr loop_gog(GroupPtr vertex_group, GroupPtr edge_group,
                                 std::vector<ElemId> first,
                                 std::vector<ElemId> second) {
  std::vector<GraphOfGroups::Vertex> vertices{{"v1", vertex_group}};
  GraphOfGroups::Edge e;
  e.name = "e1";
  e.ends[0] = 0;
  e.ends[1] = 0;
  e.group = edge_group;
  e.incl[0] = hom_of(edge_group, vertex_group, std::move(first));
  e.incl[1] = hom_of(edge_group, vertex_group, std::move(second));
  return std::make_shared<GraphOfGroups>(std::move(vertices),
                                         std::vector<GraphOfGroups::Edge>{e},
                                         0);
}

inline GraphOfGroupsPtr circle_gog() {
  auto triv = make_trivial_group();
  return loop_gog(triv, triv, {0}, {0});
}

/// Two vertices joined by two parallel edges with trivial edge groups.
inline GraphOfGroupsPtr theta_gog(GroupPtr g1, GroupPtr g2) {
  auto triv = make_trivial_group();
  std::vector<GraphOfGroups::Vertex> vertices{{"v1", g1}, {"v2", g2}};
  std::vector<GraphOfGroups::Edge> edges;
  for (int i = 0; i < 2; ++i) {
    GraphOfGroups::Edge e;
    e.name = "e" + std::to_string(i + 1);
    e.ends[0] = 0;
    e.ends[1] = 1;
    e.group = triv;
    e.incl[0] = hom_of(triv, g1, {0});
    e.incl[1] = hom_of(triv, g2, {0});
    edges.push_back(std::move(e));
  }
  return std::make_shared<GraphOfGroups>(std::move(vertices),
                                         std::move(edges), 0);
}


/// Z4 --(Z2)-- Z2 --(Z2)-- S3: a 3-vertex path whose spanning tree has
/// depth two from the basepoint.
inline GraphOfGroupsPtr path_gog() {
  auto z4 = make_cyclic_group(4);
  auto z2 = make_cyclic_group(2);
  auto s3 = make_symmetric_group(3);
  ElemId t = 0;
  for (ElemId a = 1; a < 6; ++a)
    if (s3->element_order(a) == 2) {
      t = a;
      break;
    }
  std::vector<GraphOfGroups::Vertex> vertices{
      {"v1", z4}, {"v2", z2}, {"v3", s3}};
  std::vector<GraphOfGroups::Edge> edges(2);
  edges[0].name = "e1";
  edges[0].ends[0] = 0;
  edges[0].ends[1] = 1;
  edges[0].group = z2;
  edges[0].incl[0] = hom_of(z2, z4, {0, 2});
  edges[0].incl[1] = hom_of(z2, z2, {0, 1});
  edges[1].name = "e2";
  edges[1].ends[0] = 1;
  edges[1].ends[1] = 2;
  edges[1].group = z2;
  edges[1].incl[0] = hom_of(z2, z2, {0, 1});
  edges[1].incl[1] = hom_of(z2, s3, {0, t});
  return std::make_shared<GraphOfGroups>(std::move(vertices),
                                         std::move(edges), 0);
}

/// A triangle with trivial edge groups: first Betti number one, so one
/// stable letter over a depth-two spanning tree.
inline GraphOfGroupsPtr triangle_gog() {
  auto z2 = make_cyclic_group(2);
  auto z3 = make_cyclic_group(3);
  auto triv = make_trivial_group();
  std::vector<GraphOfGroups::Vertex> vertices{
      {"v1", z2}, {"v2", z3}, {"v3", z2}};
  std::vector<GraphOfGroups::Edge> edges(3);
  VertexId ends[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (int i = 0; i < 3; ++i) {
    edges[i].name = "e" + std::to_string(i + 1);
    edges[i].ends[0] = ends[i][0];
    edges[i].ends[1] = ends[i][1];
    edges[i].group = triv;
    edges[i].incl[0] = hom_of(triv, vertices[ends[i][0]].group, {0});
    edges[i].incl[1] = hom_of(triv, vertices[ends[i][1]].group, {0});
  }
  return std::make_shared<GraphOfGroups>(std::move(vertices),
                                         std::move(edges), 0);
}

} // namespace stacklab::testing

#endif
