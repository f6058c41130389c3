#include "stacklab/formats.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "stacklab/errors.hpp"

namespace stacklab {

Json make_document(const std::string &kind, Json payload) {
  Json doc;
  doc["kind"] = kind;
  doc["payload"] = std::move(payload);
  doc["version"] = kFormatVersion;
  return doc;
}

Json parse_document(const std::string &text,
                    const std::string &expected_kind) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw Error(ErrorKind::SyntaxError,
                std::string(e.what()) + " (byte offset " +
                    std::to_string(e.byte) + ")");
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc.contains("version") ||
      !doc.contains("payload"))
    throw Error(ErrorKind::SchemaError,
                "document must carry kind, version and payload");
  if (!doc["version"].is_number_integer())
    throw Error(ErrorKind::SchemaError, "version must be an integer");
  if (doc["version"].get<int>() != kFormatVersion)
    throw Error(ErrorKind::SchemaError,
                "unknown major version " + doc["version"].dump());
  if (!expected_kind.empty() && doc["kind"] != expected_kind)
    throw Error(ErrorKind::SchemaError,
                "expected kind '" + expected_kind + "', found " +
                    doc["kind"].dump());
  return doc;
}

std::string document_kind(const Json &doc) {
  return doc.at("kind").get<std::string>();
}

const Json &document_payload(const Json &doc) { return doc.at("payload"); }

std::string serialize(const Json &doc) { return doc.dump(2) + "\n"; }

Json rational_to_json(const Rational &q) {
  Json j;
  j["den"] = q.den();
  j["num"] = q.num();
  return j;
}

Rational rational_from_json(const Json &j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den"))
    throw Error(ErrorKind::SchemaError, "rational must be {den, num}");
  return Rational(j["num"].get<std::int64_t>(),
                  j["den"].get<std::int64_t>());
}

// ---------------------------------------------------------------------------
// groups

Json group_to_json(const FiniteGroup &g) {
  Json j;
  j["name"] = g.name();
  if (g.has_table()) {
    j["order"] = g.order();
    j["mul"] = g.table();
  }
  if (g.has_perm_realization()) {
    j["degree"] = g.perm_degree();
    Json gens = Json::array();
    for (const Perm &p : g.perm_gens())
      gens.push_back(perm_cycles(p));
    j["perm_gens"] = gens;
  }
  return j;
}

GroupPtr group_from_json(const Json &payload) {
  if (!payload.is_object() || !payload.contains("name"))
    throw Error(ErrorKind::SchemaError, "group payload must carry a name");
  std::string name = payload["name"].get<std::string>();
  bool has_table = payload.contains("mul");
  bool has_perms = payload.contains("perm_gens");
  if (!has_table && !has_perms)
    throw Error(ErrorKind::SchemaError,
                "group '" + name + "' needs 'mul' or 'perm_gens'");
  std::vector<Perm> gens;
  std::uint32_t degree = 0;
  if (has_perms) {
    if (!payload.contains("degree"))
      throw Error(ErrorKind::SchemaError,
                  "group '" + name + "': perm_gens require a degree");
    degree = payload["degree"].get<std::uint32_t>();
    for (const auto &cycles_json : payload["perm_gens"]) {
      std::vector<std::vector<std::uint32_t>> cycles;
      for (const auto &cyc : cycles_json)
        cycles.push_back(cyc.get<std::vector<std::uint32_t>>());
      gens.push_back(perm_from_cycles(degree, cycles));
    }
  }
  try {
    if (has_table) {
      std::vector<ElemId> table = payload["mul"].get<std::vector<ElemId>>();
      if (payload.contains("order") &&
          payload["order"].get<std::uint64_t>() *
                  payload["order"].get<std::uint64_t>() !=
              table.size())
        throw Error(ErrorKind::SchemaError,
                    "group '" + name + "': order does not match the table");
      if (has_perms)
        return FiniteGroup::from_table_and_perm_gens(name, std::move(table),
                                                     degree, std::move(gens));
      return FiniteGroup::from_table(name, std::move(table));
    }
    return FiniteGroup::from_perm_gens(name, degree, std::move(gens));
  } catch (const Error &) {
    throw;
  }
}

// ---------------------------------------------------------------------------
// groupoids

Json groupoid_to_json(const FiniteGroupoid &g) {
  Json j;
  Json objects = Json::array();
  for (ObjId x = 0; x < g.num_objects(); ++x)
    objects.push_back(x);
  j["objects"] = objects;
  Json arrows = Json::array();
  for (ArrowId f = 0; f < g.num_arrows(); ++f) {
    Json a;
    a["id"] = f;
    a["src"] = g.src(f);
    a["tgt"] = g.tgt(f);
    arrows.push_back(a);
  }
  j["arrows"] = arrows;
  Json identities = Json::object();
  for (ObjId x = 0; x < g.num_objects(); ++x)
    identities[std::to_string(x)] = g.identity(x);
  j["identities"] = identities;
  j["compose"] = g.compose_triples();
  return j;
}

GroupoidPtr groupoid_from_json(const Json &payload) {
  for (const char *key : {"objects", "arrows", "identities", "compose"})
    if (!payload.contains(key))
      throw Error(ErrorKind::SchemaError,
                  std::string("groupoid payload misses '") + key + "'");
  std::vector<std::uint32_t> objects =
      payload["objects"].get<std::vector<std::uint32_t>>();
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (objects[i] != i)
      throw Error(ErrorKind::SchemaError,
                  "objects must be the dense list 0..n-1");
  std::uint32_t n_obj = static_cast<std::uint32_t>(objects.size());

  std::vector<FiniteGroupoid::Arrow> arrows;
  std::size_t arrow_no = 0;
  for (const auto &a : payload["arrows"]) {
    if (!a.contains("id") || !a.contains("src") || !a.contains("tgt"))
      throw Error(ErrorKind::SchemaError, "arrow needs id, src, tgt");
    if (a["id"].get<std::size_t>() != arrow_no)
      throw Error(ErrorKind::SchemaError,
                  "arrow ids must be dense and in order");
    ObjId src = a["src"].get<ObjId>();
    ObjId tgt = a["tgt"].get<ObjId>();
    if (src >= n_obj)
      throw Error(ErrorKind::SchemaError,
                  "arrow " + std::to_string(arrow_no) +
                      " has dangling src id " + std::to_string(src));
    if (tgt >= n_obj)
      throw Error(ErrorKind::SchemaError,
                  "arrow " + std::to_string(arrow_no) +
                      " has dangling tgt id " + std::to_string(tgt));
    arrows.push_back({src, tgt});
    ++arrow_no;
  }
  std::vector<ArrowId> identities(n_obj);
  if (!payload["identities"].is_object() ||
      payload["identities"].size() != n_obj)
    throw Error(ErrorKind::SchemaError,
                "identities must map every object to an arrow");
  for (ObjId x = 0; x < n_obj; ++x) {
    const std::string key = std::to_string(x);
    if (!payload["identities"].contains(key))
      throw Error(ErrorKind::SchemaError,
                  "identities misses object " + key);
    identities[x] = payload["identities"][key].get<ArrowId>();
    if (identities[x] >= arrows.size())
      throw Error(ErrorKind::SchemaError,
                  "identity of object " + key + " is a dangling arrow id");
  }

  // inverses are recovered from the table: f^-1 is the g with f.g = id(src)
  std::vector<std::array<ArrowId, 3>> triples;
  for (const auto &t : payload["compose"]) {
    if (!t.is_array() || t.size() != 3)
      throw Error(ErrorKind::SchemaError, "compose entries are [f, g, fg]");
    std::array<ArrowId, 3> triple{t[0].get<ArrowId>(), t[1].get<ArrowId>(),
                                  t[2].get<ArrowId>()};
    for (ArrowId f : triple)
      if (f >= arrows.size())
        throw Error(ErrorKind::SchemaError,
                    "compose names a dangling arrow id " + std::to_string(f));
    triples.push_back(triple);
  }
  std::vector<ArrowId> inverses(arrows.size(), UINT32_MAX);
  for (const auto &t : triples)
    if (t[2] < arrows.size() && arrows[t[0]].src < n_obj &&
        t[2] == identities[arrows[t[0]].src])
      inverses[t[0]] = t[1];
  for (ArrowId f = 0; f < arrows.size(); ++f)
    if (inverses[f] == UINT32_MAX)
      throw Error(ErrorKind::ValidationError,
                  "arrow " + std::to_string(f) + " has no inverse in the "
                                                 "compose table");
  auto g = std::make_shared<FiniteGroupoid>(n_obj, std::move(arrows),
                                            std::move(identities),
                                            std::move(inverses),
                                            std::move(triples));
  auto report = g->validate();
  if (!report.ok())
    throw Error(ErrorKind::ValidationError,
                report.failures.front().axiom + " at " +
                    report.failures.front().detail);
  return g;
}

// ---------------------------------------------------------------------------
// graphs of groups

Json gog_to_json(const GraphOfGroups &g) {
  Json j;
  // groups keyed by name; names must be unambiguous
  std::map<std::string, const FiniteGroup *> groups;
  auto add_group = [&](const GroupPtr &gp) {
    auto it = groups.find(gp->name());
    if (it != groups.end() && it->second != gp.get())
      throw Error(ErrorKind::ValidationError,
                  "two distinct groups share the name '" + gp->name() + "'");
    groups[gp->name()] = gp.get();
  };
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    add_group(g.vertex(v).group);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    add_group(g.edge(e).group);
  Json groups_json = Json::array();
  for (const auto &[name, group] : groups)
    groups_json.push_back(group_to_json(*group));
  j["groups"] = groups_json;

  Json vertices = Json::array();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    Json vj;
    vj["group"] = g.vertex(v).group->name();
    vj["name"] = g.vertex(v).name;
    vertices.push_back(vj);
  }
  j["vertices"] = vertices;
  Json edges = Json::array();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto &edge = g.edge(e);
    Json ej;
    ej["ends"] = {g.vertex(edge.ends[0]).name, g.vertex(edge.ends[1]).name};
    ej["group"] = edge.group->name();
    ej["into"] = {edge.incl[0].image, edge.incl[1].image};
    ej["name"] = edge.name;
    edges.push_back(ej);
  }
  j["edges"] = edges;
  j["basepoint"] = g.vertex(g.basepoint()).name;
  return j;
}

GraphOfGroupsPtr gog_from_json(const Json &payload) {
  for (const char *key : {"groups", "vertices", "edges", "basepoint"})
    if (!payload.contains(key))
      throw Error(ErrorKind::SchemaError,
                  std::string("gog payload misses '") + key + "'");
  std::map<std::string, GroupPtr> groups;
  for (const auto &gj : payload["groups"]) {
    GroupPtr g = group_from_json(gj);
    if (groups.count(g->name()))
      throw Error(ErrorKind::SchemaError,
                  "group '" + g->name() + "' defined twice");
    groups[g->name()] = g;
  }
  auto group_ref = [&](const std::string &name) {
    auto it = groups.find(name);
    if (it == groups.end())
      throw Error(ErrorKind::UnknownGroupRef,
                  "group '" + name + "' is not defined");
    return it->second;
  };
  std::vector<GraphOfGroups::Vertex> vertices;
  std::map<std::string, VertexId> vertex_index;
  for (const auto &vj : payload["vertices"]) {
    GraphOfGroups::Vertex v;
    v.name = vj.at("name").get<std::string>();
    v.group = group_ref(vj.at("group").get<std::string>());
    if (vertex_index.count(v.name))
      throw Error(ErrorKind::SchemaError,
                  "vertex '" + v.name + "' defined twice");
    vertex_index[v.name] = static_cast<VertexId>(vertices.size());
    vertices.push_back(std::move(v));
  }
  auto vertex_ref = [&](const std::string &name) {
    auto it = vertex_index.find(name);
    if (it == vertex_index.end())
      throw Error(ErrorKind::UnknownGroupRef,
                  "vertex '" + name + "' is not defined");
    return it->second;
  };
  std::vector<GraphOfGroups::Edge> edges;
  for (const auto &ej : payload["edges"]) {
    GraphOfGroups::Edge e;
    e.name = ej.at("name").get<std::string>();
    e.ends[0] = vertex_ref(ej.at("ends").at(0).get<std::string>());
    e.ends[1] = vertex_ref(ej.at("ends").at(1).get<std::string>());
    e.group = group_ref(ej.at("group").get<std::string>());
    for (int s = 0; s < 2; ++s) {
      GroupHom hom;
      hom.domain = e.group;
      hom.codomain = vertices[e.ends[s]].group;
      hom.image = ej.at("into").at(s).get<std::vector<ElemId>>();
      if (hom.image.size() != e.group->order())
        throw Error(ErrorKind::SchemaError,
                    "edge '" + e.name + "': image list size mismatch");
      for (ElemId img : hom.image)
        if (img >= hom.codomain->order())
          throw Error(ErrorKind::SchemaError,
                      "edge '" + e.name + "': image id out of range");
      e.incl[s] = std::move(hom);
    }
    edges.push_back(std::move(e));
  }
  VertexId base = vertex_ref(payload["basepoint"].get<std::string>());
  return std::make_shared<GraphOfGroups>(std::move(vertices),
                                         std::move(edges), base);
}

// ---------------------------------------------------------------------------
// actions and covers

Json action_to_json(const Pi1Action &a) {
  Json j;
  j["degree"] = a.degree;
  Json images = Json::object();
  for (std::size_t i = 0; i < a.images.size(); ++i) {
    std::vector<std::uint32_t> one_line;
    for (std::uint32_t x = 0; x < a.degree; ++x)
      one_line.push_back(a.images[i][x] + 1); // 1-based in files
    images[a.presentation->generators[i].symbol] = one_line;
  }
  j["images"] = images;
  return j;
}

Pi1Action action_from_json(const Json &payload,
                           std::shared_ptr<const Pi1Presentation> p) {
  if (!payload.contains("degree") || !payload.contains("images"))
    throw Error(ErrorKind::SchemaError, "action needs degree and images");
  Pi1Action a;
  a.presentation = p;
  a.degree = payload["degree"].get<std::uint32_t>();
  a.images.assign(p->generators.size(), perm_identity(a.degree));
  for (const auto &[symbol, one_line] : payload["images"].items()) {
    auto gen = p->generator_by_symbol(symbol);
    if (!gen)
      throw Error(ErrorKind::SchemaError,
                  "action names unknown generator '" + symbol + "'");
    std::vector<std::uint32_t> line =
        one_line.get<std::vector<std::uint32_t>>();
    if (line.size() != a.degree)
      throw Error(ErrorKind::SchemaError,
                  "permutation for '" + symbol + "' has wrong length");
    Perm perm(a.degree);
    for (std::uint32_t x = 0; x < a.degree; ++x) {
      if (line[x] < 1 || line[x] > a.degree)
        throw Error(ErrorKind::SchemaError,
                    "permutation for '" + symbol + "' has out-of-range "
                                                   "entries");
      perm[x] = line[x] - 1;
    }
    if (!is_permutation(perm))
      throw Error(ErrorKind::SchemaError,
                  "'" + symbol + "' image is not a permutation");
    a.images[*gen] = std::move(perm);
  }
  return a;
}

Json cover_to_json(const CoveringGoG &c) {
  Json j;
  j["base"] = gog_to_json(*c.base);
  j["degree"] = c.degree;
  j["total"] = gog_to_json(*c.total);
  Json vfs = Json::array();
  for (const auto &vf : c.vertex_fibers) {
    Json v;
    v["anchor"] = vf.anchor;
    v["base_vertex"] = c.base->vertex(vf.base_vertex).name;
    v["embedding"] = vf.embedding.image;
    v["orbit"] = vf.orbit;
    vfs.push_back(v);
  }
  j["vertex_fibers"] = vfs;
  Json efs = Json::array();
  for (const auto &ef : c.edge_fibers) {
    Json e;
    e["anchor"] = ef.anchor;
    e["base_edge"] = c.base->edge(ef.base_edge).name;
    e["embedding"] = ef.embedding.image;
    e["orbit"] = ef.orbit;
    e["positions"] = {ef.position[0], ef.position[1]};
    efs.push_back(e);
  }
  j["edge_fibers"] = efs;
  return j;
}

CoveringGoG cover_from_json(const Json &payload) {
  for (const char *key :
       {"base", "degree", "total", "vertex_fibers", "edge_fibers"})
    if (!payload.contains(key))
      throw Error(ErrorKind::SchemaError,
                  std::string("cover payload misses '") + key + "'");
  CoveringGoG c;
  c.base = gog_from_json(payload["base"]);
  c.total = gog_from_json(payload["total"]);
  c.degree = payload["degree"].get<std::uint32_t>();
  auto base_vertex_ref = [&](const std::string &name) {
    auto v = c.base->vertex_by_name(name);
    if (!v)
      throw Error(ErrorKind::SchemaError,
                  "cover names unknown base vertex '" + name + "'");
    return *v;
  };
  for (const auto &vj : payload["vertex_fibers"]) {
    CoveringGoG::VertexFiber vf;
    vf.base_vertex = base_vertex_ref(vj.at("base_vertex").get<std::string>());
    vf.anchor = vj.at("anchor").get<ElemId>();
    vf.orbit = vj.at("orbit").get<std::vector<std::uint32_t>>();
    std::uint32_t cv = static_cast<std::uint32_t>(c.vertex_fibers.size());
    vf.embedding.domain = c.total->vertex(cv).group;
    vf.embedding.codomain = c.base->vertex(vf.base_vertex).group;
    vf.embedding.image = vj.at("embedding").get<std::vector<ElemId>>();
    if (!vf.embedding.is_homomorphism() || !vf.embedding.is_injective())
      throw Error(ErrorKind::ValidationError,
                  "cover vertex embedding is not an injective homomorphism");
    c.vertex_fibers.push_back(std::move(vf));
  }
  if (c.vertex_fibers.size() != c.total->num_vertices())
    throw Error(ErrorKind::SchemaError,
                "one vertex fiber per total vertex required");
  for (const auto &ej : payload["edge_fibers"]) {
    CoveringGoG::EdgeFiber ef;
    std::string base_name = ej.at("base_edge").get<std::string>();
    bool found = false;
    for (EdgeId e = 0; e < c.base->num_edges(); ++e)
      if (c.base->edge(e).name == base_name) {
        ef.base_edge = e;
        found = true;
        break;
      }
    if (!found)
      throw Error(ErrorKind::SchemaError,
                  "cover names unknown base edge '" + base_name + "'");
    ef.anchor = ej.at("anchor").get<ElemId>();
    ef.orbit = ej.at("orbit").get<std::vector<std::uint32_t>>();
    std::uint32_t ce = static_cast<std::uint32_t>(c.edge_fibers.size());
    ef.embedding.domain = c.total->edge(ce).group;
    ef.embedding.codomain = c.base->edge(ef.base_edge).group;
    ef.embedding.image = ej.at("embedding").get<std::vector<ElemId>>();
    if (!ef.embedding.is_homomorphism() || !ef.embedding.is_injective())
      throw Error(ErrorKind::ValidationError,
                  "cover edge embedding is not an injective homomorphism");
    ef.position[0] = ej.at("positions").at(0).get<ElemId>();
    ef.position[1] = ej.at("positions").at(1).get<ElemId>();
    c.edge_fibers.push_back(std::move(ef));
  }
  if (c.edge_fibers.size() != c.total->num_edges())
    throw Error(ErrorKind::SchemaError,
                "one edge fiber per total edge required");
  std::uint64_t vertex_degree_sum = 0;
  for (const auto &vf : c.vertex_fibers)
    if (vf.base_vertex == c.base->basepoint())
      vertex_degree_sum += c.base->vertex(vf.base_vertex).group->order() /
                           vf.embedding.domain->order();
  if (vertex_degree_sum != c.degree)
    throw Error(ErrorKind::ValidationError,
                "fiber degrees over the basepoint sum to " +
                    std::to_string(vertex_degree_sum) + ", expected " +
                    std::to_string(c.degree));
  return c;
}

// ---------------------------------------------------------------------------
// DOT emission

std::string to_dot(const FiniteGroupoid &g) {
  std::ostringstream out;
  out << "graph groupoid {\n";
  for (ObjId x = 0; x < g.num_objects(); ++x)
    out << "  o" << x << " [label=\"o" << x << "\\n|I|="
        << g.hom(x, x).size() << "\"];\n";
  for (ObjId x = 0; x < g.num_objects(); ++x)
    for (ObjId y = x + 1; y < g.num_objects(); ++y) {
      std::size_t count = g.hom(x, y).size();
      if (count > 0)
        out << "  o" << x << " -- o" << y << " [label=\"" << count
            << "\"];\n";
    }
  out << "}\n";
  return out.str();
}

std::string to_dot(const GraphOfGroups &g) {
  std::ostringstream out;
  out << "graph gog {\n";
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    out << "  v" << v << " [label=\"" << g.vertex(v).name << "\\n"
        << g.vertex(v).group->name() << " (" << g.vertex(v).group->order()
        << ")\"];\n";
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    out << "  v" << g.edge(e).ends[0] << " -- v" << g.edge(e).ends[1]
        << " [label=\"" << g.edge(e).name << ": "
        << g.edge(e).group->name() << " (" << g.edge(e).group->order()
        << ")\"];\n";
  out << "}\n";
  return out.str();
}

std::string to_dot(const PlainGraph &g) {
  std::ostringstream out;
  out << "graph coarse {\n";
  for (std::uint32_t v = 0; v < g.num_vertices; ++v)
    out << "  v" << v << " [label=\"" << g.vertex_names[v] << "\"];\n";
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    out << "  v" << g.edges[e].first << " -- v" << g.edges[e].second
        << " [label=\"" << g.edge_names[e] << "\"];\n";
  out << "}\n";
  return out.str();
}

std::string to_dot(const TreeBall &ball, const GraphOfGroups &base) {
  std::ostringstream out;
  out << "graph ball {\n";
  for (std::size_t i = 0; i < ball.nodes.size(); ++i)
    out << "  n" << i << " [label=\"" << base.vertex(ball.nodes[i].base_vertex).name
        << "\\nd=" << ball.nodes[i].depth << "\"];\n";
  for (const auto &e : ball.edges)
    out << "  n" << e.from << " -- n" << e.to << " [label=\""
        << base.edge(e.base_edge).name << "\"];\n";
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// files

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::SchemaError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::SchemaError, "cannot write '" + path + "'");
  out << text;
}

namespace {

bool ends_with(const std::string &s, const std::string &suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

Json load_document_file(const std::string &path) {
  std::string text = read_file(path);
  if (ends_with(path, ".gog"))
    return make_document("gog", gog_to_json(*parse_gog(text)));
  if (ends_with(path, ".group.json"))
    return parse_document(text, "group");
  if (ends_with(path, ".groupoid.json"))
    return parse_document(text, "groupoid");
  if (ends_with(path, ".gog.json"))
    return parse_document(text, "gog");
  if (ends_with(path, ".action.json"))
    return parse_document(text, "action");
  if (ends_with(path, ".cover.json"))
    return parse_document(text, "cover");
  throw Error(ErrorKind::UnsupportedKind,
              "unrecognized file extension on '" + path + "'");
}

} // namespace stacklab
