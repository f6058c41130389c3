#include "stacklab/gog.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "stacklab/errors.hpp"

namespace stacklab {

GraphOfGroups::GraphOfGroups(std::vector<Vertex> vertices,
                             std::vector<Edge> edges, VertexId basepoint)
    : vertices_(std::move(vertices)), edges_(std::move(edges)),
      basepoint_(basepoint) {
  if (vertices_.empty())
    throw Error(ErrorKind::ValidationError,
                "a graph of groups needs at least one vertex");
  if (basepoint_ >= vertices_.size())
    throw Error(ErrorKind::ValidationError, "basepoint out of range");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge &e = edges_[i];
    for (int s = 0; s < 2; ++s) {
      if (e.ends[s] >= vertices_.size())
        throw Error(ErrorKind::ValidationError,
                    "edge '" + e.name + "' has a dangling end");
      const GroupHom &h = e.incl[s];
      if (h.domain != e.group || h.codomain != vertices_[e.ends[s]].group)
        throw Error(ErrorKind::ValidationError,
                    "edge '" + e.name + "': inclusion endpoints mismatch");
      if (!h.is_homomorphism())
        throw Error(ErrorKind::ValidationError,
                    "edge '" + e.name + "': map is not a homomorphism");
      if (!h.is_injective())
        throw Error(ErrorKind::NonInjectiveInclusion,
                    "edge '" + e.name + "': inclusion into '" +
                        vertices_[e.ends[s]].name + "' has nontrivial kernel");
    }
  }
}

bool GraphOfGroups::is_connected() const {
  std::vector<bool> seen(vertices_.size(), false);
  std::deque<VertexId> queue{basepoint_};
  seen[basepoint_] = true;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (const Edge &e : edges_)
      for (int s = 0; s < 2; ++s)
        if (e.ends[s] == v && !seen[e.ends[1 - s]]) {
          seen[e.ends[1 - s]] = true;
          queue.push_back(e.ends[1 - s]);
        }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

std::optional<VertexId>
GraphOfGroups::vertex_by_name(const std::string &name) const {
  for (VertexId v = 0; v < vertices_.size(); ++v)
    if (vertices_[v].name == name)
      return v;
  return std::nullopt;
}

Rational GraphOfGroups::euler_characteristic() const {
  Rational chi(0);
  for (const Vertex &v : vertices_)
    chi = chi + Rational(1, v.group->order());
  for (const Edge &e : edges_)
    chi = chi - Rational(1, e.group->order());
  return chi;
}

// ---------------------------------------------------------------------------
// DSL parser

namespace {

struct Cursor {
  std::size_t line;
  std::size_t col;
};

[[noreturn]] void syntax_error(const Cursor &at, const std::string &msg) {
  throw PositionedError(ErrorKind::SyntaxError, msg, at.line, at.col);
}

std::vector<std::pair<std::string, std::size_t>>
split_tokens(const std::string &line) {
  std::vector<std::pair<std::string, std::size_t>> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#')
      break;
    if (line[i] == '[' || line[i] == ']') {
      tokens.push_back({std::string(1, line[i]), i + 1});
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '[' && line[i] != ']' && line[i] != '#')
      ++i;
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

long parse_int(const std::pair<std::string, std::size_t> &tok,
               std::size_t line_no) {
  try {
    std::size_t pos = 0;
    long v = std::stol(tok.first, &pos);
    if (pos != tok.first.size())
      throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception &) {
    syntax_error({line_no, tok.second}, "expected an integer, got '" +
                                            tok.first + "'");
  }
}

/// Generators on a `perm` line: cycles like (1 2 3)(4 5); whitespace between
/// generators, none between cycles of one generator.
std::vector<Perm> parse_perm_generators(const std::string &rest,
                                        std::uint32_t degree,
                                        std::size_t line_no,
                                        std::size_t col_base) {
  std::vector<Perm> gens;
  std::vector<std::vector<std::uint32_t>> current;
  std::size_t i = 0;
  auto flush = [&]() {
    if (!current.empty()) {
      gens.push_back(perm_from_cycles(degree, current));
      current.clear();
    }
  };
  while (i < rest.size()) {
    char c = rest[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
      ++i;
      continue;
    }
    if (c == '#')
      break;
    if (c != '(')
      syntax_error({line_no, col_base + i + 1},
                   "expected '(' in permutation generator");
    std::size_t close = rest.find(')', i);
    if (close == std::string::npos)
      syntax_error({line_no, col_base + i + 1}, "unclosed cycle");
    std::istringstream body(rest.substr(i + 1, close - i - 1));
    std::vector<std::uint32_t> cycle;
    long point;
    while (body >> point) {
      if (point < 1 || static_cast<std::uint32_t>(point) > degree)
        syntax_error({line_no, col_base + i + 1},
                     "cycle point out of range 1.." + std::to_string(degree));
      cycle.push_back(static_cast<std::uint32_t>(point));
    }
    if (!body.eof())
      syntax_error({line_no, col_base + i + 1}, "bad cycle contents");
    if (cycle.size() > 1)
      current.push_back(std::move(cycle));
    i = close + 1;
  }
  flush();
  return gens;
}

} // namespace

GraphOfGroupsPtr parse_gog(const std::string &text) {
  std::map<std::string, GroupPtr> groups;
  std::vector<GraphOfGroups::Vertex> vertices;
  std::map<std::string, VertexId> vertex_index;
  std::vector<GraphOfGroups::Edge> edges;
  std::set<std::string> edge_names;
  std::optional<VertexId> basepoint;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_tokens(line);
    if (tokens.empty())
      continue;
    const std::string &head = tokens[0].first;
    auto need = [&](std::size_t k, const char *what) {
      if (tokens.size() <= k)
        syntax_error({line_no, line.size() + 1},
                     std::string("missing ") + what);
      return tokens[k];
    };
    if (head == "group") {
      std::string name = need(1, "group name").first;
      if (groups.count(name))
        syntax_error({line_no, tokens[1].second},
                     "group '" + name + "' already defined");
      std::string kind = need(2, "'table' or 'perm'").first;
      if (kind == "table") {
        std::vector<ElemId> table;
        for (std::size_t k = 3; k < tokens.size(); ++k) {
          long v = parse_int(tokens[k], line_no);
          if (v < 0)
            syntax_error({line_no, tokens[k].second},
                         "table entries are nonnegative");
          table.push_back(static_cast<ElemId>(v));
        }
        try {
          groups[name] = FiniteGroup::from_table(name, std::move(table));
        } catch (const Error &e) {
          throw PositionedError(e.kind(), e.what(), line_no, tokens[2].second);
        }
      } else if (kind == "perm") {
        long degree = parse_int(need(3, "degree"), line_no);
        if (degree < 1)
          syntax_error({line_no, tokens[3].second}, "degree must be >= 1");
        std::size_t rest_col = tokens[3].second + tokens[3].first.size();
        std::string rest =
            rest_col <= line.size() ? line.substr(rest_col) : std::string();
        auto gens = parse_perm_generators(
            rest, static_cast<std::uint32_t>(degree), line_no, rest_col);
        try {
          groups[name] = FiniteGroup::from_perm_gens(
              name, static_cast<std::uint32_t>(degree), std::move(gens));
        } catch (const Error &e) {
          throw PositionedError(e.kind(), e.what(), line_no, tokens[2].second);
        }
      } else {
        syntax_error({line_no, tokens[2].second},
                     "expected 'table' or 'perm', got '" + kind + "'");
      }
    } else if (head == "vertex") {
      std::string name = need(1, "vertex name").first;
      std::string gname = need(2, "group name").first;
      if (vertex_index.count(name))
        syntax_error({line_no, tokens[1].second},
                     "vertex '" + name + "' already defined");
      auto it = groups.find(gname);
      if (it == groups.end())
        throw PositionedError(ErrorKind::UnknownGroupRef,
                              "group '" + gname + "' is not defined", line_no,
                              tokens[2].second);
      vertex_index[name] = static_cast<VertexId>(vertices.size());
      vertices.push_back({name, it->second});
    } else if (head == "edge") {
      std::string name = need(1, "edge name").first;
      if (edge_names.count(name))
        syntax_error({line_no, tokens[1].second},
                     "edge '" + name + "' already defined");
      std::string v1 = need(2, "first endpoint").first;
      std::string v2 = need(3, "second endpoint").first;
      for (const std::string *v : {&v1, &v2})
        if (!vertex_index.count(*v))
          throw PositionedError(ErrorKind::UnknownGroupRef,
                                "vertex '" + *v + "' is not defined", line_no,
                                tokens[2].second);
      if (need(4, "'group'").first != "group")
        syntax_error({line_no, tokens[4].second}, "expected 'group'");
      std::string gname = need(5, "edge group").first;
      auto git = groups.find(gname);
      if (git == groups.end())
        throw PositionedError(ErrorKind::UnknownGroupRef,
                              "group '" + gname + "' is not defined", line_no,
                              tokens[5].second);
      GraphOfGroups::Edge e;
      e.name = name;
      e.ends[0] = vertex_index[v1];
      e.ends[1] = vertex_index[v2];
      e.group = git->second;
      std::size_t k = 6;
      const std::string *end_names[2] = {&v1, &v2};
      for (int s = 0; s < 2; ++s) {
        auto tag = need(k, "'into_<vertex>'");
        if (tag.first != "into_" + *end_names[s])
          syntax_error({line_no, tag.second},
                       "expected 'into_" + *end_names[s] + "'");
        ++k;
        if (need(k, "'['").first != "[")
          syntax_error({line_no, tokens[k].second}, "expected '['");
        ++k;
        std::vector<ElemId> image;
        while (need(k, "']'").first != "]") {
          long v = parse_int(tokens[k], line_no);
          if (v < 0)
            syntax_error({line_no, tokens[k].second},
                         "element ids are nonnegative");
          image.push_back(static_cast<ElemId>(v));
          ++k;
        }
        ++k;
        if (image.size() != e.group->order())
          syntax_error({line_no, tag.second,},
                       "image list must name all " +
                           std::to_string(e.group->order()) +
                           " edge-group elements");
        GroupHom hom;
        hom.domain = e.group;
        hom.codomain = vertices[e.ends[s]].group;
        hom.image = std::move(image);
        for (ElemId img : hom.image)
          if (img >= hom.codomain->order())
            throw PositionedError(ErrorKind::SchemaError,
                                  "image id out of range in edge '" + name +
                                      "'",
                                  line_no, tag.second);
        if (!hom.is_homomorphism())
          throw PositionedError(ErrorKind::ValidationError,
                                "edge '" + name +
                                    "': image list is not a homomorphism",
                                line_no, tag.second);
        if (!hom.is_injective())
          throw PositionedError(ErrorKind::NonInjectiveInclusion,
                                "edge '" + name + "': inclusion into '" +
                                    *end_names[s] + "' is not injective",
                                line_no, tag.second);
        e.incl[s] = std::move(hom);
      }
      if (k != tokens.size())
        syntax_error({line_no, tokens[k].second}, "trailing tokens");
      edges.push_back(std::move(e));
      edge_names.insert(name);
    } else if (head == "basepoint") {
      std::string name = need(1, "vertex name").first;
      auto it = vertex_index.find(name);
      if (it == vertex_index.end())
        throw PositionedError(ErrorKind::UnknownGroupRef,
                              "vertex '" + name + "' is not defined", line_no,
                              tokens[1].second);
      basepoint = it->second;
    } else {
      syntax_error({line_no, tokens[0].second},
                   "unknown directive '" + head + "'");
    }
  }
  if (vertices.empty())
    throw PositionedError(ErrorKind::SyntaxError, "no vertices defined",
                          line_no, 1);
  return std::make_shared<GraphOfGroups>(std::move(vertices),
                                         std::move(edges),
                                         basepoint.value_or(0));
}

// ---------------------------------------------------------------------------
// Transversals and the word machine

TransversalTables::TransversalTables(GraphOfGroupsPtr g)
    : graph_(std::move(g)) {
  tables_.resize(2 * graph_->num_edges());
  for (EdgeId e = 0; e < graph_->num_edges(); ++e)
    for (int s = 0; s < 2; ++s) {
      const auto &edge = graph_->edge(e);
      const auto &vg = *graph_->vertex(edge.ends[s]).group;
      EndTable &t = tables_[2 * e + s];
      t.image = edge.incl[s].image;
      std::sort(t.image.begin(), t.image.end());
      std::vector<ElemId> preimage(vg.order(), UINT32_MAX);
      for (ElemId a = 0; a < edge.group->order(); ++a)
        preimage[edge.incl[s](a)] = a;
      t.rep.assign(vg.order(), UINT32_MAX);
      t.edge_factor.assign(vg.order(), UINT32_MAX);
      for (ElemId x = 0; x < vg.order(); ++x) {
        if (t.rep[x] != UINT32_MAX)
          continue;
        // right coset (image * x); x ascending, so the first visit of a
        // coset happens at its least element, which becomes the rep
        for (ElemId a_img : t.image) {
          ElemId y = vg.mul(a_img, x);
          t.rep[y] = x;
          t.edge_factor[y] = preimage[vg.mul(y, vg.inv(x))];
        }
      }
      std::vector<bool> seen(vg.order(), false);
      for (ElemId x = 0; x < vg.order(); ++x) {
        if (seen[x])
          continue;
        t.left_reps.push_back(x);
        for (ElemId a_img : t.image)
          seen[vg.mul(x, a_img)] = true;
      }
    }
}

const std::vector<ElemId> &TransversalTables::image_elements(EdgeId e,
                                                             int end) const {
  return tables_[2 * e + end].image;
}

ElemId TransversalTables::coset_rep(EdgeId e, int end, ElemId g) const {
  return tables_[2 * e + end].rep[g];
}

ElemId TransversalTables::image_factor_in_edge_group(EdgeId e, int end,
                                                     ElemId g) const {
  return tables_[2 * e + end].edge_factor[g];
}

const std::vector<ElemId> &TransversalTables::left_transversal(EdgeId e,
                                                               int end) const {
  return tables_[2 * e + end].left_reps;
}

void check_word(const GraphOfGroups &g, const Word &w) {
  if (w.basepoint >= g.num_vertices())
    throw Error(ErrorKind::MalformedWord, "basepoint out of range");
  VertexId cur = w.basepoint;
  for (const auto &s : w.syllables) {
    if (s.kind == Word::Syllable::VertexElement) {
      if (s.vertex != cur)
        throw Error(ErrorKind::MalformedWord,
                    "vertex element at vertex " + std::to_string(s.vertex) +
                        " but the path is at " + std::to_string(cur));
      if (s.element >= g.vertex(cur).group->order())
        throw Error(ErrorKind::MalformedWord, "element id out of range");
    } else {
      if (s.letter.edge >= g.num_edges())
        throw Error(ErrorKind::MalformedWord, "edge id out of range");
      if (s.letter.sign != 1 && s.letter.sign != -1)
        throw Error(ErrorKind::MalformedWord, "edge sign must be +-1");
      if (s.letter.from(g) != cur)
        throw Error(ErrorKind::MalformedWord,
                    "edge letter does not start at the current vertex");
      cur = s.letter.to(g);
    }
  }
  if (cur != w.basepoint)
    throw Error(ErrorKind::MalformedWord, "word is not a closed loop");
}

bool ReducedWord::operator==(const ReducedWord &o) const {
  if (basepoint != o.basepoint || leading != o.leading ||
      steps.size() != o.steps.size())
    return false;
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (!(steps[i].letter == o.steps[i].letter) ||
        steps[i].rep != o.steps[i].rep)
      return false;
  return true;
}

namespace {

struct AlternatingWord {
  VertexId basepoint;
  std::vector<ElemId> elems;        // size m+1
  std::vector<EdgeLetter> letters;  // size m
  std::vector<VertexId> at;         // vertex of elems[i]
};

AlternatingWord normalize(const GraphOfGroups &g, const Word &w) {
  AlternatingWord a;
  a.basepoint = w.basepoint;
  VertexId cur = w.basepoint;
  ElemId acc = 0;
  for (const auto &s : w.syllables) {
    if (s.kind == Word::Syllable::VertexElement) {
      acc = g.vertex(cur).group->mul(acc, s.element);
    } else {
      a.elems.push_back(acc);
      a.at.push_back(cur);
      a.letters.push_back(s.letter);
      cur = s.letter.to(g);
      acc = 0;
    }
  }
  a.elems.push_back(acc);
  a.at.push_back(cur);
  return a;
}

/// One right-to-left pass making every post-letter element a coset
/// representative at the arrival end of its letter.
void transversal_pass(const GraphOfGroups &g, const TransversalTables &t,
                      AlternatingWord &a) {
  for (std::size_t i = a.letters.size(); i > 0; --i) {
    const EdgeLetter &letter = a.letters[i - 1];
    int arrive_end = letter.sign > 0 ? 1 : 0;
    int depart_end = 1 - arrive_end;
    EdgeId e = letter.edge;
    ElemId gi = a.elems[i];
    ElemId factor = t.image_factor_in_edge_group(e, arrive_end, gi);
    if (factor == 0)
      continue;
    a.elems[i] = t.coset_rep(e, arrive_end, gi);
    const auto &edge = g.edge(e);
    ElemId pushed = edge.incl[depart_end](factor);
    a.elems[i - 1] =
        g.vertex(a.at[i - 1]).group->mul(a.elems[i - 1], pushed);
  }
}

} // namespace

ReducedWord reduce_word(const TransversalTables &t, const Word &w) {
  const GraphOfGroups &g = t.graph();
  check_word(g, w);
  AlternatingWord a = normalize(g, w);
  for (;;) {
    transversal_pass(g, t, a);
    bool spliced = false;
    for (std::size_t i = 0; i + 1 < a.letters.size(); ++i) {
      if (a.letters[i + 1] == a.letters[i].reversed() &&
          a.elems[i + 1] == 0) {
        ElemId merged = g.vertex(a.at[i]).group->mul(a.elems[i],
                                                     a.elems[i + 2]);
        a.elems.erase(a.elems.begin() + i + 1, a.elems.begin() + i + 3);
        a.at.erase(a.at.begin() + i + 1, a.at.begin() + i + 3);
        a.letters.erase(a.letters.begin() + i, a.letters.begin() + i + 2);
        a.elems[i] = merged;
        spliced = true;
        break;
      }
    }
    if (!spliced)
      break;
  }
  ReducedWord out;
  out.basepoint = a.basepoint;
  out.leading = a.elems[0];
  for (std::size_t i = 0; i < a.letters.size(); ++i)
    out.steps.push_back({a.letters[i], a.elems[i + 1]});
  return out;
}

bool words_equal(const TransversalTables &t, const Word &w1, const Word &w2) {
  return reduce_word(t, w1) == reduce_word(t, w2);
}

Word reduced_to_word(const GraphOfGroups &g, const ReducedWord &r) {
  Word w;
  w.basepoint = r.basepoint;
  w.syllables.push_back(Word::elem(r.basepoint, r.leading));
  for (const auto &step : r.steps) {
    w.syllables.push_back(Word::edge(step.letter.edge, step.letter.sign));
    w.syllables.push_back(Word::elem(step.letter.to(g), step.rep));
  }
  return w;
}

// ---------------------------------------------------------------------------
// Spanning tree and pi1 presentations

namespace {

struct SpanningTreeData {
  std::vector<bool> edge_in_tree;
  std::vector<EdgeId> tree_edges;
  std::vector<std::vector<EdgeLetter>> path; // basepoint -> v
};

SpanningTreeData bfs_tree(const GraphOfGroups &g, VertexId basepoint) {
  if (!g.is_connected())
    throw Error(ErrorKind::DisconnectedGraph,
                "the underlying graph is not connected");
  SpanningTreeData out;
  out.edge_in_tree.assign(g.num_edges(), false);
  out.path.resize(g.num_vertices());
  std::vector<bool> seen(g.num_vertices(), false);
  seen[basepoint] = true;
  std::deque<VertexId> queue{basepoint};
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      for (int s = 0; s < 2; ++s) {
        if (g.edge(e).ends[s] != v)
          continue;
        VertexId other = g.edge(e).ends[1 - s];
        if (seen[other])
          continue;
        seen[other] = true;
        out.edge_in_tree[e] = true;
        out.tree_edges.push_back(e);
        out.path[other] = out.path[v];
        out.path[other].push_back({e, s == 0 ? 1 : -1});
        queue.push_back(other);
      }
  }
  return out;
}

std::string vertex_symbol_name(std::size_t index, std::size_t total) {
  static const char letters[] = "abcdefghijklmnopqrsuvwxyz"; // no 't'
  if (total <= sizeof(letters) - 1)
    return std::string(1, letters[index]);
  return "g" + std::to_string(index + 1);
}

} // namespace

std::optional<std::uint32_t>
Pi1Presentation::generator_by_symbol(const std::string &symbol) const {
  for (std::uint32_t i = 0; i < generators.size(); ++i)
    if (generators[i].symbol == symbol)
      return i;
  return std::nullopt;
}

Word Pi1Presentation::element_word(VertexId v, ElemId a) const {
  Word w;
  w.basepoint = basepoint;
  for (const EdgeLetter &l : tree_path[v])
    w.syllables.push_back(Word::edge(l.edge, l.sign));
  w.syllables.push_back(Word::elem(v, a));
  for (auto it = tree_path[v].rbegin(); it != tree_path[v].rend(); ++it)
    w.syllables.push_back(Word::edge(it->edge, -it->sign));
  return w;
}

Word Pi1Presentation::generator_word(std::uint32_t gen) const {
  const Generator &g = generators[gen];
  if (g.kind == Generator::VertexGen)
    return element_word(g.vertex, g.element);
  const auto &edge = graph->edge(g.edge);
  Word w;
  w.basepoint = basepoint;
  for (const EdgeLetter &l : tree_path[edge.ends[0]])
    w.syllables.push_back(Word::edge(l.edge, l.sign));
  w.syllables.push_back(Word::edge(g.edge, 1));
  for (auto it = tree_path[edge.ends[1]].rbegin();
       it != tree_path[edge.ends[1]].rend(); ++it)
    w.syllables.push_back(Word::edge(it->edge, -it->sign));
  return w;
}

Word Pi1Presentation::relation_word(const Relation &rel) const {
  Word w;
  w.basepoint = basepoint;
  for (const auto &[gen, exp] : rel) {
    const Generator &g = generators[gen];
    Word part;
    if (exp > 0) {
      part = generator_word(gen);
    } else if (g.kind == Generator::VertexGen) {
      part = element_word(g.vertex,
                          graph->vertex(g.vertex).group->inv(g.element));
    } else {
      const auto &edge = graph->edge(g.edge);
      part.basepoint = basepoint;
      for (const EdgeLetter &l : tree_path[edge.ends[1]])
        part.syllables.push_back(Word::edge(l.edge, l.sign));
      part.syllables.push_back(Word::edge(g.edge, -1));
      for (auto it = tree_path[edge.ends[0]].rbegin();
           it != tree_path[edge.ends[0]].rend(); ++it)
        part.syllables.push_back(Word::edge(it->edge, -it->sign));
    }
    w.syllables.insert(w.syllables.end(), part.syllables.begin(),
                       part.syllables.end());
  }
  return w;
}

Pi1Presentation pi1_presentation(GraphOfGroupsPtr g,
                                 std::optional<VertexId> basepoint) {
  Pi1Presentation p;
  p.graph = g;
  p.basepoint = basepoint.value_or(g->basepoint());
  if (p.basepoint >= g->num_vertices())
    throw Error(ErrorKind::UnknownObject, "basepoint out of range");
  auto tree = bfs_tree(*g, p.basepoint);
  p.edge_in_tree = tree.edge_in_tree;
  p.spanning_tree = tree.tree_edges;
  p.tree_path = tree.path;

  // vertex generators with element factorizations
  std::size_t total_gens = 0;
  std::vector<std::vector<ElemId>> gen_elems(g->num_vertices());
  for (VertexId v = 0; v < g->num_vertices(); ++v) {
    gen_elems[v] = g->vertex(v).group->small_generating_set();
    total_gens += gen_elems[v].size();
  }
  p.vertex_generators.resize(g->num_vertices());
  p.factorization.resize(g->num_vertices());
  std::size_t symbol_index = 0;
  for (VertexId v = 0; v < g->num_vertices(); ++v) {
    const auto &vg = *g->vertex(v).group;
    for (ElemId e : gen_elems[v]) {
      Pi1Presentation::Generator gen;
      gen.kind = Pi1Presentation::Generator::VertexGen;
      gen.symbol = vertex_symbol_name(symbol_index++, total_gens);
      gen.vertex = v;
      gen.element = e;
      p.vertex_generators[v].push_back(
          static_cast<std::uint32_t>(p.generators.size()));
      p.generators.push_back(std::move(gen));
    }
    // BFS factorization of every element over this vertex's generators
    auto &fact = p.factorization[v];
    fact.assign(vg.order(), {});
    std::vector<bool> known(vg.order(), false);
    known[0] = true;
    std::deque<ElemId> queue{0};
    while (!queue.empty()) {
      ElemId x = queue.front();
      queue.pop_front();
      for (std::size_t gi = 0; gi < gen_elems[v].size(); ++gi) {
        ElemId y = vg.mul(x, gen_elems[v][gi]);
        if (!known[y]) {
          known[y] = true;
          fact[y] = fact[x];
          fact[y].push_back(p.vertex_generators[v][gi]);
          queue.push_back(y);
        }
      }
    }
  }

  // stable letters for non-tree edges
  p.stable_letter.assign(g->num_edges(), -1);
  std::vector<EdgeId> non_tree;
  for (EdgeId e = 0; e < g->num_edges(); ++e)
    if (!p.edge_in_tree[e])
      non_tree.push_back(e);
  for (std::size_t i = 0; i < non_tree.size(); ++i) {
    Pi1Presentation::Generator gen;
    gen.kind = Pi1Presentation::Generator::StableLetter;
    gen.symbol = non_tree.size() == 1 ? "t" : "t" + std::to_string(i + 1);
    gen.edge = non_tree[i];
    p.stable_letter[non_tree[i]] =
        static_cast<std::int64_t>(p.generators.size());
    p.generators.push_back(std::move(gen));
  }

  // relations: vertex multiplication tables over the chosen generators
  auto word_of = [&](VertexId v, ElemId x) {
    return p.factorization[v][x];
  };
  std::set<Pi1Presentation::Relation> seen;
  auto add_relation = [&](Pi1Presentation::Relation rel) {
    // drop freely trivial relations (cancel adjacent inverses)
    std::vector<Pi1Presentation::GenRef> stack;
    for (const auto &r : rel) {
      if (!stack.empty() && stack.back().first == r.first &&
          stack.back().second == -r.second)
        stack.pop_back();
      else
        stack.push_back(r);
    }
    if (stack.empty())
      return;
    if (seen.insert(stack).second)
      p.relations.push_back(std::move(stack));
  };
  for (VertexId v = 0; v < g->num_vertices(); ++v) {
    const auto &vg = *g->vertex(v).group;
    for (ElemId x = 0; x < vg.order(); ++x)
      for (std::size_t gi = 0; gi < gen_elems[v].size(); ++gi) {
        std::uint32_t gen_index = p.vertex_generators[v][gi];
        ElemId y = vg.mul(x, gen_elems[v][gi]);
        Pi1Presentation::Relation rel;
        for (std::uint32_t w : word_of(v, x))
          rel.push_back({w, 1});
        rel.push_back({gen_index, 1});
        const auto &rhs = word_of(v, y);
        for (auto it = rhs.rbegin(); it != rhs.rend(); ++it)
          rel.push_back({*it, -1});
        add_relation(std::move(rel));
      }
  }
  // tree-edge identifications and HNN relations over edge-group generators
  for (EdgeId e = 0; e < g->num_edges(); ++e) {
    const auto &edge = g->edge(e);
    auto edge_gens = edge.group->small_generating_set();
    for (ElemId s : edge_gens) {
      Pi1Presentation::Relation rel;
      if (p.edge_in_tree[e]) {
        for (std::uint32_t w : word_of(edge.ends[0], edge.incl[0](s)))
          rel.push_back({w, 1});
        const auto &rhs = word_of(edge.ends[1], edge.incl[1](s));
        for (auto it = rhs.rbegin(); it != rhs.rend(); ++it)
          rel.push_back({*it, -1});
      } else {
        std::uint32_t t =
            static_cast<std::uint32_t>(p.stable_letter[e]);
        rel.push_back({t, 1});
        for (std::uint32_t w : word_of(edge.ends[1], edge.incl[1](s)))
          rel.push_back({w, 1});
        rel.push_back({t, -1});
        const auto &rhs = word_of(edge.ends[0], edge.incl[0](s));
        for (auto it = rhs.rbegin(); it != rhs.rend(); ++it)
          rel.push_back({*it, -1});
      }
      add_relation(std::move(rel));
    }
  }
  return p;
}

namespace {

std::string render_gen_refs(const Pi1Presentation &p,
                            const std::vector<Pi1Presentation::GenRef> &refs) {
  std::string out;
  std::size_t i = 0;
  while (i < refs.size()) {
    std::size_t j = i;
    while (j < refs.size() && refs[j] == refs[i])
      ++j;
    long exp = static_cast<long>(j - i) * refs[i].second;
    if (!out.empty())
      out += " ";
    out += p.generators[refs[i].first].symbol;
    if (exp != 1)
      out += "^" + std::to_string(exp);
    i = j;
  }
  return out;
}

} // namespace

std::string render_relation(const Pi1Presentation &p,
                            const Pi1Presentation::Relation &rel) {
  if (rel.empty())
    return "1";
  return render_gen_refs(p, rel);
}

std::string Pi1Presentation::display() const {
  std::string out = "<";
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (i)
      out += ", ";
    out += generators[i].symbol;
  }
  out += " | ";
  for (std::size_t i = 0; i < relations.size(); ++i) {
    if (i)
      out += ", ";
    out += render_gen_refs(*this, relations[i]);
  }
  out += ">";
  return out;
}

std::string render_reduced(const Pi1Presentation &p, const ReducedWord &r) {
  std::vector<Pi1Presentation::GenRef> refs;
  auto push_elem = [&](VertexId v, ElemId a) {
    for (std::uint32_t g : p.factorization[v][a])
      refs.push_back({g, 1});
  };
  push_elem(p.basepoint, r.leading);
  const GraphOfGroups &g = *p.graph;
  for (const auto &step : r.steps) {
    if (!p.edge_in_tree[step.letter.edge]) {
      refs.push_back(
          {static_cast<std::uint32_t>(p.stable_letter[step.letter.edge]),
           step.letter.sign});
    }
    push_elem(step.letter.to(g), step.rep);
  }
  if (refs.empty())
    return "1";
  return render_gen_refs(p, refs);
}

Word parse_presentation_word(const Pi1Presentation &p,
                             const std::string &text) {
  Word w;
  w.basepoint = p.basepoint;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    std::string symbol = token;
    long exp = 1;
    if (auto caret = token.find('^'); caret != std::string::npos) {
      symbol = token.substr(0, caret);
      try {
        exp = std::stol(token.substr(caret + 1));
      } catch (const std::exception &) {
        throw Error(ErrorKind::MalformedWord,
                    "bad exponent in token '" + token + "'");
      }
    }
    auto gen = p.generator_by_symbol(symbol);
    if (!gen)
      throw Error(ErrorKind::MalformedWord,
                  "unknown generator '" + symbol + "'");
    Pi1Presentation::Relation rel;
    for (long k = 0; k < (exp < 0 ? -exp : exp); ++k)
      rel.push_back({*gen, exp < 0 ? -1 : 1});
    Word part = p.relation_word(rel);
    w.syllables.insert(w.syllables.end(), part.syllables.begin(),
                       part.syllables.end());
  }
  return w;
}

// ---------------------------------------------------------------------------
// Abelianization via Smith normal form

AbelianInvariants
smith_invariants(std::vector<std::vector<std::int64_t>> rows,
                 std::uint32_t num_cols) {
  std::size_t num_rows = rows.size();
  for (auto &row : rows)
    row.resize(num_cols, 0);
  std::uint32_t rank = 0;
  std::uint32_t r = 0, c = 0;
  auto abs64 = [](std::int64_t v) { return v < 0 ? -v : v; };
  while (r < num_rows && c < num_cols) {
    // smallest nonzero pivot in the remaining block
    std::size_t pi = num_rows, pj = num_cols;
    for (std::size_t i = r; i < num_rows; ++i)
      for (std::size_t j = c; j < num_cols; ++j)
        if (rows[i][j] != 0 &&
            (pi == num_rows || abs64(rows[i][j]) < abs64(rows[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == num_rows)
      break;
    std::swap(rows[r], rows[pi]);
    for (auto &row : rows)
      std::swap(row[c], row[pj]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = r + 1; i < num_rows; ++i) {
        if (rows[i][c] == 0)
          continue;
        std::int64_t q = rows[i][c] / rows[r][c];
        for (std::size_t j = c; j < num_cols; ++j)
          rows[i][j] -= q * rows[r][j];
        if (rows[i][c] != 0) {
          std::swap(rows[r], rows[i]);
          clean = false;
        }
      }
      for (std::size_t j = c + 1; j < num_cols; ++j) {
        if (rows[r][j] == 0)
          continue;
        std::int64_t q = rows[r][j] / rows[r][c];
        for (std::size_t i = r; i < num_rows; ++i)
          rows[i][j] -= q * rows[i][c];
        if (rows[r][j] != 0) {
          for (std::size_t i = 0; i < num_rows; ++i)
            std::swap(rows[i][c], rows[i][j]);
          clean = false;
        }
      }
    }
    ++rank;
    ++r;
    ++c;
  }
  // diagonal entries; enforce the divisibility chain
  std::vector<std::uint64_t> diag;
  for (std::uint32_t i = 0; i < rank; ++i)
    diag.push_back(static_cast<std::uint64_t>(abs64(rows[i][i])));
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < diag.size(); ++i)
      if (diag[i + 1] % diag[i] != 0) {
        std::uint64_t g = std::gcd(diag[i], diag[i + 1]);
        std::uint64_t l = diag[i] / g * diag[i + 1];
        diag[i] = g;
        diag[i + 1] = l;
        changed = true;
      }
  }
  AbelianInvariants out;
  for (std::uint64_t d : diag)
    if (d > 1)
      out.torsion.push_back(d);
  out.free_rank = num_cols - rank;
  return out;
}

std::string AbelianInvariants::str() const {
  if (torsion.empty() && free_rank == 0)
    return "0";
  std::string out;
  for (std::uint32_t i = 0; i < free_rank; ++i)
    out += (out.empty() ? "" : " + ") + std::string("Z");
  for (std::uint64_t d : torsion)
    out += (out.empty() ? "" : " + ") + ("Z" + std::to_string(d));
  return out;
}

AbelianInvariants abelianization(const Pi1Presentation &p) {
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto &rel : p.relations) {
    std::vector<std::int64_t> row(p.generators.size(), 0);
    for (const auto &[gen, exp] : rel)
      row[gen] += exp;
    rows.push_back(std::move(row));
  }
  return smith_invariants(std::move(rows),
                          static_cast<std::uint32_t>(p.generators.size()));
}

// ---------------------------------------------------------------------------
// Bass-Serre tree balls

TreeBall bass_serre_ball(const TransversalTables &tables, VertexId basepoint,
                         std::uint32_t radius, std::uint64_t node_cap) {
  const GraphOfGroups &g = tables.graph();
  if (basepoint >= g.num_vertices())
    throw Error(ErrorKind::UnknownObject, "basepoint out of range");
  if (!g.is_connected())
    throw Error(ErrorKind::DisconnectedGraph,
                "the underlying graph is not connected");
  TreeBall ball;
  struct Pending {
    std::uint32_t node;
    bool has_entry;
    EdgeLetter entry;
  };
  ball.nodes.push_back({basepoint, 0, ""});
  std::deque<Pending> queue{{0, false, {0, 1}}};
  while (!queue.empty()) {
    Pending cur = queue.front();
    queue.pop_front();
    const TreeBall::Node node = ball.nodes[cur.node];
    if (node.depth == radius) {
      // would this node expand further? (for the truncation flag)
      for (EdgeId e = 0; e < g.num_edges() && !ball.truncated; ++e)
        for (int s = 0; s < 2; ++s) {
          if (g.edge(e).ends[s] != node.base_vertex)
            continue;
          EdgeLetter letter{e, s == 0 ? 1 : -1};
          std::size_t count = tables.left_transversal(e, s).size();
          if (cur.has_entry && letter == cur.entry.reversed())
            --count;
          if (count > 0)
            ball.truncated = true;
        }
      continue;
    }
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      for (int s = 0; s < 2; ++s) {
        if (g.edge(e).ends[s] != node.base_vertex)
          continue;
        EdgeLetter letter{e, s == 0 ? 1 : -1};
        for (ElemId c : tables.left_transversal(e, s)) {
          if (cur.has_entry && letter == cur.entry.reversed() && c == 0)
            continue; // the way back to the parent
          if (ball.nodes.size() >= node_cap)
            throw Error(ErrorKind::BallTooLarge,
                        "tree ball exceeds " + std::to_string(node_cap) +
                            " vertices");
          VertexId nv = letter.to(g);
          std::string access = node.access + (node.access.empty() ? "" : ".") +
                               g.edge(e).name +
                               (letter.sign > 0 ? "+" : "-") + "/" +
                               std::to_string(c);
          std::uint32_t child =
              static_cast<std::uint32_t>(ball.nodes.size());
          ball.nodes.push_back({nv, node.depth + 1, access});
          ball.edges.push_back({cur.node, child, e});
          queue.push_back({child, true, letter});
        }
      }
  }
  return ball;
}

// ---------------------------------------------------------------------------
// Inertia graph of groups

GraphOfGroupsPtr inertia_gog(GraphOfGroupsPtr g) {
  std::vector<GraphOfGroups::Vertex> vertices;
  // (vertex, class index) -> new vertex id; class data per vertex
  std::vector<std::vector<std::vector<ElemId>>> vclasses(g->num_vertices());
  std::vector<std::vector<VertexId>> vclass_vertex(g->num_vertices());
  std::vector<std::vector<Subgroup>> vcentralizer(g->num_vertices());
  for (VertexId v = 0; v < g->num_vertices(); ++v) {
    const auto &vert = g->vertex(v);
    vclasses[v] = conjugacy_classes(*vert.group);
    for (std::size_t c = 0; c < vclasses[v].size(); ++c) {
      ElemId rep = vclasses[v][c][0];
      Subgroup cent = subgroup_from_elements(
          vert.group, centralizer_elements(*vert.group, rep),
          vert.name + "[" + std::to_string(rep) + "]");
      vclass_vertex[v].push_back(static_cast<VertexId>(vertices.size()));
      vertices.push_back({cent.group->name(), cent.group});
      vcentralizer[v].push_back(std::move(cent));
    }
  }

  std::vector<GraphOfGroups::Edge> edges;
  for (EdgeId e = 0; e < g->num_edges(); ++e) {
    const auto &edge = g->edge(e);
    auto eclasses = conjugacy_classes(*edge.group);
    for (std::size_t c = 0; c < eclasses.size(); ++c) {
      ElemId h_rep = eclasses[c][0];
      Subgroup cent = subgroup_from_elements(
          edge.group, centralizer_elements(*edge.group, h_rep),
          edge.name + "[" + std::to_string(h_rep) + "]");
      GraphOfGroups::Edge new_edge;
      new_edge.name = cent.group->name();
      new_edge.group = cent.group;
      for (int s = 0; s < 2; ++s) {
        VertexId u = edge.ends[s];
        const auto &ug = *g->vertex(u).group;
        ElemId image = edge.incl[s](h_rep);
        // locate the class of the image in the vertex group
        std::size_t target_class = SIZE_MAX;
        for (std::size_t vc = 0; vc < vclasses[u].size(); ++vc)
          if (std::binary_search(vclasses[u][vc].begin(),
                                 vclasses[u][vc].end(), image)) {
            target_class = vc;
            break;
          }
        ElemId g_rep = vclasses[u][target_class][0];
        // least conjugator x with x image x^-1 = g_rep
        ElemId conjugator = UINT32_MAX;
        for (ElemId x = 0; x < ug.order(); ++x)
          if (ug.conj(x, image) == g_rep) {
            conjugator = x;
            break;
          }
        new_edge.ends[s] = vclass_vertex[u][target_class];
        const Subgroup &target_cent = vcentralizer[u][target_class];
        // index of a parent element inside the centralizer subgroup
        auto cent_index = [&](ElemId parent_elem) {
          const auto &incl = target_cent.inclusion.image;
          auto it = std::lower_bound(incl.begin(), incl.end(), parent_elem);
          if (it == incl.end() || *it != parent_elem)
            throw Error(ErrorKind::ValidationError,
                        "conjugated image misses the centralizer");
          return static_cast<ElemId>(it - incl.begin());
        };
        GroupHom hom;
        hom.domain = cent.group;
        hom.codomain = target_cent.group;
        hom.image.resize(cent.group->order());
        for (ElemId a = 0; a < cent.group->order(); ++a) {
          ElemId parent_a = cent.inclusion(a); // element of G_e
          ElemId in_vertex = edge.incl[s](parent_a);
          hom.image[a] = cent_index(ug.conj(conjugator, in_vertex));
        }
        new_edge.incl[s] = std::move(hom);
      }
      edges.push_back(std::move(new_edge));
    }
  }
  VertexId base = vclass_vertex[g->basepoint()][0];
  return std::make_shared<GraphOfGroups>(std::move(vertices),
                                         std::move(edges), base);
}

// ---------------------------------------------------------------------------
// Omega-injectivity certificate

OmegaInjectivityReport
omega_injectivity_certificate(const TransversalTables &tables) {
  const GraphOfGroups &g = tables.graph();
  auto tree = bfs_tree(g, g.basepoint());
  OmegaInjectivityReport report;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto &vg = *g.vertex(v).group;
    std::uint32_t count = 0;
    for (ElemId a = 1; a < vg.order(); ++a) {
      Word w;
      w.basepoint = g.basepoint();
      for (const EdgeLetter &l : tree.path[v])
        w.syllables.push_back(Word::edge(l.edge, l.sign));
      w.syllables.push_back(Word::elem(v, a));
      for (auto it = tree.path[v].rbegin(); it != tree.path[v].rend(); ++it)
        w.syllables.push_back(Word::edge(it->edge, -it->sign));
      if (reduce_word(tables, w).is_identity()) {
        report.counterexample = "vertex " + g.vertex(v).name + ", element " +
                                std::to_string(a);
        return report;
      }
      ++count;
    }
    report.checked.emplace_back(v, count);
  }
  report.pass = true;
  return report;
}

PlainGraph coarse_graph(const GraphOfGroups &g) {
  PlainGraph out;
  out.num_vertices = g.num_vertices();
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    out.vertex_names.push_back(g.vertex(v).name);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    out.edges.emplace_back(g.edge(e).ends[0], g.edge(e).ends[1]);
    out.edge_names.push_back(g.edge(e).name);
  }
  return out;
}

} // namespace stacklab
