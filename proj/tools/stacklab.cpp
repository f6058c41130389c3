#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stacklab/constructions.hpp"
#include "stacklab/covering.hpp"
#include "stacklab/errors.hpp"
#include "stacklab/formats.hpp"
#include "stacklab/gog.hpp"
#include "stacklab/groupoid.hpp"
#include "stacklab/morita.hpp"
#include "stacklab/selftest.hpp"

using namespace stacklab;

namespace {

bool g_quiet = false;

void diag(const std::string &line) {
  if (!g_quiet)
    std::cerr << line << "\n";
}

GroupPtr load_group(const std::string &path) {
  auto doc = load_document_file(path);
  if (document_kind(doc) != "group")
    throw Error(ErrorKind::UnsupportedKind, path + " is not a group file");
  return group_from_json(document_payload(doc));
}

GroupoidPtr load_groupoid(const std::string &path) {
  auto doc = load_document_file(path);
  if (document_kind(doc) != "groupoid")
    throw Error(ErrorKind::UnsupportedKind, path + " is not a groupoid file");
  return groupoid_from_json(document_payload(doc));
}

GraphOfGroupsPtr load_gog(const std::string &path) {
  auto doc = load_document_file(path);
  if (document_kind(doc) != "gog")
    throw Error(ErrorKind::UnsupportedKind,
                path + " is not a graph-of-groups file");
  return gog_from_json(document_payload(doc));
}

GroupHom hom_from_images(GroupPtr domain, GroupPtr codomain,
                         const std::vector<ElemId> &images,
                         const char *side) {
  GroupHom hom;
  hom.domain = std::move(domain);
  hom.codomain = std::move(codomain);
  hom.image = images;
  if (hom.image.size() != hom.domain->order())
    throw Error(ErrorKind::Usage,
                std::string(side) +
                    ": need one image per domain element (" +
                    std::to_string(hom.domain->order()) + ")");
  for (ElemId v : hom.image)
    if (v >= hom.codomain->order())
      throw Error(ErrorKind::Usage,
                  std::string(side) + ": image id out of range");
  if (!hom.is_homomorphism())
    throw Error(ErrorKind::ValidationError,
                std::string(side) + ": images do not define a homomorphism");
  return hom;
}

void emit(const Json &doc) { std::cout << serialize(doc); }

Json groupoid_summary(const FiniteGroupoid &g) {
  Json j;
  j["objects"] = g.num_objects();
  j["arrows"] = g.num_arrows();
  j["components"] = pi0(g).size();
  return j;
}

int run_validate(const std::string &path, const std::string &base_path) {
  Json doc;
  try {
    doc = load_document_file(path);
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::ValidationError ||
        e.kind() == ErrorKind::NonInjectiveInclusion) {
      std::cout << "INVALID " << e.what() << "\n";
      return 1;
    }
    throw;
  }
  const std::string kind = document_kind(doc);
  try {
    if (kind == "group") {
      group_from_json(document_payload(doc));
    } else if (kind == "groupoid") {
      auto g = groupoid_from_json(document_payload(doc));
      auto report = validate_groupoid(*g);
      for (const auto &f : report.failures)
        std::cout << "INVALID " << f.axiom << ": " << f.detail << "\n";
      if (!report.ok())
        return 1;
    } else if (kind == "gog") {
      gog_from_json(document_payload(doc));
    } else if (kind == "action") {
      if (base_path.empty())
        throw Error(ErrorKind::Usage,
                    "validating an action needs --base <file.gog>");
      auto base = load_gog(base_path);
      auto p = std::make_shared<Pi1Presentation>(pi1_presentation(base));
      auto action = action_from_json(document_payload(doc), p);
      auto v = validate_action(action);
      if (!v.ok) {
        std::cout << "INVALID relation acts nontrivially: "
                  << v.failing_relation << "\n";
        return 1;
      }
    } else if (kind == "cover") {
      cover_from_json(document_payload(doc));
    } else {
      throw Error(ErrorKind::UnsupportedKind, "cannot validate " + kind);
    }
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::ValidationError ||
        e.kind() == ErrorKind::NonInjectiveInclusion ||
        e.kind() == ErrorKind::NotAnAction ||
        e.kind() == ErrorKind::InvalidAction) {
      std::cout << "INVALID " << e.what() << "\n";
      return 1;
    }
    throw;
  }
  std::cout << "VALID " << kind << "\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"finite groupoids, graphs of groups and their covers"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--quiet", g_quiet, "suppress diagnostics on stderr");
  std::uint64_t seed = 0;
  app.add_option("--seed", seed,
                 "seed for randomized search order (selftest)");

  std::string v_path, v_base;
  auto *validate = app.add_subcommand("validate", "check a document");
  validate->add_option("file", v_path)->required();
  validate->add_option("--base", v_base, "base .gog for action files");

  std::string sk_path;
  bool sk_dot = false;
  auto *skeleton_cmd =
      app.add_subcommand("skeleton", "one object per component");
  skeleton_cmd->add_option("file", sk_path)->required();
  skeleton_cmd->add_flag("--dot", sk_dot);

  std::string mc_a, mc_b;
  auto *morita_cmd =
      app.add_subcommand("morita-check", "decide Morita equivalence");
  morita_cmd->add_option("left", mc_a)->required();
  morita_cmd->add_option("right", mc_b)->required();

  std::string fp_h, fp_k, fp_g;
  std::vector<ElemId> fp_left, fp_right;
  bool fp_dot = false;
  auto *fiber_cmd = app.add_subcommand(
      "fiber-product", "BH x_BG BK along element-image lists");
  fiber_cmd->add_option("H", fp_h)->required();
  fiber_cmd->add_option("K", fp_k)->required();
  fiber_cmd->add_option("G", fp_g)->required();
  fiber_cmd->add_option("--left-images", fp_left)->required()->delimiter(',');
  fiber_cmd->add_option("--right-images", fp_right)->required()->delimiter(',');
  fiber_cmd->add_flag("--dot", fp_dot);

  std::string dc_h, dc_k, dc_g;
  std::vector<ElemId> dc_left, dc_right;
  auto *cosets_cmd = app.add_subcommand(
      "double-cosets", "the double-coset decomposition of BH x_BG BK");
  cosets_cmd->add_option("H", dc_h)->required();
  cosets_cmd->add_option("K", dc_k)->required();
  cosets_cmd->add_option("G", dc_g)->required();
  cosets_cmd->add_option("--left-images", dc_left)->required()->delimiter(',');
  cosets_cmd->add_option("--right-images", dc_right)->required()->delimiter(',');

  std::string in_path;
  bool in_dot = false;
  auto *inertia_cmd = app.add_subcommand(
      "inertia", "the inertia groupoid (group or groupoid)");
  inertia_cmd->add_option("file", in_path)->required();
  inertia_cmd->add_flag("--dot", in_dot);

  std::string pi1_path, pi1_base;
  bool pi1_json = false;
  auto *pi1_cmd = app.add_subcommand("pi1", "fundamental-group presentation");
  pi1_cmd->add_option("file", pi1_path)->required();
  pi1_cmd->add_option("--basepoint", pi1_base);
  pi1_cmd->add_flag("--json", pi1_json);

  std::string red_path, red_word;
  auto *reduce_cmd =
      app.add_subcommand("reduce", "normal form of a pi1 word");
  reduce_cmd->add_option("file", red_path)->required();
  reduce_cmd->add_option("word", red_word, "like \"a a b\"")->required();

  std::string ball_path;
  std::uint32_t ball_radius = 0;
  std::uint64_t ball_cap = 100000;
  bool ball_dot = false;
  auto *ball_cmd =
      app.add_subcommand("ball", "Bass-Serre tree ball around the basepoint");
  ball_cmd->add_option("file", ball_path)->required();
  ball_cmd->add_option("radius", ball_radius)->required();
  ball_cmd->add_option("--cap", ball_cap);
  ball_cmd->add_flag("--dot", ball_dot);

  std::string ig_path;
  bool ig_dot = false;
  auto *ig_cmd = app.add_subcommand("inertia-gog", "inertia graph of groups");
  ig_cmd->add_option("file", ig_path)->required();
  ig_cmd->add_flag("--dot", ig_dot);

  std::string uni_path;
  auto *uni_cmd = app.add_subcommand(
      "uniformize", "good-orbifold certificate: vertex groups inject");
  uni_cmd->add_option("file", uni_path)->required();

  std::string cov_path, cov_action;
  bool cov_dot = false;
  auto *cover_cmd =
      app.add_subcommand("cover", "build the cover classified by an action");
  cover_cmd->add_option("file", cov_path)->required();
  cover_cmd->add_option("--action", cov_action)->required();
  cover_cmd->add_flag("--dot", cov_dot);

  std::string mono_path;
  auto *mono_cmd =
      app.add_subcommand("monodromy", "the pi1-action of a cover");
  mono_cmd->add_option("file", mono_path)->required();

  std::string enum_path;
  std::uint32_t enum_max = 2;
  auto *enum_cmd = app.add_subcommand(
      "enumerate", "transitive pi1-actions up to conjugacy");
  enum_cmd->add_option("file", enum_path)->required();
  enum_cmd->add_option("--max-degree", enum_max)->required();

  std::string dot_path;
  auto *dot_cmd = app.add_subcommand("export-dot", "DOT of a document");
  dot_cmd->add_option("file", dot_path)->required();

  auto *selftest_cmd =
      app.add_subcommand("selftest", "run the brute-force oracle suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate)
      return run_validate(v_path, v_base);

    if (*skeleton_cmd) {
      auto g = load_groupoid(sk_path);
      auto sk = skeleton(g);
      if (sk_dot)
        std::cout << to_dot(*sk.groupoid);
      else
        emit(make_document("groupoid", groupoid_to_json(*sk.groupoid)));
      diag("skeleton: " + std::to_string(sk.groupoid->num_objects()) +
           " object(s)");
      return 0;
    }

    if (*morita_cmd) {
      auto a = load_groupoid(mc_a);
      auto b = load_groupoid(mc_b);
      auto witness = morita_equivalent(a, b);
      Json payload;
      payload["equivalent"] = witness.equivalent;
      if (!witness.equivalent)
        payload["reason"] = witness.reason;
      Json matches = Json::array();
      for (const auto &m : witness.matches) {
        Json mj;
        mj["left"] = m.left_representative;
        mj["right"] = m.right_representative;
        mj["isomorphism"] = m.group_isomorphism;
        matches.push_back(mj);
      }
      payload["matches"] = matches;
      emit(make_document("report", payload));
      return witness.equivalent ? 0 : 1;
    }

    if (*fiber_cmd) {
      auto h = load_group(fp_h);
      auto k = load_group(fp_k);
      auto g = load_group(fp_g);
      auto f1 = hom_from_images(h, g, fp_left, "--left-images");
      auto f2 = hom_from_images(k, g, fp_right, "--right-images");
      auto bg = classifying_groupoid(g);
      auto fp = fiber_product(
          classifying_functor(f1, classifying_groupoid(h), bg),
          classifying_functor(f2, classifying_groupoid(k), bg));
      if (fp_dot)
        std::cout << to_dot(*fp.total);
      else
        emit(make_document("groupoid", groupoid_to_json(*fp.total)));
      diag("fiber product: " + groupoid_summary(*fp.total).dump());
      return 0;
    }

    if (*cosets_cmd) {
      auto h = load_group(dc_h);
      auto k = load_group(dc_k);
      auto g = load_group(dc_g);
      auto f1 = hom_from_images(h, g, dc_left, "--left-images");
      auto f2 = hom_from_images(k, g, dc_right, "--right-images");
      auto dec = double_coset_fiber_product(f1, f2);
      Json payload;
      payload["group"] = g->name();
      Json entries = Json::array();
      for (const auto &e : dec.entries) {
        Json ej;
        ej["representative"] = e.representative;
        ej["coset"] = e.coset;
        ej["stabilizer_order"] = e.stabilizer.group->order();
        Json pairs = Json::array();
        for (ElemId p = 0; p < e.stabilizer.group->order(); ++p) {
          auto [hh, kk] = dec.hk.unpair(e.stabilizer.inclusion(p));
          pairs.push_back({hh, kk});
        }
        ej["stabilizer_pairs"] = pairs;
        entries.push_back(ej);
      }
      payload["double_cosets"] = entries;
      emit(make_document("report", payload));
      return 0;
    }

    if (*inertia_cmd) {
      auto doc = load_document_file(in_path);
      GroupoidPtr g;
      if (document_kind(doc) == "group")
        g = classifying_groupoid(group_from_json(document_payload(doc)));
      else if (document_kind(doc) == "groupoid")
        g = groupoid_from_json(document_payload(doc));
      else
        throw Error(ErrorKind::UnsupportedKind,
                    "inertia expects a group or groupoid file");
      auto in = inertia(g);
      if (in_dot)
        std::cout << to_dot(*in.total);
      else
        emit(make_document("groupoid", groupoid_to_json(*in.total)));
      diag("inertia: " + groupoid_summary(*in.total).dump());
      return 0;
    }

    if (*pi1_cmd) {
      auto g = load_gog(pi1_path);
      std::optional<VertexId> base;
      if (!pi1_base.empty()) {
        base = g->vertex_by_name(pi1_base);
        if (!base)
          throw Error(ErrorKind::Usage,
                      "unknown basepoint '" + pi1_base + "'");
      }
      auto p = pi1_presentation(g, base);
      auto ab = abelianization(p);
      if (pi1_json) {
        Json payload;
        Json gens = Json::array();
        for (const auto &gen : p.generators)
          gens.push_back(gen.symbol);
        payload["generators"] = gens;
        Json rels = Json::array();
        for (const auto &rel : p.relations)
          rels.push_back(render_relation(p, rel));
        payload["relations"] = rels;
        payload["presentation"] = p.display();
        Json abj;
        abj["free_rank"] = ab.free_rank;
        abj["torsion"] = ab.torsion;
        payload["abelianization"] = abj;
        emit(make_document("report", payload));
      } else {
        std::cout << p.display() << "\n";
        std::cout << "abelianization: " << ab.str() << "\n";
      }
      return 0;
    }

    if (*reduce_cmd) {
      auto g = load_gog(red_path);
      auto p = pi1_presentation(g);
      TransversalTables tables(g);
      auto reduced =
          reduce_word(tables, parse_presentation_word(p, red_word));
      std::cout << render_reduced(p, reduced) << "\n";
      return 0;
    }

    if (*ball_cmd) {
      auto g = load_gog(ball_path);
      TransversalTables tables(g);
      auto ball =
          bass_serre_ball(tables, g->basepoint(), ball_radius, ball_cap);
      if (ball_dot) {
        std::cout << to_dot(ball, *g);
      } else {
        Json payload;
        Json nodes = Json::array();
        for (const auto &n : ball.nodes) {
          Json nj;
          nj["access"] = n.access;
          nj["depth"] = n.depth;
          nj["vertex"] = g->vertex(n.base_vertex).name;
          nodes.push_back(nj);
        }
        payload["nodes"] = nodes;
        Json edges = Json::array();
        for (const auto &e : ball.edges)
          edges.push_back({e.from, e.to});
        payload["edges"] = edges;
        payload["truncated"] = ball.truncated;
        emit(make_document("report", payload));
      }
      diag("ball: " + std::to_string(ball.nodes.size()) + " node(s)");
      return 0;
    }

    if (*ig_cmd) {
      auto g = load_gog(ig_path);
      auto in = inertia_gog(g);
      if (ig_dot)
        std::cout << to_dot(*in);
      else
        emit(make_document("gog", gog_to_json(*in)));
      diag("inertia gog: " + std::to_string(in->num_vertices()) +
           " vertices, " + std::to_string(in->num_edges()) + " edges");
      return 0;
    }

    if (*uni_cmd) {
      auto g = load_gog(uni_path);
      TransversalTables tables(g);
      auto report = omega_injectivity_certificate(tables);
      Json payload;
      payload["pass"] = report.pass;
      Json checked = Json::array();
      for (const auto &[v, count] : report.checked) {
        Json cj;
        cj["vertex"] = g->vertex(v).name;
        cj["elements_checked"] = count;
        checked.push_back(cj);
      }
      payload["checked"] = checked;
      if (!report.pass)
        payload["counterexample"] = report.counterexample;
      emit(make_document("report", payload));
      return report.pass ? 0 : 1;
    }

    if (*cover_cmd) {
      auto g = load_gog(cov_path);
      auto p = std::make_shared<Pi1Presentation>(pi1_presentation(g));
      auto action_doc = load_document_file(cov_action);
      if (document_kind(action_doc) != "action")
        throw Error(ErrorKind::UnsupportedKind,
                    cov_action + " is not an action file");
      auto action = action_from_json(document_payload(action_doc), p);
      auto cover = covering_from_action(g, action);
      if (cov_dot)
        std::cout << to_dot(*cover.total);
      else
        emit(make_document("cover", cover_to_json(cover)));
      diag("cover: degree " + std::to_string(cover.degree) + ", " +
           std::to_string(cover.total->num_vertices()) + " vertices");
      return 0;
    }

    if (*mono_cmd) {
      auto doc = load_document_file(mono_path);
      if (document_kind(doc) != "cover")
        throw Error(ErrorKind::UnsupportedKind,
                    mono_path + " is not a cover file");
      auto cover = cover_from_json(document_payload(doc));
      auto p =
          std::make_shared<Pi1Presentation>(pi1_presentation(cover.base));
      auto action = monodromy(cover, p);
      emit(make_document("action", action_to_json(action)));
      return 0;
    }

    if (*enum_cmd) {
      auto g = load_gog(enum_path);
      auto p = std::make_shared<Pi1Presentation>(pi1_presentation(g));
      auto actions = enumerate_actions(p, enum_max);
      Json payload;
      payload["count"] = actions.size();
      Json list = Json::array();
      for (const auto &a : actions)
        list.push_back(action_to_json(a));
      payload["actions"] = list;
      emit(make_document("report", payload));
      return 0;
    }

    if (*dot_cmd) {
      auto doc = load_document_file(dot_path);
      const std::string kind = document_kind(doc);
      if (kind == "groupoid")
        std::cout << to_dot(*groupoid_from_json(document_payload(doc)));
      else if (kind == "gog")
        std::cout << to_dot(*gog_from_json(document_payload(doc)));
      else if (kind == "cover")
        std::cout << to_dot(*cover_from_json(document_payload(doc)).total);
      else
        throw Error(ErrorKind::UnsupportedKind,
                    "no DOT emitter for kind '" + kind + "'");
      return 0;
    }

    if (*selftest_cmd) {
      diag("selftest seed: " + std::to_string(seed));
      auto results = selftest::run_all(seed);
      bool all = true;
      for (const auto &r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
        if (!r.detail.empty())
          std::cout << ": " << r.detail;
        std::cout << "\n";
        all = all && r.pass;
      }
      return all ? 0 : 1;
    }
  } catch (const Error &e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
