#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "helpers.hpp"
#include "stacklab/covering.hpp"
#include "stacklab/errors.hpp"
#include "stacklab/formats.hpp"

using namespace stacklab;
using namespace stacklab::testing;

namespace {

std::string golden_dir() {
  return std::string(STACKLAB_SOURCE_DIR) + "/data/golden";
}

std::string golden_path(const std::string &name) {
  return golden_dir() + "/" + name;
}

bool regen() { return std::getenv("STACKLAB_REGEN_GOLDEN") != nullptr; }

void check_golden(const std::string &name, const std::string &produced) {
  auto path = golden_path(name);
  if (regen()) {
    write_file(path, produced);
    return;
  }
  CHECK_MESSAGE(read_file(path) == produced, ("golden mismatch: " + name));
}

} // namespace

TEST_CASE("rationals serialize exactly") {
  auto chi = segment_gog(2, 3, 1)->euler_characteristic();
  CHECK(chi == Rational(-1, 6));
  auto j = rational_to_json(chi);
  CHECK(j.dump() == "{\"den\":6,\"num\":-1}");
  CHECK(rational_from_json(j) == chi);
}

TEST_CASE("document envelopes are enforced") {
  auto doc = make_document("group", group_to_json(*make_cyclic_group(2)));
  auto text = serialize(doc);
  CHECK_NOTHROW(parse_document(text, "group"));
  CHECK_THROWS_AS(parse_document(text, "groupoid"), Error);
  CHECK_THROWS_AS(parse_document("{ truncated", "group"), Error);
  try {
    parse_document("{ \"kind\": \"group\", \"payload\": {}, \"version\": 2 }",
                   "group");
    CHECK(false);
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::SchemaError);
  }
  // syntax errors carry an offset
  try {
    parse_document("{\"a\": }", "");
    CHECK(false);
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("offset") != std::string::npos);
  }
}

TEST_CASE("group payloads round trip") {
  for (GroupPtr g : {make_cyclic_group(6), make_symmetric_group(3),
                     make_quaternion_group()}) {
    auto payload = group_to_json(*g);
    auto back = group_from_json(payload);
    CHECK(back->order() == g->order());
    for (ElemId a = 0; a < g->order(); ++a)
      for (ElemId b = 0; b < g->order(); ++b)
        CHECK(back->mul(a, b) == g->mul(a, b));
    CHECK(serialize(make_document("group", group_to_json(*back))) ==
          serialize(make_document("group", payload)));
  }
}

TEST_CASE("groupoid payloads round trip bit-exactly") {
  for (GroupoidPtr g :
       {unit_groupoid(), z2_swap_groupoid(),
        classifying_groupoid(make_symmetric_group(3)),
        coset_action_groupoid(make_cyclic_group(4), {2})}) {
    auto text = serialize(make_document("groupoid", groupoid_to_json(*g)));
    auto doc = parse_document(text, "groupoid");
    auto back = groupoid_from_json(document_payload(doc));
    CHECK(validate_groupoid(*back).ok());
    auto text2 = serialize(make_document("groupoid", groupoid_to_json(*back)));
    CHECK(text == text2);
  }
}

TEST_CASE("schema errors name the offending entity") {
  auto payload = groupoid_to_json(*unit_groupoid());
  payload["arrows"][0]["src"] = 7;
  try {
    groupoid_from_json(payload);
    CHECK(false);
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::SchemaError);
    CHECK(std::string(e.what()).find("dangling src") != std::string::npos);
    CHECK(std::string(e.what()).find("0") != std::string::npos);
  }
}

TEST_CASE("gog payloads round trip, DSL included") {
  auto from_dsl = parse_gog(read_file(golden_path("segment_z2_z3.gog")));
  CHECK(from_dsl->num_vertices() == 2);
  auto text = serialize(make_document("gog", gog_to_json(*from_dsl)));
  auto back = gog_from_json(document_payload(parse_document(text, "gog")));
  CHECK(back->num_vertices() == 2);
  CHECK(back->num_edges() == 1);
  CHECK(serialize(make_document("gog", gog_to_json(*back))) == text);
  CHECK(back->euler_characteristic() == Rational(-1, 6));
}

TEST_CASE("action payloads round trip against a presentation") {
  auto g = segment_gog(2, 3, 1);
  auto p = std::make_shared<Pi1Presentation>(pi1_presentation(g));
  Pi1Action a;
  a.presentation = p;
  a.degree = 3;
  a.images.assign(p->generators.size(), perm_identity(3));
  *a.images.begin() = {1, 0, 2};
  a.images.back() = {1, 2, 0};
  auto payload = action_to_json(a);
  auto back = action_from_json(payload, p);
  CHECK(back.degree == 3);
  CHECK(back.images == a.images);
  CHECK(serialize(make_document("action", action_to_json(back))) ==
        serialize(make_document("action", payload)));
}

TEST_CASE("cover payloads reconstruct enough for monodromy") {
  auto g = segment_gog(2, 3, 1);
  auto p = std::make_shared<Pi1Presentation>(pi1_presentation(g));
  Pi1Action a;
  a.presentation = p;
  a.degree = 3;
  a.images.assign(p->generators.size(), perm_identity(3));
  a.images[*p->generator_by_symbol("a")] = {1, 0, 2};
  a.images[*p->generator_by_symbol("b")] = {1, 2, 0};
  auto cover = covering_from_action(g, a);
  auto text = serialize(make_document("cover", cover_to_json(cover)));
  auto back = cover_from_json(document_payload(parse_document(text, "cover")));
  CHECK(back.degree == 3);
  CHECK(back.total->num_vertices() == cover.total->num_vertices());
  // monodromy through the reloaded cover matches the original action
  auto back_p =
      std::make_shared<Pi1Presentation>(pi1_presentation(back.base));
  auto mono = monodromy(back, back_p);
  Pi1Action original;
  original.presentation = back_p;
  original.degree = 3;
  original.images.assign(back_p->generators.size(), perm_identity(3));
  original.images[*back_p->generator_by_symbol("a")] = {1, 0, 2};
  original.images[*back_p->generator_by_symbol("b")] = {1, 2, 0};
  CHECK(actions_conjugate(mono, original));
  CHECK(serialize(make_document("cover", cover_to_json(back))) == text);
}

TEST_CASE("golden corpus stays bit-exact") {
  check_golden("unit.groupoid.json",
               serialize(make_document("groupoid",
                                       groupoid_to_json(*unit_groupoid()))));
  check_golden("swap.groupoid.json",
               serialize(make_document(
                   "groupoid", groupoid_to_json(*z2_swap_groupoid()))));
  check_golden("point.groupoid.json",
               serialize(make_document("groupoid",
                                       groupoid_to_json(*unit_groupoid()))));
  check_golden("z6.group.json",
               serialize(make_document("group",
                                       group_to_json(*make_cyclic_group(6)))));
  check_golden("s3.group.json",
               serialize(make_document(
                   "group", group_to_json(*make_symmetric_group(3)))));
  check_golden(
      "bs3.groupoid.json",
      serialize(make_document(
          "groupoid",
          groupoid_to_json(*classifying_groupoid(make_symmetric_group(3))))));
  check_golden("segment_z2_z3.gog.json",
               serialize(make_document(
                   "gog", gog_to_json(*parse_gog(read_file(
                              golden_path("segment_z2_z3.gog")))))));
  {
    // the degree-3 cover of the modular segment, as the CLI emits it
    auto base = parse_gog(read_file(golden_path("segment_z2_z3.gog")));
    auto p = std::make_shared<Pi1Presentation>(pi1_presentation(base));
    auto action = action_from_json(
        document_payload(parse_document(
            read_file(golden_path("deg3.action.json")), "action")),
        p);
    auto cover = covering_from_action(base, action);
    check_golden("deg3.cover.json",
                 serialize(make_document("cover", cover_to_json(cover))));
  }

  // parse . serialize is the identity on every canonical golden file
  namespace fs = std::filesystem;
  std::size_t seen = 0;
  for (const auto &entry : fs::directory_iterator(golden_dir())) {
    auto path = entry.path().string();
    if (path.size() < 5 || path.substr(path.size() - 5) != ".json")
      continue;
    auto text = read_file(path);
    auto doc = parse_document(text, "");
    CHECK_MESSAGE(serialize(doc) == text, ("not canonical: " + path));
    ++seen;
  }
  CHECK(seen >= 8);
}

TEST_CASE("the golden unit groupoid is small and fixed") {
  auto text = read_file(golden_path("unit.groupoid.json"));
  auto doc = parse_document(text, "groupoid");
  auto g = groupoid_from_json(document_payload(doc));
  CHECK(g->num_objects() == 1);
  CHECK(g->num_arrows() == 1);
}

TEST_CASE("DOT output is deterministic") {
  auto seg = segment_gog(2, 3, 1);
  auto dot1 = to_dot(*seg);
  auto dot2 = to_dot(*seg);
  CHECK(dot1 == dot2);
  check_golden("segment_z2_z3.dot", dot1);
  check_golden("segment_coarse.dot", to_dot(coarse_graph(*seg)));
  TransversalTables tables(seg);
  auto ball = bass_serre_ball(tables, 0, 1);
  CHECK(ball.nodes.size() == 3);
  check_golden("segment_ball1.dot", to_dot(ball, *seg));
  check_golden("swap.dot", to_dot(*z2_swap_groupoid()));
}

TEST_CASE("file loading dispatches on the extension") {
  auto doc = load_document_file(golden_path("segment_z2_z3.gog"));
  CHECK(document_kind(doc) == "gog");
  auto doc2 = load_document_file(golden_path("unit.groupoid.json"));
  CHECK(document_kind(doc2) == "groupoid");
  CHECK_THROWS_AS(load_document_file("whatever.xyz"), Error);
}

TEST_CASE("truncated and mutated inputs fail cleanly") {
  namespace fs = std::filesystem;
  for (const auto &entry : fs::directory_iterator(golden_dir())) {
    auto path = entry.path().string();
    auto text = read_file(path);
    bool is_json = path.size() >= 5 &&
                   path.substr(path.size() - 5) == ".json";
    for (std::size_t cut = 1; cut + 1 < text.size();
         cut += std::max<std::size_t>(7, text.size() / 23)) {
      std::string prefix = text.substr(0, cut);
      try {
        if (is_json)
          parse_document(prefix, "");
        else
          parse_gog(prefix);
      } catch (const Error &) {
        // positioned or schema errors are the expected outcome
      }
    }
  }
  CHECK(true); // reaching here means no crash on any truncation
}
