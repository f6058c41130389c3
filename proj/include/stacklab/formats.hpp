#ifndef STACKLAB_FORMATS_HPP
#define STACKLAB_FORMATS_HPP

#include <string>

#include <json.hpp>

#include "stacklab/covering.hpp"
#include "stacklab/gog.hpp"
#include "stacklab/groupoid.hpp"
#include "stacklab/rational.hpp"

namespace stacklab {

using Json = nlohmann::json;

/// Canonical documents are { "kind": ..., "payload": ..., "version": 1 }
/// with sorted keys, arrays in id order and no floating point anywhere;
/// rationals appear as {"den": ..., "num": ...}. serialize . parse is the
/// identity on canonical text; parse . serialize canonicalizes.
inline constexpr int kFormatVersion = 1;

Json make_document(const std::string &kind, Json payload);

/// Parses and checks the document envelope. `expected_kind` empty accepts
/// any kind. Positioned SyntaxError on bad JSON, SchemaError on a bad
/// envelope or unknown major version.
Json parse_document(const std::string &text,
                    const std::string &expected_kind = "");

std::string document_kind(const Json &doc);
const Json &document_payload(const Json &doc);

/// Canonical text form: two-space indent, sorted keys, trailing newline.
std::string serialize(const Json &doc);

Json rational_to_json(const Rational &q);
Rational rational_from_json(const Json &j);

Json group_to_json(const FiniteGroup &g);
GroupPtr group_from_json(const Json &payload);

Json groupoid_to_json(const FiniteGroupoid &g);
GroupoidPtr groupoid_from_json(const Json &payload);

Json gog_to_json(const GraphOfGroups &g);
GraphOfGroupsPtr gog_from_json(const Json &payload);

Json action_to_json(const Pi1Action &a);
/// Needs the presentation to resolve generator names.
Pi1Action action_from_json(const Json &payload,
                           std::shared_ptr<const Pi1Presentation> p);

Json cover_to_json(const CoveringGoG &c);
CoveringGoG cover_from_json(const Json &payload);

// Deterministic DOT emission (byte-identical across runs).
std::string to_dot(const FiniteGroupoid &g);
std::string to_dot(const GraphOfGroups &g);
std::string to_dot(const PlainGraph &g);
std::string to_dot(const TreeBall &ball, const GraphOfGroups &base);

/// Loads any supported file by extension: .group.json, .groupoid.json,
/// .gog, .gog.json, .action.json, .cover.json. Returns the canonical
/// document (DSL input is converted to its JSON mirror).
Json load_document_file(const std::string &path);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &text);

} // namespace stacklab

#endif
