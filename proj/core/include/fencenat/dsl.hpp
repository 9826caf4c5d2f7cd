#pragma once

#include <string>

#include "fencenat/factorization.hpp"
#include "fencenat/fence_map.hpp"
#include "fencenat/invariants.hpp"

namespace fencenat {

// Text and JSON encodings of maps, words, and reports.
//
// Map DSL grammar (whitespace between tokens is free):
//   map      := record | generator
//   record   := "prefix=[" nat-list "]"
//               "tail(start=" nat ", period=" nat ", drift=" nat
//               ", base=[" nat-list "])"
//   generator:= "xi" | "identity" | "witness"
//             | ("alpha" | "beta" | "lambda" | "delta") ":" nat
//             | "family:[" nat-list ";" nat ";" bit-string "]"
// where nat-list is comma-separated (possibly empty) and bit-string is a
// string of 0/1 characters giving the subset pattern, one bit per residue.
//
// JSON mirrors carry a schema_version field; see to_json/from_json below.

inline constexpr int kSchemaVersion = 1;

// Parses the DSL or the JSON mirror (detected by a leading '{'), or a
// generator spelling.  Returns the canonical form.  Throws parse_error with
// a position for syntax errors and precondition_error for semantic ones
// (e.g. lambda with an even parameter).
FenceMap parse_map(const std::string& text);

// Canonical DSL rendering; parse_map(render_map(m)) == m.
std::string render_map(const FenceMap& m);

// JSON encodings (all carry schema_version).
std::string map_to_json(const FenceMap& m);
FenceMap map_from_json(const std::string& json_text);

std::string word_to_json(const GeneratorWord& word);
GeneratorWord word_from_json(const std::string& json_text);

std::string class_report_to_json(const ClassReport& report);
std::string set_report_to_json(const SetReport& report);
std::string block_stream_to_json(const BlockStream& bs);
std::string verification_to_json(const VerificationReport& report);

}  // namespace fencenat
