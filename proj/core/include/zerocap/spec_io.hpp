#pragma once

// JSON graph/channel spec parsing and report emission for the command-line
// front end.  Complex entries are [re, im] pairs, matrices row-major nested
// arrays.  The schema ships in docs/graphspec.schema.json.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zerocap/model.hpp"

namespace zerocap {

struct ParsedSpec {
  NCGraph graph;
  std::optional<Channel> channel;       // present when the spec determines one
  std::optional<Graph> classical_graph; // present for type "graph"
  std::optional<RMatrix> transition;    // present for type "classical"
  std::string type;
};

ParsedSpec parse_spec(const std::string& json_text);
ParsedSpec load_spec(const std::string& path);

// Serializations that re-parse to equal objects.
std::string spec_to_json(const NCGraph& k);
std::string matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const std::string& text);

struct ReportRow {
  std::string quantity;
  double value = 0.0;
  long long integer_part = 0;
  double bits = 0.0;  // log2(value) when value > 0
  double gap = 0.0;
  std::string status;
  double seconds = 0.0;
  std::string witness_file;  // reported in JSON output when a dump was written
};

std::string to_csv(const std::vector<ReportRow>& rows);   // fixed header row
std::string to_json(const std::vector<ReportRow>& rows);

}  // namespace zerocap
