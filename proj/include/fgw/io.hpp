#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "fgw/toolkit.hpp"
#include "fgw/types.hpp"

namespace fgw {

/// A parse failure of an object file (bad JSON, bad schema, or data that
/// does not form a valid structured object). The CLI maps this to exit 2.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error("parse_error", message) {}
};

/// Reads an object file:
///   {"version": "fgwkit/1", "n": int, "d": int, "features": [[..]],
///    "structure": {"kind": "matrix", "matrix": [[..]]} |
///                 {"kind": "graph", "edges": [[i, j, w], ..]},
///    "weights": [..] | "uniform"}
/// Graph structures are expanded through shortest_path_structure.
StructuredObject read_object_file(const std::filesystem::path& path);

/// Serializes an object as kind = "matrix" with round-trip-exact numbers.
void write_object_file(const std::filesystem::path& path, const StructuredObject& obj);

/// Row-major CSV with %.17g precision.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

std::string matrix_to_csv(const Matrix& m);

}  // namespace fgw
