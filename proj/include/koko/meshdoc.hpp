#pragma once

#include <iosfwd>

#include "koko/matching.hpp"

namespace koko {

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::string where_)
      : std::runtime_error(what + (where_.empty() ? "" : " (at " + where_ + ")")),
        where(std::move(where_))
  {
  }
  std::string where;
};

// Parsed mesh document. Exact when every scalar arrived as a fraction or
// decimal string and no angle data forced floats; the float view always
// exists.
struct MeshDocument {
  bool exact = false;
  MeshSpec<Rat> exact_mesh;
  MeshSpec<double> float_mesh;
  std::vector<std::string> warnings;

  const std::optional<std::array<QuadAngles, 4>>& angles() const { return float_mesh.angles; }
};

MeshDocument parse_mesh_document(const std::string& text);
MeshDocument load_mesh_document(const std::string& path);

std::string serialize_mesh_document(const MeshSpec<Rat>& mesh);
std::string serialize_mesh_document(const MeshSpec<double>& mesh);

void save_mesh_document(const MeshSpec<Rat>& mesh, const std::string& path);

} // namespace koko
