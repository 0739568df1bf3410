#pragma once

#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "superjet/numerics.hpp"
#include "superjet/supermap.hpp"

namespace superjet {

using Json = nlohmann::ordered_json;

/// A validated input document. Named objects live in top-level sections
/// (charts, manifolds, connections, bundles, morphisms, sections, grids); per-command parameters
/// live under the command's own name. See spec-schema.md for the format.
class SpecDocument {
 public:
  /// Parses and validates. JSON syntax errors and expression errors are reported as ParseError
  /// with a line/column; reference and shape problems as the matching Error subclass, prefixed
  /// with the location in the document.
  static SpecDocument parse(std::string_view text);

  const Json& raw() const noexcept { return raw_; }

  const Chart& chart(const std::string& name) const;
  const TorsionFreeConnection& connection(const std::string& name) const;
  const BundleConnection& bundle(const std::string& name) const;
  const SuperManifoldPresentation& manifold(const std::string& name) const;
  const SuperMorphism& morphism(const std::string& name) const;
  const SuperfieldSection& section(const std::string& name) const;
  const SampleGrid& grid(const std::string& name) const;

  /// Parameters of a command; throws if the document has none.
  const Json& params(const std::string& command) const;

 private:
  Json raw_;
  std::map<std::string, Chart> charts_;
  std::map<std::string, TorsionFreeConnection> connections_;
  std::map<std::string, BundleConnection> bundles_;
  std::map<std::string, SuperManifoldPresentation> manifolds_;
  std::map<std::string, SuperMorphism> morphisms_;
  std::map<std::string, SuperfieldSection> sections_;
  std::map<std::string, SampleGrid> grids_;
};

/// "1,2,1" -> {1, 2, 1}; "" -> {}.
std::vector<int> parse_index_key(std::string_view key);
std::string index_key(const std::vector<int>& one_based);

/// JSON object for a section, in the document format (names refer to manifolds in `doc`).
Json section_to_json(const SuperfieldSection& s, const std::string& source_name, const std::string& target_name);

/// "x = ...", "eta = ..." lines.
std::string print_morphism(const SuperMorphism& f);

/// Numbers as printed by the numeric commands (12 significant digits).
std::string format_number(double v);
std::string format_vector(const Vec& v);

}  // namespace superjet
