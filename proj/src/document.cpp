#include "superjet/document.hpp"

#include <cstdio>

#include "superjet/errors.hpp"
#include "superjet/expr.hpp"

namespace superjet {

namespace {

std::string at(const std::string& where, const std::string& msg) {
  return msg.starts_with(where) ? msg : where + ": " + msg;
}

// Re-raises an error with the document location prepended, keeping its type.
[[noreturn]] void rethrow_at(const std::string& where) {
  try {
    throw;
  } catch (const ParseError& e) {
    std::string msg = e.what();
    const auto cut = msg.rfind(" at line ");
    if (cut != std::string::npos) msg.resize(cut);
    throw ParseError(at(where, msg), e.line(), e.column());
  } catch (const MismatchError& e) {
    throw MismatchError(at(where, e.what()));
  } catch (const ParityError& e) {
    throw ParityError(at(where, e.what()));
  } catch (const UnknownGeneratorError& e) {
    throw UnknownGeneratorError(at(where, e.what()));
  } catch (const ShapeError& e) {
    throw ShapeError(at(where, e.what()));
  } catch (const DomainError& e) {
    throw DomainError(at(where, e.what()));
  } catch (const Error& e) {
    throw Error(at(where, e.what()));
  } catch (const Json::exception& e) {
    throw ShapeError(at(where, e.what()));
  }
}

const Json& member(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ShapeError(where + " must be an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ShapeError(where + " is missing '" + key + "'");
  return *it;
}

std::string string_of(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ShapeError(where + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> names_of(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ShapeError(where + " must be an array of names");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(string_of(e, where));
  return out;
}

std::vector<int> ints_of(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ShapeError(where + " must be an array of integers");
  std::vector<int> out;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw ShapeError(where + " must be an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

Vec doubles_of(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ShapeError(where + " must be an array of numbers");
  Vec out;
  for (const auto& e : j) {
    if (!e.is_number()) throw ShapeError(where + " must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

SuperPoly expression(const Json& j, const TablePtr& table, const std::string& where) {
  try {
    if (j.is_number_integer()) return SuperPoly(table, make_scalar(j.get<long>()));
    return parse_poly(string_of(j, where), table);
  } catch (...) {
    rethrow_at(where);
  }
}

template <class T>
const T& lookup(const std::map<std::string, T>& m, const std::string& name, const char* kind) {
  const auto it = m.find(name);
  if (it == m.end()) throw ShapeError(std::string("unknown ") + kind + " '" + name + "'");
  return it->second;
}

std::size_t coordinate_index(const std::vector<std::string>& names, const std::string& name, const std::string& where) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  throw ShapeError(where + ": unknown name '" + name + "'");
}

// Sparse 1-based index tensor: {"i,j,l": expr}.
std::vector<std::vector<std::vector<SuperPoly>>> sparse_tensor(const Json& j, std::size_t n0, std::size_t n1,
                                                               std::size_t n2, const TablePtr& table,
                                                               const std::string& where) {
  std::vector<std::vector<std::vector<SuperPoly>>> t(
      n0, std::vector<std::vector<SuperPoly>>(n1, std::vector<SuperPoly>(n2, SuperPoly(table))));
  if (!j.is_object()) throw ShapeError(where + " must be an object of \"i,j,k\": expression entries");
  for (const auto& [key, value] : j.items()) {
    const std::vector<int> idx = parse_index_key(key);
    if (idx.size() != 3 || idx[0] < 1 || idx[1] < 1 || idx[2] < 1 || static_cast<std::size_t>(idx[0]) > n0 ||
        static_cast<std::size_t>(idx[1]) > n1 || static_cast<std::size_t>(idx[2]) > n2)
      throw ShapeError(where + ": index '" + key + "' out of range");
    t[idx[0] - 1][idx[1] - 1][idx[2] - 1] = expression(value, table, where + "[" + key + "]");
  }
  return t;
}

// {"i,j": expr} keyed by 1-based odd indices, antisymmetrised into ascending tuples.
ComponentMap components(const Json& j, const TablePtr& table, std::size_t rank, const std::string& where) {
  if (!j.is_object()) throw ShapeError(where + " must be an object of \"a,b,...\": expression entries");
  ComponentMap out;
  std::map<OddIndex, std::string> origin;
  for (const auto& [key, value] : j.items()) {
    std::vector<int> idx = parse_index_key(key);
    for (int& i : idx) {
      if (i < 1 || static_cast<std::size_t>(i) > rank) throw ShapeError(where + ": index '" + key + "' out of range");
      --i;
    }
    const auto [sorted, sign] = canonical_index(idx);
    if (sign == 0) throw ShapeError(where + ": index '" + key + "' repeats an odd generator");
    const SuperPoly v = Scalar(sign) * expression(value, table, where + "[" + key + "]");
    const auto [it, fresh] = out.emplace(sorted, v);
    if (!fresh && !(it->second == v))
      throw ShapeError(where + ": entries '" + origin[sorted] + "' and '" + key + "' are not antisymmetric");
    origin.emplace(sorted, key);
  }
  return out;
}

}  // namespace

std::vector<int> parse_index_key(std::string_view key) {
  std::vector<int> out;
  std::string cur;
  bool any = false;
  auto flush = [&] {
    if (cur.empty()) throw ShapeError("malformed index key '" + std::string(key) + "'");
    out.push_back(std::stoi(cur));
    cur.clear();
  };
  for (char c : key) {
    if (c == ' ') continue;
    if (c == ',') {
      flush();
    } else if (c >= '0' && c <= '9') {
      if (cur.size() > 6) throw ShapeError("malformed index key '" + std::string(key) + "'");
      cur.push_back(c);
      any = true;
    } else {
      throw ShapeError("malformed index key '" + std::string(key) + "'");
    }
  }
  if (any || !out.empty()) flush();
  return out;
}

std::string index_key(const std::vector<int>& one_based) {
  std::string s;
  for (std::size_t i = 0; i < one_based.size(); ++i) s += (i ? "," : "") + std::to_string(one_based[i]);
  return s;
}

SpecDocument SpecDocument::parse(std::string_view text) {
  SpecDocument doc;
  try {
    doc.raw_ = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    const auto cut = msg.find("syntax error");
    throw ParseError("invalid JSON: " + (cut == std::string::npos ? msg : msg.substr(cut)), line, column);
  }
  const Json& root = doc.raw_;
  if (!root.is_object()) throw ShapeError("document must be a JSON object");
  auto section = [&](const char* name) -> const Json* {
    const auto it = root.find(name);
    if (it == root.end()) return nullptr;
    if (!it->is_object()) throw ShapeError(std::string("'") + name + "' must be an object");
    return &*it;
  };

  if (const Json* charts = section("charts"))
    for (const auto& [name, value] : charts->items()) {
      const std::string where = "charts." + name;
      try {
        doc.charts_.emplace(name, make_chart(name, names_of(value, where)));
      } catch (...) {
        rethrow_at(where);
      }
    }

  if (const Json* manifolds = section("manifolds"))
    for (const auto& [name, value] : manifolds->items()) {
      const std::string where = "manifolds." + name;
      try {
        const Chart& c = doc.chart(string_of(member(value, "chart", where), where + ".chart"));
        std::vector<std::string> odd;
        std::vector<int> degrees;
        if (value.contains("odd")) odd = names_of(value["odd"], where + ".odd");
        if (value.contains("degrees")) degrees = ints_of(value["degrees"], where + ".degrees");
        doc.manifolds_.emplace(name, make_presentation(c, odd, degrees));
      } catch (...) {
        rethrow_at(where);
      }
    }

  if (const Json* connections = section("connections"))
    for (const auto& [name, value] : connections->items()) {
      const std::string where = "connections." + name;
      try {
        const Chart& c = doc.chart(string_of(member(value, "chart", where), where + ".chart"));
        const std::size_t n = c.dim();
        Json entries = value.contains("christoffel") ? value["christoffel"] : Json::object();
        doc.connections_.emplace(
            name, TorsionFreeConnection(c, sparse_tensor(entries, n, n, n, c.base_table(), where + ".christoffel")));
      } catch (...) {
        rethrow_at(where);
      }
    }

  if (const Json* bundles = section("bundles"))
    for (const auto& [name, value] : bundles->items()) {
      const std::string where = "bundles." + name;
      try {
        const Chart& c = doc.chart(string_of(member(value, "chart", where), where + ".chart"));
        FiberGenerators f;
        f.names = names_of(member(value, "generators", where), where + ".generators");
        if (value.contains("degrees")) f.degrees = ints_of(value["degrees"], where + ".degrees");
        if (f.degrees.empty()) f.degrees.assign(f.names.size(), 1);
        Json entries = value.contains("connection") ? value["connection"] : Json::object();
        const std::size_t r = f.names.size();
        doc.bundles_.emplace(name, BundleConnection(c, f, sparse_tensor(entries, r, c.dim(), r, c.base_table(),
                                                                        where + ".connection")));
      } catch (...) {
        rethrow_at(where);
      }
    }

  if (const Json* morphisms = section("morphisms"))
    for (const auto& [name, value] : morphisms->items()) {
      const std::string where = "morphisms." + name;
      try {
        const auto& src = doc.manifold(string_of(member(value, "source", where), where + ".source"));
        const auto& tgt = doc.manifold(string_of(member(value, "target", where), where + ".target"));
        std::vector<std::string> params;
        if (value.contains("parameters")) params = names_of(value["parameters"], where + ".parameters");
        const TablePtr t = source_table(src, params);
        const Json& xs = member(value, "x", where);
        if (!xs.is_object()) throw ShapeError(where + ".x must be an object keyed by target coordinate");
        std::vector<SuperPoly> x(tgt.chart.dim(), SuperPoly(t));
        std::vector<bool> seen(tgt.chart.dim(), false);
        for (const auto& [coord, e] : xs.items()) {
          const std::size_t i = coordinate_index(tgt.chart.coords, coord, where + ".x");
          x[i] = expression(e, t, where + ".x." + coord);
          seen[i] = true;
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
          if (!seen[i]) throw ShapeError(where + ".x is missing '" + tgt.chart.coords[i] + "'");
        std::vector<SuperPoly> eta(tgt.odd_rank(), SuperPoly(t));
        if (value.contains("eta")) {
          if (!value["eta"].is_object()) throw ShapeError(where + ".eta must be an object keyed by target odd generator");
          for (const auto& [gen, e] : value["eta"].items())
            eta[coordinate_index(tgt.odd, gen, where + ".eta")] = expression(e, t, where + ".eta." + gen);
        }
        doc.morphisms_.emplace(name, make_morphism(src, tgt, std::move(x), std::move(eta), std::move(params)));
      } catch (...) {
        rethrow_at(where);
      }
    }

  if (const Json* sections = section("sections"))
    for (const auto& [name, value] : sections->items()) {
      const std::string where = "sections." + name;
      try {
        const auto& src = doc.manifold(string_of(member(value, "source", where), where + ".source"));
        const auto& tgt = doc.manifold(string_of(member(value, "target", where), where + ".target"));
        std::vector<std::string> params;
        if (value.contains("parameters")) params = names_of(value["parameters"], where + ".parameters");
        ParityMode mode = params.empty() ? ParityMode::even_only : ParityMode::all;
        if (value.contains("mode")) {
          const std::string m = string_of(value["mode"], where + ".mode");
          if (m == "even-only") mode = ParityMode::even_only;
          else if (m == "all") mode = ParityMode::all;
          else throw ShapeError(where + ".mode must be \"even-only\" or \"all\"");
        }
        const TablePtr base = src.chart.base_table();
        const TablePtr comp = component_table(src, params);
        const Json& bm = member(value, "base_map", where);
        if (!bm.is_object()) throw ShapeError(where + ".base_map must be an object keyed by target coordinate");
        std::vector<SuperPoly> f0(tgt.chart.dim(), SuperPoly(base));
        std::vector<bool> seen(tgt.chart.dim(), false);
        for (const auto& [coord, e] : bm.items()) {
          const std::size_t i = coordinate_index(tgt.chart.coords, coord, where + ".base_map");
          f0[i] = expression(e, base, where + ".base_map." + coord);
          seen[i] = true;
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
          if (!seen[i]) throw ShapeError(where + ".base_map is missing '" + tgt.chart.coords[i] + "'");
        std::vector<ComponentMap> tangent(tgt.chart.dim()), fiber(tgt.odd_rank());
        if (value.contains("tangent")) {
          if (!value["tangent"].is_object()) throw ShapeError(where + ".tangent must be an object keyed by target coordinate");
          for (const auto& [coord, e] : value["tangent"].items())
            tangent[coordinate_index(tgt.chart.coords, coord, where + ".tangent")] =
                components(e, comp, src.odd_rank(), where + ".tangent." + coord);
        }
        if (value.contains("fiber")) {
          if (!value["fiber"].is_object()) throw ShapeError(where + ".fiber must be an object keyed by target odd generator");
          for (const auto& [gen, e] : value["fiber"].items())
            fiber[coordinate_index(tgt.odd, gen, where + ".fiber")] =
                components(e, comp, src.odd_rank(), where + ".fiber." + gen);
        }
        doc.sections_.emplace(name, make_section(src, tgt, std::move(f0), std::move(tangent), std::move(fiber), mode,
                                                 std::move(params)));
      } catch (...) {
        rethrow_at(where);
      }
    }

  if (const Json* grids = section("grids"))
    for (const auto& [name, value] : grids->items()) {
      const std::string where = "grids." + name;
      try {
        if (!value.is_array() || value.empty()) throw ShapeError(where + " must be a non-empty array of points");
        SampleGrid g;
        for (const auto& p : value) g.points.push_back(doubles_of(p, where));
        doc.grids_.emplace(name, std::move(g));
      } catch (...) {
        rethrow_at(where);
      }
    }
  return doc;
}

const Chart& SpecDocument::chart(const std::string& name) const { return lookup(charts_, name, "chart"); }
const TorsionFreeConnection& SpecDocument::connection(const std::string& name) const {
  return lookup(connections_, name, "connection");
}
const BundleConnection& SpecDocument::bundle(const std::string& name) const { return lookup(bundles_, name, "bundle"); }
const SuperManifoldPresentation& SpecDocument::manifold(const std::string& name) const {
  return lookup(manifolds_, name, "manifold");
}
const SuperMorphism& SpecDocument::morphism(const std::string& name) const {
  return lookup(morphisms_, name, "morphism");
}
const SuperfieldSection& SpecDocument::section(const std::string& name) const {
  return lookup(sections_, name, "section");
}
const SampleGrid& SpecDocument::grid(const std::string& name) const { return lookup(grids_, name, "grid"); }

const Json& SpecDocument::params(const std::string& command) const {
  const auto it = raw_.find(command);
  if (it == raw_.end() || !it->is_object())
    throw ShapeError("document has no parameters for command '" + command + "'");
  return *it;
}

Json section_to_json(const SuperfieldSection& s, const std::string& source_name, const std::string& target_name) {
  Json j = Json::object();
  j["source"] = source_name;
  j["target"] = target_name;
  if (!s.parameters.empty()) j["parameters"] = s.parameters;
  j["mode"] = s.mode == ParityMode::even_only ? "even-only" : "all";
  Json base = Json::object();
  for (std::size_t i = 0; i < s.base_map.size(); ++i) base[s.target.chart.coords[i]] = s.base_map[i].to_string();
  j["base_map"] = base;
  auto table = [](const ComponentMap& comps) {
    Json t = Json::object();
    for (const auto& [key, c] : comps) {
      std::vector<int> one_based;
      for (int k : key) one_based.push_back(k + 1);
      t[index_key(one_based)] = c.to_string();
    }
    return t;
  };
  Json tangent = Json::object();
  for (std::size_t i = 0; i < s.tangent.size(); ++i) tangent[s.target.chart.coords[i]] = table(s.tangent[i]);
  j["tangent"] = tangent;
  Json fiber = Json::object();
  for (std::size_t a = 0; a < s.fiber.size(); ++a) fiber[s.target.odd[a]] = table(s.fiber[a]);
  j["fiber"] = fiber;
  return j;
}

std::string print_morphism(const SuperMorphism& f) {
  std::string out;
  for (std::size_t i = 0; i < f.x_pullbacks.size(); ++i)
    out += f.target.chart.coords[i] + " = " + f.x_pullbacks[i].to_string() + "\n";
  for (std::size_t a = 0; a < f.eta_pullbacks.size(); ++a)
    out += f.target.odd[a] + " = " + f.eta_pullbacks[a].to_string() + "\n";
  return out;
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_vector(const Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_number(v[i]);
  return out;
}

}  // namespace superjet
