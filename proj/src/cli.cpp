#include "superjet/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "superjet/document.hpp"
#include "superjet/errors.hpp"
#include "superjet/expr.hpp"
#include "superjet/verify.hpp"

namespace superjet {

namespace {

struct Overrides {
  std::optional<int> steps;
  std::optional<double> tol;
};

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path);
  if (!file) throw DomainError("cannot open '" + path + "'");
  buf << file.rdbuf();
  return buf.str();
}

class Params {
 public:
  Params(const SpecDocument& doc, std::string command)
      : doc_(doc), command_(std::move(command)), p_(doc.params(command_)) {}

  const SpecDocument& doc() const { return doc_; }
  const Json& json() const { return p_; }
  bool has(const char* key) const { return p_.contains(key); }

  const Json& need(const char* key) const {
    const auto it = p_.find(key);
    if (it == p_.end()) throw ShapeError(where(key) + " is required");
    return *it;
  }

  std::string str(const char* key) const {
    const Json& j = need(key);
    if (!j.is_string()) throw ShapeError(where(key) + " must be a string");
    return j.get<std::string>();
  }

  int integer(const char* key, std::optional<int> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      need(key);
    }
    const Json& j = p_[key];
    if (!j.is_number_integer()) throw ShapeError(where(key) + " must be an integer");
    return j.get<int>();
  }

  double number(const char* key, std::optional<double> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      need(key);
    }
    const Json& j = p_[key];
    if (!j.is_number()) throw ShapeError(where(key) + " must be a number");
    return j.get<double>();
  }

  Vec vec(const char* key) const {
    const Json& j = need(key);
    if (!j.is_array()) throw ShapeError(where(key) + " must be an array of numbers");
    Vec out;
    for (const auto& e : j) {
      if (!e.is_number()) throw ShapeError(where(key) + " must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<Vec> vecs(const char* key) const {
    const Json& j = need(key);
    if (!j.is_array()) throw ShapeError(where(key) + " must be an array of points");
    std::vector<Vec> out;
    for (const auto& row : j) {
      if (!row.is_array()) throw ShapeError(where(key) + " must be an array of points");
      Vec v;
      for (const auto& e : row) {
        if (!e.is_number()) throw ShapeError(where(key) + " must contain numbers only");
        v.push_back(e.get<double>());
      }
      out.push_back(std::move(v));
    }
    return out;
  }

  SuperPoly poly(const char* key, const TablePtr& table) const {
    const Json& j = need(key);
    if (!j.is_string()) throw ShapeError(where(key) + " must be an expression string");
    try {
      return parse_poly(j.get<std::string>(), table);
    } catch (const ParseError& e) {
      std::string msg = e.what();
      msg.resize(msg.rfind(" at line "));
      throw ParseError(where(key) + ": " + msg, e.line(), e.column());
    }
  }

  const TorsionFreeConnection& connection(const char* key = "connection") const { return doc_.connection(str(key)); }

  std::optional<BundleConnection> bundle(const char* key = "bundle") const {
    if (!has(key)) return std::nullopt;
    return doc_.bundle(str(key));
  }

  std::string where(const char* key) const { return command_ + "." + key; }

 private:
  const SpecDocument& doc_;
  std::string command_;
  const Json& p_;
};

int steps_of(const Params& p, const Overrides& o, int fallback) {
  const int steps = o.steps ? *o.steps : p.integer("steps", fallback);
  if (steps < 1) throw DomainError("steps must be at least 1");
  return steps;
}

std::string join(const std::vector<std::string>& names, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? sep : "") + names[i];
  return out;
}

// {"connection": name, "bundle": name} under `key`; the bundle is optional.
struct ConnectionPair {
  TorsionFreeConnection gamma;
  std::optional<BundleConnection> bundle;
};

ConnectionPair connection_pair(const Params& p, const char* key) {
  const Json& j = p.need(key);
  if (!j.is_object() || !j.contains("connection") || !j["connection"].is_string())
    throw ShapeError(p.where(key) + " must be an object with a 'connection' name");
  std::optional<BundleConnection> b;
  if (j.contains("bundle")) {
    if (!j["bundle"].is_string()) throw ShapeError(p.where(key) + ".bundle must be a name");
    b = p.doc().bundle(j["bundle"].get<std::string>());
  }
  return {p.doc().connection(j["connection"].get<std::string>()), b};
}

int cmd_jet(const Params& p, std::ostream& out) {
  const Chart& c = p.doc().chart(p.str("chart"));
  FiberGenerators fibers;
  if (p.has("bundle")) fibers = p.doc().bundle(p.str("bundle")).fibers();
  const int order = p.integer("order");
  const TablePtr t = fibers.names.empty() ? c.base_table() : jet_table(c, 0, JetBasis::jet, fibers);
  out << jet_of_function(p.poly("function", t), c, order, fibers).value.to_string() << "\n";
  return exit_ok;
}

int cmd_normal(const Params& p, std::ostream& out) {
  for (const auto& d : geodesic_jet(p.connection(), p.integer("order"))) out << d.to_string() << "\n";
  return exit_ok;
}

int cmd_phi(const Params& p, std::ostream& out) {
  const auto& g = p.connection();
  const auto b = p.bundle();
  const int order = p.integer("order");
  const FiberGenerators fibers = b ? b->fibers() : FiberGenerators{};
  const int given = static_cast<int>(p.has("function")) + static_cast<int>(p.has("jet")) + static_cast<int>(p.has("inverse"));
  if (given != 1) throw ShapeError("phi needs exactly one of 'function', 'jet' or 'inverse'");
  const PhiIsomorphism phi_k(g, b, order);
  const Chart& c = g.chart();
  if (p.has("function")) {
    const TablePtr t = fibers.names.empty() ? c.base_table() : jet_table(c, 0, JetBasis::jet, fibers);
    out << phi_k(jet_of_function(p.poly("function", t), c, order, fibers)).value.to_string() << "\n";
  } else if (p.has("jet")) {
    const SuperPoly j = p.poly("jet", jet_table(c, order, JetBasis::jet, fibers));
    out << phi_k(JetElement{c, order, JetBasis::jet, j}).value.to_string() << "\n";
  } else {
    const SuperPoly s = p.poly("inverse", jet_table(c, order, JetBasis::normal, fibers));
    out << phi_k.inverse(JetElement{c, order, JetBasis::normal, s}).value.to_string() << "\n";
  }
  return exit_ok;
}

int cmd_psi(const Params& p, std::ostream& out) {
  const ConnectionPair from = connection_pair(p, "from");
  const ConnectionPair to = connection_pair(p, "to");
  const AlgebraMap psi = psi_automorphism(from.gamma, to.gamma, from.bundle, to.bundle, p.integer("order"));
  if (p.has("element")) {
    out << psi(p.poly("element", psi.source())).to_string() << "\n";
    return exit_ok;
  }
  const GeneratorTable& t = *psi.source();
  for (const auto& xi : t.formal()) out << xi << " -> " << psi.image(xi).to_string() << "\n";
  for (const auto& v : t.odd()) out << v << " -> " << psi.image(v).to_string() << "\n";
  return exit_ok;
}

void check_order(const Params& p, const SuperManifoldPresentation& source, const std::vector<std::string>& parameters) {
  if (!p.has("order")) return;
  const int k = correspondence_order(source, parameters);
  if (p.integer("order") != k)
    throw DomainError("order " + std::to_string(p.integer("order")) + " is not supported: morphism conversion uses " +
                      std::to_string(k) + " (source odd rank plus parameter count)");
}

int cmd_to_section(const Params& p, std::ostream& out) {
  const std::string name = p.str("morphism");
  const SuperMorphism& f = p.doc().morphism(name);
  check_order(p, f.source, f.parameters);
  const SuperfieldSection s = morphism_to_section(f, p.connection(), p.bundle());
  const Json& declared = p.doc().raw()["morphisms"][name];
  const std::string section_name = p.has("name") ? p.str("name") : name;
  Json doc = p.doc().raw();
  doc["sections"][section_name] = section_to_json(s, declared["source"].get<std::string>(), declared["target"].get<std::string>());
  Json next = Json::object();
  next["section"] = section_name;
  next["connection"] = p.str("connection");
  if (p.has("bundle")) next["bundle"] = p.str("bundle");
  doc["to-morphism"] = next;
  out << doc.dump(2) << "\n";
  return exit_ok;
}

int cmd_to_morphism(const Params& p, std::ostream& out) {
  if (p.has("section")) {
    const SuperfieldSection& s = p.doc().section(p.str("section"));
    check_order(p, s.source, s.parameters);
    out << print_morphism(section_to_morphism(s, p.connection(), p.bundle()));
  } else {
    out << print_morphism(p.doc().morphism(p.str("morphism")));
  }
  return exit_ok;
}

SuperfieldSection section_param(const Params& p) {
  if (p.has("section")) return p.doc().section(p.str("section"));
  return morphism_to_section(p.doc().morphism(p.str("morphism")), p.connection(), p.bundle());
}

int cmd_even_check(const Params& p, std::ostream& out) {
  const bool even = check_even_degree(section_param(p));
  out << (even ? "even" : "not even") << "\n";
  return even ? exit_ok : exit_failure;
}

std::string block_label(const OddIndex& idx, const std::vector<std::string>& names) {
  std::vector<std::string> picked;
  for (int i : idx) picked.push_back(names[static_cast<std::size_t>(i)]);
  return join(picked, ",");
}

int cmd_curry(const Params& p, std::ostream& out) {
  const SuperfieldSection s = section_param(p);
  const Json& split = p.need("split");
  ProductSplit ps;
  if (!split.is_object()) throw ShapeError(p.where("split") + " must be an object");
  if (split.contains("coords")) ps.outer_coords = split["coords"].get<std::vector<std::string>>();
  if (split.contains("odd")) ps.outer_odd = split["odd"].get<std::vector<std::string>>();
  const CurriedSection c = curry(s, ps);
  const auto outer = c.outer_odd();
  const auto inner = c.inner_odd();
  for (std::size_t i = 0; i < c.base_map.size(); ++i)
    out << c.target.chart.coords[i] << " = " << c.base_map[i].to_string() << "\n";
  auto print = [&](const std::string& name, const BlockMap& blocks) {
    for (const auto& [key, v] : blocks)
      out << name << " [" << block_label(key.first, outer) << " | " << block_label(key.second, inner)
          << "] = " << v.to_string() << "\n";
  };
  for (std::size_t i = 0; i < c.tangent.size(); ++i) print(c.target.chart.coords[i], c.tangent[i]);
  for (std::size_t a = 0; a < c.fiber.size(); ++a) print(c.target.odd[a], c.fiber[a]);
  return exit_ok;
}

int cmd_diag_check(const Params& p, std::ostream& out) {
  const SuperMorphism& f = p.doc().morphism(p.str("morphism"));
  const SuperPoly image = diagonal_vanishing_check(f, p.poly("function", diagonal_table(f.target.chart)));
  out << image.to_string() << "\n";
  const bool expect_zero = !p.has("expect_zero") || p.need("expect_zero").get<bool>();
  return expect_zero && !image.is_zero() ? exit_failure : exit_ok;
}

int cmd_exp(const Params& p, const Overrides& o, std::ostream& out) {
  out << format_vector(exp_numeric(p.connection(), p.vec("point"), p.vec("vector"), steps_of(p, o, 200))) << "\n";
  return exit_ok;
}

DiscreteMap map_param(const Params& p, const char* key) {
  return DiscreteMap{p.doc().grid(p.str("grid")), p.vecs(key)};
}

int cmd_chart_psi(const Params& p, const Overrides& o, std::ostream& out) {
  const DiscreteMap f = map_param(p, "map");
  const DiscreteSection s{f.grid, p.vecs("section")};
  for (const auto& v : chart_psi(f, s, p.connection(), steps_of(p, o, 200)).values) out << format_vector(v) << "\n";
  return exit_ok;
}

int cmd_chart_phi(const Params& p, const Overrides& o, std::ostream& out, std::ostream& err) {
  const DiscreteMap f = map_param(p, "map");
  const DiscreteMap g = map_param(p, "target");
  NewtonOptions newton;
  newton.tolerance = o.tol ? *o.tol : p.number("tol", newton.tolerance);
  newton.max_iterations = p.integer("max_iterations", newton.max_iterations);
  if (!(newton.tolerance > 0.0)) throw DomainError("tol must be positive");
  const ChartPhiResult r = chart_phi(f, g, p.connection(), steps_of(p, o, 200), newton);
  for (const auto& v : r.section.vectors) out << format_vector(v) << "\n";
  for (std::size_t i = 0; i < r.status.size(); ++i)
    if (!r.status[i].converged)
      err << "point " << i + 1 << " did not converge (residual " << format_number(r.status[i].residual) << ")\n";
  return r.all_converged() ? exit_ok : exit_failure;
}

int cmd_transport(const Params& p, const Overrides& o, std::ostream& out) {
  const auto b = p.bundle();
  if (!b) throw ShapeError(p.where("bundle") + " is required");
  if (!p.has("grid")) {
    const TimedPath path{p.vec("times"), p.vecs("points")};
    out << format_vector(parallel_transport(*b, path, p.vec("vector"), steps_of(p, o, 64))) << "\n";
    return exit_ok;
  }
  const DiscreteMap f = map_param(p, "map");
  const DiscreteSection eta{f.grid, p.vecs("section")};
  const auto mats = trivialize_over_chart(f, eta, p.connection(), *b, p.number("t0", 0.0), p.number("t1", 1.0),
                                          steps_of(p, o, 200));
  for (const auto& m : mats) {
    std::vector<std::string> rows;
    for (const auto& row : m) rows.push_back(format_vector(row));
    out << join(rows, " ; ") << "\n";
  }
  return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jets, normal forms and supermaps over polynomial charts", "superjet"};
  app.require_subcommand(1);
  std::string path;
  Overrides overrides;
  std::string suite = "all";
  std::uint64_t seed = 7;
  int cases = 50;

  struct Command {
    const char* name;
    const char* help;
    bool numeric;
  };
  const std::vector<Command> commands{
      {"jet", "jet of a function", false},
      {"normal", "normal-coordinate expansion of the geodesic flow", false},
      {"phi", "jet to normal form (or back)", false},
      {"psi", "change of connection on normal forms", false},
      {"to-section", "morphism to superfield section (prints an updated document)", false},
      {"to-morphism", "superfield section to morphism", false},
      {"even-check", "parity support of a section", false},
      {"curry", "regroup a section over a product source", false},
      {"diag-check", "pull a function near the diagonal back along f' x f", false},
      {"exp", "numeric exponential map", true},
      {"chart-psi", "psi_f(s) on a grid", true},
      {"chart-phi", "phi_f(g) on a grid", true},
      {"transport", "parallel transport along a sampled curve or over a chart", true},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("document", path, "input document, or - for standard input")->required();
    if (c.numeric) {
      sub->add_option("--steps", overrides.steps, "RK4 step count (overrides the document)");
      if (std::string_view(c.name) == "chart-phi")
        sub->add_option("--tol", overrides.tol, "Newton tolerance (overrides the document)");
    }
  }
  CLI::App* verify = app.add_subcommand("verify", "randomized property checks");
  verify->add_option("--suite", suite, "core, supermap, numeric or all")
      ->check(CLI::IsMember({"core", "supermap", "numeric", "all"}));
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--cases", cases, "cases per check")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_input_error;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  if (command == "verify") {
    const auto outcomes = run_verify(parse_suite(suite), seed, cases);
    out << format_report(outcomes);
    for (const auto& o : outcomes)
      if (!o.passed()) return exit_failure;
    return exit_ok;
  }

  try {
    const SpecDocument doc = SpecDocument::parse(read_input(path, in));
    const Params p(doc, command);
    if (command == "jet") return cmd_jet(p, out);
    if (command == "normal") return cmd_normal(p, out);
    if (command == "phi") return cmd_phi(p, out);
    if (command == "psi") return cmd_psi(p, out);
    if (command == "to-section") return cmd_to_section(p, out);
    if (command == "to-morphism") return cmd_to_morphism(p, out);
    if (command == "even-check") return cmd_even_check(p, out);
    if (command == "curry") return cmd_curry(p, out);
    if (command == "diag-check") return cmd_diag_check(p, out);
    if (command == "exp") return cmd_exp(p, overrides, out);
    if (command == "chart-psi") return cmd_chart_psi(p, overrides, out);
    if (command == "chart-phi") return cmd_chart_phi(p, overrides, out, err);
    if (command == "transport") return cmd_transport(p, overrides, out);
  } catch (const superjet::Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  }
  err << "error: unknown command '" << command << "'\n";
  return exit_input_error;
}

}  // namespace superjet
