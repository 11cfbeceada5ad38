#pragma once

// JSON coordinate files (schema version "1").
//
//   {
//     "schema_version": "1",
//     "surface": {
//       "pants": ["P"],
//       "gluings": [{"curve": "C", "plus": {"pants": "P", "slot": 0},
//                    "minus": {"pants": "P", "slot": 1},
//                    "arc": {"left_leaf": 1, "right_leaf": 2}}],
//       "boundary": [{"curve": "D", "slot": {"pants": "P", "slot": 2}}]
//     },
//     "system": "goldman" | "bd",
//     "values": {
//       "curves": {...},
//       "pants": {...}
//     }
//   }
//
// Goldman values: every curve has {"lambda", "tau"}, internal curves add
// {"u", "v"}; every pants has {"s", "t"}.
// BD values: every internal curve has {"sigma1_C", "sigma2_C"}; every pants has
// {"sigma1": [3], "sigma2": [3], "tau_plus", "tau_minus"}.
//
// Unknown fields are rejected. Doubles are written in shortest round-trip
// form, so parse(print(x)) == x exactly.

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "projcoords/errors.hpp"
#include "projcoords/surface.hpp"

namespace projcoords {

enum class CoordinateSystem { Goldman, BD };

constexpr std::string_view to_string(CoordinateSystem system) {
  return system == CoordinateSystem::Goldman ? "goldman" : "bd";
}

struct CoordinateFile {
  DecompositionSpec surface;
  PantsDecomposition decomposition;
  std::variant<SurfaceGoldman, SurfaceBD> values;

  CoordinateSystem system() const {
    return std::holds_alternative<SurfaceGoldman>(values)
               ? CoordinateSystem::Goldman
               : CoordinateSystem::BD;
  }
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void schema_error(const std::string& path,
                                      const std::string& what) {
  throw Error(ErrorKind::Schema, path + ": " + what);
}

inline void expect_object(const json& j, const std::string& path,
                          std::initializer_list<std::string_view> required,
                          std::initializer_list<std::string_view> optional = {}) {
  if (!j.is_object()) schema_error(path, "expected an object");
  for (std::string_view key : required) {
    if (!j.contains(std::string(key))) {
      schema_error(path, "missing field '" + std::string(key) + "'");
    }
  }
  for (const auto& item : j.items()) {
    bool known = false;
    for (std::string_view key : required) known = known || item.key() == key;
    for (std::string_view key : optional) known = known || item.key() == key;
    if (!known) schema_error(path, "unknown field '" + item.key() + "'");
  }
}

inline double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double value = j.get<double>();
  if (!std::isfinite(value)) schema_error(path, "number must be finite");
  return value;
}

inline std::size_t read_index(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) {
    schema_error(path, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

inline std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

inline DecompositionSpec::SlotName read_slot(const json& j,
                                             const std::string& path) {
  expect_object(j, path, {"pants", "slot"});
  return {read_string(j["pants"], path + ".pants"),
          read_index(j["slot"], path + ".slot")};
}

inline DecompositionSpec read_surface(const json& j) {
  expect_object(j, "surface", {"pants"}, {"gluings", "boundary"});
  DecompositionSpec spec;
  if (!j["pants"].is_array()) schema_error("surface.pants", "expected a list");
  for (std::size_t i = 0; i < j["pants"].size(); ++i) {
    spec.pants.push_back(read_string(
        j["pants"][i], "surface.pants[" + std::to_string(i) + "]"));
  }
  if (j.contains("gluings")) {
    const json& list = j["gluings"];
    if (!list.is_array()) schema_error("surface.gluings", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "surface.gluings[" + std::to_string(i) + "]";
      expect_object(list[i], path, {"curve", "plus", "minus"}, {"arc"});
      DecompositionSpec::Gluing gluing;
      gluing.curve = read_string(list[i]["curve"], path + ".curve");
      gluing.plus = read_slot(list[i]["plus"], path + ".plus");
      gluing.minus = read_slot(list[i]["minus"], path + ".minus");
      if (list[i].contains("arc")) {
        const json& arc = list[i]["arc"];
        expect_object(arc, path + ".arc", {"left_leaf", "right_leaf"});
        gluing.arc = ArcDatum{
            read_index(arc["left_leaf"], path + ".arc.left_leaf"),
            read_index(arc["right_leaf"], path + ".arc.right_leaf")};
      }
      spec.gluings.push_back(std::move(gluing));
    }
  }
  if (j.contains("boundary")) {
    const json& list = j["boundary"];
    if (!list.is_array()) schema_error("surface.boundary", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "surface.boundary[" + std::to_string(i) + "]";
      expect_object(list[i], path, {"curve", "slot"});
      spec.boundary.push_back(
          {read_string(list[i]["curve"], path + ".curve"),
           read_slot(list[i]["slot"], path + ".slot")});
    }
  }
  return spec;
}

/// Every key of `map` names an item and every item appears.
template <typename Names>
void expect_keys(const json& map, const std::string& path, const Names& names) {
  if (!map.is_object()) schema_error(path, "expected an object");
  std::set<std::string> wanted(names.begin(), names.end());
  for (const auto& item : map.items()) {
    if (!wanted.count(item.key())) {
      schema_error(path, "'" + item.key() + "' is not defined in surface");
    }
  }
  for (const std::string& name : wanted) {
    if (!map.contains(name)) schema_error(path, "missing entry '" + name + "'");
  }
}

inline SurfaceGoldman read_goldman(const json& values,
                                   const PantsDecomposition& d) {
  expect_object(values, "values", {"curves", "pants"});
  std::vector<std::string> curve_keys;
  for (const Curve& c : d.curves()) curve_keys.push_back(c.key);
  expect_keys(values["curves"], "values.curves", curve_keys);
  expect_keys(values["pants"], "values.pants", d.pants_keys());

  SurfaceGoldman g;
  for (const Curve& c : d.curves()) {
    const std::string path = "values.curves." + c.key;
    const json& item = values["curves"][c.key];
    if (c.internal()) {
      expect_object(item, path, {"lambda", "tau", "u", "v"});
      g.twist_bulge.push_back({read_number(item["u"], path + ".u"),
                               read_number(item["v"], path + ".v")});
    } else {
      expect_object(item, path, {"lambda", "tau"});
    }
    g.curves.push_back({read_number(item["lambda"], path + ".lambda"),
                        read_number(item["tau"], path + ".tau")});
  }
  for (const std::string& key : d.pants_keys()) {
    const std::string path = "values.pants." + key;
    const json& item = values["pants"][key];
    expect_object(item, path, {"s", "t"});
    g.pants.push_back({read_number(item["s"], path + ".s"),
                       read_number(item["t"], path + ".t")});
  }
  return g;
}

inline std::array<double, 3> read_triple(const json& j,
                                         const std::string& path) {
  if (!j.is_array() || j.size() != 3) {
    schema_error(path, "expected a list of 3 numbers");
  }
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    out[k] = read_number(j[k], path + "[" + std::to_string(k) + "]");
  }
  return out;
}

inline SurfaceBD read_bd(const json& values, const PantsDecomposition& d) {
  expect_object(values, "values", {"curves", "pants"});
  std::vector<std::string> internal_keys;
  for (std::size_t c = 0; c < d.internal_count(); ++c) {
    internal_keys.push_back(d.curve(c).key);
  }
  expect_keys(values["curves"], "values.curves", internal_keys);
  expect_keys(values["pants"], "values.pants", d.pants_keys());

  SurfaceBD b;
  for (const std::string& key : internal_keys) {
    const std::string path = "values.curves." + key;
    const json& item = values["curves"][key];
    expect_object(item, path, {"sigma1_C", "sigma2_C"});
    b.curve_shears.push_back(
        {read_number(item["sigma1_C"], path + ".sigma1_C"),
         read_number(item["sigma2_C"], path + ".sigma2_C")});
  }
  for (const std::string& key : d.pants_keys()) {
    const std::string path = "values.pants." + key;
    const json& item = values["pants"][key];
    expect_object(item, path, {"sigma1", "sigma2", "tau_plus", "tau_minus"});
    FGPants f;
    f.sigma1 = read_triple(item["sigma1"], path + ".sigma1");
    f.sigma2 = read_triple(item["sigma2"], path + ".sigma2");
    f.tau_plus = read_number(item["tau_plus"], path + ".tau_plus");
    f.tau_minus = read_number(item["tau_minus"], path + ".tau_minus");
    b.pants.push_back(f);
  }
  return b;
}

}  // namespace detail

/// Throws Error(Schema) on malformed input and the decomposition errors of
/// build_decomposition; values are not range-checked here.
inline CoordinateFile parse_coordinate_file(std::string_view text) {
  using nlohmann::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    // parse_error, and out_of_range for literals such as 1e999
    throw Error(ErrorKind::Schema, std::string("invalid JSON: ") + e.what());
  }
  detail::expect_object(root, "$",
                        {"schema_version", "surface", "system", "values"});
  if (root["schema_version"] != "1") {
    detail::schema_error("schema_version", "only version \"1\" is supported");
  }
  CoordinateFile file{detail::read_surface(root["surface"]), {}, {}};
  file.decomposition = build_decomposition(file.surface);
  const std::string system = detail::read_string(root["system"], "system");
  if (system == "goldman") {
    file.values = detail::read_goldman(root["values"], file.decomposition);
  } else if (system == "bd") {
    file.values = detail::read_bd(root["values"], file.decomposition);
  } else {
    detail::schema_error("system", "expected \"goldman\" or \"bd\"");
  }
  return file;
}

inline CoordinateFile load_coordinate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Schema, "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_coordinate_file(text.str());
}

inline nlohmann::ordered_json surface_to_json(const DecompositionSpec& spec) {
  using nlohmann::ordered_json;
  auto slot = [](const DecompositionSpec::SlotName& s) {
    return ordered_json{{"pants", s.pants}, {"slot", s.slot}};
  };
  ordered_json out;
  out["pants"] = spec.pants;
  out["gluings"] = ordered_json::array();
  for (const auto& g : spec.gluings) {
    ordered_json item{{"curve", g.curve},
                      {"plus", slot(g.plus)},
                      {"minus", slot(g.minus)}};
    if (g.arc) {
      item["arc"] = {{"left_leaf", g.arc->left_leaf},
                     {"right_leaf", g.arc->right_leaf}};
    }
    out["gluings"].push_back(item);
  }
  out["boundary"] = ordered_json::array();
  for (const auto& b : spec.boundary) {
    out["boundary"].push_back({{"curve", b.curve}, {"slot", slot(b.slot)}});
  }
  return out;
}

inline std::string print_coordinate_file(const CoordinateFile& file) {
  using nlohmann::ordered_json;
  const PantsDecomposition& d = file.decomposition;
  ordered_json root;
  root["schema_version"] = "1";
  root["surface"] = surface_to_json(file.surface);
  root["system"] = std::string(to_string(file.system()));
  ordered_json curves = ordered_json::object();
  ordered_json pants = ordered_json::object();
  if (const auto* g = std::get_if<SurfaceGoldman>(&file.values)) {
    for (std::size_t c = 0; c < d.curve_count(); ++c) {
      ordered_json item{{"lambda", g->curves[c].lambda},
                        {"tau", g->curves[c].tau}};
      if (d.curve(c).internal()) {
        item["u"] = g->twist_bulge[c].u;
        item["v"] = g->twist_bulge[c].v;
      }
      curves[d.curve(c).key] = item;
    }
    for (std::size_t p = 0; p < d.pants_count(); ++p) {
      pants[d.pants_keys()[p]] = {{"s", g->pants[p].s}, {"t", g->pants[p].t}};
    }
  } else {
    const auto& b = std::get<SurfaceBD>(file.values);
    for (std::size_t c = 0; c < d.internal_count(); ++c) {
      curves[d.curve(c).key] = {{"sigma1_C", b.curve_shears[c].sigma1},
                                {"sigma2_C", b.curve_shears[c].sigma2}};
    }
    for (std::size_t p = 0; p < d.pants_count(); ++p) {
      const FGPants& f = b.pants[p];
      pants[d.pants_keys()[p]] = {{"sigma1", f.sigma1},
                                  {"sigma2", f.sigma2},
                                  {"tau_plus", f.tau_plus},
                                  {"tau_minus", f.tau_minus}};
    }
  }
  root["values"] = {{"curves", curves}, {"pants", pants}};
  return root.dump(2) + "\n";
}

inline void save_coordinate_file(const CoordinateFile& file,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Schema, "cannot write '" + path + "'");
  out << print_coordinate_file(file);
}

}  // namespace projcoords
