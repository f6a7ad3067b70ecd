#include "critkit/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "critkit/cross_sections.hpp"
#include "critkit/errors.hpp"

namespace critkit {
namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return std::isspace(c) == 0; };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

struct ConfigValue {
  std::string text;
  int line = 0;
  bool consumed = false;
};

/// Section-qualified key/value store with line tracking for diagnostics.
class KeyValues {
 public:
  void insert(const std::string& key, const std::string& value, int line) {
    if (entries_.contains(key)) {
      throw ConfigError("duplicate key '" + key + "'", line);
    }
    entries_[key] = ConfigValue{value, line, false};
  }

  const ConfigValue* find(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      return nullptr;
    }
    it->second.consumed = true;
    return &it->second;
  }

  void require_all_consumed() const {
    for (const auto& [key, value] : entries_) {
      if (!value.consumed) {
        throw ConfigError("unknown key '" + key + "'", value.line);
      }
    }
  }

 private:
  std::map<std::string, ConfigValue> entries_;
};

double parse_double(const ConfigValue& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v.text, &pos);
    if (pos != v.text.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + v.text +
                          "'",
                      v.line);
  }
}

long long parse_integer(const ConfigValue& v, const std::string& key) {
  long long out = 0;
  const std::string text = v.text;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + text +
                          "'",
                      v.line);
  }
  return out;
}

bool parse_bool(const ConfigValue& v, const std::string& key) {
  if (v.text == "true" || v.text == "1") {
    return true;
  }
  if (v.text == "false" || v.text == "0") {
    return false;
  }
  throw ConfigError("key '" + key + "' expects true/false, got '" + v.text +
                        "'",
                    v.line);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    out.push_back(trim(item));
  }
  return out;
}

BoundaryCondition parse_bc(const ConfigValue& v, const std::string& key) {
  if (v.text == "vacuum") {
    return BoundaryCondition::vacuum;
  }
  if (v.text == "reflective") {
    return BoundaryCondition::reflective;
  }
  throw ConfigError(
      "key '" + key + "' expects vacuum or reflective, got '" + v.text + "'",
      v.line);
}

template <typename T, typename Parse>
void assign_if_present(KeyValues& kv, const std::string& key, T& field,
                       Parse parse) {
  if (const ConfigValue* v = kv.find(key)) {
    field = parse(*v, key);
  }
}

}  // namespace

RunConfig RunConfig::parse(std::istream& in) {
  KeyValues kv;
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t comment = raw.find('#');
    if (comment != std::string::npos) {
      raw.erase(comment);
    }
    const std::string line = trim(raw);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("malformed section header '" + line + "'", line_no);
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value', got '" + line + "'",
                        line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("expected 'key = value', got '" + line + "'",
                        line_no);
    }
    if (section.empty()) {
      throw ConfigError("key '" + key + "' appears before any section",
                        line_no);
    }
    kv.insert(section + "." + key, value, line_no);
  }

  RunConfig config;

  const ConfigValue* xs = kv.find("problem.xs");
  if (xs == nullptr) {
    throw ConfigError("missing required key 'problem.xs'");
  }
  config.xs_path = xs->text;

  const ConfigValue* materials = kv.find("problem.materials");
  const ConfigValue* cells = kv.find("problem.cells");
  const ConfigValue* widths = kv.find("problem.widths");
  if (materials == nullptr || cells == nullptr || widths == nullptr) {
    throw ConfigError(
        "missing required keys: problem.materials, problem.cells, and "
        "problem.widths must all be given");
  }
  const std::vector<std::string> material_list = split_list(materials->text);
  const std::vector<std::string> cell_list = split_list(cells->text);
  const std::vector<std::string> width_list = split_list(widths->text);
  if (material_list.empty() || material_list.size() != cell_list.size() ||
      material_list.size() != width_list.size()) {
    throw ConfigError(
        "problem.materials, problem.cells, and problem.widths must be "
        "non-empty lists of equal length",
        materials->line);
  }
  for (std::size_t r = 0; r < material_list.size(); ++r) {
    RegionSpec region;
    region.material = material_list[r];
    const long long n =
        parse_integer(ConfigValue{cell_list[r], cells->line}, "problem.cells");
    if (n < 1) {
      throw ConfigError("problem.cells entries must be positive", cells->line);
    }
    region.cells = static_cast<std::size_t>(n);
    region.width = parse_double(ConfigValue{width_list[r], widths->line},
                                "problem.widths");
    if (!(region.width > 0.0)) {
      throw ConfigError("problem.widths entries must be positive",
                        widths->line);
    }
    config.regions.push_back(std::move(region));
  }

  assign_if_present(kv, "problem.bc_left", config.bc_left, parse_bc);
  assign_if_present(kv, "problem.bc_right", config.bc_right, parse_bc);
  if (const ConfigValue* v = kv.find("problem.quadrature")) {
    const long long n = parse_integer(*v, "problem.quadrature");
    if (n < 2 || n % 2 != 0) {
      throw ConfigError("problem.quadrature must be a positive even count",
                        v->line);
    }
    config.quadrature = static_cast<std::size_t>(n);
  }
  if (const ConfigValue* v = kv.find("problem.groups")) {
    const long long n = parse_integer(*v, "problem.groups");
    if (n < 1) {
      throw ConfigError("problem.groups must be positive", v->line);
    }
    config.groups = static_cast<std::size_t>(n);
  }

  if (const ConfigValue* v = kv.find("solver.preconditioner")) {
    if (v->text == "sgmasm") {
      config.preconditioner = PreconditionerKind::sgmasm;
    } else if (v->text == "masm") {
      config.preconditioner = PreconditionerKind::masm;
    } else if (v->text == "ras") {
      config.preconditioner = PreconditionerKind::ras;
    } else if (v->text == "none") {
      config.preconditioner = PreconditionerKind::none;
    } else {
      throw ConfigError(
          "solver.preconditioner must be sgmasm, masm, ras, or none; got '" +
              v->text + "'",
          v->line);
    }
  }
  if (const ConfigValue* v = kv.find("solver.closure_mode")) {
    if (v->text == "drift") {
      config.closure_mode = ClosureMode::drift;
    } else if (v->text == "saaf_functional") {
      config.closure_mode = ClosureMode::saaf_functional;
    } else {
      throw ConfigError(
          "solver.closure_mode must be drift or saaf_functional, got '" +
              v->text + "'",
          v->line);
    }
  }

  const auto positive_int = [](const ConfigValue& v, const std::string& key) {
    const long long n = parse_integer(v, key);
    if (n < 1) {
      throw ConfigError("key '" + key + "' must be positive", v.line);
    }
    return n;
  };
  const auto non_negative_int = [](const ConfigValue& v,
                                   const std::string& key) {
    const long long n = parse_integer(v, key);
    if (n < 0) {
      throw ConfigError("key '" + key + "' must be non-negative", v.line);
    }
    return n;
  };
  const auto positive_double = [](const ConfigValue& v,
                                  const std::string& key) {
    const double d = parse_double(v, key);
    if (!(d > 0.0)) {
      throw ConfigError("key '" + key + "' must be positive", v.line);
    }
    return d;
  };

  assign_if_present(kv, "solver.theta", config.theta,
                    [&](const ConfigValue& v, const std::string& key) {
                      const double d = parse_double(v, key);
                      if (d < 0.0 || d >= 1.0) {
                        throw ConfigError(
                            "solver.theta must lie in [0, 1)", v.line);
                      }
                      return d;
                    });
  assign_if_present(kv, "solver.delta", config.delta,
                    [&](const ConfigValue& v, const std::string& key) {
                      return static_cast<int>(non_negative_int(v, key));
                    });
  assign_if_present(kv, "solver.agg", config.agg,
                    [&](const ConfigValue& v, const std::string& key) {
                      return static_cast<int>(non_negative_int(v, key));
                    });
  assign_if_present(kv, "solver.max_levels", config.max_levels,
                    [&](const ConfigValue& v, const std::string& key) {
                      return static_cast<int>(positive_int(v, key));
                    });
  assign_if_present(kv, "solver.min_coarse", config.min_coarse,
                    [&](const ConfigValue& v, const std::string& key) {
                      return static_cast<std::size_t>(positive_int(v, key));
                    });
  assign_if_present(kv, "solver.sweeps", config.sweeps,
                    [&](const ConfigValue& v, const std::string& key) {
                      return static_cast<int>(positive_int(v, key));
                    });
  assign_if_present(kv, "solver.omega", config.omega,
                    [&](const ConfigValue& v, const std::string& key) {
                      const double d = parse_double(v, key);
                      if (!(d > 0.0) || d >= 2.0) {
                        throw ConfigError("solver.omega must lie in (0, 2)",
                                          v.line);
                      }
                      return d;
                    });
  assign_if_present(kv, "solver.exact_subdomains", config.exact_subdomains,
                    parse_bool);
  assign_if_present(kv, "solver.np1", config.np1,
                    [&](const ConfigValue& v, const std::string& key) {
                      return static_cast<std::size_t>(positive_int(v, key));
                    });
  assign_if_present(kv, "solver.np2", config.np2,
                    [&](const ConfigValue& v, const std::string& key) {
                      return static_cast<std::size_t>(positive_int(v, key));
                    });
  assign_if_present(kv, "solver.component_index", config.component_index,
                    [&](const ConfigValue& v, const std::string& key) {
                      return static_cast<std::size_t>(
                          non_negative_int(v, key));
                    });
  assign_if_present(kv, "solver.restart", config.restart,
                    [&](const ConfigValue& v, const std::string& key) {
                      return static_cast<int>(positive_int(v, key));
                    });
  assign_if_present(kv, "solver.rtol_transport", config.rtol_transport,
                    positive_double);
  assign_if_present(kv, "solver.rtol_linear_diffusion",
                    config.rtol_linear_diffusion, positive_double);
  assign_if_present(kv, "solver.newton_tol", config.newton_tol,
                    positive_double);
  assign_if_present(kv, "solver.max_newton", config.max_newton,
                    [&](const ConfigValue& v, const std::string& key) {
                      return static_cast<int>(positive_int(v, key));
                    });
  assign_if_present(kv, "solver.nda_tol", config.nda_tol, positive_double);
  assign_if_present(kv, "solver.max_nda", config.max_nda,
                    [&](const ConfigValue& v, const std::string& key) {
                      return static_cast<int>(positive_int(v, key));
                    });
  assign_if_present(kv, "solver.seed", config.seed,
                    [&](const ConfigValue& v, const std::string& key) {
                      return static_cast<unsigned long>(
                          non_negative_int(v, key));
                    });

  kv.require_all_consumed();
  return config;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  RunConfig config = parse(in);
  config.source_path = path;
  return config;
}

std::string RunConfig::resolved_xs_path() const {
  const std::filesystem::path xs(xs_path);
  if (xs.is_absolute() || source_path.empty()) {
    return xs_path;
  }
  return (std::filesystem::path(source_path).parent_path() / xs).string();
}

SlabMesh RunConfig::build_mesh(const XsLibrary& lib) const {
  SlabMesh mesh;
  mesh.bc_left = bc_left;
  mesh.bc_right = bc_right;
  for (const RegionSpec& region : regions) {
    const std::int64_t id = lib.find(region.material);
    if (id < 0) {
      throw ConfigError("material '" + region.material +
                        "' is not in the cross-section library");
    }
    const double h = region.width / static_cast<double>(region.cells);
    for (std::size_t c = 0; c < region.cells; ++c) {
      mesh.widths.push_back(h);
      mesh.material.push_back(static_cast<std::int32_t>(id));
    }
  }
  mesh.validate(lib.n_materials());
  return mesh;
}

PreconditionerParams RunConfig::preconditioner_params() const {
  PreconditionerParams params;
  params.kind = preconditioner;
  params.multilevel.theta = theta;
  params.multilevel.agg = agg;
  params.multilevel.max_levels = max_levels;
  params.multilevel.min_coarse = min_coarse;
  params.multilevel.delta = delta;
  params.multilevel.sweeps = sweeps;
  params.multilevel.omega = omega;
  params.multilevel.exact_subdomains = exact_subdomains;
  params.multilevel.np1 = np1;
  params.multilevel.np2 = np2;
  params.multilevel.component_index = component_index;
  return params;
}

}  // namespace critkit
