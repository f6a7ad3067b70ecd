#include "critkit/cross_sections.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "critkit/errors.hpp"

namespace critkit {

bool CrossSections::fissile() const {
  for (double f : nu_sigma_f) {
    if (f > 0.0) return true;
  }
  return false;
}

void CrossSections::validate(const std::string& label) const {
  const std::size_t g = n_groups;
  auto fail = [&](const std::string& msg) {
    throw InvalidInputError("material '" + label + "': " + msg);
  };
  if (g == 0) fail("needs at least one group");
  if (sigma_t.size() != g || nu_sigma_f.size() != g || chi.size() != g ||
      diffusion.size() != g || sigma_s.size() != g * g ||
      sigma_s1.size() != g * g) {
    fail("field size does not match group count");
  }
  auto finite_nonneg = [&](const std::vector<double>& v, const char* name) {
    for (double x : v) {
      if (!std::isfinite(x) || x < 0.0) {
        fail(std::string(name) + " must be finite and non-negative");
      }
    }
  };
  finite_nonneg(sigma_t, "sigma_t");
  finite_nonneg(sigma_s, "sigma_s");
  finite_nonneg(nu_sigma_f, "nu_sigma_f");
  finite_nonneg(chi, "chi");
  for (double x : sigma_s1) {
    if (!std::isfinite(x)) fail("sigma_s1 must be finite");
  }
  for (std::size_t from = 0; from < g; ++from) {
    double row = 0.0;
    for (std::size_t to = 0; to < g; ++to) row += scattering(from, to);
    if (row > sigma_t[from] * (1.0 + 1e-12) + 1e-300) {
      fail("scattering row sum exceeds sigma_t in group " +
           std::to_string(from));
    }
  }
  if (fissile()) {
    double s = 0.0;
    for (double x : chi) s += x;
    if (std::abs(s - 1.0) > 1e-12) {
      fail("chi must sum to 1 for a fissile material");
    }
  }
  for (double d : diffusion) {
    if (!std::isfinite(d) || d <= 0.0) {
      fail("diffusion coefficient must be finite and positive");
    }
  }
}

XsLibrary::XsLibrary(std::size_t n_groups, std::vector<std::string> names,
                     std::vector<CrossSections> materials)
    : n_groups_(n_groups),
      names_(std::move(names)),
      materials_(std::move(materials)) {
  if (names_.size() != materials_.size()) {
    throw InvalidInputError("XsLibrary: names/materials size mismatch");
  }
  for (std::size_t i = 0; i < materials_.size(); ++i) {
    if (materials_[i].n_groups != n_groups_) {
      throw InvalidInputError("XsLibrary: group count mismatch in '" +
                              names_[i] + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[j] == names_[i]) {
        throw InvalidInputError("XsLibrary: duplicate material name '" +
                                names_[i] + "'");
      }
    }
    materials_[i].validate(names_[i]);
  }
}

const CrossSections& XsLibrary::material(std::size_t id) const {
  if (id >= materials_.size()) {
    throw DimensionError("XsLibrary: material id out of range");
  }
  return materials_[id];
}

std::int64_t XsLibrary::find(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<std::int64_t>(i);
  }
  return -1;
}

namespace {

// Tokenizes the stream with '#' comments stripped.
std::vector<std::string> tokenize(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  return tokens;
}

double parse_number(const std::string& tok, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError("cross-section library: expected a number for " + context +
                  ", got '" + tok + "'");
  }
}

}  // namespace

XsLibrary XsLibrary::parse(std::istream& in) {
  const std::vector<std::string> tokens = tokenize(in);
  std::size_t pos = 0;
  auto next = [&](const std::string& context) -> const std::string& {
    if (pos >= tokens.size()) {
      throw IoError("cross-section library: unexpected end of file while "
                    "reading " + context);
    }
    return tokens[pos++];
  };

  if (tokens.empty() || next("header") != "groups") {
    throw IoError("cross-section library: file must begin with 'groups G'");
  }
  const double groups_val = parse_number(next("group count"), "group count");
  if (groups_val < 1.0 || groups_val != std::floor(groups_val)) {
    throw IoError("cross-section library: group count must be a positive "
                  "integer");
  }
  const std::size_t g = static_cast<std::size_t>(groups_val);

  std::vector<std::string> names;
  std::vector<CrossSections> materials;
  while (pos < tokens.size()) {
    if (next("material block") != "material") {
      throw IoError("cross-section library: expected 'material NAME'");
    }
    const std::string name = next("material name");
    CrossSections xs;
    xs.n_groups = g;
    xs.sigma_s1.assign(g * g, 0.0);
    bool has_d = false;
    auto read_values = [&](std::vector<double>& dst, std::size_t count,
                           const std::string& key) {
      dst.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        dst[i] = parse_number(next(key), key + " of '" + name + "'");
      }
    };
    for (;;) {
      const std::string key = next("material '" + name + "'");
      if (key == "end") break;
      if (key == "sigma_t") {
        read_values(xs.sigma_t, g, key);
      } else if (key == "sigma_s") {
        read_values(xs.sigma_s, g * g, key);
      } else if (key == "sigma_s1") {
        read_values(xs.sigma_s1, g * g, key);
      } else if (key == "nu_sigma_f") {
        read_values(xs.nu_sigma_f, g, key);
      } else if (key == "chi") {
        read_values(xs.chi, g, key);
      } else if (key == "d") {
        read_values(xs.diffusion, g, key);
        has_d = true;
      } else {
        throw IoError("cross-section library: unknown key '" + key +
                      "' in material '" + name + "'");
      }
    }
    if (xs.sigma_t.size() != g || xs.sigma_s.size() != g * g ||
        xs.nu_sigma_f.size() != g || xs.chi.size() != g) {
      throw IoError("cross-section library: material '" + name +
                    "' is missing one of sigma_t, sigma_s, nu_sigma_f, chi");
    }
    if (!has_d) {
      xs.diffusion.resize(g);
      for (std::size_t gg = 0; gg < g; ++gg) {
        if (xs.sigma_t[gg] <= 0.0) {
          throw IoError("cross-section library: material '" + name +
                        "' needs an explicit d when sigma_t is zero");
        }
        xs.diffusion[gg] = 1.0 / (3.0 * xs.sigma_t[gg]);
      }
    }
    names.push_back(name);
    materials.push_back(std::move(xs));
  }
  if (materials.empty()) {
    throw IoError("cross-section library: no material blocks");
  }
  try {
    return XsLibrary(g, std::move(names), std::move(materials));
  } catch (const InvalidInputError& e) {
    throw IoError(std::string("cross-section library: ") + e.what());
  }
}

XsLibrary XsLibrary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open cross-section library: " + path);
  return parse(in);
}

}  // namespace critkit
