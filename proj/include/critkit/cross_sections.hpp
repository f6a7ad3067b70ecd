#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace critkit {

/// Multigroup cross sections for one material. Scattering matrices are
/// row-major with entry (g_from, g_to). All data is per unit length (1/cm).
struct CrossSections {
  std::size_t n_groups = 0;
  std::vector<double> sigma_t;     // total, size G
  std::vector<double> sigma_s;     // isotropic scattering, size G*G
  std::vector<double> sigma_s1;    // first scattering moment, size G*G
  std::vector<double> nu_sigma_f;  // fission production, size G
  std::vector<double> chi;         // fission spectrum, size G
  std::vector<double> diffusion;   // diffusion coefficient, size G

  double scattering(std::size_t g_from, std::size_t g_to) const {
    return sigma_s[g_from * n_groups + g_to];
  }
  double scattering_p1(std::size_t g_from, std::size_t g_to) const {
    return sigma_s1[g_from * n_groups + g_to];
  }
  /// Removal cross section: total minus within-group scattering.
  double removal(std::size_t g) const {
    return sigma_t[g] - scattering(g, g);
  }
  bool fissile() const;

  /// Enforces the construction contract: matching sizes, non-negative data,
  /// scattering row sums bounded by sigma_t, chi summing to 1 when the
  /// material is fissile, strictly positive diffusion coefficients.
  void validate(const std::string& label) const;
};

/// Set of named materials read from a cross-section library file.
class XsLibrary {
 public:
  XsLibrary() = default;
  XsLibrary(std::size_t n_groups, std::vector<std::string> names,
            std::vector<CrossSections> materials);

  std::size_t n_groups() const { return n_groups_; }
  std::size_t n_materials() const { return materials_.size(); }
  const CrossSections& material(std::size_t id) const;
  const std::string& name(std::size_t id) const { return names_[id]; }
  /// Id of the named material, or -1 when absent.
  std::int64_t find(const std::string& name) const;

  /// Parses the material-block text format:
  ///   groups G
  ///   material NAME
  ///     sigma_t     <G values>
  ///     sigma_s     <G*G values, row-major (from, to)>
  ///     nu_sigma_f  <G values>
  ///     chi         <G values>
  ///     d           <G values>      (optional; default 1/(3 sigma_t))
  ///     sigma_s1    <G*G values>    (optional; default 0)
  ///   end
  /// '#' starts a comment. Material ids follow file order.
  static XsLibrary parse(std::istream& in);
  static XsLibrary load(const std::string& path);

 private:
  std::size_t n_groups_ = 0;
  std::vector<std::string> names_;
  std::vector<CrossSections> materials_;
};

}  // namespace critkit
