#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "critkit/cross_sections.hpp"
#include "critkit/errors.hpp"
#include "critkit/slab.hpp"

namespace critkit {
namespace {

constexpr const char* kTwoGroupLibrary = R"(# two materials, two groups
groups 2
material fuel
  sigma_t    1.0 1.5
  sigma_s    0.45 0.25 0.02 1.1
  nu_sigma_f 0.35 0.9
  chi        1.0 0.0
end
material water
  sigma_t    1.2 1.8
  sigma_s    0.9 0.25 0.0 1.7
  nu_sigma_f 0.0 0.0
  chi        0.0 0.0
  d          0.3 0.2
end
)";

XsLibrary parse_library(const std::string& text) {
  std::istringstream in(text);
  return XsLibrary::parse(in);
}

TEST(XsLibraryTest, ParsesMaterialBlocks) {
  const XsLibrary lib = parse_library(kTwoGroupLibrary);
  EXPECT_EQ(lib.n_groups(), 2u);
  EXPECT_EQ(lib.n_materials(), 2u);
  EXPECT_EQ(lib.find("fuel"), 0);
  EXPECT_EQ(lib.find("water"), 1);
  EXPECT_EQ(lib.find("absent"), -1);
  EXPECT_EQ(lib.name(1), "water");

  const CrossSections& fuel = lib.material(0);
  EXPECT_DOUBLE_EQ(fuel.sigma_t[1], 1.5);
  EXPECT_DOUBLE_EQ(fuel.scattering(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(fuel.scattering(1, 0), 0.02);
  EXPECT_DOUBLE_EQ(fuel.removal(0), 1.0 - 0.45);
  EXPECT_TRUE(fuel.fissile());
  EXPECT_FALSE(lib.material(1).fissile());
  // Default diffusion coefficient is 1 / (3 sigma_t).
  EXPECT_DOUBLE_EQ(fuel.diffusion[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(fuel.diffusion[1], 1.0 / 4.5);
  // Explicit diffusion coefficients are honored.
  EXPECT_DOUBLE_EQ(lib.material(1).diffusion[0], 0.3);
  // Omitted first scattering moment defaults to zero.
  EXPECT_DOUBLE_EQ(fuel.scattering_p1(0, 0), 0.0);
}

// A complete one-group block with a substituted line, for error fixtures.
std::string one_group_block(const std::string& sigma_t_line,
                            const std::string& sigma_s_line) {
  return "groups 1\nmaterial m\n" + sigma_t_line + "\n" + sigma_s_line +
         "\n nu_sigma_f 0.0\n chi 0.0\nend\n";
}

TEST(XsLibraryTest, RejectsMalformedInput) {
  // Unknown field.
  EXPECT_THROW(parse_library("groups 1\nmaterial m\n bogus 1.0\nend\n"),
               IoError);
  // Wrong value count: sigma_t wants two numbers, gets one then 'sigma_s'.
  EXPECT_THROW(
      parse_library("groups 2\nmaterial m\n sigma_t 1.0\n sigma_s 0 0 0 0\n"
                    " nu_sigma_f 0 0\n chi 0 0\nend\n"),
      IoError);
  // Missing required field.
  EXPECT_THROW(parse_library("groups 1\nmaterial m\n sigma_t 1.0\nend\n"),
               IoError);
  // Duplicate material name.
  const std::string block =
      "material m\n sigma_t 1.0\n sigma_s 0.5\n nu_sigma_f 0.0\n"
      " chi 0.0\nend\n";
  EXPECT_THROW(parse_library("groups 1\n" + block + block), IoError);
  // Missing end.
  EXPECT_THROW(parse_library("groups 1\nmaterial m\n sigma_t 1.0\n"),
               IoError);
  // groups must come first.
  EXPECT_THROW(parse_library("material m\n sigma_t 1.0\nend\ngroups 1\n"),
               IoError);
}

TEST(XsLibraryTest, ValidatesPhysicalRanges) {
  // Scattering row sum above sigma_t.
  EXPECT_THROW(
      parse_library(one_group_block(" sigma_t 1.0", " sigma_s 1.5")),
      IoError);
  // Negative cross section.
  EXPECT_THROW(
      parse_library(one_group_block(" sigma_t -1.0", " sigma_s 0.0")),
      IoError);
  // Fissile material whose spectrum does not sum to one.
  EXPECT_THROW(
      parse_library("groups 2\nmaterial m\n sigma_t 1.0 1.0\n"
                    " sigma_s 0 0 0 0\n nu_sigma_f 0.5 0.5\n"
                    " chi 0.4 0.4\nend\n"),
      IoError);
  // The validation entry point itself reports the physics violation.
  CrossSections xs;
  xs.n_groups = 1;
  xs.sigma_t = {1.0};
  xs.sigma_s = {1.5};
  xs.sigma_s1 = {0.0};
  xs.nu_sigma_f = {0.0};
  xs.chi = {0.0};
  xs.diffusion = {1.0};
  EXPECT_THROW(xs.validate("m"), InvalidInputError);
}

TEST(XsLibraryTest, MissingFileThrows) {
  EXPECT_THROW(XsLibrary::load("/nonexistent/path.xs"), IoError);
}

TEST(SlabMeshTest, UniformConstructionAndValidation) {
  const SlabMesh mesh = SlabMesh::uniform(4, 10.0, 0,
                                          BoundaryCondition::vacuum,
                                          BoundaryCondition::reflective);
  EXPECT_EQ(mesh.n_cells(), 4u);
  for (double h : mesh.widths) EXPECT_DOUBLE_EQ(h, 2.5);
  EXPECT_NO_THROW(mesh.validate(1));
  EXPECT_THROW(mesh.validate(0), InvalidInputError);  // material id out of range

  SlabMesh bad = mesh;
  bad.widths[2] = 0.0;
  EXPECT_THROW(bad.validate(1), InvalidInputError);
}

TEST(AngularQuadratureTest, TwoPointRule) {
  const AngularQuadrature quad = AngularQuadrature::gauss_legendre(2);
  ASSERT_EQ(quad.size(), 2u);
  // Two-point Gauss-Legendre abscissas +-1/sqrt(3) with unit weights.
  EXPECT_NEAR(quad.mu[0], -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(quad.mu[1], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(quad.w[0], 1.0, 1e-15);
  EXPECT_NEAR(quad.w[1], 1.0, 1e-15);
}

TEST(AngularQuadratureTest, EightPointRuleMatchesReferenceValues) {
  const AngularQuadrature quad = AngularQuadrature::gauss_legendre(8);
  ASSERT_EQ(quad.size(), 8u);
  // Standard 8-point Gauss-Legendre nodes (positive half) and weights.
  const double nodes[4] = {0.1834346424956498, 0.5255324099163290,
                           0.7966664774136267, 0.9602898564975363};
  const double weights[4] = {0.3626837833783620, 0.3137066458778873,
                             0.2223810344533745, 0.1012285362903763};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(quad.mu[4 + i], nodes[i], 1e-13);
    EXPECT_NEAR(quad.w[4 + i], weights[i], 1e-13);
  }
}

TEST(AngularQuadratureTest, StructuralInvariants) {
  for (std::size_t n : {2u, 4u, 8u, 16u, 32u}) {
    const AngularQuadrature quad = AngularQuadrature::gauss_legendre(n);
    ASSERT_EQ(quad.size(), n);
    const double weight_sum =
        std::accumulate(quad.w.begin(), quad.w.end(), 0.0);
    EXPECT_NEAR(weight_sum, 2.0, 1e-13);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NE(quad.mu[i], 0.0);
      if (i > 0) EXPECT_LT(quad.mu[i - 1], quad.mu[i]);
      const std::size_t m = quad.mirror(i);
      EXPECT_NEAR(quad.mu[i], -quad.mu[m], 1e-14);
      EXPECT_NEAR(quad.w[i], quad.w[m], 1e-14);
    }
    // The rule integrates mu^2 exactly: integral over (-1, 1) is 2/3.
    double second_moment = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      second_moment += quad.w[i] * quad.mu[i] * quad.mu[i];
    }
    EXPECT_NEAR(second_moment, 2.0 / 3.0, 1e-13);
  }
}

TEST(AngularQuadratureTest, RejectsOddOrZeroCounts) {
  EXPECT_THROW(AngularQuadrature::gauss_legendre(0), InvalidInputError);
  EXPECT_THROW(AngularQuadrature::gauss_legendre(3), InvalidInputError);
}

}  // namespace
}  // namespace critkit
