#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pcopula/pair_copula.hpp"
#include "pcopula/partial.hpp"

namespace pcop {

/// C-vine on (X, Y, Z) with Z as root: C_XZ, C_YZ and C_{X,Y|Z=z}.
struct VineModel {
  PairCopulaSpec c_xz;
  PairCopulaSpec c_yz;
  ConditionalFamily cond;
};

/// Draws in uniform-margin space. w_x and u_y are the sampler's internal
/// uniforms, kept so pseudo-observations can be checked against them.
struct SampleTriples {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
  std::vector<double> w_x;
  std::vector<double> u_y;
  std::uint64_t seed = 0;
  std::size_t size() const { return z.size(); }
};

/// Per row: z = w_z, u_x = w_x, u_y = h1_inv(C_{XY|z}; w_y, u_x),
/// x = h2_inv(C_XZ; u_x, z), y = h2_inv(C_YZ; u_y, z). Uniforms are clamped
/// into [kProbFloor, 1 - kProbFloor]. Deterministic in (model, n, seed)
/// regardless of thread count.
SampleTriples sample_cvine(const VineModel& model, std::size_t n, std::uint64_t seed);

namespace serial {
SampleTriples sample_cvine(const VineModel& model, std::size_t n, std::uint64_t seed);
}
namespace parallel {
SampleTriples sample_cvine(const VineModel& model, std::size_t n, std::uint64_t seed);
}

/// -1, 0 or +1: direction of dependence of a pair copula.
int dependence_sign(const PairCopulaSpec& spec);
/// Sign of the conditional family (0 for independence, +/-1 when the sign
/// is the same on the whole z-grid, 2 when it changes).
int dependence_sign(const ConditionalFamily& cond);

struct ScenarioConfig {
  int scenario = 0;        // 1..11
  char sub_case = '\0';    // 'a' | 'b' | 'c' for scenario 11
  Family family = Family::independence;
  VineModel model;
  std::array<int, 3> signs{};  // (xz, yz, xy given z): 0 = independence, 2 = varies
  std::size_t n = 5000;
  std::uint64_t seed = 42;

  /// "7_gaussian", "11c_gaussian".
  std::string id() const;
  /// "gaussian(0.6)|gaussian(0.6)|gaussian[const:0.6]".
  std::string params() const;
  /// True when the model's dependence signs match the triplet.
  bool signs_match() const;
};

/// Scenarios 1-10 for Frank, Gumbel, Clayton and Gaussian, then 11a-11c.
/// Parameter magnitudes are defaults chosen for visibility at n = 5000.
std::vector<ScenarioConfig> scenario_table(std::size_t n = 5000, std::uint64_t seed = 42);

/// Dependence-sign triplet for scenarios 1-10.
std::array<int, 3> scenario_signs(int scenario);

/// Pitfall data in natural units: Z ~ N(0,1), X = Z^2 + sigma e1,
/// Y = Z^2 + sigma e2; u_x = Phi(e1), u_y = Phi(e2) are the exact
/// conditional-CDF transforms.
struct PitfallSample {
  double sigma = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
  std::vector<double> u_x;
  std::vector<double> u_y;
};

PitfallSample sample_pitfall(double sigma, std::size_t n, std::uint64_t seed);

}  // namespace pcop
