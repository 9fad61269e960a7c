#pragma once

#include <functional>
#include <string>
#include <vector>

namespace sphereppw::acceptance {

// Pinned tolerances.
namespace tol {
inline constexpr double hemisphere = 1e-8;         // relative, criterion 1
inline constexpr double euclid_ratio = 5e-3;       // absolute on lambda2/lambda1
inline constexpr double euclid_ratio_value = 2.5387;
inline constexpr double bessel = 1e-3;             // relative on theta^2 lambda1
inline constexpr double monotone_slack = 1e-9;
inline constexpr double equality = 1e-8;
inline constexpr double finite_difference = 1e-5;  // relative to max(1, |d|)
inline constexpr double internal = 1e-8;
inline constexpr double riccati = 1e-6;
inline constexpr double boundary_data = 1e-6;    // q(0), q(theta1), q'(theta1)
inline constexpr double boundary_fit = 1e-4;     // relative on the fitted q''(0)
inline constexpr double closed_form = 1e-8;
inline constexpr double exact = 1e-13;             // rearrangement identities
inline constexpr double cap_defect = 1e-10;
inline constexpr double chiti_factor = 5.0;        // inequality violation vs mesh-error estimate
inline constexpr double mesh_factor = 3.0;         // eigenvalue comparisons vs Richardson error
inline constexpr double orthogonality = 1e-8;
}  // namespace tol

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  bool pass() const;
  const Check* first_failure() const;
};

struct Options {
  double h = 0.02;       // mesh size for criteria 9 and 10
  unsigned threads = 0;  // 0: SPHEREPPW_THREADS or hardware default
};

inline constexpr int criterion_count = 10;

std::string criterion_title(int id);
CriterionResult run_criterion(int id, const Options& opts = {});

/// Runs criteria 1..10 in order; with fail_fast stops after the first failing one.
std::vector<CriterionResult> run_all(const Options& opts = {}, bool fail_fast = false,
                                     const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace sphereppw::acceptance
