#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "magstrip/config.hpp"

namespace magstrip {

enum class VerifyLevel { fast, full };

VerifyLevel verify_level_from_string(const std::string& s);
std::string to_string(VerifyLevel level);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  nlohmann::json data;
};

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::fast;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  /// Criteria to run (1..9); empty runs all.
  std::vector<int> only;
  /// Called after each criterion (progress output).
  std::function<void(const CriterionResult&)> on_result;
};

struct VerifyReport {
  VerifyLevel level = VerifyLevel::fast;
  std::vector<CriterionResult> criteria;

  bool all_passed() const;
};

constexpr int kCriterionCount = 9;

/// The shared configurations exercised by the absence criteria: three
/// compact fields (window set to 0.9 of their critical length) and the
/// half-flux Aharonov-Bohm point at (-2, pi/2).
struct AbsenceCase {
  std::string name;
  RunConfig config;
  BoundReport bounds;
};

std::vector<AbsenceCase> absence_cases();

/// Finite square well -v'' - (3/2) 1{|x| <= a} v on the line: lowest
/// eigenvalue from the even-state matching condition k tan(k a) = q.
double square_well_ground_state(double half_width, double depth);

CriterionResult run_criterion(int id, const VerifyOptions& opt);
VerifyReport run_verification(const VerifyOptions& opt);

nlohmann::json to_json(const CriterionResult& r);
nlohmann::json to_json(const VerifyReport& r);

}  // namespace magstrip
