#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "magstrip/bounds.hpp"
#include "magstrip/field.hpp"
#include "magstrip/gauge.hpp"
#include "magstrip/onedim.hpp"
#include "magstrip/spectral.hpp"

namespace magstrip {

using nlohmann::json;

/// Which vector potential to use for a field.
///   default       line-integral gauge of the compact part plus AB potentials
///   zero          A = 0 (only valid for B = 0)
///   line_integral alpha-anchored line-integral gauge
///   compactified  line-integral gauge compactified at cutoff b
///   minimize      best member of the compactified family (sup |A|^2)
/// An optional smooth shift h = amplitude sin(k1 x1 + phase) cos(k2 x2) is
/// added on top.
struct GaugeSelection {
  std::string kind = "default";
  double alpha = 0.0;
  std::optional<double> cutoff_b;
  double width = 0.0;
  double c_minus = 0.0;
  double c_plus = 0.0;
  struct Shift {
    double amplitude = 0.0;
    double k1 = 1.0;
    double k2 = 1.0;
    double phase = 0.3;
  };
  std::optional<Shift> shift;
};

struct BoundsSettings {
  /// Balls B(p-, R-) and B(p+, R+) for the compact criterion; chosen
  /// automatically from the field when absent.
  std::optional<Ball> minus;
  std::optional<Ball> plus;
  /// Fixed R for the AB constant; the R-scan is used when absent.
  std::optional<double> ab_radius;
  int profile_intervals = 64;
  /// Also evaluate lambda(l) + sup |A|^2 < 1 (costs a 2-D solve).
  bool presence = false;
};

struct SpectrumSettings {
  int k = 4;
  GridOptions grid;
  bool eigenvector_csv = false;
};

struct OnedimSettings {
  Onedim1DOptions options;
  /// "bounds" derives rho from the Hardy constants of the field, "zero"
  /// uses rho = 0, "explicit" takes the constants below.
  std::string rho = "bounds";
  double c_minus = 0.0;
  double c_plus = 0.0;
  double p1_minus = 0.0;
  double p1_plus = 0.0;
  int richardson_levels = 0;
};

/// Parameter grid of a sweep: window lengths times one scaled field
/// parameter of one component (amplitude or flux).
struct SweepSettings {
  std::vector<double> l;
  int component = 0;
  std::string parameter = "amplitude";
  std::vector<double> values;
};

struct RunConfig {
  StripGeometry geometry;
  MagneticField field;
  GaugeSelection gauge;
  Ladder ladder;
  double tol = 1e-8;
  std::optional<std::uint64_t> seed;
  BoundsSettings bounds;
  SpectrumSettings spectrum;
  OnedimSettings onedim;
  SweepSettings sweep;
  std::string out_dir = "out";
};

json to_json(const Point& p);
json to_json(const FieldSpec& f);
json to_json(const MagneticField& f);
json to_json(const HardyConstantSet& h);
json to_json(const BoundReport& r);
json to_json(const SpectrumResult& r);
json to_json(const ProbeResult& r);
json to_json(const LambdaWindowEstimate& e);
json to_json(const WindowInequalityReport& r);
json to_json(const Ladder& l);
json to_json(const RunConfig& c);

FieldSpec field_spec_from_json(const json& j);
MagneticField field_from_json(const json& j);

/// Parses and validates a config; unknown keys and bad values raise
/// ConfigError.
RunConfig parse_run_config(const json& j);
RunConfig load_run_config(const std::string& path);

/// "L=10,20,40;h=0.05,0.025[;growth=1.05][;hmax=0.5]"
Ladder parse_ladder_spec(const std::string& spec);

/// Hash of the canonical JSON dump of the resolved config.
std::string config_hash(const RunConfig& c);
/// Explicit seed, or one derived from the config hash.
std::uint64_t resolved_seed(const RunConfig& c);

GaugeSpec build_gauge(const GaugeSelection& sel, const MagneticField& field);

/// Automatic ball on side s = -1 / +1 of the window: centred on the first
/// compact component on that side, otherwise a flux-free placeholder.
Ball auto_ball(const MagneticField& field, double l, int side);

/// Bound report of the config's field at window length l (compact or AB).
BoundReport bound_report(const RunConfig& c, double l);

/// Hardy weight matching a bound report (zero when no constant applies).
RhoProfile rho_from_report(const BoundReport& r);

}  // namespace magstrip
