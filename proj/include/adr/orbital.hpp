#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace adr {

// Raised when a transfer geometry has no finite answer, e.g. two orbits
// with the same mean motion asked to drift into phase.
class DegenerateGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Gravitational parameter and reference radius of the central body.
struct Constants {
  double mu = 3.986004418e14;       // m^3/s^2
  double earth_radius = 6.378137e6; // m

  void validate() const;
};

/// Keplerian elements. Angles in radians, lengths in metres.
struct OrbitalElements {
  double semi_major_axis = 0.0;
  double eccentricity = 0.0;
  double inclination = 0.0;
  double raan = 0.0;
  double arg_periapsis = 0.0;
  double true_anomaly = 0.0;

  /// Angle from the ascending node, omega + nu wrapped to [0, 2pi).
  double argument_of_latitude() const;

  void validate(const Constants& k = {}) const;

  friend bool operator==(const OrbitalElements&, const OrbitalElements&) = default;
};

enum class BurnLabel {
  RaiseToCoelliptic,
  PhasingWait,
  Circularize,
  FinalHohmann,
  PlaneChange,
  SafetyEllipse,
  StationKeep,
};

std::string_view to_string(BurnLabel label);

struct Burn {
  double delta_v = 0.0;      // m/s
  double leg_duration = 0.0; // s, time from this burn to the next event
  BurnLabel label = BurnLabel::StationKeep;
};

struct TransferPlan {
  std::vector<Burn> burns;
  double total_delta_v = 0.0;
  double total_duration = 0.0;
  std::optional<int> target_index;

  /// Appends a burn and keeps the totals in step.
  void add(Burn burn);
};

struct TransferConfig {
  double first_leg_fraction = 0.75;
  double terminal_offset = 1000.0;     // m
  double safety_ellipse_dv = 5.0;      // m/s
  double safety_ellipse_periods = 1.0; // target orbital periods
  double station_keep_periods = 1.0;   // target orbital periods
  double max_phasing_periods = 0.25;   // target orbital periods

  void validate() const;
};

struct HohmannResult {
  double dv1 = 0.0;
  double dv2 = 0.0;
  double transfer_time = 0.0;

  double total() const { return dv1 + dv2; }
};

double circular_velocity(double radius, const Constants& k = {});
double orbital_period(double semi_major_axis, const Constants& k = {});
HohmannResult hohmann(double r1, double r2, const Constants& k = {});
double plane_change_dv(double speed, double angle);

/// Angle between the two orbit normals, from (inclination, raan) only.
double plane_angle(const OrbitalElements& a, const OrbitalElements& b);

/// Phase angle the target must lead the chaser by when the final Hohmann
/// leg from `from_radius` to `target_radius` starts.
double rendezvous_lead_angle(double from_radius, double target_radius);

/// Time spent on the co-elliptic orbit before the final leg can start.
///
/// Both orbits are treated as circular. The phase of each body is its
/// argument of latitude at the moment the call is made; the chaser is
/// assumed to sit on the co-elliptic orbit at that phase. The result is the
/// smallest t >= 0 at which the target's lead over the chaser equals
/// rendezvous_lead_angle(coelliptic_radius, target radius), clamped to
/// max_phasing_periods orbital periods of the target. The unclamped value
/// is always below one synodic period. Pass infinity to disable the clamp.
double phasing_wait(const OrbitalElements& chaser, const OrbitalElements& target,
                    double coelliptic_radius, double max_phasing_periods = 0.25,
                    const Constants& k = {});

/// Synodic period between circular orbits of the two radii.
double synodic_period(double r1, double r2, const Constants& k = {});

/// Full rendezvous sequence from the chaser's orbit to the target's:
/// plane change, Hohmann to the co-elliptic orbit, phasing, final Hohmann to
/// the terminal offset, safety ellipse, station keeping.
TransferPlan coelliptic_sequence(const OrbitalElements& chaser, const OrbitalElements& target,
                                 const TransferConfig& cfg = {}, const Constants& k = {});

}  // namespace adr
