#include "adr/orbital.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adr {
namespace {

double wrap_two_pi(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

void require_radius(double r, const Constants& k, const char* what) {
  if (!std::isfinite(r) || r <= k.earth_radius) {
    throw std::domain_error(std::string(what) + " must exceed the central body radius, got " +
                            std::to_string(r));
  }
}

// Radii closer than this are the same circular orbit for sequencing.
bool same_radius(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(a, b); }

}  // namespace

void Constants::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive");
  if (!(earth_radius > 0.0) || !std::isfinite(earth_radius))
    throw std::invalid_argument("earth_radius must be positive");
}

double OrbitalElements::argument_of_latitude() const {
  return wrap_two_pi(arg_periapsis + true_anomaly);
}

void OrbitalElements::validate(const Constants& k) const {
  require_radius(semi_major_axis, k, "semi_major_axis");
  if (!(eccentricity >= 0.0 && eccentricity < 1.0))
    throw std::domain_error("eccentricity must lie in [0, 1)");
  if (!(inclination >= 0.0 && inclination <= kPi))
    throw std::domain_error("inclination must lie in [0, pi]");
  for (double angle : {raan, arg_periapsis, true_anomaly}) {
    if (!(angle >= 0.0 && angle < kTwoPi)) throw std::domain_error("angles must lie in [0, 2pi)");
  }
}

std::string_view to_string(BurnLabel label) {
  switch (label) {
    case BurnLabel::RaiseToCoelliptic: return "RaiseToCoelliptic";
    case BurnLabel::PhasingWait: return "PhasingWait";
    case BurnLabel::Circularize: return "Circularize";
    case BurnLabel::FinalHohmann: return "FinalHohmann";
    case BurnLabel::PlaneChange: return "PlaneChange";
    case BurnLabel::SafetyEllipse: return "SafetyEllipse";
    case BurnLabel::StationKeep: return "StationKeep";
  }
  return "Unknown";
}

void TransferPlan::add(Burn burn) {
  total_delta_v += burn.delta_v;
  total_duration += burn.leg_duration;
  burns.push_back(burn);
}

void TransferConfig::validate() const {
  if (!(first_leg_fraction > 0.0 && first_leg_fraction < 1.0))
    throw std::invalid_argument("first_leg_fraction must lie in (0, 1)");
  if (!(terminal_offset > 0.0)) throw std::invalid_argument("terminal_offset must be positive");
  if (!(safety_ellipse_dv >= 0.0)) throw std::invalid_argument("safety_ellipse_dv must be >= 0");
  if (!(safety_ellipse_periods >= 0.0) || !(station_keep_periods >= 0.0))
    throw std::invalid_argument("leg period counts must be >= 0");
  if (!(max_phasing_periods > 0.0))
    throw std::invalid_argument("max_phasing_periods must be positive");
}

double circular_velocity(double radius, const Constants& k) {
  require_radius(radius, k, "radius");
  return std::sqrt(k.mu / radius);
}

double orbital_period(double semi_major_axis, const Constants& k) {
  require_radius(semi_major_axis, k, "semi_major_axis");
  return kTwoPi * std::sqrt(semi_major_axis * semi_major_axis * semi_major_axis / k.mu);
}

HohmannResult hohmann(double r1, double r2, const Constants& k) {
  require_radius(r1, k, "r1");
  require_radius(r2, k, "r2");
  const double sum = r1 + r2;
  const double half = 0.5 * sum;
  HohmannResult out;
  // sqrt(2 r2 / sum) - 1 rewritten as ((r2 - r1) / sum) / (sqrt(2 r2 / sum) + 1); same for dv2.
  const double diff = std::abs(r2 - r1) / sum;
  out.dv1 = std::sqrt(k.mu / r1) * diff / (std::sqrt(2.0 * r2 / sum) + 1.0);
  out.dv2 = std::sqrt(k.mu / r2) * diff / (std::sqrt(2.0 * r1 / sum) + 1.0);
  out.transfer_time = kPi * std::sqrt(half * half * half / k.mu);
  return out;
}

double plane_change_dv(double speed, double angle) {
  if (!(speed >= 0.0)) throw std::domain_error("speed must be non-negative");
  if (!(angle >= 0.0 && angle <= kPi)) throw std::domain_error("plane change angle must lie in [0, pi]");
  return 2.0 * speed * std::sin(0.5 * angle);
}

double plane_angle(const OrbitalElements& a, const OrbitalElements& b) {
  // Haversine form of the spherical law of cosines; exact zero for equal planes.
  const auto hav = [](double x) {
    const double s = std::sin(0.5 * x);
    return s * s;
  };
  const double h = hav(a.inclination - b.inclination) +
                   std::sin(a.inclination) * std::sin(b.inclination) * hav(a.raan - b.raan);
  return 2.0 * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

double rendezvous_lead_angle(double from_radius, double target_radius) {
  const double ratio = (from_radius + target_radius) / (2.0 * target_radius);
  return kPi * (1.0 - std::sqrt(ratio * ratio * ratio));
}

double synodic_period(double r1, double r2, const Constants& k) {
  require_radius(r1, k, "r1");
  require_radius(r2, k, "r2");
  const double n1 = std::sqrt(k.mu / (r1 * r1 * r1));
  const double n2 = std::sqrt(k.mu / (r2 * r2 * r2));
  const double dn = std::abs(n1 - n2);
  if (dn <= 1e-14 * std::max(n1, n2)) {
    throw DegenerateGeometryError("relative mean motion is zero; synodic period unbounded");
  }
  return kTwoPi / dn;
}

double phasing_wait(const OrbitalElements& chaser, const OrbitalElements& target,
                    double coelliptic_radius, double max_phasing_periods, const Constants& k) {
  const double r_target = target.semi_major_axis;
  require_radius(coelliptic_radius, k, "coelliptic_radius");
  require_radius(r_target, k, "target semi_major_axis");
  if (!(max_phasing_periods > 0.0)) throw std::domain_error("max_phasing_periods must be positive");

  const double n_co = std::sqrt(k.mu / (coelliptic_radius * coelliptic_radius * coelliptic_radius));
  const double n_tg = std::sqrt(k.mu / (r_target * r_target * r_target));
  const double dn = n_co - n_tg;
  if (std::abs(dn) <= 1e-14 * std::max(n_co, n_tg)) {
    throw DegenerateGeometryError("co-elliptic and target radii share a mean motion");
  }

  // Target lead over the chaser shrinks at dn when the chaser is below
  // (faster) and grows at |dn| when above.
  const double lead_now = wrap_two_pi(target.argument_of_latitude() - chaser.argument_of_latitude());
  const double lead_needed = rendezvous_lead_angle(coelliptic_radius, r_target);
  double gap = dn > 0.0 ? wrap_two_pi(lead_now - lead_needed) : wrap_two_pi(lead_needed - lead_now);
  if (kTwoPi - gap < 1e-9) gap = 0.0;

  const double wait = gap / std::abs(dn);
  return std::min(wait, max_phasing_periods * orbital_period(r_target, k));
}

TransferPlan coelliptic_sequence(const OrbitalElements& chaser, const OrbitalElements& target,
                                 const TransferConfig& cfg, const Constants& k) {
  cfg.validate();
  const double r_chaser = chaser.semi_major_axis;
  const double r_target = target.semi_major_axis;
  require_radius(r_chaser, k, "chaser semi_major_axis");
  require_radius(r_target, k, "target semi_major_axis");

  TransferPlan plan;

  const double angle = plane_angle(chaser, target);
  if (angle > 1e-6) {
    plan.add({plane_change_dv(circular_velocity(r_chaser, k), angle), 0.0, BurnLabel::PlaneChange});
  }

  if (!same_radius(r_chaser, r_target)) {
    const double r_coelliptic = r_chaser + cfg.first_leg_fraction * (r_target - r_chaser);
    const auto first = hohmann(r_chaser, r_coelliptic, k);
    plan.add({first.dv1, first.transfer_time, BurnLabel::RaiseToCoelliptic});
    plan.add({first.dv2, 0.0, BurnLabel::Circularize});

    const double wait = phasing_wait(chaser, target, r_coelliptic, cfg.max_phasing_periods, k);
    plan.add({0.0, wait, BurnLabel::PhasingWait});

    // Terminal point sits on the approach side of the target.
    const double r_terminal = r_target > r_chaser ? r_target - cfg.terminal_offset
                                                  : r_target + cfg.terminal_offset;
    require_radius(r_terminal, k, "terminal radius");
    const auto final_leg = hohmann(r_coelliptic, r_terminal, k);
    plan.add({final_leg.dv1, final_leg.transfer_time, BurnLabel::FinalHohmann});
    plan.add({final_leg.dv2, 0.0, BurnLabel::Circularize});
  }

  const double target_period = orbital_period(r_target, k);
  plan.add({cfg.safety_ellipse_dv, cfg.safety_ellipse_periods * target_period,
            BurnLabel::SafetyEllipse});
  plan.add({0.0, cfg.station_keep_periods * target_period, BurnLabel::StationKeep});
  return plan;
}

}  // namespace adr
