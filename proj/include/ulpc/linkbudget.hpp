#pragma once

#include <Eigen/Core>

#include <cmath>
#include <concepts>
#include <numeric>
#include <span>

namespace ulpc {

template <typename Scalar>
inline Scalar db_to_linear(Scalar db) {
  return std::pow(Scalar(10), db / Scalar(10));
}

template <typename Scalar>
inline Scalar linear_to_db(Scalar x) {
  return Scalar(10) * std::log10(x);
}

/// Receiver noise per resource block.
struct NoiseModel {
  double thermal_density_dbm_hz = -174.0;
  double noise_figure_db = 5.0;
  double rb_bandwidth_hz = 180e3;

  double n0_dbm() const {
    return thermal_density_dbm_hz + linear_to_db(rb_bandwidth_hz) + noise_figure_db;
  }
  double n0_mw() const { return db_to_linear(n0_dbm()); }
};

/// Capped-log throughput curve f(x) = min(t_max, a * log2(1 + b * x)) together
/// with the SINR window in which some MCS decodes.
struct AmcCurve {
  double t_max = 4.18;  // bits/s/Hz
  double a = 0.7035;
  double b = 0.7041;
  double sinr_floor_db = -6.5;
  double sinr_ceiling_db = 18.0;
  int staircase_levels = 29;

  /// Linear SINR at which the log branch reaches t_max.
  double saturation_sinr() const { return (std::exp2(t_max / a) - 1.0) / b; }
};

struct LinkSample {
  double snr = 0.0;
  double iot = 1.0;
  double sinr = 0.0;

  static LinkSample from(double snr, double iot) { return {snr, iot, snr / iot}; }
};

template <typename Scalar>
inline Scalar snr_of(Scalar p_dbm, Scalar pl_db, const NoiseModel& noise) {
  return db_to_linear(p_dbm - pl_db - Scalar(noise.n0_dbm()));
}

/// Cross-link counterpart of snr_of: the noise-normalised power this UE lands
/// on a cell it does not belong to.
template <typename Scalar>
inline Scalar inr_of(Scalar p_dbm, Scalar pl_cross_db, const NoiseModel& noise) {
  return snr_of(p_dbm, pl_cross_db, noise);
}

inline double iot_of(std::span<const double> interferer_rx_mw, const NoiseModel& noise) {
  const double n0 = noise.n0_mw();
  const double total = std::accumulate(interferer_rx_mw.begin(), interferer_rx_mw.end(), 0.0);
  return (n0 + total) / n0;
}

template <std::floating_point Scalar>
inline Scalar amc_smooth(Scalar sinr, const AmcCurve& curve) {
  using std::log2;
  using std::min;
  return min(Scalar(curve.t_max), Scalar(curve.a) * log2(Scalar(1) + Scalar(curve.b) * sinr));
}

/// Array form, usable inside Eigen expressions.
template <typename Derived>
inline auto amc_smooth(const Eigen::ArrayBase<Derived>& sinr, const AmcCurve& curve) {
  using Scalar = typename Derived::Scalar;
  return ((Scalar(1) + Scalar(curve.b) * sinr).log() * Scalar(curve.a / std::log(2.0)))
      .min(Scalar(curve.t_max));
}

/// Throughput actually delivered at a given SINR: zero below the decoding
/// floor, t_max at or above the ceiling, and the smooth curve (optionally
/// quantised) in between.
template <typename Scalar>
inline Scalar amc_realized(Scalar sinr, const AmcCurve& curve, bool staircase = false) {
  if (!(sinr > Scalar(0))) return Scalar(0);
  const Scalar sinr_db = linear_to_db(sinr);
  if (sinr_db < Scalar(curve.sinr_floor_db)) return Scalar(0);
  if (sinr_db >= Scalar(curve.sinr_ceiling_db)) return Scalar(curve.t_max);
  if (!staircase) return amc_smooth(sinr, curve);

  // The top level is t_max itself; the remaining levels sit on a uniform dB
  // grid starting at the floor.
  const int steps = curve.staircase_levels - 1;
  const Scalar width = Scalar(curve.sinr_ceiling_db - curve.sinr_floor_db) / Scalar(steps);
  int k = static_cast<int>(std::floor((sinr_db - Scalar(curve.sinr_floor_db)) / width));
  if (k > steps - 1) k = steps - 1;
  if (k < 0) k = 0;
  return amc_smooth(db_to_linear(Scalar(curve.sinr_floor_db) + width * Scalar(k)), curve);
}

}  // namespace ulpc
