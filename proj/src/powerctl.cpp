#include "ulpc/powerctl.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ulpc {

void CnbParams::validate() const {
  if (!(zeta > 0.0)) throw std::invalid_argument("zeta must be positive");
  if (!(tol_db > 0.0)) throw std::invalid_argument("bisection tolerance must be positive");
  if (!(bisect_lo_dbm < p_max_dbm)) throw std::invalid_argument("bisection lower bound must be below p_max");
  if (!(fd_step_db > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::MaxPower: return "maxpower";
    case Scheme::Fpc: return "fpc";
    case Scheme::Rlpc: return "rlpc";
    case Scheme::Cnb: return "cnb";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "maxpower") return Scheme::MaxPower;
  if (name == "fpc") return Scheme::Fpc;
  if (name == "rlpc") return Scheme::Rlpc;
  if (name == "cnb") return Scheme::Cnb;
  throw std::invalid_argument("unknown power control scheme '" + name + "'");
}

double ControllerSpec::p_max_dbm() const {
  return std::visit([](const auto& p) { return p.p_max_dbm; }, params);
}

double fpc_power(double pl_db, const FpcParams& p) {
  return std::min(p.p_max_dbm, p.p0_dbm + p.kappa * pl_db);
}

double rlpc_power(double pl_db, double pl_min_db, const RlpcParams& p) {
  return std::min(p.p_max_dbm, p.p0_dbm + p.phi * pl_db + (1.0 - p.phi) * pl_min_db);
}

double max_power(double p_max_dbm) { return p_max_dbm; }

std::vector<double> cnb_neighbors(const Eigen::Ref<const Eigen::RowVectorXd>& loss_row,
                                  int serving_cell, const CnbParams& params) {
  std::vector<double> out;
  for (Eigen::Index c = 0; c < loss_row.size(); ++c) {
    if (c == serving_cell) continue;
    if (loss_row[c] < params.pl_th_db) out.push_back(loss_row[c]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double cnb_rs(double p_dbm, double pl_db, const CnbParams& params, const AmcCurve& curve,
              const NoiseModel& noise) {
  return amc_smooth(snr_of(p_dbm, pl_db + params.iot_s_db, noise), curve);
}

double cnb_ri(double p_dbm, std::span<const double> cross_losses, const CnbParams& params,
              const AmcCurve& curve, const NoiseModel& noise) {
  const double snr_i = db_to_linear(params.snr_i_db);
  const double iot_i = db_to_linear(params.iot_i_db);
  double sum = 0.0;
  for (double pl_cross : cross_losses) {
    sum += amc_smooth(snr_i / (iot_i + inr_of(p_dbm, pl_cross, noise)), curve);
  }
  return sum;
}

double cnb_objective(double p_dbm, double pl_db, std::span<const double> cross_losses,
                     const CnbParams& params, const AmcCurve& curve, const NoiseModel& noise) {
  return cnb_rs(p_dbm, pl_db, params, curve, noise) +
         params.zeta * cnb_ri(p_dbm, cross_losses, params, curve, noise);
}

CnbSolution cnb_solve(double pl_db, std::span<const double> cross_losses, const CnbParams& params,
                      const AmcCurve& curve, const NoiseModel& noise) {
  params.validate();
  auto objective = [&](double p) {
    return cnb_objective(p, pl_db, cross_losses, params, curve, noise);
  };

  const double lo = params.bisect_lo_dbm;
  const double p_saturate =
      pl_db + noise.n0_dbm() + params.iot_s_db + linear_to_db(curve.saturation_sinr());
  const double hi = std::min(params.p_max_dbm, p_saturate);
  if (hi <= lo) return {lo, 0};
  // Without neighbours the objective rises strictly up to saturation.
  if (cross_losses.empty()) return {hi, 0};

  double l = lo;
  double r = hi;
  double m = hi;
  int iterations = 0;
  const double h = params.fd_step_db;
  while (r - l >= params.tol_db) {
    m = 0.5 * (l + r);
    ++iterations;
    const double slope = (objective(m + h) - objective(m - h)) / (2.0 * h);
    if (slope > params.plateau_eps) {
      l = m;
    } else {
      r = m;
    }
  }

  const std::array<double, 3> candidates{lo, m, hi};
  double best_p = lo;
  double best_value = -std::numeric_limits<double>::infinity();
  for (double p : candidates) {
    const double v = objective(p);
    if (v > best_value || (v == best_value && p < best_p)) {
      best_value = v;
      best_p = p;
    }
  }
  return {best_p, iterations};
}

double controller_power(const ControllerSpec& spec,
                        const Eigen::Ref<const Eigen::RowVectorXd>& loss_row, int serving_cell,
                        const AmcCurve& curve, const NoiseModel& noise) {
  const double pl = loss_row[serving_cell];
  switch (spec.kind()) {
    case Scheme::MaxPower:
      return max_power(std::get<MaxPowerParams>(spec.params).p_max_dbm);
    case Scheme::Fpc:
      return fpc_power(pl, std::get<FpcParams>(spec.params));
    case Scheme::Rlpc: {
      double pl_min = std::numeric_limits<double>::infinity();
      for (Eigen::Index c = 0; c < loss_row.size(); ++c)
        if (c != serving_cell) pl_min = std::min(pl_min, loss_row[c]);
      // A lone cell has no neighbour to protect.
      if (!std::isfinite(pl_min)) pl_min = pl;
      return rlpc_power(pl, pl_min, std::get<RlpcParams>(spec.params));
    }
    case Scheme::Cnb: {
      const auto& p = std::get<CnbParams>(spec.params);
      const std::vector<double> cross = cnb_neighbors(loss_row, serving_cell, p);
      return cnb_solve(pl, cross, p, curve, noise).p_dbm;
    }
  }
  throw std::logic_error("unhandled power control scheme");
}

}  // namespace ulpc
