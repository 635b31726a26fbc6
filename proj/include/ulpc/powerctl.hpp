#pragma once

#include "ulpc/linkbudget.hpp"

#include <Eigen/Core>

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ulpc {

struct MaxPowerParams {
  double p_max_dbm = 23.0;
};

struct FpcParams {
  double p0_dbm = -87.0;
  double kappa = 0.8;
  double p_max_dbm = 23.0;
};

struct RlpcParams {
  double p0_dbm = -102.0;
  double phi = 0.8;
  double p_max_dbm = 23.0;
};

/// Checks-and-balances controller parameters. All powers in dBm, ratios in dB.
struct CnbParams {
  double zeta = 1.3;
  double iot_s_db = 9.0;   // assumed interference at the serving cell
  double snr_i_db = 24.0;  // assumed SNR of a victim UE in a neighbour cell
  double iot_i_db = 5.0;   // assumed IoT of that victim, excluding this UE
  double p_max_dbm = 23.0;
  double pl_th_db = 23.0 - NoiseModel{}.n0_dbm();
  double bisect_lo_dbm = -10.0;
  double tol_db = 0.1;
  double fd_step_db = 0.01;
  double plateau_eps = 1e-9;  // per dB

  /// Neighbour threshold at which a full-power UE lands exactly at the noise floor.
  static double threshold_for(double p_max_dbm, const NoiseModel& noise) {
    return p_max_dbm - noise.n0_dbm();
  }
  void validate() const;
};

enum class Scheme { MaxPower, Fpc, Rlpc, Cnb };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

struct ControllerSpec {
  std::variant<MaxPowerParams, FpcParams, RlpcParams, CnbParams> params;

  Scheme kind() const { return static_cast<Scheme>(params.index()); }
  double p_max_dbm() const;
};

double fpc_power(double pl_db, const FpcParams& p);
double rlpc_power(double pl_db, double pl_min_db, const RlpcParams& p);
double max_power(double p_max_dbm);

/// Cross losses of the cells this UE would notably interfere with, ascending.
/// Only the UE's own row of the path-loss map is read.
std::vector<double> cnb_neighbors(const Eigen::Ref<const Eigen::RowVectorXd>& loss_row,
                                  int serving_cell, const CnbParams& params);

double cnb_rs(double p_dbm, double pl_db, const CnbParams& params, const AmcCurve& curve,
              const NoiseModel& noise);
double cnb_ri(double p_dbm, std::span<const double> cross_losses, const CnbParams& params,
              const AmcCurve& curve, const NoiseModel& noise);
double cnb_objective(double p_dbm, double pl_db, std::span<const double> cross_losses,
                     const CnbParams& params, const AmcCurve& curve, const NoiseModel& noise);

struct CnbSolution {
  double p_dbm = 0.0;
  int iterations = 0;
};

/// Maximises R_S + zeta * R_I over [bisect_lo, p_max] by bisection on the sign
/// of a central-difference derivative.
///
/// Above the power at which R_S saturates the objective can only fall, so the
/// bracket is closed there. The bisection limit is compared against both
/// bracket ends and the best value wins, ties to the lower power.
CnbSolution cnb_solve(double pl_db, std::span<const double> cross_losses, const CnbParams& params,
                      const AmcCurve& curve, const NoiseModel& noise);

/// Open-loop power for one UE from its path-loss row alone.
double controller_power(const ControllerSpec& spec,
                        const Eigen::Ref<const Eigen::RowVectorXd>& loss_row, int serving_cell,
                        const AmcCurve& curve, const NoiseModel& noise);

}  // namespace ulpc
