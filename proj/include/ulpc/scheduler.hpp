#pragma once

#include <span>
#include <vector>

namespace ulpc {

struct RbGrid {
  int total_rbs = 50;
  int control_rbs = 2;

  int data_rbs() const { return total_rbs - control_rbs; }
  int first_data_rb() const { return control_rbs; }
};

struct PfParams {
  double alpha = 1.0;
  double beta = 1.0;
  double ewma = 0.01;
};

/// Long-term average rate per UE. A UE that has never been scheduled has no
/// average yet and is ranked ahead of every served UE.
struct PfState {
  std::vector<double> avg_rate;
  std::vector<char> served;
  PfParams params;

  PfState() = default;
  PfState(std::size_t num_ues, PfParams p) : avg_rate(num_ues, 0.0), served(num_ues, 0), params(p) {}

  /// End-of-slot update. est_rate bootstraps the average when the first
  /// scheduled slot delivers nothing.
  void update(int ue, bool scheduled, double served_rate, double est_rate);
};

struct RbGrant {
  int ue_id = 0;
  int rb_start = 0;
  int rb_len = 0;
  double per_rb_power_dbm = 0.0;
};

using CellAllocation = std::vector<RbGrant>;

struct SlotAllocation {
  std::vector<CellAllocation> cells;
};

double pf_weight(double inst_rate, double avg_rate, double alpha, double beta);
double update_avg(double avg, double served, double ewma);

/// Proportional-fair contiguous allocation of one cell's data RBs.
///
/// UEs are ranked unserved-first, then by PF weight, ties to the lower id.
/// Walking that order, each UE takes round(remaining_rbs * w / remaining_w)
/// RBs (at least one) as the next contiguous block; the last UE takes the
/// rest. UEs with a zero rate estimate are never scheduled. est_rates is
/// indexed by UE id.
CellAllocation allocate(std::span<const int> cell_ues, std::span<const double> est_rates,
                        const PfState& pf, const RbGrid& grid);

/// Per-RB transmit power once the UE's total is capped at p_max.
double split_power_dbm(double controller_dbm, int rb_len, double p_max_dbm);

}  // namespace ulpc
