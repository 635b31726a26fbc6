#pragma once

#include "ulpc/linkbudget.hpp"
#include "ulpc/powerctl.hpp"
#include "ulpc/scheduler.hpp"
#include "ulpc/topology.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

namespace ulpc {

/// Linear large-scale gains, UE x cell, row-major so one UE's gains to every
/// cell are contiguous.
using GainMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

GainMatrix gains_from_losses(const PathLossMap& plmap);

struct SimConfig {
  // topology
  int rings = kStandardRings;
  double isd_m = 500.0;
  int ues_per_cell = 10;
  PathLossModel pathloss;

  // link
  NoiseModel noise;
  AmcCurve amc;
  bool staircase = false;
  double combining_gain_db = 0.0;  // applied to signal and interference, not noise
  bool fading = false;
  int fading_block_rbs = 6;

  // scheduling
  RbGrid grid;
  PfParams pf;
  int delay_slots = 6;

  // power control
  Scheme scheme = Scheme::Cnb;
  double p_max_dbm = 23.0;
  FpcParams fpc;
  RlpcParams rlpc;
  CnbParams cnb;
  bool recalibrate_iot_s = false;

  // run
  int n_slots = 2000;
  double slot_duration_s = 1e-3;
  int n_drops = 5;
  std::uint64_t seed = 1;

  /// Controller for this run with the shared p_max and a noise-derived
  /// C&B neighbour threshold.
  ControllerSpec controller() const;
  void validate() const;
};

/// What the engine needs from a drop: losses and attachment.
struct Scenario {
  PathLossMap plmap;
  std::vector<int> serving;

  int num_ues() const { return plmap.num_ues(); }
  int num_cells() const { return plmap.num_cells(); }
};

Scenario make_scenario(const SimConfig& config, std::uint64_t drop_seed);

/// Per-UE running totals for one or more drops.
struct MetricsAccumulator {
  int n_cells = 0;
  int n_drops = 0;
  long n_slots = 0;
  double slot_duration_s = 1e-3;
  std::vector<std::uint64_t> seeds;

  Eigen::VectorXd bits;
  Eigen::VectorXd energy_j;
  Eigen::VectorXd snr_sum;  // linear, one sample per scheduled slot
  Eigen::VectorXd iot_sum;
  Eigen::VectorXd samples;
  Eigen::VectorXd tx_power_dbm;  // open-loop controller output

  int num_ues() const { return static_cast<int>(bits.size()); }
  void resize(int num_ues);
  /// Pools another accumulator's UEs and cells into this one.
  void merge(const MetricsAccumulator& other);
};

/// Unit-mean exponential power gain per (UE, cell, RB block, slot), drawn
/// from a counter-based hash so the value does not depend on call order.
struct RayleighFading {
  std::uint64_t seed = 0;
  long slot = 0;
  int block_rbs = 6;

  double operator()(int ue, int cell, int rb) const;
};

struct LinkContext {
  NoiseModel noise;
  AmcCurve amc;
  bool staircase = false;
  double combining_gain_db = 0.0;
  RbGrid grid;
  double slot_duration_s = 1e-3;
};

/// Cell x data-RB view of one slot. Occupancy is -1 where no UE transmits.
struct SlotResult {
  Eigen::ArrayXXi ue;
  Eigen::ArrayXXd tx_mw;
  Eigen::ArrayXXd snr;
  Eigen::ArrayXXd iot;  // measured at the cell on every RB, occupied or not
  Eigen::ArrayXXd sinr;
  Eigen::ArrayXXd bits;
  Eigen::VectorXd ue_bits;
};

/// Couples interference across cells RB by RB and realises throughput.
SlotResult compute_slot(const SlotAllocation& alloc, const GainMatrix& gain_lin,
                        const LinkContext& link, const RayleighFading* fading = nullptr);

/// Entry delay_slots back from the newest, or the warm-up value while the
/// history is too short.
template <typename T>
const T& apply_delay(const std::deque<T>& history, int delay_slots, const T& warmup) {
  if (history.size() < static_cast<std::size_t>(delay_slots) + 1) return warmup;
  return history[history.size() - 1 - static_cast<std::size_t>(delay_slots)];
}

Eigen::VectorXd open_loop_powers(const ControllerSpec& spec, const Scenario& scenario,
                                 const AmcCurve& curve, const NoiseModel& noise);

using SlotObserver = std::function<void(long slot, const SlotAllocation&, const SlotResult&)>;

MetricsAccumulator run_scenario(const Scenario& scenario, const SimConfig& config,
                                std::uint64_t seed, const SlotObserver& observer = {});

MetricsAccumulator run_drop(const SimConfig& config, std::uint64_t drop_seed);

/// All drops of a run, seeds config.seed + d. Drops run concurrently unless
/// IoT_S recalibration chains them.
std::vector<MetricsAccumulator> run_drops(const SimConfig& config);

}  // namespace ulpc
