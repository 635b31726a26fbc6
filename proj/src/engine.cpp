#include "ulpc/engine.hpp"

#include "ulpc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

namespace ulpc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ splitmix64(v)); }

// Independent streams derived from one drop seed.
enum class Stream : std::uint64_t { Placement = 1, Shadowing = 2, Fading = 3 };

std::uint64_t stream_seed(std::uint64_t drop_seed, Stream s) {
  return mix(drop_seed, static_cast<std::uint64_t>(s));
}

}  // namespace

GainMatrix gains_from_losses(const PathLossMap& plmap) {
  return (plmap.loss_db.array() * (-std::log(10.0) / 10.0)).exp().matrix();
}

ControllerSpec SimConfig::controller() const {
  switch (scheme) {
    case Scheme::MaxPower: return {MaxPowerParams{p_max_dbm}};
    case Scheme::Fpc: {
      FpcParams p = fpc;
      p.p_max_dbm = p_max_dbm;
      return {p};
    }
    case Scheme::Rlpc: {
      RlpcParams p = rlpc;
      p.p_max_dbm = p_max_dbm;
      return {p};
    }
    case Scheme::Cnb: {
      CnbParams p = cnb;
      p.p_max_dbm = p_max_dbm;
      p.pl_th_db = CnbParams::threshold_for(p_max_dbm, noise);
      return {p};
    }
  }
  throw std::logic_error("unhandled power control scheme");
}

void SimConfig::validate() const {
  if (!(isd_m > 0.0)) throw std::invalid_argument("isd must be positive");
  if (rings < 0) throw std::invalid_argument("rings must be nonnegative");
  if (ues_per_cell < 1) throw std::invalid_argument("ues_per_cell must be at least 1");
  if (n_slots < 0) throw std::invalid_argument("slots must be nonnegative");
  if (n_drops < 1) throw std::invalid_argument("drops must be at least 1");
  if (!(slot_duration_s > 0.0)) throw std::invalid_argument("slot duration must be positive");
  if (delay_slots < 0) throw std::invalid_argument("delay must be nonnegative");
  if (grid.control_rbs < 0 || grid.data_rbs() < 1) throw std::invalid_argument("no data RBs in the grid");
  if (!(pf.ewma > 0.0 && pf.ewma <= 1.0)) throw std::invalid_argument("ewma must lie in (0, 1]");
  if (fading_block_rbs < 1) throw std::invalid_argument("fading block must be at least 1 RB");
  if (fpc.kappa < 0.0 || fpc.kappa > 1.0) throw std::invalid_argument("kappa must lie in [0, 1]");
  if (rlpc.phi < 0.0 || rlpc.phi > 1.0) throw std::invalid_argument("phi must lie in [0, 1]");
  if (amc.staircase_levels < 2) throw std::invalid_argument("staircase needs at least 2 levels");
  CnbParams c = cnb;
  c.p_max_dbm = p_max_dbm;
  c.validate();
}

Scenario make_scenario(const SimConfig& config, std::uint64_t drop_seed) {
  const SiteLayout layout = build_hex_layout(config.rings, config.isd_m);
  std::vector<UePlacement> ues =
      drop_ues(layout, config.ues_per_cell, config.pathloss.min_distance_m,
               stream_seed(drop_seed, Stream::Placement));
  Scenario s;
  s.plmap = build_path_loss_map(layout, ues, config.pathloss, stream_seed(drop_seed, Stream::Shadowing));
  attach(ues, s.plmap);
  s.serving.reserve(ues.size());
  for (const UePlacement& ue : ues) s.serving.push_back(ue.serving_cell);
  return s;
}

void MetricsAccumulator::resize(int num_ues) {
  bits = Eigen::VectorXd::Zero(num_ues);
  energy_j = Eigen::VectorXd::Zero(num_ues);
  snr_sum = Eigen::VectorXd::Zero(num_ues);
  iot_sum = Eigen::VectorXd::Zero(num_ues);
  samples = Eigen::VectorXd::Zero(num_ues);
  tx_power_dbm = Eigen::VectorXd::Zero(num_ues);
}

void MetricsAccumulator::merge(const MetricsAccumulator& other) {
  if (n_drops == 0 && num_ues() == 0) {
    *this = other;
    return;
  }
  if (other.n_drops == 0 && other.num_ues() == 0) return;
  if (other.n_slots != n_slots || other.slot_duration_s != slot_duration_s) {
    throw std::invalid_argument("cannot merge accumulators with different run lengths");
  }
  auto cat = [](Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd out(a.size() + b.size());
    out << a, b;
    a = std::move(out);
  };
  cat(bits, other.bits);
  cat(energy_j, other.energy_j);
  cat(snr_sum, other.snr_sum);
  cat(iot_sum, other.iot_sum);
  cat(samples, other.samples);
  cat(tx_power_dbm, other.tx_power_dbm);
  n_cells += other.n_cells;
  n_drops += other.n_drops;
  seeds.insert(seeds.end(), other.seeds.begin(), other.seeds.end());
}

double RayleighFading::operator()(int ue, int cell, int rb) const {
  std::uint64_t h = mix(seed, static_cast<std::uint64_t>(slot));
  h = mix(h, static_cast<std::uint64_t>(ue));
  h = mix(h, static_cast<std::uint64_t>(cell));
  h = mix(h, static_cast<std::uint64_t>(rb / block_rbs));
  // 53-bit uniform in (0, 1].
  const double u = (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
  return -std::log(u);
}

SlotResult compute_slot(const SlotAllocation& alloc, const GainMatrix& gain_lin,
                        const LinkContext& link, const RayleighFading* fading) {
  const int n_cells = static_cast<int>(alloc.cells.size());
  const int n_rbs = link.grid.data_rbs();
  const int first = link.grid.first_data_rb();
  const double n0 = link.noise.n0_mw();
  const double combining = db_to_linear(link.combining_gain_db);
  const double bits_per_se = link.noise.rb_bandwidth_hz * link.slot_duration_s;

  SlotResult out;
  out.ue = Eigen::ArrayXXi::Constant(n_cells, n_rbs, -1);
  out.tx_mw = Eigen::ArrayXXd::Zero(n_cells, n_rbs);
  out.snr = Eigen::ArrayXXd::Zero(n_cells, n_rbs);
  out.iot = Eigen::ArrayXXd::Ones(n_cells, n_rbs);
  out.sinr = Eigen::ArrayXXd::Zero(n_cells, n_rbs);
  out.bits = Eigen::ArrayXXd::Zero(n_cells, n_rbs);
  out.ue_bits = Eigen::VectorXd::Zero(gain_lin.rows());

  for (int c = 0; c < n_cells; ++c) {
    for (const RbGrant& g : alloc.cells[c]) {
      const double p = db_to_linear(g.per_rb_power_dbm);
      for (int rb = g.rb_start; rb < g.rb_start + g.rb_len; ++rb) {
        out.ue(c, rb - first) = g.ue_id;
        out.tx_mw(c, rb - first) = p;
      }
    }
  }

  Eigen::VectorXd interference(n_cells);
  Eigen::VectorXd signal(n_cells);
  for (int r = 0; r < n_rbs; ++r) {
    interference.setZero();
    signal.setZero();
    for (int c = 0; c < n_cells; ++c) {
      const int u = out.ue(c, r);
      if (u < 0) continue;
      const double p = out.tx_mw(c, r);
      const auto g = gain_lin.row(u);
      for (int k = 0; k < n_cells; ++k) {
        double rx = p * g[k];
        if (fading) rx *= (*fading)(u, k, r + first);
        if (k == c) {
          signal[k] = rx;
        } else {
          interference[k] += rx;
        }
      }
    }
    for (int k = 0; k < n_cells; ++k) {
      const double i = combining * interference[k];
      out.iot(k, r) = (n0 + i) / n0;
      const int u = out.ue(k, r);
      if (u < 0) continue;
      const double s = combining * signal[k];
      out.snr(k, r) = s / n0;
      out.sinr(k, r) = s / (n0 + i);
      out.bits(k, r) = amc_realized(out.sinr(k, r), link.amc, link.staircase) * bits_per_se;
      out.ue_bits[u] += out.bits(k, r);
    }
  }
  return out;
}

Eigen::VectorXd open_loop_powers(const ControllerSpec& spec, const Scenario& scenario,
                                 const AmcCurve& curve, const NoiseModel& noise) {
  Eigen::VectorXd p(scenario.num_ues());
  for (int u = 0; u < scenario.num_ues(); ++u) {
    p[u] = controller_power(spec, scenario.plmap.loss_db.row(u), scenario.serving[u], curve, noise);
  }
  return p;
}

MetricsAccumulator run_scenario(const Scenario& scenario, const SimConfig& config,
                                std::uint64_t seed, const SlotObserver& observer) {
  config.validate();
  const int n_ues = scenario.num_ues();
  const int n_cells = scenario.num_cells();
  const ControllerSpec spec = config.controller();
  const LinkContext link{config.noise, config.amc, config.staircase, config.combining_gain_db,
                         config.grid, config.slot_duration_s};

  MetricsAccumulator acc;
  acc.n_cells = n_cells;
  acc.n_drops = 1;
  acc.n_slots = config.n_slots;
  acc.slot_duration_s = config.slot_duration_s;
  acc.seeds = {seed};
  acc.resize(n_ues);

  const Eigen::VectorXd power_dbm = open_loop_powers(spec, scenario, config.amc, config.noise);
  acc.tx_power_dbm = power_dbm;
  if (config.n_slots == 0) return acc;

  const GainMatrix gains = gains_from_losses(scenario.plmap);
  std::vector<std::vector<int>> cell_ues(n_cells);
  Eigen::VectorXd nominal_snr(n_ues);
  for (int u = 0; u < n_ues; ++u) {
    cell_ues[scenario.serving[u]].push_back(u);
    nominal_snr[u] = snr_of(power_dbm[u], scenario.plmap.loss(u, scenario.serving[u]), config.noise);
  }

  // Per-RB rate estimates from the SNR at the controller's power and the
  // serving cell's IoT averaged over the data band.
  auto estimate = [&](const Eigen::VectorXd& cell_iot) {
    std::vector<double> est(n_ues);
    for (int u = 0; u < n_ues; ++u) {
      const double sinr = nominal_snr[u] / cell_iot[scenario.serving[u]];
      est[u] = amc_realized(sinr, config.amc, config.staircase) * config.noise.rb_bandwidth_hz;
    }
    return est;
  };
  const std::vector<double> warmup = estimate(Eigen::VectorXd::Ones(n_cells));

  PfState pf(n_ues, config.pf);
  std::deque<std::vector<double>> history;
  Eigen::VectorXd measured_iot = Eigen::VectorXd::Ones(n_cells);
  bool have_measurement = false;
  const double p_max_mw = db_to_linear(config.p_max_dbm);

  RayleighFading fading{mix(seed, static_cast<std::uint64_t>(Stream::Fading)), 0, config.fading_block_rbs};
  SlotAllocation alloc;
  alloc.cells.resize(n_cells);
  std::vector<int> granted(n_ues);

  for (long t = 0; t < config.n_slots; ++t) {
    history.push_back(have_measurement ? estimate(measured_iot) : warmup);
    while (history.size() > static_cast<std::size_t>(config.delay_slots) + 1) history.pop_front();
    const std::vector<double>& est = apply_delay(history, config.delay_slots, warmup);

    std::fill(granted.begin(), granted.end(), 0);
    for (int c = 0; c < n_cells; ++c) {
      alloc.cells[c] = allocate(cell_ues[c], est, pf, config.grid);
      for (RbGrant& g : alloc.cells[c]) {
        g.per_rb_power_dbm = split_power_dbm(power_dbm[g.ue_id], g.rb_len, config.p_max_dbm);
        granted[g.ue_id] = g.rb_len;
      }
    }

    fading.slot = t;
    const SlotResult res = compute_slot(alloc, gains, link, config.fading ? &fading : nullptr);

    for (int c = 0; c < n_cells; ++c) {
      for (const RbGrant& g : alloc.cells[c]) {
        const int u = g.ue_id;
        const int r0 = g.rb_start - config.grid.first_data_rb();
        const double tx_mw = res.tx_mw.block(c, r0, 1, g.rb_len).sum();
        // Total power is capped by construction; guard against drift.
        if (tx_mw > p_max_mw * (1.0 + 1e-12)) throw std::logic_error("UE exceeded p_max");
        acc.energy_j[u] += tx_mw * config.slot_duration_s / 1000.0;
        acc.snr_sum[u] += res.snr.block(c, r0, 1, g.rb_len).mean();
        acc.iot_sum[u] += res.iot.block(c, r0, 1, g.rb_len).mean();
        acc.samples[u] += 1.0;
      }
    }
    acc.bits += res.ue_bits;

    for (int u = 0; u < n_ues; ++u) {
      pf.update(u, granted[u] > 0, res.ue_bits[u] / config.slot_duration_s, est[u] * granted[u]);
    }
    measured_iot = res.iot.rowwise().mean().matrix();
    have_measurement = true;

    if (observer) observer(t, alloc, res);
  }
  return acc;
}

MetricsAccumulator run_drop(const SimConfig& config, std::uint64_t drop_seed) {
  config.validate();
  return run_scenario(make_scenario(config, drop_seed), config, drop_seed);
}

std::vector<MetricsAccumulator> run_drops(const SimConfig& config) {
  config.validate();
  std::vector<MetricsAccumulator> out(config.n_drops);

  if (config.recalibrate_iot_s && config.scheme == Scheme::Cnb) {
    SimConfig cfg = config;
    for (int d = 0; d < config.n_drops; ++d) {
      out[d] = run_drop(cfg, config.seed + d);
      std::vector<double> iot_db;
      for (int u = 0; u < out[d].num_ues(); ++u)
        if (out[d].samples[u] > 0) iot_db.push_back(linear_to_db(out[d].iot_sum[u] / out[d].samples[u]));
      if (!iot_db.empty()) cfg.cnb.iot_s_db = percentile(iot_db, 0.95);
    }
    return out;
  }

  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  for (int start = 0; start < config.n_drops; start += static_cast<int>(workers)) {
    std::vector<std::future<MetricsAccumulator>> batch;
    const int end = std::min(config.n_drops, start + static_cast<int>(workers));
    for (int d = start; d < end; ++d) {
      batch.push_back(std::async(std::launch::async, [&config, d] {
        return run_drop(config, config.seed + static_cast<std::uint64_t>(d));
      }));
    }
    for (int d = start; d < end; ++d) out[d] = batch[d - start].get();
  }
  return out;
}

}  // namespace ulpc
