#include "ulpc/scheduler.hpp"

#include "ulpc/linkbudget.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ulpc {

double pf_weight(double inst_rate, double avg_rate, double alpha, double beta) {
  if (!(avg_rate > 0.0)) throw std::domain_error("PF average rate is uninitialised");
  return std::pow(inst_rate, alpha) / std::pow(avg_rate, beta);
}

double update_avg(double avg, double served, double ewma) {
  return (1.0 - ewma) * avg + ewma * served;
}

void PfState::update(int ue, bool scheduled, double served_rate, double est_rate) {
  if (!served[ue]) {
    if (!scheduled) return;
    served[ue] = 1;
    avg_rate[ue] = served_rate > 0.0 ? served_rate : est_rate;
    return;
  }
  avg_rate[ue] = update_avg(avg_rate[ue], served_rate, params.ewma);
}

CellAllocation allocate(std::span<const int> cell_ues, std::span<const double> est_rates,
                        const PfState& pf, const RbGrid& grid) {
  struct Candidate {
    int ue;
    bool fresh;
    double weight;
  };
  std::vector<Candidate> cands;
  double top_weight = 0.0;
  for (int ue : cell_ues) {
    const double est = est_rates[ue];
    if (!(est > 0.0)) continue;
    if (!pf.served[ue]) {
      cands.push_back({ue, true, 0.0});
    } else {
      const double w = pf_weight(est, pf.avg_rate[ue], pf.params.alpha, pf.params.beta);
      cands.push_back({ue, false, w});
      top_weight = std::max(top_weight, w);
    }
  }
  if (cands.empty()) return {};

  // Fresh UEs go first and take a share equal to the best served weight.
  const double fresh_weight = top_weight > 0.0 ? top_weight : 1.0;
  for (Candidate& c : cands)
    if (c.fresh) c.weight = fresh_weight;

  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    if (x.fresh != y.fresh) return x.fresh;
    if (x.weight != y.weight) return x.weight > y.weight;
    return x.ue < y.ue;
  });

  std::vector<double> tail_weight(cands.size() + 1, 0.0);
  for (std::size_t i = cands.size(); i-- > 0;) tail_weight[i] = tail_weight[i + 1] + cands[i].weight;

  CellAllocation out;
  int remaining = grid.data_rbs();
  int next = grid.first_data_rb();
  for (std::size_t i = 0; i < cands.size() && remaining > 0; ++i) {
    int len = remaining;
    if (i + 1 < cands.size()) {
      len = static_cast<int>(std::lround(remaining * cands[i].weight / tail_weight[i]));
      len = std::clamp(len, 1, remaining);
    }
    out.push_back({cands[i].ue, next, len, 0.0});
    next += len;
    remaining -= len;
  }
  return out;
}

double split_power_dbm(double controller_dbm, int rb_len, double p_max_dbm) {
  return std::min(controller_dbm, p_max_dbm - linear_to_db(static_cast<double>(rb_len)));
}

}  // namespace ulpc
