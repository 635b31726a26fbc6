#include "ulpc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace ulpc {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Point rotate(const Point& v, double rad) {
  return {std::cos(rad) * v.x() - std::sin(rad) * v.y(), std::sin(rad) * v.x() + std::cos(rad) * v.y()};
}

bool inside_hexagon(const Point& offset, double apothem) {
  // Flat sides face the lattice neighbours at 30, 90 and 150 degrees.
  for (int k = 0; k < 3; ++k) {
    const Point normal = rotate(Point::UnitX(), (30.0 + 60.0 * k) * kDeg);
    if (std::abs(offset.dot(normal)) > apothem) return false;
  }
  return true;
}

double wrap_angle_deg(double deg) {
  double a = std::fmod(deg + 180.0, 360.0);
  if (a < 0) a += 360.0;
  return a - 180.0;
}

}  // namespace

SiteLayout build_hex_layout(int rings, double isd) {
  if (!(isd > 0.0)) throw std::invalid_argument("inter-site distance must be positive");
  if (rings < 0) throw std::invalid_argument("ring count must be nonnegative");

  SiteLayout layout;
  layout.inter_site_distance = isd;
  layout.rings = rings;

  const Point a1 = isd * Point(std::cos(30.0 * kDeg), std::sin(30.0 * kDeg));
  const Point a2 = isd * Point(0.0, 1.0);

  // Axial coordinates, ring by ring so site 0 is the centre.
  for (int ring = 0; ring <= rings; ++ring) {
    for (int q = -rings; q <= rings; ++q) {
      for (int r = -rings; r <= rings; ++r) {
        const int s = -q - r;
        if (std::max({std::abs(q), std::abs(r), std::abs(s)}) != ring) continue;
        layout.site_positions.push_back(q * a1 + r * a2);
      }
    }
  }

  // A cluster of 3n^2 + 3n + 1 sites tiles the plane with shift
  // (n + 1) * a1 + n * a2 and its 60-degree rotations.
  layout.wrap_vectors.push_back(Point::Zero());
  if (rings > 0) {
    const Point shift = (rings + 1) * a1 + rings * a2;
    for (int k = 0; k < 6; ++k) layout.wrap_vectors.push_back(rotate(shift, 60.0 * k * kDeg));
  }

  int cell_id = 0;
  for (int site = 0; site < layout.num_sites(); ++site) {
    for (int sector = 0; sector < layout.sectors_per_site; ++sector) {
      layout.cells.push_back({cell_id++, site, 120.0 * sector});
    }
  }
  return layout;
}

Point wrap_offset(const Point& p, const Point& q, const SiteLayout& layout) {
  Point best = p - q;
  double best_norm = best.squaredNorm();
  for (const Point& w : layout.wrap_vectors) {
    const Point d = p - (q + w);
    const double n = d.squaredNorm();
    if (n < best_norm) {
      best_norm = n;
      best = d;
    }
  }
  return best;
}

double wrap_distance(const Point& p, const Point& q, const SiteLayout& layout) {
  return wrap_offset(p, q, layout).norm();
}

std::vector<UePlacement> drop_ues(const SiteLayout& layout, int ues_per_cell, double min_dist,
                                  std::uint64_t seed) {
  if (ues_per_cell < 1) throw std::invalid_argument("ues_per_cell must be at least 1");
  if (layout.num_sites() == 0) throw std::invalid_argument("layout has no sites");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_site(0, layout.num_sites() - 1);
  const double apothem = layout.hex_apothem();
  const double circumradius = apothem * 2.0 / std::sqrt(3.0);
  std::uniform_real_distribution<double> coord(-circumradius, circumradius);

  const int total = ues_per_cell * layout.num_cells();
  std::vector<UePlacement> ues;
  ues.reserve(total);
  while (static_cast<int>(ues.size()) < total) {
    const int site = pick_site(rng);
    Point offset;
    do {
      offset = Point(coord(rng), coord(rng));
    } while (!inside_hexagon(offset, apothem) || offset.norm() < min_dist);
    ues.push_back({static_cast<int>(ues.size()), layout.site_positions[site] + offset, -1});
  }
  return ues;
}

double antenna_gain_db(double off_boresight_deg, const PathLossModel& model) {
  const double theta = wrap_angle_deg(off_boresight_deg) / model.beamwidth_deg;
  return model.max_gain_dbi - std::min(12.0 * theta * theta, model.front_to_back_db);
}

double path_loss_db(double distance_m, double shadow_db, double antenna_gain_db,
                    const PathLossModel& model) {
  if (!(distance_m >= model.min_distance_m)) {
    throw std::invalid_argument("link distance below the minimum UE-to-site distance");
  }
  return model.intercept_db + model.slope_db * std::log10(distance_m / 1000.0) + shadow_db +
         model.penetration_db - antenna_gain_db;
}

double path_loss(const UePlacement& ue, const Cell& cell, double shadow_db,
                 const SiteLayout& layout, const PathLossModel& model) {
  const Point offset = wrap_offset(ue.position, layout.site_positions.at(cell.site_id), layout);
  const double azimuth = std::atan2(offset.y(), offset.x()) / kDeg;
  return path_loss_db(offset.norm(), shadow_db, antenna_gain_db(azimuth - cell.boresight_deg, model),
                      model);
}

Eigen::MatrixXd draw_shadowing(int num_ues, int num_sites, double std_db, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std_db);
  Eigen::MatrixXd shadow(num_ues, num_sites);
  for (int u = 0; u < num_ues; ++u)
    for (int s = 0; s < num_sites; ++s) shadow(u, s) = normal(rng);
  return shadow;
}

PathLossMap build_path_loss_map(const SiteLayout& layout, const std::vector<UePlacement>& ues,
                                const PathLossModel& model, std::uint64_t seed) {
  const int n_ues = static_cast<int>(ues.size());
  const Eigen::MatrixXd shadow = draw_shadowing(n_ues, layout.num_sites(), model.shadow_std_db, seed);

  PathLossMap map;
  map.loss_db.resize(n_ues, layout.num_cells());
  for (int u = 0; u < n_ues; ++u) {
    for (const Cell& cell : layout.cells) {
      map.loss_db(u, cell.cell_id) = path_loss(ues[u], cell, shadow(u, cell.site_id), layout, model);
    }
  }
  return map;
}

void attach(std::vector<UePlacement>& ues, const PathLossMap& map) {
  for (UePlacement& ue : ues) {
    Eigen::Index best = 0;
    // minCoeff returns the first minimum, which is the lowest cell id.
    map.loss_db.row(ue.ue_id).minCoeff(&best);
    ue.serving_cell = static_cast<int>(best);
  }
}

void write_path_loss_csv(std::ostream& out, const PathLossMap& map) {
  out << "ue_id,cell_id,loss_db\n";
  out.precision(10);
  for (int u = 0; u < map.num_ues(); ++u)
    for (int c = 0; c < map.num_cells(); ++c) out << u << ',' << c << ',' << map.loss(u, c) << '\n';
}

}  // namespace ulpc
