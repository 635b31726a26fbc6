#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace ulpc {

using Point = Eigen::Vector2d;

inline constexpr int kStandardRings = 2;  // 19 sites

struct Cell {
  int cell_id = 0;
  int site_id = 0;
  double boresight_deg = 0.0;
};

/// Hexagonal site lattice with toroidal wrap-around.
///
/// Lattice neighbours sit at 30, 90, ..., 330 degrees so each site's hexagon
/// has its corners at 0, 60, ..., 300 degrees and the three sector boresights
/// (0, 120, 240) point at hexagon corners.
struct SiteLayout {
  std::vector<Point> site_positions;
  int sectors_per_site = 3;
  double inter_site_distance = 500.0;
  int rings = kStandardRings;
  std::vector<Point> wrap_vectors;  // identity first, then the 6 cluster shifts
  std::vector<Cell> cells;

  int num_sites() const { return static_cast<int>(site_positions.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  /// Apothem of a site hexagon.
  double hex_apothem() const { return inter_site_distance / 2.0; }
};

struct UePlacement {
  int ue_id = 0;
  Point position = Point::Zero();
  int serving_cell = -1;
};

/// Large-scale loss model for one UE-to-cell link.
struct PathLossModel {
  double intercept_db = 128.1;
  double slope_db = 37.6;  // per decade of km
  double penetration_db = 20.0;
  double max_gain_dbi = 14.0;
  double beamwidth_deg = 70.0;
  double front_to_back_db = 25.0;
  double shadow_std_db = 8.0;
  double min_distance_m = 35.0;
};

/// Row = UE, column = cell. Entries are coupling losses in dB.
struct PathLossMap {
  Eigen::MatrixXd loss_db;

  int num_ues() const { return static_cast<int>(loss_db.rows()); }
  int num_cells() const { return static_cast<int>(loss_db.cols()); }
  double loss(int ue, int cell) const { return loss_db(ue, cell); }
  Eigen::RowVectorXd row(int ue) const { return loss_db.row(ue); }
};

SiteLayout build_hex_layout(int rings, double isd);

/// Shortest displacement from q to p over all wrap images of q.
Point wrap_offset(const Point& p, const Point& q, const SiteLayout& layout);
double wrap_distance(const Point& p, const Point& q, const SiteLayout& layout);

/// Uniform drop over the union of site hexagons, rejecting points closer than
/// min_dist to their site. Total UE count is ues_per_cell * num_cells; serving
/// cells are left unset until attach().
std::vector<UePlacement> drop_ues(const SiteLayout& layout, int ues_per_cell, double min_dist,
                                  std::uint64_t seed);

/// 2-D sector pattern including boresight gain, in dBi.
double antenna_gain_db(double off_boresight_deg, const PathLossModel& model);

double path_loss_db(double distance_m, double shadow_db, double antenna_gain_db,
                    const PathLossModel& model);

double path_loss(const UePlacement& ue, const Cell& cell, double shadow_db,
                 const SiteLayout& layout, const PathLossModel& model);

/// One shadowing value per (UE, site); the sectors of a site share it.
Eigen::MatrixXd draw_shadowing(int num_ues, int num_sites, double std_db, std::uint64_t seed);

PathLossMap build_path_loss_map(const SiteLayout& layout, const std::vector<UePlacement>& ues,
                                const PathLossModel& model, std::uint64_t seed);

/// Attach each UE to its lowest-loss cell, ties to the lower cell id.
void attach(std::vector<UePlacement>& ues, const PathLossMap& map);

void write_path_loss_csv(std::ostream& out, const PathLossMap& map);

}  // namespace ulpc
