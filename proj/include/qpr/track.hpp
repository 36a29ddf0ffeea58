#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qpr/problem.hpp"

namespace qpr::track {

/// Barrel-only toy detector: concentric cylinder layers at the given
/// radii (mm), Gaussian hit smearing per coordinate, solenoid field along z.
struct DetectorModel {
  std::vector<double> layer_radii;
  double z_half_length = 400.0;
  double hit_sigma = 0.05;
  double b_field = 2.0;

  static DetectorModel barrel(std::size_t n_layers = 10, double r_min = 30.0,
                              double r_max = 300.0);
  void validate() const;
};

struct ToyParticle {
  int charge = 1;  // +-1
  double pt = 1.0;  // GeV
  double phi0 = 0.0;
  double cot_theta = 0.0;
  double z0 = 0.0;  // mm
};

struct Hit {
  int id = 0;
  double x = 0.0, y = 0.0, z = 0.0;  // mm
  int layer = 0;
  long long truth_particle = -1;  // -1 = noise / none

  double r() const;  // transverse radius
  double phi() const;
};

struct ToyEvent {
  std::vector<ToyParticle> particles;
  std::vector<Hit> hits;
};

/// Helix radius in mm for pt in GeV and B in tesla.
double curvature_radius_mm(double pt, double b_field);

/// pt drawn uniform in 1/pt over [0.5, 10] GeV, phi0 uniform, cot(theta)
/// uniform in [-1, 1], z0 ~ N(0, 1 mm), charge +-1; one smeared hit per
/// crossed layer inside the z acceptance.
ToyEvent generate_toy_event(std::size_t n_particles, const DetectorModel& det,
                            std::uint64_t seed);

/// Two-hit segment; a is the inner hit. Index = position in the vector
/// returned by build_doublets.
struct Doublet {
  int a = 0;
  int b = 0;
};

struct DoubletCuts {
  double max_dphi = 0.05;
  double dz_dr_window = 1.3;      // |dz/dr| bound
  bool adjacent_layers_only = true;
};

std::vector<Doublet> build_doublets(const std::vector<Hit>& hits,
                                    const DoubletCuts& cuts);

/// Parameters of the doublet-pairing QUBO. `prior` evaluates P(doublet)
/// in [0, 1]; the default is the constant 1.
struct DpParams {
  double lambda_exp = 13.17;  // angle-separation power
  double rho = 5.00;          // azimuthal (high-momentum) weight
  double eta = 14.41;         // beam-spot weight
  double zeta = 1.79;         // beam-spot power
  double alpha = 86.20;       // bifurcation penalty
  double beta = 20.91;        // prior reward scale
  double gamma = 9.79;        // per-doublet cost
};

/// Gaussian KDE prior over (dphi, dz/dr) doublet features, normalized so
/// the densest calibration point maps to 1. Bandwidths via Scott's rule.
class DoubletPrior {
 public:
  DoubletPrior() = default;  // constant 1
  static DoubletPrior fit(const std::vector<Hit>& calibration_hits);

  double operator()(const Hit& inner, const Hit& outer) const;
  bool is_constant() const { return points_.empty(); }

 private:
  std::vector<std::pair<double, double>> points_;
  double bw_phi_ = 1.0, bw_slope_ = 1.0;
  double max_density_ = 1.0;
};

struct DpQuboResult {
  QuboProblem problem;
  std::size_t skipped_pairs = 0;  // degenerate (r_c == r_a) chains
};

/// QUBO over the doublet binaries: connected pairs sharing a middle hit
/// get the angle attraction and beam-spot penalty, pairs sharing an inner
/// or outer hit get the bifurcation penalty on both symmetric entries, and
/// every doublet gets the linear -(beta P - gamma) term on the diagonal.
DpQuboResult dp_qubo(const std::vector<Doublet>& doublets,
                     const std::vector<Hit>& hits, const DpParams& params,
                     const DoubletPrior& prior = {});

struct Triplet {
  int a = 0, b = 0, c = 0;     // hit ids on strictly increasing layers
  double curvature = 0.0;      // signed, 1/mm
  double polar_dir = 0.0;      // dip angle atan(dz/dr) of the r-z line fit
  double d0 = 0.0;             // transverse displacement from the origin, mm
  double z0 = 0.0;             // r-z intercept, mm
};

struct TripletCuts {
  double max_curvature = 2.5e-3;  // 1/mm
  double max_dtheta = 0.05;       // dip-angle kink between the two segments
};

std::vector<Triplet> build_triplets(const std::vector<Doublet>& doublets,
                                    const std::vector<Hit>& hits,
                                    const TripletCuts& cuts);

struct TripletQuboParams {
  double sigma_kappa = 0.0;  // 0 = 10% of the median |curvature|
  double sigma_theta = 0.1;
  double w_d = 1.0;  // 1/mm^2
  double w_z = 1.0;
  double conflict_value = 1.0;
};

/// Diagonal a_i = w_d d0^2 + w_z z0^2; product coefficient b_ij = 0 for
/// disjoint pairs, -exp(-dk^2/2s_k^2)exp(-dt^2/2s_t^2) for consecutive
/// two-hit overlaps, +conflict_value for conflicting pairs.
QuboProblem triplet_qubo(const std::vector<Triplet>& triplets,
                         const TripletQuboParams& params);

struct TrackSet {
  std::vector<std::vector<int>> tracks;  // ordered hit ids
};

/// Chains kept segments into maximal paths, longest first; each hit is
/// used by at most one output track.
TrackSet decode_tracks(const BinaryConfig& solution,
                       const std::vector<Doublet>& doublets,
                       const std::vector<Hit>& hits);
TrackSet decode_tracks(const BinaryConfig& solution,
                       const std::vector<Triplet>& triplets,
                       const std::vector<Hit>& hits);

using DoubletSet = std::set<std::pair<int, int>>;

/// Truth doublets: consecutive hits (in layer order) of each truth
/// particle.
DoubletSet truth_doublets(const std::vector<Hit>& hits);

DoubletSet kept_doublets(const BinaryConfig& solution,
                         const std::vector<Doublet>& doublets);
/// The two doublets implied by each kept triplet, deduplicated.
DoubletSet kept_doublets(const BinaryConfig& solution,
                         const std::vector<Triplet>& triplets);

struct SegmentMetrics {
  double efficiency = 0.0;
  double purity = 0.0;
};

/// efficiency = |kept AND truth| / |truth| (1 if no truth doublets);
/// purity = |kept AND truth| / |kept| (1 if nothing kept and no truth,
/// 0 if nothing kept but truth exists).
SegmentMetrics doublet_metrics(const DoubletSet& kept,
                               const DoubletSet& truth);

/// Hits CSV: header `hit_id,x,y,z,layer,particle_id`; particle_id -1
/// marks noise. Malformed rows are rejected with their line number.
std::vector<Hit> load_hits_csv(const std::string& path);
void save_hits_csv(const std::vector<Hit>& hits, const std::string& path);

}  // namespace qpr::track
