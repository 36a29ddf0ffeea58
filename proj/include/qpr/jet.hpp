#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpr/geom.hpp"
#include "qpr/problem.hpp"

namespace qpr::jet {

struct Constituent {
  double e = 0.0;  // GeV
  double px = 0.0, py = 0.0, pz = 0.0;

  Vec3 p() const { return {px, py, pz}; }
  double pt() const { return std::hypot(px, py); }
  void validate() const;
};

struct JetEvent {
  std::vector<Constituent> constituents;
  std::vector<int> truth_jet;  // per constituent, in [0, n_jet)
  double sqrt_s = 0.0;
  std::size_t n_jet = 2;
};

/// Massless four-momentum sum of a cluster.
struct Jet {
  double e = 0.0;
  double px = 0.0, py = 0.0, pz = 0.0;

  void add(const Constituent& c) {
    e += c.e;
    px += c.px;
    py += c.py;
    pz += c.pz;
  }
};

struct JetAssignment {
  std::vector<int> jet_of;  // in [0, n_jet)
  std::size_t n_jet = 0;
  std::size_t violations = 0;  // multiple bits set during decoding
  std::size_t repairs = 0;     // no bit set during decoding
};

/// Back-to-back parton pairs with equal energies sqrt_s / n_jet; each
/// parton's energy is split by a symmetric Dirichlet(2) draw and the
/// constituent directions are Gaussian-smeared around the axis. The
/// partner jet mirrors its twin's energies and directions exactly, so the
/// total 3-momentum vanishes by construction. Constituents are massless.
JetEvent generate_jet_event(std::size_t n_jet, double sqrt_s, double spread,
                            std::size_t n_constituents_per_jet,
                            std::uint64_t seed);

struct ThrustResult {
  double thrust = 0.0;
  Vec3 axis;
};

/// Exact small-N thrust: the optimal axis is collinear with one
/// hemisphere's momentum sum, so all +-normalized subset sums are scanned.
/// Guarded at N <= 16.
ThrustResult thrust_axis_scan(const JetEvent& event);

/// Hemisphere-selection QUBO: minimizing Q_ij = -4 p_i . p_j (diagonal
/// included) maximizes 4 |sum_i s_i p_i|^2 = (sum |p_i|)^2 T(s)^2.
QuboProblem thrust_qubo(const JetEvent& event);

/// Thrust value T(s) = 2 |sum s_i p_i| / sum |p_i| of a selection.
double selection_thrust(const JetEvent& event, const BinaryConfig& s);

/// Pairwise angular distance Q_ij = -(p_i . p_j) / (2 |p_i| |p_j|), zero
/// diagonal. Throws on zero-momentum constituents.
QuboProblem angle_qubo(const JetEvent& event);

/// Durham / ee-kt measure 2 min(E_i^2, E_j^2) (1 - cos theta_ij), zero
/// diagonal, GeV^2.
std::vector<std::vector<double>> durham_matrix(const JetEvent& event);

/// N * n_jet binaries at index i * n_jet + n: intra-jet pairwise terms
/// from Q plus the one-hot penalty lambda sum_i (1 - sum_n s_i^n)^2.
/// lambda <= 0 selects auto: 1.1 * N * max_ij Q_ij, falling back to
/// 1 + N * max|Q_ij| when no entry is positive.
QuboProblem multijet_qubo(const std::vector<std::vector<double>>& q,
                          std::size_t n_jet, double lambda_pen = 0.0);

/// Exclusive Durham clustering down to k_target clusters (E-scheme
/// recombination, smallest-index tie-break).
JetAssignment eekt_cluster(const JetEvent& event, std::size_t k_target);

/// Generalized-kt pairwise distance min(pT_i^2p, pT_j^2p) dR^2 / R^2 with
/// dR^2 = dy^2 + dphi^2 (wrapped). p = 1 kt, 0 Cambridge/Aachen,
/// -1 anti-kt (zero pT is an error for p = -1).
double kt_distance(const Constituent& a, const Constituent& b, int p_index,
                   double r_param);

/// Decodes a multijet one-hot solution; multiple set bits keep the lowest
/// jet (violation counted), empty rows are repaired to the jet axis (from
/// the decoded partial assignment) with the largest momentum projection.
JetAssignment decode_jets(const BinaryConfig& solution, const JetEvent& event,
                          std::size_t n_jet);

/// Constituent-level agreement, maximized over jet-label permutations.
double jet_efficiency(const JetAssignment& assignment,
                      const JetAssignment& reference);

std::vector<Jet> jets_from_assignment(const JetEvent& event,
                                      const JetAssignment& assignment);

/// sqrt(max(0, (sum E)^2 - |sum p|^2))
double invariant_mass(const std::vector<Jet>& jets);

/// Constituents CSV: header `e,px,py,pz,truth_jet`.
JetEvent load_constituents_csv(const std::string& path);
void save_constituents_csv(const JetEvent& event, const std::string& path);

}  // namespace qpr::jet
