#pragma once

#include <cstdint>
#include <vector>

#include "qpr/problem.hpp"

namespace qpr::track {

struct VertexProblemParams {
  std::size_t n_vertices = 2;
  double m = 1.0;          // distortion parameter
  double lambda_pen = 5.0;  // one-hot penalty weight

  void validate() const;
};

/// Track summary for vertexing: longitudinal intercept and uncertainty.
struct TrackZ {
  double z0 = 0.0;
  double delta_z = 1.0;  // > 0
};

/// Significance distance |z_i - z_j| / sqrt(dz_i^2 + dz_j^2).
double track_distance(const TrackZ& a, const TrackZ& b);
/// Distortion g(x, m) = 1 - exp(-m x).
double distortion(double x, double m);

/// One-hot track-to-vertex assignment QUBO: binary (i, k) at index
/// i * n_vertices + k; same-vertex pairs cost g(D(i,j); m), and the
/// squared one-hot penalty lambda * sum_i (1 - sum_k p_ik)^2 is expanded
/// into linear/quadratic terms with the constant in the offset.
QuboProblem vertex_qubo(const std::vector<TrackZ>& tracks,
                        const VertexProblemParams& params);

struct VertexAssignment {
  std::vector<int> vertex_of;  // -1 = unassigned before repair
  std::size_t violations = 0;  // multiple bits set
  std::size_t repairs = 0;     // no bit set
};

/// Decodes the one-hot block per track: multiple set bits keep the lowest
/// vertex index (violation), empty rows are repaired to the vertex whose
/// assigned tracks have the nearest mean z (falling back to vertex 0).
VertexAssignment decode_vertices(const BinaryConfig& solution,
                                 const std::vector<TrackZ>& tracks,
                                 std::size_t n_vertices);

struct VertexToy {
  std::vector<TrackZ> tracks;
  std::vector<int> truth_vertex;
};

/// Vertices spaced `separation_sigma * delta_z` apart along z, tracks
/// dealt round-robin with z ~ N(z_vertex, delta_z).
VertexToy generate_vertex_toy(std::size_t n_vertices, std::size_t n_tracks,
                              double separation_sigma, double delta_z,
                              std::uint64_t seed);

}  // namespace qpr::track
