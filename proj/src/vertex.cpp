#include "qpr/vertex.hpp"

#include <cmath>
#include <stdexcept>

#include "qpr/rng.hpp"

namespace qpr::track {

void VertexProblemParams::validate() const {
  if (n_vertices < 1)
    throw std::invalid_argument("VertexProblemParams: n_vertices must be >= 1");
  if (!(m > 0.0))
    throw std::invalid_argument("VertexProblemParams: m must be > 0");
  if (!(lambda_pen > 0.0))
    throw std::invalid_argument("VertexProblemParams: lambda_pen must be > 0");
}

double track_distance(const TrackZ& a, const TrackZ& b) {
  return std::fabs(a.z0 - b.z0) /
         std::sqrt(a.delta_z * a.delta_z + b.delta_z * b.delta_z);
}

double distortion(double x, double m) { return 1.0 - std::exp(-m * x); }

QuboProblem vertex_qubo(const std::vector<TrackZ>& tracks,
                        const VertexProblemParams& params) {
  params.validate();
  const std::size_t n_t = tracks.size();
  const std::size_t n_v = params.n_vertices;
  if (n_t < n_v)
    throw std::invalid_argument("vertex_qubo: need n_tracks >= n_vertices");
  for (const auto& t : tracks)
    if (!(t.delta_z > 0.0))
      throw std::invalid_argument("vertex_qubo: delta_z must be > 0");

  QuboProblem q(n_t * n_v);
  auto idx = [&](std::size_t i, std::size_t k) { return i * n_v + k; };

  for (std::size_t i = 0; i < n_t; ++i) {
    for (std::size_t j = i + 1; j < n_t; ++j) {
      const double g = distortion(track_distance(tracks[i], tracks[j]),
                                  params.m);
      if (g == 0.0) continue;
      for (std::size_t k = 0; k < n_v; ++k)
        q.add_pair_term(idx(i, k), idx(j, k), g);
    }
  }

  // lambda sum_i (1 - sum_k p_ik)^2
  //   = lambda sum_i [1 - sum_k p_ik + 2 sum_{k<l} p_ik p_il]
  const double lambda = params.lambda_pen;
  for (std::size_t i = 0; i < n_t; ++i) {
    for (std::size_t k = 0; k < n_v; ++k) {
      q.add_linear(idx(i, k), -lambda);
      for (std::size_t l = k + 1; l < n_v; ++l)
        q.add_pair_term(idx(i, k), idx(i, l), 2.0 * lambda);
    }
  }
  q.set_offset(q.offset() + lambda * static_cast<double>(n_t));
  return q;
}

VertexAssignment decode_vertices(const BinaryConfig& solution,
                                 const std::vector<TrackZ>& tracks,
                                 std::size_t n_vertices) {
  const std::size_t n_t = tracks.size();
  if (solution.size() != n_t * n_vertices)
    throw std::invalid_argument("decode_vertices: solution size mismatch");
  VertexAssignment out;
  out.vertex_of.assign(n_t, -1);

  for (std::size_t i = 0; i < n_t; ++i) {
    int chosen = -1;
    int set_bits = 0;
    for (std::size_t k = 0; k < n_vertices; ++k) {
      if (solution.values[i * n_vertices + k]) {
        ++set_bits;
        if (chosen < 0) chosen = static_cast<int>(k);
      }
    }
    if (set_bits > 1) ++out.violations;
    out.vertex_of[i] = chosen;
  }

  // repair unassigned tracks toward the nearest populated vertex mean
  std::vector<double> mean_z(n_vertices, 0.0);
  std::vector<std::size_t> count(n_vertices, 0);
  for (std::size_t i = 0; i < n_t; ++i) {
    if (out.vertex_of[i] >= 0) {
      mean_z[static_cast<std::size_t>(out.vertex_of[i])] += tracks[i].z0;
      ++count[static_cast<std::size_t>(out.vertex_of[i])];
    }
  }
  for (std::size_t k = 0; k < n_vertices; ++k)
    if (count[k] > 0) mean_z[k] /= static_cast<double>(count[k]);

  for (std::size_t i = 0; i < n_t; ++i) {
    if (out.vertex_of[i] >= 0) continue;
    ++out.repairs;
    int best = 0;
    double best_d = 0.0;
    bool found = false;
    for (std::size_t k = 0; k < n_vertices; ++k) {
      if (count[k] == 0) continue;
      const double d = std::fabs(tracks[i].z0 - mean_z[k]);
      if (!found || d < best_d) {
        best = static_cast<int>(k);
        best_d = d;
        found = true;
      }
    }
    out.vertex_of[i] = found ? best : 0;
  }
  return out;
}

VertexToy generate_vertex_toy(std::size_t n_vertices, std::size_t n_tracks,
                              double separation_sigma, double delta_z,
                              std::uint64_t seed) {
  if (n_vertices < 1 || n_tracks < n_vertices)
    throw std::invalid_argument("generate_vertex_toy: bad sizes");
  if (!(delta_z > 0.0))
    throw std::invalid_argument("generate_vertex_toy: delta_z must be > 0");
  Rng rng(seed);
  VertexToy toy;
  const double spacing = separation_sigma * delta_z;
  for (std::size_t i = 0; i < n_tracks; ++i) {
    const std::size_t v = i % n_vertices;
    TrackZ t;
    t.delta_z = delta_z;
    t.z0 = static_cast<double>(v) * spacing + rng.normal(0.0, delta_z);
    toy.tracks.push_back(t);
    toy.truth_vertex.push_back(static_cast<int>(v));
  }
  return toy;
}

}  // namespace qpr::track
