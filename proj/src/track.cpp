#include "qpr/track.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qpr/geom.hpp"
#include "qpr/rng.hpp"

namespace qpr::track {

double Hit::r() const { return std::hypot(x, y); }
double Hit::phi() const { return std::atan2(y, x); }

DetectorModel DetectorModel::barrel(std::size_t n_layers, double r_min,
                                    double r_max) {
  DetectorModel det;
  det.layer_radii.resize(n_layers);
  for (std::size_t i = 0; i < n_layers; ++i) {
    det.layer_radii[i] =
        n_layers == 1
            ? r_min
            : r_min + (r_max - r_min) * static_cast<double>(i) /
                          static_cast<double>(n_layers - 1);
  }
  return det;
}

void DetectorModel::validate() const {
  if (layer_radii.size() < 3)
    throw std::invalid_argument("DetectorModel: need >= 3 layers");
  for (std::size_t i = 0; i < layer_radii.size(); ++i) {
    if (!(layer_radii[i] > 0.0))
      throw std::invalid_argument("DetectorModel: radii must be > 0");
    if (i > 0 && !(layer_radii[i] > layer_radii[i - 1]))
      throw std::invalid_argument(
          "DetectorModel: radii must be strictly increasing");
  }
  if (!(b_field > 0.0))
    throw std::invalid_argument("DetectorModel: b_field must be > 0");
}

double curvature_radius_mm(double pt, double b_field) {
  return pt / (0.3 * b_field) * 1000.0;
}

ToyEvent generate_toy_event(std::size_t n_particles, const DetectorModel& det,
                            std::uint64_t seed) {
  det.validate();
  if (n_particles < 1)
    throw std::invalid_argument("generate_toy_event: n_particles must be >= 1");
  Rng rng(seed);
  ToyEvent ev;
  ev.particles.reserve(n_particles);
  int hit_id = 0;

  for (std::size_t ip = 0; ip < n_particles; ++ip) {
    ToyParticle part;
    const double inv_pt = rng.uniform(0.1, 2.0);  // 1/pt over [0.5, 10] GeV
    part.pt = 1.0 / inv_pt;
    part.phi0 = rng.uniform(0.0, 6.283185307179586);
    part.cot_theta = rng.uniform(-1.0, 1.0);
    part.z0 = rng.normal(0.0, 1.0);
    part.charge = rng.coin() ? 1 : -1;
    ev.particles.push_back(part);

    const double radius = curvature_radius_mm(part.pt, det.b_field);
    // circle center perpendicular to the initial direction; for charge q
    // in B || +z the track bends clockwise (q = +1)
    const double cx = part.charge * radius * std::sin(part.phi0);
    const double cy = -part.charge * radius * std::cos(part.phi0);

    for (std::size_t layer = 0; layer < det.layer_radii.size(); ++layer) {
      const double r = det.layer_radii[layer];
      if (r >= 2.0 * radius) break;  // layer never crossed
      // turn angle to the first crossing of the cylinder
      const double cos_t = 1.0 - r * r / (2.0 * radius * radius);
      const double t = std::acos(std::clamp(cos_t, -1.0, 1.0));
      const double rot = -part.charge * t;
      const double px = cx + std::cos(rot) * (-cx) - std::sin(rot) * (-cy);
      const double py = cy + std::sin(rot) * (-cx) + std::cos(rot) * (-cy);
      const double pz = part.z0 + part.cot_theta * radius * t;

      Hit hit;
      hit.x = px + (det.hit_sigma > 0.0 ? rng.normal(0.0, det.hit_sigma) : 0.0);
      hit.y = py + (det.hit_sigma > 0.0 ? rng.normal(0.0, det.hit_sigma) : 0.0);
      hit.z = pz + (det.hit_sigma > 0.0 ? rng.normal(0.0, det.hit_sigma) : 0.0);
      if (std::fabs(hit.z) > det.z_half_length) continue;
      hit.id = hit_id++;
      hit.layer = static_cast<int>(layer);
      hit.truth_particle = static_cast<long long>(ip);
      ev.hits.push_back(hit);
    }
  }
  return ev;
}

std::vector<Doublet> build_doublets(const std::vector<Hit>& hits,
                                    const DoubletCuts& cuts) {
  std::vector<std::size_t> order(hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(hits[a].layer, hits[a].id) <
           std::tie(hits[b].layer, hits[b].id);
  });

  std::vector<Doublet> out;
  for (std::size_t ia = 0; ia < order.size(); ++ia) {
    const Hit& a = hits[order[ia]];
    for (std::size_t ib = ia + 1; ib < order.size(); ++ib) {
      const Hit& b = hits[order[ib]];
      if (b.layer <= a.layer) continue;
      if (cuts.adjacent_layers_only && b.layer != a.layer + 1) {
        if (b.layer > a.layer + 1) break;  // sorted by layer
        continue;
      }
      const double dphi = wrap_angle(b.phi() - a.phi());
      if (std::fabs(dphi) > cuts.max_dphi) continue;
      const double dr = b.r() - a.r();
      if (dr <= 0.0) continue;
      if (std::fabs((b.z - a.z) / dr) > cuts.dz_dr_window) continue;
      out.push_back({a.id, b.id});
    }
  }
  return out;
}

namespace {

struct CircleFit {
  double curvature = 0.0;  // signed
  double d0 = 0.0;
};

CircleFit fit_circle_through(const Hit& a, const Hit& b, const Hit& c) {
  // circumcircle in the transverse plane
  const double ax = a.x, ay = a.y, bx = b.x, by = b.y, cx = c.x, cy = c.y;
  const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  const double chord_scale =
      std::hypot(bx - ax, by - ay) * std::hypot(cx - bx, cy - by) *
      std::hypot(cx - ax, cy - ay);
  CircleFit fit;
  if (std::fabs(d) < 1e-12 * std::max(1.0, chord_scale)) {
    // collinear: zero curvature, d0 = perpendicular distance of the line
    // from the origin
    const double ux = bx - ax, uy = by - ay;
    const double len = std::hypot(ux, uy);
    fit.curvature = 0.0;
    fit.d0 = len > 0.0 ? std::fabs(ax * uy - ay * ux) / len : std::hypot(ax, ay);
    return fit;
  }
  const double a2 = ax * ax + ay * ay;
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  const double ox = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
  const double oy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
  const double radius = std::hypot(ax - ox, ay - oy);
  const double orientation =
      (bx - ax) * (cy - by) - (by - ay) * (cx - bx);  // > 0: counterclockwise
  fit.curvature = (orientation >= 0.0 ? 1.0 : -1.0) / radius;
  fit.d0 = std::fabs(std::hypot(ox, oy) - radius);
  return fit;
}

}  // namespace

std::vector<Triplet> build_triplets(const std::vector<Doublet>& doublets,
                                    const std::vector<Hit>& hits,
                                    const TripletCuts& cuts) {
  std::map<int, const Hit*> by_id;
  for (const auto& h : hits) by_id[h.id] = &h;
  auto hit = [&](int id) -> const Hit& { return *by_id.at(id); };

  std::map<int, std::vector<std::size_t>> by_inner;
  for (std::size_t d = 0; d < doublets.size(); ++d)
    by_inner[doublets[d].a].push_back(d);

  std::vector<Triplet> out;
  for (std::size_t d1 = 0; d1 < doublets.size(); ++d1) {
    const auto it = by_inner.find(doublets[d1].b);
    if (it == by_inner.end()) continue;
    for (std::size_t d2 : it->second) {
      const Hit& a = hit(doublets[d1].a);
      const Hit& b = hit(doublets[d1].b);
      const Hit& c = hit(doublets[d2].b);

      const double dip1 = std::atan2(b.z - a.z, b.r() - a.r());
      const double dip2 = std::atan2(c.z - b.z, c.r() - b.r());
      if (std::fabs(dip2 - dip1) > cuts.max_dtheta) continue;

      const CircleFit fit = fit_circle_through(a, b, c);
      if (std::fabs(fit.curvature) > cuts.max_curvature) continue;

      Triplet t;
      t.a = a.id;
      t.b = b.id;
      t.c = c.id;
      t.curvature = fit.curvature;
      t.d0 = fit.d0;

      // least-squares line z(r) over the three hits
      const double rs[3] = {a.r(), b.r(), c.r()};
      const double zs[3] = {a.z, b.z, c.z};
      const double rm = (rs[0] + rs[1] + rs[2]) / 3.0;
      const double zm = (zs[0] + zs[1] + zs[2]) / 3.0;
      double sxx = 0.0, sxz = 0.0;
      for (int k = 0; k < 3; ++k) {
        sxx += (rs[k] - rm) * (rs[k] - rm);
        sxz += (rs[k] - rm) * (zs[k] - zm);
      }
      const double slope = sxx > 0.0 ? sxz / sxx : 0.0;
      t.polar_dir = std::atan(slope);
      t.z0 = zm - slope * rm;
      out.push_back(t);
    }
  }
  return out;
}

namespace {

/// Longest-path extraction over the segment chain graph. Nodes are kept
/// segments; edges connect chainable segments. Paths are extracted
/// longest-first, ties by smallest first hit id then lexicographic hit
/// sequence; used hits disqualify remaining segments.
TrackSet decode_chains(const std::vector<std::vector<int>>& seg_hits,
                       const std::vector<int>& seg_first_layer,
                       const std::vector<char>& kept,
                       const std::function<bool(int, int)>& chainable) {
  const std::size_t n = seg_hits.size();
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < n; ++i)
    if (kept[i]) nodes.push_back(i);

  // the chain graph is a DAG because layers strictly increase along
  // segments: a successor starts on a strictly higher layer
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t i : nodes)
    for (std::size_t j : nodes)
      if (i != j && chainable(static_cast<int>(i), static_cast<int>(j)))
        succ[i].push_back(j);

  std::set<int> used_hits;
  TrackSet out;
  std::vector<char> alive(n, 0);
  for (std::size_t i : nodes) alive[i] = 1;

  auto segment_usable = [&](std::size_t i) {
    if (!alive[i]) return false;
    for (int h : seg_hits[i])
      if (used_hits.count(h)) return false;
    return true;
  };

  for (;;) {
    // longest path by DP over the DAG restricted to usable segments
    std::vector<int> best_len(n, 0);
    std::vector<int> next(n, -1);
    std::vector<std::size_t> order = nodes;
    // reverse topological order: first-hit layer descending
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return seg_first_layer[a] > seg_first_layer[b];
    });
    bool any = false;
    for (std::size_t i : order) {
      if (!segment_usable(i)) continue;
      any = true;
      best_len[i] = 1;
      for (std::size_t j : succ[i]) {
        if (!segment_usable(j)) continue;
        if (best_len[j] + 1 > best_len[i] ||
            (best_len[j] + 1 == best_len[i] &&
             (next[i] < 0 || seg_hits[j] < seg_hits[static_cast<std::size_t>(
                                               next[i])]))) {
          best_len[i] = best_len[j] + 1;
          next[i] = static_cast<int>(j);
        }
      }
    }
    if (!any) break;

    std::size_t start = n;
    for (std::size_t i : nodes) {
      if (!segment_usable(i) || best_len[i] == 0) continue;
      if (start == n || best_len[i] > best_len[start] ||
          (best_len[i] == best_len[start] &&
           seg_hits[i] < seg_hits[start]))
        start = i;
    }
    if (start == n) break;

    std::vector<int> track;
    for (int cur = static_cast<int>(start); cur >= 0;
         cur = next[static_cast<std::size_t>(cur)]) {
      for (int h : seg_hits[static_cast<std::size_t>(cur)])
        if (track.empty() || std::find(track.begin(), track.end(), h) ==
                                 track.end())
          track.push_back(h);
      alive[static_cast<std::size_t>(cur)] = 0;
    }
    for (int h : track) used_hits.insert(h);
    out.tracks.push_back(std::move(track));
  }
  return out;
}

}  // namespace

namespace {
std::vector<int> first_layers(const std::vector<std::vector<int>>& seg_hits,
                              const std::vector<Hit>& hits) {
  std::map<int, int> layer_of;
  for (const auto& h : hits) layer_of[h.id] = h.layer;
  std::vector<int> out(seg_hits.size(), 0);
  for (std::size_t i = 0; i < seg_hits.size(); ++i) {
    const auto it = layer_of.find(seg_hits[i].front());
    if (it == layer_of.end())
      throw std::invalid_argument("decode_tracks: segment hit not in hits");
    out[i] = it->second;
  }
  return out;
}
}  // namespace

TrackSet decode_tracks(const BinaryConfig& solution,
                       const std::vector<Doublet>& doublets,
                       const std::vector<Hit>& hits) {
  if (solution.size() != doublets.size())
    throw std::invalid_argument("decode_tracks: solution size mismatch");
  std::vector<std::vector<int>> seg_hits(doublets.size());
  for (std::size_t i = 0; i < doublets.size(); ++i)
    seg_hits[i] = {doublets[i].a, doublets[i].b};
  std::vector<char> kept(doublets.size());
  for (std::size_t i = 0; i < doublets.size(); ++i)
    kept[i] = solution.values[i] ? 1 : 0;
  return decode_chains(seg_hits, first_layers(seg_hits, hits), kept,
                       [&](int i, int j) {
                         return doublets[static_cast<std::size_t>(i)].b ==
                                doublets[static_cast<std::size_t>(j)].a;
                       });
}

TrackSet decode_tracks(const BinaryConfig& solution,
                       const std::vector<Triplet>& triplets,
                       const std::vector<Hit>& hits) {
  if (solution.size() != triplets.size())
    throw std::invalid_argument("decode_tracks: solution size mismatch");
  std::vector<std::vector<int>> seg_hits(triplets.size());
  for (std::size_t i = 0; i < triplets.size(); ++i)
    seg_hits[i] = {triplets[i].a, triplets[i].b, triplets[i].c};
  std::vector<char> kept(triplets.size());
  for (std::size_t i = 0; i < triplets.size(); ++i)
    kept[i] = solution.values[i] ? 1 : 0;
  return decode_chains(seg_hits, first_layers(seg_hits, hits), kept,
                       [&](int i, int j) {
                         const Triplet& s = triplets[static_cast<std::size_t>(i)];
                         const Triplet& t = triplets[static_cast<std::size_t>(j)];
                         return s.b == t.a && s.c == t.b;
                       });
}

DoubletSet truth_doublets(const std::vector<Hit>& hits) {
  std::map<long long, std::vector<const Hit*>> by_particle;
  for (const auto& h : hits)
    if (h.truth_particle >= 0) by_particle[h.truth_particle].push_back(&h);
  DoubletSet out;
  for (auto& [pid, list] : by_particle) {
    std::sort(list.begin(), list.end(), [](const Hit* a, const Hit* b) {
      return std::tie(a->layer, a->id) < std::tie(b->layer, b->id);
    });
    for (std::size_t i = 0; i + 1 < list.size(); ++i)
      out.insert({list[i]->id, list[i + 1]->id});
  }
  return out;
}

DoubletSet kept_doublets(const BinaryConfig& solution,
                         const std::vector<Doublet>& doublets) {
  if (solution.size() != doublets.size())
    throw std::invalid_argument("kept_doublets: solution size mismatch");
  DoubletSet out;
  for (std::size_t i = 0; i < doublets.size(); ++i)
    if (solution.values[i]) out.insert({doublets[i].a, doublets[i].b});
  return out;
}

DoubletSet kept_doublets(const BinaryConfig& solution,
                         const std::vector<Triplet>& triplets) {
  if (solution.size() != triplets.size())
    throw std::invalid_argument("kept_doublets: solution size mismatch");
  DoubletSet out;
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    if (!solution.values[i]) continue;
    out.insert({triplets[i].a, triplets[i].b});
    out.insert({triplets[i].b, triplets[i].c});
  }
  return out;
}

SegmentMetrics doublet_metrics(const DoubletSet& kept,
                               const DoubletSet& truth) {
  std::size_t correct = 0;
  for (const auto& d : kept)
    if (truth.count(d)) ++correct;
  SegmentMetrics m;
  m.efficiency = truth.empty()
                     ? 1.0
                     : static_cast<double>(correct) /
                           static_cast<double>(truth.size());
  if (kept.empty()) {
    m.purity = truth.empty() ? 1.0 : 0.0;
  } else {
    m.purity =
        static_cast<double>(correct) / static_cast<double>(kept.size());
  }
  return m;
}

std::vector<Hit> load_hits_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open hits file: " + path);
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty file (missing header)");
  ++lineno;
  if (line.size() && line.back() == '\r') line.pop_back();
  if (line != "hit_id,x,y,z,layer,particle_id")
    throw std::runtime_error(path +
                             ":1: expected header hit_id,x,y,z,layer,"
                             "particle_id");
  std::vector<Hit> hits;
  std::set<int> ids;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 6)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 6 fields, got " +
                               std::to_string(fields.size()));
    Hit h;
    try {
      std::size_t pos = 0;
      h.id = std::stoi(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument(fields[0]);
      h.x = std::stod(fields[1], &pos);
      if (pos != fields[1].size()) throw std::invalid_argument(fields[1]);
      h.y = std::stod(fields[2], &pos);
      if (pos != fields[2].size()) throw std::invalid_argument(fields[2]);
      h.z = std::stod(fields[3], &pos);
      if (pos != fields[3].size()) throw std::invalid_argument(fields[3]);
      h.layer = std::stoi(fields[4], &pos);
      if (pos != fields[4].size()) throw std::invalid_argument(fields[4]);
      h.truth_particle = std::stoll(fields[5], &pos);
      if (pos != fields[5].size()) throw std::invalid_argument(fields[5]);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": malformed row");
    }
    if (!ids.insert(h.id).second)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": duplicate hit_id " + fields[0]);
    hits.push_back(h);
  }
  return hits;
}

void save_hits_csv(const std::vector<Hit>& hits, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write hits file: " + path);
  out << "hit_id,x,y,z,layer,particle_id\n";
  char buf[160];
  for (const auto& h : hits) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%d,%lld\n", h.id,
                  h.x, h.y, h.z, h.layer, h.truth_particle);
    out << buf;
  }
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace qpr::track
