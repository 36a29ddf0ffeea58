#include "qpr/jet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qpr/labels.hpp"
#include "qpr/rng.hpp"

namespace qpr {

double best_label_match(const std::vector<int>& a, const std::vector<int>& b,
                        std::size_t k) {
  if (a.size() != b.size())
    throw std::invalid_argument("best_label_match: size mismatch");
  if (a.empty()) return 1.0;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t match = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const int la = a[i];
      if (la >= 0 && static_cast<std::size_t>(la) < k &&
          perm[static_cast<std::size_t>(la)] == b[i])
        ++match;
    }
    best = std::max(best, match);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(a.size());
}

}  // namespace qpr

namespace qpr::jet {

void Constituent::validate() const {
  if (!(e > 0.0)) throw std::invalid_argument("Constituent: e must be > 0");
  if (e * e < px * px + py * py + pz * pz - 1e-6)
    throw std::invalid_argument("Constituent: spacelike momentum");
}

JetEvent generate_jet_event(std::size_t n_jet, double sqrt_s, double spread,
                            std::size_t n_constituents_per_jet,
                            std::uint64_t seed) {
  if (n_jet != 2 && n_jet != 4 && n_jet != 6)
    throw std::invalid_argument("generate_jet_event: n_jet must be 2, 4 or 6");
  if (!(spread > 0.0))
    throw std::invalid_argument("generate_jet_event: spread must be > 0");
  if (n_constituents_per_jet < 1)
    throw std::invalid_argument("generate_jet_event: need >= 1 constituent");
  if (!(sqrt_s > 0.0))
    throw std::invalid_argument("generate_jet_event: sqrt_s must be > 0");

  Rng rng(seed);
  JetEvent ev;
  ev.sqrt_s = sqrt_s;
  ev.n_jet = n_jet;
  const double parton_e = sqrt_s / static_cast<double>(n_jet);

  for (std::size_t pair = 0; pair < n_jet / 2; ++pair) {
    // isotropic axis
    const double cos_t = rng.uniform(-1.0, 1.0);
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    const double phi = rng.uniform(0.0, 6.283185307179586);
    const Vec3 axis{sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t};

    // orthonormal frame for the smearing plane
    const Vec3 ref = std::fabs(axis.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    const Vec3 u = normalized(cross(axis, ref));
    const Vec3 v = cross(axis, u);

    // symmetric Dirichlet(2) energy split: Gamma(2) = -log(u1 u2)
    std::vector<double> weights(n_constituents_per_jet);
    double wsum = 0.0;
    for (auto& w : weights) {
      const double u1 = 1.0 - rng.uniform();
      const double u2 = 1.0 - rng.uniform();
      w = -std::log(u1 * u2);
      wsum += w;
    }
    for (auto& w : weights) w /= wsum;

    std::vector<Vec3> dirs(n_constituents_per_jet);
    for (auto& d : dirs) {
      const double g1 = rng.normal(0.0, spread);
      const double g2 = rng.normal(0.0, spread);
      d = normalized(axis + u * g1 + v * g2);
    }

    // jet 2*pair along +axis, its mirror twin 2*pair+1 along -axis with
    // identical energy fractions: exact momentum balance
    for (std::size_t side = 0; side < 2; ++side) {
      const int label = static_cast<int>(2 * pair + side);
      for (std::size_t c = 0; c < n_constituents_per_jet; ++c) {
        const Vec3 dir = side == 0 ? dirs[c] : -dirs[c];
        const double e = parton_e * weights[c];
        ev.constituents.push_back(
            {e, e * dir.x, e * dir.y, e * dir.z});
        ev.truth_jet.push_back(label);
      }
    }
  }
  return ev;
}

ThrustResult thrust_axis_scan(const JetEvent& event) {
  const std::size_t n = event.constituents.size();
  if (n < 2)
    throw std::invalid_argument("thrust_axis_scan: need >= 2 constituents");
  if (n > 16)
    throw std::invalid_argument(
        "thrust_axis_scan: refusing N > 16 (exhaustive hemisphere scan)");

  double denom = 0.0;
  std::vector<Vec3> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = event.constituents[i].p();
    denom += norm(p[i]);
  }
  if (denom == 0.0) return {0.0, {1, 0, 0}};

  ThrustResult best{0.0, {1, 0, 0}};
  const std::size_t subsets = std::size_t{1} << n;
  for (std::size_t mask = 1; mask + 1 < subsets; ++mask) {
    Vec3 sum{};
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) sum += p[i];
    const double len = norm(sum);
    if (len == 0.0) continue;
    const Vec3 axis = sum * (1.0 / len);
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) num += std::fabs(dot(axis, p[i]));
    const double t = num / denom;
    if (t > best.thrust) {
      best.thrust = t;
      best.axis = axis;
    }
  }
  return best;
}

QuboProblem thrust_qubo(const JetEvent& event) {
  const std::size_t n = event.constituents.size();
  if (n < 2)
    throw std::invalid_argument("thrust_qubo: need >= 2 constituents");
  QuboProblem q(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 pi = event.constituents[i].p();
    for (std::size_t j = i; j < n; ++j) {
      const double v = -4.0 * dot(pi, event.constituents[j].p());
      if (v != 0.0) q.add_entry(i, j, v);
    }
  }
  return q;
}

double selection_thrust(const JetEvent& event, const BinaryConfig& s) {
  const std::size_t n = event.constituents.size();
  if (s.size() != n)
    throw std::invalid_argument("selection_thrust: size mismatch");
  Vec3 sum{};
  double denom = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    denom += norm(event.constituents[i].p());
    if (s.values[i]) sum += event.constituents[i].p();
  }
  return denom > 0.0 ? 2.0 * norm(sum) / denom : 0.0;
}

QuboProblem angle_qubo(const JetEvent& event) {
  const std::size_t n = event.constituents.size();
  if (n < 2)
    throw std::invalid_argument("angle_qubo: need >= 2 constituents");
  std::vector<double> mom(n);
  for (std::size_t i = 0; i < n; ++i) {
    mom[i] = norm(event.constituents[i].p());
    if (mom[i] == 0.0)
      throw std::invalid_argument("angle_qubo: zero-momentum constituent");
  }
  QuboProblem q(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 pi = event.constituents[i].p();
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v =
          -dot(pi, event.constituents[j].p()) / (2.0 * mom[i] * mom[j]);
      if (v != 0.0) q.add_entry(i, j, v);
    }
  }
  return q;
}

std::vector<std::vector<double>> durham_matrix(const JetEvent& event) {
  const std::size_t n = event.constituents.size();
  std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ci = event.constituents[i];
    if (!(ci.e > 0.0))
      throw std::invalid_argument("durham_matrix: energies must be > 0");
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& cj = event.constituents[j];
      const double cos_ij = std::cos(angle_between(ci.p(), cj.p()));
      const double v =
          2.0 * std::min(ci.e * ci.e, cj.e * cj.e) * (1.0 - cos_ij);
      q[i][j] = q[j][i] = v;
    }
  }
  return q;
}

QuboProblem multijet_qubo(const std::vector<std::vector<double>>& q,
                          std::size_t n_jet, double lambda_pen) {
  const std::size_t n = q.size();
  if (n_jet < 2)
    throw std::invalid_argument("multijet_qubo: n_jet must be >= 2");
  if (n == 0) throw std::invalid_argument("multijet_qubo: empty matrix");
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i].size() != n)
      throw std::invalid_argument("multijet_qubo: matrix is not square");
    for (std::size_t j = i; j < n; ++j)
      if (q[i][j] != q[j][i])
        throw std::invalid_argument("multijet_qubo: matrix is not symmetric");
  }

  double lambda = lambda_pen;
  if (lambda <= 0.0) {
    double max_q = q[0][0];
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        max_q = std::max(max_q, q[i][j]);
        max_abs = std::max(max_abs, std::fabs(q[i][j]));
      }
    lambda = 1.1 * static_cast<double>(n) * max_q;
    if (!(lambda > 0.0))
      lambda = 1.0 + static_cast<double>(n) * max_abs;
  }

  QuboProblem out(n * n_jet);
  auto idx = [&](std::size_t i, std::size_t jet) { return i * n_jet + jet; };
  for (std::size_t jet = 0; jet < n_jet; ++jet) {
    for (std::size_t i = 0; i < n; ++i) {
      if (q[i][i] != 0.0) out.add_linear(idx(i, jet), q[i][i]);
      for (std::size_t j = i + 1; j < n; ++j)
        if (q[i][j] != 0.0)
          out.add_pair_term(idx(i, jet), idx(j, jet), 2.0 * q[i][j]);
    }
  }
  // lambda sum_i (1 - sum_n s)^2
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < n_jet; ++a) {
      out.add_linear(idx(i, a), -lambda);
      for (std::size_t b = a + 1; b < n_jet; ++b)
        out.add_pair_term(idx(i, a), idx(i, b), 2.0 * lambda);
    }
  }
  out.set_offset(out.offset() + lambda * static_cast<double>(n));
  return out;
}

JetAssignment eekt_cluster(const JetEvent& event, std::size_t k_target) {
  const std::size_t n = event.constituents.size();
  if (k_target < 1)
    throw std::invalid_argument("eekt_cluster: k_target must be >= 1");
  if (k_target > n)
    throw std::invalid_argument("eekt_cluster: k_target exceeds N");

  struct Cluster {
    Jet sum;
    std::vector<std::size_t> members;
  };
  std::vector<Cluster> clusters(n);
  for (std::size_t i = 0; i < n; ++i) {
    clusters[i].sum.add(event.constituents[i]);
    clusters[i].members = {i};
  }

  auto durham = [](const Jet& a, const Jet& b) {
    const Vec3 pa{a.px, a.py, a.pz};
    const Vec3 pb{b.px, b.py, b.pz};
    const double cos_ab = std::cos(angle_between(pa, pb));
    return 2.0 * std::min(a.e * a.e, b.e * b.e) * (1.0 - cos_ab);
  };

  while (clusters.size() > k_target) {
    std::size_t bi = 0, bj = 1;
    double best = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double d = durham(clusters[i].sum, clusters[j].sum);
        if (first || d < best) {  // ties keep the smallest (i, j)
          best = d;
          bi = i;
          bj = j;
          first = false;
        }
      }
    }
    Cluster merged;
    merged.sum = clusters[bi].sum;
    merged.sum.e += clusters[bj].sum.e;
    merged.sum.px += clusters[bj].sum.px;
    merged.sum.py += clusters[bj].sum.py;
    merged.sum.pz += clusters[bj].sum.pz;
    merged.members = clusters[bi].members;
    merged.members.insert(merged.members.end(), clusters[bj].members.begin(),
                          clusters[bj].members.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    clusters[bi] = std::move(merged);
  }

  JetAssignment out;
  out.n_jet = k_target;
  out.jet_of.assign(n, 0);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (std::size_t m : clusters[c].members)
      out.jet_of[m] = static_cast<int>(c);
  return out;
}

double kt_distance(const Constituent& a, const Constituent& b, int p_index,
                   double r_param) {
  if (!(r_param > 0.0))
    throw std::invalid_argument("kt_distance: R must be > 0");
  if (p_index != -1 && p_index != 0 && p_index != 1)
    throw std::invalid_argument("kt_distance: p must be -1, 0 or 1");
  const double pt_a = a.pt();
  const double pt_b = b.pt();
  if (p_index == -1 && (pt_a == 0.0 || pt_b == 0.0))
    throw std::invalid_argument("kt_distance: zero pT with p = -1");

  auto rapidity = [](const Constituent& c) {
    if (c.e <= std::fabs(c.pz))
      throw std::invalid_argument("kt_distance: rapidity undefined (|pz| >= E)");
    return 0.5 * std::log((c.e + c.pz) / (c.e - c.pz));
  };
  const double dy = rapidity(a) - rapidity(b);
  const double dphi = wrap_angle(std::atan2(a.py, a.px) -
                                 std::atan2(b.py, b.px));
  const double dr2 = dy * dy + dphi * dphi;

  double weight = 1.0;
  if (p_index == 1) weight = std::min(pt_a * pt_a, pt_b * pt_b);
  if (p_index == -1) weight = std::min(1.0 / (pt_a * pt_a), 1.0 / (pt_b * pt_b));
  return weight * dr2 / (r_param * r_param);
}

JetAssignment decode_jets(const BinaryConfig& solution, const JetEvent& event,
                          std::size_t n_jet) {
  const std::size_t n = event.constituents.size();
  if (solution.size() != n * n_jet)
    throw std::invalid_argument("decode_jets: solution size mismatch");
  JetAssignment out;
  out.n_jet = n_jet;
  out.jet_of.assign(n, -1);

  for (std::size_t i = 0; i < n; ++i) {
    int chosen = -1;
    int set_bits = 0;
    for (std::size_t jet = 0; jet < n_jet; ++jet) {
      if (solution.values[i * n_jet + jet]) {
        ++set_bits;
        if (chosen < 0) chosen = static_cast<int>(jet);
      }
    }
    if (set_bits > 1) ++out.violations;
    out.jet_of[i] = chosen;
  }

  // repair empty rows toward the best-aligned decoded jet axis
  std::vector<Vec3> axes(n_jet);
  for (std::size_t i = 0; i < n; ++i)
    if (out.jet_of[i] >= 0)
      axes[static_cast<std::size_t>(out.jet_of[i])] +=
          event.constituents[i].p();
  for (std::size_t i = 0; i < n; ++i) {
    if (out.jet_of[i] >= 0) continue;
    ++out.repairs;
    int best = 0;
    double best_proj = 0.0;
    bool found = false;
    for (std::size_t jet = 0; jet < n_jet; ++jet) {
      const double len = norm(axes[jet]);
      if (len == 0.0) continue;
      const double proj =
          dot(event.constituents[i].p(), axes[jet]) * (1.0 / len);
      if (!found || proj > best_proj) {
        best = static_cast<int>(jet);
        best_proj = proj;
        found = true;
      }
    }
    out.jet_of[i] = found ? best : 0;
  }
  return out;
}

double jet_efficiency(const JetAssignment& assignment,
                      const JetAssignment& reference) {
  if (assignment.jet_of.size() != reference.jet_of.size() ||
      assignment.n_jet != reference.n_jet)
    throw std::invalid_argument("jet_efficiency: size mismatch");
  return best_label_match(assignment.jet_of, reference.jet_of,
                          assignment.n_jet);
}

std::vector<Jet> jets_from_assignment(const JetEvent& event,
                                      const JetAssignment& assignment) {
  std::vector<Jet> jets(assignment.n_jet);
  for (std::size_t i = 0; i < event.constituents.size(); ++i) {
    const int jet = assignment.jet_of[i];
    if (jet >= 0 && static_cast<std::size_t>(jet) < jets.size())
      jets[static_cast<std::size_t>(jet)].add(event.constituents[i]);
  }
  return jets;
}

double invariant_mass(const std::vector<Jet>& jets) {
  if (jets.empty()) throw std::invalid_argument("invariant_mass: no jets");
  double e = 0.0;
  Vec3 p{};
  for (const auto& jet : jets) {
    e += jet.e;
    p += Vec3{jet.px, jet.py, jet.pz};
  }
  return std::sqrt(std::max(0.0, e * e - norm2(p)));
}

JetEvent load_constituents_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open constituents file: " + path);
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty file (missing header)");
  ++lineno;
  if (line.size() && line.back() == '\r') line.pop_back();
  if (line != "e,px,py,pz,truth_jet")
    throw std::runtime_error(path + ":1: expected header e,px,py,pz,truth_jet");
  JetEvent ev;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 5)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 5 fields");
    Constituent c;
    int label = -1;
    try {
      std::size_t pos = 0;
      c.e = std::stod(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument(fields[0]);
      c.px = std::stod(fields[1], &pos);
      if (pos != fields[1].size()) throw std::invalid_argument(fields[1]);
      c.py = std::stod(fields[2], &pos);
      if (pos != fields[2].size()) throw std::invalid_argument(fields[2]);
      c.pz = std::stod(fields[3], &pos);
      if (pos != fields[3].size()) throw std::invalid_argument(fields[3]);
      label = std::stoi(fields[4], &pos);
      if (pos != fields[4].size()) throw std::invalid_argument(fields[4]);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": malformed row");
    }
    c.validate();
    ev.constituents.push_back(c);
    ev.truth_jet.push_back(label);
    max_label = std::max(max_label, label);
  }
  ev.n_jet = static_cast<std::size_t>(std::max(max_label + 1, 2));
  double e_tot = 0.0;
  for (const auto& c : ev.constituents) e_tot += c.e;
  ev.sqrt_s = e_tot;
  return ev;
}

void save_constituents_csv(const JetEvent& event, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write constituents file: " + path);
  out << "e,px,py,pz,truth_jet\n";
  char buf[160];
  for (std::size_t i = 0; i < event.constituents.size(); ++i) {
    const auto& c = event.constituents[i];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d\n", c.e, c.px,
                  c.py, c.pz, event.truth_jet[i]);
    out << buf;
  }
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace qpr::jet
