#include "qpr/track.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qpr/geom.hpp"

namespace qpr::track {

DoubletPrior DoubletPrior::fit(const std::vector<Hit>& calibration_hits) {
  DoubletPrior prior;
  std::map<int, const Hit*> by_id;
  for (const auto& h : calibration_hits) by_id[h.id] = &h;
  const DoubletSet truth = truth_doublets(calibration_hits);
  for (const auto& [ia, ib] : truth) {
    const Hit& a = *by_id.at(ia);
    const Hit& b = *by_id.at(ib);
    const double dr = b.r() - a.r();
    if (dr <= 0.0) continue;
    prior.points_.emplace_back(wrap_angle(b.phi() - a.phi()),
                               (b.z - a.z) / dr);
  }
  if (prior.points_.empty()) return prior;

  const double n = static_cast<double>(prior.points_.size());
  auto stddev = [&](auto get) {
    double mean = 0.0;
    for (const auto& pt : prior.points_) mean += get(pt);
    mean /= n;
    double acc = 0.0;
    for (const auto& pt : prior.points_) {
      const double d = get(pt) - mean;
      acc += d * d;
    }
    return std::sqrt(acc / std::max(1.0, n - 1.0));
  };
  const double scott = std::pow(n, -1.0 / 6.0);  // d = 2 features
  prior.bw_phi_ =
      std::max(1e-6, stddev([](const auto& p) { return p.first; }) * scott);
  prior.bw_slope_ =
      std::max(1e-6, stddev([](const auto& p) { return p.second; }) * scott);

  // normalize against the densest calibration point
  double max_d = 0.0;
  for (const auto& pt : prior.points_) {
    double acc = 0.0;
    for (const auto& q : prior.points_) {
      const double u = (pt.first - q.first) / prior.bw_phi_;
      const double v = (pt.second - q.second) / prior.bw_slope_;
      acc += std::exp(-0.5 * (u * u + v * v));
    }
    max_d = std::max(max_d, acc);
  }
  prior.max_density_ = max_d > 0.0 ? max_d : 1.0;
  return prior;
}

double DoubletPrior::operator()(const Hit& inner, const Hit& outer) const {
  if (points_.empty()) return 1.0;
  const double dr = outer.r() - inner.r();
  if (dr <= 0.0) return 0.0;
  const double f_phi = wrap_angle(outer.phi() - inner.phi());
  const double f_slope = (outer.z - inner.z) / dr;
  double acc = 0.0;
  for (const auto& q : points_) {
    const double u = (f_phi - q.first) / bw_phi_;
    const double v = (f_slope - q.second) / bw_slope_;
    acc += std::exp(-0.5 * (u * u + v * v));
  }
  return acc / max_density_;
}

namespace {

double clamped_cos_pow(double c, double lambda) {
  return c <= 0.0 ? 0.0 : std::pow(c, lambda);
}

}  // namespace

DpQuboResult dp_qubo(const std::vector<Doublet>& doublets,
                     const std::vector<Hit>& hits, const DpParams& params,
                     const DoubletPrior& prior) {
  std::map<int, const Hit*> by_id;
  for (const auto& h : hits) by_id[h.id] = &h;
  auto hit = [&](int id) -> const Hit& { return *by_id.at(id); };

  DpQuboResult res{QuboProblem(std::max<std::size_t>(doublets.size(), 1)), 0};
  if (doublets.empty()) return res;
  QuboProblem& q = res.problem;

  std::map<int, std::vector<std::size_t>> by_inner, by_outer;
  for (std::size_t d = 0; d < doublets.size(); ++d) {
    by_inner[doublets[d].a].push_back(d);
    by_outer[doublets[d].b].push_back(d);
  }

  // connected pairs: outer hit of d1 == inner hit of d2
  for (const auto& [mid, firsts] : by_outer) {
    const auto it = by_inner.find(mid);
    if (it == by_inner.end()) continue;
    for (std::size_t d1 : firsts) {
      for (std::size_t d2 : it->second) {
        const Hit& ha = hit(doublets[d1].a);
        const Hit& hb = hit(doublets[d1].b);
        const Hit& hc = hit(doublets[d2].b);

        const Vec3 seg1{hb.x - ha.x, hb.y - ha.y, hb.z - ha.z};
        const Vec3 seg2{hc.x - hb.x, hc.y - hb.y, hc.z - hb.z};
        const double len1 = norm(seg1);
        const double len2 = norm(seg2);
        if (len1 == 0.0 || len2 == 0.0) {
          ++res.skipped_pairs;
          continue;
        }
        const double cos_theta = dot(seg1, seg2) / (len1 * len2);
        const double t1 = std::hypot(seg1.x, seg1.y);
        const double t2 = std::hypot(seg2.x, seg2.y);
        double cos_phi = 0.0;
        if (t1 > 0.0 && t2 > 0.0)
          cos_phi = (seg1.x * seg2.x + seg1.y * seg2.y) / (t1 * t2);

        double w = -(clamped_cos_pow(cos_theta, params.lambda_exp) +
                     params.rho * clamped_cos_pow(cos_phi, params.lambda_exp)) /
                   (len1 + len2);

        const double r_a = ha.r();
        const double r_c = hc.r();
        if (r_c == r_a) {
          ++res.skipped_pairs;
          continue;
        }
        const double intercept = hc.z - (hc.z - ha.z) / (r_c - r_a) * r_c;
        w += params.eta * std::pow(std::fabs(intercept), params.zeta);

        q.add_pair_term(d1, d2, w);
      }
    }
  }

  // bifurcation penalty: shared inner or shared outer hit; the penalty sits
  // on both symmetric entries (2*alpha per kept pair in the double sum)
  auto penalize_group = [&](const std::vector<std::size_t>& group) {
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t j = i + 1; j < group.size(); ++j)
        q.add_pair_term(group[i], group[j], 2.0 * params.alpha);
  };
  for (const auto& [h, group] : by_inner) penalize_group(group);
  for (const auto& [h, group] : by_outer) penalize_group(group);

  for (std::size_t d = 0; d < doublets.size(); ++d) {
    const double p = prior(hit(doublets[d].a), hit(doublets[d].b));
    q.add_linear(d, -(params.beta * p - params.gamma));
  }
  return res;
}


QuboProblem triplet_qubo(const std::vector<Triplet>& triplets,
                         const TripletQuboParams& params) {
  const std::size_t n = triplets.size();
  QuboProblem q(std::max<std::size_t>(n, 1));
  if (n == 0) return q;

  double sigma_kappa = params.sigma_kappa;
  if (sigma_kappa <= 0.0) {
    std::vector<double> curv;
    curv.reserve(n);
    for (const auto& t : triplets) curv.push_back(std::fabs(t.curvature));
    std::sort(curv.begin(), curv.end());
    const double median = curv[curv.size() / 2];
    sigma_kappa = median > 0.0 ? 0.1 * median : 1e-4;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double a_i = params.w_d * triplets[i].d0 * triplets[i].d0 +
                       params.w_z * triplets[i].z0 * triplets[i].z0;
    if (a_i != 0.0) q.add_linear(i, a_i);
  }

  // group triplet indices by hit so only pairs sharing hits are touched
  std::map<int, std::vector<std::size_t>> by_hit;
  for (std::size_t i = 0; i < n; ++i) {
    by_hit[triplets[i].a].push_back(i);
    by_hit[triplets[i].b].push_back(i);
    by_hit[triplets[i].c].push_back(i);
  }
  std::set<std::pair<std::size_t, std::size_t>> done;
  auto shared_hits = [&](const Triplet& s, const Triplet& t) {
    int count = 0;
    for (int hs : {s.a, s.b, s.c})
      for (int ht : {t.a, t.b, t.c})
        if (hs == ht) ++count;
    return count;
  };

  for (const auto& [h, group] : by_hit) {
    for (std::size_t gi = 0; gi < group.size(); ++gi) {
      for (std::size_t gj = gi + 1; gj < group.size(); ++gj) {
        std::size_t i = group[gi], j = group[gj];
        if (i > j) std::swap(i, j);
        if (i == j || !done.insert({i, j}).second) continue;
        const Triplet& s = triplets[i];
        const Triplet& t = triplets[j];
        const int shared = shared_hits(s, t);
        double b_ij;
        if (shared == 2) {
          const bool extends = (s.b == t.a && s.c == t.b) ||
                               (t.b == s.a && t.c == s.b);
          if (extends) {
            const double dk = (s.curvature - t.curvature) / sigma_kappa;
            const double dt = (s.polar_dir - t.polar_dir) / params.sigma_theta;
            b_ij = -std::exp(-0.5 * dk * dk) * std::exp(-0.5 * dt * dt);
          } else {
            b_ij = params.conflict_value;
          }
        } else {  // shared == 1
          const bool chains = (s.c == t.a) || (t.c == s.a);
          if (chains) continue;  // compatible end-to-end sharing: b = 0
          b_ij = params.conflict_value;
        }
        q.add_pair_term(i, j, b_ij);
      }
    }
  }
  return q;
}



}  // namespace qpr::track
