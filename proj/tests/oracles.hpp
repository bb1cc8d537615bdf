#pragma once

// Independent reference implementations used only by the tests.

#include <cmath>
#include <cstddef>
#include <vector>

#include "ctxfuse/region_index.hpp"
#include "ctxfuse/types.hpp"

namespace ctxfuse::oracle {

// Joint likelihood by enumerating every assignment of the true-detection flag D over
// the detections: sum_d prod_s P(z_s | D=d_s, t) P(D=d_s | t), with
//   P(z | D=1, t) = pi * [t == predicted]  (direct)   or  pi  (indicative)
//   P(z | D=0, t) = 1 - pi
//   P(D=1 | t) = Pd(s, t).
inline double enumerated_joint_likelihood(const DetectionSet& z, ThreatType t, const Scenario& scenario) {
  const auto& dets = z.detections();
  const std::size_t n = dets.size();
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double term = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& d = dets[i];
      const auto& sensor = scenario.sensor(d.sensor_id);
      const double pd = sensor.detection_prior[t.index];
      const bool true_detection = ((mask >> i) & 1U) != 0;
      if (true_detection) {
        double given = d.confidence;
        if (sensor.level == EvidenceLevel::Direct && !(d.predicted_type && *d.predicted_type == t)) {
          given = 0.0;
        }
        term *= given * pd;
      } else {
        term *= (1.0 - d.confidence) * (1.0 - pd);
      }
    }
    total += term;
  }
  return total;
}

inline std::vector<double> enumerated_posterior(const DetectionSet& z, RegionType r, const Scenario& scenario) {
  std::vector<double> p(scenario.num_types());
  double norm = 0.0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    p[t] = scenario.regional_prior().rows[r.index][t] * enumerated_joint_likelihood(z, ThreatType{t}, scenario);
    norm += p[t];
  }
  for (auto& v : p) v /= norm;
  return p;
}

// Winding number of a closed ring around p (ring's last vertex repeats the first).
inline int winding_number(const Ring& ring, Point p) {
  int wn = 0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const Point a = ring[i];
    const Point b = ring[i + 1];
    const double side = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
    if (a.y <= p.y) {
      if (b.y > p.y && side > 0) ++wn;
    } else {
      if (b.y <= p.y && side < 0) --wn;
    }
  }
  return wn;
}

// Containment for polygons whose holes do not overlap each other.
inline bool winding_contains(const RegionPolygon& poly, Point p) {
  if (winding_number(poly.rings[0], p) == 0) return false;
  for (std::size_t h = 1; h < poly.rings.size(); ++h) {
    if (winding_number(poly.rings[h], p) != 0) return false;
  }
  return true;
}

inline double distance_to_segment(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double u = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  u = std::fmax(0.0, std::fmin(1.0, u));
  return std::hypot(p.x - (a.x + u * dx), p.y - (a.y + u * dy));
}

inline bool near_boundary(const RegionPolygon& poly, Point p, double eps) {
  for (const auto& ring : poly.rings) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
      if (distance_to_segment(p, ring[i], ring[i + 1]) < eps) return true;
    }
  }
  return false;
}

inline double poisson_pmf(std::size_t k, double lambda) {
  return std::exp(static_cast<double>(k) * std::log(lambda) - lambda - std::lgamma(static_cast<double>(k) + 1.0));
}

}  // namespace ctxfuse::oracle
