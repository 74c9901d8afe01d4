#include "trajscore/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace trajscore {

namespace {
constexpr double kTimeFloor = 1e-3;
}

double detection_cap(DetectionType type, double kappa) {
  switch (type) {
    case DetectionType::thw: return 2.0;
    case DetectionType::dmttcp: return 4.0;
    case DetectionType::ttc: return 2.0 * kappa;
    case DetectionType::drac: return 2.0 * kappa;
    case DetectionType::wp: return 7.75;
    case DetectionType::lon_accel: return 10.0;
    case DetectionType::lat_accel: return 20.0;
    case DetectionType::sideslip: return 8.725;
    case DetectionType::yaw_rate: return 3.141;
    case DetectionType::area_usage: return 5.0;
    case DetectionType::driving_direction: return 4.0;
    case DetectionType::velocity: return 10.0;
    case DetectionType::driving_behavior:
      return std::numeric_limits<double>::infinity();
    case DetectionType::trajectory: return 10.0;
  }
  return 0.0;
}

double score_detection_raw(const Detection& d, const AnalysisConfig& cfg) {
  switch (d.type) {
    case DetectionType::thw:
      return 1.0 / std::max(d.value, kTimeFloor);
    case DetectionType::dmttcp:
      return (1.0 / std::max(d.value, kTimeFloor)) *
             (4.0 / std::max(d.mttcp_subject + d.mttcp_partner, kTimeFloor));
    case DetectionType::ttc:
      return 2.0 * cfg.kappa / std::max(d.value, kTimeFloor);
    case DetectionType::drac:
      return cfg.kappa / 5.0 * d.value;
    case DetectionType::wp:
      return std::sqrt(std::max(d.value, 0.0));
    case DetectionType::lon_accel:
      return 0.1 * std::abs(std::abs(d.value) - d.limit);
    case DetectionType::lat_accel:
      return 2.0 * std::abs(std::abs(d.value) - d.limit);
    case DetectionType::sideslip:
      return 25.0 * std::abs(std::abs(d.value) - d.limit);
    case DetectionType::yaw_rate:
      return std::abs(std::abs(d.value) - d.limit);
    case DetectionType::area_usage:
      return 5.0;
    case DetectionType::driving_direction:
      return 4.0;
    case DetectionType::velocity:
      return 10.0 / d.limit * (d.value - d.limit);
    case DetectionType::driving_behavior:
      return 1.2 * d.value;
    case DetectionType::trajectory:
      return d.value;
  }
  return 0.0;
}

double score_detection(const Detection& d, const AnalysisConfig& cfg) {
  return std::min(score_detection_raw(d, cfg),
                  detection_cap(d.type, cfg.kappa));
}

RegionContext RegionContext::build(const std::vector<Detection>& detections,
                                   const RegionAssignments& assignments,
                                   size_t n_regions) {
  RegionContext ctx;
  ctx.detection_count.assign(n_regions, {});
  ctx.user_count.assign(n_regions, 0);
  for (const Detection& d : detections) {
    for (const RegionShare& rs : d.regions) {
      if (rs.region >= 0)
        ++ctx.detection_count[static_cast<size_t>(rs.region)]
                             [static_cast<size_t>(d.type)];
    }
  }
  for (const auto& track_assignment : assignments) {
    std::set<int> visited;
    for (const auto& per_state : track_assignment)
      for (const AssignmentEntry& e : per_state) visited.insert(e.region);
    for (int r : visited) ++ctx.user_count[static_cast<size_t>(r)];
  }
  return ctx;
}

double region_gamma(const RegionContext& ctx, int region, DetectionType type,
                    const AnalysisConfig& cfg) {
  double m = ctx.detection_count[static_cast<size_t>(region)]
                                [static_cast<size_t>(type)];
  double u = ctx.user_count[static_cast<size_t>(region)];
  if (m <= 0.0) return cfg.gamma_cap;
  return std::min(cfg.gamma_cap, u / (m * std::sqrt(m)));
}

std::vector<WeightedShare> detection_region_weights(const Detection& d,
                                                    const RegionContext& ctx,
                                                    const AnalysisConfig& cfg) {
  if (d.regions.empty()) return {{-1, 1.0}};

  struct Cand {
    double gamma;
    int region;
    double fraction;
  };
  std::vector<Cand> cands;
  cands.reserve(d.regions.size());
  for (const RegionShare& rs : d.regions)
    cands.push_back(
        {region_gamma(ctx, rs.region, d.type, cfg), rs.region, rs.fraction});
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return a.gamma != b.gamma ? a.gamma < b.gamma : a.region < b.region;
  });

  // Cheapest contexts first, until the footprint is accounted for.
  std::vector<WeightedShare> out;
  double covered = 0.0;
  for (const Cand& c : cands) {
    out.push_back({c.region, c.gamma * c.fraction});
    covered += c.fraction;
    if (covered >= 1.0) break;
  }
  for (WeightedShare& w : out) w.weight /= covered;
  return out;
}

double detection_gamma(const Detection& d, const RegionContext& ctx,
                       const AnalysisConfig& cfg) {
  double g = 0.0;
  for (const WeightedShare& w : detection_region_weights(d, ctx, cfg))
    g += w.weight;
  return g;
}

double interaction_punctual(int subject, int frame,
                            const std::vector<Detection>& frame_detections,
                            const AnalysisConfig& cfg) {
  double s_base = 0.0;
  std::set<int> partners;
  for (const Detection& d : frame_detections) {
    if (d.subject != subject || !is_relation_indicator(d.type) ||
        !d.active_at(frame))
      continue;
    s_base += score_detection(d, cfg);
    if (d.partner >= 0) partners.insert(d.partner);
  }
  double s_mutual = 0.0;
  for (int p : partners) {
    std::set<int> p_partners;
    for (const Detection& d : frame_detections) {
      if (d.subject != p || !is_relation_indicator(d.type) ||
          !d.active_at(frame))
        continue;
      if (d.partner >= 0 && d.partner != subject) p_partners.insert(d.partner);
    }
    double r_i = static_cast<double>(p_partners.size());
    for (const Detection& d : frame_detections) {
      if (d.subject != p || !is_relation_indicator(d.type) ||
          !d.active_at(frame) || d.partner == subject)
        continue;
      s_mutual += 0.1 * r_i * score_detection(d, cfg);
    }
  }
  return s_base * (1.0 + 0.1 * static_cast<double>(partners.size())) +
         s_mutual;
}

double anomaly_punctual(int subject, int frame,
                        const std::vector<Detection>& frame_detections,
                        const RegionContext& ctx, const AnalysisConfig& cfg) {
  double s = 0.0;
  for (const Detection& d : frame_detections) {
    if (d.subject != subject || !d.active_at(frame)) continue;
    s += score_detection(d, cfg) * detection_gamma(d, ctx, cfg);
  }
  return s;
}

double relevance_punctual(double s_interaction, double s_anomaly,
                          const AnalysisConfig& cfg) {
  return s_interaction * s_anomaly + cfg.gamma_interaction * s_interaction +
         cfg.gamma_anomaly * s_anomaly;
}

}  // namespace trajscore
