#pragma once

#include <array>
#include <vector>

#include "trajscore/config.hpp"
#include "trajscore/context_detections.hpp"
#include "trajscore/detections.hpp"

namespace trajscore {

/// Upper bound of the per-detection score; +inf for the uncapped type.
double detection_cap(DetectionType type, double kappa);

double score_detection_raw(const Detection& d, const AnalysisConfig& cfg);

/// Raw score clamped at the type cap.
double score_detection(const Detection& d, const AnalysisConfig& cfg);

/// Per-region rarity context: how many detections of each type a region
/// saw and how many distinct road users passed it.
struct RegionContext {
  // detection_count[region][type]
  std::vector<std::array<int, kDetectionTypeCount>> detection_count;
  std::vector<int> user_count;

  static RegionContext build(const std::vector<Detection>& detections,
                             const RegionAssignments& assignments,
                             size_t n_regions);
};

/// Rarity weight of one detection type within one region, capped.
double region_gamma(const RegionContext& ctx, int region, DetectionType type,
                    const AnalysisConfig& cfg);

/// Per-region split of a detection's rarity weight. Regions are chosen
/// greedily by ascending weight until the footprint fractions cover the
/// whole footprint; weights sum to the detection's overall gamma.
/// Off-map detections yield a single {-1, 1.0} share.
struct WeightedShare {
  int region = -1;
  double weight = 0.0;
};
std::vector<WeightedShare> detection_region_weights(const Detection& d,
                                                    const RegionContext& ctx,
                                                    const AnalysisConfig& cfg);

double detection_gamma(const Detection& d, const RegionContext& ctx,
                       const AnalysisConfig& cfg);

/// Interaction score of one road user at one frame. `frame_detections`
/// holds every detection (any subject) active at the frame.
double interaction_punctual(int subject, int frame,
                            const std::vector<Detection>& frame_detections,
                            const AnalysisConfig& cfg);

double anomaly_punctual(int subject, int frame,
                        const std::vector<Detection>& frame_detections,
                        const RegionContext& ctx, const AnalysisConfig& cfg);

double relevance_punctual(double s_interaction, double s_anomaly,
                          const AnalysisConfig& cfg);

}  // namespace trajscore
