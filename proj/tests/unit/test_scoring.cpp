#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "trajscore/scoring.hpp"

using namespace trajscore;

namespace {

Detection det(DetectionType type, double value, int subject = 0,
              int partner = -1, int frame = 0) {
  Detection d;
  d.type = type;
  d.subject = subject;
  d.partner = partner;
  d.frame_begin = d.frame_end = frame;
  d.value = value;
  return d;
}

/// Reference scoring-table evaluator, written independently of the library.
double reference_score(const Detection& d, double kappa) {
  const auto floored = [](double t) { return t < 1e-3 ? 1e-3 : t; };
  const double excess = std::fabs(std::fabs(d.value) - d.limit);
  switch (d.type) {
    case DetectionType::thw: return 1.0 / floored(d.value);
    case DetectionType::dmttcp:
      return 4.0 / (floored(d.value) *
                    floored(d.mttcp_subject + d.mttcp_partner));
    case DetectionType::ttc: return kappa * 2.0 / floored(d.value);
    case DetectionType::drac: return d.value * kappa / 5.0;
    case DetectionType::wp: return std::sqrt(d.value);
    case DetectionType::lon_accel: return excess / 10.0;
    case DetectionType::lat_accel: return excess * 2.0;
    case DetectionType::sideslip: return excess * 25.0;
    case DetectionType::yaw_rate: return excess;
    case DetectionType::area_usage: return 5.0;
    case DetectionType::driving_direction: return 4.0;
    case DetectionType::velocity: return (d.value - d.limit) * 10.0 / d.limit;
    case DetectionType::driving_behavior: return d.value * 6.0 / 5.0;
    case DetectionType::trajectory: return d.value;
  }
  return 0.0;
}

Detection random_detection(DetectionType type, std::mt19937& rng) {
  std::uniform_real_distribution<double> utime(0.05, 6.0);
  std::uniform_real_distribution<double> umag(0.0, 12.0);
  std::uniform_real_distribution<double> ulimit(0.5, 8.0);
  Detection d = det(type, 0.0);
  switch (type) {
    case DetectionType::thw:
    case DetectionType::ttc:
      d.value = utime(rng);
      break;
    case DetectionType::dmttcp:
      d.value = utime(rng);
      d.mttcp_subject = utime(rng);
      d.mttcp_partner = utime(rng);
      break;
    case DetectionType::drac:
    case DetectionType::wp:
    case DetectionType::driving_behavior:
    case DetectionType::trajectory:
      d.value = umag(rng);
      break;
    case DetectionType::velocity:
      d.limit = ulimit(rng);
      d.value = d.limit + umag(rng);
      break;
    default:
      d.limit = ulimit(rng);
      d.value = (rng() % 2 ? 1.0 : -1.0) * (d.limit + umag(rng));
      break;
  }
  return d;
}

const DetectionType kAllTypes[] = {
    DetectionType::thw,          DetectionType::ttc,
    DetectionType::drac,         DetectionType::dmttcp,
    DetectionType::wp,           DetectionType::lon_accel,
    DetectionType::lat_accel,    DetectionType::sideslip,
    DetectionType::yaw_rate,     DetectionType::area_usage,
    DetectionType::driving_direction, DetectionType::velocity,
    DetectionType::driving_behavior,  DetectionType::trajectory,
};

}  // namespace

TEST_CASE("per-type scores match an independent evaluator on random grids") {
  std::mt19937 rng(29);
  AnalysisConfig cfg;
  for (DetectionType type : kAllTypes) {
    for (int i = 0; i < 1000; ++i) {
      Detection d = random_detection(type, rng);
      double raw = score_detection_raw(d, cfg);
      double ref = reference_score(d, cfg.kappa);
      CHECK(std::abs(raw - ref) <= 1e-12);
      double clamped = score_detection(d, cfg);
      CHECK(clamped <= detection_cap(type, cfg.kappa));
      CHECK(clamped >= 0.0);
      CHECK(clamped == std::min(raw, detection_cap(type, cfg.kappa)));
    }
  }
}

TEST_CASE("thw reference points") {
  AnalysisConfig cfg;
  CHECK(score_detection(det(DetectionType::thw, 1.0), cfg) ==
        doctest::Approx(1.0));
  CHECK(score_detection(det(DetectionType::thw, 0.25), cfg) ==
        doctest::Approx(2.0));
  // Degenerate time floors to 1e-3 and hits the cap.
  CHECK(score_detection(det(DetectionType::thw, 0.0), cfg) ==
        doctest::Approx(2.0));
}

TEST_CASE("kappa scales ttc and drac only") {
  AnalysisConfig k1, k2;
  k2.kappa = 2.0;
  CHECK(score_detection(det(DetectionType::ttc, 2.0), k2) ==
        doctest::Approx(2.0));
  std::mt19937 rng(31);
  for (DetectionType type : kAllTypes) {
    for (int i = 0; i < 50; ++i) {
      Detection d = random_detection(type, rng);
      double s1 = score_detection(d, k1);
      double s2 = score_detection(d, k2);
      if (type == DetectionType::ttc || type == DetectionType::drac) {
        if (s2 < detection_cap(type, k2.kappa))
          CHECK(s2 == doctest::Approx(2.0 * s1).epsilon(1e-12));
      } else {
        CHECK(s2 == s1);
      }
    }
  }
}

TEST_CASE("interaction: no detections means no interaction") {
  AnalysisConfig cfg;
  CHECK(interaction_punctual(0, 0, {}, cfg) == 0.0);
}

TEST_CASE("interaction: single thw against an idle partner") {
  AnalysisConfig cfg;
  std::vector<Detection> dets{det(DetectionType::thw, 1.0, 0, 1)};
  CHECK(interaction_punctual(0, 0, dets, cfg) == doctest::Approx(1.1));
}

TEST_CASE("interaction: three-vehicle chain, hand-evaluated") {
  AnalysisConfig cfg;
  Detection d5 = det(DetectionType::dmttcp, 1.0, 1, 0);
  d5.mttcp_subject = 1.0;
  d5.mttcp_partner = 3.0;
  std::vector<Detection> dets{
      det(DetectionType::thw, 1.0, 0, 1),  // score 1
      det(DetectionType::ttc, 2.0, 0, 1),  // score 1
      det(DetectionType::thw, 0.5, 1, 2),  // score 2
      det(DetectionType::wp, 4.0, 1),      // score 2
      d5,                                  // score 1
  };
  // Subject 0: base 2, one partner; partner 1 has one other partner and
  // 4.0 points of non-subject engagement.
  CHECK(interaction_punctual(0, 0, dets, cfg) ==
        doctest::Approx(2.0 * 1.1 + 0.1 * 1.0 * 4.0));
  // Subject 1: base 5 with two partners, neither of which has detections
  // of its own pointing elsewhere.
  CHECK(interaction_punctual(1, 0, dets, cfg) == doctest::Approx(6.0));
  // Subject 2 follows nobody; its only involvement is passive.
  CHECK(interaction_punctual(2, 0, dets, cfg) == doctest::Approx(0.0));
}

TEST_CASE("interaction ignores detections from other frames") {
  AnalysisConfig cfg;
  std::vector<Detection> dets{det(DetectionType::thw, 1.0, 0, 1, 7)};
  CHECK(interaction_punctual(0, 6, dets, cfg) == 0.0);
  CHECK(interaction_punctual(0, 7, dets, cfg) == doctest::Approx(1.1));
}

namespace {

RegionContext make_ctx(std::vector<std::array<int, kDetectionTypeCount>> counts,
                       std::vector<int> users) {
  RegionContext ctx;
  ctx.detection_count = std::move(counts);
  ctx.user_count = std::move(users);
  return ctx;
}

}  // namespace

TEST_CASE("region gamma arithmetic") {
  AnalysisConfig cfg;
  std::array<int, kDetectionTypeCount> row{};
  row[static_cast<size_t>(DetectionType::thw)] = 1;
  RegionContext ctx = make_ctx({row}, {1});
  CHECK(region_gamma(ctx, 0, DetectionType::thw, cfg) == doctest::Approx(1.0));

  row[static_cast<size_t>(DetectionType::thw)] = 100;
  ctx = make_ctx({row}, {100});
  CHECK(region_gamma(ctx, 0, DetectionType::thw, cfg) ==
        doctest::Approx(0.1));
}

TEST_CASE("region gamma is capped and antitone in the detection count") {
  AnalysisConfig cfg;
  std::array<int, kDetectionTypeCount> row{};
  row[static_cast<size_t>(DetectionType::ttc)] = 1;
  RegionContext ctx = make_ctx({row}, {100000});
  CHECK(region_gamma(ctx, 0, DetectionType::ttc, cfg) ==
        doctest::Approx(cfg.gamma_cap));
  double prev = cfg.gamma_cap + 1.0;
  for (int m = 40; m <= 400; m += 40) {
    ctx.detection_count[0][static_cast<size_t>(DetectionType::ttc)] = m;
    ctx.user_count[0] = 500;
    double g = region_gamma(ctx, 0, DetectionType::ttc, cfg);
    CHECK(g < prev);
    CHECK(g == doctest::Approx(500.0 / std::pow(m, 1.5)));
    prev = g;
  }
}

TEST_CASE("straddling detection picks the cheapest covering contexts") {
  AnalysisConfig cfg;
  std::array<int, kDetectionTypeCount> cheap{}, dear{};
  cheap[static_cast<size_t>(DetectionType::velocity)] = 100;  // gamma 0.1
  dear[static_cast<size_t>(DetectionType::velocity)] = 1;     // gamma 5
  RegionContext ctx = make_ctx({cheap, dear}, {100, 5});

  Detection d = det(DetectionType::velocity, 20.0);
  d.limit = 10.0;
  d.regions = {{0, 0.6}, {1, 0.4}};
  auto shares = detection_region_weights(d, ctx, cfg);
  REQUIRE(shares.size() == 2);
  CHECK(shares[0].region == 0);
  CHECK(shares[0].weight == doctest::Approx(0.06));
  CHECK(shares[1].region == 1);
  CHECK(shares[1].weight == doctest::Approx(2.0));
  CHECK(detection_gamma(d, ctx, cfg) == doctest::Approx(2.06));
}

TEST_CASE("greedy context choice equals exhaustive subset minimization") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> ufrac(0.1, 0.8);
  std::uniform_int_distribution<int> um(1, 200);
  AnalysisConfig cfg;
  const auto ti = static_cast<size_t>(DetectionType::trajectory);
  // The greedy prefix provably equals the exhaustive optimum for two
  // regions; larger straddles are checked against bounds below.
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2;
    std::vector<std::array<int, kDetectionTypeCount>> counts(
        static_cast<size_t>(k));
    std::vector<int> users(static_cast<size_t>(k));
    Detection d = det(DetectionType::trajectory, 3.0);
    for (int r = 0; r < k; ++r) {
      counts[static_cast<size_t>(r)][ti] = um(rng);
      users[static_cast<size_t>(r)] = um(rng);
      d.regions.push_back({r, ufrac(rng)});
    }
    RegionContext ctx = make_ctx(counts, users);
    double greedy = detection_gamma(d, ctx, cfg);

    double best = 1e300;
    for (int mask = 1; mask < (1 << k); ++mask) {
      double cover = 0.0, mass = 0.0;
      for (int r = 0; r < k; ++r) {
        if (!(mask & (1 << r))) continue;
        cover += d.regions[static_cast<size_t>(r)].fraction;
        mass += region_gamma(ctx, r, d.type, cfg) *
                d.regions[static_cast<size_t>(r)].fraction;
      }
      if (cover < 1.0 && mask != (1 << k) - 1) continue;
      best = std::min(best, mass / cover);
    }
    CHECK(greedy == doctest::Approx(best).epsilon(1e-12));
  }
  // Many-region straddles: the greedy weight always sits between the
  // cheapest and the dearest single-region gamma involved.
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 3 + static_cast<int>(rng() % 4);
    std::vector<std::array<int, kDetectionTypeCount>> counts(
        static_cast<size_t>(k));
    std::vector<int> users(static_cast<size_t>(k));
    Detection d = det(DetectionType::trajectory, 3.0);
    double lo = 1e300, hi = 0.0;
    for (int r = 0; r < k; ++r) {
      counts[static_cast<size_t>(r)][ti] = um(rng);
      users[static_cast<size_t>(r)] = um(rng);
      d.regions.push_back({r, ufrac(rng)});
    }
    RegionContext ctx = make_ctx(counts, users);
    for (int r = 0; r < k; ++r) {
      double g = region_gamma(ctx, r, d.type, cfg);
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    double greedy = detection_gamma(d, ctx, cfg);
    CHECK(greedy >= lo - 1e-12);
    CHECK(greedy <= hi + 1e-12);
  }
}

TEST_CASE("off-map detections carry unit weight") {
  AnalysisConfig cfg;
  RegionContext ctx = make_ctx({}, {});
  Detection d = det(DetectionType::area_usage, 0.0);
  auto shares = detection_region_weights(d, ctx, cfg);
  REQUIRE(shares.size() == 1);
  CHECK(shares[0].region == -1);
  CHECK(shares[0].weight == doctest::Approx(1.0));
  CHECK(anomaly_punctual(0, 0, {d}, ctx, cfg) == doctest::Approx(5.0));
}

TEST_CASE("anomaly sums gamma-weighted scores of the subject") {
  AnalysisConfig cfg;
  std::array<int, kDetectionTypeCount> row{};
  row[static_cast<size_t>(DetectionType::thw)] = 4;  // gamma 8/8 = 1
  row[static_cast<size_t>(DetectionType::area_usage)] = 1;  // gamma 8
  RegionContext ctx = make_ctx({row}, {8});
  Detection a = det(DetectionType::thw, 0.5, 0, 1);
  a.regions = {{0, 1.0}};
  Detection b = det(DetectionType::area_usage, 0.0, 0);
  b.regions = {{0, 1.0}};
  Detection other = det(DetectionType::thw, 0.5, 1, 0);
  other.regions = {{0, 1.0}};
  double s = anomaly_punctual(0, 0, {a, b, other}, ctx, cfg);
  CHECK(s == doctest::Approx(2.0 * 1.0 + 5.0 * 8.0));
}

TEST_CASE("relevance composition") {
  AnalysisConfig cfg;
  CHECK(relevance_punctual(0.0, 0.0, cfg) == 0.0);
  CHECK(relevance_punctual(2.0, 3.0, cfg) == doctest::Approx(16.3));
  CHECK(relevance_punctual(0.0, 4.0, cfg) == doctest::Approx(0.4));
  // Monotone in both arguments.
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    double si = u(rng), sa = u(rng), eps = u(rng) * 0.1;
    CHECK(relevance_punctual(si + eps, sa, cfg) >=
          relevance_punctual(si, sa, cfg));
    CHECK(relevance_punctual(si, sa + eps, cfg) >=
          relevance_punctual(si, sa, cfg));
  }
}
