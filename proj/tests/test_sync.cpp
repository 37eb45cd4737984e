#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pitchblur/pitchblur.hpp"

using namespace pitchblur;

namespace {

PoseTrack track_of(std::vector<Pose> poses) {
  const int joints = poses.front().joint_count();
  const int dims = poses.front().dims();
  for (std::size_t i = 0; i < poses.size(); ++i) poses[i].frame_id = static_cast<std::int64_t>(i);
  return PoseTrack(dims, default_joint_names(joints), std::move(poses));
}

std::vector<Pose> random_poses(std::mt19937_64& rng, std::size_t n, int joints, int dims) {
  std::vector<Pose> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(oracle::random_pose(rng, static_cast<std::int64_t>(i), joints, dims));
  return out;
}

Pose one_joint(double x, double y) {
  Pose p;
  p.joints.resize(1, 2);
  p.joints << x, y;
  return p;
}

}  // namespace

TEST_SUITE("sync") {
  TEST_CASE("pair cost hand examples") {
    std::mt19937_64 rng(1);
    const auto p = oracle::random_pose(rng, 0, 18, 3);
    CHECK(std::abs(pose_pair_cost(p, p)) <= 1e-15);
    CHECK(pose_pair_cost(one_joint(1, 0), one_joint(0, 1)) == 3.0);
    CHECK(pose_pair_cost(one_joint(1, 0), one_joint(0, 1), {2.0, 0.5}) == 4.5);
    // A zero vector has cosine 0.
    CHECK(pose_pair_cost(one_joint(0, 0), one_joint(3, 4)) == 26.0);
    CHECK_THROWS_AS(pose_pair_cost(one_joint(0, 0), oracle::random_pose(rng, 0, 2, 2)), ValidationError);
  }

  TEST_CASE("pair cost matches the scalar oracle") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> gain(0.0, 3.0);
    for (int trial = 0; trial < 300; ++trial) {
      const auto a = oracle::random_pose(rng, 0, 18, trial % 2 ? 2 : 3);
      const auto b = oracle::random_pose(rng, 0, 18, trial % 2 ? 2 : 3);
      const SyncWeights w{gain(rng), gain(rng)};
      const double want = oracle::pose_cost(a, b, w.spatial, w.temporal);
      CHECK(std::abs(pose_pair_cost(a, b, w) - want) <= 1e-12 * std::abs(want));
    }
  }

  TEST_CASE("identical tracks align on the diagonal") {
    std::mt19937_64 rng(3);
    const auto t = track_of(random_poses(rng, 5, 4, 2));
    const auto a = align_sequences(t, t);
    REQUIRE(a.pairs.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(a.pairs[i].gt == i);
      CHECK(a.pairs[i].pred == i);
    }
    CHECK(std::abs(a.total_cost) <= 1e-14);
  }

  TEST_CASE("an inserted estimate is skipped") {
    std::mt19937_64 rng(4);
    auto gt = random_poses(rng, 2, 3, 2);
    auto pred = gt;
    pred.insert(pred.begin() + 1, oracle::random_pose(rng, 0, 3, 2, 10.0));
    const auto a = align_sequences(track_of(gt), track_of(pred));
    REQUIRE(a.pairs.size() == 2);
    CHECK(a.pairs[0] == AlignedPair{0, 0, a.pairs[0].cost});
    CHECK(a.pairs[1].gt == 1);
    CHECK(a.pairs[1].pred == 2);
    CHECK(std::abs(a.total_cost) <= 1e-14);
  }

  TEST_CASE("longer ground truth is matched into by the estimate") {
    std::mt19937_64 rng(5);
    auto pred = random_poses(rng, 2, 3, 2);
    auto gt = pred;
    gt.insert(gt.begin(), oracle::random_pose(rng, 0, 3, 2, 10.0));
    const auto a = align_sequences(track_of(gt), track_of(pred));
    REQUIRE(a.pairs.size() == 2);
    CHECK(a.pairs[0].gt == 1);
    CHECK(a.pairs[0].pred == 0);
    CHECK(a.pairs[1].gt == 2);
    CHECK(a.pairs[1].pred == 1);
  }

  TEST_CASE("ties resolve to the lexicographically smallest pair list") {
    const Pose p = one_joint(1, 2);
    const auto gt = track_of({p});
    const auto pred = track_of({p, p, p});
    const auto a = align_sequences(gt, pred);
    REQUIRE(a.pairs.size() == 1);
    CHECK(a.pairs[0].pred == 0);
  }

  TEST_CASE("alignment equals exhaustive enumeration") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t ng = 1 + rng() % 8, np = 1 + rng() % 10;
      const auto gt = random_poses(rng, ng, 5, 2);
      const auto pred = random_poses(rng, np, 5, 2);
      const auto a = align_sequences(track_of(gt), track_of(pred));
      const auto brute = oracle::exhaustive_alignment(gt, pred, 1.0, 1.0);
      CHECK(std::abs(a.total_cost - brute.cost) <= 1e-12 * std::max(1.0, brute.cost));
      CHECK(a.pairs.size() == std::min(ng, np));
      for (std::size_t k = 1; k < a.pairs.size(); ++k) {
        CHECK(a.pairs[k].gt > a.pairs[k - 1].gt);
        CHECK(a.pairs[k].pred > a.pairs[k - 1].pred);
      }
    }
  }

  TEST_CASE("track validation") {
    std::mt19937_64 rng(7);
    const auto a = track_of(random_poses(rng, 3, 4, 2));
    const auto b = track_of(random_poses(rng, 3, 5, 2));
    CHECK_THROWS_AS(align_sequences(a, b), ValidationError);
    CHECK_THROWS_WITH_AS(align_sequences(a, PoseTrack(2, default_joint_names(4), {})), "empty track", ValidationError);
    CHECK_THROWS_AS(align_sequences(a, a, {-1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(align_sequences(a, a, {0.0, 0.0}), ValidationError);
  }

  TEST_CASE("trimming keeps the aligned frames") {
    std::vector<Frame> frames;
    for (int i = 0; i < 5; ++i) frames.emplace_back(10 + i, RgbImage(4, 4, 3, static_cast<std::uint8_t>(i)));
    const FrameSequence seq(frames);
    Alignment full;
    for (std::size_t i = 0; i < 5; ++i) full.pairs.push_back({i, i, 0.0});
    CHECK(trim_unannotated(seq, full) == seq);

    Alignment sparse;
    sparse.pairs = {{0, 1, 0.0}, {1, 3, 0.0}};
    const auto trimmed = trim_unannotated(seq, sparse);
    REQUIRE(trimmed.size() == 2);
    CHECK(trimmed[0].id() == 11);
    CHECK(trimmed[1].id() == 13);

    CHECK_THROWS_WITH_AS(trim_unannotated(seq, Alignment{}), "empty alignment", ValidationError);
    Alignment out_of_range;
    out_of_range.pairs = {{0, 7, 0.0}};
    CHECK_THROWS_AS(trim_unannotated(seq, out_of_range), ValidationError);
  }

  TEST_CASE("alignment file and histogram") {
    Alignment a;
    a.pairs = {{0, 0, 0.5}, {1, 2, 1.5}, {2, 3, 1.0}};
    a.total_cost = 3.0;
    std::ostringstream out;
    write_alignment(out, a);
    CHECK(out.str() == "0,0,0.5\n1,2,1.5\n2,3,1\ntotal_cost,3\n");

    const auto h = cost_histogram(a, 2);
    CHECK(h.lo == 0.5);
    CHECK(h.hi == 1.5);
    CHECK(h.counts == std::vector<std::size_t>{1, 2});
    CHECK_THROWS_AS(cost_histogram(a, 0), ValidationError);
  }

  TEST_CASE("scaling both gains scales costs and keeps the alignment") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const auto gt = track_of(random_poses(rng, 1 + rng() % 6, 4, 3));
      const auto pred = track_of(random_poses(rng, 1 + rng() % 8, 4, 3));
      const double c = 0.25 + 4.0 * static_cast<double>(rng() % 1000) / 1000.0;
      const auto base = align_sequences(gt, pred, {1.0, 1.0});
      const auto scaled = align_sequences(gt, pred, {c, c});
      REQUIRE(base.pairs.size() == scaled.pairs.size());
      for (std::size_t k = 0; k < base.pairs.size(); ++k) {
        CHECK(base.pairs[k].gt == scaled.pairs[k].gt);
        CHECK(base.pairs[k].pred == scaled.pairs[k].pred);
      }
      CHECK(std::abs(scaled.total_cost - c * base.total_cost) <= 1e-12 * c * base.total_cost);
    }
  }
}
