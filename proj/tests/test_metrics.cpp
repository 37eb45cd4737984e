#include <doctest.h>

#include <random>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "pitchblur/pitchblur.hpp"

using namespace pitchblur;

namespace {

PoseTrack two_joint_track(std::vector<std::pair<std::int64_t, JointMatrix>> rows) {
  std::vector<Pose> poses;
  for (auto& [id, m] : rows) poses.push_back({id, m});
  const auto dims = static_cast<int>(poses.front().joints.cols());
  const auto joints = static_cast<int>(poses.front().joints.rows());
  return PoseTrack(dims, default_joint_names(joints), std::move(poses));
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("identical tracks score zero") {
    std::mt19937_64 rng(1);
    std::vector<Pose> poses;
    for (int i = 0; i < 4; ++i) poses.push_back(oracle::random_pose(rng, i, 18, 3));
    const PoseTrack t(3, default_joint_names(18), poses);
    const auto r = mpjpe(t, t);
    CHECK(r.aggregate == 0.0);
    CHECK(r.frames == 4);
  }

  TEST_CASE("3-4-5 offset on one of two joints") {
    JointMatrix gt(2, 2), pred(2, 2);
    gt << 0, 0, 10, 10;
    pred << 3, 4, 10, 10;
    const auto r = mpjpe(two_joint_track({{7, pred}}), two_joint_track({{7, gt}}));
    REQUIRE(r.per_frame.size() == 1);
    CHECK(r.per_frame[0].frame_id == 7);
    CHECK(r.per_frame[0].loss == 2.5);
    CHECK(r.aggregate == 2.5);
  }

  TEST_CASE("random tracks match the scalar oracle and skip unmatched frames") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Pose> a, b;
      for (int id = 0; id < 12; ++id) {
        if (rng() % 4) a.push_back(oracle::random_pose(rng, id, 18, 3, 50.0));
        if (rng() % 4) b.push_back(oracle::random_pose(rng, id, 18, 3, 50.0));
      }
      if (a.empty() || b.empty()) continue;
      const PoseTrack pred(3, default_joint_names(18), a), gt(3, default_joint_names(18), b);
      double total = 0;
      std::size_t n = 0, only_pred = 0, only_gt = 0;
      for (const auto& p : a) {
        if (const Pose* g = gt.find(p.frame_id)) {
          total += oracle::frame_mpjpe(p, *g);
          ++n;
        } else {
          ++only_pred;
        }
      }
      for (const auto& g : b)
        if (!pred.find(g.frame_id)) ++only_gt;
      if (n == 0) {
        CHECK_THROWS_WITH_AS(mpjpe(pred, gt), "zero overlapping frames", ValidationError);
        continue;
      }
      const auto r = mpjpe(pred, gt);
      const double want = total / static_cast<double>(n);
      CHECK(std::abs(r.aggregate - want) <= 1e-12 * want);
      CHECK(r.frames == n);
      CHECK(r.skipped_pred.size() == only_pred);
      CHECK(r.skipped_gt.size() == only_gt);
    }
  }

  TEST_CASE("mismatched skeletons are rejected") {
    JointMatrix two(2, 2), three(3, 2);
    two.setZero();
    three.setZero();
    CHECK_THROWS_AS(mpjpe(two_joint_track({{1, two}}), two_joint_track({{1, three}})), ValidationError);
  }

  TEST_CASE("comparison tables") {
    EvalReport a, b;
    a.aggregate = 1.15;
    b.aggregate = 0.55;
    const std::vector<std::string> labels{"1 filter", "2 filters"};
    const std::vector<EvalReport> reports{a, b};
    const auto rows = compare_runs(reports, labels);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].label == "2 filters");
    CHECK(rows[0].loss == 0.55);

    const std::vector<EvalReport> one{b};
    const std::vector<std::string> one_label{"2"};
    const auto single = compare_runs(one, one_label);
    std::ostringstream out;
    write_comparison(out, single);
    CHECK(out.str() == "label,loss\n2,0.55\n");

    CHECK_THROWS_AS(compare_runs({}, {}), ValidationError);
    CHECK_THROWS_AS(compare_runs(reports, one_label), ValidationError);
  }

  TEST_CASE("report files") {
    JointMatrix gt(1, 2), pred(1, 2);
    gt << 0, 0;
    pred << 3, 4;
    const auto r = mpjpe(two_joint_track({{1, pred}, {2, pred}}), two_joint_track({{1, gt}, {3, gt}}));
    std::ostringstream csv;
    write_report_csv(csv, r);
    CHECK(csv.str() == "frame_id,loss\n1,5\naggregate,5\n");
    const auto j = nlohmann::json::parse(report_json(r));
    CHECK(j["aggregate"] == 5.0);
    CHECK(j["skipped_pred"] == std::vector<int>{2});
    CHECK(j["skipped_gt"] == std::vector<int>{3});
  }
}
