#include <doctest.h>

#include <atomic>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pitchblur/pitchblur.hpp"
#include "support.hpp"

using namespace pitchblur;

namespace {

std::string keypoint_rows(int joints, int dims, std::initializer_list<std::int64_t> ids) {
  std::ostringstream s;
  s << "#J=" << joints << ",gamma=" << dims << '\n';
  for (auto id : ids) {
    s << id;
    for (int k = 0; k < joints * dims; ++k) s << ',' << (k + 0.5);
    s << '\n';
  }
  return s.str();
}

PoseTrackLoad parse(const std::string& text, std::optional<int> dims = {}) {
  std::istringstream in(text);
  return read_pose_track(in, dims);
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("keypoint file with three rows of 18 3-D joints") {
    const auto load = parse(keypoint_rows(18, 3, {1, 2, 3}));
    CHECK(load.track.size() == 3);
    CHECK(load.track.joint_count() == 18);
    CHECK(load.track.dims() == 3);
    CHECK(load.skipped_rows == 0);
    CHECK(load.track[1].joints(0, 0) == 0.5);
    CHECK(load.track[1].joints(17, 2) == 53.5);
  }

  TEST_CASE("decreasing frame ids are rejected") {
    CHECK_THROWS_WITH_AS(parse(keypoint_rows(2, 2, {5, 3})), "non-monotone frame ids", ValidationError);
    CHECK_THROWS_AS(parse(keypoint_rows(2, 2, {5, 5})), ValidationError);
  }

  TEST_CASE("empty keypoint file is an empty track") {
    CHECK_THROWS_WITH_AS(parse(""), "empty track", ValidationError);
    CHECK_THROWS_WITH_AS(parse("#J=2,gamma=2\n\n"), "empty track", ValidationError);
  }

  TEST_CASE("malformed rows are skipped and counted, wrong field counts are errors") {
    const auto load = parse("#J=1,gamma=2\n1,0,0\n2,abc,0\n3,1,1\n");
    CHECK(load.track.size() == 2);
    CHECK(load.skipped_rows == 1);
    CHECK_THROWS_WITH_AS(parse("#J=1,gamma=2\n1,0,0\n2,0\n"), doctest::Contains("inconsistent J"), ValidationError);
    CHECK_THROWS_AS(parse("#J=1,gamma=2\n1,nan,0\n"), ValidationError);
    CHECK_THROWS_AS(parse("#J=1,gamma=2\n1,inf,0\n"), ValidationError);
  }

  TEST_CASE("header validation") {
    CHECK_THROWS_AS(parse("1,2,3\n"), ValidationError);
    CHECK_THROWS_AS(parse("#J=1,gamma=4\n1,2,3,4,5\n"), ValidationError);
    CHECK_THROWS_AS(parse("#J=2,gamma=2,a\n1,0,0,0,0\n"), ValidationError);
    CHECK_THROWS_AS(parse(keypoint_rows(1, 2, {1}), 3), ValidationError);
    const auto named = parse("#J=2,gamma=2,head,neck\n1,0,0,1,1\n");
    CHECK(named.track.joint_names() == std::vector<std::string>{"head", "neck"});
  }

  TEST_CASE("canonical keypoint writer round-trips bit-exactly") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> gap(1, 5);
    for (int trial = 0; trial < 50; ++trial) {
      const int dims = trial % 2 ? 2 : 3;
      const int joints = 1 + trial % 18;
      std::vector<Pose> poses;
      std::int64_t id = -3;
      for (int i = 0; i < 1 + trial % 7; ++i) {
        id += gap(rng);
        auto p = oracle::random_pose(rng, id, joints, dims, trial % 3 == 0 ? 1e-7 : 1e4);
        poses.push_back(p);
      }
      const PoseTrack track(dims, default_joint_names(joints), poses);
      std::ostringstream out;
      write_pose_track(out, track);
      const auto back = parse(out.str());
      REQUIRE(back.track.size() == track.size());
      for (std::size_t i = 0; i < track.size(); ++i) {
        CHECK(back.track[i].frame_id == track[i].frame_id);
        CHECK((back.track[i].joints.array() == track[i].joints.array()).all());
      }
      std::ostringstream again;
      write_pose_track(again, back.track);
      CHECK(again.str() == out.str());
    }
  }

  TEST_CASE("format_real is shortest round-trip") {
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(2.0) == "2");
    CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
  }

  TEST_CASE("PoseTrack invariants") {
    Pose p{1, JointMatrix::Zero(2, 2)};
    CHECK_THROWS_AS(PoseTrack(4, default_joint_names(2), {p}), ValidationError);
    CHECK_THROWS_AS(PoseTrack(3, default_joint_names(2), {p}), ValidationError);
    Pose q = p;
    q.joints(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(PoseTrack(2, default_joint_names(2), {q}), ValidationError);
    const PoseTrack t(2, default_joint_names(2), {Pose{1, JointMatrix::Zero(2, 2)}, Pose{4, JointMatrix::Ones(2, 2)}});
    CHECK(t.find(4) != nullptr);
    CHECK(t.find(2) == nullptr);
    CHECK(t.filter([](std::int64_t id) { return id > 1; }).size() == 1);
  }

  TEST_CASE("frame directory with three 1280x720 frames") {
    testing::TempDir dir;
    for (int id = 1; id <= 3; ++id) write_png(dir / frame_filename(id), RgbImage(1280, 720, 3, 40));
    testing::write_text(dir / "notes.txt", "ignored");
    const auto seq = load_frame_sequence(dir.path());
    CHECK(seq.size() == 3);
    CHECK(seq[0].id() == 1);
    CHECK(seq[2].id() == 3);
    CHECK(seq[1].width() == 1280);
    CHECK(seq[1].height() == 720);
  }

  TEST_CASE("mixed resolutions and empty directories are rejected") {
    testing::TempDir dir;
    CHECK_THROWS_WITH_AS(load_frame_sequence(dir.path()), doctest::Contains("no frames"), ValidationError);
    write_png(dir / frame_filename(1), RgbImage(1280, 720, 3));
    write_png(dir / frame_filename(2), RgbImage(640, 360, 3));
    CHECK_THROWS_WITH_AS(load_frame_sequence(dir.path()), doctest::Contains("mixed resolutions"), ValidationError);
  }

  TEST_CASE("png round trip is lossless") {
    testing::TempDir dir;
    const auto img = oracle::noise_image(37, 21, 3);
    write_png(dir / "a.png", img);
    CHECK(read_png(dir / "a.png") == img);
  }

  TEST_CASE("frame sequence invariants") {
    CHECK_THROWS_AS(FrameSequence({Frame(2, RgbImage(4, 4, 3)), Frame(1, RgbImage(4, 4, 3))}), ValidationError);
    CHECK_THROWS_AS(FrameSequence({Frame(1, RgbImage(4, 4, 3)), Frame(2, RgbImage(4, 5, 3))}), ValidationError);
    CHECK_THROWS_AS(Frame(1, RgbImage(4, 4, 1)), ValidationError);
    CHECK_THROWS_AS(RgbImage(0, 4, 3), ValidationError);
  }

  TEST_CASE("bounding boxes") {
    testing::TempDir dir;
    testing::write_text(dir / "boxes.csv", "frame_id,x,y,w,h\n1,10,10,20,20\n2,0.5,1.5,3,4\n");
    const auto boxes = load_boxes(dir / "boxes.csv");
    REQUIRE(boxes.size() == 2);
    CHECK(boxes[1].x == 0.5);
    CHECK_NOTHROW(check_box(boxes[0], 100, 100));
    CHECK_THROWS_AS(check_box(BoundingBox{1, 200, 200, 10, 10}, 100, 100), ValidationError);
    testing::write_text(dir / "bad.csv", "1,0,0,0,5\n");
    CHECK_THROWS_AS(load_boxes(dir / "bad.csv"), ValidationError);
  }

  TEST_CASE("split expectation") {
    const SplitExpectation expected;
    const auto match = validate_split({{"train", 105, {}}, {"validation", 15, {}}, {"test", 30, {}}}, expected);
    CHECK(match.overall == SplitStatus::Match);
    CHECK(std::string(to_string(match.overall)) == "match");

    const auto bad = validate_split({{"train", 100, {}}, {"validation", 20, {}}, {"test", 30, {}}}, expected);
    CHECK(bad.overall == SplitStatus::Mismatch);
    REQUIRE(bad.entries.size() == 3);
    CHECK(bad.entries[0].status == SplitStatus::Mismatch);
    CHECK(bad.entries[1].status == SplitStatus::Mismatch);
    CHECK(bad.entries[2].status == SplitStatus::Match);

    SplitExpectation off;
    off.enabled = false;
    CHECK(validate_split({}, off).overall == SplitStatus::Skipped);

    const auto frames = validate_split({{"train", 105, 21000}, {"validation", 15, 2962}, {"test", 30, 5988}}, expected);
    CHECK(frames.entries[0].status == SplitStatus::Mismatch);
  }

  TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex(std::string_view("")) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex(std::string_view("abc")) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("rng streams are reproducible and independent of order") {
    Rng a(derive_seed(9, 4)), b(derive_seed(9, 4)), c(derive_seed(9, 5));
    const double x = a.uniform01();
    CHECK(x == b.uniform01());
    CHECK(x != c.uniform01());
    Rng r(1);
    for (int i = 0; i < 1000; ++i) {
      const double u = r.uniform01();
      CHECK((u >= 0.0 && u < 1.0));
      CHECK(r.index(7) < 7);
    }
  }

  TEST_CASE("parallel_for covers every index once and rethrows") {
    for (unsigned threads : {1u, 2u, 5u, 16u}) {
      std::vector<std::atomic<int>> hits(37);
      parallel_for(0, hits.size(), threads, [&](std::size_t i) { hits[i]++; });
      for (auto& h : hits) CHECK(h.load() == 1);
    }
    CHECK_THROWS_AS(parallel_for(0, 10, 4, [](std::size_t i) {
                      if (i == 6) throw Error("boom");
                    }),
                    Error);
  }
}
