#include <doctest.h>

#include <cstring>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "pitchblur/pitchblur.hpp"
#include "support.hpp"

using namespace pitchblur;

namespace {

/// Two crops of one larger texture: frame b shows the content of frame a
/// moved by (sx, sy).
std::pair<Frame, Frame> shifted_pair(int w, int h, int sx, int sy, std::uint64_t seed) {
  constexpr int pad = 12;
  const auto big = oracle::textured_image(w + 2 * pad, h + 2 * pad, seed, 60.0);
  RgbImage a(w, h, 3), b(w, h, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        a(x, y, c) = big(x + pad, y + pad, c);
        b(x, y, c) = big(x + pad - sx, y + pad - sy, c);
      }
  return {Frame(0, a), Frame(1, b)};
}

struct Stats {
  double mean_dx = 0, mean_dy = 0, epe = 0;
};

Stats interior_stats(const FlowField& f, int sx, int sy, int margin) {
  Stats s;
  int n = 0;
  for (int y = margin; y < f.height() - margin; ++y)
    for (int x = margin; x < f.width() - margin; ++x) {
      const double dx = f.dx()(y, x), dy = f.dy()(y, x);
      s.mean_dx += dx;
      s.mean_dy += dy;
      s.epe += std::hypot(dx - sx, dy - sy);
      ++n;
    }
  s.mean_dx /= n;
  s.mean_dy /= n;
  s.epe /= n;
  return s;
}

void write_raw_flo(const std::filesystem::path& path, float magic, std::int32_t w, std::int32_t h,
                   const std::vector<float>& payload) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(&magic), 4);
  out.write(reinterpret_cast<const char*>(&w), 4);
  out.write(reinterpret_cast<const char*>(&h), 4);
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size() * 4));
}

}  // namespace

TEST_SUITE("flow") {
  TEST_CASE("horizontal shift of two pixels") {
    const auto [a, b] = shifted_pair(96, 80, 2, 0, 11);
    const auto s = interior_stats(estimate_flow(a, b), 2, 0, 12);
    CHECK(std::abs(s.mean_dx - 2.0) < 0.5);
    CHECK(std::abs(s.mean_dy) < 0.5);
    CHECK(s.epe < 0.5);
  }

  TEST_CASE("vertical shift of minus three pixels") {
    const auto [a, b] = shifted_pair(96, 80, 0, -3, 12);
    const auto s = interior_stats(estimate_flow(a, b), 0, -3, 12);
    CHECK(std::abs(s.mean_dx) < 0.5);
    CHECK(std::abs(s.mean_dy + 3.0) < 0.5);
    CHECK(s.epe < 0.5);
  }

  TEST_CASE("identical frames give a zero field") {
    const Frame a(0, oracle::textured_image(64, 48, 5));
    const auto f = estimate_flow(a, Frame(1, a.rgb()));
    CHECK((f.dx() == 0.0f).all());
    CHECK((f.dy() == 0.0f).all());
    const Frame flat(0, RgbImage(40, 40, 3, 90));
    const auto g = estimate_flow(flat, Frame(1, flat.rgb()));
    CHECK((g.dx() == 0.0f).all());
  }

  TEST_CASE("estimate is independent of worker count") {
    const auto [a, b] = shifted_pair(80, 64, 3, -2, 21);
    const auto one = estimate_flow(a, b, {}, 1);
    CHECK(one.bit_equal(estimate_flow(a, b, {}, 3)));
    CHECK(one.bit_equal(estimate_flow(a, b, {}, 8)));
  }

  TEST_CASE("tiny frames and parameter validation") {
    const Frame a(0, oracle::noise_image(3, 2, 1));
    const auto f = estimate_flow(a, Frame(1, a.rgb()));
    CHECK(f.width() == 3);
    CHECK(f.height() == 2);
    CHECK_THROWS_AS(estimate_flow(a, Frame(1, RgbImage(4, 2, 3))), ValidationError);
    FlowParams bad;
    bad.search_radius = 0;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    CHECK(max_displacement(FlowParams{}) == 14);
  }

  TEST_CASE("flow file with sixteen (1, 0) vectors") {
    testing::TempDir dir;
    std::vector<float> payload;
    for (int i = 0; i < 16; ++i) payload.insert(payload.end(), {1.0f, 0.0f});
    write_raw_flo(dir / "a.flo", 202021.25f, 4, 4, payload);
    const auto f = import_flow(dir / "a.flo");
    CHECK(f.width() == 4);
    CHECK(f.height() == 4);
    CHECK((f.dx() == 1.0f).all());
    CHECK((f.dy() == 0.0f).all());
    CHECK_THROWS_WITH_AS(import_flow(dir / "a.flo", std::pair{8, 8}), doctest::Contains("dimension mismatch"),
                         ValidationError);
  }

  TEST_CASE("malformed flow files") {
    testing::TempDir dir;
    write_raw_flo(dir / "magic.flo", 1.0f, 4, 4, std::vector<float>(32, 0.0f));
    CHECK_THROWS_WITH_AS(import_flow(dir / "magic.flo"), doctest::Contains("not a flow file"), ValidationError);
    write_raw_flo(dir / "short.flo", 202021.25f, 4, 4, std::vector<float>(31, 0.0f));
    CHECK_THROWS_WITH_AS(import_flow(dir / "short.flo"), doctest::Contains("truncated"), ValidationError);
    CHECK_THROWS_AS(import_flow(dir / "missing.flo"), ValidationError);
  }

  TEST_CASE("flow file round trip is bit-exact") {
    testing::TempDir dir;
    std::mt19937_64 rng(3);
    std::normal_distribution<float> g(0.0f, 7.0f);
    FlowPlane dx(13, 17), dy(13, 17);
    for (Eigen::Index i = 0; i < dx.size(); ++i) {
      dx.data()[i] = g(rng);
      dy.data()[i] = g(rng);
    }
    dx(0, 0) = -0.0f;
    dy(1, 1) = std::numeric_limits<float>::denorm_min();
    const FlowField f(dx, dy);
    export_flow(dir / "r.flo", f);
    CHECK(import_flow(dir / "r.flo", std::pair{17, 13}).bit_equal(f));
    CHECK(std::filesystem::file_size(dir / "r.flo") == 12u + 13u * 17u * 8u);
  }

  TEST_CASE("patch magnitude") {
    FlowField uniform(12, 12);
    uniform.dx().setConstant(3.0f);
    uniform.dy().setConstant(4.0f);
    CHECK(patch_flow_magnitude(uniform, {0, 1, 1, 10, 10}) == 500.0);
    CHECK(patch_flow_magnitude(uniform, {0, 1, 1, 10, 10}, MagnitudeMode::VectorSum) == doctest::Approx(500.0));
    CHECK(patch_flow_magnitude(FlowField(12, 12), {0, 2, 3, 5, 4}) == 0.0);
    CHECK_THROWS_AS(patch_flow_magnitude(uniform, {0, 5, 5, 10, 10}), ValidationError);

    std::mt19937_64 rng(8);
    std::normal_distribution<float> g(0.0f, 2.0f);
    FlowField f(8, 8);
    for (Eigen::Index i = 0; i < f.dx().size(); ++i) {
      f.dx().data()[i] = g(rng);
      f.dy().data()[i] = g(rng);
    }
    const PatchRegion all{0, 0, 0, 8, 8};
    for (auto mode : {MagnitudeMode::MagnitudeSum, MagnitudeMode::VectorSum}) {
      const double want = oracle::region_magnitude(f, all, mode);
      CHECK(patch_flow_magnitude(f, all, mode) == doctest::Approx(want).epsilon(1e-12));
    }
  }

  TEST_CASE("opposing vectors: magnitude sum counts them, vector sum cancels") {
    FlowField f(2, 1);
    f.dx()(0, 0) = 1.0f;
    f.dx()(0, 1) = -1.0f;
    CHECK(patch_flow_magnitude(f, {0, 0, 0, 2, 1}) == 2.0);
    CHECK(patch_flow_magnitude(f, {0, 0, 0, 2, 1}, MagnitudeMode::VectorSum) == 0.0);
  }
}
