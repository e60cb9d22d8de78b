#include <doctest.h>

#include "myller/model.hpp"

using namespace myller;

namespace {

Scenario base_darboux() {
  Scenario sc;
  sc.name = "t";
  sc.frame_kind = FrameKind::Darboux;
  DarbouxInvariants d;
  d.G = ScalarFunc::constant(3);
  d.K = ScalarFunc::constant(4);
  d.T = ScalarFunc::constant(5);
  d.c1 = ScalarFunc::constant(1);
  d.c2 = ScalarFunc::constant(0);
  d.c3 = ScalarFunc::constant(0);
  sc.darboux = d;
  sc.s_start = 0;
  sc.s_end = 1;
  sc.step = 0.01;
  return sc;
}

Scenario base_frenet() {
  Scenario sc;
  sc.name = "t";
  sc.frame_kind = FrameKind::Frenet;
  FrenetInvariants f;
  f.K1 = ScalarFunc::constant(1);
  f.K2 = ScalarFunc::constant(0.5);
  f.a1 = ScalarFunc::constant(1);
  f.a2 = ScalarFunc::constant(0);
  f.a3 = ScalarFunc::constant(0);
  sc.frenet = f;
  sc.s_start = 0;
  sc.s_end = 1;
  sc.step = 0.01;
  return sc;
}

bool mentions(const std::vector<std::string>& errs, const std::string& needle) {
  for (const std::string& e : errs)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("validate accepts an exact unit tangent tuple") {
  Scenario sc = base_frenet();
  CHECK(validate(sc).empty());
}

TEST_CASE("validate flags a non-unit tangent tuple") {
  Scenario sc = base_frenet();
  sc.frenet->a1 = ScalarFunc::constant(0.6);
  sc.frenet->a2 = ScalarFunc::constant(0.8);
  sc.frenet->a3 = ScalarFunc::constant(0.1);
  auto errs = validate(sc);
  CHECK(mentions(errs, "a not unit"));
}

TEST_CASE("validate flags non-positive K1") {
  Scenario sc = base_frenet();
  sc.frenet->K1 = ScalarFunc::constant(-1);
  CHECK(mentions(validate(sc), "K1 must be positive"));
}

TEST_CASE("validate checks the c tuple and domain shape") {
  Scenario sc = base_darboux();
  CHECK(validate(sc).empty());

  sc.darboux->c3 = ScalarFunc::constant(0.5);
  CHECK(mentions(validate(sc), "c not unit"));

  sc = base_darboux();
  sc.step = 0.5;  // > (s_end - s_start)/10
  CHECK(mentions(validate(sc), "step"));

  sc = base_darboux();
  sc.s_end = sc.s_start;
  CHECK_FALSE(validate(sc).empty());
}

TEST_CASE("validate flags a bad initial pose") {
  Scenario sc = base_darboux();
  sc.initial_pose.e2 = Vec3(0, 0.9, 0);
  CHECK(mentions(validate(sc), "initial pose"));
  // left-handed frame is also rejected
  sc = base_darboux();
  sc.initial_pose.e3 = Vec3(0, 0, -1);
  CHECK(mentions(validate(sc), "initial pose"));
}

TEST_CASE("validate is pure") {
  Scenario sc = base_darboux();
  sc.darboux->c1 = ScalarFunc::constant(0.9);
  auto a = validate(sc);
  auto b = validate(sc);
  CHECK(a == b);
}

TEST_CASE("frame pose helpers") {
  FramePose p;
  CHECK(p.orthonormal());
  CHECK(p.orthonormality_defect() == doctest::Approx(0.0));
  p.e1 = Vec3(1, 1e-4, 0);
  CHECK_FALSE(p.orthonormal());
}

TEST_CASE("helix kind names round trip") {
  for (HelixKind k : {HelixKind::Xi, HelixKind::Mu, HelixKind::V, HelixKind::Xi1,
                      HelixKind::Wn, HelixKind::Wr, HelixKind::Wo}) {
    auto back = helix_kind_from_name(helix_kind_name(k));
    REQUIRE(back.has_value());
    CHECK(*back == k);
  }
  CHECK_FALSE(helix_kind_from_name("nope").has_value());
}
