#include "danl/wire.hpp"

#include <cstring>

#include "danl/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace danl;

TEST_CASE("gradient report golden bytes") {
  GradientReport r;
  r.worker_id = 3;
  r.round = 258;  // 0x0102
  r.regions = {1};
  r.fragments = {{1.5}};
  const auto bytes = encode(r);
  // worker 3 | round 258 | 1 region | region 1 | len 1 | 1.5 as f64
  const std::vector<std::uint8_t> want{
      0x03, 0x00, 0x00, 0x00, 0x02, 0x01, 0x00, 0x00, 0x01, 0x00, 0x00,
      0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x00, 0x00,
      0x00, 0x00, 0x00, 0x00, 0xf8, 0x3f};
  CHECK(bytes == want);
}

TEST_CASE("gradient report round-trips") {
  Rng rng(91);
  for (int rep = 0; rep < 20; ++rep) {
    GradientReport r;
    r.worker_id = static_cast<int>(rng.below(100));
    r.round = static_cast<int>(rng.below(10000));
    const int n_regions = 1 + static_cast<int>(rng.below(5));
    for (int q = 0; q < n_regions; ++q) {
      r.regions.push_back(q);
      std::vector<double> frag(1 + rng.below(8));
      for (auto& v : frag) v = rng.normal();
      r.fragments.push_back(std::move(frag));
    }
    const GradientReport back = decode_gradient_report(encode(r));
    CHECK(back.worker_id == r.worker_id);
    CHECK(back.round == r.round);
    CHECK(back.regions == r.regions);
    CHECK(back.fragments == r.fragments);
  }
}

TEST_CASE("hessian report round-trips exactly") {
  Rng rng(92);
  HessianReport r;
  r.worker_id = 7;
  r.grad = oracle::random_vector(5, rng);
  r.hess = oracle::random_sym(5, rng);
  const HessianReport back = decode_hessian_report(encode(r));
  CHECK(back.worker_id == 7);
  CHECK(back.grad == r.grad);
  CHECK(back.hess.data() == r.hess.data());
}

TEST_CASE("decoder rejects truncated and oversized frames") {
  GradientReport r;
  r.worker_id = 1;
  r.round = 1;
  r.regions = {0};
  r.fragments = {{2.0, 3.0}};
  auto bytes = encode(r);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(decode_gradient_report(truncated), std::runtime_error);
  bytes.push_back(0x00);
  CHECK_THROWS_AS(decode_gradient_report(bytes), std::runtime_error);
}
