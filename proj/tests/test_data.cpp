#include "danl/data.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "danl/error.hpp"
#include "danl/loss.hpp"
#include "doctest.h"

using namespace danl;

TEST_CASE("parse_libsvm basic line") {
  std::istringstream in("+1 1:0.5 3:1.0\n");
  const Dataset ds = parse_libsvm(in);
  REQUIRE(ds.size() == 1);
  CHECK(ds.dim == 3);
  CHECK(ds.samples[0].label == 1);
  REQUIRE(ds.samples[0].features.size() == 2);
  CHECK(ds.samples[0].features[0] == std::pair{0, 0.5});
  CHECK(ds.samples[0].features[1] == std::pair{2, 1.0});
}

TEST_CASE("parse_libsvm label mapping and global dimension") {
  std::istringstream in("-1 2:1\n+1 5:2\n");
  const Dataset ds = parse_libsvm(in);
  REQUIRE(ds.size() == 2);
  CHECK(ds.dim == 5);
  CHECK(ds.samples[0].label == 0);
  CHECK(ds.samples[1].label == 1);
}

TEST_CASE("parse_libsvm accepts 0/1 labels and blank lines") {
  std::istringstream in("0 1:1\n\n1 2:1\n");
  const Dataset ds = parse_libsvm(in);
  REQUIRE(ds.size() == 2);
  CHECK(ds.samples[0].label == 0);
  CHECK(ds.samples[1].label == 1);
}

TEST_CASE("parse_libsvm rejects malformed input with line numbers") {
  auto expect_fail = [](const char* text, const char* needle) {
    std::istringstream in(text);
    try {
      parse_libsvm(in);
      FAIL_CHECK("expected ConfigError for: " << text);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_fail("+1 1:0.5\n+2 1:1\n", "line 2");
  expect_fail("+1 1:0.5 1:0.7\n", "duplicate");
  expect_fail("+1 3:0.5 1:0.7\n", "out-of-order");
  expect_fail("+1 0:0.5\n", "index");
  expect_fail("+1 1:abc\n", "value");
  expect_fail("abc 1:0.5\n", "label");
  expect_fail("+1 1\n", "malformed");
}

TEST_CASE("parse_libsvm honors a dim override but rejects a short one") {
  std::istringstream in("+1 1:1\n");
  const Dataset ds = parse_libsvm(in, "", 123);
  CHECK(ds.dim == 123);
  std::istringstream in2("+1 7:1\n");
  CHECK_THROWS_AS(parse_libsvm(in2, "", 3), ConfigError);
}

TEST_CASE("serialize/parse round-trip is exact") {
  std::istringstream in(
      "+1 1:0.5 3:-1.25 7:3.333333333333333\n-1 2:1e-17\n+1 5:2\n");
  const Dataset ds = parse_libsvm(in);
  std::ostringstream out;
  serialize_libsvm(ds, out);
  std::istringstream back(out.str());
  const Dataset ds2 = parse_libsvm(back);
  REQUIRE(ds2.size() == ds.size());
  CHECK(ds2.dim == ds.dim);
  for (int i = 0; i < ds.size(); ++i) {
    CHECK(ds2.samples[i].label == ds.samples[i].label);
    REQUIRE(ds2.samples[i].features == ds.samples[i].features);
  }
}

TEST_CASE("shard_dataset splits into near-equal shards") {
  Dataset ds;
  ds.dim = 2;
  for (int i = 0; i < 103; ++i) ds.samples.push_back({{{0, double(i)}}, i % 2});

  const auto shards = shard_dataset(ds, 10, 7);
  REQUIRE(shards.size() == 10);
  int elevens = 0, tens = 0;
  std::multiset<double> seen;
  for (const Shard& s : shards) {
    if (s.size() == 11) ++elevens;
    if (s.size() == 10) ++tens;
    for (const Sample& sample : s.samples) seen.insert(sample.features[0].second);
  }
  CHECK(elevens == 3);
  CHECK(tens == 7);
  // Exact partition: every sample appears exactly once.
  CHECK(seen.size() == 103);
  for (int i = 0; i < 103; ++i) CHECK(seen.count(double(i)) == 1);
}

TEST_CASE("shard_dataset one sample per worker") {
  Dataset ds;
  ds.dim = 1;
  for (int i = 0; i < 10; ++i) ds.samples.push_back({{{0, 1.0}}, 1});
  const auto shards = shard_dataset(ds, 10, 3);
  for (const Shard& s : shards) CHECK(s.size() == 1);
  CHECK_THROWS_AS(shard_dataset(ds, 11, 3), ConfigError);
}

TEST_CASE("shard_dataset replays identically per seed") {
  Dataset ds;
  ds.dim = 3;
  for (int i = 0; i < 57; ++i) ds.samples.push_back({{{i % 3, double(i)}}, i % 2});
  const auto a = shard_dataset(ds, 7, 999);
  const auto b = shard_dataset(ds, 7, 999);
  const auto c = shard_dataset(ds, 7, 1000);
  REQUIRE(a.size() == b.size());
  bool same_as_c = true;
  for (std::size_t w = 0; w < a.size(); ++w) {
    REQUIRE(a[w].size() == b[w].size());
    for (int i = 0; i < a[w].size(); ++i) {
      CHECK(a[w].samples[i].features == b[w].samples[i].features);
      if (a[w].samples[i].features != c[w].samples[i].features)
        same_as_c = false;
    }
  }
  CHECK_FALSE(same_as_c);
}

TEST_CASE("synth_logistic is deterministic and well-formed") {
  const Dataset a = synth_logistic(2, 4, 7);
  const Dataset b = synth_logistic(2, 4, 7);
  REQUIRE(a.size() == 4);
  CHECK(a.dim == 2);
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.samples[i].label == b.samples[i].label);
    CHECK(a.samples[i].features == b.samples[i].features);
    CHECK((a.samples[i].label == 0 || a.samples[i].label == 1));
  }
}

TEST_CASE("synth_logistic labels track the generating probabilities") {
  ModelVector truth;
  const Dataset ds = synth_logistic(6, 10000, 11, &truth);
  REQUIRE(truth.size() == 6);
  double label_mean = 0.0;
  double p_mean = 0.0;
  for (const Sample& s : ds.samples) {
    label_mean += s.label;
    double z = 0.0;
    for (const auto& [idx, val] : s.features) z += truth[idx] * val;
    p_mean += sigmoid(z);
  }
  label_mean /= ds.size();
  p_mean /= ds.size();
  CHECK(std::abs(label_mean - p_mean) <= 0.25);
}

TEST_CASE("synth_logistic validates its arguments") {
  CHECK_THROWS_AS(synth_logistic(1, 10, 0), ConfigError);
  CHECK_THROWS_AS(synth_logistic(8, 4, 0), ConfigError);
}

TEST_CASE("synth_logistic_blocked confines samples to one region each") {
  const int d = 10, blocks = 4;
  ModelVector truth;
  const Dataset ds = synth_logistic_blocked(d, 40, blocks, 3.0, 5, &truth);
  REQUIRE(ds.size() == 40);
  CHECK(ds.dim == d);
  CHECK(std::abs(l2_norm(truth) - 3.0) <= 1e-12);
  // Region ranges for d=10, Q=4: [0,3) [3,6) [6,8) [8,10).
  const std::vector<std::pair<int, int>> ranges{{0, 3}, {3, 6}, {6, 8}, {8, 10}};
  for (const Sample& s : ds.samples) {
    REQUIRE(!s.features.empty());
    const int first = s.features.front().first;
    bool inside = false;
    for (const auto& [begin, end] : ranges) {
      if (first >= begin && first < end) {
        for (const auto& [idx, val] : s.features) {
          CHECK(idx >= begin);
          CHECK(idx < end);
        }
        inside = true;
      }
    }
    CHECK(inside);
  }
  const Dataset again = synth_logistic_blocked(d, 40, blocks, 3.0, 5);
  for (int i = 0; i < ds.size(); ++i)
    CHECK(ds.samples[i].features == again.samples[i].features);
}
