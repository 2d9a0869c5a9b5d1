#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "irad/data.hpp"
#include "irad/errors.hpp"
#include "irad/eval.hpp"
#include "irad/rng.hpp"

using namespace irad;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("csv round-trip is bit-identical") {
  Rng rng(101);
  LabeledSet set;
  set.x = rng.normal_matrix(17, 5);
  set.x(3, 2) = 1e-17;          // exercises shortest-form exponents
  set.x(4, 1) = 123456789.25;
  set.y.assign(17, 0);
  set.y[5] = 1;
  set.domain = Domain::target;

  TempFile tmp("test_data_roundtrip.csv");
  save_csv(tmp.path, set);
  const LabeledSet back = load_csv(tmp.path);
  CHECK(back.x == set.x);
  CHECK(back.y == set.y);
  CHECK(back.domain == Domain::target);
}

TEST_CASE("csv loader accepts a minimal well-formed file") {
  TempFile tmp("test_data_minimal.csv");
  {
    std::ofstream out(tmp.path);
    out << "f0,f1,label,domain\n";
    out << "1.5,-2,0,source\n";
    out << "0.25,3e2,1,source\n";
  }
  const LabeledSet set = load_csv(tmp.path);
  CHECK(set.size() == 2);
  CHECK(set.x(1, 1) == 300.0);
  CHECK(set.y[1] == 1);
  CHECK(set.domain == Domain::source);
}

TEST_CASE("csv loader rejects malformed input with line numbers") {
  TempFile tmp("test_data_bad.csv");

  SUBCASE("non-finite value") {
    std::ofstream(tmp.path) << "f0,label,domain\nnan,0,source\n";
    CHECK_THROWS_WITH_AS(load_csv(tmp.path), doctest::Contains("line 2"), ParseError);
  }
  SUBCASE("wrong field count") {
    std::ofstream(tmp.path) << "f0,f1,label,domain\n1.0,0,source\n";
    CHECK_THROWS_WITH_AS(load_csv(tmp.path), doctest::Contains("line 2"), ParseError);
  }
  SUBCASE("bad label") {
    std::ofstream(tmp.path) << "f0,label,domain\n1.0,2,source\n";
    CHECK_THROWS_AS(load_csv(tmp.path), ParseError);
  }
  SUBCASE("bad header") {
    std::ofstream(tmp.path) << "a,b,label\n";
    CHECK_THROWS_AS(load_csv(tmp.path), ParseError);
  }
  SUBCASE("mixed domains") {
    std::ofstream(tmp.path) << "f0,label,domain\n1,0,source\n2,0,target\n";
    CHECK_THROWS_WITH_AS(load_csv(tmp.path), doctest::Contains("line 3"), ParseError);
  }
}

TEST_CASE("split is seeded, disjoint and exhaustive") {
  Rng rng(102);
  LabeledSet set;
  set.x = rng.normal_matrix(10, 3);
  set.y.assign(10, 0);

  const auto [a, b] = split(set, 0.5, 7);
  CHECK(a.size() == 5);
  CHECK(b.size() == 5);

  const auto [a2, b2] = split(set, 0.5, 7);
  CHECK(a.x == a2.x);
  CHECK(b.x == b2.x);

  // Union equals the input as a multiset of rows.
  std::vector<std::vector<double>> rows;
  for (const LabeledSet* part : {&a, &b}) {
    for (std::size_t i = 0; i < part->size(); ++i) {
      rows.emplace_back(part->x.row(i).begin(), part->x.row(i).end());
    }
  }
  std::vector<std::vector<double>> original;
  for (std::size_t i = 0; i < set.size(); ++i) {
    original.emplace_back(set.x.row(i).begin(), set.x.row(i).end());
  }
  std::sort(rows.begin(), rows.end());
  std::sort(original.begin(), original.end());
  CHECK(rows == original);

  CHECK_THROWS_AS(split(set, 0.0, 1), ContractError);
  CHECK_THROWS_AS(split(set, 1.0, 1), ContractError);
}

TEST_CASE("benchmark generation is deterministic and label-clean") {
  const BenchSpec spec;
  const TwoDomainData a = gen_two_domain(spec, 3);
  const TwoDomainData b = gen_two_domain(spec, 3);
  CHECK(a.source_train.x == b.source_train.x);
  CHECK(a.target_test.x == b.target_test.x);

  for (int y : a.source_train.y) CHECK(y == 0);
  for (int y : a.target_train.y) CHECK(y == 0);
  CHECK(a.source_train.size() == spec.n_source);
  CHECK(a.target_train.size() == spec.n_t);
  CHECK(a.target_test.size() == spec.n_test);
  CHECK(a.source_train.domain == Domain::source);
  CHECK(a.target_test.domain == Domain::target);

  bool has_anomaly = false, has_normal = false;
  for (int y : a.target_test.y) (y ? has_anomaly : has_normal) = true;
  CHECK(has_anomaly);
  CHECK(has_normal);

  const TwoDomainData c = gen_two_domain(spec, 4);
  CHECK(max_abs_diff(a.source_train.x, c.source_train.x) > 0.0);
}

TEST_CASE("latent-space oracle certifies every generated benchmark") {
  // Distance from the origin in the true shared latent space must separate
  // the classes; this certifies the benchmark itself, independent of any
  // learned model.
  const BenchSpec spec;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const TwoDomainDebug debug = gen_two_domain_debug(spec, seed);
    std::vector<double> scores(debug.target_test_latents.rows());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      double n2 = 0.0;
      for (std::size_t j = 0; j < debug.target_test_latents.cols(); ++j) {
        n2 += debug.target_test_latents(i, j) * debug.target_test_latents(i, j);
      }
      scores[i] = std::sqrt(n2);
    }
    CHECK(auroc(scores, debug.data.target_test.y) >= 0.95);
  }
}

TEST_CASE("source eval set carries both classes at a different rate") {
  const BenchSpec spec;
  const TwoDomainDebug debug = gen_two_domain_debug(spec, 1);
  double rate = 0.0;
  for (int y : debug.source_test.y) rate += y;
  rate /= static_cast<double>(debug.source_test.size());
  CHECK(rate > 0.0);
  CHECK(rate < 0.5);
  CHECK(debug.source_test.domain == Domain::source);
}

TEST_CASE("take_rows picks rows in order") {
  LabeledSet set;
  set.x = Matrix::from_rows({{1, 1}, {2, 2}, {3, 3}});
  set.y = {0, 1, 0};
  const LabeledSet picked = take_rows(set, {2, 0});
  CHECK(picked.x == Matrix::from_rows({{3, 3}, {1, 1}}));
  CHECK(picked.y == std::vector<int>{0, 0});
}
