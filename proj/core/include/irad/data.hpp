#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "irad/matrix.hpp"
#include "irad/rng.hpp"

namespace irad {

enum class Domain { source, target };

const char* domain_name(Domain d);
Domain domain_from_name(const std::string& name);

// Feature matrix with binary labels: 0 normal, 1 anomalous. Training splits
// carry only label 0.
struct LabeledSet {
  Matrix x;
  std::vector<int> y;
  Domain domain = Domain::source;

  std::size_t size() const { return x.rows(); }
};

// Synthetic two-domain benchmark. Normals share a latent factor s ~ N(0,I_k);
// anomalies shift s by `shift` along a random direction. Each domain owns a
// random affine map, a private noise subspace p ~ N(0,I_m) and optional tanh
// squashing. The domain transforms are fixed by their seeds; the run seed
// varies the sampled data.
struct BenchSpec {
  std::size_t k_shared = 4;
  std::size_t m_private = 4;
  std::size_t d_x = 20;
  std::size_t n_source = 2000;
  std::size_t n_t = 50;
  std::size_t n_test = 1000;
  double shift = 4.0;
  std::uint64_t source_transform_seed = 11;
  std::uint64_t target_transform_seed = 22;
  bool nonlinearity = false;
};

struct TwoDomainData {
  LabeledSet source_train;
  LabeledSet target_train;
  LabeledSet target_test;
};

// Extended draw used by the evaluation harness: adds a labeled source-domain
// test set and the true shared latents of the target test rows (for
// certifying the benchmark against an oracle detector).
struct TwoDomainDebug {
  TwoDomainData data;
  LabeledSet source_test;
  Matrix target_test_latents;  // n_test x k_shared
};

TwoDomainData gen_two_domain(const BenchSpec& spec, std::uint64_t seed);
TwoDomainDebug gen_two_domain_debug(const BenchSpec& spec, std::uint64_t seed);

// CSV with header f0,...,f{d-1},label,domain. Doubles are written with
// shortest round-trip formatting, so save/load is bit-exact.
void save_csv(const std::string& path, const LabeledSet& set);
LabeledSet load_csv(const std::string& path);

// Seeded shuffle split into (first, second) with |first| = round(fraction*n).
// Disjoint and exhaustive.
std::pair<LabeledSet, LabeledSet> split(const LabeledSet& set, double fraction,
                                        std::uint64_t seed);

// Rows of `set` selected by index, preserving order.
LabeledSet take_rows(const LabeledSet& set, const std::vector<std::size_t>& rows);

}  // namespace irad
