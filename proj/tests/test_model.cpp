#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "irad/checkpoint.hpp"
#include "irad/errors.hpp"
#include "irad/model.hpp"
#include "irad/rng.hpp"

using namespace irad;

namespace {

ModelConfig small_config() {
  ModelConfig cfg;
  cfg.d_x = 6;
  cfg.d_z = 3;
  cfg.d_p = 3;
  cfg.hidden = 8;
  return cfg;
}

void zero_net(Mlp& net) {
  for (Matrix* p : mlp_parameters(net))
    for (std::size_t i = 0; i < p->size(); ++i) p->data()[i] = 0.0;
}

}  // namespace

TEST_CASE("zero-weight encoders produce zero codes") {
  Rng rng(41);
  IradModel m = make_model(small_config(), rng);
  zero_net(m.e_sh);
  const Matrix out = encode_shared(m, rng.normal_matrix(4, 6));
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out.data()[i] == 0.0);
}

TEST_CASE("encode ops preserve batch shape") {
  Rng rng(42);
  const IradModel m = make_model(small_config(), rng);
  const Matrix x = rng.normal_matrix(1, 6);
  CHECK(encode_shared(m, x).rows() == 1);
  CHECK(encode_shared(m, x).cols() == 3);
  CHECK(encode_private(m, x).cols() == 3);
  CHECK(discriminate(m, rng.normal_matrix(3, 6)).rows() == 3);
  CHECK(discriminate(m, rng.normal_matrix(3, 6)).cols() == 1);
}

TEST_CASE("encode and discriminate ops delegate to the underlying nets") {
  Rng rng(43);
  const IradModel m = make_model(small_config(), rng);
  const Matrix x = rng.normal_matrix(5, 6);
  CHECK(encode_shared(m, x) == mlp_forward(m.e_sh, x));
  CHECK(encode_private(m, x) == mlp_forward(m.e_pv, x));
  CHECK(discriminate(m, x) == mlp_forward(m.d_src, x));
}

TEST_CASE("generate concatenates codes and delegates") {
  Rng rng(44);
  const IradModel m = make_model(small_config(), rng);
  const Matrix z_sh = rng.normal_matrix(4, 3);
  const Matrix z_pv = rng.normal_matrix(4, 3);
  CHECK(generate(m, z_sh, z_pv) == mlp_forward(m.g_src, hcat(z_sh, z_pv)));
}

TEST_CASE("identity one-layer generator reproduces the concatenated codes") {
  Rng rng(45);
  ModelConfig cfg = small_config();
  IradModel m = make_model(cfg, rng);
  m.g_src.layers.clear();
  Layer layer;
  layer.weight = identity(6);
  layer.bias = Matrix(1, 6);
  layer.act = Activation::identity;
  m.g_src.layers.push_back(layer);

  const Matrix z_sh = rng.normal_matrix(2, 3);
  const Matrix z_pv = rng.normal_matrix(2, 3);
  CHECK(generate(m, z_sh, z_pv) == hcat(z_sh, z_pv));
}

TEST_CASE("zero generator weights give zero output") {
  Rng rng(46);
  IradModel m = make_model(small_config(), rng);
  zero_net(m.g_src);
  const Matrix out = generate(m, rng.normal_matrix(3, 3), rng.normal_matrix(3, 3));
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out.data()[i] == 0.0);
}

TEST_CASE("generate rejects mismatched batches") {
  Rng rng(47);
  const IradModel m = make_model(small_config(), rng);
  CHECK_THROWS_AS(generate(m, Matrix(2, 3), Matrix(3, 3)), ShapeError);
}

TEST_CASE("sum combination requires matching code dims and adds codes") {
  Rng rng(48);
  ModelConfig cfg = small_config();
  cfg.combine = Combine::sum;
  IradModel m = make_model(cfg, rng);
  const Matrix z_sh = rng.normal_matrix(2, 3);
  const Matrix z_pv = rng.normal_matrix(2, 3);
  CHECK(generate(m, z_sh, z_pv) == mlp_forward(m.g_src, add(z_sh, z_pv)));

  cfg.d_p = 4;
  CHECK_THROWS_AS(make_model(cfg, rng), ContractError);
}

TEST_CASE("noise substitution: stubbed z reduces to generate on shared codes") {
  Rng rng(49);
  const IradModel m = make_model(small_config(), rng);
  const Matrix x = rng.normal_matrix(4, 6);
  const Matrix z(4, 3);  // stubbed to zero
  CHECK(make_x_rnd_with(m, x, z) == generate(m, encode_shared(m, x), z));
}

TEST_CASE("make_x_rnd is deterministic under a fixed seed") {
  Rng rng(50);
  const IradModel m = make_model(small_config(), rng);
  const Matrix x = rng.normal_matrix(4, 6);
  Rng r1(123), r2(123);
  CHECK(make_x_rnd(m, x, r1) == make_x_rnd(m, x, r2));
}

TEST_CASE("noise spec samples standard normal entries") {
  Rng rng(51);
  const IradModel m = make_model(small_config(), rng);
  const NoiseSpec spec = noise_spec(m);
  CHECK(spec.dim == m.d_p);
  Rng noise_rng(52);
  const Matrix z = spec.sample(40000, noise_rng);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    sum += z.data()[i];
    sum_sq += z.data()[i] * z.data()[i];
  }
  const double n = static_cast<double>(z.size());
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(sum_sq / n - mean * mean - 1.0) < 0.02);
}

TEST_CASE("swapping only the shared code changes the generation") {
  Rng rng(53);
  const IradModel m = make_model(small_config(), rng);
  const Matrix z_pv = rng.normal_matrix(1, 3);
  const Matrix a = generate(m, rng.normal_matrix(1, 3), z_pv);
  const Matrix b = generate(m, rng.normal_matrix(1, 3), z_pv);
  CHECK(max_abs_diff(a, b) > 0.0);
}

TEST_CASE("model composition identity: reconstruction has data shape") {
  Rng rng(54);
  const IradModel m = make_model(small_config(), rng);
  const Matrix x = rng.normal_matrix(7, 6);
  const Matrix x_hat = generate(m, encode_shared(m, x), encode_private(m, x));
  CHECK(x_hat.rows() == 7);
  CHECK(x_hat.cols() == 6);
  CHECK(all_finite(x_hat));
}

TEST_CASE("checkpoint round-trips the model bit-exactly") {
  Rng rng(55);
  Checkpoint cp;
  cp.model = make_model(small_config(), rng);
  cp.seed = 77;

  const std::string path = "test_model_checkpoint_tmp.json";
  save_checkpoint(path, cp);
  const Checkpoint loaded = load_checkpoint(path);
  std::filesystem::remove(path);

  CHECK(loaded.seed == 77);
  CHECK(loaded.model.d_x == cp.model.d_x);
  CHECK(loaded.model.adv_mode == cp.model.adv_mode);
  const auto orig = mlp_parameters(cp.model.e_sh);
  const auto back = mlp_parameters(loaded.model.e_sh);
  REQUIRE(orig.size() == back.size());
  for (std::size_t i = 0; i < orig.size(); ++i) CHECK(*orig[i] == *back[i]);
  // Re-serialization is byte-identical.
  CHECK(checkpoint_to_json(cp) == checkpoint_to_json(loaded));
}

TEST_CASE("checkpoint parser rejects junk") {
  CHECK_THROWS_AS(checkpoint_from_json("{ not json"), ParseError);
  CHECK_THROWS_AS(checkpoint_from_json("{\"format\":\"other\"}"), ParseError);
}
