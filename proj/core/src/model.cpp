#include "irad/model.hpp"

#include <array>
#include <vector>

#include "irad/errors.hpp"

namespace irad {

const char* combine_name(Combine c) { return c == Combine::concat ? "concat" : "sum"; }

Combine combine_from_name(const std::string& name) {
  if (name == "concat") return Combine::concat;
  if (name == "sum") return Combine::sum;
  throw ParseError("unknown combine mode '" + name + "'");
}

NoiseSpec noise_spec(const IradModel& m) { return NoiseSpec{m.d_p}; }

namespace {

Mlp make_net(std::size_t in, std::size_t out, const ModelConfig& cfg, Rng& rng) {
  std::vector<std::size_t> dims;
  dims.push_back(in);
  for (std::size_t i = 0; i < cfg.hidden_layers; ++i) dims.push_back(cfg.hidden);
  dims.push_back(out);
  std::vector<Activation> acts(cfg.hidden_layers, cfg.hidden_act);
  acts.push_back(Activation::identity);
  return make_mlp(dims, acts, rng);
}

void check_batch_dim(const Matrix& x, std::size_t dim, const char* what) {
  if (x.cols() != dim) {
    throw ShapeError(std::string(what) + ": input " + shape_string(x) +
                     " does not match expected width " + std::to_string(dim));
  }
}

}  // namespace

IradModel make_model(const ModelConfig& cfg, Rng& rng) {
  if (cfg.combine == Combine::sum && cfg.d_z != cfg.d_p) {
    throw ContractError("make_model: sum combination requires d_z == d_p, got " +
                        std::to_string(cfg.d_z) + " and " + std::to_string(cfg.d_p));
  }
  IradModel m;
  m.d_x = cfg.d_x;
  m.d_z = cfg.d_z;
  m.d_p = cfg.d_p;
  m.adv_mode = cfg.adv_mode;
  m.combine = cfg.combine;
  m.e_sh = make_net(cfg.d_x, cfg.d_z, cfg, rng);
  m.e_pv = make_net(cfg.d_x, cfg.d_p, cfg, rng);
  m.g_src = make_net(m.generator_in_dim(), cfg.d_x, cfg, rng);
  m.d_src = make_net(cfg.d_x, 1, cfg, rng);
  return m;
}

Matrix encode_shared(const IradModel& m, const Matrix& x) {
  check_batch_dim(x, m.d_x, "encode_shared");
  return mlp_forward(m.e_sh, x);
}

Matrix encode_private(const IradModel& m, const Matrix& x) {
  check_batch_dim(x, m.d_x, "encode_private");
  return mlp_forward(m.e_pv, x);
}

Matrix combine_codes(const IradModel& m, const Matrix& z_sh, const Matrix& z_pv) {
  if (z_sh.rows() != z_pv.rows()) {
    throw ShapeError("combine_codes: batch sizes differ, " + shape_string(z_sh) +
                     " vs " + shape_string(z_pv));
  }
  check_batch_dim(z_sh, m.d_z, "combine_codes (shared)");
  check_batch_dim(z_pv, m.d_p, "combine_codes (private)");
  return m.combine == Combine::concat ? hcat(z_sh, z_pv) : add(z_sh, z_pv);
}

Tape::NodeId combine_codes(const IradModel& m, Tape& tape, Tape::NodeId z_sh,
                           Tape::NodeId z_pv) {
  if (tape.value(z_sh).rows() != tape.value(z_pv).rows()) {
    throw ShapeError("combine_codes: batch sizes differ, " +
                     shape_string(tape.value(z_sh)) + " vs " +
                     shape_string(tape.value(z_pv)));
  }
  return m.combine == Combine::concat ? tape.concat_cols(z_sh, z_pv)
                                      : tape.add(z_sh, z_pv);
}

Matrix generate(const IradModel& m, const Matrix& z_sh, const Matrix& z_pv) {
  return mlp_forward(m.g_src, combine_codes(m, z_sh, z_pv));
}

Matrix discriminate(const IradModel& m, const Matrix& x) {
  check_batch_dim(x, m.d_x, "discriminate");
  return mlp_forward(m.d_src, x);
}

Matrix make_x_rnd_with(const IradModel& m, const Matrix& x_src, const Matrix& z) {
  check_batch_dim(z, m.d_p, "make_x_rnd");
  return generate(m, encode_shared(m, x_src), z);
}

Matrix make_x_rnd(const IradModel& m, const Matrix& x_src, Rng& rng) {
  return make_x_rnd_with(m, x_src, noise_spec(m).sample(x_src.rows(), rng));
}

}  // namespace irad
