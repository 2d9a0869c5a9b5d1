#include "irad/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "irad/errors.hpp"
#include "irad/format.hpp"

namespace irad {

const char* domain_name(Domain d) { return d == Domain::source ? "source" : "target"; }

Domain domain_from_name(const std::string& name) {
  if (name == "source") return Domain::source;
  if (name == "target") return Domain::target;
  throw ParseError("unknown domain '" + name + "'");
}

namespace {

// Desk-scale generator constants. The source cloud is wider than the target
// cloud so that raw-feature detectors trained on the union see target
// anomalies inside the source support.
constexpr double kSharedWeightScale = 0.5;
constexpr double kPrivateWeightScale = 1.0;
constexpr double kBiasScale = 0.3;
constexpr double kSourceGain = 1.0;
constexpr double kTargetGain = 1.0;
constexpr double kSquashScale = 2.0;
constexpr double kTestAnomalyFraction = 0.5;
constexpr double kSourceTestAnomalyFraction = 0.3;

struct DomainTransform {
  Matrix shared_map;   // k x d_x
  Matrix private_map;  // m x d_x
  Matrix bias;         // 1 x d_x
  double gain = 1.0;
  bool squash = true;
};

DomainTransform make_transform(const BenchSpec& spec, std::uint64_t transform_seed,
                               double gain) {
  Rng rng(transform_seed);
  DomainTransform t;
  t.shared_map = rng.normal_matrix(spec.k_shared, spec.d_x);
  scale_inplace(t.shared_map,
                kSharedWeightScale / std::sqrt(static_cast<double>(spec.k_shared)));
  t.private_map = rng.normal_matrix(spec.m_private, spec.d_x);
  scale_inplace(t.private_map,
                kPrivateWeightScale / std::sqrt(static_cast<double>(spec.m_private)));
  t.bias = rng.normal_matrix(1, spec.d_x);
  scale_inplace(t.bias, kBiasScale);
  t.gain = gain;
  t.squash = spec.nonlinearity;
  return t;
}

Matrix apply_transform(const DomainTransform& t, const Matrix& s, const Matrix& p) {
  Matrix x = matmul(s, t.shared_map);
  add_inplace(x, matmul(p, t.private_map));
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double v = t.gain * (x(i, j) + t.bias(0, j));
      x(i, j) = t.squash ? kSquashScale * std::tanh(v / kSquashScale) : v;
    }
  return x;
}

// Shared latents: normals are N(0, I_k); anomalies are shifted by `shift`
// along a per-point random unit direction.
Matrix draw_latents(const BenchSpec& spec, std::size_t n, bool anomalous, Rng& rng) {
  Matrix s = rng.normal_matrix(n, spec.k_shared);
  if (!anomalous || spec.shift == 0.0) return s;
  for (std::size_t i = 0; i < n; ++i) {
    double norm2 = 0.0;
    std::vector<double> dir(spec.k_shared);
    for (std::size_t j = 0; j < spec.k_shared; ++j) {
      dir[j] = rng.normal();
      norm2 += dir[j] * dir[j];
    }
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    for (std::size_t j = 0; j < spec.k_shared; ++j)
      s(i, j) += spec.shift * dir[j] / norm;
  }
  return s;
}

struct DrawResult {
  LabeledSet set;
  Matrix latents;
};

DrawResult draw_set(const BenchSpec& spec, const DomainTransform& t, Domain domain,
                    std::size_t n_normal, std::size_t n_anomalous, Rng& rng) {
  Matrix s_normal = draw_latents(spec, n_normal, false, rng);
  Matrix s_anom = draw_latents(spec, n_anomalous, true, rng);
  Matrix s = vcat(s_normal, s_anom);
  Matrix p = rng.normal_matrix(n_normal + n_anomalous, spec.m_private);
  DrawResult result;
  result.set.x = apply_transform(t, s, p);
  result.set.y.assign(n_normal, 0);
  result.set.y.insert(result.set.y.end(), n_anomalous, 1);
  result.set.domain = domain;
  result.latents = std::move(s);
  return result;
}

}  // namespace

TwoDomainDebug gen_two_domain_debug(const BenchSpec& spec, std::uint64_t seed) {
  if (spec.k_shared == 0 || spec.d_x == 0) {
    throw ContractError("gen_two_domain: k_shared and d_x must be positive");
  }
  if (spec.n_source < 2 || spec.n_t < 1 || spec.n_test < 2) {
    throw ContractError("gen_two_domain: set sizes too small");
  }
  const DomainTransform src_t =
      make_transform(spec, spec.source_transform_seed, kSourceGain);
  const DomainTransform tgt_t =
      make_transform(spec, spec.target_transform_seed, kTargetGain);

  Rng rng(seed);
  TwoDomainDebug out;
  out.data.source_train =
      draw_set(spec, src_t, Domain::source, spec.n_source, 0, rng).set;
  out.data.target_train = draw_set(spec, tgt_t, Domain::target, spec.n_t, 0, rng).set;

  const std::size_t n_anom =
      static_cast<std::size_t>(std::lround(kTestAnomalyFraction * spec.n_test));
  DrawResult tgt_test =
      draw_set(spec, tgt_t, Domain::target, spec.n_test - n_anom, n_anom, rng);
  out.data.target_test = std::move(tgt_test.set);
  out.target_test_latents = std::move(tgt_test.latents);

  const std::size_t n_anom_src =
      static_cast<std::size_t>(std::lround(kSourceTestAnomalyFraction * spec.n_test));
  out.source_test =
      draw_set(spec, src_t, Domain::source, spec.n_test - n_anom_src, n_anom_src, rng)
          .set;
  return out;
}

TwoDomainData gen_two_domain(const BenchSpec& spec, std::uint64_t seed) {
  return gen_two_domain_debug(spec, seed).data;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void save_csv(const std::string& path, const LabeledSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  const std::size_t d = set.x.cols();
  for (std::size_t j = 0; j < d; ++j) out << 'f' << j << ',';
  out << "label,domain\n";
  for (std::size_t i = 0; i < set.x.rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) out << format_double(set.x(i, j)) << ',';
    out << set.y[i] << ',' << domain_name(set.domain) << '\n';
  }
}

LabeledSet load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open data file '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_fields(line);
  if (header.size() < 3 || header[header.size() - 2] != "label" ||
      header[header.size() - 1] != "domain") {
    throw ParseError(path + ": line 1: expected header f0,...,label,domain");
  }
  const std::size_t d = header.size() - 2;
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j] != "f" + std::to_string(j)) {
      throw ParseError(path + ": line 1: expected column 'f" + std::to_string(j) +
                       "', got '" + header[j] + "'");
    }
  }

  std::vector<double> values;
  std::vector<int> labels;
  bool domain_set = false;
  Domain domain = Domain::source;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != d + 2) {
      throw ParseError(path + ": line " + std::to_string(line_no) + ": expected " +
                       std::to_string(d + 2) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < d; ++j)
      values.push_back(parse_double(fields[j], line_no));
    const std::string& label = fields[d];
    if (label != "0" && label != "1") {
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": label must be 0 or 1, got '" + label + "'");
    }
    labels.push_back(label == "1" ? 1 : 0);
    Domain row_domain;
    try {
      row_domain = domain_from_name(fields[d + 1]);
    } catch (const ParseError&) {
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": domain must be source or target, got '" + fields[d + 1] + "'");
    }
    if (!domain_set) {
      domain = row_domain;
      domain_set = true;
    } else if (row_domain != domain) {
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": mixed domains in one file");
    }
  }

  LabeledSet set;
  set.x = Matrix(labels.size(), d);
  std::copy(values.begin(), values.end(), set.x.data());
  set.y = std::move(labels);
  set.domain = domain;
  return set;
}

LabeledSet take_rows(const LabeledSet& set, const std::vector<std::size_t>& rows) {
  LabeledSet out;
  out.x = Matrix(rows.size(), set.x.cols());
  out.y.resize(rows.size());
  out.domain = set.domain;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(set.x.row(rows[i]).begin(), set.x.row(rows[i]).end(),
              out.x.row(i).begin());
    out.y[i] = set.y[rows[i]];
  }
  return out;
}

std::pair<LabeledSet, LabeledSet> split(const LabeledSet& set, double fraction,
                                        std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ContractError("split: fraction must be in (0, 1)");
  }
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  const std::size_t n_first =
      static_cast<std::size_t>(std::lround(fraction * static_cast<double>(set.size())));
  std::vector<std::size_t> first(order.begin(), order.begin() + n_first);
  std::vector<std::size_t> second(order.begin() + n_first, order.end());
  return {take_rows(set, first), take_rows(set, second)};
}

}  // namespace irad
