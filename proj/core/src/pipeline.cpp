#include "irad/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "irad/errors.hpp"
#include "irad/eval.hpp"
#include "irad/format.hpp"

namespace irad {

const char* detector_kind_name(DetectorKind k) {
  switch (k) {
    case DetectorKind::irad: return "irad";
    case DetectorKind::if_raw_t: return "if_raw_t";
    case DetectorKind::if_raw_st: return "if_raw_st";
  }
  return "irad";
}

namespace {

IsolationForest fit_clamped(const Matrix& x, const ForestParams& params, Rng& rng) {
  const std::size_t psi = std::min<std::size_t>(params.psi, x.rows());
  return fit_forest(x, params.n_trees, psi, rng);
}

}  // namespace

Detector build_irad_detector(const IradModel& m, const LabeledSet& source_train,
                             const LabeledSet& target_train, const ForestParams& params,
                             Rng& rng) {
  if (source_train.x.cols() != m.d_x || target_train.x.cols() != m.d_x) {
    throw ShapeError("build_irad_detector: data width does not match model d_x");
  }
  const Matrix codes =
      vcat(encode_shared(m, source_train.x), encode_shared(m, target_train.x));
  Detector d;
  d.model = m;
  d.kind = DetectorKind::irad;
  d.forest = fit_clamped(codes, params, rng);
  return d;
}

Detector build_raw_detector(DetectorKind kind, const LabeledSet& source_train,
                            const LabeledSet& target_train, const ForestParams& params,
                            Rng& rng) {
  if (kind == DetectorKind::irad) {
    throw ContractError("build_raw_detector: use build_irad_detector for the irad kind");
  }
  Detector d;
  d.kind = kind;
  const Matrix& x = kind == DetectorKind::if_raw_t
                        ? target_train.x
                        : vcat(source_train.x, target_train.x);
  d.forest = fit_clamped(x, params, rng);
  return d;
}

std::vector<double> anomaly_score(const Detector& d, const Matrix& x) {
  if (d.kind == DetectorKind::irad) {
    return score_all(d.forest, encode_shared(d.model, x));
  }
  return score_all(d.forest, x);
}

// Seed streams for the stages of one experiment; data uses the run seed
// itself so benchmark draws match gen_two_domain(spec, seed).
namespace {

constexpr std::uint64_t kModelStream = 1;
constexpr std::uint64_t kTrainStream = 2;
constexpr std::uint64_t kForestStream = 3;
constexpr std::uint64_t kBaselineTStream = 4;
constexpr std::uint64_t kBaselineStStream = 5;

struct TrainedRun {
  TwoDomainDebug bench;
  IradModel model;
  TrainLog log;
};

TrainedRun train_on_benchmark(const ExperimentConfig& cfg, std::uint64_t seed) {
  TrainedRun run;
  run.bench = gen_two_domain_debug(cfg.bench, seed);

  ModelConfig mc = cfg.model;
  mc.d_x = cfg.bench.d_x;
  Rng init_rng(mix_seed(seed, kModelStream));
  IradModel init = make_model(mc, init_rng);

  TrainConfig tc = cfg.train;
  tc.seed = mix_seed(seed, kTrainStream);
  tc.n_t = run.bench.data.target_train.size();
  FitResult fitted =
      fit(init, run.bench.data.source_train, run.bench.data.target_train, tc);
  run.model = std::move(fitted.model);
  run.log = std::move(fitted.log);
  return run;
}

double score_target_auroc(const Detector& d, const LabeledSet& test) {
  const std::vector<double> scores = anomaly_score(d, test.x);
  return auroc(scores, test.y);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
  TrainedRun run = train_on_benchmark(cfg, seed);
  const TwoDomainData& data = run.bench.data;

  ExperimentResult result;
  Rng forest_rng(mix_seed(seed, kForestStream));
  result.detector = build_irad_detector(run.model, data.source_train, data.target_train,
                                        cfg.forest, forest_rng);
  result.auroc_irad = score_target_auroc(result.detector, data.target_test);

  Rng t_rng(mix_seed(seed, kBaselineTStream));
  const Detector if_t = build_raw_detector(DetectorKind::if_raw_t, data.source_train,
                                           data.target_train, cfg.forest, t_rng);
  result.auroc_if_t = score_target_auroc(if_t, data.target_test);

  Rng st_rng(mix_seed(seed, kBaselineStStream));
  const Detector if_st = build_raw_detector(DetectorKind::if_raw_st, data.source_train,
                                            data.target_train, cfg.forest, st_rng);
  result.auroc_if_st = score_target_auroc(if_st, data.target_test);

  result.model = std::move(run.model);
  result.log = std::move(run.log);
  return result;
}

double cross_domain_cosine(const IradModel& m, const Matrix& x_src,
                           const Matrix& x_tgt) {
  const std::size_t n_src = std::min<std::size_t>(x_src.rows(), 512);
  Matrix src_rows(n_src, x_src.cols());
  for (std::size_t i = 0; i < n_src; ++i)
    std::copy(x_src.row(i).begin(), x_src.row(i).end(), src_rows.row(i).begin());

  const Matrix src_codes = row_normalized(encode_shared(m, src_rows));
  const Matrix tgt_codes = row_normalized(encode_shared(m, x_tgt));
  const Matrix cosines = matmul_nt(src_codes, tgt_codes);
  double sum = 0.0;
  for (std::size_t i = 0; i < cosines.size(); ++i) sum += std::abs(cosines.data()[i]);
  return sum / static_cast<double>(cosines.size());
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::no_lsim: return "no_lsim";
    case Variant::no_cycle: return "no_cycle";
    case Variant::no_xrnd: return "no_xrnd";
  }
  return "full";
}

Variant variant_from_name(const std::string& name) {
  if (name == "full") return Variant::full;
  if (name == "no_lsim") return Variant::no_lsim;
  if (name == "no_cycle") return Variant::no_cycle;
  if (name == "no_xrnd") return Variant::no_xrnd;
  throw ParseError("unknown variant '" + name + "'");
}

TrainConfig apply_variant(TrainConfig cfg, Variant v) {
  switch (v) {
    case Variant::full: break;
    case Variant::no_lsim: cfg.use_lsim = false; break;
    case Variant::no_cycle: cfg.use_cycle = false; break;
    case Variant::no_xrnd: cfg.use_xrnd = false; break;
  }
  return cfg;
}

namespace {

void write_pca_export(const std::string& path, const IradModel& m,
                      const LabeledSet& source_train, const LabeledSet& target_test) {
  const std::size_t n_src = std::min<std::size_t>(source_train.x.rows(), 500);
  Matrix src_rows(n_src, source_train.x.cols());
  for (std::size_t i = 0; i < n_src; ++i)
    std::copy(source_train.x.row(i).begin(), source_train.x.row(i).end(),
              src_rows.row(i).begin());

  const Matrix codes =
      vcat(encode_shared(m, src_rows), encode_shared(m, target_test.x));
  const Matrix proj = pca_2d(codes);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << "pc1,pc2,domain,label\n";
  for (std::size_t i = 0; i < proj.rows(); ++i) {
    const bool is_source = i < n_src;
    const int label = is_source ? 0 : target_test.y[i - n_src];
    out << format_double(proj(i, 0)) << ',' << format_double(proj(i, 1)) << ','
        << (is_source ? "source" : "target") << ',' << label << '\n';
  }
}

}  // namespace

AblationReport run_ablation(Variant variant, const ExperimentConfig& cfg,
                            std::uint64_t seed, const std::string& out_dir) {
  ExperimentConfig varied = cfg;
  varied.train = apply_variant(cfg.train, variant);

  TrainedRun run = train_on_benchmark(varied, seed);
  const TwoDomainData& data = run.bench.data;

  Rng forest_rng(mix_seed(seed, kForestStream));
  const Detector detector = build_irad_detector(
      run.model, data.source_train, data.target_train, varied.forest, forest_rng);

  AblationReport report;
  report.variant = variant;
  report.auroc = score_target_auroc(detector, data.target_test);
  report.mean_cross_cosine =
      cross_domain_cosine(run.model, data.source_train.x, data.target_train.x);
  if (!out_dir.empty()) {
    write_pca_export(out_dir + "/pca_2d_" + variant_name(variant) + ".csv", run.model,
                     data.source_train, data.target_test);
  }
  return report;
}

std::vector<NtSweepRow> nt_sweep(std::span<const std::size_t> values,
                                 const ExperimentConfig& cfg,
                                 std::span<const std::uint64_t> seeds) {
  if (values.empty()) throw ContractError("nt_sweep: empty n_t grid");
  if (!std::is_sorted(values.begin(), values.end())) {
    throw ContractError("nt_sweep: n_t values must be ascending");
  }
  if (seeds.empty()) throw ContractError("nt_sweep: need at least one seed");

  std::vector<NtSweepRow> rows;
  for (std::size_t n_t : values) {
    ExperimentConfig varied = cfg;
    varied.bench.n_t = n_t;
    varied.train.n_t = n_t;
    std::vector<double> aurocs;
    aurocs.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
      aurocs.push_back(run_experiment(varied, seed).auroc_irad);
    }
    double mean = 0.0;
    for (double a : aurocs) mean += a;
    mean /= static_cast<double>(aurocs.size());
    double var = 0.0;
    for (double a : aurocs) var += (a - mean) * (a - mean);
    const double sd = aurocs.size() > 1
                          ? std::sqrt(var / static_cast<double>(aurocs.size() - 1))
                          : 0.0;
    rows.push_back(NtSweepRow{n_t, mean, sd});
  }
  return rows;
}

void write_nt_sweep_csv(const std::string& path, std::span<const NtSweepRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << "n_t,mean_auroc,sd_auroc\n";
  for (const NtSweepRow& row : rows) {
    out << row.n_t << ',' << format_double(row.mean_auroc) << ','
        << format_double(row.sd_auroc) << '\n';
  }
}

}  // namespace irad
