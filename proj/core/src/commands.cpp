#include "irad/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "irad/checkpoint.hpp"
#include "irad/errors.hpp"
#include "irad/eval.hpp"
#include "irad/format.hpp"

namespace irad {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& value, const std::string& context) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ParseError(context + ": expected true/false, got '" + value + "'");
}

std::uint64_t parse_u64(const std::string& value, const std::string& context) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError(context + ": expected unsigned integer, got '" + value + "'");
  }
}

int parse_int(const std::string& value, const std::string& context) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError(context + ": expected integer, got '" + value + "'");
  }
}

double parse_real(const std::string& value, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError(context + ": expected number, got '" + value + "'");
  }
}

std::vector<std::size_t> parse_size_list(const std::string& value,
                                         const std::string& context) {
  std::vector<std::size_t> out;
  std::istringstream stream(value);
  std::string token;
  while (std::getline(stream, token, ',')) {
    out.push_back(parse_u64(trim(token), context));
  }
  if (out.empty()) throw ParseError(context + ": empty list");
  return out;
}

}  // namespace

void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value,
                       const std::string& context) {
  BenchSpec& bench = cfg.exp.bench;
  ModelConfig& model = cfg.exp.model;
  TrainConfig& train = cfg.exp.train;
  ForestParams& forest = cfg.exp.forest;

  if (key == "seed") cfg.seed = parse_u64(value, context);
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "variant") {
    if (value != "all") variant_from_name(value);  // validate
    cfg.variant = value;
  } else if (key == "nt_grid") cfg.nt_grid = parse_size_list(value, context);
  else if (key == "n_seeds") cfg.n_seeds = parse_int(value, context);
  else if (key == "k_shared") bench.k_shared = parse_u64(value, context);
  else if (key == "m_private") bench.m_private = parse_u64(value, context);
  else if (key == "d_x") bench.d_x = parse_u64(value, context);
  else if (key == "n_source") bench.n_source = parse_u64(value, context);
  else if (key == "n_t") { bench.n_t = parse_u64(value, context); train.n_t = bench.n_t; }
  else if (key == "n_test") bench.n_test = parse_u64(value, context);
  else if (key == "shift") bench.shift = parse_real(value, context);
  else if (key == "source_transform_seed") bench.source_transform_seed = parse_u64(value, context);
  else if (key == "target_transform_seed") bench.target_transform_seed = parse_u64(value, context);
  else if (key == "nonlinearity") bench.nonlinearity = parse_bool(value, context);
  else if (key == "d_z") model.d_z = parse_u64(value, context);
  else if (key == "d_p") model.d_p = parse_u64(value, context);
  else if (key == "hidden") model.hidden = parse_u64(value, context);
  else if (key == "hidden_layers") model.hidden_layers = parse_u64(value, context);
  else if (key == "combine") model.combine = combine_from_name(value);
  else if (key == "adv_mode") {
    model.adv_mode = adv_mode_from_name(value);
    train.adv_mode = model.adv_mode;
  } else if (key == "alpha") train.alpha = parse_real(value, context);
  else if (key == "beta") train.beta = parse_real(value, context);
  else if (key == "epochs") train.epochs = parse_int(value, context);
  else if (key == "batch_size") train.batch_size = parse_u64(value, context);
  else if (key == "learn_rate") train.learn_rate = parse_real(value, context);
  else if (key == "adam_beta1") train.adam_beta1 = parse_real(value, context);
  else if (key == "adam_beta2") train.adam_beta2 = parse_real(value, context);
  else if (key == "adam_eps") train.adam_eps = parse_real(value, context);
  else if (key == "d_steps_per_g_step") train.d_steps_per_g_step = parse_int(value, context);
  else if (key == "early_stop") train.early_stop = early_stop_from_name(value);
  else if (key == "checkpoint_every") train.checkpoint_every = parse_int(value, context);
  else if (key == "trees") forest.n_trees = parse_int(value, context);
  else if (key == "psi") forest.psi = parse_u64(value, context);
  else throw ParseError(context + ": unknown key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  RunConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    apply_config_line(cfg, key, value,
                      path + ": line " + std::to_string(line_no));
  }
  return cfg;
}

std::uint64_t model_seed(std::uint64_t run_seed) { return mix_seed(run_seed, 1); }
std::uint64_t train_seed(std::uint64_t run_seed) { return mix_seed(run_seed, 2); }
std::uint64_t forest_seed(std::uint64_t run_seed) { return mix_seed(run_seed, 3); }

namespace {

void ensure_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw ParseError("cannot create output directory '" + cfg.out_dir +
                     "': " + ec.message());
  }
}

std::string data_path(const RunConfig& cfg, const char* name) {
  return cfg.out_dir + "/" + name;
}

LabeledSet load_required(const std::string& path) {
  if (!fs::exists(path)) throw ParseError("missing data file '" + path + "'");
  return load_csv(path);
}

std::vector<std::uint64_t> run_seeds(const RunConfig& cfg) {
  if (cfg.n_seeds < 1) throw ContractError("n_seeds must be >= 1");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(cfg.n_seeds));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = cfg.seed + i;
  return seeds;
}

}  // namespace

void cmd_gen(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  const TwoDomainDebug bench = gen_two_domain_debug(cfg.exp.bench, cfg.seed);
  save_csv(data_path(cfg, "source_train.csv"), bench.data.source_train);
  save_csv(data_path(cfg, "target_train.csv"), bench.data.target_train);
  save_csv(data_path(cfg, "target_test.csv"), bench.data.target_test);
  save_csv(data_path(cfg, "source_test.csv"), bench.source_test);
}

void cmd_train(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  const LabeledSet source = load_required(data_path(cfg, "source_train.csv"));
  const LabeledSet target = load_required(data_path(cfg, "target_train.csv"));

  ModelConfig mc = cfg.exp.model;
  mc.d_x = source.x.cols();
  Rng init_rng(model_seed(cfg.seed));
  const IradModel init = make_model(mc, init_rng);

  TrainConfig tc = cfg.exp.train;
  tc.seed = train_seed(cfg.seed);
  tc.n_t = target.size();
  FitOptions opts;
  opts.out_dir = cfg.out_dir;
  const FitResult fitted = fit(init, source, target, tc, opts);

  Rng f_rng(forest_seed(cfg.seed));
  const Detector detector =
      build_irad_detector(fitted.model, source, target, cfg.exp.forest, f_rng);

  Checkpoint cp;
  cp.model = fitted.model;
  cp.seed = cfg.seed;
  cp.forest = detector.forest;
  save_checkpoint(data_path(cfg, "checkpoint.json"), cp);
}

void cmd_eval(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  const std::string cp_path = data_path(cfg, "checkpoint.json");
  if (!fs::exists(cp_path)) throw ParseError("missing checkpoint file '" + cp_path + "'");
  const Checkpoint cp = load_checkpoint(cp_path);

  const LabeledSet source = load_required(data_path(cfg, "source_train.csv"));
  const LabeledSet target = load_required(data_path(cfg, "target_train.csv"));
  const LabeledSet test = load_required(data_path(cfg, "target_test.csv"));

  Detector irad_detector;
  irad_detector.model = cp.model;
  irad_detector.kind = DetectorKind::irad;
  if (cp.forest) {
    irad_detector.forest = *cp.forest;
  } else {
    Rng f_rng(forest_seed(cfg.seed));
    irad_detector =
        build_irad_detector(cp.model, source, target, cfg.exp.forest, f_rng);
  }

  Rng t_rng(mix_seed(cfg.seed, 4));
  const Detector if_t =
      build_raw_detector(DetectorKind::if_raw_t, source, target, cfg.exp.forest, t_rng);
  Rng st_rng(mix_seed(cfg.seed, 5));
  const Detector if_st =
      build_raw_detector(DetectorKind::if_raw_st, source, target, cfg.exp.forest, st_rng);

  std::ofstream out(data_path(cfg, "eval_report.csv"), std::ios::binary);
  if (!out) throw ParseError("cannot open eval_report.csv for writing");
  out << "detector,auroc\n";
  for (const Detector* d :
       std::initializer_list<const Detector*>{&irad_detector, &if_t, &if_st}) {
    const double a = auroc(anomaly_score(*d, test.x), test.y);
    out << detector_kind_name(d->kind) << ',' << format_double(a) << '\n';
  }
}

void cmd_ablate(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  std::vector<Variant> variants;
  if (cfg.variant == "all") {
    variants = {Variant::full, Variant::no_lsim, Variant::no_cycle, Variant::no_xrnd};
  } else {
    variants = {variant_from_name(cfg.variant)};
  }
  const std::vector<std::uint64_t> seeds = run_seeds(cfg);

  std::ofstream out(data_path(cfg, "ablation_report.csv"), std::ios::binary);
  if (!out) throw ParseError("cannot open ablation_report.csv for writing");
  out << "variant,seed,auroc,mean_cross_cosine\n";
  for (Variant v : variants) {
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      // PCA export once per variant, from the first seed.
      const std::string pca_dir = i == 0 ? cfg.out_dir : "";
      const AblationReport report = run_ablation(v, cfg.exp, seeds[i], pca_dir);
      out << variant_name(v) << ',' << seeds[i] << ',' << format_double(report.auroc)
          << ',' << format_double(report.mean_cross_cosine) << '\n';
    }
  }
}

void cmd_sweep(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  const std::vector<std::uint64_t> seeds = run_seeds(cfg);
  const std::vector<NtSweepRow> rows = nt_sweep(cfg.nt_grid, cfg.exp, seeds);
  write_nt_sweep_csv(data_path(cfg, "nt_sweep.csv"), rows);
}

void cmd_theory(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  const std::string cp_path = data_path(cfg, "checkpoint.json");
  if (!fs::exists(cp_path)) throw ParseError("missing checkpoint file '" + cp_path + "'");
  const Checkpoint cp = load_checkpoint(cp_path);
  if (!cp.forest) {
    throw ParseError("checkpoint '" + cp_path + "' has no forest; run train first");
  }

  const LabeledSet target_test = load_required(data_path(cfg, "target_test.csv"));
  const LabeledSet source_test = load_required(data_path(cfg, "source_test.csv"));

  Detector d;
  d.model = cp.model;
  d.forest = *cp.forest;
  d.kind = DetectorKind::irad;

  const std::vector<double> scores_s = anomaly_score(d, source_test.x);
  const std::vector<double> scores_t = anomaly_score(d, target_test.x);
  const std::vector<TheoryRow> rows =
      theorem_threshold_sweep(scores_s, source_test.y, scores_t, target_test.y);
  write_theory_report(data_path(cfg, "theory_report.csv"), rows);
}

}  // namespace irad
