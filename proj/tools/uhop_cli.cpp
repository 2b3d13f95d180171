// Benchmark and utility front end for the uhop shared library. Talks to the
// library exclusively through the C interface in uhop.h.

#include <uhop.h>

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cmath>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct PatternsDeleter {
  void operator()(uhop_patterns* p) const { uhop_patterns_free(p); }
};
struct FeatureMapDeleter {
  void operator()(uhop_feature_map* p) const { uhop_feature_map_free(p); }
};
struct TraceDeleter {
  void operator()(uhop_trace* p) const { uhop_trace_free(p); }
};
using PatternsPtr = std::unique_ptr<uhop_patterns, PatternsDeleter>;
using FeatureMapPtr = std::unique_ptr<uhop_feature_map, FeatureMapDeleter>;
using TracePtr = std::unique_ptr<uhop_trace, TraceDeleter>;

int exit_code_for(uhop_status status) {
  return (status == UHOP_ERR_BISECTION || status == UHOP_ERR_LINE_SEARCH) ? kExitNumeric
                                                                          : kExitConfig;
}

[[noreturn]] void die(uhop_status status) {
  std::fprintf(stderr, "error: %s\n", uhop_last_error());
  std::exit(exit_code_for(status));
}

void check(uhop_status status) {
  if (status != UHOP_OK) die(status);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header) {
    file_ = std::fopen(path.c_str(), "w");
    if (!file_) {
      std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
      std::exit(kExitConfig);
    }
    std::fprintf(file_, "%s\n", header.c_str());
  }
  ~CsvWriter() {
    if (file_) std::fclose(file_);
  }
  void row(const std::string& line) { std::fprintf(file_, "%s\n", line.c_str()); }

 private:
  std::FILE* file_ = nullptr;
};

// splitmix-style derivation matching the library's per-trial seeding
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = (seed ^ (0xd1b54a32d192ed03ULL * (stream + 1))) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PatternsPtr load_patterns(const std::string& path) {
  uhop_patterns* raw = nullptr;
  if (path.size() > 4 && path.substr(path.size() - 4) == ".idx")
    check(uhop_patterns_load_idx(path.c_str(), &raw));
  else
    check(uhop_patterns_load_csv(path.c_str(), &raw));
  return PatternsPtr(raw);
}

// Without-replacement subsample of `count` memory columns.
PatternsPtr subsample(const uhop_patterns* ps, std::int64_t count, std::uint64_t seed) {
  std::int64_t d = 0, m = 0;
  check(uhop_patterns_dims(ps, &d, &m));
  if (count > m) {
    std::fprintf(stderr, "error: requested %" PRId64 " memories from a set of %" PRId64 "\n",
                 count, m);
    std::exit(kExitConfig);
  }
  std::vector<std::int64_t> pool(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) pool[static_cast<std::size_t>(i)] = i;
  std::uint64_t state = seed;
  for (std::int64_t i = 0; i < count; ++i) {
    state = derive_seed(state, static_cast<std::uint64_t>(i));
    const std::int64_t j = i + static_cast<std::int64_t>(state % static_cast<std::uint64_t>(m - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  uhop_patterns* out = nullptr;
  check(uhop_patterns_select(ps, pool.data(), count, &out));
  return PatternsPtr(out);
}

struct CommonFlags {
  double alpha = 1.0;
  double beta = 1.0;
  double t = 2.0;
  double gamma = 1.0;
  std::int64_t stage1_iters = 0;
  std::int64_t stage2_iters = 1;
  std::string loss = "avg";
  std::string init = "identity";
  std::int64_t feature_dim = 0;
  bool no_line_search = false;
  std::uint64_t seed = 1;
  std::string format = "csv";

  void attach(CLI::App* cmd, bool with_retrieval = true) {
    cmd->add_option("--t", t, "RBF sharpness t");
    cmd->add_option("--gamma", gamma, "stage-I learning rate");
    cmd->add_option("--N", stage1_iters, "stage-I iterations");
    cmd->add_option("--loss", loss, "stage-I loss: avg, max or dl")
        ->check(CLI::IsMember({"avg", "max", "dl"}));
    cmd->add_option("--init", init, "weight seeding: identity or gaussian")
        ->check(CLI::IsMember({"identity", "gaussian"}));
    cmd->add_option("--feature-dim", feature_dim, "feature dimension (0 = default)");
    cmd->add_flag("--no-line-search", no_line_search, "take raw gradient steps");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"csv"}));
    if (with_retrieval) {
      cmd->add_option("--alpha", alpha, "separation parameter in [1,2]");
      cmd->add_option("--beta", beta, "inverse temperature");
      cmd->add_option("--T", stage2_iters, "stage-II update steps");
    }
  }

  uhop_stage1_config stage1() const {
    uhop_stage1_config cfg;
    uhop_stage1_config_init(&cfg);
    cfg.iters = stage1_iters;
    cfg.step_size = gamma;
    cfg.t = t;
    cfg.line_search = no_line_search ? 0 : 1;
    cfg.loss_kind = loss == "max" ? UHOP_LOSS_MAXIMUM : loss == "dl" ? UHOP_LOSS_DL
                                                                     : UHOP_LOSS_AVERAGE;
    cfg.weight_init = init == "gaussian" ? UHOP_INIT_GAUSSIAN : UHOP_INIT_IDENTITY;
    cfg.feature_dim = feature_dim;
    return cfg;
  }

  uhop_retrieval_config retrieval() const {
    uhop_retrieval_config cfg;
    uhop_retrieval_config_init(&cfg);
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.t = t;
    cfg.max_iters = stage2_iters;
    return cfg;
  }
};

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// One benchmark cell: subsampled memory set, one corrupted query per memory.
void bench_rows(CsvWriter& out, const uhop_patterns* data, const CommonFlags& flags,
                const std::vector<std::int64_t>& sizes, const std::vector<std::int64_t>& iters,
                std::int64_t trials, int corrupt_kind, const std::vector<double>& levels,
                const std::vector<std::string>& baselines, bool noise_column) {
  for (std::int64_t m_size : sizes) {
    for (std::int64_t trial = 0; trial < trials; ++trial) {
      const std::uint64_t trial_seed =
          derive_seed(flags.seed ^ static_cast<std::uint64_t>(trial),
                      static_cast<std::uint64_t>(m_size));
      PatternsPtr subset = subsample(data, m_size, derive_seed(trial_seed, 0));
      const std::uint64_t corrupt_seed = derive_seed(trial_seed, 1);
      const std::uint64_t stage1_seed = derive_seed(trial_seed, 2);
      std::vector<double> sse(static_cast<std::size_t>(m_size));

      for (double level : levels) {
        const std::string level_field = noise_column ? fmt(level) + "," : std::string();
        const double amount = noise_column ? level : 0.5;

        // dense and sparse unkernelized references plus requested
        // distance-similarity baselines
        struct Reference {
          const char* name;
          double alpha;
        };
        for (const Reference& ref : {Reference{"dense", 1.0}, Reference{"sparse", 2.0}}) {
          uhop_stage1_config s1 = flags.stage1();
          s1.iters = 0;
          s1.weight_init = UHOP_INIT_IDENTITY;
          s1.feature_dim = 0;
          uhop_retrieval_config rc = flags.retrieval();
          rc.alpha = ref.alpha;
          double final_loss = 0.0;
          check(uhop_batch_retrieve(subset.get(), &s1, &rc, corrupt_kind, amount, corrupt_seed,
                                    stage1_seed, sse.data(), nullptr, nullptr, &final_loss));
          out.row(std::string(ref.name) + "," + std::to_string(m_size) + "," + level_field +
                  "0," + std::to_string(trial) + "," + fmt(mean(sse)) + "," + fmt(final_loss));
        }
        for (const std::string& name : baselines) {
          uhop_retrieval_config rc = flags.retrieval();
          const int sim = name == "manhattan" ? UHOP_SIM_MANHATTAN : UHOP_SIM_L2;
          check(uhop_baseline_batch_retrieve(subset.get(), &rc, sim, corrupt_kind, amount,
                                             corrupt_seed, sse.data()));
          out.row(name + "," + std::to_string(m_size) + "," + level_field + "0," +
                  std::to_string(trial) + "," + fmt(mean(sse)) + ",nan");
        }

        for (std::int64_t n : iters) {
          uhop_stage1_config s1 = flags.stage1();
          s1.iters = n;
          uhop_retrieval_config rc = flags.retrieval();
          double final_loss = 0.0;
          check(uhop_batch_retrieve(subset.get(), &s1, &rc, corrupt_kind, amount, corrupt_seed,
                                    stage1_seed, sse.data(), nullptr, nullptr, &final_loss));
          out.row("uhop," + std::to_string(m_size) + "," + level_field + std::to_string(n) +
                  "," + std::to_string(trial) + "," + fmt(mean(sse)) + "," + fmt(final_loss));
        }
      }
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"U-Hop two-stage memory retrieval benchmarks"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a synthetic pattern CSV");
  std::string gen_kind = "gaussian";
  std::int64_t gen_d = 16, gen_m = 8;
  double gen_angle = 0.1;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  std::string gen_format = "csv";
  gen->add_option("--kind", gen_kind, "gaussian, orthogonal or near-parallel")
      ->check(CLI::IsMember({"gaussian", "orthogonal", "near-parallel"}));
  gen->add_option("--d", gen_d, "pattern dimension")->required();
  gen->add_option("--M", gen_m, "memory count")->required();
  gen->add_option("--angle", gen_angle, "perturbation angle for near-parallel sets");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output CSV path")->required();
  gen->add_option("--format", gen_format)->check(CLI::IsMember({"csv"}));

  // ---- ingest ----
  auto* ingest = app.add_subcommand("ingest", "convert an IDX image file to the pattern CSV");
  std::string ingest_in, ingest_out;
  std::int64_t ingest_limit = 0;
  std::int64_t ingest_upsample = 1;
  bool ingest_normalize = false;
  std::string ingest_format = "csv";
  ingest->add_option("--in", ingest_in, "IDX image file")->required();
  ingest->add_option("--out", ingest_out, "output CSV path")->required();
  ingest->add_option("--limit", ingest_limit, "keep only the first K images (0 = all)");
  ingest->add_option("--upsample", ingest_upsample,
                     "nearest-neighbor upsampling factor for square images");
  ingest->add_flag("--normalize", ingest_normalize, "scale every pattern to unit norm");
  ingest->add_option("--format", ingest_format)->check(CLI::IsMember({"csv"}));

  // ---- stage1 ----
  auto* stage1 = app.add_subcommand("stage1", "run stage-I descent and export the loss curve");
  std::string stage1_data, stage1_out = "losses.csv", stage1_model_out;
  CommonFlags stage1_flags;
  stage1->add_option("--data", stage1_data, "pattern CSV or IDX file")->required();
  stage1->add_option("--out", stage1_out, "loss history CSV");
  stage1->add_option("--model-out", stage1_model_out, "optional learned feature map CSV");
  stage1_flags.attach(stage1, /*with_retrieval=*/false);

  // ---- retrieve ----
  auto* retrieve = app.add_subcommand("retrieve", "two-stage retrieval of corrupted queries");
  std::string retrieve_data, retrieve_out = "results.csv", retrieve_trace;
  std::int64_t retrieve_mu = -1;
  double retrieve_mask = 0.5, retrieve_noise = -1.0;
  std::uint64_t retrieve_corrupt_seed = 7;
  CommonFlags retrieve_flags;
  retrieve->add_option("--data", retrieve_data, "pattern CSV or IDX file")->required();
  retrieve->add_option("--mu", retrieve_mu, "retrieve only this memory (default: all)");
  retrieve->add_option("--mask", retrieve_mask, "masking fraction");
  retrieve->add_option("--noise", retrieve_noise, "noise level (overrides masking)");
  retrieve->add_option("--corrupt-seed", retrieve_corrupt_seed, "corruption seed");
  retrieve->add_option("--out", retrieve_out, "per-memory results CSV");
  retrieve->add_option("--trace", retrieve_trace, "trace CSV (only with --mu)");
  retrieve_flags.attach(retrieve);

  // ---- bench-capacity ----
  auto* capacity = app.add_subcommand("bench-capacity", "retrieval error vs memory set size");
  std::string cap_data, cap_out = "capacity.csv";
  std::vector<std::int64_t> cap_sizes = {10, 20, 30, 50, 100, 200, 500};
  std::vector<std::int64_t> cap_iters = {1, 10, 20, 50, 100, 200, 500, 1000};
  std::int64_t cap_trials = 20;
  double cap_mask = 0.5;
  std::vector<std::string> cap_baselines;
  CommonFlags cap_flags;
  capacity->add_option("--data", cap_data, "pattern CSV or IDX file")->required();
  capacity->add_option("--sizes", cap_sizes, "memory set sizes")->delimiter(',');
  capacity->add_option("--iters", cap_iters, "stage-I iteration counts")->delimiter(',');
  capacity->add_option("--trials", cap_trials, "trials per cell");
  capacity->add_option("--mask", cap_mask, "masking fraction");
  capacity->add_option("--baseline", cap_baselines, "extra baselines: l2, manhattan")
      ->delimiter(',')
      ->check(CLI::IsMember({"l2", "manhattan"}));
  capacity->add_option("--out", cap_out, "results CSV");
  cap_flags.attach(capacity);

  // ---- bench-noise ----
  auto* noise = app.add_subcommand("bench-noise", "retrieval error vs injected noise level");
  std::string noise_data, noise_out = "noise.csv";
  std::vector<std::int64_t> noise_sizes = {10, 20, 30, 50, 100, 200, 500};
  std::vector<std::int64_t> noise_iters = {1, 10, 20, 50, 100, 200, 500, 1000};
  std::vector<double> noise_levels = {0.0, 0.01, 0.05, 0.1, 0.3, 0.5, 0.7, 1.0, 1.2, 1.4, 2.0};
  std::int64_t noise_trials = 20;
  std::vector<std::string> noise_baselines;
  CommonFlags noise_flags;
  noise->add_option("--data", noise_data, "pattern CSV or IDX file")->required();
  noise->add_option("--sizes", noise_sizes, "memory set sizes")->delimiter(',');
  noise->add_option("--iters", noise_iters, "stage-I iteration counts")->delimiter(',');
  noise->add_option("--levels", noise_levels, "noise levels")->delimiter(',');
  noise->add_option("--trials", noise_trials, "trials per cell");
  noise->add_option("--baseline", noise_baselines, "extra baselines: l2, manhattan")
      ->delimiter(',')
      ->check(CLI::IsMember({"l2", "manhattan"}));
  noise->add_option("--out", noise_out, "results CSV");
  noise_flags.attach(noise);

  // ---- check ----
  auto* check_cmd = app.add_subcommand("check", "exact-retrieval report for a learned map");
  std::string check_data, check_out = "report.csv";
  CommonFlags check_flags;
  check_flags.alpha = 2.0;
  check_cmd->add_option("--data", check_data, "pattern CSV or IDX file")->required();
  check_cmd->add_option("--out", check_out, "report CSV");
  check_flags.attach(check_cmd);

  // ---- verify-repr ----
  auto* repr = app.add_subcommand("verify-repr", "attention realization self-check");
  std::int64_t repr_m = 4, repr_d = 8, repr_trials = 100;
  std::uint64_t repr_seed = 1;
  std::string repr_format = "csv";
  repr->add_option("--M", repr_m, "memory count");
  repr->add_option("--d", repr_d, "pattern dimension");
  repr->add_option("--trials", repr_trials, "number of random targets");
  repr->add_option("--seed", repr_seed, "seed");
  repr->add_option("--format", repr_format)->check(CLI::IsMember({"csv"}));

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    const int kind = gen_kind == "orthogonal"      ? UHOP_GEN_ORTHOGONAL
                     : gen_kind == "near-parallel" ? UHOP_GEN_NEAR_PARALLEL
                                                   : UHOP_GEN_GAUSSIAN;
    uhop_patterns* raw = nullptr;
    check(uhop_patterns_generate(kind, gen_d, gen_m, gen_angle, gen_seed, &raw));
    PatternsPtr ps(raw);
    check(uhop_patterns_save_csv(ps.get(), gen_out.c_str()));
    std::printf("wrote %s (d=%" PRId64 ", M=%" PRId64 ")\n", gen_out.c_str(), gen_d, gen_m);
    return 0;
  }

  if (ingest->parsed()) {
    uhop_patterns* raw = nullptr;
    check(uhop_patterns_load_idx(ingest_in.c_str(), &raw));
    PatternsPtr ps(raw);
    std::int64_t d = 0, m = 0;
    check(uhop_patterns_dims(ps.get(), &d, &m));
    if (ingest_limit > 0 && ingest_limit < m) {
      std::vector<std::int64_t> head(static_cast<std::size_t>(ingest_limit));
      for (std::int64_t i = 0; i < ingest_limit; ++i) head[static_cast<std::size_t>(i)] = i;
      uhop_patterns* cut = nullptr;
      check(uhop_patterns_select(ps.get(), head.data(), ingest_limit, &cut));
      ps.reset(cut);
      m = ingest_limit;
    }
    if (ingest_upsample > 1 || ingest_normalize) {
      std::vector<double> data(static_cast<std::size_t>(d) * static_cast<std::size_t>(m));
      check(uhop_patterns_copy(ps.get(), data.data()));
      if (ingest_upsample > 1) {
        const auto side = static_cast<std::int64_t>(std::llround(std::sqrt(double(d))));
        if (side * side != d) {
          std::fprintf(stderr, "error: --upsample needs square images (d=%" PRId64 ")\n", d);
          return kExitConfig;
        }
        const std::int64_t k = ingest_upsample;
        const std::int64_t out_side = side * k;
        const std::int64_t out_d = out_side * out_side;
        std::vector<double> up(static_cast<std::size_t>(out_d) * static_cast<std::size_t>(m));
        for (std::int64_t col = 0; col < m; ++col)
          for (std::int64_t r = 0; r < out_side; ++r)
            for (std::int64_t c = 0; c < out_side; ++c)
              up[static_cast<std::size_t>(col * out_d + r * out_side + c)] =
                  data[static_cast<std::size_t>(col * d + (r / k) * side + (c / k))];
        data.swap(up);
        d = out_d;
      }
      if (ingest_normalize) {
        for (std::int64_t col = 0; col < m; ++col) {
          double norm2 = 0.0;
          for (std::int64_t i = 0; i < d; ++i) {
            const double v = data[static_cast<std::size_t>(col * d + i)];
            norm2 += v * v;
          }
          if (norm2 > 0.0) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::int64_t i = 0; i < d; ++i)
              data[static_cast<std::size_t>(col * d + i)] *= inv;
          }
        }
      }
      uhop_patterns* rebuilt = nullptr;
      check(uhop_patterns_create(d, m, data.data(), &rebuilt));
      ps.reset(rebuilt);
    }
    check(uhop_patterns_save_csv(ps.get(), ingest_out.c_str()));
    std::printf("wrote %s (d=%" PRId64 ", M=%" PRId64 ")\n", ingest_out.c_str(), d, m);
    return 0;
  }

  if (stage1->parsed()) {
    PatternsPtr ps = load_patterns(stage1_data);
    const uhop_stage1_config cfg = stage1_flags.stage1();
    std::vector<double> history(static_cast<std::size_t>(cfg.iters) + 1);
    uhop_feature_map* raw = nullptr;
    check(uhop_stage1(ps.get(), &cfg, stage1_flags.seed, history.data(), &raw));
    FeatureMapPtr model(raw);
    CsvWriter out(stage1_out, "iter,loss");
    for (std::size_t k = 0; k < history.size(); ++k)
      out.row(std::to_string(k) + "," + fmt(history[k]));
    if (!stage1_model_out.empty())
      check(uhop_feature_map_save_csv(model.get(), stage1_model_out.c_str()));
    std::printf("final loss %s\n", fmt(history.back()).c_str());
    return 0;
  }

  if (retrieve->parsed()) {
    PatternsPtr ps = load_patterns(retrieve_data);
    std::int64_t d = 0, m = 0;
    check(uhop_patterns_dims(ps.get(), &d, &m));
    const int corrupt_kind = retrieve_noise >= 0.0 ? UHOP_CORRUPT_NOISE : UHOP_CORRUPT_MASK;
    const double amount = retrieve_noise >= 0.0 ? retrieve_noise : retrieve_mask;
    const uhop_stage1_config s1 = retrieve_flags.stage1();
    const uhop_retrieval_config rc = retrieve_flags.retrieval();

    CsvWriter out(retrieve_out, "mu,sse,final_loss,converged,iters");
    if (retrieve_mu >= 0) {
      if (retrieve_mu >= m) {
        std::fprintf(stderr, "error: --mu out of range\n");
        return kExitConfig;
      }
      std::vector<double> data(static_cast<std::size_t>(d) * static_cast<std::size_t>(m));
      check(uhop_patterns_copy(ps.get(), data.data()));
      std::vector<double> truth(data.begin() + retrieve_mu * d,
                                data.begin() + (retrieve_mu + 1) * d);
      std::vector<double> query(static_cast<std::size_t>(d));
      check(uhop_corrupt(ps.get(), truth.data(), corrupt_kind, amount,
                         derive_seed(retrieve_corrupt_seed, static_cast<std::uint64_t>(retrieve_mu)),
                         query.data()));
      double sse = 0.0, final_loss = 0.0;
      uhop_trace* raw_trace = nullptr;
      check(uhop_two_stage(ps.get(), &s1, &rc, query.data(), truth.data(), retrieve_flags.seed,
                           &sse, &final_loss, &raw_trace));
      TracePtr trace(raw_trace);
      std::int64_t steps = 0;
      int converged = 0;
      check(uhop_trace_steps(trace.get(), &steps));
      check(uhop_trace_converged(trace.get(), &converged));
      out.row(std::to_string(retrieve_mu) + "," + fmt(sse) + "," + fmt(final_loss) + "," +
              std::to_string(converged) + "," + std::to_string(steps));
      if (!retrieve_trace.empty()) {
        CsvWriter tr(retrieve_trace, "iter,energy,residual");
        for (std::int64_t k = 0; k <= steps; ++k) {
          double energy = 0.0;
          check(uhop_trace_energy(trace.get(), k, &energy));
          std::string residual;
          if (k > 0) {
            double r = 0.0;
            check(uhop_trace_residual(trace.get(), k - 1, &r));
            residual = fmt(r);
          }
          tr.row(std::to_string(k) + "," + fmt(energy) + "," + residual);
        }
      }
      std::printf("sse %s\n", fmt(sse).c_str());
      return 0;
    }

    if (!retrieve_trace.empty()) {
      std::fprintf(stderr, "error: --trace requires --mu\n");
      return kExitConfig;
    }
    std::vector<double> sse(static_cast<std::size_t>(m));
    std::vector<int> converged(static_cast<std::size_t>(m));
    std::vector<std::int64_t> iters(static_cast<std::size_t>(m));
    double final_loss = 0.0;
    check(uhop_batch_retrieve(ps.get(), &s1, &rc, corrupt_kind, amount, retrieve_corrupt_seed,
                              retrieve_flags.seed, sse.data(), converged.data(), iters.data(),
                              &final_loss));
    double total = 0.0;
    for (std::int64_t mu = 0; mu < m; ++mu) {
      out.row(std::to_string(mu) + "," + fmt(sse[static_cast<std::size_t>(mu)]) + "," +
              fmt(final_loss) + "," + std::to_string(converged[static_cast<std::size_t>(mu)]) +
              "," + std::to_string(iters[static_cast<std::size_t>(mu)]));
      total += sse[static_cast<std::size_t>(mu)];
    }
    std::printf("mean sse %s\n", fmt(total / static_cast<double>(m)).c_str());
    return 0;
  }

  if (capacity->parsed()) {
    PatternsPtr data = load_patterns(cap_data);
    CsvWriter out(cap_out, "method,M,N,trial,mean_sse,final_loss");
    bench_rows(out, data.get(), cap_flags, cap_sizes, cap_iters, cap_trials, UHOP_CORRUPT_MASK,
               {cap_mask}, cap_baselines, /*noise_column=*/false);
    std::printf("wrote %s\n", cap_out.c_str());
    return 0;
  }

  if (noise->parsed()) {
    PatternsPtr data = load_patterns(noise_data);
    CsvWriter out(noise_out, "method,M,noise,N,trial,mean_sse,final_loss");
    bench_rows(out, data.get(), noise_flags, noise_sizes, noise_iters, noise_trials,
               UHOP_CORRUPT_NOISE, noise_levels, noise_baselines, /*noise_column=*/true);
    std::printf("wrote %s\n", noise_out.c_str());
    return 0;
  }

  if (check_cmd->parsed()) {
    PatternsPtr ps = load_patterns(check_data);
    std::int64_t d = 0, m = 0;
    check(uhop_patterns_dims(ps.get(), &d, &m));
    const uhop_stage1_config s1 = check_flags.stage1();
    uhop_feature_map* raw = nullptr;
    check(uhop_stage1(ps.get(), &s1, check_flags.seed, nullptr, &raw));
    FeatureMapPtr model(raw);

    std::vector<double> margin(static_cast<std::size_t>(m));
    std::vector<int> satisfied(static_cast<std::size_t>(m));
    double threshold = 0.0;
    check(uhop_check_exact_retrieval(model.get(), ps.get(), check_flags.alpha, check_flags.beta,
                                     check_flags.t, margin.data(), satisfied.data(), &threshold));
    CsvWriter out(check_out, "mu,margin,threshold,satisfied,error_bound");
    int n_satisfied = 0;
    for (std::int64_t mu = 0; mu < m; ++mu) {
      double bound = 0.0;
      check(uhop_error_bound(ps.get(), check_flags.beta, mu, &bound));
      out.row(std::to_string(mu) + "," + fmt(margin[static_cast<std::size_t>(mu)]) + "," +
              fmt(threshold) + "," + std::to_string(satisfied[static_cast<std::size_t>(mu)]) +
              "," + fmt(bound));
      n_satisfied += satisfied[static_cast<std::size_t>(mu)];
    }
    std::printf("%d of %" PRId64 " memories satisfied\n", n_satisfied, m);
    return 0;
  }

  if (repr->parsed()) {
    double max_error = 0.0;
    check(uhop_verify_representation(repr_m, repr_d, repr_trials, repr_seed, &max_error));
    std::printf("max realization error over %" PRId64 " trials: %s\n", repr_trials,
                fmt(max_error).c_str());
    if (max_error > 1e-8) {
      std::printf("FAIL\n");
      return 1;
    }
    std::printf("PASS\n");
    return 0;
  }

  return 0;
}
