#include "uhop.h"

#include "uhop/analysis.hpp"
#include "uhop/energy.hpp"
#include "uhop/io.hpp"
#include "uhop/representation.hpp"
#include "uhop/rng.hpp"
#include "uhop/uhop.hpp"

#include <cstring>
#include <string>
#include <vector>

struct uhop_patterns {
  uhop::PatternSet value;
};
struct uhop_feature_map {
  uhop::FeatureMap value;
};
struct uhop_trace {
  uhop::RetrievalTrace value;
};

namespace {

thread_local std::string g_last_error;

uhop_status to_status(uhop::errc code) {
  switch (code) {
    case uhop::errc::invalid_argument: return UHOP_ERR_INVALID_ARGUMENT;
    case uhop::errc::dimension_mismatch: return UHOP_ERR_DIMENSION;
    case uhop::errc::io_failure: return UHOP_ERR_IO;
    case uhop::errc::malformed_file: return UHOP_ERR_FORMAT;
    case uhop::errc::degenerate_set: return UHOP_ERR_DEGENERATE;
    case uhop::errc::alpha_out_of_range: return UHOP_ERR_ALPHA;
    case uhop::errc::index_out_of_range: return UHOP_ERR_INDEX;
    case uhop::errc::rank_deficient: return UHOP_ERR_RANK;
    case uhop::errc::bisection_failure: return UHOP_ERR_BISECTION;
    case uhop::errc::line_search_failure: return UHOP_ERR_LINE_SEARCH;
  }
  return UHOP_ERR_UNKNOWN;
}

template <typename Fn>
uhop_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return UHOP_OK;
  } catch (const uhop::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return UHOP_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown failure";
    return UHOP_ERR_UNKNOWN;
  }
}

uhop_status invalid(const char* what) {
  g_last_error = what;
  return UHOP_ERR_INVALID_ARGUMENT;
}

uhop::Stage1Config from_c(const uhop_stage1_config& c) {
  uhop::Stage1Config cfg;
  cfg.iters = static_cast<int>(c.iters);
  cfg.step_size = c.step_size;
  cfg.t = c.t;
  cfg.line_search = c.line_search != 0;
  cfg.loss = c.loss_kind == UHOP_LOSS_MAXIMUM  ? uhop::LossKind::maximum
             : c.loss_kind == UHOP_LOSS_DL     ? uhop::LossKind::dl_variant
                                               : uhop::LossKind::average;
  cfg.init = c.weight_init == UHOP_INIT_IDENTITY ? uhop::WeightInit::identity_extended
                                                 : uhop::WeightInit::gaussian;
  cfg.feature_dim = static_cast<uhop::Index>(c.feature_dim);
  cfg.row_scaling = c.row_scaling == UHOP_ROWSCALE_PRESERVE_NORM
                        ? uhop::RowScaling::preserve_memory_norm
                        : uhop::RowScaling::unit_norm;
  return cfg;
}

uhop::RetrievalConfig from_c(const uhop_retrieval_config& c) {
  uhop::RetrievalConfig cfg;
  cfg.beta = c.beta;
  cfg.t = c.t;
  cfg.alpha = c.alpha;
  cfg.max_iters = static_cast<int>(c.max_iters);
  cfg.tol = c.tol;
  return cfg;
}

uhop::QueryCorruption corruption_from(int kind, double amount, uint64_t seed) {
  return kind == UHOP_CORRUPT_NOISE ? uhop::QueryCorruption::noise(amount, seed)
                                    : uhop::QueryCorruption::mask(amount, seed);
}

}  // namespace

extern "C" {

void uhop_stage1_config_init(uhop_stage1_config* cfg) {
  if (!cfg) return;
  *cfg = uhop_stage1_config{};
  cfg->iters = 0;
  cfg->step_size = 1.0;
  cfg->t = 2.0;
  cfg->line_search = 1;
  cfg->loss_kind = UHOP_LOSS_AVERAGE;
  cfg->weight_init = UHOP_INIT_GAUSSIAN;
  cfg->feature_dim = 0;
  cfg->row_scaling = UHOP_ROWSCALE_UNIT;
}

void uhop_retrieval_config_init(uhop_retrieval_config* cfg) {
  if (!cfg) return;
  *cfg = uhop_retrieval_config{};
  cfg->beta = 1.0;
  cfg->t = 2.0;
  cfg->alpha = 1.0;
  cfg->max_iters = 1;
  cfg->tol = 1e-10;
}

const char* uhop_version(void) { return "1.0.0"; }

const char* uhop_last_error(void) { return g_last_error.c_str(); }

uhop_status uhop_patterns_create(int64_t d, int64_t m, const double* colmajor,
                                 uhop_patterns** out) {
  if (!colmajor || !out) return invalid("null pointer");
  return guarded([&] {
    uhop::Matrix data = Eigen::Map<const uhop::Matrix>(colmajor, d, m);
    *out = new uhop_patterns{uhop::PatternSet(std::move(data))};
  });
}

uhop_status uhop_patterns_load_idx(const char* path, uhop_patterns** out) {
  if (!path || !out) return invalid("null pointer");
  return guarded([&] { *out = new uhop_patterns{uhop::load_idx(path)}; });
}

uhop_status uhop_patterns_load_csv(const char* path, uhop_patterns** out) {
  if (!path || !out) return invalid("null pointer");
  return guarded([&] { *out = new uhop_patterns{uhop::load_pattern_csv(path)}; });
}

uhop_status uhop_patterns_save_csv(const uhop_patterns* ps, const char* path) {
  if (!ps || !path) return invalid("null pointer");
  return guarded([&] { uhop::save_pattern_csv(ps->value, path); });
}

uhop_status uhop_patterns_generate(int kind, int64_t d, int64_t m, double angle, uint64_t seed,
                                   uhop_patterns** out) {
  if (!out) return invalid("null pointer");
  return guarded([&] {
    switch (kind) {
      case UHOP_GEN_GAUSSIAN: *out = new uhop_patterns{uhop::generate_gaussian(d, m, seed)}; break;
      case UHOP_GEN_ORTHOGONAL:
        *out = new uhop_patterns{uhop::generate_orthogonal(d, m, seed)};
        break;
      case UHOP_GEN_NEAR_PARALLEL:
        *out = new uhop_patterns{uhop::generate_near_parallel(d, m, angle, seed)};
        break;
      default: uhop::fail(uhop::errc::invalid_argument, "unknown generator kind");
    }
  });
}

uhop_status uhop_patterns_select(const uhop_patterns* ps, const int64_t* indices, int64_t count,
                                 uhop_patterns** out) {
  if (!ps || !indices || !out) return invalid("null pointer");
  return guarded([&] {
    std::vector<uhop::Index> idx(indices, indices + count);
    *out = new uhop_patterns{uhop::select_columns(ps->value, idx)};
  });
}

uhop_status uhop_patterns_dims(const uhop_patterns* ps, int64_t* d, int64_t* m) {
  if (!ps || !d || !m) return invalid("null pointer");
  *d = ps->value.dim();
  *m = ps->value.count();
  return UHOP_OK;
}

uhop_status uhop_patterns_copy(const uhop_patterns* ps, double* colmajor_out) {
  if (!ps || !colmajor_out) return invalid("null pointer");
  std::memcpy(colmajor_out, ps->value.data.data(),
              sizeof(double) * static_cast<std::size_t>(ps->value.data.size()));
  return UHOP_OK;
}

uhop_status uhop_patterns_stats(const uhop_patterns* ps, double* delta_out, double* radius_out,
                                double* max_norm_out) {
  if (!ps) return invalid("null pointer");
  return guarded([&] {
    const uhop::SeparationStats stats = uhop::separation_stats(ps->value);
    if (delta_out)
      std::memcpy(delta_out, stats.delta.data(),
                  sizeof(double) * static_cast<std::size_t>(stats.delta.size()));
    if (radius_out) *radius_out = stats.radius;
    if (max_norm_out) *max_norm_out = stats.max_norm;
  });
}

void uhop_patterns_free(uhop_patterns* ps) { delete ps; }

uhop_status uhop_corrupt(const uhop_patterns* ps, const double* x, int kind, double amount,
                         uint64_t seed, double* out) {
  if (!ps || !x || !out) return invalid("null pointer");
  return guarded([&] {
    const uhop::Vector query = Eigen::Map<const uhop::Vector>(x, ps->value.dim());
    const uhop::Vector result =
        uhop::corrupt(query, corruption_from(kind, amount, seed), uhop::separation_stats(ps->value));
    std::memcpy(out, result.data(), sizeof(double) * static_cast<std::size_t>(result.size()));
  });
}

uhop_status uhop_feature_map_random(int64_t d, int64_t feature_dim, uint64_t seed,
                                    uhop_feature_map** out) {
  if (!out) return invalid("null pointer");
  return guarded([&] { *out = new uhop_feature_map{uhop::init_feature_map(d, feature_dim, seed)}; });
}

uhop_status uhop_feature_map_identity(int64_t d, int64_t feature_dim, uhop_feature_map** out) {
  if (!out) return invalid("null pointer");
  return guarded([&] { *out = new uhop_feature_map{uhop::identity_extended(d, feature_dim)}; });
}

uhop_status uhop_feature_map_load_csv(const char* path, uhop_feature_map** out) {
  if (!path || !out) return invalid("null pointer");
  return guarded([&] { *out = new uhop_feature_map{uhop::load_feature_map_csv(path)}; });
}

uhop_status uhop_feature_map_save_csv(const uhop_feature_map* fm, const char* path) {
  if (!fm || !path) return invalid("null pointer");
  return guarded([&] { uhop::save_feature_map_csv(fm->value, path); });
}

uhop_status uhop_feature_map_dims(const uhop_feature_map* fm, int64_t* feature_dim, int64_t* d) {
  if (!fm || !feature_dim || !d) return invalid("null pointer");
  *feature_dim = fm->value.feature_dim();
  *d = fm->value.input_dim();
  return UHOP_OK;
}

uhop_status uhop_feature_map_copy(const uhop_feature_map* fm, double* rowmajor_out) {
  if (!fm || !rowmajor_out) return invalid("null pointer");
  const uhop::Matrix& w = fm->value.W;
  for (uhop::Index i = 0; i < w.rows(); ++i)
    for (uhop::Index j = 0; j < w.cols(); ++j)
      rowmajor_out[i * w.cols() + j] = w(i, j);
  return UHOP_OK;
}

uhop_status uhop_feature_map_normalize_rows(const uhop_feature_map* fm, uhop_feature_map** out) {
  if (!fm || !out) return invalid("null pointer");
  return guarded([&] { *out = new uhop_feature_map{uhop::normalize_rows(fm->value)}; });
}

uhop_status uhop_feature_map_lipschitz(const uhop_feature_map* fm, double* out) {
  if (!fm || !out) return invalid("null pointer");
  return guarded([&] { *out = uhop::lipschitz_of_phi(fm->value); });
}

void uhop_feature_map_free(uhop_feature_map* fm) { delete fm; }

uhop_status uhop_stage1(const uhop_patterns* ps, const uhop_stage1_config* cfg, uint64_t seed,
                        double* loss_history_out, uhop_feature_map** model_out) {
  if (!ps || !cfg || !model_out) return invalid("null pointer");
  return guarded([&] {
    const uhop::Stage1Config config = from_c(*cfg);
    uhop::FeatureMap fm = uhop::stage1_init(ps->value.dim(), config, seed);
    auto [model, history] = uhop::stage1_optimize(fm, ps->value, config);
    if (loss_history_out)
      std::memcpy(loss_history_out, history.data(), sizeof(double) * history.size());
    *model_out = new uhop_feature_map{std::move(model)};
  });
}

uhop_status uhop_separation_loss(const uhop_feature_map* fm, const uhop_patterns* ps, double t,
                                 int loss_kind, double* out) {
  if (!fm || !ps || !out) return invalid("null pointer");
  return guarded([&] {
    const uhop::LossKind kind = loss_kind == UHOP_LOSS_MAXIMUM  ? uhop::LossKind::maximum
                                : loss_kind == UHOP_LOSS_DL     ? uhop::LossKind::dl_variant
                                                                : uhop::LossKind::average;
    *out = uhop::separation_loss(fm->value, ps->value, t, kind);
  });
}

uhop_status uhop_energy(const uhop_feature_map* fm, const uhop_patterns* ps,
                        const uhop_retrieval_config* cfg, const double* x, double* out) {
  if (!fm || !ps || !cfg || !x || !out) return invalid("null pointer");
  return guarded([&] {
    const uhop::Vector query = Eigen::Map<const uhop::Vector>(x, ps->value.dim());
    *out = uhop::energy(fm->value, ps->value, from_c(*cfg), query);
  });
}

uhop_status uhop_retrieval_step(const uhop_feature_map* fm, const uhop_patterns* ps,
                                const uhop_retrieval_config* cfg, const double* x, double* out) {
  if (!fm || !ps || !cfg || !x || !out) return invalid("null pointer");
  return guarded([&] {
    const uhop::Vector query = Eigen::Map<const uhop::Vector>(x, ps->value.dim());
    const uhop::Vector next = uhop::retrieval_step(fm->value, ps->value, from_c(*cfg), query);
    std::memcpy(out, next.data(), sizeof(double) * static_cast<std::size_t>(next.size()));
  });
}

uhop_status uhop_retrieve(const uhop_feature_map* fm, const uhop_patterns* ps,
                          const uhop_retrieval_config* cfg, const double* x0, uhop_trace** out) {
  if (!fm || !ps || !cfg || !x0 || !out) return invalid("null pointer");
  return guarded([&] {
    const uhop::Vector start = Eigen::Map<const uhop::Vector>(x0, ps->value.dim());
    *out = new uhop_trace{uhop::retrieve(fm->value, ps->value, from_c(*cfg), start)};
  });
}

uhop_status uhop_trace_steps(const uhop_trace* tr, int64_t* out) {
  if (!tr || !out) return invalid("null pointer");
  *out = static_cast<int64_t>(tr->value.residuals.size());
  return UHOP_OK;
}

uhop_status uhop_trace_energy(const uhop_trace* tr, int64_t k, double* out) {
  if (!tr || !out) return invalid("null pointer");
  if (k < 0 || k >= static_cast<int64_t>(tr->value.energies.size()))
    return invalid("trace energy index out of range");
  *out = tr->value.energies[static_cast<std::size_t>(k)];
  return UHOP_OK;
}

uhop_status uhop_trace_residual(const uhop_trace* tr, int64_t k, double* out) {
  if (!tr || !out) return invalid("null pointer");
  if (k < 0 || k >= static_cast<int64_t>(tr->value.residuals.size()))
    return invalid("trace residual index out of range");
  *out = tr->value.residuals[static_cast<std::size_t>(k)];
  return UHOP_OK;
}

uhop_status uhop_trace_converged(const uhop_trace* tr, int* out) {
  if (!tr || !out) return invalid("null pointer");
  *out = tr->value.converged ? 1 : 0;
  return UHOP_OK;
}

uhop_status uhop_trace_retrieved(const uhop_trace* tr, double* out) {
  if (!tr || !out) return invalid("null pointer");
  std::memcpy(out, tr->value.retrieved.data(),
              sizeof(double) * static_cast<std::size_t>(tr->value.retrieved.size()));
  return UHOP_OK;
}

void uhop_trace_free(uhop_trace* tr) { delete tr; }

uhop_status uhop_two_stage(const uhop_patterns* ps, const uhop_stage1_config* s1,
                           const uhop_retrieval_config* cfg, const double* query,
                           const double* truth, uint64_t seed, double* sse_out,
                           double* final_loss_out, uhop_trace** trace_out) {
  if (!ps || !s1 || !cfg || !query || !truth) return invalid("null pointer");
  return guarded([&] {
    const uhop::Vector q = Eigen::Map<const uhop::Vector>(query, ps->value.dim());
    const uhop::Vector gt = Eigen::Map<const uhop::Vector>(truth, ps->value.dim());
    uhop::UHopResult result =
        uhop::uhop_retrieve(ps->value, from_c(*s1), from_c(*cfg), q, gt, seed);
    if (sse_out) *sse_out = result.sse;
    if (final_loss_out) *final_loss_out = result.final_loss;
    if (trace_out) *trace_out = new uhop_trace{std::move(result.trace)};
  });
}

uhop_status uhop_batch_retrieve(const uhop_patterns* ps, const uhop_stage1_config* s1,
                                const uhop_retrieval_config* cfg, int corrupt_kind,
                                double corrupt_amount, uint64_t corrupt_seed, uint64_t seed,
                                double* sse_out, int* converged_out, int64_t* iters_out,
                                double* final_loss_out) {
  if (!ps || !s1 || !cfg || !sse_out) return invalid("null pointer");
  return guarded([&] {
    const auto results =
        uhop::batch_retrieve(ps->value, from_c(*s1), from_c(*cfg),
                             corruption_from(corrupt_kind, corrupt_amount, corrupt_seed), seed);
    for (std::size_t i = 0; i < results.size(); ++i) {
      sse_out[i] = results[i].sse;
      if (converged_out) converged_out[i] = results[i].trace.converged ? 1 : 0;
      if (iters_out) iters_out[i] = static_cast<int64_t>(results[i].trace.residuals.size());
    }
    if (final_loss_out) *final_loss_out = results.empty() ? 0.0 : results.front().final_loss;
  });
}

uhop_status uhop_baseline_batch_retrieve(const uhop_patterns* ps,
                                         const uhop_retrieval_config* cfg, int similarity,
                                         int corrupt_kind, double corrupt_amount,
                                         uint64_t corrupt_seed, double* sse_out) {
  if (!ps || !cfg || !sse_out) return invalid("null pointer");
  return guarded([&] {
    const uhop::Similarity sim =
        similarity == UHOP_SIM_MANHATTAN ? uhop::Similarity::neg_l1 : uhop::Similarity::neg_l2;
    const uhop::SeparationStats stats = uhop::separation_stats(ps->value);
    const uhop::RetrievalConfig config = from_c(*cfg);
    for (uhop::Index mu = 0; mu < ps->value.count(); ++mu) {
      const uhop::Vector truth = ps->value.data.col(mu);
      const uhop::QueryCorruption c =
          corruption_from(corrupt_kind, corrupt_amount,
                          uhop::Rng::derive(corrupt_seed, static_cast<std::uint64_t>(mu)));
      uhop::Vector x = uhop::corrupt(truth, c, stats);
      for (int step = 0; step < config.max_iters; ++step)
        x = uhop::distance_baseline_step(ps->value, config, sim, x);
      sse_out[mu] = (x - truth).squaredNorm();
    }
  });
}

uhop_status uhop_check_exact_retrieval(const uhop_feature_map* fm, const uhop_patterns* ps,
                                       double alpha, double beta, double t, double* margin_out,
                                       int* satisfied_out, double* threshold_out) {
  if (!fm || !ps) return invalid("null pointer");
  return guarded([&] {
    const uhop::ExactRetrievalReport report =
        uhop::check_exact_retrieval(fm->value, ps->value, alpha, beta, t);
    for (const auto& row : report.per_memory) {
      if (margin_out) margin_out[row.mu] = row.margin;
      if (satisfied_out) satisfied_out[row.mu] = row.satisfied ? 1 : 0;
    }
    if (threshold_out) *threshold_out = report.threshold;
  });
}

uhop_status uhop_verify_fixed_point(const uhop_feature_map* fm, const uhop_patterns* ps,
                                    const uhop_retrieval_config* cfg, int64_t mu, int* out) {
  if (!fm || !ps || !cfg || !out) return invalid("null pointer");
  return guarded([&] {
    *out = uhop::verify_fixed_point(fm->value, ps->value, from_c(*cfg),
                                    static_cast<uhop::Index>(mu))
               ? 1
               : 0;
  });
}

uhop_status uhop_min_distance_condition(const uhop_patterns* ps, double lipschitz, double alpha,
                                        double beta, int* out) {
  if (!ps || !out) return invalid("null pointer");
  return guarded(
      [&] { *out = uhop::min_distance_condition(ps->value, lipschitz, alpha, beta) ? 1 : 0; });
}

uhop_status uhop_error_bound(const uhop_patterns* ps, double beta, int64_t mu, double* out) {
  if (!ps || !out) return invalid("null pointer");
  return guarded(
      [&] { *out = uhop::error_bound(ps->value, beta, static_cast<uhop::Index>(mu)); });
}

uhop_status uhop_verify_representation(int64_t m, int64_t d, int64_t trials, uint64_t seed,
                                       double* max_error_out) {
  if (!max_error_out) return invalid("null pointer");
  return guarded(
      [&] { *max_error_out = uhop::verify_representation_trials(m, d, trials, seed); });
}

} /* extern "C" */
