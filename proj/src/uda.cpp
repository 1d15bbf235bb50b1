#include "capls/uda.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "capls/eval.hpp"
#include "capls/preprocess.hpp"

namespace capls::uda {

std::vector<std::pair<Index, int>> select_confident(
    const subspace::ConfidenceTable& q, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    raise(ErrorCode::ConfigError, "selection fraction must be in (0, 1]");
  }
  const Index c_total = q.q.cols();

  std::vector<std::vector<Index>> pools(static_cast<std::size_t>(c_total));
  for (Index i = 0; i < q.q.rows(); ++i) {
    pools[static_cast<std::size_t>(q.predicted[static_cast<std::size_t>(i)])]
        .push_back(i);
  }

  std::vector<std::pair<Index, int>> selected;
  for (Index c = 0; c < c_total; ++c) {
    auto& pool = pools[static_cast<std::size_t>(c)];
    if (pool.empty()) continue;
    std::sort(pool.begin(), pool.end(), [&](Index lhs, Index rhs) {
      const double ql = q.q(lhs, c);
      const double qr = q.q(rhs, c);
      if (ql != qr) return ql > qr;
      return lhs < rhs;  // rank ties break to the lower row index
    });
    // ceil with a tiny guard against products like 1.0*k landing one ulp
    // above the integer; every non-empty class keeps at least one pick
    const double want =
        std::ceil(fraction * static_cast<double>(pool.size()) - 1e-9);
    const std::size_t take = std::min(
        pool.size(), static_cast<std::size_t>(std::max(want, 1.0)));
    for (std::size_t r = 0; r < take; ++r) {
      selected.emplace_back(pool[r], static_cast<int>(c));
    }
  }
  return selected;
}

namespace {

slpp::ProjectionMatrix learn(const LabeledDataset& data, Index d_sub,
                             const PipelineOptions& opts) {
  if (opts.projection == ProjectionKind::Lda) {
    return eval::learn_lda_projection(data, d_sub, opts.ridge, opts.solver);
  }
  return slpp::learn_projection(data, d_sub, opts.ridge, opts.solver);
}

std::vector<int> classes_with_empty_pool(const std::vector<int>& predicted,
                                         int c_total) {
  std::vector<bool> seen(static_cast<std::size_t>(c_total), false);
  for (int p : predicted) seen[static_cast<std::size_t>(p)] = true;
  std::vector<int> empty;
  for (int c = 0; c < c_total; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) empty.push_back(c);
  }
  return empty;
}

std::optional<double> trace_accuracy(const std::vector<int>& predicted,
                                     const std::vector<int>* truth) {
  if (truth == nullptr) return std::nullopt;
  return eval::per_image_accuracy(predicted, *truth);
}

}  // namespace

UdaResult run_uda(const LabeledDataset& source, const FeatureMatrix& target,
                  const PipelineOptions& opts,
                  const std::vector<int>* target_truth) {
  if (opts.d_sub < 1) raise(ErrorCode::ConfigError, "d_sub must be positive");
  if (opts.t_max < 1) raise(ErrorCode::ConfigError, "t_max must be positive");
  source.validate();
  if (source.features.cols() != target.cols()) {
    raise(ErrorCode::DimensionMismatch,
          "source and target feature dimensions differ (" +
              std::to_string(source.features.cols()) + " vs " +
              std::to_string(target.cols()) + ")");
  }
  if (target_truth != nullptr &&
      static_cast<Index>(target_truth->size()) != target.rows()) {
    raise(ErrorCode::LengthMismatch,
          "ground-truth labels do not match target rows");
  }

  LabeledDataset src;
  src.features = preprocess::l2_normalize_rows(source.features);
  src.labels = source.labels;
  FeatureMatrix tgt = preprocess::l2_normalize_rows(target);
  tgt.domain = Domain::Target;

  const int c_total = src.num_classes();
  // Constant across iterations: the source set is the smallest refit set.
  const Index d_eff =
      slpp::clamp_subspace_dim(opts.d_sub, src.features.cols(), src.rows());
  const std::vector<const FeatureMatrix*> mean_pool{&src.features, &tgt};

  UdaResult res;
  slpp::ProjectionMatrix p = learn(src, d_eff, opts);
  // Class means come from labelled source rows only; the centering mean
  // pools all source and target projections.
  res.model = subspace::fit_model(p, src, mean_pool, c_total);
  res.confidences = subspace::predict(res.model, tgt, opts.temperature);
  res.labels = res.confidences.predicted;
  res.trace.push_back(IterationStats{
      0, 0, {}, trace_accuracy(res.labels, target_truth)});

  for (int t = 1; t <= opts.t_max; ++t) {
    const double fraction =
        static_cast<double>(t) / static_cast<double>(opts.t_max);
    const auto selected = select_confident(res.confidences, fraction);
    const auto empty = classes_with_empty_pool(res.labels, c_total);

    LabeledDataset refit = src;
    refit.features.data.conservativeResize(
        src.rows() + static_cast<Index>(selected.size()), src.features.cols());
    for (std::size_t s = 0; s < selected.size(); ++s) {
      refit.features.data.row(src.rows() + static_cast<Index>(s)) =
          tgt.data.row(selected[s].first);
      refit.labels.push_back(selected[s].second);
    }

    p = learn(refit, d_eff, opts);
    res.model = subspace::fit_model(p, src, mean_pool, c_total);
    res.confidences = subspace::predict(res.model, tgt, opts.temperature);
    res.labels = res.confidences.predicted;
    res.trace.push_back(IterationStats{t, static_cast<Index>(selected.size()),
                                       empty,
                                       trace_accuracy(res.labels, target_truth)});
  }
  return res;
}

UdaResult run_source_only(const LabeledDataset& source,
                          const FeatureMatrix& target,
                          const PipelineOptions& opts,
                          const std::vector<int>* target_truth) {
  source.validate();
  LabeledDataset src;
  src.features = preprocess::l2_normalize_rows(source.features);
  src.labels = source.labels;
  FeatureMatrix tgt = preprocess::l2_normalize_rows(target);
  tgt.domain = Domain::Target;

  const Index d_eff =
      slpp::clamp_subspace_dim(opts.d_sub, src.features.cols(), src.rows());
  UdaResult out;
  const slpp::ProjectionMatrix p = learn(src, d_eff, opts);
  out.model = subspace::fit_model(p, src, {&src.features, &tgt},
                                  src.num_classes());
  out.confidences = subspace::predict(out.model, tgt, opts.temperature);
  out.labels = out.confidences.predicted;
  out.trace.push_back(
      IterationStats{0, 0, {}, trace_accuracy(out.labels, target_truth)});
  return out;
}

}  // namespace capls::uda
