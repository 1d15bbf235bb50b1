#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "capls/options.hpp"
#include "capls/types.hpp"
#include "capls/uda.hpp"

namespace capls::eval {

/// Fraction of exact matches.
double per_image_accuracy(const std::vector<int>& predicted,
                          const std::vector<int>& truth);

/// Entry (i, j) counts instances of true class i predicted as class j.
Eigen::MatrixXi confusion_matrix(const std::vector<int>& predicted,
                                 const std::vector<int>& truth, int n_classes);

/// Label of the Euclidean-nearest training instance; training pool is the
/// source rows followed by the optional labelled-target rows, ties going
/// to the lower pool index. Inputs are expected preprocessed.
std::vector<int> run_baseline_1nn(const LabeledDataset& source,
                                  const LabeledDataset* target_labeled,
                                  const FeatureMatrix& test);

/// Fisher-discriminant projection for the LDA ablation: between-class
/// scatter over (within-class scatter + ridge I), solved by the same
/// generalized eigensolver as the locality-preserving variant.
slpp::ProjectionMatrix learn_lda_projection(const LabeledDataset& data,
                                            Index d_sub, double ridge = 1.0,
                                            const linalg::SolveOptions& opts = {});

/// The full adaptation loop with the projection learner swapped for LDA;
/// selection, class means, and metrics are shared with run_uda.
uda::UdaResult run_baseline_lda_subspace(
    const LabeledDataset& source, const FeatureMatrix& target,
    const PipelineOptions& opts = {},
    const std::vector<int>* target_truth = nullptr);

/// FNV-1a fingerprint of preprocessed inputs (dims + raw coefficient
/// bytes, row-major). Recorded in reports so runs over one dataset can be
/// checked to consume identical data.
std::uint64_t preprocess_hash(const std::vector<const Matrix*>& matrices);

std::string hash_hex(std::uint64_t h);

}  // namespace capls::eval
