#pragma once

#include "capls/linalg.hpp"
#include "capls/types.hpp"

namespace capls {

enum class ProjectionKind { Slpp, Lda };

/// Shared knobs of the adaptation pipelines. Defaults: 128-dimensional
/// subspace and 20 self-training iterations.
struct PipelineOptions {
  Index d_sub = 128;
  int t_max = 20;
  ProjectionKind projection = ProjectionKind::Slpp;
  double ridge = 1.0;        // weight of the identity regularizer
  double temperature = 1.0;  // softmax distance scaling
  linalg::SolveOptions solver{};
};

}  // namespace capls
