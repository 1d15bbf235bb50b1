#include "capls/subspace.hpp"

#include <cmath>
#include <vector>

namespace capls::subspace {

Matrix project(const slpp::ProjectionMatrix& p, const FeatureMatrix& x) {
  if (x.cols() != p.d_in()) {
    raise(ErrorCode::DimensionMismatch,
          "features have " + std::to_string(x.cols()) +
              " columns, projection expects " + std::to_string(p.d_in()));
  }
  return x.data * p.p;
}

Matrix center_and_normalize(const Matrix& z, const Vector& train_mean) {
  if (train_mean.size() != z.cols()) {
    raise(ErrorCode::DimensionMismatch,
          "mean length " + std::to_string(train_mean.size()) +
              " does not match projected dimension " +
              std::to_string(z.cols()));
  }
  Matrix out = z.rowwise() - train_mean.transpose();
  for (Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm < 1e-12) {
      raise(ErrorCode::ZeroVector, "projected row " + std::to_string(i) +
                                       " coincides with the training mean");
    }
    out.row(i) /= norm;
  }
  return out;
}

SubspaceModel fit_model(const slpp::ProjectionMatrix& p,
                        const LabeledDataset& train,
                        const std::vector<const FeatureMatrix*>& mean_pool,
                        std::optional<int> n_classes) {
  train.validate(n_classes);

  Vector sum = Vector::Zero(p.d_sub());
  Index pooled = 0;
  for (const FeatureMatrix* fm : mean_pool) {
    if (fm == nullptr || fm->rows() == 0) continue;
    const Matrix z = project(p, *fm);
    sum += z.colwise().sum();
    pooled += z.rows();
  }
  if (pooled == 0) {
    raise(ErrorCode::DegenerateData, "mean pool is empty");
  }

  SubspaceModel model;
  model.projection = p;
  model.train_mean = sum / static_cast<double>(pooled);

  const int c_total = n_classes.value_or(train.num_classes());
  if (c_total < 1) raise(ErrorCode::EmptyClass, "no classes in training data");

  const Matrix z = center_and_normalize(project(p, train.features),
                                        model.train_mean);
  model.class_means = Matrix::Zero(c_total, p.d_sub());
  model.classes.resize(static_cast<std::size_t>(c_total));
  std::vector<Index> counts(static_cast<std::size_t>(c_total), 0);
  for (Index i = 0; i < z.rows(); ++i) {
    const int c = train.labels[static_cast<std::size_t>(i)];
    model.class_means.row(c) += z.row(i);
    ++counts[static_cast<std::size_t>(c)];
  }
  for (int c = 0; c < c_total; ++c) {
    model.classes[static_cast<std::size_t>(c)] = c;
    if (counts[static_cast<std::size_t>(c)] == 0) {
      raise(ErrorCode::EmptyClass,
            "class " + std::to_string(c) + " has no labelled instance");
    }
    model.class_means.row(c) /=
        static_cast<double>(counts[static_cast<std::size_t>(c)]);
    const double norm = model.class_means.row(c).norm();
    if (norm < 1e-12) {
      raise(ErrorCode::DegenerateClassMean,
            "class " + std::to_string(c) +
                " mean vanishes after centering; class is symmetric about "
                "the training mean");
    }
    model.class_means.row(c) /= norm;
  }
  return model;
}

Vector softmax_from_distances(const Vector& distances, double temperature) {
  if (temperature <= 0.0) {
    raise(ErrorCode::ConfigError, "temperature must be positive");
  }
  const double dmin = distances.minCoeff();
  Vector q(distances.size());
  double total = 0.0;
  for (Index c = 0; c < distances.size(); ++c) {
    // shift by dmin: identical values to the unshifted softmax, no underflow
    q(c) = std::exp(-(distances(c) - dmin) / temperature);
    total += q(c);
  }
  q /= total;
  return q;
}

ConfidenceTable predict(const SubspaceModel& model, const FeatureMatrix& x,
                        double temperature) {
  const Matrix z =
      center_and_normalize(project(model.projection, x), model.train_mean);
  const Index n = z.rows();
  const Index c_total = model.class_means.rows();

  ConfidenceTable table;
  table.q.resize(n, c_total);
  table.predicted.resize(static_cast<std::size_t>(n));
  Vector dist(c_total);
  for (Index i = 0; i < n; ++i) {
    int best = 0;
    for (Index c = 0; c < c_total; ++c) {
      dist(c) = (z.row(i) - model.class_means.row(c)).norm();
      if (dist(c) < dist(best)) best = static_cast<int>(c);
    }
    table.q.row(i) = softmax_from_distances(dist, temperature).transpose();
    table.predicted[static_cast<std::size_t>(i)] =
        model.classes[static_cast<std::size_t>(best)];
  }
  return table;
}

}  // namespace capls::subspace
