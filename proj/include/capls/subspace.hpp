#pragma once

#include <optional>
#include <vector>

#include "capls/slpp.hpp"
#include "capls/types.hpp"

namespace capls::subspace {

/// Fitted recognition model: projection, the mean of the projected
/// training pool used for centering, and one unit-norm mean vector per
/// class (rows of class_means, aligned with classes).
struct SubspaceModel {
  slpp::ProjectionMatrix projection;
  Vector train_mean;
  Matrix class_means;        // C x d_sub, every row unit norm
  std::vector<int> classes;  // class id of each class_means row
};

/// Per-instance class probabilities (rows sum to 1) and argmax labels.
struct ConfidenceTable {
  Matrix q;  // n x C
  std::vector<int> predicted;
};

/// z_i = P^T x_i for every row; output is rows() x d_sub.
Matrix project(const slpp::ProjectionMatrix& p, const FeatureMatrix& x);

/// Subtracts train_mean from every row and rescales to unit norm. Throws
/// ZeroVector when a row coincides with the mean.
Matrix center_and_normalize(const Matrix& z, const Vector& train_mean);

/// Builds a SubspaceModel. train supplies the labelled instances whose
/// centered-normalized projections are averaged into class means;
/// mean_pool supplies the (unlabelled) matrices whose projections define
/// the centering mean. Classes run over [0, n_classes), defaulting to the
/// label range of train.
SubspaceModel fit_model(const slpp::ProjectionMatrix& p,
                        const LabeledDataset& train,
                        const std::vector<const FeatureMatrix*>& mean_pool,
                        std::optional<int> n_classes = {});

/// Softmax of negated distances, computed shift-stably; temperature
/// divides the distances (1 leaves them raw).
Vector softmax_from_distances(const Vector& distances, double temperature = 1.0);

/// Nearest-class-mean prediction with softmax confidences. Distance ties
/// resolve to the lowest class id. x must be preprocessed the same way as
/// the training data.
ConfidenceTable predict(const SubspaceModel& model, const FeatureMatrix& x,
                        double temperature = 1.0);

}  // namespace capls::subspace
