#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "capls/types.hpp"
#include "capls/zsl.hpp"

namespace capls::data {

/// A named collection of domains sharing one label space and feature
/// dimensionality.
struct DatasetBundle {
  std::string name;
  std::map<std::string, LabeledDataset> domains;
  std::vector<std::string> class_names;
};

/// Domain shift applied to the target samples of the synthetic generator.
struct SynthShift {
  double rotation = 0.0;     // radians, in a random 2-D coordinate plane
  double translation = 0.0;  // magnitude along a random direction
  double noise = 0.0;        // stddev of fresh additive gaussian noise
};

struct SynthConfig {
  int n_classes = 10;
  int n_per_class_source = 20;
  int n_per_class_target = 20;
  int dim = 32;
  double class_sep = 4.0;  // minimum inter-mean distance, in units of sigma
  SynthShift shift{};
  std::uint64_t seed = 0;
};

/// Gaussian-blob source domain plus a shifted target domain, fully
/// deterministic per seed.
DatasetBundle generate_synthetic(const SynthConfig& cfg);

// --- feature / label files -------------------------------------------------
//
// CSV features: one instance per line, comma-separated %.17g decimals.
// Binary features: magic "CPLS", u32 rows, u32 cols, row-major f64,
// everything little-endian. Labels: one base-10 integer per line.
// load_feature_matrix sniffs the magic to pick the format.

FeatureMatrix load_feature_matrix(const std::filesystem::path& features_path);
LabeledDataset load_features(const std::filesystem::path& features_path,
                             const std::filesystem::path& labels_path);

void save_features_csv(const Matrix& m, const std::filesystem::path& path);
void save_features_binary(const Matrix& m, const std::filesystem::path& path);

std::vector<int> load_labels(const std::filesystem::path& path);
void save_labels(const std::vector<int>& labels,
                 const std::filesystem::path& path);

// --- split files -------------------------------------------------------------

zsl::ZslSplit load_split(const std::filesystem::path& path);
void save_split(const zsl::ZslSplit& split, const std::filesystem::path& path);

}  // namespace capls::data
