#include "capls/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "capls/rng.hpp"

namespace capls::data {

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path,
                             std::size_t line, const std::string& what) {
  raise(ErrorCode::ParseError,
        path.string() + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_input(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) raise(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

constexpr char kMagic[4] = {'C', 'P', 'L', 'S'};

void put_u32_le(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff),
                         static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff),
                         static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

std::uint32_t get_u32_le(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  return static_cast<std::uint32_t>(bytes[0]) |
         (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

void put_f64_le(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  char bytes[8];
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  }
  out.write(bytes, 8);
}

double get_f64_le(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  }
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

Matrix load_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, false);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    const char* cursor = line.c_str();
    for (;;) {
      char* end = nullptr;
      const double v = std::strtod(cursor, &end);
      if (end == cursor) parse_fail(path, line_no, "expected a number");
      row.push_back(v);
      cursor = end;
      while (*cursor == ' ' || *cursor == '\t') ++cursor;
      if (*cursor == ',') {
        ++cursor;
        continue;
      }
      if (*cursor == '\0' || *cursor == '\r') break;
      parse_fail(path, line_no, "unexpected character '" +
                                    std::string(1, *cursor) + "'");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      parse_fail(path, line_no,
                 "expected " + std::to_string(rows.front().size()) +
                     " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) parse_fail(path, line_no, "no feature rows");

  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Matrix load_binary(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, true);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    raise(ErrorCode::ParseError, path.string() + ": bad magic bytes");
  }
  const std::uint32_t rows = get_u32_le(in);
  const std::uint32_t cols = get_u32_le(in);
  if (!in || rows == 0 || cols == 0) {
    raise(ErrorCode::ParseError, path.string() + ": bad header");
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = get_f64_le(in);
    }
  }
  if (!in) raise(ErrorCode::ParseError, path.string() + ": truncated data");
  return m;
}

}  // namespace

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
  std::ifstream probe = open_input(path, true);
  char magic[4] = {0, 0, 0, 0};
  probe.read(magic, 4);
  probe.close();

  FeatureMatrix fm;
  fm.data = std::memcmp(magic, kMagic, 4) == 0 ? load_binary(path)
                                               : load_csv(path);
  require_finite(fm.data, path.string());
  return fm;
}

LabeledDataset load_features(const std::filesystem::path& features_path,
                             const std::filesystem::path& labels_path) {
  LabeledDataset ds;
  ds.features = load_feature_matrix(features_path);
  ds.labels = load_labels(labels_path);
  if (static_cast<Index>(ds.labels.size()) != ds.features.rows()) {
    raise(ErrorCode::RowCountMismatch,
          labels_path.string() + " has " + std::to_string(ds.labels.size()) +
              " labels but " + features_path.string() + " has " +
              std::to_string(ds.features.rows()) + " rows");
  }
  ds.validate();
  return ds;
}

void save_features_csv(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out = open_output(path, false);
  char buf[64];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      if (j > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) raise(ErrorCode::IoError, "failed writing " + path.string());
}

void save_features_binary(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out = open_output(path, true);
  out.write(kMagic, 4);
  put_u32_le(out, static_cast<std::uint32_t>(m.rows()));
  put_u32_le(out, static_cast<std::uint32_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) put_f64_le(out, m(i, j));
  }
  if (!out) raise(ErrorCode::IoError, "failed writing " + path.string());
}

std::vector<int> load_labels(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, false);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    char* end = nullptr;
    const long v = std::strtol(line.c_str(), &end, 10);
    if (end == line.c_str()) parse_fail(path, line_no, "expected an integer");
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    if (*end != '\0') parse_fail(path, line_no, "trailing characters");
    labels.push_back(static_cast<int>(v));
  }
  if (labels.empty()) parse_fail(path, line_no, "no labels");
  return labels;
}

void save_labels(const std::vector<int>& labels,
                 const std::filesystem::path& path) {
  std::ofstream out = open_output(path, false);
  for (int l : labels) out << l << '\n';
  if (!out) raise(ErrorCode::IoError, "failed writing " + path.string());
}

DatasetBundle generate_synthetic(const SynthConfig& cfg) {
  if (cfg.n_classes < 1 || cfg.n_per_class_source < 1 ||
      cfg.n_per_class_target < 1 || cfg.dim < 1) {
    raise(ErrorCode::ConfigError, "synthetic sizes must be positive");
  }
  if (!(cfg.class_sep > 0.0)) {
    raise(ErrorCode::ConfigError, "class_sep must be positive");
  }
  if (cfg.shift.rotation != 0.0 && cfg.dim < 2) {
    raise(ErrorCode::ConfigError, "rotation shift needs dim >= 2");
  }
  if (cfg.shift.noise < 0.0 || cfg.shift.translation < 0.0) {
    raise(ErrorCode::ConfigError, "shift magnitudes must be non-negative");
  }

  Rng rng(cfg.seed);
  auto gaussian_vec = [&](int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.next_gaussian();
    return v;
  };

  // Class means sit at random unit directions, rescaled so the minimum
  // pairwise distance equals class_sep (in units of the unit blob sigma).
  Matrix means(cfg.n_classes, cfg.dim);
  for (int c = 0; c < cfg.n_classes; ++c) {
    Vector u = gaussian_vec(cfg.dim);
    means.row(c) = u.transpose() / u.norm();
  }
  if (cfg.n_classes > 1) {
    double min_dist = std::numeric_limits<double>::infinity();
    for (int a = 0; a < cfg.n_classes; ++a) {
      for (int b = a + 1; b < cfg.n_classes; ++b) {
        min_dist = std::min(min_dist, (means.row(a) - means.row(b)).norm());
      }
    }
    means *= cfg.class_sep / min_dist;
  } else {
    means *= cfg.class_sep;
  }

  auto sample_domain = [&](int per_class) {
    LabeledDataset ds;
    ds.features.data.resize(
        static_cast<Index>(cfg.n_classes) * per_class, cfg.dim);
    for (int c = 0; c < cfg.n_classes; ++c) {
      for (int k = 0; k < per_class; ++k) {
        ds.features.data.row(static_cast<Index>(c) * per_class + k) =
            means.row(c) + gaussian_vec(cfg.dim).transpose();
        ds.labels.push_back(c);
      }
    }
    return ds;
  };

  LabeledDataset source = sample_domain(cfg.n_per_class_source);
  LabeledDataset target = sample_domain(cfg.n_per_class_target);
  target.features.domain = Domain::Target;

  if (cfg.shift.rotation != 0.0) {
    // Rotate within one random coordinate plane (i, j).
    const Index i = static_cast<Index>(rng.below(cfg.dim));
    Index j = static_cast<Index>(rng.below(cfg.dim - 1));
    if (j >= i) ++j;
    const double cs = std::cos(cfg.shift.rotation);
    const double sn = std::sin(cfg.shift.rotation);
    for (Index r = 0; r < target.features.data.rows(); ++r) {
      const double xi = target.features.data(r, i);
      const double xj = target.features.data(r, j);
      target.features.data(r, i) = cs * xi - sn * xj;
      target.features.data(r, j) = sn * xi + cs * xj;
    }
  }
  if (cfg.shift.translation != 0.0) {
    Vector dir = gaussian_vec(cfg.dim);
    dir /= dir.norm();
    target.features.data.rowwise() +=
        cfg.shift.translation * dir.transpose();
  }
  if (cfg.shift.noise > 0.0) {
    for (Index r = 0; r < target.features.data.rows(); ++r) {
      target.features.data.row(r) +=
          cfg.shift.noise * gaussian_vec(cfg.dim).transpose();
    }
  }

  DatasetBundle bundle;
  bundle.name = "synthetic";
  for (int c = 0; c < cfg.n_classes; ++c) {
    bundle.class_names.push_back("class_" + std::to_string(c));
  }
  bundle.domains.emplace("source", std::move(source));
  bundle.domains.emplace("target", std::move(target));
  return bundle;
}

zsl::ZslSplit load_split(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, false);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  zsl::ZslSplit split;
  try {
    split.known_classes = j.at("known_classes").get<std::vector<int>>();
    split.unseen_classes = j.at("unseen_classes").get<std::vector<int>>();
    split.target_train_rows =
        j.at("target_train_rows").get<std::vector<Index>>();
    split.target_test_rows =
        j.at("target_test_rows").get<std::vector<Index>>();
    split.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return split;
}

void save_split(const zsl::ZslSplit& split,
                const std::filesystem::path& path) {
  nlohmann::json j;
  j["known_classes"] = split.known_classes;
  j["unseen_classes"] = split.unseen_classes;
  j["target_train_rows"] = split.target_train_rows;
  j["target_test_rows"] = split.target_test_rows;
  j["seed"] = split.seed;
  std::ofstream out = open_output(path, false);
  out << j.dump(2) << '\n';
  if (!out) raise(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace capls::data
