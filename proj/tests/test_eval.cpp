#include <doctest.h>

#include <cmath>

#include "capls/data.hpp"
#include "capls/eval.hpp"
#include "capls/preprocess.hpp"
#include "capls/uda.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using capls::Error;
using capls::ErrorCode;
using capls::Index;
using capls::LabeledDataset;
using capls::PipelineOptions;
using capls::Rng;
using namespace capls::eval;

TEST_CASE("per_image_accuracy basics") {
  CHECK(per_image_accuracy({0, 1, 2}, {0, 1, 2}) == 1.0);
  CHECK(per_image_accuracy({0, 1, 1}, {0, 1, 0}) ==
        doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(per_image_accuracy({0}, {0, 1}), Error);
  CHECK_THROWS_AS(per_image_accuracy({}, {}), Error);
}

TEST_CASE("per_image_accuracy of random guesses approaches 1/C") {
  Rng rng(8);
  const int c_total = 5;
  const int n = 10000;
  std::vector<int> pred, truth;
  for (int i = 0; i < n; ++i) {
    pred.push_back(static_cast<int>(rng.below(c_total)));
    truth.push_back(static_cast<int>(rng.below(c_total)));
  }
  const double acc = per_image_accuracy(pred, truth);
  const double p = 1.0 / c_total;
  const double sigma = std::sqrt(p * (1.0 - p) / n);
  CHECK(std::abs(acc - p) <= 3.0 * sigma + 1e-12);
}

TEST_CASE("per_image_accuracy is 1 on any self-comparison") {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> labels;
    const int n = 1 + static_cast<int>(rng.below(30));
    for (int i = 0; i < n; ++i) {
      labels.push_back(static_cast<int>(rng.below(6)));
    }
    CHECK(per_image_accuracy(labels, labels) == 1.0);
  }
}

TEST_CASE("confusion_matrix counts and row sums") {
  const auto perfect = confusion_matrix({0, 1, 2}, {0, 1, 2}, 3);
  CHECK(perfect(0, 0) == 1);
  CHECK(perfect(1, 1) == 1);
  CHECK(perfect(2, 2) == 1);
  CHECK(perfect.sum() == 3);

  const auto single = confusion_matrix({5}, {2}, 6);
  CHECK(single(2, 5) == 1);
  CHECK(single.sum() == 1);

  Rng rng(19);
  std::vector<int> pred, truth;
  std::vector<int> histogram(4, 0);
  for (int i = 0; i < 200; ++i) {
    pred.push_back(static_cast<int>(rng.below(4)));
    truth.push_back(static_cast<int>(rng.below(4)));
    ++histogram[static_cast<std::size_t>(truth.back())];
  }
  const auto cm = confusion_matrix(pred, truth, 4);
  CHECK(cm.sum() == 200);
  for (int c = 0; c < 4; ++c) {
    CHECK(cm.row(c).sum() == histogram[static_cast<std::size_t>(c)]);
  }

  CHECK_THROWS_AS(confusion_matrix({4}, {0}, 3), Error);
}

TEST_CASE("1nn returns the label of an exactly matching instance") {
  const auto train = testing_support::dataset(
      {{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}}, {0, 1, 2});
  const auto test = testing_support::feature_matrix({{0.0, 1.0}});
  CHECK(run_baseline_1nn(train, nullptr, test) == std::vector<int>{1});
}

TEST_CASE("1nn distance ties go to the lower pool index") {
  const auto train = testing_support::dataset(
      {{1.0, 0.0}, {-1.0, 0.0}}, {3, 4});
  const auto test = testing_support::feature_matrix({{0.0, 0.0}});
  CHECK(run_baseline_1nn(train, nullptr, test) == std::vector<int>{3});
}

TEST_CASE("1nn pools labelled target rows after the source rows") {
  const auto source = testing_support::dataset({{5.0, 5.0}}, {0});
  const auto target = testing_support::dataset({{0.0, 0.1}}, {1});
  const auto test = testing_support::feature_matrix({{0.0, 0.0}});
  CHECK(run_baseline_1nn(source, &target, test) == std::vector<int>{1});
}

TEST_CASE("1nn stays within 5% of nearest-class-mean on separable blobs") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    // one blob set sliced per class into 20 train + 15 held-out rows
    const auto all = testing_support::random_blobs(4, 35, 10, 6.0, 300 + seed);
    capls::LabeledDataset train, test_ds;
    train.features.data.resize(80, 10);
    test_ds.features.data.resize(60, 10);
    Index at_train = 0, at_test = 0;
    for (Index i = 0; i < all.rows(); ++i) {
      const bool to_train = (i % 35) < 20;
      if (to_train) {
        train.features.data.row(at_train++) = all.features.data.row(i);
        train.labels.push_back(all.labels[static_cast<std::size_t>(i)]);
      } else {
        test_ds.features.data.row(at_test++) = all.features.data.row(i);
        test_ds.labels.push_back(all.labels[static_cast<std::size_t>(i)]);
      }
    }
    train.features = capls::preprocess::l2_normalize_rows(train.features);
    test_ds.features = capls::preprocess::l2_normalize_rows(test_ds.features);

    const auto nn = run_baseline_1nn(train, nullptr, test_ds.features);
    const auto ncm = oracles::ncm_pipeline(
        capls::Matrix::Identity(10, 10), train.features.data, train.labels,
        {train.features.data}, test_ds.features.data, 4);
    const double acc_nn = per_image_accuracy(nn, test_ds.labels);
    const double acc_ncm = per_image_accuracy(ncm, test_ds.labels);
    CHECK(acc_nn >= acc_ncm - 0.05);
  }
}

TEST_CASE("1nn empty training set") {
  LabeledDataset empty;
  empty.features.data.resize(0, 2);
  const auto test = testing_support::feature_matrix({{0.0, 0.0}});
  CHECK_THROWS_AS(run_baseline_1nn(empty, nullptr, test), Error);
  try {
    run_baseline_1nn(empty, nullptr, test);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyTrainingSet);
  }
}

TEST_CASE("LDA projection rejects single-class data") {
  const auto ds = testing_support::dataset(
      {{1.0, 0.0}, {0.9, 0.1}, {0.8, 0.2}}, {0, 0, 0});
  CHECK_THROWS_AS(learn_lda_projection(ds, 1), Error);
  try {
    learn_lda_projection(ds, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateData);
  }
}

TEST_CASE("LDA and locality variants both solve zero-shift blobs") {
  capls::data::SynthConfig cfg;
  cfg.n_classes = 3;
  cfg.n_per_class_source = 15;
  cfg.n_per_class_target = 15;
  cfg.dim = 8;
  cfg.class_sep = 8.0;
  cfg.seed = 31;
  const auto bundle = capls::data::generate_synthetic(cfg);
  const auto& source = bundle.domains.at("source");
  const auto& target = bundle.domains.at("target");

  PipelineOptions opts;
  opts.d_sub = 4;
  opts.t_max = 3;
  const auto slpp_run =
      capls::uda::run_uda(source, target.features, opts, &target.labels);
  const auto lda_run =
      run_baseline_lda_subspace(source, target.features, opts, &target.labels);
  CHECK(*slpp_run.trace.back().accuracy == 1.0);
  CHECK(*lda_run.trace.back().accuracy == 1.0);
}

TEST_CASE("both variants emit full traces on the shifted benchmark") {
  const auto bundle =
      capls::data::generate_synthetic(testing_support::benchmark_config(40));
  const auto& source = bundle.domains.at("source");
  const auto& target = bundle.domains.at("target");
  PipelineOptions opts;
  opts.d_sub = 16;
  opts.t_max = 5;
  const auto a = capls::uda::run_uda(source, target.features, opts);
  const auto b = run_baseline_lda_subspace(source, target.features, opts);
  CHECK(a.trace.size() == 6);
  CHECK(b.trace.size() == 6);
}

TEST_CASE("runners consume identical preprocessed bytes") {
  const auto bundle =
      capls::data::generate_synthetic(testing_support::benchmark_config(41));
  const auto src =
      capls::preprocess::l2_normalize_rows(bundle.domains.at("source").features);
  const auto tgt =
      capls::preprocess::l2_normalize_rows(bundle.domains.at("target").features);

  // the hash a locality-projection run would record
  const auto h1 = preprocess_hash({&src.data, &tgt.data});
  // ... and the hash the LDA ablation records over the same dataset
  const auto src2 =
      capls::preprocess::l2_normalize_rows(bundle.domains.at("source").features);
  const auto tgt2 =
      capls::preprocess::l2_normalize_rows(bundle.domains.at("target").features);
  const auto h2 = preprocess_hash({&src2.data, &tgt2.data});
  CHECK(h1 == h2);
  CHECK(hash_hex(h1) == hash_hex(h2));
  CHECK(hash_hex(h1).size() == 16);

  // any data change shows up
  auto perturbed = tgt.data;
  perturbed(0, 0) += 1e-9;
  CHECK(preprocess_hash({&src.data, &perturbed}) != h1);
}
