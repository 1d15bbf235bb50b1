// Integration checks for the command-line binary: exit codes, produced
// files, and report determinism. Takes the binary path as argv[1].

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "capls/data.hpp"
#include "capls/zsl.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cout << "[FAIL] " << what << "\n";
  } else {
    std::cout << "[ ok ] " << what << "\n";
  }
}

struct RunResult {
  int exit_code = -1;
  std::string stderr_text;
};

RunResult run(const std::string& command, const fs::path& stderr_file) {
  const std::string full = command + " >/dev/null 2>" + stderr_file.string();
  const int status = std::system(full.c_str());
  RunResult r;
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  std::ifstream in(stderr_file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.stderr_text = ss.str();
  return r;
}

json load_json(const fs::path& p) {
  std::ifstream in(p);
  json j;
  in >> j;
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <path-to-capls-binary>\n";
    return 2;
  }
  const std::string exe = argv[1];
  const fs::path dir =
      fs::temp_directory_path() /
      ("capls_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path err = dir / "stderr.txt";

  // --- synth: default flags produce four files -----------------------------
  const fs::path synth_dir = dir / "synth";
  auto r = run(exe + " synth --seed 5 --out-dir " + synth_dir.string(), err);
  check(r.exit_code == 0, "synth exits 0");
  int files = 0;
  for (const auto* name :
       {"source_features.csv", "source_labels.txt", "target_features.csv",
        "target_labels.txt"}) {
    if (fs::exists(synth_dir / name)) ++files;
  }
  check(files == 4, "synth default format writes exactly four files");
  check(!fs::exists(synth_dir / "source_features.bin"),
        "synth default format skips binaries");

  // --- synth determinism: same seed, identical bytes -----------------------
  const fs::path synth_dir2 = dir / "synth2";
  run(exe + " synth --seed 5 --out-dir " + synth_dir2.string(), err);
  check(slurp(synth_dir / "source_features.csv") ==
            slurp(synth_dir2 / "source_features.csv"),
        "synth repeats are byte-identical");

  // --- synth: both formats, shifted benchmark ------------------------------
  const fs::path bench = dir / "bench";
  r = run(exe +
              " synth --seed 7 --rotation 0.5235987755982988 --translation 1"
              " --format both --out-dir " +
              bench.string(),
          err);
  check(r.exit_code == 0, "shifted synth exits 0");
  check(fs::exists(bench / "source_features.bin"),
        "format both writes binaries");

  // --- synth: invalid config -> exit 2 -------------------------------------
  r = run(exe + " synth --dim 1 --rotation 0.5 --out-dir " +
              (dir / "bad").string(),
          err);
  check(r.exit_code == 2, "rotation with dim < 2 exits 2");

  // --- uda: happy path ------------------------------------------------------
  const fs::path report1 = dir / "uda1.json";
  const std::string uda_cmd =
      exe + " uda --source-features " + (bench / "source_features.csv").string() +
      " --source-labels " + (bench / "source_labels.txt").string() +
      " --target-features " + (bench / "target_features.csv").string() +
      " --target-labels " + (bench / "target_labels.txt").string() +
      " --dim 16 --iters 4 --out ";
  r = run(uda_cmd + report1.string(), err);
  check(r.exit_code == 0, "uda exits 0");
  {
    const json rep = load_json(report1);
    check(rep.contains("config") && rep.contains("trace") &&
              rep.contains("metrics") && rep.contains("versions"),
          "uda report has the stable key set");
    check(rep["trace"].size() == 5, "uda trace length is iters + 1");
    check(rep["config"]["dim"] == 16 && rep["config"]["iters"] == 4,
          "uda config echoes resolved flags");
    check(rep["metrics"].contains("final_accuracy"),
          "uda metrics carry accuracy when labels are given");
  }

  // --- uda: default T=20 gives trace length 21 ------------------------------
  const fs::path report21 = dir / "uda21.json";
  r = run(exe + " uda --source-features " +
              (bench / "source_features.csv").string() + " --source-labels " +
              (bench / "source_labels.txt").string() + " --target-features " +
              (bench / "target_features.csv").string() + " --dim 8 --out " +
              report21.string(),
          err);
  check(r.exit_code == 0, "uda with defaults exits 0");
  check(load_json(report21)["trace"].size() == 21,
        "default iteration count yields trace length 21");

  // --- uda: binary features load identically --------------------------------
  const fs::path report_bin = dir / "uda_bin.json";
  r = run(exe + " uda --source-features " +
              (bench / "source_features.bin").string() + " --source-labels " +
              (bench / "source_labels.txt").string() + " --target-features " +
              (bench / "target_features.bin").string() + " --target-labels " +
              (bench / "target_labels.txt").string() +
              " --dim 16 --iters 4 --out " + report_bin.string(),
          err);
  check(r.exit_code == 0, "uda over binary features exits 0");
  check(load_json(report_bin)["metrics"] == load_json(report1)["metrics"],
        "csv and binary feature files give identical metrics");

  // --- uda determinism -------------------------------------------------------
  const fs::path report2 = dir / "uda2.json";
  run(uda_cmd + report2.string(), err);
  check(load_json(report1)["metrics"].dump() ==
            load_json(report2)["metrics"].dump(),
        "identical flags give byte-identical metric blocks");

  // --- uda: lda ablation shares the preprocess hash --------------------------
  const fs::path report_lda = dir / "uda_lda.json";
  r = run(uda_cmd + report_lda.string() + " --projection lda", err);
  check(r.exit_code == 0, "lda ablation exits 0");
  check(load_json(report_lda)["config"]["preprocess_hash"] ==
            load_json(report1)["config"]["preprocess_hash"],
        "slpp and lda runs record the same preprocess hash");

  // --- uda: missing file -> exit 2, message names the path -------------------
  r = run(exe + " uda --source-features " + (dir / "missing.csv").string() +
              " --source-labels " + (bench / "source_labels.txt").string() +
              " --target-features " + (bench / "target_features.csv").string(),
          err);
  check(r.exit_code == 2, "missing features file exits 2");
  check(r.stderr_text.find((dir / "missing.csv").string()) != std::string::npos,
        "error message names the missing path");

  // --- zsl: automatic seeded splits ------------------------------------------
  const fs::path zsl_data = dir / "zsl_data";
  run(exe + " synth --classes 10 --dim 16 --class-sep 10 --seed 9"
            " --source-per-class 14 --target-per-class 14 --out-dir " +
          zsl_data.string(),
      err);
  const fs::path zreport = dir / "zsl.json";
  const std::string zsl_cmd =
      exe + " zsl --source-features " + (zsl_data / "source_features.csv").string() +
      " --source-labels " + (zsl_data / "source_labels.txt").string() +
      " --target-features " + (zsl_data / "target_features.csv").string() +
      " --target-labels " + (zsl_data / "target_labels.txt").string() +
      " --known-classes 6 --dim 16 --out ";
  r = run(zsl_cmd + zreport.string(), err);
  check(r.exit_code == 0, "zsl exits 0");
  {
    const json rep = load_json(zreport);
    check(rep["metrics"]["per_split"].size() == 5,
          "zsl default runs five seeded splits");
    check(rep["metrics"]["aggregate"].contains("harmonic"),
          "zsl aggregate reports the harmonic mean");
    const double h = rep["metrics"]["aggregate"]["harmonic"]["mean"];
    check(h > 0.95, "zero-shift zsl harmonic mean exceeds 0.95");
    check(rep["metrics"]["aggregate"]["harmonic"].contains("sem"),
          "zsl aggregate reports the standard error of the mean");
  }

  // --- zsl determinism --------------------------------------------------------
  const fs::path zreport2 = dir / "zsl2.json";
  run(zsl_cmd + zreport2.string(), err);
  check(load_json(zreport)["metrics"].dump() ==
            load_json(zreport2)["metrics"].dump(),
        "zsl metrics blocks are byte-identical across reruns");

  // --- zsl: known-classes boundary -> exit 2 ----------------------------------
  r = run(zsl_cmd + (dir / "zsl_bad.json").string() + " --known-classes 10",
          err);
  check(r.exit_code == 2, "known-classes equal to the class count exits 2");

  // --- zsl: externally supplied split file -------------------------------------
  {
    const auto target = capls::data::load_features(
        zsl_data / "target_features.csv", zsl_data / "target_labels.txt");
    const auto split = capls::zsl::make_split(target.labels, 6, 42);
    capls::data::save_split(split, dir / "split.json");
  }
  const fs::path zfile_report = dir / "zsl_file.json";
  r = run(zsl_cmd + zfile_report.string() + " --split-file " +
              (dir / "split.json").string(),
          err);
  check(r.exit_code == 0, "zsl with a split file exits 0");
  {
    const json rep = load_json(zfile_report);
    check(rep["metrics"]["per_split"].size() == 1,
          "split-file mode runs exactly the supplied split");
    check(rep["config"].contains("split_files"),
          "split-file mode echoes the file in the config");
  }

  // --- zsl: missing companion flag -> exit 2 -----------------------------------
  r = run(exe + " zsl --source-features " +
              (zsl_data / "source_features.csv").string() +
              " --source-labels " + (zsl_data / "source_labels.txt").string() +
              " --target-features " +
              (zsl_data / "target_features.csv").string(),
          err);
  check(r.exit_code == 2, "zsl without target labels exits 2");

  // --- bad flag value -> exit 2 ------------------------------------------------
  r = run(exe + " uda --source-features x --source-labels y"
              " --target-features z --projection nope",
          err);
  check(r.exit_code == 2, "invalid flag values exit 2");

  std::error_code ec;
  fs::remove_all(dir, ec);

  if (failures != 0) {
    std::cout << failures << " cli check(s) failed\n";
    return 1;
  }
  std::cout << "all cli checks passed\n";
  return 0;
}
