#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "deformtrack/io.hpp"
#include "deformtrack/metrics.hpp"
#include "deformtrack/segmentation.hpp"
#include "deformtrack_cli/cli.hpp"

using namespace deformtrack;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "deformtrack");
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::map<std::string, std::string> tree_bytes(const fs::path& dir) {
  std::map<std::string, std::string> m;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) m[fs::relative(e.path(), dir).string()] = read_text(e.path());
  return m;
}

// One short sequence shared by every test in the suite.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / "deformtrack_cli_test";
    fs::remove_all(root_);
    fs::create_directories(root_);
    const auto r = invoke({"synth", "-o", (root_ / "seq").string(), "--kind", "rope", "--motion", "swing", "--frames",
                           "12", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto i = invoke({"init", "-s", (root_ / "seq").string(), "-o", (root_ / "init.json").string()});
    ASSERT_EQ(i.code, 0) << i.err;
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }

  static fs::path seq() { return root_ / "seq"; }
  static fs::path init() { return root_ / "init.json"; }
  static fs::path path(const std::string& name) { return root_ / name; }

 private:
  static inline fs::path root_;
};

}  // namespace

TEST_F(Cli, SynthIsByteIdentical) {
  for (const char* d : {"s1", "s2"}) {
    const auto r = invoke({"synth", "-o", path(d).string(), "--kind", "bdlo", "--frames", "3", "--seed", "9"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  const auto a = tree_bytes(path("s1")), b = tree_bytes(path("s2"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
}

TEST_F(Cli, PipelineIsByteIdentical) {
  for (const char* tag : {"a", "b"}) {
    const std::string t(tag);
    ASSERT_EQ(invoke({"segment", "-s", seq().string(), "-o", path("seg_" + t).string()}).code, 0);
    ASSERT_EQ(invoke({"init", "-s", seq().string(), "-o", path("init_" + t + ".json").string()}).code, 0);
    ASSERT_EQ(invoke({"track", "-s", seq().string(), "-i", path("init_" + t + ".json").string(), "-o",
                      path("traj_" + t + ".json").string()})
                  .code,
              0);
    ASSERT_EQ(invoke({"eval", "-t", path("traj_" + t + ".json").string(), "-s", seq().string(), "--json",
                      path("m_" + t + ".json").string(), "--csv", path("m_" + t + ".csv").string()})
                  .code,
              0);
  }
  EXPECT_EQ(tree_bytes(path("seg_a")), tree_bytes(path("seg_b")));
  for (const char* f : {"init_%.json", "traj_%.json", "m_%.json", "m_%.csv"}) {
    std::string a(f), b(f);
    a.replace(a.find('%'), 1, "a");
    b.replace(b.find('%'), 1, "b");
    EXPECT_EQ(read_text(path(a)), read_text(path(b))) << f;
  }
}

TEST_F(Cli, WindowOneEqualsRaw) {
  const auto r =
      invoke({"track", "-s", seq().string(), "-i", init().string(), "-o", path("w1.json").string(), "-w", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = read_trajectory(path("w1.json"));
  EXPECT_EQ(t.smoothing_window, 1u);
  EXPECT_EQ(t.smoothed.keypoints, t.raw.keypoints);
}

TEST_F(Cli, EvalMatchesLibraryMetrics) {
  ASSERT_EQ(invoke({"track", "-s", seq().string(), "-i", init().string(), "-o", path("t.json").string()}).code, 0);
  const auto r = invoke({"eval", "-t", path("t.json").string(), "-s", seq().string(), "--json", path("e.json").string(),
                         "--csv", path("e.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = nlohmann::json::parse(read_text(path("e.json")));

  const auto traj = read_trajectory(path("t.json")).smoothed;
  const auto manifest = read_manifest(seq());
  const auto ref = read_depth(seq() / manifest.reference);
  std::vector<FrameMetrics> frames;
  for (std::size_t i = 0; i < traj.frames(); ++i) {
    const auto& fr = manifest.frames[i];
    const auto seg = segment_frame(read_depth(seq() / fr.depth), ref, manifest.camera, read_cloud(seq() / fr.exclusion),
                                   SegmentationParams{}, fr.index);
    frames.push_back(frame_metrics(traj.keypoints[i], traj.topology, build_index(seg.cloud)));
  }
  const auto summary = aggregate(frames);
  EXPECT_NEAR(report.at("summary").at("mean_chamfer_mm").get<double>(), summary.mean_chamfer_mm, 1e-9);
  EXPECT_NEAR(report.at("summary").at("mean_edge_rmse_mm").get<double>(), summary.mean_edge_rmse_mm, 1e-9);
  EXPECT_NEAR(report.at("summary").at("mean_fscore_pct").get<double>(), summary.mean_fscore_pct, 1e-9);
  ASSERT_TRUE(report.contains("truth"));
  EXPECT_EQ(report.at("truth").at("swap_frames").get<int>(), 0);
}

TEST_F(Cli, NoProjectionGrowsChamfer) {
  double cd[2];
  const std::vector<std::vector<std::string>> extra{{}, {"--no-projection"}};
  for (int k = 0; k < 2; ++k) {
    auto args =
        std::vector<std::string>{"track", "-s", seq().string(), "-i", init().string(), "-o", path("np.json").string()};
    args.insert(args.end(), extra[static_cast<std::size_t>(k)].begin(), extra[static_cast<std::size_t>(k)].end());
    ASSERT_EQ(invoke(args).code, 0);
    ASSERT_EQ(invoke({"eval", "-t", path("np.json").string(), "-s", seq().string(), "--raw", "--json",
                      path("np_m.json").string(), "--csv", path("np_m.csv").string()})
                  .code,
              0);
    cd[k] = nlohmann::json::parse(read_text(path("np_m.json"))).at("summary").at("mean_chamfer_mm").get<double>();
  }
  EXPECT_GT(cd[1], cd[0]);
}

TEST_F(Cli, CorruptManifestIsInputError) {
  fs::copy(seq(), path("bad"), fs::copy_options::recursive);
  auto j = nlohmann::json::parse(read_text(path("bad") / "manifest.json"));
  j.erase("camera");
  write_text(path("bad") / "manifest.json", j.dump());
  const auto r = invoke({"segment", "-s", path("bad").string(), "-o", path("bad_seg").string()});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_NE(r.err.find("camera"), std::string::npos) << r.err;
}

TEST_F(Cli, ConfigErrorsAreInputErrors) {
  write_text(path("cfg.json"), R"({"tracking": {"smoothing_windw": 3}})");
  auto r = invoke({"track", "-c", path("cfg.json").string(), "-s", seq().string(), "-i", init().string(), "-o",
                   path("x.json").string()});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_NE(r.err.find("smoothing_windw"), std::string::npos) << r.err;

  r = invoke({"track", "-s", seq().string(), "-i", init().string(), "-o", path("x.json").string(), "-w", "4"});
  EXPECT_EQ(r.code, cli::kExitInput);

  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitInput);
  EXPECT_EQ(invoke({"init", "-s", seq().string()}).code, cli::kExitInput);
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  write_text(path("w3.json"), R"({"tracking": {"smoothing_window": 3}})");
  ASSERT_EQ(invoke({"track", "-c", path("w3.json").string(), "-s", seq().string(), "-i", init().string(), "-o",
                    path("p1.json").string()})
                .code,
            0);
  EXPECT_EQ(read_trajectory(path("p1.json")).smoothing_window, 3u);
  ASSERT_EQ(invoke({"track", "-c", path("w3.json").string(), "-s", seq().string(), "-i", init().string(), "-o",
                    path("p2.json").string(), "-w", "7"})
                .code,
            0);
  EXPECT_EQ(read_trajectory(path("p2.json")).smoothing_window, 7u);
}

TEST_F(Cli, StageFailureExitCode) {
  // Every frame equals the reference: nothing to segment.
  fs::copy(seq(), path("flat"), fs::copy_options::recursive);
  const auto manifest = read_manifest(path("flat"));
  for (const auto& f : manifest.frames)
    fs::copy_file(path("flat") / manifest.reference, path("flat") / f.depth, fs::copy_options::overwrite_existing);
  const auto r = invoke({"segment", "-s", path("flat").string(), "-o", path("flat_seg").string()});
  EXPECT_EQ(r.code, cli::kExitStage) << r.err;
  EXPECT_EQ(invoke({"init", "-s", path("flat").string(), "-o", path("flat_init.json").string()}).code, cli::kExitStage);
}

TEST_F(Cli, HelpAndVersion) {
  const auto h = invoke({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("track"), std::string::npos);
  const auto v = invoke({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(kToolVersion), std::string::npos);
}
