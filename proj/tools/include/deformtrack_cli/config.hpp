#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "deformtrack/init.hpp"
#include "deformtrack/metrics.hpp"
#include "deformtrack/segmentation.hpp"
#include "deformtrack/synth.hpp"
#include "deformtrack/tracking.hpp"

namespace deformtrack::cli {

/// Every tunable of the pipeline in one place. The JSON form has one object
/// per section; see default_config_json() for the full key set.
struct PipelineConfig {
  SegmentationParams segmentation;
  InitConfig init;
  TrackingParams tracking;
  FScoreParams fscore;
  double e_thresh_mm = 5.0;
  double f_thresh_mm = 10.0;
  SynthConfig synth;
};

nlohmann::json config_to_json(const PipelineConfig& config);

/// Strict: unknown sections or keys and wrongly typed values throw
/// Error{Configuration} naming the key. Missing keys keep their defaults.
PipelineConfig config_from_json(const nlohmann::json& j);

nlohmann::json default_config_json();

/// Defaults, then the optional file merged over them, then `overrides`
/// (JSON pointer -> value) on top. Returns the effective document.
nlohmann::json resolve_config(const std::filesystem::path& file, const nlohmann::json& overrides);

/// Hash of the compact dump of an effective config document.
std::string config_hash(const nlohmann::json& effective);

}  // namespace deformtrack::cli
