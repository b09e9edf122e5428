#pragma once

#include <filesystem>
#include <iosfwd>

#include "deformtrack_cli/config.hpp"

namespace deformtrack::cli {

namespace fs = std::filesystem;

/// Effective config plus its document, so commands can stamp provenance.
struct Resolved {
  PipelineConfig config;
  nlohmann::json document;
  std::string hash;
};

Resolved resolve(const fs::path& config_file, const nlohmann::json& overrides);

void cmd_synth(const Resolved& cfg, const fs::path& out_dir, std::ostream& out);
void cmd_segment(const Resolved& cfg, const fs::path& sequence, const fs::path& out_dir, std::ostream& out);
void cmd_init(const Resolved& cfg, const fs::path& sequence, int frame, const fs::path& out_file, std::ostream& out);
void cmd_track(const Resolved& cfg, const fs::path& sequence, const fs::path& init_file, const fs::path& out_file,
               std::ostream& out);

struct EvalOptions {
  fs::path trajectory;
  fs::path sequence;  // optional
  fs::path truth;     // optional; defaults to sequence/truth.json when present
  bool raw = false;   // evaluate the unsmoothed trajectory
  fs::path out_json;
  fs::path out_csv;
};
void cmd_eval(const Resolved& cfg, const EvalOptions& options, std::ostream& out);

}  // namespace deformtrack::cli
