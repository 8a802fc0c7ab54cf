#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "berglab/error.hpp"
#include "berglab/io.hpp"

namespace berglab {

struct ToleranceProfile {
  std::string name = "default";
  double quad_tol = 1e-10;
  int n = 64;              // transfinite / probe node count
  int r_per_decade = 16;
};

// fast, default or strict; ConfigInvalid otherwise.
ToleranceProfile tolerance_profile(const std::string& name);

struct RunOptions {
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;  // overrides the config's seed
  int threads = 0;                    // 0 keeps the OpenMP default
  std::string tolerance_profile = "default";
};

// Executes config["pipeline"], writes CSV/JSON artifacts into opt.out and
// returns the manifest (also written as manifest.json).
json run(const json& config, const RunOptions& opt);

// Machine-readable error body for a failed run.
json error_document(const Error& e);

}  // namespace berglab
