#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "berglab/error.hpp"
#include "berglab/io.hpp"
#include "berglab/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

int fail(const berglab::json& doc, const fs::path& out, int code) {
  std::cerr << doc.dump(2) << '\n';
  if (!out.empty()) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (!ec) berglab::write_json(out / "error.json", doc);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on Bergman kernels of Zalcman-type domains"};
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  berglab::RunOptions opt;
  app.add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory")->required();
  auto* seed_opt = app.add_option("--seed", seed, "overrides the config seed");
  app.add_option("--threads", opt.threads, "OpenMP threads (0 keeps the default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--tolerance-profile", opt.tolerance_profile, "quadrature and grid tolerances")
      ->check(CLI::IsMember({"fast", "default", "strict"}));
  CLI11_PARSE(app, argc, argv);

  opt.out = out;
  if (*seed_opt) opt.seed = seed;

  berglab::json config;
  try {
    std::ifstream in(config_path);
    config = berglab::json::parse(in);
  } catch (const berglab::json::exception& e) {
    return fail({{"status", "error"}, {"error", "ConfigInvalid"}, {"message", e.what()}}, opt.out, 2);
  }
  try {
    const auto manifest = berglab::run(config, opt);
    std::cout << manifest.dump(2) << '\n';
  } catch (const berglab::Error& e) {
    return fail(berglab::error_document(e), opt.out,
                e.code() == berglab::ErrorCode::ConfigInvalid ? 2 : 1);
  } catch (const std::exception& e) {
    return fail({{"status", "error"}, {"error", "Internal"}, {"message", e.what()}}, opt.out, 3);
  }
  return 0;
}
