#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include <json.hpp>

#include "urbanmix/calendar.hpp"
#include "urbanmix/synthetic.hpp"

namespace testing_support {

inline std::filesystem::path tmp_dir(const std::string& name) {
  auto dir = std::filesystem::path(URBANMIX_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline nlohmann::json shipped_scaling_spec() {
  std::ifstream in(std::string(URBANMIX_DATA_DIR) + "/nl2014/scaling.json");
  return nlohmann::json::parse(in);
}

/// Synthetic 2014 input set, written once per process into its own
/// directory so parallel test processes do not collide. Removed at exit.
inline const std::filesystem::path& shared_fixture() {
  struct Fixture {
    std::filesystem::path dir = tmp_dir("fixture_" + std::to_string(::getpid()));
    std::filesystem::path config =
        urbanmix::synth::write_fixture(dir, urbanmix::dutch_calendar(2014), shipped_scaling_spec());
    ~Fixture() {
      std::error_code ec;
      std::filesystem::remove_all(dir, ec);
    }
  };
  static const Fixture f;
  return f.config;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testing_support
