#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace adr {

struct ScenarioConfig;

/// Decimal text for a double with 17 significant digits; reads back to the
/// identical bit pattern.
std::string format_double(double value);

/// Minimal streaming JSON emitter. Numbers go through format_double so files
/// round-trip exactly; nlohmann::json is used for reading.
class JsonWriter {
 public:
  void begin_object();
  void end_object();
  void begin_array();
  void end_array();
  void key(std::string_view k);

  void value(double v);
  void value(int v);
  void value(std::int64_t v);
  void value(std::uint64_t v);
  void value(bool v);
  void value(std::string_view v);

  void array(std::span<const double> values);
  void array(std::initializer_list<double> values) {
    array(std::span<const double>(values.begin(), values.size()));
  }

  template <typename T>
  void field(std::string_view k, const T& v) {
    key(k);
    value(v);
  }

  const std::string& str() const { return out_; }

 private:
  void separate();

  std::string out_;
  std::vector<bool> first_;  // one entry per open container
  bool after_key_ = false;
};

void write_config(JsonWriter& w, const ScenarioConfig& cfg);

/// Overwrites fields of `cfg` that are present in `j`.
void read_config_overrides(const nlohmann::json& j, ScenarioConfig& cfg);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace adr
