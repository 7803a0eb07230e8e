#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fragtree {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& field, const std::string& msg)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " +
                           (field.empty() ? "" : "'" + field + "': ") + msg),
        line_(line),
        field_(field) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct ExperimentConfig {
  std::string density = "brownian";
  std::string switching = "size_biased";
  double alpha = 0.5;
  double epsilon = 1e-3;
  double tail_tol = 1e-6;
  std::uint64_t jump_budget = 1000000;
  std::uint64_t replicates = 1000;
  std::vector<std::uint64_t> checkpoints = {1, 16, 64, 256};
  std::vector<double> rho = {0.5, 1.0, 2.0};
  std::vector<std::string> parts = {"mellin", "junction", "lengths"};
  std::uint64_t seed = 1;
  std::string out = "out";
  int workers = 1;
  double z_threshold = 4.0;
  int leaves = 4;
  std::uint64_t dump_replicates = 2;

  bool has_part(const std::string& p) const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// `key = value` lines; '#' starts a comment.  Lists are comma separated.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Inverse of parse_config; numbers are written in shortest round-trip form.
std::string serialize_config(const ExperimentConfig& config);

/// Throws ConfigError (line 0) when a field is out of range.
void validate_config(const ExperimentConfig& config, const std::string& source = "<config>");

}  // namespace fragtree
