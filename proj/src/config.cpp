#include "fragtree/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fragtree/format.hpp"

namespace fragtree {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Field {
  const std::string& source;
  int line;
  const std::string& key;

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(source, line, key, msg); }

  double real(const std::string& v) const {
    double x = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(x)) {
      fail("expected a finite number, got '" + v + "'");
    }
    return x;
  }

  std::uint64_t count(const std::string& v) const {
    std::uint64_t x = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
      fail("expected a non-negative integer, got '" + v + "'");
    }
    return x;
  }
};

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, double>) {
      out += fmt(xs[i]);
    } else if constexpr (std::is_same_v<T, std::string>) {
      out += xs[i];
    } else {
      out += std::to_string(xs[i]);
    }
  }
  return out;
}

}  // namespace

bool ExperimentConfig::has_part(const std::string& p) const {
  return std::find(parts.begin(), parts.end(), p) != parts.end();
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig c;
  std::stringstream in(text);
  std::string raw;
  int line = 0;
  std::vector<std::string> seen;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line, "", "expected 'key = value'");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    Field field{source, line, key};
    if (key.empty()) field.fail("missing key");
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) field.fail("duplicate key");
    seen.push_back(key);
    if (value.empty() && key != "parts") field.fail("missing value");

    if (key == "density") {
      c.density = value;
    } else if (key == "switching") {
      c.switching = value;
    } else if (key == "alpha") {
      c.alpha = field.real(value);
    } else if (key == "epsilon") {
      c.epsilon = field.real(value);
    } else if (key == "tail_tol") {
      c.tail_tol = field.real(value);
    } else if (key == "jump_budget") {
      c.jump_budget = field.count(value);
    } else if (key == "replicates") {
      c.replicates = field.count(value);
    } else if (key == "checkpoints") {
      c.checkpoints.clear();
      for (auto& v : split_list(value)) c.checkpoints.push_back(field.count(v));
    } else if (key == "rho") {
      c.rho.clear();
      for (auto& v : split_list(value)) c.rho.push_back(field.real(v));
    } else if (key == "parts") {
      c.parts = split_list(value);
      for (auto& p : c.parts) {
        if (p != "mellin" && p != "junction" && p != "lengths") field.fail("unknown part '" + p + "'");
      }
    } else if (key == "seed") {
      c.seed = field.count(value);
    } else if (key == "out") {
      c.out = value;
    } else if (key == "workers") {
      auto w = field.count(value);
      if (w < 1 || w > 1024) field.fail("must lie in [1, 1024]");
      c.workers = static_cast<int>(w);
    } else if (key == "z_threshold") {
      c.z_threshold = field.real(value);
    } else if (key == "leaves") {
      auto n = field.count(value);
      if (n > 64) field.fail("must be at most 64");
      c.leaves = static_cast<int>(n);
    } else if (key == "dump_replicates") {
      c.dump_replicates = field.count(value);
    } else {
      field.fail("unknown key");
    }
  }
  validate_config(c, source);
  return c;
}

void validate_config(const ExperimentConfig& c, const std::string& source) {
  auto bad = [&](const std::string& key, const std::string& msg) {
    throw ConfigError(source, 0, key, msg);
  };
  if (!(c.alpha > 0.0)) bad("alpha", "must be positive");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) bad("epsilon", "must lie in (0, 1)");
  if (!(c.tail_tol > 0.0 && c.tail_tol < 1.0)) bad("tail_tol", "must lie in (0, 1)");
  if (c.jump_budget == 0) bad("jump_budget", "must be positive");
  if (c.checkpoints.empty()) bad("checkpoints", "need at least one checkpoint");
  for (std::size_t i = 0; i < c.checkpoints.size(); ++i) {
    if (c.checkpoints[i] < 1) bad("checkpoints", "leaf counts start at 1");
    if (i && c.checkpoints[i] <= c.checkpoints[i - 1]) bad("checkpoints", "must be increasing");
  }
  if (c.checkpoints.back() > 100000) bad("checkpoints", "at most 100000 leaves");
  for (double r : c.rho) {
    if (!(r > 0.0)) bad("rho", "exponents must be positive");
  }
  if (c.workers < 1) bad("workers", "must be at least 1");
  if (!(c.z_threshold > 0.0)) bad("z_threshold", "must be positive");
  if (c.leaves < 1) bad("leaves", "must be at least 1");
  if (c.out.empty()) bad("out", "missing output directory");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "", "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "density = " << c.density << "\n";
  out << "switching = " << c.switching << "\n";
  out << "alpha = " << fmt(c.alpha) << "\n";
  out << "epsilon = " << fmt(c.epsilon) << "\n";
  out << "tail_tol = " << fmt(c.tail_tol) << "\n";
  out << "jump_budget = " << c.jump_budget << "\n";
  out << "replicates = " << c.replicates << "\n";
  out << "checkpoints = " << join(c.checkpoints) << "\n";
  out << "rho = " << join(c.rho) << "\n";
  out << "parts = " << join(c.parts) << "\n";
  out << "seed = " << c.seed << "\n";
  out << "out = " << c.out << "\n";
  out << "workers = " << c.workers << "\n";
  out << "z_threshold = " << fmt(c.z_threshold) << "\n";
  out << "leaves = " << c.leaves << "\n";
  out << "dump_replicates = " << c.dump_replicates << "\n";
  return out.str();
}

}  // namespace fragtree
