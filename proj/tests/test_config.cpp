#include <cstring>

#include "doctest.h"
#include "fragtree/config.hpp"
#include "fragtree/rng.hpp"

using namespace fragtree;

namespace {
int error_line(const std::string& text, std::string* field = nullptr) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    if (field) *field = e.field();
    return e.line();
  }
  return -1;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }
}  // namespace

TEST_CASE("defaults survive a round trip") {
  ExperimentConfig c;
  CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("random configs round-trip bit-exactly") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    ExperimentConfig c;
    c.alpha = std::ldexp(uniform01(rng), -static_cast<int>(rng() % 20)) + 1e-300;
    c.epsilon = uniform01(rng) * 0.999;
    c.tail_tol = uniform01(rng) * 1e-3;
    c.z_threshold = 1.0 / uniform01(rng);
    c.rho = {uniform01(rng) * 10, 1.0 / 3.0, std::nextafter(2.0, 3.0)};
    c.seed = rng();
    c.replicates = rng() % 1000000;
    c.checkpoints = {1 + rng() % 5, 10 + rng() % 5, 100};
    c.workers = 1 + static_cast<int>(rng() % 8);
    c.parts = {"lengths"};
    ExperimentConfig back = parse_config(serialize_config(c));
    CHECK(back == c);
    CHECK(same_bits(back.alpha, c.alpha));
    CHECK(same_bits(back.rho[0], c.rho[0]));
  }
}

TEST_CASE("parsing details") {
  auto c = parse_config(
      "# comment\n\n  density = beta(0.3, 0.6)   # trailing\nrho = 1, 2\ncheckpoints=4,8\n"
      "parts = junction\nout = some dir\n");
  CHECK(c.density == "beta(0.3, 0.6)");
  CHECK(c.rho == std::vector<double>{1.0, 2.0});
  CHECK(c.checkpoints == std::vector<std::uint64_t>{4, 8});
  CHECK(c.has_part("junction"));
  CHECK(!c.has_part("mellin"));
  CHECK(c.out == "some dir");
}

TEST_CASE("diagnostics name the line and the field") {
  std::string field;
  CHECK(error_line("alpha = 0.5\n\nbogus = 1\n", &field) == 3);
  CHECK(field == "bogus");
  CHECK(error_line("alpha = zero\n", &field) == 1);
  CHECK(field == "alpha");
  CHECK(error_line("seed = -4\n", &field) == 1);
  CHECK(error_line("alpha\n") == 1);
  CHECK(error_line("alpha = 1\nalpha = 2\n", &field) == 2);
  CHECK(error_line("parts = mellin, cake\n", &field) == 1);
  CHECK(field == "parts");
  CHECK(error_line("workers = 0\n", &field) == 1);
  // Range checks run after parsing and report the field.
  error_line("epsilon = 2\n", &field);
  CHECK(field == "epsilon");
  error_line("checkpoints = 8, 4\n", &field);
  CHECK(field == "checkpoints");
  error_line("alpha = -1\n", &field);
  CHECK(field == "alpha");
  CHECK_THROWS_AS(load_config("does/not/exist.cfg"), ConfigError);
}
