#include "ergodic/errors.hpp"
#include "ergodic/io.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace ergodic;
using namespace ergodic::testing;
using ergodic::io::json;

namespace {

std::filesystem::path data(const char* name) { return std::filesystem::path(ERGODIC_TEST_DATA) / name; }

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "ergodic_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("kernel files") {
  auto k = io::kernel_from_json(io::read_json_file(data("absorbing.json")));
  CHECK(k.space().labels() == std::vector<std::string>{"s0", "s1", "s2"});
  CHECK(k.matrix() == absorbing_pair().matrix());
  auto back = io::kernel_from_json(json::parse(io::to_json(k).dump()));
  CHECK(back.matrix() == k.matrix());

  CHECK_THROWS_AS(io::kernel_from_json(json::parse(R"({"states": ["a"], "rows": [[0.5]]})")), InvalidInput);
  CHECK_THROWS_AS(io::kernel_from_json(json::parse(R"({"states": ["a", "b"], "rows": [[1, 0], [1]]})")), InvalidInput);
  CHECK_THROWS_AS(io::kernel_from_json(json::parse(R"({"states": ["a"], "rows": [[1, 0]]})")), InvalidInput);
  CHECK_THROWS_AS(io::kernel_from_json(json::parse(R"({"rows": [[1]]})")), InvalidInput);
  CHECK_THROWS_AS(io::kernel_from_json(json::parse(R"({"states": ["a"], "rows": [["x"]]})")), InvalidInput);
  json nan_kernel = {{"states", {"a"}}, {"rows", {{std::nan("")}}}};
  CHECK_THROWS_AS(io::kernel_from_json(nan_kernel), InvalidInput);
  json inf_kernel = {{"states", {"a"}}, {"rows", {{HUGE_VAL}}}};
  CHECK_THROWS_AS(io::kernel_from_json(inf_kernel), InvalidInput);
  CHECK_THROWS_AS(io::read_json_file(data("missing.json")), InvalidInput);
}

TEST_CASE("round trip preserves doubles exactly") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    auto k = random_dense_kernel(rng, pick(rng, 1, 9));
    auto back = io::kernel_from_json(json::parse(io::to_json(k).dump(2)));
    CHECK(back.matrix() == k.matrix());
  }
}

TEST_CASE("measures follow the file's state order") {
  auto k = absorbing_pair();
  auto mu = io::measure_from_json(json::parse(R"({"states": ["s2", "s0", "s1"], "weights": [0.5, 0.2, 0.3]})"),
                                  k.space());
  CHECK(mu.weights() == vec({0.2, 0.3, 0.5}));
  auto point = io::measure_from_json(io::read_json_file(data("point_s2.json")), k.space());
  CHECK(point.weights() == vec({0, 0, 1}));
  auto l = io::observable_from_json(json::parse(R"({"states": ["s0", "s1", "s2"], "values": [1, 2, 3]})"), k.space());
  CHECK(l.values() == vec({1, 2, 3}));
  CHECK_THROWS_AS(io::measure_from_json(json::parse(R"({"states": ["s0", "s1"], "weights": [1, 0]})"), k.space()),
                  InvalidInput);
  CHECK_THROWS_AS(
      io::measure_from_json(json::parse(R"({"states": ["s0", "s0", "s1"], "weights": [1, 0, 0]})"), k.space()),
      InvalidInput);
  CHECK_THROWS_AS(
      io::measure_from_json(json::parse(R"({"states": ["s0", "s1", "s2"], "weights": [1, 0]})"), k.space()),
      InvalidInput);
  auto again = io::measure_from_json(io::to_json(mu), k.space());
  CHECK(again.weights() == mu.weights());
}

TEST_CASE("model files") {
  auto m = io::model_from_json(io::read_json_file(data("toy_economy.json")));
  CHECK(induce_kernel(m).matrix() == induce_kernel(toy_economy()).matrix());
  auto back = io::model_from_json(io::to_json(m));
  CHECK(induce_kernel(back).matrix() == induce_kernel(m).matrix());
  json broken = io::to_json(m);
  broken["law"].erase("e0|d0|e0");
  CHECK_THROWS_AS(io::model_from_json(broken), InvalidInput);
  json bad_target = io::to_json(m);
  bad_target["law"]["e0|d0|e0"] = "e7|d0";
  CHECK_THROWS_AS(io::model_from_json(bad_target), InvalidInput);
}

TEST_CASE("density files") {
  auto in = io::density_from_json(io::read_json_file(data("density.json")));
  CHECK(in.density.rows() == 2);
  CHECK(in.cell_weights.size() == 2);
  CHECK(in.eps == std::vector<double>{0.25, 0.5});
}

TEST_CASE("report and decomposition documents") {
  auto d = decompose(absorbing_pair());
  json j = io::to_json(d);
  CHECK(j["classes"] == json::parse(R"([["s0"], ["s1"]])"));
  CHECK(j["transient"] == json::parse(R"(["s2"])"));
  CHECK(j["eigenfunctions"][0] == json::parse("[1.0, 0.0, 0.5]"));
  auto limit = io::kernel_from_json(json{{"states", j["states"]}, {"rows", j["limit_kernel"]}});
  CHECK(limit.matrix() == d.limit_kernel.matrix());

  json r = io::to_json(check_doeblin(two_state()));
  CHECK(r["condition"] == "doeblin");
  CHECK(r["satisfied"] == true);
  CHECK(r["witnesses"]["mu"].size() == 2);

  json s = io::to_json(compute_split(flip()));
  CHECK(s["peripheral_eigenvalues"] == json::parse("[[1.0, 0.0], [-1.0, 0.0]]"));
  CHECK(s["decay_rate"] == 0.0);

  json v = io::to_json(ergodicity_verdict(toy_economy()));
  CHECK(v["satisfied"] == true);
  CHECK(v["class_count"] == 1);
  CHECK(v["mu_star"]["states"].size() == 4);
}

TEST_CASE("atomic writes replace the target") {
  const auto path = scratch_dir() / "out.json";
  io::write_file_atomic(path, "first\n");
  io::write_file_atomic(path, "second\n");
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "second\n");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  CHECK_THROWS_AS(io::write_file_atomic(scratch_dir() / "no" / "such" / "dir.json", "x"), InvalidInput);
}
