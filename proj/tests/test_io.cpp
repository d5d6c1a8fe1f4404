#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "phylab/checkpoint.hpp"
#include "phylab/csv.hpp"
#include "phylab/version.hpp"

using namespace phylab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(bool(in));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/phylab_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("csv_num uses %.10g") {
  CHECK(csv_num(3.0) == "3");
  CHECK(csv_num(0.5) == "0.5");
  CHECK(csv_num(1e-12) == "1e-12");
  CHECK(csv_num(0.2793916199925254) == "0.27939162");
  CHECK(csv_num(-7.25) == "-7.25");
  CHECK(csv_num(123456789012.0) == "1.23456789e+11");
}

TEST_CASE("csv writes the documented layout and round-trips") {
  TempFile f("table.csv");
  CsvTable t;
  t.comments = {"seed = 42", "tool = demo"};
  t.header = {"snr_db", "trials", "bler"};
  t.rows = {{csv_num(0.0), csv_num(4096.0), csv_num(0.2793916199925254)},
            {csv_num(2.5), csv_num(8192.0), csv_num(0.501)}};
  write_csv(f.path, t);

  CHECK(slurp(f.path) ==
        "# seed = 42\n"
        "# tool = demo\n"
        "snr_db,trials,bler\n"
        "0,4096,0.27939162\n"
        "2.5,8192,0.501\n");

  CsvTable r = read_csv(f.path);
  CHECK(r.comments == t.comments);
  CHECK(r.header == t.header);
  CHECK(r.rows == t.rows);
}

TEST_CASE("csv rejects delimiter-bearing fields and ragged rows") {
  TempFile f("bad.csv");
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{"1", "2,3"}};
  CHECK_THROWS_AS(write_csv(f.path, t), std::invalid_argument);
  t.rows = {{"1"}};
  CHECK_THROWS_AS(write_csv(f.path, t), std::invalid_argument);
  CHECK_THROWS_AS(read_csv("/tmp/phylab_does_not_exist.csv"), std::runtime_error);
}

namespace {

Network make_small_net(uint64_t seed) {
  Network net(seed);
  net.emplace<Dense>(3, 4);
  net.emplace<Activation>(Act::kTanh);
  net.emplace<BatchNorm>(4);
  net.emplace<Dense>(4, 2);
  net.emplace<Activation>(Act::kSoftmax);
  net.init_params(Init::kGlorotUniform);
  return net;
}

}  // namespace

TEST_CASE("checkpoint round-trips weights, running stats, and metadata") {
  TempFile f("ckpt.json");
  Network a = make_small_net(7);

  // Move the batch-norm running statistics off their initial values.
  Rng data_rng(99);
  for (int it = 0; it < 5; ++it) {
    Tensor x(8, 3);
    for (auto& v : x.v) v = data_rng.normal(0.5, 2.0);
    a.forward(x, Mode::kTrain);
  }

  CheckpointInfo info;
  info.kind = "demo";
  info.seed = 1234567890123456789ULL;
  info.meta = {{"n", 7.0}, {"k", 4.0}};
  save_checkpoint(f.path, a, info);

  Network b = make_small_net(8);  // different init, same shape
  CheckpointInfo got = load_checkpoint(f.path, b);
  CHECK(got.kind == "demo");
  CHECK(got.seed == 1234567890123456789ULL);
  CHECK(got.meta.at("n") == 7.0);
  CHECK(got.meta.at("k") == 4.0);

  Tensor x(5, 3);
  Rng probe(3);
  for (auto& v : x.v) v = probe.normal();
  Tensor ya = a.forward(x, Mode::kEval);
  Tensor yb = b.forward(x, Mode::kEval);
  REQUIRE(ya.v.size() == yb.v.size());
  for (size_t i = 0; i < ya.v.size(); ++i) CHECK(ya.v[i] == yb.v[i]);
}

TEST_CASE("checkpoint rejects wrong shapes and versions") {
  TempFile f("ckpt_bad.json");
  Network a = make_small_net(7);
  save_checkpoint(f.path, a, {"demo", 1, {}});

  Network wrong;
  wrong.emplace<Dense>(3, 5);
  wrong.emplace<Activation>(Act::kSoftmax);
  wrong.init_params(Init::kGlorotUniform);
  CHECK_THROWS_AS(load_checkpoint(f.path, wrong), std::runtime_error);

  // Corrupt the version field.
  std::string text = slurp(f.path);
  auto pos = text.find("\"format_version\": 1");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 19, "\"format_version\": 9");
  {
    std::ofstream out(f.path);
    out << text;
  }
  Network b = make_small_net(7);
  CHECK_THROWS_AS(load_checkpoint(f.path, b), std::runtime_error);

  {
    std::ofstream out(f.path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_checkpoint(f.path, b), std::runtime_error);
}
