#include "doctest.h"
#include "support.hpp"

#include "specdte/io_formats.hpp"

#include <fstream>

using namespace specdte;
namespace fs = std::filesystem;
namespace ts = testing_support;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("specdte_io_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& content) const {
    std::ofstream(path / name, std::ios::binary) << content;
    return path / name;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("csv shapes") {
  TempDir dir;
  auto sq = read_matrix_csv(dir.write("a.csv", "0,1\n1,0\n"));
  REQUIRE(std::holds_alternative<OutcomeMatrix>(sq));
  CHECK(std::get<OutcomeMatrix>(sq).size() == 2);

  auto rect = read_matrix_csv(dir.write("b.csv", "1,0,1\n0,1,0"));
  REQUIRE(std::holds_alternative<BipartiteMatrix>(rect));
  CHECK(std::get<BipartiteMatrix>(rect).cols() == 3);

  CHECK_THROWS_WITH_AS(read_matrix_csv(dir.write("c.csv", "0,1\n1\n")), doctest::Contains("row 2"), Error);
  CHECK_THROWS_WITH_AS(read_matrix_csv(dir.write("d.csv", "0,x\n1,0\n")),
                       doctest::Contains("row 1, column 2"), Error);
  CHECK_THROWS_WITH_AS(read_matrix_csv(dir.write("e.csv", "0,1\n2,0\n")), doctest::Contains("asymmetry"), Error);
  CHECK_THROWS_AS(read_matrix_csv(dir.path / "missing.csv"), Error);
  CHECK_THROWS_AS(read_outcome_csv(dir.write("f.csv", "1,2,3\n"), 1), Error);
}

TEST_CASE("csv options") {
  TempDir dir;
  CsvOptions opts;
  opts.header = true;
  opts.delimiter = ';';
  auto m = read_csv_grid(dir.write("h.csv", "a;b\r\n 1.5 ; -2e-3\r\n+3;4\r\n\r\n"), opts);
  CHECK(m(0, 0) == 1.5);
  CHECK(m(0, 1) == -2e-3);
  CHECK(m(1, 0) == 3.0);

  opts = CsvOptions{};
  opts.symmetrize_tol = 0.1;
  const auto near = read_outcome_csv(dir.write("n.csv", "0,1\n1.01,0\n"), 0, opts);
  CHECK(near(0, 1) == doctest::Approx(1.005));
  CsvOptions semi;
  semi.delimiter = ';';
  CHECK_THROWS_AS(read_csv_grid(dir.write("comma.csv", "1,5;2\n"), semi), Error);
}

TEST_CASE("csv round trip keeps every bit") {
  TempDir dir;
  std::mt19937_64 rng(111);
  const Matrix m = ts::normal_symmetric(6, rng) * 1e-3;
  write_matrix_csv(m, dir.path / "m.csv");
  const auto back = read_outcome_csv(dir.path / "m.csv", 0);
  CHECK(back.entries() == m);
}

TEST_CASE("result documents") {
  TempDir dir;
  ResultDocument doc;
  doc.kind = "dpo";
  doc.inputs_digest = sha256_hex("abc");
  doc.parameters["t1"] = 0.5;
  doc.payload["cell"] = "(1,0)";
  doc.payload["lower"] = 0.017;
  doc.payload["upper"] = 0.027;
  write_result_json(doc, dir.path / "r.json");
  const auto back = read_result_json(dir.path / "r.json");
  CHECK(back.kind == "dpo");
  CHECK(back.payload == doc.payload);
  CHECK(serialize(back) == slurp(dir.path / "r.json"));
  CHECK(slurp(dir.path / "r.json").find("\"lower\": 0.017") != std::string::npos);
  const auto first = slurp(dir.path / "r.json");
  const auto key_kind = first.find("\"kind\"");
  const auto key_digest = first.find("\"inputs_digest\"");
  const auto key_version = first.find("\"library_version\"");
  CHECK(key_kind < key_digest);
  CHECK(key_digest < key_version);
  CHECK_FALSE(fs::exists(dir.path / "r.json.tmp"));

  ResultDocument empty;
  empty.kind = "density";
  empty.payload["samples"] = Json::array();
  write_result_json(empty, dir.path / "e.json");
  CHECK(read_result_json(dir.path / "e.json").payload["samples"].empty());

  ResultDocument bad = doc;
  bad.payload["upper"] = std::nan("");
  CHECK_THROWS_WITH_AS(serialize(bad), doctest::Contains("/payload/upper"), Error);
  CHECK_THROWS_AS(write_result_json(doc, dir.path / "no" / "such" / "dir.json"), Error);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  TempDir dir;
  const auto a = dir.write("a.txt", "1");
  const auto b = dir.write("b.txt", "2");
  CHECK(digest_files({a, b}) != digest_files({b, a}));
  CHECK(digest_files({a, b}) == digest_files({a, b}));
}

TEST_CASE("density samples") {
  TempDir dir;
  write_density_samples({3.0}, {5.0}, dir.path / "one.csv");
  CHECK(slurp(dir.path / "one.csv") == "value,weight\n3,1\n");

  std::vector<double> v(9, 0.0), w(9, 1.0);
  for (int k = 0; k < 9; ++k) v[static_cast<std::size_t>(k)] = k * 0.5;
  write_density_samples(v, w, dir.path / "nine.csv");
  const Matrix back = read_csv_grid(dir.path / "nine.csv", CsvOptions{true, ',', 0.0});
  CHECK(back.rows() == 9);
  CHECK(std::abs(back.col(1).sum() - 1.0) < 1e-12);

  std::vector<double> bins{1.0, 4.0, 2.5, 0.5};
  write_density_samples({0.1, 0.2, 0.3, 0.4}, bins, dir.path / "cate.csv");
  const Matrix cate = read_csv_grid(dir.path / "cate.csv", CsvOptions{true, ',', 0.0});
  CHECK(std::abs(cate.col(1).sum() - 1.0) < 1e-12);
  CHECK(cate(1, 1) == doctest::Approx(0.5));

  CHECK_THROWS_AS(write_density_samples({1.0, 2.0}, {1.0}, dir.path / "x.csv"), Error);
  CHECK_THROWS_AS(write_density_samples({1.0}, {-1.0}, dir.path / "x.csv"), Error);
}

TEST_CASE("gaussian density grid") {
  const auto g = gaussian_density_grid({0.0, 1.0}, {1.0, 1.0}, 0.5);
  REQUIRE(g.x.size() == 401);
  CHECK(g.x.front() == doctest::Approx(-1.5));
  CHECK(g.x.back() == doctest::Approx(2.5));
  double integral = 0.0;
  for (std::size_t k = 1; k < g.x.size(); ++k)
    integral += 0.5 * (g.density[k] + g.density[k - 1]) * (g.x[k] - g.x[k - 1]);
  CHECK(integral == doctest::Approx(0.99865).epsilon(1e-4));
  CHECK_THROWS_AS(gaussian_density_grid({}, {}, 0.5), Error);
}
