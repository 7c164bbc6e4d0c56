#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = meboost::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("meboost_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

const std::string kGlass6 = std::string(MEBOOST_DATA_DIR) + "/glass6.dat";

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"inspect"}).code == 2);
  const Outcome bad_method = run({"train", kGlass6, "--method", "bogus", "--out", scratch("bogus").string()});
  CHECK(bad_method.code == 2);
  CHECK(bad_method.err.find("unknown method") != std::string::npos);
  CHECK(run({"inspect", "/nonexistent/x.dat"}).code == 2);
}

TEST_CASE("inspect prints counts and the imbalance ratio") {
  const Outcome o = run({"inspect", kGlass6});
  CHECK(o.code == 0);
  CHECK(o.out.find("214 instances, 9 features, IR 6.38") != std::string::npos);
  const Outcome j = run({"inspect", kGlass6, "--json"});
  REQUIRE(j.code == 0);
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["n_instances"] == 214);
  CHECK(parsed["n_minority"] == 29);
}

TEST_CASE("malformed data exits with 1") {
  const fs::path dir = scratch("bad");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.dat") << "@relation r\n@attribute a real\n@attribute c {x,y}\n@data\n";
  const Outcome o = run({"inspect", (dir / "bad.dat").string()});
  CHECK(o.code == 1);
  CHECK(o.err.find("line 4") != std::string::npos);
}

TEST_CASE("train writes a model that roc can score") {
  const fs::path dir = scratch("train");
  const Outcome t = run({"train", kGlass6, "--method", "meboost", "--seed", "3", "--out", dir.string()});
  REQUIRE(t.code == 0);
  CHECK(fs::exists(dir / "model.json"));
  CHECK(fs::exists(dir / "trajectory.csv"));
  std::ifstream model_in(dir / "model.json");
  const auto model = nlohmann::json::parse(model_in);
  CHECK(model["format"] == "meboost-model/1");

  const fs::path roc_dir = scratch("roc");
  const Outcome r = run({"roc", "--model", (dir / "model.json").string(), kGlass6, "--out", roc_dir.string()});
  CHECK(r.code == 0);
  std::ifstream roc_in(roc_dir / "roc.csv");
  std::string header;
  std::getline(roc_in, header);
  CHECK(header == "fpr,tpr");
}

TEST_CASE("bench rejects an empty method list") {
  const fs::path dir = scratch("bench");
  fs::create_directories(dir);
  std::ofstream(dir / "cfg.json") << R"({"base_seed": 1, "datasets": [{"name": "g", "path": ")" << kGlass6
                                  << R"("}], "methods": []})";
  const Outcome o = run({"bench", (dir / "cfg.json").string(), "--out", (dir / "out").string()});
  CHECK(o.code == 2);
  CHECK(o.err.find("config") != std::string::npos);
}
