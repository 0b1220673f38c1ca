#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "nlvoter/cli.hpp"
#include "nlvoter/output.hpp"
#include "nlvoter/text.hpp"

using namespace nlvoter;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
  return out;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("nlvoter_test_" + name);
  fs::remove_all(p);
  return p;
}

int run(std::vector<std::string> args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  std::vector<const char*> argv{"nlvoter"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_sig9(1.0) == "1.00000000");
  CHECK(format_sig9(0.36) == "0.360000000");
  CHECK(format_sig9(1234.5) == "1234.50000");
  CHECK(format_shortest(1.1) == "1.1");
  CHECK(format_shortest(400.0) == "400");
  CHECK(format_shortest(HUGE_VAL) == "inf");
}

TEST_CASE("alpha grids") {
  const auto grid = parse_alpha_list("0.9:5.0:0.1");
  REQUIRE(grid.size() == 42);
  CHECK(grid.front().value() == 0.9);
  CHECK(grid[1].value() == 1.0);
  CHECK(grid[2].value() == 1.1);
  CHECK(grid.back().value() == 5.0);
  const auto list = parse_alpha_list("1,1.1,inf");
  REQUIRE(list.size() == 3);
  CHECK(list[2].is_infinite());
  CHECK(parse_alpha_list("2").size() == 1);
  CHECK(parse_alpha_list("1:1:0.5").size() == 1);
  CHECK_THROWS_AS(parse_alpha_list("1:2:0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_list("2:1:0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_list(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_list("1,,2"), std::invalid_argument);
}

TEST_CASE("parse_config") {
  SUBCASE("sweep grid") {
    const auto cfg = parse_config({"sweep", "--topology", "lattice:L=50", "--alpha", "0.9:5.0:0.1",
                                   "--runs", "200", "--seed", "42"});
    CHECK(cfg.kind == ExperimentKind::sweep);
    CHECK(cfg.alphas.size() == 42);
    CHECK(cfg.runs == 200);
    CHECK(cfg.seed == 42);
    CHECK(cfg.topology.side == 50);
    CHECK(cfg.max_steps == 100000);
  }
  SUBCASE("missing seed") {
    CHECK_THROWS_AS(parse_config({"sweep", "--topology", "lattice:L=50", "--alpha", "1"}),
                    std::invalid_argument);
  }
  SUBCASE("pattern needs a lattice") {
    CHECK_THROWS_AS(parse_config({"pattern", "--topology", "ba:N=1000,m=2", "--alpha", "0.95",
                                  "--seed", "1"}),
                    std::invalid_argument);
  }
  SUBCASE("pattern defaults") {
    const auto cfg = parse_config({"pattern", "--topology", "lattice:L=50", "--alpha", "0.95",
                                   "--seed", "1"});
    CHECK(cfg.block == 30);
    CHECK(cfg.snapshots == std::vector<std::uint64_t>{0, 200, 500, 700});
    CHECK(cfg.max_steps == 700);
  }
  SUBCASE("networks defaults") {
    const auto cfg = parse_config({"networks", "--alpha", "1:3:0.5", "--seed", "1"});
    CHECK(cfg.topologies == default_network_topologies());
    const auto two = parse_config({"networks", "--alpha", "1", "--seed", "1", "--topology",
                                   "er:N=100,k=4", "--topology", "ba:N=100,m=2"});
    CHECK(two.topologies.size() == 2);
  }
  SUBCASE("unknown flag and subcommand") {
    CHECK_THROWS_AS(parse_config({"sweep", "--bogus", "1", "--seed", "1"}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config({"explode", "--seed", "1"}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config({}), std::invalid_argument);
  }
  SUBCASE("bad values") {
    CHECK_THROWS_AS(parse_config({"sweep", "--alpha", "9", "--seed", "1"}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config({"sweep", "--alpha", "1", "--seed", "1", "--runs", "0"}),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config({"sweep", "--alpha", "1", "--seed", "-3"}),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config({"sweep", "--topology", "lattice:L=2", "--alpha", "1", "--seed",
                                  "1"}),
                    std::invalid_argument);
  }
  SUBCASE("config file merged with flags") {
    const auto dir = scratch("cfgfile");
    fs::create_directories(dir);
    const auto file = dir / "c.json";
    std::ofstream(file) << R"({"kind": "sweep", "topology": "lattice:L=20", "alpha": "1:2:0.5",
                             "runs": 7, "seed": 5, "max_steps": 1000})";
    const auto cfg = parse_config({"sweep", "--config", file.string(), "--runs", "9"});
    CHECK(cfg.runs == 9);
    CHECK(cfg.seed == 5);
    CHECK(cfg.alphas.size() == 3);
    CHECK(cfg.max_steps == 1000);
    std::ofstream(file) << R"({"kind": "sweep", "seed": 5, "colour": "red"})";
    CHECK_THROWS_AS(parse_config({"sweep", "--config", file.string()}), std::invalid_argument);
    fs::remove_all(dir);
  }
}

TEST_CASE("shipped presets parse") {
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(NLVOTER_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path().string());
    std::ifstream in(e.path());
    const auto j = nlohmann::json::parse(in);
    const auto cfg = config_from_json(j);
    CHECK(to_string(cfg.kind) == j.at("kind").get<std::string>());
    CHECK(config_from_json(to_json(cfg)) == cfg);
    ++count;
  }
  CHECK(count >= 6);
}

TEST_CASE("config JSON round trip") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"sweep", "--topology", "er:N=300,k=4", "--alpha", "0.9:2:0.1", "--runs", "3",
            "--graphs", "2", "--seed", "8", "--max-steps", "5000", "--threads", "2"},
           {"pattern", "--topology", "lattice:L=30", "--alpha", "0.95", "--block", "10",
            "--snapshots", "0,5,9", "--seed", "3"},
           {"meanfield", "--alpha", "0.5,2", "--rho0", "0.7", "--dt", "0.05", "--tmax", "10",
            "--seed", "1"},
           {"networks", "--alpha", "1,inf", "--seed", "2"}}) {
    const auto cfg = parse_config(args);
    CHECK(config_from_json(to_json(cfg)) == cfg);
    CHECK(config_from_json(nlohmann::json::parse(to_json(cfg).dump())) == cfg);
  }
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"kind", "sweep"}}), std::invalid_argument);
}

TEST_CASE("CSV tables") {
  CHECK(to_csv_text(sweep_table({})) == "alpha,mean_Tc,se_Tc,censored_frac,runs\n");
  SweepRow row;
  row.alpha = Alpha::finite(1.1);
  row.mean_tc = 250.5;
  row.se_tc = 3.25;
  row.censored_fraction = 0.0;
  row.runs = 200;
  const auto one = to_csv_text(sweep_table(std::span<const SweepRow>(&row, 1)));
  CHECK(one == "alpha,mean_Tc,se_Tc,censored_frac,runs\n1.1,250.500000,3.25000000,0.00000000,200\n");
  row.mean_tc.reset();
  row.censored_fraction = 1.0;
  const auto censored = to_csv_text(sweep_table(std::span<const SweepRow>(&row, 1)));
  CHECK(censored.find("1.1,nan,") != std::string::npos);
  CHECK(censored.find(",1.00000000,200\n") != std::string::npos);

  AveragedSeries s;
  s.t = {0};
  s.eta_mean = {1.0};
  s.rho_plus_mean = {1.0};
  s.clusters_mean = {1.0};
  s.s1_mean = {1.0};
  CHECK(to_csv_text(series_table(s)) ==
        "t,eta_mean,rho_plus_mean,ncl_mean,s1_mean\n0,1.00000000,1.00000000,1.00000000,1.00000000\n");
  CHECK(to_csv_text(pattern_table(PatternResult{})) == "t,rho_plus_mean,rho_plus_se\n");
  CHECK(to_csv_text(meanfield_table(MfTrajectory{})) == "t,rho_plus\n");
  CHECK(to_csv_text(networks_table({})) ==
        "topology,mean_nodes,mean_degree,alpha_opt,mean_Tc_opt\n");
}

TEST_CASE("PBM rendering") {
  OpinionState s;
  s.opinions = {1, 1, -1, 1};
  CHECK(pbm_text(s, 2) == "P1\n2 2\n00\n10\n");
  s.opinions.assign(9, 1);
  CHECK(pbm_text(s, 3) == "P1\n3 3\n000\n000\n000\n");
  const auto block = pbm_text(init_block(50, 30), 50);
  CHECK(block.rfind("P1\n50 50\n", 0) == 0);
  std::istringstream in(block.substr(9));
  std::string line;
  int r = 0;
  while (std::getline(in, line)) {
    REQUIRE(line.size() == 50);
    for (int c = 0; c < 50; ++c) {
      const bool inside = r >= 10 && r < 40 && c >= 10 && c < 40;
      CHECK(line[static_cast<std::size_t>(c)] == (inside ? '0' : '1'));
    }
    ++r;
  }
  CHECK(r == 50);
  // wide rows wrap at 70 characters
  const auto wide = pbm_text(init_block(100, 2), 100);
  std::istringstream win(wide);
  while (std::getline(win, line)) CHECK(line.size() <= 70);
  CHECK_THROWS_AS(pbm_text(s, 4), std::invalid_argument);
}

TEST_CASE("write_text_file reports the path") {
  const auto bad = fs::path("/nonexistent_dir_for_nlvoter/x.csv");
  try {
    write_text_file(bad, "x");
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
  }
}

TEST_CASE("run_cli end to end") {
  SUBCASE("exit codes") {
    std::string out, err;
    CHECK(run({"sweep", "--alpha", "1"}, &out, &err) == 2);
    CHECK(err.find("seed") != std::string::npos);
    CHECK(run({"--help"}, &out, &err) == 0);
    CHECK(out.find("sweep") != std::string::npos);
  }
  SUBCASE("outputs are byte-identical across thread counts") {
    const auto a = scratch("threads1"), b = scratch("threads3");
    for (const auto& [dir, threads] : {std::pair{a, "1"}, std::pair{b, "3"}}) {
      REQUIRE(run({"sweep", "--topology", "lattice:L=10", "--alpha", "1:2:0.5", "--runs", "10",
                   "--max-steps", "3000", "--seed", "4", "--threads", threads, "--out",
                   dir.string()}) == 0);
      REQUIRE(run({"pattern", "--topology", "lattice:L=20", "--alpha", "0.95", "--runs", "4",
                   "--block", "8", "--snapshots", "0,10", "--seed", "4", "--threads", threads,
                   "--out", dir.string()}) == 0);
    }
    const auto ca = dir_contents(a), cb = dir_contents(b);
    CHECK(ca.size() == 4);
    CHECK(ca.count("sweep.csv") == 1);
    CHECK(ca.count("pattern_a0.95.csv") == 1);
    CHECK(ca.count("snapshot_a0.95_t10.pbm") == 1);
    CHECK(ca == cb);
    const auto& sweep = ca.at("sweep.csv");
    CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 4);
    fs::remove_all(a);
    fs::remove_all(b);
  }
  SUBCASE("meanfield and graphinfo") {
    const auto dir = scratch("mf");
    std::string out;
    REQUIRE(run({"meanfield", "--alpha", "2", "--tmax", "1", "--dt", "0.5", "--seed", "1", "--out",
                 dir.string()},
                &out) == 0);
    CHECK(slurp(dir / "meanfield_a2.csv").rfind("t,rho_plus\n0.00000000,0.600000000\n", 0) == 0);
    CHECK(out.find("unstable") != std::string::npos);
    REQUIRE(run({"graphinfo", "--topology", "lattice:L=5", "--seed", "1"}, &out) == 0);
    CHECK(out.find("nodes=25") != std::string::npos);
    fs::remove_all(dir);
  }
}
