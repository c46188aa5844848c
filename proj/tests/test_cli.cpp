#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "mcprune/graph_io.hpp"
#include "test_support.hpp"

namespace {

struct CmdResult {
  int status = -1;
  std::string out;  // stdout and stderr interleaved
};

CmdResult run_cli(const std::string& args) {
  const char* bin = std::getenv("MCPRUNE_CLI");
  REQUIRE(bin != nullptr);
  std::string cmd = std::string(bin) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult res;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
  int rc = pclose(pipe);
  REQUIRE(WIFEXITED(rc));
  res.status = WEXITSTATUS(rc);
  return res;
}

const std::string kTriangle = "0 1\n0 2\n1 2\n";
const std::string kTrianglePendant = "0 1\n0 2\n1 2\n0 3\n";

}  // namespace

TEST_CASE("cli solve") {
  support::TempDir tmp;
  std::string graph = tmp.file("tri.edges");
  support::write_file(graph, kTriangle);

  SECTION("default report is the summary line") {
    CmdResult r = run_cli("solve " + graph);
    REQUIRE(r.status == 0);
    REQUIRE(r.out == "omega=3 count=1\n");
  }
  SECTION("clique listing on request") {
    CmdResult r = run_cli("solve --cliques " + graph);
    REQUIRE(r.status == 0);
    REQUIRE(r.out == "omega=3 count=1\n0 1 2\n");
  }
  SECTION("json report") {
    CmdResult r = run_cli("solve --json " + graph);
    REQUIRE(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    REQUIRE(j["omega"] == 3);
    REQUIRE(j["count"] == 1);
    REQUIRE(j["covered"] == std::vector<int64_t>{0, 1, 2});
    REQUIRE_FALSE(j.contains("cliques"));
  }
  SECTION("report can land in a file") {
    std::string out = tmp.file("report.txt");
    CmdResult r = run_cli("solve " + graph + " --out " + out);
    REQUIRE(r.status == 0);
    REQUIRE(r.out.empty());
    REQUIRE(support::read_file(out) == "omega=3 count=1\n");
  }
  SECTION("search budget maps to exit 3") {
    std::string dense = tmp.file("dense.edges");
    mcprune::write_graph(support::make_gnp(30, 0.8, 7), dense);
    CmdResult r = run_cli("solve --max-nodes 2 " + dense);
    REQUIRE(r.status == 3);
  }
}

TEST_CASE("cli error mapping") {
  support::TempDir tmp;

  SECTION("missing file is an io error") {
    CmdResult r = run_cli("solve " + tmp.file("nope.edges"));
    REQUIRE(r.status == 2);
  }
  SECTION("malformed edge list is a parse error with a line number") {
    std::string bad = tmp.file("bad.edges");
    support::write_file(bad, "0 1\n0 1 junk\n");
    CmdResult r = run_cli("solve " + bad);
    REQUIRE(r.status == 2);
    REQUIRE(r.out.find(":2:") != std::string::npos);
  }
  SECTION("unknown flag is a usage error") {
    CmdResult r = run_cli("solve --no-such-flag x");
    REQUIRE(r.status == 4);
  }
  SECTION("missing subcommand is a usage error") {
    CmdResult r = run_cli("");
    REQUIRE(r.status == 4);
  }
  SECTION("threshold outside the open interval is a config error") {
    CmdResult r = run_cli("train --gen planted-sparse --q 0.4 --out-dir " +
                          tmp.file("m"));
    REQUIRE(r.status == 4);
  }
  SECTION("train demands exactly one corpus source") {
    CmdResult both = run_cli("train --corpus a --gen planted-sparse --out-dir " +
                             tmp.file("m"));
    REQUIRE(both.status == 4);
    CmdResult neither = run_cli("train --out-dir " + tmp.file("m"));
    REQUIRE(neither.status == 4);
  }
  SECTION("prune demands exactly one scorer source") {
    std::string graph = tmp.file("tri.edges");
    support::write_file(graph, kTriangle);
    CmdResult r = run_cli("prune " + graph);
    REQUIRE(r.status == 4);
  }
  SECTION("corrupt model file is a parse error") {
    std::string graph = tmp.file("tri.edges");
    support::write_file(graph, kTriangle);
    std::filesystem::create_directories(tmp.file("models"));
    support::write_file(tmp.file("models/stage_1.json"), "not json at all");
    CmdResult r = run_cli("prune " + graph + " --models " + tmp.file("models"));
    REQUIRE(r.status == 2);
  }
  SECTION("help exits cleanly") {
    REQUIRE(run_cli("--help").status == 0);
    REQUIRE(run_cli("solve --help").status == 0);
  }
}

TEST_CASE("cli features") {
  support::TempDir tmp;
  std::string graph = tmp.file("k4.edges");
  support::write_file(graph, "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");

  SECTION("vertex csv has one row per vertex") {
    CmdResult r = run_cli("features " + graph);
    REQUIRE(r.status == 0);
    std::vector<std::string> lines;
    std::istringstream in(r.out);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    REQUIRE(lines.size() == 5);
    REQUIRE(lines[0].rfind("vertex,", 0) == 0);
    REQUIRE(std::count(lines[0].begin(), lines[0].end(), ',') == 10);
    REQUIRE(lines[1].rfind("0,", 0) == 0);
  }
  SECTION("edge csv keys rows by endpoints") {
    std::string tri = tmp.file("tri.edges");
    support::write_file(tri, kTriangle);
    CmdResult r = run_cli("features --edges " + tri);
    REQUIRE(r.status == 0);
    std::vector<std::string> lines;
    std::istringstream in(r.out);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    REQUIRE(lines.size() == 4);
    REQUIRE(lines[0].rfind("u,v,", 0) == 0);
    REQUIRE(std::count(lines[0].begin(), lines[0].end(), ',') == 10);
  }
}

TEST_CASE("cli kcore") {
  support::TempDir tmp;
  std::string graph = tmp.file("tp.edges");
  support::write_file(graph, kTrianglePendant);

  SECTION("explicit k strips the pendant") {
    CmdResult r = run_cli("kcore --k 3 " + graph);
    REQUIRE(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    REQUIRE(j["k"] == 3);
    REQUIRE(j["original"]["vertices"] == 4);
    REQUIRE(j["final"]["vertices"] == 3);
    REQUIRE(j["vertex_prune_ratio"] == 0.25);
  }
  SECTION("exact omega mode solves first") {
    std::string out = tmp.file("core.edges");
    CmdResult r = run_cli("kcore --exact-omega " + graph + " --out " + out);
    REQUIRE(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    REQUIRE(j["omega"] == 3);
    REQUIRE(j["k"] == 3);
    REQUIRE(support::read_file(out) == kTriangle);
  }
  SECTION("k and exact-omega are mutually exclusive") {
    REQUIRE(run_cli("kcore --k 3 --exact-omega " + graph).status == 4);
    REQUIRE(run_cli("kcore " + graph).status == 4);
  }
}

TEST_CASE("cli oracle prune") {
  support::TempDir tmp;
  std::string graph = tmp.file("tp.edges");
  support::write_file(graph, kTrianglePendant);
  std::string truth = tmp.file("truth.json");
  REQUIRE(run_cli("solve --json --cliques " + graph + " --out " + truth).status == 0);

  std::string out = tmp.file("pruned.edges");
  std::string report = tmp.file("report.json");
  CmdResult r = run_cli("prune " + graph + " --oracle " + truth + " --out " + out +
                        " --report " + report);
  REQUIRE(r.status == 0);
  REQUIRE(support::read_file(out) == kTriangle);
  nlohmann::json j = nlohmann::json::parse(support::read_file(report));
  REQUIRE(j["original"]["vertices"] == 4);
  REQUIRE(j["final"]["vertices"] == 3);
  REQUIRE(j["stages"].size() == 1);
  REQUIRE_FALSE(j.contains("timings"));
}

TEST_CASE("cli end to end") {
  support::TempDir tmp;
  std::string corpus = tmp.file("corpus");
  CmdResult gen = run_cli("gen --kind planted-sparse --count 6 --n 40 --out-dir " +
                          corpus);
  REQUIRE(gen.status == 0);
  REQUIRE(std::filesystem::exists(corpus + "/graph_000.edges"));
  REQUIRE(std::filesystem::exists(corpus + "/graph_000.truth.json"));

  SECTION("generation honors the fixed default seed") {
    std::string again = tmp.file("corpus2");
    REQUIRE(run_cli("gen --kind planted-sparse --count 6 --n 40 --out-dir " +
                    again).status == 0);
    REQUIRE(support::read_file(again + "/graph_000.edges") ==
            support::read_file(corpus + "/graph_000.edges"));
    REQUIRE(support::read_file(again + "/graph_005.truth.json") ==
            support::read_file(corpus + "/graph_005.truth.json"));
  }

  SECTION("train, prune, eval chain") {
    std::string models = tmp.file("models");
    CmdResult tr = run_cli("train --corpus " + corpus +
                           " --stages 2 --q 0.9 --out-dir " + models);
    REQUIRE(tr.status == 0);
    REQUIRE(std::filesystem::exists(models + "/stage_1.json"));
    REQUIRE(std::filesystem::exists(models + "/stage_2.json"));
    REQUIRE(std::filesystem::exists(models + "/train_log.txt"));
    REQUIRE(tr.out.find("wrote stage_2.json") != std::string::npos);

    std::string models2 = tmp.file("models2");
    REQUIRE(run_cli("train --corpus " + corpus + " --stages 2 --q 0.9 --out-dir " +
                    models2).status == 0);
    REQUIRE(support::read_file(models2 + "/stage_1.json") ==
            support::read_file(models + "/stage_1.json"));
    REQUIRE(support::read_file(models2 + "/stage_2.json") ==
            support::read_file(models + "/stage_2.json"));

    std::string probe = corpus + "/graph_000.edges";
    std::string pruned = tmp.file("pruned.edges");
    std::string report = tmp.file("report.json");
    CmdResult pr = run_cli("prune " + probe + " --models " + models +
                           " --stages 2 --q 0.9 --out " + pruned + " --report " +
                           report);
    REQUIRE(pr.status == 0);
    nlohmann::json rj = nlohmann::json::parse(support::read_file(report));
    REQUIRE(rj["original"]["vertices"] == 40);
    REQUIRE(rj["final"]["vertices"].get<int>() <= 40);

    std::string report2 = tmp.file("report2.json");
    REQUIRE(run_cli("prune " + probe + " --models " + models +
                    " --stages 2 --q 0.9 --report " + report2).status == 0);
    REQUIRE(support::read_file(report2) == support::read_file(report));

    CmdResult ev = run_cli("eval " + probe + " " + pruned + " --truth " + corpus +
                           "/graph_000.truth.json");
    REQUIRE(ev.status == 0);
    nlohmann::json ej = nlohmann::json::parse(ev.out);
    REQUIRE(ej["omega_original"].get<int>() >= 8);
    REQUIRE(ej.contains("omega_preserved"));
  }
}
