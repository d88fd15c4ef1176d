#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(NERVELAB_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.output.append(buf.data(), got);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string data(const char* f) { return std::string(NERVELAB_DATA_DIR) + "/" + f; }

}  // namespace

TEST_CASE("exit code 0 on passing verifications") {
  CHECK(run("verify crt-counts --max 3").exit_code == 0);
  CHECK(run("verify cpt-inner -n 1").exit_code == 0);
  CHECK(run("verify cart-cover -n 1").exit_code == 0);
  CHECK(run("komp --cat " + data("toy2.json") + " --sigma j --alpha 1").exit_code == 0);
  CHECK(run("glue --cat " + data("toy1.json") + " --classes E1,E2 --max-dim 2").exit_code == 0);
  CHECK(run("hypotheses --cat " + data("toy2.json") +
            " --mode combine --classes E0,E1,E2 --build-chain")
            .exit_code == 0);
  CHECK(run("homology --complex " + data("ccpt2.json") + " --max-dim 4 --expect CONE")
            .exit_code == 0);
}

TEST_CASE("exit code 1 when a named check fails") {
  auto res = run("hypotheses --cat " + data("neg_comp.json") +
                 " --mode descent --classes E0,E1,E2");
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("\"pass\":false") != std::string::npos);
  CHECK(res.output.find("(g,f)") != std::string::npos);
  CHECK(run("homology --complex " + data("boundary2.json") + " --expect CONE").exit_code == 1);
}

TEST_CASE("exit code 2 on input errors, 3 on cap exhaustion") {
  CHECK(run("komp --cat /nonexistent.json --sigma j").exit_code == 2);
  CHECK(run("komp --cat " + data("toy2.json") + " --sigma nosuchmorphism").exit_code == 2);
  CHECK(run("lattice crt -n 9").exit_code == 3);
  CHECK(run("verify cpt-inner -n 7").exit_code == 3);
}

TEST_CASE("reports are byte-identical across runs") {
  std::string args = "komp --cat " + data("toy2.json") + " --sigma j --checks filtered,homology";
  auto a = run(args), b = run(args);
  CHECK(a.output == b.output);
  CHECK(!a.output.empty());
  auto c = run("verify crt-counts --max 4");
  auto d = run("verify crt-counts --max 4");
  CHECK(c.output == d.output);
  // spec'd sample: counts 1, 5, 19, 69, 251
  for (const char* frag : {"\"elements\":1,", "\"elements\":5,", "\"elements\":19,",
                           "\"elements\":69,", "\"elements\":251,"})
    CHECK(c.output.find(frag) != std::string::npos);
}

TEST_CASE("report files are written when --out is given") {
  std::string out = std::string(NERVELAB_BIN) + "_report_test.jsonl";
  auto res = run("--out " + out + " verify crt-counts --max 2");
  CHECK(res.exit_code == 0);
  CHECK(res.output.empty());  // everything went to the file
  FILE* f = fopen(out.c_str(), "r");
  REQUIRE(f != nullptr);
  fclose(f);
  std::remove(out.c_str());
}

TEST_CASE("caps can be overridden through NERVELAB_CAPS") {
  // n=5 is inside the default cap, so lowering the cap via the env flips it to 3
  CHECK(run("lattice crt -n 5").exit_code == 0);
  std::string cmd = "NERVELAB_CAPS=CRT_N=4 " + std::string(NERVELAB_BIN) + " lattice crt -n 5";
  FILE* pipe = popen((cmd + " >/dev/null 2>&1; echo $?").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[16] = {0};
  REQUIRE(fgets(buf, sizeof buf, pipe) != nullptr);
  pclose(pipe);
  CHECK(buf[0] == '3');
}

TEST_CASE("dot export is stable and well-formed") {
  std::string out = std::string(NERVELAB_BIN) + "_crt1.dot";
  auto res = run("lattice crt -n 1 --dot " + out);
  CHECK(res.exit_code == 0);
  FILE* f = fopen(out.c_str(), "r");
  REQUIRE(f != nullptr);
  std::string text;
  char buf[256];
  while (fgets(buf, sizeof buf, f)) text += buf;
  fclose(f);
  std::remove(out.c_str());
  CHECK(text.find("digraph crt1") != std::string::npos);
  CHECK(text.find("->") != std::string::npos);
  // 5 nodes, sigma-image nodes filled
  CHECK(text.find("style=filled") != std::string::npos);
}
