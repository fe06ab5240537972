#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "qsr/io.hpp"

using namespace qsr;
using nlohmann::json;

namespace {

const std::string kDir = "cli_io_fixtures";

std::string path_of(const std::string& name) { return kDir + "/" + name; }

void write_file(const std::string& name, const std::string& content) {
  std::ofstream out(path_of(name));
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the built CLI binary (path in QSRLAB_BIN) and captures stdout.
int run_cli(const std::string& args, std::string* stdout_text = nullptr) {
  const char* bin = std::getenv("QSRLAB_BIN");
  REQUIRE(bin != nullptr);
  const std::string out_file = path_of("cli_stdout.txt");
  const std::string cmd = std::string(bin) + " " + args + " > " + out_file + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (stdout_text) *stdout_text = slurp(out_file);
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

void setup_fixtures() {
  static bool done = false;
  if (done) return;
  done = true;
  if (std::system(("mkdir -p " + kDir).c_str()) != 0) FAIL("cannot create fixture dir");

  const RegisterLayout q({{"A", 2}});
  save_state(state_to_json(QuantumState(
                 q, ComplexMatrix::diag(std::vector<double>{0.7, 0.3}))),
             path_of("rho.json"));
  save_state(state_to_json(QuantumState(
                 q, ComplexMatrix::diag(std::vector<double>{0.4, 0.6}))),
             path_of("sigma.json"));

  // Two Bell pairs on R,A,B,C for the protocol command.
  const RegisterLayout l4({{"R", 2}, {"A", 2}, {"B", 2}, {"C", 2}});
  std::vector<cplx> amp(16, 0.0);
  for (int r = 0; r < 2; ++r)
    for (int a = 0; a < 2; ++a) amp[((r * 2 + a) * 2 + r) * 2 + a] = 0.5;
  save_state(state_to_json(PureVector(l4, amp)), path_of("bells.json"));
}

}  // namespace

TEST_CASE("round-trip at 12 significant digits") {
  setup_fixtures();
  const RegisterLayout lay({{"A", 2}, {"B", 3}});
  const QuantumState s = random_state(lay, RandomKind::MixedGinibre, 42);
  save_state(state_to_json(s, {{"note", "fixture"}}), path_of("rt.json"));
  const LoadedState back = load_state(path_of("rt.json"));
  REQUIRE(back.density.has_value());
  CHECK(max_abs_diff(back.density->matrix(), s.matrix()) < 1e-12);
  CHECK(back.layout().dim_of("B") == 3);

  // Saving what was loaded reproduces the bytes exactly.
  save_state(state_to_json(*back.density, {{"note", "fixture"}}), path_of("rt2.json"));
  CHECK(slurp(path_of("rt.json")) == slurp(path_of("rt2.json")));

  const PureVector v = random_pure_vector(lay, 43);
  save_state(state_to_json(v), path_of("rtv.json"));
  const LoadedState vb = load_state(path_of("rtv.json"));
  REQUIRE(vb.pure.has_value());
  for (size_t i = 0; i < v.amplitudes().size(); ++i)
    REQUIRE(std::abs(vb.pure->amplitudes()[i] - v.amplitudes()[i]) < 1e-12);
}

TEST_CASE("load_state error classification") {
  setup_fixtures();
  write_file("bad_syntax.json", "{ not json");
  CHECK_THROWS_AS(load_state(path_of("bad_syntax.json")), InputError);
  CHECK_THROWS_AS(load_state(path_of("no_such_file.json")), InputError);

  write_file("bad_version.json", R"({"format_version": 2, "registers": [{"label":"A","dim":2}],
              "matrix": [[1,0],[0,0],[0,0],[0,0]]})");
  CHECK_THROWS_AS(load_state(path_of("bad_version.json")), InputError);

  // Both matrix and vector present.
  write_file("both.json", R"({"format_version": 1, "registers": [{"label":"A","dim":1}],
              "matrix": [[1,0]], "vector": [[1,0]]})");
  CHECK_THROWS_AS(load_state(path_of("both.json")), InputError);

  // Wrong entry count is a dimension error.
  write_file("short.json", R"({"format_version": 1, "registers": [{"label":"A","dim":2}],
              "matrix": [[1,0],[0,0]]})");
  CHECK_THROWS_AS(load_state(path_of("short.json")), DimensionError);

  // Trace 0.9: invariant violation naming the trace.
  write_file("trace.json", R"({"format_version": 1, "registers": [{"label":"A","dim":2}],
              "matrix": [[0.6,0],[0,0],[0,0],[0.3,0]]})");
  try {
    load_state(path_of("trace.json"));
    FAIL("expected an invariant error");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("invariant") != std::string::npos);
    CHECK(msg.find("trace") != std::string::npos);
  }

  // Non-unit pure vector.
  write_file("norm.json", R"({"format_version": 1, "registers": [{"label":"A","dim":2}],
              "vector": [[0.5,0],[0,0]]})");
  CHECK_THROWS_AS(load_state(path_of("norm.json")), InputError);
}

TEST_CASE("cli entropy command") {
  setup_fixtures();
  std::string out;
  const int code = run_cli("entropy --quantity dmax --in " + path_of("rho.json") + " --sigma " +
                               path_of("sigma.json"),
                           &out);
  CHECK(code == 0);
  const json j = json::parse(out);
  // log2(0.7/0.4) = 0.807354922...
  CHECK(j["result"]["value"].get<double>() == doctest::Approx(0.807354922058).epsilon(1e-9));
  CHECK(j["tool_version"].get<std::string>() == "qsrlab 1.0.0");

  // dh at the fixed instance.
  std::string out2;
  CHECK(run_cli("entropy --quantity dh --eps 0.25 --in " + path_of("rho.json") + " --sigma " +
                    path_of("sigma.json"),
                &out2) == 0);
  CHECK(json::parse(out2)["result"]["value"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));

  // Out-of-range eps is a parameter error: exit 2.
  CHECK(run_cli("entropy --quantity dh --eps 1.5 --in " + path_of("rho.json") + " --sigma " +
                path_of("sigma.json")) == 2);
  // Missing sigma: exit 2.
  CHECK(run_cli("entropy --quantity dmax --in " + path_of("rho.json")) == 2);
  // Unknown flag: exit 2.
  CHECK(run_cli("entropy --quantity dmax --in " + path_of("rho.json") + " --bogus 3") == 2);
  // Unknown quantity: exit 2.
  CHECK(run_cli("entropy --quantity nonsense --in " + path_of("rho.json")) == 2);
  // Missing file: exit 2.
  CHECK(run_cli("entropy --quantity dmax --in nope.json --sigma nope.json") == 2);

  // Determinism: identical bytes apart from the wall-time field.
  std::string a, b;
  run_cli("entropy --quantity dmax --in " + path_of("rho.json") + " --sigma " +
              path_of("sigma.json"),
          &a);
  run_cli("entropy --quantity dmax --in " + path_of("rho.json") + " --sigma " +
              path_of("sigma.json"),
          &b);
  json ja = json::parse(a), jb = json::parse(b);
  ja.erase("wall_time_ms");
  jb.erase("wall_time_ms");
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("cli verify and sweep commands") {
  setup_fixtures();
  std::string out;
  CHECK(run_cli("verify --suite hayashi-nagaoka --trials 20 --seed 7", &out) == 0);
  const json j = json::parse(out);
  CHECK(j["failures"].get<int>() == 0);
  CHECK(j["checks"].size() == 20);

  CHECK(run_cli("verify --suite nonsense --trials 5 --seed 1") == 2);

  std::string sw;
  CHECK(run_cli("sweep --in " + path_of("rho.json") + " --sigma " + path_of("sigma.json") +
                    " --eps 0.3 --n-max 4",
                &sw) == 0);
  const json js = json::parse(sw);
  CHECK(js["all_within_envelope"].get<bool>());
  CHECK(js["lp_agreement"].get<bool>());
  CHECK(js["entries"].size() == 4);
}

TEST_CASE("cli protocol command") {
  setup_fixtures();
  std::string out;
  const int code = run_cli("protocol --in " + path_of("bells.json") +
                               " --partition R,A,B,C --n 4 --b 1 --eps1 0.25 --eps2 0.25",
                           &out);
  CHECK(code == 0);
  const json j = json::parse(out);
  CHECK(j["transcript"]["qubits_sent"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["transcript"]["measured_P"].get<double>() < 0.6);

  // Partition must cover the registers.
  CHECK(run_cli("protocol --in " + path_of("bells.json") + " --partition R,A,B,X --n 2") == 2);
  // Density input is rejected.
  CHECK(run_cli("protocol --in " + path_of("rho.json") + " --partition R,A,B,C --n 2") == 2);
}
