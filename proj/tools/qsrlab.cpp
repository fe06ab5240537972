// qsrlab: command-line front end for the one-shot state redistribution
// laboratory. Subcommands: entropy, protocol, verify, sweep.
//
// Exit codes: 0 success / all checks pass, 1 check failure, 2 input or
// parameter error, 3 numeric / convergence error.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsr/entropies.hpp"
#include "qsr/io.hpp"
#include "qsr/protocol.hpp"
#include "qsr/verify.hpp"

using nlohmann::json;

namespace {

constexpr const char* kVersion = "qsrlab 1.0.0";

json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return qsr::round_sig12(v);
}

std::vector<std::string> split_labels(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw qsr::InputError("empty label in partition: " + s);
    out.push_back(item);
  }
  if (out.empty()) throw qsr::InputError("empty partition");
  return out;
}

qsr::QuantumState as_density(const qsr::LoadedState& ls) {
  if (ls.density) return *ls.density;
  return qsr::QuantumState(ls.layout(), ls.pure->density());
}

json entropy_result_json(const qsr::EntropyResult& r) {
  json j;
  j["value"] = r.infinite ? json(nullptr) : jnum(r.value);
  j["infinite"] = r.infinite;
  j["solver"] = {{"iterations", r.report.iterations}, {"gap", jnum(r.report.gap)}};
  return j;
}

json check_report_json(const qsr::CheckReport& r) {
  json d = json::object();
  for (const auto& [k, v] : r.details) d[k] = jnum(v);
  return {{"check_name", r.check_name}, {"inputs_digest", r.inputs_digest},
          {"lhs", jnum(r.lhs)},         {"rhs", jnum(r.rhs)},
          {"slack", jnum(r.slack)},     {"pass", r.pass},
          {"details", d}};
}

json transcript_json(const qsr::ProtocolTranscript& t) {
  return {{"k", t.k_infinite ? json(nullptr) : jnum(t.k)},
          {"k_infinite", t.k_infinite},
          {"dh_value", jnum(t.dh_value)},
          {"n", t.n},
          {"b", t.b},
          {"qubits_sent", jnum(t.qubits_sent)},
          {"convex_split_fidelity", jnum(t.convex_split_fidelity)},
          {"measured_P", jnum(t.measured_P)},
          {"guaranteed_P", jnum(t.guaranteed_P)},
          {"guarantee_valid", t.guarantee_valid},
          {"decode_success_prob", jnum(t.decode_success_prob)},
          {"fail_mass", jnum(t.fail_mass)}};
}

void emit(json report, const std::string& out_path,
          std::chrono::steady_clock::time_point start) {
  const auto elapsed = std::chrono::steady_clock::now() - start;
  report["wall_time_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  report["tool_version"] = kVersion;
  std::cout << qsr::report_to_string(report);
  if (!out_path.empty()) qsr::save_report(report, out_path);
}

struct EntropyArgs {
  std::string in, quantity, sigma, partition, out;
  double eps = 0.1;
};

int run_entropy(const EntropyArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const qsr::LoadedState in = qsr::load_state(a.in);
  json result;

  auto need_sigma = [&]() -> qsr::ComplexMatrix {
    if (a.sigma.empty()) throw qsr::InputError("--sigma is required for " + a.quantity);
    return qsr::load_state(a.sigma).matrix();
  };
  auto need_partition = [&](size_t count) {
    const auto labels = split_labels(a.partition.empty() ? "" : a.partition);
    if (labels.size() != count)
      throw qsr::InputError("--partition must list exactly " + std::to_string(count) +
                            " register labels for " + a.quantity);
    return labels;
  };

  if (a.quantity == "fidelity") {
    const auto f = qsr::fidelity_and_distance(in.matrix(), need_sigma());
    result = {{"fidelity", jnum(f.fidelity)}, {"purified_distance", jnum(f.purified_distance)}};
  } else if (a.quantity == "dmax") {
    result = entropy_result_json(qsr::dmax(in.matrix(), need_sigma()));
  } else if (a.quantity == "dh") {
    result = entropy_result_json(qsr::dh_eps(in.matrix(), need_sigma(), a.eps));
  } else if (a.quantity == "dhalf") {
    result = entropy_result_json(qsr::d_half(in.matrix(), need_sigma()));
  } else if (a.quantity == "rel") {
    result = entropy_result_json(qsr::relative_entropy(in.matrix(), need_sigma()));
  } else if (a.quantity == "mi") {
    const auto g = need_partition(2);
    result = {{"value", jnum(qsr::mutual_information(as_density(in), {g[0]}, {g[1]}))}};
  } else if (a.quantity == "cmi") {
    const auto g = need_partition(3);
    result = {{"value",
               jnum(qsr::cond_mutual_information(as_density(in), {g[0]}, {g[1]}, {g[2]}))}};
  } else if (a.quantity == "hmin" || a.quantity == "hmax" || a.quantity == "imax") {
    if (a.partition.empty())
      throw qsr::InputError("--partition must name the conditioned register group");
    const auto labels = split_labels(a.partition);
    const qsr::QuantumState s = as_density(in);
    if (a.quantity == "hmin") result = entropy_result_json(qsr::hmin_cond(s, labels));
    if (a.quantity == "hmax") result = entropy_result_json(qsr::hmax_cond(s, labels));
    if (a.quantity == "imax") result = entropy_result_json(qsr::imax(s, labels));
  } else if (a.quantity == "spread") {
    qsr::SpreadReport sr;
    if (in.pure && !a.partition.empty()) {
      const auto g = need_partition(2);
      sr = qsr::spread_ks(*in.pure, g[0], g[1]);
    } else {
      sr = qsr::entanglement_spread(in.matrix());
    }
    result = {{"h0", jnum(sr.h0)}, {"h_inf", jnum(sr.h_inf)}, {"spread", jnum(sr.spread)}};
    if (sr.has_ks) {
      result["k1"] = jnum(sr.k1);
      result["k2"] = jnum(sr.k2);
      result["k3"] = jnum(sr.k3);
      result["k4"] = jnum(sr.k4);
    }
  } else {
    throw qsr::ParameterError("unknown quantity: " + a.quantity);
  }

  json report = {{"command", "entropy"}, {"quantity", a.quantity}, {"in", a.in},
                 {"result", result}};
  if (!a.sigma.empty()) report["sigma"] = a.sigma;
  if (!a.partition.empty()) report["partition"] = a.partition;
  if (a.quantity == "dh") report["eps"] = jnum(a.eps);
  emit(std::move(report), a.out, start);
  return 0;
}

struct ProtocolArgs {
  std::string in, partition, sigma_c, out;
  long n = 0, b = 0;
  double eps1 = 0.1, eps2 = 0.1;
  bool reversed = false;
  std::uint64_t seed = 0;
};

int run_protocol_cmd(const ProtocolArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const qsr::LoadedState in = qsr::load_state(a.in);
  if (!in.pure) throw qsr::InputError("protocol input must be a pure state (vector form)");
  const auto roles = split_labels(a.partition);
  if (roles.size() != 4) throw qsr::InputError("--partition must list 4 labels: R,A,B,C roles");

  // Rename the file's registers to the protocol roles, keeping their order.
  static const char* kRoles[] = {"R", "A", "B", "C"};
  std::vector<qsr::Register> regs;
  for (const auto& r : in.pure->layout().registers()) {
    int role = -1;
    for (int i = 0; i < 4; ++i)
      if (roles[i] == r.label) role = i;
    if (role < 0) throw qsr::InputError("register " + r.label + " is not named in --partition");
    regs.push_back({kRoles[role], r.dim});
  }
  if (regs.size() != 4) throw qsr::InputError("protocol input must have exactly 4 registers");
  const qsr::PureVector phi(qsr::RegisterLayout(regs), in.pure->amplitudes());

  qsr::ProtocolConfig config;
  const long dc = phi.layout().dim_of("C");
  if (a.sigma_c.empty()) {
    qsr::ComplexMatrix mixed =
        qsr::scale(qsr::ComplexMatrix::identity(static_cast<int>(dc)), 1.0 / dc);
    config.sigma_c = qsr::QuantumState(qsr::RegisterLayout({{"C", dc}}), std::move(mixed));
  } else {
    config.sigma_c = as_density(qsr::load_state(a.sigma_c));
  }
  config.eps1 = a.eps1;
  config.eps2 = a.eps2;
  config.seed = a.seed;
  if (a.n > 0) {
    config.n = a.n;
    config.b = a.b > 0 ? a.b : 1;
  } else {
    config.derive_parameters = true;
  }

  const qsr::ProtocolTranscript t =
      a.reversed ? qsr::run_protocol_reversed(phi, config) : qsr::run_protocol(phi, config);
  json report = {{"command", "protocol"},
                 {"in", a.in},
                 {"partition", a.partition},
                 {"config",
                  {{"n", config.n},
                   {"b", config.b},
                   {"derive_parameters", config.derive_parameters},
                   {"eps1", jnum(a.eps1)},
                   {"eps2", jnum(a.eps2)},
                   {"reversed", a.reversed},
                   {"seed", a.seed}}},
                 {"transcript", transcript_json(t)}};
  emit(std::move(report), a.out, start);
  return 0;
}

struct VerifyArgs {
  std::string suite, out;
  int trials = 100;
  std::uint64_t seed = 0;
  int dims = 0;
};

int run_verify(const VerifyArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const auto reports = qsr::run_suite(a.suite, a.trials, a.seed, a.dims);
  int failures = 0;
  json arr = json::array();
  for (const auto& r : reports) {
    failures += r.pass ? 0 : 1;
    arr.push_back(check_report_json(r));
  }
  json report = {{"command", "verify"},
                 {"suite", a.suite},
                 {"trials", a.trials},
                 {"seed", a.seed},
                 {"dims", a.dims},
                 {"failures", failures},
                 {"checks", std::move(arr)}};
  emit(std::move(report), a.out, start);
  return failures == 0 ? 0 : 1;
}

struct SweepArgs {
  std::string in, sigma, out;
  double eps = 0.1;
  long n_max = 4;
};

int run_sweep(const SweepArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const qsr::ComplexMatrix rho = qsr::load_state(a.in).matrix();
  const qsr::ComplexMatrix sigma = qsr::load_state(a.sigma).matrix();
  const qsr::SweepResult sw = qsr::asymptotic_sweep(rho, sigma, a.eps, a.n_max);

  bool lp_ok = true;
  json entries = json::array();
  for (const auto& e : sw.entries) {
    if (e.lp_checked && std::abs(e.value - e.lp_value) > 1e-8) lp_ok = false;
    json je = {{"n", e.n},
               {"value", jnum(e.value)},
               {"reference", jnum(e.reference)},
               {"gap", jnum(e.gap)},
               {"envelope", jnum(e.envelope)},
               {"within_envelope", e.within_envelope}};
    if (e.lp_checked) je["lp_value"] = jnum(e.lp_value);
    entries.push_back(std::move(je));
  }
  json report = {{"command", "sweep"},
                 {"in", a.in},
                 {"sigma", a.sigma},
                 {"eps", jnum(a.eps)},
                 {"rel_entropy", jnum(sw.rel_entropy)},
                 {"variance", jnum(sw.variance)},
                 {"truncated", sw.truncated},
                 {"note", sw.note},
                 {"all_within_envelope", sw.all_within_envelope},
                 {"lp_agreement", lp_ok},
                 {"entries", std::move(entries)}};
  emit(std::move(report), a.out, start);
  return (sw.all_within_envelope && lp_ok) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-shot quantum state redistribution laboratory"};
  app.require_subcommand(1);

  EntropyArgs ea;
  auto* entropy = app.add_subcommand("entropy", "compute a one-shot entropic quantity");
  entropy->add_option("--in", ea.in, "input state file")->required();
  entropy
      ->add_option("--quantity", ea.quantity,
                   "fidelity|dmax|dh|dhalf|rel|mi|cmi|hmin|hmax|imax|spread")
      ->required();
  entropy->add_option("--sigma", ea.sigma, "second state file (divergences)");
  entropy->add_option("--eps", ea.eps, "smoothing / error parameter (dh)");
  entropy->add_option("--partition", ea.partition, "comma-separated register labels");
  entropy->add_option("--out", ea.out, "also write the report to this file");

  ProtocolArgs pa;
  auto* protocol = app.add_subcommand("protocol", "run the redistribution protocol");
  protocol->add_option("--in", pa.in, "pure input state file")->required();
  protocol->add_option("--partition", pa.partition, "labels taking the R,A,B,C roles")
      ->required();
  protocol->add_option("--sigma-c", pa.sigma_c, "decoupling state on C (default: mixed)");
  protocol->add_option("--n", pa.n, "number of convex-split slots (default: derived)");
  protocol->add_option("--b", pa.b, "block size (default 1 when --n is given)");
  protocol->add_option("--eps1", pa.eps1, "convex-split error budget");
  protocol->add_option("--eps2", pa.eps2, "decoding error budget");
  protocol->add_flag("--reversed", pa.reversed, "exchange the A and B roles");
  protocol->add_option("--seed", pa.seed, "seed recorded in the report");
  protocol->add_option("--out", pa.out, "also write the report to this file");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run an inequality checker suite");
  verify
      ->add_option("--suite", va.suite,
                   "hayashi-nagaoka|gentle|pgm|dh-chain|comparison|spread|convex-split|all")
      ->required();
  verify->add_option("--trials", va.trials, "number of seeded trials");
  verify->add_option("--seed", va.seed, "base seed");
  verify->add_option("--dims", va.dims, "max register dimension (0: suite default)");
  verify->add_option("--out", va.out, "also write the report to this file");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "i.i.d. trend of the hypothesis-testing divergence");
  sweep->add_option("--in", sa.in, "state file for rho")->required();
  sweep->add_option("--sigma", sa.sigma, "state file for sigma")->required();
  sweep->add_option("--eps", sa.eps, "type-I error budget")->required();
  sweep->add_option("--n-max", sa.n_max, "largest tensor power")->required();
  sweep->add_option("--out", sa.out, "also write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*entropy) return run_entropy(ea);
    if (*protocol) return run_protocol_cmd(pa);
    if (*verify) return run_verify(va);
    if (*sweep) return run_sweep(sa);
  } catch (const qsr::ConvergenceError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const qsr::ContractError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const qsr::Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
