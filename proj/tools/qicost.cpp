// Command-line front end: cost reports, protocol transformations, and the
// bundled experiments. Machine-readable output is line-oriented key=value
// with nine decimal places; exit status 0 = all assertions pass,
// 1 = assertion failure, 2 = input error.

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qicost/config.hpp"
#include "qicost/error.hpp"
#include "qicost/experiments.hpp"
#include "qicost/info_costs.hpp"
#include "qicost/process.hpp"
#include "qicost/random_gen.hpp"
#include "qicost/serialize.hpp"
#include "qicost/transforms.hpp"

using namespace qicost;

namespace {

void print_kv(const char* key, double value) {
  std::printf("measure=%s value=%.9f\n", key, value);
}

InputDistribution load_or_uniform(const std::string& path, std::size_t xd,
                                  std::size_t yd) {
  if (path.empty()) return InputDistribution::uniform(xd, yd);
  return distribution_from_json(load_text(path));
}

int cmd_costs(const std::string& protocol_path, const std::string& dist_path,
              bool make_safe, double tol) {
  QuantumProtocol p = protocol_from_json(load_text(protocol_path));
  const ValidationReport rep = validate_protocol(p);
  if (!rep.ok()) {
    std::fprintf(stderr, "protocol validation failed:\n");
    for (const auto& v : rep.violations)
      std::fprintf(stderr, "  %s\n", v.c_str());
    return 2;
  }
  if (make_safe) p = safe_version(p);
  const InputDistribution mu = load_or_uniform(dist_path, p.x_dim, p.y_dim);
  const ProtocolTrace trace = run_trace(p, mu);
  if (!trace.safe) {
    // QIC is defined for unsafe protocols; the classical-input family is
    // not. Report what exists and point at --safe.
    const DirectionalCost q = qic(trace);
    print_kv("qic", q.total());
    print_kv("qic_a_to_b", q.a_to_b);
    print_kv("qic_b_to_a", q.b_to_a);
    for (std::size_t i = 0; i < q.terms_a_to_b.size(); ++i)
      std::printf("term=qic round=%zu value=%.9f\n", i + 1,
                  q.terms_a_to_b[i] + q.terms_b_to_a[i]);
    std::printf("note=protocol is unsafe; rerun with --safe for cic, cric "
                "and hic\n");
    return 0;
  }
  const InfoCostReport r = info_costs(trace);

  std::printf("measure            a->b          b->a          total\n");
  std::printf("qic      %12.9f  %12.9f  %12.9f\n", r.qic_a_to_b, r.qic_b_to_a,
              r.qic());
  std::printf("cic      %12.9f  %12.9f  %12.9f\n", r.cic_a_to_b, r.cic_b_to_a,
              r.cic());
  std::printf("cric     %12.9f  %12.9f  %12.9f   (a<-b, b<-a)\n",
              r.cric_a_from_b, r.cric_b_from_a, r.cric());
  std::printf("hic      %12.9f  %12.9f  %12.9f\n", r.hic_a_to_b, r.hic_b_to_a,
              r.hic());

  print_kv("qic", r.qic());
  print_kv("qic_a_to_b", r.qic_a_to_b);
  print_kv("qic_b_to_a", r.qic_b_to_a);
  print_kv("cic", r.cic());
  print_kv("cic_a_to_b", r.cic_a_to_b);
  print_kv("cic_b_to_a", r.cic_b_to_a);
  print_kv("cric", r.cric());
  print_kv("cric_a_from_b", r.cric_a_from_b);
  print_kv("cric_b_from_a", r.cric_b_from_a);
  print_kv("hic", r.hic());
  print_kv("hic_a_to_b", r.hic_a_to_b);
  print_kv("hic_b_to_a", r.hic_b_to_a);
  for (std::size_t i = 0; i < r.qic_terms.size(); ++i)
    std::printf("term=qic round=%zu value=%.9f\n", i + 1, r.qic_terms[i]);

  const double residual_a =
      std::max(std::abs(r.hic_a_to_b - (r.cic_a_to_b - r.cric_a_from_b)),
               std::abs(r.hic_b_to_a - (r.cic_b_to_a - r.cric_b_from_a)));
  const double residual_b =
      std::max(std::abs(r.qic_a_to_b - (r.cic_a_to_b + r.cric_b_from_a)),
               std::abs(r.qic_b_to_a - (r.cic_b_to_a + r.cric_a_from_b)));
  const double sandwich = std::max(
      0.0, std::max(r.cic() - r.qic(), r.qic() - 2.0 * r.cic()));
  std::printf("residual=identity_a value=%.12e\n", residual_a);
  std::printf("residual=identity_b value=%.12e\n", residual_b);
  std::printf("residual=sandwich value=%.12e\n", sandwich);
  return (residual_a <= tol && residual_b <= tol && sandwich <= tol) ? 0 : 1;
}

int cmd_quantize(const std::string& path, const std::string& dist_path,
                 const std::string& out_path, bool worst_case, double tol) {
  const ClassicalFile file = classical_from_json(load_text(path));
  if (!file.classical) {
    std::fprintf(stderr,
                 "quantize expects a standard classical protocol file "
                 "(use ricsim for reversible ones)\n");
    return 2;
  }
  const ClassicalProtocol& pi = *file.classical;
  QuantizePipeline q;
  try {
    q = quantize_pipeline(pi);
  } catch (const DimCapError& e) {
    std::size_t views = 0;
    for (std::size_t i = 0; i < pi.rounds.size(); ++i) {
      const bool alice = pi.rounds[i].owner == Party::alice;
      views += (alice ? pi.x_dim : pi.y_dim) * pi.public_coin.size() *
               pi.transcript_dim(i);
    }
    std::fprintf(stderr,
                 "canonical form exceeds the cap (%s); the protocol has %zu "
                 "round views\n",
                 e.what(), views);
    return 2;
  }
  const InputDistribution mu = load_or_uniform(dist_path, pi.x_dim, pi.y_dim);

  const double classical_ic = ic(pi, mu).total();
  const ProtocolTrace trace = run_trace(q.quantum, mu);
  const double lifted_qic = qic(trace).total();
  const double classical_cc = cc(q.padded).total();
  const double quantum_cc = qcc(q.quantum).total();
  const InfoCostReport rep = info_costs(trace);

  print_kv("ic", classical_ic);
  print_kv("qic", lifted_qic);
  print_kv("cc", classical_cc);
  print_kv("qcc", quantum_cc);
  print_kv("cric", rep.cric());

  const ChannelTable qc = channel_of(q.quantum, mu);
  const ChannelTable ct = classical_channel(pi, mu);
  double channel_diff = 0.0;
  for (std::size_t i = 0; i < qc.p.size(); ++i)
    channel_diff = std::max(channel_diff, std::abs(qc.p[i] - ct.p[i]));
  std::printf("channel_max_diff=%.12e\n", channel_diff);

  bool ok = std::abs(lifted_qic - classical_ic) <= tol &&
            std::abs(quantum_cc - classical_cc) <= 1e-12 &&
            rep.cric() <= tol && channel_diff <= 1e-9;
  if (worst_case && !pi.bob_output.trivial()) {
    try {
      const FunctionTable f = derive_function(q.quantum);
      ok = ok && solves(q.quantum, f, mu, 0.0, true);
      std::printf("worst_case_zero_error=%s\n", ok ? "true" : "false");
    } catch (const ContractError&) {
      std::printf("worst_case_zero_error=false\n");
    }
  }
  if (!out_path.empty()) save_text(out_path, to_json_string(q.quantum));
  std::printf("quantize_ok=%s\n", ok ? "true" : "false");
  return ok ? 0 : 1;
}

int cmd_safe(const std::string& path, const std::string& dist_path,
             const std::string& out_path, double tol) {
  const QuantumProtocol p = protocol_from_json(load_text(path));
  const QuantumProtocol sp = safe_version(p);
  const InputDistribution mu = load_or_uniform(dist_path, p.x_dim, p.y_dim);
  const double before = qic(run_trace(p, mu)).total();
  const double after = qic(run_trace(sp, mu)).total();
  print_kv("qic", before);
  print_kv("qic_safe", after);
  if (!out_path.empty()) save_text(out_path, to_json_string(sp));
  return after <= before + tol ? 0 : 1;
}

int cmd_mirror(const std::string& path, const std::string& dist_path,
               const std::string& out_path, double tol, int kind) {
  const QuantumProtocol p = protocol_from_json(load_text(path));
  const QuantumProtocol t = kind == 0   ? clean_protocol(p)
                            : kind == 1 ? phase_protocol(p)
                                        : reverse_composition(p);
  const InputDistribution mu = load_or_uniform(dist_path, p.x_dim, p.y_dim);
  const double base = qic(run_trace(p, mu)).total();
  const ProtocolTrace trace = run_trace(t, mu);
  print_kv("qic", base);
  bool ok = true;
  if (kind == 2) {
    const double doubled = qic(trace).total();
    const double converted = cic(trace).total();
    print_kv("qic_reversed", doubled);
    print_kv("cic_reversed", converted);
    ok = std::abs(doubled - 2.0 * base) <= tol &&
         std::abs(converted - base) <= tol;
  } else {
    const double forward = qic(trace).a_to_b;
    print_kv(kind == 0 ? "qic_a_to_b_clean" : "qic_a_to_b_phase", forward);
    ok = std::abs(forward - base) <= tol;
  }
  if (!out_path.empty()) save_text(out_path, to_json_string(t));
  return ok ? 0 : 1;
}

int cmd_ip(std::size_t n, double tol) {
  if (n == 0 || n > 4) {
    std::fprintf(stderr, "ip supports n in [1, 4]\n");
    return 2;
  }
  const BooleanFunctionTable f = inner_product_function(n);
  const std::vector<double> u(std::size_t(1) << n,
                              1.0 / double(std::size_t(1) << n));
  const LowerBoundReport rep =
      qic_lower_bound_check(send_x_protocol(f), f, u, u);
  const bool tight = std::abs(rep.qic - rep.bound) <= tol &&
                     std::abs(rep.bound - double(n)) <= tol;
  std::printf("phase_entropy=%.9f qic=%.9f tight=%s\n", rep.bound, rep.qic,
              tight ? "true" : "false");
  return tight ? 0 : 1;
}

int cmd_randomfn(std::size_t n, std::size_t samples, std::uint64_t seed) {
  const RandomFunctionReport rep = random_function_experiment(n, samples, seed);
  for (std::size_t i = 0; i < rep.h2_values.size(); ++i)
    std::printf("sample=%zu h2=%.9f h=%.9f\n", i, rep.h2_values[i],
                rep.h_values[i]);
  std::printf("%s\n", rep.summary().c_str());
  return rep.ordering_ok ? 0 : 1;
}

int cmd_flowcheck(std::size_t trials, std::uint64_t seed, double tol) {
  double max_residual = 0.0;
  ProcessGenOptions opt;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(seed, t);
    const InteractiveProcess proc = random_process(opt, rng);
    max_residual = std::max(max_residual, flow_identity_residual(proc));
  }
  std::printf("trials=%zu seed=%llu max_residual=%.12e\n", trials,
              (unsigned long long)seed, max_residual);
  return max_residual <= tol ? 0 : 1;
}

int cmd_ricsim(const std::string& path, const std::string& dist_path,
               double tol) {
  const ClassicalFile file = classical_from_json(load_text(path));
  if (!file.reversible) {
    std::fprintf(stderr, "ricsim expects a reversible protocol file\n");
    return 2;
  }
  const ReversibleProtocol safe = safe_reversible(*file.reversible);
  const InputDistribution mu =
      load_or_uniform(dist_path, safe.x_dim, safe.y_dim);
  const double r_orig = ric(*file.reversible, mu).value;
  const double r_safe = ric(safe, mu).value;
  const ClassicalProtocol sim = unforget_simulation(safe);
  const double sim_ic = ic(sim, mu).total();
  print_kv("ric", r_orig);
  print_kv("ric_safe", r_safe);
  print_kv("ic_simulation", sim_ic);
  print_kv("cc", cc(sim).total());

  // Transcript distributions must agree exactly.
  std::map<std::vector<std::size_t>, double> a, b;
  for (const auto& rec : run_reversible(safe, mu).records) {
    std::vector<std::size_t> key = {rec.x, rec.y};
    key.insert(key.end(), rec.msgs.begin(), rec.msgs.end());
    a[key] += rec.prob;
  }
  for (const auto& rec : run_classical(sim, mu).records) {
    std::vector<std::size_t> key = {rec.x, rec.y};
    key.insert(key.end(), rec.msgs.begin(), rec.msgs.end());
    b[key] += rec.prob;
  }
  double diff = 0.0;
  for (const auto& [key, pr] : a) {
    const auto it = b.find(key);
    diff = std::max(diff, std::abs(pr - (it == b.end() ? 0.0 : it->second)));
  }
  std::printf("transcripts_equal=%s\n", diff <= 1e-12 ? "true" : "false");
  const bool ok = r_safe <= r_orig + tol && sim_ic <= r_safe + tol &&
                  diff <= 1e-12;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-cost calculator for two-party interactive "
               "quantum protocols on classical inputs"};
  app.require_subcommand(1);
  app.fallthrough();

  double tol = 1e-8;
  std::size_t cap = 0;
  app.add_option("--tol", tol, "Tolerance for assertions (default 1e-8)");
  app.add_option("--dim-cap", cap,
                 "Dense-matrix dimension cap (overrides QICOST_DIM_CAP)");

  std::string protocol_path, dist_path, out_path, classical_path;
  bool make_safe = false, worst_case = false;
  std::size_t n = 1, samples = 100, trials = 100;
  std::uint64_t seed = 0;

  auto* costs = app.add_subcommand("costs", "All cost measures of a protocol");
  costs->add_option("protocol", protocol_path)->required();
  costs->add_option("distribution", dist_path);
  costs->add_flag("--safe", make_safe, "Run the safe version");

  auto* quantize =
      app.add_subcommand("quantize", "Lift a classical protocol, compare costs");
  quantize->add_option("classical", classical_path)->required();
  quantize->add_option("--dist", dist_path);
  quantize->add_option("--out", out_path, "Write the lifted protocol");
  quantize->add_flag("--worst-case", worst_case,
                     "Also verify zero worst-case error of the lift");

  auto* safe_cmd = app.add_subcommand("safe", "Safe version of a protocol");
  safe_cmd->add_option("protocol", protocol_path)->required();
  safe_cmd->add_option("--dist", dist_path);
  safe_cmd->add_option("--out", out_path);

  auto* clean_cmd = app.add_subcommand("clean", "Clean protocol construction");
  clean_cmd->add_option("protocol", protocol_path)->required();
  clean_cmd->add_option("--dist", dist_path);
  clean_cmd->add_option("--out", out_path);

  auto* phase_cmd = app.add_subcommand("phase", "Phase-output construction");
  phase_cmd->add_option("protocol", protocol_path)->required();
  phase_cmd->add_option("--dist", dist_path);
  phase_cmd->add_option("--out", out_path);

  auto* reverse_cmd =
      app.add_subcommand("reverse", "Forward-backward composition");
  reverse_cmd->add_option("protocol", protocol_path)->required();
  reverse_cmd->add_option("--dist", dist_path);
  reverse_cmd->add_option("--out", out_path);

  auto* ip = app.add_subcommand("ip", "Inner-product tightness at size n");
  ip->add_option("n", n)->required();

  auto* randomfn =
      app.add_subcommand("randomfn", "Random boolean function experiment");
  randomfn->add_option("n", n)->required();
  randomfn->add_option("--samples", samples);
  randomfn->add_option("--seed", seed);

  auto* flowcheck =
      app.add_subcommand("flowcheck", "Flow identity on random processes");
  flowcheck->add_option("trials", trials);
  flowcheck->add_option("seed", seed);

  auto* ricsim = app.add_subcommand(
      "ricsim", "Reversible-to-standard simulation, RIC vs IC");
  ricsim->add_option("reversible", classical_path)->required();
  ricsim->add_option("--dist", dist_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (cap > 0) set_dim_cap(cap);

  try {
    if (costs->parsed()) return cmd_costs(protocol_path, dist_path, make_safe, tol);
    if (quantize->parsed())
      return cmd_quantize(classical_path, dist_path, out_path, worst_case, tol);
    if (safe_cmd->parsed()) return cmd_safe(protocol_path, dist_path, out_path, tol);
    if (clean_cmd->parsed())
      return cmd_mirror(protocol_path, dist_path, out_path, tol, 0);
    if (phase_cmd->parsed())
      return cmd_mirror(protocol_path, dist_path, out_path, tol, 1);
    if (reverse_cmd->parsed())
      return cmd_mirror(protocol_path, dist_path, out_path, tol, 2);
    if (ip->parsed()) return cmd_ip(n, tol);
    if (randomfn->parsed()) return cmd_randomfn(n, samples, seed);
    if (flowcheck->parsed()) return cmd_flowcheck(trials, seed, tol);
    if (ricsim->parsed()) return cmd_ricsim(classical_path, dist_path, tol);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
