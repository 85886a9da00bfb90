// Acceptance suite: every release criterion as one pass/fail line, with the
// tolerances pinned in code. Exit status 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "protocol_fixtures.hpp"
#include "qicost/classical.hpp"
#include "qicost/entropy.hpp"
#include "qicost/experiments.hpp"
#include "qicost/info_costs.hpp"
#include "qicost/process.hpp"
#include "qicost/random_gen.hpp"
#include "qicost/transforms.hpp"

using namespace qicost;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
};

double total_qic(const QuantumProtocol& p, const InputDistribution& mu) {
  return qic(run_trace(p, mu)).total();
}

// --- 1. Flow identity on random interactive processes ----------------------

bool crit_flow(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  double max_residual = 0.0;
  ProcessGenOptions opt;
  opt.reg_dim = 2;
  opt.max_rounds = 3;
  for (std::size_t t = 0; t < 500; ++t) {
    Rng rng(1001, t);
    max_residual =
        std::max(max_residual, flow_identity_residual(random_process(opt, rng)));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  char buf[160];
  std::snprintf(buf, sizeof buf, "500 processes, max residual %.2e, %.1f s",
                max_residual, secs);
  detail = buf;
  return max_residual <= 1e-8 && secs <= 60.0;
}

// --- 2. Worked cost examples ------------------------------------------------

bool crit_examples(std::string& detail) {
  const InputDistribution indep = InputDistribution::uniform(2, 2);
  const InputDistribution corr(2, 2, {0.5, 0.0, 0.0, 0.5});
  double worst = 0.0;
  auto expect = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
  };
  expect(total_qic(fixtures::unsafe_send_x(), corr), 1.0);
  expect(total_qic(safe_version(fixtures::unsafe_send_x()), corr), 0.0);
  expect(total_qic(fixtures::unsafe_send_x(), indep), 2.0);
  expect(total_qic(safe_version(fixtures::unsafe_send_x()), indep), 1.0);
  expect(total_qic(fixtures::bounce_uncopied(), indep), 4.0);
  expect(total_qic(safe_version(fixtures::bounce_uncopied()), indep), 2.0);
  for (std::size_t trips = 1; trips <= 3; ++trips) {
    expect(total_qic(fixtures::bounce_copied(trips), indep),
           2.0 * double(trips) + 1.0);
    expect(total_qic(safe_version(fixtures::bounce_copied(trips)), indep),
           1.0);
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "worked examples, worst deviation %.2e",
                worst);
  detail = buf;
  return worst <= 1e-9;
}

// --- 3. Identity suite ------------------------------------------------------

bool crit_identities(std::string& detail) {
  double worst = 0.0;
  bool ok = true;
  ProtocolGenOptions opt;
  opt.safe = true;
  opt.max_rounds = 3;
  for (std::size_t t = 0; t < 200; ++t) {
    Rng rng(3001, t);
    const QuantumProtocol p = random_protocol(opt, rng);
    const InputDistribution mu = random_distribution(2, 2, rng);
    const InfoCostReport r = info_costs(run_trace(p, mu));
    worst = std::max(
        worst, std::abs(r.hic_a_to_b - (r.cic_a_to_b - r.cric_a_from_b)));
    worst = std::max(
        worst, std::abs(r.hic_b_to_a - (r.cic_b_to_a - r.cric_b_from_a)));
    worst = std::max(
        worst, std::abs(r.qic_a_to_b - (r.cic_a_to_b + r.cric_b_from_a)));
    worst = std::max(
        worst, std::abs(r.qic_b_to_a - (r.cic_b_to_a + r.cric_a_from_b)));
    ok = ok && r.cic() <= r.qic() + 1e-8 && r.qic() <= 2.0 * r.cic() + 1e-8;

    // Superposed split on a product distribution.
    const InputDistribution prod = random_product_distribution(2, 2, rng);
    const ProtocolTrace ptrace = run_trace(p, prod);
    const SuperposedCosts sc = superposed_costs(ptrace);
    worst = std::max(worst, std::abs(qic(ptrace).total() -
                                     (sc.scic_a_to_b + sc.scic_b_to_a +
                                      sc.scric_a_from_b + sc.scric_b_from_a)));

    // Hybrid identity over a random trivial-or-not decomposition of the
    // binary inputs (factor sides swap at random).
    const bool x_first = rng.next_bool();
    Decomposition d{x_first ? 2u : 1u, x_first ? 1u : 2u,
                    x_first ? 2u : 1u, x_first ? 1u : 2u,
                    x_first ? random_distribution(2, 2, rng)
                            : InputDistribution(1, 1, {1.0}),
                    x_first ? InputDistribution(1, 1, {1.0})
                            : random_distribution(2, 2, rng)};
    const HybridCosts h = hybrid_costs(run_trace(p, d));
    worst = std::max(worst, std::abs(h.hhic_a_to_b -
                                     (h.hcic_a_to_b - h.hcric_a_from_b)));
    worst = std::max(worst, std::abs(h.hhic_b_to_a -
                                     (h.hcic_b_to_a - h.hcric_b_from_a)));
  }
  // Proper 2x2 decompositions on four-valued inputs.
  ProtocolGenOptions wide = opt;
  wide.x_dim = 4;
  wide.y_dim = 4;
  wide.max_rounds = 2;
  for (std::size_t t = 0; t < 20; ++t) {
    Rng rng(3501, t);
    const QuantumProtocol p = random_protocol(wide, rng);
    Decomposition d{2, 2, 2, 2, random_distribution(2, 2, rng),
                    random_distribution(2, 2, rng)};
    const HybridCosts h = hybrid_costs(run_trace(p, d));
    worst = std::max(worst, std::abs(h.hhic_a_to_b -
                                     (h.hcic_a_to_b - h.hcric_a_from_b)));
    worst = std::max(worst, std::abs(h.hhic_b_to_a -
                                     (h.hcic_b_to_a - h.hcric_b_from_a)));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "200 safe protocols + 20 wide decompositions, worst identity "
                "defect %.2e",
                worst);
  detail = buf;
  return ok && worst <= 1e-8;
}

// --- 4. Safe-copy monotonicity ----------------------------------------------

bool crit_safe_copies(std::string& detail) {
  double worst_gain = 0.0, worst_eq = 0.0;
  for (std::size_t t = 0; t < 200; ++t) {
    Rng rng(4001, t);
    ProtocolGenOptions opt;
    opt.safe = false;
    opt.max_rounds = 3;
    const QuantumProtocol p = random_protocol(opt, rng);
    const InputDistribution mu = random_distribution(2, 2, rng);
    const double gain = total_qic(safe_version(p), mu) - total_qic(p, mu);
    worst_gain = std::max(worst_gain, gain);
  }
  for (std::size_t t = 0; t < 100; ++t) {
    Rng rng(4501, t);
    ProtocolGenOptions opt;
    opt.safe = true;
    opt.max_rounds = 3;
    const QuantumProtocol p = random_protocol(opt, rng);
    const InputDistribution mu = random_distribution(2, 2, rng);
    worst_eq = std::max(worst_eq, std::abs(total_qic(safe_version(p), mu) -
                                           total_qic(p, mu)));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "200 unsafe: worst QIC gain %.2e; 100 safe: worst equality "
                "defect %.2e",
                worst_gain, worst_eq);
  detail = buf;
  return worst_gain <= 1e-8 && worst_eq <= 1e-8;
}

// --- 5. Classical-to-quantum simulation -------------------------------------

bool crit_simulation(std::string& detail) {
  double worst_ic = 0.0, worst_channel = 0.0, worst_cric = 0.0,
         worst_bits = 0.0;
  for (std::size_t t = 0; t < 100; ++t) {
    Rng rng(5001, t);
    ClassicalGenOptions opt;
    opt.max_rounds = 3;
    opt.coin_round_prob = 0.4;
    opt.with_outputs = true;
    const ClassicalProtocol pi = random_classical_protocol(opt, rng);
    const QuantizePipeline q = quantize_pipeline(pi);
    const InputDistribution mu = random_distribution(2, 2, rng);
    const ProtocolTrace trace = run_trace(q.quantum, mu);
    worst_ic = std::max(worst_ic,
                        std::abs(qic(trace).total() - ic(pi, mu).total()));
    const ReverseCost rc = cric(trace);
    worst_cric = std::max(worst_cric, rc.total());
    worst_bits = std::max(
        worst_bits, std::abs(qcc(q.quantum).total() - cc(q.padded).total()));
    const ChannelTable qc = channel_of(q.quantum, mu);
    const ChannelTable ct = classical_channel(pi, mu);
    for (std::size_t i = 0; i < qc.p.size(); ++i)
      worst_channel = std::max(worst_channel, std::abs(qc.p[i] - ct.p[i]));
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "100 lifts: |QIC-IC| %.2e, channel %.2e, CRIC %.2e, "
                "qubit-bit defect %.2e",
                worst_ic, worst_channel, worst_cric, worst_bits);
  detail = buf;
  return worst_ic <= 1e-8 && worst_channel <= 1e-9 && worst_cric <= 1e-8 &&
         worst_bits <= 1e-12;
}

// --- 6. Reversible classical suite -------------------------------------------

bool crit_reversible(std::string& detail) {
  double worst_ext = 0.0, worst_safe = 0.0, worst_sub = 0.0, worst_sim = 0.0,
         worst_transcript = 0.0;
  for (std::size_t t = 0; t < 100; ++t) {
    Rng rng(6001, t);
    ReversibleGenOptions opt;
    opt.rounds = 1 + rng.next_below(2);
    const ReversibleProtocol p1 = random_reversible_protocol(opt, rng);
    const ReversibleProtocol p2 = random_reversible_protocol(opt, rng);
    const InputDistribution mu = random_distribution(2, 2, rng);

    // Extension independence.
    Extension ext;
    ext.d_dim = 2;
    ext.d_given_xy.assign(4, {0.5, 0.5});
    ext.d_given_xy[0] = {0.9, 0.1};
    worst_ext = std::max(worst_ext, std::abs(ric(p1, mu, ext).value -
                                             ric(p1, mu).value));

    // Safe copies never increase RIC.
    worst_safe = std::max(
        worst_safe, ric(safe_reversible(p1), mu).value - ric(p1, mu).value);

    // Subadditivity over tensor pairs.
    const InputDistribution mu12 = random_distribution(4, 4, rng);
    std::vector<double> m1(4, 0.0), m2(4, 0.0);
    for (std::size_t x = 0; x < 4; ++x)
      for (std::size_t y = 0; y < 4; ++y) {
        m1[(x >> 1) * 2 + (y >> 1)] += mu12.at(x, y);
        m2[(x & 1) * 2 + (y & 1)] += mu12.at(x, y);
      }
    const double joint = ric(tensor_protocol(p1, p2), mu12).value;
    const double parts =
        ric(p1, InputDistribution(2, 2, std::move(m1))).value +
        ric(p2, InputDistribution(2, 2, std::move(m2))).value;
    worst_sub = std::max(worst_sub, joint - parts);

    // Unforget simulation: IC below RIC, transcripts identical.
    const ReversibleProtocol sp = safe_reversible(p1);
    const ClassicalProtocol sim = unforget_simulation(sp);
    worst_sim = std::max(worst_sim,
                         ic(sim, mu).total() - ric(sp, mu).value);
    std::map<std::vector<std::size_t>, double> ta, tb;
    for (const auto& rec : run_reversible(sp, mu).records) {
      std::vector<std::size_t> key = {rec.x, rec.y};
      key.insert(key.end(), rec.msgs.begin(), rec.msgs.end());
      ta[key] += rec.prob;
    }
    for (const auto& rec : run_classical(sim, mu).records) {
      std::vector<std::size_t> key = {rec.x, rec.y};
      key.insert(key.end(), rec.msgs.begin(), rec.msgs.end());
      tb[key] += rec.prob;
    }
    for (const auto& [key, pr] : ta) {
      const auto it = tb.find(key);
      worst_transcript = std::max(
          worst_transcript,
          std::abs(pr - (it == tb.end() ? 0.0 : it->second)));
    }
  }
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "100 pairs: ext %.2e, safe gain %.2e, subadd slack %.2e, "
                "IC-RIC slack %.2e, transcript %.2e",
                worst_ext, worst_safe, worst_sub, worst_sim, worst_transcript);
  detail = buf;
  return worst_ext <= 1e-10 && worst_safe <= 1e-10 && worst_sub <= 1e-9 &&
         worst_sim <= 1e-10 && worst_transcript <= 1e-12;
}

// --- 7. Clean and phase protocols -------------------------------------------

bool crit_clean_phase(std::string& detail) {
  double worst_cost = 0.0, worst_fidelity = 0.0;
  std::size_t count = 0;
  auto check_one = [&](const QuantumProtocol& p, const FunctionTable& f,
                       const InputDistribution& mu) {
    ++count;
    const double base = total_qic(p, mu);
    const QuantumProtocol cp = clean_protocol(p);
    const QuantumProtocol pp = phase_protocol(p);
    worst_cost = std::max(
        worst_cost, std::abs(qic(run_trace(cp, mu)).a_to_b - base));
    worst_cost = std::max(
        worst_cost, std::abs(qic(run_trace(pp, mu)).a_to_b - base));
    // Working registers restore exactly: overlap with
    // sum sqrt(mu) |x x y y, f(x,y)>.
    const PureState fin = run_trace(cp, mu).final_state();
    const auto& sys = fin.system();
    cplx overlap(0.0, 0.0);
    for (std::size_t i = 0; i < fin.amplitudes().size(); ++i) {
      std::size_t rest = i;
      std::vector<std::size_t> digit(sys.size());
      for (std::size_t k = sys.size(); k-- > 0;) {
        digit[k] = rest % sys[k].dim;
        rest /= sys[k].dim;
      }
      const std::size_t x = digit[sys.index_of("X")];
      const std::size_t y = digit[sys.index_of("Y")];
      if (digit[sys.index_of("RX")] != x || digit[sys.index_of("RY")] != y)
        continue;
      if (digit[sys.index_of("BOUTC")] != f.at(x, y)) continue;
      overlap += std::sqrt(mu.at(x, y)) * std::conj(fin.amplitudes()[i]);
    }
    worst_fidelity = std::max(worst_fidelity, 1.0 - std::norm(overlap));
  };

  for (std::size_t t = 0; t < 15; ++t) {
    Rng rng(7001, t);
    const std::size_t n = (t % 2) + 1;
    const BooleanFunctionTable f = random_boolean_function(n, rng);
    check_one(send_x_protocol(f), f.as_function(),
              InputDistribution::uniform(f.x_dim(), f.y_dim()));
  }
  for (std::size_t t = 0; t < 5; ++t) {
    Rng rng(7501, t);
    const BooleanFunctionTable f = random_boolean_function(1, rng);
    std::vector<std::size_t> table(4 * 2);
    for (std::size_t x = 0; x < 4; ++x)
      for (std::size_t y = 0; y < 2; ++y)
        table[x * 2 + y] = f.at((x ^ (x >> 1)) & 1, y);
    FunctionTable ft;
    ft.x_dim = 4;
    ft.y_dim = 2;
    ft.out_dim = 2;
    ft.values = table;
    check_one(fixtures::split_send_x_protocol(2, table), ft,
              InputDistribution::uniform(4, 2));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu protocols: worst cost defect %.2e, worst infidelity %.2e",
                count, worst_cost, worst_fidelity);
  detail = buf;
  return count == 20 && worst_cost <= 1e-8 && worst_fidelity <= 1e-10;
}

// --- 8. Inner product -------------------------------------------------------

bool crit_inner_product(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const BooleanFunctionTable f = inner_product_function(n);
    const std::vector<double> u(std::size_t(1) << n,
                                1.0 / double(std::size_t(1) << n));
    const LowerBoundReport rep =
        qic_lower_bound_check(send_x_protocol(f), f, u, u);
    worst = std::max(worst, std::abs(rep.bound - double(n)));
    worst = std::max(worst, std::abs(rep.qic - double(n)));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  char buf[120];
  std::snprintf(buf, sizeof buf, "n = 1..4 tight, worst defect %.2e, %.1f s",
                worst, secs);
  detail = buf;
  return worst <= 1e-9 && secs <= 30.0;
}

// --- 9. Random functions ----------------------------------------------------

bool crit_random_functions(std::string& detail) {
  const RandomFunctionReport rep = random_function_experiment(3, 200, 97);
  double worst_full = 0.0;
  for (std::size_t n = 1; n <= 3; ++n) {
    Rng rng(9001, n);
    const std::vector<double> u(std::size_t(1) << n,
                                1.0 / double(std::size_t(1) << n));
    for (int trial = 0; trial < 5; ++trial) {
      const BooleanFunctionTable f = random_boolean_function(n, rng);
      worst_full = std::max(worst_full, std::abs(phase_entropy(f, u, u) -
                                                 phase_entropy_full(f, u, u)));
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "200 samples ordering=%s, Gram-vs-full %.2e; tail bound %.3e "
                "at delta=%.3f reported (empirical %.3f), not asserted",
                rep.ordering_ok ? "ok" : "violated", worst_full,
                rep.tail_bound, rep.delta, rep.empirical_violation);
  detail = buf;
  return rep.ordering_ok && worst_full <= 1e-9;
}

// --- 10. Appendix inequalities ----------------------------------------------

bool crit_appendix(std::string& detail) {
  const double ws[4] = {0.0, 0.125, 0.25, 0.5};
  const double ps[2] = {0.25, 0.5};
  std::size_t count = 0, certified = 0;
  bool ok = true;
  for (std::size_t t = 0; t < 50; ++t) {
    Rng rng(10001, t);
    // Zero-error AND protocols: plain send-x, a public-coin mask variant,
    // and a variant with a private-coin chatter round.
    ClassicalProtocol pi;
    pi.x_dim = 2;
    pi.y_dim = 2;
    const int flavor = int(t % 3);
    if (flavor == 1) {
      const double q = 0.2 + 0.6 * rng.next_double();
      pi.public_coin = FiniteDistribution({q, 1.0 - q});
      pi.rounds.push_back({Party::alice, 2, {0, 1, 1, 0}});  // x xor r
    } else if (flavor == 2) {
      const double q = 0.2 + 0.6 * rng.next_double();
      pi.bob_coin = FiniteDistribution({q, 1.0 - q});
      pi.rounds.push_back({Party::alice, 2, {0, 1}});
      // Bob replies with his coin before the output is computed.
      pi.rounds.push_back({Party::bob, 2, {0, 0, 1, 1, 0, 0, 1, 1}});
      // Alice resends x so the chatter stays echoed in the transcript.
      pi.rounds.push_back({Party::alice, 2, {0, 0, 0, 0, 1, 1, 1, 1}});
    } else {
      pi.rounds.push_back({Party::alice, 2, {0, 1}});
    }
    const std::size_t tfull = pi.transcript_dim(pi.rounds.size());
    pi.bob_output.dim = 2;
    pi.bob_output.table.assign(
        2 * pi.bob_coin.size() * pi.public_coin.size() * tfull, 0);
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t s = 0; s < pi.bob_coin.size(); ++s)
        for (std::size_t r = 0; r < pi.public_coin.size(); ++r)
          for (std::size_t tt = 0; tt < tfull; ++tt) {
            // Recover x from the transcript: m1 (xor r when masked).
            std::vector<std::size_t> digits(pi.rounds.size());
            std::size_t tv = tt;
            for (std::size_t j = pi.rounds.size(); j-- > 0;) {
              digits[j] = tv % pi.rounds[j].alphabet;
              tv /= pi.rounds[j].alphabet;
            }
            const std::size_t x = flavor == 1 ? (digits[0] ^ r) : digits[0];
            pi.bob_output.table[((y * pi.bob_coin.size() + s) *
                                     pi.public_coin.size() +
                                 r) *
                                    tfull +
                                tt] = x & y;
          }
    const QuantumProtocol p = quantize_pipeline(pi).quantum;
    const NoForgetReport nf = no_forget_certify(p, {});
    if (!nf.certified) continue;
    ++certified;

    const double w = ws[t % 4];
    std::vector<double> base = {rng.next_double() + 0.1,
                                rng.next_double() + 0.1,
                                rng.next_double() + 0.1};
    const double sum = base[0] + base[1] + base[2];
    std::vector<double> muv = {(1.0 - w) * base[0] / sum,
                               (1.0 - w) * base[1] / sum,
                               (1.0 - w) * base[2] / sum, w};
    const AppendixReport rep =
        appendix_inequality_suite(p, InputDistribution(2, 2, std::move(muv)));
    ok = ok && rep.mass_shift_holds && rep.quasi_convexity_holds;
    if (w == 0.0)
      ok = ok && std::abs(rep.qic_mu - rep.qic_mu0) <= 1e-8;

    const QuasiConvexityReport qc = quasi_convexity_check(
        p, random_distribution(2, 2, rng), random_distribution(2, 2, rng),
        ps[t % 2]);
    ok = ok && qc.holds;
    ++count;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu certified AND protocols over w in {0, 1/8, 1/4, 1/2}, "
                "p in {1/4, 1/2}",
                count);
  detail = buf;
  return ok && count == 50 && certified == 50;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"flow identity on random processes", crit_flow},
      {"worked cost-drop examples", crit_examples},
      {"cost identity suite", crit_identities},
      {"safe-copy monotonicity", crit_safe_copies},
      {"classical-quantum simulation", crit_simulation},
      {"reversible classical suite", crit_reversible},
      {"clean and phase protocols", crit_clean_phase},
      {"inner product tightness", crit_inner_product},
      {"random boolean functions", crit_random_functions},
      {"appendix inequalities", crit_appendix},
  };
  std::size_t passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%2zu] %s %s: %s\n", i + 1, ok ? "PASS" : "FAIL",
                criteria[i].name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (ok) ++passed;
  }
  std::printf("ACCEPTANCE: %zu/%zu criteria passed\n", passed,
              criteria.size());
  return passed == criteria.size() ? 0 : 1;
}
