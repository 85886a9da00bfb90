#include "qicost/info_costs.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qicost/error.hpp"

namespace qicost {

namespace {

// Registers in pure product form carry no correlations; dropping them from
// CQMI sets is exact and keeps the reduced dimensions small.
std::vector<std::string> filtered(const std::vector<std::string>& regs,
                                  const std::vector<std::string>& product) {
  std::set<std::string> drop(product.begin(), product.end());
  std::vector<std::string> out;
  for (const auto& n : regs)
    if (!drop.count(n)) out.push_back(n);
  return out;
}

std::vector<std::string> cat(std::vector<std::string> a,
                             const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<std::string> minus(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
  std::set<std::string> drop(b.begin(), b.end());
  std::vector<std::string> out;
  for (const auto& n : a)
    if (!drop.count(n)) out.push_back(n);
  return out;
}

double round_term(const ProtocolTrace& trace, std::size_t i,
                  const std::vector<std::string>& measured,
                  const std::vector<std::string>& conditioning) {
  const auto& info = trace.rounds[i];
  if (!info.message) return 0.0;
  const PureState& state = trace.states[i + 1];
  const auto& product = trace.product_regs[i + 1];
  return cqmi(state, {*info.message}, filtered(measured, product),
              filtered(conditioning, product));
}

void require_safe(const ProtocolTrace& trace, const char* what) {
  if (!trace.safe)
    throw ContractError(std::string(what) +
                        " requires a safe protocol; apply safe_version and "
                        "re-run the trace");
}

}  // namespace

DirectionalCost qic(const ProtocolTrace& trace) {
  DirectionalCost cost;
  cost.terms_a_to_b.assign(trace.rounds.size(), 0.0);
  cost.terms_b_to_a.assign(trace.rounds.size(), 0.0);
  const auto refs = trace.reference_regs();
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    const auto& info = trace.rounds[i];
    if (!info.message) continue;
    const auto& receiver_memory = info.sender == Party::alice
                                      ? info.bob_holdings
                                      : info.alice_holdings;
    const double term = round_term(trace, i, refs, receiver_memory);
    if (info.sender == Party::alice) {
      cost.terms_a_to_b[i] = term;
      cost.a_to_b += term;
    } else {
      cost.terms_b_to_a[i] = term;
      cost.b_to_a += term;
    }
  }
  return cost;
}

DirectionalCost cic(const ProtocolTrace& trace) {
  require_safe(trace, "cic");
  DirectionalCost cost;
  cost.terms_a_to_b.assign(trace.rounds.size(), 0.0);
  cost.terms_b_to_a.assign(trace.rounds.size(), 0.0);
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    const auto& info = trace.rounds[i];
    if (!info.message) continue;
    if (info.sender == Party::alice) {
      const double term = round_term(trace, i, trace.x_regs(), info.bob_holdings);
      cost.terms_a_to_b[i] = term;
      cost.a_to_b += term;
    } else {
      const double term =
          round_term(trace, i, trace.y_regs(), info.alice_holdings);
      cost.terms_b_to_a[i] = term;
      cost.b_to_a += term;
    }
  }
  return cost;
}

ReverseCost cric(const ProtocolTrace& trace) {
  require_safe(trace, "cric");
  ReverseCost cost;
  cost.terms_a_from_b.assign(trace.rounds.size(), 0.0);
  cost.terms_b_from_a.assign(trace.rounds.size(), 0.0);
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    const auto& info = trace.rounds[i];
    if (!info.message) continue;
    if (info.sender == Party::bob) {
      // Information about X flowing back from Bob.
      const double term = round_term(trace, i, trace.x_regs(), info.bob_holdings);
      cost.terms_a_from_b[i] = term;
      cost.a_from_b += term;
    } else {
      const double term =
          round_term(trace, i, trace.y_regs(), info.alice_holdings);
      cost.terms_b_from_a[i] = term;
      cost.b_from_a += term;
    }
  }
  return cost;
}

HolevoCost hic(const ProtocolTrace& trace) {
  require_safe(trace, "hic");
  HolevoCost cost;
  const PureState& fin = trace.final_state();
  const auto& product = trace.product_regs.back();
  const auto bob_work = minus(trace.final_bob_holdings, trace.y_regs());
  const auto alice_work = minus(trace.final_alice_holdings, trace.x_regs());
  cost.a_to_b = cqmi(fin, filtered(trace.x_regs(), product),
                     filtered(bob_work, product),
                     filtered(trace.y_regs(), product));
  cost.b_to_a = cqmi(fin, filtered(trace.y_regs(), product),
                     filtered(alice_work, product),
                     filtered(trace.x_regs(), product));
  return cost;
}

InfoCostReport info_costs(const ProtocolTrace& trace) {
  InfoCostReport rep;
  const DirectionalCost q = qic(trace);
  rep.qic_a_to_b = q.a_to_b;
  rep.qic_b_to_a = q.b_to_a;
  rep.qic_terms.assign(trace.rounds.size(), 0.0);
  for (std::size_t i = 0; i < trace.rounds.size(); ++i)
    rep.qic_terms[i] = q.terms_a_to_b[i] + q.terms_b_to_a[i];
  const DirectionalCost c = cic(trace);
  rep.cic_a_to_b = c.a_to_b;
  rep.cic_b_to_a = c.b_to_a;
  rep.cic_terms.assign(trace.rounds.size(), 0.0);
  for (std::size_t i = 0; i < trace.rounds.size(); ++i)
    rep.cic_terms[i] = c.terms_a_to_b[i] + c.terms_b_to_a[i];
  const ReverseCost r = cric(trace);
  rep.cric_a_from_b = r.a_from_b;
  rep.cric_b_from_a = r.b_from_a;
  rep.cric_terms.assign(trace.rounds.size(), 0.0);
  for (std::size_t i = 0; i < trace.rounds.size(); ++i)
    rep.cric_terms[i] = r.terms_a_from_b[i] + r.terms_b_from_a[i];
  const HolevoCost h = hic(trace);
  rep.hic_a_to_b = h.a_to_b;
  rep.hic_b_to_a = h.b_to_a;
  return rep;
}

namespace {

SuperposedCosts superposed_impl(const ProtocolTrace& trace) {
  require_safe(trace, "superposed_costs");
  SuperposedCosts out;
  const auto ry = cat(trace.ry1_regs, trace.ry2_regs);
  const auto rx = cat(trace.rx1_regs, trace.rx2_regs);
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    const auto& info = trace.rounds[i];
    if (!info.message) continue;
    // I(C_i ; X | R_Y Y B_i) on Alice-sent rounds is SCIC_{A->B}; the same
    // expression on Bob-sent rounds is SCRIC_{A<-B} (and mirrored).
    const double about_x =
        round_term(trace, i, trace.x_regs(), cat(ry, info.bob_holdings));
    const double about_y =
        round_term(trace, i, trace.y_regs(), cat(rx, info.alice_holdings));
    if (info.sender == Party::alice) {
      out.scic_a_to_b += about_x;
      out.scric_b_from_a += about_y;
    } else {
      out.scic_b_to_a += about_y;
      out.scric_a_from_b += about_x;
    }
  }
  const PureState& fin = trace.final_state();
  const auto& product = trace.product_regs.back();
  out.shic_a_to_b =
      cqmi(fin, filtered(trace.x_regs(), product),
           filtered(cat(ry, trace.final_bob_holdings), product), {});
  out.shic_b_to_a =
      cqmi(fin, filtered(trace.y_regs(), product),
           filtered(cat(rx, trace.final_alice_holdings), product), {});
  return out;
}

}  // namespace

SuperposedCosts superposed_costs(const ProtocolTrace& trace) {
  if (!trace.product_mu) {
    if (!trace.mu || !trace.mu->is_product())
      throw ArgumentError(
          "superposed_costs requires a product input distribution; use "
          "superposed_costs_raw for the formal sums");
  }
  return superposed_impl(trace);
}

SuperposedCosts superposed_costs_raw(const ProtocolTrace& trace) {
  return superposed_impl(trace);
}

HybridCosts hybrid_costs(const ProtocolTrace& trace) {
  require_safe(trace, "hybrid_costs");
  if (!trace.decomp)
    throw ArgumentError("hybrid_costs requires a trace run over a "
                        "decomposition");
  HybridCosts out;
  const auto x_cond = cat(trace.x2_regs, trace.ry2_regs);  // X2 R_Y2 (Y in B_i)
  const auto y_cond = cat(trace.y2_regs, trace.rx2_regs);  // Y2 R_X2 (X in A_i)
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    const auto& info = trace.rounds[i];
    if (!info.message) continue;
    const double about_x1 =
        round_term(trace, i, trace.x1_regs, cat(x_cond, info.bob_holdings));
    const double about_y1 =
        round_term(trace, i, trace.y1_regs, cat(y_cond, info.alice_holdings));
    if (info.sender == Party::alice) {
      out.hcic_a_to_b += about_x1;
      out.hcric_b_from_a += about_y1;
    } else {
      out.hcic_b_to_a += about_y1;
      out.hcric_a_from_b += about_x1;
    }
  }
  const PureState& fin = trace.final_state();
  const auto& product = trace.product_regs.back();
  const auto bob_work = minus(trace.final_bob_holdings, trace.y_regs());
  const auto alice_work = minus(trace.final_alice_holdings, trace.x_regs());
  out.hhic_a_to_b =
      cqmi(fin, filtered(trace.x1_regs, product),
           filtered(cat(cat(trace.ry2_regs, trace.y2_regs), bob_work), product),
           filtered(cat(trace.y1_regs, trace.x2_regs), product));
  out.hhic_b_to_a =
      cqmi(fin, filtered(trace.y1_regs, product),
           filtered(cat(cat(trace.rx2_regs, trace.x2_regs), alice_work), product),
           filtered(cat(trace.x1_regs, trace.y2_regs), product));

  const double defect_ab =
      std::abs(out.hhic_a_to_b - (out.hcic_a_to_b - out.hcric_a_from_b));
  const double defect_ba =
      std::abs(out.hhic_b_to_a - (out.hcic_b_to_a - out.hcric_b_from_a));
  if (defect_ab > 1e-9 || defect_ba > 1e-9)
    throw ContractError("hybrid flow identity violated (defect " +
                        std::to_string(std::max(defect_ab, defect_ba)) + ")");
  return out;
}

NoForgetReport no_forget_certify(const QuantumProtocol& p,
                                 const std::vector<Decomposition>& family) {
  NoForgetReport rep;
  if (!is_safe(p)) {
    rep.detail = "protocol is not safe";
    return rep;
  }

  // Structural sufficient condition: every round keeps its input registers
  // (coherent copies of sent content remain recomputable from the kept
  // basis) and the message register is basis-determined.
  bool structural = true;
  for (const auto& round : p.rounds) {
    const auto& in = round.iso.in_regs;
    const auto& out = round.iso.out_regs;
    std::vector<std::size_t> in_dims, out_dims;
    std::size_t msg_pos = out.size();
    for (std::size_t k = 0; k < out.size(); ++k) {
      out_dims.push_back(out[k].dim);
      if (round.message && out[k].name == *round.message) msg_pos = k;
    }
    std::vector<std::size_t> in_pos_in_out;
    for (const auto& n : in) {
      const auto it = std::find_if(
          out.begin(), out.end(),
          [&](const RegisterLabel& r) { return r.name == n; });
      if (it == out.end()) {
        structural = false;
        break;
      }
      in_pos_in_out.push_back(std::size_t(it - out.begin()));
    }
    if (!structural) break;

    auto digit = [](std::size_t index, const std::vector<std::size_t>& ds,
                    std::size_t pos) {
      std::size_t stride = 1;
      for (std::size_t k = ds.size(); k-- > pos + 1;) stride *= ds[k];
      return (index / stride) % ds[pos];
    };
    const auto& m = round.iso.matrix;
    // Input dims are recoverable from the reused output slots.
    for (std::size_t k = 0; k < in.size(); ++k)
      in_dims.push_back(out_dims[in_pos_in_out[k]]);

    std::vector<long long> msg_of(m.cols(), -1);
    for (std::size_t o = 0; o < m.rows() && structural; ++o)
      for (std::size_t i = 0; i < m.cols(); ++i) {
        if (std::abs(m.at(o, i)) <= 1e-12) continue;
        for (std::size_t k = 0; k < in.size(); ++k)
          if (digit(i, in_dims, k) != digit(o, out_dims, in_pos_in_out[k])) {
            structural = false;
            break;
          }
        if (!structural) break;
        if (round.message) {
          const long long mv = (long long)digit(o, out_dims, msg_pos);
          if (msg_of[i] == -1)
            msg_of[i] = mv;
          else if (msg_of[i] != mv) {
            structural = false;
            break;
          }
        }
      }
    if (!structural) break;
  }

  if (structural) {
    rep.certified = true;
    rep.method = "structural";
    rep.detail =
        "every round preserves its inputs and writes a basis-determined "
        "message (artifact-level sufficient condition)";
    return rep;
  }

  if (family.empty()) {
    rep.detail = "structural condition failed and no decomposition family "
                 "was supplied";
    return rep;
  }
  double max_hcric = 0.0;
  for (const auto& d : family) {
    const ProtocolTrace trace = run_trace(p, d);
    const HybridCosts h = hybrid_costs(trace);
    max_hcric = std::max(
        max_hcric, std::max(std::max(h.hcric_a_from_b, h.hcric_b_from_a), 0.0));
  }
  rep.max_hcric = max_hcric;
  if (max_hcric <= 1e-8) {
    rep.certified = true;
    rep.method = "exhaustive";
    rep.detail = "HCRIC vanished on every supplied decomposition (family of " +
                 std::to_string(family.size()) + ")";
  } else {
    rep.detail = "positive HCRIC witness " + std::to_string(max_hcric);
  }
  return rep;
}

}  // namespace qicost
