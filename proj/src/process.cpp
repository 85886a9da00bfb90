#include "qicost/process.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qicost/error.hpp"

namespace qicost {

namespace {

void apply_local(PureState& state, const Isometry& iso,
                 std::set<std::string>& held) {
  if (iso.in_regs.empty() && iso.out_regs.empty()) return;
  state = apply_isometry(state, iso.in_regs, iso.out_regs, iso.matrix);
  for (const auto& n : iso.in_regs) held.erase(n);
  for (const auto& r : iso.out_regs) held.insert(r.name);
}

}  // namespace

double flow_identity_residual(const InteractiveProcess& proc) {
  std::set<std::string> ef(proc.e_regs.begin(), proc.e_regs.end());
  ef.insert(proc.f_regs.begin(), proc.f_regs.end());
  for (const auto& round : proc.rounds)
    for (const auto* iso : {&round.alice, &round.bob})
      for (const auto& n : iso->in_regs)
        if (ef.count(n))
          throw ContractError("extension register " + n +
                              " is acted on by an isometry");

  PureState state = proc.initial;
  std::set<std::string> alice(proc.alice_regs.begin(), proc.alice_regs.end());
  std::set<std::string> bob(proc.bob_regs.begin(), proc.bob_regs.end());

  auto vec = [](const std::set<std::string>& s) {
    return std::vector<std::string>(s.begin(), s.end());
  };

  const double initial_term =
      cqmi(state, proc.e_regs, vec(bob), proc.f_regs);

  double rhs = 0.0;
  std::optional<std::string> last_c;  // pending alice->bob message
  std::optional<std::string> last_d;  // pending bob->alice message
  for (const auto& round : proc.rounds) {
    // Pending messages from the previous round reach their recipients first.
    if (last_c) bob.insert(*last_c);
    if (last_d) alice.insert(*last_d);
    last_c.reset();
    last_d.reset();

    apply_local(state, round.alice, alice);
    apply_local(state, round.bob, bob);
    if (round.alice_message) {
      alice.erase(*round.alice_message);
      last_c = *round.alice_message;
    }
    if (round.bob_message) {
      bob.erase(*round.bob_message);
      last_d = *round.bob_message;
    }

    std::vector<std::string> fb = proc.f_regs;
    const auto bobv = vec(bob);
    fb.insert(fb.end(), bobv.begin(), bobv.end());
    const std::vector<std::string> cset =
        last_c ? std::vector<std::string>{*last_c} : std::vector<std::string>{};
    const std::vector<std::string> dset =
        last_d ? std::vector<std::string>{*last_d} : std::vector<std::string>{};
    rhs += cqmi(state, proc.e_regs, cset, fb) -
           cqmi(state, proc.e_regs, dset, fb);
  }

  // Bob absorbs the final message addressed to him.
  if (last_c) bob.insert(*last_c);
  const double final_term = cqmi(state, proc.e_regs, vec(bob), proc.f_regs);

  const double lhs = final_term - initial_term;
  return std::abs(lhs - rhs);
}

InteractiveProcess embed_protocol(const QuantumProtocol& p,
                                  const InputDistribution& mu) {
  const ValidationReport rep = validate_protocol(p);
  if (!rep.ok()) throw ContractError("embed_protocol: invalid protocol");

  InteractiveProcess proc;
  proc.initial = tensor(canonical_purification(mu), p.entanglement);
  proc.alice_regs = {"X"};
  proc.bob_regs = {"Y"};
  proc.e_regs = {"RX"};
  proc.f_regs = {"RY"};
  for (const auto& n : p.alice_entanglement) proc.alice_regs.push_back(n);
  for (const auto& n : p.bob_entanglement) proc.bob_regs.push_back(n);

  for (const auto& round : p.rounds) {
    ProcessRound pr;
    Isometry idle;  // empty register lists: party does nothing
    if (round.owner == Party::alice) {
      pr.alice = round.iso;
      pr.bob = idle;
      pr.alice_message = round.message;
    } else {
      pr.bob = round.iso;
      pr.alice = idle;
      pr.bob_message = round.message;
    }
    proc.rounds.push_back(std::move(pr));
  }
  return proc;
}

}  // namespace qicost
