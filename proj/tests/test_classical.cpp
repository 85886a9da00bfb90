#include <doctest.h>

#include <cmath>
#include <map>

#include "qicost/classical.hpp"
#include "qicost/config.hpp"
#include "qicost/error.hpp"
#include "qicost/random_gen.hpp"

using namespace qicost;

namespace {

const InputDistribution kUniform = InputDistribution::uniform(2, 2);

// m1 = x, m2 = y.
ClassicalProtocol xor_exchange() {
  ClassicalProtocol pi;
  pi.x_dim = 2;
  pi.y_dim = 2;
  pi.rounds.push_back({Party::alice, 2, {0, 1}});
  pi.rounds.push_back({Party::bob, 2, {0, 0, 1, 1}});  // (y, t) -> y
  return pi;
}

// One round, message = private coin (biased q).
ClassicalProtocol coin_forward(double q) {
  ClassicalProtocol pi;
  pi.x_dim = 2;
  pi.y_dim = 2;
  pi.alice_coin = FiniteDistribution({1.0 - q, q});
  // table index (x, s): m = s
  pi.rounds.push_back({Party::alice, 2, {0, 1, 0, 1}});
  return pi;
}

// One round, message = x xor coin; private or public per flag.
ClassicalProtocol masked_send(bool public_coin) {
  ClassicalProtocol pi;
  pi.x_dim = 2;
  pi.y_dim = 2;
  if (public_coin) {
    pi.public_coin = FiniteDistribution({0.5, 0.5});
    // index (x, r): m = x ^ r
    pi.rounds.push_back({Party::alice, 2, {0, 1, 1, 0}});
  } else {
    pi.alice_coin = FiniteDistribution({0.5, 0.5});
    // index (x, s): m = x ^ s
    pi.rounds.push_back({Party::alice, 2, {0, 1, 1, 0}});
  }
  return pi;
}

// Reversible fixtures (binary, no coins). Alice's memory starts (x, s, r)
// with trivial coin registers.
ReversibleProtocol reversible_bounce() {
  ReversibleProtocol rp;
  rp.x_dim = 2;
  rp.y_dim = 2;
  // C1: (x, s, r, a) -> mem (x, s, r), msg a ^ x   [safe send]
  ReversibleCircuit c1;
  c1.in_dims = {2, 1, 1, 2};
  c1.n_ancillas = 1;
  c1.out_mem_dims = {2, 1, 1};
  c1.msg_dim = 2;
  c1.perm.resize(4);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t a = 0; a < 2; ++a)
      c1.perm[x * 2 + a] = x * 2 + (a ^ x);
  rp.circuits.push_back(c1);
  // C2: (y, s, r, m) -> mem (y, s, r), msg m     [return uncopied]
  ReversibleCircuit c2;
  c2.in_dims = {2, 1, 1, 2};
  c2.out_mem_dims = {2, 1, 1};
  c2.msg_dim = 2;
  c2.perm = {0, 1, 2, 3};
  rp.circuits.push_back(c2);
  // C3: (x, s, r, m) -> mem (x, s, r, m)          [absorb]
  ReversibleCircuit c3;
  c3.in_dims = {2, 1, 1, 2};
  c3.out_mem_dims = {2, 1, 1, 2};
  c3.msg_dim = 1;
  c3.perm = {0, 1, 2, 3};
  rp.circuits.push_back(c3);
  rp.alice_output_regs = {0};
  rp.bob_output_regs = {0};
  return rp;
}

ReversibleProtocol reversible_history_exchange() {
  ReversibleProtocol rp;
  rp.x_dim = 2;
  rp.y_dim = 2;
  // C1: send a copy of x.
  ReversibleCircuit c1;
  c1.in_dims = {2, 1, 1, 2};
  c1.n_ancillas = 1;
  c1.out_mem_dims = {2, 1, 1};
  c1.msg_dim = 2;
  c1.perm.resize(4);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t a = 0; a < 2; ++a)
      c1.perm[x * 2 + a] = x * 2 + (a ^ x);
  rp.circuits.push_back(c1);
  // C2: keep m1, send a copy of y.
  ReversibleCircuit c2;
  c2.in_dims = {2, 1, 1, 2, 2};  // y, coins, m1, ancilla
  c2.n_ancillas = 1;
  c2.out_mem_dims = {2, 1, 1, 2};
  c2.msg_dim = 2;
  c2.perm.resize(8);
  for (std::size_t y = 0; y < 2; ++y)
    for (std::size_t m = 0; m < 2; ++m)
      for (std::size_t a = 0; a < 2; ++a)
        c2.perm[(y * 2 + m) * 2 + a] = (y * 2 + m) * 2 + (a ^ y);
  rp.circuits.push_back(c2);
  // C3: absorb m2.
  ReversibleCircuit c3;
  c3.in_dims = {2, 1, 1, 2};
  c3.out_mem_dims = {2, 1, 1, 2};
  c3.msg_dim = 1;
  c3.perm = {0, 1, 2, 3};
  rp.circuits.push_back(c3);
  rp.alice_output_regs = {0};
  rp.bob_output_regs = {0};
  return rp;
}

// C1 moves x into the message without keeping anything.
ReversibleProtocol reversible_input_destroyer() {
  ReversibleProtocol rp;
  rp.x_dim = 2;
  rp.y_dim = 2;
  ReversibleCircuit c1;
  c1.in_dims = {2, 1, 1};
  c1.out_mem_dims = {1};
  c1.msg_dim = 2;
  c1.perm = {0, 1};
  rp.circuits.push_back(c1);
  ReversibleCircuit c2;
  c2.in_dims = {2, 1, 1, 2};
  c2.out_mem_dims = {2, 1, 1, 2};
  c2.msg_dim = 1;
  c2.perm = {0, 1, 2, 3};
  rp.circuits.push_back(c2);
  rp.bob_output_regs = {3};
  return rp;
}

Extension function_extension(const std::vector<std::size_t>& f) {
  Extension ext;
  ext.d_dim = 2;
  ext.d_given_xy.resize(4);
  for (std::size_t i = 0; i < 4; ++i) {
    ext.d_given_xy[i] = {0.0, 0.0};
    ext.d_given_xy[i][f[i]] = 1.0;
  }
  return ext;
}

Extension noisy_extension() {
  Extension ext;
  ext.d_dim = 2;
  ext.d_given_xy.resize(4);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      ext.d_given_xy[x * 2 + y] = {x == 0 ? 0.8 : 0.2, x == 0 ? 0.2 : 0.8};
  return ext;
}

InputDistribution marginal_factor(const InputDistribution& mu12, bool first,
                                  std::size_t x1d, std::size_t x2d,
                                  std::size_t y1d, std::size_t y2d) {
  const std::size_t xd = first ? x1d : x2d;
  const std::size_t yd = first ? y1d : y2d;
  std::vector<double> p(xd * yd, 0.0);
  for (std::size_t x1 = 0; x1 < x1d; ++x1)
    for (std::size_t x2 = 0; x2 < x2d; ++x2)
      for (std::size_t y1 = 0; y1 < y1d; ++y1)
        for (std::size_t y2 = 0; y2 < y2d; ++y2) {
          const double v = mu12.at(x1 * x2d + x2, y1 * y2d + y2);
          if (first)
            p[x1 * y1d + y1] += v;
          else
            p[x2 * y2d + y2] += v;
        }
  return InputDistribution(xd, yd, std::move(p));
}

}  // namespace

TEST_SUITE("classical-protocols") {

TEST_CASE("the deterministic exchange produces the inputs as transcript") {
  Rng rng(71);
  const InputDistribution mu = random_distribution(2, 2, rng);
  const JointTable table = run_classical(xor_exchange(), mu);
  std::map<std::pair<std::size_t, std::size_t>, double> seen;
  for (const auto& rec : table.records) {
    CHECK(rec.msgs[0] == rec.x);
    CHECK(rec.msgs[1] == rec.y);
    seen[{rec.x, rec.y}] += rec.prob;
  }
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      CHECK(seen[{x, y}] == doctest::Approx(mu.at(x, y)).epsilon(1e-12));
}

TEST_CASE("a forwarded private coin is independent of the input") {
  const JointTable table = run_classical(coin_forward(0.3), kUniform);
  double m1 = 0.0, m1_given_x0 = 0.0, x0 = 0.0;
  for (const auto& rec : table.records) {
    if (rec.msgs[0] == 1) m1 += rec.prob;
    if (rec.x == 0) {
      x0 += rec.prob;
      if (rec.msgs[0] == 1) m1_given_x0 += rec.prob;
    }
  }
  CHECK(m1 == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(m1_given_x0 / x0 == doctest::Approx(0.3).epsilon(1e-12));
  const ClassicalIc cost = ic(coin_forward(0.3), kUniform);
  CHECK(cost.total() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("a two-round coin-masked protocol matches hand enumeration") {
  // Round 1: m1 = x ^ sA; round 2: m2 = y ^ m1.
  ClassicalProtocol pi;
  pi.x_dim = 2;
  pi.y_dim = 2;
  pi.alice_coin = FiniteDistribution({0.5, 0.5});
  pi.rounds.push_back({Party::alice, 2, {0, 1, 1, 0}});
  std::vector<std::size_t> t2(4);
  for (std::size_t y = 0; y < 2; ++y)
    for (std::size_t m1 = 0; m1 < 2; ++m1) t2[y * 2 + m1] = y ^ m1;
  pi.rounds.push_back({Party::bob, 2, std::move(t2)});

  const JointTable table = run_classical(pi, kUniform);
  // Hand enumeration: every (x, y, m1) combination has mass 1/8 and
  // m2 = y ^ m1 deterministically.
  std::map<std::vector<std::size_t>, double> dist;
  for (const auto& rec : table.records) {
    CHECK(rec.msgs[1] == (rec.y ^ rec.msgs[0]));
    dist[{rec.x, rec.y, rec.msgs[0]}] += rec.prob;
  }
  for (const auto& [key, p] : dist) CHECK(p == doctest::Approx(0.125));
}

TEST_CASE("IC of the basic senders") {
  // Alice sends x: 1 bit about X given (R, Y).
  ClassicalProtocol send;
  send.x_dim = 2;
  send.y_dim = 2;
  send.rounds.push_back({Party::alice, 2, {0, 1}});
  CHECK(ic(send, kUniform).a_to_b == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ic(send, kUniform).b_to_a == doctest::Approx(0.0).epsilon(1e-10));
  // x masked by a fresh private coin reveals nothing.
  CHECK(ic(masked_send(false), kUniform).total() ==
        doctest::Approx(0.0).epsilon(1e-10));
  // x masked by the public coin reveals everything given R_AB.
  CHECK(ic(masked_send(true), kUniform).a_to_b ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("the extension form of IC matches for every extension") {
  Rng rng(72);
  ClassicalGenOptions opt;
  for (int trial = 0; trial < 8; ++trial) {
    const ClassicalProtocol pi = random_classical_protocol(opt, rng);
    const InputDistribution mu = random_distribution(2, 2, rng);
    const double base = ic(pi, mu).total();
    CHECK(ic_extended(pi, mu, Extension::trivial()) ==
          doctest::Approx(base).epsilon(1e-10));
    CHECK(ic_extended(pi, mu, function_extension({0, 1, 1, 0})) ==
          doctest::Approx(base).epsilon(1e-10));
    CHECK(ic_extended(pi, mu, noisy_extension()) ==
          doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("odd messages are deterministic given the sender's view") {
  Rng rng(73);
  ClassicalGenOptions opt;
  const ClassicalProtocol pi = random_classical_protocol(opt, rng);
  const JointTable table = run_classical(pi, kUniform);
  for (std::size_t i = 0; i < table.n_rounds; ++i) {
    std::map<std::vector<std::size_t>, std::size_t> view_to_msg;
    for (const auto& rec : table.records) {
      std::vector<std::size_t> view = {
          pi.rounds[i].owner == Party::alice ? rec.x : rec.y,
          pi.rounds[i].owner == Party::alice ? rec.sa : rec.sb, rec.r};
      view.insert(view.end(), rec.msgs.begin(), rec.msgs.begin() + i);
      const auto it = view_to_msg.find(view);
      if (it == view_to_msg.end())
        view_to_msg[view] = rec.msgs[i];
      else
        CHECK(it->second == rec.msgs[i]);
    }
  }
}

TEST_CASE("RIC of the history-keeping exchange equals the standard IC") {
  const ReversibleIc r = ric(reversible_history_exchange(), kUniform);
  const ClassicalIc base = ic(xor_exchange(), kUniform);
  CHECK(r.value == doctest::Approx(base.total()).epsilon(1e-10));
}

TEST_CASE("RIC of the bounce is twice the IC of its forward half") {
  const ReversibleIc r = ric(reversible_bounce(), kUniform);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
  ClassicalProtocol forward;
  forward.x_dim = 2;
  forward.y_dim = 2;
  forward.rounds.push_back({Party::alice, 2, {0, 1}});
  CHECK(ic(forward, kUniform).total() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("RIC of the empty protocol is zero") {
  ReversibleProtocol rp;
  rp.x_dim = 2;
  rp.y_dim = 2;
  CHECK(ric(rp, kUniform).value == doctest::Approx(0.0));
}

TEST_CASE("RIC is extension-independent") {
  const ReversibleIc base = ric(reversible_bounce(), kUniform);
  const ReversibleIc with_d =
      ric(reversible_bounce(), kUniform, noisy_extension());
  CHECK(base.value == doctest::Approx(with_d.value).epsilon(1e-10));
}

TEST_CASE("safe copies never increase RIC and strictly help destroyers") {
  // Already safe: unchanged.
  const double before = ric(reversible_bounce(), kUniform).value;
  const double after =
      ric(safe_reversible(reversible_bounce()), kUniform).value;
  CHECK(after == doctest::Approx(before).epsilon(1e-9));

  // Input destroyer: drops strictly.
  const double bad = ric(reversible_input_destroyer(), kUniform).value;
  const double fixed =
      ric(safe_reversible(reversible_input_destroyer()), kUniform).value;
  CHECK(bad == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fixed == doctest::Approx(1.0).epsilon(1e-10));

  // Point mass: nothing to measure.
  const InputDistribution point = InputDistribution::point_mass(2, 2, 1, 0);
  CHECK(ric(reversible_bounce(), point).value ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(ric(safe_reversible(reversible_bounce()), point).value ==
        doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("the unforget simulation keeps transcripts and lowers IC to RIC") {
  // History keeper: IC = RIC exactly.
  {
    const ReversibleProtocol rp = reversible_history_exchange();
    const ClassicalProtocol sim = unforget_simulation(rp);
    CHECK(ic(sim, kUniform).total() ==
          doctest::Approx(ric(rp, kUniform).value).epsilon(1e-10));
  }
  // Bounce: IC(sim) = 1 < RIC = 2, identical transcript distribution.
  {
    const ReversibleProtocol rp = reversible_bounce();
    const ClassicalProtocol sim = unforget_simulation(rp);
    CHECK(ic(sim, kUniform).total() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ric(rp, kUniform).value == doctest::Approx(2.0).epsilon(1e-10));
    std::map<std::vector<std::size_t>, double> a, b;
    for (const auto& rec : run_reversible(rp, kUniform).records)
      a[{rec.x, rec.y, rec.msgs[0], rec.msgs[1]}] += rec.prob;
    for (const auto& rec : run_classical(sim, kUniform).records)
      b[{rec.x, rec.y, rec.msgs[0], rec.msgs[1]}] += rec.prob;
    for (const auto& [key, p] : a)
      CHECK(b[key] == doctest::Approx(p).epsilon(1e-12));
  }
  // Unsafe input requires the safe transformation first.
  CHECK_THROWS_AS((void)unforget_simulation(reversible_input_destroyer()),
                  ContractError);
}

TEST_CASE("RIC is subadditive over protocol tensors") {
  Rng rng(74);
  ReversibleGenOptions opt;
  for (int trial = 0; trial < 10; ++trial) {
    const ReversibleProtocol p1 = random_reversible_protocol(opt, rng);
    const ReversibleProtocol p2 = random_reversible_protocol(opt, rng);
    const ReversibleProtocol both = tensor_protocol(p1, p2);
    const InputDistribution mu12 = random_distribution(4, 4, rng);
    const InputDistribution mu1 = marginal_factor(mu12, true, 2, 2, 2, 2);
    const InputDistribution mu2 = marginal_factor(mu12, false, 2, 2, 2, 2);
    CHECK(ric(both, mu12).value <=
          ric(p1, mu1).value + ric(p2, mu2).value + 1e-9);
  }
}

TEST_CASE("canonical randomness form preserves the protocol") {
  // Deterministic: coins become trivial, tables survive.
  {
    const CanonicalForm cf = canonical_randomness_form(xor_exchange());
    CHECK(cf.protocol.alice_coin.size() == 1);
    CHECK(cf.protocol.bob_coin.size() == 1);
    CHECK(cf.alice_coords.empty());
    CHECK(ic(cf.protocol, kUniform).total() ==
          doctest::Approx(ic(xor_exchange(), kUniform).total())
              .epsilon(1e-10));
  }
  // One coin, one message: the transcript distribution is preserved
  // (checked internally; verify IC here too).
  {
    const ClassicalProtocol pi = coin_forward(0.3);
    const CanonicalForm cf = canonical_randomness_form(pi);
    CHECK(cf.alice_coords.size() == 2);  // one coordinate per input value
    CHECK(ic(cf.protocol, kUniform).total() ==
          doctest::Approx(ic(pi, kUniform).total()).epsilon(1e-10));
  }
  // Random two-round protocols with private coins.
  Rng rng(75);
  ClassicalGenOptions opt;
  opt.coin_round_prob = 1.0;
  opt.max_rounds = 2;
  for (int trial = 0; trial < 5; ++trial) {
    const ClassicalProtocol pi = random_classical_protocol(opt, rng);
    const CanonicalForm cf = canonical_randomness_form(pi);
    const InputDistribution mu = random_distribution(2, 2, rng);
    CHECK(ic(cf.protocol, mu).total() ==
          doctest::Approx(ic(pi, mu).total()).epsilon(1e-10));
    CHECK(cc(cf.protocol).total() == doctest::Approx(cc(pi).total()));
  }
}

TEST_CASE("coin reuse across rounds is preserved by the canonical form") {
  // m1 = sA, m3 = sA: the conditional at round 3 must follow m1.
  ClassicalProtocol pi;
  pi.x_dim = 2;
  pi.y_dim = 2;
  pi.alice_coin = FiniteDistribution({0.5, 0.5});
  pi.rounds.push_back({Party::alice, 2, {0, 1, 0, 1}});  // (x, s) -> s
  pi.rounds.push_back({Party::bob, 2, {0, 0, 1, 1}});    // (y, t) -> y
  std::vector<std::size_t> t3(2 * 2 * 4);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t t = 0; t < 4; ++t) t3[(x * 2 + s) * 4 + t] = s;
  pi.rounds.push_back({Party::alice, 2, std::move(t3)});
  const CanonicalForm cf = canonical_randomness_form(pi);
  // Every reachable round-3 view is deterministic (m3 = m1), so only the
  // first round contributes coordinates.
  for (const auto& c : cf.alice_coords) CHECK(c.round == 0);
  std::map<std::vector<std::size_t>, double> a, b;
  for (const auto& rec : run_classical(pi, kUniform).records)
    a[{rec.x, rec.y, rec.msgs[0], rec.msgs[1], rec.msgs[2]}] += rec.prob;
  for (const auto& rec : run_classical(cf.protocol, kUniform).records)
    b[{rec.x, rec.y, rec.msgs[0], rec.msgs[1], rec.msgs[2]}] += rec.prob;
  for (const auto& [key, p] : a) CHECK(b[key] == doctest::Approx(p));
}

TEST_CASE("padding unifies alphabets without changing IC") {
  // Mixed alphabets: round 1 ternary, round 2 silent, round 3 binary.
  ClassicalProtocol pi;
  pi.x_dim = 2;
  pi.y_dim = 2;
  pi.rounds.push_back({Party::alice, 3, {0, 2}});
  pi.rounds.push_back({Party::bob, 1, {0, 0, 0, 0, 0, 0}});
  std::vector<std::size_t> t3(2 * 3);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t t = 0; t < 3; ++t) t3[x * 3 + t] = x;
  pi.rounds.push_back({Party::alice, 2, std::move(t3)});

  const ClassicalProtocol padded = pad_messages(pi);
  CHECK(padded.rounds[0].alphabet == 4);
  CHECK(padded.rounds[1].alphabet == 4);
  CHECK(padded.rounds[2].alphabet == 4);
  Rng rng(76);
  const InputDistribution mu = random_distribution(2, 2, rng);
  CHECK(ic(padded, mu).total() ==
        doctest::Approx(ic(pi, mu).total()).epsilon(1e-10));
  CHECK(cc(padded).total() > cc(pi).total());

  // Already uniform alphabets: returned unchanged.
  const ClassicalProtocol same = pad_messages(xor_exchange());
  CHECK(same.rounds[0].alphabet == 2);
  CHECK(same.rounds[0].table == xor_exchange().rounds[0].table);

  // Empty protocol: unchanged.
  ClassicalProtocol empty;
  empty.x_dim = 2;
  empty.y_dim = 2;
  CHECK(pad_messages(empty).rounds.empty());
}

TEST_CASE("gate circuits compile to the expected permutations") {
  GateCircuit gc;
  gc.n_bits = 3;
  gc.gates.push_back({"toffoli", {0, 1, 2}});
  const auto perm = compile_gates(gc);
  for (std::size_t v = 0; v < 8; ++v) {
    const std::size_t a = (v >> 2) & 1, b = (v >> 1) & 1, c = v & 1;
    CHECK(perm[v] == ((a << 2) | (b << 1) | (c ^ (a & b))));
  }
  GateCircuit sw;
  sw.n_bits = 2;
  sw.gates.push_back({"swap", {0, 1}});
  const auto sperm = compile_gates(sw);
  CHECK(sperm[1] == 2);
  CHECK(sperm[2] == 1);
  CHECK(sperm[0] == 0);
  CHECK(sperm[3] == 3);
}

TEST_CASE("the atom cap guards enumeration") {
  const std::size_t old_cap = atom_cap();
  set_atom_cap(3);
  CHECK_THROWS_AS((void)run_classical(xor_exchange(), kUniform), DimCapError);
  set_atom_cap(old_cap);
}

}  // TEST_SUITE
