#include <doctest.h>

#include "qicost/error.hpp"
#include "qicost/random_gen.hpp"
#include "qicost/serialize.hpp"

using namespace qicost;

TEST_SUITE("serialize") {

TEST_CASE("protocol files round-trip entrywise") {
  Rng rng(101);
  ProtocolGenOptions opt;
  opt.safe = true;
  const QuantumProtocol p = random_protocol(opt, rng);
  const std::string text = to_json_string(p);
  const QuantumProtocol q = protocol_from_json(text);
  REQUIRE(q.rounds.size() == p.rounds.size());
  CHECK(q.x_dim == p.x_dim);
  CHECK(q.custom_order == p.custom_order);
  CHECK(q.entanglement.amplitudes() == p.entanglement.amplitudes());
  for (std::size_t i = 0; i < p.rounds.size(); ++i) {
    CHECK(q.rounds[i].owner == p.rounds[i].owner);
    CHECK(q.rounds[i].iso.in_regs == p.rounds[i].iso.in_regs);
    CHECK(q.rounds[i].iso.out_regs == p.rounds[i].iso.out_regs);
    CHECK(q.rounds[i].message == p.rounds[i].message);
    CHECK(q.rounds[i].controls == p.rounds[i].controls);
    // Bit-exact matrix entries through the decimal representation.
    CHECK(q.rounds[i].iso.matrix == p.rounds[i].iso.matrix);
  }
  // A second round trip is textually identical.
  CHECK(to_json_string(q) == text);
}

TEST_CASE("distribution files round-trip") {
  Rng rng(102);
  const InputDistribution mu = random_distribution(3, 2, rng);
  const InputDistribution nu = distribution_from_json(to_json_string(mu));
  CHECK(nu.probabilities() == mu.probabilities());
}

TEST_CASE("classical and reversible files round-trip") {
  Rng rng(103);
  ClassicalGenOptions copt;
  const ClassicalProtocol pi = random_classical_protocol(copt, rng);
  const ClassicalFile cf = classical_from_json(to_json_string(pi));
  REQUIRE(cf.classical.has_value());
  CHECK(cf.classical->rounds.size() == pi.rounds.size());
  for (std::size_t i = 0; i < pi.rounds.size(); ++i)
    CHECK(cf.classical->rounds[i].table == pi.rounds[i].table);

  ReversibleGenOptions ropt;
  const ReversibleProtocol rp = random_reversible_protocol(ropt, rng);
  const ClassicalFile rf = classical_from_json(to_json_string(rp));
  REQUIRE(rf.reversible.has_value());
  REQUIRE(rf.reversible->circuits.size() == rp.circuits.size());
  for (std::size_t i = 0; i < rp.circuits.size(); ++i)
    CHECK(rf.reversible->circuits[i].perm == rp.circuits[i].perm);
}

TEST_CASE("gate lists compile inside reversible files") {
  const std::string text = R"({
    "type": "reversible", "x_dim": 2, "y_dim": 2,
    "circuits": [
      {"in_dims": [2, 1, 1, 2], "out_mem_dims": [2, 1, 1], "msg_dim": 2,
       "n_ancillas": 1,
       "gates": {"n_bits": 2, "list": [["cnot", 0, 1]]}},
      {"in_dims": [2, 1, 1, 2], "out_mem_dims": [2, 1, 1, 2], "msg_dim": 1,
       "perm": [0, 1, 2, 3]}
    ],
    "bob_output_regs": [3]
  })";
  const ClassicalFile f = classical_from_json(text);
  REQUIRE(f.reversible.has_value());
  // cnot on (x, ancilla) copies x into the message slot.
  CHECK(f.reversible->circuits[0].perm == std::vector<std::size_t>{0, 1, 3, 2});
}

TEST_CASE("malformed input raises ParseError") {
  CHECK_THROWS_AS((void)protocol_from_json("{"), ParseError);
  CHECK_THROWS_AS((void)protocol_from_json("{\"x_dim\": 2}"), ParseError);
  CHECK_THROWS_AS((void)classical_from_json("{\"type\": \"banana\"}"),
                  ParseError);
  CHECK_THROWS_AS((void)distribution_from_json(
                      "{\"x_dim\": 2, \"y_dim\": 1, \"p\": [[0.5], [0.4]]}"),
                  ParseError);
}

}  // TEST_SUITE
