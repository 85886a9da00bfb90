#include <doctest.h>

#include <cmath>

#include "qicost/entropy.hpp"
#include "qicost/error.hpp"
#include "qicost/random_gen.hpp"
#include "qicost/state.hpp"

using namespace qicost;

TEST_SUITE("registers-state") {

TEST_CASE("register systems enforce unique names and positive dims") {
  CHECK_THROWS_AS(RegisterSystem({{"A", 2}, {"A", 2}}), ArgumentError);
  CHECK_THROWS_AS(RegisterSystem({{"A", 0}}), ArgumentError);
  const RegisterSystem sys({{"A", 2}, {"B", 3}});
  CHECK(sys.total_dim() == 6);
  CHECK(sys.dim_of("B") == 3);
  CHECK_THROWS_AS((void)sys.index_of("Z"), ArgumentError);
}

TEST_CASE("identity permutation returns the same state") {
  Rng rng(31);
  const PureState s =
      random_pure_state(RegisterSystem({{"A", 2}, {"B", 3}}), rng);
  const PureState t = permute_registers(s, {"A", "B"});
  for (std::size_t i = 0; i < s.amplitudes().size(); ++i)
    CHECK(s.amplitudes()[i] == t.amplitudes()[i]);
}

TEST_CASE("swap moves |01> to |10>") {
  PureState s(RegisterSystem({{"A", 2}, {"B", 2}}),
              {cplx(0, 0), cplx(1, 0), cplx(0, 0), cplx(0, 0)});  // |0 1>
  const PureState t = permute_registers(s, {"B", "A"});
  CHECK(t.system()[0].name == "B");
  CHECK(t.amplitudes()[2] == cplx(1, 0));  // |1 0> in (B, A) order
}

TEST_CASE("permutation preserves subset entropies") {
  Rng rng(32);
  const PureState s = random_pure_state(
      RegisterSystem({{"A", 2}, {"B", 2}, {"C", 3}}), rng);
  const PureState t = permute_registers(s, {"C", "A", "B"});
  CHECK(entropy_of_subset(s, {"A", "C"}) ==
        doctest::Approx(entropy_of_subset(t, {"A", "C"})).epsilon(1e-12));
  CHECK_THROWS_AS((void)permute_registers(s, {"A", "B"}), ArgumentError);
}

TEST_CASE("partial trace of a Bell pair is maximally mixed") {
  const double s2 = 1.0 / std::sqrt(2.0);
  const PureState bell(RegisterSystem({{"A", 2}, {"B", 2}}),
                       {cplx(s2, 0), cplx(0, 0), cplx(0, 0), cplx(s2, 0)});
  const DensityOperator rho = partial_trace(bell, {"A"});
  CHECK(std::abs(rho.matrix().at(0, 0) - cplx(0.5, 0)) < 1e-12);
  CHECK(std::abs(rho.matrix().at(1, 1) - cplx(0.5, 0)) < 1e-12);
  CHECK(std::abs(rho.matrix().at(0, 1)) < 1e-12);
  CHECK_THROWS_AS((void)partial_trace(bell, {"Z"}), ArgumentError);
}

TEST_CASE("partial trace of a product state keeps the factor") {
  Rng rng(33);
  const PureState a = random_pure_state(RegisterSystem({{"A", 3}}), rng);
  const PureState b = random_pure_state(RegisterSystem({{"B", 2}}), rng);
  const DensityOperator rho = partial_trace(tensor(a, b), {"A"});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::abs(rho.matrix().at(i, j) -
                     a.amplitudes()[i] * std::conj(a.amplitudes()[j])) <
            1e-12);
}

TEST_CASE("complementary subsets of a pure state have equal entropy") {
  Rng rng(34);
  const PureState s = random_pure_state(
      RegisterSystem({{"A", 2}, {"B", 3}, {"C", 2}}), rng);
  CHECK(entropy_of_subset(s, {"A", "B"}) ==
        doctest::Approx(entropy_of_subset(s, {"C"})).epsilon(1e-9));
  CHECK(entropy_of_subset(s, {"A"}) ==
        doctest::Approx(entropy_of_subset(s, {"B", "C"})).epsilon(1e-9));
}

TEST_CASE("partial trace commutes with register permutation") {
  Rng rng(35);
  const PureState s = random_pure_state(
      RegisterSystem({{"A", 2}, {"B", 2}, {"C", 2}}), rng);
  const DensityOperator direct = partial_trace(s, {"B", "A"});
  const DensityOperator via =
      permute_registers(partial_trace(s, {"A", "B"}), {"B", "A"});
  CHECK(max_abs_diff(direct.matrix(), via.matrix()) < 1e-12);
}

TEST_CASE("canonical purification of a point mass is a basis state") {
  const PureState s =
      canonical_purification(InputDistribution::point_mass(2, 2, 0, 0));
  CHECK(s.amplitudes()[0] == cplx(1.0, 0.0));
  for (std::size_t i = 1; i < s.amplitudes().size(); ++i)
    CHECK(s.amplitudes()[i] == cplx(0.0, 0.0));
}

TEST_CASE("purification of perfectly correlated bits") {
  // mu uniform on X = Y: (|0000> + |1111>)/sqrt(2).
  const InputDistribution mu(2, 2, {0.5, 0.0, 0.0, 0.5});
  const PureState s = canonical_purification(mu);
  const double s2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s.amplitudes()[0] - cplx(s2, 0)) < 1e-12);
  CHECK(std::abs(s.amplitudes()[15] - cplx(s2, 0)) < 1e-12);
  // Direct partial-trace oracle: reduced state on X RX is
  // (|00><00| + |11><11|)/2, entropy 1.
  const DensityOperator rho = partial_trace(s, {"X", "RX"});
  CHECK(std::abs(rho.matrix().at(0, 0) - cplx(0.5, 0)) < 1e-12);
  CHECK(std::abs(rho.matrix().at(3, 3) - cplx(0.5, 0)) < 1e-12);
  CHECK(std::abs(rho.matrix().at(0, 3)) < 1e-12);
  CHECK(entropy_of_subset(s, {"X", "RX"}) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("purification of independent uniform bits") {
  // The purification factors over the X and Y parts, so the reduced state
  // on X RX is itself pure while its X marginal is maximally mixed.
  const PureState s =
      canonical_purification(InputDistribution::uniform(2, 2));
  CHECK(entropy_of_subset(s, {"X", "RX"}) ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(entropy_of_subset(s, {"X"}) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("measuring the purification reproduces mu exactly") {
  Rng rng(36);
  const InputDistribution mu = random_distribution(2, 3, rng);
  const PureState s = canonical_purification(mu);
  const auto probs = measurement_distribution(s, {"X", "Y"});
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 3; ++y)
      CHECK(probs[x * 3 + y] == doctest::Approx(mu.at(x, y)).epsilon(1e-12));
}

TEST_CASE("classicality check and off-diagonal mass") {
  const PureState diag =
      canonical_purification(InputDistribution::uniform(2, 2));
  CHECK(off_diagonal_mass(diag, {"X", "Y"}) < 1e-12);
  const double s2 = 1.0 / std::sqrt(2.0);
  const PureState plus(RegisterSystem({{"A", 2}}), {cplx(s2, 0), cplx(s2, 0)});
  CHECK(off_diagonal_mass(plus, {"A"}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("product-pure registers are detected") {
  Rng rng(37);
  const PureState corr = random_pure_state(
      RegisterSystem({{"A", 2}, {"B", 2}}), rng);
  const PureState lone = random_pure_state(RegisterSystem({{"L", 2}}), rng);
  const auto product = product_pure_registers(tensor(corr, lone));
  REQUIRE(product.size() == 1);
  CHECK(product[0] == "L");
}

TEST_CASE("apply_isometry copies a register coherently") {
  // |+> on A, copy A into fresh B: amplitudes land on |00>, |11>.
  const double s2 = 1.0 / std::sqrt(2.0);
  const PureState plus(RegisterSystem({{"A", 2}}), {cplx(s2, 0), cplx(s2, 0)});
  ComplexMatrix copy(4, 2);
  copy.at(0, 0) = 1.0;
  copy.at(3, 1) = 1.0;
  const PureState out = apply_isometry(plus, {"A"}, {{"A", 2}, {"B", 2}}, copy);
  CHECK(std::abs(out.amplitudes()[0] - cplx(s2, 0)) < 1e-12);
  CHECK(std::abs(out.amplitudes()[3] - cplx(s2, 0)) < 1e-12);
  CHECK(entropy_of_subset(out, {"A"}) == doctest::Approx(1.0).epsilon(1e-10));
}

}  // TEST_SUITE
