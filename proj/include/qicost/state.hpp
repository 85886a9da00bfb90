#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qicost/complex_matrix.hpp"

namespace qicost {

struct RegisterLabel {
  std::string name;
  std::size_t dim = 1;
  bool operator==(const RegisterLabel&) const = default;
};

/// An ordered list of named tensor factors. The order is the tensor order;
/// indexing is big-endian (the first register is the most significant digit
/// of a flat index).
class RegisterSystem {
 public:
  RegisterSystem() = default;
  explicit RegisterSystem(std::vector<RegisterLabel> regs);

  std::size_t size() const { return regs_.size(); }
  std::size_t total_dim() const;
  const std::vector<RegisterLabel>& registers() const { return regs_; }
  const RegisterLabel& operator[](std::size_t i) const { return regs_[i]; }

  bool has(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;
  std::size_t dim_of(const std::string& name) const;
  std::vector<std::size_t> dims() const;
  std::size_t dim_of_set(const std::vector<std::string>& names) const;
  std::vector<std::string> names() const;
  /// All register names not in `subset`, in system order.
  std::vector<std::string> complement(
      const std::vector<std::string>& subset) const;

  bool operator==(const RegisterSystem&) const = default;

 private:
  std::vector<RegisterLabel> regs_;
};

/// Global pure state over a register system.
class PureState {
 public:
  PureState(RegisterSystem system, std::vector<cplx> amplitudes);
  /// Dimension-1 state on an empty system.
  static PureState trivial();

  const RegisterSystem& system() const { return system_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }
  std::vector<cplx>& amplitudes() { return amp_; }
  double norm() const;

 private:
  RegisterSystem system_;
  std::vector<cplx> amp_;
};

class DensityOperator {
 public:
  DensityOperator(RegisterSystem system, ComplexMatrix matrix);

  const RegisterSystem& system() const { return system_; }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  RegisterSystem system_;
  ComplexMatrix matrix_;
};

/// Distribution mu over classical input pairs (x, y), row-major over x.
class InputDistribution {
 public:
  InputDistribution(std::size_t x_dim, std::size_t y_dim,
                    std::vector<double> probabilities);
  static InputDistribution uniform(std::size_t x_dim, std::size_t y_dim);
  static InputDistribution point_mass(std::size_t x_dim, std::size_t y_dim,
                                      std::size_t x, std::size_t y);

  std::size_t x_dim() const { return x_dim_; }
  std::size_t y_dim() const { return y_dim_; }
  double at(std::size_t x, std::size_t y) const { return p_[x * y_dim_ + y]; }
  const std::vector<double>& probabilities() const { return p_; }

  std::vector<double> marginal_x() const;
  std::vector<double> marginal_y() const;
  bool is_product(double tol = 1e-10) const;

 private:
  std::size_t x_dim_, y_dim_;
  std::vector<double> p_;
};

PureState permute_registers(const PureState& s,
                            const std::vector<std::string>& new_order);
DensityOperator permute_registers(const DensityOperator& s,
                                  const std::vector<std::string>& new_order);

DensityOperator partial_trace(const PureState& s,
                              const std::vector<std::string>& keep);
DensityOperator partial_trace(const DensityOperator& s,
                              const std::vector<std::string>& keep);

/// |rho_mu> = sum_{x,y} sqrt(mu(x,y)) |x x y y> on registers X RX Y RY.
PureState canonical_purification(const InputDistribution& mu);

PureState tensor(const PureState& a, const PureState& b);

/// Applies V to the listed registers (tensored with identity elsewhere).
/// The matrix is dim(out_regs) x dim(in_regs) over big-endian indexing of
/// the given orders; in_regs are consumed, out_regs take their place at the
/// front of the resulting system.
PureState apply_isometry(const PureState& s,
                         const std::vector<std::string>& in_regs,
                         const std::vector<RegisterLabel>& out_regs,
                         const ComplexMatrix& v);

/// Entropy in bits of the reduced state on `subset`. For a global pure
/// state the smaller side of the bipartition is always the one reduced.
double entropy_of_subset(const PureState& s,
                         const std::vector<std::string>& subset);
double entropy_of_subset(const DensityOperator& s,
                         const std::vector<std::string>& subset);

/// I(A : B | C) = H(AC) + H(BC) - H(C) - H(ABC) in bits. The sets must be
/// pairwise disjoint; C may be empty. Either set A or B empty gives 0.
double cqmi(const PureState& s, const std::vector<std::string>& a,
            const std::vector<std::string>& b,
            const std::vector<std::string>& c);
double cqmi(const DensityOperator& s, const std::vector<std::string>& a,
            const std::vector<std::string>& b,
            const std::vector<std::string>& c);

/// Probabilities of computational-basis outcomes on `regs` (diagonal of the
/// reduced state), big-endian over the given order.
std::vector<double> measurement_distribution(
    const PureState& s, const std::vector<std::string>& regs);

/// Total absolute off-diagonal mass of the reduced state on `regs`;
/// the classicality check is off_diagonal_mass <= tol.
double off_diagonal_mass(const PureState& s,
                         const std::vector<std::string>& regs);

/// Names of registers whose reduced state is pure (product with the rest),
/// detected at purity >= 1 - 1e-14. Such registers can be dropped from any
/// CQMI set without changing its value.
std::vector<std::string> product_pure_registers(const PureState& s);

}  // namespace qicost
