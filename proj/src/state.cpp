#include "qicost/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "qicost/config.hpp"
#include "qicost/entropy.hpp"
#include "qicost/error.hpp"

namespace qicost {

RegisterSystem::RegisterSystem(std::vector<RegisterLabel> regs)
    : regs_(std::move(regs)) {
  std::set<std::string> seen;
  for (const auto& r : regs_) {
    if (r.dim < 1) throw ArgumentError("register " + r.name + " has dim 0");
    if (!seen.insert(r.name).second)
      throw ArgumentError("duplicate register name " + r.name);
  }
}

std::size_t RegisterSystem::total_dim() const {
  std::size_t d = 1;
  for (const auto& r : regs_) d *= r.dim;
  return d;
}

bool RegisterSystem::has(const std::string& name) const {
  for (const auto& r : regs_)
    if (r.name == name) return true;
  return false;
}

std::size_t RegisterSystem::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < regs_.size(); ++i)
    if (regs_[i].name == name) return i;
  throw ArgumentError("unknown register " + name);
}

std::size_t RegisterSystem::dim_of(const std::string& name) const {
  return regs_[index_of(name)].dim;
}

std::vector<std::size_t> RegisterSystem::dims() const {
  std::vector<std::size_t> d(regs_.size());
  for (std::size_t i = 0; i < regs_.size(); ++i) d[i] = regs_[i].dim;
  return d;
}

std::size_t RegisterSystem::dim_of_set(
    const std::vector<std::string>& names) const {
  std::size_t d = 1;
  for (const auto& n : names) d *= dim_of(n);
  return d;
}

std::vector<std::string> RegisterSystem::names() const {
  std::vector<std::string> out;
  out.reserve(regs_.size());
  for (const auto& r : regs_) out.push_back(r.name);
  return out;
}

std::vector<std::string> RegisterSystem::complement(
    const std::vector<std::string>& subset) const {
  std::set<std::string> in(subset.begin(), subset.end());
  for (const auto& n : subset) index_of(n);  // validate
  std::vector<std::string> out;
  for (const auto& r : regs_)
    if (!in.count(r.name)) out.push_back(r.name);
  return out;
}

PureState::PureState(RegisterSystem system, std::vector<cplx> amplitudes)
    : system_(std::move(system)), amp_(std::move(amplitudes)) {
  if (amp_.size() != system_.total_dim())
    throw ArgumentError("amplitude count does not match register system");
  double n2 = 0.0;
  for (const cplx& a : amp_) n2 += std::norm(a);
  if (std::abs(n2 - 1.0) > 1e-8)
    throw NormalizationError("pure state norm^2 = " + std::to_string(n2));
}

PureState PureState::trivial() {
  return PureState(RegisterSystem{}, {cplx(1.0, 0.0)});
}

double PureState::norm() const {
  double n2 = 0.0;
  for (const cplx& a : amp_) n2 += std::norm(a);
  return std::sqrt(n2);
}

DensityOperator::DensityOperator(RegisterSystem system, ComplexMatrix matrix)
    : system_(std::move(system)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != system_.total_dim() ||
      matrix_.cols() != system_.total_dim())
    throw ArgumentError("density matrix shape does not match register system");
  if (matrix_.hermiticity_defect() > 1e-10)
    throw ContractError("density operator is not Hermitian");
  if (std::abs(matrix_.trace().real() - 1.0) > 1e-8)
    throw NormalizationError("density operator trace " +
                             std::to_string(matrix_.trace().real()));
}

InputDistribution::InputDistribution(std::size_t x_dim, std::size_t y_dim,
                                     std::vector<double> probabilities)
    : x_dim_(x_dim), y_dim_(y_dim), p_(std::move(probabilities)) {
  if (x_dim_ < 1 || y_dim_ < 1)
    throw ArgumentError("input dimensions must be positive");
  if (p_.size() != x_dim_ * y_dim_)
    throw ArgumentError("distribution size does not match dimensions");
  double sum = 0.0;
  for (double v : p_) {
    if (v < 0.0)
      throw ArgumentError("negative probability " + std::to_string(v));
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw ArgumentError("distribution sums to " + std::to_string(sum));
}

InputDistribution InputDistribution::uniform(std::size_t x_dim,
                                             std::size_t y_dim) {
  return InputDistribution(
      x_dim, y_dim,
      std::vector<double>(x_dim * y_dim, 1.0 / double(x_dim * y_dim)));
}

InputDistribution InputDistribution::point_mass(std::size_t x_dim,
                                                std::size_t y_dim,
                                                std::size_t x, std::size_t y) {
  std::vector<double> p(x_dim * y_dim, 0.0);
  p[x * y_dim + y] = 1.0;
  return InputDistribution(x_dim, y_dim, std::move(p));
}

std::vector<double> InputDistribution::marginal_x() const {
  std::vector<double> m(x_dim_, 0.0);
  for (std::size_t x = 0; x < x_dim_; ++x)
    for (std::size_t y = 0; y < y_dim_; ++y) m[x] += at(x, y);
  return m;
}

std::vector<double> InputDistribution::marginal_y() const {
  std::vector<double> m(y_dim_, 0.0);
  for (std::size_t x = 0; x < x_dim_; ++x)
    for (std::size_t y = 0; y < y_dim_; ++y) m[y] += at(x, y);
  return m;
}

bool InputDistribution::is_product(double tol) const {
  const auto mx = marginal_x();
  const auto my = marginal_y();
  for (std::size_t x = 0; x < x_dim_; ++x)
    for (std::size_t y = 0; y < y_dim_; ++y)
      if (std::abs(at(x, y) - mx[x] * my[y]) > tol) return false;
  return true;
}

namespace {

// Permutation moving `front` (in the given order) before the remaining
// registers (in system order); returns the order vector for kernels::permute.
std::vector<std::size_t> front_order(const RegisterSystem& sys,
                                     const std::vector<std::string>& front) {
  std::vector<bool> used(sys.size(), false);
  std::vector<std::size_t> order;
  order.reserve(sys.size());
  for (const auto& n : front) {
    const std::size_t k = sys.index_of(n);
    if (used[k]) throw ArgumentError("register " + n + " listed twice");
    used[k] = true;
    order.push_back(k);
  }
  for (std::size_t k = 0; k < sys.size(); ++k)
    if (!used[k]) order.push_back(k);
  return order;
}

PureState reorder(const PureState& s, const std::vector<std::size_t>& order) {
  const auto dims = s.system().dims();
  std::vector<cplx> out(s.amplitudes().size());
  kernels::permute(s.amplitudes().data(), out.data(), dims, order);
  std::vector<RegisterLabel> regs;
  regs.reserve(order.size());
  for (std::size_t k : order) regs.push_back(s.system()[k]);
  return PureState(RegisterSystem(std::move(regs)), std::move(out));
}

}  // namespace

PureState permute_registers(const PureState& s,
                            const std::vector<std::string>& new_order) {
  if (new_order.size() != s.system().size())
    throw ArgumentError("permute_registers: order is not a permutation");
  return reorder(s, front_order(s.system(), new_order));
}

DensityOperator permute_registers(const DensityOperator& s,
                                  const std::vector<std::string>& new_order) {
  if (new_order.size() != s.system().size())
    throw ArgumentError("permute_registers: order is not a permutation");
  const auto order = front_order(s.system(), new_order);
  const std::size_t r = order.size();
  auto dims = s.system().dims();
  // The matrix is a tensor with row factors then column factors.
  std::vector<std::size_t> dims2 = dims;
  dims2.insert(dims2.end(), dims.begin(), dims.end());
  std::vector<std::size_t> order2(2 * r);
  for (std::size_t j = 0; j < r; ++j) {
    order2[j] = order[j];
    order2[r + j] = r + order[j];
  }
  std::vector<cplx> out(s.matrix().data().size());
  kernels::permute(s.matrix().data().data(), out.data(), dims2, order2);
  std::vector<RegisterLabel> regs;
  for (std::size_t k : order) regs.push_back(s.system()[k]);
  const std::size_t d = s.system().total_dim();
  return DensityOperator(RegisterSystem(std::move(regs)),
                         ComplexMatrix(d, d, std::move(out)));
}

DensityOperator partial_trace(const PureState& s,
                              const std::vector<std::string>& keep) {
  const std::size_t dk = s.system().dim_of_set(keep);
  if (dk > dim_cap())
    throw DimCapError("partial_trace output dimension " + std::to_string(dk) +
                      " exceeds cap " + std::to_string(dim_cap()));
  const PureState front = reorder(s, front_order(s.system(), keep));
  const std::size_t rest = s.system().total_dim() / dk;
  ComplexMatrix rho(dk, dk);
  kernels::gram(front.amplitudes().data(), dk, rest, rho.data().data());
  std::vector<RegisterLabel> regs;
  for (const auto& n : keep) regs.push_back({n, s.system().dim_of(n)});
  return DensityOperator(RegisterSystem(std::move(regs)), std::move(rho));
}

DensityOperator partial_trace(const DensityOperator& s,
                              const std::vector<std::string>& keep) {
  const std::size_t dk = s.system().dim_of_set(keep);
  if (dk > dim_cap())
    throw DimCapError("partial_trace output dimension exceeds cap");
  const DensityOperator front = permute_registers(
      s, [&] {
        auto order = front_order(s.system(), keep);
        std::vector<std::string> names;
        for (std::size_t k : order) names.push_back(s.system()[k].name);
        return names;
      }());
  const std::size_t total = s.system().total_dim();
  const std::size_t rest = total / dk;
  ComplexMatrix rho(dk, dk);
  const auto& m = front.matrix();
  for (std::size_t i = 0; i < dk; ++i)
    for (std::size_t j = 0; j < dk; ++j) {
      cplx acc(0.0, 0.0);
      for (std::size_t t = 0; t < rest; ++t)
        acc += m.at(i * rest + t, j * rest + t);
      rho.at(i, j) = acc;
    }
  std::vector<RegisterLabel> regs;
  for (const auto& n : keep) regs.push_back({n, s.system().dim_of(n)});
  return DensityOperator(RegisterSystem(std::move(regs)), std::move(rho));
}

PureState canonical_purification(const InputDistribution& mu) {
  const std::size_t xd = mu.x_dim(), yd = mu.y_dim();
  RegisterSystem sys({{"X", xd}, {"RX", xd}, {"Y", yd}, {"RY", yd}});
  std::vector<cplx> amp(sys.total_dim(), cplx(0.0, 0.0));
  for (std::size_t x = 0; x < xd; ++x)
    for (std::size_t y = 0; y < yd; ++y) {
      const std::size_t idx = ((x * xd + x) * yd + y) * yd + y;
      amp[idx] = cplx(std::sqrt(mu.at(x, y)), 0.0);
    }
  return PureState(std::move(sys), std::move(amp));
}

PureState tensor(const PureState& a, const PureState& b) {
  std::vector<RegisterLabel> regs = a.system().registers();
  for (const auto& r : b.system().registers()) regs.push_back(r);
  std::vector<cplx> amp(a.amplitudes().size() * b.amplitudes().size());
  kernels::kron(a.amplitudes().data(), a.amplitudes().size(), 1,
                b.amplitudes().data(), b.amplitudes().size(), 1, amp.data());
  return PureState(RegisterSystem(std::move(regs)), std::move(amp));
}

PureState apply_isometry(const PureState& s,
                         const std::vector<std::string>& in_regs,
                         const std::vector<RegisterLabel>& out_regs,
                         const ComplexMatrix& v) {
  const std::size_t din = s.system().dim_of_set(in_regs);
  std::size_t dout = 1;
  for (const auto& r : out_regs) dout *= r.dim;
  if (v.rows() != dout || v.cols() != din)
    throw ArgumentError("isometry matrix shape does not match register lists");
  const PureState front = reorder(s, front_order(s.system(), in_regs));
  const std::size_t rest = s.system().total_dim() / din;
  std::vector<cplx> out(dout * rest);
  kernels::gemm(v.data().data(), front.amplitudes().data(), out.data(), dout,
                din, rest);
  std::vector<RegisterLabel> regs(out_regs.begin(), out_regs.end());
  for (std::size_t k = in_regs.size(); k < front.system().size(); ++k)
    regs.push_back(front.system()[k]);
  // Fresh out names must not collide with surviving registers.
  return PureState(RegisterSystem(std::move(regs)), std::move(out));
}

double entropy_of_subset(const PureState& s,
                         const std::vector<std::string>& subset) {
  if (subset.empty()) return 0.0;
  if (subset.size() == s.system().size()) return 0.0;  // global state is pure
  const std::vector<std::string> comp = s.system().complement(subset);
  const std::size_t ds = s.system().dim_of_set(subset);
  const std::size_t dc = s.system().dim_of_set(comp);
  const auto& side = (ds <= dc) ? subset : comp;
  const DensityOperator rho = partial_trace(s, side);
  const Spectrum spec = hermitian_eigenvalues(rho.matrix());
  return entropy_of_probabilities(spec.eigenvalues);
}

double entropy_of_subset(const DensityOperator& s,
                         const std::vector<std::string>& subset) {
  if (subset.empty()) return 0.0;
  const DensityOperator rho = partial_trace(s, subset);
  const Spectrum spec = hermitian_eigenvalues(rho.matrix());
  return entropy_of_probabilities(spec.eigenvalues);
}

namespace {

void check_disjoint(const std::vector<std::string>& a,
                    const std::vector<std::string>& b,
                    const std::vector<std::string>& c) {
  std::set<std::string> seen;
  for (const auto* set : {&a, &b, &c})
    for (const auto& n : *set)
      if (!seen.insert(n).second)
        throw ArgumentError("cqmi register sets overlap at " + n);
}

template <typename StateT>
double cqmi_impl(const StateT& s, const std::vector<std::string>& a,
                 const std::vector<std::string>& b,
                 const std::vector<std::string>& c) {
  check_disjoint(a, b, c);
  for (const auto* set : {&a, &b, &c})
    for (const auto& n : *set) s.system().index_of(n);
  if (a.empty() || b.empty()) return 0.0;
  std::vector<std::string> ac = a;
  ac.insert(ac.end(), c.begin(), c.end());
  std::vector<std::string> bc = b;
  bc.insert(bc.end(), c.begin(), c.end());
  std::vector<std::string> abc = a;
  abc.insert(abc.end(), b.begin(), b.end());
  abc.insert(abc.end(), c.begin(), c.end());
  return entropy_of_subset(s, ac) + entropy_of_subset(s, bc) -
         entropy_of_subset(s, c) - entropy_of_subset(s, abc);
}

}  // namespace

double cqmi(const PureState& s, const std::vector<std::string>& a,
            const std::vector<std::string>& b,
            const std::vector<std::string>& c) {
  return cqmi_impl(s, a, b, c);
}

double cqmi(const DensityOperator& s, const std::vector<std::string>& a,
            const std::vector<std::string>& b,
            const std::vector<std::string>& c) {
  return cqmi_impl(s, a, b, c);
}

std::vector<double> measurement_distribution(
    const PureState& s, const std::vector<std::string>& regs) {
  const std::size_t dk = s.system().dim_of_set(regs);
  const PureState front = reorder(s, front_order(s.system(), regs));
  const std::size_t rest = s.system().total_dim() / dk;
  std::vector<double> out(dk, 0.0);
  kernels::prob_accumulate(front.amplitudes().data(), dk, rest, out.data());
  return out;
}

double off_diagonal_mass(const PureState& s,
                         const std::vector<std::string>& regs) {
  const DensityOperator rho = partial_trace(s, regs);
  double mass = 0.0;
  const std::size_t d = rho.matrix().rows();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (i != j) mass += std::abs(rho.matrix().at(i, j));
  return mass;
}

std::vector<std::string> product_pure_registers(const PureState& s) {
  std::vector<std::string> out;
  for (const auto& r : s.system().registers()) {
    if (s.system().size() == 1) break;
    if (r.dim == 1) {
      out.push_back(r.name);
      continue;
    }
    const DensityOperator rho = partial_trace(s, {r.name});
    double purity = 0.0;
    for (const cplx& v : rho.matrix().data()) purity += std::norm(v);
    if (purity >= 1.0 - 1e-14) out.push_back(r.name);
  }
  return out;
}

}  // namespace qicost
