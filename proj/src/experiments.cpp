#include "qicost/experiments.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <sstream>

#include "qicost/entropy.hpp"
#include "qicost/error.hpp"

namespace qicost {

FunctionTable BooleanFunctionTable::as_function() const {
  FunctionTable f;
  f.x_dim = x_dim();
  f.y_dim = y_dim();
  f.out_dim = 2;
  f.values.assign(values.begin(), values.end());
  return f;
}

BooleanFunctionTable inner_product_function(std::size_t n) {
  BooleanFunctionTable f;
  f.n_x = n;
  f.n_y = n;
  f.values.resize(std::size_t(1) << (2 * n));
  for (std::size_t x = 0; x < f.x_dim(); ++x)
    for (std::size_t y = 0; y < f.y_dim(); ++y)
      f.values[x * f.y_dim() + y] = std::uint8_t(std::popcount(x & y) & 1);
  return f;
}

BooleanFunctionTable and_function() {
  BooleanFunctionTable f;
  f.n_x = 1;
  f.n_y = 1;
  f.values = {0, 0, 0, 1};
  return f;
}

BooleanFunctionTable disjointness_function(std::size_t n) {
  if (n > 3) throw ArgumentError("disjointness driver capped at n = 3");
  BooleanFunctionTable f;
  f.n_x = n;
  f.n_y = n;
  f.values.resize(std::size_t(1) << (2 * n));
  for (std::size_t x = 0; x < f.x_dim(); ++x)
    for (std::size_t y = 0; y < f.y_dim(); ++y)
      f.values[x * f.y_dim() + y] = std::uint8_t((x & y) == 0 ? 1 : 0);
  return f;
}

BooleanFunctionTable random_boolean_function(std::size_t n, Rng& rng) {
  BooleanFunctionTable f;
  f.n_x = n;
  f.n_y = n;
  f.values.resize(std::size_t(1) << (2 * n));
  for (auto& v : f.values) v = rng.next_bool() ? 1 : 0;
  return f;
}

ComplexMatrix phase_gram(const BooleanFunctionTable& f,
                         const std::vector<double>& mu_x,
                         const std::vector<double>& mu_y) {
  if (mu_x.size() != f.x_dim() || mu_y.size() != f.y_dim())
    throw ArgumentError("phase_gram marginal sizes mismatch");
  const std::size_t dx = f.x_dim();
  ComplexMatrix g(dx, dx);
  for (std::size_t x = 0; x < dx; ++x)
    for (std::size_t xp = x; xp < dx; ++xp) {
      double overlap = 0.0;
      for (std::size_t y = 0; y < f.y_dim(); ++y) {
        const int sign = ((f.at(x, y) ^ f.at(xp, y)) != 0) ? -1 : 1;
        overlap += mu_y[y] * sign;
      }
      const double v = std::sqrt(mu_x[x] * mu_x[xp]) * overlap;
      g.at(x, xp) = cplx(v, 0.0);
      g.at(xp, x) = cplx(v, 0.0);
    }
  return g;
}

double phase_entropy(const BooleanFunctionTable& f,
                     const std::vector<double>& mu_x,
                     const std::vector<double>& mu_y) {
  return gram_entropy(phase_gram(f, mu_x, mu_y));
}

double renyi2_phase_entropy(const BooleanFunctionTable& f,
                            const std::vector<double>& mu_x,
                            const std::vector<double>& mu_y) {
  return gram_renyi2_entropy(phase_gram(f, mu_x, mu_y));
}

double phase_entropy_full(const BooleanFunctionTable& f,
                          const std::vector<double>& mu_x,
                          const std::vector<double>& mu_y) {
  // rho on Y R_Y = sum_x muX(x) |phi_x><phi_x| with
  // |phi_x> = sum_y (-1)^{f(x,y)} sqrt(muY(y)) |y y>.
  const std::size_t dy = f.y_dim();
  const std::size_t dim = dy * dy;
  ComplexMatrix rho(dim, dim);
  for (std::size_t x = 0; x < f.x_dim(); ++x) {
    for (std::size_t y = 0; y < dy; ++y)
      for (std::size_t yp = 0; yp < dy; ++yp) {
        const double ay = (f.at(x, y) ? -1.0 : 1.0) * std::sqrt(mu_y[y]);
        const double ayp = (f.at(x, yp) ? -1.0 : 1.0) * std::sqrt(mu_y[yp]);
        rho.at(y * dy + y, yp * dy + yp) += mu_x[x] * ay * ayp;
      }
  }
  return von_neumann_entropy(rho);
}

QuantumProtocol send_x_protocol(const BooleanFunctionTable& f) {
  const std::size_t dx = f.x_dim();
  const std::size_t dy = f.y_dim();
  QuantumProtocol p;
  p.x_dim = dx;
  p.y_dim = dy;

  Round send;
  send.owner = Party::alice;
  send.iso.in_regs = {"X"};
  send.iso.out_regs = {{"X", dx}, {"C0", dx}};
  ComplexMatrix copy(dx * dx, dx);
  for (std::size_t x = 0; x < dx; ++x) copy.at(x * dx + x, x) = cplx(1.0, 0.0);
  send.iso.matrix = std::move(copy);
  send.message = "C0";
  send.controls = {"X"};
  p.rounds.push_back(std::move(send));

  Round eval;
  eval.owner = Party::bob;
  eval.iso.in_regs = {"Y", "C0"};
  eval.iso.out_regs = {{"Y", dy}, {"C0", dx}, {"BOUT", 2}};
  ComplexMatrix m(dy * dx * 2, dy * dx);
  for (std::size_t y = 0; y < dy; ++y)
    for (std::size_t c = 0; c < dx; ++c) {
      const std::size_t in = y * dx + c;
      m.at(in * 2 + f.at(c, y), in) = cplx(1.0, 0.0);
    }
  eval.iso.matrix = std::move(m);
  eval.controls = {"Y", "C0"};
  p.rounds.push_back(std::move(eval));

  p.bob_outputs = {"BOUT"};
  return p;
}

LowerBoundReport qic_lower_bound_check(const QuantumProtocol& p,
                                       const BooleanFunctionTable& f,
                                       const std::vector<double>& mu_x,
                                       const std::vector<double>& mu_y) {
  std::vector<double> joint(f.x_dim() * f.y_dim());
  for (std::size_t x = 0; x < f.x_dim(); ++x)
    for (std::size_t y = 0; y < f.y_dim(); ++y)
      joint[x * f.y_dim() + y] = mu_x[x] * mu_y[y];
  const InputDistribution mu(f.x_dim(), f.y_dim(), std::move(joint));
  if (protocol_error(p, f.as_function(), mu, true) > 1e-10)
    throw ContractError("qic_lower_bound_check requires a zero-error protocol");
  LowerBoundReport rep;
  rep.bound = phase_entropy(f, mu_x, mu_y);
  rep.qic = qic(run_trace(p, mu)).total();
  rep.holds = rep.qic >= rep.bound - 1e-8;
  rep.tight = std::abs(rep.qic - rep.bound) <= 1e-8;
  return rep;
}

RandomFunctionReport random_function_experiment(std::size_t n,
                                                std::size_t samples,
                                                std::uint64_t seed) {
  if (n > 6)
    throw ArgumentError("random_function_experiment capped at n = 6");
  const auto start = std::chrono::steady_clock::now();
  RandomFunctionReport rep;
  rep.n = n;
  rep.samples = samples;
  rep.seed = seed;
  rep.delta = 1.0 / std::sqrt(double(n));
  const std::vector<double> uni_x(std::size_t(1) << n,
                                  1.0 / double(std::size_t(1) << n));
  rep.ordering_ok = true;
  std::size_t violations = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng(seed, s);  // independent stream per sample
    const BooleanFunctionTable f = random_boolean_function(n, rng);
    const double h2 = renyi2_phase_entropy(f, uni_x, uni_x);
    const double h = phase_entropy(f, uni_x, uni_x);
    rep.h2_values.push_back(h2);
    rep.h_values.push_back(h);
    if (!(h2 <= h + 1e-9 && h <= double(n) + 1e-9)) rep.ordering_ok = false;
    if (h2 < (1.0 - rep.delta) * double(n)) ++violations;
  }
  rep.empirical_violation =
      samples ? double(violations) / double(samples) : 0.0;
  const double factor = std::pow(2.0, rep.delta * double(n)) - 1.0;
  rep.tail_bound = std::exp(-factor * factor / 2.0);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rep;
}

std::string RandomFunctionReport::summary() const {
  std::ostringstream os;
  os.precision(9);
  os << std::fixed;
  double h2_min = 0.0, h2_mean = 0.0;
  if (!h2_values.empty()) {
    h2_min = h2_values[0];
    for (double v : h2_values) {
      h2_min = std::min(h2_min, v);
      h2_mean += v;
    }
    h2_mean /= double(h2_values.size());
  }
  os << "n=" << n << " samples=" << samples << " seed=" << seed
     << " h2_min=" << h2_min << " h2_mean=" << h2_mean
     << " delta=" << delta << " empirical_violation=" << empirical_violation
     << " tail_bound=" << tail_bound
     << " ordering_ok=" << (ordering_ok ? "true" : "false");
  return os.str();
}

namespace {

InputDistribution mix_distributions(const InputDistribution& a,
                                    const InputDistribution& b, double p) {
  std::vector<double> m(a.probabilities().size());
  for (std::size_t i = 0; i < m.size(); ++i)
    m[i] = p * a.probabilities()[i] + (1.0 - p) * b.probabilities()[i];
  return InputDistribution(a.x_dim(), a.y_dim(), std::move(m));
}

void require_no_forget(const QuantumProtocol& p) {
  const NoForgetReport nf = no_forget_certify(p, {});
  if (!nf.certified)
    throw ContractError("protocol is not no-forget certified: " + nf.detail);
}

}  // namespace

QuasiConvexityReport quasi_convexity_check(const QuantumProtocol& p,
                                           const InputDistribution& mu_a,
                                           const InputDistribution& mu_b,
                                           double mix_p) {
  require_no_forget(p);
  QuasiConvexityReport rep;
  const double qa = qic(run_trace(p, mu_a)).total();
  const double qb = qic(run_trace(p, mu_b)).total();
  rep.lower = mix_p * qa + (1.0 - mix_p) * qb;
  rep.mid = qic(run_trace(p, mix_distributions(mu_a, mu_b, mix_p))).total();
  rep.upper = rep.lower + binary_entropy(mix_p);
  rep.holds =
      rep.lower <= rep.mid + 1e-8 && rep.mid <= rep.upper + 1e-8;
  return rep;
}

AppendixReport appendix_inequality_suite(const QuantumProtocol& p,
                                         const InputDistribution& mu) {
  require_no_forget(p);
  if (mu.x_dim() != 2 || mu.y_dim() != 2)
    throw ArgumentError("appendix_inequality_suite expects an AND-sized "
                        "input space");
  AppendixReport rep;
  rep.w = mu.at(1, 1);
  if (rep.w > 0.5 + 1e-12)
    throw ArgumentError("mass on (1,1) must be at most 1/2");

  std::vector<double> p0 = mu.probabilities();
  p0[3] = 0.0;
  if (rep.w < 1.0) {
    for (double& v : p0) v /= (1.0 - rep.w);
  }
  const InputDistribution mu0(2, 2, std::move(p0));
  rep.qic_mu = qic(run_trace(p, mu)).total();
  rep.qic_mu0 = qic(run_trace(p, mu0)).total();
  rep.binary_term = binary_entropy(rep.w);
  rep.mass_shift_holds = rep.qic_mu <= rep.qic_mu0 + rep.binary_term + 1e-8;

  // Quasi-convexity sandwich along mu = (1-w) mu0 + w delta_(1,1).
  const InputDistribution delta11 = InputDistribution::point_mass(2, 2, 1, 1);
  const double q_delta = qic(run_trace(p, delta11)).total();
  rep.convex_lower = (1.0 - rep.w) * rep.qic_mu0 + rep.w * q_delta;
  rep.qic_mix = rep.qic_mu;
  rep.convex_upper = rep.convex_lower + binary_entropy(1.0 - rep.w);
  rep.quasi_convexity_holds = rep.convex_lower <= rep.qic_mix + 1e-8 &&
                              rep.qic_mix <= rep.convex_upper + 1e-8;
  return rep;
}

}  // namespace qicost
