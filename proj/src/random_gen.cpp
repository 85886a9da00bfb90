#include "qicost/random_gen.hpp"

#include <algorithm>
#include <cmath>

#include "qicost/error.hpp"

namespace qicost {

namespace {

// Modified Gram-Schmidt on the columns of a Gaussian matrix.
ComplexMatrix orthonormal_columns(std::size_t rows, std::size_t cols,
                                  Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<cplx> v(rows);
    for (std::size_t i = 0; i < rows; ++i)
      v[i] = cplx(rng.next_gaussian(), rng.next_gaussian());
    for (std::size_t prev = 0; prev < j; ++prev) {
      cplx dot(0.0, 0.0);
      for (std::size_t i = 0; i < rows; ++i)
        dot += std::conj(m.at(i, prev)) * v[i];
      for (std::size_t i = 0; i < rows; ++i) v[i] -= dot * m.at(i, prev);
    }
    double norm = 0.0;
    for (const cplx& a : v) norm += std::norm(a);
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = v[i] / norm;
  }
  return m;
}

}  // namespace

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  return orthonormal_columns(dim, dim, rng);
}

ComplexMatrix random_isometry(std::size_t dout, std::size_t din, Rng& rng) {
  if (dout < din) throw ArgumentError("isometry needs dout >= din");
  return orthonormal_columns(dout, din, rng);
}

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    m.at(i, i) = cplx(rng.next_gaussian(), 0.0);
    for (std::size_t j = i + 1; j < dim; ++j) {
      const cplx v(rng.next_gaussian(), rng.next_gaussian());
      m.at(i, j) = v;
      m.at(j, i) = std::conj(v);
    }
  }
  return m;
}

ComplexMatrix random_density_matrix(std::size_t dim, Rng& rng) {
  ComplexMatrix a(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      a.at(i, j) = cplx(rng.next_gaussian(), rng.next_gaussian());
  ComplexMatrix rho = a * a.adjoint();
  const double tr = rho.trace().real();
  return rho * cplx(1.0 / tr, 0.0);
}

PureState random_pure_state(const RegisterSystem& sys, Rng& rng) {
  std::vector<cplx> amp(sys.total_dim());
  double norm = 0.0;
  for (cplx& a : amp) {
    a = cplx(rng.next_gaussian(), rng.next_gaussian());
    norm += std::norm(a);
  }
  norm = std::sqrt(norm);
  for (cplx& a : amp) a /= norm;
  return PureState(sys, std::move(amp));
}

InputDistribution random_distribution(std::size_t x_dim, std::size_t y_dim,
                                      Rng& rng) {
  std::vector<double> p(x_dim * y_dim);
  double sum = 0.0;
  for (double& v : p) {
    v = rng.next_double() + 1e-3;
    sum += v;
  }
  for (double& v : p) v /= sum;
  return InputDistribution(x_dim, y_dim, std::move(p));
}

InputDistribution random_product_distribution(std::size_t x_dim,
                                              std::size_t y_dim, Rng& rng) {
  std::vector<double> px(x_dim), py(y_dim);
  double sx = 0.0, sy = 0.0;
  for (double& v : px) {
    v = rng.next_double() + 1e-3;
    sx += v;
  }
  for (double& v : py) {
    v = rng.next_double() + 1e-3;
    sy += v;
  }
  std::vector<double> p(x_dim * y_dim);
  for (std::size_t x = 0; x < x_dim; ++x)
    for (std::size_t y = 0; y < y_dim; ++y)
      p[x * y_dim + y] = (px[x] / sx) * (py[y] / sy);
  return InputDistribution(x_dim, y_dim, std::move(p));
}

QuantumProtocol random_protocol(const ProtocolGenOptions& opt, Rng& rng) {
  QuantumProtocol p;
  p.x_dim = opt.x_dim;
  p.y_dim = opt.y_dim;

  std::vector<std::pair<std::string, std::size_t>> alice_regs, bob_regs;
  if (opt.with_entanglement && rng.next_bool()) {
    RegisterSystem ent({{"TA", 2}, {"TB", 2}});
    p.entanglement = random_pure_state(ent, rng);
    p.alice_entanglement = {"TA"};
    p.bob_entanglement = {"TB"};
    alice_regs.push_back({"TA", 2});
    bob_regs.push_back({"TB", 2});
  }

  const std::size_t n_rounds = 1 + rng.next_below(opt.max_rounds);
  std::string transit;
  std::size_t transit_dim = 0;
  std::size_t fresh = 0;
  bool x_alive = true, y_alive = true;

  for (std::size_t i = 0; i <= n_rounds; ++i) {
    const bool is_final = (i == n_rounds);
    const Party owner = (i % 2 == 0) ? Party::alice : Party::bob;
    auto& mine = owner == Party::alice ? alice_regs : bob_regs;
    const std::string input = owner == Party::alice ? "X" : "Y";
    const std::size_t input_dim =
        owner == Party::alice ? opt.x_dim : opt.y_dim;
    bool& input_alive = owner == Party::alice ? x_alive : y_alive;

    Round round;
    round.owner = owner;

    // Consume the incoming message plus a random subset of holdings.
    std::vector<std::pair<std::string, std::size_t>> consumed;
    if (!transit.empty()) {
      consumed.push_back({transit, transit_dim});
      transit.clear();
    }
    std::vector<std::pair<std::string, std::size_t>> keep;
    for (const auto& reg : mine) {
      if (rng.next_bool())
        consumed.push_back(reg);
      else
        keep.push_back(reg);
    }
    mine = keep;

    const bool touch_input = input_alive && rng.next_double() < 0.7;
    std::size_t din = 1;
    for (const auto& [n, d] : consumed) {
      round.iso.in_regs.push_back(n);
      din *= d;
    }

    std::size_t dout = 1;
    if (!is_final) {
      const std::string msg = "M" + std::to_string(fresh++);
      round.iso.out_regs.push_back({msg, opt.message_dim});
      dout *= opt.message_dim;
      round.message = msg;
      transit = msg;
      transit_dim = opt.message_dim;
    }
    // Workspace register sized to keep dout >= din.
    std::size_t wdim = opt.workspace_dim;
    while (dout * wdim < din) wdim *= 2;
    if (din > 1 || dout > 1 || !is_final) {
      const std::string work = "W" + std::to_string(fresh++);
      round.iso.out_regs.push_back({work, wdim});
      dout *= wdim;
      mine.push_back({work, wdim});
    }
    if (round.iso.out_regs.empty()) {
      // Degenerate final round acting on nothing.
      const std::string work = "W" + std::to_string(fresh++);
      round.iso.out_regs.push_back({work, 1});
      dout = 1;
      mine.push_back({work, 1});
    }

    if (touch_input) {
      // Input register participates; safe protocols keep it as a control.
      if (opt.safe) {
        round.iso.in_regs.insert(round.iso.in_regs.begin(), input);
        std::vector<RegisterLabel> outs = {{input, input_dim}};
        for (const auto& r : round.iso.out_regs) outs.push_back(r);
        round.iso.out_regs = outs;
        round.controls = {input};
        ComplexMatrix m(input_dim * dout, input_dim * din);
        for (std::size_t v = 0; v < input_dim; ++v) {
          const ComplexMatrix block = random_isometry(dout, din, rng);
          for (std::size_t o = 0; o < dout; ++o)
            for (std::size_t c = 0; c < din; ++c)
              m.at(v * dout + o, v * din + c) = block.at(o, c);
        }
        round.iso.matrix = std::move(m);
      } else {
        round.iso.in_regs.insert(round.iso.in_regs.begin(), input);
        din *= input_dim;
        input_alive = false;  // the input content is absorbed into the round
        while (dout < din) {
          // Grow the workspace until the isometry fits.
          auto& w = round.iso.out_regs.back();
          dout = dout / w.dim;
          w.dim *= 2;
          dout *= w.dim;
          mine.back().second = w.dim;
        }
        round.iso.matrix = random_isometry(dout, din, rng);
      }
    } else {
      round.iso.matrix = random_isometry(dout, din, rng);
    }
    p.rounds.push_back(std::move(round));
  }
  return p;
}

InteractiveProcess random_process(const ProcessGenOptions& opt, Rng& rng) {
  const std::size_t d = opt.reg_dim;
  InteractiveProcess proc;
  RegisterSystem sys({{"A", d}, {"B", d}, {"E", d}, {"F", d}});
  proc.initial = random_pure_state(sys, rng);
  proc.alice_regs = {"A"};
  proc.bob_regs = {"B"};
  proc.e_regs = {"E"};
  proc.f_regs = {"F"};

  const std::size_t rounds = 1 + rng.next_below(opt.max_rounds);
  std::string a_mem = "A", b_mem = "B";
  std::size_t a_dim = d, b_dim = d;
  std::string in_c, in_d;
  std::size_t in_c_dim = 0, in_d_dim = 0;
  std::size_t fresh = 0;

  for (std::size_t i = 0; i < rounds; ++i) {
    ProcessRound pr;
    const bool a_sends = rng.next_double() < 0.8;
    const bool b_sends = rng.next_double() < 0.8;

    {
      std::size_t din = a_dim;
      pr.alice.in_regs = {a_mem};
      if (!in_d.empty()) {
        pr.alice.in_regs.push_back(in_d);
        din *= in_d_dim;
      }
      const std::string mem = "A" + std::to_string(fresh);
      std::size_t dout = d;
      pr.alice.out_regs = {{mem, d}};
      if (a_sends) {
        const std::string msg = "C" + std::to_string(fresh);
        pr.alice.out_regs.push_back({msg, d});
        dout *= d;
        pr.alice_message = msg;
      }
      while (dout < din) {
        pr.alice.out_regs[0].dim *= 2;
        dout *= 2;
      }
      pr.alice.matrix = random_isometry(dout, din, rng);
      a_mem = mem;
      a_dim = pr.alice.out_regs[0].dim;
    }
    {
      std::size_t din = b_dim;
      pr.bob.in_regs = {b_mem};
      if (!in_c.empty()) {
        pr.bob.in_regs.push_back(in_c);
        din *= in_c_dim;
      }
      const std::string mem = "B" + std::to_string(fresh);
      std::size_t dout = d;
      pr.bob.out_regs = {{mem, d}};
      if (b_sends) {
        const std::string msg = "D" + std::to_string(fresh);
        pr.bob.out_regs.push_back({msg, d});
        dout *= d;
        pr.bob_message = msg;
      }
      while (dout < din) {
        pr.bob.out_regs[0].dim *= 2;
        dout *= 2;
      }
      pr.bob.matrix = random_isometry(dout, din, rng);
      b_mem = mem;
      b_dim = pr.bob.out_regs[0].dim;
    }
    in_c = pr.alice_message ? *pr.alice_message : "";
    in_c_dim = d;
    in_d = pr.bob_message ? *pr.bob_message : "";
    in_d_dim = d;
    ++fresh;
    proc.rounds.push_back(std::move(pr));
  }
  return proc;
}

ClassicalProtocol random_classical_protocol(const ClassicalGenOptions& opt,
                                            Rng& rng) {
  ClassicalProtocol pi;
  pi.x_dim = opt.x_dim;
  pi.y_dim = opt.y_dim;
  if (opt.allow_public_coin && rng.next_bool()) {
    const double q = 0.25 + 0.5 * rng.next_double();
    pi.public_coin = FiniteDistribution({q, 1.0 - q});
  }
  const std::size_t rounds = 1 + rng.next_below(opt.max_rounds);

  // One fresh binary coin per coin round; the two coin variables collect
  // independent per-round coordinates.
  std::vector<std::size_t> alice_coin_rounds, bob_coin_rounds;
  std::vector<bool> is_coin_round(rounds, false);
  for (std::size_t i = 0; i < rounds; ++i)
    if (rng.next_double() < opt.coin_round_prob) {
      is_coin_round[i] = true;
      if (i % 2 == 0)
        alice_coin_rounds.push_back(i);
      else
        bob_coin_rounds.push_back(i);
    }
  auto coin_dist = [&](std::size_t n) {
    std::vector<double> p(std::size_t(1) << n, 0.0);
    // Independent biased bits.
    std::vector<double> bias(n);
    for (double& b : bias) b = 0.25 + 0.5 * rng.next_double();
    for (std::size_t v = 0; v < p.size(); ++v) {
      double prob = 1.0;
      for (std::size_t k = 0; k < n; ++k)
        prob *= ((v >> (n - 1 - k)) & 1) ? bias[k] : 1.0 - bias[k];
      p[v] = prob;
    }
    return FiniteDistribution(p);
  };
  pi.alice_coin = coin_dist(alice_coin_rounds.size());
  pi.bob_coin = coin_dist(bob_coin_rounds.size());

  for (std::size_t i = 0; i < rounds; ++i) {
    ClassicalRound round;
    round.owner = (i % 2 == 0) ? Party::alice : Party::bob;
    round.alphabet = opt.alphabet;
    const bool alice = round.owner == Party::alice;
    const std::size_t input = alice ? pi.x_dim : pi.y_dim;
    const std::size_t coin = alice ? pi.alice_coin.size() : pi.bob_coin.size();
    const std::size_t tdim = pi.transcript_dim(i);
    round.table.resize(input * coin * pi.public_coin.size() * tdim);

    // Which bit of the coin variable belongs to this round (if any).
    const auto& coin_rounds = alice ? alice_coin_rounds : bob_coin_rounds;
    std::size_t coin_bit = coin_rounds.size();
    for (std::size_t k = 0; k < coin_rounds.size(); ++k)
      if (coin_rounds[k] == i) coin_bit = k;

    // Deterministic base table; one designated view forwards the coin.
    std::vector<std::size_t> base(input * pi.public_coin.size() * tdim);
    for (auto& v : base) v = rng.next_below(opt.alphabet);
    const std::size_t coin_view =
        is_coin_round[i] ? rng.next_below(base.size()) : base.size();

    for (std::size_t u = 0; u < input; ++u)
      for (std::size_t s = 0; s < coin; ++s)
        for (std::size_t r = 0; r < pi.public_coin.size(); ++r)
          for (std::size_t t = 0; t < tdim; ++t) {
            const std::size_t view = (u * pi.public_coin.size() + r) * tdim + t;
            std::size_t m = base[view];
            if (view == coin_view && coin_bit < coin_rounds.size()) {
              const std::size_t bit =
                  (s >> (coin_rounds.size() - 1 - coin_bit)) & 1;
              m = bit % opt.alphabet;
            }
            round.table[((u * coin + s) * pi.public_coin.size() + r) * tdim +
                        t] = m;
          }
    pi.rounds.push_back(std::move(round));
  }

  if (opt.with_outputs) {
    const std::size_t tfull = pi.transcript_dim(pi.rounds.size());
    pi.bob_output.dim = 2;
    pi.bob_output.table.resize(pi.y_dim * pi.bob_coin.size() *
                               pi.public_coin.size() * tfull);
    std::vector<std::size_t> base(pi.y_dim * pi.public_coin.size() * tfull);
    for (auto& v : base) v = rng.next_below(2);
    for (std::size_t u = 0; u < pi.y_dim; ++u)
      for (std::size_t s = 0; s < pi.bob_coin.size(); ++s)
        for (std::size_t r = 0; r < pi.public_coin.size(); ++r)
          for (std::size_t t = 0; t < tfull; ++t)
            pi.bob_output
                .table[((u * pi.bob_coin.size() + s) * pi.public_coin.size() +
                        r) *
                           tfull +
                       t] = base[(u * pi.public_coin.size() + r) * tfull + t];
  }
  validate_classical(pi);
  return pi;
}

ReversibleProtocol random_reversible_protocol(const ReversibleGenOptions& opt,
                                              Rng& rng) {
  ReversibleProtocol rp;
  rp.x_dim = opt.x_dim;
  rp.y_dim = opt.y_dim;
  if (opt.with_coins) {
    const double qa = 0.25 + 0.5 * rng.next_double();
    const double qb = 0.25 + 0.5 * rng.next_double();
    rp.alice_coin = FiniteDistribution({qa, 1.0 - qa});
    rp.bob_coin = FiniteDistribution({qb, 1.0 - qb});
  }

  auto random_perm = [&](std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i-- > 1;) {
      const std::size_t j = rng.next_below(i + 1);
      std::swap(p[i], p[j]);
    }
    return p;
  };

  std::vector<std::size_t> amem = {rp.x_dim, rp.alice_coin.size(),
                                   rp.public_coin.size()};
  std::vector<std::size_t> bmem = {rp.y_dim, rp.bob_coin.size(),
                                   rp.public_coin.size()};
  std::size_t incoming = 1;
  for (std::size_t k = 0; k <= opt.rounds; ++k) {
    const bool alice = (k % 2 == 0);
    const bool final_circuit = (k == opt.rounds);
    auto& mem = alice ? amem : bmem;
    ReversibleCircuit c;
    c.in_dims = mem;
    if (incoming > 1) c.in_dims.push_back(incoming);
    std::size_t total = 1;
    for (std::size_t dv : c.in_dims) total *= dv;
    c.msg_dim = final_circuit ? 1 : opt.msg_dim;
    // Memory splits into registers of the message dimension when possible.
    std::size_t mem_total = total / c.msg_dim;
    c.out_mem_dims.clear();
    std::size_t rest = mem_total;
    while (rest % opt.msg_dim == 0 && rest > 1) {
      c.out_mem_dims.push_back(opt.msg_dim);
      rest /= opt.msg_dim;
    }
    if (rest > 1) c.out_mem_dims.push_back(rest);
    if (c.out_mem_dims.empty()) c.out_mem_dims.push_back(1);
    c.perm = random_perm(total);
    mem = c.out_mem_dims;
    incoming = c.msg_dim;
    rp.circuits.push_back(std::move(c));
  }
  if (!rp.circuits.empty()) {
    rp.alice_output_regs = {0};
    rp.bob_output_regs = {0};
  }
  validate_reversible(rp);
  return rp;
}

}  // namespace qicost
