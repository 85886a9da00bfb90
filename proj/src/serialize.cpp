#include "qicost/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qicost/error.hpp"

namespace qicost {

using nlohmann::json;

namespace {

json complex_to_json(const cplx& v) { return json::array({v.real(), v.imag()}); }

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError("complex entries must be [re, im] pairs");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (const cplx& v : m.data()) rows.push_back(complex_to_json(v));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

ComplexMatrix matrix_from_json(const json& j) {
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  const auto& entries = j.at("entries");
  if (entries.size() != rows * cols)
    throw ParseError("matrix entry count mismatch");
  std::vector<cplx> data;
  data.reserve(entries.size());
  for (const auto& e : entries) data.push_back(complex_from_json(e));
  return ComplexMatrix(rows, cols, std::move(data));
}

json dist_to_json(const FiniteDistribution& d) { return json(d.p); }

FiniteDistribution dist_from_json(const json& j) {
  if (j.is_null()) return FiniteDistribution();
  return FiniteDistribution(j.get<std::vector<double>>());
}

json output_to_json(const OutputFunction& fn) {
  return json{{"dim", fn.dim}, {"table", fn.table}};
}

OutputFunction output_from_json(const json& j) {
  OutputFunction fn;
  if (j.is_null()) return fn;
  fn.dim = j.at("dim").get<std::size_t>();
  fn.table = j.at("table").get<std::vector<std::size_t>>();
  return fn;
}

// Every defect found while reading a file surfaces as a ParseError, whether
// it is a JSON syntax problem or a semantic validation failure.
template <typename Fn>
auto guarded(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

}  // namespace

std::string to_json_string(const InputDistribution& mu) {
  json rows = json::array();
  for (std::size_t x = 0; x < mu.x_dim(); ++x) {
    json row = json::array();
    for (std::size_t y = 0; y < mu.y_dim(); ++y) row.push_back(mu.at(x, y));
    rows.push_back(row);
  }
  return json{{"x_dim", mu.x_dim()}, {"y_dim", mu.y_dim()}, {"p", rows}}
      .dump(2);
}

InputDistribution distribution_from_json(const std::string& text) {
  return guarded("distribution file", [&] {
    const json j = json::parse(text);
    const std::size_t xd = j.at("x_dim").get<std::size_t>();
    const std::size_t yd = j.at("y_dim").get<std::size_t>();
    std::vector<double> p;
    for (const auto& row : j.at("p"))
      for (const auto& v : row) p.push_back(v.get<double>());
    return InputDistribution(xd, yd, std::move(p));
  });
}

std::string to_json_string(const QuantumProtocol& p) {
  json j;
  j["x_dim"] = p.x_dim;
  j["y_dim"] = p.y_dim;
  j["custom_order"] = p.custom_order;
  json ent;
  json regs = json::array();
  for (const auto& r : p.entanglement.system().registers())
    regs.push_back(json{{"name", r.name}, {"dim", r.dim}});
  ent["registers"] = regs;
  ent["alice"] = p.alice_entanglement;
  ent["bob"] = p.bob_entanglement;
  json amps = json::array();
  for (const cplx& a : p.entanglement.amplitudes())
    amps.push_back(complex_to_json(a));
  ent["amplitudes"] = amps;
  j["entanglement"] = ent;
  json rounds = json::array();
  for (const auto& round : p.rounds) {
    json r;
    r["owner"] = party_name(round.owner);
    r["in"] = round.iso.in_regs;
    json outs = json::array();
    for (const auto& reg : round.iso.out_regs)
      outs.push_back(json{{"name", reg.name}, {"dim", reg.dim}});
    r["out"] = outs;
    r["matrix"] = matrix_to_json(round.iso.matrix);
    r["reverse"] = round.iso.reverse;
    if (round.message) r["message"] = *round.message;
    r["controls"] = round.controls;
    rounds.push_back(r);
  }
  j["rounds"] = rounds;
  j["alice_outputs"] = p.alice_outputs;
  j["bob_outputs"] = p.bob_outputs;
  return j.dump(2);
}

QuantumProtocol protocol_from_json(const std::string& text) {
  return guarded("protocol file", [&] {
    const json j = json::parse(text);
    QuantumProtocol p;
    p.x_dim = j.at("x_dim").get<std::size_t>();
    p.y_dim = j.at("y_dim").get<std::size_t>();
    p.custom_order = j.value("custom_order", false);
    if (j.contains("entanglement") && !j["entanglement"].is_null()) {
      const json& ent = j["entanglement"];
      std::vector<RegisterLabel> regs;
      for (const auto& r : ent.at("registers"))
        regs.push_back({r.at("name").get<std::string>(),
                        r.at("dim").get<std::size_t>()});
      std::vector<cplx> amps;
      for (const auto& a : ent.at("amplitudes"))
        amps.push_back(complex_from_json(a));
      p.entanglement = PureState(RegisterSystem(std::move(regs)),
                                 std::move(amps));
      p.alice_entanglement = ent.value("alice", std::vector<std::string>{});
      p.bob_entanglement = ent.value("bob", std::vector<std::string>{});
    }
    for (const auto& r : j.at("rounds")) {
      Round round;
      const std::string owner = r.at("owner").get<std::string>();
      if (owner == "alice")
        round.owner = Party::alice;
      else if (owner == "bob")
        round.owner = Party::bob;
      else
        throw ParseError("unknown round owner " + owner);
      round.iso.in_regs = r.at("in").get<std::vector<std::string>>();
      for (const auto& reg : r.at("out"))
        round.iso.out_regs.push_back({reg.at("name").get<std::string>(),
                                      reg.at("dim").get<std::size_t>()});
      round.iso.matrix = matrix_from_json(r.at("matrix"));
      round.iso.reverse = r.value("reverse", false);
      if (r.contains("message") && !r["message"].is_null())
        round.message = r["message"].get<std::string>();
      round.controls = r.value("controls", std::vector<std::string>{});
      p.rounds.push_back(std::move(round));
    }
    p.alice_outputs = j.value("alice_outputs", std::vector<std::string>{});
    p.bob_outputs = j.value("bob_outputs", std::vector<std::string>{});
    return p;
  });
}

std::string to_json_string(const ClassicalProtocol& pi) {
  json j;
  j["type"] = "classical";
  j["x_dim"] = pi.x_dim;
  j["y_dim"] = pi.y_dim;
  j["public_coin"] = dist_to_json(pi.public_coin);
  j["alice_coin"] = dist_to_json(pi.alice_coin);
  j["bob_coin"] = dist_to_json(pi.bob_coin);
  json rounds = json::array();
  for (const auto& round : pi.rounds)
    rounds.push_back(json{{"owner", party_name(round.owner)},
                          {"alphabet", round.alphabet},
                          {"table", round.table}});
  j["rounds"] = rounds;
  if (!pi.alice_output.trivial()) j["alice_output"] = output_to_json(pi.alice_output);
  if (!pi.bob_output.trivial()) j["bob_output"] = output_to_json(pi.bob_output);
  return j.dump(2);
}

std::string to_json_string(const ReversibleProtocol& rp) {
  json j;
  j["type"] = "reversible";
  j["x_dim"] = rp.x_dim;
  j["y_dim"] = rp.y_dim;
  j["public_coin"] = dist_to_json(rp.public_coin);
  j["alice_coin"] = dist_to_json(rp.alice_coin);
  j["bob_coin"] = dist_to_json(rp.bob_coin);
  json circuits = json::array();
  for (const auto& c : rp.circuits)
    circuits.push_back(json{{"in_dims", c.in_dims},
                            {"out_mem_dims", c.out_mem_dims},
                            {"msg_dim", c.msg_dim},
                            {"n_ancillas", c.n_ancillas},
                            {"perm", c.perm}});
  j["circuits"] = circuits;
  j["alice_output_regs"] = rp.alice_output_regs;
  j["bob_output_regs"] = rp.bob_output_regs;
  return j.dump(2);
}

ClassicalFile classical_from_json(const std::string& text) {
  return guarded("classical protocol file", [&]() -> ClassicalFile {
    const json j = json::parse(text);
    const std::string type = j.value("type", "classical");
    ClassicalFile out;
    if (type == "classical") {
      ClassicalProtocol pi;
      pi.x_dim = j.at("x_dim").get<std::size_t>();
      pi.y_dim = j.at("y_dim").get<std::size_t>();
      pi.public_coin = dist_from_json(j.value("public_coin", json()));
      pi.alice_coin = dist_from_json(j.value("alice_coin", json()));
      pi.bob_coin = dist_from_json(j.value("bob_coin", json()));
      for (const auto& r : j.at("rounds")) {
        ClassicalRound round;
        const std::string owner = r.at("owner").get<std::string>();
        round.owner = owner == "alice" ? Party::alice : Party::bob;
        round.alphabet = r.at("alphabet").get<std::size_t>();
        round.table = r.at("table").get<std::vector<std::size_t>>();
        pi.rounds.push_back(std::move(round));
      }
      pi.alice_output = output_from_json(j.value("alice_output", json()));
      pi.bob_output = output_from_json(j.value("bob_output", json()));
      validate_classical(pi);
      out.classical = std::move(pi);
    } else if (type == "reversible") {
      ReversibleProtocol rp;
      rp.x_dim = j.at("x_dim").get<std::size_t>();
      rp.y_dim = j.at("y_dim").get<std::size_t>();
      rp.public_coin = dist_from_json(j.value("public_coin", json()));
      rp.alice_coin = dist_from_json(j.value("alice_coin", json()));
      rp.bob_coin = dist_from_json(j.value("bob_coin", json()));
      for (const auto& c : j.at("circuits")) {
        ReversibleCircuit circ;
        circ.in_dims = c.at("in_dims").get<std::vector<std::size_t>>();
        circ.out_mem_dims = c.at("out_mem_dims").get<std::vector<std::size_t>>();
        circ.msg_dim = c.value("msg_dim", std::size_t(1));
        circ.n_ancillas = c.value("n_ancillas", std::size_t(0));
        if (c.contains("perm")) {
          circ.perm = c.at("perm").get<std::vector<std::size_t>>();
        } else if (c.contains("gates")) {
          GateCircuit gc;
          gc.n_bits = c.at("gates").at("n_bits").get<std::size_t>();
          for (const auto& g : c.at("gates").at("list")) {
            GateCircuit::Gate gate;
            gate.kind = g.at(0).get<std::string>();
            for (std::size_t k = 1; k < g.size(); ++k)
              gate.wires.push_back(g.at(k).get<std::size_t>());
            gc.gates.push_back(std::move(gate));
          }
          circ.perm = compile_gates(gc);
        } else {
          throw ParseError("circuit needs either perm or gates");
        }
        rp.circuits.push_back(std::move(circ));
      }
      rp.alice_output_regs =
          j.value("alice_output_regs", std::vector<std::size_t>{});
      rp.bob_output_regs =
          j.value("bob_output_regs", std::vector<std::size_t>{});
      validate_reversible(rp);
      out.reversible = std::move(rp);
    } else {
      throw ParseError("unknown classical file type " + type);
    }
    return out;
  });
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ArgumentError("cannot write " + path);
  f << text;
}

std::string load_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ArgumentError("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace qicost
