#pragma once

#include <optional>
#include <string>

#include "qicost/classical.hpp"
#include "qicost/protocol.hpp"

namespace qicost {

/// On-disk formats are JSON; complex numbers are [re, im] pairs of decimal
/// literals (shortest round-trip printing, so parse-serialize-parse is
/// entrywise identical), matrices row-major over big-endian register order.

std::string to_json_string(const InputDistribution& mu);
InputDistribution distribution_from_json(const std::string& text);

std::string to_json_string(const QuantumProtocol& p);
QuantumProtocol protocol_from_json(const std::string& text);

std::string to_json_string(const ClassicalProtocol& pi);
std::string to_json_string(const ReversibleProtocol& rp);

/// Classical files carry "type": "classical" or "reversible".
struct ClassicalFile {
  std::optional<ClassicalProtocol> classical;
  std::optional<ReversibleProtocol> reversible;
};
ClassicalFile classical_from_json(const std::string& text);

void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);

}  // namespace qicost
