#pragma once

#include <memory>
#include <optional>
#include <string>

#include "anholo/cli/config.hpp"
#include "anholo/clocksim.hpp"
#include "anholo/floquet.hpp"
#include "anholo/models.hpp"

namespace anholo::cli {

/// A kicked model built from config, with the passage endpoints.
struct ModelSetup {
  std::string model;
  /// Dense system; absent only for clock problems too large to store.
  std::shared_ptr<const FloquetSystem> system;
  std::shared_ptr<const KickedMap> map;
  CVector initial;
  CVector target;
};

/// Gate list in the documented circuit JSON format.
ClockCircuit parse_circuit(int n, const Json& gates);
Json circuit_to_json(const ClockCircuit& circuit);

/// Reads {"h0": matrix, "v": vector}; entries are numbers or [re, im].
std::pair<CMatrix, CVector> load_matrix_file(const std::string& path);

FairGroverParams fair_params(const Json& config);

/// model in {two_level, grover_optimal, grover_fair, clocksim, custom}.
ModelSetup build_model(const Json& config);

}  // namespace anholo::cli
