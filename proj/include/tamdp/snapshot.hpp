#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "tamdp/episode.hpp"

namespace tamdp {

/// "ige", "nse" or "tqlearn" for the agents of this library.
std::string algo_name(const Agent& agent);

/// JSON snapshot of an agent: algorithm, action sets, alpha/epsilon and every
/// table. Doubles are written with round-trip precision, so loading a
/// snapshot gives back bitwise-identical tables.
nlohmann::json agent_to_json(const Agent& agent);
std::unique_ptr<Agent> agent_from_json(const nlohmann::json& j);

void save_agent(const std::filesystem::path& path, const Agent& agent);
std::unique_ptr<Agent> load_agent(const std::filesystem::path& path);

}  // namespace tamdp
