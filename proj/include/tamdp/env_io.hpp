#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "tamdp/environments.hpp"
#include "tamdp/mdp.hpp"

namespace tamdp {

/// Environment spec files are JSON objects with a "format" key.
///
/// Table form:
///   {"format": "table", "name": ..., "states": [names], "actions": [names],
///    "start": state, "terminals": [states],
///    "transitions": [{"state": s, "action": a,
///                     "outcomes": [{"next": s', "prob": p, "reward": r}]}],
///    "objectives": [...]}
/// States and actions are referenced by name.
///
/// Grid form:
///   {"format": "grid", "name": ..., "width": W, "height": H, "start": [x, y],
///    "goals": [{"name": ..., "cell": [x, y], "reward": r}],
///    "step_reward": [W*H values, row-major], "slip_prob": p, "objectives": [...]}
///
/// Objectives are either a name ("f1".."f9") or an object with a "kind" key
/// (see Objective's to_json). A missing "objectives" key means f1..f9.
nlohmann::json mdp_to_json(const TaMdp& env);
TaMdp mdp_from_json(const nlohmann::json& j);

nlohmann::json grid_to_json(const GridSpec& spec);
GridSpec grid_from_json(const nlohmann::json& j);

/// A loaded spec file. `grid` is set for grid-form files.
struct EnvFile {
  TaMdp mdp;
  std::optional<GridSpec> grid;
};

EnvFile env_from_json(const nlohmann::json& j);
EnvFile load_env(const std::filesystem::path& path);
void save_env(const std::filesystem::path& path, const TaMdp& env);
void save_env(const std::filesystem::path& path, const GridSpec& spec);

/// "paper_grid" and "circular" name the built-in environments; anything else
/// is read as a spec file.
EnvFile resolve_env(const std::string& name_or_path);

}  // namespace tamdp
