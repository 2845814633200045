#include "tamdp/env_io.hpp"

#include <fstream>

namespace tamdp {

using nlohmann::json;

namespace {

std::vector<Objective> objectives_from(const json& j) {
  if (!j.contains("objectives")) return benchmark_objectives();
  return j.at("objectives").get<std::vector<Objective>>();
}

std::size_t index_of(const std::vector<std::string>& names, const json& ref, const char* what) {
  const auto name = ref.get<std::string>();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  throw Error(std::string("unknown ") + what + " '" + name + "'");
}

Cell cell_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("cells are written as [x, y]");
  return {j[0].get<int>(), j[1].get<int>()};
}

void write_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

json mdp_to_json(const TaMdp& env) {
  json terminals = json::array();
  for (StateId s : env.terminals()) terminals.push_back(env.state_name(s));
  json transitions = json::array();
  for (StateId s = 0; s < env.num_states(); ++s) {
    for (ActionId a : env.actions(s)) {
      json outs = json::array();
      for (const auto& o : env.outcomes(s, a))
        outs.push_back({{"next", env.state_name(o.next)}, {"prob", o.prob}, {"reward", o.reward}});
      transitions.push_back({{"state", env.state_name(s)}, {"action", env.action_name(a)}, {"outcomes", outs}});
    }
  }
  return {{"format", "table"},
          {"name", env.name()},
          {"states", env.state_names()},
          {"actions", env.action_names()},
          {"start", env.state_name(env.start_state())},
          {"terminals", terminals},
          {"transitions", transitions},
          {"objectives", env.objectives()}};
}

TaMdp mdp_from_json(const json& j) {
  try {
    const auto states = j.at("states").get<std::vector<std::string>>();
    const auto actions = j.at("actions").get<std::vector<std::string>>();
    TaMdpBuilder b(states, actions);
    b.name(j.value("name", std::string("table")));
    b.start(static_cast<StateId>(index_of(states, j.at("start"), "state")));
    for (const auto& t : j.at("terminals")) b.terminal(static_cast<StateId>(index_of(states, t, "state")));
    for (const auto& row : j.at("transitions")) {
      std::vector<Outcome> outs;
      for (const auto& o : row.at("outcomes"))
        outs.push_back({static_cast<StateId>(index_of(states, o.at("next"), "state")), o.at("prob").get<double>(),
                        o.at("reward").get<double>()});
      b.transition(static_cast<StateId>(index_of(states, row.at("state"), "state")),
                   static_cast<ActionId>(index_of(actions, row.at("action"), "action")), std::move(outs));
    }
    b.objectives(objectives_from(j));
    return b.build();
  } catch (const json::exception& e) {
    throw Error(std::string("malformed table spec: ") + e.what());
  }
}

json grid_to_json(const GridSpec& spec) {
  json goals = json::array();
  for (const auto& g : spec.goals)
    goals.push_back({{"name", g.name}, {"cell", {g.cell.x, g.cell.y}}, {"reward", g.reward}});
  return {{"format", "grid"},
          {"name", spec.name},
          {"width", spec.width},
          {"height", spec.height},
          {"start", {spec.start.x, spec.start.y}},
          {"goals", goals},
          {"step_reward", spec.step_reward},
          {"slip_prob", spec.slip_prob},
          {"objectives", spec.objectives}};
}

GridSpec grid_from_json(const json& j) {
  try {
    GridSpec spec;
    spec.name = j.value("name", std::string("grid"));
    spec.width = j.at("width").get<int>();
    spec.height = j.at("height").get<int>();
    spec.start = cell_from(j.at("start"));
    for (const auto& g : j.at("goals"))
      spec.goals.push_back({g.at("name").get<std::string>(), cell_from(g.at("cell")), g.at("reward").get<double>()});
    spec.step_reward = j.at("step_reward").get<std::vector<double>>();
    spec.slip_prob = j.at("slip_prob").get<double>();
    spec.objectives = objectives_from(j);
    return spec;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed grid spec: ") + e.what());
  }
}

EnvFile env_from_json(const json& j) {
  const auto format = j.value("format", std::string("table"));
  if (format == "grid") {
    GridSpec spec = grid_from_json(j);
    TaMdp mdp = build_grid(spec);
    return {std::move(mdp), std::move(spec)};
  }
  if (format == "table") return {mdp_from_json(j), std::nullopt};
  throw Error("unknown spec format '" + format + "'");
}

EnvFile load_env(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return env_from_json(j);
}

void save_env(const std::filesystem::path& path, const TaMdp& env) { write_file(path, mdp_to_json(env)); }

void save_env(const std::filesystem::path& path, const GridSpec& spec) { write_file(path, grid_to_json(spec)); }

EnvFile resolve_env(const std::string& name_or_path) {
  if (name_or_path == "paper_grid") {
    GridSpec spec = paper_grid_spec();
    TaMdp mdp = build_grid(spec);
    return {std::move(mdp), std::move(spec)};
  }
  if (name_or_path == "circular") return {build_circular(), std::nullopt};
  return load_env(name_or_path);
}

}  // namespace tamdp
