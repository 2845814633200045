#include "tamdp/snapshot.hpp"

#include <fstream>

#include "tamdp/ige.hpp"
#include "tamdp/nse.hpp"
#include "tamdp/time_q.hpp"

namespace tamdp {

using nlohmann::json;

namespace {

json shape_json(const EnvShape& shape) {
  std::vector<int> terminal(shape.terminal.begin(), shape.terminal.end());
  return {{"actions", shape.actions}, {"terminal", terminal}, {"num_actions", shape.num_actions}};
}

EnvShape shape_from(const json& j) {
  EnvShape shape;
  shape.actions = j.at("actions").get<std::vector<std::vector<ActionId>>>();
  for (int t : j.at("terminal").get<std::vector<int>>()) shape.terminal.push_back(t != 0);
  shape.num_actions = j.at("num_actions").get<std::size_t>();
  if (shape.terminal.size() != shape.actions.size()) throw Error("snapshot: terminal flags do not match states");
  return shape;
}

json table_json(const StateActionTable& t) { return t.values(); }

StateActionTable table_from(const json& j, const EnvShape& shape) {
  StateActionTable t(shape.num_states(), shape.num_actions);
  auto values = j.get<std::vector<double>>();
  if (values.size() != t.values().size()) throw Error("snapshot: table size mismatch");
  t.values() = std::move(values);
  return t;
}

}  // namespace

std::string algo_name(const Agent& agent) {
  if (dynamic_cast<const IgeAgent*>(&agent)) return "ige";
  if (dynamic_cast<const NseAgent*>(&agent)) return "nse";
  if (dynamic_cast<const TimeQAgent*>(&agent)) return "tqlearn";
  throw Error("unknown agent type");
}

json agent_to_json(const Agent& agent) {
  json j{{"format", "tamdp-agent"}, {"version", 1}, {"algo", algo_name(agent)},
         {"alpha", agent.alpha()}, {"epsilon", agent.epsilon()}};
  if (const auto* ige = dynamic_cast<const IgeAgent*>(&agent)) {
    j["shape"] = shape_json(ige->shape());
    json mods = json::array();
    for (const auto& m : ige->modules())
      mods.push_back({{"gamma", m.gamma}, {"q", table_json(m.q)}, {"r_exp", m.r_exp}, {"t_exp", m.t_exp}});
    j["modules"] = std::move(mods);
  } else if (const auto* nse = dynamic_cast<const NseAgent*>(&agent)) {
    j["shape"] = shape_json(nse->shape());
    json mods = json::array();
    for (const auto& m : nse->modules())
      mods.push_back({{"n", m.n}, {"q", table_json(m.q)}, {"r", table_json(m.r)}, {"t", table_json(m.t)}});
    j["modules"] = std::move(mods);
  } else if (const auto* tq = dynamic_cast<const TimeQAgent*>(&agent)) {
    j["shape"] = shape_json(tq->shape());
    j["gamma"] = tq->gamma();
    j["t_max"] = tq->t_max();
    j["num_objectives"] = tq->num_objectives();
    // Only the slices that were ever written.
    json slices = json::array();
    for (std::size_t k = 0; k < tq->slices().size(); ++k)
      for (std::size_t t = 0; t < tq->slices()[k].size(); ++t)
        if (!tq->slices()[k][t].empty()) slices.push_back({{"k", k}, {"t", t}, {"q", tq->slices()[k][t]}});
    j["slices"] = std::move(slices);
  }
  return j;
}

std::unique_ptr<Agent> agent_from_json(const json& j) {
  try {
    if (j.value("format", std::string()) != "tamdp-agent") throw Error("not an agent snapshot");
    const auto algo = j.at("algo").get<std::string>();
    const double alpha = j.at("alpha").get<double>();
    const double epsilon = j.at("epsilon").get<double>();
    EnvShape shape = shape_from(j.at("shape"));
    if (algo == "ige") {
      std::vector<GammaModule> mods;
      for (const auto& m : j.at("modules"))
        mods.push_back({m.at("gamma").get<double>(), table_from(m.at("q"), shape),
                        m.at("r_exp").get<std::vector<double>>(), m.at("t_exp").get<std::vector<double>>()});
      return std::make_unique<IgeAgent>(std::move(shape), std::move(mods), alpha, epsilon);
    }
    if (algo == "nse") {
      std::vector<NStepModule> mods;
      for (const auto& m : j.at("modules"))
        mods.push_back({m.at("n").get<std::size_t>(), table_from(m.at("q"), shape), table_from(m.at("r"), shape),
                        table_from(m.at("t"), shape)});
      return std::make_unique<NseAgent>(std::move(shape), std::move(mods), alpha, epsilon);
    }
    if (algo == "tqlearn") {
      const auto K = j.at("num_objectives").get<std::size_t>();
      const auto t_max = j.at("t_max").get<std::int64_t>();
      auto agent = std::make_unique<TimeQAgent>(shape, K, j.at("gamma").get<double>(), t_max, alpha, epsilon);
      std::vector<std::vector<std::vector<double>>> slices(
          K, std::vector<std::vector<double>>(static_cast<std::size_t>(t_max) + 1));
      for (const auto& sl : j.at("slices")) {
        const auto k = sl.at("k").get<std::size_t>();
        const auto t = sl.at("t").get<std::size_t>();
        if (k >= K || t > static_cast<std::size_t>(t_max)) throw Error("snapshot: slice index out of range");
        slices[k][t] = sl.at("q").get<std::vector<double>>();
      }
      agent->set_slices(std::move(slices));
      return agent;
    }
    throw Error("unknown algorithm '" + algo + "' in snapshot");
  } catch (const json::exception& e) {
    throw Error(std::string("malformed agent snapshot: ") + e.what());
  }
}

void save_agent(const std::filesystem::path& path, const Agent& agent) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << agent_to_json(agent).dump() << '\n';
}

std::unique_ptr<Agent> load_agent(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return agent_from_json(j);
}

}  // namespace tamdp
