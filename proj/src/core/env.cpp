#include "core/env.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <utility>

#include "core/errors.hpp"

namespace uail {

using nlohmann::json;

Rat FiniteStateEnv::step_mass(int32_t state, int32_t action,
                              int32_t percept) const {
  for (const auto& tr : rows[state][action])
    if (tr.percept == percept) return tr.prob;
  return Rat(0);
}

int32_t FiniteStateEnv::next_state(int32_t state, int32_t action,
                                   int32_t percept) const {
  for (const auto& tr : rows[state][action])
    if (tr.percept == percept) return tr.next_state;
  return -1;
}

Rat FiniteStateEnv::total_mass(int32_t state, int32_t action) const {
  Rat total = 0;
  for (const auto& tr : rows[state][action]) total += tr.prob;
  return total;
}

bool EnvClass::all_measures() const {
  for (const auto& env : members)
    for (size_t s = 0; s < env.rows.size(); ++s)
      for (size_t a = 0; a < actions.size(); ++a)
        if (env.total_mass(s, a) != 1) return false;
  return true;
}

int32_t EnvClass::action_index(const std::string& name_) const {
  for (size_t i = 0; i < actions.size(); ++i)
    if (actions[i] == name_) return static_cast<int32_t>(i);
  throw SchemaError("unknown action '" + name_ + "' in class " + name);
}

int32_t EnvClass::percept_index(const std::string& obs,
                                const Rat& reward) const {
  for (size_t i = 0; i < percepts.size(); ++i)
    if (percepts[i].obs == obs && percepts[i].reward == reward)
      return static_cast<int32_t>(i);
  throw SchemaError("unknown percept (" + obs + ", " + rat_str(reward) +
                    ") in class " + name);
}

void EnvClass::validate() const {
  if (members.empty()) throw SchemaError("class has no members");
  if (members.size() != weights.size())
    throw SchemaError("member/weight count mismatch");
  if (actions.empty()) throw SchemaError("class declares no actions");
  if (percepts.empty()) throw SchemaError("class declares no percepts");
  std::set<std::string> action_set(actions.begin(), actions.end());
  if (action_set.size() != actions.size())
    throw SchemaError("duplicate action names");
  for (size_t i = 0; i < percepts.size(); ++i) {
    if (percepts[i].reward < 0 || percepts[i].reward > 1)
      throw SchemaError("reward outside [0,1] for percept " +
                        std::to_string(i));
    for (size_t j = i + 1; j < percepts.size(); ++j)
      if (percepts[i] == percepts[j]) throw SchemaError("duplicate percept");
  }
  Rat weight_sum = 0;
  for (const auto& w : weights) {
    if (w <= 0) throw SchemaError("prior weights must be positive");
    weight_sum += w;
  }
  if (weight_sum > 1) throw SchemaError("prior weights sum to more than 1");
  for (const auto& env : members) {
    if (env.rows.empty()) throw SchemaError("member has no states");
    if (env.state_names.size() != env.rows.size())
      throw SchemaError("state name/row mismatch in " + env.name);
    for (size_t s = 0; s < env.rows.size(); ++s) {
      if (env.rows[s].size() != actions.size())
        throw SchemaError("state lacks a row per action in " + env.name);
      for (size_t a = 0; a < actions.size(); ++a) {
        Rat total = 0;
        for (const auto& tr : env.rows[s][a]) {
          if (tr.percept < 0 ||
              tr.percept >= static_cast<int32_t>(percepts.size()))
            throw SchemaError("transition references unknown percept");
          if (tr.next_state < 0 ||
              tr.next_state >= static_cast<int32_t>(env.rows.size()))
            throw SchemaError("transition references unknown state");
          if (tr.prob <= 0)
            throw SchemaError("transition probabilities must be positive");
          total += tr.prob;
        }
        if (total > 1)
          throw SchemaError("one-step masses exceed 1 in " + env.name +
                            " state " + env.state_names[s] + " action " +
                            actions[a]);
      }
    }
  }
}

Belief Belief::initial(const EnvClass& cls) {
  Belief b;
  b.states.assign(cls.members.size(), 0);
  b.masses = cls.weights;
  return b;
}

void Belief::advance(const EnvClass& cls, int32_t action, int32_t percept) {
  for (size_t i = 0; i < cls.members.size(); ++i) {
    if (masses[i] == 0) continue;
    const auto& env = cls.members[i];
    const Rat p = env.step_mass(states[i], action, percept);
    if (p == 0) {
      masses[i] = 0;
      continue;
    }
    masses[i] *= p;
    states[i] = env.next_state(states[i], action, percept);
  }
}

Rat Belief::total() const {
  Rat t = 0;
  for (const auto& m : masses) t += m;
  return t;
}

Belief fold_history(const EnvClass& cls, const History& h) {
  Belief b = Belief::initial(cls);
  for (const auto& step : h) {
    if (step.action < 0 || step.action >= static_cast<int32_t>(cls.n_actions()))
      throw SchemaError("history action index out of range");
    if (step.percept < 0 ||
        step.percept >= static_cast<int32_t>(cls.n_percepts()))
      throw SchemaError("history percept index out of range");
    b.advance(cls, step.action, step.percept);
  }
  return b;
}

std::vector<Rat> mixture_step(const EnvClass& cls, const Belief& b,
                              int32_t action) {
  const Rat total = b.total();
  std::vector<Rat> out(cls.n_percepts(), Rat(0));
  if (total == 0) return out;
  for (size_t i = 0; i < cls.members.size(); ++i) {
    if (b.masses[i] == 0) continue;
    for (const auto& tr : cls.members[i].rows[b.states[i]][action])
      out[tr.percept] += b.masses[i] * tr.prob;
  }
  for (auto& v : out) v /= total;
  return out;
}

std::vector<Rat> mixture_step(const EnvClass& cls, const History& h,
                              int32_t action) {
  return mixture_step(cls, fold_history(cls, h), action);
}

std::vector<Rat> normalize_step(const std::vector<Rat>& step) {
  Rat total = 0;
  for (const auto& v : step) total += v;
  if (total == 0) throw DeadEndError("one-step map has zero total mass");
  std::vector<Rat> out = step;
  for (auto& v : out) v /= total;
  return out;
}

std::vector<Rat> posterior_weights(const EnvClass& cls, const History& h) {
  const Belief b = fold_history(cls, h);
  const Rat total = b.total();
  if (total == 0) throw ZeroEvidenceError("history has zero mixture mass");
  std::vector<Rat> out = b.masses;
  for (auto& v : out) v /= total;
  return out;
}

Rat joint_mass(const EnvClass& cls, const History& h, int32_t member) {
  const Belief b = fold_history(cls, h);
  if (member >= 0) return b.masses[member];
  return b.total();
}

uint64_t seed_rng(uint64_t seed) { return seed + 0x9E3779B97F4A7C15ull; }

namespace {

// splitmix64: tiny, portable, and fully determined by the passed state.
uint64_t next_u64(uint64_t& state) {
  uint64_t z = state;
  state = z + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Rat u64_to_unit(uint64_t r) {
  mpz_class num(static_cast<unsigned long>(r >> 32));
  num <<= 32;
  num += static_cast<unsigned long>(r & 0xFFFFFFFFull);
  mpz_class den = 1;
  den <<= 64;
  return Rat(num, den);
}

}  // namespace

std::optional<int32_t> sample_percept(const EnvClass& cls, int32_t member,
                                      int32_t state, int32_t action,
                                      uint64_t& rng_state) {
  const Rat u = u64_to_unit(next_u64(rng_state));
  Rat cum = 0;
  for (const auto& tr : cls.members[member].rows[state][action]) {
    cum += tr.prob;
    if (u < cum) return tr.percept;
  }
  return std::nullopt;  // halting mass
}

namespace {

FiniteStateEnv single_state_env(std::string name, size_t n_actions) {
  FiniteStateEnv env;
  env.name = std::move(name);
  env.state_names = {"s0"};
  env.rows.resize(1);
  env.rows[0].resize(n_actions);
  return env;
}

}  // namespace

EnvClass example1_class() {
  EnvClass cls;
  cls.name = "example1";
  cls.actions = {"alpha", "beta"};
  cls.percepts = {{"0", Rat(0)}, {"1", Rat(0)}};

  FiniteStateEnv nu1 = single_state_env("nu1", 2);
  nu1.rows[0][0] = {{0, Rat(1, 10), 0}};  // alpha/0/0.1
  nu1.rows[0][1] = {{0, Rat(1, 2), 0}};   // beta/0/0.5

  FiniteStateEnv nu2 = single_state_env("nu2", 2);
  nu2.rows[0][0] = {{1, Rat(1, 10), 0}};  // alpha/1/0.1
  nu2.rows[0][1] = {{0, Rat(1, 2), 0}};   // beta/0/0.5

  cls.members = {std::move(nu1), std::move(nu2)};
  cls.weights = {Rat(1, 2), Rat(1, 2)};
  cls.validate();
  return cls;
}

EnvClass bandit2_class() {
  EnvClass cls;
  cls.name = "bandit2";
  cls.actions = {"alpha", "beta"};
  cls.percepts = {{"0", Rat(1)},
                  {"0", Rat(0)},
                  {"1", Rat(0)},
                  {"2", Rat(1, 2)}};

  // Measures, so the information value is exactly the expected information
  // gain. alpha identifies the member through the observation; under nu1 it
  // pays 1 with probability 3/5. At the uniform prior the mixture expects
  // only 3/10 from alpha versus 1/2 from beta, so a pure exploiter stays on
  // beta and never learns which member is real.
  FiniteStateEnv nu1 = single_state_env("nu1", 2);
  nu1.rows[0][0] = {{0, Rat(3, 5), 0}, {1, Rat(2, 5), 0}};
  nu1.rows[0][1] = {{3, Rat(1), 0}};

  FiniteStateEnv nu2 = single_state_env("nu2", 2);
  nu2.rows[0][0] = {{2, Rat(1), 0}};
  nu2.rows[0][1] = {{3, Rat(1), 0}};

  cls.members = {std::move(nu1), std::move(nu2)};
  cls.weights = {Rat(1, 2), Rat(1, 2)};
  cls.validate();
  return cls;
}

EnvClass machine_derived_class(const Machine& machine, uint32_t max_len,
                               uint64_t budget, uint32_t horizon) {
  if (max_len > 16) throw ResourceLimitError("machine class length cap is 16");
  EnvClass cls;
  cls.name = "machine:" + machine.id() + ":len=" + std::to_string(max_len);
  cls.actions = {"0", "1"};
  cls.percepts = {{"0", Rat(0)}, {"1", Rat(1)}};

  // Fixed-length programs keep the Kraft weights an antichain: at most 2^L
  // members, total weight at most 1. A program's output bits form an
  // action-conditioned table (bit 2t+a answers action a at step t); the
  // table ends, i.e. the environment halts, where the output runs out.
  const uint64_t count = 1ull << max_len;
  for (uint64_t mask = 0; mask < count; ++mask) {
    Bits p;
    for (uint32_t j = 0; j < max_len; ++j)
      p.push_back(static_cast<uint8_t>((mask >> (max_len - 1 - j)) & 1));
    const ExecutionOutcome out = machine.run(p, budget, 2 * horizon);
    const uint32_t steps =
        std::min<uint32_t>(horizon, static_cast<uint32_t>(out.output.size() / 2));
    if (steps == 0) continue;
    FiniteStateEnv env;
    env.name = "p" + p.str();
    env.state_names.resize(steps + 1);
    env.rows.resize(steps + 1);
    for (uint32_t s = 0; s <= steps; ++s) {
      env.state_names[s] = "t" + std::to_string(s);
      env.rows[s].resize(2);
      if (s == steps) continue;  // table exhausted: halts for every action
      for (int32_t a = 0; a < 2; ++a) {
        const uint8_t bit = out.output.at(2 * s + a);
        env.rows[s][a] = {
            {static_cast<int32_t>(bit), Rat(1), static_cast<int32_t>(s + 1)}};
      }
    }
    cls.members.push_back(std::move(env));
    cls.weights.push_back(pow2_neg(max_len));
  }
  if (cls.members.empty())
    throw SchemaError("no program of length " + std::to_string(max_len) +
                      " yields a usable table within the budget");
  cls.validate();
  return cls;
}

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw SchemaError("unknown key '" + it.key() + "' in " + where);
}

std::string require_string(const json& j, const std::string& key,
                           const std::string& where) {
  if (!j.contains(key) || !j[key].is_string())
    throw SchemaError("missing string '" + key + "' in " + where);
  return j[key].get<std::string>();
}

}  // namespace

EnvClass env_class_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("class file must be a JSON object");
  reject_unknown_keys(j, {"name", "actions", "percepts", "members"}, "class");

  EnvClass cls;
  cls.name = require_string(j, "name", "class");
  if (!j.contains("actions") || !j["actions"].is_array())
    throw SchemaError("missing array 'actions'");
  for (const auto& a : j["actions"]) cls.actions.push_back(a.get<std::string>());

  const bool explicit_percepts = j.contains("percepts");
  if (explicit_percepts) {
    for (const auto& p : j["percepts"]) {
      reject_unknown_keys(p, {"obs", "reward"}, "percept");
      cls.percepts.push_back(
          {require_string(p, "obs", "percept"),
           parse_rat(require_string(p, "reward", "percept"))});
    }
  }

  if (!j.contains("members") || !j["members"].is_array())
    throw SchemaError("missing array 'members'");
  for (const auto& m : j["members"]) {
    reject_unknown_keys(m, {"name", "weight", "states", "transitions"},
                        "member");
    FiniteStateEnv env;
    env.name = require_string(m, "name", "member");
    cls.weights.push_back(parse_rat(require_string(m, "weight", "member")));
    if (!m.contains("states") || !m["states"].is_array() ||
        m["states"].empty())
      throw SchemaError("member '" + env.name + "' needs a state list");
    for (const auto& s : m["states"])
      env.state_names.push_back(s.get<std::string>());
    env.rows.resize(env.state_names.size());
    for (auto& row : env.rows) row.resize(cls.actions.size());

    auto state_index = [&](const std::string& s) -> int32_t {
      for (size_t i = 0; i < env.state_names.size(); ++i)
        if (env.state_names[i] == s) return static_cast<int32_t>(i);
      throw SchemaError("unknown state '" + s + "' in member " + env.name);
    };

    if (!m.contains("transitions") || !m["transitions"].is_array())
      throw SchemaError("member '" + env.name + "' needs transitions");
    for (const auto& t : m["transitions"]) {
      reject_unknown_keys(
          t, {"state", "action", "obs", "reward", "prob", "next"},
          "transition");
      const std::string obs = require_string(t, "obs", "transition");
      const Rat reward = parse_rat(require_string(t, "reward", "transition"));
      const Percept percept{obs, reward};
      int32_t pi = -1;
      for (size_t i = 0; i < cls.percepts.size(); ++i)
        if (cls.percepts[i] == percept) pi = static_cast<int32_t>(i);
      if (pi < 0) {
        if (explicit_percepts)
          throw SchemaError("transition percept (" + obs + ", " +
                            rat_str(reward) + ") not in the percept table");
        cls.percepts.push_back(percept);
        pi = static_cast<int32_t>(cls.percepts.size() - 1);
      }
      int32_t action = -1;
      const std::string action_name = require_string(t, "action", "transition");
      for (size_t i = 0; i < cls.actions.size(); ++i)
        if (cls.actions[i] == action_name) action = static_cast<int32_t>(i);
      if (action < 0)
        throw SchemaError("unknown action '" + action_name + "' in member " +
                          env.name);
      env.rows[state_index(require_string(t, "state", "transition"))][action]
          .push_back({pi, parse_rat(require_string(t, "prob", "transition")),
                      state_index(require_string(t, "next", "transition"))});
    }
    cls.members.push_back(std::move(env));
  }
  cls.validate();
  return cls;
}

std::string env_class_to_json(const EnvClass& cls) {
  json j;
  j["name"] = cls.name;
  j["actions"] = cls.actions;
  j["percepts"] = json::array();
  for (const auto& p : cls.percepts)
    j["percepts"].push_back({{"obs", p.obs}, {"reward", rat_str(p.reward)}});
  j["members"] = json::array();
  for (size_t i = 0; i < cls.members.size(); ++i) {
    const auto& env = cls.members[i];
    json m;
    m["name"] = env.name;
    m["weight"] = rat_str(cls.weights[i]);
    m["states"] = env.state_names;
    m["transitions"] = json::array();
    for (size_t s = 0; s < env.rows.size(); ++s)
      for (size_t a = 0; a < env.rows[s].size(); ++a)
        for (const auto& tr : env.rows[s][a])
          m["transitions"].push_back(
              {{"state", env.state_names[s]},
               {"action", cls.actions[a]},
               {"obs", cls.percepts[tr.percept].obs},
               {"reward", rat_str(cls.percepts[tr.percept].reward)},
               {"prob", rat_str(tr.prob)},
               {"next", env.state_names[tr.next_state]}});
    j["members"].push_back(std::move(m));
  }
  return j.dump(2);
}

EnvClass load_env_class(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) {
    const std::string which = spec.substr(8);
    if (which == "example1") return example1_class();
    if (which == "bandit2") return bandit2_class();
    throw SchemaError("unknown builtin class '" + which + "'");
  }
  if (spec.rfind("machine:", 0) == 0) {
    std::string rest = spec.substr(8);
    const auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw SchemaError("machine class spec needs :len=<L>");
    const std::string machine_id = rest.substr(0, colon);
    uint32_t len = 0, horizon = 8;
    std::string params = rest.substr(colon + 1);
    while (!params.empty()) {
      const auto next = params.find(':');
      const std::string tok = params.substr(0, next);
      if (tok.rfind("len=", 0) == 0)
        len = static_cast<uint32_t>(std::stoul(tok.substr(4)));
      else if (tok.rfind("horizon=", 0) == 0)
        horizon = static_cast<uint32_t>(std::stoul(tok.substr(8)));
      else
        throw SchemaError("bad machine class parameter '" + tok + "'");
      if (next == std::string::npos) break;
      params = params.substr(next + 1);
    }
    if (len == 0) throw SchemaError("machine class spec needs :len=<L>");
    const auto machine = make_machine(machine_id);
    return machine_derived_class(*machine, len, 4096, horizon);
  }
  FILE* f = std::fopen(spec.c_str(), "rb");
  if (!f) throw SchemaError("cannot open class file '" + spec + "'");
  std::string text;
  char buf[4096];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) text.append(buf, n);
  std::fclose(f);
  return env_class_from_json(text);
}

}  // namespace uail
