#include "driftbandit/config.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "driftbandit/format.hpp"

namespace driftbandit {

ConfigError::ConfigError(std::size_t line, std::string field, const std::string& what)
    : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line),
      field_(std::move(field)) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

struct Cursor {
  std::size_t line;
  std::string key;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(line, key, key + ": " + what);
  }

  template <class T>
  T number(std::string_view text) const {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end) {
      fail("'" + std::string(text) + "' is not a valid number");
    }
    return value;
  }

  std::vector<double> numbers(std::string_view text) const {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(number<double>(item));
    if (out.empty()) fail("needs at least one value");
    return out;
  }

  bool boolean(std::string_view text) const {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    fail("expected true or false");
  }
};

struct Block {
  PolicySpec spec;
  bool labelled = false;
  std::size_t line = 0;
  std::map<std::string, std::size_t> key_lines;
};

std::string field_of(const std::string& message) {
  const auto colon = message.find(": ");
  return colon == std::string::npos ? std::string() : message.substr(0, colon);
}

void check_block(const Block& b) {
  try {
    resolve_options(b.spec);
  } catch (const PolicyConfigError& e) {
    const std::string& field = e.field();
    std::size_t line = b.line;
    if (field.starts_with("policy.")) {
      const auto it = b.key_lines.find(field.substr(7));
      if (it != b.key_lines.end()) line = it->second;
    }
    throw ConfigError(line, field, e.what());
  }
}

std::size_t derived_arms(const EnvSpec& env) {
  switch (env.kind) {
    case EnvKind::kFixed:
      return env.means.size();
    case EnvKind::kSmallChange:
      return 3;
    default:
      return std::max({env.theta.size(), env.r_low.size(), env.r_high.size(),
                       env.sigma2.size(), std::size_t{2}});
  }
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_shortest(v[i]);
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i];
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::optional<EnvKind> kind;
  std::optional<std::size_t> arms;
  std::map<std::string, std::size_t> key_lines;
  std::deque<Block> blocks;  // stable addresses for `current`
  Block* current = nullptr;

  std::size_t line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) {
      if (text.empty()) break;
      continue;
    }
    const auto eq = raw.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, "", "expected 'key = value'");
    }
    const std::string key(trim(raw.substr(0, eq)));
    const std::string_view value = trim(raw.substr(eq + 1));
    const Cursor at{line_no, key};
    if (key.empty()) at.fail("empty key");

    if (key.starts_with("policy.")) {
      const std::string param = key.substr(7);
      if (param == "name") {
        if (!policy_kind(value)) at.fail("unknown policy '" + std::string(value) + "'");
        blocks.push_back(Block{});
        current = &blocks.back();
        current->spec.name = std::string(value);
        current->line = line_no;
        continue;
      }
      if (current == nullptr) at.fail("appears before any policy.name");
      if (param == "label") {
        if (value.empty()) at.fail("must not be empty");
        if (current->labelled) at.fail("given twice in one policy block");
        current->spec.label = std::string(value);
        current->labelled = true;
        continue;
      }
      if (!current->spec.params.emplace(param, std::string(value)).second) {
        at.fail("given twice in one policy block");
      }
      current->key_lines[param] = line_no;
      continue;
    }

    if (key == "policies") {
      for (const auto& name : split_list(value)) {
        if (!policy_kind(name)) at.fail("unknown policy '" + name + "'");
        Block b;
        b.spec.name = name;
        b.line = line_no;
        blocks.push_back(std::move(b));
      }
      current = nullptr;
      continue;
    }

    if (!key_lines.emplace(key, line_no).second) at.fail("given more than once");

    if (key == "env" || key == "env.model") {
      kind = env_kind(value);
      if (!kind) at.fail("unknown environment '" + std::string(value) + "'");
    } else if (key == "env.arms") {
      const auto n = at.number<std::size_t>(value);
      if (n < 1) at.fail("must be at least 1");
      arms = n;
    } else if (key == "env.means") {
      config.env.means = at.numbers(value);
    } else if (key == "env.theta") {
      config.env.theta = at.numbers(value);
    } else if (key == "env.r_low") {
      config.env.r_low = at.numbers(value);
    } else if (key == "env.r_high") {
      config.env.r_high = at.numbers(value);
    } else if (key == "env.sigma2") {
      config.env.sigma2 = at.numbers(value);
    } else if (key == "horizon") {
      config.horizon = at.number<std::int64_t>(value);
      if (config.horizon < 1) at.fail("must be at least 1");
    } else if (key == "replications") {
      config.replications = at.number<std::int64_t>(value);
      if (config.replications < 1) at.fail("must be at least 1");
    } else if (key == "seed") {
      config.seed = at.number<std::uint64_t>(value);
    } else if (key == "threads") {
      config.threads = at.number<std::size_t>(value);
    } else if (key == "steps_every") {
      config.steps_every = at.number<std::int64_t>(value);
      if (config.steps_every < 0) at.fail("must be non-negative");
    } else if (key == "export_trajectories") {
      config.export_trajectories = at.number<std::int64_t>(value);
      if (config.export_trajectories < 0) at.fail("must be non-negative");
    } else if (key == "output_dir") {
      config.output_dir = std::string(value);
    } else if (key == "common_random_numbers") {
      config.common_random_numbers = at.boolean(value);
    } else if (key == "epsilon_grid") {
      config.epsilon_grid = at.numbers(value);
      for (double e : config.epsilon_grid) {
        if (!(e >= 0.0 && e <= 1.0)) at.fail("values must lie in [0,1]");
      }
    } else if (key.starts_with("sweep.")) {
      SweepSpec sweep{key.substr(6), split_list(value)};
      if (sweep.parameter != "eta" && sweep.parameter != "lambda_fixed" &&
          sweep.parameter != "W" && sweep.parameter != "C") {
        at.fail("not a sweepable parameter (eta, lambda_fixed, W, C)");
      }
      if (sweep.values.empty()) at.fail("needs at least one value");
      config.sweeps.push_back(std::move(sweep));
    } else {
      at.fail("unknown key");
    }
  }

  if (!kind) throw ConfigError(0, "env.model", "env.model: missing environment spec");
  config.env.kind = *kind;
  config.env.num_arms = arms.value_or(derived_arms(config.env));
  try {
    validate(config.env);
  } catch (const std::invalid_argument& e) {
    const std::string field = field_of(e.what());
    const auto it = key_lines.find(field);
    throw ConfigError(it == key_lines.end() ? 0 : it->second, field, e.what());
  }

  if (blocks.empty()) throw ConfigError(0, "policy.name", "policy.name: no policies configured");
  std::set<std::string> base_labels;
  for (auto& b : blocks) {
    if (!b.labelled) b.spec.label = b.spec.name;
    base_labels.insert(b.spec.label);
  }
  std::set<std::string> taken;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto& b = blocks[i];
    check_block(b);
    if (taken.count(b.spec.label)) {
      int k = 2;
      auto candidate = [&] { return b.spec.label + "_" + std::to_string(k); };
      while (taken.count(candidate()) || base_labels.count(candidate())) ++k;
      b.spec.label = candidate();
    }
    taken.insert(b.spec.label);
    b.spec.slot = i;
    config.policies.push_back(b.spec);
  }

  try {
    validate(config);
  } catch (const std::invalid_argument& e) {
    const std::string field = field_of(e.what());
    const auto it = key_lines.find(field);
    throw ConfigError(it == key_lines.end() ? 0 : it->second, field, e.what());
  }
  return config;
}

std::string emit_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "env.model = " << env_name(c.env.kind) << '\n';
  out << "env.arms = " << c.env.num_arms << '\n';
  const std::pair<const char*, const std::vector<double>*> lists[] = {
      {"env.means", &c.env.means},   {"env.theta", &c.env.theta},
      {"env.r_low", &c.env.r_low},   {"env.r_high", &c.env.r_high},
      {"env.sigma2", &c.env.sigma2},
  };
  for (const auto& [key, v] : lists) {
    if (!v->empty()) out << key << " = " << join(*v) << '\n';
  }
  out << "horizon = " << c.horizon << '\n';
  out << "replications = " << c.replications << '\n';
  out << "seed = " << c.seed << '\n';
  out << "threads = " << c.threads << '\n';
  out << "steps_every = " << c.steps_every << '\n';
  out << "export_trajectories = " << c.export_trajectories << '\n';
  out << "output_dir = " << c.output_dir << '\n';
  out << "common_random_numbers = " << (c.common_random_numbers ? "true" : "false") << '\n';
  if (!c.epsilon_grid.empty()) out << "epsilon_grid = " << join(c.epsilon_grid) << '\n';
  for (const auto& s : c.sweeps) out << "sweep." << s.parameter << " = " << join(s.values) << '\n';
  for (const auto& p : c.policies) {
    out << '\n' << "policy.name = " << p.name << '\n';
    out << "policy.label = " << p.label << '\n';
    for (const auto& [k, v] : p.params) out << "policy." << k << " = " << v << '\n';
  }
  return out.str();
}

namespace {

PolicySpec entry(std::string name, std::map<std::string, std::string> params = {}) {
  PolicySpec p;
  p.name = name;
  p.label = std::move(name);
  p.params = std::move(params);
  return p;
}

// The eleven policies compared in every scenario preset.
std::vector<PolicySpec> standard_roster() {
  return {entry("eps_greedy"), entry("aff_d_greedy"), entry("ucb"),    entry("aff_ucb1"),
          entry("aff_ucb2"),   entry("d_ucb"),        entry("sw_ucb"), entry("ts"),
          entry("aff_ts"),     entry("ots"),          entry("aff_ots")};
}

std::vector<double> unit_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
  return g;
}

ExperimentConfig scenario(EnvSpec env, std::vector<PolicySpec> policies) {
  ExperimentConfig c;
  c.env = std::move(env);
  c.policies = std::move(policies);
  for (std::size_t i = 0; i < c.policies.size(); ++i) c.policies[i].slot = i;
  return c;
}

ExperimentConfig standard_scenario(EnvSpec env) {
  auto c = scenario(std::move(env), standard_roster());
  c.epsilon_grid = unit_grid();
  return c;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "small-change", "case1",   "case2",          "case3", "case4",
      "large-arms",   "eta-sweep", "baseline-sweep", "dts-c"};
  return names;
}

ExperimentConfig preset(std::string_view name, const PresetOptions& options) {
  if (name == "small-change") return standard_scenario(small_change_scenario());
  if (name.size() == 5 && name.starts_with("case") && name[4] >= '1' && name[4] <= '4') {
    return standard_scenario(scenario_case(name[4] - '0', 2));
  }
  if (name == "large-arms") {
    if (options.arms != 50 && options.arms != 100) {
      throw ConfigError(0, "arms", "arms: large-arms runs use 50 or 100 arms");
    }
    if (options.case_number < 1 || options.case_number > 4) {
      throw ConfigError(0, "case", "case: must be 1-4");
    }
    return standard_scenario(scenario_case(options.case_number, options.arms));
  }
  if (name == "eta-sweep") {
    auto c = scenario(scenario_case(3, 2),
                      {entry("aff_d_greedy"), entry("aff_ucb1"), entry("aff_ucb2"),
                       entry("aff_ts"), entry("aff_ots")});
    c.sweeps.push_back({"eta", {"0.0001", "0.001", "0.01", "0.0001/s2"}});
    return c;
  }
  if (name == "baseline-sweep") {
    auto c = scenario(scenario_case(3, 2), {entry("d_ucb"), entry("sw_ucb")});
    c.sweeps.push_back({"lambda_fixed", {"auto", "0.99", "0.8", "0.5"}});
    c.sweeps.push_back({"W", {"auto", "10", "100", "1000"}});
    return c;
  }
  if (name == "dts-c") {
    auto c = scenario(scenario_case(1, 2), {entry("dts", {{"C", "5"}}),
                                            entry("aff_dts1", {{"C", "5"}}),
                                            entry("aff_dts2", {{"C", "5"}}), entry("aff_ots")});
    c.sweeps.push_back({"C", {"5", "10", "100", "1000"}});
    return c;
  }
  throw ConfigError(0, "preset", "preset: unknown preset '" + std::string(name) + "'");
}

}  // namespace driftbandit
