#include "morpho/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace morpho {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin, std::string("malformed structured text: ") + e.what());
  }
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key, "expected a number");
  return j.get<double>();
}

std::uint64_t unsigned_integer(const json& j, const std::string& key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
  throw ConfigError(key, "expected a non-negative integer");
}

std::string class_name(const ObjectiveVector& o) {
  return o.invalid ? "invalid" : std::string(to_string(o.hover_class));
}

HoverClass class_from_name(const std::string& s) {
  if (s == "static") return HoverClass::Static;
  if (s == "spinning") return HoverClass::Spinning;
  return HoverClass::None;
}

// Keys shared by the design file params block and the run config file.
bool apply_param_key(PhysicalParams& p, const std::string& key, const json& value) {
  if (key == "fc_dims") {
    if (!value.is_array() || value.size() != 3) throw ConfigError(key, "expected 3 numbers");
    for (std::size_t i = 0; i < 3; ++i) p.fc_dims[i] = number(value[i], key);
    return true;
  }
  double* field = nullptr;
  if (key == "k_f") field = &p.k_f;
  else if (key == "k_m") field = &p.k_m;
  else if (key == "omega_max") field = &p.omega_max;
  else if (key == "m_motor") field = &p.m_motor;
  else if (key == "mu_arm") field = &p.mu_arm;
  else if (key == "m_fc") field = &p.m_fc;
  else if (key == "prop_radius") field = &p.prop_radius;
  else if (key == "clearance_margin") field = &p.clearance_margin;
  else if (key == "g") field = &p.g;
  if (field == nullptr) return false;
  *field = number(value, key);
  return true;
}

void validate_params_named(const PhysicalParams& p) {
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    throw ConfigError(what.substr(0, what.find(' ')), what);
  }
}

json individual_json(std::size_t id, const Individual& ind, const PhysicalParams& params) {
  json j;
  j["id"] = id;
  j["rank"] = ind.rank;
  j["crowding"] = std::isinf(ind.crowding) ? json(nullptr) : json(ind.crowding);
  j["objectives"] = to_json(ind.objectives);
  j["genotype"] = to_json(ind.genotype);
  j["phenotype"] = to_json(decode(ind.genotype, params));
  return j;
}

}  // namespace

json to_json(const PhysicalParams& p) {
  json j;
  j["k_f"] = p.k_f;
  j["k_m"] = p.k_m;
  j["omega_max"] = p.omega_max;
  j["m_motor"] = p.m_motor;
  j["mu_arm"] = p.mu_arm;
  j["m_fc"] = p.m_fc;
  j["fc_dims"] = {p.fc_dims[0], p.fc_dims[1], p.fc_dims[2]};
  j["prop_radius"] = p.prop_radius;
  j["clearance_margin"] = p.clearance_margin;
  j["g"] = p.g;
  return j;
}

PhysicalParams params_from_json(const json& j, PhysicalParams base) {
  if (!j.is_object()) throw ConfigError("params", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!apply_param_key(base, key, value)) throw ConfigError(key, "unknown key");
  }
  validate_params_named(base);
  return base;
}

json to_json(const Phenotype& ph) {
  json j;
  j["count"] = ph.count();
  j["scale_applied"] = ph.scale_applied;
  j["invalid_layout"] = ph.invalid_layout;
  json props = json::array();
  for (const auto& p : ph.props) {
    props.push_back({{"arm_length", p.arm_length},
                     {"arm_angle", p.arm_angle},
                     {"inclination", p.inclination},
                     {"azimuth", p.azimuth},
                     {"direction", p.direction == SpinDirection::CCW ? "CCW" : "CW"}});
  }
  j["props"] = std::move(props);
  return j;
}

Phenotype phenotype_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("phenotype", "expected an object");
  static const std::set<std::string> allowed{"count", "scale_applied", "invalid_layout", "props"};
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError(key, "unknown key");
  }
  if (!j.contains("props") || !j["props"].is_array()) {
    throw ConfigError("props", "expected an array of propellers");
  }
  Phenotype ph;
  if (j.contains("scale_applied")) {
    ph.scale_applied = number(j["scale_applied"], "scale_applied");
    if (!(ph.scale_applied >= 1.0)) throw ConfigError("scale_applied", "must be >= 1");
  }
  static const std::set<std::string> prop_keys{"arm_length", "arm_angle", "inclination",
                                               "azimuth", "direction"};
  for (const auto& pj : j["props"]) {
    if (!pj.is_object()) throw ConfigError("props", "expected propeller objects");
    for (const auto& [key, value] : pj.items()) {
      if (!prop_keys.contains(key)) throw ConfigError(key, "unknown key");
    }
    for (const auto& key : prop_keys) {
      if (!pj.contains(key)) throw ConfigError(key, "missing propeller field");
    }
    PropellerSpec p;
    p.arm_length = number(pj["arm_length"], "arm_length");
    p.arm_angle = number(pj["arm_angle"], "arm_angle");
    p.inclination = number(pj["inclination"], "inclination");
    p.azimuth = number(pj["azimuth"], "azimuth");
    if (!(p.arm_length > 0.0) || !std::isfinite(p.arm_length)) {
      throw ConfigError("arm_length", "must be positive");
    }
    if (!(p.arm_angle >= -180.0 && p.arm_angle <= 180.0)) {
      throw ConfigError("arm_angle", "must lie in [-180, 180] deg");
    }
    // Hand-written designs may tilt up to horizontal; the genotype mapping
    // itself never exceeds 15 deg.
    if (!(p.inclination >= 0.0 && p.inclination <= 90.0)) {
      throw ConfigError("inclination", "must lie in [0, 90] deg");
    }
    if (!(p.azimuth >= -90.0 && p.azimuth <= 90.0)) {
      throw ConfigError("azimuth", "must lie in [-90, 90] deg");
    }
    const json& dir = pj["direction"];
    if (dir == "CCW") p.direction = SpinDirection::CCW;
    else if (dir == "CW") p.direction = SpinDirection::CW;
    else throw ConfigError("direction", "expected \"CCW\" or \"CW\"");
    ph.props.push_back(p);
  }
  if (ph.count() < kMinPropellers || ph.count() > kMaxPropellers) {
    throw ConfigError("props", "propeller count must be between 4 and 8");
  }
  if (j.contains("count") && (!j["count"].is_number_integer() || j["count"].get<int>() != ph.count())) {
    throw ConfigError("count", "does not match the number of propellers");
  }
  return ph;
}

json to_json(const Genotype& g) { return json(g.genes); }

Genotype genotype_from_json(const json& j) {
  if (!j.is_array() || j.size() != kGenotypeLength) {
    throw ConfigError("genotype", "expected an array of 41 numbers");
  }
  Genotype g;
  for (std::size_t i = 0; i < kGenotypeLength; ++i) g.genes[i] = number(j[i], "genotype");
  if (!is_valid(g)) throw ConfigError("genotype", "genes must lie in [-1, 1]");
  return g;
}

json to_json(const ObjectiveVector& o) {
  json j;
  j["alpha"] = o.alpha;
  j["lambda"] = o.lambda;
  j["size"] = o.size;
  j["hover_class"] = class_name(o);
  j["hover_residual"] = o.hover_residual;
  return j;
}

json to_json(const GenerationStats& s) {
  json j;
  j["generation"] = s.generation;
  j["front0_size"] = s.front0_size;
  j["hypervolume"] = s.hypervolume;
  j["alpha"] = {s.alpha_min, s.alpha_max};
  j["lambda"] = {s.lambda_min, s.lambda_max};
  j["size"] = {s.size_min, s.size_max};
  json hist;
  for (std::size_t k = 0; k < s.prop_histogram.size(); ++k) {
    hist[std::to_string(k + kMinPropellers)] = s.prop_histogram[k];
  }
  j["prop_histogram"] = std::move(hist);
  j["tiers"] = {{"static", s.tier_counts[0]},
                {"spinning", s.tier_counts[1]},
                {"none", s.tier_counts[2]},
                {"invalid", s.tier_counts[3]}};
  return j;
}

json to_json(const EvolutionConfig& c) {
  json j;
  j["pop_size"] = c.pop_size;
  j["generations"] = c.generations;
  j["mutation_rate"] = c.mutation_rate;
  j["mutation_sigma"] = c.mutation_sigma;
  j["crossover_rate"] = c.crossover_rate;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["hv_reference_size"] = c.hv_reference_size;
  const json params = to_json(c.params);
  for (const auto& [key, value] : params.items()) j[key] = value;
  return j;
}

Design parse_design(const json& j) {
  if (!j.is_object()) throw ConfigError("design", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "params" && key != "phenotype" && key != "genotype") {
      throw ConfigError(key, "unknown key");
    }
  }
  Design d;
  if (j.contains("params")) d.params = params_from_json(j["params"]);
  const bool has_ph = j.contains("phenotype");
  const bool has_g = j.contains("genotype");
  if (has_ph == has_g) {
    throw ConfigError("design", "exactly one of phenotype or genotype is required");
  }
  if (has_g) {
    d.genotype = genotype_from_json(j["genotype"]);
    d.phenotype = decode(*d.genotype, d.params);
  } else {
    d.phenotype = resolve_collisions(phenotype_from_json(j["phenotype"]), d.params);
  }
  return d;
}

Design load_design(const fs::path& path) {
  return parse_design(parse_json(read_text(path), "design"));
}

void save_design(const fs::path& path, const Phenotype& ph, const PhysicalParams& params) {
  json j;
  j["params"] = to_json(params);
  j["phenotype"] = to_json(ph);
  write_text(path, j.dump(2) + "\n");
}

EvolutionConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected an object");
  EvolutionConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "pop_size") c.pop_size = unsigned_integer(value, key);
    else if (key == "generations") c.generations = unsigned_integer(value, key);
    else if (key == "mutation_rate") c.mutation_rate = number(value, key);
    else if (key == "mutation_sigma") c.mutation_sigma = number(value, key);
    else if (key == "crossover_rate") c.crossover_rate = number(value, key);
    else if (key == "seed") c.seed = unsigned_integer(value, key);
    else if (key == "threads") c.threads = static_cast<unsigned>(unsigned_integer(value, key));
    else if (key == "hv_reference_size") c.hv_reference_size = number(value, key);
    else if (!apply_param_key(c.params, key, value)) throw ConfigError(key, "unknown key");
  }
  validate(c);
  return c;
}

EvolutionConfig load_run_config(const fs::path& path) {
  return config_from_json(parse_json(read_text(path), "config"));
}

json evaluation_report(const Evaluation& ev) {
  json j;
  j["phenotype"] = to_json(ev.phenotype);
  j["objectives"] = to_json(ev.objectives);
  if (ev.objectives.invalid) return j;
  j["eta_hat"] = std::vector<double>(ev.hover.eta_hat.data(),
                                     ev.hover.eta_hat.data() + ev.hover.eta_hat.size());
  j["hover_cost"] = ev.hover.cost;
  j["thrust_residual"] = ev.hover.thrust_residual;
  j["moment_residual"] = ev.hover.moment_residual;
  j["mass"] = ev.mass.total_mass;
  j["cg"] = {ev.mass.cg.x(), ev.mass.cg.y(), ev.mass.cg.z()};
  j["inertia_diagonal"] = {ev.mass.inertia(0, 0), ev.mass.inertia(1, 1), ev.mass.inertia(2, 2)};
  return j;
}

void write_run(const fs::path& dir, const RunRecord& record, double wall_seconds) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const PhysicalParams& params = record.config.params;
  std::string stats;
  for (const auto& s : record.generations) stats += to_json(s).dump() + "\n";
  write_text(dir / "generations.jsonl", stats);

  json pop = json::array();
  for (std::size_t i = 0; i < record.population.size(); ++i) {
    pop.push_back(individual_json(i, record.population[i], params));
  }
  write_text(dir / "population.json", pop.dump(1) + "\n");

  json front = json::array();
  for (const std::size_t i : record.front) {
    front.push_back(individual_json(i, record.population[i], params));
  }
  write_text(dir / "front.json", front.dump(1) + "\n");

  json manifest;
  manifest["config"] = to_json(record.config);
  manifest["seed"] = record.config.seed;
  manifest["generations_completed"] = record.generations.size();
  manifest["initial"] = to_json(record.initial);
  manifest["front_size"] = record.front.size();
  manifest["wall_seconds"] = wall_seconds;
  manifest["files"] = {"generations.jsonl", "population.json", "front.json"};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<FrontEntry> load_front(const fs::path& run_dir) {
  const fs::path path = run_dir / "front.json";
  if (!fs::exists(path)) throw IoError("no front.json in " + run_dir.string());
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw IoError("corrupt front.json: " + std::string(e.what()));
  }
  std::vector<FrontEntry> out;
  for (const auto& item : j) {
    FrontEntry e;
    e.id = item.at("id").get<std::size_t>();
    e.genotype = genotype_from_json(item.at("genotype"));
    e.phenotype = phenotype_from_json(item.at("phenotype"));
    const auto& o = item.at("objectives");
    e.objectives.alpha = o.at("alpha").get<double>();
    e.objectives.lambda = o.at("lambda").get<double>();
    e.objectives.size = o.at("size").get<double>();
    const std::string cls = o.at("hover_class").get<std::string>();
    e.objectives.invalid = cls == "invalid";
    e.objectives.hover_class = class_from_name(cls);
    e.objectives.hover_residual = o.at("hover_residual").get<double>();
    out.push_back(std::move(e));
  }
  return out;
}

PhysicalParams load_run_params(const fs::path& run_dir) {
  const fs::path path = run_dir / "manifest.json";
  if (!fs::exists(path)) throw IoError("no manifest.json in " + run_dir.string());
  const json m = json::parse(read_text(path));
  return config_from_json(m.at("config")).params;
}

std::string front_csv(const std::vector<FrontEntry>& front) {
  std::string out = "id,n_props,alpha,lambda,size,hover_class";
  for (std::size_t i = 0; i < kGenotypeLength; ++i) out += ",g" + std::to_string(i);
  out += "\n";
  for (const auto& e : front) {
    out += std::to_string(e.id) + "," + std::to_string(e.phenotype.count()) + "," +
           format_double(e.objectives.alpha) + "," + format_double(e.objectives.lambda) + "," +
           format_double(e.objectives.size) + "," + class_name(e.objectives);
    for (const double g : e.genotype.genes) out += "," + format_double(g);
    out += "\n";
  }
  return out;
}

json front_json(const std::vector<FrontEntry>& front) {
  json arr = json::array();
  for (const auto& e : front) {
    json j;
    j["id"] = e.id;
    j["n_props"] = e.phenotype.count();
    j["objectives"] = to_json(e.objectives);
    j["genotype"] = to_json(e.genotype);
    j["phenotype"] = to_json(e.phenotype);
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace morpho
