#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "morpho/io.hpp"
#include "morpho/svg_plot.hpp"

using namespace morpho;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("morpho_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string config_error_key(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("doubles round-trip through text") {
    for (double v : {0.1, 1.0 / 3.0, 14.092645048549164, 1e-300, -2.5e17}) {
      CHECK(std::stod(format_double(v)) == v);
    }
  }

  TEST_CASE("phenotype round trip") {
    const Phenotype ph = quadcopter_baseline();
    CHECK(phenotype_from_json(to_json(ph)) == ph);
  }

  TEST_CASE("genotype round trip") {
    const Genotype g = quadcopter_baseline_genotype();
    CHECK(genotype_from_json(to_json(g)) == g);
  }

  TEST_CASE("design must hold exactly one of phenotype or genotype") {
    json both;
    both["phenotype"] = to_json(quadcopter_baseline());
    both["genotype"] = to_json(quadcopter_baseline_genotype());
    CHECK_THROWS_AS(parse_design(both), ConfigError);
    CHECK_THROWS_AS(parse_design(json::object()), ConfigError);
  }

  TEST_CASE("phenotype validation") {
    json j = to_json(quadcopter_baseline());
    j["props"][0]["direction"] = "sideways";
    CHECK_THROWS_AS(phenotype_from_json(j), ConfigError);
    j = to_json(quadcopter_baseline());
    j["props"].erase(j["props"].begin());
    j["props"].erase(j["props"].begin());
    CHECK_THROWS_AS(phenotype_from_json(j), ConfigError);
  }

  TEST_CASE("design files are collision-resolved on load") {
    Phenotype ph = quadcopter_baseline();
    for (auto& p : ph.props) p.arm_length = 0.05;
    const fs::path dir = scratch_dir("design");
    save_design(dir / "d.json", ph, PhysicalParams{});
    const Design d = load_design(dir / "d.json");
    CHECK(d.phenotype.scale_applied > 1.0);
  }

  TEST_CASE("run config keys") {
    json j;
    j["pop_size"] = 20;
    j["generations"] = 5;
    j["k_f"] = 3e-6;
    const EvolutionConfig c = config_from_json(j);
    CHECK(c.pop_size == 20);
    CHECK(c.generations == 5);
    CHECK(c.params.k_f == 3e-6);
    CHECK(c.mutation_rate == 0.2);

    CHECK(config_error_key(json{{"mutation_rate", 1.5}}) == "mutation_rate");
    CHECK(config_error_key(json{{"bogus", 1}}) == "bogus");
    CHECK(config_error_key(json{{"pop_size", "many"}}) == "pop_size");
    CHECK(config_error_key(json{{"m_fc", -1.0}}) == "m_fc");
  }

  TEST_CASE("missing files raise I/O errors") {
    CHECK_THROWS_AS(load_design("/nonexistent/design.json"), IoError);
    CHECK_THROWS_AS(load_front("/nonexistent/run"), IoError);
  }

  TEST_CASE("run directory round trip and CSV layout") {
    EvolutionConfig c;
    c.pop_size = 12;
    c.generations = 2;
    c.threads = 1;
    const RunRecord r = evolve(c);
    const fs::path dir = scratch_dir("run");
    write_run(dir, r, 0.5);
    for (const char* f : {"manifest.json", "generations.jsonl", "population.json", "front.json"}) {
      CHECK(fs::exists(dir / f));
    }
    const auto front = load_front(dir);
    REQUIRE(front.size() == r.front.size());
    for (std::size_t k = 0; k < front.size(); ++k) {
      const auto& ind = r.population[r.front[k]];
      CHECK(front[k].genotype == ind.genotype);
      CHECK(front[k].objectives == ind.objectives);
    }
    const std::string csv = front_csv(front);
    CHECK(csv.rfind("id,n_props,alpha,lambda,size,hover_class,g0,", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == front.size() + 1);
    CHECK(load_run_params(dir).k_f == c.params.k_f);
  }

  TEST_CASE("svg scatter") {
    CHECK(parse_axis("lambda") == Axis::Lambda);
    CHECK_FALSE(parse_axis("mass").has_value());
    ObjectiveVector o;
    o.alpha = 3.0;
    o.lambda = 100.0;
    o.size = 0.05;
    const std::string svg = scatter_svg({{o, 6}}, Axis::Lambda, Axis::Alpha, o);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
}
