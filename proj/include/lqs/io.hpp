#pragma once

#include "lqs/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lqs {
namespace io {

// Named scalars substituted into matrix entries of the form "K", "-K" or
// "3*K" when a scenario is instantiated.
using Params = std::map<std::string, double>;

// A model file either carries the physical parameters (annihilation
// representation) or the built system matrices; the matrices are always
// populated on load.
struct ModelFile {
  Rep rep = Rep::Annihilation;
  bool has_parameters = false;
  GeneralModel params;
  Index modes = 0;
  CMat a, b_d, b_f, c_f;
  CMat c_p, d_pd, d_pf;
};

ModelFile parse_model(const std::string& json_text, const Params& params = {});
ModelFile load_model(const std::string& path, const Params& params = {});
std::string model_to_json(const ModelFile& m);
void save_model(const std::string& path, const ModelFile& m);

// Representation conversion; quadrature -> annihilation recovers the
// physical parameters when the matrices pass the realizability check.
ModelFile convert_model(const ModelFile& m, Rep target);

// A fully instantiated scenario: plant + controller + coupling wired by
// channel role, plus any synthesis/sweep settings the file carries.
struct ScenarioInstance {
  std::string name;
  Rep rep = Rep::Annihilation;
  PlantModel plant;
  Controller controller;
  bool has_controller = false;
  std::string metric = "gain";  // sweep metric: "gain" or "lqg"
  std::optional<double> target_g;
  RVec box_lo, box_hi;
  std::vector<Index> steps;
  int max_rounds = 10;
  Params defaults;
};

ScenarioInstance parse_scenario(const std::string& json_text, const std::string& base_dir,
                                const Params& overrides = {});
ScenarioInstance load_scenario(const std::string& path, const Params& overrides = {});

std::string controller_to_json(const Controller& k);
void save_controller(const std::string& path, const Controller& k);
Controller load_controller(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// 12-significant-digit CSV formatting used by the sweep command.
std::string format_csv_number(double v);

}  // namespace io
}  // namespace lqs
