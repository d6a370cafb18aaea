#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "incommdos/model.hpp"

namespace incomm {

/// Orbital entry of a user-defined model.
struct OrbitalSpec {
  std::string id;
  int sheet = 1;
  Vec2 tau = Vec2::Zero();  // Angstrom
  double onsite = 0.0;      // eV
};

/// Two arbitrary lattices with the graphene-family hopping law of make_bilayer_hopping().
struct CustomModelSpec {
  std::string label = "custom";
  Mat2 lattice1 = Mat2::Identity();  // columns are primitive vectors
  Mat2 lattice2 = Mat2::Identity();
  std::vector<OrbitalSpec> orbitals;
  double nn_distance = 0.0;
  BilayerParams hopping;
};

/// Either a built-in model name with parameter overrides or a custom definition.
struct ModelSpec {
  std::string builtin;
  std::map<std::string, double> overrides;
  std::optional<CustomModelSpec> custom;
};

TBModel build_model(const CustomModelSpec& spec);
TBModel build_model(const ModelSpec& spec);

/// Reads the [model], [lattice1], [lattice2], [orbitals] and [hopping] sections
/// of an INI file. Other sections are ignored.
///
///   [model]
///   builtin = tbg            ; or: label = my_model
///   twist_degrees = 6        ; built-in overrides live here
///   [lattice1]
///   a1 = 2.46 0
///   a2 = 1.23 2.1304
///   [orbitals]
///   A1 = 1 0 0 0             ; sheet tau_x tau_y onsite
///   [hopping]
///   nn_distance = 1.42
///   t_intra = -2.7
///
/// Throws InvalidParameter on malformed input.
ModelSpec read_model_ini(std::istream& in);
ModelSpec read_model_ini_file(const std::string& path);

}  // namespace incomm
