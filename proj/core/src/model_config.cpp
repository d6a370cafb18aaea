#include "incommdos/model_config.hpp"

#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "incommdos/errors.hpp"

namespace incomm {

namespace pt = boost::property_tree;

TBModel build_model(const CustomModelSpec& spec) {
  OrbitalSet set1{1, {}};
  OrbitalSet set2{2, {}};
  for (const auto& o : spec.orbitals) {
    if (o.sheet == 1) {
      set1.orbitals.push_back({o.id, o.tau, o.onsite});
    } else if (o.sheet == 2) {
      set2.orbitals.push_back({o.id, o.tau, o.onsite});
    } else {
      throw InvalidParameter("orbital '" + o.id + "' has sheet " + std::to_string(o.sheet) +
                             "; expected 1 or 2");
    }
  }
  LatticeBasis l1(spec.lattice1);
  LatticeBasis l2(spec.lattice2);
  auto hopping = make_bilayer_hopping(set1, set2, spec.nn_distance, spec.hopping);
  return TBModel(l1, l2, std::move(set1), std::move(set2), std::move(hopping), spec.label);
}

TBModel build_model(const ModelSpec& spec) {
  if (spec.custom) return build_model(*spec.custom);
  return builtin_model(spec.builtin, spec.overrides);
}

namespace {

std::vector<double> numbers(const std::string& text, const std::string& where) {
  std::istringstream is(text);
  std::vector<double> out;
  std::string token;
  while (is >> token) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw InvalidParameter(where + ": '" + token + "' is not a number");
    }
  }
  return out;
}

double number(const std::string& text, const std::string& where) {
  const auto v = numbers(text, where);
  if (v.size() != 1) throw InvalidParameter(where + ": expected one number");
  return v.front();
}

Mat2 read_lattice(const pt::ptree& section, const std::string& name) {
  Mat2 m;
  for (int k = 0; k < 2; ++k) {
    const std::string key = k == 0 ? "a1" : "a2";
    const auto text = section.get_optional<std::string>(key);
    if (!text) throw InvalidParameter("[" + name + "] is missing " + key);
    const auto v = numbers(*text, "[" + name + "] " + key);
    if (v.size() != 2) throw InvalidParameter("[" + name + "] " + key + ": expected two numbers");
    m.col(k) = Vec2(v[0], v[1]);
  }
  return m;
}

}  // namespace

ModelSpec read_model_ini(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidParameter(std::string("config: ") + e.what());
  }

  ModelSpec spec;
  const auto model = tree.get_child_optional("model");
  if (!model) throw InvalidParameter("config has no [model] section");

  if (const auto name = model->get_optional<std::string>("builtin")) {
    spec.builtin = *name;
    for (const auto& [key, value] : *model) {
      if (key == "builtin") continue;
      spec.overrides[key] = number(value.data(), "[model] " + key);
    }
    return spec;
  }

  CustomModelSpec custom;
  custom.label = model->get<std::string>("label", "custom");
  const auto l1 = tree.get_child_optional("lattice1");
  const auto l2 = tree.get_child_optional("lattice2");
  if (!l1 || !l2) throw InvalidParameter("custom model needs [lattice1] and [lattice2]");
  custom.lattice1 = read_lattice(*l1, "lattice1");
  custom.lattice2 = read_lattice(*l2, "lattice2");

  const auto orbitals = tree.get_child_optional("orbitals");
  if (!orbitals || orbitals->empty()) throw InvalidParameter("custom model needs [orbitals]");
  for (const auto& [id, value] : *orbitals) {
    const auto v = numbers(value.data(), "[orbitals] " + id);
    if (v.size() != 4) {
      throw InvalidParameter("[orbitals] " + id + ": expected 'sheet tau_x tau_y onsite'");
    }
    custom.orbitals.push_back({id, static_cast<int>(v[0]), Vec2(v[1], v[2]), v[3]});
  }

  const auto hopping = tree.get_child_optional("hopping");
  if (!hopping) throw InvalidParameter("custom model needs [hopping]");
  auto& h = custom.hopping;
  for (const auto& [key, value] : *hopping) {
    const double v = number(value.data(), "[hopping] " + key);
    if (key == "nn_distance") custom.nn_distance = v;
    else if (key == "t_intra") h.t_intra = v;
    else if (key == "t_perp") h.t_perp = v;
    else if (key == "interlayer_distance") h.interlayer_distance = v;
    else if (key == "decay_length") h.decay_length = v;
    else if (key == "cutoff") h.cutoff = v;
    else throw InvalidParameter("[hopping] unknown key '" + key + "'");
  }
  if (!(custom.nn_distance > 0.0)) throw InvalidParameter("[hopping] needs nn_distance > 0");
  spec.custom = std::move(custom);
  return spec;
}

ModelSpec read_model_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open config file '" + path + "'");
  return read_model_ini(in);
}

}  // namespace incomm
