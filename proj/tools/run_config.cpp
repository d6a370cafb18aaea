#include "run_config.hpp"

#include <algorithm>
#include <fstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

namespace incomm::cli {

using nlohmann::json;

void to_json(json& j, const ModelSource& m) {
  j = json{{"builtin", m.builtin}, {"overrides", m.overrides}, {"config_path", m.config_path}};
}

void from_json(const json& j, ModelSource& m) {
  j.at("builtin").get_to(m.builtin);
  j.at("overrides").get_to(m.overrides);
  j.at("config_path").get_to(m.config_path);
}

void to_json(json& j, const EnergyGrid& g) {
  j = json{{"default", g.use_default}, {"min", g.min}, {"max", g.max}, {"count", g.count}};
}

void from_json(const json& j, EnergyGrid& g) {
  j.at("default").get_to(g.use_default);
  j.at("min").get_to(g.min);
  j.at("max").get_to(g.max);
  j.at("count").get_to(g.count);
}

void to_json(json& j, const RunConfig& c) {
  j = json{{"command", c.command},
           {"model", c.model},
           {"r", c.r},
           {"p", c.p},
           {"n_disc", c.n_disc},
           {"energy", c.energy},
           {"output", c.output},
           {"threads", c.threads},
           {"seed", c.seed},
           {"kernel", c.kernel},
           {"sheet", c.sheet},
           {"orbital", c.orbital},
           {"shift", c.shift},
           {"grid", c.grid},
           {"moments_path", c.moments_path},
           {"matrix_path", c.matrix_path},
           {"sites_path", c.sites_path},
           {"axis", c.axis},
           {"r_list", c.r_list},
           {"p_list", c.p_list},
           {"ndisc_list", c.ndisc_list},
           {"c_r", c.c_r},
           {"c_n", c.c_n},
           {"epsilon", c.epsilon},
           {"mode", c.mode},
           {"bins", c.bins}};
}

void from_json(const json& j, RunConfig& c) {
  j.at("command").get_to(c.command);
  j.at("model").get_to(c.model);
  j.at("r").get_to(c.r);
  j.at("p").get_to(c.p);
  j.at("n_disc").get_to(c.n_disc);
  j.at("energy").get_to(c.energy);
  j.at("output").get_to(c.output);
  j.at("threads").get_to(c.threads);
  j.at("seed").get_to(c.seed);
  j.at("kernel").get_to(c.kernel);
  j.at("sheet").get_to(c.sheet);
  j.at("orbital").get_to(c.orbital);
  j.at("shift").get_to(c.shift);
  j.at("grid").get_to(c.grid);
  j.at("moments_path").get_to(c.moments_path);
  j.at("matrix_path").get_to(c.matrix_path);
  j.at("sites_path").get_to(c.sites_path);
  j.at("axis").get_to(c.axis);
  j.at("r_list").get_to(c.r_list);
  j.at("p_list").get_to(c.p_list);
  j.at("ndisc_list").get_to(c.ndisc_list);
  j.at("c_r").get_to(c.c_r);
  j.at("c_n").get_to(c.c_n);
  j.at("epsilon").get_to(c.epsilon);
  j.at("mode").get_to(c.mode);
  j.at("bins").get_to(c.bins);
}

namespace {
constexpr const char* kHeaderPrefix = "# incommdos ";
}

std::string format_header(const RunConfig& config) {
  return kHeaderPrefix + json(config).dump();
}

RunConfig parse_header(const std::string& line) {
  const std::string prefix = kHeaderPrefix;
  if (line.rfind(prefix, 0) != 0) throw UsageError("not a provenance header: '" + line + "'");
  try {
    return json::parse(line.substr(prefix.size())).get<RunConfig>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed provenance header: ") + e.what());
  }
}

RunSection read_run_section(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  RunSection section;
  if (const auto run = tree.get_child_optional("run")) {
    for (const auto& [key, value] : *run) section.values[key] = value.data();
  }
  return section;
}

RunSection read_run_section_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  return read_run_section(in);
}

namespace {

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("[run] " + key + ": '" + text + "' is not a number");
}

long long to_integer(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("[run] " + key + ": '" + text + "' is not an integer");
}

}  // namespace

void apply_run_section(const RunSection& section, RunConfig& config,
                       const std::vector<std::string>& skip) {
  for (const auto& [key, text] : section.values) {
    if (std::find(skip.begin(), skip.end(), key) != skip.end()) continue;
    if (key == "r") config.r = to_double(key, text);
    else if (key == "p") config.p = static_cast<int>(to_integer(key, text));
    else if (key == "ndisc") config.n_disc = static_cast<int>(to_integer(key, text));
    else if (key == "emin") { config.energy.min = to_double(key, text); config.energy.use_default = false; }
    else if (key == "emax") { config.energy.max = to_double(key, text); config.energy.use_default = false; }
    else if (key == "ecount") config.energy.count = static_cast<int>(to_integer(key, text));
    else if (key == "threads") config.threads = static_cast<int>(to_integer(key, text));
    else if (key == "seed") config.seed = static_cast<std::uint64_t>(to_integer(key, text));
    else if (key == "output") config.output = text;
    else if (key == "kernel") config.kernel = text;
    else if (key == "epsilon") config.epsilon = to_double(key, text);
    else throw UsageError("[run] unknown key '" + key + "'");
  }
}

}  // namespace incomm::cli
