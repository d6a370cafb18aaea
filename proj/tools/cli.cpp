#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "incommdos/dos.hpp"
#include "incommdos/errors.hpp"
#include "incommdos/geometry.hpp"
#include "incommdos/hamiltonian.hpp"
#include "incommdos/kpm.hpp"
#include "incommdos/model_config.hpp"
#include "incommdos/numeric.hpp"

namespace incomm::cli {

namespace {

TBModel resolve_model(const ModelSource& source) {
  ModelSpec spec;
  if (!source.config_path.empty()) spec = read_model_ini_file(source.config_path);
  if (!source.builtin.empty()) {
    spec.builtin = source.builtin;
    spec.overrides.clear();
    spec.custom.reset();
  }
  if (spec.custom && !source.overrides.empty()) {
    throw UsageError("parameter overrides apply to built-in models only");
  }
  for (const auto& [key, value] : source.overrides) spec.overrides[key] = value;
  if (!spec.custom && spec.builtin.empty()) throw UsageError("no model given");
  return build_model(spec);
}

KernelVariant kernel_of(const RunConfig& c) {
  if (c.kernel == "jackson") return KernelVariant::jackson;
  if (c.kernel == "printed_arctan") return KernelVariant::printed_arctan;
  throw UsageError("unknown kernel '" + c.kernel + "' (jackson, printed_arctan)");
}

ComputeOptions options_of(const RunConfig& c) {
  if (c.threads < 0) throw UsageError("--threads must be >= 0");
  return {c.threads, kernel_of(c)};
}

std::vector<double> energies_of(const RunConfig& c, const SpectralWindow& window) {
  if (c.energy.count < 2) throw UsageError("--ecount must be at least 2");
  const auto count = static_cast<std::size_t>(c.energy.count);
  if (c.energy.use_default) return default_energy_grid(window, count);
  if (!(c.energy.min < c.energy.max)) throw UsageError("--emin must be below --emax");
  const double limit = (1.0 - kWindowGuard) / window.eta;
  if (std::abs(c.energy.min) > limit || std::abs(c.energy.max) > limit) {
    std::ostringstream os;
    os << std::setprecision(17) << "energy grid leaves the scaled window [-" << limit << ", "
       << limit << "] eV";
    throw UsageError(os.str());
  }
  return linspace(c.energy.min, c.energy.max, count);
}

void require_dos_params(const RunConfig& c) {
  if (!(c.r > 0.0)) throw UsageError("missing or non-positive --r");
  if (c.p < 1) throw UsageError("missing or non-positive --p");
  if (c.n_disc < 1) throw UsageError("--ndisc must be at least 1");
}

std::size_t orbital_of(const TBModel& model, const RunConfig& c) {
  if (c.sheet != 1 && c.sheet != 2) throw UsageError("--sheet must be 1 or 2");
  if (c.orbital.empty()) {
    if (model.orbital_count(c.sheet) == 0) {
      throw UsageError("sheet " + std::to_string(c.sheet) + " has no orbitals");
    }
    return model.global_index(c.sheet, 0);
  }
  const auto g = model.find_orbital(c.orbital);
  if (!g) throw UsageError("unknown orbital id '" + c.orbital + "'");
  if (model.sheet_of(*g) != c.sheet) {
    throw UsageError("orbital '" + c.orbital + "' is not on sheet " + std::to_string(c.sheet));
  }
  return *g;
}

ShiftVector shift_of(const TBModel& model, const RunConfig& c) {
  const Vec2 frac(c.shift[0], c.shift[1]);
  return {model.lattice(other_sheet(c.sheet)).to_cartesian(frac), frac};
}

/// Target stream: the --output file, or `fallback` when none is given.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
      stream_ = file_.get();
    }
    *stream_ << std::setprecision(17);
  }
  std::ostream& operator*() { return *stream_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::ofstream open_file(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << std::setprecision(17);
  return f;
}

void write_derived(std::ostream& os, const TBModel& model, const SpectralWindow& window,
                   double r_angstrom) {
  os << "# derived model=" << model.label() << " a=" << model.lattice(1).lattice_constant()
     << " nu=" << model.nu() << " e_bound=" << window.e_bound << " eta=" << window.eta
     << " r_angstrom=" << r_angstrom << '\n';
}

}  // namespace

int cmd_dos(const RunConfig& c, std::ostream& out) {
  require_dos_params(c);
  const auto model = resolve_model(c.model);
  const auto opts = options_of(c);
  const auto window = spectral_bound(model);
  const auto eps = energies_of(c, window);
  const double a = model.lattice(1).lattice_constant();
  const auto curve = total_dos(model, window, c.r * a, c.p, c.n_disc, eps, opts);

  Sink sink(c.output, out);
  auto& os = *sink;
  os << format_header(c) << '\n';
  write_derived(os, model, window, c.r * a);
  os << "energy_eV,dos_per_eV\n";
  for (std::size_t k = 0; k < eps.size(); ++k) os << curve.epsilons[k] << ',' << curve.values[k] << '\n';

  if (sink.to_file()) {
    out << std::setprecision(17) << "rows " << eps.size() << '\n'
        << "integral " << observable(curve, Observable::custom([](double) { return 1.0; })) << '\n'
        << "fermi_energy_weighted(mu=0,kT=0.025) "
        << observable(curve, Observable::fermi_energy_weighted()) << '\n';
  }
  return kExitOk;
}

int cmd_ldos(const RunConfig& c, std::ostream& out) {
  if (!(c.r > 0.0)) throw UsageError("missing or non-positive --r");
  if (c.p < 1) throw UsageError("missing or non-positive --p");
  if (c.grid < 0) throw UsageError("--grid must be >= 0");
  const auto model = resolve_model(c.model);
  const auto alpha = orbital_of(model, c);
  const auto opts = options_of(c);
  const auto window = spectral_bound(model);
  const auto eps = energies_of(c, window);
  const double a = model.lattice(1).lattice_constant();
  const double r = c.r * a;

  std::vector<ShiftVector> shifts;
  if (c.grid > 0) {
    if (!c.matrix_path.empty() || !c.sites_path.empty()) {
      throw UsageError("--dump-matrix and --dump-sites need a single --shift, not --grid");
    }
    shifts = shift_grid(model.lattice(other_sheet(c.sheet)), c.grid).points;
  } else {
    shifts.push_back(shift_of(model, c));
  }
  const auto field = ldos_field(model, r, c.p, c.sheet, alpha, shifts, eps, opts);

  Sink sink(c.output, out);
  auto& os = *sink;
  os << format_header(c) << '\n';
  write_derived(os, model, window, r);
  os << "shift_index,b_x,b_y,energy_eV,ldos_per_eV\n";
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    for (std::size_t k = 0; k < eps.size(); ++k) {
      os << i << ',' << shifts[i].b[0] << ',' << shifts[i].b[1] << ',' << eps[k] << ','
         << field.values[i][k] << '\n';
    }
  }

  if (!c.moments_path.empty()) {
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      const auto path = shifts.size() == 1 ? c.moments_path
                                           : c.moments_path + "." + std::to_string(i);
      auto f = open_file(path);
      write_moments_csv(f, field.moments[i]);
    }
  }
  if (!c.matrix_path.empty() || !c.sites_path.empty()) {
    const auto h = assemble(model, r, c.sheet, shifts.front().b, window);
    if (!c.matrix_path.empty()) {
      auto f = open_file(c.matrix_path);
      write_coo(f, h);
    }
    if (!c.sites_path.empty()) {
      auto f = open_file(c.sites_path);
      f << "flat,sheet,orbital,n1,n2,x,y\n";
      for (const auto& d : h.dofs()) {
        const Vec2 x = d.site.x + model.orbital(d.orbital).tau +
                       (d.sheet == c.sheet ? Vec2::Zero() : shifts.front().b);
        f << d.flat << ',' << d.sheet << ',' << model.orbital(d.orbital).id << ','
          << d.site.n[0] << ',' << d.site.n[1] << ',' << x[0] << ',' << x[1] << '\n';
      }
    }
  }
  if (sink.to_file()) out << "shifts " << shifts.size() << " energies " << eps.size() << '\n';
  return kExitOk;
}

int cmd_converge(const RunConfig& c, std::ostream& out) {
  const auto model = resolve_model(c.model);
  const auto opts = options_of(c);
  const double a = model.lattice(1).lattice_constant();

  ConvergenceReport report;
  if (c.axis == "r") {
    if (c.r_list.size() < 4) throw UsageError("--r-list needs at least 4 values");
    if (c.p < 1) throw UsageError("missing or non-positive --p");
    std::vector<double> radii;
    for (const double r : c.r_list) radii.push_back(r * a);
    const auto alpha = orbital_of(model, c);
    report = converge_r(model, c.p, shift_of(model, c).b, radii, c.epsilon, c.sheet, alpha, opts);
  } else if (c.axis == "p") {
    if (c.p_list.size() < 4) throw UsageError("--p-list needs at least 4 values");
    if (!(c.c_r > 0.0) || !(c.c_n > 0.0)) throw UsageError("--c-r and --c-n must be positive");
    report = converge_coupled(model, c.p_list, c.c_r * a, c.c_n, c.epsilon, opts);
  } else if (c.axis == "ndisc") {
    if (c.ndisc_list.size() < 4) throw UsageError("--ndisc-list needs at least 4 values");
    if (!(c.r > 0.0)) throw UsageError("missing or non-positive --r");
    if (c.p < 1) throw UsageError("missing or non-positive --p");
    report = quadrature_error_probe(model, c.r * a, c.p, c.ndisc_list, c.epsilon, opts);
  } else {
    throw UsageError("--axis must be one of r, p, ndisc");
  }

  Sink sink(c.output, out);
  auto& os = *sink;
  os << format_header(c) << '\n';
  os << "# reference " << report.reference << " value=" << report.reference_value
     << (report.absolute_error ? " error=absolute" : " error=relative") << '\n';
  os << "param,r_angstrom,p,n_disc,value,error,log_error\n";
  for (const auto& s : report.samples) {
    os << s.parameter << ',' << s.r << ',' << s.p << ',' << s.n_disc << ',' << s.value << ','
       << s.error << ',' << std::log(s.error) << '\n';
  }

  auto& summary = sink.to_file() ? out : *sink;
  const char* lead = sink.to_file() ? "" : "# ";
  summary << std::setprecision(17) << lead << "axis " << to_string(report.axis) << '\n'
          << lead << "slope " << report.fitted_slope << '\n'
          << lead << "r_squared " << report.r_squared << '\n'
          << lead << "fitted_points " << report.fitted_points << '\n'
          << lead << "rate " << to_string(report.rate) << '\n';
  return kExitOk;
}

int cmd_equidist(const RunConfig& c, std::ostream& out) {
  if (c.r_list.empty()) throw UsageError("--r-list is required");
  if (c.bins < 1) throw UsageError("--bins must be positive");
  const auto model = resolve_model(c.model);
  const auto& self = model.lattice(1);
  const auto& other = model.lattice(2);
  const double a = self.lattice_constant();

  Sink sink(c.output, out);
  auto& os = *sink;
  os << format_header(c) << '\n';
  os << "r_a,site_count,fourier_re,fourier_im,fourier_abs,discrepancy,commensurate\n";
  bool commensurate = false;
  for (const double r : c.r_list) {
    if (!(r > 0.0)) throw UsageError("--r-list entries must be positive");
    const auto f = fourier_mode_average(self, other, c.mode, r * a);
    const double disc = equidistribution_discrepancy(self, other, r * a);
    commensurate = commensurate || f.commensurate;
    os << r << ',' << f.site_count << ',' << f.value.real() << ',' << f.value.imag() << ','
       << std::abs(f.value) << ',' << disc << ',' << (f.commensurate ? 1 : 0) << '\n';
  }
  if (sink.to_file()) out << "commensurate " << (commensurate ? "yes" : "no") << '\n';
  return kExitOk;
}

namespace {

void add_model_options(CLI::App* sub, RunConfig& c, std::string& model_name, double& twist,
                       std::vector<std::string>& sets, std::string& config_path) {
  sub->add_option("--model", model_name, "Built-in model: tbg, monolayer_graphene");
  sub->add_option("--twist", twist, "Twist angle in degrees (tbg)");
  sub->add_option("--set", sets, "Model parameter override key=value (repeatable)");
  sub->add_option("--config", config_path, "INI file with [model] and [run] sections");
  sub->add_option("--threads", c.threads, "Worker threads, 0 = hardware concurrency");
  sub->add_option("-o,--output", c.output, "CSV output path (default: stdout)");
  sub->add_option("--kernel", c.kernel, "jackson or printed_arctan");
  sub->add_option("--seed", c.seed, "Seed recorded for randomized runs");
}

void add_grid_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--r", c.r, "Cluster radius in units of the lattice constant");
  sub->add_option("--p", c.p, "Chebyshev order");
  sub->add_option("--emin", c.energy.min, "Lowest energy (eV)");
  sub->add_option("--emax", c.energy.max, "Highest energy (eV)");
  sub->add_option("--ecount", c.energy.count, "Number of energies");
}

std::vector<std::string> given(const CLI::App* sub) {
  static const std::vector<std::pair<std::string, std::string>> flags{
      {"--r", "r"},         {"--p", "p"},         {"--ndisc", "ndisc"},
      {"--emin", "emin"},   {"--emax", "emax"},   {"--ecount", "ecount"},
      {"--threads", "threads"}, {"--seed", "seed"}, {"--output", "output"},
      {"--kernel", "kernel"}, {"--epsilon", "epsilon"}};
  std::vector<std::string> keys;
  for (const auto& [flag, key] : flags) {
    const auto* opt = sub->get_option_no_throw(flag);
    if (opt != nullptr && opt->count() > 0) keys.push_back(key);
  }
  return keys;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Density of states of incommensurate bilayers by the kernel polynomial method",
               "incommdos"};
  app.require_subcommand(1);

  RunConfig c;
  std::string model_name;
  double twist = 0.0;
  std::vector<std::string> sets;
  std::string config_path;
  std::string shift_text;
  std::string mode_text;

  auto* dos = app.add_subcommand("dos", "Total density of states");
  add_model_options(dos, c, model_name, twist, sets, config_path);
  add_grid_options(dos, c);
  dos->add_option("--ndisc", c.n_disc, "Shift-grid size per axis");

  auto* ldos = app.add_subcommand("ldos", "Local density of states per relative shift");
  add_model_options(ldos, c, model_name, twist, sets, config_path);
  add_grid_options(ldos, c);
  ldos->add_option("--sheet", c.sheet, "Sheet j of the centre orbital");
  ldos->add_option("--orbital", c.orbital, "Orbital id (default: first orbital of the sheet)");
  ldos->add_option("--shift", shift_text, "Shift in fractional coordinates of the other cell");
  ldos->add_option("--grid", c.grid, "Use an N x N shift grid instead of --shift");
  ldos->add_option("--moments", c.moments_path, "Write Chebyshev moments to this CSV");
  ldos->add_option("--dump-matrix", c.matrix_path, "Write the cluster matrix as COO CSV");
  ldos->add_option("--dump-sites", c.sites_path, "Write the cluster degrees of freedom");

  auto* conv = app.add_subcommand("converge", "Convergence study");
  add_model_options(conv, c, model_name, twist, sets, config_path);
  conv->add_option("--axis", c.axis, "r, p (coupled r ~ n_disc ~ p log p) or ndisc")->required();
  conv->add_option("--r", c.r, "Cluster radius (ndisc axis), units of a");
  conv->add_option("--p", c.p, "Chebyshev order (r and ndisc axes)");
  conv->add_option("--epsilon", c.epsilon, "Energy (eV)");
  conv->add_option("--r-list", c.r_list, "Radii (r axis), units of a")->delimiter(',');
  conv->add_option("--p-list", c.p_list, "Orders (p axis)")->delimiter(',');
  conv->add_option("--ndisc-list", c.ndisc_list, "Grid sizes (ndisc axis)")->delimiter(',');
  conv->add_option("--c-r", c.c_r, "r = c_r p log p, units of a");
  conv->add_option("--c-n", c.c_n, "n_disc = round(c_n p log p)");
  conv->add_option("--sheet", c.sheet, "Sheet j (r axis)");
  conv->add_option("--orbital", c.orbital, "Orbital id (r axis)");
  conv->add_option("--shift", shift_text, "Shift (r axis), fractional coordinates");

  auto* eq = app.add_subcommand("equidist", "Equidistribution of one sheet modulo the other");
  add_model_options(eq, c, model_name, twist, sets, config_path);
  eq->add_option("--r-list", c.r_list, "Radii, units of a")->delimiter(',')->required();
  eq->add_option("--mode", mode_text, "Fourier mode 'm1 m2' (default '1 0')");
  eq->add_option("--bins", c.bins, "Discrepancy bins per axis");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    c.command = sub->get_name();

    if (!config_path.empty()) {
      c.model.config_path = config_path;
      apply_run_section(read_run_section_file(config_path), c, given(sub));
    }
    if (!model_name.empty()) {
      c.model.builtin = model_name;
    } else if (config_path.empty()) {
      c.model.builtin = "tbg";
    }
    if (sub->get_option("--twist")->count() > 0) c.model.overrides["twist_degrees"] = twist;
    for (const auto& s : sets) {
      const auto eq_pos = s.find('=');
      if (eq_pos == std::string::npos) throw UsageError("--set expects key=value, got '" + s + "'");
      try {
        c.model.overrides[s.substr(0, eq_pos)] = std::stod(s.substr(eq_pos + 1));
      } catch (const std::exception&) {
        throw UsageError("--set " + s + ": value is not a number");
      }
    }
    if (sub->get_option_no_throw("--emin") && (sub->get_option("--emin")->count() > 0 ||
                                               sub->get_option("--emax")->count() > 0)) {
      c.energy.use_default = false;
    }
    if (!shift_text.empty()) {
      std::istringstream is(shift_text);
      if (!(is >> c.shift[0] >> c.shift[1])) throw UsageError("--shift expects 'f1 f2'");
    }
    if (!mode_text.empty()) {
      std::istringstream is(mode_text);
      if (!(is >> c.mode[0] >> c.mode[1])) throw UsageError("--mode expects 'm1 m2'");
    }

    if (c.command == "dos") return cmd_dos(c, out);
    if (c.command == "ldos") return cmd_ldos(c, out);
    if (c.command == "converge") return cmd_converge(c, out);
    return cmd_equidist(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidBasis& e) {
    err << "invalid lattice: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OutOfWindow& e) {
    err << "energy outside window: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InsufficientSample& e) {
    err << "insufficient sample: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace incomm::cli
