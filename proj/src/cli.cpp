#include "conic_shubin/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "conic_shubin/experiments.hpp"
#include "conic_shubin/grid_io.hpp"
#include "conic_shubin/kernel_cutoff.hpp"
#include "conic_shubin/parametrix.hpp"
#include "conic_shubin/quantize.hpp"
#include "conic_shubin/sobolev.hpp"
#include "conic_shubin/symbol_io.hpp"
#include "conic_shubin/symbol_parser.hpp"

namespace conic_shubin {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, sep);) parts.push_back(p);
  return parts;
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument("bad number '" + s + "' in " + what);
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  const double v = parse_number(s, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw std::invalid_argument("expected an integer in " + what);
  return static_cast<int>(v);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// options shared by the subcommands
struct Common {
  std::string aniso = "2,2,1";
  std::string grid;
  std::string closure;
  std::string out = ".";
  std::vector<std::string> symbol_files;
  std::vector<std::string> exprs;
  double tol = 1e-8;
  int order = 3;
  std::vector<double> s{1.0};
  std::vector<double> alpha{0.0};
  std::string input;
  std::string kind = "harmonic";
  int m = 1;
  int n = 1;
  int count = 6;
  std::vector<int> nts{128, 256};
  std::vector<double> shifts;
  double power = -2.0;
  double gamma = 0.1;
  double lambda0 = 10.0;
};

void add_common(CLI::App* app, Common& c, bool symbols) {
  app->add_option("--aniso", c.aniso, "anisotropy l1,l2,l3 for --expr inputs")->capture_default_str();
  app->add_option("--grid", c.grid, "t0,t1,nt,nz or a GridSpec JSON (inline or file)");
  app->add_option("--closure", c.closure, "periodic | reflection (overrides the grid)");
  app->add_option("--out", c.out, "output directory")->capture_default_str();
  app->add_option("--tol", c.tol, "tolerance override")->capture_default_str();
  if (symbols) {
    app->add_option("--symbol", c.symbol_files, "symbol file (JSON or expression text); repeatable");
    app->add_option("--expr", c.exprs, "symbol expression; repeatable, taken after --symbol files");
  }
}

GridSpec resolve_grid(const Common& c, const GridSpec& fallback) {
  GridSpec g = c.grid.empty() ? fallback : parse_grid_flag(c.grid);
  if (!c.closure.empty()) g.closure = closure_from_string(c.closure);
  g.validate();
  return g;
}

FormalSymbol load_symbol_file(const fs::path& p, const AnisotropyVector& l) {
  const std::string text = read_text(p);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const json j = json::parse(text);
    // a compose/adjoint report carries the symbol under "symbol"
    return symbol_from_json(j.contains("symbol") ? j.at("symbol") : j);
  }
  return parse_symbol_expr(text, l);
}

std::vector<FormalSymbol> load_symbols(const Common& c) {
  const AnisotropyVector l = parse_aniso_flag(c.aniso);
  std::vector<FormalSymbol> out;
  for (const auto& f : c.symbol_files) out.push_back(load_symbol_file(f, l));
  for (const auto& e : c.exprs) out.push_back(parse_symbol_expr(e, l));
  return out;
}

FormalSymbol one_symbol(const Common& c) {
  auto v = load_symbols(c);
  if (v.size() != 1) throw std::invalid_argument("expected exactly one --symbol or --expr");
  return v.front();
}

class Writer {
public:
  Writer(const std::string& dir, std::ostream& log) : dir_(dir), log_(log) { fs::create_directories(dir_); }
  void text(const std::string& name, const std::string& body) {
    write_file_atomic(dir_ / name, body);
    log_ << "wrote " << (dir_ / name).string() << '\n';
  }
  void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }
  fs::path path(const std::string& name) const { return dir_ / name; }
  void note(const std::string& name) { log_ << "wrote " << (dir_ / name).string() << '\n'; }

private:
  fs::path dir_;
  std::ostream& log_;
};

json symbol_report(const FormalSymbol& a) {
  return json{{"symbol", to_json(a)}, {"expression", to_expression(a)}, {"order", order(a)}};
}

json ellipticity_json(const EllipticityReport& r, double tol) {
  json witness{{"zeta", r.witness.zeta()}, {"sigma", r.witness.sigma()}, {"tau", r.witness.tau()},
               {"z", r.witness_z}};
  // x -> infinity is reported as null
  witness["x"] = std::isinf(r.witness_x) ? json(nullptr) : json(r.witness_x);
  return json{{"fully_elliptic", r.fully_elliptic}, {"min_modulus", r.min_modulus},
              {"witness", witness},                {"samples_used", r.samples_used},
              {"hemisphere_resolution", r.hemisphere_resolution},
              {"x_samples", r.x_samples},          {"tolerance", tol}};
}

ModelOperatorSpec model_spec(const Common& c, const GridSpec& g) {
  ModelOperatorSpec spec;
  spec.grid = g;
  if (c.kind == "harmonic") {
    spec.kind = ModelKind::Harmonic;
  } else if (c.kind == "anharmonic") {
    spec.kind = ModelKind::Anharmonic;
    spec.m = c.m;
    spec.n = c.n;
  } else if (c.kind == "custom") {
    spec.kind = ModelKind::Custom;
    spec.custom = one_symbol(c);
  } else {
    throw std::invalid_argument("unknown --kind '" + c.kind + "' (harmonic | anharmonic | custom)");
  }
  return spec;
}

std::string window_label(const GridSpec& g) { return format_double(g.t0) + ":" + format_double(g.t1); }

GridFunction load_function(const Common& c, const GridSpec& fallback) {
  if (c.input.empty()) throw std::invalid_argument("--input is required");
  const fs::path p = c.input;
  if (p.extension() == ".csv") return read_function_csv(p, resolve_grid(c, fallback));
  GridSpec window = c.grid.empty() ? fallback : parse_grid_flag(c.grid);
  if (!c.closure.empty()) window.closure = closure_from_string(c.closure);
  return read_function_cshb(p, window);
}

int cmd_check_ellipticity(const Common& c, Writer& w) {
  const auto a = one_symbol(c);
  const auto rep = check_full_ellipticity(a, 24, c.tol);
  w.json_file("ellipticity.json", ellipticity_json(rep, c.tol));
  return rep.fully_elliptic ? kExitOk : kExitNotElliptic;
}

int cmd_build_parametrix(const Common& c, Writer& w, const GridSpec& g) {
  const auto a = one_symbol(c);
  const auto bundle = build_parametrix(a, g, c.order);
  std::string csv = "N,left_remainder,right_remainder\n";
  for (std::size_t i = 0; i < bundle.left_remainder.size(); ++i)
    csv += std::to_string(i + 1) + ',' + format_double(bundle.left_remainder[i]) + ',' +
           format_double(bundle.right_remainder[i]) + '\n';
  w.text("parametrix.csv", csv);
  w.json_file("parametrix.json", json{{"grid", to_json(g)},
                                      {"order", c.order},
                                      {"symbol", symbol_report(a)},
                                      {"ellipticity", ellipticity_json(bundle.ellipticity, 1e-8)},
                                      {"left_remainder", bundle.left_remainder},
                                      {"right_remainder", bundle.right_remainder}});
  return kExitOk;
}

int cmd_compose(const Common& c, Writer& w) {
  const auto v = load_symbols(c);
  if (v.size() != 2) throw std::invalid_argument("compose needs exactly two symbols");
  w.json_file("compose.json", symbol_report(sharp(v[0], v[1])));
  return kExitOk;
}

int cmd_adjoint(const Common& c, Writer& w) {
  w.json_file("adjoint.json", symbol_report(star(one_symbol(c))));
  return kExitOk;
}

int cmd_quantize(const Common& c, Writer& w, const GridSpec& g) {
  const auto a = one_symbol(c);
  const auto A = quantize_symbol(a, g);
  if (g.size() > 4096) throw std::invalid_argument("dense operator export needs nt*nz <= 4096");
  write_operator_cshb(w.path("operator.cshb"), A);
  w.note("operator.cshb");
  const auto d = residual_decay_report(A);
  json j{{"grid", to_json(g)},
         {"symbol", symbol_report(a)},
         {"decay", {{"fitted_exponent", d.fitted_exponent}, {"tail_magnitude", d.tail_magnitude},
                    {"peak_magnitude", d.peak_magnitude}, {"residual_like", d.residual_like},
                    {"points_fitted", d.points_fitted}}}};
  if (!c.input.empty()) {
    const auto u = load_function(c, g);
    if (!(u.grid() == g)) throw std::invalid_argument("--input does not match the grid");
    write_function_cshb(w.path("applied.cshb"), A.apply(u));
    w.note("applied.cshb");
  }
  w.json_file("quantize.json", j);
  return kExitOk;
}

int cmd_spectrum(const Common& c, Writer& w, const GridSpec& g) {
  const auto spec = model_spec(c, g);
  const auto res = spectrum(spec, c.count);
  std::string csv = "eigenvalue,index,nt,nz,window\n";
  for (std::size_t i = 0; i < res.eigenvalues.size(); ++i)
    csv += format_double(res.eigenvalues[i]) + ',' + std::to_string(i) + ',' + std::to_string(g.nt) + ',' +
           std::to_string(g.nz) + ',' + window_label(g) + '\n';
  w.text("spectrum.csv", csv);
  w.json_file("spectrum.json", json{{"grid", to_json(g)},
                                    {"kind", c.kind},
                                    {"eigenvalues", res.eigenvalues},
                                    {"modes", res.modes},
                                    {"converged", res.converged},
                                    {"decay", {{"linear_rate", res.decay.linear_rate},
                                               {"quadratic_rate", res.decay.quadratic_rate},
                                               {"points", res.decay.points},
                                               {"decays", res.decay.decays}}}});
  return res.converged ? kExitOk : kExitError;
}

int cmd_sobolev_norm(const Common& c, Writer& w, const GridSpec& g) {
  const auto u = load_function(c, g);
  const auto l = parse_aniso_flag(c.aniso);
  if (c.s.size() != 1 || c.alpha.size() != 1) throw std::invalid_argument("sobolev-norm takes one --s and one --alpha");
  const double norm = sobolev_norm(u, {c.s[0], c.alpha[0]}, l, c.lambda0);
  w.json_file("sobolev_norm.json", json{{"norm", norm},
                                        {"s", c.s[0]},
                                        {"alpha", c.alpha[0]},
                                        {"aniso", to_json(l)},
                                        {"lambda0", c.lambda0},
                                        {"grid", to_json(u.grid())}});
  return kExitOk;
}

int cmd_mapping_study(const Common& c, Writer& w, const GridSpec& g) {
  const auto spec = model_spec(c, g);
  std::vector<double> shifts = c.shifts;
  if (shifts.empty()) {
    const FormalSymbol a = spec.kind == ModelKind::Custom ? *spec.custom
                           : spec.kind == ModelKind::Anharmonic ? anharmonic_symbol(spec.m, spec.n)
                                                                 : harmonic_symbol();
    const double ord = order(a);
    shifts = {ord, ord - 2};
  }
  const auto rows = mapping_shift_study(spec, c.s, c.alpha, c.nts, shifts);
  std::string csv = "nt,s,alpha,s_shift,weight_shift,norm,full_norm\n";
  for (const auto& r : rows)
    csv += std::to_string(r.nt) + ',' + format_double(r.s) + ',' + format_double(r.alpha) + ',' +
           format_double(r.s_shift) + ',' + format_double(r.weight_shift) + ',' + format_double(r.norm) + ',' +
           format_double(r.full_norm) + '\n';
  w.text("mapping_study.csv", csv);
  return kExitOk;
}

int cmd_kernel_cutoff(const Common& c, Writer& w) {
  const SigmaLattice lat;
  const CutoffSpec phi;
  const double p = c.power;
  const auto a = lat.sample([p](double s) { return cplx(std::pow(1.0 + s * s, 0.5 * p)); });
  const auto h = kernel_cutoff(a, lat, phi, 0.0);
  const auto fit = cutoff_decay_fit(a, h, lat);

  std::string csv = "sigma,a,h_re,h_im,difference\n";
  const double nyquist = M_PI / lat.dt();
  for (double s = 1.0; s <= 0.5 * nyquist; s *= 2.0) {
    const auto m = static_cast<std::size_t>(lat.slot_of(s));
    csv += format_double(lat.sigma(int(m))) + ',' + format_double(a[m].real()) + ',' + format_double(h[m].real()) +
           ',' + format_double(h[m].imag()) + ',' + format_double(std::abs(a[m] - h[m])) + '\n';
  }
  w.text("kernel_cutoff.csv", csv);

  auto holo_error = [&](double gamma) {
    const auto hg = kernel_cutoff(a, lat, phi, gamma);
    const auto ex = holomorphic_expansion(a, lat, phi, gamma, 4);
    double e = 0.0;
    for (std::size_t i = 0; i < hg.size(); ++i) e = std::max(e, std::abs(hg[i] - ex[i]));
    return e;
  };
  const double e1 = holo_error(c.gamma), e2 = holo_error(0.5 * c.gamma);
  w.json_file("kernel_cutoff.json", json{{"power", p},
                                         {"slope", fit.slope},
                                         {"fit_sigmas", fit.sigmas},
                                         {"fit_differences", fit.differences},
                                         {"holomorphy", {{"gamma", c.gamma},
                                                         {"order", 4},
                                                         {"max_error", e1},
                                                         {"max_error_half_gamma", e2},
                                                         {"ratio", e2 > 0 ? e1 / e2 : 0.0}}}});
  return kExitOk;
}

}  // namespace

AnisotropyVector parse_aniso_flag(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw std::invalid_argument("--aniso expects l1,l2,l3");
  return AnisotropyVector(parse_int(parts[0], "--aniso"), parse_int(parts[1], "--aniso"),
                          parse_int(parts[2], "--aniso"));
}

GridSpec parse_grid_flag(const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text[first] == '{') return grid_from_json(json::parse(text));
  if (fs::path(text).extension() == ".json") return grid_from_json(json::parse(read_text(text)));
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw std::invalid_argument("--grid expects t0,t1,nt,nz");
  GridSpec g{parse_number(parts[0], "--grid"), parse_number(parts[1], "--grid"), parse_int(parts[2], "--grid"),
             parse_int(parts[3], "--grid")};
  g.validate();
  return g;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anisotropic conic Shubin calculus: symbols, quantization, parametrices, spectra"};
  app.require_subcommand(1);
  Common c;

  auto* ell = app.add_subcommand("check-ellipticity", "full-ellipticity certificate of a symbol");
  add_common(ell, c, true);
  auto* par = app.add_subcommand("build-parametrix", "Neumann parametrices and their remainders");
  add_common(par, c, true);
  par->add_option("--order", c.order, "largest Neumann order N")->capture_default_str();
  auto* cmp = app.add_subcommand("compose", "exact composition symbol of two symbols");
  add_common(cmp, c, true);
  auto* adj = app.add_subcommand("adjoint", "exact adjoint symbol");
  add_common(adj, c, true);
  auto* qnt = app.add_subcommand("quantize", "dense grid operator of a symbol");
  add_common(qnt, c, true);
  qnt->add_option("--input", c.input, "grid function (.cshb or .csv) to apply the operator to");
  auto* spc = app.add_subcommand("spectrum", "lowest eigenvalues of a model operator");
  add_common(spc, c, true);
  auto* sob = app.add_subcommand("sobolev-norm", "anisotropic weighted Sobolev norm of a grid function");
  add_common(sob, c, false);
  sob->add_option("--input", c.input, "grid function (.cshb or .csv)")->required();
  sob->add_option("--lambda0", c.lambda0, "order-reduction parameter")->capture_default_str();
  auto* map = app.add_subcommand("mapping-study", "operator norms between shifted Sobolev spaces");
  add_common(map, c, true);
  auto* kc = app.add_subcommand("kernel-cutoff", "kernel cut-off of <sigma>^p and its decay/holomorphy checks");
  add_common(kc, c, false);
  kc->add_option("--power", c.power, "exponent p of <sigma>^p")->capture_default_str();
  kc->add_option("--gamma", c.gamma, "imaginary shift for the holomorphy check")->capture_default_str();

  for (auto* sub : {spc, map}) {
    sub->add_option("--kind", c.kind, "harmonic | anharmonic | custom")->capture_default_str();
    sub->add_option("--m", c.m, "anharmonic power of the Laplacian")->capture_default_str();
    sub->add_option("--n", c.n, "anharmonic potential x^{2n}")->capture_default_str();
  }
  spc->add_option("--count", c.count, "number of eigenvalues")->capture_default_str();
  for (auto* sub : {sob, map}) {
    sub->add_option("--s", c.s, "regularity (comma separated list for mapping-study)")->delimiter(',');
    sub->add_option("--alpha", c.alpha, "weight exponent (comma separated list for mapping-study)")->delimiter(',');
  }
  map->add_option("--nts", c.nts, "grid sizes nt")->delimiter(',');
  map->add_option("--shifts", c.shifts, "s-shifts (default: order and order-2)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (c.tol <= 0.0) throw std::invalid_argument("--tol must be positive");
    Writer w(c.out, out);
    const GridSpec default_grid{};
    const GridSpec spectrum_grid{-4.0, 3.0, 512, 32, Closure::Reflection};
    if (ell->parsed()) return cmd_check_ellipticity(c, w);
    if (par->parsed()) return cmd_build_parametrix(c, w, resolve_grid(c, default_grid));
    if (cmp->parsed()) return cmd_compose(c, w);
    if (adj->parsed()) return cmd_adjoint(c, w);
    if (qnt->parsed()) return cmd_quantize(c, w, resolve_grid(c, GridSpec{-3.0, 4.0, 64, 8}));
    if (spc->parsed()) return cmd_spectrum(c, w, resolve_grid(c, spectrum_grid));
    if (sob->parsed()) return cmd_sobolev_norm(c, w, default_grid);
    if (map->parsed()) return cmd_mapping_study(c, w, resolve_grid(c, GridSpec{-4.0, 3.0, 128, 8}));
    if (kc->parsed()) return cmd_kernel_cutoff(c, w);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace conic_shubin
