// lapstrip command-line front end.  Every verb writes one CSV table.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "lapstrip/catalog.hpp"
#include "lapstrip/ghost.hpp"
#include "lapstrip/laplace.hpp"
#include "lapstrip/transition.hpp"

using namespace lapstrip;
using json = nlohmann::json;

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& cell) {
  if (cell.find_first_of(",\"") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

class Table {
public:
  explicit Table(std::vector<std::string> cols) : cols_(std::move(cols)) {}
  void row(const std::vector<std::string>& cells) { rows_.push_back(cells); }
  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < cols_.size(); ++i) os << (i ? "," : "") << cols_[i];
    os << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << quoted(r[i]);
      os << '\n';
    }
    return os.str();
  }

private:
  std::vector<std::string> cols_;
  std::vector<std::vector<std::string>> rows_;
};

std::vector<std::string> cells(std::initializer_list<double> v) {
  std::vector<std::string> out;
  for (double x : v) out.push_back(num(x));
  return out;
}

std::vector<double> parse_grid(const std::string& g) {
  std::vector<std::string> parts;
  std::stringstream ss(g);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw UsageError("grid must be lo:hi:n");
  double lo, hi;
  long n;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    n = std::stol(parts[2]);
  } catch (const std::exception&) {
    throw UsageError("grid must be lo:hi:n");
  }
  if (n < 1) throw UsageError("grid needs n >= 1");
  std::vector<double> out;
  for (long i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return out;
}

cplx parse_complex(const std::string& text) {
  auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw UsageError("cannot read complex number '" + text + "' (use re or re,im)");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Evaluates rows in parallel; output order follows the input order.
template <class Fn>
std::vector<std::vector<std::string>> sweep(std::size_t n, int jobs, Fn fn) {
  std::vector<std::vector<std::string>> rows(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t start) {
    for (std::size_t i = start; i < n; i += static_cast<std::size_t>(jobs)) {
      try {
        rows[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work, static_cast<std::size_t>(j));
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

struct Common {
  std::string output = "-";
  std::string config;
  int jobs = 1;
};

struct Points {
  std::string single;
  std::string grid;

  std::vector<double> reals(const char* name) const {
    if (!grid.empty()) return parse_grid(grid);
    if (single.empty()) throw UsageError(std::string("need --") + name + " or --grid");
    try {
      return {std::stod(single)};
    } catch (const std::exception&) {
      throw UsageError(std::string("bad --") + name);
    }
  }
  std::vector<cplx> complexes(const char* name) const {
    if (!grid.empty()) {
      std::vector<cplx> out;
      for (double x : parse_grid(grid)) out.emplace_back(x, 0.0);
      return out;
    }
    if (single.empty()) throw UsageError(std::string("need --") + name + " or --grid");
    return {parse_complex(single)};
  }
};

LaplacePair pair_from(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  std::vector<double> v;
  if (kind != "zeta") {
    std::stringstream ss(rest);
    for (std::string p; std::getline(ss, p, ',');) {
      try {
        v.push_back(std::stod(p));
      } catch (const std::exception&) {
        throw UsageError("bad number in --pair");
      }
    }
  }
  if (kind == "zeta") return zeta_pair(parse_zeta_tag(rest));
  if (kind == "gamma") {
    if (v.size() != 3) throw UsageError("gamma pair is gamma:a,b,index");
    return gamma_pair({v[0], v[1]}, static_cast<int>(v[2]));
  }
  if (kind == "rational") {
    if (v.size() != 3) throw UsageError("rational pair is rational:a,m,index");
    return integer_gamma_pair(v[0], static_cast<int>(v[1]), static_cast<int>(v[2]));
  }
  if (kind == "inv_s") {
    // F = 1/s on Re(s) > 0, density H(t)
    LaplacePair p;
    p.F = [](cplx s) { return 1.0 / s; };
    p.strip = {0.0, kInf};
    p.det.kind = Kind::Density;
    p.det.pieces.push_back({0.0, kInf, [](double) { return cplx(1.0); },
                            [](double t) { return cplx(t); }});
    return p;
  }
  throw UsageError("unknown pair '" + spec + "' (zeta:TAG, gamma:a,b,k, rational:a,m,k, inv_s)");
}

// Fill options left unset on the command line from the JSON config.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  json merged = json::object();
  for (auto& [k, val] : doc.items())
    if (!val.is_object()) merged[k] = val;
  if (doc.contains(sub->get_name()) && doc[sub->get_name()].is_object())
    for (auto& [k, val] : doc[sub->get_name()].items()) merged[k] = val;
  for (CLI::Option* opt : sub->get_options()) {
    std::string key = opt->get_lnames().empty() ? "" : opt->get_lnames().front();
    if (key.empty() || opt->count() > 0 || !merged.contains(key)) continue;
    const json& val = merged[key];
    std::string text;
    if (val.is_string())
      text = val.get<std::string>();
    else if (val.is_boolean())
      text = val.get<bool>() ? "true" : "false";
    else
      text = val.dump();
    opt->add_result(text);
    opt->run_callback();
  }
}

void emit(const std::string& body, const std::string& output) {
  if (output == "-") {
    std::cout << body;
    std::cout.flush();
    return;
  }
  std::filesystem::path target(output);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw UsageError("cannot write " + tmp.string());
    out << body;
    if (!out) throw UsageError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilateral Laplace transforms, transition formulas and worked examples"};
  app.require_subcommand(1);
  Common common;
  Points pts;
  double tol = 1e-10;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", common.output, "CSV output path, - for stdout");
    sub->add_option("--config", common.config, "JSON file with option defaults");
    sub->add_option("--jobs", common.jobs, "worker threads for grid sweeps")->check(CLI::PositiveNumber);
  };

  // transform
  std::string pair_spec;
  auto* transform = app.add_subcommand("transform", "Laplace transform of a catalog pair vs its closed form");
  transform->add_option("--pair", pair_spec, "zeta:TAG | gamma:a,b,k | rational:a,m,k | inv_s")->required();
  transform->add_option("--s", pts.single, "point re or re,im");
  transform->add_option("--grid", pts.grid, "real s values lo:hi:n");
  transform->add_option("--tol", tol);
  add_common(transform);

  // invert
  double abscissa = 1.0;
  std::string target = "cumulative";
  auto* invert = app.add_subcommand("invert", "Bromwich inversion of a catalog pair");
  invert->add_option("--pair", pair_spec)->required();
  invert->add_option("--c", abscissa, "abscissa of the vertical line");
  invert->add_option("--t", pts.single);
  invert->add_option("--grid", pts.grid);
  invert->add_option("--target", target)->check(CLI::IsMember({"cumulative", "density"}));
  invert->add_option("--tol", tol);
  add_common(invert);

  // transition
  std::string poles_path;
  auto* transition = app.add_subcommand("transition", "Transition jump and density from a pole file");
  transition->add_option("--poles", poles_path, "JSON pole file")->required();
  transition->add_option("--t", pts.single);
  transition->add_option("--grid", pts.grid);
  add_common(transition);

  // zeta
  std::string zstrip, ztag;
  auto* zeta = app.add_subcommand("zeta", "Zeta representations against the oracle");
  zeta->add_option("--strip", zstrip, "1,inf or 0,1 (measures)");
  zeta->add_option("--tag", ztag, "mu_1_inf | mu_0_1 | f_0_1 | f_-1_0");
  zeta->add_option("--s", pts.single);
  zeta->add_option("--grid", pts.grid);
  zeta->add_option("--tol", tol);
  add_common(zeta);

  // periodic
  int n_range = 201, cesaro_n = 50;
  bool residues = false;
  auto* periodic = app.add_subcommand("periodic", "Square wave sgn(sin t): residues, partial sums, Cesaro means");
  periodic->add_option("--n-range", n_range)->check(CLI::NonNegativeNumber);
  periodic->add_option("--cesaro", cesaro_n)->check(CLI::PositiveNumber);
  periodic->add_flag("--residues", residues, "list the poles and residues instead");
  periodic->add_option("--t", pts.single);
  periodic->add_option("--grid", pts.grid);
  add_common(periodic);

  // gamma
  double ga = 2.0, gb = 3.5;
  int gindex = 0;
  std::string gs;
  auto* gamma = app.add_subcommand("gamma", "Gamma quotient densities, or transforms vs the quotient");
  gamma->add_option("--a", ga);
  gamma->add_option("--b", gb);
  gamma->add_option("--index", gindex);
  gamma->add_option("--s", gs, "compare transform and quotient at this point");
  gamma->add_option("--t", pts.single);
  gamma->add_option("--grid", pts.grid);
  add_common(gamma);

  // ghost
  std::string check, ghost_s;
  int deriv = 0;
  GhostConfig gcfg;
  auto* ghost = app.add_subcommand("ghost", "Ghost density f, F(s), or the f'''(0) check");
  ghost->add_option("--check", check)->check(CLI::IsMember({"f3"}));
  ghost->add_option("--k", deriv, "derivative order")->check(CLI::NonNegativeNumber);
  ghost->add_option("--s", ghost_s, "evaluate F at re,im");
  ghost->add_option("--t", pts.single);
  ghost->add_option("--grid", pts.grid);
  ghost->add_option("--M", gcfg.M);
  add_common(ghost);

  // heat
  double hx = 0.0;
  std::string form = "both";
  auto* heat = app.add_subcommand("heat", "Nulltemperature function H(x,t)");
  heat->add_option("--x", hx);
  heat->add_option("--t", pts.single);
  heat->add_option("--grid", pts.grid, "t values lo:hi:n");
  heat->add_option("--form", form)->check(CLI::IsMember({"spectral", "contour", "both"}));
  heat->add_option("--M", gcfg.M);
  add_common(heat);

  // polarity
  std::string pol_pair;
  auto* polarity = app.add_subcommand("polarity", "Polarity classification of a catalog density");
  polarity->add_option("--pair", pol_pair, "zeta:TAG | gamma:a,b,k | rational:a,m,k")->required();
  polarity->add_option("--grid", pts.grid, "t grid lo:hi:n");
  add_common(polarity);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    apply_config(sub, common.config);
    if (common.jobs < 1) throw UsageError("--jobs must be positive");
    const std::string verb = sub->get_name();
    std::string body;

    if (verb == "transform") {
      LaplacePair p = pair_from(pair_spec);
      auto s = pts.complexes("s");
      Table t({"s_re", "s_im", "value_re", "value_im", "error_estimate", "F_re", "F_im", "abs_diff"});
      for (auto& r : sweep(s.size(), common.jobs, [&](std::size_t i) {
             QuadResult q = laplace_transform(p.det, s[i], p.strip, tol);
             cplx F = p.F(s[i]);
             return cells({s[i].real(), s[i].imag(), q.value.real(), q.value.imag(),
                           q.abs_error_estimate, F.real(), F.imag(), std::abs(q.value - F)});
           }))
        t.row(r);
      body = t.str();
    } else if (verb == "invert") {
      LaplacePair p = pair_from(pair_spec);
      auto ts = pts.reals("t");
      BromwichOptions bo;
      bo.tol = std::max(tol, 1e-12);
      bo.target = target == "density" ? InversionTarget::Density : InversionTarget::Cumulative;
      Table t({"t", "value_re", "value_im", "last_change", "levels"});
      for (auto& r : sweep(ts.size(), common.jobs, [&](std::size_t i) {
             BromwichResult b = bromwich_invert(p.F, abscissa, ts[i], bo);
             return cells({ts[i], b.value.real(), b.value.imag(), b.last_change,
                           static_cast<double>(b.levels)});
           }))
        t.row(r);
      body = t.str();
    } else if (verb == "transition") {
      PoleSet poles = parse_pole_set(read_file(poles_path));
      auto ts = pts.reals("t");
      Table t({"t", "jump_re", "jump_im", "density_re", "density_im"});
      for (double x : ts) {
        cplx j = transition_jump(poles, x), d = transition_density(poles, x);
        t.row(cells({x, j.real(), j.imag(), d.real(), d.imag()}));
      }
      body = t.str();
    } else if (verb == "zeta") {
      ZetaStripId id;
      if (!ztag.empty())
        id = parse_zeta_tag(ztag);
      else if (zstrip == "1,inf")
        id = ZetaStripId::Mu1Inf;
      else if (zstrip == "0,1")
        id = ZetaStripId::Mu01;
      else
        throw UsageError("zeta needs --tag or --strip 1,inf | 0,1");
      LaplacePair p = zeta_pair(id);
      auto s = pts.complexes("s");
      Table t({"s_re", "s_im", "repr_re", "repr_im", "oracle_re", "oracle_im", "abs_diff"});
      for (auto& r : sweep(s.size(), common.jobs, [&](std::size_t i) {
             QuadResult q = laplace_transform(p.det, s[i], p.strip, tol);
             cplx o = p.F(s[i]);
             return cells({s[i].real(), s[i].imag(), q.value.real(), q.value.imag(), o.real(),
                           o.imag(), std::abs(q.value - o)});
           }))
        t.row(r);
      body = t.str();
    } else if (verb == "periodic") {
      PeriodicPair sw = square_wave_pair(n_range);
      if (residues) {
        Table t({"p", "residue_re", "residue_im"});
        for (const auto& pole : sw.poles.poles)
          t.row(cells({pole.p, pole.coeffs[0].real(), pole.coeffs[0].imag()}));
        body = t.str();
      } else {
        auto ts = pts.reals("t");
        Table t({"t", "partial_re", "partial_im", "cesaro_re", "cesaro_im", "square_wave"});
        for (auto& r : sweep(ts.size(), common.jobs, [&](std::size_t i) {
               cplx part = transition_density(sw.poles, ts[i]);
               cplx ces = cesaro_mean(sw.poles, cesaro_n, ts[i]);
               double sq = std::sin(ts[i]) > 0 ? 1.0 : (std::sin(ts[i]) < 0 ? -1.0 : 0.0);
               return cells({ts[i], part.real(), part.imag(), ces.real(), ces.imag(), sq});
             }))
          t.row(r);
        body = t.str();
      }
    } else if (verb == "gamma") {
      GammaQuotientParams q{ga, gb};
      q.validate();
      if (!gs.empty()) {
        cplx s = parse_complex(gs);
        LaplacePair p = gamma_pair(q, gindex);
        QuadResult r = laplace_transform(p.det, s, p.strip);
        cplx g = gamma_quotient(q, s);
        Table t({"s_re", "s_im", "transform_re", "transform_im", "quotient_re", "quotient_im", "abs_diff"});
        t.row(cells({s.real(), s.imag(), r.value.real(), r.value.imag(), g.real(), g.imag(),
                     std::abs(r.value - g)}));
        body = t.str();
      } else {
        auto ts = pts.reals("t");
        Table t({"t", "density_re", "density_im"});
        for (auto& r : sweep(ts.size(), common.jobs, [&](std::size_t i) {
               cplx v = gamma_strip_density(q, gindex, ts[i]);
               return cells({ts[i], v.real(), v.imag()});
             }))
          t.row(r);
        body = t.str();
      }
    } else if (verb == "ghost") {
      if (check == "f3") {
        cplx v = ghost_density(0.0, 3, gcfg);
        Table t({"quantity", "value_re", "value_im", "target", "abs_diff"});
        std::vector<std::string> row{"f3_at_0"};
        for (auto& c : cells({v.real(), v.imag(), kEulerGamma / 2, std::abs(v - kEulerGamma / 2)}))
          row.push_back(c);
        t.row(row);
        body = t.str();
      } else if (!ghost_s.empty()) {
        cplx s = parse_complex(ghost_s);
        GhostParts gp = ghost_parts(s, gcfg);
        double la = ghost_log_abs(s, gcfg);
        Table t({"s_re", "s_im", "inside", "I_re", "I_im", "log_abs_F"});
        t.row(cells({s.real(), s.imag(), gp.inside ? 1.0 : 0.0, gp.I.real(), gp.I.imag(), la}));
        body = t.str();
      } else {
        auto ts = pts.reals("t");
        Table t({"t", "f_re", "f_im"});
        for (auto& r : sweep(ts.size(), common.jobs, [&](std::size_t i) {
               cplx v = ghost_density(ts[i], deriv, gcfg);
               return cells({ts[i], v.real(), v.imag()});
             }))
          t.row(r);
        body = t.str();
      }
    } else if (verb == "heat") {
      auto ts = pts.reals("t");
      const bool spec = form != "contour", cont = form != "spectral";
      std::vector<std::string> cols{"x", "t"};
      if (spec) cols.insert(cols.end(), {"spectral_re", "spectral_im"});
      if (cont) cols.insert(cols.end(), {"contour_re", "contour_im"});
      Table t(cols);
      for (auto& r : sweep(ts.size(), common.jobs, [&](std::size_t i) {
             std::vector<std::string> row = cells({hx, ts[i]});
             if (spec) {
               cplx h = heat_spectral(hx, ts[i], gcfg);
               for (auto& c : cells({h.real(), h.imag()})) row.push_back(c);
             }
             if (cont) {
               cplx h = heat_contour(hx, ts[i], gcfg);
               for (auto& c : cells({h.real(), h.imag()})) row.push_back(c);
             }
             return row;
           }))
        t.row(r);
      body = t.str();
    } else if (verb == "polarity") {
      LaplacePair p = pair_from(pol_pair);
      std::vector<double> grid = pts.grid.empty() ? parse_grid("-8:8:401") : parse_grid(pts.grid);
      Polarity c = polarity_check(p.det, grid);
      Table t({"pair", "strip_a", "strip_b", "polarity"});
      t.row({pol_pair, num(p.strip.a), num(p.strip.b), to_string(c)});
      body = t.str();
    }
    emit(body, common.output);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const lapstrip::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }
}
