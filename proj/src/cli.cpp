#include "solgeom/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "solgeom/distance.hpp"
#include "solgeom/errors.hpp"
#include "solgeom/flow.hpp"
#include "solgeom/invariants.hpp"
#include "solgeom/nil.hpp"
#include "solgeom/rendezvous.hpp"
#include "solgeom/trajectory_io.hpp"

namespace solgeom::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitFailure = 3;

struct Sink {
  std::string format = "csv";
  std::string path;

  OutputFormat output_format() const { return format == "json" ? OutputFormat::Json : OutputFormat::Csv; }
};

void add_sink(CLI::App* cmd, Sink& sink) {
  // "-h" is not reserved for help because --h is the average height
  cmd->set_help_flag("--help", "Print this help message and exit");
  cmd->add_option("--format", sink.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", sink.path, "Output file (default: standard output)");
}

Point parse_point(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string field = text.substr(start, comma - start);
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
      throw CLI::ValidationError(flag, "expected three comma-separated numbers, got '" + text + "'");
    }
    values.push_back(v);
    start = comma + 1;
  }
  if (values.size() != 3) {
    throw CLI::ValidationError(flag, "expected three comma-separated numbers, got '" + text + "'");
  }
  return {values[0], values[1], values[2]};
}

// Geodesic given either by (k, h, c, signs) or by a point and a velocity.
struct GeodesicArgs {
  std::optional<double> k;
  double h = 0.0;
  double c = 0.0;
  int sign_a = 1;
  int sign_b = 1;
  std::string point;
  std::string velocity;

  void add(CLI::App* cmd) {
    auto* kopt = cmd->add_option("--k", k, "Modulus in [0, 1); starts at maximal altitude h + A(k)");
    cmd->add_option("--h", h, "Average height")->needs(kopt);
    cmd->add_option("--c", c, "Third constant of motion")->needs(kopt);
    cmd->add_option("--sign-a", sign_a, "Sign of a")->check(CLI::IsMember({-1, 1}))->needs(kopt);
    cmd->add_option("--sign-b", sign_b, "Sign of b")->check(CLI::IsMember({-1, 1}))->needs(kopt);
    auto* popt = cmd->add_option("--point", point, "Initial point x,y,z")->excludes(kopt);
    cmd->add_option("--velocity", velocity, "Initial unit velocity dx,dy,dz")->excludes(kopt)->needs(popt);
  }

  GeodesicSpec spec() const {
    if (k) {
      const ModulusDict d = ab_from_kh(*k, h);
      const double a = sign_a * d.abs_a;
      const double b = sign_b * d.abs_b;
      const double z = h + amplitude(*k);
      const Point p{c / a, 0.0, z};
      return spec_from_initial({p, a * std::exp(2.0 * z), b * std::exp(-2.0 * z), 0.0});
    }
    if (velocity.empty()) throw CLI::ValidationError("--velocity", "either --k or --point with --velocity is required");
    const Point p = parse_point(point, "--point");
    const Point v = parse_point(velocity, "--velocity");
    return spec_from_initial({p, v.x, v.y, v.z});
  }
};

struct TimeArgs {
  double t0 = 0.0;
  std::optional<double> t1;
  std::optional<double> periods;
  double dt = 0.01;
  double tol = 1e-10;

  void add(CLI::App* cmd) {
    cmd->add_option("--t0", t0, "Start time");
    auto* t1opt = cmd->add_option("--t1", t1, "End time");
    cmd->add_option("--periods", periods, "Span in periods T(k) (generic geodesics)")->excludes(t1opt);
    cmd->add_option("--dt", dt, "Sampling step")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", tol, "Integration tolerance");
  }

  double end(const GeodesicSpec& spec) const {
    if (periods) {
      if (spec.kind != GeodesicClass::Generic) {
        throw PreconditionError("--periods needs a generic geodesic (0 < k < 1)");
      }
      return t0 + *periods * invariant_set(spec.k).T;
    }
    if (!t1) throw CLI::ValidationError("--t1", "one of --t1 or --periods is required");
    return *t1;
  }
};


Table invariants_table(const std::vector<double>& ks) {
  Table t;
  t.columns = {"k", "A", "T", "M", "H", "dT", "dM", "dH"};
  for (double k : ks) {
    const InvariantSet s = invariant_set(k);
    std::vector<Cell> row = {k, s.A, s.T, s.M, s.H};
    if (k >= 1e-8) {
      const InvariantDerivatives d = invariant_derivatives(k);
      row.insert(row.end(), {d.dT, d.dM, d.dH});
    } else {
      row.insert(row.end(), {std::monostate{}, std::monostate{}, std::monostate{}});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"solgeo: geodesics, invariants and distances in the SOL geometry"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1, 1);

  // invariants
  Sink inv_sink;
  std::vector<double> inv_k;
  int inv_grid = 0;
  auto* inv = app.add_subcommand("invariants", "A, T, M, H and their derivatives as functions of k");
  auto* inv_kopt = inv->add_option("--k", inv_k, "Moduli (comma-separated)")->delimiter(',');
  inv->add_option("--grid", inv_grid, "N equally spaced moduli i/N, i = 0..N-1")
      ->check(CLI::PositiveNumber)
      ->excludes(inv_kopt);
  add_sink(inv, inv_sink);

  // geodesic
  Sink geo_sink;
  GeodesicArgs geo_args;
  TimeArgs geo_time;
  auto* geo = app.add_subcommand("geodesic", "Sample a unit-speed geodesic");
  geo_args.add(geo);
  geo_time.add(geo);
  add_sink(geo, geo_sink);

  // partner
  Sink par_sink;
  GeodesicArgs par_args;
  double par_t1 = 0.0;
  double par_tol = 1e-12;
  auto* par = app.add_subcommand("partner", "Rendez-vous report for the partner taken at a given time");
  par_args.add(par);
  par->add_option("--pair-time", par_t1, "Pairing time t1");
  par->add_option("--tol", par_tol, "Integration tolerance");
  add_sink(par, par_sink);

  // distance
  Sink dist_sink;
  std::string dist_from;
  std::string dist_to;
  DistanceOptions dist_opts;
  bool dist_shoot = false;
  auto* dist = app.add_subcommand("distance", "Riemannian distance between two points");
  dist->add_option("--from", dist_from, "First point x,y,z")->required();
  dist->add_option("--to", dist_to, "Second point x,y,z")->required();
  dist->add_option("--tol", dist_opts.tol, "Relative endpoint tolerance");
  dist->add_option("--starts", dist_opts.starts, "Number of shooting starts (>= 32)");
  dist->add_flag("--shoot", dist_shoot, "Always use the shooting solver");
  add_sink(dist, dist_sink);

  // sphere
  Sink sph_sink;
  double sph_radius = 1.0;
  int sph_theta = 8;
  int sph_phi = 16;
  double sph_tol = 1e-10;
  auto* sph = app.add_subcommand("sphere", "Geodesic sphere point cloud, clipped at cut length");
  sph->add_option("--radius", sph_radius, "Radius")->required();
  sph->add_option("--n-theta", sph_theta, "Polar subdivisions");
  sph->add_option("--n-phi", sph_phi, "Azimuthal subdivisions");
  sph->add_option("--tol", sph_tol, "Integration tolerance");
  add_sink(sph, sph_sink);

  // asymptotic
  Sink asy_sink;
  double asy_theta = std::numbers::pi / 4.0;
  std::vector<double> asy_lambda;
  auto* asy = app.add_subcommand("asymptotic", "Far-field ground-plane geodesics and T(k) - 4 log(lambda)");
  asy->add_option("--theta", asy_theta, "Direction angle in (0, pi/2)");
  asy->add_option("--lambda", asy_lambda, "Distances (comma-separated)")->delimiter(',')->required();
  add_sink(asy, asy_sink);

  // nil
  Sink nil_sink;
  std::string nil_point = "0,0,0";
  std::string nil_velocity;
  double nil_t0 = 0.0;
  double nil_t1 = 10.0;
  double nil_dt = 0.1;
  auto* nilcmd = app.add_subcommand("nil", "Closed-form geodesic of the Heisenberg geometry");
  nilcmd->add_option("--point", nil_point, "Initial point x,y,z");
  nilcmd->add_option("--velocity", nil_velocity, "Initial unit velocity dx,dy,dz")->required();
  nilcmd->add_option("--t0", nil_t0, "Start time");
  nilcmd->add_option("--t1", nil_t1, "End time");
  nilcmd->add_option("--dt", nil_dt, "Sampling step")->check(CLI::PositiveNumber);
  add_sink(nilcmd, nil_sink);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  std::ostringstream buffer;
  const Sink* sink = nullptr;
  try {
    if (*inv) {
      sink = &inv_sink;
      std::vector<double> ks = inv_k;
      for (int i = 0; i < inv_grid; ++i) ks.push_back(static_cast<double>(i) / inv_grid);
      if (ks.empty()) throw CLI::ValidationError("--k", "give --k or --grid");
      write_table(invariants_table(ks), inv_sink.output_format(), buffer);
    } else if (*geo) {
      sink = &geo_sink;
      const GeodesicSpec spec = geo_args.spec();
      const Trajectory traj = integrate(spec, geo_time.t0, geo_time.end(spec), geo_time.tol, geo_time.dt);
      write_trajectory(traj, geo_sink.output_format(), buffer);
    } else if (*par) {
      sink = &par_sink;
      const GeodesicSpec spec = par_args.spec();
      const RendezvousReport r = rendezvous_check(spec, par_t1, par_tol);
      Table t;
      t.columns = {"t1", "T", "meet_error", "distinct", "c", "c_partner", "length"};
      t.rows.push_back({par_t1, r.T, r.meet_error, r.distinct, spec.constants.c, r.partner.constants.c,
                        r.length_original});
      write_table(t, par_sink.output_format(), buffer);
    } else if (*dist) {
      sink = &dist_sink;
      dist_opts.use_closed_form = !dist_shoot;
      const DistanceResult r = distance(parse_point(dist_from, "--from"), parse_point(dist_to, "--to"), dist_opts);
      Table t;
      t.columns = {"distance", "method", "residual", "converged", "basins", "a", "b", "c", "class", "k"};
      const GeodesicSpec& w = r.witness;
      t.rows.push_back({r.value, to_string(r.method), r.residual, static_cast<double>(r.converged),
                        static_cast<double>(r.basins), w.constants.a, w.constants.b, w.constants.c,
                        to_string(w.kind), w.k});
      write_table(t, dist_sink.output_format(), buffer);
    } else if (*sph) {
      sink = &sph_sink;
      Table t;
      t.columns = {"theta", "phi", "length", "clipped", "x", "y", "z"};
      for (const SpherePoint& p : sphere_points(sph_radius, sph_theta, sph_phi, sph_tol)) {
        t.rows.push_back({p.theta, p.phi, p.length, p.clipped, p.point.x, p.point.y, p.point.z});
      }
      write_table(t, sph_sink.output_format(), buffer);
    } else if (*asy) {
      sink = &asy_sink;
      Table t;
      t.columns = {"lambda", "k", "a", "b", "c", "T", "four_log_lambda", "excess", "lambda_star"};
      for (double lambda : asy_lambda) {
        const GroundAsymptotic g = ground_asymptotic(asy_theta, lambda);
        t.rows.push_back({lambda, g.k, g.a, g.b, g.c, g.T, g.four_log_lambda, g.excess, g.lambda_star});
      }
      write_table(t, asy_sink.output_format(), buffer);
    } else if (*nilcmd) {
      sink = &nil_sink;
      if (!(nil_t1 >= nil_t0)) throw CLI::ValidationError("--t1", "must not precede --t0");
      const Point p = parse_point(nil_point, "--point");
      const Point v = parse_point(nil_velocity, "--velocity");
      const nil::NilGeodesic g = nil::nil_from_initial({p, v.x, v.y, v.z});
      Table t;
      t.columns = {"t", "x", "y", "z", "dx", "dy", "dz"};
      const auto n = static_cast<long>(std::floor((nil_t1 - nil_t0) / nil_dt + 1e-9));
      for (long i = 0; i <= n; ++i) {
        const double time = nil_t0 + static_cast<double>(i) * nil_dt;
        const nil::NilState s = nil::nil_eval(g, time);
        t.rows.push_back({time, s.point.x, s.point.y, s.point.z, s.velocity.dx, s.velocity.dy, s.velocity.dz});
      }
      write_table(t, nil_sink.output_format(), buffer);
    }
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << " (residual " << format_number(e.residual()) << ")\n";
    return kExitFailure;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  if (sink == nullptr || sink->path.empty()) {
    out << buffer.str();
    out.flush();
    if (!out) {
      err << "error: write to standard output failed\n";
      return kExitFailure;
    }
    return kExitOk;
  }
  std::ofstream file(sink->path, std::ios::binary | std::ios::trunc);
  file << buffer.str();
  file.close();
  if (!file) {
    err << "error: cannot write '" << sink->path << "'\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace solgeom::cli
