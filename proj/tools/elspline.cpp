// Command-line front end: fit, hermite, constants, verify, serve.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "elspline/curveio.hpp"
#include "elspline/server.hpp"
#include "elspline/sweeps.hpp"

namespace {

using namespace elspline;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitInternal = 4;

int exit_code_for(ErrorCode code) { return code == ErrorCode::NoConvergence ? kExitNoConvergence : kExitValidation; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

struct FitArgs {
  std::string input;
  std::string svg;
  std::string report;
  std::string clamp;
  double spacing = 0.0;
};

int run_fit_command(const FitArgs& a) {
  io::PointsDocument doc;
  try {
    doc = io::parse_points_document(read_file(a.input));
    if (!a.clamp.empty()) {
      const auto comma = a.clamp.find(',');
      if (comma == std::string::npos) throw Error(ErrorCode::ParseError, "--clamp expects theta_first,theta_last");
      doc.clamp = Clamp{std::stod(a.clamp.substr(0, comma)), std::stod(a.clamp.substr(comma + 1))};
    }
  } catch (const Error& e) {
    std::cerr << a.input << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument&) {
    std::cerr << "--clamp: not a number\n";
    return kExitValidation;
  }

  io::FitOptions opt;
  if (a.spacing > 0.0) opt.spacing = a.spacing;
  try {
    const io::FitResult r = io::run_fit(doc, opt);
    emit(a.report, io::serialize(r.report));
    if (!a.svg.empty()) write_file(a.svg, io::render_svg(doc.points, r.polylines, r.g2, opt.labels));
    if (!r.solution.converged) {
      std::cerr << "optimizer stopped after " << r.solution.sweeps_used << " sweeps without converging\n";
      return kExitNoConvergence;
    }
    return kExitOk;
  } catch (const Error& e) {
    emit(a.report, io::serialize(io::error_json(e.code(), e.message())));
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

int run_hermite_command(double alpha, double beta, bool deg) {
  if (!deg) {
    alpha = rad_to_deg(alpha);
    beta = rad_to_deg(beta);
  }
  const SCurve s = io::hermite_from_angles(alpha, beta);
  io::json j = io::segment_json(s);
  j["protocol_version"] = io::kProtocolVersion;
  std::cout << io::serialize(j);
  return kExitOk;
}

int run_constants_command() {
  const ElasticaConstants& c = constants();
  std::printf("d = %.15g\n", c.d);
  std::printf("d_squared = %.15g\n", c.d * c.d);
  std::printf("t_star = %.15g\n", c.t_star);
  std::printf("t_bar = %.15g\n", c.t_bar);
  std::printf("psi_bar = %.15g\n", c.psi_bar);
  std::printf("psi = %.15g\n", c.psi);
  std::printf("psi_deg = %.15g\n", rad_to_deg(c.psi));
  return kExitOk;
}

int run_verify_command(int grid) {
  bool ok = true;
  const ElasticaConstants& c = constants();
  const double w = w_function({-c.t_star, c.t_star});
  const double b = chord_angles({0.0, c.t_bar}).beta - kHalfPi;
  std::printf("constants       W(-t*,t*) = %.3e  beta(0,t_bar)-pi/2 = %.3e  psi_deg = %.6f\n", w, b, rad_to_deg(c.psi));
  ok = ok && std::abs(w) <= 1e-10 && std::abs(b) <= 1e-10;

  for (const auto& r : sweeps::det_sweep(grid)) {
    std::printf("det DQ %-6s  points %6d  nonnegative %d  min(-det) = %.6e\n", r.name.c_str(), r.points, r.nonnegative,
                r.min_margin);
    ok = ok && r.nonnegative == 0;
  }
  const auto rt = sweeps::round_trip_sweep(21);
  std::printf("round trip      points %d  failures %d  max residual = %.3e\n", rt.points, rt.failures, rt.max_residual);
  ok = ok && rt.failures == 0 && rt.max_residual <= 1e-10;

  const auto sy = sweeps::symmetry_sweep(21);
  std::printf("symmetry        swap = %.3e  reflect = %.3e\n", sy.max_swap, sy.max_reflect);
  ok = ok && sy.max_swap <= 1e-10 && sy.max_reflect <= 1e-10;

  const auto gr = sweeps::gradient_sweep(15, 1e-5, 0.05);
  std::printf("gradient        points %d  max relative error = %.3e\n", gr.points, gr.max_relative_error);
  ok = ok && gr.max_relative_error <= 1e-5;

  double worst = 0.0;
  int mismatches = 0;
  for (const auto& r : sweeps::beta_star_sweep(13, 41)) {
    worst = std::max(worst, std::abs(r.beta_star));
    mismatches += r.sign_mismatches;
  }
  std::printf("beta*           max |beta*| = %.12f  bound = %.12f  sign mismatches %d\n", worst, kHalfPi - c.psi,
              mismatches);
  ok = ok && worst <= kHalfPi - c.psi + 1e-9 && mismatches == 0;

  std::printf("%s\n", ok ? "all invariants hold" : "INVARIANT VIOLATED");
  return ok ? kExitOk : kExitInternal;
}

int run_serve_command(const std::string& host, int port) {
  httplib::Server server;
  io::configure_server(server);
  if (port == 0) {
    port = server.bind_to_any_port(host);
    if (port < 0) {
      std::cerr << "cannot bind\n";
      return kExitValidation;
    }
    std::cout << "listening on http://" << host << ":" << port << "/api" << std::endl;
    server.listen_after_bind();
    return kExitOk;
  }
  std::cout << "listening on http://" << host << ":" << port << "/api" << std::endl;
  if (!server.listen(host, port)) {
    std::cerr << "cannot listen on port " << port << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restricted elastic splines"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a spline through a points file (JSON or x,y lines)");
  fit_cmd->add_option("points-file", fit.input, "Input document")->required();
  fit_cmd->add_option("--svg", fit.svg, "Write an SVG rendering");
  fit_cmd->add_option("--report", fit.report, "Write the JSON report (default stdout)");
  fit_cmd->add_option("--clamp", fit.clamp, "Clamp end tangents: theta_first,theta_last in degrees");
  fit_cmd->add_option("--spacing", fit.spacing, "Sampling spacing (default breadth/200 per segment)")
      ->check(CLI::PositiveNumber);

  double alpha = 0.0;
  double beta = 0.0;
  bool deg = false;
  auto* herm_cmd = app.add_subcommand("hermite", "Optimal s-curve for chord angles (alpha, beta)");
  herm_cmd->add_option("--alpha", alpha, "Chord angle at the start")->required();
  herm_cmd->add_option("--beta", beta, "Chord angle at the end")->required();
  herm_cmd->add_flag("--deg", deg, "Angles are in degrees (default radians)");

  auto* const_cmd = app.add_subcommand("constants", "Print d, t*, t_bar and Psi");

  int grid = 100;
  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant sweeps and print margins");
  verify_cmd->add_option("--grid", grid, "Grid size for the Jacobian sweep")->check(CLI::Range(2, 2000));

  int port = 8080;
  std::string host = "127.0.0.1";
  auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON protocol at POST /api");
  serve_cmd->add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", host, "Bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*fit_cmd) return run_fit_command(fit);
    if (*herm_cmd) return run_hermite_command(alpha, beta, deg);
    if (*const_cmd) return run_constants_command();
    if (*verify_cmd) return run_verify_command(grid);
    if (*serve_cmd) return run_serve_command(host, port);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
