#pragma once

/**
 * @file   curveio.hpp
 * @brief  Point-list ingestion, arclength sampling, JSON fit reports, SVG
 *         rendering and the request dispatcher behind the local JSON endpoint.
 */

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "elspline/elastica.hpp"
#include "elspline/error.hpp"
#include "elspline/geometry.hpp"
#include "elspline/hermite.hpp"
#include "elspline/quadrature.hpp"
#include "elspline/spline.hpp"

namespace elspline::io {

using json = nlohmann::json;

inline constexpr int kProtocolVersion = 1;
inline constexpr double kDefaultSpacingDivisor = 200.0;

struct PointsDocument {
  std::vector<Point> points;
  std::optional<Clamp> clamp;  ///< degrees
};

struct Polyline {
  std::vector<Point> vertices;
};

// --------------------------------------------------------------------------
// parsing

namespace detail {

[[nodiscard]] inline int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

[[nodiscard]] inline double finite_number(const json& v, const std::string& what) {
  if (!v.is_number()) throw Error(ErrorCode::ParseError, what + " is not a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorCode::ParseError, what + " is not finite");
  return x;
}

[[nodiscard]] inline Point point_from_json(const json& p, std::size_t index) {
  const std::string what = "point " + std::to_string(index + 1);
  if (p.is_array() && p.size() == 2) return {finite_number(p[0], what + " x"), finite_number(p[1], what + " y")};
  if (p.is_object() && p.contains("x") && p.contains("y"))
    return {finite_number(p["x"], what + " x"), finite_number(p["y"], what + " y")};
  throw Error(ErrorCode::ParseError, what + ": expected [x, y] or {\"x\": .., \"y\": ..}");
}

[[nodiscard]] inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[nodiscard]] inline std::optional<double> parse_double(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (used != t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

inline void validate_document(const PointsDocument& doc) {
  if (doc.points.size() < 2) throw Error(ErrorCode::ParseError, "at least two points are required");
  for (std::size_t j = 0; j + 1 < doc.points.size(); ++j)
    if (doc.points[j] == doc.points[j + 1])
      throw Error(ErrorCode::CoincidentPoints,
                  "points " + std::to_string(j + 1) + " and " + std::to_string(j + 2) + " coincide");
}

/// Build a document from its JSON form: {"points": [[x, y], ...], "endpoint_mode": {"theta_first", "theta_last"}}.
[[nodiscard]] inline PointsDocument document_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "document must be a JSON object");
  if (!j.contains("points") || !j["points"].is_array()) throw Error(ErrorCode::ParseError, "missing \"points\" array");
  PointsDocument doc;
  const json& pts = j["points"];
  for (std::size_t i = 0; i < pts.size(); ++i) doc.points.push_back(detail::point_from_json(pts[i], i));
  const char* mode_key = j.contains("endpoint_mode") ? "endpoint_mode" : (j.contains("clamp") ? "clamp" : nullptr);
  if (mode_key && !j[mode_key].is_null()) {
    const json& m = j[mode_key];
    if (!m.is_object() || !m.contains("theta_first") || !m.contains("theta_last"))
      throw Error(ErrorCode::ParseError, std::string(mode_key) + " needs theta_first and theta_last (degrees)");
    doc.clamp = Clamp{detail::finite_number(m["theta_first"], "theta_first"),
                      detail::finite_number(m["theta_last"], "theta_last")};
  }
  validate_document(doc);
  return doc;
}

/// Plain text: one "x,y" (or "x y") per line; blank lines and '#' comments ignored.
[[nodiscard]] inline PointsDocument parse_points_text(const std::string& text) {
  PointsDocument doc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    std::string a;
    std::string b;
    const auto comma = t.find(',');
    if (comma != std::string::npos) {
      a = t.substr(0, comma);
      b = t.substr(comma + 1);
    } else {
      const auto space = t.find_first_of(" \t");
      if (space != std::string::npos) {
        a = t.substr(0, space);
        b = t.substr(space + 1);
      }
    }
    const auto x = detail::parse_double(a);
    const auto y = detail::parse_double(b);
    if (!x || !y) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected x,y but got \"" + t + "\"");
    doc.points.push_back({*x, *y});
  }
  validate_document(doc);
  return doc;
}

/// Auto-detect JSON (leading '{') or the x,y text fallback.
[[nodiscard]] inline PointsDocument parse_points_document(const std::string& text) {
  const std::string t = detail::trim(text);
  if (t.empty() || t.front() != '{') return parse_points_text(text);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0)) + ": invalid JSON");
  }
  return document_from_json(j);
}

[[nodiscard]] inline json document_to_json(const PointsDocument& doc) {
  json j;
  j["points"] = json::array();
  for (const Point& p : doc.points) j["points"].push_back({p.x, p.y});
  if (doc.clamp) j["endpoint_mode"] = {{"theta_first", doc.clamp->theta_first}, {"theta_last", doc.clamp->theta_last}};
  return j;
}

// --------------------------------------------------------------------------
// sampling

/// Arclength of the unit elastica between parameters a and b.
[[nodiscard]] inline double elastica_arclength(double a, double b) {
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / (kPi / 8.0))));
  return quad::integrate([](double t) { return elastica_tangent(t).speed; }, a, b, panels);
}

[[nodiscard]] inline double segment_length(const SCurve& s) {
  if (!s.params) return s.breadth;
  return s.scale * elastica_arclength(s.params->t1, s.params->t2);
}

/**
 * @brief Vertices at uniform arclength, n = round(S / spacing) intervals.
 *
 * Each parameter is found by Newton steps dt = ds * sqrt(1 + sin^2 t) / scale
 * on the arclength measured from the previous vertex. Endpoints are copied.
 */
[[nodiscard]] inline Polyline sample_segment(const SCurve& s, double target_spacing) {
  if (!(target_spacing > 0.0)) throw Error(ErrorCode::DomainError, "spacing must be positive");
  const double total = segment_length(s);
  if (total / target_spacing > 1e6) throw Error(ErrorCode::DomainError, "spacing too small for segment length");
  const int n = std::max(1, static_cast<int>(std::lround(total / target_spacing)));
  Polyline out;
  out.vertices.reserve(static_cast<std::size_t>(n) + 1);
  out.vertices.push_back(s.start);
  if (!s.params) {
    for (int i = 1; i < n; ++i) out.vertices.push_back(s.point_at(static_cast<double>(i) / n));
  } else {
    const double ds = total / n / s.scale;  // unit-elastica arclength per step
    const double t_end = s.params->t2;
    double t_prev = s.params->t1;
    for (int i = 1; i < n; ++i) {
      double t = t_prev + ds / elastica_tangent(t_prev).speed;
      for (int k = 0; k < 20; ++k) {
        const double err = elastica_arclength(t_prev, t) - ds;
        const double dt = err / elastica_tangent(t).speed;
        t = std::min(t - dt, t_end);
        if (std::abs(dt) < 1e-15) break;
      }
      out.vertices.push_back(s.point_at(t));
      t_prev = t;
    }
  }
  out.vertices.push_back(s.end);
  return out;
}

[[nodiscard]] inline double polyline_length(const Polyline& p) {
  double total = 0.0;
  for (std::size_t i = 1; i < p.vertices.size(); ++i) total += norm(p.vertices[i] - p.vertices[i - 1]);
  return total;
}

// --------------------------------------------------------------------------
// reports

/// Round to 12 significant digits so that the serialized text is fixed.
[[nodiscard]] inline double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

[[nodiscard]] inline json number(double x) { return json(round12(x)); }

[[nodiscard]] inline json constants_json() {
  const ElasticaConstants& c = constants();
  return {{"d", number(c.d)}, {"t_star", number(c.t_star)}, {"t_bar", number(c.t_bar)}, {"psi_deg", number(rad_to_deg(c.psi))}};
}

[[nodiscard]] inline json segment_json(const SCurve& s) {
  json j;
  j["alpha_deg"] = number(rad_to_deg(s.angles.alpha));
  j["beta_deg"] = number(rad_to_deg(s.angles.beta));
  j["energy"] = number(s.energy);
  j["breadth"] = number(s.breadth);
  j["params_t1"] = s.params ? number(s.params->t1) : json(nullptr);
  j["params_t2"] = s.params ? number(s.params->t2) : json(nullptr);
  j["kind"] = to_string(s.kind);
  j["kappa_start"] = number(s.kappa_start);
  j["kappa_end"] = number(s.kappa_end);
  return j;
}

[[nodiscard]] inline json node_json(const G2NodeRecord& r) {
  return {{"node", r.node + 1},
          {"psi_deg", number(rad_to_deg(r.psi))},
          {"alpha_in_deg", number(rad_to_deg(r.alpha_in))},
          {"alpha_out_deg", number(rad_to_deg(r.alpha_out))},
          {"kappa_in", number(r.kappa_in)},
          {"kappa_out", number(r.kappa_out)},
          {"kappa_jump", number(r.kappa_jump)},
          {"relative_jump", number(r.relative_jump)},
          {"certified_by_psi", r.certified_by_psi},
          {"g2_within_tol", r.g2_within_tol}};
}

[[nodiscard]] inline json polyline_json(const Polyline& p) {
  json arr = json::array();
  for (const Point& v : p.vertices) arr.push_back({number(v.x), number(v.y)});
  return arr;
}

[[nodiscard]] inline json fit_report(const SplineSolution& sol, const G2Report& g2) {
  json j;
  j["protocol_version"] = kProtocolVersion;
  j["total_energy"] = number(sol.total_energy);
  j["converged"] = sol.converged;
  j["sweeps"] = sol.sweeps_used;
  j["constants"] = constants_json();
  j["per_segment"] = json::array();
  for (const auto& s : sol.segments) j["per_segment"].push_back(segment_json(s));
  j["per_node"] = json::array();
  for (const auto& r : g2.nodes) j["per_node"].push_back(node_json(r));
  return j;
}

[[nodiscard]] inline json error_json(ErrorCode code, const std::string& message) {
  return {{"protocol_version", kProtocolVersion}, {"error", to_string(code)}, {"message", message}};
}

/// Deterministic text: sorted keys (nlohmann objects are ordered maps), two-space indent.
[[nodiscard]] inline std::string serialize(const json& j) { return j.dump(2) + "\n"; }

// --------------------------------------------------------------------------
// fitting

struct FitOptions {
  std::optional<double> spacing;  ///< absolute; default breadth / 200 per segment
  bool labels = true;
  SplineTolerances tolerances;
};

struct FitResult {
  SplineSolution solution;
  G2Report g2;
  json report;
  std::vector<Polyline> polylines;
};

[[nodiscard]] inline SplineProblem make_problem(const PointsDocument& doc, const FitOptions& opt = {}) {
  SplineProblem p;
  p.points = doc.points;
  if (doc.clamp) p.clamp = Clamp{deg_to_rad(doc.clamp->theta_first), deg_to_rad(doc.clamp->theta_last)};
  p.tolerances = opt.tolerances;
  return p;
}

[[nodiscard]] inline std::vector<Polyline> sample_all(const std::vector<SCurve>& segs, const FitOptions& opt) {
  std::vector<Polyline> out;
  out.reserve(segs.size());
  for (const auto& s : segs) out.push_back(sample_segment(s, opt.spacing ? *opt.spacing : s.breadth / kDefaultSpacingDivisor));
  return out;
}

[[nodiscard]] inline FitResult run_fit(const PointsDocument& doc, const FitOptions& opt = {}) {
  validate_document(doc);
  FitResult r;
  r.solution = optimize(make_problem(doc, opt));
  r.g2 = g2_report(r.solution);
  r.report = fit_report(r.solution, r.g2);
  r.polylines = sample_all(r.solution.segments, opt);
  return r;
}

// --------------------------------------------------------------------------
// SVG

namespace detail {

[[nodiscard]] inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

}  // namespace detail

/// Render the fit; screen y grows downward so y is negated.
[[nodiscard]] inline std::string render_svg(const std::vector<Point>& points, const std::vector<Polyline>& polylines,
                                            const G2Report& g2, bool labels = true) {
  double minx = points.front().x;
  double maxx = minx;
  double miny = points.front().y;
  double maxy = miny;
  auto grow = [&](Point p) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  };
  for (const auto& p : points) grow(p);
  for (const auto& pl : polylines)
    for (const auto& v : pl.vertices) grow(v);
  const double extent = std::max({maxx - minx, maxy - miny, 1e-9});
  const double margin = 0.08 * extent;
  const double width = maxx - minx + 2.0 * margin;
  const double height = maxy - miny + 2.0 * margin;
  const double stroke = 0.004 * extent;
  const double marker = 0.012 * extent;
  auto X = [&](double x) { return detail::fmt(x - minx + margin); };
  auto Y = [&](double y) { return detail::fmt(maxy - y + margin); };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << detail::fmt(width) << ' ' << detail::fmt(height)
    << "\" width=\"800\" height=\"" << detail::fmt(800.0 * height / width) << "\">\n";
  o << "  <!-- y axis flipped: mathematical y points up, screen y points down -->\n";
  o << "  <g fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"" << detail::fmt(stroke) << "\">\n";
  for (std::size_t i = 0; i < polylines.size(); ++i) {
    o << "    <path id=\"segment-" << i + 1 << "\" d=\"";
    const auto& vs = polylines[i].vertices;
    for (std::size_t k = 0; k < vs.size(); ++k) o << (k == 0 ? "M" : " L") << X(vs[k].x) << ' ' << Y(vs[k].y);
    o << "\"/>\n";
  }
  o << "  </g>\n";
  o << "  <g stroke=\"none\">\n";
  for (std::size_t j = 0; j < points.size(); ++j) {
    std::string color = "#333333";
    if (j > 0 && j + 1 < points.size() && j - 1 < g2.nodes.size())
      color = g2.nodes[j - 1].g2_within_tol ? "#2e8b3a" : "#d98c00";
    o << "    <circle cx=\"" << X(points[j].x) << "\" cy=\"" << Y(points[j].y) << "\" r=\"" << detail::fmt(marker)
      << "\" fill=\"" << color << "\"/>\n";
  }
  o << "  </g>\n";
  if (labels && !g2.nodes.empty()) {
    o << "  <g font-family=\"sans-serif\" font-size=\"" << detail::fmt(3.0 * marker) << "\" fill=\"#222222\">\n";
    for (const auto& r : g2.nodes) {
      const Point p = points[r.node];
      char buf[64];
      std::snprintf(buf, sizeof buf, "psi=%.2f deg %s", rad_to_deg(r.psi), r.g2_within_tol ? "G2" : "not G2");
      o << "    <text x=\"" << X(p.x + 1.5 * marker) << "\" y=\"" << Y(p.y + 1.5 * marker) << "\">" << buf << "</text>\n";
    }
    o << "  </g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

// --------------------------------------------------------------------------
// request dispatch

[[nodiscard]] inline UnitTangent tangent_from_json(const json& j, const std::string& what) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, what + " must be an object {x, y, theta_deg}");
  for (const char* k : {"x", "y", "theta_deg"})
    if (!j.contains(k)) throw Error(ErrorCode::ParseError, what + " is missing \"" + k + "\"");
  return {{detail::finite_number(j["x"], what + ".x"), detail::finite_number(j["y"], what + ".y")},
          deg_to_rad(detail::finite_number(j["theta_deg"], what + ".theta_deg"))};
}

/// Hermite problem from (alpha, beta) in degrees on the chord (0,0) -> (1,0).
[[nodiscard]] inline SCurve hermite_from_angles(double alpha_deg, double beta_deg) {
  return optimal_scurve({{0.0, 0.0}, deg_to_rad(alpha_deg)}, {{1.0, 0.0}, deg_to_rad(beta_deg)});
}

[[nodiscard]] inline json handle_fit(const json& payload) {
  const PointsDocument doc = document_from_json(payload);
  FitOptions opt;
  if (payload.contains("spacing") && !payload["spacing"].is_null()) {
    const double s = detail::finite_number(payload["spacing"], "spacing");
    if (!(s > 0.0)) throw Error(ErrorCode::ParseError, "spacing must be positive");
    opt.spacing = s;
  }
  const FitResult r = run_fit(doc, opt);
  json out = r.report;
  out["polylines"] = json::array();
  for (const auto& p : r.polylines) out["polylines"].push_back(polyline_json(p));
  return out;
}

[[nodiscard]] inline json handle_hermite(const json& payload) {
  SCurve s;
  if (payload.contains("start") || payload.contains("end")) {
    if (!payload.contains("start") || !payload.contains("end"))
      throw Error(ErrorCode::ParseError, "hermite needs both \"start\" and \"end\"");
    const UnitTangent u = tangent_from_json(payload["start"], "start");
    const UnitTangent v = tangent_from_json(payload["end"], "end");
    if (u.base == v.base) throw Error(ErrorCode::CoincidentPoints, "start and end coincide");
    s = optimal_scurve(u, v);
  } else {
    if (!payload.contains("alpha_deg") || !payload.contains("beta_deg"))
      throw Error(ErrorCode::ParseError, "hermite needs alpha_deg and beta_deg, or start and end tangents");
    s = hermite_from_angles(detail::finite_number(payload["alpha_deg"], "alpha_deg"),
                            detail::finite_number(payload["beta_deg"], "beta_deg"));
  }
  double spacing = s.breadth / kDefaultSpacingDivisor;
  if (payload.contains("spacing") && !payload["spacing"].is_null()) {
    spacing = detail::finite_number(payload["spacing"], "spacing");
    if (!(spacing > 0.0)) throw Error(ErrorCode::ParseError, "spacing must be positive");
  }
  json seg = segment_json(s);
  seg["samples"] = polyline_json(sample_segment(s, spacing));
  return {{"protocol_version", kProtocolVersion}, {"segment", seg}};
}

/**
 * @brief Dispatch one request object {op, ...}. Payload fields sit next to
 * "op" or inside a "payload" object. Never throws.
 */
[[nodiscard]] inline json handle_request(const json& request) noexcept {
  try {
    if (!request.is_object() || !request.contains("op") || !request["op"].is_string())
      return error_json(ErrorCode::ParseError, "request must be an object with a string \"op\"");
    const std::string op = request["op"].get<std::string>();
    const json& payload = request.contains("payload") ? request["payload"] : request;
    if (op == "constants") return {{"protocol_version", kProtocolVersion}, {"constants", constants_json()}};
    if (op == "fit") return handle_fit(payload);
    if (op == "hermite") return handle_hermite(payload);
    return error_json(ErrorCode::ParseError, "unknown op \"" + op + "\"");
  } catch (const Error& e) {
    return error_json(e.code(), e.message());
  } catch (const std::exception& e) {
    return {{"protocol_version", kProtocolVersion}, {"error", "internal"}, {"message", e.what()}};
  } catch (...) {
    return {{"protocol_version", kProtocolVersion}, {"error", "internal"}, {"message", "unknown failure"}};
  }
}

/// Text body in, text body out.
[[nodiscard]] inline std::string handle_request_text(const std::string& body) noexcept {
  json req;
  try {
    req = json::parse(body);
  } catch (const std::exception&) {
    return error_json(ErrorCode::ParseError, "request body is not valid JSON").dump();
  }
  return handle_request(req).dump();
}

}  // namespace elspline::io
