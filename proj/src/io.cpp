#include "dp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace dp {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

MatrixXd read_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw InputError(field + ": expected a non-empty array of rows");
  }
  const Index rows = static_cast<Index>(j.size());
  Index cols = -1;
  MatrixXd m;
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) {
      throw InputError(field + ": row " + std::to_string(r) + " is not an array");
    }
    const Index n = static_cast<Index>(row.size());
    if (cols < 0) {
      if (n == 0) throw InputError(field + ": row 0 is empty");
      cols = n;
      m.resize(rows, cols);
    } else if (n != cols) {
      throw InputError(field + ": row " + std::to_string(r) + " has " +
                       std::to_string(n) + " entries, expected " +
                       std::to_string(cols));
    }
    for (Index c = 0; c < n; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        throw InputError(field + "[" + std::to_string(r) + "][" +
                         std::to_string(c) + "] is not a number");
      }
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

void write_matrix(std::ostringstream& os, const MatrixXd& m) {
  os << "[\n";
  for (Index r = 0; r < m.rows(); ++r) {
    os << "    [";
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) os << ", ";
      os << format_double(m(r, c));
    }
    os << (r + 1 < m.rows() ? "],\n" : "]\n");
  }
  os << "  ]";
}

ordered_json matrix_to_json(const MatrixXd& m) {
  ordered_json out = ordered_json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

ordered_json tolerances_json(const Tolerances& tol) {
  ordered_json t;
  t["validation"] = tol.validation;
  t["stochastic"] = tol.stochastic;
  t["equality"] = tol.equality;
  return t;
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("problem file: expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "name" && key != "seed" && key != "p_xy" &&
        key != "distortion" && key != "metric") {
      throw InputError("problem file: unknown field '" + key + "'");
    }
  }
  ProblemFile f;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw InputError("name: expected a string");
    f.name = j["name"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw InputError("seed: expected a nonnegative integer");
    }
    f.seed = j["seed"].get<std::uint64_t>();
  }
  if (!j.contains("p_xy")) throw InputError("problem file: missing field 'p_xy'");
  f.p_xy = read_matrix(j["p_xy"], "p_xy");
  if (j.contains("distortion")) f.distortion = read_matrix(j["distortion"], "distortion");
  if (j.contains("metric")) f.metric = read_matrix(j["metric"], "metric");
  return f;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("write failed for '" + path + "'");
}

ProblemFile load_problem(const std::string& path) {
  return parse_problem(read_text(path));
}

std::string serialize(const ProblemFile& f) {
  std::ostringstream os;
  os << "{\n";
  if (!f.name.empty()) os << "  \"name\": " << json(f.name).dump() << ",\n";
  if (f.seed) os << "  \"seed\": " << *f.seed << ",\n";
  os << "  \"p_xy\": ";
  write_matrix(os, f.p_xy);
  if (f.distortion) {
    os << ",\n  \"distortion\": ";
    write_matrix(os, *f.distortion);
  }
  if (f.metric) {
    os << ",\n  \"metric\": ";
    write_matrix(os, *f.metric);
  }
  os << "\n}\n";
  return os.str();
}

Problem to_problem(const ProblemFile& f, Tolerances tol) {
  const Index nx = f.p_xy.rows();
  MatrixXd d = f.distortion ? *f.distortion : hamming(nx);
  MatrixXd h = f.metric ? *f.metric : hamming(nx);
  return Problem(f.p_xy, std::move(d), std::move(h), tol);
}

ProblemFile generate_problem(std::uint64_t seed, Index nx, Index ny,
                             bool random_distortion) {
  if (nx < 2 || ny < 1) throw InputError("gen: need nx >= 2 and ny >= 1");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  ProblemFile f;
  f.name = "gen-" + std::to_string(seed) + "-" + std::to_string(nx) + "x" +
           std::to_string(ny);
  f.seed = seed;
  f.p_xy.resize(nx, ny);
  for (Index x = 0; x < nx; ++x) {
    for (Index y = 0; y < ny; ++y) {
      double u = 0.0;
      while (u == 0.0) u = uniform();
      f.p_xy(x, y) = u;
    }
  }
  f.p_xy /= f.p_xy.sum();
  if (random_distortion) {
    MatrixXd d(nx, nx);
    for (Index x = 0; x < nx; ++x)
      for (Index xh = 0; xh < nx; ++xh) d(x, xh) = uniform();
    f.distortion = d;
  } else {
    f.distortion = hamming(nx);
  }
  f.metric = hamming(nx);
  return f;
}

std::string curve_json(const CurveReport& report, const Tolerances& tol) {
  const PiecewiseLinearDP& c = report.curve;
  ordered_json j;
  j["method"] = to_string(report.method);
  j["breakpoints"] = c.breakpoints();
  ordered_json slopes = ordered_json::array();
  ordered_json intercepts = ordered_json::array();
  for (const auto& s : c.segments()) {
    slopes.push_back(s.slope);
    intercepts.push_back(s.intercept);
  }
  j["slopes"] = slopes;
  j["intercepts"] = intercepts;
  j["p_star"] = c.p_star();
  j["d_star"] = c.d_star();
  j["tolerances"] = tolerances_json(tol);
  ordered_json est = ordered_json::array();
  for (const auto& e : report.estimators) {
    ordered_json item;
    item["P"] = e.p_level;
    item["q"] = matrix_to_json(e.q);
    est.push_back(std::move(item));
  }
  j["estimators"] = est;
  j["lp_solves"] = report.solves;
  return j.dump(2) + "\n";
}

std::string solve_json(const SolveReport& r, const Tolerances& tol) {
  ordered_json j;
  j["P"] = r.p_level;
  j["form"] = to_string(r.form);
  j["value"] = r.value;
  j["duality_gap"] = r.gap;
  j["estimator"] = matrix_to_json(r.estimator);
  j["coupling"] = matrix_to_json(r.coupling);
  ordered_json dual;
  dual["w"] = std::vector<double>(r.dual.w.data(), r.dual.w.data() + r.dual.w.size());
  dual["r"] = std::vector<double>(r.dual.r.data(), r.dual.r.data() + r.dual.r.size());
  dual["nu"] = std::vector<double>(r.dual.nu.data(), r.dual.nu.data() + r.dual.nu.size());
  dual["l"] = r.dual.l;
  dual["objective"] = r.dual.objective;
  j["dual"] = dual;
  j["tolerances"] = tolerances_json(tol);
  return j.dump(2) + "\n";
}

std::string curve_csv(const PiecewiseLinearDP& curve, Index samples) {
  if (samples < 2) throw InputError("csv: need at least two samples");
  std::ostringstream os;
  os << "P,D,slope\n";
  for (Index i = 0; i < samples; ++i) {
    const double p = static_cast<double>(i) / static_cast<double>(samples - 1);
    os << format_double(p) << ',' << format_double(curve(p)) << ','
       << format_double(curve.slope_at(p)) << "\n";
  }
  return os.str();
}

namespace {

constexpr double kWidth = 1000.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

struct Frame {
  double x0, x1, y0, y1;
  double sx(double x) const {
    return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight);
  }
  double sy(double y) const {
    return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
  }
};

void pad(double& lo, double& hi) {
  double span = hi - lo;
  if (!(span > 0.0)) span = std::max(std::abs(hi), 1.0) * 0.1;
  lo -= 0.05 * span;
  hi += 0.05 * span;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void axes(std::ostringstream& os, const Frame& f, const std::string& title,
          const std::string& xlabel, const std::string& ylabel) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" "
        "height=\"600\" viewBox=\"0 0 1000 600\">\n"
     << "<rect width=\"1000\" height=\"600\" fill=\"white\"/>\n";
  os << "<text x=\"500\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"18\">"
     << title << "</text>\n";
  const double bx = f.sx(f.x0), ex = f.sx(f.x1);
  const double by = f.sy(f.y0), ey = f.sy(f.y1);
  os << "<rect x=\"" << bx << "\" y=\"" << ey << "\" width=\"" << ex - bx
     << "\" height=\"" << by - ey << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 5.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 5.0;
    os << "<text x=\"" << f.sx(xv) << "\" y=\"" << by + 20
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       << num(xv) << "</text>\n";
    os << "<text x=\"" << bx - 8 << "\" y=\"" << f.sy(yv) + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
       << num(yv) << "</text>\n";
  }
  os << "<text x=\"500\" y=\"" << kHeight - 15
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
     << xlabel << "</text>\n";
  os << "<text x=\"20\" y=\"300\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"14\" transform=\"rotate(-90 20 300)\">"
     << ylabel << "</text>\n";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string curve_svg(const PiecewiseLinearDP& curve, const std::string& title) {
  double lo = curve(1.0), hi = curve(0.0);
  pad(lo, hi);
  const Frame f{0.0, 1.0, lo, hi};
  std::ostringstream os;
  axes(os, f, escape(title), "perception level P", "D(P)");
  os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (int i = 0; i <= 200; ++i) {
    const double p = i / 200.0;
    os << f.sx(p) << ',' << f.sy(curve(p)) << ' ';
  }
  os << "\"/>\n";
  for (double b : curve.breakpoints()) {
    if (b > 1.0) continue;
    os << "<circle cx=\"" << f.sx(b) << "\" cy=\"" << f.sy(curve(b))
       << "\" r=\"5\" fill=\"#d62728\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string s2_svg(const CurveReport& report, const std::string& title) {
  const auto& pts = report.s2;
  if (pts.empty()) throw InputError("s2 plot: no projected vertices");
  double x0 = pts[0].p0, x1 = x0, y0 = pts[0].p1, y1 = y0;
  for (const auto& p : pts) {
    x0 = std::min(x0, p.p0);
    x1 = std::max(x1, p.p0);
    y0 = std::min(y0, p.p1);
    y1 = std::max(y1, p.p1);
  }
  pad(x0, x1);
  pad(y0, y1);
  const Frame f{x0, x1, y0, y1};
  std::ostringstream os;
  axes(os, f, escape(title), "p0 = w.P_Y + r.P_X", "p1 = -l");
  for (const auto& p : pts) {
    os << "<circle cx=\"" << f.sx(p.p0) << "\" cy=\"" << f.sy(p.p1)
       << "\" r=\"3\" fill=\"#999999\"/>\n";
  }
  if (report.hull.size() >= 2) {
    os << "<polygon fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (Index i : report.hull) {
      const auto& p = pts[static_cast<std::size_t>(i)];
      os << f.sx(p.p0) << ',' << f.sy(p.p1) << ' ';
    }
    os << "\"/>\n";
  }
  for (Index i : report.hull) {
    const auto& p = pts[static_cast<std::size_t>(i)];
    os << "<circle cx=\"" << f.sx(p.p0) << "\" cy=\"" << f.sy(p.p1)
       << "\" r=\"4.5\" fill=\"#1f77b4\"/>\n";
  }
  for (Index i : report.active) {
    const auto& p = pts[static_cast<std::size_t>(i)];
    os << "<circle cx=\"" << f.sx(p.p0) << "\" cy=\"" << f.sy(p.p1)
       << "\" r=\"6\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

VectorXd parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("cannot parse '" + item + "' as a number");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw InputError("cannot parse '" + item + "' as a number");
    vals.push_back(v);
  }
  if (vals.empty()) throw InputError("empty vector");
  return Eigen::Map<VectorXd>(vals.data(), static_cast<Index>(vals.size()));
}

}  // namespace dp
