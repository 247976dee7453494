#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metriclab/closed_forms.hpp"
#include "metriclab/geometry.hpp"
#include "metriclab/kobayashi.hpp"
#include "metriclab/qh_engine.hpp"
#include "metriclab/suites.hpp"

#ifndef METRICLAB_VERSION
#define METRICLAB_VERSION "0.0.0"
#endif

namespace {

using metriclab::Domain;
using metriclab::Point;
using nlohmann::ordered_json;

// Exit-code contract: 0 pass, 1 failed verification, 2 invalid spec or
// arguments, 3 metric/domain incompatibility, 4 unsound suite/domain pairing.
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitSpec = 2;
constexpr int kExitIncompatible = 3;
constexpr int kExitUnsound = 4;

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.7f", v);
  return buf;
}

std::string format_record(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Point parse_point(const std::string& text, const char* flag) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw metriclab::SpecError(std::string(flag) + " needs numbers, got: " + text);
    }
  }
  if (parts.size() == 1) return Point::line(parts[0]);
  if (parts.size() == 2) return Point::planar(parts[0], parts[1]);
  throw metriclab::SpecError(std::string(flag) + " needs x,y (or a single x), got: " + text);
}

Domain load_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw metriclab::SpecError("cannot read domain file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw metriclab::SpecError("bad JSON in " + path + ": " + e.what());
  }
  return Domain::from_json(j);
}

ordered_json point_json(const Point& p) {
  auto arr = ordered_json::array();
  arr.push_back(p.x);
  if (p.dim == 2) arr.push_back(p.y);
  return arr;
}

// Every output embeds the run manifest; identical runs reproduce identical
// bytes except for the wall-time field.
struct Manifest {
  std::string command;
  std::string domain_file;
  ordered_json parameters = ordered_json::object();
  std::uint64_t seed = 0;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  ordered_json to_json() const {
    ordered_json j;
    j["command"] = command;
    j["domain_file"] = domain_file;
    j["parameters"] = parameters;
    j["seed"] = seed;
    j["tool_version"] = METRICLAB_VERSION;
    const auto elapsed = std::chrono::steady_clock::now() - start;
    j["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    return j;
  }
};

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw metriclab::SpecError("cannot write output file: " + path);
  out << content;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// ---------------------------------------------------------------------------
// dist

struct DistArgs {
  std::string domain_file, metric, z_text, w_text, out;
  double resolution = 0.02;
  double c = 2.0;
};

int cmd_dist(const DistArgs& a) {
  Manifest manifest;
  manifest.command = "dist";
  manifest.domain_file = a.domain_file;
  manifest.parameters["metric"] = a.metric;
  manifest.parameters["z"] = a.z_text;
  manifest.parameters["w"] = a.w_text;
  manifest.parameters["resolution"] = a.resolution;
  manifest.parameters["c"] = a.c;

  const Domain d = load_domain(a.domain_file);
  const Point z = parse_point(a.z_text, "--z");
  const Point w = parse_point(a.w_text, "--w");
  if (!d.contains(z) || !d.contains(w))
    throw metriclab::SpecError("query points must lie inside the domain");
  const double dz = d.boundary_distance(z);
  const double dw = d.boundary_distance(w);
  const double r = metriclab::dist(z, w);

  ordered_json record;
  record["manifest"] = ordered_json::object();  // placeholder, filled last
  record["metric"] = a.metric;
  record["domain"] = d.to_json();
  record["z"] = point_json(z);
  record["w"] = point_json(w);

  std::string printed;
  if (a.metric == "s") {
    const double v = metriclab::s_dist(dz, dw, r);
    record["value"] = v;
    printed = format_value(v);
  } else if (a.metric == "i") {
    const double v = metriclab::i_dist(dz, dw, r);
    record["value"] = v;
    printed = format_value(v);
  } else if (a.metric == "v") {
    const double v = metriclab::v_dist(a.c, dz, dw, r);
    record["value"] = v;
    record["c"] = a.c;
    printed = format_value(v);
  } else if (a.metric == "rho") {
    const auto field = metriclab::LipschitzField::boundary_distance_of(d);
    const double v = metriclab::rho_lipschitz(field, z, w);
    record["value"] = v;
    printed = format_value(v);
  } else if (a.metric == "k") {
    const auto uni = metriclab::UniformizedDomain::from_domain(d);
    const double v = uni.k_dist(metriclab::to_complex(z), metriclab::to_complex(w));
    record["value"] = v;
    printed = format_value(v);
  } else if (a.metric == "h") {
    const metriclab::QHResult res = metriclab::h_num(d, z, w, a.resolution);
    record["bracket"] = {res.lower, res.upper};
    record["bracket_width"] = res.bracket_width;
    printed = "[" + format_value(res.lower) + ", " + format_value(res.upper) + "]";
  } else {
    throw metriclab::SpecError("unknown metric: " + a.metric +
                               " (expected one of h, s, i, v, k, rho)");
  }

  record["manifest"] = manifest.to_json();
  std::cout << printed << "\n";
  if (!a.out.empty())
    write_text_file(a.out, record.dump(2) + "\n");
  else
    std::cout << record.dump(2) << "\n";
  return kExitPass;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string suite, domain_file, anchor_text, out;
  int pairs = 100;
  std::uint64_t seed = 1;
  double resolution = 0.02;
  double c = 2.0;
  double radius = 0.2;
  std::vector<double> radii;
};

std::string records_csv(const Manifest& manifest, const metriclab::SuiteReport& rep) {
  std::string csv = "# manifest: " + manifest.to_json().dump() + "\n";
  csv += "z_x,z_y,w_x,w_y,lhs,rhs,margin\n";
  for (const auto& r : rep.records) {
    csv += format_record(r.z.x) + "," + format_record(r.z.y) + "," + format_record(r.w.x) +
           "," + format_record(r.w.y) + "," + format_record(r.lhs) + "," +
           format_record(r.rhs) + "," + format_record(r.margin) + "\n";
  }
  return csv;
}

int cmd_verify(const VerifyArgs& a) {
  Manifest manifest;
  manifest.command = "verify";
  manifest.domain_file = a.domain_file;
  manifest.seed = a.seed;
  manifest.parameters["suite"] = a.suite;
  manifest.parameters["pairs"] = a.pairs;
  manifest.parameters["resolution"] = a.resolution;
  manifest.parameters["c"] = a.c;
  manifest.parameters["radius"] = a.radius;
  if (!a.anchor_text.empty()) manifest.parameters["anchor"] = a.anchor_text;
  if (!a.radii.empty()) manifest.parameters["radii"] = a.radii;

  metriclab::SuiteConfig cfg;
  cfg.suite_id = a.suite;
  if (!a.domain_file.empty()) cfg.domain = load_domain(a.domain_file);
  cfg.pairs = a.pairs;
  cfg.seed = a.seed;
  cfg.resolution = a.resolution;
  cfg.c = a.c;
  cfg.radius = a.radius;
  cfg.radii = a.radii;
  if (!a.anchor_text.empty()) cfg.anchor = parse_point(a.anchor_text, "--anchor");

  const auto& ineq = metriclab::inequality_suite_ids();
  const auto& lim = metriclab::limit_suite_ids();
  ordered_json report;
  bool pass = false;
  std::optional<metriclab::SuiteReport> suite_report;
  if (std::find(ineq.begin(), ineq.end(), a.suite) != ineq.end()) {
    suite_report = metriclab::check_inequality(cfg);
    report = suite_report->to_json();
    pass = suite_report->pass();
  } else if (std::find(lim.begin(), lim.end(), a.suite) != lim.end()) {
    const metriclab::TrendReport rep = metriclab::check_limit(cfg);
    report = rep.to_json();
    pass = rep.pass;
  } else {
    throw metriclab::SpecError("unknown suite: " + a.suite);
  }

  ordered_json out;
  out["manifest"] = manifest.to_json();
  for (auto& [key, value] : report.items()) out[key] = std::move(value);

  if (!a.out.empty()) {
    write_text_file(a.out, out.dump(2) + "\n");
    if (suite_report) {
      std::string csv_path = a.out;
      const std::size_t dot = csv_path.find_last_of('.');
      csv_path = (dot == std::string::npos ? csv_path : csv_path.substr(0, dot)) + ".csv";
      write_text_file(csv_path, records_csv(manifest, *suite_report));
    }
  } else {
    // Records can be bulky on stdout; keep the summary readable.
    out.erase("records");
    std::cout << out.dump(2) << "\n";
  }
  std::cout << (pass ? "pass" : "fail") << ": suite " << a.suite << "\n";
  return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// plot

struct PlotArgs {
  std::string field, domain_file, out;
  int grid = 21;
  double resolution = 0.02;
};

struct FieldSample {
  double x = 0.0, y = 0.0, value = 0.0;
};

std::string svg_heatmap(const Manifest& manifest, const std::vector<FieldSample>& samples,
                        int grid, const std::string& title) {
  double vmin = samples.empty() ? 0.0 : samples.front().value;
  double vmax = vmin;
  double xmin = samples.empty() ? 0.0 : samples.front().x, xmax = xmin;
  double ymin = samples.empty() ? 0.0 : samples.front().y, ymax = ymin;
  for (const auto& s : samples) {
    vmin = std::min(vmin, s.value);
    vmax = std::max(vmax, s.value);
    xmin = std::min(xmin, s.x);
    xmax = std::max(xmax, s.x);
    ymin = std::min(ymin, s.y);
    ymax = std::max(ymax, s.y);
  }
  const double span = vmax > vmin ? vmax - vmin : 1.0;
  const int size = 480, margin = 40;
  const double cell = static_cast<double>(size) / grid;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"560\" height=\"560\">\n";
  svg += "<!-- manifest: " + manifest.to_json().dump() + " -->\n";
  svg += "<text x=\"16\" y=\"24\" font-family=\"monospace\" font-size=\"14\">" + title +
         "</text>\n";
  for (const auto& s : samples) {
    const double t = (s.value - vmin) / span;
    const int rch = static_cast<int>(245 - 210 * t);
    const int g = static_cast<int>(247 - 160 * t);
    const int b = static_cast<int>(255 - 90 * t);
    const double px = margin + (s.x - xmin) / (xmax > xmin ? xmax - xmin : 1.0) * (size - cell);
    const double py =
        margin + (1.0 - (s.y - ymin) / (ymax > ymin ? ymax - ymin : 1.0)) * (size - cell);
    char rect[256];
    std::snprintf(rect, sizeof(rect),
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                  "fill=\"rgb(%d,%d,%d)\"/>\n",
                  px, py, cell, cell, rch, g, b);
    svg += rect;
  }
  char legend[160];
  std::snprintf(legend, sizeof(legend),
                "<text x=\"16\" y=\"548\" font-family=\"monospace\" font-size=\"12\">min %.6g "
                "max %.6g</text>\n",
                vmin, vmax);
  svg += legend;
  svg += "</svg>\n";
  return svg;
}

std::string svg_curve(const Manifest& manifest, const std::vector<FieldSample>& samples,
                      const std::string& title) {
  double xmin = samples.front().x, xmax = xmin;
  double vmin = samples.front().value, vmax = vmin;
  for (const auto& s : samples) {
    xmin = std::min(xmin, s.x);
    xmax = std::max(xmax, s.x);
    vmin = std::min(vmin, s.value);
    vmax = std::max(vmax, s.value);
  }
  const double xspan = xmax > xmin ? xmax - xmin : 1.0;
  const double vspan = vmax > vmin ? vmax - vmin : 1.0;
  const int w = 560, h = 400, margin = 48;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"560\" height=\"400\">\n";
  svg += "<!-- manifest: " + manifest.to_json().dump() + " -->\n";
  svg += "<text x=\"16\" y=\"24\" font-family=\"monospace\" font-size=\"14\">" + title +
         "</text>\n";
  char frame[256];
  std::snprintf(frame, sizeof(frame),
                "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                "stroke=\"#888\"/>\n",
                margin, margin, w - 2 * margin, h - 2 * margin);
  svg += frame;
  svg += "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (const auto& s : samples) {
    const double px = margin + (s.x - xmin) / xspan * (w - 2 * margin);
    const double py = h - margin - (s.value - vmin) / vspan * (h - 2 * margin);
    char pt[64];
    std::snprintf(pt, sizeof(pt), "%.2f,%.2f ", px, py);
    svg += pt;
  }
  svg += "\"/>\n";
  char legend[200];
  std::snprintf(legend, sizeof(legend),
                "<text x=\"16\" y=\"388\" font-family=\"monospace\" font-size=\"12\">x in "
                "[%.6g, %.6g], value in [%.6g, %.6g]</text>\n",
                xmin, xmax, vmin, vmax);
  svg += legend;
  svg += "</svg>\n";
  return svg;
}

int cmd_plot(const PlotArgs& a) {
  Manifest manifest;
  manifest.command = "plot";
  manifest.domain_file = a.domain_file;
  manifest.parameters["field"] = a.field;
  manifest.parameters["grid"] = a.grid;
  manifest.parameters["resolution"] = a.resolution;

  if (a.grid < 2) throw metriclab::SpecError("--grid must be at least 2");

  std::vector<FieldSample> samples;
  bool curve = false;
  std::string csv_header = "x,y,value\n";

  if (a.field == "divergence") {
    if (!a.domain_file.empty()) {
      const Domain d = load_domain(a.domain_file);
      if (d.kind() != Domain::Kind::mapped_disc || d.map_name() != "npt_example")
        throw metriclab::IncompatibleError(
            "field divergence is defined on the npt_example mapped disc only");
    }
    curve = true;
    csv_header = "t,value\n";
    for (int i = 0; i < a.grid; ++i) {
      const double t = 0.999 * i / (a.grid - 1);
      samples.push_back({t, 0.0, metriclab::npt_divergence(t)});
    }
  } else if (a.field == "kappa_d" || a.field == "q_ratio") {
    if (a.domain_file.empty())
      throw metriclab::SpecError("field " + a.field + " needs a --domain spec");
    const Domain d = load_domain(a.domain_file);
    if (d.dimension() != 2)
      throw metriclab::IncompatibleError("field " + a.field + " needs a planar domain");
    std::optional<metriclab::UniformizedDomain> uni;
    if (a.field == "kappa_d") uni.emplace(metriclab::UniformizedDomain::from_domain(d));
    const auto box = d.bounding_box();
    const metriclab::Rect win = box ? *box : metriclab::Rect{0.0, 4.0, -2.0, 2.0};
    for (int j = 0; j < a.grid; ++j) {
      for (int i = 0; i < a.grid; ++i) {
        const Point p =
            Point::planar(win.xmin + (win.xmax - win.xmin) * (i + 0.5) / a.grid,
                          win.ymin + (win.ymax - win.ymin) * (j + 0.5) / a.grid);
        if (!d.contains(p)) continue;
        const double dp = d.boundary_distance(p);
        if (dp < 1e-6) continue;
        double value;
        if (a.field == "kappa_d") {
          value = uni->kappa_metric(metriclab::to_complex(p), {1.0, 0.0}) * dp;
        } else {
          // Local ratio probe: pair p with a point a quarter-clearance away,
          // which always stays interior.
          const Point w = p + Point::planar(0.25 * dp, 0.0);
          const double s =
              metriclab::s_dist(dp, d.boundary_distance(w), metriclab::dist(p, w));
          const metriclab::QHResult q = metriclab::h_num(
              d, p, w, std::min(a.resolution, 0.25 * dp / 6.0));
          value = metriclab::q_ratio(q.upper, s, false);
        }
        samples.push_back({p.x, p.y, value});
      }
    }
  } else {
    throw metriclab::SpecError("unknown field: " + a.field +
                               " (expected q_ratio, kappa_d, or divergence)");
  }

  std::string out = a.out.empty() ? a.field + ".csv" : a.out;
  std::string csv_path = out;
  if (ends_with(out, ".svg")) {
    const std::size_t dot = out.find_last_of('.');
    csv_path = out.substr(0, dot) + ".csv";
  }

  std::string csv = "# manifest: " + manifest.to_json().dump() + "\n" + csv_header;
  for (const auto& s : samples) {
    if (curve)
      csv += format_record(s.x) + "," + format_record(s.value) + "\n";
    else
      csv += format_record(s.x) + "," + format_record(s.y) + "," + format_record(s.value) +
             "\n";
  }
  write_text_file(csv_path, csv);

  if (ends_with(out, ".svg")) {
    const std::string title = a.field + " (" + (a.domain_file.empty() ? "npt_example" : a.domain_file) + ")";
    write_text_file(out, curve ? svg_curve(manifest, samples, title)
                               : svg_heatmap(manifest, samples, a.grid, title));
  }
  std::cout << "wrote " << csv_path;
  if (ends_with(out, ".svg")) std::cout << " and " << out;
  std::cout << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-hyperbolic and Kobayashi distance laboratory"};
  app.require_subcommand(1);

  DistArgs dist_args;
  CLI::App* dist = app.add_subcommand("dist", "evaluate one distance for one pair");
  dist->add_option("--domain", dist_args.domain_file, "domain JSON file")->required();
  dist->add_option("--metric", dist_args.metric, "one of h, s, i, v, k, rho")->required();
  dist->add_option("--z", dist_args.z_text, "first point as x,y")->required();
  dist->add_option("--w", dist_args.w_text, "second point as x,y")->required();
  dist->add_option("--resolution", dist_args.resolution, "grid resolution for h");
  dist->add_option("--c", dist_args.c, "coefficient for the v metric");
  dist->add_option("--out", dist_args.out, "write the JSON record here");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", verify_args.suite, "suite id")->required();
  verify->add_option("--domain", verify_args.domain_file, "domain JSON file");
  verify->add_option("--pairs", verify_args.pairs, "sample count");
  verify->add_option("--seed", verify_args.seed, "RNG seed");
  verify->add_option("--resolution", verify_args.resolution, "baseline grid resolution");
  verify->add_option("--c", verify_args.c, "coefficient for the v-form suites");
  verify->add_option("--anchor", verify_args.anchor_text, "anchor point as x,y");
  verify->add_option("--radius", verify_args.radius, "anchor-ball radius");
  verify->add_option("--radii", verify_args.radii, "limit-suite schedule r1,r2,...")
      ->delimiter(',');
  verify->add_option("--out", verify_args.out, "write the report JSON here");

  PlotArgs plot_args;
  CLI::App* plot = app.add_subcommand("plot", "sample a field to CSV (and SVG)");
  plot->add_option("--field", plot_args.field, "q_ratio, kappa_d, or divergence")->required();
  plot->add_option("--domain", plot_args.domain_file, "domain JSON file");
  plot->add_option("--grid", plot_args.grid, "samples per axis");
  plot->add_option("--resolution", plot_args.resolution, "grid resolution for h");
  plot->add_option("--out", plot_args.out, "output file (.csv, or .svg for both)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitSpec;
  }

  try {
    if (dist->parsed()) return cmd_dist(dist_args);
    if (verify->parsed()) return cmd_verify(verify_args);
    return cmd_plot(plot_args);
  } catch (const metriclab::UnsoundSuiteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsound;
  } catch (const metriclab::IncompatibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIncompatible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpec;
  }
}
