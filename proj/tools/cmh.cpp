// cmh: command-line front end for the cmh library.
//
// Exit codes: 0 success / holds / certified, 1 violated, 2 malformed input,
// evaluation failure or inconclusive certificate.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmh/cmh.hpp"

namespace {

using cmh::cplx;
using cmh::Json;

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kBad = 2;

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cmh::SpecError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string &path) { return cmh::parse_json_text(read_file(path)); }

cplx parse_complex(const std::string &s) {
  const auto comma = s.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return {re, 0.0};
    }
    const std::string a = s.substr(0, comma);
    const std::string b = s.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    const double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(s);
    return {re, im};
  } catch (const std::logic_error &) {
    throw cmh::SpecError("expected a complex number \"re,im\", got \"" + s + "\"");
  }
}

std::vector<double> parse_list(const std::string &s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error &) {
      throw cmh::SpecError("expected a comma-separated list of numbers, got \"" + s + "\"");
    }
  }
  return out;
}

struct Output {
  std::string path;
  std::string format = "json";

  void emit(const std::string &text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cmh::SpecError("cannot write " + path);
    out << text;
  }

  void emit_json(const Json &j) const {
    std::ostringstream os;
    cmh::write_json(os, j);
    os << "\n";
    emit(os.str());
  }

  void require_format(std::initializer_list<const char *> allowed) const {
    for (const char *a : allowed)
      if (format == a) return;
    throw cmh::SpecError("unsupported --format " + format);
  }
};

struct GridFlags {
  cmh::DiskGrid disk;
  std::string rect;
  int nt = 21;

  void add(CLI::App *cmd) {
    cmd->add_option("--rmin", disk.rmin, "smallest radius of the disk grid");
    cmd->add_option("--rmax,--grid-r", disk.rmax, "largest radius of the disk grid");
    cmd->add_option("--nr", disk.nr, "number of radii");
    cmd->add_option("--ntheta,--grid-n", disk.ntheta, "number of angles");
    cmd->add_option("--nt", nt, "number of t samples on [0,1]");
  }

  void add_rect(CLI::App *cmd) {
    cmd->add_option("--rect", rect, "half-plane grid x0,x1,y0,y1[,nx,ny]");
  }

  cmh::RectGrid rect_grid() const {
    cmh::RectGrid g;
    if (rect.empty()) return g;
    const std::vector<double> v = parse_list(rect);
    if (v.size() != 4 && v.size() != 6) throw cmh::SpecError("--rect expects 4 or 6 numbers");
    g.x0 = v[0];
    g.x1 = v[1];
    g.y0 = v[2];
    g.y1 = v[3];
    if (v.size() == 6) {
      g.nx = static_cast<int>(v[4]);
      g.ny = static_cast<int>(v[5]);
    }
    g.validate();
    return g;
  }

  cmh::DiskGrid disk_grid() const {
    disk.validate();
    if (nt < 2) throw cmh::DomainError("--nt must be >= 2");
    return disk;
  }
};

int status_code(cmh::CertStatus s) {
  switch (s) {
  case cmh::CertStatus::certified: return kOk;
  case cmh::CertStatus::violated: return kViolated;
  default: return kBad;
  }
}

std::string csv_line(std::initializer_list<double> values) {
  std::string line;
  bool first = true;
  for (double v : values) {
    if (!first) line += ',';
    first = false;
    line += cmh::format_number(v);
  }
  return line + "\n";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Completely monotone sequences, class-T functions and harmonic maps"};
  app.require_subcommand(1);

  Output out;
  auto add_output = [&](CLI::App *cmd, bool csv) {
    cmd->add_option("--out", out.path, "write output to this file");
    if (csv) cmd->add_option("--format", out.format, "json or csv");
  };

  std::string input;
  double tol = 1e-9;
  double k = 0.0;
  std::string method;
  std::size_t last = 10;
  std::vector<std::string> points;
  std::string theorem;
  double a_shift = -1.0;
  double m = 0.0;
  double M = 0.0;
  GridFlags grid;

  auto *check_cm = app.add_subcommand("check-cm", "test a JSON sequence prefix for complete monotonicity");
  check_cm->add_option("file", input, "JSON array of numbers")->required();
  check_cm->add_option("--tol", tol, "nonnegativity slack")->check(CLI::NonNegativeNumber);
  add_output(check_cm, false);

  auto *moments = app.add_subcommand("moments", "moments a_0..a_N of a measure");
  moments->add_option("file", input, "measure spec")->required();
  moments->add_option("--n", last, "last moment index N");
  add_output(moments, true);

  auto *eval = app.add_subcommand("eval", "evaluate f = h + c conj(g)");
  eval->add_option("file", input, "map spec")->required();
  eval->add_option("--z", points, "point re,im (repeatable)");
  add_output(eval, true);

  auto *dil = app.add_subcommand("dilatation", "dilatation and Jacobian of a map");
  dil->add_option("file", input, "map spec")->required();
  dil->add_option("--z", points, "point re,im (repeatable)");
  add_output(dil, true);

  auto *certify = app.add_subcommand("certify", "certify |omega_f| <= k");
  certify->add_option("file", input, "map spec")->required();
  certify->add_option("--method", method, "grid, thm1.6, thm1.7, thm1.9 or hyp")
      ->required()
      ->check(CLI::IsMember({"grid", "thm1.6", "thm1.7", "thm1.9", "hyp"}));
  certify->add_option("--k", k, "quasiconformality bound in [0,1)")->required();
  certify->add_option("--M", M, "known bound on |h'(tz)/h'(z)| (thm1.6)");
  grid.add(certify);
  add_output(certify, false);

  auto *verify = app.add_subcommand("verify-thm", "check the modulus lower bound or the partial signs");
  verify->add_option("theorem", theorem, "1.2 or 1.3")->required()->check(CLI::IsMember({"1.2", "1.3"}));
  verify->add_option("file", input, "map spec")->required();
  verify->add_option("--a", a_shift, "shift a >= 0 for 1.2 (default max(0, -lim f(-r)))");
  grid.add(verify);
  grid.add_rect(verify);
  add_output(verify, false);

  auto *ratio = app.add_subcommand("ratio-sup", "grid sup of |h'(tz)/h'(z)|, optionally with the Harnack bound");
  ratio->add_option("file", input, "measure spec of h")->required();
  ratio->add_option("--m", m, "check Re[z h''/h'] > -m and the bound e^{2m}");
  grid.add(ratio);
  add_output(ratio, false);

  std::string curve = "circle";
  double radius = 0.5;
  std::string center = "0,0";
  double theta0 = 0.0;
  double theta1 = 2.0 * std::numbers::pi;
  std::string from = "-0.9,0";
  std::string to = "0.9,0";
  int n = 100;
  auto *render = app.add_subcommand("render", "image of a circle or segment as CSV");
  render->add_option("file", input, "map spec")->required();
  render->add_option("--curve", curve, "circle or segment")->check(CLI::IsMember({"circle", "segment"}));
  render->add_option("--radius", radius, "circle radius");
  render->add_option("--center", center, "circle center re,im");
  render->add_option("--theta0", theta0, "first angle");
  render->add_option("--theta1", theta1, "last angle");
  render->add_option("--from", from, "segment start re,im");
  render->add_option("--to", to, "segment end re,im");
  render->add_option("--n", n, "number of samples")->check(CLI::PositiveNumber);
  add_output(render, true);
  out.format = "json";

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kBad;
  }
  if (render->parsed() && render->count("--format") == 0) out.format = "csv";

  try {
    if (check_cm->parsed()) {
      const cmh::MomentSequence seq = cmh::parse_sequence(read_json(input));
      const cmh::CMVerdict v = cmh::is_completely_monotone(seq, tol);
      Json j = cmh::to_json(v);
      j["tol"] = tol;
      out.emit_json(j);
      return v.holds ? kOk : kViolated;
    }

    if (moments->parsed()) {
      out.require_format({"json", "csv"});
      const std::vector<double> a = cmh::moments(cmh::parse_measure(read_json(input)), last);
      if (out.format == "csv") {
        std::string text = "n,moment\n";
        for (std::size_t i = 0; i < a.size(); ++i) text += csv_line({static_cast<double>(i), a[i]});
        out.emit(text);
      } else {
        out.emit_json(Json{{"moments", a}});
      }
      return kOk;
    }

    if (eval->parsed() || dil->parsed()) {
      out.require_format({"json", "csv"});
      const cmh::HarmonicMap f = cmh::parse_map_spec(read_json(input)).to_map();
      if (points.empty()) points.push_back("0.5,0");
      const bool is_eval = eval->parsed();
      std::string text = is_eval ? "re_z,im_z,re_f,im_f\n" : "re_z,im_z,re_omega,im_omega,abs_omega,jacobian\n";
      Json rows = Json::array();
      for (const std::string &p : points) {
        const cplx z = parse_complex(p);
        if (is_eval) {
          const cplx h = f.h().value(z);
          const cplx g = f.g().value(z);
          const cplx v = h + f.c() * std::conj(g);
          rows.push_back(Json{{"z", cmh::to_json(z)}, {"f", cmh::to_json(v)}, {"h", cmh::to_json(h)}, {"g", cmh::to_json(g)}});
          text += csv_line({z.real(), z.imag(), v.real(), v.imag()});
        } else {
          const cplx w = cmh::dilatation(f, z);
          const double jac = cmh::jacobian(f, z);
          rows.push_back(Json{{"z", cmh::to_json(z)}, {"omega", cmh::to_json(w)}, {"abs_omega", std::abs(w)}, {"jacobian", jac}});
          text += csv_line({z.real(), z.imag(), w.real(), w.imag(), std::abs(w), jac});
        }
      }
      if (out.format == "csv") out.emit(text);
      else out.emit_json(Json{{"points", rows}});
      return kOk;
    }

    if (certify->parsed()) {
      const cmh::MapSpec spec = cmh::parse_map_spec(read_json(input));
      const cmh::DiskGrid disk = grid.disk_grid();
      cmh::QCCertificate cert;
      if (method == "grid") {
        cert = cmh::certify_qc_grid(spec.to_map(), k, disk);
      } else if (method == "thm1.6") {
        const cmh::ShiftedTFunction h(spec.h_measure());
        const cmh::ShiftedTFunction g(spec.g_measure());
        std::optional<double> bound;
        if (certify->count("--M")) bound = M;
        cert = cmh::certify_qc_conv(h, g, spec.c, k, bound, disk, grid.nt);
      } else if (method == "thm1.7") {
        if (spec.kind != cmh::MapSpec::Kind::polylog) throw cmh::SpecError("thm1.7 needs a polylog spec");
        cert = cmh::certify_polylog_map(spec.alpha, spec.beta, spec.c, k, disk);
      } else if (method == "thm1.9") {
        cert = cmh::certify_qc_via_limit(cmh::ShiftedTFunction(spec.h_measure()),
                                         cmh::ShiftedTFunction(spec.g_measure()), spec.c, k, disk);
      } else {
        if (spec.kind != cmh::MapSpec::Kind::hypergeom) throw cmh::SpecError("hyp needs a hypergeom spec");
        cert = cmh::certify_hypergeom_map(spec.a, spec.cc, spec.a2, spec.c2, spec.c, k, disk);
      }
      out.emit_json(cmh::to_json(cert));
      return status_code(cert.status);
    }

    if (verify->parsed()) {
      const cmh::HarmonicMap f = cmh::parse_map_spec(read_json(input)).to_map();
      if (theorem == "1.2") {
        double a = a_shift;
        if (verify->count("--a") == 0) a = std::max(0.0, -cmh::eval_harmonic(f, -1.0).real());
        const cmh::ModulusReport r = cmh::modulus_lower_bound_check(f, a, grid.disk_grid().nodes());
        out.emit_json(cmh::to_json(r));
        return r.holds ? kOk : kViolated;
      }
      const cmh::PartialSignReport r = cmh::partial_sign_check(f, grid.rect_grid());
      out.emit_json(cmh::to_json(r));
      return r.i_holds && (!r.ii_checked || r.ii_holds) ? kOk : kViolated;
    }

    if (ratio->parsed()) {
      const cmh::ShiftedTFunction h(cmh::parse_measure(read_json(input)));
      const cmh::DiskGrid disk = grid.disk_grid();
      if (ratio->count("--m")) {
        const cmh::HarnackReport r = cmh::harnack_ratio_bound(h, m, disk, grid.nt);
        out.emit_json(cmh::to_json(r));
        return r.hypothesis_holds && r.ratio_within_bound ? kOk : kViolated;
      }
      out.emit_json(cmh::to_json(cmh::ratio_bound_sup(h, disk, grid.nt)));
      return kOk;
    }

    if (render->parsed()) {
      out.require_format({"json", "csv"});
      const cmh::HarmonicMap f = cmh::parse_map_spec(read_json(input)).to_map();
      std::vector<std::pair<double, cplx>> samples;
      const cplx c0 = parse_complex(center);
      const cplx p0 = parse_complex(from);
      const cplx p1 = parse_complex(to);
      for (int j = 0; j < n; ++j) {
        const double s = n == 1 ? 0.0 : static_cast<double>(j) / (n - 1);
        if (curve == "circle") {
          const double theta = theta0 + (theta1 - theta0) * s;
          samples.emplace_back(theta, c0 + std::polar(radius, theta));
        } else {
          samples.emplace_back(s, p0 + s * (p1 - p0));
        }
      }
      for (const auto &[param, z] : samples)
        if (!(std::abs(z) < 1.0)) throw cmh::DomainError("curve leaves the unit disk at param " + cmh::format_number(param));
      std::string text = "param,re_z,im_z,re_f,im_f\n";
      Json rows = Json::array();
      for (const auto &[param, z] : samples) {
        const cplx v = cmh::eval_harmonic(f, z);
        text += csv_line({param, z.real(), z.imag(), v.real(), v.imag()});
        rows.push_back(Json{{"param", param}, {"z", cmh::to_json(z)}, {"f", cmh::to_json(v)}});
      }
      if (out.format == "csv") out.emit(text);
      else out.emit_json(Json{{"points", rows}});
      return kOk;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBad;
  }
  return kBad;
}
