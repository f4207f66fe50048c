#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gapcert/errors.hpp"
#include "gapcert/gap_bounds.hpp"
#include "gapcert/io.hpp"
#include "gapcert/model.hpp"
#include "gapcert/stokes.hpp"

using namespace gapcert;
using json = nlohmann::ordered_json;

namespace {

constexpr double kMargin = 1e-10;

struct Options {
  std::string file;
  std::string method = "all";
  std::string format = "csv";
  std::string output;
  double tol_rank = -1.0;
  std::size_t m = 10;
  double c = 0.5;
  std::string M_list = "0.1,1,1.5,1.8,2.5,3";
  double delta = 0.5;
  std::uint64_t seed = 1;
  std::string law = "-3:3";
  std::size_t count = 4;
  std::string ms = "10,25,50,100";
  std::string cs = "0,0.25,0.5,1,1.5,2";
  std::string t_range = "5:20:151";
  double eta = 0.5;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "bad number '" + tok + "' in list '" + s + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::Parse, "empty list");
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  for (double v : parse_list(s)) {
    if (!(v >= 2.0) || v != std::floor(v)) throw Error(ErrorCode::Parse, "bad size in list '" + s + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<double> parse_range(const std::string& s) {
  std::stringstream ss(s);
  std::string a, b, n;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n)) {
    throw Error(ErrorCode::Parse, "range must be lo:hi:steps");
  }
  double lo = parse_list(a).front(), hi = parse_list(b).front(), steps = parse_list(n).front();
  if (!(steps >= 2.0) || steps != std::floor(steps) || !(lo < hi)) throw Error(ErrorCode::Parse, "bad range '" + s + "'");
  std::vector<double> out;
  const auto k = static_cast<std::size_t>(steps);
  for (std::size_t i = 0; i < k; ++i) out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1));
  return out;
}

UniformLaw parse_law(const std::string& s, std::uint64_t seed) {
  auto pos = s.find(':');
  if (pos == std::string::npos) throw Error(ErrorCode::Parse, "law must be a:b");
  return {parse_list(s.substr(0, pos)).front(), parse_list(s.substr(pos + 1)).front(), seed};
}

std::string fmt(double x) { return format_double(x); }

json number(double x) {
  if (std::isfinite(x)) return x;
  return fmt(x);
}

json array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::string verdict(const GapCertificate& g, const std::vector<double>& eigs, double zero_tol) {
  return g.sound_for(eigs, kMargin, zero_tol) ? "SOUND" : "UNSOUND";
}

GapCertificate run_method(const std::string& name, const BlockSaddle& H, double tol_rank) {
  if (name == "diag") return diag_gap(H);
  if (name == "stretch") return stretch_certificate(H);
  if (name == "hbinv") return hbinv_certificate(H);
  if (name == "zero-dichotomy") return zero_dichotomy_certificate(H, tol_rank);
  if (name == "kirsch") {
    H.validate();
    if (H.m() != H.k() || (H.A - H.C).max_abs() > kTolSym * std::max(1.0, H.A.max_abs())) {
      throw Error(ErrorCode::DimensionMismatch, "kirsch needs C = A");
    }
    return kirsch_certificate(H.A, H.B);
  }
  if (name == "winklmeier") {
    double w = winklmeier_bound(H);
    GapCertificate g;
    g.method = Method::Winklmeier;
    g.claim = Claim::Empty;
    g.lo = -w;
    g.hi = w;
    if (w > 0.0) g.inv_norm_bound = 1.0 / w;
    g.quantities = {{"radius", w}};
    return g;
  }
  throw Error(ErrorCode::Parse, "unknown method '" + name + "'");
}

int cmd_bounds(const Options& o, std::ostream& out) {
  BlockSaddle H = load_block_saddle(o.file);
  H.validate();
  auto eigs = sym_eigvals(H.assemble());
  double zero_tol = rank_tolerance(H.assemble());
  if (o.method != "all") {
    auto g = run_method(o.method, H, o.tol_rank);
    json j = to_json(g);
    j["verdict"] = verdict(g, eigs, zero_tol);
    out << j.dump(2) << '\n';
    return 0;
  }
  json j;
  j["eigenvalues"] = array(eigs);
  j["certificates"] = json::array();
  j["skipped"] = json::array();
  for (const char* name : {"diag", "stretch", "hbinv", "zero-dichotomy", "kirsch", "winklmeier"}) {
    try {
      auto g = run_method(name, H, o.tol_rank);
      json c = to_json(g);
      c["verdict"] = verdict(g, eigs, zero_tol);
      j["certificates"].push_back(c);
    } catch (const Error& e) {
      j["skipped"].push_back({{"method", name}, {"reason", e.what()}});
    }
  }
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_stokes(const Options& o, std::ostream& out) {
  BlockSaddle H = load_block_saddle(o.file);
  if (H.C.max_abs() != 0.0) throw Error(ErrorCode::DimensionMismatch, "stokes input needs C = 0");
  StokesMatrix S{H.A, H.B};
  auto minimal = minimal_intervals(S, o.tol_rank);
  auto ps = pencil_spectrum(S, o.tol_rank);
  if (o.format == "csv") {
    write_csv_row(out, {"index", "branch", "value"});
    for (std::size_t i = 0; i < ps.lambda_minus.size(); ++i) write_csv_row(out, {std::to_string(i + 1), "-", fmt(ps.lambda_minus[i])});
    for (std::size_t i = 0; i < ps.lambda_plus.size(); ++i) write_csv_row(out, {std::to_string(i + 1), "+", fmt(ps.lambda_plus[i])});
    return 0;
  }
  json j;
  j["intervals"] = json::array({to_json(minimal)});
  json skipped = json::array();
  for (auto f : {&ruwa_intervals, &axel_intervals}) {
    try {
      j["intervals"].push_back(to_json(f(S)));
    } catch (const Error& e) {
      skipped.push_back(e.what());
    }
  }
  try {
    j["new_estimate"] = to_json(new_gap_estimate(S));
  } catch (const Error& e) {
    j["new_estimate"] = nullptr;
    skipped.push_back(e.what());
  }
  j["skipped"] = skipped;
  j["lambda_minus"] = array(ps.lambda_minus);
  j["lambda_plus"] = array(ps.lambda_plus);
  j["zero_multiplicity"] = ps.zero_multiplicity;
  json enc = json::array();
  for (const auto& e : perturbation_bounds(ps, {o.eta})) {
    enc.push_back({{"branch", std::string(1, e.branch)}, {"index", e.index}, {"value", number(e.value)},
                   {"bounds", {number(e.bounds.lo), number(e.bounds.hi)}}});
  }
  j["perturbation"] = {{"eta", o.eta}, {"enclosures", enc}};
  out << j.dump(2) << '\n';
  return 0;
}

ModelSpec det_spec(const Options& o) { return {o.m, o.c, std::nullopt}; }

void write_spectrum(std::ostream& out, const std::vector<double>& eigs) {
  write_csv_row(out, {"index", "eigenvalue"});
  for (std::size_t i = 0; i < eigs.size(); ++i) write_csv_row(out, {std::to_string(i + 1), fmt(eigs[i])});
}

int cmd_secular(const Options& o, std::ostream& out) {
  auto spec = det_spec(o);
  auto r = secular_solve(spec);
  if (o.format == "json") {
    json j = to_json(r);
    j["eigenvalues"] = array(r.eigenvalues(o.c));
    out << j.dump(2) << '\n';
    return 0;
  }
  struct Row {
    double alpha, log_lambda;
    const char* branch;
  };
  std::vector<Row> rows;
  for (double a : r.trig_roots) {
    double h = std::sin(0.5 * a);
    rows.push_back({a, std::log((1.0 - o.c) * (1.0 - o.c) + 4.0 * o.c * h * h), "trig"});
  }
  if (r.hyp_root) rows.push_back({r.hyp_root->alpha1, r.hyp_root->log_lambda1, "hyp"});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.log_lambda < b.log_lambda; });
  write_csv_row(out, {"k", "alpha", "lambda", "branch", "log10_value"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    write_csv_row(out, {std::to_string(i + 1), fmt(rows[i].alpha), fmt(std::exp(rows[i].log_lambda)), rows[i].branch,
                        fmt(rows[i].log_lambda / std::log(10.0))});
  }
  return 0;
}

int cmd_spurious(const Options& o, std::ostream& out) {
  auto spec = det_spec(o);
  auto e = spurious_estimate(spec);
  auto r = secular_solve(spec);
  double sigma_hra = bidiag_svd_hra(build_Tc(spec)).back();
  const double ln10 = std::log(10.0);
  json j = to_json(e);
  j["log10_lambda_est"] = number(e.log_lambda_est / ln10);
  j["log10_lambda_first_order"] = number(e.log_lambda_first_order / ln10);
  if (r.hyp_root) {
    j["log_lambda_secular"] = number(r.hyp_root->log_lambda1);
    j["log10_lambda_secular"] = number(r.hyp_root->log_lambda1 / ln10);
  } else {
    j["log_lambda_secular"] = nullptr;
    j["log10_lambda_secular"] = nullptr;
  }
  j["sigma_hra"] = number(sigma_hra);
  j["log10_sigma_hra"] = number(std::log10(sigma_hra));
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_stable_gap(const Options& o, std::ostream& out) {
  auto checks = verify_stable_gap(o.c, parse_sizes(o.ms));
  double r = stable_gap(o.c).radius;
  write_csv_row(out, {"m", "radius", "inside_count", "min_outside", "max_inside_abs", "magnitude_cap", "pass"});
  for (const auto& ch : checks) {
    write_csv_row(out, {std::to_string(ch.m), fmt(r), std::to_string(ch.inside_count), fmt(ch.min_outside),
                        fmt(ch.max_inside_abs), fmt(ch.magnitude_cap), ch.pass ? "true" : "false"});
  }
  return 0;
}

int cmd_modified(const Options& o, std::ostream& out) {
  auto spec = det_spec(o);
  auto mod = build_modified(spec);
  auto eigs = sym_eigvals(mod.H_tilde);
  if (o.format == "csv") {
    write_spectrum(out, eigs);
    return 0;
  }
  json j;
  j["radius"] = stable_gap(o.c).radius;
  j["eigenvalues"] = array(eigs);
  j["squared_closed_form"] = array(modified_spectrum_closed_form(spec));
  j["symmetry_error"] = number(symmetry_error(eigs));
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_spectrum(const Options& o, std::ostream& out, bool disorder) {
  ModelSpec spec = det_spec(o);
  if (disorder) spec.disorder = parse_law(o.law, o.seed);
  write_spectrum(out, sym_eigvals(build_Hc(spec)));
  return 0;
}

int cmd_scan(const Options& o, std::ostream& out) {
  auto rows = gap_scan(parse_list(o.M_list), o.delta, o.m, o.seed);
  write_csv_row(out, {"M", "variant", "index", "eigenvalue"});
  for (const auto& r : rows) write_csv_row(out, {fmt(r.M), r.variant, std::to_string(r.index), fmt(r.eigenvalue)});
  return 0;
}

int cmd_experiment(const Options& o, std::ostream& out) {
  ModelSpec spec{o.m, 0.0, parse_law(o.law, o.seed)};
  auto r = disorder_experiment(spec, o.count);
  json j;
  j["m"] = o.m;
  j["seed"] = o.seed;
  j["law"] = {spec.disorder->a, spec.disorder->b};
  j["near_zero_H"] = array(r.near_zero_H);
  j["near_zero_Htilde"] = array(r.near_zero_Htilde);
  j["central_sigma"] = number(r.central_sigma);
  j["log10_central"] = number(r.log10_central);
  j["symmetry_error_H"] = number(r.symmetry_error_H);
  j["symmetry_error_Htilde"] = number(r.symmetry_error_Htilde);
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  auto results = verify_model(parse_sizes(o.ms), parse_list(o.cs));
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    out << (r.pass ? "PASS " : "FAIL ") << r.name << " m=" << r.m << " c=" << fmt(r.c) << " measure=" << fmt(r.measure)
        << '\n';
  }
  out << (all ? "ALL PASS" : "SOME FAILED") << '\n';
  return all ? 0 : 1;
}

int cmd_counterexamples(const Options& o, std::ostream& out) {
  auto rep = counterexample_suite();
  out << "# omladic\n";
  write_csv_row(out, {"t", "inv_norm", "closed_form"});
  for (const auto& r : rep.omladic) write_csv_row(out, {fmt(r.t), fmt(r.inv_norm), fmt(r.closed_form)});
  out << "# bottcher\n";
  write_csv_row(out, {"norm", "inv_norm", "conjecture_violated"});
  write_csv_row(out, {fmt(rep.bottcher_norm), fmt(rep.bottcher_inv_norm), rep.conjecture_violated ? "true" : "false"});
  out << "# ballantine\n";
  write_csv_row(out, {"residual"});
  write_csv_row(out, {fmt(rep.ballantine_residual)});
  out << "# commuting\n";
  write_csv_row(out, {"inv_norm"});
  write_csv_row(out, {fmt(rep.commuting_inv_norm)});
  auto grid = parse_range(o.t_range);
  for (auto family : {CurveFamily::KirschBt, CurveFamily::ScaledA, CurveFamily::Simple}) {
    out << "# curve " << to_string(family) << '\n';
    write_csv_row(out, {"t", "min_abs_eig", "det"});
    for (const auto& p : nonmono_curve(grid, family)) write_csv_row(out, {fmt(p.t), fmt(p.min_abs_eig), fmt(p.det)});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral gap certificates for block matrices"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output", o.output, "Write to this path instead of stdout");
    sub->add_option("--tol-rank", o.tol_rank, "Relative rank tolerance (negative selects the default)");
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("-m", o.m, "Block size m")->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    sub->add_option("-c", o.c, "Model parameter c")->check(CLI::NonNegativeNumber);
  };

  auto* bounds = app.add_subcommand("bounds", "Gap certificates for a block matrix file");
  bounds->add_option("file", o.file, "BlockSaddle input")->required();
  bounds->add_option("--method", o.method, "Certificate")
      ->check(CLI::IsMember({"diag", "stretch", "hbinv", "zero-dichotomy", "kirsch", "winklmeier", "all"}));
  add_common(bounds);

  auto* stokes = app.add_subcommand("stokes", "Eigenvalue intervals for a Stokes matrix file");
  stokes->add_option("file", o.file, "Input with C = 0 or omitted")->required();
  stokes->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
  stokes->add_option("--eta", o.eta, "Relative perturbation size in [0, 1)");
  add_common(stokes);

  auto* model = app.add_subcommand("model", "Tight-binding model computations");
  model->require_subcommand(1);
  auto* secular = model->add_subcommand("secular", "Roots of the boundary secular equation");
  auto* spurious = model->add_subcommand("spurious", "Spurious eigenvalue routes");
  auto* sgap = model->add_subcommand("stable-gap", "Stable gap check over a list of m");
  auto* modified = model->add_subcommand("modified", "Spectrum of the boundary-modified matrix");
  auto* spectrum = model->add_subcommand("spectrum", "Spectrum of H_c, or of H_omega with --disorder");
  auto* scan = model->add_subcommand("scan", "Spectra of H_omega and its modification over a list of means");
  auto* experiment = model->add_subcommand("experiment", "Central eigenvalues under random diagonal disorder");
  auto* verify = model->add_subcommand("verify", "Invariant suite over (m, c) lists");
  bool disorder = false;
  for (auto* sub : {secular, spurious, sgap, modified, spectrum, scan, experiment, verify}) add_common(sub);
  for (auto* sub : {secular, spurious, modified, spectrum, scan, experiment}) add_model(sub);
  sgap->add_option("-c", o.c, "Model parameter c")->check(CLI::NonNegativeNumber);
  sgap->add_option("--ms", o.ms, "Comma-separated m values");
  for (auto* sub : {secular, modified}) sub->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
  spectrum->add_flag("--disorder", disorder, "Use A + diag(omega)");
  for (auto* sub : {spectrum, scan, experiment}) sub->add_option("--seed", o.seed);
  for (auto* sub : {spectrum, experiment}) sub->add_option("--law", o.law, "Uniform law a:b");
  scan->add_option("--M", o.M_list, "Comma-separated means");
  scan->add_option("--delta", o.delta, "Half width of the law")->check(CLI::PositiveNumber);
  experiment->add_option("--count", o.count, "Eigenvalues nearest zero to report");
  verify->add_option("--ms", o.ms, "Comma-separated m values");
  verify->add_option("--cs", o.cs, "Comma-separated c values");

  auto* counter = app.add_subcommand("counterexamples", "Counterexample suite and non-monotone curves");
  counter->add_option("--t-range", o.t_range, "lo:hi:steps");
  add_common(counter);

  CLI11_PARSE(app, argc, argv);
  if (stokes->parsed() && stokes->count("--format") == 0) o.format = "json";

  std::ostringstream buf;
  int rc = 0;
  try {
    if (bounds->parsed()) rc = cmd_bounds(o, buf);
    else if (stokes->parsed()) rc = cmd_stokes(o, buf);
    else if (secular->parsed()) rc = cmd_secular(o, buf);
    else if (spurious->parsed()) rc = cmd_spurious(o, buf);
    else if (sgap->parsed()) rc = cmd_stable_gap(o, buf);
    else if (modified->parsed()) rc = cmd_modified(o, buf);
    else if (spectrum->parsed()) rc = cmd_spectrum(o, buf, disorder);
    else if (scan->parsed()) rc = cmd_scan(o, buf);
    else if (experiment->parsed()) rc = cmd_experiment(o, buf);
    else if (verify->parsed()) rc = cmd_verify(o, buf);
    else if (counter->parsed()) rc = cmd_counterexamples(o, buf);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_parse_error() ? 2 : 3;
  }

  if (o.output.empty()) {
    std::cout << buf.str();
  } else {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write '" << o.output << "'\n";
      return 2;
    }
    f << buf.str();
  }
  return rc;
}
