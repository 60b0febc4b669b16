#include "opvar/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "opvar/error.hpp"
#include "opvar/inequalities.hpp"
#include "opvar/io.hpp"
#include "opvar/quadrature.hpp"
#include "opvar/schatten.hpp"
#include "opvar/suite.hpp"
#include "opvar/variance.hpp"

namespace opvar {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw Error(ErrorKind::InvalidArgument, "not a number: '" + text + "'");
  return v;
}

// Accepts plain reals and multiples of pi written as "pi", "2pi", "0.5pi".
double parse_endpoint(const std::string& text) {
  if (text.size() >= 2 && text.compare(text.size() - 2, 2, "pi") == 0) {
    const std::string factor = text.substr(0, text.size() - 2);
    const double f = factor.empty() ? 1.0 : factor == "-" ? -1.0 : parse_real(factor);
    return f * std::numbers::pi;
  }
  return parse_real(text);
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) out.push_back(parse_real(s));
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (const auto& s : split_list(text)) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw Error(ErrorKind::InvalidArgument, "not an integer: '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

// Options every check-style subcommand shares.
struct Common {
  std::string out_path;
  std::string format = "json";
  double tolerance_scale = 1.0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out_path, "Report path (JSON by default); stdout when omitted");
  sub->add_option("--format", c.format, "Report format: json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--tolerance-scale", c.tolerance_scale, "Multiplies every default tolerance")
      ->check(CLI::NonNegativeNumber);
}

struct FamilyArgs {
  std::vector<std::string> matrices;
  std::string weights;
  bool normalize = false;
};

void add_family(CLI::App* sub, FamilyArgs& f, bool with_weights) {
  sub->add_option("--matrices", f.matrices, "Matrix JSON files")->required();
  if (with_weights) {
    sub->add_option("--weights", f.weights, "Comma-separated probability weights (uniform when omitted)");
    sub->add_flag("--normalize", f.normalize, "Divide the weights by their sum instead of rejecting sum != 1");
  }
}

std::vector<ComplexMatrix> load_matrices(const std::vector<std::string>& paths) {
  std::vector<ComplexMatrix> out;
  for (const auto& p : paths) out.push_back(parse_matrix_file(p));
  return out;
}

ProbabilityWeights load_weights(const FamilyArgs& f, std::size_t n) {
  if (f.weights.empty()) return ProbabilityWeights::uniform(n);
  auto raw = parse_reals(f.weights);
  return f.normalize ? ProbabilityWeights::normalized(std::move(raw)) : ProbabilityWeights(std::move(raw));
}

RunManifest make_manifest(const CLI::App* sub, std::vector<std::string> inputs) {
  RunManifest m;
  m.command = sub->get_name();
  m.inputs = std::move(inputs);
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    const auto& results = opt->results();
    std::string key = opt->get_name();
    key.erase(0, key.find_first_not_of('-'));
    if (key == "out" || key == "format") continue;
    m.parameters[key] = results.size() == 1 ? Json(results.front()) : Json(results);
  }
  m.tool_version = tool_version();
  m.timestamp = utc_timestamp();
  return m;
}

int emit(const ReportDocument& doc, const Common& c, std::ostream& out) {
  const auto format = parse_format(c.format);
  if (c.out_path.empty()) {
    if (format == ReportFormat::Json) {
      out << to_json_text(doc);
    } else {
      std::vector<CheckReport> rows = doc.checks;
      if (doc.suite)
        for (const auto& tc : doc.suite->checks) rows.push_back(tc.report);
      out << to_csv(rows);
    }
  } else {
    write_report(doc, c.out_path, format);
  }
  return doc.all_passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operator variance identity and Schatten-norm inequality checker", "opvar"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  std::function<int()> action;
  auto bind = [&](CLI::App* sub, std::function<int()> fn) {
    sub->callback([&action, fn = std::move(fn)] { action = fn; });
  };

  // abs
  Common abs_c;
  std::string abs_matrix;
  auto* abs_cmd = app.add_subcommand("abs", "Operator absolute value |A| = (A*A)^{1/2}");
  abs_cmd->add_option("--matrix", abs_matrix, "Matrix JSON file")->required();
  add_common(abs_cmd, abs_c);
  bind(abs_cmd, [&] {
    const auto a = parse_matrix_file(abs_matrix);
    const auto root = abs_op(a);
    const double norm = operator_norm(a);
    ReportDocument doc{make_manifest(abs_cmd, {abs_matrix}), {}, std::nullopt, Json::object()};
    doc.checks.push_back(CheckReport::residual("abs-square", operator_norm(root * root - abs_squared(a)),
                                               1e-11 * (1.0 + norm * norm) * abs_c.tolerance_scale));
    doc.artifacts["abs"] = matrix_to_json(root);
    return emit(doc, abs_c, out);
  });

  // norm
  Common norm_c;
  std::string norm_matrix;
  std::string norm_p;
  auto* norm_cmd = app.add_subcommand("norm", "Schatten p-norm (p in (0, inf]); prints the value");
  norm_cmd->add_option("--matrix", norm_matrix, "Matrix JSON file")->required();
  norm_cmd->add_option("--p", norm_p, "Schatten order, a positive real or inf")->required();
  add_common(norm_cmd, norm_c);
  bind(norm_cmd, [&] {
    const auto a = parse_matrix_file(norm_matrix);
    const auto p = SchattenOrder::parse(norm_p);
    const double value = schatten_norm(a, p);
    out << shortest(value) << "\n";
    if (norm_c.out_path.empty()) return kExitOk;
    ReportDocument doc{make_manifest(norm_cmd, {norm_matrix}), {}, std::nullopt, Json::object()};
    doc.artifacts["norm"] = value;
    doc.artifacts["p"] = p.to_string();
    doc.artifacts["quasi_norm"] = p.is_quasi_norm();
    doc.artifacts["q_norm_eligible"] = p.q_norm_eligible();
    return emit(doc, norm_c, out);
  });

  // identity / amqm
  Common id_c;
  FamilyArgs id_f;
  auto* id_cmd = app.add_subcommand("identity", "Weighted operator variance identity");
  add_family(id_cmd, id_f, true);
  add_common(id_cmd, id_c);
  bind(id_cmd, [&] {
    auto as = load_matrices(id_f.matrices);
    auto t = load_weights(id_f, as.size());
    const WeightedFamily fam(std::move(t), std::move(as));
    auto sides = variance_sides(fam, {id_c.tolerance_scale});
    ReportDocument doc{make_manifest(id_cmd, id_f.matrices), {sides.report}, std::nullopt, Json::object()};
    doc.artifacts["lhs"] = matrix_to_json(sides.lhs);
    doc.artifacts["rhs"] = matrix_to_json(sides.rhs);
    doc.artifacts["mean"] = matrix_to_json(weighted_mean(fam));
    return emit(doc, id_c, out);
  });

  Common amqm_c;
  FamilyArgs amqm_f;
  auto* amqm_cmd = app.add_subcommand("amqm", "AM-QM operator inequality |sum t A|^2 <= sum t |A|^2");
  add_family(amqm_cmd, amqm_f, true);
  add_common(amqm_cmd, amqm_c);
  bind(amqm_cmd, [&] {
    auto as = load_matrices(amqm_f.matrices);
    auto t = load_weights(amqm_f, as.size());
    const WeightedFamily fam(std::move(t), std::move(as));
    ReportDocument doc{make_manifest(amqm_cmd, amqm_f.matrices), {am_qm_margin(fam, {amqm_c.tolerance_scale})},
                       std::nullopt, nullptr};
    return emit(doc, amqm_c, out);
  });

  // bounds
  Common bounds_c;
  FamilyArgs bounds_f;
  std::string bounds_m;
  std::string bounds_big_m;
  bool bounds_relaxed = false;
  auto* bounds_cmd = app.add_subcommand("bounds", "alpha/beta sandwich for sum t A^2 - (sum t A)^2");
  add_family(bounds_cmd, bounds_f, true);
  bounds_cmd->add_option("--m,--lower", bounds_m, "Comma-separated lower bounds m_i")->required();
  bounds_cmd->add_option("--M,--upper", bounds_big_m, "Comma-separated upper bounds M_i")->required();
  bounds_cmd->add_flag("--relaxed", bounds_relaxed, "Allow any Hermitian A_i (m_i may be negative)");
  add_common(bounds_cmd, bounds_c);
  bind(bounds_cmd, [&] {
    auto as = load_matrices(bounds_f.matrices);
    auto t = load_weights(bounds_f, as.size());
    const WeightedFamily fam(std::move(t), std::move(as));
    const ScalarBounds b{parse_reals(bounds_m), parse_reals(bounds_big_m)};
    const auto mode = bounds_relaxed ? BoundsMode::Relaxed : BoundsMode::Strict;
    ReportDocument doc{make_manifest(bounds_cmd, bounds_f.matrices),
                       {variance_bounds(fam, b, mode, {bounds_c.tolerance_scale})}, std::nullopt, Json::object()};
    const auto consts = sandwich_constants(fam.weights(), b);
    doc.artifacts["alpha"] = consts.alpha;
    doc.artifacts["beta"] = consts.beta;
    doc.artifacts["difference"] = matrix_to_json(variance_difference(fam));
    return emit(doc, bounds_c, out);
  });

  // trace-identity
  Common tr_c;
  std::string tr_matrix;
  auto* tr_cmd = app.add_subcommand("trace-identity", "Normalized-trace identity on square matrices");
  tr_cmd->add_option("--matrix", tr_matrix, "Matrix JSON file")->required();
  add_common(tr_cmd, tr_c);
  bind(tr_cmd, [&] {
    ReportDocument doc{make_manifest(tr_cmd, {tr_matrix}),
                       {normalized_trace_identity(parse_matrix_file(tr_matrix), {tr_c.tolerance_scale})},
                       std::nullopt, nullptr};
    return emit(doc, tr_c, out);
  });

  // vector-identity
  Common vec_c;
  FamilyArgs vec_f;
  auto* vec_cmd = app.add_subcommand("vector-identity", "Hilbert-space variance identity, direct and rank-one embedded");
  vec_cmd->add_option("--vectors", vec_f.matrices, "Vector files (matrix JSON with one column)")->required();
  vec_cmd->add_option("--weights", vec_f.weights, "Comma-separated probability weights (uniform when omitted)");
  vec_cmd->add_flag("--normalize", vec_f.normalize, "Divide the weights by their sum");
  add_common(vec_cmd, vec_c);
  bind(vec_cmd, [&] {
    std::vector<Vector> xs;
    for (const auto& p : vec_f.matrices) xs.push_back(parse_vector_file(p));
    const auto t = load_weights(vec_f, xs.size());
    ReportDocument doc{make_manifest(vec_cmd, vec_f.matrices),
                       {vector_variance_identity(xs, t, std::nullopt, {vec_c.tolerance_scale})}, std::nullopt,
                       nullptr};
    return emit(doc, vec_c, out);
  });

  // lemma / thm-p / thm-sq share the same argument shape
  struct PFamilyCmd {
    Common c;
    FamilyArgs f;
    std::vector<std::string> ps;
  };
  using PCheck = CheckReport (*)(const std::vector<ComplexMatrix>&, SchattenOrder, const CheckOptions&);
  std::map<std::string, PFamilyCmd> pcmds;
  auto add_pcheck = [&](const std::string& name, const std::string& help, PCheck check) {
    auto& st = pcmds[name];
    auto* sub = app.add_subcommand(name, help);
    add_family(sub, st.f, false);
    sub->add_option("--p", st.ps, "Schatten order(s), finite")->required()->delimiter(',');
    add_common(sub, st.c);
    bind(sub, [&st, &out, sub, check] {
      const auto as = load_matrices(st.f.matrices);
      ReportDocument doc{make_manifest(sub, st.f.matrices), {}, std::nullopt, nullptr};
      for (const auto& text : st.ps) doc.checks.push_back(check(as, SchattenOrder::parse(text), {st.c.tolerance_scale}));
      return emit(doc, st.c, out);
    });
  };
  add_pcheck("lemma", "Sum bounds for positive operators in C_p", &lemma_sum_bounds);
  add_pcheck("thm-p", "p-th power deviation inequality (equality at p = 2)", &thm_pnorm_check);
  add_pcheck("thm-sq", "Squared-norm deviation inequality (equality at p = 2)", &thm_sqnorm_check);

  // qnorm
  Common q_c;
  FamilyArgs q_f;
  std::vector<std::string> q_ps;
  auto* q_cmd = app.add_subcommand("qnorm", "Q-norm inequality for families with A_i* A_j = 0");
  add_family(q_cmd, q_f, true);
  q_cmd->add_option("--p", q_ps, "Schatten order(s) >= 2 or inf")->required()->delimiter(',');
  add_common(q_cmd, q_c);
  bind(q_cmd, [&] {
    const auto as = load_matrices(q_f.matrices);
    const auto t = load_weights(q_f, as.size());
    ReportDocument doc{make_manifest(q_cmd, q_f.matrices), {}, std::nullopt, nullptr};
    for (const auto& text : q_ps)
      doc.checks.push_back(qnorm_orthogonal_check(as, t, SchattenOrder::parse(text), {q_c.tolerance_scale}));
    return emit(doc, q_c, out);
  });

  // field
  Common field_c;
  std::string field_kind = "rotation";
  std::string field_a = "0";
  std::string field_b = "pi";
  std::string field_nodes = "8,64,512";
  std::string field_rule = "midpoint";
  std::string field_matrix;
  std::string field_coeffs = "0,0,1";
  int field_dim = 2;
  auto* field_cmd = app.add_subcommand("field", "Discretized continuous field: integral identity and refinement");
  field_cmd->add_option("--kind", field_kind, "constant|linear|rotation|polynomial")
      ->check(CLI::IsMember({"constant", "linear", "rotation", "polynomial"}));
  field_cmd->add_option("--a", field_a, "Left endpoint (real or multiple of pi, e.g. 0.5pi)");
  field_cmd->add_option("--b", field_b, "Right endpoint");
  field_cmd->add_option("--nodes", field_nodes, "Comma-separated increasing panel counts");
  field_cmd->add_option("--rule", field_rule, "midpoint|trapezoid")->check(CLI::IsMember({"midpoint", "trapezoid"}));
  field_cmd->add_option("--matrix", field_matrix, "Matrix C for constant (A_t = C) and linear (A_t = tC) fields");
  field_cmd->add_option("--coeffs", field_coeffs, "Polynomial coefficients c_0,c_1,... for A_t = p(t) I");
  field_cmd->add_option("--dim", field_dim, "Dimension for polynomial fields")->check(CLI::PositiveNumber);
  add_common(field_cmd, field_c);
  bind(field_cmd, [&] {
    const double a = parse_endpoint(field_a);
    const double b = parse_endpoint(field_b);
    std::vector<std::string> inputs;
    auto builtin = [&]() -> BuiltinField {
      if (field_kind == "rotation") return rotation_field(a, b);
      if (field_kind == "polynomial") return polynomial_field(parse_reals(field_coeffs), field_dim, a, b);
      const ComplexMatrix c = field_matrix.empty() ? ComplexMatrix::Identity(field_dim, field_dim)
                                                   : parse_matrix_file(field_matrix);
      if (!field_matrix.empty()) inputs.push_back(field_matrix);
      return field_kind == "constant" ? constant_field(c, a, b) : linear_field(c, a, b);
    }();
    const auto counts = parse_ints(field_nodes);
    const auto rule = parse_rule(field_rule);
    auto levels = refinement_study(builtin.spec, counts, rule, builtin.exact_mean, {field_c.tolerance_scale});
    ReportDocument doc{make_manifest(field_cmd, inputs), std::move(levels), std::nullopt, Json::object()};
    doc.artifacts["exact_mean"] = matrix_to_json(builtin.exact_mean);
    Json integrals = Json::array();
    for (int n : counts) integrals.push_back(matrix_to_json(bochner_integral(discretize_field(builtin.spec, n, rule))));
    doc.artifacts["integrals"] = std::move(integrals);
    return emit(doc, field_c, out);
  });

  // suite
  Common suite_c;
  TrialConfig cfg;
  std::string suite_ensemble = "ginibre";
  std::string suite_dims = "1,2,3,4,5,6,7,8";
  std::string suite_sizes = "1,2,3,4,5,6";
  std::string suite_grid = "0.25,0.5,1,1.5,2,3,4,inf";
  auto* suite_cmd = app.add_subcommand("suite", "Seeded randomized run of every applicable check");
  suite_cmd->add_option("--seed", cfg.seed, "64-bit seed");
  suite_cmd->add_option("--trials", cfg.trials, "Number of trials (>= 1)");
  suite_cmd->add_option("--ensemble", suite_ensemble, "ginibre|wishart|diagonal-positive|orthogonal-rank-one");
  suite_cmd->add_option("--dims", suite_dims, "Comma-separated matrix dimensions");
  suite_cmd->add_option("--sizes", suite_sizes, "Comma-separated family sizes");
  suite_cmd->add_option("--p-grid", suite_grid, "Comma-separated Schatten orders");
  suite_cmd->add_option("--bound-lo", cfg.bound_lo, "Lower end of the diagonal-positive bound range");
  suite_cmd->add_option("--bound-hi", cfg.bound_hi, "Upper end of the diagonal-positive bound range");
  suite_cmd->add_option("--threads", cfg.threads, "Worker threads (0 = hardware concurrency)");
  add_common(suite_cmd, suite_c);
  bind(suite_cmd, [&] {
    cfg.ensemble = parse_ensemble(suite_ensemble);
    cfg.dims = parse_ints(suite_dims);
    cfg.family_sizes = parse_ints(suite_sizes);
    cfg.p_grid.clear();
    for (const auto& s : split_list(suite_grid)) cfg.p_grid.push_back(SchattenOrder::parse(s));
    cfg.tolerance_scale = suite_c.tolerance_scale;
    auto manifest = make_manifest(suite_cmd, {});
    manifest.parameters["seed"] = cfg.seed;
    ReportDocument doc{std::move(manifest), {}, random_suite(cfg), nullptr};
    return emit(doc, suite_c, out);
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace opvar
