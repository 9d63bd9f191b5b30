#include "cli.hpp"

#include <algorithm>
#include <cstddef>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/program_options.hpp>
#include <nlohmann/json.hpp>

#include "nacap/nacap.hpp"
#include "spec_file.hpp"

namespace nacap::cli {

namespace po = boost::program_options;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string command;
  std::string spec_path;
  Vertex root = 0;
  std::optional<std::size_t> horizon;
  std::optional<std::string> window;
  std::optional<std::size_t> max_terms;
  bool human = false;
  std::optional<std::size_t> restrict_level;
  std::optional<std::size_t> series;
  std::optional<std::string> r_values;
  long power = 0;
  std::optional<Vertex> x;
  std::optional<Vertex> y;
  std::size_t n = 1;
  std::optional<std::string> W;
  bool construct = false;
  std::optional<std::string> c;
  std::optional<std::string> tau;
  std::optional<std::string> u;
  Rational threshold = 4;
  Rational min_precision = 1;

  std::size_t horizon_or(std::size_t fallback) const { return horizon.value_or(fallback); }
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    const auto b = cur.find_first_not_of(' ');
    const auto e = cur.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

Rational flag_rational(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const ParseError& e) {
    throw SpecError(std::string("--") + flag + ": " + e.what());
  }
}

std::vector<Vertex> vertex_list(const std::string& text) {
  std::vector<Vertex> out;
  for (const auto& s : split(text, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      out.push_back(v);
    } catch (const std::exception&) {
      throw SpecError("--W: '" + s + "' is not a vertex id");
    }
  }
  if (out.empty()) throw SpecError("--W: empty vertex list");
  return out;
}

/// Report under construction; numbers are audited as they are emitted.
class Report {
 public:
  explicit Report(std::string command) { j_["command"] = std::move(command); }

  template <OrderedField F>
  json number(const F& v) {
    json n;
    n["value"] = FieldOps<F>::format(v);
    const ExtRational g = FieldOps<F>::guarantee(v);
    if (g) {
      n["guarantee"] = g->get_str();
      min_guarantee_ = ext_min(min_guarantee_, g);
      const ExtRational val = FieldOps<F>::valuation(v);
      const Rational rel = val ? Rational(*g - *val) : Rational(0);
      if (!min_relative_ || rel < *min_relative_) min_relative_ = rel;
    } else {
      n["guarantee"] = nullptr;
    }
    return n;
  }

  template <OrderedField F>
  json function(const VertexFunction<F>& f) {
    json o = json::object();
    for (const auto& [x, v] : f) o[std::to_string(x)] = number(v);
    return o;
  }

  json& inputs() { return j_["inputs"]; }
  json& outputs() { return j_["outputs"]; }

  /// Relative precision (guarantee minus valuation) of the least precise
  /// emitted number; nullopt when every number is exact.
  const std::optional<Rational>& min_relative() const { return min_relative_; }

  json finish(const Rational& threshold) {
    json a;
    a["min_guarantee"] = min_guarantee_ ? json(min_guarantee_->get_str()) : json("exact");
    a["min_relative_precision"] = min_relative_ ? json(min_relative_->get_str()) : json("exact");
    a["threshold"] = threshold.get_str();
    j_["precision_audit"] = a;
    return j_;
  }

 private:
  json j_;
  ExtRational min_guarantee_;
  std::optional<Rational> min_relative_;
};

json ext_json(const ExtRational& v) { return v ? json(v->get_str()) : json("inf"); }

json ext_list(const std::vector<ExtRational>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(ext_json(x));
  return a;
}

json verdict_json(Report& rep, const CapacityVerdict& v) {
  json o;
  o["kind"] = to_string(v.kind);
  o["limit"] = v.limit ? rep.number(*v.limit) : json(nullptr);
  o["null_excluded"] = v.null_excluded;
  json certs = json::array();
  for (const auto& c : v.certificates) {
    json cj;
    std::visit(
        [&](const auto& cert) {
          using T = std::decay_t<decltype(cert)>;
          if constexpr (std::is_same_v<T, ExactSphericalCertificate>) {
            cj["type"] = "exact_spherical";
            cj["formula"] = cert.formula;
            cj["rule"] = cert.rule;
            cj["trend"] = to_string(cert.trend);
            if (!cert.subsequence.empty()) cj["subsequence"] = cert.subsequence;
            if (cert.lower) cj["lower"] = rep.number(*cert.lower);
            if (cert.upper) cj["upper"] = rep.number(*cert.upper);
            if (cert.terms) cj["series_terms"] = cert.terms;
          } else if constexpr (std::is_same_v<T, NashWilliamsCertificate>) {
            cj["type"] = "nash_williams";
            cj["subsequence"] = cert.subsequence;
            cj["boundary_valuations"] = ext_list(cert.boundary_valuations);
            cj["max_edge_valuations"] = ext_list(cert.max_edge_valuations);
            cj["condition_ii"] = cert.condition_ii;
            cj["condition_iii"] = cert.condition_iii;
            cj["symbolic"] = cert.symbolic;
          } else if constexpr (std::is_same_v<T, BoundedBelowCertificate>) {
            cj["type"] = "bounded_below";
            cj["tau"] = rep.number(cert.tau);
            cj["rule"] = cert.rule;
          } else {
            cj["type"] = "horizon_evidence";
            cj["horizon"] = cert.horizon;
            cj["difference_valuations"] = ext_list(cert.difference_valuations);
            cj["differences_increasing"] = cert.differences_increasing;
          }
        },
        c);
    certs.push_back(cj);
  }
  o["certificates"] = certs;
  return o;
}

json decay_json(const DecayCertificate& d) {
  json o;
  o["method"] = d.method;
  o["slope"] = ext_json(d.slope);
  o["offset"] = d.offset.get_str();
  o["per_round_trip"] = d.per_round_trip;
  return o;
}

template <OrderedField F>
F flag_literal(const std::optional<std::string>& text, const char* flag) {
  if (!text) throw SpecError(std::string("--") + flag + " is required");
  return parse_literal<F>(*text);
}

// ---------------------------------------------------------------------------
// Commands

template <OrderedField F>
void cmd_solve_dp(const Options& o, const WeightedGraph<F>& g, Report& rep) {
  const std::size_t n = o.horizon_or(4);
  const auto K = ball(g, o.root, n);
  const auto sol = solve_dp(g, K, o.root);
  const auto ren = solve_renormalized(g, K, o.root);
  auto& out = rep.outputs();
  out["K"] = K;
  out["potential"] = rep.function(sol.values);
  out["energy"] = rep.number(sol.energy);
  out["capacity"] = rep.number(sol.capacity);
  out["renormalized"] = rep.function(ren.values);
  out["renormalized_capacity"] = rep.number(ren.capacity);
}

template <OrderedField F>
void cmd_capacity(const Options& o, const WeightedGraph<F>& g, Report& rep) {
  const std::size_t N = o.horizon_or(8);
  const auto seq = capacity_sequence(g, o.root, N);
  json values = json::array();
  for (std::size_t n = 1; n <= N; ++n) {
    json row;
    row["n"] = n;
    row["cap"] = rep.number(seq.at(n));
    values.push_back(row);
  }
  auto& out = rep.outputs();
  out["values"] = values;
  out["difference_valuations"] = ext_list(seq.valuations);
  if (g.is_finite()) {
    out["verdict"] = nullptr;
  } else {
    out["verdict"] = verdict_json(rep, classify_generic(g, o.root, N, o.threshold));
  }
}

template <OrderedField F>
void cmd_classify(const Options& o, const WeightedGraph<F>& g, Report& rep) {
  const auto* p = g.profile();
  if (!p) throw PreconditionFailed("classify needs a rule-defined path or spherical graph");
  rep.outputs()["verdict"] = verdict_json(rep, classify_spherical(*p, o.horizon_or(10)));
}

template <OrderedField F>
void cmd_nash_williams(const Options& o, const WeightedGraph<F>& g, Report& rep) {
  const auto cert = nash_williams(g, o.root, o.horizon_or(10), o.threshold);
  auto& out = rep.outputs();
  if (!cert) {
    out["certificate"] = nullptr;
    return;
  }
  CapacityVerdict v;
  v.kind = CapacityKind::null;
  v.certificates.push_back(*cert);
  out["certificate"] = verdict_json(rep, v)["certificates"][0];
}

template <OrderedField F>
void cmd_green(const Options& o, const WeightedGraph<F>& g, Report& rep) {
  const std::size_t radius = o.horizon_or(6);
  const Vertex x = o.x.value_or(o.root);
  const Vertex y = o.y.value_or(o.root);
  const auto K = ball(g, o.root, radius);
  const auto col = green_matrix(g, K, y);
  auto& out = rep.outputs();
  out["K"] = K;
  out["column"] = rep.function(col);
  out["value"] = rep.number(value_at(col, x));
  if (x == y) {
    const auto h = covering_set(g, K);
    const F ratio = h.measure(y) / effective_capacity(h, ball(h, y, radius), y);
    out["m_over_cap"] = rep.number(ratio);
    out["matches_m_over_cap"] = y == o.root && FieldOps<F>::approx_equal(ratio, value_at(col, x));
  }
}

template <OrderedField F>
void cmd_transition(const Options& o, const WeightedGraph<F>& g, Report& rep) {
  const Vertex x = o.x.value_or(o.root);
  const Vertex y = o.y.value_or(o.root);
  TransitionContext<F> ctx(g);
  if (o.restrict_level) ctx = ctx.restricted(ball(g, o.root, *o.restrict_level + 1));
  auto& out = rep.outputs();
  if (ctx.restriction()) out["K"] = std::vector<Vertex>(ctx.restriction()->begin(), ctx.restriction()->end());
  out["n"] = o.n;
  out["P"] = rep.number(pn_element(ctx, x, y, o.n));
  out["Pi"] = rep.number(pi_element(ctx, x, y, o.n));
  out["row_sum_at_x"] = rep.number(ctx.row_sum(x));
  if (o.series) {
    const auto r = neumann_partial(ctx, x, y, *o.series);
    json s;
    s["N"] = *o.series;
    s["sum"] = rep.number(r.sum);
    json table = json::array();
    for (std::size_t n = 0; n < r.valuations.size(); ++n) table.push_back(json::array({n, ext_json(r.valuations[n])}));
    s["valuations"] = table;
    s["convergent"] = r.convergent();
    s["decay"] = r.decay ? decay_json(*r.decay) : json(nullptr);
    if (r.non_decay) {
      json nd;
      nd["x0"] = r.non_decay->x0;
      nd["k"] = r.non_decay->k;
      nd["c"] = r.non_decay->c.get_str();
      nd["value"] = rep.number(r.non_decay->value);
      s["non_decay"] = nd;
    } else {
      s["non_decay"] = nullptr;
    }
    out["series"] = s;
  }
}

template <OrderedField F>
void cmd_hardy(const Options& o, const WeightedGraph<F>& g, Report& rep) {
  if constexpr (!std::is_same_v<F, LCElement>) {
    throw PreconditionFailed("hardy needs the levi-civita field");
  } else {
    const std::size_t N = o.horizon_or(8);
    const CapacityVerdict v = classify_generic(g, o.root, N, o.threshold);
    std::optional<VertexFunction<LCElement>> bounds;
    if (v.kind != CapacityKind::positive && v.kind != CapacityKind::null) {
      bounds = capacity_lower_bounds(g, ball(g, o.root, N));
    }
    const auto w = hardy_construct<LCElement>(v, o.root, bounds);
    std::vector<VertexFunction<LCElement>> samples;
    for (std::size_t n = 1; n <= N; ++n) samples.push_back(solve_dp(g, ball(g, o.root, n), o.root).values);
    for (Vertex x : ball(g, o.root, N)) samples.push_back({{x, LCElement(1)}});
    const auto report = hardy_verify(g, w, samples);
    auto& out = rep.outputs();
    out["verdict"] = verdict_json(rep, v);
    out["provenance"] = to_string(w.provenance);
    out["weight"] = rep.function(w.weight);
    out["samples"] = samples.size();
    out["holds"] = report.holds;
    out["failing_sample"] = report.failing_sample ? json(*report.failing_sample) : json(nullptr);
  }
}

template <OrderedField F>
void cmd_harnack(const Options& o, const WeightedGraph<F>& g, Report& rep) {
  const auto W = o.W ? vertex_list(*o.W) : ball(g, o.root, o.horizon_or(3));
  rep.outputs()["W"] = W;
  rep.outputs()["C_W"] = rep.number(harnack_constant(g, W));
}

template <OrderedField F>
void cmd_superharmonic(const Options& o, const WeightedGraph<F>& g, Report& rep, const GraphSpec& spec) {
  auto& out = rep.outputs();
  if (o.construct) {
    const F c = flag_literal<F>(o.c, "c");
    const F tau = flag_literal<F>(o.tau, "tau");
    const auto s = construct_superharmonic(g, o.root, c, tau, o.horizon_or(8));
    const auto check = is_superharmonic(g, s.values, s.verified_on);
    out["formula"] = s.formula;
    out["u"] = rep.function(s.values);
    out["laplacian"] = rep.function(check.laplacian);
    out["holds"] = check.holds;
    return;
  }
  std::optional<VertexFunction<F>> u;
  if (o.u) {
    VertexFunction<F> f;
    const auto parts = split(*o.u, ';');
    for (std::size_t i = 0; i < parts.size(); ++i) f[i] = parse_literal<F>(parts[i]);
    u = f;
  } else {
    u = spec_function<F>(spec);
  }
  if (!u) throw SpecError("superharmonic needs --construct, --u or a 'u' list in the spec file");
  // W: listed vertices whose neighbors all carry a value.
  std::vector<Vertex> W;
  if (o.W) {
    W = vertex_list(*o.W);
  } else {
    const auto h = covering_set(g, {u->size() > 1 ? u->size() - 2 : 0});
    for (const auto& [x, v] : *u) {
      if (x >= h.vertex_count() || !h.complete(x)) continue;
      bool inside = true;
      for (const auto& nb : h.neighbors(x)) inside = inside && u->count(nb.to);
      if (inside) W.push_back(x);
    }
  }
  const auto check = is_superharmonic(g, *u, W);
  out["W"] = W;
  out["laplacian"] = rep.function(check.laplacian);
  out["holds"] = check.holds;
  out["witness"] = check.witness ? json(*check.witness) : json(nullptr);
}

void cmd_real_sweep(const Options& o, const WeightedGraph<RFElement>& g, Report& rep) {
  if (!o.r_values) throw SpecError("--r is required");
  std::vector<Rational> rs;
  for (const auto& s : split(*o.r_values, ',')) rs.push_back(flag_rational(s, "r"));
  const std::size_t N = o.horizon_or(25);
  const auto rows = real_sweep(g, o.root, o.power, rs, N);
  json table = json::array();
  for (const auto& row : rows) {
    json r;
    r["r"] = row.r.get_str();
    r["cap"] = rep.number(row.capacity);
    r["cap_float"] = row.capacity.get_d();
    r["scaled"] = rep.number(row.scaled);
    r["scaled_float"] = row.scaled.get_d();
    table.push_back(r);
  }
  rep.outputs()["N"] = N;
  rep.outputs()["power"] = o.power;
  rep.outputs()["rows"] = table;
}

template <OrderedField F>
void dispatch(const Options& o, const GraphSpec& spec, Report& rep) {
  const WeightedGraph<F> g = build_graph<F>(spec);
  const std::string& c = o.command;
  if (c == "solve-dp") return cmd_solve_dp(o, g, rep);
  if (c == "capacity") return cmd_capacity(o, g, rep);
  if (c == "classify") return cmd_classify(o, g, rep);
  if (c == "nash-williams") return cmd_nash_williams(o, g, rep);
  if (c == "green") return cmd_green(o, g, rep);
  if (c == "transition") return cmd_transition(o, g, rep);
  if (c == "hardy") return cmd_hardy(o, g, rep);
  if (c == "harnack") return cmd_harnack(o, g, rep);
  if (c == "superharmonic") return cmd_superharmonic(o, g, rep, spec);
  if (c == "real-sweep") {
    if constexpr (std::is_same_v<F, RFElement>) {
      return cmd_real_sweep(o, g, rep);
    } else {
      throw PreconditionFailed("real-sweep needs the rational-function field");
    }
  }
  throw SpecError("unknown command '" + c + "'");
}

// ---------------------------------------------------------------------------
// Rendering

bool is_number(const json& j) {
  return j.is_object() && j.size() == 2 && j.contains("value") && j.contains("guarantee");
}

std::string scalar_text(const json& j) {
  if (is_number(j)) {
    std::string s = j["value"].get<std::string>();
    if (!j["guarantee"].is_null()) s += "  [G=" + j["guarantee"].get<std::string>() + "]";
    return s;
  }
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

bool is_flat(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j) {
    if ((e.is_object() && !is_number(e)) || (e.is_array() && !is_flat(e))) return false;
  }
  return true;
}

void render_human(const json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    std::size_t width = 0;
    for (const auto& [k, v] : j.items()) width = std::max(width, k.size());
    for (const auto& [k, v] : j.items()) {
      if (is_number(v) || !v.is_structured()) {
        out << pad << std::left << std::setw(static_cast<int>(width)) << k << "  " << scalar_text(v) << "\n";
      } else if (is_flat(v)) {
        out << pad << std::left << std::setw(static_cast<int>(width)) << k << "  ";
        bool first = true;
        for (const auto& e : v) {
          out << (first ? "" : ", ") << (e.is_array() ? e.dump() : scalar_text(e));
          first = false;
        }
        out << "\n";
      } else {
        out << pad << k << ":\n";
        render_human(v, out, indent + 2);
      }
    }
  } else if (j.is_array()) {
    for (const auto& e : j) {
      out << pad << "-\n";
      render_human(e, out, indent + 2);
    }
  } else {
    out << pad << scalar_text(j) << "\n";
  }
}

po::options_description describe(Options& o) {
  po::options_description desc("options");
  desc.add_options()
      ("command", po::value<std::string>(&o.command)->required(), "command")
      ("spec", po::value<std::string>(&o.spec_path)->required(), "graph spec file")
      ("root", po::value<Vertex>(&o.root), "root vertex")
      ("horizon", po::value<std::size_t>(), "radius or horizon N")
      ("window", po::value<std::string>(), "Levi-Civita relative window")
      ("max-terms", po::value<std::size_t>(), "Levi-Civita term limit")
      ("json", po::bool_switch(), "structured output (default)")
      ("human", po::bool_switch(&o.human), "aligned text output")
      ("restrict", po::value<std::size_t>(), "restrict paths to {d(root, x) <= l}")
      ("series", po::value<std::size_t>(), "Neumann partial sum up to N")
      ("r", po::value<std::string>(), "comma separated r values")
      ("power", po::value<long>(&o.power), "power n in r^-n cap")
      ("x", po::value<Vertex>(), "vertex x")
      ("y", po::value<Vertex>(), "vertex y")
      ("n", po::value<std::size_t>(&o.n), "power n")
      ("W", po::value<std::string>(), "comma separated vertex set")
      ("construct", po::bool_switch(&o.construct), "construct a superharmonic function")
      ("c", po::value<std::string>(), "constant c")
      ("tau", po::value<std::string>(), "infinitesimal tau")
      ("u", po::value<std::string>(), "semicolon separated values u(0); u(1); ...")
      ("threshold", po::value<std::string>(), "Nash-Williams valuation rise")
      ("min-precision", po::value<std::string>(), "least accepted relative precision");
  return desc;
}

constexpr const char* kCommands =
    "usage: nacap <command> --spec <file> [options]\n"
    "commands: solve-dp capacity classify nash-williams green transition hardy harnack\n"
    "          superharmonic real-sweep\n";

Options parse_options(const std::vector<std::string>& args) {
  Options o;
  const po::options_description desc = describe(o);
  po::positional_options_description pos;
  pos.add("command", 1);
  po::variables_map vm;
  po::store(po::command_line_parser(args).options(desc).positional(pos).run(), vm);
  po::notify(vm);
  if (vm.count("horizon")) o.horizon = vm["horizon"].as<std::size_t>();
  if (vm.count("window")) o.window = vm["window"].as<std::string>();
  if (vm.count("max-terms")) o.max_terms = vm["max-terms"].as<std::size_t>();
  if (vm.count("restrict")) o.restrict_level = vm["restrict"].as<std::size_t>();
  if (vm.count("series")) o.series = vm["series"].as<std::size_t>();
  if (vm.count("r")) o.r_values = vm["r"].as<std::string>();
  if (vm.count("x")) o.x = vm["x"].as<Vertex>();
  if (vm.count("y")) o.y = vm["y"].as<Vertex>();
  if (vm.count("W")) o.W = vm["W"].as<std::string>();
  if (vm.count("c")) o.c = vm["c"].as<std::string>();
  if (vm.count("tau")) o.tau = vm["tau"].as<std::string>();
  if (vm.count("u")) o.u = vm["u"].as<std::string>();
  if (vm.count("threshold")) o.threshold = flag_rational(vm["threshold"].as<std::string>(), "threshold");
  if (vm.count("min-precision")) o.min_precision = flag_rational(vm["min-precision"].as<std::string>(), "min-precision");
  if (o.human && vm["json"].as<bool>()) throw SpecError("--json and --human are exclusive");
  return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (std::find(args.begin(), args.end(), "--help") != args.end()) {
    Options unused;
    out << kCommands << describe(unused);
    return exit_ok;
  }
  try {
    const Options o = parse_options(args);
    const GraphSpec spec = load_spec(o.spec_path);
    PrecisionConfig precision = spec.precision;
    if (o.window) precision.window = flag_rational(*o.window, "window");
    if (o.max_terms) precision.max_terms = *o.max_terms;
    PrecisionScope scope(precision);

    Report rep(o.command);
    json flags;
    flags["root"] = o.root;
    if (o.horizon) flags["horizon"] = *o.horizon;
    flags["window"] = precision.window.get_str();
    flags["max_terms"] = precision.max_terms;
    rep.inputs()["spec"] = spec.raw;
    rep.inputs()["flags"] = flags;

    switch (spec.field) {
      case FieldKind::levi_civita: dispatch<LCElement>(o, spec, rep); break;
      case FieldKind::rational: dispatch<Rational>(o, spec, rep); break;
      case FieldKind::rational_function: dispatch<RFElement>(o, spec, rep); break;
    }
    const json report = rep.finish(o.min_precision);
    if (o.human) {
      render_human(report, out, 0);
    } else {
      out << report.dump(2) << "\n";
    }
    if (rep.min_relative() && *rep.min_relative() < o.min_precision) {
      err << "precision exhausted: relative precision " << rep.min_relative()->get_str() << " is below "
          << o.min_precision.get_str() << "\n";
      return exit_precision;
    }
    return exit_ok;
  } catch (const SpecError& e) {
    err << "spec error: " << e.what() << "\n";
    return exit_spec_error;
  } catch (const ParseError& e) {
    err << "spec error: " << e.what() << "\n";
    return exit_spec_error;
  } catch (const po::error& e) {
    err << "spec error: " << e.what() << "\n";
    return exit_spec_error;
  } catch (const nlohmann::json::exception& e) {
    err << "spec error: " << e.what() << "\n";
    return exit_spec_error;
  } catch (const PrecisionExhausted& e) {
    err << "precision exhausted: " << e.what() << "\n";
    return exit_precision;
  } catch (const PreconditionFailed& e) {
    err << "precondition failed: " << e.what() << "\n";
    return exit_precondition;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_internal;
  }
}

}  // namespace nacap::cli
