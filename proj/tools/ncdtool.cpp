// ncdtool: construct domains, lift them to manifolds, verify, classify slices, plot.
//
// Exit codes: 0 success / verification pass, 1 verification failure,
// 2 invalid input, 3 internal error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "ncd/construct.hpp"
#include "ncd/lift.hpp"
#include "ncd/ncd_check.hpp"
#include "ncd/plot.hpp"
#include "ncd/serialize.hpp"
#include "ncd/slice.hpp"
#include "ncd/verify.hpp"

namespace {

using namespace ncd;

constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

std::string coord(double v) {
  char buf[40];
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.1f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.10g", v);
  }
  return buf;
}

std::string point_text(const std::vector<double>& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + coord(x[i]);
  return s + ")";
}

std::vector<int> parse_labels(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (item != "0" && item != "1") throw InputError("--labels entries must be 0 or 1, got \"" + item + "\"");
    out.push_back(item == "1" ? 1 : 0);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& r : parse_rational_list(text)) out.push_back(to_double(r));
  if (out.empty()) throw InputError(flag + " needs at least one value");
  return out;
}

std::string stem(const std::string& path) {
  auto dot = path.rfind('.');
  auto slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

Arrangement load_arrangement(const std::string& path) {
  Json j = read_json_file(path);
  try {
    if (is_manifold_json(j)) return manifold_from_json(j).base();
    return arrangement_from_json(j);
  } catch (const InputError& e) {
    throw InputError(path + ":" + e.what());
  }
}

void print_primitive_table(const Arrangement& A) {
  std::printf("%-3s  %-17s  %s\n", "j", "kind", "f_j");
  for (std::size_t j = 0; j < A.size(); ++j) {
    const Primitive& p = A.primitive(j);
    std::string kind = to_string(p.kind());
    if (p.kind() == PrimitiveKind::cylinder) kind += "(" + to_string(p.base_kind()) + ")";
    std::printf("%-3zu  %-17s  %s\n", j + 1, kind.c_str(), p.f().to_string().c_str());
  }
  std::printf("seed point: (");
  for (std::size_t k = 0; k < A.n(); ++k) std::printf("%s%s", k ? ", " : "", to_string(A.seed_point()[k]).c_str());
  std::printf(")\n");
}

struct Options {
  std::uint64_t seed = 42;
  // construct
  std::string t_list, labels, variant = "mt2", out;
  std::string strip_half_width = "1", hole_shrink = "1/4";
  bool check = false;
  // lift / verify / slice / plot
  std::string in, equations_out;
  std::size_t m = 0;
  std::size_t samples = 2000, boundary_samples = 400;
  bool timings = false;
  double half_width = 12.0, step = 0.01, grid_step = 0.02;
  std::string t_value;
  std::string plane = "1,2", viewport, base;
  int width = 640;
};

int cmd_construct(const Options& o) {
  ConstructionInput in;
  in.t = parse_rational_list(o.t_list);
  in.labels = parse_labels(o.labels);
  in.variant = parse_variant(o.variant);
  in.strip_half_width = parse_rational(o.strip_half_width);
  in.hole_shrink = parse_rational(o.hole_shrink);
  Arrangement A = build(in);
  print_primitive_table(A);
  const std::string out = o.out.empty() ? "arrangement.json" : o.out;
  write_text_file(out, dump(to_json(A)));
  std::printf("wrote %s (%zu primitives in R^%zu)\n", out.c_str(), A.size(), A.n());
  if (o.check) {
    NcdReport r = check_ncd(A, NcdBudget{}, o.seed);
    for (const auto& c : r.conditions) std::printf("%-18s %s  %s\n", c.id.c_str(), c.passed ? "pass" : "FAIL", c.detail.c_str());
    return r.passed ? 0 : kExitFail;
  }
  return 0;
}

int cmd_lift(const Options& o) {
  auto A = std::make_shared<const Arrangement>(load_arrangement(o.in));
  LiftedManifold L(A, o.m == 0 ? minimal_m(*A) : o.m);
  const std::string out = o.out.empty() ? stem(o.in) + "_m" + std::to_string(L.m()) + ".json" : o.out;
  const std::string eq = o.equations_out.empty() ? stem(out) + ".txt" : o.equations_out;
  write_text_file(out, dump(to_json(L, o.in)));
  write_text_file(eq, equations_text(L));
  std::printf("%zu equations, ambient dim %zu, manifold dim %zu\n", L.l(), L.ambient_dim(), L.m());
  std::printf("wrote %s and %s\n", out.c_str(), eq.c_str());
  return 0;
}

int cmd_verify(const Options& o) {
  Json j = read_json_file(o.in);
  std::unique_ptr<LiftedManifold> L;
  try {
    if (is_manifold_json(j)) {
      L = std::make_unique<LiftedManifold>(manifold_from_json(j));
    } else {
      auto A = std::make_shared<const Arrangement>(arrangement_from_json(j));
      L = std::make_unique<LiftedManifold>(A, o.m == 0 ? minimal_m(*A) : o.m);
    }
  } catch (const InputError& e) {
    throw InputError(o.in + ":" + e.what());
  }
  VerifyConfig cfg;
  cfg.seed = o.seed;
  cfg.samples = o.samples;
  cfg.boundary_samples = o.boundary_samples;
  cfg.include_timings = o.timings;
  VerificationReport rep = run_suite(*L, cfg);
  const std::string out = o.out.empty() ? stem(o.in) + "_report.json" : o.out;
  write_text_file(out, dump(to_json(rep)));
  for (const auto& c : rep.checks) {
    std::printf("%-22s %-12s %s\n", c.id.c_str(), to_string(c.verdict).c_str(), c.detail.c_str());
  }
  std::printf("singular values: {");
  for (std::size_t i = 0; i < rep.singular_values.size(); ++i) {
    const auto& v = rep.singular_values[i];
    std::printf("%s%s", i ? ", " : "", v.exact ? to_string(*v.exact).c_str() : coord(v.value).c_str());
  }
  std::printf("}\n%s; report written to %s\n", rep.passed ? "pass" : "fail", out.c_str());
  return rep.passed ? 0 : kExitFail;
}

int cmd_slice(const Options& o) {
  Arrangement A = load_arrangement(o.in);
  SliceConfig cfg;
  cfg.half_width = o.half_width;
  cfg.step = o.step;
  cfg.seed = o.seed;
  SliceClass s = classify_slice(A, parse_rational(o.t_value), cfg);
  std::string line = to_string(s.boundedness);
  if (s.boundedness == Boundedness::unbounded) {
    line += "; escape witness " + point_text(s.empirical.escape_witness);
  } else if (s.boundedness == Boundedness::bounded) {
    line += "; enclosing radius " + coord(s.empirical.enclosing_radius);
  }
  std::printf("%s\n", line.c_str());
  std::printf("analytic: %s%s; empirical: %s, %zu component(s), %zu/%zu grid cells; %s\n",
              to_string(s.analytic.verdict).c_str(), s.analytic.supported ? "" : " (unsupported)",
              to_string(s.empirical.verdict).c_str(), s.empirical.components, s.empirical.members,
              s.empirical.grid_points, s.agree ? "agree" : "DISAGREE");
  return s.agree ? 0 : kExitFail;
}

int cmd_plot(const Options& o) {
  Arrangement A = load_arrangement(o.in);
  PlotConfig cfg;
  auto axes = parse_doubles(o.plane, "--plane");
  if (axes.size() != 2) throw InputError("--plane needs exactly two coordinate indices");
  for (double a : axes) {
    if (a != std::floor(a) || a < 1) throw InputError("--plane indices are 1-based integers");
  }
  cfg.axis_u = static_cast<std::size_t>(axes[0]) - 1;
  cfg.axis_v = static_cast<std::size_t>(axes[1]) - 1;
  if (!o.viewport.empty()) {
    auto v = parse_doubles(o.viewport, "--viewport");
    if (v.size() != 4) throw InputError("--viewport needs u_lo,u_hi,v_lo,v_hi");
    cfg.viewport = Viewport{v[0], v[1], v[2], v[3]};
  }
  if (!o.base.empty()) cfg.base = parse_doubles(o.base, "--base");
  cfg.grid_step = o.grid_step;
  cfg.width_px = o.width;
  const std::string out = o.out.empty() ? stem(o.in) + ".svg" : o.out;
  write_text_file(out, render_svg(A, cfg));
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct, lift and verify domains whose height function has prescribed level-set topology"};
  app.require_subcommand(1);
  app.fallthrough();  // --seed is accepted after the subcommand too
  Options o;
  app.add_option("--seed", o.seed, "Random seed")->envname("NCDLIFT_SEED")->capture_default_str();

  auto* construct = app.add_subcommand("construct", "Build a domain from critical values and labels");
  construct->add_option("--t", o.t_list, "Strictly increasing critical values, e.g. 0,1,2")->required();
  construct->add_option("--labels", o.labels, "One 0/1 label per interval, e.g. 1,0")->required();
  construct->add_option("--variant", o.variant, "mt2 or mt3")->capture_default_str();
  construct->add_option("--strip-half-width", o.strip_half_width)->capture_default_str();
  construct->add_option("--hole-shrink", o.hole_shrink)->capture_default_str();
  construct->add_option("--out,-o", o.out, "Output arrangement JSON");
  construct->add_flag("--check", o.check, "Run the domain checks after construction");

  auto* lift = app.add_subcommand("lift", "Lift an arrangement to the manifold f_j = |y_j|^2");
  lift->add_option("--in,-i", o.in)->required();
  lift->add_option("--m", o.m, "Manifold dimension (default n + l)");
  lift->add_option("--out,-o", o.out, "Output manifold JSON");
  lift->add_option("--equations", o.equations_out, "Plain equation list (default <out>.txt)");

  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--in,-i", o.in, "Manifold or arrangement JSON")->required();
  verify->add_option("--m", o.m, "Manifold dimension when the input is an arrangement");
  verify->add_option("--samples", o.samples)->capture_default_str();
  verify->add_option("--boundary-samples", o.boundary_samples)->capture_default_str();
  verify->add_option("--out,-o", o.out, "Report JSON");
  verify->add_flag("--timings", o.timings, "Include wall times in the report");

  auto* slice = app.add_subcommand("slice", "Classify the slice x1 = t");
  slice->add_option("--in,-i", o.in)->required();
  slice->add_option("--t", o.t_value)->required();
  slice->add_option("--half-width", o.half_width)->capture_default_str();
  slice->add_option("--step", o.step)->capture_default_str();

  auto* plot = app.add_subcommand("plot", "Draw the arrangement on a coordinate plane as SVG");
  plot->add_option("--in,-i", o.in)->required();
  plot->add_option("--plane", o.plane, "Two 1-based coordinate indices")->capture_default_str();
  plot->add_option("--viewport", o.viewport, "u_lo,u_hi,v_lo,v_hi");
  plot->add_option("--base", o.base, "Full point fixing the off-plane coordinates");
  plot->add_option("--step", o.grid_step, "Marching-squares grid step")->capture_default_str();
  plot->add_option("--width", o.width, "Width in pixels")->capture_default_str();
  plot->add_option("--out,-o", o.out, "Output SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  try {
    if (*construct) return cmd_construct(o);
    if (*lift) return cmd_lift(o);
    if (*verify) return cmd_verify(o);
    if (*slice) return cmd_slice(o);
    if (*plot) return cmd_plot(o);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}
