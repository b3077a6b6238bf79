#pragma once

#include <catprob/error.hpp>
#include <catprob/query.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

namespace catprob::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitMath = 3;

/// Parses `args` (without the program name), runs the query and writes the
/// result to `out`. Returns the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Channel-based inference over finite joint states", "catprob"};
  app.require_subcommand(1);
  QuerySpec q;
  std::string format = "ket";
  double eps = 0.0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", q.input, "CSV table or weighted state file")->required();
    sub->add_option("--eps", eps, "comparison tolerance");
    sub->add_option("--format", format, "ket or json")->check(CLI::IsMember({"ket", "json"}));
    sub->add_option("--precision", q.precision, "digits after the decimal point")->check(CLI::Range(0, 17));
  };

  auto* marg = app.add_subcommand("marginal", "marginalise onto the wires set in --mask");
  common(marg);
  marg->add_option("--mask", q.mask, "wires to keep, e.g. 1,0,0,0,1")->required();

  auto* ext = app.add_subcommand("extract", "conditional channel ω[out | in]");
  common(ext);
  ext->add_option("--out-mask", q.out_mask)->required();
  ext->add_option("--in-mask", q.in_mask)->required();
  ext->add_option("--at", q.at, "print only the row for this input tuple");

  auto* inv = app.add_subcommand("invert", "Bayesian inversion of ω[out | in] along the in-marginal");
  common(inv);
  inv->add_option("--out-mask", q.out_mask)->required();
  inv->add_option("--in-mask", q.in_mask)->required();
  inv->add_option("--at", q.at, "print only the row for this observed tuple");

  auto* cond = app.add_subcommand("condition", "condition the joint state on an effect");
  common(cond);
  cond->add_option("--effect", q.effect, "t:1,f:0 or {t}; omitted means truth");
  cond->add_option("--effect-mask", q.effect_mask, "wires the effect lives on (default: all)");

  auto* cross = app.add_subcommand("crossover", "posterior on the --mask wires given an effect on the others");
  common(cross);
  cross->add_option("--effect", q.effect)->required();
  cross->add_option("--mask", q.mask, "wires of the marginal of interest (default: first wire)");
  cross->add_option("--path", q.path)->check(CLI::IsMember({"backward", "joint", "forward", "all"}));

  auto* ci = app.add_subcommand("ci", "test X ⟂ Y | Z");
  common(ci);
  ci->add_option("--x", q.x)->required();
  ci->add_option("--y", q.y)->required();
  ci->add_option("--z", q.z, "conditioning wires; empty for plain independence");
  ci->add_option("--formulation", q.formulation)->check(CLI::IsMember({"i", "ii", "iii", "iv", "all"}));

  auto* fit = app.add_subcommand("fit", "fit a naive Bayes model and dump it");
  auto* cls = app.add_subcommand("classify", "naive Bayes posterior for an observation");
  for (auto* sub : {fit, cls}) {
    common(sub);
    sub->add_option("--class", q.class_column, "class column (default: last)");
    sub->add_flag("--hybrid", q.hybrid, "Gaussian likelihoods for numeric or parametrised features");
    sub->add_option("--gaussian", q.gaussians, "feature=..;class=..;mean=..;stddev=..");
    sub->add_option("--gaussians", q.gaussians_file, "file with one gaussian spec per line");
  }
  cls->add_option("--observation", q.observation, "feature values in column order, e.g. s,c,h,t")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  for (auto* sub : app.get_subcommands()) q.command = sub->get_name();
  if (app.get_subcommands().front()->count("--eps")) q.eps = eps;
  q.format = format == "json" ? OutputFormat::Json : OutputFormat::Ket;

  try {
    out << run_query(q);
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const MathError& e) {
    err << "math error: " << e.what() << "\n";
    return kExitMath;
  }
}

}  // namespace catprob::cli
