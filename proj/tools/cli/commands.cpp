/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "cli/commands.hpp"

#include "skelfit/capture.hpp"
#include "skelfit/hierarchy.hpp"
#include "skelfit/joint_solver.hpp"
#include "skelfit/numeric_text.hpp"
#include "skelfit/residuals.hpp"
#include "skelfit/skeleton.hpp"
#include "skelfit/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

namespace skelfit::cli
{

namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double value)
{
  return format_significant(value, 9);
}

json vec_json(const Vec3& v)
{
  return json::array({v.x(), v.y(), v.z()});
}

std::ofstream open_output(const fs::path& path)
{
  std::ofstream output(path, std::ios::binary);
  if (!output)
    throw Error(ErrorKind::Io, "cannot write " + path.string());
  return output;
}

void write_text(const fs::path& path, const std::string& text)
{
  std::ofstream output = open_output(path);
  output << text;
  if (!output)
    throw Error(ErrorKind::Io, "write failed for " + path.string());
}

struct SessionArgs
{
  std::string path;
  double unit_scale = 1.0;
  std::string labels;
};

CaptureSession load(const SessionArgs& args, std::ostream& err)
{
  if (!fs::exists(args.path))
    throw Error(ErrorKind::Io, "no such file: " + args.path);
  LoadOptions options;
  options.unit_scale = args.unit_scale;
  CaptureSession session = load_session(args.path, options);
  if (!args.labels.empty())
    session = session.with_labels(load_labels(args.labels));
  for (const Warning& warning : validate(session))
    err << "warning: " << warning.message << '\n';
  return session;
}

void add_session_options(CLI::App& command, SessionArgs& args)
{
  command.add_option("session", args.path, "Transform-stream CSV")->required();
  command.add_option("--unit-scale", args.unit_scale, "Multiplier applied to input translations")
    ->check(CLI::PositiveNumber);
}

std::string body_name(const CaptureSession& session, std::size_t body)
{
  const auto& label = session.body(body).label;
  return label ? *label + " (" + std::to_string(body) + ")" : std::to_string(body);
}

json fit_report(const JointFit& fit)
{
  const ResidualStats stats = summarize(fit.residual_per_frame);
  json report;
  report["child"] = fit.child;
  report["parent"] = fit.parent;
  report["c"] = vec_json(fit.c);
  report["l"] = vec_json(fit.l);
  report["singular_values"] = fit.singular_values;
  report["epsilon_m"] = fit.epsilon;
  report["classification"] = std::string(to_string(fit.classification));
  report["deficient_count"] = fit.deficient_count;
  report["axis_child"] = fit.hinge_axis_child ? vec_json(*fit.hinge_axis_child) : json(nullptr);
  report["axis_parent"] = fit.hinge_axis_parent ? vec_json(*fit.hinge_axis_parent) : json(nullptr);
  report["frames"] = fit.residual_per_frame.size();
  report["residual_m"] = {{"min", stats.min},   {"max", stats.max},       {"mean", stats.mean},
                          {"rms", stats.rms},   {"median", stats.median}, {"skewness", stats.skewness}};
  return report;
}

// solve-joint -----------------------------------------------------------------

struct SolveArgs
{
  SessionArgs session;
  std::size_t child = 0;
  std::size_t parent = 0;
  double rank_tol = kDefaultRankTolerance;
  std::string output;
  std::string residuals;
};

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err)
{
  const CaptureSession session = load(args.session, err);
  const JointFit fit = solve_joint(session, args.child, args.parent, args.rank_tol);
  const std::string report = fit_report(fit).dump(2) + "\n";
  if (args.output.empty())
    out << report;
  else
    write_text(args.output, report);

  if (!args.residuals.empty())
  {
    std::ofstream csv = open_output(args.residuals);
    write_residual_csv(csv, fit.residual_per_frame);
  }
  if (!args.output.empty())
    out << "joint " << body_name(session, fit.child) << " -> " << body_name(session, fit.parent) << ": "
        << to_string(fit.classification) << ", epsilon " << num(fit.epsilon) << " m\n";
  return kOk;
}

// residuals -------------------------------------------------------------------

struct ResidualArgs
{
  SessionArgs session;
  std::size_t child = 0;
  std::size_t parent = 0;
  double rank_tol = kDefaultRankTolerance;
  double bin_width = 0.001;
  std::string output;
  std::string timeline;
};

int cmd_residuals(const ResidualArgs& args, std::ostream& out, std::ostream& err)
{
  const CaptureSession session = load(args.session, err);
  const JointFit fit = solve_joint(session, args.child, args.parent, args.rank_tol);
  const ResidualTimeline timeline = residual_timeline(fit);
  const auto bins = histogram(timeline.residual_m, args.bin_width);

  if (args.output.empty())
  {
    write_histogram_csv(out, bins);
  }
  else
  {
    std::ofstream csv = open_output(args.output);
    write_histogram_csv(csv, bins);
    const ResidualStats& s = timeline.stats;
    out << "frames " << timeline.residual_m.size() << "\n"
        << "min_m " << num(s.min) << "\nmax_m " << num(s.max) << "\nmean_m " << num(s.mean) << "\nrms_m "
        << num(s.rms) << "\nmedian_m " << num(s.median) << "\nskewness " << num(s.skewness) << "\n";
  }
  if (!args.timeline.empty())
  {
    std::ofstream csv = open_output(args.timeline);
    write_residual_csv(csv, timeline.residual_m);
  }
  return kOk;
}

// build-skeleton --------------------------------------------------------------

struct BuildArgs
{
  SessionArgs session;
  std::string hierarchy;
  bool infer = false;
  std::optional<std::size_t> root;
  double rank_tol = kDefaultRankTolerance;
  double loop_factor = kDefaultLoopFactor;
  std::size_t threads = 0;
  std::string output;
  std::string fit_matrix;
};

int cmd_build(const BuildArgs& args, std::ostream& out, std::ostream& err)
{
  const CaptureSession session = load(args.session, err);

  std::optional<ParentMap> hierarchy;
  if (!args.hierarchy.empty())
    hierarchy = load_parent_map(args.hierarchy);

  FitOptions options;
  options.rank_tol = args.rank_tol;
  options.root = args.root;
  options.threads = args.threads;
  options.loop_factor = args.loop_factor;

  std::optional<FitMatrix> fits;
  SkeletonFit fit;
  if (hierarchy)
  {
    fit = fit_skeleton(session, hierarchy, options);
  }
  else
  {
    fits = build_fit_matrix(session, {options.rank_tol, options.threads, false});
    const HierarchyResult inferred = infer_hierarchy(*fits, {options.root, options.loop_factor});
    fit = fit_skeleton(session, inferred.parent, options);
    fit.hierarchy = inferred;
  }

  const std::string document = skeleton_to_json(fit.model);
  if (args.output.empty())
    out << document;
  else
    write_text(args.output, document);

  if (!args.fit_matrix.empty())
  {
    if (!fits)
      fits = build_fit_matrix(session, {options.rank_tol, options.threads, false});
    std::ofstream csv = open_output(args.fit_matrix);
    write_fit_matrix_csv(csv, *fits);
  }

  std::ostream& report = args.output.empty() ? err : out;
  report << "root " << body_name(session, fit.model.root) << "\n";
  report << "joint epsilon_m classification\n";
  for (const JointFit& joint : fit.joints)
    report << body_name(session, joint.child) << " -> " << body_name(session, joint.parent) << ' '
           << num(joint.epsilon) << ' ' << to_string(joint.classification) << '\n';
  report << "limb lengths (m)\n";
  for (const LimbLength& limb : limb_table(fit.model))
    report << body_name(session, limb.joint_a) << " -- " << body_name(session, limb.joint_b) << " on "
           << body_name(session, limb.shared_body) << ' ' << num(limb.length_m) << '\n';
  if (fit.hierarchy)
  {
    report << "total epsilon " << num(fit.hierarchy->total_epsilon) << " m\n";
    for (const WeightedEdge& edge : fit.hierarchy->unused_low_error_edges)
      err << "warning: low-error pair " << edge.i << "-" << edge.j << " (epsilon " << num(edge.epsilon)
          << " m) is not in the tree; possible loop joint\n";
  }
  return kOk;
}

// reconstruct -----------------------------------------------------------------

struct ReconstructArgs
{
  SessionArgs session;
  std::string skeleton;
  std::string output;
  bool orthonormalize = false;
};

int cmd_reconstruct(const ReconstructArgs& args, std::ostream& out, std::ostream& err)
{
  const CaptureSession session = load(args.session, err);
  if (!fs::exists(args.skeleton))
    throw Error(ErrorKind::Io, "no such file: " + args.skeleton);
  const SkeletonModel model = load_skeleton(args.skeleton);
  if (model.bodies.size() != session.body_count())
    throw Error(ErrorKind::ModelMismatch, "skeleton describes " + std::to_string(model.bodies.size()) +
                                            " bodies but the session has " +
                                            std::to_string(session.body_count()));

  const CaptureSession rebuilt = reconstruct(model, session, {args.orthonormalize});
  save_session(args.output, rebuilt);
  out << "max joint gap before: " << num(max_joint_gap(model, session)) << " m\n";
  out << "max joint gap after: " << num(max_joint_gap(model, rebuilt)) << " m\n";
  return kOk;
}

// synth -----------------------------------------------------------------------

struct SynthArgs
{
  std::string spec;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> frames;
  std::optional<double> sigma_t;
  std::optional<double> sigma_r;
  std::string output;
  std::string write_spec;
};

int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream&)
{
  SynthSpec spec;
  if (!args.preset_name.empty())
  {
    const auto found = preset(args.preset_name, args.frames.value_or(500));
    if (!found)
      throw Error(ErrorKind::InvalidSpec, "unknown preset '" + args.preset_name + "'");
    spec = *found;
  }
  else
  {
    if (!fs::exists(args.spec))
      throw Error(ErrorKind::Io, "no such file: " + args.spec);
    spec = load_spec(args.spec);
    if (args.frames)
      spec.frame_count = *args.frames;
  }
  if (args.seed)
    spec.seed = *args.seed;
  if (args.sigma_t)
    spec.noise.sigma_t = *args.sigma_t;
  if (args.sigma_r)
    spec.noise.sigma_r = *args.sigma_r;

  if (!args.write_spec.empty())
  {
    check_spec(spec);
    save_spec(args.write_spec, spec);
  }
  if (args.output.empty())
    return kOk;

  const SynthResult result = generate(spec);
  std::error_code ec;
  fs::create_directories(args.output, ec);
  if (ec)
    throw Error(ErrorKind::Io, "cannot create " + args.output + ": " + ec.message());
  const fs::path dir(args.output);
  save_session(dir / "session.csv", result.session);
  save_skeleton(dir / "truth.json", result.truth);

  std::ofstream labels = open_output(dir / "labels.csv");
  labels << "body,label\n";
  for (const BodyTrack& track : result.session.bodies())
    labels << track.id << ',' << track.label.value_or("") << '\n';

  out << "wrote " << result.session.body_count() << " bodies x " << result.session.frame_count()
      << " frames to " << (dir / "session.csv").string() << '\n';
  return kOk;
}

// calibrate-pair --------------------------------------------------------------

struct CalibrateArgs
{
  SessionArgs session;
  std::size_t body_a = 0;
  std::size_t body_b = 1;
  std::optional<double> known_distance;
};

int cmd_calibrate(const CalibrateArgs& args, std::ostream& out, std::ostream& err)
{
  const CaptureSession session = load(args.session, err);
  if (args.body_a >= session.body_count() || args.body_b >= session.body_count())
    throw Error(ErrorKind::InvalidSpec, "body index out of range");
  const PairCalibration cal =
    calibrate_pair(session.body(args.body_a), session.body(args.body_b), args.known_distance);
  out << "frames " << cal.distances.size() << '\n';
  out << "mean " << num(cal.mean) << '\n';
  out << "std " << num(cal.std_dev) << '\n';
  out << "scale " << num(cal.scale) << '\n';
  out << "scaled_mean_m " << num(cal.scaled_mean_m) << '\n';
  out << "scaled_std_m " << num(cal.scaled_std_m) << '\n';
  return kOk;
}

} // namespace

int exit_code_for(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::Parse:
    case ErrorKind::MissingCell:
    case ErrorKind::DuplicateCell:
    case ErrorKind::SingularRotation:
    case ErrorKind::InvalidSpec:
      return kParse;
    case ErrorKind::DegenerateInput:
    case ErrorKind::AllZero:
    case ErrorKind::IncompleteMatrix:
    case ErrorKind::NotAdjacent:
    case ErrorKind::MissingRotation:
    case ErrorKind::LengthMismatch:
    case ErrorKind::ModelMismatch:
      return kDegenerate;
    case ErrorKind::Io:
      return kIo;
  }
  return kDegenerate;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Recover joints, limb lengths and body hierarchy from per-body world transforms"};
  app.name(args.empty() ? "skelfit" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve-joint", "Fit the joint between one child/parent pair");
  add_session_options(*solve_cmd, solve.session);
  solve_cmd->add_option("--child", solve.child, "Outboard body index")->required();
  solve_cmd->add_option("--parent", solve.parent, "Inboard body index")->required();
  solve_cmd->add_option("--rank-tol", solve.rank_tol, "Relative singular-value cutoff")
    ->check(CLI::Range(0.0, 1.0));
  solve_cmd->add_option("--output", solve.output, "JSON report path (stdout when omitted)");
  solve_cmd->add_option("--residuals", solve.residuals, "Per-frame residual CSV path");

  ResidualArgs residuals;
  auto* residual_cmd = app.add_subcommand("residuals", "Residual histogram for one joint");
  add_session_options(*residual_cmd, residuals.session);
  residual_cmd->add_option("--child", residuals.child, "Outboard body index")->required();
  residual_cmd->add_option("--parent", residuals.parent, "Inboard body index")->required();
  residual_cmd->add_option("--rank-tol", residuals.rank_tol, "Relative singular-value cutoff")
    ->check(CLI::Range(0.0, 1.0));
  residual_cmd->add_option("--bin-width", residuals.bin_width, "Histogram bin width, meters")
    ->check(CLI::PositiveNumber);
  residual_cmd->add_option("--output", residuals.output, "Histogram CSV path (stdout when omitted)");
  residual_cmd->add_option("--timeline", residuals.timeline, "Per-frame residual CSV path");

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build-skeleton", "Infer or read the hierarchy and fit every joint");
  add_session_options(*build_cmd, build.session);
  auto* hierarchy_opt = build_cmd->add_option("--hierarchy", build.hierarchy, "body,parent CSV");
  auto* infer_flag = build_cmd->add_flag("--infer", build.infer, "Infer the hierarchy (default)");
  hierarchy_opt->excludes(infer_flag);
  build_cmd->add_option("--root", build.root, "Root body index");
  build_cmd->add_option("--rank-tol", build.rank_tol, "Relative singular-value cutoff")
    ->check(CLI::Range(0.0, 1.0));
  build_cmd->add_option("--loop-factor", build.loop_factor, "Warn on unused pairs below this x worst tree edge")
    ->check(CLI::PositiveNumber);
  build_cmd->add_option("--threads", build.threads, "Worker threads for the all-pairs sweep (0 = auto)");
  build_cmd->add_option("--labels", build.session.labels, "body,label CSV");
  build_cmd->add_option("--output", build.output, "Skeleton JSON path (stdout when omitted)");
  build_cmd->add_option("--fit-matrix", build.fit_matrix, "Pairwise fit-error CSV path");

  ReconstructArgs recon;
  auto* recon_cmd = app.add_subcommand("reconstruct", "Replay the session through a fitted skeleton");
  add_session_options(*recon_cmd, recon.session);
  recon_cmd->add_option("skeleton", recon.skeleton, "Skeleton JSON")->required();
  recon_cmd->add_option("--output", recon.output, "Reconstructed transform-stream CSV")->required();
  recon_cmd->add_flag("--orthonormalize", recon.orthonormalize, "Project joint rotations onto SO(3)");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic session with ground truth");
  auto* spec_opt = synth_cmd->add_option("spec", synth.spec, "Synthetic figure JSON");
  auto* preset_opt = synth_cmd->add_option("--preset", synth.preset_name, "Bundled figure name");
  spec_opt->excludes(preset_opt);
  synth_cmd->add_option("--seed", synth.seed, "Random seed (overrides the spec)");
  synth_cmd->add_option("--frames", synth.frames, "Frame count (overrides the spec)");
  synth_cmd->add_option("--sigma-t", synth.sigma_t, "Translation noise, meters")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--sigma-r", synth.sigma_r, "Rotation noise, radians")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--output", synth.output, "Output directory");
  synth_cmd->add_option("--write-spec", synth.write_spec, "Write the effective spec JSON here");

  CalibrateArgs calibrate;
  auto* calibrate_cmd = app.add_subcommand("calibrate-pair", "Distance statistics of two rigidly joined sensors");
  add_session_options(*calibrate_cmd, calibrate.session);
  calibrate_cmd->add_option("--body-a", calibrate.body_a, "First body index");
  calibrate_cmd->add_option("--body-b", calibrate.body_b, "Second body index");
  calibrate_cmd->add_option("--known-distance", calibrate.known_distance, "True separation, meters")
    ->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty())
    reversed.pop_back();
  try
  {
    app.parse(std::move(reversed));
  }
  catch (const CLI::CallForHelp& e)
  {
    return app.exit(e, out, err);
  }
  catch (const CLI::CallForAllHelp& e)
  {
    return app.exit(e, out, err);
  }
  catch (const CLI::ParseError& e)
  {
    app.exit(e, out, err);
    return kParse;
  }

  try
  {
    if (*solve_cmd)
      return cmd_solve(solve, out, err);
    if (*residual_cmd)
      return cmd_residuals(residuals, out, err);
    if (*build_cmd)
      return cmd_build(build, out, err);
    if (*recon_cmd)
      return cmd_reconstruct(recon, out, err);
    if (*synth_cmd)
    {
      if (synth.spec.empty() && synth.preset_name.empty())
      {
        err << "error: synth needs a spec file or --preset (" ;
        for (const auto& name : preset_names())
          err << ' ' << name;
        err << " )\n";
        return kParse;
      }
      return cmd_synth(synth, out, err);
    }
    if (*calibrate_cmd)
      return cmd_calibrate(calibrate, out, err);
  }
  catch (const Error& e)
  {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kParse;
}

} // namespace skelfit::cli
