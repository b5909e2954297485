// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0
// trajlift: command-line front end over the C API.
//
// Exit codes: 0 success, 2 usage or validation, 3 I/O or parse, 4 numeric.

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "svg_plot.hpp"
#include "trajlift/trajlift.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace trajlift_cli;

namespace {

// ---- corpus helpers -------------------------------------------------------

std::vector<PoseSeq> load_corpus(const fs::path& dir) {
  std::vector<PoseSeq> out;
  for (const auto& path : files_with_extension(dir, ".p3d"))
    out.push_back(load_poseseq(path));
  if (out.empty()) usage_error("corpus " + dir.string() + " has no .p3d files");
  const int frames = trajlift_poseseq_frames(out.front().get());
  for (const auto& s : out) {
    if (trajlift_poseseq_dims(s.get()) != 3)
      usage_error("corpus sequences must be three-dimensional");
    if (trajlift_poseseq_frames(s.get()) != frames)
      usage_error("corpus mixes sequence lengths " + std::to_string(frames) +
                  " and " + std::to_string(trajlift_poseseq_frames(s.get())));
  }
  return out;
}

std::vector<std::int64_t> starts_for(int length, int frames, int step) {
  std::size_t count = 0;
  check(trajlift_window_starts(length, frames, step, nullptr, 0, &count));
  std::vector<std::int64_t> starts(count);
  check(trajlift_window_starts(length, frames, step, starts.data(), count, &count));
  return starts;
}

// ---- bases ----------------------------------------------------------------

struct BasesArgs {
  std::string family = "dct";
  int frames = 0;
  int num_bases = 0;
  std::string corpus;
  std::string out;
  std::size_t max_columns = 10000;
  std::uint64_t seed = 0;
};

int cmd_bases(const BasesArgs& a) {
  if (a.family == "svd" && a.corpus.empty())
    usage_error("--family svd requires --corpus");
  if (!a.corpus.empty()) require_dir(a.corpus, "corpus");
  std::vector<PoseSeq> corpus;
  if (!a.corpus.empty()) {
    corpus = load_corpus(a.corpus);
    if (trajlift_poseseq_frames(corpus.front().get()) != a.frames)
      usage_error("corpus sequences have " +
                  std::to_string(trajlift_poseseq_frames(corpus.front().get())) +
                  " frames, --frames is " + std::to_string(a.frames));
  }
  trajlift_basis* raw = nullptr;
  if (a.family == "dct") {
    check(trajlift_basis_dct(a.frames, a.num_bases, &raw));
  } else {
    const auto v = views(corpus);
    check(trajlift_basis_svd(v.data(), v.size(), a.num_bases, a.max_columns,
                             a.seed, &raw));
  }
  Basis basis(raw);
  check(trajlift_basis_save(basis.get(), a.out.c_str()));
  std::cout << "family=" << (a.family == "dct" ? "DCT" : "SVD")
            << " F=" << a.frames << " K=" << a.num_bases << '\n';
  std::cout << "orthogonality_residual="
            << fmt(trajlift_basis_orthogonality_residual(basis.get())) << '\n';
  if (!corpus.empty()) {
    std::vector<double> errors(static_cast<std::size_t>(a.num_bases));
    const auto v = views(corpus);
    check(trajlift_truncation_profile(basis.get(), v.data(), v.size(),
                                      a.num_bases, errors.data()));
    std::cout << "reconstruction_error=" << fmt(errors.back()) << '\n';
  }
  return kExitOk;
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeArgs {
  std::string corpus;
  std::string basis;
  int max_k = 0;
  std::string out_dir;
};

int cmd_analyze(const AnalyzeArgs& a) {
  require_dir(a.corpus, "corpus");
  require_file(a.basis, "basis");
  trajlift_basis* raw = nullptr;
  check(trajlift_basis_load(a.basis.c_str(), &raw));
  Basis basis(raw);
  const int count = trajlift_basis_count(basis.get());
  if (a.max_k < 1 || a.max_k > count)
    usage_error("--max-k must lie in [1, " + std::to_string(count) + "]");
  const auto corpus = load_corpus(a.corpus);
  const auto v = views(corpus);

  std::vector<double> coef(static_cast<std::size_t>(count));
  check(trajlift_coefficient_profile(basis.get(), v.data(), v.size(), coef.data()));
  std::vector<double> trunc(static_cast<std::size_t>(a.max_k));
  check(trajlift_truncation_profile(basis.get(), v.data(), v.size(), a.max_k,
                                    trunc.data()));

  std::ostringstream c, t;
  c << "k,mean_abs_coef\n";
  t << "K,truncation_error_mm\n";
  for (int k = 0; k < a.max_k; ++k) {
    c << k + 1 << ',' << fmt(coef[k]) << '\n';
    t << k + 1 << ',' << fmt(trunc[k]) << '\n';
  }
  ensure_dir(a.out_dir);
  write_text(fs::path(a.out_dir) / "coefficients.csv", c.str());
  write_text(fs::path(a.out_dir) / "truncation.csv", t.str());
  std::cout << "sequences=" << corpus.size() << " max_k=" << a.max_k << '\n';
  return kExitOk;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  std::string out;
  int count = 100;
  trajlift_synth_config motion{};
  double depth_mm = 4000.0;
  double focal = 1000.0;
  double width = 1000.0;
  double height = 1000.0;
};

int cmd_synth(SynthArgs a) {
  if (a.count < 1) usage_error("--count must be positive");
  ensure_dir(a.out);
  trajlift_skeleton* sraw = nullptr;
  if (a.motion.joints == 17)
    check(trajlift_skeleton_h36m17(&sraw));
  else
    check(trajlift_skeleton_generic(a.motion.joints, &sraw));
  Skeleton skel(sraw);
  const trajlift_camera camera{TRAJLIFT_CAMERA_PINHOLE, a.focal, a.width / 2,
                               a.height / 2};
  const std::uint64_t base_seed = a.motion.seed;
  for (int i = 0; i < a.count; ++i) {
    a.motion.seed = base_seed + static_cast<std::uint64_t>(i);
    trajlift_poseseq *t = nullptr, *in = nullptr;
    check(trajlift_synth_lifting_pair(&a.motion, &camera, a.depth_mm, a.width,
                                      a.height,
                                      trajlift_skeleton_root(skel.get()), &t, &in));
    PoseSeq target(t), input(in);
    char stem[32];
    std::snprintf(stem, sizeof stem, "seq_%05d", i);
    save_poseseq(target.get(), fs::path(a.out) / (std::string(stem) + ".p3d"));
    save_poseseq(input.get(), fs::path(a.out) / (std::string(stem) + ".p2d"));
  }
  check(trajlift_skeleton_save(skel.get(),
                               (fs::path(a.out) / "skeleton.skel").c_str()));
  std::cout << "sequences=" << a.count << " F=" << a.motion.frames
            << " J=" << a.motion.joints << '\n';
  return kExitOk;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::string data;
  int frames = 0;
  int num_bases = 0;
  std::string family = "dct";
  std::string basis;
  std::string config;
  std::string skeleton;
  std::string out;
  std::string log;
  bool verbose = false;
};

void on_epoch(int epoch, double lr, double loss, void* user) {
  auto* a = static_cast<const TrainArgs*>(user);
  if (a->verbose)
    std::cerr << "epoch " << epoch << " lr " << fmt(lr) << " loss " << fmt(loss)
              << '\n';
}

int cmd_train(const TrainArgs& a) {
  require_dir(a.data, "data");
  if (!a.config.empty()) require_file(a.config, "config");
  if (!a.basis.empty()) require_file(a.basis, "basis");
  if (!a.skeleton.empty()) require_file(a.skeleton, "skeleton");

  trajlift_config* craw = nullptr;
  if (a.config.empty())
    check(trajlift_config_create(&craw));
  else
    check(trajlift_config_load(a.config.c_str(), &craw));
  Config cfg(craw);
  if (const char* env = std::getenv("TRAJLIFT_SEED"); env && *env)
    check(trajlift_config_set(cfg.get(), "seed", env));

  // Pair every .p2d with the .p3d of the same stem and cut both into
  // F-frame windows.
  std::vector<PoseSeq> inputs, targets;
  int joints = -1;
  for (const auto& p2 : files_with_extension(a.data, ".p2d")) {
    fs::path p3 = p2;
    p3.replace_extension(".p3d");
    if (!fs::is_regular_file(p3))
      usage_error("no 3D target for " + p2.filename().string());
    PoseSeq in = load_poseseq(p2), gt = load_poseseq(p3);
    const int len = trajlift_poseseq_frames(in.get());
    if (trajlift_poseseq_dims(in.get()) != 2 || trajlift_poseseq_dims(gt.get()) != 3)
      usage_error(p2.stem().string() + ": expected a 2D input and a 3D target");
    if (trajlift_poseseq_frames(gt.get()) != len ||
        trajlift_poseseq_joints(gt.get()) != trajlift_poseseq_joints(in.get()))
      usage_error(p2.stem().string() + ": input and target shapes disagree");
    if (joints < 0) joints = trajlift_poseseq_joints(in.get());
    if (trajlift_poseseq_joints(in.get()) != joints)
      usage_error("training sequences have different joint counts");
    if (len < a.frames)
      usage_error(p2.stem().string() + " has " + std::to_string(len) +
                  " frames, fewer than --frames " + std::to_string(a.frames));
    for (std::int64_t s : starts_for(len, a.frames, a.frames)) {
      inputs.push_back(slice_frames(in.get(), static_cast<int>(s), a.frames));
      targets.push_back(slice_frames(gt.get(), static_cast<int>(s), a.frames));
    }
  }
  if (inputs.empty()) usage_error("no training pairs (.p2d/.p3d) in " + a.data);
  Skeleton skel = resolve_skeleton(a.skeleton, a.data, joints);

  trajlift_basis* braw = nullptr;
  if (!a.basis.empty()) {
    check(trajlift_basis_load(a.basis.c_str(), &braw));
  } else if (a.family == "dct") {
    check(trajlift_basis_dct(a.frames, a.num_bases, &braw));
  } else {
    const auto v = views(targets);
    check(trajlift_basis_svd(v.data(), v.size(), a.num_bases, 10000, 0, &braw));
  }
  Basis basis(braw);
  if (trajlift_basis_frames(basis.get()) != a.frames ||
      trajlift_basis_count(basis.get()) != a.num_bases)
    usage_error("basis file does not match --frames/--num-bases");

  const auto vin = views(inputs), vgt = views(targets);
  trajlift_model* mraw = nullptr;
  check(trajlift_model_train(cfg.get(), basis.get(), skel.get(), vin.data(),
                             vgt.data(), vin.size(), on_epoch,
                             const_cast<TrainArgs*>(&a), &mraw));
  Model model(mraw);
  check(trajlift_model_save(model.get(), a.out.c_str()));

  std::ostringstream log;
  log << "epoch,lr,loss\n";
  const std::size_t epochs = trajlift_model_epoch_count(model.get());
  double last = 0;
  for (std::size_t i = 0; i < epochs; ++i) {
    int epoch = 0;
    double lr = 0, loss = 0;
    check(trajlift_model_epoch(model.get(), i, &epoch, &lr, &loss));
    log << epoch << ',' << fmt(lr) << ',' << fmt(loss) << '\n';
    last = loss;
  }
  write_text(a.log.empty() ? a.out + ".loss.csv" : a.log, log.str());
  std::cout << "windows=" << inputs.size() << " epochs=" << epochs
            << " final_loss=" << fmt(last) << '\n';
  return kExitOk;
}

// ---- infer ----------------------------------------------------------------

struct InferArgs {
  std::string model;
  std::string video;
  int step = 5;
  bool no_flip = false;
  std::string out;
};

int cmd_infer(const InferArgs& a) {
  require_file(a.model, "model");
  require_file(a.video, "video");
  trajlift_model* mraw = nullptr;
  check(trajlift_model_load(a.model.c_str(), &mraw));
  Model model(mraw);
  PoseSeq video = load_poseseq(a.video);
  if (trajlift_poseseq_dims(video.get()) != 2)
    usage_error("--video must be a 2D pose sequence");
  const int frames = trajlift_model_frames(model.get());
  if (trajlift_poseseq_frames(video.get()) < frames)
    usage_error("video has " + std::to_string(trajlift_poseseq_frames(video.get())) +
                " frames, the model needs at least " + std::to_string(frames));
  trajlift_poseseq* out = nullptr;
  check(trajlift_model_sliding_infer(model.get(), video.get(), a.step,
                                     a.no_flip ? 0 : 1, &out));
  PoseSeq result(out);
  save_poseseq(result.get(), a.out);
  std::cout << "frames=" << trajlift_poseseq_frames(result.get())
            << " windows="
            << starts_for(trajlift_poseseq_frames(video.get()), frames, a.step).size()
            << '\n';
  return kExitOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string pred;
  std::string gt;
  std::string skeleton;
  std::string per_frame;
  std::string report;
};

int cmd_eval(const EvalArgs& a) {
  require_file(a.pred, "prediction");
  require_file(a.gt, "ground-truth");
  PoseSeq pred = load_poseseq(a.pred), gt = load_poseseq(a.gt);
  if (trajlift_poseseq_dims(pred.get()) != 3 || trajlift_poseseq_dims(gt.get()) != 3)
    usage_error("eval needs two 3D pose sequences");
  if (trajlift_poseseq_frames(pred.get()) != trajlift_poseseq_frames(gt.get()) ||
      trajlift_poseseq_joints(pred.get()) != trajlift_poseseq_joints(gt.get()))
    usage_error("prediction and ground truth shapes differ");
  Skeleton skel = resolve_skeleton(a.skeleton, {}, trajlift_poseseq_joints(gt.get()));

  const int frames = trajlift_poseseq_frames(gt.get());
  std::vector<double> per_frame(static_cast<std::size_t>(frames));
  trajlift_eval_report r{};
  check(trajlift_evaluate(pred.get(), gt.get(), skel.get(), &r, per_frame.data()));

  std::ostringstream rep;
  rep << "mpjpe_p1=" << fmt(r.mpjpe_p1) << '\n'
      << "mpjpe_p2=" << fmt(r.mpjpe_p2) << '\n'
      << "pck150=" << fmt(r.pck150) << '\n'
      << "auc=" << fmt(r.auc) << '\n'
      << "frames=" << frames << '\n';
  std::ostringstream csv;
  csv << "frame,error_mm\n";
  for (int f = 0; f < frames; ++f) csv << f << ',' << fmt(per_frame[f]) << '\n';
  write_text(a.per_frame.empty() ? a.pred + ".per_frame.csv" : a.per_frame,
             csv.str());
  if (!a.report.empty()) write_text(a.report, rep.str());
  std::cout << rep.str();
  return kExitOk;
}

// ---- plot -----------------------------------------------------------------

struct PlotArgs {
  std::string csv;
  std::string out;
  PlotOptions options;
};

int cmd_plot(const PlotArgs& a) {
  require_file(a.csv, "CSV");
  std::ifstream is(a.csv, std::ios::binary);
  if (!is) throw Failure(kExitIo, "cannot open " + a.csv);
  const CsvTable table = read_csv(is, a.csv);
  write_text(a.out, render_svg(table, a.options));
  std::cout << "series=" << table.header.size() - 1
            << " points=" << table.rows.size() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lift 2D pose sequences to 3D with trajectory-basis regression",
               "trajlift"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(trajlift_version()));
  const std::map<std::string, std::string> families{{"dct", "dct"}, {"svd", "svd"}};

  BasesArgs bases;
  auto* b = app.add_subcommand("bases", "Build a DCT or SVD trajectory basis");
  b->add_option("--family", bases.family, "dct or svd")
      ->transform(CLI::CheckedTransformer(families, CLI::ignore_case));
  b->add_option("--frames", bases.frames, "Frames per window (F)")->required();
  b->add_option("--num-bases", bases.num_bases, "Basis vectors (K)")->required();
  b->add_option("--corpus", bases.corpus, "Directory of .p3d sequences");
  b->add_option("--max-columns", bases.max_columns,
                "SVD: subsample at most this many trajectories (0: all)");
  b->add_option("--seed", bases.seed, "SVD: subsampling seed");
  b->add_option("--out", bases.out, "Output TRAJBASIS file")->required();

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand(
      "analyze", "Coefficient spectrum and truncation error of a corpus");
  an->add_option("--corpus", analyze.corpus, "Directory of .p3d sequences")
      ->required();
  an->add_option("--basis", analyze.basis, "TRAJBASIS file")->required();
  an->add_option("--max-k", analyze.max_k, "Rows per CSV")->required();
  an->add_option("--out-dir", analyze.out_dir,
                 "Directory for coefficients.csv and truncation.csv")
      ->required();

  SynthArgs synth;
  trajlift_synth_config_default(&synth.motion);
  auto* sy = app.add_subcommand(
      "synth", "Generate band-limited synthetic 2D/3D training pairs");
  sy->add_option("--out", synth.out, "Output directory")->required();
  sy->add_option("--count", synth.count, "Number of sequences");
  sy->add_option("--frames", synth.motion.frames, "Frames per sequence");
  sy->add_option("--joints", synth.motion.joints, "Joints per pose");
  sy->add_option("--band-limit", synth.motion.band_limit,
                 "DCT bases used by the motion");
  sy->add_option("--amplitude", synth.motion.amplitude_mm, "Coefficient scale (mm)");
  sy->add_option("--noise", synth.motion.noise_sigma_mm, "3D noise sigma (mm)");
  sy->add_option("--seed", synth.motion.seed, "Seed of the first sequence");
  sy->add_option("--shape-rank", synth.motion.shape_rank,
                 "Rank of the shared joint-correlation model (0: independent)");
  sy->add_option("--shape-seed", synth.motion.shape_seed, "Seed of the shape model");
  sy->add_option("--depth", synth.depth_mm, "Subject distance from the camera (mm)");
  sy->add_option("--focal", synth.focal, "Pinhole focal length (px)");
  sy->add_option("--width", synth.width, "Image width (px)");
  sy->add_option("--height", synth.height, "Image height (px)");

  TrainArgs train;
  auto* tr = app.add_subcommand("train", "Train a lifting network");
  tr->add_option("--data", train.data, "Directory of .p2d/.p3d pairs")->required();
  tr->add_option("--frames", train.frames, "Frames per window (F)")->required();
  tr->add_option("--num-bases", train.num_bases, "Basis vectors (K)")->required();
  tr->add_option("--family", train.family, "Basis family when --basis is absent")
      ->transform(CLI::CheckedTransformer(families, CLI::ignore_case));
  tr->add_option("--basis", train.basis, "Precomputed TRAJBASIS file");
  tr->add_option("--config", train.config, "key=value network/training settings");
  tr->add_option("--skeleton", train.skeleton, "SKEL file");
  tr->add_option("--out", train.out, "Output TRAJNET checkpoint")->required();
  tr->add_option("--log", train.log, "Loss log CSV (default: <out>.loss.csv)");
  tr->add_flag("--verbose", train.verbose, "Print per-epoch progress to stderr");

  InferArgs infer;
  auto* in = app.add_subcommand("infer", "Lift a 2D video with sliding windows");
  in->add_option("--model", infer.model, "TRAJNET checkpoint")->required();
  in->add_option("--video", infer.video, "2D POSESEQ video")->required();
  in->add_option("--step", infer.step, "Window stride")->capture_default_str();
  in->add_flag("--no-flip", infer.no_flip, "Disable flip averaging");
  in->add_option("--out", infer.out, "Output 3D POSESEQ")->required();

  EvalArgs eval;
  auto* ev = app.add_subcommand("eval", "Score a 3D prediction");
  ev->add_option("--pred", eval.pred, "Predicted 3D POSESEQ")->required();
  ev->add_option("--gt", eval.gt, "Ground-truth 3D POSESEQ")->required();
  ev->add_option("--skeleton", eval.skeleton, "SKEL file");
  ev->add_option("--per-frame", eval.per_frame,
                 "Per-frame error CSV (default: <pred>.per_frame.csv)");
  ev->add_option("--report", eval.report, "Also write the report here");

  PlotArgs plot;
  auto* pl = app.add_subcommand("plot", "Render a CSV as an SVG line chart");
  pl->add_option("--csv", plot.csv, "Input CSV, first column is x")->required();
  pl->add_option("--out", plot.out, "Output SVG")->required();
  pl->add_option("--title", plot.options.title, "Chart title");
  pl->add_flag("--log-y", plot.options.log_y, "Logarithmic y axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*b) return cmd_bases(bases);
    if (*an) return cmd_analyze(analyze);
    if (*sy) return cmd_synth(synth);
    if (*tr) return cmd_train(train);
    if (*in) return cmd_infer(infer);
    if (*ev) return cmd_eval(eval);
    if (*pl) return cmd_plot(plot);
  } catch (const Failure& f) {
    std::cerr << "trajlift: " << f.what() << '\n';
    return f.code();
  } catch (const std::exception& e) {
    std::cerr << "trajlift: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
