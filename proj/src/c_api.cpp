// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

#include "trajlift/trajlift.h"

#include "text_format.hpp"
#include "trajlift/bases.hpp"
#include "trajlift/checkpoint.hpp"
#include "trajlift/data_io.hpp"
#include "trajlift/error.hpp"
#include "trajlift/inference.hpp"
#include "trajlift/metrics.hpp"
#include "trajlift/network.hpp"

#include <cstring>
#include <new>
#include <string>
#include <vector>

using namespace trajlift;

struct trajlift_poseseq {
  PoseSequence seq;
  std::vector<double> flat;  // row-major copy of seq.rows

  explicit trajlift_poseseq(PoseSequence s) : seq(std::move(s)) {
    flat.resize(static_cast<std::size_t>(seq.rows.size()));
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>(flat.data(), seq.rows.rows(),
                                               seq.rows.cols()) = seq.rows;
  }
};

struct trajlift_skeleton {
  SkeletonConfig skeleton;
};

struct trajlift_basis {
  TrajectoryBasis basis;
};

struct trajlift_config {
  std::map<std::string, std::string> values;
};

struct trajlift_model {
  Model model;
  std::vector<EpochLog> log;
};

namespace {

thread_local std::string g_last_error;

trajlift_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimension: return TRAJLIFT_ERR_DIMENSION;
    case ErrorKind::kParameter: return TRAJLIFT_ERR_INVALID_ARGUMENT;
    case ErrorKind::kParse: return TRAJLIFT_ERR_PARSE;
    case ErrorKind::kIo: return TRAJLIFT_ERR_IO;
    case ErrorKind::kNumeric: return TRAJLIFT_ERR_NUMERIC;
  }
  return TRAJLIFT_ERR_INTERNAL;
}

template <class Fn>
trajlift_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return TRAJLIFT_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TRAJLIFT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TRAJLIFT_ERR_INTERNAL;
  }
}

template <class T>
const T& deref(const T* p, const char* what) {
  if (p == nullptr) throw ParameterError(std::string("null ") + what);
  return *p;
}

const char* cstr(const char* s, const char* what) {
  if (s == nullptr) throw ParameterError(std::string("null ") + what);
  return s;
}

template <class T>
void check_out(T** out) {
  if (out == nullptr) throw ParameterError("null output pointer");
}

std::vector<MotionMatrix> corpus_of(const trajlift_poseseq* const* corpus,
                                    size_t n) {
  if (corpus == nullptr && n > 0) throw ParameterError("null corpus");
  std::vector<MotionMatrix> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& s = deref(corpus[i], "corpus sequence").seq;
    if (s.dims != 3) throw DimensionError("corpus sequences must be 3D");
    out.emplace_back(s.rows);
  }
  return out;
}

SynthConfig synth_of(const trajlift_synth_config& c) {
  SynthConfig s;
  s.frames = c.frames;
  s.joints = c.joints;
  s.band_limit = c.band_limit;
  s.amplitude_mm = c.amplitude_mm;
  s.noise_sigma_mm = c.noise_sigma_mm;
  s.seed = c.seed;
  s.shape_rank = c.shape_rank;
  s.shape_seed = c.shape_seed;
  return s;
}

CameraModel camera_of(const trajlift_camera& c) {
  if (c.kind != TRAJLIFT_CAMERA_ORTHOGRAPHIC && c.kind != TRAJLIFT_CAMERA_PINHOLE)
    throw ParameterError("unknown camera kind");
  return CameraModel{c.kind == TRAJLIFT_CAMERA_PINHOLE
                         ? CameraModel::Kind::kPinhole
                         : CameraModel::Kind::kOrthographic,
                     c.focal, c.cx, c.cy};
}

}  // namespace

extern "C" {

const char* trajlift_last_error(void) { return g_last_error.c_str(); }

const char* trajlift_status_name(trajlift_status status) {
  switch (status) {
    case TRAJLIFT_OK: return "ok";
    case TRAJLIFT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TRAJLIFT_ERR_DIMENSION: return "dimension mismatch";
    case TRAJLIFT_ERR_IO: return "i/o error";
    case TRAJLIFT_ERR_PARSE: return "parse error";
    case TRAJLIFT_ERR_NUMERIC: return "numeric error";
    case TRAJLIFT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* trajlift_version(void) { return "1.0.0"; }

size_t trajlift_format_double(double v, char* buf, size_t cap) {
  const std::string s = text::format_double(v);
  if (buf == nullptr || cap < s.size() + 1) return 0;
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return s.size();
}

trajlift_status trajlift_poseseq_create(int frames, int joints, int dims,
                                        const double* data,
                                        trajlift_poseseq** out) {
  return guarded([&] {
    check_out(out);
    if (frames < 1 || joints < 1) throw ParameterError("frames and joints must be >= 1");
    if (dims != 2 && dims != 3) throw ParameterError("dims must be 2 or 3");
    if (data == nullptr) throw ParameterError("null data");
    PoseSequence seq{dims, Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                          Eigen::Dynamic,
                                                          Eigen::RowMajor>>(
                               data, frames, joints * dims)};
    if (!seq.rows.allFinite()) throw NumericError("pose data has non-finite values");
    *out = new trajlift_poseseq(std::move(seq));
  });
}

trajlift_status trajlift_poseseq_load(const char* path, trajlift_poseseq** out) {
  return guarded([&] {
    check_out(out);
    *out = new trajlift_poseseq(load_pose_sequence(cstr(path, "path")));
  });
}

trajlift_status trajlift_poseseq_save(const trajlift_poseseq* seq,
                                      const char* path) {
  return guarded([&] {
    save_pose_sequence(deref(seq, "sequence").seq, cstr(path, "path"));
  });
}

int trajlift_poseseq_frames(const trajlift_poseseq* seq) {
  return seq ? static_cast<int>(seq->seq.frames()) : 0;
}
int trajlift_poseseq_joints(const trajlift_poseseq* seq) {
  return seq ? static_cast<int>(seq->seq.joints()) : 0;
}
int trajlift_poseseq_dims(const trajlift_poseseq* seq) {
  return seq ? seq->seq.dims : 0;
}
const double* trajlift_poseseq_data(const trajlift_poseseq* seq) {
  return seq ? seq->flat.data() : nullptr;
}
void trajlift_poseseq_free(trajlift_poseseq* seq) { delete seq; }

trajlift_status trajlift_skeleton_h36m17(trajlift_skeleton** out) {
  return guarded([&] {
    check_out(out);
    *out = new trajlift_skeleton{SkeletonConfig::h36m17()};
  });
}

trajlift_status trajlift_skeleton_generic(int joints, trajlift_skeleton** out) {
  return guarded([&] {
    check_out(out);
    *out = new trajlift_skeleton{SkeletonConfig::generic(joints)};
  });
}

trajlift_status trajlift_skeleton_load(const char* path,
                                       trajlift_skeleton** out) {
  return guarded([&] {
    check_out(out);
    *out = new trajlift_skeleton{load_skeleton(cstr(path, "path"))};
  });
}

trajlift_status trajlift_skeleton_save(const trajlift_skeleton* skeleton,
                                       const char* path) {
  return guarded([&] {
    save_skeleton(deref(skeleton, "skeleton").skeleton, cstr(path, "path"));
  });
}

int trajlift_skeleton_joints(const trajlift_skeleton* skeleton) {
  return skeleton ? skeleton->skeleton.joint_count() : 0;
}
int trajlift_skeleton_root(const trajlift_skeleton* skeleton) {
  return skeleton ? skeleton->skeleton.root_index() : -1;
}
void trajlift_skeleton_free(trajlift_skeleton* skeleton) { delete skeleton; }

trajlift_status trajlift_flip(const trajlift_poseseq* seq,
                              const trajlift_skeleton* skeleton,
                              trajlift_poseseq** out) {
  return guarded([&] {
    check_out(out);
    const auto& s = deref(seq, "sequence").seq;
    *out = new trajlift_poseseq(PoseSequence{
        s.dims, flip_rows(s.rows, s.dims, deref(skeleton, "skeleton").skeleton)});
  });
}

trajlift_status trajlift_basis_dct(int frames, int count, trajlift_basis** out) {
  return guarded([&] {
    check_out(out);
    *out = new trajlift_basis{dct_basis(frames, count)};
  });
}

trajlift_status trajlift_basis_svd(const trajlift_poseseq* const* corpus,
                                   size_t n, int count, size_t max_columns,
                                   uint64_t seed, trajlift_basis** out) {
  return guarded([&] {
    check_out(out);
    const auto motions = corpus_of(corpus, n);
    SvdOptions options;
    options.max_columns = static_cast<Eigen::Index>(max_columns);
    options.seed = seed;
    *out = new trajlift_basis{svd_basis(motions, count, options)};
  });
}

trajlift_status trajlift_basis_load(const char* path, trajlift_basis** out) {
  return guarded([&] {
    check_out(out);
    *out = new trajlift_basis{load_basis(cstr(path, "path"))};
  });
}

trajlift_status trajlift_basis_save(const trajlift_basis* basis,
                                    const char* path) {
  return guarded([&] {
    save_basis(deref(basis, "basis").basis, cstr(path, "path"));
  });
}

int trajlift_basis_frames(const trajlift_basis* basis) {
  return basis ? static_cast<int>(basis->basis.frames()) : 0;
}
int trajlift_basis_count(const trajlift_basis* basis) {
  return basis ? static_cast<int>(basis->basis.count()) : 0;
}
trajlift_basis_family trajlift_basis_get_family(const trajlift_basis* basis) {
  return basis && basis->basis.family() == BasisFamily::kSvd ? TRAJLIFT_BASIS_SVD
                                                             : TRAJLIFT_BASIS_DCT;
}

trajlift_status trajlift_basis_theta(const trajlift_basis* basis, double* out) {
  return guarded([&] {
    const auto& b = deref(basis, "basis").basis;
    if (out == nullptr) throw ParameterError("null output buffer");
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>(out, b.frames(), b.count()) =
        b.theta();
  });
}

double trajlift_basis_orthogonality_residual(const trajlift_basis* basis) {
  return basis ? orthogonality_residual(basis->basis) : -1.0;
}

void trajlift_basis_free(trajlift_basis* basis) { delete basis; }

trajlift_status trajlift_basis_reconstruct(const trajlift_basis* basis,
                                           const trajlift_poseseq* seq,
                                           trajlift_poseseq** out) {
  return guarded([&] {
    check_out(out);
    const auto& b = deref(basis, "basis").basis;
    const auto& s = deref(seq, "sequence").seq;
    if (s.dims != 3) throw DimensionError("reconstruction needs a 3D sequence");
    const MotionMatrix m(s.rows);
    *out = new trajlift_poseseq(
        PoseSequence{3, reconstruct_motion(b, project_motion(m, b)).data()});
  });
}

trajlift_status trajlift_truncation_profile(const trajlift_basis* basis,
                                            const trajlift_poseseq* const* corpus,
                                            size_t n, int max_k,
                                            double* errors) {
  return guarded([&] {
    const auto& b = deref(basis, "basis").basis;
    if (errors == nullptr) throw ParameterError("null output buffer");
    if (max_k < 1 || max_k > b.count())
      throw ParameterError("max_k must be in [1, basis count]");
    const auto motions = corpus_of(corpus, n);
    std::vector<Eigen::Index> ks;
    for (int k = 1; k <= max_k; ++k) ks.push_back(k);
    const auto profile = truncation_error_profile(motions, b, ks);
    for (std::size_t i = 0; i < profile.size(); ++i)
      errors[i] = profile[i].mean_error_mm;
  });
}

trajlift_status trajlift_coefficient_profile(const trajlift_basis* basis,
                                             const trajlift_poseseq* const* corpus,
                                             size_t n, double* mean_abs) {
  return guarded([&] {
    const auto& b = deref(basis, "basis").basis;
    if (mean_abs == nullptr) throw ParameterError("null output buffer");
    const auto motions = corpus_of(corpus, n);
    const auto profile = coefficient_magnitude_profile(motions, b);
    for (std::size_t i = 0; i < profile.size(); ++i)
      mean_abs[i] = profile[i].mean_abs;
  });
}

void trajlift_synth_config_default(trajlift_synth_config* cfg) {
  if (cfg == nullptr) return;
  const SynthConfig d;
  cfg->frames = static_cast<int>(d.frames);
  cfg->joints = static_cast<int>(d.joints);
  cfg->band_limit = static_cast<int>(d.band_limit);
  cfg->amplitude_mm = d.amplitude_mm;
  cfg->noise_sigma_mm = d.noise_sigma_mm;
  cfg->seed = d.seed;
  cfg->shape_rank = static_cast<int>(d.shape_rank);
  cfg->shape_seed = d.shape_seed;
}

trajlift_status trajlift_synth_motion(const trajlift_synth_config* cfg,
                                      trajlift_poseseq** out) {
  return guarded([&] {
    check_out(out);
    *out = new trajlift_poseseq(
        PoseSequence{3, synth_motion(synth_of(deref(cfg, "config"))).data()});
  });
}

trajlift_status trajlift_project_camera(const trajlift_poseseq* seq3d,
                                        const trajlift_camera* camera,
                                        trajlift_poseseq** out) {
  return guarded([&] {
    check_out(out);
    const auto& s = deref(seq3d, "sequence").seq;
    if (s.dims != 3) throw DimensionError("projection needs a 3D sequence");
    *out = new trajlift_poseseq(
        PoseSequence{2, project_camera(s.rows, camera_of(deref(camera, "camera")))});
  });
}

trajlift_status trajlift_normalize_2d(const trajlift_poseseq* seq2d,
                                      double width, double height,
                                      trajlift_poseseq** out) {
  return guarded([&] {
    check_out(out);
    const auto& s = deref(seq2d, "sequence").seq;
    if (s.dims != 2) throw DimensionError("normalization needs a 2D sequence");
    *out = new trajlift_poseseq(PoseSequence{2, normalize_2d(s.rows, width, height)});
  });
}

trajlift_status trajlift_synth_lifting_pair(const trajlift_synth_config* cfg,
                                            const trajlift_camera* camera,
                                            double depth_mm, double image_width,
                                            double image_height, int root_index,
                                            trajlift_poseseq** target3d,
                                            trajlift_poseseq** input2d) {
  return guarded([&] {
    check_out(target3d);
    check_out(input2d);
    LiftingScenario scenario;
    scenario.motion = synth_of(deref(cfg, "config"));
    scenario.count = 1;
    scenario.root_index = root_index;
    scenario.camera = camera_of(deref(camera, "camera"));
    scenario.subject_depth_mm = depth_mm;
    scenario.image_width = image_width;
    scenario.image_height = image_height;
    auto corpus = make_lifting_corpus(scenario);
    auto t = std::make_unique<trajlift_poseseq>(
        PoseSequence{3, std::move(corpus[0].target3d)});
    auto i = std::make_unique<trajlift_poseseq>(
        PoseSequence{2, std::move(corpus[0].input2d)});
    *target3d = t.release();
    *input2d = i.release();
  });
}

trajlift_status trajlift_config_create(trajlift_config** out) {
  return guarded([&] {
    check_out(out);
    *out = new trajlift_config{};
  });
}

trajlift_status trajlift_config_load(const char* path, trajlift_config** out) {
  return guarded([&] {
    check_out(out);
    auto values = load_key_values(cstr(path, "path"));
    NetworkConfig n;
    TrainConfig t;
    apply_config(values, n, t);  // reject unknown keys early
    *out = new trajlift_config{std::move(values)};
  });
}

trajlift_status trajlift_config_set(trajlift_config* cfg, const char* key,
                                    const char* value) {
  return guarded([&] {
    if (cfg == nullptr) throw ParameterError("null config");
    const std::string k = cstr(key, "key");
    const std::string v = cstr(value, "value");
    NetworkConfig n;
    TrainConfig t;
    apply_config({{k, v}}, n, t);
    cfg->values[k] = v;
  });
}

void trajlift_config_free(trajlift_config* cfg) { delete cfg; }

trajlift_status trajlift_model_train(const trajlift_config* cfg,
                                     const trajlift_basis* basis,
                                     const trajlift_skeleton* skeleton,
                                     const trajlift_poseseq* const* inputs2d,
                                     const trajlift_poseseq* const* targets3d,
                                     size_t n, trajlift_epoch_callback on_epoch,
                                     void* user, trajlift_model** out) {
  return guarded([&] {
    check_out(out);
    const auto& b = deref(basis, "basis").basis;
    const auto& sk = deref(skeleton, "skeleton").skeleton;
    NetworkConfig net;
    TrainConfig tr;
    apply_config(deref(cfg, "config").values, net, tr);
    net.frames = b.frames();
    net.bases = b.count();
    net.joints = sk.joint_count();
    if ((inputs2d == nullptr || targets3d == nullptr) && n > 0)
      throw ParameterError("null training arrays");
    std::vector<LiftingSample> data;
    data.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      const auto& in = deref(inputs2d[i], "input sequence").seq;
      const auto& gt = deref(targets3d[i], "target sequence").seq;
      if (in.dims != 2 || gt.dims != 3)
        throw DimensionError("training pairs must be 2D input and 3D target");
      data.push_back({in.rows, root_align_rows(gt.rows, sk.root_index())});
    }
    EpochCallback cb;
    if (on_epoch != nullptr)
      cb = [on_epoch, user](const EpochLog& e) {
        on_epoch(e.epoch, e.lr, e.loss, user);
      };
    TrainResult result = train(init_network(net), b, data, sk, tr, cb);
    *out = new trajlift_model{Model{std::move(result.params), b, sk},
                              std::move(result.log)};
  });
}

trajlift_status trajlift_model_load(const char* path, trajlift_model** out) {
  return guarded([&] {
    check_out(out);
    *out = new trajlift_model{load_model(cstr(path, "path")), {}};
  });
}

trajlift_status trajlift_model_save(const trajlift_model* model,
                                    const char* path) {
  return guarded([&] {
    save_model(deref(model, "model").model, cstr(path, "path"));
  });
}

int trajlift_model_frames(const trajlift_model* model) {
  return model ? static_cast<int>(model->model.params.config.frames) : 0;
}
int trajlift_model_bases(const trajlift_model* model) {
  return model ? static_cast<int>(model->model.params.config.bases) : 0;
}
int trajlift_model_joints(const trajlift_model* model) {
  return model ? static_cast<int>(model->model.params.config.joints) : 0;
}
size_t trajlift_model_epoch_count(const trajlift_model* model) {
  return model ? model->log.size() : 0;
}

trajlift_status trajlift_model_epoch(const trajlift_model* model, size_t index,
                                     int* epoch, double* lr, double* loss) {
  return guarded([&] {
    const auto& log = deref(model, "model").log;
    if (index >= log.size()) throw ParameterError("epoch index out of range");
    if (epoch) *epoch = log[index].epoch;
    if (lr) *lr = log[index].lr;
    if (loss) *loss = log[index].loss;
  });
}

void trajlift_model_free(trajlift_model* model) { delete model; }

trajlift_status trajlift_model_forward(const trajlift_model* model,
                                       const trajlift_poseseq* input2d,
                                       trajlift_poseseq** out3d) {
  return guarded([&] {
    check_out(out3d);
    const auto& m = deref(model, "model").model;
    const auto& in = deref(input2d, "input").seq;
    if (in.dims != 2) throw DimensionError("model input must be 2D");
    auto res = forward(m.params, m.basis, in.rows);
    *out3d = new trajlift_poseseq(PoseSequence{3, std::move(res.poses[0])});
  });
}

trajlift_status trajlift_model_sliding_infer(const trajlift_model* model,
                                             const trajlift_poseseq* video2d,
                                             int step, int flip_average,
                                             trajlift_poseseq** out3d) {
  return guarded([&] {
    check_out(out3d);
    const auto& m = deref(model, "model").model;
    const auto& video = deref(video2d, "video").seq;
    if (video.dims != 2) throw DimensionError("video must be 2D");
    SlidingConfig sc{m.params.config.frames, step, flip_average != 0};
    *out3d = new trajlift_poseseq(PoseSequence{3, sliding_infer(m, video.rows, sc)});
  });
}

trajlift_status trajlift_window_starts(int64_t length, int64_t frames,
                                       int64_t step, int64_t* starts,
                                       size_t cap, size_t* count) {
  return guarded([&] {
    const auto s = window_starts(length, SlidingConfig{frames, step, false});
    if (count) *count = s.size();
    if (starts != nullptr)
      for (size_t i = 0; i < s.size() && i < cap; ++i) starts[i] = s[i];
  });
}

trajlift_status trajlift_evaluate(const trajlift_poseseq* pred,
                                  const trajlift_poseseq* gt,
                                  const trajlift_skeleton* skeleton,
                                  trajlift_eval_report* report,
                                  double* per_frame) {
  return guarded([&] {
    const auto& p = deref(pred, "prediction").seq;
    const auto& g = deref(gt, "ground truth").seq;
    if (report == nullptr) throw ParameterError("null report");
    if (p.dims != 3 || g.dims != 3)
      throw DimensionError("evaluation needs 3D sequences");
    const EvalReport r = evaluate(p.rows, g.rows, deref(skeleton, "skeleton").skeleton);
    report->mpjpe_p1 = r.mpjpe_p1;
    report->mpjpe_p2 = r.mpjpe_p2;
    report->pck150 = r.pck150;
    report->auc = r.auc;
    if (per_frame != nullptr)
      std::copy(r.per_frame_errors.begin(), r.per_frame_errors.end(), per_frame);
  });
}

}  // extern "C"
