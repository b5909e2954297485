/* Copyright 2026 The trajlift Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to trajlift. All objects are opaque handles created by a
 * trajlift_*_create/load/... call and released with the matching _free.
 * Functions return a trajlift_status; on failure trajlift_last_error() holds a
 * message for the calling thread. Output handles are only written on success.
 *
 * Pose sequences are F x (J * D) row-major arrays of doubles, D in {2, 3}:
 * row f is X1 Y1 Z1 ... XJ YJ ZJ (or u1 v1 ... uJ vJ).
 */

#ifndef TRAJLIFT_TRAJLIFT_H_
#define TRAJLIFT_TRAJLIFT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(TRAJLIFT_BUILDING_LIBRARY)
#define TRAJLIFT_API __attribute__((visibility("default")))
#else
#define TRAJLIFT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum trajlift_status {
  TRAJLIFT_OK = 0,
  TRAJLIFT_ERR_INVALID_ARGUMENT = 1, /* bad parameter or null handle */
  TRAJLIFT_ERR_DIMENSION = 2,        /* shapes do not agree */
  TRAJLIFT_ERR_IO = 3,               /* file missing or unwritable */
  TRAJLIFT_ERR_PARSE = 4,            /* malformed file content */
  TRAJLIFT_ERR_NUMERIC = 5,          /* non-finite values, failed decomposition */
  TRAJLIFT_ERR_INTERNAL = 6
} trajlift_status;

TRAJLIFT_API const char* trajlift_last_error(void);
TRAJLIFT_API const char* trajlift_status_name(trajlift_status status);
TRAJLIFT_API const char* trajlift_version(void);

/* Shortest decimal text that parses back to v. Returns the length written
 * (excluding the terminator) or 0 if cap is too small. */
TRAJLIFT_API size_t trajlift_format_double(double v, char* buf, size_t cap);

/* ---- pose sequences ---------------------------------------------------- */

typedef struct trajlift_poseseq trajlift_poseseq;

TRAJLIFT_API trajlift_status trajlift_poseseq_create(int frames, int joints,
                                                     int dims,
                                                     const double* data,
                                                     trajlift_poseseq** out);
TRAJLIFT_API trajlift_status trajlift_poseseq_load(const char* path,
                                                   trajlift_poseseq** out);
TRAJLIFT_API trajlift_status trajlift_poseseq_save(const trajlift_poseseq* seq,
                                                   const char* path);
TRAJLIFT_API int trajlift_poseseq_frames(const trajlift_poseseq* seq);
TRAJLIFT_API int trajlift_poseseq_joints(const trajlift_poseseq* seq);
TRAJLIFT_API int trajlift_poseseq_dims(const trajlift_poseseq* seq);
/* Row-major data, valid until the sequence is freed. */
TRAJLIFT_API const double* trajlift_poseseq_data(const trajlift_poseseq* seq);
TRAJLIFT_API void trajlift_poseseq_free(trajlift_poseseq* seq);

/* ---- skeletons --------------------------------------------------------- */

typedef struct trajlift_skeleton trajlift_skeleton;

TRAJLIFT_API trajlift_status trajlift_skeleton_h36m17(trajlift_skeleton** out);
TRAJLIFT_API trajlift_status trajlift_skeleton_generic(int joints,
                                                       trajlift_skeleton** out);
TRAJLIFT_API trajlift_status trajlift_skeleton_load(const char* path,
                                                    trajlift_skeleton** out);
TRAJLIFT_API trajlift_status trajlift_skeleton_save(
    const trajlift_skeleton* skeleton, const char* path);
TRAJLIFT_API int trajlift_skeleton_joints(const trajlift_skeleton* skeleton);
TRAJLIFT_API int trajlift_skeleton_root(const trajlift_skeleton* skeleton);
TRAJLIFT_API void trajlift_skeleton_free(trajlift_skeleton* skeleton);

/* Mirror a pose sequence: negate the first coordinate of each joint and swap
 * left/right joints. */
TRAJLIFT_API trajlift_status trajlift_flip(const trajlift_poseseq* seq,
                                           const trajlift_skeleton* skeleton,
                                           trajlift_poseseq** out);

/* ---- trajectory bases -------------------------------------------------- */

typedef struct trajlift_basis trajlift_basis;

typedef enum trajlift_basis_family {
  TRAJLIFT_BASIS_DCT = 0,
  TRAJLIFT_BASIS_SVD = 1
} trajlift_basis_family;

TRAJLIFT_API trajlift_status trajlift_basis_dct(int frames, int count,
                                                trajlift_basis** out);
/* corpus: n three-dimensional sequences of equal length. At most max_columns
 * trajectories are used (0: all), subsampled with seed. */
TRAJLIFT_API trajlift_status trajlift_basis_svd(
    const trajlift_poseseq* const* corpus, size_t n, int count,
    size_t max_columns, uint64_t seed, trajlift_basis** out);
TRAJLIFT_API trajlift_status trajlift_basis_load(const char* path,
                                                 trajlift_basis** out);
TRAJLIFT_API trajlift_status trajlift_basis_save(const trajlift_basis* basis,
                                                 const char* path);
TRAJLIFT_API int trajlift_basis_frames(const trajlift_basis* basis);
TRAJLIFT_API int trajlift_basis_count(const trajlift_basis* basis);
TRAJLIFT_API trajlift_basis_family trajlift_basis_get_family(
    const trajlift_basis* basis);
/* Copies Theta row-major into out (frames * count doubles). */
TRAJLIFT_API trajlift_status trajlift_basis_theta(const trajlift_basis* basis,
                                                  double* out);
TRAJLIFT_API double trajlift_basis_orthogonality_residual(
    const trajlift_basis* basis);
TRAJLIFT_API void trajlift_basis_free(trajlift_basis* basis);

/* Project a 3D sequence onto the basis and reconstruct it. */
TRAJLIFT_API trajlift_status trajlift_basis_reconstruct(
    const trajlift_basis* basis, const trajlift_poseseq* seq,
    trajlift_poseseq** out);

/* errors[i] = mean joint error after truncating to the first i + 1 vectors,
 * for i < max_k (max_k <= basis count). */
TRAJLIFT_API trajlift_status trajlift_truncation_profile(
    const trajlift_basis* basis, const trajlift_poseseq* const* corpus,
    size_t n, int max_k, double* errors);
/* mean_abs[k] = mean |A(k, .)| over all corpus trajectories, k < count. */
TRAJLIFT_API trajlift_status trajlift_coefficient_profile(
    const trajlift_basis* basis, const trajlift_poseseq* const* corpus,
    size_t n, double* mean_abs);

/* ---- synthetic data ---------------------------------------------------- */

typedef struct trajlift_synth_config {
  int frames;
  int joints;
  int band_limit;
  double amplitude_mm;
  double noise_sigma_mm;
  uint64_t seed;
  int shape_rank; /* 0: independent trajectories */
  uint64_t shape_seed;
} trajlift_synth_config;

typedef enum trajlift_camera_kind {
  TRAJLIFT_CAMERA_ORTHOGRAPHIC = 0,
  TRAJLIFT_CAMERA_PINHOLE = 1
} trajlift_camera_kind;

typedef struct trajlift_camera {
  trajlift_camera_kind kind;
  double focal;
  double cx;
  double cy;
} trajlift_camera;

TRAJLIFT_API void trajlift_synth_config_default(trajlift_synth_config* cfg);
TRAJLIFT_API trajlift_status trajlift_synth_motion(
    const trajlift_synth_config* cfg, trajlift_poseseq** out);
TRAJLIFT_API trajlift_status trajlift_project_camera(
    const trajlift_poseseq* seq3d, const trajlift_camera* camera,
    trajlift_poseseq** out);
TRAJLIFT_API trajlift_status trajlift_normalize_2d(const trajlift_poseseq* seq2d,
                                                   double width, double height,
                                                   trajlift_poseseq** out);
/* One lifting pair: root-aligned synthetic motion (target3d) and its
 * normalized projection with the subject placed depth_mm from the camera. */
TRAJLIFT_API trajlift_status trajlift_synth_lifting_pair(
    const trajlift_synth_config* cfg, const trajlift_camera* camera,
    double depth_mm, double image_width, double image_height, int root_index,
    trajlift_poseseq** target3d, trajlift_poseseq** input2d);

/* ---- configuration ----------------------------------------------------- */

/* key=value settings for the network and training loop. */
typedef struct trajlift_config trajlift_config;

TRAJLIFT_API trajlift_status trajlift_config_create(trajlift_config** out);
TRAJLIFT_API trajlift_status trajlift_config_load(const char* path,
                                                  trajlift_config** out);
TRAJLIFT_API trajlift_status trajlift_config_set(trajlift_config* cfg,
                                                 const char* key,
                                                 const char* value);
TRAJLIFT_API void trajlift_config_free(trajlift_config* cfg);

/* ---- models ------------------------------------------------------------ */

typedef struct trajlift_model trajlift_model;

typedef void (*trajlift_epoch_callback)(int epoch, double lr, double loss,
                                        void* user);

/* Trains a network on paired sequences. frames/bases/joints in cfg are taken
 * from the basis and skeleton. Targets are root-aligned before training. */
TRAJLIFT_API trajlift_status trajlift_model_train(
    const trajlift_config* cfg, const trajlift_basis* basis,
    const trajlift_skeleton* skeleton, const trajlift_poseseq* const* inputs2d,
    const trajlift_poseseq* const* targets3d, size_t n,
    trajlift_epoch_callback on_epoch, void* user, trajlift_model** out);
TRAJLIFT_API trajlift_status trajlift_model_load(const char* path,
                                                 trajlift_model** out);
TRAJLIFT_API trajlift_status trajlift_model_save(const trajlift_model* model,
                                                 const char* path);
TRAJLIFT_API int trajlift_model_frames(const trajlift_model* model);
TRAJLIFT_API int trajlift_model_bases(const trajlift_model* model);
TRAJLIFT_API int trajlift_model_joints(const trajlift_model* model);
/* Training log of a model produced by trajlift_model_train (empty after
 * load). */
TRAJLIFT_API size_t trajlift_model_epoch_count(const trajlift_model* model);
TRAJLIFT_API trajlift_status trajlift_model_epoch(const trajlift_model* model,
                                                  size_t index, int* epoch,
                                                  double* lr, double* loss);
TRAJLIFT_API void trajlift_model_free(trajlift_model* model);

/* Single window, F x 2J in, F x 3J out. */
TRAJLIFT_API trajlift_status trajlift_model_forward(
    const trajlift_model* model, const trajlift_poseseq* input2d,
    trajlift_poseseq** out3d);
/* L x 2J video, L >= F. */
TRAJLIFT_API trajlift_status trajlift_model_sliding_infer(
    const trajlift_model* model, const trajlift_poseseq* video2d, int step,
    int flip_average, trajlift_poseseq** out3d);

/* Writes up to cap window starts; *count receives the total number. */
TRAJLIFT_API trajlift_status trajlift_window_starts(int64_t length,
                                                   int64_t frames, int64_t step,
                                                   int64_t* starts, size_t cap,
                                                   size_t* count);

/* ---- metrics ----------------------------------------------------------- */

typedef struct trajlift_eval_report {
  double mpjpe_p1;
  double mpjpe_p2;
  double pck150;
  double auc;
} trajlift_eval_report;

/* per_frame may be null; otherwise it receives one protocol-1 error per
 * frame. */
TRAJLIFT_API trajlift_status trajlift_evaluate(const trajlift_poseseq* pred,
                                               const trajlift_poseseq* gt,
                                               const trajlift_skeleton* skeleton,
                                               trajlift_eval_report* report,
                                               double* per_frame);

#ifdef __cplusplus
}
#endif

#endif /* TRAJLIFT_TRAJLIFT_H_ */
