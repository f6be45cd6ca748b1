/*
 * Copyright 2026 The nstego Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the nstego library. All objects are opaque handles owned by
 * the caller and released with the matching *_free function. Every call that
 * can fail returns an nstego_status; on failure nstego_last_error() describes
 * the problem for the calling thread.
 */

#ifndef NSTEGO_H_
#define NSTEGO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NSTEGO_BUILDING_LIBRARY)
#    define NSTEGO_API __declspec(dllexport)
#  else
#    define NSTEGO_API __declspec(dllimport)
#  endif
#else
#  define NSTEGO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match the CLI exit codes. */
typedef enum nstego_status {
  NSTEGO_OK = 0,
  NSTEGO_ERR_ARGUMENT = 1,
  NSTEGO_ERR_CONFIG = 2,
  NSTEGO_ERR_CAPACITY = 3,
  NSTEGO_ERR_CONVERGENCE = 4,
  NSTEGO_ERR_IO = 5,
  NSTEGO_ERR_FORMAT = 6,
  NSTEGO_ERR_SHAPE = 7,
  NSTEGO_ERR_NUMERICAL = 8,
  NSTEGO_ERR_INTERNAL = 9
} nstego_status;

typedef struct nstego_config nstego_config;
typedef struct nstego_tensor nstego_tensor;
typedef struct nstego_buffer nstego_buffer;

typedef struct nstego_key {
  uint64_t matrix_seed;
  uint64_t magnitude_seed;
  uint64_t shuffle_seed;
  uint16_t block_size;
} nstego_key;

#define NSTEGO_KEY_RECORD_SIZE 32

NSTEGO_API const char* nstego_version(void);
NSTEGO_API const char* nstego_last_error(void);

/* Configuration */
NSTEGO_API nstego_status nstego_config_load(const char* path, nstego_config** out);
NSTEGO_API nstego_status nstego_config_parse(const char* json_text, nstego_config** out);
/* "key=value"; value is JSON or a bare string. Revalidates the config. */
NSTEGO_API nstego_status nstego_config_set(nstego_config* cfg, const char* assignment);
NSTEGO_API nstego_status nstego_config_fingerprint(const nstego_config* cfg, uint64_t* out);
NSTEGO_API nstego_status nstego_config_capacity_bits(const nstego_config* cfg, uint64_t* out);
NSTEGO_API nstego_status nstego_config_canonical(const nstego_config* cfg, nstego_buffer** out);
/* Resolved value of one config field as JSON text, e.g. "attacks". */
NSTEGO_API nstego_status nstego_config_get(const nstego_config* cfg, const char* key,
                                           nstego_buffer** out);
NSTEGO_API nstego_status nstego_config_get_key(const nstego_config* cfg, nstego_key* out);
NSTEGO_API nstego_status nstego_config_set_key(nstego_config* cfg, const nstego_key* key);
NSTEGO_API void nstego_config_free(nstego_config* cfg);

/* Keys: 32-byte "PRDK" records or their 64-character hex form. */
NSTEGO_API nstego_status nstego_key_encode(const nstego_key* key,
                                           uint8_t out[NSTEGO_KEY_RECORD_SIZE]);
NSTEGO_API nstego_status nstego_key_decode(const uint8_t* record, size_t size, nstego_key* out);
NSTEGO_API nstego_status nstego_key_to_hex(const nstego_key* key, char out[65]);
NSTEGO_API nstego_status nstego_key_from_hex(const char* hex, nstego_key* out);

/* Tensors in the "PRDS" container. */
NSTEGO_API nstego_status nstego_tensor_create(const uint32_t* dims, size_t rank,
                                              const double* values, nstego_tensor** out);
NSTEGO_API nstego_status nstego_tensor_read(const char* path, nstego_tensor** out);
NSTEGO_API nstego_status nstego_tensor_write(const nstego_tensor* t, const char* path);
NSTEGO_API size_t nstego_tensor_rank(const nstego_tensor* t);
NSTEGO_API uint32_t nstego_tensor_dim(const nstego_tensor* t, size_t axis);
NSTEGO_API size_t nstego_tensor_size(const nstego_tensor* t);
NSTEGO_API const double* nstego_tensor_data(const nstego_tensor* t);
NSTEGO_API void nstego_tensor_free(nstego_tensor* t);

/* Byte buffers returned by the library (messages, JSON, CSV). */
NSTEGO_API size_t nstego_buffer_size(const nstego_buffer* b);
NSTEGO_API const uint8_t* nstego_buffer_data(const nstego_buffer* b);
NSTEGO_API void nstego_buffer_free(nstego_buffer* b);

/* Sender: message bytes (MSB first) -> decoded signal. stego_noise may be NULL. */
NSTEGO_API nstego_status nstego_embed(const nstego_config* cfg, const uint8_t* message,
                                      size_t size, nstego_tensor** signal,
                                      nstego_tensor** stego_noise);
/* Receiver: signal -> all C*N*N payload bits packed into bytes. */
NSTEGO_API nstego_status nstego_extract(const nstego_config* cfg, const nstego_tensor* signal,
                                        nstego_buffer** message);
/* attack_json: {"kind": "...", ...}; see README. */
NSTEGO_API nstego_status nstego_attack(const nstego_tensor* signal, const char* attack_json,
                                       nstego_tensor** out);
NSTEGO_API nstego_status nstego_evaluate(const nstego_config* cfg, int threads,
                                         nstego_buffer** report_json);
/* As nstego_evaluate, plus optional CSV tables (any output may be NULL). */
NSTEGO_API nstego_status nstego_evaluate_tables(const nstego_config* cfg, int threads,
                                                nstego_buffer** report_json,
                                                nstego_buffer** ber_csv,
                                                nstego_buffer** residual_csv,
                                                nstego_buffer** loss_csv);
NSTEGO_API nstego_status nstego_convergence_study(const nstego_config* cfg, nstego_buffer** csv);

#ifdef __cplusplus
}
#endif

#endif /* NSTEGO_H_ */
