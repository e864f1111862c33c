// Copyright 2026 The bitext-mine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the bitext mining library. Every call taking a session
 * records a message retrievable with bx_last_error() when it fails.
 * Strings returned through char** are heap copies released with
 * bx_string_free(). */

#ifndef BITEXT_BITEXT_H_
#define BITEXT_BITEXT_H_

#include <stddef.h>

#if defined(_WIN32)
#define BX_API __declspec(dllexport)
#else
#define BX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bx_status {
  BX_OK = 0,
  BX_ERR_INVALID_ARGUMENT = 1,
  BX_ERR_CONFIG = 2,
  BX_ERR_IO = 3,
  BX_ERR_INPUT = 4,
  BX_ERR_STAGE = 5,
  BX_ERR_NETWORK = 6,
  BX_ERR_EMPTY_DOCUMENT = 7,
  BX_ERR_ENGINE = 8,
  BX_ERR_INTERNAL = 9
} bx_status;

typedef struct bx_session bx_session;

typedef void (*bx_log_fn)(const char *line, void *user);

BX_API const char *bx_version(void);
BX_API const char *bx_status_name(bx_status status);

BX_API bx_status bx_session_create(bx_session **out);
BX_API void bx_session_destroy(bx_session *session);
/* Message of the last failed call on this session; "" if none. */
BX_API const char *bx_last_error(const bx_session *session);
BX_API void bx_set_log(bx_session *session, bx_log_fn fn, void *user);
/* 0 keeps the configured value. */
BX_API bx_status bx_set_jobs(bx_session *session, unsigned jobs);
/* Overrides paths.out_dir of the loaded config. */
BX_API bx_status bx_set_out_dir(bx_session *session, const char *dir);
/* Loads and validates a pipeline config; relative paths are taken from
 * the config file's directory. */
BX_API bx_status bx_load_config(bx_session *session, const char *path);

BX_API void bx_string_free(char *s);

/* ---- corpus acquisition ---------------------------------------------- */

typedef struct bx_crawl_options {
  const char *seed;         /* fixture://... or http(s):// URL */
  unsigned max_articles;    /* 0: config value */
  unsigned delay_ms;
  const char *source_lang;  /* NULL: config value */
  const char *target_lang;
  const char *fixtures_dir;
  const char *clean_rules;  /* NULL: config value or built-in rules */
  const char *out_dir;      /* receives one directory per document pair */
} bx_crawl_options;

BX_API bx_status bx_crawl(bx_session *session, const bx_crawl_options *options,
                          size_t *pairs_written);

/* Plain paragraph text of one HTML page. */
BX_API bx_status bx_clean_html(bx_session *session, const char *html, const char *lang,
                               const char *clean_rules, char **text_out);

/* ---- alignment ------------------------------------------------------- */

typedef struct bx_align_options {
  const char *source_file;  /* plain text (segmented here) */
  const char *target_file;
  int presegmented;         /* inputs already hold one sentence per line */
  const char *source_lang;
  const char *target_lang;
  const char *lexicon;      /* optional external dictionary */
  const char *out_dir;      /* sents.*, align.tsv, lexicon.tsv, src.* */
} bx_align_options;

BX_API bx_status bx_align_files(bx_session *session, const bx_align_options *options);

/* ---- translation ----------------------------------------------------- */

typedef struct bx_translate_options {
  const char *input;
  const char *output;
  const char *engine;       /* gloss, memory, external; NULL: config */
  const char *command;      /* external engine */
  const char *memory;       /* memory engine TSV */
  const char *lexicon;      /* gloss lexicon / memory fallback */
  const char *cache_dir;    /* NULL: no cache unless configured */
  const char *source_lang;
  const char *target_lang;
} bx_translate_options;

BX_API bx_status bx_translate_file(bx_session *session, const bx_translate_options *options);

/* ---- filtering ------------------------------------------------------- */

#define BX_WINDOW_AUTO 0
#define BX_WINDOW_UNBOUNDED (-1)

typedef struct bx_filter_options {
  const char *source_file;  /* src.<lang> */
  const char *trans_file;   /* src.trans */
  const char *target_file;  /* src.<lang> of the other side */
  const char *tiers_file;   /* NULL: config or built-in ladder */
  const char *stopwords;    /* target-language stopwords */
  const char *synonyms;
  int window;               /* BX_WINDOW_AUTO, BX_WINDOW_UNBOUNDED or a radius */
  const char *out_dir;      /* accepted.tsv, report.json */
} bx_filter_options;

BX_API bx_status bx_filter_files(bx_session *session, const bx_filter_options *options,
                                 size_t *accepted);

BX_API bx_status bx_ratio_similarity(const char *a, const char *b, double *out);

/* ---- metrics and word alignment -------------------------------------- */

BX_API bx_status bx_evaluate_files(bx_session *session, const char *candidate,
                                   const char *const *references, size_t n_references,
                                   int percent, char **report_json);

BX_API bx_status bx_symmetrize_files(bx_session *session, const char *forward,
                                     const char *backward, const char *output);

/* ---- pipeline -------------------------------------------------------- */

/* Needs a loaded config. report_json may be NULL. */
BX_API bx_status bx_run_pipeline(bx_session *session, char **report_json);
BX_API bx_status bx_run_bootstrap(bx_session *session, unsigned rounds, char **summary_json);

#ifdef __cplusplus
}
#endif

#endif /* BITEXT_BITEXT_H_ */
