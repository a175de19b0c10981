#ifndef SUBSEG_H
#define SUBSEG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SubsegStatus {
  SUBSEG_STATUS_OK = 0,
  SUBSEG_STATUS_NULL_POINTER = 1,
  SUBSEG_STATUS_INVALID_UTF8 = 2,
  SUBSEG_STATUS_IO = 3,
  SUBSEG_STATUS_INVALID_INPUT = 4,
  SUBSEG_STATUS_PANIC = 5,
} SubsegStatus;

/**
 * Opaque handle to a learned or loaded BPE model.
 */
typedef struct SubsegBpeModel SubsegBpeModel;

/**
 * Opaque handle to an orthographic script description.
 */
typedef struct SubsegScript SubsegScript;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *subseg_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void subseg_string_free(char *s);

/**
 * Learns a BPE model with at most `num_merges` merges from a corpus.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum SubsegStatus subseg_bpe_learn(const char *text,
                                   size_t num_merges,
                                   struct SubsegBpeModel **out);

/**
 * # Safety
 * `path` must be a nul-terminated string; `out` must be writable.
 */
enum SubsegStatus subseg_bpe_load(const char *path, struct SubsegBpeModel **out);

/**
 * # Safety
 * `model` must be a live handle; `path` a nul-terminated string.
 */
enum SubsegStatus subseg_bpe_save(const struct SubsegBpeModel *model, const char *path);

/**
 * Number of merges in the model; 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t subseg_bpe_num_merges(const struct SubsegBpeModel *model);

/**
 * Segments each line of `text`, writing space-separated units with `_`
 * between words.
 *
 * # Safety
 * `model` must be a live handle; `text` a nul-terminated string; `out`
 * writable.
 */
enum SubsegStatus subseg_bpe_segment(const struct SubsegBpeModel *model,
                                     const char *text,
                                     char **out);

/**
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void subseg_bpe_free(struct SubsegBpeModel *model);

/**
 * Looks up a built-in script by name (e.g. "latin", "hindi").
 *
 * # Safety
 * `name` must be a nul-terminated string; `out` writable.
 */
enum SubsegStatus subseg_script_builtin(const char *name, struct SubsegScript **out);

/**
 * Splits each line of `text` into orthographic syllables, in the same
 * format as [`subseg_bpe_segment`].
 *
 * # Safety
 * `script` must be a live handle; `text` a nul-terminated string; `out`
 * writable.
 */
enum SubsegStatus subseg_script_segment(const struct SubsegScript *script,
                                        const char *text,
                                        char **out);

/**
 * # Safety
 * `script` must be null or a handle not yet freed.
 */
void subseg_script_free(struct SubsegScript *script);

/**
 * Restores words from segmented lines.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` writable.
 */
enum SubsegStatus subseg_desegment(const char *text, char **out);

/**
 * Transliterates between two Indic scripts named like "devanagari".
 * `unmappable` (may be null) receives the number of characters kept as-is.
 *
 * # Safety
 * String arguments must be nul-terminated; `out` writable; `unmappable`
 * null or writable.
 */
enum SubsegStatus subseg_transliterate(const char *text,
                                       const char *from,
                                       const char *to,
                                       char **out,
                                       size_t *unmappable);

/**
 * Longest common subsequence ratio of two strings.
 *
 * # Safety
 * `a` and `b` must be nul-terminated; `out` writable.
 */
enum SubsegStatus subseg_lcsr(const char *a, const char *b, double *out);

/**
 * Corpus BLEU in [0, 1] over aligned lines. With `soft` set, n-grams match
 * when their character similarity reaches `threshold`.
 *
 * # Safety
 * `hyps` and `refs` must be nul-terminated; `out` writable.
 */
enum SubsegStatus subseg_bleu(const char *hyps,
                              const char *refs,
                              bool soft,
                              double threshold,
                              double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBSEG_H */
