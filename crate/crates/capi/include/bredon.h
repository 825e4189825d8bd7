#ifndef BREDON_H
#define BREDON_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define BREDON_OK 0

#define BREDON_REPORT_FAILED 1

#define BREDON_BAD_INPUT 2

#define BREDON_BAD_POINTER 3

#define BREDON_PANIC 4

// Opaque handle around the raw document text.
typedef struct BredonDocument BredonDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parse a JSON document. On success stores a new handle in `out_doc`.
//
// # Safety
// `text` must be a NUL-terminated UTF-8 string; `out_doc` must be valid.
int32_t bredon_document_parse(const char *text, struct BredonDocument **out_doc);

// Release a handle returned by `bredon_document_parse`.
//
// # Safety
// `doc` must be a handle from `bredon_document_parse`, released once.
void bredon_document_free(struct BredonDocument *doc);

// Release a string returned through any `out_json` parameter.
//
// # Safety
// `s` must be a string produced by this library, released once.
void bredon_string_free(char *s);

// Well-definedness checks plus a seeded random probe. `ring` may be NULL to
// use the document's ring tag, or "Z", "Q", "Fp:<p>".
//
// # Safety
// `doc` must be a live handle; `ring` NULL or NUL-terminated UTF-8;
// `out_json` NULL or valid.
int32_t bredon_validate(const struct BredonDocument *doc,
                        const char *ring,
                        uint64_t seed,
                        char **out_json);

// Cohomology in degrees `deg_lo..=deg_hi` (inclusive, like the CLI's
// `--degrees` flag).
//
// # Safety
// Same contracts as `bredon_validate`.
int32_t bredon_cohomology(const struct BredonDocument *doc,
                          const char *ring,
                          uintptr_t deg_lo,
                          uintptr_t deg_hi,
                          char **out_json);

// Compare the compatible-cochain pipeline with the invariant-cochain
// pipeline on the universal covers.
//
// # Safety
// Same contracts as `bredon_validate`.
int32_t bredon_eilenberg(const struct BredonDocument *doc, const char *ring, char **out_json);

// Spectral sequence of the document's fibration block, pages 2..=rmax.
// Requires field coefficients.
//
// # Safety
// Same contracts as `bredon_validate`.
int32_t bredon_serre(const struct BredonDocument *doc,
                     const char *ring,
                     uintptr_t rmax,
                     char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BREDON_H */
