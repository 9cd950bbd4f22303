#ifndef OPENBOOK_H
#define OPENBOOK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Values 2–5 match the command-line exit codes.
 */
typedef enum ObStatus {
  OB_STATUS_OK = 0,
  OB_STATUS_FAILURE = 1,
  OB_STATUS_SYNTAX = 2,
  OB_STATUS_VALIDATION = 3,
  OB_STATUS_ILLEGAL_MOVE = 4,
  OB_STATUS_UNSUPPORTED = 5,
  OB_STATUS_NULL_POINTER = 6,
  OB_STATUS_INVALID_UTF8 = 7,
  OB_STATUS_PANIC = 8,
} ObStatus;

/**
 * Opaque open book handle.
 */
typedef struct ObBook ObBook;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `.obk` text into a new book.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ObStatus ob_book_from_obk(const char *text, struct ObBook **out);

/**
 * Parses a JSON book (`{"page": …, "monodromy": […]}`) or a bare JSON page.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ObStatus ob_book_from_json(const char *text, struct ObBook **out);

/**
 * Releases a book. Null is ignored.
 *
 * # Safety
 * `book` must come from this library and not be used afterwards.
 */
void ob_book_free(struct ObBook *book);

/**
 * Number of 2-handles (attaching circles) of the page, or 0 for a null handle.
 *
 * # Safety
 * `book` must be null or a live handle.
 */
uintptr_t ob_book_circle_count(const struct ObBook *book);

/**
 * Serializes the book as JSON.
 *
 * # Safety
 * `book` must be a live handle and `out` a valid pointer.
 */
enum ObStatus ob_book_to_json(const struct ObBook *book, char **out);

/**
 * Homology report `{"H0": …, …, "H5": …, "spin": …, "chern_class_note": …}`.
 *
 * # Safety
 * `book` must be a live handle and `out` a valid pointer.
 */
enum ObStatus ob_book_homology_json(const struct ObBook *book, char **out);

/**
 * Classification report `{"kind", "m", "d", "diffeo_name", "contact_name"}`.
 *
 * # Safety
 * `book` must be a live handle and `out` a valid pointer.
 */
enum ObStatus ob_book_classify_json(const struct ObBook *book, char **out);

/**
 * Applies a move script (text or JSON) and returns the resulting book as a new handle.
 *
 * # Safety
 * `book` must be a live handle, `script` NUL-terminated and `out` a valid pointer.
 */
enum ObStatus ob_book_apply_script(const struct ObBook *book,
                                   const char *script,
                                   struct ObBook **out);

/**
 * Double cover branched along the binding, as a new handle.
 *
 * # Safety
 * `book` must be a live handle and `out` a valid pointer.
 */
enum ObStatus ob_book_double_cover(const struct ObBook *book, struct ObBook **out);

/**
 * Connected sum of two books, as a new handle.
 *
 * # Safety
 * Both books must be live handles and `out` a valid pointer.
 */
enum ObStatus ob_book_connected_sum(const struct ObBook *left,
                                    const struct ObBook *right,
                                    struct ObBook **out);

/**
 * Copy of the last error message on this thread, or null. Free with `ob_string_free`.
 */
char *ob_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ob_string_free(char *s);

/**
 * Library version, a static string.
 */
const char *ob_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPENBOOK_H */
