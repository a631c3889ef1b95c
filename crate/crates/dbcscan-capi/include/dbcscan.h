#ifndef DBCSCAN_H
#define DBCSCAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum DbcStatus {
  DBC_STATUS_OK = 0,
  DBC_STATUS_INVALID_ARGUMENT = 1,
  DBC_STATUS_IO_ERROR = 2,
  DBC_STATUS_CATALOG_ERROR = 3,
  // Some files were skipped or parsed partially; results are still valid.
  DBC_STATUS_PARTIAL = 4,
  DBC_STATUS_INTERNAL_ERROR = 5,
} DbcStatus;

// Construct categories, mirroring the catalog.
typedef enum DbcCategory {
  DBC_CATEGORY_CRE = 0,
  DBC_CATEGORY_API = 1,
  DBC_CATEGORY_ASSERTION = 2,
  DBC_CATEGORY_ANNOTATION = 3,
  DBC_CATEGORY_OTHER = 4,
} DbcCategory;

// Opaque catalog handle.
typedef struct DbcCatalog DbcCatalog;

// Opaque scan-result handle holding one snapshot report.
typedef struct DbcScanResult DbcScanResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *dbc_last_error(void);

// Load the shipped default catalog into `*out`.
//
// # Safety
// `out` must be a valid, writable pointer.
enum DbcStatus dbc_catalog_load_default(struct DbcCatalog **out);

// Load the default catalog extended with user TSV files.
//
// # Safety
// `paths` must point to `n` valid C strings; `out` must be writable.
enum DbcStatus dbc_catalog_load_extended(const char *const *paths,
                                         uintptr_t n,
                                         struct DbcCatalog **out);

// Number of constructs in a category.
//
// # Safety
// `catalog` must be a live handle from a `dbc_catalog_load_*` call.
uint64_t dbc_catalog_count(const struct DbcCatalog *catalog, enum DbcCategory category);

// Release a catalog handle.
//
// # Safety
// `catalog` must come from a `dbc_catalog_load_*` call; it is consumed.
void dbc_catalog_free(struct DbcCatalog *catalog);

// Scan one in-memory source buffer. `path_hint` selects the language by
// extension and becomes the record file path.
//
// # Safety
// `catalog` must be live; `path_hint` a C string; `bytes` readable for
// `len` bytes; `out` writable.
enum DbcStatus dbc_scan_source(const struct DbcCatalog *catalog,
                               const char *path_hint,
                               const uint8_t *bytes,
                               uintptr_t len,
                               struct DbcScanResult **out);

// Scan a directory tree of Java/Kotlin sources.
//
// # Safety
// `catalog` must be live; `root`, `project_id`, and `snapshot_id` must be
// C strings (ids may be null for defaults); `out` must be writable.
enum DbcStatus dbc_scan_dir(const struct DbcCatalog *catalog,
                            const char *root,
                            const char *project_id,
                            const char *snapshot_id,
                            struct DbcScanResult **out);

// Number of contract records in a result.
//
// # Safety
// `result` must be a live handle.
uint64_t dbc_result_record_count(const struct DbcScanResult *result);

// Whether the scan skipped or only partially parsed some files.
//
// # Safety
// `result` must be a live handle.
bool dbc_result_is_partial(const struct DbcScanResult *result);

// Serialize a result to the record-file JSON schema. The returned string is
// owned by the caller and released with `dbc_string_free`.
//
// # Safety
// `result` must be live; `out` must be writable.
enum DbcStatus dbc_result_to_json(const struct DbcScanResult *result, char **out);

// Release a string returned by this library.
//
// # Safety
// `s` must come from this library and is consumed.
void dbc_string_free(char *s);

// Release a scan result.
//
// # Safety
// `result` must come from a `dbc_scan_*` call; it is consumed.
void dbc_result_free(struct DbcScanResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DBCSCAN_H */
