#pragma once

/**
 * Column persistence. One file per column:
 *   bytes 0-3   magic "CRYS"
 *   bytes 4-5   format version, little-endian u16 (currently 1)
 *   byte  6     element kind (0 int32, 1 float32)
 *   byte  7     reserved, zero
 *   bytes 8-15  element count, little-endian u64
 *   then        raw little-endian 4-byte elements
 * A database directory holds the column files plus manifest.json mapping
 * tables to files, kinds, lengths, and dictionaries.
 */

#include <optional>
#include <string>

#include "tq/column.hpp"
#include "tq/ssb_gen.hpp"

namespace tq {

struct BadMagicError : IoError {
  using IoError::IoError;
};
struct TruncatedFileError : IoError {
  using IoError::IoError;
};
struct KindMismatchError : IoError {
  using IoError::IoError;
};

void save_column(const Column& column, const std::string& path);

// Loads a column; the column's name is taken from the file stem unless the
// caller overrides it. expect_kind turns a kind disagreement into an error
// instead of a surprise.
Column load_column(const std::string& path,
                   std::optional<ElemKind> expect_kind = std::nullopt);

void save_database(const SsbDatabase& db, const std::string& dir);
SsbDatabase load_database(const std::string& dir);

}  // namespace tq
