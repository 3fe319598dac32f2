#pragma once

#include <span>
#include <string>
#include <vector>

#include "tq/common.hpp"

namespace tq {

enum class ElemKind : u8 { kInt32 = 0, kFloat32 = 1 };

const char* elem_kind_name(ElemKind kind);
ElemKind elem_kind_from_name(const std::string& name);

// A named array of 4-byte elements. One of the two backing vectors is active
// depending on kind; the other stays empty.
struct Column {
  std::string name;
  ElemKind kind = ElemKind::kInt32;
  std::vector<i32> ints;
  std::vector<float> floats;

  static Column int32(std::string name, std::vector<i32> values);
  static Column float32(std::string name, std::vector<float> values);

  i64 length() const {
    return kind == ElemKind::kInt32 ? i64(ints.size()) : i64(floats.size());
  }

  std::span<const i32> as_i32() const {
    TQ_CHECK(kind == ElemKind::kInt32, "column " + name + " is not int32");
    return ints;
  }
  std::span<const float> as_f32() const {
    TQ_CHECK(kind == ElemKind::kFloat32, "column " + name + " is not float32");
    return floats;
  }
};

// Dense string dictionary; the code of a string is its index.
struct Dictionary {
  std::string name;
  std::vector<std::string> entries;

  i32 size() const { return i32(entries.size()); }

  const std::string& decode(i32 code) const {
    TQ_CHECK(code >= 0 && code < size(),
             "dictionary " + name + ": code out of range");
    return entries[std::size_t(code)];
  }

  // Exact-match lookup; ContractError when absent (callers pass literals
  // known to the schema).
  i32 code_of(const std::string& value) const;
};

struct EncodedColumn {
  Column codes;
  Dictionary dict;
};

// Dictionary-encodes a string column. Codes are dense and assigned by first
// appearance order.
EncodedColumn dict_encode(std::string name,
                          std::span<const std::string> values);

std::vector<std::string> dict_decode(const Dictionary& dict,
                                     std::span<const i32> codes);

}  // namespace tq
