#include "tq/column.hpp"

#include <unordered_map>
#include <utility>

namespace tq {

const char* elem_kind_name(ElemKind kind) {
  switch (kind) {
    case ElemKind::kInt32:
      return "int32";
    case ElemKind::kFloat32:
      return "float32";
  }
  throw ContractError("unknown element kind");
}

ElemKind elem_kind_from_name(const std::string& name) {
  if (name == "int32") return ElemKind::kInt32;
  if (name == "float32") return ElemKind::kFloat32;
  throw ConfigError("unknown element kind name: " + name);
}

Column Column::int32(std::string name, std::vector<i32> values) {
  Column c;
  c.name = std::move(name);
  c.kind = ElemKind::kInt32;
  c.ints = std::move(values);
  return c;
}

Column Column::float32(std::string name, std::vector<float> values) {
  Column c;
  c.name = std::move(name);
  c.kind = ElemKind::kFloat32;
  c.floats = std::move(values);
  return c;
}

i32 Dictionary::code_of(const std::string& value) const {
  for (i32 code = 0; code < size(); ++code)
    if (entries[std::size_t(code)] == value) return code;
  throw ContractError("dictionary " + name + ": no entry '" + value + "'");
}

EncodedColumn dict_encode(std::string name,
                          std::span<const std::string> values) {
  EncodedColumn out;
  out.dict.name = name;
  std::unordered_map<std::string, i32> seen;
  std::vector<i32> codes;
  codes.reserve(values.size());
  for (const std::string& v : values) {
    auto [it, inserted] = seen.emplace(v, i32(out.dict.entries.size()));
    if (inserted) out.dict.entries.push_back(v);
    codes.push_back(it->second);
  }
  out.codes = Column::int32(std::move(name), std::move(codes));
  return out;
}

std::vector<std::string> dict_decode(const Dictionary& dict,
                                     std::span<const i32> codes) {
  std::vector<std::string> out;
  out.reserve(codes.size());
  for (i32 code : codes) out.push_back(dict.decode(code));
  return out;
}

}  // namespace tq
