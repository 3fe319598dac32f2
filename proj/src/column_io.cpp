#include "tq/column_io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace tq {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kMagic[4] = {'C', 'R', 'Y', 'S'};
constexpr u16 kVersion = 1;
constexpr std::size_t kHeaderBytes = 16;

// Headers are serialized field by field; the in-memory layout never touches
// the disk format.
void put_u16(unsigned char* p, u16 v) {
  p[0] = (unsigned char)(v & 0xff);
  p[1] = (unsigned char)(v >> 8);
}

void put_u64(unsigned char* p, u64 v) {
  for (int i = 0; i < 8; ++i) p[i] = (unsigned char)(v >> (8 * i));
}

u16 get_u16(const unsigned char* p) { return u16(p[0] | (p[1] << 8)); }

u64 get_u64(const unsigned char* p) {
  u64 v = 0;
  for (int i = 0; i < 8; ++i) v |= u64(p[i]) << (8 * i);
  return v;
}

const void* column_payload(const Column& c) {
  return c.kind == ElemKind::kInt32 ? (const void*)c.ints.data()
                                    : (const void*)c.floats.data();
}

void* column_payload(Column& c) {
  return c.kind == ElemKind::kInt32 ? (void*)c.ints.data()
                                    : (void*)c.floats.data();
}

}  // namespace

void save_column(const Column& column, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);

  unsigned char header[kHeaderBytes] = {};
  std::memcpy(header, kMagic, 4);
  put_u16(header + 4, kVersion);
  header[6] = (unsigned char)column.kind;
  header[7] = 0;
  put_u64(header + 8, u64(column.length()));
  out.write((const char*)header, kHeaderBytes);
  out.write((const char*)column_payload(column), column.length() * 4);
  if (!out) throw IoError("write failed: " + path);
}

Column load_column(const std::string& path,
                   std::optional<ElemKind> expect_kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);

  unsigned char header[kHeaderBytes];
  in.read((char*)header, kHeaderBytes);
  if (in.gcount() != kHeaderBytes)
    throw TruncatedFileError("truncated header: " + path);
  if (std::memcmp(header, kMagic, 4) != 0)
    throw BadMagicError("bad magic: " + path);
  if (get_u16(header + 4) != kVersion)
    throw IoError("unsupported format version: " + path);
  unsigned char kind_byte = header[6];
  if (kind_byte > (unsigned char)ElemKind::kFloat32)
    throw KindMismatchError("unknown element kind byte: " + path);
  ElemKind kind = ElemKind(kind_byte);
  if (expect_kind && kind != *expect_kind)
    throw KindMismatchError("element kind mismatch: " + path + " holds " +
                            elem_kind_name(kind) + ", expected " +
                            elem_kind_name(*expect_kind));

  u64 length = get_u64(header + 8);
  Column c;
  c.name = fs::path(path).stem().string();
  c.kind = kind;
  if (kind == ElemKind::kInt32)
    c.ints.resize(length);
  else
    c.floats.resize(length);

  in.read((char*)column_payload(c), std::streamsize(length * 4));
  if (u64(in.gcount()) != length * 4)
    throw TruncatedFileError("truncated payload: " + path);
  return c;
}

// ------------------------------------------------------------- database

void save_database(const SsbDatabase& db, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir);

  json tables = json::object();
  for (const SsbTable* t :
       {&db.lineorder, &db.date, &db.supplier, &db.customer, &db.part}) {
    json cols = json::array();
    for (const Column& c : t->columns) {
      std::string file = t->name + "." + c.name + ".col";
      save_column(c, (fs::path(dir) / file).string());
      cols.push_back({{"name", c.name},
                      {"file", file},
                      {"kind", elem_kind_name(c.kind)},
                      {"length", c.length()}});
    }
    tables[t->name] = {{"rows", t->rows()}, {"columns", cols}};
  }

  json dicts = json::object();
  for (const Dictionary& d : db.dictionaries) dicts[d.name] = d.entries;

  json manifest;
  manifest["format"] = "crys-manifest";
  manifest["version"] = 1;
  manifest["scale_factor"] = db.scale_factor;
  manifest["seed"] = db.seed;
  manifest["tables"] = tables;
  manifest["dictionaries"] = dicts;

  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) throw IoError("cannot write manifest in " + dir);
  out << manifest.dump(2) << "\n";
  if (!out) throw IoError("manifest write failed in " + dir);
}

SsbDatabase load_database(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) throw IoError("cannot open manifest in " + dir);
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw IoError("manifest parse error in " + dir + ": " + e.what());
  }

  SsbDatabase db;
  try {
    if (manifest.at("format") != "crys-manifest")
      throw IoError("not a database manifest: " + dir);
    db.scale_factor = manifest.at("scale_factor").get<i64>();
    db.seed = manifest.at("seed").get<u64>();

    for (SsbTable* t :
         {&db.lineorder, &db.date, &db.supplier, &db.customer, &db.part}) {
      std::string name =
          t == &db.lineorder   ? "lineorder"
          : t == &db.date      ? "date"
          : t == &db.supplier  ? "supplier"
          : t == &db.customer  ? "customer"
                               : "part";
      t->name = name;
      const json& jt = manifest.at("tables").at(name);
      for (const json& jc : jt.at("columns")) {
        ElemKind kind = elem_kind_from_name(jc.at("kind").get<std::string>());
        Column c = load_column(
            (fs::path(dir) / jc.at("file").get<std::string>()).string(), kind);
        c.name = jc.at("name").get<std::string>();
        if (c.length() != jc.at("length").get<i64>())
          throw TruncatedFileError("column length disagrees with manifest: " +
                                   c.name);
        t->columns.push_back(std::move(c));
      }
    }

    for (const auto& [name, entries] : manifest.at("dictionaries").items()) {
      Dictionary d;
      d.name = name;
      d.entries = entries.get<std::vector<std::string>>();
      db.dictionaries.push_back(std::move(d));
    }
  } catch (const json::exception& e) {
    throw IoError("manifest field error in " + dir + ": " + e.what());
  }
  return db;
}

}  // namespace tq
