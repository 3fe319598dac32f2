#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tq {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using i32 = std::int32_t;
using u32 = std::uint32_t;
using i64 = std::int64_t;
using u64 = std::uint64_t;

// Invalid arguments, malformed configs, out-of-domain parameters.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Broken caller-side contracts (mismatched bitmap sizes, store overflow, ...).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// Hash-table construction failures (duplicate key, capacity overflow).
struct BuildError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File format and filesystem failures.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define TQ_CHECK(cond, msg)                \
  do {                                     \
    if (!(cond)) throw tq::ContractError(msg); \
  } while (0)

#define TQ_CONFIG_CHECK(cond, msg)         \
  do {                                     \
    if (!(cond)) throw tq::ConfigError(msg); \
  } while (0)

}  // namespace tq
