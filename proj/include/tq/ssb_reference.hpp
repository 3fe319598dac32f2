#pragma once

/**
 * Row-at-a-time oracle for the 13 star-schema queries. No tiles, no hash
 * tables, no plan structures: dimension attributes are fetched positionally
 * (keys are 1-based row numbers, order dates via an index map) and groups
 * aggregate into an ordered map. Serves as the correctness baseline for the
 * pipelined executor.
 */

#include "tq/ssb_gen.hpp"
#include "tq/ssb_queries.hpp"

namespace tq {

QueryResult run_reference(const SsbDatabase& db, QueryId id);

}  // namespace tq
