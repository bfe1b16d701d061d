#pragma once

#include "cloudplan/money.hpp"

#include <cstdint>

namespace cloudplan {

/// Byte/time unit constants used by the human-unit price schema.
namespace units {
inline constexpr long double kTB = 1e12L;
inline constexpr long double kGB = 1e9L;
inline constexpr long double kMiB = 1048576.0L;
inline constexpr long double kHour = 3600.0L;
inline constexpr long double kOpsBatch = 10000.0L;
}  // namespace units

/// Every per-unit price needed to plan across one (source, destination)
/// backend pair. Fields are in base units: dollars per byte, per second or
/// per operation.
struct PriceBook {
    long double p_blob = 0;          ///< $ per byte-month held in blob storage
    long double p_read = 0;          ///< $ per blob read operation
    long double p_write = 0;         ///< $ per blob write operation
    long double p_sec = 0;           ///< $ per compute-second, pay-per-compute backend
    long double p_byte = 0;          ///< $ per byte scanned, pay-per-byte backend
    long double egress = 0;          ///< $ per byte leaving the source cloud
    long double ops_chunk_bytes = 8 * units::kMiB;  ///< bytes covered by one read/write op
    long double storage_months = 1.0L / 30.0L;      ///< how long migrated data sits in blob storage

    /// BigQuery-source / Redshift-destination prices (GCP egress, ra3.xlplus).
    static PriceBook defaults();

    /// Throws InputError when a price is negative or the op chunk is not positive.
    void validate() const;
};

/// Cost split of an inter-query plan. `total` is always the exact sum of the
/// three parts.
struct CostBreakdown {
    Money migration;
    Money moved_queries;
    Money remaining_queries;
    Money total;

    static CostBreakdown of(Money migration, Money moved, Money remaining) {
        return {migration, moved, remaining, migration + moved + remaining};
    }
    friend bool operator==(const CostBreakdown&, const CostBreakdown&) = default;
};

/// Whole read+write operations needed to move `bytes` through blob storage.
std::uint64_t blob_operation_count(long double bytes, const PriceBook& prices);

/// One-time cost to move `bytes` from the source to the destination backend:
/// egress, blob read/write operations (whole ops) and temporary blob storage.
Money migration_cost(long double bytes, const PriceBook& prices);

/// Money saved by running a query in the destination instead of the source.
/// Positive means migrating saves money.
constexpr Money query_savings(Money cost_dest, Money cost_src) { return cost_src - cost_dest; }

/// Scan size at which a query of `runtime_s` seconds costs the same under
/// pay-per-byte and pay-per-compute pricing. Throws InputError if p_byte is 0.
long double break_even_scan_bytes(long double runtime_s, const PriceBook& prices);

Money per_byte_query_cost(long double bytes_scanned, const PriceBook& prices);
Money per_compute_query_cost(long double runtime_s, const PriceBook& prices);

/// Seconds needed to ship `bytes` at `bytes_per_second`.
long double transfer_seconds(long double bytes, long double bytes_per_second);

}  // namespace cloudplan
