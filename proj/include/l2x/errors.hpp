#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace l2x {

// Thrown when an operation would iterate more terms than the configured
// budget allows. The constructions here are genuinely exponential-size,
// so this is an expected, recoverable condition (CLI exit code 2).
struct BudgetExceeded : std::runtime_error {
    std::int64_t required;
    std::int64_t limit;
    BudgetExceeded(std::int64_t req, std::int64_t lim)
        : std::runtime_error("budget exceeded: need " + std::to_string(req) +
                             " terms, limit " + std::to_string(lim)),
          required(req), limit(lim) {}
};

// A decoder could not round unambiguously: either the query was below the
// decodable threshold N0 or the oracle is dishonest (CLI exit code 4).
struct SeparationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed manifest, predicate file or table (CLI exit code 3).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation needs a closed-form reference the representation does not carry.
struct UnsupportedRep : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace budget {

// Process-wide cap on the number of summation terms a single operation may
// iterate. Default 2^24.
std::int64_t max_terms();
void set_max_terms(std::int64_t v);

// Throws BudgetExceeded unless `required <= max_terms()`.
void charge(std::int64_t required);

} // namespace budget

} // namespace l2x
