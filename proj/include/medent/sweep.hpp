// sweep.hpp - tabular sweep results, CSV round-trip, grid specs and a
// deterministic parallel map

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

namespace medent::sweep {

enum class ColumnType { Real, Integer, Boolean, Text };

struct Column {
    std::string name;
    ColumnType type = ColumnType::Real;

    bool operator==(const Column&) const = default;
};

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Rows are in lexicographic grid order (first axis slowest).
struct SweepResult {
    std::vector<Column> schema;
    std::vector<std::vector<Cell>> rows;

    std::size_t column_index(std::string_view name) const;
    double real(std::size_t row, std::string_view column) const;
    std::int64_t integer(std::size_t row, std::string_view column) const;
    bool boolean(std::size_t row, std::string_view column) const;
    const std::string& text(std::size_t row, std::string_view column) const;

    /// Throws PreconditionError if the row does not fit the schema.
    void append(std::vector<Cell> row);
};

/// Reals use 17 significant digits, booleans 0/1. Text cells must not
/// contain commas, quotes or newlines.
void write_csv(std::ostream& out, const SweepResult& result);
std::string to_csv(const SweepResult& result);

/// Parses CSV emitted by write_csv; the header must match `schema` by name.
/// Throws PreconditionError on malformed input.
SweepResult read_csv(std::istream& in, const std::vector<Column>& schema);
SweepResult parse_csv(std::string_view text, const std::vector<Column>& schema);

/// Exact cell equality; NaN equals NaN.
bool same_cells(const SweepResult& a, const SweepResult& b);

/// "start:stop:count" (inclusive, evenly spaced) or a comma list "a,b,c".
/// count >= 1 and start <= stop; a list must be non-decreasing.
/// Throws PreconditionError otherwise.
std::vector<double> parse_grid(std::string_view spec);
std::vector<double> linspace(double start, double stop, std::size_t count);

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency) and returns the results in index order. The first
/// exception thrown by any task is rethrown after all workers finish.
template <class Fn>
auto parallel_map(std::size_t n, Fn&& fn, unsigned threads = 0) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<R> out(n);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace medent::sweep
