#include "medent/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <sstream>

#include "medent/errors.hpp"

namespace medent::sweep {

namespace {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view s) {
    s = trim(s);
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw PreconditionError("not a number: '" + std::string(s) + "'");
    return x;
}

std::int64_t parse_integer(std::string_view s) {
    s = trim(s);
    std::int64_t x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw PreconditionError("not an integer: '" + std::string(s) + "'");
    return x;
}

bool fits(const Cell& c, ColumnType t) {
    switch (t) {
    case ColumnType::Real: return std::holds_alternative<double>(c);
    case ColumnType::Integer: return std::holds_alternative<std::int64_t>(c);
    case ColumnType::Boolean: return std::holds_alternative<bool>(c);
    case ColumnType::Text: return std::holds_alternative<std::string>(c);
    }
    return false;
}

} // namespace

std::size_t SweepResult::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < schema.size(); ++i)
        if (schema[i].name == name) return i;
    throw PreconditionError("no column named '" + std::string(name) + "'");
}

double SweepResult::real(std::size_t row, std::string_view column) const {
    return std::get<double>(rows.at(row).at(column_index(column)));
}

std::int64_t SweepResult::integer(std::size_t row, std::string_view column) const {
    return std::get<std::int64_t>(rows.at(row).at(column_index(column)));
}

bool SweepResult::boolean(std::size_t row, std::string_view column) const {
    return std::get<bool>(rows.at(row).at(column_index(column)));
}

const std::string& SweepResult::text(std::size_t row, std::string_view column) const {
    return std::get<std::string>(rows.at(row).at(column_index(column)));
}

void SweepResult::append(std::vector<Cell> row) {
    if (row.size() != schema.size()) throw PreconditionError("SweepResult: row width does not match the schema");
    for (std::size_t i = 0; i < row.size(); ++i)
        if (!fits(row[i], schema[i].type))
            throw PreconditionError("SweepResult: cell type mismatch in column '" + schema[i].name + "'");
    rows.push_back(std::move(row));
}

void write_csv(std::ostream& out, const SweepResult& result) {
    for (std::size_t i = 0; i < result.schema.size(); ++i) out << (i ? "," : "") << result.schema[i].name;
    out << '\n';
    for (const auto& row : result.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) out << format_real(v);
                    else if constexpr (std::is_same_v<T, bool>) out << (v ? '1' : '0');
                    else if constexpr (std::is_same_v<T, std::int64_t>) out << v;
                    else {
                        if (v.find_first_of(",\"\n\r") != std::string::npos)
                            throw PreconditionError("write_csv: text cell contains a separator");
                        out << v;
                    }
                },
                row[i]);
        }
        out << '\n';
    }
}

std::string to_csv(const SweepResult& result) {
    std::ostringstream s;
    write_csv(s, result);
    return s.str();
}

SweepResult read_csv(std::istream& in, const std::vector<Column>& schema) {
    SweepResult result;
    result.schema = schema;
    std::string line;
    if (!std::getline(in, line)) throw PreconditionError("read_csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line, ',');
    if (header.size() != schema.size()) throw PreconditionError("read_csv: header width does not match the schema");
    for (std::size_t i = 0; i < header.size(); ++i)
        if (trim(header[i]) != schema[i].name)
            throw PreconditionError("read_csv: unexpected column '" + std::string(header[i]) + "'");

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != schema.size()) throw PreconditionError("read_csv: row width does not match the schema");
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            switch (schema[i].type) {
            case ColumnType::Real: row.emplace_back(parse_real(fields[i])); break;
            case ColumnType::Integer: row.emplace_back(parse_integer(fields[i])); break;
            case ColumnType::Boolean: {
                const auto f = trim(fields[i]);
                if (f != "0" && f != "1") throw PreconditionError("read_csv: boolean must be 0 or 1");
                row.emplace_back(f == "1");
                break;
            }
            case ColumnType::Text: row.emplace_back(std::string(fields[i])); break;
            }
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

SweepResult parse_csv(std::string_view text, const std::vector<Column>& schema) {
    std::istringstream in{std::string(text)};
    return read_csv(in, schema);
}

bool same_cells(const SweepResult& a, const SweepResult& b) {
    if (a.schema != b.schema || a.rows.size() != b.rows.size()) return false;
    for (std::size_t r = 0; r < a.rows.size(); ++r)
        for (std::size_t c = 0; c < a.schema.size(); ++c) {
            const Cell& x = a.rows[r][c];
            const Cell& y = b.rows[r][c];
            if (x.index() != y.index()) return false;
            if (const double* dx = std::get_if<double>(&x)) {
                const double dy = std::get<double>(y);
                if (!(std::isnan(*dx) && std::isnan(dy)) && std::memcmp(dx, &dy, sizeof dy) != 0) return false;
            } else if (x != y) {
                return false;
            }
        }
    return true;
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
    if (count == 0) throw PreconditionError("linspace: count must be at least 1");
    if (count == 1) return {start};
    std::vector<double> out(count);
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
    out.back() = stop;
    return out;
}

std::vector<double> parse_grid(std::string_view spec) {
    spec = trim(spec);
    if (spec.empty()) throw PreconditionError("grid: empty specification");
    if (spec.find(':') != std::string_view::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3) throw PreconditionError("grid: expected start:stop:count");
        const double start = parse_real(parts[0]);
        const double stop = parse_real(parts[1]);
        const std::int64_t count = parse_integer(parts[2]);
        if (!std::isfinite(start) || !std::isfinite(stop)) throw PreconditionError("grid: bounds must be finite");
        if (count < 1) throw PreconditionError("grid: count must be at least 1");
        if (start > stop) throw PreconditionError("grid: start must not exceed stop");
        return linspace(start, stop, static_cast<std::size_t>(count));
    }
    std::vector<double> out;
    for (auto part : split(spec, ',')) {
        const double x = parse_real(part);
        if (!std::isfinite(x)) throw PreconditionError("grid: values must be finite");
        if (!out.empty() && x < out.back()) throw PreconditionError("grid: list must be non-decreasing");
        out.push_back(x);
    }
    return out;
}

} // namespace medent::sweep
