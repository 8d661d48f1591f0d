#include "deblur/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "deblur/errors.hpp"

namespace deblur {

namespace {

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

template <typename T>
T parse_integer(const std::string& text, const char* what) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw ParameterError(std::string("csv: bad ") + what + " '" + text + "'");
    return value;
}

std::string format_metric(double v, bool diverged) { return diverged ? "diverged" : format_double(v); }

} // namespace

bool ResultRow::operator==(const ResultRow& o) const {
    return image == o.image && kernel == o.kernel && same(noise_variance, o.noise_variance) && method == o.method &&
           n == o.n && same(final_tol, o.final_tol) && same(final_psnr, o.final_psnr) &&
           same(final_ssim, o.final_ssim) && iterations == o.iterations && same(wall_seconds, o.wall_seconds) &&
           termination == o.termination;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

double parse_double(const std::string& text) {
    if (text == "diverged" || text == "nan") return std::nan("");
    if (text == "inf") return HUGE_VAL;
    if (text == "-inf") return -HUGE_VAL;
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw ParameterError("csv: bad number '" + text + "'");
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                fields.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.emplace_back();
        } else if (ch != '\r') {
            fields.back() += ch;
        }
    }
    if (quoted) throw ParameterError("csv: unterminated quote");
    return fields;
}

std::string join_csv_line(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out += ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n") == std::string::npos) {
            out += f;
            continue;
        }
        out += '"';
        for (char ch : f) {
            if (ch == '"') out += '"';
            out += ch;
        }
        out += '"';
    }
    return out;
}

std::string serialize_row(const ResultRow& row) {
    const bool diverged = row.termination == Termination::diverged;
    return join_csv_line({row.image, row.kernel, format_double(row.noise_variance), row.method, std::to_string(row.n),
                          format_metric(row.final_tol, diverged), format_metric(row.final_psnr, diverged),
                          format_metric(row.final_ssim, diverged), std::to_string(row.iterations),
                          format_double(row.wall_seconds), to_string(row.termination)});
}

ResultRow parse_row(const std::string& line) {
    const auto f = split_csv_line(line);
    if (f.size() != 11) throw ParameterError("csv: expected 11 result fields, got " + std::to_string(f.size()));
    ResultRow row;
    row.image = f[0];
    row.kernel = f[1];
    row.noise_variance = parse_double(f[2]);
    row.method = f[3];
    row.n = parse_integer<unsigned>(f[4], "n");
    row.final_tol = parse_double(f[5]);
    row.final_psnr = parse_double(f[6]);
    row.final_ssim = parse_double(f[7]);
    row.iterations = parse_integer<std::size_t>(f[8], "iterations");
    row.wall_seconds = parse_double(f[9]);
    row.termination = parse_termination(f[10]);
    return row;
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << kResultHeader << '\n';
    for (const auto& r : rows) os << serialize_row(r) << '\n';
}

std::vector<ResultRow> read_results_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kResultHeader) throw ParameterError("csv: missing result header");
    std::vector<ResultRow> rows;
    while (std::getline(is, line)) {
        if (!line.empty()) rows.push_back(parse_row(line));
    }
    return rows;
}

void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& records) {
    os << kTraceHeader << '\n';
    for (const auto& r : records) {
        os << r.iter << ',' << format_double(r.tol) << ',' << format_double(r.objective) << ','
           << format_double(r.psnr) << ',' << format_double(r.ssim) << ',' << format_double(r.elapsed_s) << '\n';
    }
}

std::vector<IterationRecord> read_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kTraceHeader) throw ParameterError("csv: missing trace header");
    std::vector<IterationRecord> records;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 6) throw ParameterError("csv: expected 6 trace fields");
        records.push_back({parse_integer<std::size_t>(f[0], "iter"), parse_double(f[1]), parse_double(f[2]),
                           parse_double(f[3]), parse_double(f[4]), parse_double(f[5])});
    }
    return records;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << contents;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

} // namespace deblur
