#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "deblur/solvers.hpp"

namespace deblur {

/// One benchmark table cell. For diverged runs final_tol, final_psnr and
/// final_ssim are NaN and serialize as "diverged"; an infinite PSNR
/// serializes as "inf".
struct ResultRow {
    std::string image;
    std::string kernel;
    double noise_variance = 0.0;
    std::string method;
    unsigned n = 1;
    double final_tol = 0.0;
    double final_psnr = 0.0;
    double final_ssim = 0.0;
    std::size_t iterations = 0;
    double wall_seconds = 0.0;
    Termination termination = Termination::max_iters;

    /// Field-wise equality, NaN equal to NaN.
    bool operator==(const ResultRow& other) const;
};

inline constexpr const char* kResultHeader =
    "image,kernel,noise_var,method,n,final_tol,final_psnr,final_ssim,iterations,wall_s,termination";
inline constexpr const char* kTraceHeader = "iter,tol,objective,psnr,ssim,elapsed_s";

/// Shortest round-tripping decimal (%.17g), "inf"/"-inf"/"nan" otherwise.
std::string format_double(double v);
/// Inverse of format_double; also accepts "diverged" as NaN.
double parse_double(const std::string& text);

/// RFC 4180 style: fields containing ',', '"' or a newline are quoted.
std::vector<std::string> split_csv_line(const std::string& line);
std::string join_csv_line(const std::vector<std::string>& fields);

std::string serialize_row(const ResultRow& row);
ResultRow parse_row(const std::string& line);

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(std::istream& is);

void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& records);
std::vector<IterationRecord> read_trace_csv(std::istream& is);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

} // namespace deblur
