#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cocopf/records.hpp"

namespace cocopf {

/// Scientific notation with 17 significant digits (round-trip safe).
std::string format_sci(double v);

/// mlog file name: {label}_f{ff}_d{dd}_i{ii}.mlog.csv (two-digit fields).
std::string mlog_filename(const std::string& solver_label, int function_id, int dim,
                          std::uint64_t instance_seed);

/// Writes one trial trace: "# cocopf-mlog v1" then CSV rows.
void write_mlog(const std::filesystem::path& path, std::span<const MLogRow> rows);

/// records.csv: one row per trial plus hit_{j} first-attainment columns for
/// the standard ladder.
void write_records_csv(const std::filesystem::path& path, std::span<const TrialRecord> records);
std::vector<TrialRecord> read_records_csv(const std::filesystem::path& path);

void write_ert_csv(const std::filesystem::path& path, const std::string& header,
                   std::span<const std::string> rows);

} // namespace cocopf
