#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "infogen/json_io.hpp"
#include "infogen/verify.hpp"

namespace infogen {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitInvariant = 1, kExitUsage = 2, kExitBudget = 3 };

/// Empty, number, text or flag. Numbers print as %.17g; ±∞ as "inf"/"-inf".
using Cell = std::variant<std::monostate, double, std::string, bool>;

/// One bound evaluation plus its ground truth. `target` names the controlled
/// quantity: "gen" or "gen_hat"; `abs_expected` is |E[target]|.
struct ReportRow {
  std::string command = "report";
  std::string problem;
  Setting setting = Setting::standard;
  std::string axis;
  std::string axis_value;
  BoundResult bound;
  std::string target = "gen";
  double abs_expected = 0.0;
  std::optional<double> truth_quantile;
  std::optional<double> violation_prob;
  std::optional<double> mi_w_supersample;
  std::optional<double> cmi;
};

/// Fixed, versioned column order shared by CSV and JSON output.
const std::vector<std::string>& report_columns();
std::vector<Cell> to_cells(const ReportRow& row);

std::vector<ReportRow> report_rows(const ExperimentConfig& cfg);
std::vector<ReportRow> sweep_rows(const ExperimentConfig& cfg);
std::string render_rows(const std::vector<ReportRow>& rows, Format format);

struct VerifySummary {
  std::vector<SuiteResult> suites;
  bool passed() const;
};
VerifySummary run_verification(const ExperimentConfig& cfg);
std::string render_verify(const VerifySummary& summary, Format format);

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<Format> format;
};

/// Runs `report`, `verify` or `sweep`; writes the result to the configured
/// output path or to `out`, diagnostics to `err`, and returns the exit code.
int run_command(const std::string& command, const std::filesystem::path& config_path,
                const CliOverrides& overrides, std::ostream& out, std::ostream& err);

}  // namespace infogen
