#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ovp {

/// RFC-4180-style CSV writer: fields quoted when they contain commas,
/// quotes or newlines; '.' decimal separator; doubles at 17 significant
/// digits; '\n' line endings (documented in the README).
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void header(const std::vector<std::string>& names);
    CsvWriter& field(const std::string& s);
    CsvWriter& field(double v);
    CsvWriter& field(long v);
    CsvWriter& field(int v) { return field(static_cast<long>(v)); }
    void end_row();

  private:
    struct Impl;
    Impl* impl_;
};

std::string format_double(double v);  // 17 significant digits, inf/nan spelled out

/// FNV-1a content hash, printed in the run manifest.
std::uint64_t fnv1a_hash(const std::string& bytes);

/// Writes manifest.txt: scenario path + hash, version, seed, command line.
void write_manifest(const std::string& dir, const std::string& scenario_path,
                    const std::string& scenario_text, std::uint64_t seed,
                    const std::string& command_line);

/// Minimal SVG polyline plot; one curve per series, log-or-linear axes.
struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series, bool log_x = false,
                    bool log_y = false);

}  // namespace ovp
