#include "ovp/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "ovp/errors.hpp"

namespace ovp {

struct CsvWriter::Impl {
    std::ofstream out;
    bool row_started = false;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path, std::ios::binary);
    if (!impl_->out) {
        delete impl_;
        throw Error("cannot open '" + path + "' for writing");
    }
}

CsvWriter::~CsvWriter() { delete impl_; }

namespace {

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += "\"\"";
        else q += c;
    }
    q += "\"";
    return q;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvWriter::header(const std::vector<std::string>& names) {
    bool first = true;
    for (const auto& n : names) {
        if (!first) impl_->out << ',';
        impl_->out << csv_quote(n);
        first = false;
    }
    impl_->out << '\n';
}

CsvWriter& CsvWriter::field(const std::string& s) {
    if (impl_->row_started) impl_->out << ',';
    impl_->out << csv_quote(s);
    impl_->row_started = true;
    return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_double(v)); }

CsvWriter& CsvWriter::field(long v) { return field(std::to_string(v)); }

void CsvWriter::end_row() {
    impl_->out << '\n';
    impl_->row_started = false;
}

std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void write_manifest(const std::string& dir, const std::string& scenario_path,
                    const std::string& scenario_text, std::uint64_t seed,
                    const std::string& command_line) {
    std::ofstream out(dir + "/manifest.txt", std::ios::binary);
    if (!out) throw Error("cannot write manifest in '" + dir + "'");
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a_hash(scenario_text)));
    out << "version = 1.0.0\n";
    out << "scenario = " << scenario_path << "\n";
    out << "scenario_hash = " << hex << "\n";
    out << "seed = " << seed << "\n";
    out << "command = " << command_line << "\n";
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series, bool log_x, bool log_y) {
    const int W = 860, H = 560, ML = 70, MR = 20, MT = 40, MB = 50;
    auto tx = [&](double v) { return log_x ? std::log10(std::max(v, 1e-300)) : v; };
    auto ty = [&](double v) { return log_y ? std::log10(std::max(v, 1e-300)) : v; };

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (log_y && s.y[i] <= 0) continue;
            if (log_x && s.x[i] <= 0) continue;
            x_lo = std::min(x_lo, tx(s.x[i]));
            x_hi = std::max(x_hi, tx(s.x[i]));
            y_lo = std::min(y_lo, ty(s.y[i]));
            y_hi = std::max(y_hi, ty(s.y[i]));
        }
    if (!(x_lo < x_hi)) {
        x_lo -= 1;
        x_hi += 1;
    }
    if (!(y_lo < y_hi)) {
        y_lo -= 1;
        y_hi += 1;
    }
    auto px = [&](double v) {
        return ML + (tx(v) - x_lo) / (x_hi - x_lo) * (W - ML - MR);
    };
    auto py = [&](double v) {
        return H - MB - (ty(v) - y_lo) / (y_hi - y_lo) * (H - MT - MB);
    };

    static const char* colors[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad",
                                   "#d35400", "#2c3e50", "#16a085", "#7f8c8d"};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write plot '" + path + "'");
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << " " << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-family='monospace'"
        << " font-size='16'>" << title << "</text>\n";
    out << "<rect x='" << ML << "' y='" << MT << "' width='" << (W - ML - MR)
        << "' height='" << (H - MT - MB) << "' fill='none' stroke='#888'/>\n";
    int ci = 0;
    for (const auto& s : series) {
        out << "<polyline fill='none' stroke='" << colors[ci % 8]
            << "' stroke-width='1.5' points='";
        for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if ((log_y && s.y[i] <= 0) || (log_x && s.x[i] <= 0)) continue;
            out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        }
        out << "'/>\n";
        out << "<text x='" << (W - MR - 150) << "' y='" << (MT + 18 + 16 * ci)
            << "' font-family='monospace' font-size='12' fill='" << colors[ci % 8] << "'>"
            << s.label << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

}  // namespace ovp
