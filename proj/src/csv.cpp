#include "riccati/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace riccati::lab {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), path_(path), width_(header.size()) {
    if (!out_) throw std::runtime_error("cannot write '" + path + "'");
    if (header.empty()) throw std::runtime_error("csv '" + path + "': empty header");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& cells) {
    if (cells.size() != width_)
        throw std::runtime_error("csv '" + path_ + "': row width " +
                                 std::to_string(cells.size()) + " != header width " +
                                 std::to_string(width_));
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_double(cells[i]);
    }
    out_ << '\n';
}

void CsvWriter::close() {
    if (!out_.is_open()) return;
    out_.flush();
    if (!out_) throw std::runtime_error("write failure on '" + path_ + "'");
    out_.close();
}

CsvWriter::~CsvWriter() {
    try {
        close();
    } catch (...) {
        // Destructor must not throw; close() explicitly to observe failures.
    }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    CsvWriter w(path, header);
    for (const auto& r : rows) w.row(r);
    w.close();
}

}  // namespace riccati::lab
