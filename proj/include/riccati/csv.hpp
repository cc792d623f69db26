#pragma once

#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

namespace riccati::lab {

// Locale-independent shortest round-trip decimal form of a double ('.'
// separator, "nan"/"inf" spelled out).
std::string format_double(double v);

// Streaming CSV writer: UTF-8, comma-separated, one header row, numeric
// cells via format_double. The file is created on construction; rows must
// match the header width. Throws std::runtime_error on I/O failure.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& cells);
    void close();  // flushes; also called by the destructor
    ~CsvWriter();

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

private:
    std::ofstream out_;
    std::string path_;
    std::size_t width_;
};

// One-shot convenience for small tables.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace riccati::lab
