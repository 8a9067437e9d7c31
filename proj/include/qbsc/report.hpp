#ifndef QBSC_REPORT_HPP
#define QBSC_REPORT_HPP

#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

namespace qbsc {

/// Floats in reports carry 12 significant digits.
std::string format_real(double x);
/// Full-precision rendering for file formats that must round-trip.
std::string format_real_exact(double x);

/// Minimal CSV with RFC-style quoting, stable column order, LF endings.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);

    void begin_row();
    void field(const std::string& value);
    void field(const char* value) { field(std::string(value)); }
    void field(double value);
    template <typename Int>
        requires std::is_integral_v<Int>
    void field(Int value) {
        field(std::to_string(value));
    }

    std::string str() const;

private:
    std::size_t width_;
    std::size_t in_row_ = 0;
    std::string body_;
    bool row_open_ = false;
    void close_row();
};

/// Fixed-width text table for human output.
class TextTable {
public:
    explicit TextTable(std::vector<std::string> columns);
    void add_row(std::vector<std::string> cells);
    std::string str() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace qbsc

#endif
