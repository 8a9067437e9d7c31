#include "qbsc/report.hpp"

#include <cstdio>
#include <stdexcept>

namespace qbsc {

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string format_real_exact(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n") != std::string::npos;
}

std::string quote(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

CsvWriter::CsvWriter(std::vector<std::string> columns) : width_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) body_ += ",";
        body_ += quote(columns[i]);
    }
    body_ += "\n";
}

void CsvWriter::begin_row() {
    close_row();
    row_open_ = true;
    in_row_ = 0;
}

void CsvWriter::field(const std::string& value) {
    if (!row_open_) throw std::logic_error("CsvWriter: field outside a row");
    if (in_row_ >= width_) throw std::logic_error("CsvWriter: too many fields in row");
    if (in_row_) body_ += ",";
    body_ += quote(value);
    ++in_row_;
}

void CsvWriter::field(double value) { field(format_real(value)); }

void CsvWriter::close_row() {
    if (!row_open_) return;
    if (in_row_ != width_) throw std::logic_error("CsvWriter: row has wrong arity");
    body_ += "\n";
    row_open_ = false;
}

std::string CsvWriter::str() const {
    std::string out = body_;
    if (row_open_) {
        if (in_row_ != width_) throw std::logic_error("CsvWriter: row has wrong arity");
        out += "\n";
    }
    return out;
}

TextTable::TextTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void TextTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
        throw std::logic_error("TextTable: row has wrong arity");
    rows_.push_back(std::move(cells));
}

std::string TextTable::str() const {
    std::vector<std::size_t> widths(columns_.size());
    for (std::size_t c = 0; c < columns_.size(); ++c) widths[c] = columns_[c].size();
    for (const auto& row : rows_)
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());

    auto emit = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) line += "  ";
            line += cells[c];
            if (c + 1 < cells.size()) line.append(widths[c] - cells[c].size(), ' ');
        }
        line += "\n";
        return line;
    };

    std::string out = emit(columns_);
    std::string rule;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c) rule += "  ";
        rule.append(widths[c], '-');
    }
    out += rule + "\n";
    for (const auto& row : rows_) out += emit(row);
    return out;
}

} // namespace qbsc
