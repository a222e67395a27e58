// CSV output with a fixed, locale-independent format: header row, then data
// rows with %.17g fields and LF line endings.  %.17g round-trips doubles, so
// identical runs produce identical files.
#ifndef FRSE_IO_CSV_HPP
#define FRSE_IO_CSV_HPP

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace frse {

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns)
        : out_(path, std::ios::binary), ncols_(columns.size()) {
        if (!out_) throw std::runtime_error("csv: cannot open " + path);
        std::string head;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) head += ',';
            head += columns[i];
        }
        out_ << head << '\n';
    }

    void row(const std::vector<double>& values) {
        if (values.size() != ncols_)
            throw std::invalid_argument("csv: row width does not match header");
        std::string line;
        char buf[40];
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) line += ',';
            std::snprintf(buf, sizeof buf, "%.17g", values[i]);
            line += buf;
        }
        out_ << line << '\n';
    }

    void row(std::initializer_list<double> values) {
        row(std::vector<double>(values));
    }

  private:
    std::ofstream out_;
    std::size_t ncols_;
};

}  // namespace frse

#endif
