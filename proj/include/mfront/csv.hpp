#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfront {

// Deterministic CSV emission: every double is printed with %.17g (enough
// digits for exact round-trip), rows end in a bare LF, and the stream is
// opened in binary mode so the bytes are identical across platforms and
// repeated runs.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
    }

    void row(std::initializer_list<double> values) {
        std::size_t i = 0;
        for (double v : values) {
            if (i++) out_ << ',';
            out_ << format(v);
        }
        out_ << '\n';
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << format(values[i]);
        }
        out_ << '\n';
    }

    // Mixed row for tables with a leading label column.
    void labeled_row(const std::string& label, const std::vector<double>& values) {
        out_ << label;
        for (double v : values) out_ << ',' << format(v);
        out_ << '\n';
    }

    void flush() { out_.flush(); }

    static std::string format(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

  private:
    std::ofstream out_;
};

}  // namespace mfront
