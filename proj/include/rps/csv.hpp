#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace rps {

// Comma-separated rows, header first, numbers with 17 significant digits.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, std::initializer_list<std::string> header) : os_(os) { head(header); }
    CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os) { head(header); }

    void row(std::initializer_list<double> values) { write(values.begin(), values.end()); }
    void row(const std::vector<double>& values) { write(values.begin(), values.end()); }

    static std::string format(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

private:
    template <class Range>
    void head(const Range& header)
    {
        bool first = true;
        for (const auto& h : header) {
            os_ << (first ? "" : ",") << h;
            first = false;
        }
        os_ << '\n';
    }

    template <class It>
    void write(It begin, It end)
    {
        for (It it = begin; it != end; ++it)
            os_ << (it == begin ? "" : ",") << format(*it);
        os_ << '\n';
    }

    std::ostream& os_;
};

}  // namespace rps
