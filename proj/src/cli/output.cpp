#include "output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "hazardlens/error.hpp"

namespace hazardlens::cli {

Format parse_format(std::string_view name) {
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    if (name == "svg") return Format::svg;
    throw DomainError("unknown output format '" + std::string(name) + "' (json|csv|svg)");
}

std::string_view format_name(Format format) {
    switch (format) {
        case Format::json: return "json";
        case Format::csv: return "csv";
        case Format::svg: return "svg";
    }
    return "?";
}

Format resolve_format(const std::string& flag, std::initializer_list<Format> supported,
                      Format fallback) {
    auto is_supported = [&](Format f) {
        for (Format s : supported) {
            if (s == f) return true;
        }
        return false;
    };
    if (!flag.empty()) {
        const Format requested = parse_format(flag);
        if (!is_supported(requested)) {
            throw DomainError("format '" + flag + "' is not available for this command");
        }
        return requested;
    }
    if (const char* env = std::getenv("HAZARDLENS_FORMAT"); env != nullptr && *env != '\0') {
        const std::string_view name(env);
        if (name == "json" || name == "csv" || name == "svg") {
            const Format f = parse_format(name);
            if (is_supported(f)) return f;
        }
    }
    return fallback;
}

std::string csv_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

nlohmann::json json_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

void emit(const std::string& path, std::ostream& fallback, const std::string& payload) {
    if (path.empty()) {
        fallback << payload;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DomainError("cannot open output file '" + path + "'");
    file << payload;
}

namespace {

double parse_real(std::string_view text) {
    double value = 0.0;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (text.empty() || ec != std::errc{} || ptr != last) {
        throw DomainError("invalid number '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

std::vector<double> parse_list(std::string_view text) {
    std::vector<double> values;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(',', start);
        values.push_back(parse_real(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return values;
}

std::vector<double> parse_range(std::string_view text) {
    const std::size_t first = text.find(':');
    const std::size_t second = first == std::string_view::npos ? first : text.find(':', first + 1);
    if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
        throw DomainError("range must look like start:stop:step, got '" + std::string(text) + "'");
    }
    const double start = parse_real(text.substr(0, first));
    const double stop = parse_real(text.substr(first + 1, second - first - 1));
    const double step = parse_real(text.substr(second + 1));
    if (!(step > 0.0) || !(stop >= start)) {
        throw DomainError("range needs step > 0 and stop >= start");
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1'000'000) throw DomainError("range has too many points");
    std::vector<double> values(count);
    for (std::size_t k = 0; k < count; ++k) values[k] = start + static_cast<double>(k) * step;
    return values;
}

}  // namespace hazardlens::cli
