#include "piatr/trace_io.hpp"

#include "piatr/corpus.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace piatr {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
    out << kTraceHeader << '\n';
    for (const auto& r : trace.records) {
        out << r.k << ',' << format_double(r.fgap) << ',' << format_double(r.vel) << ',' << format_double(r.subgrad)
            << ',' << format_double(r.xnorm) << ',' << format_double(r.dist_xstar) << '\n';
    }
}

void write_trace_csv(const Trace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_trace_csv(trace, out);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

double field_double(std::string_view f, const std::filesystem::path& path, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size()) {
        throw ParseError(path.string() + ":" + std::to_string(line) + ": bad number '" + std::string(f) + "'");
    }
    return v;
}

} // namespace

std::vector<IterateRecord> read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::string text;
    if (!std::getline(in, text)) throw ParseError(path.string() + ": empty file");
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text != kTraceHeader) throw ParseError(path.string() + ": unexpected header '" + text + "'");

    std::vector<IterateRecord> out;
    std::size_t line = 1;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest(text);
        while (true) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 6) {
            throw ParseError(path.string() + ":" + std::to_string(line) + ": expected 6 fields");
        }
        IterateRecord r;
        const auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), r.k);
        if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size()) {
            throw ParseError(path.string() + ":" + std::to_string(line) + ": bad index");
        }
        r.fgap = field_double(fields[1], path, line);
        r.vel = field_double(fields[2], path, line);
        r.subgrad = field_double(fields[3], path, line);
        r.xnorm = field_double(fields[4], path, line);
        r.dist_xstar = field_double(fields[5], path, line);
        if (!out.empty() && r.k <= out.back().k) {
            throw ParseError(path.string() + ":" + std::to_string(line) + ": k not strictly increasing");
        }
        out.push_back(r);
    }
    return out;
}

void write_sidecar(const ConfigSnapshot& snapshot, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& [key, value] : snapshot) out << key << " = " << value << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace piatr
