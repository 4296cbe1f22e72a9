#include "specreg/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "specreg/error.hpp"

namespace specreg {

namespace {

const char* kTraceHeader = "iter,penalty,sigma_max,sigma_min,kappa,gap_flag,grad_norm";

double parse_double(const std::string& token, const std::string& path, std::size_t line) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw Error(Errc::parse, path + ":" + std::to_string(line) + ": non-numeric token '" +
                                     token + "'");
    return v;
}

long parse_long(const std::string& token, const std::string& path, std::size_t line) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw Error(Errc::parse, path + ":" + std::to_string(line) + ": non-integer token '" +
                                     token + "'");
    return v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(Errc::parse, "cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::parse, "cannot open '" + path + "' for reading");
    return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

std::string format_value(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void kernel_write(const std::string& path, const Kernel4D& K) {
    K.validate();
    std::ofstream out = open_out(path);
    out << K.k << ' ' << K.g << ' ' << K.h << '\n';
    for (double v : K.data) out << format_value(v) << '\n';
    out.flush();
    if (!out)
        throw Error(Errc::parse, "write failed for '" + path + "'");
}

Kernel4D kernel_read(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw Error(Errc::parse, path + ":1: missing header, expected 'k g h'");
    std::istringstream header(line);
    std::string tk, tg, th, extra;
    if (!(header >> tk >> tg >> th) || (header >> extra))
        throw Error(Errc::parse, path + ":1: malformed header, expected 'k g h'");
    const long k = parse_long(tk, path, 1);
    const long g = parse_long(tg, path, 1);
    const long h = parse_long(th, path, 1);
    if (k < 1 || g < 1 || h < 1)
        throw Error(Errc::parse, path + ":1: dimensions must be positive");

    const std::size_t expected = static_cast<std::size_t>(k) * k * g * h;
    std::vector<double> values;
    values.reserve(expected);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string token;
        while (ls >> token) values.push_back(parse_double(token, path, lineno));
    }
    if (values.size() != expected)
        throw Error(Errc::parse, path + ": expected " + std::to_string(expected) +
                                     " values, found " + std::to_string(values.size()));
    Kernel4D K(static_cast<int>(k), static_cast<int>(g), static_cast<int>(h));
    K.data = std::move(values);
    K.validate();
    return K;
}

void trace_write_csv(const std::string& path, const std::vector<TraceRow>& trace) {
    std::ofstream out = open_out(path);
    out << kTraceHeader << '\n';
    for (const TraceRow& r : trace) {
        out << r.iter << ',' << format_value(r.penalty) << ',' << format_value(r.sigma_max)
            << ',' << format_value(r.sigma_min) << ',' << format_value(r.kappa) << ','
            << (r.gap_flag ? 1 : 0) << ',' << format_value(r.grad_norm) << '\n';
    }
    out.flush();
    if (!out)
        throw Error(Errc::parse, "write failed for '" + path + "'");
}

std::vector<TraceRow> trace_read_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader)
        throw Error(Errc::parse, path + ":1: bad CSV header");
    std::vector<TraceRow> trace;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 7)
            throw Error(Errc::parse, path + ":" + std::to_string(lineno) + ": expected 7 fields, found " +
                                         std::to_string(f.size()));
        TraceRow r;
        r.iter = static_cast<int>(parse_long(f[0], path, lineno));
        r.penalty = parse_double(f[1], path, lineno);
        r.sigma_max = parse_double(f[2], path, lineno);
        r.sigma_min = parse_double(f[3], path, lineno);
        r.kappa = parse_double(f[4], path, lineno);
        const long flag = parse_long(f[5], path, lineno);
        if (flag != 0 && flag != 1)
            throw Error(Errc::parse, path + ":" + std::to_string(lineno) + ": gap_flag must be 0 or 1");
        r.gap_flag = flag == 1;
        r.grad_norm = parse_double(f[6], path, lineno);
        r.has_oracle = !std::isnan(r.sigma_max);
        trace.push_back(r);
    }
    return trace;
}

} // namespace specreg
