#include "greedy/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace greedy {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string header_token(std::istringstream& ss, const std::string& key) {
    std::string tok;
    if (!(ss >> tok) || tok.rfind(key + "=", 0) != 0)
        throw std::runtime_error("malformed header: expected " + key + "=");
    return tok.substr(key.size() + 1);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return is;
}

} // namespace

void write_dictionary(std::ostream& os, const Dictionary& dict) {
    os << "GREEDYDICT v1 n=" << dict.space().dim << " p=" << format_double(dict.space().p)
       << " N=" << dict.size() << "\n";
    for (std::size_t i = 0; i < dict.size(); ++i) {
        const Element& g = dict.element(i);
        for (std::size_t j = 0; j < g.size(); ++j)
            os << (j ? " " : "") << format_double(g[j]);
        os << "\n";
    }
}

void write_dictionary_file(const std::string& path, const Dictionary& dict) {
    auto os = open_out(path);
    write_dictionary(os, dict);
}

Dictionary read_dictionary(std::istream& is, const std::string& label) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty dictionary stream");
    std::istringstream hs(line);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "GREEDYDICT" || version != "v1")
        throw std::runtime_error("not a GREEDYDICT v1 stream");
    std::size_t n = std::stoul(header_token(hs, "n"));
    double p = std::stod(header_token(hs, "p"));
    std::size_t count = std::stoul(header_token(hs, "N"));
    SpaceLp space(n, p);
    std::vector<Element> els;
    els.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Element g(n);
        for (std::size_t j = 0; j < n; ++j)
            if (!(is >> g[j])) throw std::runtime_error("dictionary row truncated");
        double nr = norm(space, g);
        if (std::abs(nr - 1.0) > 1e-6)
            throw std::runtime_error("dictionary row norm deviates from 1 by more than 1e-6");
        for (double& x : g) x /= nr;
        els.push_back(std::move(g));
    }
    return Dictionary(space, std::move(els), label);
}

Dictionary read_dictionary_file(const std::string& path) {
    auto is = open_in(path);
    return read_dictionary(is, path);
}

void write_matrix(std::ostream& os, const Mat& m) {
    os << "GREEDYMAT v1 rows=" << m.rows << " cols=" << m.cols << "\n";
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) os << (j ? " " : "") << format_double(m(i, j));
        os << "\n";
    }
}

void write_matrix_file(const std::string& path, const Mat& m) {
    auto os = open_out(path);
    write_matrix(os, m);
}

Mat read_matrix(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty matrix stream");
    std::istringstream hs(line);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "GREEDYMAT" || version != "v1")
        throw std::runtime_error("not a GREEDYMAT v1 stream");
    std::size_t rows = std::stoul(header_token(hs, "rows"));
    std::size_t cols = std::stoul(header_token(hs, "cols"));
    Mat m(rows, cols);
    for (double& x : m.data)
        if (!(is >> x)) throw std::runtime_error("matrix data truncated");
    return m;
}

Mat read_matrix_file(const std::string& path) {
    auto is = open_in(path);
    return read_matrix(is);
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
    os << "m,index,sign,lambda,w,mu,c,residual_norm,dnorm_F,stop_reason\n";
    auto field = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
    for (std::size_t m = 0; m < trace.records.size(); ++m) {
        const TraceRecord& r = trace.records[m];
        os << r.m << ',';
        if (r.selected_index >= 0) os << r.selected_index;
        os << ',';
        if (r.sign != 0) os << r.sign;
        os << ',' << field(r.lambda) << ',' << field(r.w) << ',' << field(r.mu) << ','
           << field(r.c) << ',' << format_double(r.residual_norm) << ',' << field(r.dnorm_f)
           << ',';
        if (m + 1 == trace.records.size()) os << stop_reason_name(trace.stop);
        os << "\n";
    }
}

void write_trace_csv_file(const std::string& path, const Trace& trace) {
    auto os = open_out(path);
    write_trace_csv(os, trace);
}

void write_element_file(const std::string& path, const Element& x) {
    auto os = open_out(path);
    for (std::size_t j = 0; j < x.size(); ++j) os << (j ? " " : "") << format_double(x[j]);
    os << "\n";
}

Element read_element_file(const std::string& path) {
    auto is = open_in(path);
    Element x;
    double v;
    while (is >> v) x.push_back(v);
    if (x.empty()) throw std::runtime_error("empty element file: " + path);
    return x;
}

} // namespace greedy
