#pragma once

#include <iosfwd>
#include <string>

#include "greedy/bilinear.hpp"
#include "greedy/dictionary.hpp"
#include "greedy/trace.hpp"

namespace greedy {

// GREEDYDICT v1: header `GREEDYDICT v1 n=<dim> p=<p> N=<count>` followed by
// N rows of n space-separated floats (17 significant digits on write). Rows
// must be unit norm within 1e-6; accepted rows are renormalized exactly.
void write_dictionary(std::ostream& os, const Dictionary& dict);
void write_dictionary_file(const std::string& path, const Dictionary& dict);
Dictionary read_dictionary(std::istream& is, const std::string& label = "file");
Dictionary read_dictionary_file(const std::string& path);

// GREEDYMAT v1: header `GREEDYMAT v1 rows=<n1> cols=<n2>` + row-major floats.
void write_matrix(std::ostream& os, const Mat& m);
void write_matrix_file(const std::string& path, const Mat& m);
Mat read_matrix(std::istream& is);
Mat read_matrix_file(const std::string& path);

// Trace CSV with the fixed column set
// m,index,sign,lambda,w,mu,c,residual_norm,dnorm_F,stop_reason
// (empty fields where a column does not apply to the algorithm).
void write_trace_csv(std::ostream& os, const Trace& trace);
void write_trace_csv_file(const std::string& path, const Trace& trace);

// Element as a single row of floats.
void write_element_file(const std::string& path, const Element& x);
Element read_element_file(const std::string& path);

std::string format_double(double v); // 17 significant digits

} // namespace greedy
