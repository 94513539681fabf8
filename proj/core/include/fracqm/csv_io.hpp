#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracqm/curve_geometry.hpp"
#include "fracqm/falpha_calculus.hpp"
#include "fracqm/fractal_measure.hpp"
#include "fracqm/quantum_dynamics.hpp"

namespace fracqm::io {

// "%.17g": round-trips every double.
std::string format_double(double x);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// v,x,y,z
std::string curve_csv(const CurveGrid& grid);
CurveGrid parse_curve_csv(const std::string& text, int level = 0);

// a,b per kept interval
std::string time_set_csv(const TimeSet& set);

// v,S
std::string staircase_csv(const Staircase& stair);
Staircase parse_staircase_csv(const std::string& text, double alpha);

// v,S,re,im
std::string field_csv(const RealField& f);
std::string field_csv(const ComplexField& f);

struct ParsedField {
    std::shared_ptr<const Staircase> chart;
    std::vector<Complex> values;
};
ParsedField parse_field_csv(const std::string& text, double alpha);

// v,S,re,im,abs2
std::string snapshot_csv(const WaveFunction& psi);

struct ContinuityRow {
    double tau = 0.0;
    double residual_max = 0.0;
    double residual_l2 = 0.0;
    double total_probability = 0.0;
};

// tau,residual_max,residual_l2,total_probability
std::string continuity_csv(const std::vector<ContinuityRow>& rows);

// Numeric rows of a CSV with a single header line.
std::vector<std::vector<double>> parse_numeric_csv(const std::string& text,
                                                   std::size_t expected_columns);

}  // namespace fracqm::io
