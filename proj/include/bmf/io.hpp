#pragma once

// File formats: JSON dumps of staircase trees, piecewise-linear maps and
// verification/probe reports; CSV exports of samples and scans; standalone SVG
// plots. Rationals always serialize as "num/den" strings, and every writer is
// deterministic for identical inputs.

#include "bmf/plmap.hpp"
#include "bmf/probes.hpp"
#include "bmf/staircase.hpp"

#include <string>
#include <vector>

namespace bmf {

struct SampleRow {
    Rational x;
    Enclosure value;
};

// JSON {sigma, kmode, levels: [{m, nodes: [{c,a,b,d,vc,plateau,vd,split?}]}]}
// covering the materialized levels.
std::string tree_to_json(const StaircaseTree& tree);

// JSON {breakpoints, values} plus gen/cutoff provenance when present.
std::string plmap_to_json(const PLMap& g);
PLMap plmap_from_json(const std::string& text);

// JSON {cells: [{lo, hi, sum}], preserving} plus diagnostic when not preserving.
std::string measure_report_to_json(const MeasureReport& report);

// CSV "x,lo,hi"; decimals >= 0 appends a truncated-decimal midpoint column.
std::string samples_to_csv(const std::vector<SampleRow>& rows, int decimals = -1);
std::vector<SampleRow> samples_from_csv(const std::string& text);

// CSV "scale,side,max_lb,min_ub,samples".
std::string scan_to_csv(const DiniScan& scan);

// JSON {threshold, points: {"num/den": {left, right}}}.
std::string morse_report_to_json(const MorseReport& report);

// Standalone SVG polyline of the graph, viewBox 0 0 1 1, y-axis flipped.
std::string plmap_to_svg(const PLMap& g);
std::string samples_to_svg(const std::vector<SampleRow>& rows);

} // namespace bmf
