#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdtk {

// One evaluated algorithm: a position on the perception-distortion plane.
// Lower is better on both axes.
struct AlgorithmRecord {
  std::string name;
  double distortion;
  double perception;
  std::string metadata;  // free-form, carried along untouched
};

// Strict domination: better on both axes. With weak = true, at least as good
// on both and better on one.
bool dominates(const AlgorithmRecord& a, const AlgorithmRecord& b, bool weak = false);

// Records not strictly dominated by any other, in input order. Names must be
// unique and scores finite.
std::vector<AlgorithmRecord> admissible_set(const std::vector<AlgorithmRecord>& records);

// Lower-left staircase: sorted by (distortion, perception, name), keeping the
// points whose perception strictly improves on everything before them.
std::vector<AlgorithmRecord> pareto_front(const std::vector<AlgorithmRecord>& records);

// Deterministic 640x480 SVG scatter of the plane: admissible points filled,
// dominated points hollow, the front joined by a polyline, names attached as
// tooltips.
void emit_scatter(const std::vector<AlgorithmRecord>& records, std::ostream& out);

// CSV "name,distortion,perception,admissible" with 17 significant digits.
void emit_table(const std::vector<AlgorithmRecord>& records, std::ostream& out);

// Reads CSV with header "name,distortion,perception"; extra columns are
// ignored, scores must be finite numbers.
std::vector<AlgorithmRecord> ingest_csv(std::istream& in);

}  // namespace pdtk
