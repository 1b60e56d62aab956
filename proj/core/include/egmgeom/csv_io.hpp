#pragma once

#include <string>

#include "egmgeom/geometry.hpp"

namespace egmgeom {

// Point sets travel as CSV: one point per line, d comma-separated decimal
// floats, with an optional leading "# d=<d>" comment. Labeled datasets add
// a trailing +1/-1 column; shapes list d normal coordinates then the
// positive offset t.

PointSet read_points_csv(const std::string& path);
void write_points_csv(const std::string& path, const PointSet& ps);

LabeledDataset read_labeled_csv(const std::string& path);
void write_labeled_csv(const std::string& path, const LabeledDataset& ds);

PolytopeShape read_shape_csv(const std::string& path);
void write_shape_csv(const std::string& path, const PolytopeShape& shape);

}  // namespace egmgeom
