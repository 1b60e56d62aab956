#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "egmgeom/csv_io.hpp"
#include "test_support.hpp"

using namespace egmgeom;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path((std::filesystem::temp_directory_path() / name).string()) {}
  ~TempFile() { std::remove(path.c_str()); }
  void fill(const std::string& text) {
    std::ofstream out(path);
    out << text;
  }
};

}  // namespace

TEST_SUITE_BEGIN("csv");

TEST_CASE("points roundtrip exactly") {
  TempFile f("egmgeom_pts_rt.csv");
  const PointSet ps = testing::gaussian_points(17, 4, 5);
  write_points_csv(f.path, ps);
  const PointSet back = read_points_csv(f.path);
  REQUIRE(back.size() == ps.size());
  REQUIRE(back.dim() == ps.dim());
  CHECK(testing::linf(back.coords(), ps.coords()) == 0.0);
}

TEST_CASE("points header and errors") {
  TempFile f("egmgeom_pts_hdr.csv");
  f.fill("# d=2\n1.5,2.5\n-3,4e-2\n");
  const PointSet ps = read_points_csv(f.path);
  CHECK(ps.size() == 2);
  CHECK(ps.point(1)[1] == doctest::Approx(0.04));

  f.fill("# d=3\n1.5,2.5\n");
  CHECK_THROWS_AS(read_points_csv(f.path), InvalidInputError);
  f.fill("1,2\n1,2,3\n");
  CHECK_THROWS_AS(read_points_csv(f.path), InvalidInputError);
  f.fill("1,abc\n");
  CHECK_THROWS_AS(read_points_csv(f.path), InvalidInputError);
  f.fill("# only a comment\n");
  CHECK_THROWS_AS(read_points_csv(f.path), InvalidInputError);
  CHECK_THROWS_AS(read_points_csv("/nonexistent/egmgeom.csv"), InvalidInputError);
}

TEST_CASE("labeled roundtrip and validation") {
  TempFile f("egmgeom_lab.csv");
  const LabeledDataset ds(PointSet({0, 1, 0, -1, 2, 2}, 2), {1, -1, 1});
  write_labeled_csv(f.path, ds);
  const LabeledDataset back = read_labeled_csv(f.path);
  REQUIRE(back.size() == 3);
  CHECK(back.labels() == ds.labels());
  CHECK(testing::linf(back.points().coords(), ds.points().coords()) == 0.0);

  f.fill("1,2,0\n");
  CHECK_THROWS_AS(read_labeled_csv(f.path), InvalidInputError);
  f.fill("5\n");
  CHECK_THROWS_AS(read_labeled_csv(f.path), InvalidInputError);
}

TEST_CASE("shape roundtrip") {
  TempFile f("egmgeom_shape.csv");
  const PolytopeShape shape({{1, 0}, {-1, 0}, {0, 2}}, {1, 1, 4});
  write_shape_csv(f.path, shape);
  const PolytopeShape back = read_shape_csv(f.path);
  REQUIRE(back.faces() == 3);
  CHECK(back.offset(2) == 4.0);
  CHECK(back.scaled_normal(2)[1] == doctest::Approx(0.5));

  f.fill("1,0,0\n");  // zero offset
  CHECK_THROWS_AS(read_shape_csv(f.path), InvalidInputError);
}

TEST_SUITE_END();
