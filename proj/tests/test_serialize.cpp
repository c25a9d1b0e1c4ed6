#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sno/rng.hpp"
#include "sno/serialize.hpp"
#include "sno/series.hpp"

using namespace sno;
namespace fs = std::filesystem;

namespace {

fs::path tmp_file(const std::string& name) {
  auto p = fs::temp_directory_path() / "sno_serialize_tests";
  fs::create_directories(p);
  return p / name;
}

CoeffSeries random_series(AxisBasis ax, std::size_t n, std::uint64_t seed) {
  rng::Stream st(seed);
  CoeffSeries s = CoeffSeries::zeros({ax}, {n});
  for (auto& c : s.coeffs) c = st.normal_complex();
  if (ax.kind == BasisKind::Fourier && ax.real_signal) s.coeffs[0].imag(0.0);
  return s;
}

const AxisBasis kCheb{BasisKind::Chebyshev, true};
const AxisBasis kFou{BasisKind::Fourier, true};
const AxisBasis kFull{BasisKind::Fourier, false};

}  // namespace

TEST_CASE("specf roundtrip preserves axes and data exactly") {
  SpecfTensor t;
  t.axes = {{"index", 2, true}, {"fourier", 3, true}};
  rng::Stream st(13);
  t.data.resize(6);
  for (auto& c : t.data) c = st.normal_complex();
  auto p = tmp_file("roundtrip.specf");
  write_specf(p, t);
  SpecfTensor back = read_specf(p);
  REQUIRE(back.axes.size() == 2);
  CHECK(back.axes[0].basis == "index");
  CHECK(back.axes[1].basis == "fourier");
  CHECK(back.axes[1].size == 3);
  CHECK(back.axes[1].real_signal);
  REQUIRE(back.data.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(back.data[i] == t.data[i]);  // bit exact
}

TEST_CASE("file layout: one JSON line then little-endian (re, im) float64 pairs") {
  SpecfTensor t;
  t.axes = {{"chebyshev", 2, true}};
  t.data = {cplx(1.5, -2.0), cplx(0.25, 3.0)};
  auto p = tmp_file("layout.specf");
  write_specf(p, t);

  std::ifstream in(p, std::ios::binary);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("\"chebyshev\"") != std::string::npos);
  CHECK(header.find("\"f64\"") != std::string::npos);
  CHECK(header.find('\n') == std::string::npos);

  std::vector<double> raw(4);
  in.read(reinterpret_cast<char*>(raw.data()), 4 * sizeof(double));
  REQUIRE(in.gcount() == static_cast<std::streamsize>(4 * sizeof(double)));
  CHECK(raw[0] == 1.5);
  CHECK(raw[1] == -2.0);
  CHECK(raw[2] == 0.25);
  CHECK(raw[3] == 3.0);
  char extra;
  in.read(&extra, 1);
  CHECK(in.eof());  // nothing after the blob
}

TEST_CASE("series conversion keeps basis tags") {
  for (auto ax : {kCheb, kFou, kFull}) {
    CoeffSeries s = random_series(ax, 7, 31 + static_cast<int>(ax.kind));
    CoeffSeries back = series_from_specf(to_specf(s));
    REQUIRE(back.axes.size() == 1);
    CHECK(back.axes[0] == s.axes[0]);
    REQUIRE(back.coeffs.size() == s.coeffs.size());
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) CHECK(back.coeffs[i] == s.coeffs[i]);
  }
}

TEST_CASE("2D series conversion keeps the row-major layout") {
  CoeffSeries s = CoeffSeries::zeros({kCheb, kFou}, {3, 4});
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) s.coeffs[i] = static_cast<double>(i);
  SpecfTensor t = to_specf(s);
  REQUIRE(t.axes.size() == 2);
  CHECK(t.axes[0].basis == "chebyshev");
  CHECK(t.axes[1].basis == "fourier");
  CHECK(t.data[1 * 4 + 2] == cplx(6.0));
  CoeffSeries back = series_from_specf(t);
  CHECK(back.shape == s.shape);
  CHECK(back.coeffs == s.coeffs);
}

TEST_CASE("stack/unstack through a file") {
  std::vector<CoeffSeries> list;
  for (int i = 0; i < 5; ++i) list.push_back(random_series(kFou, 6, 100 + i));
  auto p = tmp_file("stack.specf");
  write_specf(p, stack_to_specf(list));
  auto back = unstack_specf(read_specf(p));
  REQUIRE(back.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(back[i].axes[0] == kFou);
    CHECK(back[i].coeffs == list[i].coeffs);
  }
}

TEST_CASE("stack rejects mixed shapes") {
  std::vector<CoeffSeries> list = {random_series(kFou, 6, 1), random_series(kFou, 7, 2)};
  CHECK_THROWS(stack_to_specf(list));
}

TEST_CASE("write is byte-identical across calls") {
  CoeffSeries s = random_series(kCheb, 16, 7);
  auto pa = tmp_file("det_a.specf"), pb = tmp_file("det_b.specf");
  write_specf(pa, to_specf(s));
  write_specf(pb, to_specf(s));
  std::ifstream a(pa, std::ios::binary), b(pb, std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  CHECK(!sa.empty());
}

TEST_CASE("read rejects truncated and malformed files") {
  auto p = tmp_file("bad.specf");
  {
    std::ofstream out(p, std::ios::binary);
    out << "{\"axes\":[{\"basis\":\"fourier\",\"size\":4,\"real_signal\":true}],\"dtype\":\"f64\"}\n";
    double half = 1.0;  // 4 complex entries promised, half a double delivered
    out.write(reinterpret_cast<char*>(&half), sizeof(double));
  }
  CHECK_THROWS(read_specf(p));
  auto q = tmp_file("nojson.specf");
  {
    std::ofstream out(q, std::ios::binary);
    out << "not json at all\n";
  }
  CHECK_THROWS(read_specf(q));
  CHECK_THROWS(read_specf(tmp_file("missing.specf")));
}
