#include "sno/serialize.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "sno/errors.hpp"

namespace sno {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string basis_name(const AxisBasis& a) {
  return a.kind == BasisKind::Chebyshev ? "chebyshev" : "fourier";
}

AxisBasis basis_from(const SpecfAxis& a) {
  detail::require(a.basis == "chebyshev" || a.basis == "fourier",
                  "specf: axis is not a spectral axis");
  if (a.basis == "chebyshev") return AxisBasis{BasisKind::Chebyshev};
  return AxisBasis{BasisKind::Fourier, a.real_signal};
}

}  // namespace

std::size_t SpecfTensor::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size;
  return n;
}

void write_specf(const std::filesystem::path& path, const SpecfTensor& t) {
  detail::require(!t.axes.empty(), "specf: need at least one axis");
  detail::require(t.data.size() == t.size(), "specf: data size mismatch");
  ordered_json header;
  header["axes"] = ordered_json::array();
  for (const auto& a : t.axes) {
    ordered_json ja;
    ja["basis"] = a.basis;
    ja["size"] = a.size;
    if (a.basis == "fourier") ja["real_signal"] = a.real_signal;
    header["axes"].push_back(ja);
  }
  header["dtype"] = "f64";

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  detail::numeric_check(out.good(), "specf: cannot open " + path.string() + " for writing");
  out << header.dump() << '\n';
  // Interleaved (re, im) float64, little-endian; x86-64 doubles are already
  // little-endian IEEE-754, so the raw bytes are written directly.
  std::vector<double> flat(2 * t.data.size());
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    flat[2 * i] = t.data[i].real();
    flat[2 * i + 1] = t.data[i].imag();
  }
  out.write(reinterpret_cast<const char*>(flat.data()),
            static_cast<std::streamsize>(flat.size() * sizeof(double)));
  detail::numeric_check(out.good(), "specf: short write to " + path.string());
}

SpecfTensor read_specf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  detail::numeric_check(in.good(), "specf: cannot open " + path.string());
  std::string header_line;
  std::getline(in, header_line);
  detail::numeric_check(in.good(), "specf: missing header in " + path.string());
  ordered_json header = ordered_json::parse(header_line);
  detail::require(header.value("dtype", "") == "f64", "specf: unsupported dtype");

  SpecfTensor t;
  for (const auto& ja : header.at("axes")) {
    SpecfAxis a;
    a.basis = ja.at("basis").get<std::string>();
    a.size = ja.at("size").get<std::size_t>();
    a.real_signal = ja.value("real_signal", true);
    detail::require(a.size >= 1, "specf: axis size must be >= 1");
    t.axes.push_back(a);
  }
  const std::size_t n = t.size();
  std::vector<double> flat(2 * n);
  in.read(reinterpret_cast<char*>(flat.data()),
          static_cast<std::streamsize>(flat.size() * sizeof(double)));
  detail::numeric_check(static_cast<std::size_t>(in.gcount()) == flat.size() * sizeof(double),
                        "specf: truncated blob in " + path.string());
  t.data.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.data[i] = {flat[2 * i], flat[2 * i + 1]};
  return t;
}

SpecfTensor to_specf(const CoeffSeries& s) {
  validate(s);
  SpecfTensor t;
  for (std::size_t a = 0; a < s.rank(); ++a)
    t.axes.push_back({basis_name(s.axes[a]), s.shape[a],
                      s.axes[a].kind == BasisKind::Fourier ? s.axes[a].real_signal : true});
  t.data = s.coeffs;
  return t;
}

CoeffSeries series_from_specf(const SpecfTensor& t) {
  CoeffSeries s;
  for (const auto& a : t.axes) {
    s.axes.push_back(basis_from(a));
    s.shape.push_back(a.size);
  }
  s.coeffs = t.data;
  validate(s);
  return s;
}

SpecfTensor stack_to_specf(const std::vector<CoeffSeries>& list) {
  detail::require(!list.empty(), "specf: cannot stack an empty list");
  SpecfTensor first = to_specf(list.front());
  SpecfTensor t;
  t.axes.push_back({"index", list.size(), true});
  for (const auto& a : first.axes) t.axes.push_back(a);
  t.data.reserve(list.size() * list.front().size());
  for (const auto& s : list) {
    detail::require(s.shape == list.front().shape, "specf: stacked shapes differ");
    detail::require(s.axes == list.front().axes, "specf: stacked bases differ");
    t.data.insert(t.data.end(), s.coeffs.begin(), s.coeffs.end());
  }
  return t;
}

std::vector<CoeffSeries> unstack_specf(const SpecfTensor& t) {
  detail::require(t.axes.size() >= 2 && t.axes.front().basis == "index",
                  "specf: expected a leading index axis");
  SpecfTensor proto;
  proto.axes.assign(t.axes.begin() + 1, t.axes.end());
  const std::size_t count = t.axes.front().size;
  const std::size_t each = proto.size();
  detail::require(t.data.size() == count * each, "specf: stacked data size mismatch");
  std::vector<CoeffSeries> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    proto.data.assign(t.data.begin() + static_cast<std::ptrdiff_t>(i * each),
                      t.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * each));
    out.push_back(series_from_specf(proto));
  }
  return out;
}

}  // namespace sno
