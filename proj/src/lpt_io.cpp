#include "kbald/lpt_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "kbald/common.hpp"

namespace kbald {

namespace {

constexpr char kMagic[4] = {'L', 'P', 'T', '1'};
constexpr std::size_t kHeaderBytes = 32;

void put_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = get_u64(p);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void write_lpt(const std::string& path, const LogProbTensor& t) {
  t.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("write_lpt: cannot open " + path);
  out.write(kMagic, 4);
  const char pad[4] = {0, 0, 0, 0};
  out.write(pad, 4);
  put_u64(out, t.n_points);
  put_u64(out, t.n_samples);
  put_u64(out, t.n_classes);
  for (double v : t.data) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i)
      buf[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), 8);
  }
  if (!out) throw ValidationError("write_lpt: write failed for " + path);
}

LogProbTensor read_lpt(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("read_lpt: cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < kHeaderBytes)
    throw ValidationError("read_lpt: file too short for header, got " +
                          std::to_string(bytes.size()) + " bytes, need " +
                          std::to_string(kHeaderBytes));
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw ValidationError("read_lpt: bad magic at byte offset 0, expected "
                          "\"LPT1\"");

  LogProbTensor t;
  t.n_points = get_u64(bytes.data() + 8);
  t.n_samples = get_u64(bytes.data() + 16);
  t.n_classes = get_u64(bytes.data() + 24);
  std::size_t n_values = t.n_points * t.n_samples * t.n_classes;
  std::size_t expected = kHeaderBytes + 8 * n_values;
  if (bytes.size() != expected)
    throw ValidationError("read_lpt: payload length mismatch, expected " +
                          std::to_string(expected) + " bytes, actual " +
                          std::to_string(bytes.size()));
  t.data.resize(n_values);
  for (std::size_t i = 0; i < n_values; ++i)
    t.data[i] = get_f64(bytes.data() + kHeaderBytes + 8 * i);
  t.validate();
  return t;
}

}  // namespace kbald
