#include "mvd/mvimg.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace mvd {

namespace {

constexpr char kMagic[6] = {'M', 'V', 'I', 'M', 'G', '1'};
constexpr double kReaderDriftTol = 1e-8;

void put_u32(std::string& buf, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) buf.push_back(char((v >> (8 * k)) & 0xff));
}

void put_f64(std::string& buf, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  for (int k = 0; k < 8; ++k) buf.push_back(char((bits >> (8 * k)) & 0xff));
}

std::uint32_t get_u32(const std::string& buf, size_t& off) {
  if (off + 4 > buf.size()) throw IoError("truncated mvimg header");
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k)
    v |= std::uint32_t(std::uint8_t(buf[off + k])) << (8 * k);
  off += 4;
  return v;
}

double get_f64(const std::string& buf, size_t& off) {
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k)
    bits |= std::uint64_t(std::uint8_t(buf[off + k])) << (8 * k);
  off += 8;
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

void write_mvimg(const std::string& path, const ManifoldImage& image) {
  const Manifold& m = image.manifold();
  std::string buf;
  buf.append(kMagic, 6);
  std::string tag = m.tag();
  buf.push_back(char(tag.size()));
  buf += tag;
  put_u32(buf, std::uint32_t(image.n1()));
  put_u32(buf, std::uint32_t(image.n2()));
  put_u32(buf, std::uint32_t(m.rep_dim()));
  for (int i = 0; i < image.size(); ++i)
    for (int k = 0; k < m.rep_dim(); ++k) put_f64(buf, image.pixel(i)[k]);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(buf.data(), std::streamsize(buf.size()));
  if (!out) throw IoError("write failed: " + path);
}

ManifoldImage read_mvimg(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());

  if (buf.size() < 7 || std::memcmp(buf.data(), kMagic, 6) != 0)
    throw IoError(path + ": bad magic, not an MVIMG1 file");
  size_t off = 6;
  size_t tag_len = std::uint8_t(buf[off++]);
  if (off + tag_len > buf.size()) throw IoError(path + ": truncated tag");
  std::string tag = buf.substr(off, tag_len);
  off += tag_len;
  auto m = make_manifold(tag);

  std::uint32_t n1 = get_u32(buf, off);
  std::uint32_t n2 = get_u32(buf, off);
  std::uint32_t point_len = get_u32(buf, off);
  if (point_len != std::uint32_t(m->rep_dim()))
    throw IoError(path + ": point length " + std::to_string(point_len) +
                  " does not match manifold " + tag);
  size_t want = size_t(n1) * n2 * point_len * 8;
  if (buf.size() - off != want)
    throw IoError(path + ": payload size mismatch (" +
                  std::to_string(buf.size() - off) + " bytes, expected " +
                  std::to_string(want) + ")");

  ManifoldImage image(m, int(n1), int(n2));
  for (int i = 0; i < image.size(); ++i)
    for (int k = 0; k < int(point_len); ++k)
      image.pixel(i)[k] = get_f64(buf, off);

  for (int i = 0; i < image.size(); ++i) {
    double err = m->membership_error(image.pixel(i));
    if (err > kReaderDriftTol)
      throw IoError(path + ": pixel " + std::to_string(i) +
                    " violates membership (error " + std::to_string(err) +
                    ")");
    if (err > 0) {
      VectorXd p(m->rep_dim());
      m->project_point(image.pixel(i), p);
      image.pixel(i) = p;
    }
  }
  return image;
}

}  // namespace mvd
