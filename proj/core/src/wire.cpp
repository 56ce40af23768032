#include "danl/wire.hpp"

#include <bit>
#include <stdexcept>

namespace danl {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int k = 0; k < 8; ++k)
    out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | bytes_[pos_ + k];
    pos_ += 4;
    return v;
  }

  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int k = 7; k >= 0; --k) bits = (bits << 8) | bytes_[pos_ + k];
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }

  void expect_end() const {
    if (pos_ != bytes_.size())
      throw std::runtime_error("wire: trailing bytes in message");
  }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size())
      throw std::runtime_error("wire: truncated message");
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode(const GradientReport& report) {
  if (report.regions.size() != report.fragments.size())
    throw std::invalid_argument("encode: regions/fragments mismatch");
  std::vector<std::uint8_t> out;
  put_u32(out, static_cast<std::uint32_t>(report.worker_id));
  put_u32(out, static_cast<std::uint32_t>(report.round));
  put_u32(out, static_cast<std::uint32_t>(report.regions.size()));
  for (std::size_t k = 0; k < report.regions.size(); ++k) {
    put_u32(out, static_cast<std::uint32_t>(report.regions[k]));
    put_u32(out, static_cast<std::uint32_t>(report.fragments[k].size()));
    for (double v : report.fragments[k]) put_f64(out, v);
  }
  return out;
}

GradientReport decode_gradient_report(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  GradientReport report;
  report.worker_id = static_cast<int>(r.u32());
  report.round = static_cast<int>(r.u32());
  const std::uint32_t n_regions = r.u32();
  for (std::uint32_t k = 0; k < n_regions; ++k) {
    report.regions.push_back(static_cast<int>(r.u32()));
    const std::uint32_t len = r.u32();
    std::vector<double> frag(len);
    for (std::uint32_t j = 0; j < len; ++j) frag[j] = r.f64();
    report.fragments.push_back(std::move(frag));
  }
  r.expect_end();
  return report;
}

std::vector<std::uint8_t> encode(const HessianReport& report) {
  const int d = report.hess.dim();
  if (report.grad.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("encode: gradient/Hessian dim mismatch");
  std::vector<std::uint8_t> out;
  put_u32(out, static_cast<std::uint32_t>(report.worker_id));
  put_u32(out, static_cast<std::uint32_t>(d));
  for (double v : report.grad) put_f64(out, v);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) put_f64(out, report.hess(i, j));
  return out;
}

HessianReport decode_hessian_report(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  HessianReport report;
  report.worker_id = static_cast<int>(r.u32());
  const int d = static_cast<int>(r.u32());
  if (d <= 0) throw std::runtime_error("wire: bad Hessian dimension");
  report.grad.resize(d);
  for (int j = 0; j < d; ++j) report.grad[j] = r.f64();
  std::vector<double> h(static_cast<std::size_t>(d) * d);
  for (auto& v : h) v = r.f64();
  r.expect_end();
  report.hess = SymMatrix::from_dense(d, h);
  return report;
}

}  // namespace danl
