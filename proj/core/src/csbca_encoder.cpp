#include <vector>

#include "encoders.hpp"

namespace hmdiris {
namespace {

// Marks the cells lying on the rise from the group's cumulative-sum minimum
// to its maximum. `values` are read through `at(k)`, results written with
// `emit(k, bit)`.
template <typename At, typename Emit>
void analyse_group(std::size_t size, At at, Emit emit, std::vector<double>& sums) {
  double mean = 0.0;
  for (std::size_t k = 0; k < size; ++k) mean += at(k);
  mean /= static_cast<double>(size);

  sums.resize(size);
  double acc = 0.0;
  std::size_t min_pos = 0;
  std::size_t max_pos = 0;
  for (std::size_t k = 0; k < size; ++k) {
    acc += at(k) - mean;
    sums[k] = acc;
    if (sums[k] < sums[min_pos]) min_pos = k;
    if (sums[k] > sums[max_pos]) max_pos = k;
  }
  const bool upward = min_pos < max_pos;
  for (std::size_t k = 0; k < size; ++k) emit(k, upward && k >= min_pos && k <= max_pos);
}

}  // namespace

IrisCode encode_csbca(const NormalizedIris& iris, const IrisMask& mask,
                      const CsbcaParams& params) {
  detail::check_pair(iris, mask);
  EncoderParams all;
  all.csbca = params;
  const auto [cell_rows, extent] =
      code_shape(Encoder::CSBCA, all, iris.angular_size(), iris.radial_size());
  const std::size_t cell_cols = extent / 2;
  const std::size_t cw = params.cell_width;
  const std::size_t ch = params.cell_height;
  const std::size_t group = params.group_size;

  std::vector<double> means(cell_rows * cell_cols, 0.0);
  std::vector<std::size_t> valid(cell_rows * cell_cols, 0);
  for (std::size_t y = 0; y < iris.radial_size(); ++y) {
    const auto tex = iris.texture.row(y);
    const auto m = mask.bits.row(y);
    const std::size_t cy = y / ch;
    for (std::size_t x = 0; x < iris.angular_size(); ++x) {
      means[cy * cell_cols + x / cw] += tex[x];
      valid[cy * cell_cols + x / cw] += m[x] != 0 ? 1 : 0;
    }
  }
  const double inv_cell = 1.0 / static_cast<double>(cw * ch);
  for (auto& v : means) v *= inv_cell;

  IrisCode code(Encoder::CSBCA, cell_rows, extent);
  std::vector<double> sums;

  for (std::size_t cy = 0; cy < cell_rows; ++cy) {
    for (std::size_t start = 0; start < cell_cols; start += group) {
      const std::size_t size = std::min(group, cell_cols - start);
      analyse_group(
          size, [&](std::size_t k) { return means[cy * cell_cols + start + k]; },
          [&](std::size_t k, bool bit) { code.set_code_bit(cy, 2 * (start + k), bit); }, sums);
    }
  }
  for (std::size_t cx = 0; cx < cell_cols; ++cx) {
    for (std::size_t start = 0; start < cell_rows; start += group) {
      const std::size_t size = std::min(group, cell_rows - start);
      analyse_group(
          size, [&](std::size_t k) { return means[(start + k) * cell_cols + cx]; },
          [&](std::size_t k, bool bit) { code.set_code_bit(start + k, 2 * cx + 1, bit); }, sums);
    }
  }
  for (std::size_t cy = 0; cy < cell_rows; ++cy) {
    for (std::size_t cx = 0; cx < cell_cols; ++cx) {
      const bool ok = 2 * valid[cy * cell_cols + cx] >= cw * ch;
      code.set_mask_bit(cy, 2 * cx, ok);
      code.set_mask_bit(cy, 2 * cx + 1, ok);
    }
  }
  return code;
}

}  // namespace hmdiris
