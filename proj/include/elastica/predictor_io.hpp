// Copyright 2026 The elastica-learn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Versioned binary predictor file. All integers are unsigned little-endian,
// all reals IEEE-754 binary64 little-endian.
//
//   offset  size      field
//   0       8         magic "ELSTPRED"
//   8       4         format version (1)
//   12      4         kind: 0 binary, 1 multiclass, 2 regression
//   16      8         d, feature dimension
//   24      8         n, number of centers
//   32      8         L, number of class labels (2 binary, M multiclass, 0 regression)
//   40      8         M, number of member models (1, or L for multiclass)
//   48      8         c, kernel width
//   56      8 d       scaling minima
//           8 d       scaling maxima
//           8 L       class labels
//           8 n d     centers, row-major
//           8 M n     weights, model-major
//           8         J, metadata length in bytes
//           J         metadata: UTF-8 JSON (tool version, effective config)

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "elastica/errors.hpp"
#include "elastica/kernel.hpp"
#include "elastica/learners.hpp"

namespace elastica {

inline constexpr std::array<char, 8> kPredictorMagic = {'E', 'L', 'S', 'T', 'P', 'R', 'E', 'D'};
inline constexpr std::uint32_t kPredictorVersion = 1;

namespace detail {

inline void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b.data(), 8);
}

inline void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b.data(), 4);
}

inline void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class ByteReader {
 public:
  explicit ByteReader(std::istream& in) : in_(in) {}

  std::uint64_t u64() { return read_le(8); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(read_le(4)); }
  double f64() { return std::bit_cast<double>(u64()); }

  void bytes(char* dst, std::size_t len) {
    in_.read(dst, static_cast<std::streamsize>(len));
    if (static_cast<std::size_t>(in_.gcount()) != len) {
      throw Error(ErrorCode::format_error, "truncated model file");
    }
  }

 private:
  std::uint64_t read_le(int len) {
    std::array<unsigned char, 8> b{};
    bytes(reinterpret_cast<char*>(b.data()), static_cast<std::size_t>(len));
    std::uint64_t v = 0;
    for (int i = len - 1; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
  }

  std::istream& in_;
};

inline std::uint32_t kind_code(Task t) {
  switch (t) {
    case Task::binary: return 0;
    case Task::multiclass: return 1;
    case Task::regression: return 2;
  }
  return 0;
}

}  // namespace detail

inline void write_predictor(std::ostream& out, const Predictor& pred) {
  const RbfBasis& basis = pred.models.front().basis();
  const std::size_t d = basis.dim();
  const std::size_t n = basis.size();
  out.write(kPredictorMagic.data(), kPredictorMagic.size());
  detail::put_u32(out, kPredictorVersion);
  detail::put_u32(out, detail::kind_code(pred.kind));
  detail::put_u64(out, d);
  detail::put_u64(out, n);
  detail::put_u64(out, pred.class_labels.size());
  detail::put_u64(out, pred.models.size());
  detail::put_f64(out, basis.width());
  for (double v : pred.scaling.min) detail::put_f64(out, v);
  for (double v : pred.scaling.max) detail::put_f64(out, v);
  for (double v : pred.class_labels) detail::put_f64(out, v);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      detail::put_f64(out, basis.centers()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  for (const RbfModel& m : pred.models) {
    for (Eigen::Index i = 0; i < m.weights().size(); ++i) detail::put_f64(out, m.weights()[i]);
  }
  const std::string meta = pred.metadata.dump();
  detail::put_u64(out, meta.size());
  out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  if (!out) throw Error(ErrorCode::io_error, "failed writing model file");
}

inline Predictor read_predictor(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != static_cast<std::streamsize>(magic.size()) || magic != kPredictorMagic) {
    throw Error(ErrorCode::format_error, "unrecognized model file");
  }
  detail::ByteReader r(in);
  const std::uint32_t version = r.u32();
  if (version != kPredictorVersion) {
    throw Error(ErrorCode::format_error, "unsupported model file version " + std::to_string(version));
  }
  const std::uint32_t kind = r.u32();
  const std::uint64_t d = r.u64();
  const std::uint64_t n = r.u64();
  const std::uint64_t num_labels = r.u64();
  const std::uint64_t num_models = r.u64();
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 32;
  if (kind > 2 || d == 0 || n == 0 || num_models == 0 || d > kLimit || n > kLimit ||
      num_labels > kLimit || num_models > kLimit) {
    throw Error(ErrorCode::format_error, "corrupt model file header");
  }
  Predictor pred;
  pred.kind = kind == 0 ? Task::binary : kind == 1 ? Task::multiclass : Task::regression;
  const double c = r.f64();
  pred.scaling.min.resize(d);
  pred.scaling.max.resize(d);
  for (auto& v : pred.scaling.min) v = r.f64();
  for (auto& v : pred.scaling.max) v = r.f64();
  pred.class_labels.resize(num_labels);
  for (auto& v : pred.class_labels) v = r.f64();
  Matrix centers(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < centers.rows(); ++i) {
    for (Eigen::Index j = 0; j < centers.cols(); ++j) centers(i, j) = r.f64();
  }
  auto basis = std::make_shared<const RbfBasis>(std::move(centers), c);
  const ModelTask task = pred.kind == Task::regression ? ModelTask::regression
                         : pred.kind == Task::binary   ? ModelTask::binary
                                                       : ModelTask::ova_member;
  for (std::uint64_t m = 0; m < num_models; ++m) {
    Vector w(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = r.f64();
    pred.models.emplace_back(basis, std::move(w), task, pred.scaling);
  }
  const std::uint64_t meta_len = r.u64();
  if (meta_len > (std::uint64_t{1} << 30)) throw Error(ErrorCode::format_error, "corrupt metadata length");
  std::string meta(meta_len, '\0');
  r.bytes(meta.data(), meta.size());
  pred.metadata = nlohmann::json::parse(meta, nullptr, false);
  if (pred.metadata.is_discarded()) throw Error(ErrorCode::format_error, "corrupt model metadata");
  if ((pred.kind == Task::binary && num_labels != 2) ||
      (pred.kind == Task::multiclass && num_labels != num_models)) {
    throw Error(ErrorCode::format_error, "label count does not match predictor kind");
  }
  return pred;
}

inline void save_predictor(const std::filesystem::path& path, const Predictor& pred) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  write_predictor(out, pred);
}

inline Predictor load_predictor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  return read_predictor(in);
}

}  // namespace elastica
