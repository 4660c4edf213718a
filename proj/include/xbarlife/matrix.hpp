// Copyright 2026 The xbarlife Authors
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

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace xbarlife {

struct CellIndex {
  std::size_t row = 0;
  std::size_t col = 0;

  auto operator<=>(const CellIndex&) const = default;
};

/// Dense row-major N x N matrix. Row 0 is the top wordline.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, const T& fill = T{})
      : n_(n), values_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  T& operator()(std::size_t row, std::size_t col) {
    return values_[row * n_ + col];
  }
  const T& operator()(std::size_t row, std::size_t col) const {
    return values_[row * n_ + col];
  }
  T& operator[](CellIndex c) { return (*this)(c.row, c.col); }
  const T& operator[](CellIndex c) const { return (*this)(c.row, c.col); }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> values_;
};

}  // namespace xbarlife
