// Copyright 2026 The sbcd Authors.
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace sbcd {

/// Dense row-major square matrix. Benchmark problems stay below a few
/// hundred variables, and the modularity null-model term fills every entry
/// anyway.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t size, double fill = 0.0)
        : size_(size), data_(size * size, fill) {}

    std::size_t size() const noexcept { return size_; }

    double& operator()(std::size_t i, std::size_t j) noexcept {
        assert(i < size_ && j < size_);
        return data_[i * size_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const noexcept {
        assert(i < size_ && j < size_);
        return data_[i * size_ + j];
    }

    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * size_, size_};
    }

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values_mut() noexcept { return data_; }

    /// Largest |A_ij - A_ji|.
    double asymmetry() const noexcept {
        double worst = 0.0;
        for (std::size_t i = 0; i < size_; ++i) {
            for (std::size_t j = i + 1; j < size_; ++j) {
                double d = (*this)(i, j) - (*this)(j, i);
                if (d < 0) d = -d;
                if (d > worst) worst = d;
            }
        }
        return worst;
    }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t size_ = 0;
    std::vector<double> data_;
};

}  // namespace sbcd
