// Copyright 2026 The qkdqcl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QKDQCL_BASIS_H
#define QKDQCL_BASIS_H

#include <array>
#include <string_view>

namespace qkdqcl {

/// BB84 encoding basis; the numeric value is the basis bit b (0 = Z, 1 = X).
enum class Basis { Z = 0, X = 1 };

inline constexpr std::array<Basis, 2> kBases{Basis::Z, Basis::X};

constexpr std::string_view basis_name(Basis b) {
    return b == Basis::Z ? "Z" : "X";
}

}  // namespace qkdqcl

#endif
