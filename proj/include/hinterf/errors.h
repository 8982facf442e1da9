// Copyright 2026 The hinterf Authors
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

#ifndef HINTERF_ERRORS_H
#define HINTERF_ERRORS_H

#include <stdexcept>
#include <string>

namespace hinterf {

/// A computed quantity broke an invariant (negative or non-finite
/// probability, complex residue in a real result). Input errors use
/// std::invalid_argument / std::out_of_range instead.
class NumericalError : public std::runtime_error {
   public:
    explicit NumericalError(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace hinterf

#endif
