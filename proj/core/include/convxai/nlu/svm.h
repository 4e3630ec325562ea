// Copyright 2026 The ConvXAI Authors.
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

#ifndef CONVXAI_NLU_SVM_H_
#define CONVXAI_NLU_SVM_H_

#include <vector>

namespace convxai::nlu {

struct SvmParams {
  double c = 100.0;
  double gamma = 0.1;
  // Stop when the maximal KKT violation m(a) - M(a) drops below this.
  double tolerance = 1e-3;
  int max_iterations = 10000;
};

// Dense symmetric kernel matrix, row-major.
struct KernelMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const {
    return values[i * n + j];
  }
};

struct BinarySvm {
  // alpha_i * y_i per training point.
  std::vector<double> coef;
  // Decision value is sum_i coef_i K(x_i, x) - rho.
  double rho = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Solves the C-SVC dual with SMO, choosing the working pair by the
// maximal-violating first index and second-order gain for the second.
// `labels` holds +1/-1 per row of the kernel matrix.
BinarySvm SolveSmo(const KernelMatrix& kernel, const std::vector<int>& labels,
                   const SvmParams& params);

}  // namespace convxai::nlu

#endif  // CONVXAI_NLU_SVM_H_
