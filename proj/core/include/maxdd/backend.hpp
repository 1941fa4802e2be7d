// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXDD_BACKEND_HPP
#define MAXDD_BACKEND_HPP

namespace maxdd
{

// Runs small Cholesky and eigenvalue problems through LAPACK and compares them with exact
// identities. Some OpenBLAS builds pick kernels for the wrong CPU and return garbage.
bool dense_backend_selftest();

// Call first thing in main(). When the self-test fails and OPENBLAS_CORETYPE is unset, the
// process re-executes itself with a core type matching the CPU's vector extensions. Throws
// std::runtime_error if the backend is still wrong.
void ensure_dense_backend(char **argv);

}  // namespace maxdd

#endif  // MAXDD_BACKEND_HPP
