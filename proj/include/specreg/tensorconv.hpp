#pragma once

#include "specreg/types.hpp"

namespace specreg {

// Forward convolution, adjoint, and weight gradient: the three primitive
// linear maps everything else is assembled from. Zero padding, unit stride;
// for even k the padding is asymmetric (center index ceil(k/2)).
//
// The functions in this namespace parallelize over independent output
// entries with OpenMP. Each output is accumulated in a single scalar in a
// fixed order, so results are bit-identical for any thread count. The
// `serial` namespace below holds plain-loop reference implementations kept
// for testing and benchmarking; the two are compared bitwise in the suite.

// One-channel convolution: K is k x k, X is N x N, output is N x N.
DenseMatrix conv_single(const DenseMatrix& K, const DenseMatrix& X);

// Multichannel convolution: X must have c == K.g; output has c == K.h.
Tensor3 conv_multi(const Kernel4D& K, const Tensor3& X);

// Adjoint of conv_multi in the Frobenius inner product: for all X, Y
//   <conv_multi(K, X), Y> == <X, conv_adjoint(K, Y, N)>.
// Y must have c == K.h; output has c == K.g.
Tensor3 conv_adjoint(const Kernel4D& K, const Tensor3& Y);

// Weight gradient: G(p,q,z,y) = sum_{r,s} U(r,s,y) * V(r-m+p, s-m+q, z)
// with out-of-range V entries zero. U is output-side (c = h), V is
// input-side (c = g); the result does not depend on any kernel values.
Kernel4D conv_weight_grad(const Tensor3& U, const Tensor3& V, int k);

namespace serial {

DenseMatrix conv_single(const DenseMatrix& K, const DenseMatrix& X);
Tensor3 conv_multi(const Kernel4D& K, const Tensor3& X);
Tensor3 conv_adjoint(const Kernel4D& K, const Tensor3& Y);
Kernel4D conv_weight_grad(const Tensor3& U, const Tensor3& V, int k);

} // namespace serial

} // namespace specreg
