#pragma once

#include <string>

#include "qwalk/matrix.hpp"

namespace qwalk {

/// A validated unitary coin operation (2x2 for walks on a line, 4x4 for the plane).
struct CoinOperator {
    CMatrix matrix;
    std::string label;
};

/// (1/sqrt 2) [[1,1],[1,-1]]
CoinOperator hadamard2();

/// Kronecker product of two 2x2 coins in basis order (LL, LR, RL, RR).
CoinOperator tensor(const CoinOperator& a, const CoinOperator& b);

/// 2|s><s| - I with |s> the uniform 4-vector.
CoinOperator grover4();

/// Entries omega^{jk}/2 with omega = e^{2 pi i/4} = i.
CoinOperator dft4();

/// Validates unitarity within 1e-10.
CoinOperator custom(const CMatrix& m, const std::string& label = "custom");

}  // namespace qwalk
