#include "qwalk/coin.hpp"

#include <cmath>
#include <stdexcept>

namespace qwalk {

CoinOperator hadamard2() {
    CMatrix m(2);
    const double s = 1.0 / std::sqrt(2.0);
    m(0, 0) = s;
    m(0, 1) = s;
    m(1, 0) = s;
    m(1, 1) = -s;
    return {m, "hadamard"};
}

CoinOperator tensor(const CoinOperator& a, const CoinOperator& b) {
    if (a.matrix.dim() != 2 || b.matrix.dim() != 2)
        throw std::invalid_argument("tensor: both coins must be 2x2");
    CMatrix m(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    m(2 * i + k, 2 * j + l) = a.matrix(i, j) * b.matrix(k, l);
    return {m, a.label + "x" + b.label};
}

CoinOperator grover4() {
    CMatrix m(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = (i == j) ? -0.5 : 0.5;
    return {m, "grover"};
}

CoinOperator dft4() {
    CMatrix m(4);
    static const cplx pow_i[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) m(j, k) = 0.5 * pow_i[(j * k) % 4];
    return {m, "dft"};
}

CoinOperator custom(const CMatrix& m, const std::string& label) {
    if (m.dim() != 2 && m.dim() != 4)
        throw std::invalid_argument("custom coin: dimension must be 2 or 4");
    if (unitarity_defect(m) > 1e-10)
        throw std::invalid_argument("custom coin: matrix is not unitary within 1e-10");
    return {m, label};
}

}  // namespace qwalk
