#pragma once

#include "rk/ring.hpp"

#include <vector>

namespace fixtures {

inline rk::PolyMatrix matrix5(const std::vector<std::vector<std::string>>& rows,
                              rk::Field field = {}) {
    rk::Ctx ctx = rk::make_pipeline_ring((int)rows.size(), field);
    rk::PolyMatrix M = rk::PolyMatrix::zero(ctx, (int)rows.size(), (int)rows[0].size());
    for (int r = 0; r < M.rows; ++r)
        for (int c = 0; c < M.cols; ++c) M.at(r, c) = rk::parse_poly(rows[r][c], ctx);
    return M;
}

// the three worked examples bundled in data/
inline rk::PolyMatrix ex71() {
    return matrix5({{"x", "y", "z", "x*z"},
                    {"x", "0", "0", "x^2"},
                    {"y", "x", "0", "y^2"},
                    {"0", "y", "x", "x*y"},
                    {"0", "0", "y", "y^2"}});
}

inline rk::PolyMatrix ex72() {
    return matrix5({{"x", "y", "z", "x^2"},
                    {"x", "0", "0", "x*z"},
                    {"y", "x", "0", "y^2"},
                    {"0", "y", "x", "x*y"},
                    {"0", "0", "y", "y^2"}});
}

inline rk::PolyMatrix ex73() {
    return matrix5({{"x", "x", "0", "z^2"},
                    {"x", "0", "0", "x^2"},
                    {"y", "x", "0", "y^2"},
                    {"0", "y", "x", "y*x"},
                    {"0", "0", "y", "y^2"}});
}

} // namespace fixtures
