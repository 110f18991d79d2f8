#include "tropref/linsolve.hpp"

namespace tropref {

LinearSolution solve_linear(std::vector<std::vector<Rat>> rows, std::vector<Rat> rhs) {
    size_t m = rows.size();
    size_t k = m ? rows[0].size() : 0;
    std::vector<int> pivot_col;
    size_t row = 0;
    for (size_t col = 0; col < k && row < m; ++col) {
        size_t sel = row;
        while (sel < m && rows[sel][col] == 0) ++sel;
        if (sel == m) continue;
        std::swap(rows[sel], rows[row]);
        std::swap(rhs[sel], rhs[row]);
        Rat inv = Rat(1) / rows[row][col];
        for (size_t c = col; c < k; ++c) rows[row][c] *= inv;
        rhs[row] *= inv;
        for (size_t r2 = 0; r2 < m; ++r2) {
            if (r2 == row || rows[r2][col] == 0) continue;
            Rat f = rows[r2][col];
            for (size_t c = col; c < k; ++c) rows[r2][c] -= f * rows[row][c];
            rhs[r2] -= f * rhs[row];
        }
        pivot_col.push_back(static_cast<int>(col));
        ++row;
    }
    LinearSolution sol;
    for (size_t r2 = row; r2 < m; ++r2)
        if (rhs[r2] != 0) return sol;  // inconsistent
    sol.consistent = true;
    sol.particular.assign(k, Rat(0));
    std::vector<char> is_pivot(k, 0);
    for (size_t i = 0; i < pivot_col.size(); ++i) {
        sol.particular[pivot_col[i]] = rhs[i];
        is_pivot[pivot_col[i]] = 1;
    }
    for (size_t col = 0; col < k; ++col) {
        if (is_pivot[col]) continue;
        std::vector<Rat> null_vec(k, Rat(0));
        null_vec[col] = 1;
        for (size_t i = 0; i < pivot_col.size(); ++i) null_vec[pivot_col[i]] = -rows[i][col];
        sol.kernel.push_back(std::move(null_vec));
    }
    return sol;
}

}  // namespace tropref
