//! Shortest-augmenting-path Hungarian method, O(n³), on dense `f64` costs.

/// Returns `(row_of_col, u, v)`: `row_of_col[j]` is the row assigned to
/// column `j`, and `u`, `v` are dual potentials with `u[i] + v[j] <= c[i][j]`
/// (up to rounding), tight on the assignment.
pub(crate) fn solve(n: usize, cost: &[f64]) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    debug_assert_eq!(cost.len(), n * n);
    // 1-based with a sentinel column 0, as in the classic formulation.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![f64::INFINITY; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0usize;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let row = &cost[(i0 - 1) * n..i0 * n];
            let ui0 = u[i0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = row[j - 1] - ui0 - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let assignment = row_of[1..].iter().map(|&i| i - 1).collect();
    (assignment, u[1..].to_vec(), v[1..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_instance() {
        // Optimum: row 0 -> col 1, row 1 -> col 0, row 2 -> col 2, total 1 + 2 + 2.
        let c = [4.0, 1.0, 3.0, 2.0, 0.0, 5.0, 3.0, 2.0, 2.0];
        let (rows, u, v) = solve(3, &c);
        let total: f64 = rows.iter().enumerate().map(|(j, &i)| c[i * 3 + j]).sum();
        assert_eq!(total, 5.0);
        let dual: f64 = u.iter().sum::<f64>() + v.iter().sum::<f64>();
        assert!((dual - total).abs() < 1e-12);
    }
}
