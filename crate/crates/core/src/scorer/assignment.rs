//! Maximum-weight bipartite assignment (Kuhn-Munkres with potentials).

/// Solves a rectangular maximum-weight assignment.
///
/// Returns, for every row, the matched column (if any) and the total weight.
/// Rows or columns beyond the smaller side are matched against zero-weight
/// padding and reported as unmatched.
pub fn max_weight_assignment(weights: &[Vec<f64>]) -> (Vec<Option<usize>>, f64) {
    let rows = weights.len();
    let cols = weights.iter().map(Vec::len).max().unwrap_or(0);
    let n = rows.max(cols);
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    let max_w = weights
        .iter()
        .flatten()
        .copied()
        .fold(0.0f64, f64::max);
    let cost = |i: usize, j: usize| -> f64 {
        let w = weights
            .get(i)
            .and_then(|r| r.get(j))
            .copied()
            .unwrap_or(0.0);
        max_w - w
    };

    // 1-based arrays; column 0 is a sentinel.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![None; rows];
    let mut total = 0.0;
    for j in 1..=n {
        let i = owner[j];
        if i == 0 || i > rows || j > weights[i - 1].len() {
            continue;
        }
        assignment[i - 1] = Some(j - 1);
        total += weights[i - 1][j - 1];
    }
    (assignment, total)
}
