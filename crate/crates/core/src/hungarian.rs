//! Dense O(n^3) assignment solver over `f64` costs.
//!
//! Shortest augmenting path form of the Hungarian method with row/column
//! potentials. After the optimum is found, the tight-edge subgraph (reduced
//! cost within a small tolerance of zero) holds every optimal assignment; a
//! greedy pass over it picks the lexicographically smallest one, so ties are
//! resolved the same way on every run.

/// Returns `row_to_col` minimizing `sum costs[i][row_to_col[i]]`.
///
/// `costs` must be square. Among optimal assignments the lexicographically
/// smallest column vector is returned.
pub fn min_cost_assignment(costs: &[Vec<f64>]) -> Vec<usize> {
    let n = costs.len();
    if n == 0 {
        return Vec::new();
    }
    debug_assert!(costs.iter().all(|row| row.len() == n));

    // 1-based indexing, column 0 is the virtual source.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![f64::INFINITY; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|m| *m = f64::INFINITY);
        used.iter_mut().for_each(|u| *u = false);
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = costs[i0 - 1][j - 1] - u[i0] - v[j];
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
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut col_of_row = vec![0usize; n];
    let mut row_of_col = vec![0usize; n];
    for j in 1..=n {
        col_of_row[p[j] - 1] = j - 1;
        row_of_col[j - 1] = p[j] - 1;
    }

    let scale = costs
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |acc, c| acc.max(c.abs()));
    let tol = 1e-10 * (1.0 + scale);
    let tight: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| costs[i][j] - u[i + 1] - v[j + 1] <= tol)
                .collect()
        })
        .collect();

    lexicographic_refine(&tight, &mut col_of_row, &mut row_of_col);
    col_of_row
}

/// Maximizing counterpart of [`min_cost_assignment`].
pub fn max_weight_assignment(weights: &[Vec<f64>]) -> Vec<usize> {
    let negated: Vec<Vec<f64>> = weights
        .iter()
        .map(|row| row.iter().map(|w| -w).collect())
        .collect();
    min_cost_assignment(&negated)
}

/// Turns a perfect matching of the tight graph into the lexicographically
/// smallest one by fixing rows in order, each to the smallest column that
/// still admits a perfect matching of the remaining rows.
fn lexicographic_refine(tight: &[Vec<usize>], col_of_row: &mut [usize], row_of_col: &mut [usize]) {
    let n = tight.len();
    let mut fixed_col = vec![false; n];
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = Vec::with_capacity(n);

    for i in 0..n {
        for &j in &tight[i] {
            if fixed_col[j] {
                continue;
            }
            if col_of_row[i] == j {
                fixed_col[j] = true;
                break;
            }
            // Row i takes column j; row r (the current owner of j) must reach
            // the column i gives up through an alternating path.
            let r = row_of_col[j];
            let target = col_of_row[i];
            seen.iter_mut().for_each(|s| *s = false);
            queue.clear();
            queue.push(r);
            let mut head = 0;
            let mut found = false;
            'search: while head < queue.len() {
                let x = queue[head];
                head += 1;
                for &c in &tight[x] {
                    if c == j || fixed_col[c] || seen[c] {
                        continue;
                    }
                    seen[c] = true;
                    parent[c] = x;
                    if c == target {
                        found = true;
                        break 'search;
                    }
                    queue.push(row_of_col[c]);
                }
            }
            if !found {
                continue;
            }
            let mut c = target;
            loop {
                let x = parent[c];
                let previous = col_of_row[x];
                col_of_row[x] = c;
                row_of_col[c] = x;
                if x == r {
                    break;
                }
                c = previous;
            }
            col_of_row[i] = j;
            row_of_col[j] = i;
            fixed_col[j] = true;
            break;
        }
    }
}
