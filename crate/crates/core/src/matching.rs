//! Perfect matchings in bipartite graphs by augmenting paths (Kuhn's
//! algorithm).
//!
//! Rows are matched in ascending order and each search tries columns in
//! ascending order, so the matching returned for a given graph is always the
//! same.

/// Finds a perfect matching of rows to columns, where `adj[r]` lists the
/// columns row `r` may take (sorted ascending for the deterministic order).
/// Returns `row_to_col`, or `None` if no perfect matching exists.
pub fn perfect_matching(adj: &[Vec<usize>], n_cols: usize) -> Option<Vec<usize>> {
    if adj.len() != n_cols {
        return None;
    }
    let mut col_to_row: Vec<Option<usize>> = vec![None; n_cols];
    let mut visited = vec![false; n_cols];
    for row in 0..adj.len() {
        visited.iter_mut().for_each(|v| *v = false);
        if !augment(row, adj, &mut col_to_row, &mut visited) {
            return None;
        }
    }
    let mut row_to_col = vec![usize::MAX; adj.len()];
    for (col, row) in col_to_row.iter().enumerate() {
        row_to_col[row.expect("every column matched")] = col;
    }
    Some(row_to_col)
}

fn augment(
    row: usize,
    adj: &[Vec<usize>],
    col_to_row: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &col in &adj[row] {
        if visited[col] {
            continue;
        }
        visited[col] = true;
        let free = match col_to_row[col] {
            None => true,
            Some(other) => augment(other, adj, col_to_row, visited),
        };
        if free {
            col_to_row[col] = Some(row);
            return true;
        }
    }
    false
}
