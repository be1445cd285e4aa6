/// Exact k-item knapsack: the most valuable choice of exactly `count` items
/// whose weights sum to at most `capacity`.
///
/// Returns the value and the chosen indices (ascending), or `None` if no
/// choice of `count` items fits. Among optimal choices the one with the
/// smallest sorted index sequence is returned. The table has
/// `(items + 1) * (count + 1) * (capacity' + 1)` cells where `capacity'` is
/// `capacity` clipped to the total weight.
pub fn knapsack_exact_k(items: &[(u64, u64)], count: usize, capacity: u64) -> Option<(u64, Vec<usize>)> {
    let n = items.len();
    if count > n {
        return None;
    }
    let total_weight: u64 = items.iter().map(|&(w, _)| w).sum();
    let cap = capacity.min(total_weight) as usize;
    let width = cap + 1;
    let layer = (count + 1) * width;
    let at = |i: usize, j: usize, w: usize| i * layer + j * width + w;

    // best[i][j][w]: max value from items i.. choosing exactly j with weight <= w.
    let mut best: Vec<Option<u64>> = vec![None; (n + 1) * layer];
    for w in 0..width {
        best[at(n, 0, w)] = Some(0);
    }
    for i in (0..n).rev() {
        let (wi, vi) = items[i];
        for j in 0..=count {
            for w in 0..width {
                let skip = best[at(i + 1, j, w)];
                let take = if j > 0 && wi <= w as u64 {
                    best[at(i + 1, j - 1, w - wi as usize)].map(|v| v + vi)
                } else {
                    None
                };
                best[at(i, j, w)] = skip.max(take);
            }
        }
    }

    let value = best[at(0, count, cap)]?;
    let mut chosen = Vec::with_capacity(count);
    let (mut j, mut w) = (count, cap);
    for (i, &(wi, vi)) in items.iter().enumerate() {
        if j == 0 {
            break;
        }
        let target = best[at(i, j, w)];
        if wi <= w as u64 && best[at(i + 1, j - 1, w - wi as usize)].map(|v| v + vi) == target {
            chosen.push(i);
            j -= 1;
            w -= wi as usize;
        }
    }
    Some((value, chosen))
}
