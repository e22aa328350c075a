//! Size bounds above which the extractors must find a structure.
//!
//! Everything saturates at `u64::MAX`; the bounds grow like a tower and
//! overflow for modest `n`.

/// Out-degree that forces a fan: `n (n - 1)^(n - 3)`, with the exponent
/// clamped at zero so that `n <= 2` is total.
pub fn fan_degree(n: usize) -> u64 {
    let base = n.saturating_sub(1) as u64;
    let exp = n.saturating_sub(3) as u32;
    (n as u64).saturating_mul(saturating_pow(base, exp))
}

/// `sum_{i < n} degree^i`: the most vertices a strong digraph can have while
/// every BFS tree has depth below `n` and every out-degree is below `degree`.
pub fn geometric_bound(degree: u64, n: usize) -> u64 {
    let mut total: u64 = 0;
    let mut term: u64 = 1;
    for _ in 0..n {
        total = total.saturating_add(term);
        term = term.saturating_mul(degree);
    }
    total
}

/// Vertex count above which `dipath_or_fan(_, n)` never gives up.
pub fn n_weak(n: usize) -> u64 {
    geometric_bound(fan_degree(n), n)
}

/// Vertex count above which `unavoidable(_, n, k)` never gives up.
pub fn n_impl(n: usize, k: usize) -> u64 {
    n_weak(n.saturating_mul(k))
}

fn saturating_pow(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).unwrap_or(u64::MAX)
}
