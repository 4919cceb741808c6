//! Combinatorial degree bounds for the critical-point systems.
//!
//! For matrix size `m`, target rank `r`, and `n` pencil variables, the
//! number of critical points computed per row choice is bounded by a
//! multihomogeneous Bezout count `theta(m, n, r)` over the three variable
//! blocks (`x`, kernel block `y`, multipliers `z`). The module also
//! provides the per-level aggregate (all row choices) and the total over
//! the recursion levels, plus a coarse single-block cube bound.

/// Binomial coefficient with the usual zero convention outside the range.
pub fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || k > n || n < 0 {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of kept product entries for size `m` and rank `r`:
/// `(m - r)(m + r + 1) / 2`.
pub fn kept_entries(m: usize, r: usize) -> usize {
    (m - r) * (m + r + 1) / 2
}

/// Multihomogeneous bound on the number of critical points per row
/// choice. Zero means the critical locus is generically empty.
pub fn theta(m: usize, n: usize, r: usize) -> u128 {
    assert!(r < m, "rank target must be below the matrix size");
    let p = kept_entries(m, r) as i64;
    let n = n as i64;
    let ry = (r * (m - r)) as i64;
    let corank_block = ((m - r) * (m - r + 1) / 2) as i64;
    let lo = 0.max(n - p);
    let hi = (n - corank_block).min(ry);
    let mut total: u128 = 0;
    for k in lo..=hi {
        total += binomial(p, n - k) * binomial(n - 1, k + p - 1 - ry) * binomial(ry, k);
    }
    total
}

/// Same count read off an explicit product of three binomial expansions;
/// independent implementation used to cross-check [`theta`].
pub fn theta_by_series(m: usize, n: usize, r: usize) -> u128 {
    use std::collections::BTreeMap;
    assert!(r < m);
    let p = kept_entries(m, r);
    let ry = r * (m - r);
    type Series = BTreeMap<(u32, u32, u32), u128>;
    // (ex, ey, ez) exponent triples of s_x, s_y, s_z
    let power = |a: (u32, u32, u32), b: (u32, u32, u32), e: usize| -> Series {
        let mut acc: Series = BTreeMap::new();
        acc.insert((0, 0, 0), 1);
        for _ in 0..e {
            let mut next: Series = BTreeMap::new();
            for (&(x, y, z), &c) in &acc {
                *next.entry((x + a.0, y + a.1, z + a.2)).or_insert(0) += c;
                *next.entry((x + b.0, y + b.1, z + b.2)).or_insert(0) += c;
            }
            acc = next;
        }
        acc
    };
    let mul = |lhs: &Series, rhs: &Series| -> Series {
        let mut out: Series = BTreeMap::new();
        for (&(x1, y1, z1), &c1) in lhs {
            for (&(x2, y2, z2), &c2) in rhs {
                *out.entry((x1 + x2, y1 + y2, z1 + z2)).or_insert(0) += c1 * c2;
            }
        }
        out
    };
    let fx = power((1, 0, 0), (0, 1, 0), p); // (s_x + s_y)^p
    let fy = power((0, 1, 0), (0, 0, 1), n.saturating_sub(1)); // (s_y + s_z)^(n-1)
    let fz = power((1, 0, 0), (0, 0, 1), ry); // (s_x + s_z)^(r(m-r))
    let product = mul(&mul(&fx, &fy), &fz);
    if n == 0 {
        return 0;
    }
    product
        .get(&(n as u32, ry as u32, (p - 1) as u32))
        .copied()
        .unwrap_or(0)
}

/// Bound for one full level: every row choice contributes at most `theta`.
pub fn level_bound(m: usize, n: usize, r: usize) -> u128 {
    binomial(m as i64, r as i64) * theta(m, n, r)
}

/// Bound on the summed output degree over all recursion levels.
pub fn total_bound(m: usize, n: usize, r: usize) -> u128 {
    (1..=n).map(|k| level_bound(m, k, r)).sum()
}

/// Coarse single-block bound: cube of one binomial coefficient.
pub fn cube_bound(m: usize, n: usize, r: usize) -> u128 {
    let p = kept_entries(m, r) as i64;
    binomial(p + n as i64, n as i64).pow(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(5, 5), 1);
        assert_eq!(binomial(5, 6), 0);
        assert_eq!(binomial(5, -1), 0);
        assert_eq!(binomial(52, 26), 495_918_532_948_104);
    }

    #[test]
    fn theta_spot_values() {
        assert_eq!(theta(3, 2, 2), 9);
        assert_eq!(theta(3, 3, 2), 16);
        assert_eq!(theta(3, 6, 2), 0);
        assert_eq!(theta(4, 5, 2), 896);
        assert_eq!(theta(4, 3, 3), 52);
        assert_eq!(theta(5, 7, 2), 10296);
        assert_eq!(theta(5, 5, 2), 0);
        assert_eq!(theta(6, 6, 3), 5005);
        assert_eq!(theta(6, 2, 4), 0);
        assert_eq!(theta(6, 3, 5), 230);
    }

    #[test]
    fn theta_agrees_with_series_oracle() {
        for m in 2..=5 {
            for r in 0..m {
                for n in 1..=6 {
                    assert_eq!(
                        theta(m, n, r),
                        theta_by_series(m, n, r),
                        "disagreement at m={m} n={n} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn aggregate_bounds() {
        assert_eq!(level_bound(3, 2, 2), 27);
        assert_eq!(total_bound(3, 2, 2), 27 + 3 * theta(3, 1, 2));
        assert!(cube_bound(3, 2, 2) >= theta(3, 2, 2));
    }
}
