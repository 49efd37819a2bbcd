//! Perfect-matching counts of bipartite graphs.
//!
//! The count is the permanent of the biadjacency matrix, evaluated with
//! Ryser's inclusion-exclusion formula over column subsets visited in Gray
//! code order. Arithmetic is wrapping `u128`: every intermediate value is
//! taken modulo `2^128`, and since the permanent of an `n x n` 0/1 matrix is at
//! most `n! < 2^128` for `n <= 34`, the reduced result is the exact count.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_h2n, BipartiteGraph};

pub const MAX_PERMANENT_ORDER: usize = 30;
pub const MAX_BRUTE_FORCE_ORDER: usize = 10;

/// Square 0/1 biadjacency matrix; `rows[i]` has bit `j` set iff `u_i ~ v_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biadjacency {
    order: usize,
    rows: Vec<u64>,
}

impl Biadjacency {
    pub fn from_graph(g: &BipartiteGraph) -> Result<Self> {
        if g.n_left() != g.n_right() {
            return Err(Error::InvalidParameter(format!(
                "biadjacency must be square, got {}x{}",
                g.n_left(),
                g.n_right()
            )));
        }
        Ok(Self { order: g.n_left(), rows: g.row_masks()? })
    }

    pub fn from_rows(order: usize, rows: Vec<u64>) -> Result<Self> {
        if rows.len() != order || order > 64 || rows.iter().any(|&r| order < 64 && r >> order != 0) {
            return Err(Error::InvalidParameter("malformed biadjacency rows".into()));
        }
        Ok(Self { order, rows })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }
}

/// Number of perfect matchings (the permanent), exact.
pub fn count_perfect_matchings(b: &Biadjacency) -> Result<u128> {
    let n = b.order;
    if n > MAX_PERMANENT_ORDER {
        return Err(Error::TooLarge(format!("permanent order {n} exceeds {MAX_PERMANENT_ORDER}")));
    }
    if n == 0 {
        return Ok(1);
    }
    // columns as row-index masks
    let cols: Vec<Vec<usize>> = (0..n).map(|j| (0..n).filter(|&i| b.get(i, j)).collect()).collect();
    let mut row_sums = vec![0u128; n];
    // sum over nonempty S of (-1)^{|S|} prod_i r_i(S); perm = (-1)^n * total
    let mut total = 0u128;
    let mut gray = 0u64;
    let mut size = 0usize;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let adding = gray >> j & 1 == 0;
        gray ^= 1 << j;
        if adding {
            size += 1;
            for &i in &cols[j] {
                row_sums[i] += 1;
            }
        } else {
            size -= 1;
            for &i in &cols[j] {
                row_sums[i] -= 1;
            }
        }
        let prod = row_sums.iter().try_fold(1u128, |p, &r| (r != 0).then(|| p.wrapping_mul(r)));
        if let Some(p) = prod {
            if size.is_multiple_of(2) {
                total = total.wrapping_add(p);
            } else {
                total = total.wrapping_sub(p);
            }
        }
    }
    Ok(if n.is_multiple_of(2) { total } else { total.wrapping_neg() })
}

/// Counts perfect matchings by extending partial matchings over `U` in index
/// order. Used as an independent check of the permanent.
pub fn count_perfect_matchings_bruteforce(g: &BipartiteGraph) -> Result<u128> {
    let n = g.n_left();
    if n > MAX_BRUTE_FORCE_ORDER || g.n_right() > MAX_BRUTE_FORCE_ORDER {
        return Err(Error::TooLarge(format!("brute-force matching count limited to {MAX_BRUTE_FORCE_ORDER} per part")));
    }
    if g.n_right() != n {
        return Ok(0);
    }
    fn extend(g: &BipartiteGraph, u: usize, used: &mut [bool]) -> u128 {
        if u == g.n_left() {
            return 1;
        }
        let mut count = 0;
        for &v in g.left_neighbors(u) {
            if !used[v] {
                used[v] = true;
                count += extend(g, u + 1, used);
                used[v] = false;
            }
        }
        count
    }
    Ok(extend(g, 0, &mut vec![false; n]))
}

pub fn perfect_matchings(g: &BipartiteGraph) -> Result<u128> {
    count_perfect_matchings(&Biadjacency::from_graph(g)?)
}

/// Homogeneous linear recurrence `a_k = c_1 a_{k-1} + ... + c_d a_{k-d}` with
/// rational coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recurrence {
    pub order: usize,
    /// `(numerator, denominator)` pairs, `c_1` first.
    pub coefficients: Vec<(i128, i128)>,
}

impl Recurrence {
    pub fn describe(&self) -> String {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, &(p, q))| {
                let c = if q == 1 { p.to_string() } else { format!("{p}/{q}") };
                format!("{c}*a(n-{})", k + 1)
            })
            .collect();
        format!("a(n) = {}", terms.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub n: usize,
    pub pm_count: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingProfile {
    pub rows: Vec<ProfileRow>,
    pub recurrence: Option<Recurrence>,
}

impl MatchingProfile {
    pub fn recurrence_report(&self) -> String {
        match &self.recurrence {
            Some(r) => format!("order {}: {}", r.order, r.describe()),
            None => "no homogeneous recurrence of order <= 3 fits".to_string(),
        }
    }

    /// CSV with columns `n,pm_count,recurrence_report`.
    pub fn to_csv(&self) -> String {
        let report = self.recurrence_report();
        let mut out = String::from("n,pm_count,recurrence_report\n");
        for row in &self.rows {
            out.push_str(&format!("{},{},\"{}\"\n", row.n, row.pm_count, report));
        }
        out
    }
}

type Q = Ratio<i128>;

// Gaussian elimination over the rationals; None if singular or overflowing.
fn solve(mut m: Vec<Vec<Q>>, mut rhs: Vec<Q>) -> Option<Vec<Q>> {
    let d = rhs.len();
    for col in 0..d {
        let piv = (col..d).find(|&r| m[r][col] != Q::from_integer(0))?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..d {
            if r != col && m[r][col] != Q::from_integer(0) {
                let f = m[r][col] / m[col][col];
                for c in col..d {
                    let t = m[col][c] * f;
                    m[r][c] -= t;
                }
                let t = rhs[col] * f;
                rhs[r] -= t;
            }
        }
    }
    Some((0..d).map(|i| rhs[i] / m[i][i]).collect())
}

/// Smallest-order homogeneous recurrence (order 1 to 3) that fits every term,
/// requiring at least two checks beyond the terms used to fit it.
pub fn find_recurrence(seq: &[u128]) -> Option<Recurrence> {
    let vals: Vec<i128> = seq.iter().map(|&x| i128::try_from(x).ok()).collect::<Option<_>>()?;
    for d in 1..=3 {
        if seq.len() < 2 * d + 2 {
            break;
        }
        let m: Vec<Vec<Q>> = (0..d)
            .map(|r| (0..d).map(|k| Q::from_integer(vals[d + r - 1 - k])).collect())
            .collect();
        let rhs: Vec<Q> = (0..d).map(|r| Q::from_integer(vals[d + r])).collect();
        let Some(c) = solve(m, rhs) else { continue };
        let fits = (d..vals.len()).all(|t| {
            let pred = (0..d).fold(Q::from_integer(0), |acc, k| acc + c[k] * Q::from_integer(vals[t - 1 - k]));
            pred == Q::from_integer(vals[t])
        });
        if fits {
            return Some(Recurrence {
                order: d,
                coefficients: c.iter().map(|q| (*q.numer(), *q.denom())).collect(),
            });
        }
    }
    None
}

/// `(n, pm(H_2n))` for `6 <= n <= n_max` plus any recurrence the data obeys.
pub fn h2n_matching_profile(n_max: usize) -> Result<MatchingProfile> {
    if !(6..=20).contains(&n_max) {
        return Err(Error::InvalidParameter(format!("profile needs 6 <= n_max <= 20, got {n_max}")));
    }
    let rows = (6..=n_max)
        .map(|n| Ok(ProfileRow { n, pm_count: perfect_matchings(&build_h2n(n)?)? }))
        .collect::<Result<Vec<_>>>()?;
    let counts: Vec<u128> = rows.iter().map(|r| r.pm_count).collect();
    Ok(MatchingProfile { recurrence: find_recurrence(&counts), rows })
}
