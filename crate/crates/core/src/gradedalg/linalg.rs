use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Sparse row, sorted by column, no stored zeros.
pub type SparseRow = Vec<(usize, BigRational)>;

/// `a - c * b` for sorted sparse rows.
fn axpy(a: &SparseRow, c: &BigRational, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact rank of a matrix given by sparse rows.
pub fn rank(rows: Vec<SparseRow>) -> usize {
    let mut rows: Vec<SparseRow> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    // Short rows first keeps fill-in small.
    rows.sort_by_key(|r| r.len());
    let mut pivots: HashMap<usize, SparseRow> = HashMap::new();
    for mut row in rows {
        while let Some((col, lead)) = row.first().cloned() {
            match pivots.get(&col) {
                Some(p) => row = axpy(&row, &lead, p),
                None => {
                    let inv = BigRational::one() / lead;
                    let normalized = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
                    pivots.insert(col, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(v: &[(usize, i64)]) -> SparseRow {
        v.iter().map(|&(c, x)| (c, BigRational::from_integer(BigInt::from(x)))).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(vec![]), 0);
        assert_eq!(rank(vec![r(&[(0, 1), (1, 2)]), r(&[(0, 2), (1, 4)])]), 1);
        assert_eq!(rank(vec![r(&[(0, 1), (1, 1)]), r(&[(1, 1), (2, 1)]), r(&[(0, 1), (2, -1)])]), 2);
        assert_eq!(rank(vec![r(&[(0, 1)]), r(&[(1, 3)]), r(&[(2, -7)])]), 3);
    }
}
