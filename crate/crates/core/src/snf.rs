//! Exact integer Smith normal form for sparse relation matrices, and rank
//! over GF(p).
//!
//! Relation rows are first folded into an integer row echelon form one at a
//! time (so the full relation matrix never has to be materialized), then the
//! square-ish echelon matrix is diagonalized.

use crate::error::{Error, Result};

/// Sparse integer row: `(column, coefficient)` pairs; repeated columns add up.
pub type SparseRow = Vec<(usize, i64)>;

fn overflow() -> Error {
    Error::Inconsistent("integer overflow during Smith normal form".into())
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
        (old_t, t) = (t, old_t - quot * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// `dst = x * dst + y * src`, checked.
fn combine(dst: &mut [i128], x: i128, src: &[i128], y: i128) -> Result<()> {
    for (d, &s) in dst.iter_mut().zip(src) {
        let a = d.checked_mul(x).ok_or_else(overflow)?;
        let b = s.checked_mul(y).ok_or_else(overflow)?;
        *d = a.checked_add(b).ok_or_else(overflow)?;
    }
    Ok(())
}

/// Integer row echelon form built incrementally; `rows[c]`, when present, has
/// its leading (positive) entry in column `c`.
#[derive(Debug, Clone)]
pub struct IntegerEchelon {
    cols: usize,
    rows: Vec<Option<Vec<i128>>>,
}

impl IntegerEchelon {
    pub fn new(cols: usize) -> Self {
        IntegerEchelon {
            cols,
            rows: vec![None; cols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    pub fn insert_sparse(&mut self, row: &SparseRow) -> Result<()> {
        let mut dense = vec![0i128; self.cols];
        for &(c, v) in row {
            dense[c] += v as i128;
        }
        self.insert(dense)
    }

    pub fn insert(&mut self, mut row: Vec<i128>) -> Result<()> {
        debug_assert_eq!(row.len(), self.cols);
        for c in 0..self.cols {
            if row[c] == 0 {
                continue;
            }
            let Some(mut piv) = self.rows[c].take() else {
                if row[c] < 0 {
                    row.iter_mut().for_each(|v| *v = -*v);
                }
                self.reduce_tail(&mut row, c)?;
                self.rows[c] = Some(row);
                return Ok(());
            };
            let (a, b) = (piv[c], row[c]);
            if b % a == 0 {
                combine(&mut row, 1, &piv, -(b / a))?;
            } else {
                // unimodular 2x2 step: pivot becomes gcd, incoming entry 0
                let (g, s, t) = ext_gcd(a, b);
                let mut new_piv = piv.clone();
                combine(&mut new_piv, s, &row, t)?;
                combine(&mut row, -(a / g), &piv, b / g)?;
                piv = new_piv;
                self.reduce_tail(&mut piv, c)?;
            }
            self.rows[c] = Some(piv);
        }
        Ok(())
    }

    /// Reduces entries right of `lead` modulo the pivots below them.
    fn reduce_tail(&self, row: &mut [i128], lead: usize) -> Result<()> {
        for c in lead + 1..self.cols {
            if row[c] == 0 {
                continue;
            }
            if let Some(piv) = &self.rows[c] {
                let f = row[c].div_euclid(piv[c]);
                if f != 0 {
                    combine(row, 1, piv, -f)?;
                }
            }
        }
        Ok(())
    }

    pub fn into_rows(self) -> Vec<Vec<i128>> {
        self.rows.into_iter().flatten().collect()
    }
}

/// Diagonal of the Smith normal form of a dense integer matrix with `cols`
/// columns, normalized so that `d_1 | d_2 | ...`; zero rows contribute
/// nothing and the result has `min(rows, cols)` entries at most.
pub fn smith_diagonal(mut a: Vec<Vec<i128>>, cols: usize) -> Result<Vec<i128>> {
    let rows = a.len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero magnitude in the trailing block
            let mut best: Option<(usize, usize, i128)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &v) in row.iter().enumerate().skip(t) {
                    if v != 0 && best.is_none_or(|(_, _, m)| v.abs() < m) {
                        best = Some((i, j, v.abs()));
                    }
                }
            }
            let Some((bi, bj, _)) = best else {
                return Ok(diag);
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let piv = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let f = a[i][t] / piv;
                if f != 0 {
                    let (head, tail) = a.split_at_mut(i);
                    combine(&mut tail[0], 1, &head[t], -f)?;
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let f = a[t][j] / piv;
                if f != 0 {
                    for row in a.iter_mut().skip(t) {
                        let v = row[t].checked_mul(f).ok_or_else(overflow)?;
                        row[j] = row[j].checked_sub(v).ok_or_else(overflow)?;
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let offending = (t + 1..rows).find(|&i| a[i][t + 1..].iter().any(|&v| v % piv != 0));
            match offending {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    combine(&mut head[t], 1, &tail[0], 1)?;
                }
                None => {
                    diag.push(piv.abs());
                    break;
                }
            }
        }
    }
    Ok(diag)
}

/// Invariant factors of `Z^cols / <rows>`: non-unit diagonal entries in
/// divisibility order, then one 0 per free factor.
pub fn invariant_factors(rows: &[SparseRow], cols: usize) -> Result<Vec<u64>> {
    let mut ech = IntegerEchelon::new(cols);
    for r in rows {
        ech.insert_sparse(r)?;
    }
    let diag = smith_diagonal(ech.into_rows(), cols)?;
    let free = cols - diag.len();
    let mut out: Vec<u64> = diag.into_iter().filter(|&d| d != 1).map(|d| d as u64).collect();
    out.extend(std::iter::repeat_n(0, free));
    Ok(out)
}

/// Rank of the row set over GF(p).
pub fn rank_mod_p(rows: &[SparseRow], cols: usize, p: u64) -> usize {
    let mut pivots: Vec<Option<Vec<u64>>> = vec![None; cols];
    let mut rank = 0;
    let inv = |x: u64| -> u64 {
        let (mut acc, mut b, mut e) = (1u64, x % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    for sparse in rows {
        let mut row = vec![0u64; cols];
        for &(c, v) in sparse {
            row[c] = (row[c] + v.rem_euclid(p as i64) as u64) % p;
        }
        for c in 0..cols {
            if row[c] == 0 {
                continue;
            }
            match &pivots[c] {
                Some(piv) => {
                    let f = row[c];
                    for (x, &y) in row.iter_mut().zip(piv).skip(c) {
                        *x = (*x + (p - f) * y) % p;
                    }
                }
                None => {
                    let s = inv(row[c]);
                    row.iter_mut().for_each(|x| *x = *x * s % p);
                    pivots[c] = Some(row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[i64]]) -> Vec<SparseRow> {
        rows.iter()
            .map(|r| r.iter().copied().enumerate().filter(|&(_, v)| v != 0).collect())
            .collect()
    }

    #[test]
    fn textbook_examples() {
        // diag(2, 6) after mixing
        let rows = dense(&[&[2, 4], &[6, 6]]);
        assert_eq!(invariant_factors(&rows, 2).unwrap(), vec![2, 6]);
        // Z^3 / <(1,1,0),(0,2,0)> = Z/2 + Z
        let rows = dense(&[&[1, 1, 0], &[0, 2, 0]]);
        assert_eq!(invariant_factors(&rows, 3).unwrap(), vec![2, 0]);
        // diag(2, 3) is Z/6
        let rows = dense(&[&[2, 0], &[0, 3]]);
        assert_eq!(invariant_factors(&rows, 2).unwrap(), vec![6]);
        assert_eq!(invariant_factors(&[], 2).unwrap(), vec![0, 0]);
    }

    #[test]
    fn gf_p_rank() {
        let rows = dense(&[&[1, 1, 0], &[0, 3, 0], &[2, 2, 0]]);
        assert_eq!(rank_mod_p(&rows, 3, 3), 1);
        assert_eq!(rank_mod_p(&rows, 3, 5), 2);
    }

    #[test]
    fn ext_gcd_signs() {
        for (a, b) in [(12, -18), (-7, 3), (5, 0), (0, -4)] {
            let (g, s, t) = ext_gcd(a, b);
            assert!(g >= 0);
            assert_eq!(s * a + t * b, g);
        }
    }
}
