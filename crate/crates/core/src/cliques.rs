//! K4 counts on an edge, and the closed form for prime orders in terms of
//! the two-squares decomposition `p = m^2 + n^2`, n odd.

use crate::error::{Error, Result};
use crate::ff::{is_prime, isqrt, Elem};
use crate::paley::Paley;

/// `p = m^2 + n^2` with `m >= 0` even and `n > 0` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoSquares {
    pub p: u64,
    pub m: u64,
    pub n: u64,
}

pub fn sum_two_squares(p: u64) -> Result<TwoSquares> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::NotOneModFour(p));
    }
    (0..=isqrt(p))
        .step_by(2)
        .find_map(|m| {
            let rest = p - m * m;
            let n = isqrt(rest);
            (n * n == rest && n % 2 == 1).then_some(TwoSquares { p, m, n })
        })
        .ok_or(Error::NoDecomposition(p))
}

/// Number of K4 subgraphs containing the edge `ab`.
pub fn k4_on_edge(paley: &Paley, a: Elem, b: Elem) -> Result<u64> {
    if !paley.adjacent(a, b) {
        return Err(Error::NotAnEdge(a.value(), b.value()));
    }
    let common: Vec<Elem> = paley.neighbors(a).filter(|&x| paley.adjacent(x, b)).collect();
    let mut pairs = 0u64;
    for (i, &c) in common.iter().enumerate() {
        pairs += common[i + 1..].iter().filter(|&&d| paley.adjacent(c, d)).count() as u64;
    }
    Ok(pairs)
}

/// `((p-9)^2 - 4m^2) / 64` for a prime `p = 1 mod 4`.
pub fn k4_closed_form(p: u64) -> Result<u64> {
    let TwoSquares { m, .. } = sum_two_squares(p)?;
    let numerator = (p as i64 - 9).pow(2) - 4 * (m as i64).pow(2);
    if numerator % 64 != 0 || numerator < 0 {
        return Err(Error::NonIntegral {
            numerator,
            denominator: 64,
        });
    }
    Ok(numerator as u64 / 64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompositions() {
        assert_eq!(sum_two_squares(13).unwrap(), TwoSquares { p: 13, m: 2, n: 3 });
        assert_eq!(sum_two_squares(29).unwrap(), TwoSquares { p: 29, m: 2, n: 5 });
        assert_eq!(sum_two_squares(17).unwrap(), TwoSquares { p: 17, m: 4, n: 1 });
        assert_eq!(sum_two_squares(5).unwrap(), TwoSquares { p: 5, m: 2, n: 1 });
        assert_eq!(sum_two_squares(19), Err(Error::NotOneModFour(19)));
        assert_eq!(sum_two_squares(25), Err(Error::NotPrime(25)));
    }

    #[test]
    fn decomposition_is_unique() {
        for p in (5..2000u64).filter(|&p| is_prime(p) && p % 4 == 1) {
            let found: Vec<_> = (0..=isqrt(p))
                .filter(|&m| {
                    let n = isqrt(p - m * m);
                    n * n == p - m * m && m <= n
                })
                .collect();
            assert_eq!(found.len(), 1, "p = {p}");
            let d = sum_two_squares(p).unwrap();
            assert_eq!(d.m * d.m + d.n * d.n, p);
        }
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(k4_closed_form(13).unwrap(), 0);
        assert_eq!(k4_closed_form(29).unwrap(), 6);
        assert_eq!(k4_closed_form(37).unwrap(), 10);
        assert_eq!(k4_closed_form(23), Err(Error::NotOneModFour(23)));
    }

    #[test]
    fn brute_force_edges() {
        let g = Paley::of_order(13).unwrap();
        assert_eq!(k4_on_edge(&g, Elem(0), Elem(1)).unwrap(), 0);
        assert_eq!(k4_on_edge(&g, Elem(0), Elem(2)), Err(Error::NotAnEdge(0, 2)));
        let g = Paley::of_order(29).unwrap();
        assert_eq!(k4_on_edge(&g, Elem(3), Elem(8)).unwrap(), 6);
        let g = Paley::of_order(17).unwrap();
        assert_eq!(k4_on_edge(&g, Elem(0), Elem(1)).unwrap(), 0);
        let g = Paley::of_order(37).unwrap();
        assert_eq!(k4_on_edge(&g, Elem(0), Elem(1)).unwrap(), 10);
    }
}
