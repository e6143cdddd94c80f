//! Exact arithmetic in GF(p^k).
//!
//! Elements are packed base-p integers: the residue polynomial
//! `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` is stored as `sum c_i p^i`, so the
//! field is the integer range `0..q` and per-element tables are flat vectors.
//! For `k = 1` this is the least nonnegative residue mod p.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the field order; keeps every product of two encoded
/// elements inside a `u64`.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 31;

/// A field element in canonical packed encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Trial-division primality test; fine for the orders this crate handles.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Returns `(p, k)` when `n = p^k` for a prime `p` and `k >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 0;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            p = d;
            break;
        }
        d += 1;
    }
    if p == 0 {
        return Some((n, 1));
    }
    let (mut m, mut k) = (n, 0u32);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// A constructed finite field GF(p^k) with its quadratic character table.
///
/// Immutable after construction; every method is a pure read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    /// Monic irreducible modulus, constant term first, length `k + 1`.
    modulus: Vec<u32>,
    /// `p^i` for `i in 0..k`.
    place: Vec<u32>,
    chi: Vec<i8>,
    squares: Vec<Elem>,
}

impl Field {
    /// Builds GF(p^k) with the default order cap.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        Self::with_max_order(p, k, DEFAULT_MAX_ORDER)
    }

    /// Builds GF(q) for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, k)
    }

    pub fn with_max_order(p: u64, k: u32, max_order: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::DegreeZero);
        }
        let cap = max_order.min(DEFAULT_MAX_ORDER);
        let overflow = Error::Overflow { p, k, max: cap };
        let q = p.checked_pow(k).ok_or(overflow.clone())?;
        if q > cap {
            return Err(overflow);
        }
        let (p, q) = (p as u32, q as u32);
        let modulus = smallest_irreducible(p, k as usize);
        let place = (0..k).map(|i| p.pow(i)).collect();
        let mut field = Field {
            p,
            k,
            q,
            modulus,
            place,
            chi: Vec::new(),
            squares: Vec::new(),
        };
        field.fill_character_table();
        Ok(field)
    }

    fn fill_character_table(&mut self) {
        let mut chi = vec![-1i8; self.q as usize];
        chi[0] = 0;
        let mut is_square = vec![false; self.q as usize];
        for x in 1..self.q {
            let x = Elem(x);
            is_square[self.mul(x, x).index()] = true;
        }
        let mut squares = Vec::with_capacity(self.q as usize / 2);
        for (x, &sq) in is_square.iter().enumerate().skip(1) {
            if sq {
                chi[x] = 1;
                squares.push(Elem(x as u32));
            }
        }
        self.chi = chi;
        self.squares = squares;
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first. For `k = 1` this is the
    /// unused placeholder `x`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Nonzero squares in increasing canonical order.
    pub fn squares(&self) -> &[Elem] {
        &self.squares
    }

    /// The full character table indexed by canonical encoding.
    pub fn char_table(&self) -> &[i8] {
        &self.chi
    }

    /// `Some(t)` with `q = 4t + 1` when the order is 1 mod 4.
    pub fn paley_t(&self) -> Option<u32> {
        (self.q % 4 == 1).then_some(self.q / 4)
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Elem> + ExactSizeIterator + Clone {
        (0..self.q).map(Elem)
    }

    pub fn element(&self, value: u64) -> Result<Elem> {
        if value < self.q as u64 {
            Ok(Elem(value as u32))
        } else {
            Err(Error::NotCanonical { value, q: self.q })
        }
    }

    /// Packs coefficients `c_0, ..., c_{k-1}` (missing ones are zero).
    pub fn encode(&self, coeffs: &[u32]) -> Elem {
        debug_assert!(coeffs.len() <= self.k as usize);
        let v = coeffs
            .iter()
            .zip(&self.place)
            .map(|(&c, &pl)| (c % self.p) * pl)
            .sum();
        Elem(v)
    }

    pub fn decode(&self, x: Elem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.k)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return Elem((s % self.p as u64) as u32);
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0);
        for &pl in &self.place {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * pl;
            x /= self.p;
            y /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            return Elem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let (mut x, mut out) = (a.0, 0);
        for &pl in &self.place {
            let d = x % self.p;
            out += if d == 0 { 0 } else { (self.p - d) * pl };
            x /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            let s = a.0 as u64 + self.p as u64 - b.0 as u64;
            return Elem((s % self.p as u64) as u32);
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0);
        for &pl in &self.place {
            let d = (x % self.p + self.p - y % self.p) % self.p;
            out += d * pl;
            x /= self.p;
            y /= self.p;
        }
        Elem(out)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return Elem((a.0 as u64 * b.0 as u64 % self.p as u64) as u32);
        }
        let k = self.k as usize;
        let p = self.p as u64;
        let (ca, cb) = (self.decode(a), self.decode(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let coeffs: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.encode(&coeffs)
    }

    pub fn pow(&self, base: Elem, mut exp: u64) -> Elem {
        let mut acc = Elem::ONE;
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    /// Quadratic character from the precomputed table.
    #[inline]
    pub fn chi(&self, x: Elem) -> i8 {
        self.chi[x.index()]
    }

    #[inline]
    pub fn is_square(&self, x: Elem) -> bool {
        self.chi[x.index()] == 1
    }

    /// Quadratic character by Euler's criterion, `x^((q-1)/2)`.
    pub fn euler_character(&self, x: Elem) -> i8 {
        if x.0 == 0 {
            return 0;
        }
        match self.pow(x, (self.q as u64 - 1) / 2) {
            Elem::ONE => 1,
            _ => -1,
        }
    }

    /// Smallest nonsquare in canonical order (`None` only in characteristic 2).
    pub fn smallest_nonsquare(&self) -> Option<Elem> {
        self.elements().find(|&x| self.chi(x) == -1)
    }

    /// Absolute trace to the prime field, `x + x^p + ... + x^{p^{k-1}}`.
    pub fn trace(&self, x: Elem) -> u32 {
        if self.k == 1 {
            return x.0;
        }
        let mut acc = Elem::ZERO;
        let mut frob = x;
        for _ in 0..self.k {
            acc = self.add(acc, frob);
            frob = self.pow(frob, self.p as u64);
        }
        debug_assert!(acc.0 < self.p, "trace left the prime field");
        acc.0
    }
}

/// Lexicographically smallest monic irreducible of degree `k` over GF(p),
/// comparing coefficients from the constant term upward.
fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let mut coeffs = vec![0u32; k];
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // c_0 is the most significant position in this ordering
        let mut i = k;
        loop {
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            assert!(i > 0, "no irreducible polynomial of degree {k} over GF({p})");
        }
    }
}

/// Irreducibility by trial division with every monic polynomial of degree
/// up to `deg f / 2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if f[0] == 0 {
        return false;
    }
    for d in 1..=n / 2 {
        let mut g = vec![0u32; d + 1];
        g[d] = 1;
        loop {
            if poly_rem_is_zero(f, &g, p) {
                return false;
            }
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                g[i] += 1;
                if g[i] < p {
                    break;
                }
                g[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    true
}

fn poly_rem_is_zero(f: &[u32], g: &[u32], p: u32) -> bool {
    let p = p as u64;
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let d = g.len() - 1;
    for top in (d..r.len()).rev() {
        let c = r[top] % p;
        if c == 0 {
            continue;
        }
        for (i, &gc) in g.iter().enumerate() {
            let idx = top - d + i;
            r[idx] = (r[idx] + (p - c) * gc as u64) % p;
        }
    }
    r[..d].iter().all(|&c| c % p == 0)
}
