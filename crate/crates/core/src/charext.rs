//! Partial additive characters on the nonzero squares together with zero.
//!
//! A partial character assigns every `a` in `D = F_q*^2 ∪ {0}` a value
//! `ψ(a) = ζ_p^e(a)`, kept in exponent form `e(a) mod p`, subject to
//! `ψ(0) = 1` and `ψ(a)ψ(b) = ψ(c)ψ(d)` whenever `a + b = c + d`. For
//! q > 5 every such ψ is the restriction of an additive character
//! `x ↦ ζ_p^Tr(tx)`; [`extend_psi`] rebuilds that character and identifies
//! `t`, and [`relation_snf`] computes the abelian group presented by the
//! constraints so the statement can be checked for ℂ*-valued ψ as well.

use std::collections::BTreeMap;
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::paley::Paley;
use crate::snf::{self, SparseRow};

/// Above this order the all-pairs checks in [`extend_psi`] are replaced by
/// complete but cheaper ones.
pub const EXHAUSTIVE_LIMIT: u32 = 289;

const NOT_IN_DOMAIN: u32 = u32::MAX;

/// The domain `D`: zero followed by the nonzero squares, ascending.
pub fn domain(field: &Field) -> Vec<Elem> {
    std::iter::once(Elem::ZERO)
        .chain(field.squares().iter().copied())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialCharacter<'f> {
    field: &'f Field,
    /// Dense by canonical encoding; `NOT_IN_DOMAIN` off `D`.
    exponents: Vec<u32>,
}

impl<'f> PartialCharacter<'f> {
    /// Builds ψ from exponents keyed by exactly the elements of `D`.
    pub fn from_map(field: &'f Field, map: &BTreeMap<Elem, u32>) -> Result<Self> {
        let mut exponents = vec![NOT_IN_DOMAIN; field.q() as usize];
        let dom = domain(field);
        if map.len() != dom.len() {
            return Err(Error::DomainMismatch);
        }
        for a in dom {
            let e = map.get(&a).ok_or(Error::DomainMismatch)?;
            exponents[a.index()] = e % field.p();
        }
        Ok(PartialCharacter { field, exponents })
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn exponent(&self, a: Elem) -> Option<u32> {
        let e = *self.exponents.get(a.index())?;
        (e != NOT_IN_DOMAIN).then_some(e)
    }

    pub fn set_exponent(&mut self, a: Elem, e: u32) -> Result<()> {
        match self.exponents.get_mut(a.index()) {
            Some(slot) if *slot != NOT_IN_DOMAIN => {
                *slot = e % self.field.p();
                Ok(())
            }
            _ => Err(Error::DomainMismatch),
        }
    }

    pub fn to_map(&self) -> BTreeMap<Elem, u32> {
        domain(self.field)
            .into_iter()
            .map(|a| (a, self.exponents[a.index()]))
            .collect()
    }

    #[inline]
    fn e(&self, a: Elem) -> u32 {
        self.exponents[a.index()]
    }
}

/// `a ↦ Tr(t a) mod p` on `D`.
pub fn restrict_additive_character(field: &Field, t: Elem) -> PartialCharacter<'_> {
    let mut exponents = vec![NOT_IN_DOMAIN; field.q() as usize];
    for a in domain(field) {
        exponents[a.index()] = field.trace(field.mul(t, a));
    }
    PartialCharacter { field, exponents }
}

/// A failure of the defining conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// `ψ(0) != 1`
    ZeroNotTrivial { exponent: u32 },
    /// `a + b = c + d` but `ψ(a)ψ(b) != ψ(c)ψ(d)`
    Quadruple { a: Elem, b: Elem, c: Elem, d: Elem },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroNotTrivial { exponent } => write!(f, "psi(0) has exponent {exponent}"),
            Violation::Quadruple { a, b, c, d } => {
                write!(f, "{a} + {b} = {c} + {d} but psi({a})psi({b}) != psi({c})psi({d})")
            }
        }
    }
}

/// Checks both conditions over every quadruple in `D^4`.
///
/// Pairs are grouped by their sum; the conditions hold iff the exponent sum
/// is constant on every sum class.
pub fn check_conditions(psi: &PartialCharacter<'_>) -> std::result::Result<(), Violation> {
    let f = psi.field;
    let p = f.p();
    if psi.e(Elem::ZERO) != 0 {
        return Err(Violation::ZeroNotTrivial {
            exponent: psi.e(Elem::ZERO),
        });
    }
    let dom = domain(f);
    // representative pair per sum class, packed as (a, b, exponent sum)
    let mut class: Vec<Option<(Elem, Elem, u32)>> = vec![None; f.q() as usize];
    for (i, &a) in dom.iter().enumerate() {
        let ea = psi.e(a);
        for &b in &dom[i..] {
            let sum = f.add(a, b);
            let e = (ea + psi.e(b)) % p;
            match class[sum.index()] {
                None => class[sum.index()] = Some((a, b, e)),
                Some((c, d, e0)) if e0 != e => return Err(Violation::Quadruple { a, b, c, d }),
                Some(_) => {}
            }
        }
    }
    Ok(())
}

/// Smallest `c` with `c`, `a - c` and `b + c` all nonzero squares, i.e. a
/// common neighbor of `0`, `a` and `-b`.
pub fn find_c(paley: &Paley, a: Elem, b: Elem) -> Result<Elem> {
    let f = paley.field();
    f.squares()
        .iter()
        .copied()
        .find(|&c| f.is_square(f.sub(a, c)) && f.is_square(f.add(b, c)))
        .ok_or(Error::NotFound {
            a: a.value(),
            b: b.value(),
        })
}

/// Counts pairs `(a, b)` of nonzero elements without a valid `c`.
///
/// Scaling by a nonzero square maps valid `c` for `(a, b)` to valid `c` for
/// `(sa, sb)`, so `a` ranges over `{1, e}` (e the smallest nonsquare) unless
/// `exhaustive` is set.
pub fn find_c_failures(paley: &Paley, exhaustive: bool) -> usize {
    let f = paley.field();
    let firsts: Vec<Elem> = if exhaustive {
        f.elements().skip(1).collect()
    } else {
        paley.canonical_bases().to_vec()
    };
    firsts
        .iter()
        .map(|&a| {
            f.elements()
                .skip(1)
                .filter(|&b| find_c(paley, a, b).is_err())
                .count()
        })
        .sum()
}

/// A full additive character in exponent form, with its `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub exponents: Vec<u32>,
    pub t: Elem,
}

impl Extension {
    pub fn exponent(&self, x: Elem) -> u32 {
        self.exponents[x.index()]
    }
}

/// Extends ψ to all of F_q via `ψ̂(u + v) = ψ(u)ψ(v)` for nonzero squares
/// `u`, `v` (smallest `u` first), then checks the result is well defined,
/// additive, and equal to `x ↦ Tr(t x)` for some `t`.
pub fn extend_psi(psi: &PartialCharacter<'_>) -> Result<Extension> {
    check_conditions(psi).map_err(|v| Error::PreconditionViolated(v.to_string()))?;
    let f = psi.field;
    let p = f.p();
    let squares = f.squares();

    let mut ext = vec![0u32; f.q() as usize];
    for x in f.elements() {
        if let Some(e) = psi.exponent(x) {
            ext[x.index()] = e;
            continue;
        }
        let u = squares
            .iter()
            .copied()
            .find(|&u| f.is_square(f.sub(x, u)))
            .ok_or_else(|| Error::NotExtendable(format!("{x} is not a sum of two nonzero squares")))?;
        ext[x.index()] = (psi.e(u) + psi.e(f.sub(x, u))) % p;
    }

    // every representation x = u + v must agree
    let probes: Vec<Elem> = if f.q() <= EXHAUSTIVE_LIMIT {
        f.elements().collect()
    } else {
        let mut rng = StdRng::seed_from_u64(f.q() as u64);
        (0..64).map(|_| Elem(rng.gen_range(0..f.q()))).collect()
    };
    for x in probes {
        for &u in squares {
            let v = f.sub(x, u);
            if f.is_square(v) && (psi.e(u) + psi.e(v)) % p != ext[x.index()] {
                return Err(Error::NotExtendable(format!(
                    "representations of {x} disagree ({u} + {v})"
                )));
            }
        }
    }

    check_additive(f, &ext)?;
    let t = identify_trace_form(f, &ext)?;
    Ok(Extension { exponents: ext, t })
}

/// Additivity of an exponent map. All pairs up to [`EXHAUSTIVE_LIMIT`];
/// above it, `E(x + g) = E(x) + E(g)` for every x and every additive
/// generator g, which already forces additivity.
fn check_additive(f: &Field, ext: &[u32]) -> Result<()> {
    let p = f.p();
    let fail = |x: Elem, y: Elem| Error::NotExtendable(format!("not additive at {x} + {y}"));
    if ext[0] != 0 {
        return Err(Error::NotExtendable("extension is nontrivial at 0".into()));
    }
    if f.q() <= EXHAUSTIVE_LIMIT {
        for x in f.elements() {
            for y in f.elements().skip(x.index()) {
                if ext[f.add(x, y).index()] != (ext[x.index()] + ext[y.index()]) % p {
                    return Err(fail(x, y));
                }
            }
        }
    } else {
        for g in basis(f) {
            for x in f.elements() {
                if ext[f.add(x, g).index()] != (ext[x.index()] + ext[g.index()]) % p {
                    return Err(fail(x, g));
                }
            }
        }
    }
    Ok(())
}

/// The polynomial basis `1, x, ..., x^{k-1}`.
fn basis(f: &Field) -> Vec<Elem> {
    (0..f.k())
        .map(|i| {
            let mut c = vec![0u32; f.k() as usize];
            c[i as usize] = 1;
            f.encode(&c)
        })
        .collect()
}

/// The unique `t` with `E(x) = Tr(t x)` for all x.
fn identify_trace_form(f: &Field, ext: &[u32]) -> Result<Elem> {
    let probes = basis(f);
    let t = f
        .elements()
        .find(|&t| probes.iter().all(|&b| f.trace(f.mul(t, b)) == ext[b.index()]))
        .ok_or_else(|| Error::NotExtendable("no trace form matches the basis probes".into()))?;
    if let Some(x) = f.elements().find(|&x| f.trace(f.mul(t, x)) != ext[x.index()]) {
        return Err(Error::NotExtendable(format!(
            "Tr({t} x) disagrees with the extension at {x}"
        )));
    }
    Ok(t)
}

/// Integer presentation of the group whose characters are the ℂ*-valued
/// partial characters: one generator per element of `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSystem {
    pub generators: Vec<Elem>,
    /// `e_a + e_b - e_c - e_d` for each pair `{a, b}` chained to the first
    /// pair `{c, d}` of its sum class, plus the row `e_0`.
    pub relations: Vec<SparseRow>,
}

impl RelationSystem {
    pub fn build(field: &Field) -> Self {
        let generators = domain(field);
        let mut relations: Vec<SparseRow> = vec![vec![(0, 1)]];
        let mut first: Vec<Option<(usize, usize)>> = vec![None; field.q() as usize];
        for (i, &a) in generators.iter().enumerate() {
            for (j, &b) in generators.iter().enumerate().skip(i) {
                let slot = &mut first[field.add(a, b).index()];
                match *slot {
                    None => *slot = Some((i, j)),
                    Some((c, d)) => relations.push(vec![(i, 1), (j, 1), (c, -1), (d, -1)]),
                }
            }
        }
        RelationSystem {
            generators,
            relations,
        }
    }

    pub fn invariant_factors(&self) -> Result<Vec<u64>> {
        snf::invariant_factors(&self.relations, self.generators.len())
    }

    /// Dimension of the solution space of the system over GF(p).
    pub fn nullity_mod(&self, p: u64) -> usize {
        self.generators.len() - snf::rank_mod_p(&self.relations, self.generators.len(), p)
    }
}

/// Structure of the constraint group of one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfReport {
    pub q: u32,
    pub generators: usize,
    pub relations: usize,
    /// Non-unit invariant factors, then one 0 per free factor.
    pub invariant_factors: Vec<u64>,
    pub nullity_mod_p: usize,
}

impl SnfReport {
    /// Number of exponent-form solutions mod p, `p^nullity`.
    pub fn solutions_mod_p(&self, p: u32) -> Option<u64> {
        (p as u64).checked_pow(self.nullity_mod_p as u32)
    }

    /// Exactly `k` copies of `p`: the valid ψ are the q additive characters.
    pub fn is_elementary_of_order_q(&self, field: &Field) -> bool {
        self.invariant_factors.len() == field.k() as usize
            && self.invariant_factors.iter().all(|&d| d == field.p() as u64)
    }

    pub fn has_free_factor(&self) -> bool {
        self.invariant_factors.contains(&0)
    }
}

pub fn relation_snf(paley: &Paley) -> Result<SnfReport> {
    let f = paley.field();
    let system = RelationSystem::build(f);
    Ok(SnfReport {
        q: f.q(),
        generators: system.generators.len(),
        relations: system.relations.len(),
        invariant_factors: system.invariant_factors()?,
        nullity_mod_p: system.nullity_mod(f.p() as u64),
    })
}
