//! The Paley graph on GF(q), q = 1 mod 4: adjacency, distance spheres and
//! generalized intersection numbers, plus the orbit-reduced triple scans.
//!
//! Notation: for an ordered triple (a, b, c), `[h i j]` is the number of
//! vertices x with d(x,a) = h, d(x,b) = i and d(x,c) = j.

use std::fmt;

use rayon::prelude::*;

use crate::curves;
use crate::error::{Error, Result};
use crate::ff::{Elem, Field};

/// Distance between two vertices: 0, 1 or 2 (the graph has diameter 2).
pub type Ring = u8;

/// Isomorphism type of an unordered vertex triple, by its number of edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    Triangle,
    Path,
    Copath,
    Cotriangle,
}

impl Shape {
    pub const ALL: [Shape; 4] = [Shape::Triangle, Shape::Path, Shape::Copath, Shape::Cotriangle];

    pub fn from_edge_count(edges: usize) -> Shape {
        match edges {
            3 => Shape::Triangle,
            2 => Shape::Path,
            1 => Shape::Copath,
            0 => Shape::Cotriangle,
            _ => unreachable!("a triple has at most three edges"),
        }
    }

    pub fn edges(self) -> usize {
        match self {
            Shape::Triangle => 3,
            Shape::Path => 2,
            Shape::Copath => 1,
            Shape::Cotriangle => 0,
        }
    }

    /// Shape of the image triple in the complement graph.
    pub fn complement(self) -> Shape {
        Shape::from_edge_count(3 - self.edges())
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Shape::Triangle => "triangle",
            Shape::Path => "path",
            Shape::Copath => "copath",
            Shape::Cotriangle => "cotriangle",
        })
    }
}

/// Number of vertices outside {a, b, c} adjacent to exactly 3, 2, 1, 0 of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Aggregate {
    pub n3: u32,
    pub n2: u32,
    pub n1: u32,
    pub n0: u32,
}

impl Aggregate {
    pub fn as_array(&self) -> [u32; 4] {
        [self.n3, self.n2, self.n1, self.n0]
    }

    pub fn total(&self) -> u32 {
        self.n3 + self.n2 + self.n1 + self.n0
    }
}

/// All 27 intersection numbers of an ordered triple of distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleProfile {
    pub vertices: [Elem; 3],
    /// `(d(a,b), d(a,c), d(b,c))`
    pub dist: [Ring; 3],
    /// `cells[h][i][j] = [h i j]`
    pub cells: [[[u32; 3]; 3]; 3],
    pub aggregate: Aggregate,
}

impl TripleProfile {
    fn with_cells(vertices: [Elem; 3], dist: [Ring; 3], cells: [[[u32; 3]; 3]; 3]) -> Self {
        let c = &cells;
        let aggregate = Aggregate {
            n3: c[1][1][1],
            n2: c[1][1][2] + c[1][2][1] + c[2][1][1],
            n1: c[1][2][2] + c[2][1][2] + c[2][2][1],
            n0: c[2][2][2],
        };
        TripleProfile {
            vertices,
            dist,
            cells,
            aggregate,
        }
    }

    pub fn cell(&self, h: Ring, i: Ring, j: Ring) -> u32 {
        self.cells[h as usize][i as usize][j as usize]
    }

    pub fn shape(&self) -> Shape {
        Shape::from_edge_count(self.dist.iter().filter(|&&d| d == 1).count())
    }
}

/// One canonical triple `(0, base, w)` with its `[1 1 1]` value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonicalTriple {
    pub vertices: [Elem; 3],
    pub shape: Shape,
    pub n111: u32,
}

/// Extremes of `[1 1 1]` over one shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Extremes {
    pub min: u32,
    pub max: u32,
    pub count: usize,
}

impl Extremes {
    fn observe(slot: &mut Option<Extremes>, v: u32) {
        match slot {
            None => *slot = Some(Extremes { min: v, max: v, count: 1 }),
            Some(e) => {
                e.min = e.min.min(v);
                e.max = e.max.max(v);
                e.count += 1;
            }
        }
    }
}

/// Outcome of checking `|[1 1 1] - (q-9)/8| <= sqrt(q)/4 + 3/4` over every
/// canonical triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub q: u32,
    pub triples_scanned: usize,
    /// Indexed by [`Shape::index`]; `None` when the shape does not occur.
    pub extremes: [Option<Extremes>; 4],
    /// Smallest and largest integers inside the bound interval.
    pub allowed: (u32, u32),
    pub violations: Vec<CanonicalTriple>,
}

impl BoundReport {
    pub fn extremes(&self, shape: Shape) -> Option<Extremes> {
        self.extremes[shape.index()]
    }
}

/// Triples with no common neighbor among the canonical representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollaryReport {
    pub q: u32,
    pub triples_scanned: usize,
    pub without_common_neighbor: usize,
    pub witness: Option<[Elem; 3]>,
}

/// Exact test of `|8n - (q-9)| <= 2 sqrt(q) + 6` in integers.
pub fn bound_holds(q: u32, n111: u32) -> bool {
    let dev = (8 * n111 as i64 - (q as i64 - 9)).unsigned_abs();
    if dev <= 6 {
        return true;
    }
    let excess = dev - 6;
    excess * excess <= 4 * q as u64
}

/// Integers n with `bound_holds(q, n)`, as an inclusive range.
pub fn allowed_range(q: u32) -> (u32, u32) {
    let mut it = (0..=q).filter(|&n| bound_holds(q, n));
    let lo = it.next().unwrap_or(0);
    let hi = it.next_back().unwrap_or(lo);
    (lo, hi)
}

/// Paley(q) over a constructed field.
#[derive(Debug, Clone)]
pub struct Paley {
    field: Field,
}

impl Paley {
    pub fn new(field: Field) -> Result<Self> {
        if field.q() % 4 != 1 {
            return Err(Error::PaleyIneligible(field.q()));
        }
        Ok(Paley { field })
    }

    pub fn of_order(q: u32) -> Result<Self> {
        let field = Field::of_order(q as u64).map_err(|e| match e {
            Error::NotPrime(_) => Error::PaleyIneligible(q),
            other => other,
        })?;
        Self::new(field)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    #[inline]
    pub fn adjacent(&self, a: Elem, b: Elem) -> bool {
        self.field.is_square(self.field.sub(a, b))
    }

    #[inline]
    pub fn distance(&self, a: Elem, b: Elem) -> Ring {
        match self.field.chi(self.field.sub(a, b)) {
            0 => 0,
            1 => 1,
            _ => 2,
        }
    }

    pub fn neighbors(&self, a: Elem) -> impl Iterator<Item = Elem> + '_ {
        self.field.squares().iter().map(move |&s| self.field.add(a, s))
    }

    /// `|Γ_{i_1}(a_1) ∩ ... ∩ Γ_{i_l}(a_l)|` by enumerating every vertex.
    /// An empty target list counts every vertex.
    pub fn multi_intersection(&self, targets: &[(Elem, Ring)]) -> Result<u32> {
        if let Some(&(_, r)) = targets.iter().find(|(_, r)| *r > 2) {
            return Err(Error::InvalidRing(r));
        }
        let n = self
            .field
            .elements()
            .filter(|&x| targets.iter().all(|&(a, r)| self.distance(x, a) == r))
            .count();
        Ok(n as u32)
    }

    /// `[i j]` for a pair at distance `h`: `(q-1)/4 - [h = i = j]`.
    pub fn pair_value(&self, h: Ring, i: Ring, j: Ring) -> Result<u32> {
        pair_value(self.q(), h, i, j)
    }

    /// Number of vertices among a, b, c adjacent to the other two.
    pub fn adjacency_r(&self, a: Elem, b: Elem, c: Elem) -> u32 {
        let (ab, ac, bc) = (self.adjacent(a, b), self.adjacent(a, c), self.adjacent(b, c));
        (ab && ac) as u32 + (ab && bc) as u32 + (ac && bc) as u32
    }

    /// `[1 1 1]` from the character sum identity `q - 3 + S = 8[1 1 1] + 4R`.
    pub fn triple_via_charsum(&self, a: Elem, b: Elem, c: Elem) -> Result<u32> {
        let s = curves::char_sum(&self.field, a, b, c)?;
        let r = self.adjacency_r(a, b, c) as i64;
        let numerator = self.q() as i64 - 3 + s - 4 * r;
        if numerator % 8 != 0 || numerator < 0 {
            return Err(Error::NonIntegral {
                numerator,
                denominator: 8,
            });
        }
        Ok((numerator / 8) as u32)
    }

    /// `[1 1 1]` by walking the neighbors of `a`.
    pub fn common_neighbor_count(&self, a: Elem, b: Elem, c: Elem) -> u32 {
        self.neighbors(a)
            .filter(|&x| self.adjacent(x, b) && self.adjacent(x, c))
            .count() as u32
    }

    /// Every cell by direct enumeration; the oracle for [`Self::complete_triple_table`].
    pub fn brute_force_profile(&self, a: Elem, b: Elem, c: Elem) -> Result<TripleProfile> {
        self.check_distinct(a, b, c)?;
        let mut cells = [[[0u32; 3]; 3]; 3];
        for x in self.field.elements() {
            let (h, i, j) = (self.distance(x, a), self.distance(x, b), self.distance(x, c));
            cells[h as usize][i as usize][j as usize] += 1;
        }
        Ok(TripleProfile::with_cells([a, b, c], self.dists(a, b, c), cells))
    }

    /// All 27 cells from `[1 1 1]`, the pair formula and the sum rules.
    pub fn complete_triple_table(&self, a: Elem, b: Elem, c: Elem) -> Result<TripleProfile> {
        self.check_distinct(a, b, c)?;
        let n111 = self.common_neighbor_count(a, b, c);
        profile_from_111(self.q(), [a, b, c], self.dists(a, b, c), n111)
    }

    /// Smallest vertex adjacent to all of a, b, c.
    pub fn common_neighbor_witness(&self, a: Elem, b: Elem, c: Elem) -> Result<Option<Elem>> {
        self.check_distinct(a, b, c)?;
        Ok(self
            .field
            .elements()
            .find(|&x| self.adjacent(x, a) && self.adjacent(x, b) && self.adjacent(x, c)))
    }

    /// Second vertices of the canonical families `(0, base, w)`: 1 covers every
    /// triple with an edge, the smallest nonsquare every triple with a non-edge.
    pub fn canonical_bases(&self) -> [Elem; 2] {
        let e = self
            .field
            .smallest_nonsquare()
            .expect("odd characteristic has nonsquares");
        [Elem::ONE, e]
    }

    /// `[1 1 1]` for every canonical triple `(0, base, w)`, `w ∉ {0, base}`.
    ///
    /// Affine maps `x -> s x + t` with `s` a nonzero square are automorphisms,
    /// so every unordered triple of distinct vertices is equivalent to one of
    /// these with the same shape and the same intersection numbers.
    pub fn canonical_scan(&self) -> Vec<CanonicalTriple> {
        let f = &self.field;
        let mut out = Vec::with_capacity(2 * f.q() as usize);
        for base in self.canonical_bases() {
            let common: Vec<Elem> = self
                .neighbors(Elem::ZERO)
                .filter(|&x| self.adjacent(x, base))
                .collect();
            let base_edge = self.adjacent(Elem::ZERO, base);
            let rows: Vec<CanonicalTriple> = f
                .elements()
                .collect::<Vec<_>>()
                .into_par_iter()
                .filter(|&w| w != Elem::ZERO && w != base)
                .map(|w| {
                    let n111 = common.iter().filter(|&&x| self.adjacent(x, w)).count() as u32;
                    let edges = base_edge as usize
                        + self.adjacent(Elem::ZERO, w) as usize
                        + self.adjacent(base, w) as usize;
                    CanonicalTriple {
                        vertices: [Elem::ZERO, base, w],
                        shape: Shape::from_edge_count(edges),
                        n111,
                    }
                })
                .collect();
            out.extend(rows);
        }
        out
    }

    /// Checks the `[1 1 1]` deviation bound over every canonical triple.
    pub fn scan_bound(&self) -> BoundReport {
        bound_report(self.q(), &self.canonical_scan())
    }

    pub fn scan_common_neighbors(&self) -> CorollaryReport {
        corollary_report(self.q(), &self.canonical_scan())
    }

    /// Profile of a canonical triple from its scanned `[1 1 1]`.
    pub fn canonical_profile(&self, t: &CanonicalTriple) -> TripleProfile {
        let [a, b, c] = t.vertices;
        profile_from_111(self.q(), t.vertices, self.dists(a, b, c), t.n111)
            .expect("sum rules are consistent for a genuine Paley triple")
    }

    fn dists(&self, a: Elem, b: Elem, c: Elem) -> [Ring; 3] {
        [self.distance(a, b), self.distance(a, c), self.distance(b, c)]
    }

    fn check_distinct(&self, a: Elem, b: Elem, c: Elem) -> Result<()> {
        if a == b || a == c || b == c {
            Err(Error::NotDistinct)
        } else {
            Ok(())
        }
    }
}

pub fn pair_value(q: u32, h: Ring, i: Ring, j: Ring) -> Result<u32> {
    for r in [h, i, j] {
        if !(1..=2).contains(&r) {
            return Err(Error::InvalidRing(r));
        }
    }
    let base = (q - 1) / 4;
    Ok(if h == i && i == j { base - 1 } else { base })
}

/// Fills all 27 cells of a distinct triple from `[1 1 1]` alone.
pub fn profile_from_111(q: u32, vertices: [Elem; 3], dist: [Ring; 3], n111: u32) -> Result<TripleProfile> {
    let [d_ab, d_ac, d_bc] = dist;
    if dist.iter().any(|&d| !(1..=2).contains(&d)) {
        return Err(Error::NotDistinct);
    }
    let mut c = [[[0i64; 3]; 3]; 3];
    // the triple's own members sit in ring 0 of themselves
    c[0][d_ab as usize][d_ac as usize] = 1;
    c[d_ab as usize][0][d_bc as usize] = 1;
    c[d_ac as usize][d_bc as usize][0] = 1;
    let pv = |h: Ring, i: Ring, j: Ring| -> Result<i64> { Ok(pair_value(q, h, i, j)? as i64) };

    c[1][1][1] = n111 as i64;
    c[1][1][2] = pv(d_ab, 1, 1)? - c[1][1][1] - c[1][1][0];
    c[1][2][1] = pv(d_ac, 1, 1)? - c[1][1][1] - c[1][0][1];
    c[2][1][1] = pv(d_bc, 1, 1)? - c[1][1][1] - c[0][1][1];
    c[1][2][2] = pv(d_ab, 1, 2)? - c[1][2][1] - c[1][2][0];
    c[2][1][2] = pv(d_ab, 2, 1)? - c[2][1][1] - c[2][1][0];
    c[2][2][1] = pv(d_ac, 2, 1)? - c[2][1][1] - c[2][0][1];
    c[2][2][2] = pv(d_ab, 2, 2)? - c[2][2][1] - c[2][2][0];

    let mut cells = [[[0u32; 3]; 3]; 3];
    for h in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let v = c[h][i][j];
                if v < 0 {
                    return Err(Error::Inconsistent(format!(
                        "negative cell [{h} {i} {j}] = {v} for q = {q}, [1 1 1] = {n111}"
                    )));
                }
                cells[h][i][j] = v as u32;
            }
        }
    }
    Ok(TripleProfile::with_cells(vertices, dist, cells))
}

pub fn bound_report(q: u32, triples: &[CanonicalTriple]) -> BoundReport {
    let mut extremes = [None; 4];
    let mut violations = Vec::new();
    for t in triples {
        Extremes::observe(&mut extremes[t.shape.index()], t.n111);
        if !bound_holds(q, t.n111) {
            violations.push(*t);
        }
    }
    BoundReport {
        q,
        triples_scanned: triples.len(),
        extremes,
        allowed: allowed_range(q),
        violations,
    }
}

pub fn corollary_report(q: u32, triples: &[CanonicalTriple]) -> CorollaryReport {
    let mut lacking = triples.iter().filter(|t| t.n111 == 0);
    let witness = lacking.next().map(|t| t.vertices);
    CorollaryReport {
        q,
        triples_scanned: triples.len(),
        without_common_neighbor: witness.map_or(0, |_| 1 + lacking.count()),
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(q: u32) -> Paley {
        Paley::of_order(q).unwrap()
    }

    #[test]
    fn adjacency_examples() {
        assert!(g(5).adjacent(Elem(0), Elem(1)));
        let p13 = g(13);
        assert!(!p13.adjacent(Elem(0), Elem(2)));
        assert!(p13.adjacent(Elem(0), Elem(4)));
        assert!(p13.adjacent(Elem(4), Elem(0)));
        assert!(!p13.adjacent(Elem(3), Elem(3)));
    }

    #[test]
    fn distance_examples() {
        let p13 = g(13);
        assert_eq!(p13.distance(Elem(7), Elem(7)), 0);
        assert_eq!(p13.distance(Elem(0), Elem(2)), 2);
        assert_eq!(g(5).distance(Elem(0), Elem(1)), 1);
    }

    #[test]
    fn ineligible_orders() {
        assert_eq!(Paley::of_order(7).unwrap_err(), Error::PaleyIneligible(7));
        assert_eq!(Paley::of_order(27).unwrap_err(), Error::PaleyIneligible(27));
        assert_eq!(Paley::of_order(21).unwrap_err(), Error::PaleyIneligible(21));
        assert_eq!(
            Paley::new(Field::new(2, 2).unwrap()).unwrap_err(),
            Error::PaleyIneligible(4)
        );
    }

    #[test]
    fn pair_values() {
        let p13 = g(13);
        assert_eq!(p13.pair_value(1, 1, 1).unwrap(), 2);
        assert_eq!(p13.pair_value(2, 1, 1).unwrap(), 3);
        assert_eq!(g(9).pair_value(1, 1, 2).unwrap(), 2);
        assert_eq!(p13.pair_value(1, 0, 1), Err(Error::InvalidRing(0)));
        assert_eq!(p13.pair_value(1, 1, 3), Err(Error::InvalidRing(3)));
    }

    #[test]
    fn multi_intersection_examples() {
        let p13 = g(13);
        assert_eq!(p13.multi_intersection(&[(Elem(5), 1)]).unwrap(), 6);
        let tri = [(Elem(0), 1), (Elem(1), 1), (Elem(4), 1)];
        assert_eq!(p13.multi_intersection(&tri).unwrap(), 0);
        assert_eq!(p13.multi_intersection(&[(Elem(0), 3)]), Err(Error::InvalidRing(3)));
        // repeated vertices are allowed
        assert_eq!(p13.multi_intersection(&[(Elem(2), 1), (Elem(2), 1)]).unwrap(), 6);
    }

    #[test]
    fn charsum_route_q13_triangle() {
        let p13 = g(13);
        assert_eq!(p13.adjacency_r(Elem(0), Elem(1), Elem(4)), 3);
        assert_eq!(p13.triple_via_charsum(Elem(0), Elem(1), Elem(4)).unwrap(), 0);
        assert_eq!(p13.triple_via_charsum(Elem(4), Elem(0), Elem(1)).unwrap(), 0);
        assert_eq!(
            p13.triple_via_charsum(Elem(0), Elem(0), Elem(4)),
            Err(Error::NotDistinct)
        );
    }

    #[test]
    fn aggregates_from_table() {
        let p13 = g(13);
        let t = p13.complete_triple_table(Elem(0), Elem(1), Elem(4)).unwrap();
        assert_eq!(t.aggregate.as_array(), [0, 3, 6, 1]);
        assert_eq!(t.shape(), Shape::Triangle);
        let p29 = g(29);
        // 1, 5 and 4 are squares mod 29
        let t = p29.complete_triple_table(Elem(0), Elem(1), Elem(5)).unwrap();
        assert_eq!(t.shape(), Shape::Triangle);
        assert_eq!(t.aggregate.as_array(), [2, 9, 12, 3]);
        assert_eq!(t.aggregate.total(), 26);
    }

    #[test]
    fn witnesses() {
        assert!(g(29)
            .common_neighbor_witness(Elem(3), Elem(11), Elem(20))
            .unwrap()
            .is_some());
        // 1, 2, 4 are squares mod 17: (0,1,2) is a triangle
        assert_eq!(g(17).common_neighbor_witness(Elem(0), Elem(1), Elem(2)).unwrap(), None);
        let p9 = g(9);
        let tri = p9
            .canonical_scan()
            .into_iter()
            .find(|t| t.shape == Shape::Triangle)
            .unwrap();
        let [a, b, c] = tri.vertices;
        assert_eq!(p9.common_neighbor_witness(a, b, c).unwrap(), None);
    }

    #[test]
    fn bound_integer_test() {
        // q = 9: |8n| <= 12 allows n in {0, 1}
        assert_eq!(allowed_range(9), (0, 1));
        // q = 25: (q-9)/8 = 2, width 2: 0..=4 allowed
        assert_eq!(allowed_range(25), (0, 4));
        assert!(bound_holds(29, 2));
    }

    #[test]
    fn scan_extremes_match_table() {
        let r = g(29).scan_bound();
        assert!(r.violations.is_empty());
        let tri = r.extremes(Shape::Triangle).unwrap();
        assert_eq!((tri.min, tri.max), (2, 2));
        let path = r.extremes(Shape::Path).unwrap();
        assert_eq!((path.min, path.max), (2, 4));

        let r = g(25).scan_bound();
        let tri = r.extremes(Shape::Triangle).unwrap();
        assert_eq!((tri.min, tri.max), (0, 2));

        assert!(g(9).scan_bound().violations.is_empty());
        assert!(g(5).scan_bound().extremes(Shape::Triangle).is_none());
    }
}
