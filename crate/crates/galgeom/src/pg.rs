//! The projective space PG(N, Q) over a finite field.
//!
//! Points are coordinate vectors of length N+1, normalized so the first
//! nonzero entry is 1; that makes equality and ordering plain `Vec` equality.
//! Subspaces are stored as reduced row-echelon bases, which are canonical:
//! two subspaces are equal iff their RREF matrices are equal.  Hyperplanes
//! carry a normalized dual vector internally, so incidence is a single dot
//! product.
//!
//! Enumeration streams are deterministic: points come out in lexicographic
//! order of the integer-encoded coordinate vectors, and k-space streams walk
//! RREF pivot patterns in lexicographic order.  Enumerations refuse to start
//! when the ambient count exceeds the desk-scale guards.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::galois::{Elt, Field};
use crate::linalg;

/// Enumeration guard: at most this many points in an ambient we sweep.
pub const MAX_POINTS: u128 = 10_000_000;
/// Enumeration guard: at most this many subspaces in a k-space sweep.
pub const MAX_SUBSPACES: u128 = 1_000_000;

/// θ_k(Q) = [k+1]_Q = Q^k + ... + Q + 1, the number of points of PG(k, Q),
/// as an exact big integer.  k = -1 (the empty space) gives 0.
pub fn space_size(k: i64, q: u64) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut acc = BigUint::zero();
    let mut pw = BigUint::one();
    for _ in 0..=k {
        acc += &pw;
        pw *= &q;
    }
    acc
}

/// Same as [`space_size`] for desk-scale values that fit in u128.
pub fn theta(k: i64, q: u64) -> u128 {
    if k < 0 {
        return 0;
    }
    let mut acc: u128 = 0;
    let mut pw: u128 = 1;
    for _ in 0..=k {
        acc += pw;
        pw *= q as u128;
    }
    acc
}

/// Gaussian binomial [a choose b]_Q: the number of b-dimensional vector
/// subspaces of F_Q^a, exact.
pub fn gaussian_binomial(a: u64, b: u64, q: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    use num_integer::Integer;
    let b = b.min(a - b); // symmetry keeps the products short
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..b {
        num *= q.pow((a - i) as u32) - BigUint::one();
        den *= q.pow((i + 1) as u32) - BigUint::one();
    }
    let (quot, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "gaussian binomial must divide exactly");
    quot
}

/// A point of PG(N, Q): normalized homogeneous coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Point {
    coords: Vec<Elt>,
}

impl Point {
    /// Normalize a nonzero vector: scale so the first nonzero entry is 1.
    pub fn new(f: &Field, v: &[Elt]) -> Result<Point> {
        let lead = v.iter().position(|&x| x != 0).ok_or_else(|| {
            Error::Degenerate("the zero vector spans no projective point".into())
        })?;
        for &x in v {
            if x >= f.order() {
                return Err(Error::Format(format!("coordinate {x} not in GF({})", f.order())));
            }
        }
        let inv = f.inv(v[lead]);
        Ok(Point { coords: v.iter().map(|&x| f.mul(inv, x)).collect() })
    }

    pub fn coords(&self) -> &[Elt] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// A projective subspace, canonical RREF basis.  Zero rows never appear;
/// the empty subspace has no rows and projective dimension -1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Subspace {
    rows: Vec<Vec<Elt>>,
    pivots: Vec<usize>,
    width: usize,
}

impl Subspace {
    pub fn from_rows(f: &Field, rows: Vec<Vec<Elt>>, width: usize) -> Subspace {
        debug_assert!(rows.iter().all(|r| r.len() == width));
        let mut rows = rows;
        let pivots = linalg::rref(f, &mut rows);
        Subspace { rows, pivots, width }
    }

    pub fn empty(width: usize) -> Subspace {
        Subspace { rows: vec![], pivots: vec![], width }
    }

    /// Projective dimension: #rows - 1.
    pub fn dim(&self) -> i64 {
        self.rows.len() as i64 - 1
    }

    pub fn rows(&self) -> &[Vec<Elt>] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn contains_point(&self, f: &Field, p: &Point) -> bool {
        linalg::in_row_space(f, &self.rows, &self.pivots, p.coords())
    }

    pub fn contains_vector(&self, f: &Field, v: &[Elt]) -> bool {
        linalg::in_row_space(f, &self.rows, &self.pivots, v)
    }

    pub fn contains_subspace(&self, f: &Field, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_vector(f, r))
    }

    /// Coordinates of a member point with respect to the RREF basis rows.
    /// With RREF rows the coefficients can be read off at the pivot columns.
    pub fn coordinates_of(&self, f: &Field, p: &Point) -> Option<Vec<Elt>> {
        if !self.contains_point(f, p) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| p.coords()[c]).collect())
    }

    /// The points of this subspace: normalized combinations of its basis rows.
    pub fn points(&self, f: &Field) -> Result<Vec<Point>> {
        if self.rows.is_empty() {
            return Ok(vec![]);
        }
        let count = theta(self.dim(), f.order() as u64);
        if count > MAX_POINTS {
            return Err(Error::SizeGuard {
                what: "points of a subspace".into(),
                count,
                limit: MAX_POINTS,
            });
        }
        let mut out = Vec::new();
        for coeffs in PointIter::raw(f.order(), self.rows.len()) {
            let mut v = vec![0; self.width];
            for (c, row) in coeffs.coords().iter().zip(&self.rows) {
                for (j, &x) in row.iter().enumerate() {
                    v[j] = f.add(v[j], f.mul(*c, x));
                }
            }
            out.push(Point::new(f, &v).expect("combination of basis rows is nonzero"));
        }
        Ok(out)
    }
}

/// A hyperplane of PG(N, Q), stored as a normalized dual vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Hyperplane {
    dual: Point,
}

impl Hyperplane {
    pub fn from_dual(f: &Field, dual: &[Elt]) -> Result<Hyperplane> {
        Ok(Hyperplane { dual: Point::new(f, dual)? })
    }

    pub fn dual(&self) -> &[Elt] {
        self.dual.coords()
    }

    pub fn contains(&self, f: &Field, p: &Point) -> bool {
        f.dot(self.dual.coords(), p.coords()) == 0
    }

    pub fn to_subspace(&self, f: &Field) -> Subspace {
        let k = linalg::kernel_basis(f, &[self.dual.coords().to_vec()]);
        Subspace::from_rows(f, k, self.dual.coords().len())
    }
}

/// PG(N, Q): the ambient space handle everything else hangs off.
#[derive(Clone, PartialEq, Eq)]
pub struct Space {
    field: Arc<Field>,
    dim: usize,
}

impl std::fmt::Debug for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PG({}, {})", self.dim, self.field.order())
    }
}

impl Space {
    pub fn new(field: Arc<Field>, dim: usize) -> Space {
        Space { field, dim }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    /// Projective dimension N.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn width(&self) -> usize {
        self.dim + 1
    }

    pub fn point_count(&self) -> u128 {
        theta(self.dim as i64, self.q())
    }

    fn guard_points(&self) -> Result<()> {
        let count = self.point_count();
        if count > MAX_POINTS {
            return Err(Error::SizeGuard {
                what: format!("points of PG({}, {})", self.dim, self.q()),
                count,
                limit: MAX_POINTS,
            });
        }
        Ok(())
    }

    /// All points, lexicographically by integer-encoded coordinates.
    pub fn points(&self) -> Result<PointIter> {
        self.guard_points()?;
        Ok(PointIter::new(self.field.clone(), self.width()))
    }

    /// All hyperplanes (normalized dual vectors, same order as points).
    pub fn hyperplanes(&self) -> Result<impl Iterator<Item = Hyperplane>> {
        self.guard_points()?;
        Ok(PointIter::new(self.field.clone(), self.width()).map(|p| Hyperplane { dual: p }))
    }

    /// Number of k-dimensional projective subspaces.
    pub fn subspace_count(&self, k: i64) -> BigUint {
        gaussian_binomial(self.width() as u64, (k + 1) as u64, self.q())
    }

    /// All projective k-spaces, as RREF subspaces, deterministic order.
    pub fn subspaces(&self, k: i64) -> Result<SubspaceIter> {
        if k < -1 || k as i64 > self.dim as i64 {
            return Err(Error::Param(format!("k = {k} out of range for PG({}, {})", self.dim, self.q())));
        }
        let count = self.subspace_count(k);
        if count > BigUint::from(MAX_SUBSPACES) {
            return Err(Error::SizeGuard {
                what: format!("{k}-spaces of PG({}, {})", self.dim, self.q()),
                count: count.try_into().unwrap_or(u128::MAX),
                limit: MAX_SUBSPACES,
            });
        }
        Ok(SubspaceIter::new(self.field.clone(), self.width(), (k + 1) as usize))
    }

    /// All k-spaces containing the fixed subspace `through`, via the quotient:
    /// they correspond to (k - dim through)-dimensional subspaces of
    /// PG(N - dim through - 1, Q) on the non-pivot coordinates.
    pub fn subspaces_through(&self, through: &Subspace, k: i64) -> Result<Vec<Subspace>> {
        let f = self.field.as_ref();
        let fdim = through.rows().len(); // vector dimension
        let target = (k + 1) as usize;
        if target < fdim || target > self.width() {
            return Err(Error::Param(format!("no {k}-spaces through a subspace of vector dim {fdim}")));
        }
        let free_cols: Vec<usize> =
            (0..self.width()).filter(|c| !through.pivots.contains(c)).collect();
        let qdim = free_cols.len();
        let g = target - fdim;
        let count = gaussian_binomial(qdim as u64, g as u64, self.q());
        if count > BigUint::from(MAX_SUBSPACES) {
            return Err(Error::SizeGuard {
                what: format!("{k}-spaces through a fixed subspace"),
                count: count.try_into().unwrap_or(u128::MAX),
                limit: MAX_SUBSPACES,
            });
        }
        let mut out = Vec::new();
        for w in SubspaceIter::new(self.field.clone(), qdim, g) {
            // lift: place quotient coordinates at the free columns
            let mut rows: Vec<Vec<Elt>> = w
                .rows()
                .iter()
                .map(|r| {
                    let mut v = vec![0; self.width()];
                    for (i, &c) in free_cols.iter().enumerate() {
                        v[c] = r[i];
                    }
                    v
                })
                .collect();
            rows.extend(through.rows().iter().cloned());
            let s = Subspace::from_rows(f, rows, self.width());
            debug_assert_eq!(s.dim(), k);
            out.push(s);
        }
        Ok(out)
    }

    pub fn span(&self, parts: &[&Subspace]) -> Subspace {
        let mut rows = Vec::new();
        for p in parts {
            rows.extend(p.rows().iter().cloned());
        }
        Subspace::from_rows(self.field.as_ref(), rows, self.width())
    }

    pub fn span_points(&self, pts: &[&Point]) -> Subspace {
        let rows = pts.iter().map(|p| p.coords().to_vec()).collect();
        Subspace::from_rows(self.field.as_ref(), rows, self.width())
    }

    /// Intersection via orthogonal complements: A ∩ B = (A⊥ + B⊥)⊥.
    pub fn meet(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let f = self.field.as_ref();
        if a.rows().is_empty() || b.rows().is_empty() {
            return Subspace::empty(self.width());
        }
        let mut duals = linalg::kernel_basis(f, a.rows());
        duals.extend(linalg::kernel_basis(f, b.rows()));
        if duals.is_empty() {
            // both are the whole space
            return self.span(&[a]);
        }
        let meet_rows = linalg::kernel_basis(f, &duals);
        Subspace::from_rows(f, meet_rows, self.width())
    }

    pub fn incident(&self, s: &Subspace, p: &Point) -> bool {
        s.contains_point(self.field.as_ref(), p)
    }

    pub fn point(&self, v: &[Elt]) -> Result<Point> {
        if v.len() != self.width() {
            return Err(Error::Format(format!(
                "expected {} coordinates, got {}",
                self.width(),
                v.len()
            )));
        }
        Point::new(self.field.as_ref(), v)
    }
}

/// Lexicographic point stream: leading index runs from last coordinate to
/// first (more leading zeros sort first), suffix digits count up.
pub struct PointIter {
    q: u32,
    width: usize,
    lead: i64,
    suffix: Vec<Elt>,
    done: bool,
}

impl PointIter {
    fn new(field: Arc<Field>, width: usize) -> PointIter {
        PointIter::raw(field.order(), width)
    }

    /// Normalized representatives of F_q^width \ {0} up to scalars; only the
    /// field order matters for the stream.
    pub fn raw(q: u32, width: usize) -> PointIter {
        PointIter { q, width, lead: width as i64 - 1, suffix: vec![], done: false }
    }
}

impl Iterator for PointIter {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.done {
            return None;
        }
        let mut v = vec![0; self.width];
        v[self.lead as usize] = 1;
        for (i, &d) in self.suffix.iter().enumerate() {
            v[self.lead as usize + 1 + i] = d;
        }
        let out = Point { coords: v };
        // advance the suffix odometer, incrementing from the right
        let q = self.q;
        let mut i = self.suffix.len();
        loop {
            if i == 0 {
                // suffix exhausted: move the lead left, suffix grows by one
                self.lead -= 1;
                if self.lead < 0 {
                    self.done = true;
                } else {
                    self.suffix = vec![0; (self.width as i64 - 1 - self.lead) as usize];
                }
                break;
            }
            i -= 1;
            self.suffix[i] += 1;
            if self.suffix[i] < q {
                break;
            }
            self.suffix[i] = 0;
        }
        Some(out)
    }
}

/// Stream of d-dimensional vector subspaces of F_Q^width as RREF matrices:
/// pivot-column sets in lexicographic order, free entries in odometer order.
pub struct SubspaceIter {
    field: Arc<Field>,
    width: usize,
    d: usize,
    pivots: Vec<usize>,
    free_positions: Vec<(usize, usize)>,
    free_values: Vec<Elt>,
    done: bool,
}

impl SubspaceIter {
    fn new(field: Arc<Field>, width: usize, d: usize) -> SubspaceIter {
        if d > width {
            return SubspaceIter {
                field,
                width,
                d,
                pivots: vec![],
                free_positions: vec![],
                free_values: vec![],
                done: true,
            };
        }
        let pivots: Vec<usize> = (0..d).collect();
        let mut it = SubspaceIter {
            field,
            width,
            d,
            pivots,
            free_positions: vec![],
            free_values: vec![],
            done: false,
        };
        it.reset_free();
        it
    }

    fn reset_free(&mut self) {
        self.free_positions.clear();
        for (i, &c) in self.pivots.iter().enumerate() {
            for j in (c + 1)..self.width {
                if !self.pivots.contains(&j) {
                    self.free_positions.push((i, j));
                }
            }
        }
        self.free_values = vec![0; self.free_positions.len()];
    }

    fn next_pivot_combination(&mut self) -> bool {
        // standard next-combination in lexicographic order
        let d = self.d;
        if d == 0 {
            return false;
        }
        let n = self.width;
        let mut i = d;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if self.pivots[i] < n - d + i {
                self.pivots[i] += 1;
                for j in i + 1..d {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                return true;
            }
        }
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        // build the matrix for the current state
        let mut rows = vec![vec![0; self.width]; self.d];
        for (i, &c) in self.pivots.iter().enumerate() {
            rows[i][c] = 1;
        }
        for (&(i, j), &v) in self.free_positions.iter().zip(&self.free_values) {
            rows[i][j] = v;
        }
        let out = Subspace { rows, pivots: self.pivots.clone(), width: self.width };

        // advance: odometer over free values, then next pivot set
        let q = self.field.order();
        let mut k = self.free_values.len();
        loop {
            if k == 0 {
                if !self.next_pivot_combination() {
                    self.done = true;
                } else {
                    self.reset_free();
                }
                break;
            }
            k -= 1;
            self.free_values[k] += 1;
            if self.free_values[k] < q {
                break;
            }
            self.free_values[k] = 0;
        }
        // d = 0: single empty subspace, emit once
        if self.d == 0 {
            self.done = true;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(p: u32, m: u32, dim: usize) -> Space {
        Space::new(Field::shared(p, m).unwrap(), dim)
    }

    #[test]
    fn point_counts() {
        assert_eq!(space(2, 1, 1).points().unwrap().count(), 3); // PG(1,2)
        assert_eq!(space(2, 2, 2).points().unwrap().count(), 21); // PG(2,4)
        assert_eq!(space(2, 2, 3).points().unwrap().count(), 85); // PG(3,4)
        assert_eq!(space(2, 2, 2).hyperplanes().unwrap().count(), 21);
    }

    #[test]
    fn point_order_is_lexicographic() {
        let s = space(2, 1, 2);
        let pts: Vec<_> = s.points().unwrap().collect();
        assert_eq!(pts[0].coords(), &[0, 0, 1]);
        assert_eq!(pts[1].coords(), &[0, 1, 0]);
        assert_eq!(pts[2].coords(), &[0, 1, 1]);
        assert_eq!(pts[3].coords(), &[1, 0, 0]);
        assert_eq!(pts.last().unwrap().coords(), &[1, 1, 1]);
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
        // no duplicates under rescaling
        let set: std::collections::HashSet<_> = pts.iter().collect();
        assert_eq!(set.len(), 7);
    }

    #[test]
    fn normalization() {
        let s = space(2, 2, 1);
        let f = s.field();
        // (2, 3) ~ (1, 2^{-1} * 3)
        let p = s.point(&[2, 3]).unwrap();
        assert_eq!(p.coords()[0], 1);
        let p2 = s.point(&[f.mul(3, 2), f.mul(3, 3)]).unwrap();
        assert_eq!(p, p2);
        assert!(s.point(&[0, 0]).is_err());
    }

    #[test]
    fn gaussian_binomial_vs_bruteforce() {
        // count 2-dim subspaces of F_2^4 by brute force over all pairs
        let f = Field::new(2, 1).unwrap();
        let mut seen = std::collections::HashSet::new();
        for a in 1u32..16 {
            for b in 1..16 {
                if a == b {
                    continue;
                }
                let av: Vec<u32> = (0..4).map(|i| (a >> i) & 1).collect();
                let bv: Vec<u32> = (0..4).map(|i| (b >> i) & 1).collect();
                let s = Subspace::from_rows(&f, vec![av, bv], 4);
                if s.dim() == 1 {
                    seen.insert(s);
                }
            }
        }
        assert_eq!(seen.len(), 35);
        assert_eq!(gaussian_binomial(4, 2, 2), BigUint::from(35u32));
        // degenerate edges
        assert_eq!(gaussian_binomial(5, 0, 3), BigUint::from(1u32));
        assert_eq!(gaussian_binomial(3, 5, 3), BigUint::from(0u32));
        assert_eq!(gaussian_binomial(17, 1, 2), space_size(16, 2));
    }

    #[test]
    fn subspace_stream_counts_and_canonicity() {
        let s = space(2, 2, 2);
        // lines of PG(2,4): [3 choose 2]_4 = 21
        let lines: Vec<_> = s.subspaces(1).unwrap().collect();
        assert_eq!(lines.len(), 21);
        let set: std::collections::HashSet<_> = lines.iter().cloned().collect();
        assert_eq!(set.len(), 21, "RREF canonical => no duplicates");
        // each line has 5 points
        for l in &lines {
            assert_eq!(l.points(s.field()).unwrap().len(), 5);
        }
        // points as 0-subspaces agree with the point stream
        let as_subs: Vec<_> = s.subspaces(0).unwrap().collect();
        assert_eq!(as_subs.len(), 21);
    }

    #[test]
    fn hyperplane_incidence_matches_subspace() {
        let s = space(3, 1, 2);
        for h in s.hyperplanes().unwrap() {
            let sub = h.to_subspace(s.field());
            assert_eq!(sub.dim(), 1);
            for p in s.points().unwrap() {
                assert_eq!(h.contains(s.field(), &p), sub.contains_point(s.field(), &p));
            }
        }
    }

    #[test]
    fn hyperplanes_through_point_in_pg2_4() {
        let s = space(2, 2, 2);
        let p = s.point(&[1, 0, 0]).unwrap();
        let through = s
            .hyperplanes()
            .unwrap()
            .filter(|h| h.contains(s.field(), &p))
            .count();
        assert_eq!(through, 5); // [2]_4 = 5
    }

    #[test]
    fn subspaces_through_counts() {
        // planes through a line in PG(3,4): [2]_4 = 5
        let s = space(2, 2, 3);
        let line = s.subspaces(1).unwrap().next().unwrap();
        let planes = s.subspaces_through(&line, 2).unwrap();
        assert_eq!(planes.len(), 5);
        for pl in &planes {
            assert!(pl.contains_subspace(s.field(), &line));
            assert_eq!(pl.dim(), 2);
        }
        // solids through a plane in PG(4,2): [2]_2 = 3
        let s = space(2, 1, 4);
        let plane = s.subspaces(2).unwrap().next().unwrap();
        let solids = s.subspaces_through(&plane, 3).unwrap();
        assert_eq!(solids.len(), 3);
    }

    #[test]
    fn grassmann_identity() {
        // dim(A) + dim(B) = dim(A ∨ B) + dim(A ∧ B) on seeded random pairs
        use rand::{Rng, SeedableRng};
        let s = space(2, 2, 3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let all_lines: Vec<_> = s.subspaces(1).unwrap().collect();
        let all_planes: Vec<_> = s.subspaces(2).unwrap().collect();
        for _ in 0..200 {
            let a = &all_lines[rng.gen_range(0..all_lines.len())];
            let b = &all_planes[rng.gen_range(0..all_planes.len())];
            let join = s.span(&[a, b]);
            let meet = s.meet(a, b);
            assert_eq!(a.dim() + b.dim(), join.dim() + meet.dim());
            assert!(join.contains_subspace(s.field(), a));
            assert!(meet.rows().is_empty() || a.contains_subspace(s.field(), &meet));
        }
    }

    #[test]
    fn size_guards_fire() {
        // PG(9, 16) has ~1.2e10 points: refuse
        let s = space(2, 4, 9);
        assert!(matches!(s.points(), Err(Error::SizeGuard { .. })));
        // plenty of planes in PG(9,4)
        let s = space(2, 2, 9);
        assert!(matches!(s.subspaces(2), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn subspace_points_roundtrip_membership() {
        let s = space(2, 3, 2);
        for line in s.subspaces(1).unwrap().take(20) {
            for p in line.points(s.field()).unwrap() {
                assert!(s.incident(&line, &p));
                let c = line.coordinates_of(s.field(), &p).unwrap();
                assert_eq!(c.len(), 2);
            }
        }
    }
}
