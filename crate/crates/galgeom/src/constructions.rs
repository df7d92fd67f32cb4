//! Builders for the engine's geometric objects: maximum h-scattered linear
//! sets from Moore-type blocks, cones over them, the two affine-extension
//! constructions (a linear set B and a mixed set K), conic-plus-nucleus
//! hyperovals, and hypercylinders.
//!
//! Every builder re-verifies its output by enumeration before returning it:
//! correctness is never assumed from the construction recipe alone.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::{Elt, Field, Tower};
use crate::linset::{predicted_t, LinearSet, LinearSetDto};
use crate::pg::{space_size, theta, Point, Space, Subspace};
use crate::psets::{PointSet, PointSetDto};

/// [m]_q, the number of points of PG(m-1, q).
fn br(m: i64, q: u64) -> BigUint {
    space_size(m - 1, q)
}

fn bpow(q: u64, e: i64) -> BigUint {
    assert!(e >= 0, "negative power of q in a size formula");
    BigUint::from(q).pow(e as u32)
}

/// Direct sum of r/(h+1) Moore blocks {(x, x^q, ..., x^(q^h))}, one basis
/// vector per power of the tower generator.  The result is checked to be a
/// properly maximum h-scattered linear set by exhaustive enumeration and the
/// call fails if the check does not go through.
pub fn moore_h_scattered(tower: Arc<Tower>, r: usize, h: usize) -> Result<LinearSet> {
    let n = tower.n() as usize;
    if h == 0 {
        return Err(Error::Param("h must be at least 1".into()));
    }
    if r == 0 || r % (h + 1) != 0 {
        return Err(Error::Param(format!("h + 1 = {} must divide r = {r}", h + 1)));
    }
    if n < h + 1 {
        return Err(Error::Param(format!("need n >= h + 1, got n = {n}, h = {h}")));
    }
    let blocks = r / (h + 1);
    let mut basis = Vec::with_capacity(blocks * n);
    for b in 0..blocks {
        for j in 0..n {
            let mut v = vec![0; r];
            let mut x = tower.basis_elt(j as u32); // gamma^j
            for s in 0..=h {
                v[b * (h + 1) + s] = x;
                x = tower.frobenius(x);
            }
            basis.push(v);
        }
    }
    let ls = LinearSet::new(tower, r, basis)?;
    if !ls.is_properly_maximum(h)? {
        return Err(Error::Verification(format!(
            "Moore block set for (r, h) = ({r}, {h}) failed the scatteredness re-check"
        )));
    }
    Ok(ls)
}

/// A cone in PG(r-1, q^n): base linear set on the first d coordinates,
/// vertex subspace spanned by the last r-d coordinates, and the assembled
/// linear set U = U_1 x GF(q^n)^(r-d).
#[derive(Clone)]
pub struct ConeSpec {
    base: LinearSet,
    assembled: LinearSet,
    vertex: Subspace,
    r: usize,
    d: usize,
    h: usize,
}

#[derive(Serialize)]
pub struct ConeSpecDto {
    pub q: u64,
    pub n: u32,
    pub r: usize,
    pub d: usize,
    pub h: usize,
    pub base: LinearSetDto,
    pub cone: LinearSetDto,
}

/// Assemble the cone over a properly maximum h-scattered base (h is inferred
/// from the base rank).  The assembled set is re-verified against the exact
/// rank, size and weight-spectrum predictions before it is returned.
pub fn cone(base: &LinearSet, r: usize) -> Result<ConeSpec> {
    let tower = base.tower().clone();
    let n = tower.n() as usize;
    let d = base.r();
    if d == 0 || d > r {
        return Err(Error::Param(format!("need 1 <= d <= r, got d = {d}, r = {r}")));
    }
    if n < 2 {
        return Err(Error::Param("a tower with n = 1 has no cone structure".into()));
    }
    let k = base.rank();
    if k == 0 || (d * n) % k != 0 || (d * n) / k < 2 {
        return Err(Error::Hypothesis(format!(
            "base rank {k} is not dn/(h+1) for any h >= 1 (d = {d}, n = {n})"
        )));
    }
    let h = (d * n) / k - 1;
    if !base.is_properly_maximum(h)? {
        return Err(Error::Hypothesis(
            "cone base must be a properly maximum h-scattered linear set".into(),
        ));
    }

    let mut basis: Vec<Vec<Elt>> = base
        .basis()
        .iter()
        .map(|b| {
            let mut v = vec![0; r];
            v[..d].copy_from_slice(b);
            v
        })
        .collect();
    for j in 0..(r - d) {
        for i in 0..n {
            let mut v = vec![0; r];
            v[d + j] = tower.basis_elt(i as u32);
            basis.push(v);
        }
    }
    let assembled = LinearSet::new(tower.clone(), r, basis)?;

    let f = tower.ext();
    let vrows: Vec<Vec<Elt>> = (d..r)
        .map(|c| {
            let mut e = vec![0; r];
            e[c] = 1;
            e
        })
        .collect();
    let vertex = Subspace::from_rows(f, vrows, r);

    let spec = ConeSpec { base: base.clone(), assembled, vertex, r, d, h };
    spec.verify()?;
    Ok(spec)
}

impl ConeSpec {
    pub fn base(&self) -> &LinearSet {
        &self.base
    }

    pub fn linset(&self) -> &LinearSet {
        &self.assembled
    }

    pub fn vertex(&self) -> &Subspace {
        &self.vertex
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn h(&self) -> usize {
        self.h
    }

    fn q(&self) -> u64 {
        self.assembled.tower().q() as u64
    }

    fn n(&self) -> usize {
        self.assembled.tower().n() as usize
    }

    fn qn(&self) -> u64 {
        self.assembled.tower().ext().order() as u64
    }

    /// dn/(h+1), the rank of the base.
    fn kk(&self) -> i64 {
        (self.d * self.n() / (self.h + 1)) as i64
    }

    // rank = dn/(h+1) + n(r-d); size = q^{n(r-d)} [dn/(h+1)]_q + [r-d]_{q^n};
    // weights are 1 away from the vertex and n on it.
    fn verify(&self) -> Result<()> {
        let (q, n, qn) = (self.q(), self.n(), self.qn());
        let (r, d) = (self.r, self.d);
        let want_rank = self.kk() as usize + n * (r - d);
        if self.assembled.rank() != want_rank {
            return Err(Error::Verification(format!(
                "cone rank {} != {want_rank}",
                self.assembled.rank()
            )));
        }
        let want_size = bpow(q, (n * (r - d)) as i64) * br(self.kk(), q)
            + br((r - d) as i64, qn);
        if BigUint::from(self.assembled.size()) != want_size {
            return Err(Error::Verification(format!(
                "cone size {} != {want_size}",
                self.assembled.size()
            )));
        }
        let spectrum = self.assembled.weight_spectrum();
        if spectrum.keys().any(|&w| w != 1 && w != n) {
            return Err(Error::Verification(format!(
                "cone weight spectrum {spectrum:?} escapes {{1, {n}}}"
            )));
        }
        let weight_n = spectrum.get(&n).copied().unwrap_or(0);
        if u128::from(weight_n) != theta(r as i64 - d as i64 - 1, qn) {
            return Err(Error::Verification(format!(
                "{} weight-{} points, vertex has {}",
                weight_n,
                n,
                theta(r as i64 - d as i64 - 1, qn)
            )));
        }
        let f = self.assembled.tower().ext();
        for p in self.vertex.points(f)? {
            if self.assembled.point_weight(&p)? != n {
                return Err(Error::Verification(format!(
                    "vertex point {:?} does not have weight {n}",
                    p.coords()
                )));
            }
        }
        Ok(())
    }

    /// Exact predicted hyperplane census of the cone: hyperplanes through the
    /// vertex split by the base weight classes (counts t_i), all others share
    /// a single size.
    pub fn expected_hyperplane_profile(&self) -> Result<BTreeMap<BigUint, BigUint>> {
        let (q, n, qn) = (self.q(), self.n(), self.qn());
        let (r, d, h) = (self.r, self.d, self.h);
        let t = predicted_t(q, n as u64, d as u64, h as u64)?;
        let mut out: BTreeMap<BigUint, BigUint> = BTreeMap::new();
        for (i, ti) in t.iter().enumerate() {
            let gamma = self.kk() - n as i64 + i as i64;
            if gamma < 0 {
                return Err(Error::Param("base weight range dips below zero".into()));
            }
            let size = bpow(q, (n * (r - d)) as i64) * br(gamma, q)
                + br((r - d) as i64, qn);
            *out.entry(size).or_default() += ti.clone();
        }
        if r > d {
            let size = bpow(q, (n * (r - d - 1)) as i64) * br(self.kk(), q)
                + br((r - d - 1) as i64, qn);
            let rest = BigUint::from(theta(r as i64 - 1, qn))
                - BigUint::from(theta(d as i64 - 1, qn));
            *out.entry(size).or_default() += rest;
        }
        Ok(out)
    }

    pub fn to_dto(&self) -> ConeSpecDto {
        ConeSpecDto {
            q: self.q(),
            n: self.n() as u32,
            r: self.r,
            d: self.d,
            h: self.h,
            base: self.base.to_dto(),
            cone: self.assembled.to_dto(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dto()).expect("cone spec serializes")
    }
}

/// Which of the two affine extensions of a cone is materialized.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// B = the linear set of U' = U + <y>_Fq.
    One,
    /// K = (affine part of B) together with the complement of the cone at
    /// infinity.
    Two,
}

/// A cone extended into PG(r, q^n) by the affine point y = e_{r+1}; holds
/// U' and the materialized point set (B or K).
pub struct AffineExtension {
    cone: ConeSpec,
    variant: Variant,
    uprime: LinearSet,
    points: PointSet,
}

#[derive(Serialize)]
pub struct AffineExtensionDto {
    pub variant: Variant,
    pub cone: ConeSpecDto,
    pub uprime: LinearSetDto,
    pub points: PointSetDto,
}

pub fn construction_one(cone: &ConeSpec) -> Result<AffineExtension> {
    extend(cone, Variant::One)
}

pub fn construction_two(cone: &ConeSpec) -> Result<AffineExtension> {
    extend(cone, Variant::Two)
}

fn extend(cone: &ConeSpec, variant: Variant) -> Result<AffineExtension> {
    let tower = cone.assembled.tower().clone();
    let f = tower.ext().clone();
    let r = cone.r;

    // U' = U + <e_{r+1}>_Fq inside GF(q^n)^{r+1}
    let mut basis: Vec<Vec<Elt>> = cone
        .assembled
        .basis()
        .iter()
        .map(|b| {
            let mut v = b.clone();
            v.push(0);
            v
        })
        .collect();
    let mut y = vec![0; r + 1];
    y[r] = f.one();
    basis.push(y);
    let uprime = LinearSet::new(tower.clone(), r + 1, basis)?;

    // the cone's points on the hyperplane at infinity (last coordinate 0)
    let at_infinity: BTreeSet<Point> = cone
        .assembled
        .points()
        .iter()
        .map(|p| {
            let mut c = p.coords().to_vec();
            c.push(0);
            Point::new(&f, &c)
        })
        .collect::<Result<_>>()?;

    let space = Space::new(f.clone(), r);
    let pts: Vec<Point> = match variant {
        Variant::One => uprime.points().iter().cloned().collect(),
        Variant::Two => {
            let mut out: Vec<Point> = uprime
                .points()
                .iter()
                .filter(|p| !at_infinity.contains(p))
                .cloned()
                .collect();
            for p in Space::new(f.clone(), r - 1).points()? {
                let mut c = p.coords().to_vec();
                c.push(0);
                let lifted = Point::new(&f, &c)?;
                if !at_infinity.contains(&lifted) {
                    out.push(lifted);
                }
            }
            out
        }
    };
    let points = PointSet::new(space, pts)?;

    let ae = AffineExtension { cone: cone.clone(), variant, uprime, points };
    ae.verify(&at_infinity)?;
    Ok(ae)
}

impl AffineExtension {
    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// U' itself; for variant One its linear set is exactly the point set.
    pub fn linset(&self) -> &LinearSet {
        &self.uprime
    }

    pub fn point_set(&self) -> &PointSet {
        &self.points
    }

    pub fn expected_size(&self) -> BigUint {
        let c = &self.cone;
        let (q, n, qn) = (c.q(), c.n(), c.qn());
        let (r, d) = (c.r, c.d);
        match self.variant {
            Variant::One => {
                bpow(q, (n * (r - d)) as i64) * br(c.kk() + 1, q) + br((r - d) as i64, qn)
            }
            Variant::Two => {
                let inner = BigInt::from(br(d as i64, qn)) - BigInt::from(br(c.kk(), q))
                    + BigInt::from(bpow(q, c.kk()));
                let inner = inner.to_biguint().expect("size formula is positive");
                bpow(q, (n * (r - d)) as i64) * inner
            }
        }
    }

    fn verify(&self, at_infinity: &BTreeSet<Point>) -> Result<()> {
        let c = &self.cone;
        let (q, n, qn) = (c.q(), c.n(), c.qn());
        let (r, d) = (c.r, c.d);
        if BigUint::from(self.points.len() as u64) != self.expected_size() {
            return Err(Error::Verification(format!(
                "extension size {} != {}",
                self.points.len(),
                self.expected_size()
            )));
        }
        // boundary behaviour at infinity
        let on_wall: BTreeSet<Point> = self
            .points
            .points()
            .iter()
            .filter(|p| *p.coords().last().expect("nonempty coords") == 0)
            .cloned()
            .collect();
        match self.variant {
            Variant::One => {
                if on_wall != *at_infinity {
                    return Err(Error::Verification(
                        "B does not meet the wall at infinity in the cone".into(),
                    ));
                }
            }
            Variant::Two => {
                if on_wall.iter().any(|p| at_infinity.contains(p)) {
                    return Err(Error::Verification(
                        "K keeps cone points at infinity".into(),
                    ));
                }
                let wall_total = theta(r as i64 - 1, qn);
                if on_wall.len() as u128 != wall_total - at_infinity.len() as u128 {
                    return Err(Error::Verification(
                        "K misses part of the complement at infinity".into(),
                    ));
                }
                if q == 2 {
                    // the q = 2 size simplification must agree
                    let simplified =
                        bpow(2, (n * (r - d)) as i64) * (br(d as i64, qn) + BigUint::from(1u32));
                    if BigUint::from(self.points.len() as u64) != simplified {
                        return Err(Error::Verification(
                            "q = 2 size simplification disagrees".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The exact set of hyperplane-intersection sizes the construction
    /// realizes (every value here occurs, and no others do).
    pub fn expected_hyperplane_sizes(&self) -> Result<BTreeSet<BigUint>> {
        let (sizes, _) = self.hyperplane_size_bookkeeping()?;
        Ok(sizes)
    }

    /// Values that the counting argument rules out: the vertex-free analogue
    /// through a heavy wall hyperplane, and the empty-affine case at i = 0.
    /// They are absent from the realized profile unless they numerically
    /// collide with a realized value.
    pub fn excluded_hyperplane_sizes(&self) -> Result<Vec<BigUint>> {
        let (_, excluded) = self.hyperplane_size_bookkeeping()?;
        Ok(excluded)
    }

    fn hyperplane_size_bookkeeping(&self) -> Result<(BTreeSet<BigUint>, Vec<BigUint>)> {
        let c = &self.cone;
        let (q, n, qn) = (c.q(), c.n(), c.qn());
        let (r, d, h) = (c.r, c.d, c.h);
        let kk = c.kk();
        let scale = bpow(q, (n * (r - d)) as i64);
        let wall_scale = if r > d { bpow(q, (n * (r - d - 1)) as i64) } else { BigUint::from(0u32) };

        let nonneg = |v: BigInt| -> Result<BigUint> {
            v.to_biguint()
                .ok_or_else(|| Error::Param("size formula went negative".into()))
        };

        let mut realized: BTreeSet<BigUint> = BTreeSet::new();
        let mut excluded: Vec<BigUint> = Vec::new();
        match self.variant {
            Variant::One => {
                // the wall itself
                realized.insert(scale.clone() * br(kk, q) + br((r - d) as i64, qn));
                // heavy wall-hyperplane pencils: always carry affine points
                if r > d {
                    realized.insert(
                        wall_scale.clone() * br(kk + 1, q) + br((r - d - 1) as i64, qn),
                    );
                    excluded.push(wall_scale.clone() * br(kk, q) + br((r - d - 1) as i64, qn));
                }
                for i in 0..=h as i64 {
                    let gamma = kk - n as i64 + i;
                    if gamma < 0 {
                        return Err(Error::Param("weight range dips below zero".into()));
                    }
                    let with_affine = scale.clone() * (br(gamma, q) + bpow(q, gamma))
                        + br((r - d) as i64, qn);
                    realized.insert(with_affine);
                    let without = scale.clone() * br(gamma, q) + br((r - d) as i64, qn);
                    if i >= 1 {
                        realized.insert(without);
                    } else {
                        excluded.push(without);
                    }
                }
            }
            Variant::Two => {
                let d_qn = BigInt::from(br(d as i64, qn));
                let dm1_qn = BigInt::from(br(d as i64 - 1, qn));
                let k_q = BigInt::from(br(kk, q));
                realized.insert(nonneg((d_qn.clone() - k_q.clone()) * BigInt::from(scale.clone()))?);
                if r > d {
                    let with_affine = (d_qn.clone() - k_q.clone() + BigInt::from(bpow(q, kk)))
                        * BigInt::from(wall_scale.clone());
                    realized.insert(nonneg(with_affine)?);
                    excluded.push(nonneg((d_qn - k_q) * BigInt::from(wall_scale))?);
                }
                for i in 0..=h as i64 {
                    let gamma = kk - n as i64 + i;
                    if gamma < 0 {
                        return Err(Error::Param("weight range dips below zero".into()));
                    }
                    let g_q = BigInt::from(br(gamma, q));
                    let with_affine = (dm1_qn.clone() - g_q.clone()
                        + BigInt::from(bpow(q, gamma)))
                        * BigInt::from(scale.clone());
                    realized.insert(nonneg(with_affine)?);
                    let without = (dm1_qn.clone() - g_q) * BigInt::from(scale.clone());
                    if i >= 1 {
                        realized.insert(nonneg(without)?);
                    } else {
                        excluded.push(nonneg(without)?);
                    }
                }
            }
        }
        Ok((realized, excluded))
    }

    pub fn to_dto(&self) -> AffineExtensionDto {
        AffineExtensionDto {
            variant: self.variant,
            cone: self.cone.to_dto(),
            uprime: self.uprime.to_dto(),
            points: self.points.to_dto(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dto()).expect("extension serializes")
    }
}

/// The hyperoval {(1 : t : t^2)} together with (0:0:1) and the nucleus
/// (0:1:0) in PG(2, q), q even.  Verified to have q+2 points and line type
/// exactly (0, 2).
pub fn hyperoval_conic_nucleus(f: Arc<Field>) -> Result<PointSet> {
    let q = f.order() as u64;
    if q % 2 != 0 {
        return Err(Error::Param(format!(
            "conic-plus-nucleus hyperovals need even q, got {q}"
        )));
    }
    let sp = Space::new(f.clone(), 2);
    let mut pts = Vec::new();
    for t in f.elements() {
        pts.push(Point::new(&f, &[f.one(), t, f.mul(t, t)])?);
    }
    pts.push(Point::new(&f, &[0, 0, 1])?);
    pts.push(Point::new(&f, &[0, 1, 0])?);
    let s = PointSet::new(sp, pts)?;
    if s.len() as u64 != q + 2 {
        return Err(Error::Verification(format!(
            "hyperoval has {} points, wanted {}",
            s.len(),
            q + 2
        )));
    }
    if s.recognize_km_arc()? != Some(2) {
        return Err(Error::Verification(
            "conic plus nucleus failed the hyperoval line-type check".into(),
        ));
    }
    Ok(s)
}

/// The cone in PG(r, q) over a hyperoval (placed in the first three
/// coordinates) with vertex spanned by the remaining r-2 unit vectors,
/// vertex removed: the direct product of the hyperoval with all tails in
/// GF(q)^(r-2).  Returns the point set and the canonical vertex subspace.
pub fn hypercylinder(r: usize, hyperoval: &PointSet) -> Result<(PointSet, Subspace)> {
    if r < 3 {
        return Err(Error::Param(format!("hypercylinders need r >= 3, got {r}")));
    }
    if hyperoval.space().dim() != 2 {
        return Err(Error::Mismatch("hyperoval must live in a plane".into()));
    }
    if hyperoval.recognize_km_arc()? != Some(2) {
        return Err(Error::Hypothesis("base is not a hyperoval".into()));
    }
    let f = hyperoval.space().field().clone();
    let q = f.order() as u64;
    let total = (q + 2) * q.pow((r - 2) as u32);
    if u128::from(total) > crate::pg::MAX_POINTS {
        return Err(Error::SizeGuard {
            what: format!("hypercylinder points in PG({r}, {q})"),
            count: u128::from(total),
            limit: crate::pg::MAX_POINTS,
        });
    }
    let width = r + 1;
    let space = Space::new(f.clone(), r);
    let mut pts = Vec::with_capacity(total as usize);
    for b in hyperoval.points() {
        // every tail in GF(q)^(r-2); the leading coordinate stays in the
        // hyperoval part, so each product vector is already normalized
        for t in 0..q.pow((r - 2) as u32) {
            let mut c = b.coords().to_vec();
            let mut v = t;
            for _ in 0..(r - 2) {
                c.push((v % q) as Elt);
                v /= q;
            }
            pts.push(Point::new(&f, &c)?);
        }
    }
    let set = PointSet::new(space, pts)?;
    if set.len() as u64 != total {
        return Err(Error::Verification(format!(
            "hypercylinder has {} points, wanted {total}",
            set.len()
        )));
    }
    let vrows: Vec<Vec<Elt>> = (3..width)
        .map(|c| {
            let mut e = vec![0; width];
            e[c] = 1;
            e
        })
        .collect();
    let vertex = Subspace::from_rows(&f, vrows, width);
    for p in vertex.points(&f)? {
        if set.contains(&p) {
            return Err(Error::Verification("hypercylinder contains a vertex point".into()));
        }
    }
    Ok((set, vertex))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(p: u32, e: u32, n: u32) -> Arc<Tower> {
        Arc::new(Tower::new(p, e, n).unwrap())
    }

    #[test]
    fn moore_scattered_line_gf4() {
        let ls = moore_h_scattered(tower(2, 1, 2), 2, 1).unwrap();
        assert_eq!(ls.rank(), 2);
        assert_eq!(ls.size(), 3);
        let prof = ls.hyperplane_profile().unwrap();
        let sizes = prof.size_counts();
        assert_eq!(sizes[&0], 2);
        assert_eq!(sizes[&1], 3);
    }

    #[test]
    fn moore_rejects_bad_parameters() {
        assert!(moore_h_scattered(tower(2, 1, 2), 3, 1).is_err()); // 2 does not divide 3
        assert!(moore_h_scattered(tower(2, 1, 2), 3, 2).is_err()); // n < h+1
    }

    #[test]
    fn cone_2_2_3_2_1_matches_every_prediction() {
        let base = moore_h_scattered(tower(2, 1, 2), 2, 1).unwrap();
        let c = cone(&base, 3).unwrap();
        assert_eq!(c.h(), 1);
        assert_eq!(c.linset().rank(), 4);
        assert_eq!(c.linset().size(), 13); // 4*3 + 1
        assert_eq!(c.vertex().dim(), 0);

        let expected = c.expected_hyperplane_profile().unwrap();
        let counted = c.linset().hyperplane_profile().unwrap().size_counts();
        let counted_big: BTreeMap<BigUint, BigUint> = counted
            .iter()
            .map(|(&s, &m)| (BigUint::from(s), BigUint::from(m)))
            .collect();
        assert_eq!(expected, counted_big);
        // concretely: 2 hyperplanes of size 1, 3 of size 5, 16 of size 3
        assert_eq!(counted[&1], 2);
        assert_eq!(counted[&5], 3);
        assert_eq!(counted[&3], 16);
    }

    #[test]
    fn cone_with_d_equal_r_is_the_base() {
        let base = moore_h_scattered(tower(2, 1, 2), 2, 1).unwrap();
        let c = cone(&base, 2).unwrap();
        assert_eq!(c.vertex().dim(), -1);
        assert_eq!(c.linset().points(), base.points());
    }

    #[test]
    fn construction_one_baer_subplane() {
        // r = d: B in PG(2, 4) with [rn/(h+1)+1]_q = [3]_2 = 7 points
        let base = moore_h_scattered(tower(2, 1, 2), 2, 1).unwrap();
        let c = cone(&base, 2).unwrap();
        let b = construction_one(&c).unwrap();
        assert_eq!(b.point_set().len(), 7);
        let prof = b.point_set().profile(1).unwrap();
        assert!(prof.is_type_exact(&[1, 3]));
        let expected: BTreeSet<u64> = b
            .expected_hyperplane_sizes()
            .unwrap()
            .into_iter()
            .map(|v| u64::try_from(v).unwrap())
            .collect();
        assert_eq!(expected, [1u64, 3].into_iter().collect());
        for excl in b.excluded_hyperplane_sizes().unwrap() {
            let val = u64::try_from(excl).unwrap();
            assert!(!prof.realized().contains(&val));
        }
    }

    #[test]
    fn construction_one_with_vertex() {
        let base = moore_h_scattered(tower(2, 1, 2), 2, 1).unwrap();
        let c = cone(&base, 3).unwrap();
        let b = construction_one(&c).unwrap();
        assert_eq!(b.point_set().len(), 29); // 4*[3]_2 + 1
        assert_eq!(b.linset().rank(), 5);
        let prof = b.point_set().profile(2).unwrap();
        let realized: BTreeSet<u64> = prof.realized().into_iter().collect();
        let expected: BTreeSet<u64> = b
            .expected_hyperplane_sizes()
            .unwrap()
            .into_iter()
            .map(|v| u64::try_from(v).unwrap())
            .collect();
        assert_eq!(realized, expected);
    }

    #[test]
    fn construction_two_hyperoval() {
        let base = moore_h_scattered(tower(2, 1, 2), 2, 1).unwrap();
        let c = cone(&base, 2).unwrap();
        let k = construction_two(&c).unwrap();
        assert_eq!(k.point_set().len(), 6); // [2]_4 - [2]_2 + 4
        assert_eq!(k.point_set().recognize_km_arc().unwrap(), Some(2));
        let prof = k.point_set().profile(1).unwrap();
        assert!(prof.is_type_exact(&[0, 2]));
    }

    #[test]
    fn construction_two_sizes() {
        let base = moore_h_scattered(tower(2, 1, 2), 2, 1).unwrap();
        let c = cone(&base, 3).unwrap();
        let k = construction_two(&c).unwrap();
        assert_eq!(k.point_set().len(), 24); // 4*(5 - 3 + 4)
    }

    #[test]
    fn hyperoval_constructor_sizes() {
        for (p, m) in [(2, 1), (2, 2), (2, 3)] {
            let f = Field::shared(p, m).unwrap();
            let q = f.order() as u64;
            let s = hyperoval_conic_nucleus(f).unwrap();
            assert_eq!(s.len() as u64, q + 2);
        }
        assert!(hyperoval_conic_nucleus(Field::shared(3, 1).unwrap()).is_err());
    }

    #[test]
    fn hypercylinder_sizes_and_vertex() {
        let f = Field::shared(2, 2).unwrap();
        let hyp = hyperoval_conic_nucleus(f).unwrap();
        let (s, vertex) = hypercylinder(3, &hyp).unwrap();
        assert_eq!(s.len(), 24);
        assert_eq!(vertex.dim(), 0);
        let (s4, vertex4) = hypercylinder(4, &hyp).unwrap();
        assert_eq!(s4.len(), 96);
        assert_eq!(vertex4.dim(), 1);
    }

    #[test]
    fn hypercylinder_q2_is_hyperplane_complement() {
        let f = Field::shared(2, 1).unwrap();
        let hyp = hyperoval_conic_nucleus(f.clone()).unwrap();
        let (s, _) = hypercylinder(3, &hyp).unwrap();
        assert_eq!(s.len(), 8);
        let complement: Vec<Point> = s
            .space()
            .points()
            .unwrap()
            .filter(|p| !s.contains(p))
            .collect();
        assert_eq!(complement.len(), 7);
        let refs: Vec<&Point> = complement.iter().collect();
        assert_eq!(s.space().span_points(&refs).dim(), 2);
    }
}
