//! Point sets in PG(N, Q): intersection profiles, hyperoval / KM-arc / even-set /
//! hypercylinder recognition, and the structure-theorem verifiers.
//!
//! Everything here is exact and exhaustive within the size guards; recognizers
//! return `Ok(None)` when recognition genuinely fails, and `Err(Hypothesis)`
//! when the input does not even satisfy the preconditions of the procedure.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::galois::{Elt, Field};
use crate::pg::{theta, Point, Space, Subspace};

/// A finite set of points of PG(N, Q), kept sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    space: Space,
    points: Vec<Point>,
}

/// Serialized form: {"ambient": {"N": .., "Q": [p, m]}, "points": [[int, ..], ..]}
/// with coordinates in the base-p integer encoding of the field elements.
#[derive(Serialize, Deserialize)]
pub struct PointSetDto {
    pub ambient: AmbientDto,
    pub points: Vec<Vec<Elt>>,
}

#[derive(Serialize, Deserialize)]
pub struct AmbientDto {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "Q")]
    pub q: (u32, u32), // (p, m)
}

impl PointSet {
    pub fn new(space: Space, points: Vec<Point>) -> Result<PointSet> {
        let mut pts = points;
        for p in &pts {
            if p.coords().len() != space.width() {
                return Err(Error::Mismatch(format!(
                    "point has {} coordinates, ambient needs {}",
                    p.coords().len(),
                    space.width()
                )));
            }
        }
        pts.sort();
        pts.dedup();
        Ok(PointSet { space, points: pts })
    }

    pub fn empty(space: Space) -> PointSet {
        PointSet { space, points: Vec::new() }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn to_dto(&self) -> PointSetDto {
        let f = self.space.field();
        PointSetDto {
            ambient: AmbientDto { n: self.space.dim(), q: (f.p(), f.degree()) },
            points: self.points.iter().map(|p| p.coords().to_vec()).collect(),
        }
    }

    pub fn from_dto(dto: &PointSetDto) -> Result<PointSet> {
        let f = Field::shared(dto.ambient.q.0, dto.ambient.q.1)?;
        let space = Space::new(f.clone(), dto.ambient.n);
        let pts = dto
            .points
            .iter()
            .map(|v| Point::new(&f, v))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(space, pts)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dto()).expect("point set serializes")
    }

    pub fn from_json(s: &str) -> Result<PointSet> {
        let dto: PointSetDto =
            serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        PointSet::from_dto(&dto)
    }

    /// Exact intersection-size histogram over all k-spaces of the ambient.
    pub fn profile(&self, k: i64) -> Result<Profile> {
        let counts: BTreeMap<u64, u64> = if k == self.space.dim() as i64 - 1 {
            // hyperplane fast path: dual dot products, no RREF streams
            self.space
                .hyperplanes()?
                .par_bridge()
                .fold(BTreeMap::new, |mut acc: BTreeMap<u64, u64>, h| {
                    let f = self.space.field().as_ref();
                    let m = self.points.iter().filter(|p| h.contains(f, p)).count();
                    *acc.entry(m as u64).or_insert(0) += 1;
                    acc
                })
                .reduce(BTreeMap::new, merge_counts)
        } else {
            self.space
                .subspaces(k)?
                .par_bridge()
                .fold(BTreeMap::new, |mut acc: BTreeMap<u64, u64>, s| {
                    let f = self.space.field().as_ref();
                    let m = self.points.iter().filter(|p| s.contains_point(f, p)).count();
                    *acc.entry(m as u64).or_insert(0) += 1;
                    acc
                })
                .reduce(BTreeMap::new, merge_counts)
        };
        let total: u64 = counts.values().sum();
        let expected = self.space.subspace_count(k);
        assert_eq!(
            num_bigint::BigUint::from(total),
            expected,
            "profile counted a wrong number of {k}-spaces"
        );
        Ok(Profile { k, counts })
    }

    /// All k-spaces together with the indices (into `points()`) of the members
    /// of the set they contain.  Internal workhorse for the theorem verifiers.
    fn incidences(&self, k: i64) -> Result<Vec<(Subspace, Vec<usize>)>> {
        let f = self.space.field().as_ref();
        let mut out = Vec::new();
        for s in self.space.subspaces(k)? {
            let members: Vec<usize> = (0..self.points.len())
                .filter(|&i| s.contains_point(f, &self.points[i]))
                .collect();
            out.push((s, members));
        }
        Ok(out)
    }

    /// True iff every line of the ambient meets the set in an even number of
    /// points.  For a nonempty even set over even Q the minimum-size bound
    /// |S| >= Q^{N-1} + 2Q^{N-2} is also asserted; a violation would falsify
    /// the theory this engine implements, so it is reported as `Falsified`.
    pub fn is_even_set(&self) -> Result<bool> {
        let prof = self.profile(1)?;
        if prof.counts.keys().any(|&m| m % 2 != 0) {
            return Ok(false);
        }
        let qu = self.space.q();
        if !self.is_empty() && qu % 2 == 0 && self.space.dim() >= 2 {
            let n = self.space.dim() as u32;
            let bound = qu.pow(n - 1) + 2 * qu.pow(n - 2);
            if (self.len() as u64) < bound {
                return Err(Error::Falsified(format!(
                    "nonempty even set of size {} < {} in PG({}, {})",
                    self.len(),
                    bound,
                    self.space.dim(),
                    qu
                )));
            }
        }
        Ok(true)
    }

    /// KM-arc test in a plane: a set of q+t points of line type (0, 2, t),
    /// every listed size realized.  Returns t on success.  For 1 < t < q the
    /// divisibility t | q and the parity of q are consequences of the theory;
    /// a counterexample surfaces as `Falsified`.
    pub fn recognize_km_arc(&self) -> Result<Option<u64>> {
        if self.space.dim() != 2 {
            return Err(Error::Hypothesis(format!(
                "KM-arc recognition runs in a plane, got PG({}, {})",
                self.space.dim(),
                self.space.q()
            )));
        }
        let q = self.space.q();
        let size = self.len() as u64;
        if size <= q || size > 2 * q + 1 {
            return Ok(None); // t = |S| - q must satisfy 1 <= t <= q+1
        }
        let t = size - q;
        let expected: BTreeSet<u64> = [0, 2, t].into_iter().collect();
        let prof = self.profile(1)?;
        if prof.realized_set() != expected {
            return Ok(None);
        }
        if t > 1 && t < q && !(q % 2 == 0 && q % t == 0) {
            return Err(Error::Falsified(format!(
                "KM-arc of type {t} in PG(2, {q}) but t does not divide even q"
            )));
        }
        Ok(Some(t))
    }

    /// The points of `self` lying in `sub`, re-expressed in internal
    /// coordinates of `sub`, as a point set of PG(dim(sub), Q).
    pub fn restrict_to(&self, sub: &Subspace) -> Result<PointSet> {
        let f = self.space.field();
        let inner = Space::new(f.clone(), sub.dim() as usize);
        let mut pts = Vec::new();
        for p in &self.points {
            if let Some(c) = sub.coordinates_of(f, p) {
                pts.push(Point::new(f, &c)?);
            }
        }
        PointSet::new(inner, pts)
    }

    /// Recognize `self` as a hypercylinder: a cone over a hyperoval with an
    /// (N-3)-dimensional vertex space removed.  Returns the vertex subspace
    /// and the hyperoval base (as ambient points inside a complementary
    /// plane).  Preconditions (even Q, the exact cardinality) error out;
    /// structural failures return `Ok(None)`.
    pub fn recognize_hypercylinder(&self) -> Result<Option<(Subspace, PointSet)>> {
        let n = self.space.dim();
        let q = self.space.q();
        if n < 3 {
            return Err(Error::Hypothesis(format!(
                "hypercylinders live in PG(N, Q) with N >= 3, got N = {n}"
            )));
        }
        if q % 2 != 0 {
            return Err(Error::Hypothesis(format!("Q = {q} must be even")));
        }
        let expect = q.pow(n as u32 - 1) + 2 * q.pow(n as u32 - 2);
        if self.len() as u64 != expect {
            return Err(Error::Hypothesis(format!(
                "size {} != Q^(N-1) + 2 Q^(N-2) = {expect}",
                self.len()
            )));
        }
        if n == 3 {
            self.recognize_hypercylinder_solid()
        } else {
            self.recognize_hypercylinder_recursive()
        }
    }

    // Base case N = 3. A Q-secant line misses the set in exactly one point,
    // the vertex; all Q-secant lines must share it, and the projection from
    // the vertex must be a hyperoval.  Q = 2 is degenerate (2-secants do not
    // concur): there the complement is a plane and any of its points serves
    // as the vertex, so we pick the first for determinism.
    fn recognize_hypercylinder_solid(&self) -> Result<Option<(Subspace, PointSet)>> {
        let f = self.space.field();
        let q = self.space.q();
        let lines = self.incidences(1)?;
        let realized: BTreeSet<u64> =
            lines.iter().map(|(_, m)| m.len() as u64).collect();
        let expected: BTreeSet<u64> = [0, 2, q].into_iter().collect();
        if realized != expected {
            return Ok(None);
        }

        let vertex: Point = if q == 2 {
            let complement: Vec<Point> = self
                .space
                .points()?
                .filter(|p| !self.contains(p))
                .collect();
            let refs: Vec<&Point> = complement.iter().collect();
            let span = self.space.span_points(&refs);
            if span.dim() != 2 || complement.len() as u128 != theta(2, q) {
                return Ok(None);
            }
            complement[0].clone()
        } else {
            let mut v: Option<Point> = None;
            for (line, members) in &lines {
                if members.len() as u64 != q {
                    continue;
                }
                let outside: Vec<Point> = line
                    .points(f)?
                    .into_iter()
                    .filter(|p| !self.contains(p))
                    .collect();
                if outside.len() != 1 {
                    return Ok(None);
                }
                match &v {
                    None => v = Some(outside[0].clone()),
                    Some(w) => {
                        if *w != outside[0] {
                            return Ok(None); // Q-secants do not concur
                        }
                    }
                }
            }
            match v {
                Some(w) => w,
                None => return Ok(None),
            }
        };

        let vertex_sub = self.space.span_points(&[&vertex]);
        self.finish_cone_check(&vertex_sub)
    }

    // Recursive case N > 3, following the classification argument: fix a
    // (Q+2)-secant plane, recognize the section in every solid through it,
    // and check the collected vertices fill out an (N-3)-space.
    fn recognize_hypercylinder_recursive(&self) -> Result<Option<(Subspace, PointSet)>> {
        let f = self.space.field();
        let q = self.space.q();
        let mut base_plane: Option<Subspace> = None;
        for s in self.space.subspaces(2)? {
            let m = self.points.iter().filter(|p| s.contains_point(f, p)).count();
            if m as u64 == q + 2 {
                base_plane = Some(s);
                break;
            }
        }
        let base_plane = match base_plane {
            Some(p) => p,
            None => return Ok(None),
        };

        let solid_size = q * q + 2 * q;
        let mut vertices: BTreeSet<Point> = BTreeSet::new();
        for solid in self.space.subspaces_through(&base_plane, 3)? {
            let section = self.restrict_to(&solid)?;
            if section.len() as u64 != solid_size {
                return Ok(None);
            }
            let (v_sub, _) = match section.recognize_hypercylinder()? {
                Some(x) => x,
                None => return Ok(None),
            };
            // map the section vertex back into ambient coordinates
            let inner = v_sub.rows()[0].clone();
            let mut amb = vec![0; self.space.width()];
            for (i, &c) in inner.iter().enumerate() {
                for (j, a) in amb.iter_mut().enumerate() {
                    *a = f.add(*a, f.mul(c, solid.rows()[i][j]));
                }
            }
            vertices.insert(Point::new(f, &amb)?);
        }

        let refs: Vec<&Point> = vertices.iter().collect();
        let tau = self.space.span_points(&refs);
        let n = self.space.dim() as i64;
        if tau.dim() != n - 3 {
            return Ok(None);
        }
        if vertices.len() as u128 != theta(n - 3, q) {
            return Ok(None); // vertices must fill the whole subspace
        }
        self.finish_cone_check(&tau)
    }

    // Shared tail: given the candidate vertex space tau, read off the base in
    // a complementary plane, confirm it is a hyperoval, and confirm that
    // cone(tau, base) minus tau reproduces the set exactly.
    fn finish_cone_check(&self, tau: &Subspace) -> Result<Option<(Subspace, PointSet)>> {
        let f = self.space.field();
        let q = self.space.q();
        for p in tau.points(f)? {
            if self.contains(&p) {
                return Ok(None); // the vertex space is disjoint from the set
            }
        }

        // complementary plane: extend tau's rows to a full basis, take the
        // span of the three completing vectors
        let mut rows = tau.rows().to_vec();
        let mut completing: Vec<Vec<Elt>> = Vec::new();
        for c in 0..self.space.width() {
            if rows.len() == self.space.width() {
                break;
            }
            let mut e = vec![0; self.space.width()];
            e[c] = 1;
            let mut trial = rows.clone();
            trial.push(e.clone());
            if crate::linalg::rank(f, &trial) == rows.len() + 1 {
                rows.push(e.clone());
                completing.push(e);
            }
        }
        let plane = Subspace::from_rows(f, completing, self.space.width());
        debug_assert_eq!(plane.dim(), 2);

        // project every point of the set from tau into the plane
        let mut base: BTreeSet<Point> = BTreeSet::new();
        for p in &self.points {
            let g = self.space.span(&[tau, &self.space.span_points(&[p])]);
            let hit = self.space.meet(&g, &plane);
            if hit.dim() != 0 {
                return Ok(None);
            }
            base.insert(Point::new(f, &hit.rows()[0])?);
        }
        if base.len() as u64 != q + 2 {
            return Ok(None);
        }
        let base_pts: Vec<Point> = base.iter().cloned().collect();
        let base_set = PointSet::new(self.space.clone(), base_pts.clone())?;
        let inner = base_set.restrict_to(&plane)?;
        if inner.recognize_km_arc()? != Some(2) {
            return Ok(None);
        }

        // cone(tau, base) \ tau must equal the set
        let mut cone: BTreeSet<Point> = BTreeSet::new();
        for b in &base_pts {
            let g = self.space.span(&[tau, &self.space.span_points(&[b])]);
            for p in g.points(f)? {
                if !tau.contains_point(f, &p) {
                    cone.insert(p);
                }
            }
        }
        let ours: BTreeSet<Point> = self.points.iter().cloned().collect();
        if cone != ours {
            return Ok(None);
        }
        Ok(Some((tau.clone(), base_set)))
    }

    /// Swap one member for a uniformly random outside point (seeded callers
    /// get deterministic output).  Used by the falsification harness.
    pub fn perturb_one_point<R: rand::Rng>(&self, rng: &mut R) -> Result<PointSet> {
        if self.is_empty() {
            return Err(Error::Degenerate("cannot perturb the empty set".into()));
        }
        if self.len() as u128 >= self.space.point_count() {
            return Err(Error::Degenerate("set already covers the ambient".into()));
        }
        let f = self.space.field();
        let drop_idx = rng.gen_range(0..self.points.len());
        let replacement = loop {
            let v: Vec<Elt> =
                (0..self.space.width()).map(|_| rng.gen_range(0..f.order())).collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let p = Point::new(f, &v)?;
            if !self.contains(&p) {
                break p;
            }
        };
        let mut pts = self.points.clone();
        pts.remove(drop_idx);
        pts.push(replacement);
        PointSet::new(self.space.clone(), pts)
    }
}

fn merge_counts(mut a: BTreeMap<u64, u64>, b: BTreeMap<u64, u64>) -> BTreeMap<u64, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Intersection-size histogram of a point set against all k-spaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Profile {
    k: i64,
    counts: BTreeMap<u64, u64>,
}

impl Profile {
    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Sizes that actually occur (count > 0), ascending.
    pub fn realized(&self) -> Vec<u64> {
        self.counts.iter().filter(|&(_, &c)| c > 0).map(|(&m, _)| m).collect()
    }

    fn realized_set(&self) -> BTreeSet<u64> {
        self.realized().into_iter().collect()
    }

    /// Every realized size appears in `sizes` (type with braces: a bound).
    pub fn is_type_subset(&self, sizes: &[u64]) -> bool {
        let allowed: BTreeSet<u64> = sizes.iter().copied().collect();
        self.realized_set().is_subset(&allowed)
    }

    /// The realized sizes are exactly `sizes` (type with parentheses: every
    /// listed size occurs).
    pub fn is_type_exact(&self, sizes: &[u64]) -> bool {
        let listed: BTreeSet<u64> = sizes.iter().copied().collect();
        self.realized_set() == listed
    }
}

/// One named check inside a theorem verification run.
#[derive(Debug, Clone, Serialize)]
pub struct ReportItem {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

/// A full verification report, serializable as JSON.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub params: serde_json::Value,
    pub items: Vec<ReportItem>,
}

impl TheoremReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn push(&mut self, name: &str, pass: bool, witness: Option<serde_json::Value>) {
        self.items.push(ReportItem { name: name.into(), pass, witness });
    }
}

fn subspace_witness(s: &Subspace, size: u64) -> serde_json::Value {
    json!({ "rows": s.rows(), "size": size })
}

/// Structure checks for a set of q^2+q+t points in PG(3, q) whose planes cut
/// it in 0, q+2 or q+t points (2 < t <= q+1).  Verifies, by enumeration:
/// no tangent lines; the per-point line census (q^2+q two-secants plus one
/// t-secant); every plane through a t-secant line is (q+t)-secant; through
/// every 2-secant line exactly one (q+t)-secant plane, the rest (q+2)-secant;
/// (q+2)-secant planes cut hyperovals; q is a power of two; line type
/// (0, 2, t); (q+t)-secant planes cut KM-arcs of type t; and t is a power of
/// two not exceeding q.
pub fn verify_plane_km_theorem(s: &PointSet, t: u64) -> Result<TheoremReport> {
    let q = s.space().q();
    let n = s.space().dim();
    if n != 3 {
        return Err(Error::Hypothesis(format!("ambient must be PG(3, q), got N = {n}")));
    }
    if !(t > 2 && t <= q + 1) {
        return Err(Error::Hypothesis(format!("need 2 < t <= q+1, got t = {t}, q = {q}")));
    }
    if s.len() as u64 != q * q + q + t {
        return Err(Error::Hypothesis(format!(
            "size {} != q^2+q+t = {}",
            s.len(),
            q * q + q + t
        )));
    }
    let plane_prof = s.profile(2)?;
    if !plane_prof.is_type_subset(&[0, q + 2, q + t]) {
        return Err(Error::Hypothesis(format!(
            "plane sizes {:?} not within {{0, {}, {}}}",
            plane_prof.realized(),
            q + 2,
            q + t
        )));
    }

    let mut report = TheoremReport {
        theorem: "km_arc_cone_structure_in_solid".into(),
        params: json!({ "q": q, "r": 3, "t": t, "size": s.len() }),
        items: Vec::new(),
    };

    let lines = s.incidences(1)?;
    let planes = s.incidences(2)?;
    let plane_size: BTreeMap<&Subspace, u64> =
        planes.iter().map(|(p, m)| (p, m.len() as u64)).collect();

    // (i) no tangent lines
    let tangent = lines.iter().find(|(_, m)| m.len() == 1);
    report.push(
        "no_tangent_lines",
        tangent.is_none(),
        tangent.map(|(l, _)| subspace_witness(l, 1)),
    );

    // (ii) per point: q^2 + q two-secant lines and exactly one t-secant line
    let mut census: Vec<BTreeMap<u64, u64>> = vec![BTreeMap::new(); s.len()];
    for (_, members) in &lines {
        for &i in members {
            *census[i].entry(members.len() as u64).or_insert(0) += 1;
        }
    }
    let want: BTreeMap<u64, u64> = [(2, q * q + q), (t, 1)].into_iter().collect();
    let bad = census.iter().position(|c| *c != want);
    report.push(
        "point_line_census",
        bad.is_none(),
        bad.map(|i| json!({ "point": s.points()[i].coords(), "census": census[i] })),
    );

    // (iii) all planes through a t-secant line are (q+t)-secant
    let mut wit3 = None;
    'outer3: for (line, members) in &lines {
        if members.len() as u64 != t {
            continue;
        }
        for pl in s.space().subspaces_through(line, 2)? {
            let sz = plane_size[&pl];
            if sz != q + t {
                wit3 = Some(subspace_witness(&pl, sz));
                break 'outer3;
            }
        }
    }
    report.push("planes_through_t_secant", wit3.is_none(), wit3);

    // (iv) per 2-secant line: one (q+t)-secant plane, the rest (q+2)-secant
    let mut wit4 = None;
    'outer4: for (line, members) in &lines {
        if members.len() != 2 {
            continue;
        }
        let mut big = 0u64;
        for pl in s.space().subspaces_through(line, 2)? {
            match plane_size[&pl] {
                x if x == q + t => big += 1,
                x if x == q + 2 => {}
                other => {
                    wit4 = Some(subspace_witness(&pl, other));
                    break 'outer4;
                }
            }
        }
        if big != 1 {
            wit4 = Some(json!({ "rows": line.rows(), "q_plus_t_planes": big }));
            break;
        }
    }
    report.push("planes_through_2_secant", wit4.is_none(), wit4);

    // (v) every (q+2)-secant plane cuts a hyperoval
    let mut wit5 = None;
    for (pl, members) in &planes {
        if members.len() as u64 != q + 2 {
            continue;
        }
        if s.restrict_to(pl)?.recognize_km_arc()? != Some(2) {
            wit5 = Some(subspace_witness(pl, q + 2));
            break;
        }
    }
    report.push("hyperoval_planes", wit5.is_none(), wit5);

    // (vi) q is a power of two
    report.push("q_power_of_two", q.is_power_of_two(), None);

    // (vii) line type exactly (0, 2, t)
    let line_prof = s.profile(1)?;
    let exact = line_prof.is_type_exact(&[0, 2, t]);
    report.push(
        "line_type_0_2_t",
        exact,
        (!exact).then(|| json!({ "realized": line_prof.realized() })),
    );

    // (viii) every (q+t)-secant plane cuts a KM-arc of type t
    let mut wit8 = None;
    for (pl, members) in &planes {
        if members.len() as u64 != q + t {
            continue;
        }
        if s.restrict_to(pl)?.recognize_km_arc()? != Some(t) {
            wit8 = Some(subspace_witness(pl, q + t));
            break;
        }
    }
    report.push("km_arc_planes", wit8.is_none(), wit8);

    // (ix) t is a power of two, at most q
    report.push("t_power_of_two", t.is_power_of_two() && t <= q, None);

    Ok(report)
}

/// Structure checks for a set of q^{r-1}+q^{r-2}+t points in PG(r, q), r >= 4,
/// whose hyperplanes cut it in 0, q^{r-2}+2q^{r-3} or q^{r-2}+t points
/// (2q^{r-3} < t <= q^{r-2}+q-1).  Verifies the eight structural properties
/// by enumeration, the allowed-intersection-size window for every (r-i)-space
/// (1 <= i <= r-2), and the exact line type (0, 2, q).
pub fn verify_space_theorem(s: &PointSet, t: u64) -> Result<TheoremReport> {
    let q = s.space().q();
    let r = s.space().dim() as u32;
    if r < 4 {
        return Err(Error::Hypothesis(format!("ambient must have r >= 4, got r = {r}")));
    }
    if q <= 2 {
        return Err(Error::Hypothesis(format!("need q > 2, got q = {q}")));
    }
    let pw = |e: u32| q.pow(e);
    if !(t > 2 * pw(r - 3) && t <= pw(r - 2) + q - 1) {
        return Err(Error::Hypothesis(format!(
            "need 2q^(r-3) < t <= q^(r-2)+q-1, got t = {t}"
        )));
    }
    if s.len() as u64 != pw(r - 1) + pw(r - 2) + t {
        return Err(Error::Hypothesis(format!(
            "size {} != q^(r-1)+q^(r-2)+t = {}",
            s.len(),
            pw(r - 1) + pw(r - 2) + t
        )));
    }
    let hyper_prof = s.profile(r as i64 - 1)?;
    if !hyper_prof.is_type_subset(&[0, pw(r - 2) + 2 * pw(r - 3), pw(r - 2) + t]) {
        return Err(Error::Hypothesis(format!(
            "hyperplane sizes {:?} not within {{0, {}, {}}}",
            hyper_prof.realized(),
            pw(r - 2) + 2 * pw(r - 3),
            pw(r - 2) + t
        )));
    }

    let mut report = TheoremReport {
        theorem: "km_arc_cone_structure_in_space".into(),
        params: json!({ "q": q, "r": r, "t": t, "size": s.len() }),
        items: Vec::new(),
    };

    // per-dimension incidence tables, reused by several items
    let mut tables: BTreeMap<i64, Vec<(Subspace, Vec<usize>)>> = BTreeMap::new();
    for k in 1..r as i64 {
        tables.insert(k, s.incidences(k)?);
    }

    // (i) k-spaces (2 <= k < r) are empty or at least (q^{k-1}+2q^{k-2})-secant
    let mut wit1 = None;
    'i1: for k in 2..r {
        let low = pw(k - 1) + 2 * pw(k - 2);
        for (sub, members) in &tables[&(k as i64)] {
            let m = members.len() as u64;
            if m != 0 && m < low {
                wit1 = Some(subspace_witness(sub, m));
                break 'i1;
            }
        }
    }
    report.push("low_meets_excluded", wit1.is_none(), wit1);

    // (ii) no tangent lines
    let tangent = tables[&1].iter().find(|(_, m)| m.len() == 1);
    report.push(
        "no_tangent_lines",
        tangent.is_none(),
        tangent.map(|(l, _)| subspace_witness(l, 1)),
    );

    // (iii) a (q^{k-1}+2q^{k-2})-secant k-space exists for 2 <= k <= r-1,
    // and a 2-secant line exists
    let mut missing = Vec::new();
    for k in 2..r {
        let want = pw(k - 1) + 2 * pw(k - 2);
        if !tables[&(k as i64)].iter().any(|(_, m)| m.len() as u64 == want) {
            missing.push(k);
        }
    }
    if !tables[&1].iter().any(|(_, m)| m.len() == 2) {
        missing.push(1);
    }
    report.push(
        "secant_witnesses_exist",
        missing.is_empty(),
        (!missing.is_empty()).then(|| json!({ "missing_dimensions": missing })),
    );

    // (iv) every (q+2)-secant plane cuts a hyperoval
    let mut wit4 = None;
    for (pl, members) in &tables[&2] {
        if members.len() as u64 != q + 2 {
            continue;
        }
        if s.restrict_to(pl)?.recognize_km_arc()? != Some(2) {
            wit4 = Some(subspace_witness(pl, q + 2));
            break;
        }
    }
    report.push("hyperoval_planes", wit4.is_none(), wit4);

    // (v) q is even
    report.push("q_even", q % 2 == 0, None);

    // (vi) every hyperplane through a (q^{r-3}+2q^{r-4})-secant (r-2)-space
    // is (q^{r-2}+2q^{r-3})-secant
    let mut wit6 = None;
    let mid_want = pw(r - 3) + 2 * pw(r - 4);
    let hyper_want = pw(r - 2) + 2 * pw(r - 3);
    'i6: for (sub, members) in &tables[&(r as i64 - 2)] {
        if members.len() as u64 != mid_want {
            continue;
        }
        for h in s.space().subspaces_through(sub, r as i64 - 1)? {
            let f = s.space().field().as_ref();
            let m = s.points().iter().filter(|p| h.contains_point(f, p)).count() as u64;
            if m != hyper_want {
                wit6 = Some(subspace_witness(&h, m));
                break 'i6;
            }
        }
    }
    report.push("hyperplanes_through_mid_secant", wit6.is_none(), wit6);

    // (vii) t = q^{r-2}
    report.push(
        "t_equals_q_to_r_minus_2",
        t == pw(r - 2),
        (t != pw(r - 2)).then(|| json!({ "t": t, "expected": pw(r - 2) })),
    );

    // (viii) for each i in 1..=r-2: every (r-i+1)-space through a
    // (q^{r-i-1}+2q^{r-i-2})-secant (r-i)-space is (q^{r-i}+2q^{r-i-1})-secant
    let mut wit8 = None;
    'i8: for i in 1..=r - 2 {
        let base_want = pw(r - i - 1) + 2 * pw(r - i - 2);
        let up_want = pw(r - i) + 2 * pw(r - i - 1);
        for (sub, members) in &tables[&((r - i) as i64)] {
            if members.len() as u64 != base_want {
                continue;
            }
            for up in s.space().subspaces_through(sub, (r - i + 1) as i64)? {
                let f = s.space().field().as_ref();
                let m =
                    s.points().iter().filter(|p| up.contains_point(f, p)).count() as u64;
                if m != up_want {
                    wit8 = Some(json!({ "i": i, "rows": up.rows(), "size": m }));
                    break 'i8;
                }
            }
        }
    }
    report.push("secant_cascade", wit8.is_none(), wit8);

    // allowed intersection sizes for (r-i)-spaces, 1 <= i <= r-2: the value
    // set {2q^{r-i-1} + c(2q^{r-i-2} - q^{r-i-1}) : -q <= c <= 1} plus 0.
    // Meaningful once t = q^{r-2} (so |S| = q^{r-1}+2q^{r-2}) and q >= 4.
    if q >= 4 && t == pw(r - 2) {
        let mut wit9 = None;
        'i9: for i in 1..=r - 2 {
            let step = 2 * pw(r - i - 2) as i128 - pw(r - i - 1) as i128;
            let mut allowed: BTreeSet<u64> = [0u64].into_iter().collect();
            for c in -(q as i128)..=1 {
                let v = 2 * pw(r - i - 1) as i128 + c * step;
                assert!(v >= 0, "allowed intersection size went negative");
                allowed.insert(v as u64);
            }
            for (sub, members) in &tables[&((r - i) as i64)] {
                let m = members.len() as u64;
                if !allowed.contains(&m) {
                    wit9 = Some(json!({
                        "i": i,
                        "rows": sub.rows(),
                        "size": m,
                        "allowed": allowed,
                    }));
                    break 'i9;
                }
            }
        }
        report.push("intersection_size_window", wit9.is_none(), wit9);
    } else {
        report.push(
            "intersection_size_window",
            false,
            Some(json!({ "reason": "needs q >= 4 and t = q^(r-2)" })),
        );
    }

    // line type exactly (0, 2, q) for even q >= 4
    if q >= 4 && q % 2 == 0 && t == pw(r - 2) {
        let line_prof = s.profile(1)?;
        let exact = line_prof.is_type_exact(&[0, 2, q]);
        report.push(
            "line_type_0_2_q",
            exact,
            (!exact).then(|| json!({ "realized": line_prof.realized() })),
        );
    } else {
        report.push(
            "line_type_0_2_q",
            false,
            Some(json!({ "reason": "needs even q >= 4 and t = q^(r-2)" })),
        );
    }

    Ok(report)
}
