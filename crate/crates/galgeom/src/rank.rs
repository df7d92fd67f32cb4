//! Rank-metric codes in GF(q^n)^ell: the code/system correspondence, rank
//! weights computed two independent ways (entry span versus hyperplane
//! intersection), and the few-weight codes cut out of cones and their
//! affine extensions.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use serde::Serialize;

use crate::constructions;
use crate::error::{Error, Result};
use crate::galois::{Elt, Tower};
use crate::linalg;

/// dim over GF(q) of the span of the entries of v (entries live in GF(q^n)).
pub fn rank_weight(tower: &Tower, v: &[Elt]) -> usize {
    let rows: Vec<Vec<Elt>> = v.iter().map(|&x| tower.coords(x)).collect();
    linalg::rank(tower.base(), &rows)
}

/// An F_q-subspace U of GF(q^n)^k of F_q-dimension ell whose GF(q^n)-span
/// is the whole space, held by an F_q-basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankSystem {
    tower: Arc<Tower>,
    k: usize,
    basis: Vec<Vec<Elt>>,
}

impl RankSystem {
    pub fn new(tower: Arc<Tower>, k: usize, basis: Vec<Vec<Elt>>) -> Result<RankSystem> {
        if k == 0 || basis.is_empty() {
            return Err(Error::Param("a system needs a positive dimension".into()));
        }
        if basis.iter().any(|v| v.len() != k) {
            return Err(Error::Mismatch("basis vectors must have length k".into()));
        }
        let flat: Vec<Vec<Elt>> = basis.iter().map(|v| tower.flatten(v)).collect();
        if linalg::rank(tower.base(), &flat) != basis.len() {
            return Err(Error::Degenerate("basis is F_q-dependent".into()));
        }
        if linalg::rank(tower.ext(), &basis) != k {
            return Err(Error::Degenerate(
                "system does not span GF(q^n)^k over GF(q^n)".into(),
            ));
        }
        Ok(RankSystem { tower, k, basis })
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// ell = dim_{F_q} U.
    pub fn ell(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Elt>] {
        &self.basis
    }
}

/// A GF(q^n)-linear code of length ell and dimension k, with the exact
/// rank-weight distribution cached when the codeword count permits.
#[derive(Clone, Debug)]
pub struct RankCode {
    tower: Arc<Tower>,
    k: usize,
    ell: usize,
    rows: Vec<Vec<Elt>>,
    dist: Option<BTreeMap<usize, u64>>,
}

#[derive(Serialize)]
pub struct RankCodeDto {
    pub tower: (u32, u32, u32),
    pub k: usize,
    pub n: usize,
    pub rows: Vec<Vec<Elt>>,
}

impl RankCode {
    pub fn from_rows(tower: Arc<Tower>, rows: Vec<Vec<Elt>>) -> Result<RankCode> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::Param("a code needs at least one generator row".into()));
        }
        let ell = rows[0].len();
        if ell == 0 || rows.iter().any(|r| r.len() != ell) {
            return Err(Error::Param("generator rows must share a positive length".into()));
        }
        if linalg::rank(tower.ext(), &rows) != k {
            return Err(Error::Degenerate("generator rows are GF(q^n)-dependent".into()));
        }
        let mut code = RankCode { tower, k, ell, rows, dist: None };
        let qn = code.tower.ext().order() as u64;
        if BigUint::from(qn).pow(k as u32) <= BigUint::from(crate::pg::MAX_POINTS) {
            code.dist = Some(code.sweep_distribution()?);
        }
        Ok(code)
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Length of the code (number of columns).
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn rows(&self) -> &[Vec<Elt>] {
        &self.rows
    }

    fn column(&self, j: usize) -> Vec<Elt> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Columns F_q-independent.
    pub fn is_nondegenerate(&self) -> bool {
        let cols: Vec<Vec<Elt>> = (0..self.ell)
            .map(|j| self.tower.flatten(&self.column(j)))
            .collect();
        linalg::rank(self.tower.base(), &cols) == self.ell
    }

    fn codeword(&self, x: &[Elt]) -> Vec<Elt> {
        let f = self.tower.ext();
        (0..self.ell)
            .map(|j| {
                let mut acc = 0;
                for (i, &xi) in x.iter().enumerate() {
                    acc = f.add(acc, f.mul(xi, self.rows[i][j]));
                }
                acc
            })
            .collect()
    }

    // exact distribution by sweeping every message vector in GF(q^n)^k
    fn sweep_distribution(&self) -> Result<BTreeMap<usize, u64>> {
        let qn = self.tower.ext().order() as u64;
        let total = qn.pow(self.k as u32);
        let n = self.tower.n() as usize;
        let mut dist: BTreeMap<usize, u64> = BTreeMap::new();
        let mut x = vec![0 as Elt; self.k];
        for counter in 0..total {
            if counter > 0 {
                let mut pos = 0;
                loop {
                    x[pos] += 1;
                    if (x[pos] as u64) < qn {
                        break;
                    }
                    x[pos] = 0;
                    pos += 1;
                }
            }
            let w = rank_weight(&self.tower, &self.codeword(&x));
            if w > self.ell.min(n) {
                return Err(Error::Verification(format!(
                    "rank weight {w} exceeds min(ell, n) = {}",
                    self.ell.min(n)
                )));
            }
            *dist.entry(w).or_default() += 1;
        }
        Ok(dist)
    }

    /// rank weight -> number of codewords; cached at construction when the
    /// sweep fits the guard.
    pub fn rank_distribution(&self) -> Result<&BTreeMap<usize, u64>> {
        self.dist.as_ref().ok_or_else(|| Error::SizeGuard {
            what: format!("codewords of a [{}, {}] rank code", self.ell, self.k),
            count: BigUint::from(self.tower.ext().order() as u64)
                .pow(self.k as u32)
                .try_into()
                .unwrap_or(u128::MAX),
            limit: crate::pg::MAX_POINTS,
        })
    }

    pub fn min_distance(&self) -> Result<usize> {
        let dist = self.rank_distribution()?;
        dist.keys()
            .find(|&&w| w > 0)
            .copied()
            .ok_or_else(|| Error::Degenerate("only the zero codeword".into()))
    }

    /// Distinct nonzero rank weights that occur.
    pub fn weights(&self) -> Result<BTreeSet<usize>> {
        Ok(self
            .rank_distribution()?
            .iter()
            .filter(|&(&w, &c)| w > 0 && c > 0)
            .map(|(&w, _)| w)
            .collect())
    }

    pub fn to_dto(&self) -> RankCodeDto {
        RankCodeDto {
            tower: (
                self.tower.base().p(),
                self.tower.base().degree(),
                self.tower.n(),
            ),
            k: self.k,
            n: self.ell,
            rows: self.rows.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dto()).expect("rank code serializes")
    }

    pub fn distribution_csv(&self) -> Result<String> {
        let mut out = String::from("rank_weight,count\n");
        for (w, c) in self.rank_distribution()? {
            out.push_str(&format!("{w},{c}\n"));
        }
        Ok(out)
    }
}

/// Generator matrix whose columns are the system's basis vectors.
pub fn rank_code_from_system(u: &RankSystem) -> Result<RankCode> {
    let rows: Vec<Vec<Elt>> = (0..u.k())
        .map(|i| u.basis().iter().map(|v| v[i]).collect())
        .collect();
    let code = RankCode::from_rows(u.tower().clone(), rows)?;
    if !code.is_nondegenerate() {
        return Err(Error::Degenerate("system produced F_q-dependent columns".into()));
    }
    Ok(code)
}

/// The F_q-span of the columns, recovered as a system.
pub fn system_from_rank_code(c: &RankCode) -> Result<RankSystem> {
    if !c.is_nondegenerate() {
        return Err(Error::Degenerate("columns are F_q-dependent".into()));
    }
    let basis: Vec<Vec<Elt>> = (0..c.ell()).map(|j| c.column(j)).collect();
    RankSystem::new(c.tower().clone(), c.k(), basis)
}

/// How the dual-route weight check ran and what it saw.
#[derive(Serialize, Debug)]
pub struct RelweightReport {
    pub checked: u64,
    pub exhaustive: bool,
    pub min_nonzero_weight: Option<usize>,
    pub max_weight: usize,
}

/// For each message x, the weight of xG computed from the entry span must
/// equal ell - dim(U and x-perp): the perp is solved over GF(q^n) first,
/// then intersected with U over F_q.  Exhaustive when q^(nk) fits the
/// guard, otherwise a seeded sample of 10^4 messages.
pub fn verify_relweight(c: &RankCode, seed: u64) -> Result<RelweightReport> {
    let tower = c.tower().clone();
    let f = tower.ext();
    let n = tower.n() as usize;
    let qn = f.order() as u64;
    let u = system_from_rank_code(c)?;
    let flat_u: Vec<Vec<Elt>> = u.basis().iter().map(|v| tower.flatten(v)).collect();
    let ell = c.ell();

    let total = BigUint::from(qn).pow(c.k() as u32);
    let exhaustive = total <= BigUint::from(crate::pg::MAX_POINTS);
    let sample = 10_000u64;
    let checked = if exhaustive {
        u64::try_from(total).expect("bounded by the guard")
    } else {
        sample
    };

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut min_nonzero: Option<usize> = None;
    let mut max_weight = 0usize;
    let mut x = vec![0 as Elt; c.k()];
    for counter in 0..checked {
        if exhaustive {
            if counter > 0 {
                let mut pos = 0;
                loop {
                    x[pos] += 1;
                    if (x[pos] as u64) < qn {
                        break;
                    }
                    x[pos] = 0;
                    pos += 1;
                }
            }
        } else {
            for xi in x.iter_mut() {
                *xi = rng.gen_range(0..qn) as Elt;
            }
        }

        let direct = rank_weight(&tower, &c.codeword(&x));

        // x-perp over GF(q^n): kernel of the functional y -> x . y
        let perp = linalg::kernel_basis(f, &[x.clone()]);
        // knock it down to an F_q-basis: gamma^j multiples of each vector
        let mut stacked = flat_u.clone();
        for b in &perp {
            for j in 0..n {
                let g = tower.basis_elt(j as u32);
                let scaled: Vec<Elt> = b.iter().map(|&y| f.mul(g, y)).collect();
                stacked.push(tower.flatten(&scaled));
            }
        }
        let joint = linalg::rank(tower.base(), &stacked);
        let meet = ell + n * perp.len() - joint;
        let dual = ell - meet;

        if direct != dual {
            return Err(Error::Verification(format!(
                "weights disagree at x = {x:?}: entry span {direct}, hyperplane route {dual}"
            )));
        }
        if direct > 0 {
            min_nonzero = Some(min_nonzero.map_or(direct, |m| m.min(direct)));
        }
        max_weight = max_weight.max(direct);
    }
    Ok(RelweightReport { checked, exhaustive, min_nonzero_weight: min_nonzero, max_weight })
}

/// The rank code of the cone over a Moore h-scattered base: a
/// [dn/(h+1) + n(r-d), r] code over GF(q^n)/GF(q) with minimum distance
/// n - h and weights inside {n-h, ..., n}.
pub fn cone_rank_code(q: u64, n: u32, r: usize, d: usize, h: usize) -> Result<RankCode> {
    let tower = Tower::for_q(q, n)?;
    let base = constructions::moore_h_scattered(tower.clone(), d, h)?;
    let cone = constructions::cone(&base, r)?;
    let system = RankSystem::new(tower.clone(), r, cone.linset().basis().to_vec())?;
    let code = rank_code_from_system(&system)?;

    let want_ell = d * n as usize / (h + 1) + n as usize * (r - d);
    if code.ell() != want_ell || code.k() != r {
        return Err(Error::Verification(format!(
            "expected a [{want_ell}, {r}] rank code, built [{}, {}]",
            code.ell(),
            code.k()
        )));
    }
    if code.min_distance()? != n as usize - h {
        return Err(Error::Verification(format!(
            "minimum rank distance {} instead of {}",
            code.min_distance()?,
            n as usize - h
        )));
    }
    let allowed: BTreeSet<usize> = (0..=h).map(|i| n as usize - i).collect();
    let got = code.weights()?;
    if !got.is_subset(&allowed) {
        return Err(Error::Verification(format!(
            "rank weights {got:?} escape {allowed:?}"
        )));
    }
    if got.len() > 2 * (h + 1) {
        return Err(Error::Verification(format!(
            "{} distinct weights, more than 2(h+1)",
            got.len()
        )));
    }
    Ok(code)
}

/// The rank code of the extended system U' in GF(q^n)^(r+1): length one
/// more than the cone's, dimension r + 1, minimum distance 1.
pub fn construction_one_rank_code(
    q: u64,
    n: u32,
    r: usize,
    d: usize,
    h: usize,
) -> Result<RankCode> {
    let tower = Tower::for_q(q, n)?;
    let base = constructions::moore_h_scattered(tower.clone(), d, h)?;
    let cone = constructions::cone(&base, r)?;
    let ext = constructions::construction_one(&cone)?;
    let system = RankSystem::new(tower.clone(), r + 1, ext.linset().basis().to_vec())?;
    let code = rank_code_from_system(&system)?;

    let want_ell = d * n as usize / (h + 1) + n as usize * (r - d) + 1;
    if code.ell() != want_ell || code.k() != r + 1 {
        return Err(Error::Verification(format!(
            "expected a [{want_ell}, {}] rank code, built [{}, {}]",
            r + 1,
            code.ell(),
            code.k()
        )));
    }
    if code.min_distance()? != 1 {
        return Err(Error::Verification(format!(
            "minimum rank distance {} instead of 1",
            code.min_distance()?
        )));
    }
    let mut allowed: BTreeSet<usize> = (n as usize - h..=n as usize + 1).collect();
    allowed.insert(1);
    let got = code.weights()?;
    if !got.is_subset(&allowed) {
        return Err(Error::Verification(format!(
            "rank weights {got:?} escape {allowed:?}"
        )));
    }
    Ok(code)
}
