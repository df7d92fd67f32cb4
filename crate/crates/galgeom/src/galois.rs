//! Exact arithmetic for finite fields GF(p^m) and field towers GF(q) ⊆ GF(q^n).
//!
//! Elements are stored as integer indices in `0..p^m`: the index is the base-p
//! encoding of the coefficient vector in the polynomial basis {1, x, ..., x^(m-1)},
//! least-significant digit = constant term.  The same encoding is used for I/O, so
//! serialized elements are plain integers.
//!
//! The defining polynomial for each (p, m) is produced by a fixed deterministic
//! rule: scan monic degree-m polynomials in increasing base-p integer order and
//! take the first that is irreducible (exhaustive trial division by every monic
//! polynomial of degree <= m/2) and primitive (x generates the multiplicative
//! group, certified by the exp-table cycle having length exactly p^m - 1).
//! Because the generator is always x (or the smallest primitive root when m = 1),
//! multiplication, inversion and powers run on exp/log tables.
//!
//! Fields are capped at 2^20 elements; everything here is exact integer work.

use std::sync::Arc;

use crate::error::{Error, Result};

/// A field element, encoded as an integer in `0..field.order()`.
/// All arithmetic goes through the owning [`Field`].
pub type Elt = u32;

/// Largest field order we agree to build tables for.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// GF(p^m) with precomputed exp/log tables over the deterministic
/// defining polynomial.
pub struct Field {
    p: u32,
    m: u32,
    order: u32,
    /// Monic defining polynomial, `m + 1` coefficients, constant term first.
    poly: Vec<u32>,
    /// exp[i] = g^i for i in 0..order-1, where g = x (m >= 2) or the smallest
    /// primitive root (m = 1).
    exp: Vec<Elt>,
    /// log[e] for e in 1..order; log[0] is unused.
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.poly == other.poly
    }
}
impl Eq for Field {}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({}^{})", self.p, self.m)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Digit-vector helpers for polynomials over GF(p), coefficients in 0..p,
/// constant term first.  Used only during table construction, so clarity
/// beats speed here.
mod polyp {
    /// Remove trailing zero coefficients (keeps at least one).
    pub fn trim(v: &mut Vec<u32>) {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
    }

    pub fn deg(v: &[u32]) -> usize {
        let mut d = v.len() - 1;
        while d > 0 && v[d] == 0 {
            d -= 1;
        }
        d
    }

    /// Remainder of a mod b over GF(p); b must be monic-leading after trim.
    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r: Vec<u32> = a.to_vec();
        trim(&mut r);
        let db = deg(b);
        let lead_inv = inv_mod(b[db], p);
        while deg(&r) >= db && !(r.len() == 1 && r[0] == 0) {
            let dr = deg(&r);
            if dr < db {
                break;
            }
            let c = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
            // r -= c * x^(dr-db) * b
            for i in 0..=db {
                let idx = dr - db + i;
                let sub = (c as u64 * b[i] as u64) % p as u64;
                r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            trim(&mut r);
            if deg(&r) == 0 {
                break;
            }
        }
        trim(&mut r);
        r
    }

    pub fn is_zero(v: &[u32]) -> bool {
        v.iter().all(|&c| c == 0)
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        // Fermat: a^(p-2) mod p
        let mut result = 1u64;
        let mut base = a as u64 % p as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        result as u32
    }

    /// Decode a base-p integer into a digit vector of the given length.
    pub fn digits(mut idx: u64, p: u32, len: usize) -> Vec<u32> {
        let mut v = vec![0u32; len];
        for d in v.iter_mut() {
            *d = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        v
    }
}

/// Exhaustive trial division: f (monic, degree m >= 2) is irreducible over GF(p)
/// iff no monic polynomial of degree 1..=m/2 divides it.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = polyp::deg(f);
    for d in 1..=(m / 2) {
        // all monic degree-d candidates: low digits enumerate p^d choices
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut g = polyp::digits(low, p, d + 1);
            g[d] = 1;
            if polyp::is_zero(&polyp::rem(f, &g, p)) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Build GF(p^m).  Deterministic: the same (p, m) always yields the same
    /// defining polynomial and tables.
    pub fn new(p: u32, m: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::Param(format!("{p} is not prime")));
        }
        if m < 1 || m > 16 {
            return Err(Error::Param(format!("extension degree {m} out of range 1..=16")));
        }
        let order = (p as u64).checked_pow(m).filter(|&o| o <= MAX_FIELD_ORDER);
        let order = match order {
            Some(o) => o as u32,
            None => {
                return Err(Error::SizeGuard {
                    what: format!("field order {p}^{m}"),
                    count: (p as u128).pow(m),
                    limit: MAX_FIELD_ORDER as u128,
                })
            }
        };

        if m == 1 {
            // Prime field: polynomial is x, generator is the smallest primitive root.
            let poly = vec![0, 1];
            for g in 2..p.max(2) {
                if let Some((exp, log)) = build_tables_from_generator(p, order, g, &poly) {
                    return Ok(Field { p, m, order, poly, exp, log });
                }
            }
            // GF(2) has the empty multiplicative search space: generator 1.
            if p == 2 {
                let (exp, log) = build_tables_from_generator(p, order, 1, &poly).unwrap();
                return Ok(Field { p, m, order, poly, exp, log });
            }
            Err(Error::Param(format!("no primitive root found for p={p} (unreachable)")))
        } else {
            // Scan monic degree-m polynomials in base-p integer order; candidate
            // index encodes the m low coefficients.
            for low in 0..(order as u64) {
                let mut f = polyp::digits(low, p, m as usize + 1);
                f[m as usize] = 1;
                if f[0] == 0 || !is_irreducible(&f, p) {
                    continue;
                }
                // x is the candidate generator; the table build certifies
                // primitivity (cycle length exactly order-1) or rejects.
                if let Some((exp, log)) = build_tables_mul_by_x(p, m, order, &f) {
                    return Ok(Field { p, m, order, poly: f, exp, log });
                }
            }
            Err(Error::Param(format!(
                "no primitive polynomial of degree {m} over GF({p}) (unreachable)"
            )))
        }
    }

    /// Convenience: shared handle, which the geometry layers expect.
    pub fn shared(p: u32, m: u32) -> Result<Arc<Field>> {
        Field::new(p, m).map(Arc::new)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of elements p^m.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Monic defining polynomial, constant term first, length m+1.
    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    /// A fixed multiplicative generator (x for m >= 2, smallest primitive root
    /// for m = 1; the trivial group of GF(2) is generated by 1).
    pub fn generator(&self) -> Elt {
        if self.order == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    pub fn zero(&self) -> Elt {
        0
    }

    pub fn one(&self) -> Elt {
        1
    }

    /// All elements in index order, 0 first.
    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        0..self.order
    }

    #[inline]
    fn check(&self, a: Elt) {
        debug_assert!(a < self.order, "element {a} out of range for {self:?}");
    }

    #[inline]
    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        self.check(a);
        self.check(b);
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as Elt;
        }
        // digit-wise addition base p
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut shift = 1u32;
        for _ in 0..self.m {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * shift;
            a /= self.p;
            b /= self.p;
            shift = shift.wrapping_mul(self.p);
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: Elt) -> Elt {
        self.check(a);
        if self.p == 2 {
            return a;
        }
        if self.m == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut a = a;
        let mut out = 0u32;
        let mut shift = 1u32;
        for _ in 0..self.m {
            let d = a % self.p;
            out += if d == 0 { 0 } else { self.p - d } * shift;
            a /= self.p;
            shift = shift.wrapping_mul(self.p);
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        self.check(a);
        self.check(b);
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.order as u64 - 1;
        self.exp[((self.log[a as usize] as u64 + self.log[b as usize] as u64) % n) as usize]
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Elt) -> Elt {
        self.check(a);
        assert!(a != 0, "inverse of zero");
        let n = self.order - 1;
        self.exp[((n - self.log[a as usize]) % n) as usize]
    }

    #[inline]
    pub fn div(&self, a: Elt, b: Elt) -> Elt {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elt, e: u64) -> Elt {
        self.check(a);
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.order as u64 - 1;
        self.exp[((self.log[a as usize] as u64 as u128 * e as u128) % n as u128) as usize]
    }

    /// Sum of products, the inner loop of every incidence test.
    pub fn dot(&self, a: &[Elt], b: &[Elt]) -> Elt {
        assert_eq!(a.len(), b.len());
        let mut acc = 0;
        for (&x, &y) in a.iter().zip(b) {
            acc = self.add(acc, self.mul(x, y));
        }
        acc
    }
}

/// Build exp/log by iterating multiplication by x in the quotient ring
/// GF(p)[x]/(f).  Returns None unless the cycle of x has length exactly
/// order-1, i.e. unless f is primitive (which also certifies irreducible:
/// a ring with a unit of order p^m-1 among p^m-1 nonzero elements has no
/// zero divisors).
fn build_tables_mul_by_x(p: u32, m: u32, order: u32, f: &[u32]) -> Option<(Vec<Elt>, Vec<u32>)> {
    let n = (order - 1) as usize;
    let mut exp = vec![0u32; n];
    let mut log = vec![0u32; order as usize];
    let p64 = p as u64;
    // f_low = f - x^m as an index (digits of the low m coefficients)
    let mut val: u64 = 1;
    let top = (p64).pow(m - 1); // weight of digit m-1
    let mut seen_one_at = None;
    for i in 0..n {
        exp[i] = val as u32;
        log[val as usize] = i as u32;
        // val *= x: shift digits up, then reduce the overflow digit c via
        // x^m = -(f - x^m)
        let c = val / top;
        val = (val % top) * p64;
        if c != 0 {
            // subtract c * f_low digit-wise
            let mut out = 0u64;
            let mut v = val;
            let mut shift = 1u64;
            for d in 0..m as usize {
                let sub = c * f[d] as u64 % p64;
                let dv = v % p64;
                out += ((dv + p64 - sub) % p64) * shift;
                v /= p64;
                shift *= p64;
            }
            val = out;
        }
        if val == 1 {
            seen_one_at = Some(i + 1);
            break;
        }
    }
    if seen_one_at == Some(n) {
        Some((exp, log))
    } else {
        None
    }
}

/// Same certification for prime fields: powers of g must cycle with period p-1.
fn build_tables_from_generator(p: u32, order: u32, g: u32, _poly: &[u32]) -> Option<(Vec<Elt>, Vec<u32>)> {
    let n = (order - 1) as usize;
    let mut exp = vec![0u32; n];
    let mut log = vec![0u32; order as usize];
    let mut val = 1u64;
    for i in 0..n {
        exp[i] = val as u32;
        log[val as usize] = i as u32;
        val = val * g as u64 % p as u64;
        if val == 1 && i + 1 < n {
            return None; // period too short: not primitive
        }
    }
    if val == 1 {
        Some((exp, log))
    } else {
        None
    }
}

/// The tower GF(q) ⊆ GF(q^n) with q = p^e, plus the flattening maps between
/// GF(q^n)^r and GF(q)^(rn).
///
/// The F_q-basis of GF(q^n) is {1, γ, ..., γ^(n-1)} where γ is the extension
/// field's own generator; γ has degree exactly n over GF(q), so the powers are
/// independent.  GF(q) sits inside GF(p^(en)) via the smallest root of the
/// base defining polynomial.
pub struct Tower {
    base: Arc<Field>,
    ext: Arc<Field>,
    n: u32,
    /// embed[a] = image in ext of base element a.
    embed: Vec<Elt>,
    /// reverse of `embed` for subfield membership tests.
    unembed: std::collections::HashMap<Elt, Elt>,
    /// en x en matrix over GF(p) sending the digit vector of an ext element
    /// to the digit vectors of its n GF(q)-coordinates.
    to_coords_mat: Vec<Vec<u32>>,
    prime: Arc<Field>,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.n == other.n
    }
}
impl Eq for Tower {}

impl std::fmt::Debug for Tower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({}) in GF({}^{})", self.base.order(), self.base.order(), self.n)
    }
}

impl Tower {
    /// GF(p^e) ⊆ GF(p^(e·n)).
    pub fn new(p: u32, e: u32, n: u32) -> Result<Tower> {
        if n < 1 {
            return Err(Error::Param("tower degree n must be >= 1".into()));
        }
        let base = Field::shared(p, e)?;
        let ext = Field::shared(p, e * n)?;
        let prime = if e == 1 { base.clone() } else { Field::shared(p, 1)? };

        // Embed: find the smallest root of the base polynomial in ext.
        // For e = 1 the base polynomial is x with root 0, which would embed
        // everything to constants; prime fields embed digit-identically instead.
        let q = base.order();
        let mut embed = vec![0u32; q as usize];
        if e == 1 {
            // GF(p) inside GF(p^k): indices 0..p are exactly the constants.
            for a in 0..q {
                embed[a as usize] = a;
            }
        } else {
            let mut root = None;
            for z in ext.elements() {
                // evaluate base.poly at z inside ext (coefficients are prime digits)
                let mut acc = 0u32;
                for &c in base.poly().iter().rev() {
                    acc = ext.add(ext.mul(acc, z), c);
                }
                if acc == 0 {
                    root = Some(z);
                    break;
                }
            }
            let beta = root.ok_or_else(|| {
                Error::Verification("base polynomial has no root in extension".into())
            })?;
            for a in 0..q {
                // a = sum of digits a_i x^i  ->  sum a_i beta^i
                let mut img = 0u32;
                let mut rem = a;
                let mut pw = ext.one();
                for _ in 0..e {
                    let d = rem % p;
                    img = ext.add(img, ext.mul(d, pw));
                    rem /= p;
                    pw = ext.mul(pw, beta);
                }
                embed[a as usize] = img;
            }
        }
        let mut unembed = std::collections::HashMap::new();
        for (a, &img) in embed.iter().enumerate() {
            if unembed.insert(img, a as Elt).is_some() {
                return Err(Error::Verification("embedding is not injective".into()));
            }
        }

        // Coordinate matrices over GF(p).  Forward map: (c_0,...,c_{n-1}) in
        // GF(q)^n  ->  sum embed(c_j) γ^j.  Column (j*e + i) is the digit vector
        // of embed(x^i as base elt) * γ^j = β-power * γ-power.
        let en = (e * n) as usize;
        let gamma = ext.generator();
        let mut cols: Vec<Vec<u32>> = Vec::with_capacity(en);
        let mut gpow = ext.one();
        for _j in 0..n {
            for i in 0..e {
                let basis_base_elt = (p as u64).pow(i) as u32; // x^i in base encoding
                let img = ext.mul(embed[basis_base_elt as usize], gpow);
                cols.push(digit_vec(img, p, en));
            }
            gpow = ext.mul(gpow, gamma);
        }
        // from_coords_mat[row][col]
        let mut from_coords_mat = vec![vec![0u32; en]; en];
        for (c, col) in cols.iter().enumerate() {
            for r in 0..en {
                from_coords_mat[r][c] = col[r];
            }
        }
        let to_coords_mat = crate::linalg::invert(&prime, &from_coords_mat)
            .ok_or_else(|| Error::Verification("coordinate matrix is singular".into()))?;

        Ok(Tower { base, ext, n, embed, unembed, to_coords_mat, prime })
    }

    /// Factor a prime power q = p^e and build GF(p) <= GF(q) <= GF(q^n).
    pub fn for_q(q: u64, n: u32) -> Result<Arc<Tower>> {
        if q < 2 {
            return Err(Error::Param(format!("q = {q} is not a prime power")));
        }
        let mut p = 2u64;
        while p * p <= q && q % p != 0 {
            p += 1;
        }
        if q % p != 0 {
            p = q; // q itself is prime
        }
        let mut e = 0u32;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::Param(format!("q = {q} is not a prime power")));
        }
        Ok(Arc::new(Tower::new(p as u32, e, n)?))
    }

    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<Field> {
        &self.ext
    }

    /// q = |GF(q)|.
    pub fn q(&self) -> u32 {
        self.base.order()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn embed(&self, a: Elt) -> Elt {
        self.embed[a as usize]
    }

    /// Inverse of `embed` when x lies in the base subfield.
    pub fn project(&self, x: Elt) -> Option<Elt> {
        self.unembed.get(&x).copied()
    }

    pub fn in_base(&self, x: Elt) -> bool {
        self.unembed.contains_key(&x)
    }

    /// x ↦ x^q, the tower Frobenius, F_q-linear on GF(q^n).
    pub fn frobenius(&self, x: Elt) -> Elt {
        self.ext.pow(x, self.q() as u64)
    }

    /// γ^j for the F_q-basis {1, γ, ..., γ^(n-1)} of GF(q^n).
    pub fn basis_elt(&self, j: u32) -> Elt {
        self.ext.pow(self.ext.generator(), j as u64)
    }

    /// GF(q)-coordinates of x in the basis {γ^j}, length n.
    pub fn coords(&self, x: Elt) -> Vec<Elt> {
        let en = (self.base.degree() * self.n) as usize;
        let digits = digit_vec(x, self.base.p(), en);
        let out = crate::linalg::mat_vec(&self.prime, &self.to_coords_mat, &digits);
        // regroup e digits per coordinate
        let e = self.base.degree() as usize;
        let p = self.base.p() as u64;
        (0..self.n as usize)
            .map(|j| {
                let mut idx = 0u64;
                for i in (0..e).rev() {
                    idx = idx * p + out[j * e + i] as u64;
                }
                idx as Elt
            })
            .collect()
    }

    /// Inverse of [`Tower::coords`].
    pub fn from_coords(&self, c: &[Elt]) -> Elt {
        assert_eq!(c.len(), self.n as usize);
        let mut acc = 0u32;
        let mut gpow = self.ext.one();
        let gamma = self.ext.generator();
        for &cj in c {
            acc = self.ext.add(acc, self.ext.mul(self.embed(cj), gpow));
            gpow = self.ext.mul(gpow, gamma);
        }
        acc
    }

    /// F_q-linear bijection GF(q^n)^r -> GF(q)^(rn): concatenated coordinates.
    pub fn flatten(&self, v: &[Elt]) -> Vec<Elt> {
        let mut out = Vec::with_capacity(v.len() * self.n as usize);
        for &x in v {
            out.extend(self.coords(x));
        }
        out
    }

    /// Inverse of [`Tower::flatten`].
    pub fn unflatten(&self, w: &[Elt]) -> Vec<Elt> {
        assert_eq!(w.len() % self.n as usize, 0);
        w.chunks(self.n as usize).map(|c| self.from_coords(c)).collect()
    }

    /// Scalar action of GF(q) on a GF(q^n) element.
    pub fn scale(&self, c: Elt, x: Elt) -> Elt {
        self.ext.mul(self.embed(c), x)
    }
}

fn digit_vec(mut x: Elt, p: u32, len: usize) -> Vec<u32> {
    let mut v = vec![0u32; len];
    for d in v.iter_mut() {
        *d = x % p;
        x /= p;
    }
    v
}
