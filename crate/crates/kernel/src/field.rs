//! Exact scalar arithmetic over a number field `Q[x]/(p(x))`.
//!
//! `p` must be monic and irreducible over the rationals; irreducibility is
//! checked at construction. Elements are residue representatives: coefficient
//! vectors of length `deg p`, with rationals kept reduced and with positive
//! denominator, so equality of elements is equality of coefficient lists.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use num::Integer;
use std::fmt;
use std::sync::{Arc, OnceLock};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parse "num/den" (or "num") into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::ParseError(format!("bad rational {s:?}: {e}")))
}

/// Always renders with an explicit denominator, e.g. "3/1", "-1/2".
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = num::integer::sqrt(r.numer().clone());
    let d = num::integer::sqrt(r.denom().clone());
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Arithmetic in a quadratic extension Q(theta) with theta^2 = a + b*theta,
/// used internally for square roots in towers of quadratic extensions.
#[derive(Clone, Debug, PartialEq)]
struct Quad {
    x0: BigRational,
    x1: BigRational,
}

#[derive(Clone, Debug)]
struct QuadField {
    a: BigRational,
    b: BigRational,
}

impl QuadField {
    fn zero(&self) -> Quad {
        Quad { x0: BigRational::zero(), x1: BigRational::zero() }
    }
    fn from_rat(&self, r: BigRational) -> Quad {
        Quad { x0: r, x1: BigRational::zero() }
    }
    fn add(&self, p: &Quad, q: &Quad) -> Quad {
        Quad { x0: &p.x0 + &q.x0, x1: &p.x1 + &q.x1 }
    }
    fn sub(&self, p: &Quad, q: &Quad) -> Quad {
        Quad { x0: &p.x0 - &q.x0, x1: &p.x1 - &q.x1 }
    }
    fn mul(&self, p: &Quad, q: &Quad) -> Quad {
        // (p0 + p1 t)(q0 + q1 t) with t^2 = a + b t
        let t2 = &p.x1 * &q.x1;
        Quad {
            x0: &p.x0 * &q.x0 + &self.a * &t2,
            x1: &p.x0 * &q.x1 + &p.x1 * &q.x0 + &self.b * &t2,
        }
    }
    fn inv(&self, p: &Quad) -> Option<Quad> {
        // conjugate: t -> b - t;  N(p) = p * conj(p) is rational
        let conj = Quad { x0: &p.x0 + &self.b * &p.x1, x1: -p.x1.clone() };
        let n = self.mul(p, &conj);
        debug_assert!(n.x1.is_zero());
        if n.x0.is_zero() {
            return None;
        }
        let ninv = BigRational::one() / n.x0;
        Some(Quad { x0: &conj.x0 * &ninv, x1: &conj.x1 * &ninv })
    }
    fn is_zero(&self, p: &Quad) -> bool {
        p.x0.is_zero() && p.x1.is_zero()
    }

    /// Square root inside the quadratic field, if it exists there.
    fn sqrt(&self, d: &Quad) -> Option<Quad> {
        // want y = y0 + y1 t with y^2 = d
        if d.x1.is_zero() {
            if let Some(s) = rational_sqrt(&d.x0) {
                return Some(self.from_rat(s));
            }
            // maybe y = y1 * t won't cover odd cases; fall through to general
        }
        // general: y1 != 0, z = y1^2 satisfies A z^2 + B z + C = 0 with
        // A = b^2 + 4a, B = -(2 b d1 + 4 d0), C = d1^2
        let a4 = &self.b * &self.b + rat_int(4) * &self.a;
        if a4.is_zero() {
            return None;
        }
        let bq = -(rat_int(2) * &self.b * &d.x1 + rat_int(4) * &d.x0);
        let cq = &d.x1 * &d.x1;
        let disc = &bq * &bq - rat_int(4) * &a4 * &cq;
        let sd = rational_sqrt(&disc)?;
        for sign in [BigRational::one(), -BigRational::one()] {
            let z = (-&bq + &sign * &sd) / (rat_int(2) * &a4);
            if z.is_negative() {
                continue;
            }
            if let Some(y1) = rational_sqrt(&z) {
                for y1s in [y1.clone(), -y1.clone()] {
                    if y1s.is_zero() {
                        continue;
                    }
                    let y0 = (&d.x1 - &self.b * &z) / (rat_int(2) * &y1s);
                    let cand = Quad { x0: y0, x1: y1s };
                    if self.mul(&cand, &cand) == *d {
                        return Some(cand);
                    }
                }
            }
        }
        // pure rational target may still need y1 = 0
        if d.x1.is_zero() {
            rational_sqrt(&d.x0).map(|s| self.from_rat(s))
        } else {
            None
        }
    }
}

/// Tower presentation of a degree-4 field: a quadratic subfield Q(theta) and
/// a relative generator gamma with gamma^2 in Q(theta). Not every quartic
/// field has one; when absent, square roots cannot be decided.
#[derive(Clone, Debug)]
struct Tower {
    base: QuadField,
    gamma_sq: Quad,
    /// columns: power-basis coordinates of 1, theta, gamma, theta*gamma
    to_power: [Vec<BigRational>; 4],
    /// inverse change of basis, rows map power coords -> tower coords
    from_power: Vec<Vec<BigRational>>,
}

/// A number field Q[x]/(p(x)), shared behind `Arc` by all of its elements.
pub struct Field {
    minpoly: Vec<BigRational>,
    degree: usize,
    tower: Option<Tower>,
    torsion: OnceLock<Vec<Vec<BigRational>>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(deg {})", self.degree)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly
    }
}
impl Eq for Field {}

impl Field {
    /// Construct the field, rejecting non-monic or reducible minimal polynomials.
    pub fn new(minpoly: Vec<BigRational>) -> Result<Arc<Field>> {
        if minpoly.len() < 2 {
            return Err(Error::NotMonic);
        }
        if !minpoly.last().unwrap().is_one() {
            return Err(Error::NotMonic);
        }
        let degree = minpoly.len() - 1;
        check_irreducible(&minpoly)?;
        let tower = if degree == 4 { find_tower(&minpoly) } else { None };
        Ok(Arc::new(Field { minpoly, degree, tower, torsion: OnceLock::new() }))
    }

    /// The rationals, presented as Q[x]/(x - 1).
    pub fn rationals() -> Arc<Field> {
        Field::new(vec![-BigRational::one(), BigRational::one()]).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn minpoly(&self) -> &[BigRational] {
        &self.minpoly
    }

    pub fn zero(self: &Arc<Self>) -> FieldElem {
        FieldElem { field: self.clone(), coeffs: vec![BigRational::zero(); self.degree] }
    }

    pub fn one(self: &Arc<Self>) -> FieldElem {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(self: &Arc<Self>, r: BigRational) -> FieldElem {
        let mut coeffs = vec![BigRational::zero(); self.degree];
        if self.degree == 1 {
            // alpha is rational: p(x) = x - c, alpha = c; represent r as r/1 * 1
            // the basis is {1} only when c encodes alpha = c; elements are c-multiples…
            // degree-1 fields are canonically Q with basis {1}.
            coeffs[0] = r;
        } else {
            coeffs[0] = r;
        }
        FieldElem { field: self.clone(), coeffs }
    }

    pub fn from_i64(self: &Arc<Self>, n: i64) -> FieldElem {
        self.from_rational(rat_int(n))
    }

    /// The residue class of x, i.e. the distinguished generator.
    pub fn generator(self: &Arc<Self>) -> FieldElem {
        if self.degree == 1 {
            // x ≡ -c0 mod (x + c0)
            return self.from_rational(-self.minpoly[0].clone());
        }
        let mut coeffs = vec![BigRational::zero(); self.degree];
        coeffs[1] = BigRational::one();
        FieldElem { field: self.clone(), coeffs }
    }

    pub fn elem(self: &Arc<Self>, mut coeffs: Vec<BigRational>) -> Result<FieldElem> {
        if coeffs.len() > self.degree {
            return Err(Error::ParseError(format!(
                "coefficient list of length {} exceeds field degree {}",
                coeffs.len(),
                self.degree
            )));
        }
        coeffs.resize(self.degree, BigRational::zero());
        Ok(FieldElem { field: self.clone(), coeffs })
    }

    /// All roots of unity contained in the field (cached).
    pub fn roots_of_unity(self: &Arc<Self>) -> Vec<FieldElem> {
        let coeff_lists = self.torsion.get_or_init(|| compute_torsion(self));
        coeff_lists
            .iter()
            .map(|c| FieldElem { field: self.clone(), coeffs: c.clone() })
            .collect()
    }
}

fn same_field(a: &FieldElem, b: &FieldElem) -> bool {
    Arc::ptr_eq(&a.field, &b.field) || a.field == b.field
}

/// An element of a [`Field`], in canonical residue form.
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<Field>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        same_field(self, other) && self.coeffs == other.coeffs
    }
}
impl Eq for FieldElem {}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl FieldElem {
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn checked_add(&self, rhs: &FieldElem) -> Result<FieldElem> {
        if !same_field(self, rhs) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.add_ref(rhs))
    }
    pub fn checked_sub(&self, rhs: &FieldElem) -> Result<FieldElem> {
        if !same_field(self, rhs) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.sub_ref(rhs))
    }
    pub fn checked_mul(&self, rhs: &FieldElem) -> Result<FieldElem> {
        if !same_field(self, rhs) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.mul_ref(rhs))
    }
    pub fn checked_div(&self, rhs: &FieldElem) -> Result<FieldElem> {
        if !same_field(self, rhs) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.mul_ref(&rhs.inv()?))
    }

    pub fn add_ref(&self, rhs: &FieldElem) -> FieldElem {
        debug_assert!(same_field(self, rhs));
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        FieldElem { field: self.field.clone(), coeffs }
    }

    pub fn sub_ref(&self, rhs: &FieldElem) -> FieldElem {
        debug_assert!(same_field(self, rhs));
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        FieldElem { field: self.field.clone(), coeffs }
    }

    pub fn neg_ref(&self) -> FieldElem {
        FieldElem { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn mul_ref(&self, rhs: &FieldElem) -> FieldElem {
        debug_assert!(same_field(self, rhs));
        let n = self.field.degree;
        if n == 1 {
            return FieldElem {
                field: self.field.clone(),
                coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]],
            };
        }
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        // reduce modulo the minimal polynomial: x^n = -(p_0 + ... + p_{n-1} x^{n-1})
        for i in (n..prod.len()).rev() {
            if prod[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut prod[i], BigRational::zero());
            for j in 0..n {
                let adj = &c * &self.field.minpoly[j];
                prod[i - n + j] -= adj;
            }
        }
        prod.truncate(n);
        FieldElem { field: self.field.clone(), coeffs: prod }
    }

    pub fn scale(&self, r: &BigRational) -> FieldElem {
        FieldElem { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field.degree;
        if n == 1 {
            return Ok(FieldElem {
                field: self.field.clone(),
                coeffs: vec![BigRational::one() / &self.coeffs[0]],
            });
        }
        // extended euclid on (minpoly, a): returns u with u*a ≡ gcd mod p
        let mut r0: Vec<BigRational> = self.field.minpoly.clone();
        let mut r1: Vec<BigRational> = trim(self.coeffs.clone());
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while !r1.is_empty() {
            let (q, rem) = qpoly_divrem(&r0, &r1);
            let s2 = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r0 = gcd (nonzero constant since p is irreducible and a != 0)
        if r0.len() != 1 {
            return Err(Error::DivisionByZero);
        }
        let scale = BigRational::one() / &r0[0];
        let mut coeffs: Vec<BigRational> = s0.iter().map(|c| c * &scale).collect();
        coeffs.resize(n, BigRational::zero());
        Ok(FieldElem { field: self.field.clone(), coeffs })
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }

    /// Square root within the field: `Ok(None)` certifies none exists there.
    pub fn sqrt(&self) -> Result<Option<FieldElem>> {
        let f = &self.field;
        match f.degree {
            1 => Ok(rational_sqrt(&self.coeffs[0]).map(|s| f.from_rational(s))),
            2 => {
                let qf = QuadField { a: -f.minpoly[0].clone(), b: -f.minpoly[1].clone() };
                let d = Quad { x0: self.coeffs[0].clone(), x1: self.coeffs[1].clone() };
                Ok(qf.sqrt(&d).map(|y| FieldElem {
                    field: f.clone(),
                    coeffs: vec![y.x0, y.x1],
                }))
            }
            4 => {
                let tower = f
                    .tower
                    .as_ref()
                    .ok_or_else(|| Error::RootSearchIncomplete("quartic field without a quadratic subfield".into()))?;
                Ok(tower_sqrt(f, tower, self))
            }
            _ => Err(Error::RootSearchIncomplete(format!(
                "square roots not supported in degree {}",
                f.degree
            ))),
        }
    }

    /// Nonnegative multiplicative order if this is a root of unity (capped).
    pub fn unit_order(&self, cap: u64) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.is_one() {
                return Some(k);
            }
            acc = acc.mul_ref(self);
        }
        None
    }
}

// ---- rational polynomial helpers (dense, low-to-high) ----

pub(crate) fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub(crate) fn qpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub(crate) fn qpoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

pub(crate) fn qpoly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem: Vec<BigRational> = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    if a.len() < b.len() {
        return (vec![], trim(rem));
    }
    let mut quot = vec![BigRational::zero(); a.len() - b.len() + 1];
    for i in (db..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let c = &rem[i] / lead;
        quot[i - db] = c.clone();
        for (j, bc) in b.iter().enumerate() {
            let adj = &c * bc;
            rem[i - db + j] -= adj;
        }
    }
    (trim(quot), trim(rem))
}

pub(crate) fn qpoly_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

// ---- irreducibility over Q ----

/// Scale a monic rational polynomial to a monic integer polynomial via
/// x -> y/m; irreducibility is preserved.
fn to_monic_integer(p: &[BigRational]) -> Vec<BigInt> {
    let n = p.len() - 1;
    let mut m = BigInt::one();
    for c in p.iter() {
        m = m.lcm(c.denom());
    }
    let mut out = Vec::with_capacity(p.len());
    for (i, c) in p.iter().enumerate() {
        // coefficient of y^i is a_i * m^(n-i)
        let scaled = c * BigRational::from_integer(m.pow((n - i) as u32));
        debug_assert!(scaled.denom().is_one());
        out.push(scaled.numer().clone());
    }
    out
}

fn ipoly_eval(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn divisors(n: &BigInt, cap: usize) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut out = vec![];
    let mut d = BigInt::one();
    loop {
        let dd = &d * &d;
        if dd > n {
            break;
        }
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
            if out.len() > cap {
                return None;
            }
        }
        d += 1;
        // guard against huge constants
        if d > BigInt::from(20_000_000u64) {
            return None;
        }
    }
    out.sort();
    Some(out)
}

// polynomial arithmetic over F_ell with u64 entries (ell small)
fn ffpoly_mulmod(a: &[u64], b: &[u64], q: &[u64], ell: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % ell;
        }
    }
    // reduce mod q (monic)
    let dq = q.len() - 1;
    for i in (dq..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..dq {
            let sub = (c * q[j]) % ell;
            prod[i - dq + j] = (prod[i - dq + j] + ell * ell - sub) % ell;
        }
    }
    prod.truncate(dq.max(1));
    while prod.len() > 1 && *prod.last().unwrap() == 0 {
        prod.pop();
    }
    prod
}

fn ffpoly_powmod_x(e: u128, q: &[u64], ell: u64) -> Vec<u64> {
    // x^e mod q
    let mut base = if q.len() > 2 { vec![0, 1] } else { vec![0] };
    if q.len() == 2 {
        // q = x + c: x ≡ -c
        base = vec![(ell - q[0] % ell) % ell];
    }
    let mut acc = vec![1u64];
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = ffpoly_mulmod(&acc, &base, q, ell);
        }
        base = ffpoly_mulmod(&base, &base, q, ell);
        e >>= 1;
    }
    acc
}

fn ffpoly_gcd(a: &[u64], b: &[u64], ell: u64) -> Vec<u64> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    let norm = |p: &mut Vec<u64>| {
        while p.len() > 1 && *p.last().unwrap() == 0 {
            p.pop();
        }
    };
    norm(&mut r0);
    norm(&mut r1);
    while !(r1.len() == 1 && r1[0] == 0) {
        // r0 mod r1
        let inv_lead = mod_inv(*r1.last().unwrap(), ell);
        let mut rem = r0.clone();
        let d1 = r1.len() - 1;
        if rem.len() > d1 {
            for i in (d1..rem.len()).rev() {
                let c = (rem[i] * inv_lead) % ell;
                if c == 0 {
                    continue;
                }
                for (j, &bc) in r1.iter().enumerate() {
                    let sub = (c * bc) % ell;
                    rem[i - d1 + j] = (rem[i - d1 + j] + ell * ell - sub) % ell;
                }
            }
        }
        norm(&mut rem);
        rem.truncate(d1.max(1));
        norm(&mut rem);
        r0 = r1;
        r1 = rem;
    }
    r0
}

fn mod_inv(a: u64, ell: u64) -> u64 {
    // fermat, ell prime
    let mut acc = 1u64;
    let mut base = a % ell;
    let mut e = ell - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % ell;
        }
        base = base * base % ell;
        e >>= 1;
    }
    acc
}

/// True when `q mod ell` is irreducible over F_ell (a certificate of
/// irreducibility over Q for monic integer q).
fn probe_irreducible_mod(q: &[BigInt], ell: u64) -> bool {
    let n = q.len() - 1;
    if n > 8 {
        return false;
    }
    let qm: Vec<u64> = q
        .iter()
        .map(|c| {
            let m = c.mod_floor(&BigInt::from(ell));
            let (_, digits) = m.to_u64_digits();
            if digits.is_empty() {
                0
            } else {
                digits[0]
            }
        })
        .collect();
    if qm[n] != 1 {
        return false;
    }
    // squarefree and degree preserved by monic-ness; test x^(ell^n) == x mod q
    let en = (ell as u128).pow(n as u32);
    let xq = ffpoly_powmod_x(en, &qm, ell);
    let mut x_poly = vec![0u64, 1];
    if n == 1 {
        x_poly = vec![(ell - qm[0] % ell) % ell];
    }
    if xq != x_poly {
        return false;
    }
    // for each prime r | n, gcd(x^(ell^(n/r)) - x, q) must be 1
    let mut primes = vec![];
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for r in primes {
        let e = (ell as u128).pow((n / r) as u32);
        let mut diff = ffpoly_powmod_x(e, &qm, ell);
        // diff -= x
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + ell - 1) % ell;
        while diff.len() > 1 && *diff.last().unwrap() == 0 {
            diff.pop();
        }
        let g = ffpoly_gcd(&qm, &diff, ell);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Search for a monic integer factor of degree k by divisor interpolation.
fn kronecker_factor(q: &[BigInt], k: usize) -> Result<Option<Vec<BigInt>>> {
    let points: Vec<BigInt> = (0..=k as i64).map(BigInt::from).collect();
    let mut divisor_lists: Vec<Vec<BigInt>> = Vec::new();
    let mut total: usize = 1;
    for t in &points {
        let v = ipoly_eval(q, t);
        if v.is_zero() {
            // t is an integer root: degree-1 factor
            return Ok(Some(vec![-t.clone(), BigInt::one()]));
        }
        let ds = divisors(&v, 4000)
            .ok_or_else(|| Error::Unsupported("constant too large for factor search".into()))?;
        // signed divisors
        let mut signed = Vec::with_capacity(ds.len() * 2);
        for d in ds {
            signed.push(d.clone());
            signed.push(-d);
        }
        total = total.saturating_mul(signed.len());
        divisor_lists.push(signed);
    }
    if total > 3_000_000 {
        return Err(Error::Unsupported("factor search space too large".into()));
    }
    // iterate over tuples
    let mut idx = vec![0usize; divisor_lists.len()];
    loop {
        let values: Vec<BigRational> = idx
            .iter()
            .enumerate()
            .map(|(i, &j)| BigRational::from_integer(divisor_lists[i][j].clone()))
            .collect();
        if let Some(h) = interpolate_monic_integer(&points, &values, k) {
            let hq: Vec<BigRational> = h.iter().map(|c| BigRational::from_integer(c.clone())).collect();
            let qq: Vec<BigRational> = q.iter().map(|c| BigRational::from_integer(c.clone())).collect();
            let (_, rem) = qpoly_divrem(&qq, &hq);
            if rem.is_empty() {
                return Ok(Some(h));
            }
        }
        // advance
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < divisor_lists[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn interpolate_monic_integer(points: &[BigInt], values: &[BigRational], k: usize) -> Option<Vec<BigInt>> {
    // Lagrange interpolation; accept only monic degree-k integer results.
    let mut poly = vec![BigRational::zero()];
    for (i, xi) in points.iter().enumerate() {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, xj) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = qpoly_mul(&basis, &[BigRational::from_integer(-xj.clone()), BigRational::one()]);
            denom *= BigRational::from_integer(xi - xj);
        }
        let scale = &values[i] / denom;
        let term: Vec<BigRational> = basis.iter().map(|c| c * &scale).collect();
        poly = qpoly_sub(&poly, &term.iter().map(|c| -c).collect::<Vec<_>>());
    }
    let poly = trim(poly);
    if poly.len() != k + 1 {
        return None;
    }
    if !poly[k].is_one() {
        return None;
    }
    let mut out = Vec::with_capacity(poly.len());
    for c in &poly {
        if !c.denom().is_one() {
            return None;
        }
        out.push(c.numer().clone());
    }
    Some(out)
}

fn check_irreducible(p: &[BigRational]) -> Result<()> {
    let n = p.len() - 1;
    if n == 1 {
        return Ok(());
    }
    let q = to_monic_integer(p);
    // fast certificate: irreducible modulo a small prime
    for ell in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
        if probe_irreducible_mod(&q, ell) {
            return Ok(());
        }
    }
    // exact decision: search monic integer factors of each degree up to n/2
    for k in 1..=n / 2 {
        if let Some(h) = kronecker_factor(&q, k)? {
            let desc: Vec<String> = h.iter().map(|c| c.to_string()).collect();
            return Err(Error::Reducible(format!(
                "integer-scaled polynomial has monic factor with coefficients [{}]",
                desc.join(", ")
            )));
        }
    }
    Ok(())
}

// ---- quadratic subfield detection and tower square roots ----

fn elem_mul_raw(f: &[BigRational], a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    // multiply two coefficient vectors modulo minpoly f (monic)
    let n = f.len() - 1;
    let mut prod = vec![BigRational::zero(); 2 * n - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if !x.is_zero() && !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    for i in (n..prod.len()).rev() {
        if prod[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut prod[i], BigRational::zero());
        for j in 0..n {
            let adj = &c * &f[j];
            prod[i - n + j] -= adj;
        }
    }
    prod.truncate(n);
    prod
}

fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    // gaussian elimination, a is rows x cols; returns any solution
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        let mut pr = None;
        for i in r..rows {
            if !a[i][c].is_zero() {
                pr = Some(i);
                break;
            }
        }
        let Some(pr) = pr else { continue };
        a.swap(r, pr);
        b.swap(r, pr);
        let inv = BigRational::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        b[r] *= &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let fct = a[i][c].clone();
                for j in 0..cols {
                    let adj = &fct * &a[r][j];
                    a[i][j] -= adj;
                }
                let adj = &fct * &b[r];
                b[i] -= adj;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    for i in r..rows {
        if !b[i].is_zero() {
            return None;
        }
    }
    let mut sol = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = b[i].clone();
    }
    Some(sol)
}

fn find_tower(p: &[BigRational]) -> Option<Tower> {
    let n = 4usize;
    // candidate theta = sum c_i alpha^i, c in {-1,0,1}
    let alpha_pows: Vec<Vec<BigRational>> = {
        let mut pows = vec![vec![BigRational::one(), BigRational::zero(), BigRational::zero(), BigRational::zero()]];
        let alpha = vec![BigRational::zero(), BigRational::one(), BigRational::zero(), BigRational::zero()];
        for i in 1..4 {
            let prev = pows[i - 1].clone();
            pows.push(elem_mul_raw(p, &prev, &alpha));
        }
        pows
    };
    for c1 in -1i64..=1 {
        for c2 in -1i64..=1 {
            for c3 in -1i64..=1 {
                if c1 == 0 && c2 == 0 && c3 == 0 {
                    continue;
                }
                let mut theta = vec![BigRational::zero(); n];
                for (k, &c) in [(1, &c1), (2, &c2), (3, &c3)].iter().map(|(k, c)| (*k, *c)) {
                    if c != 0 {
                        for j in 0..n {
                            theta[j] += BigRational::from_integer(BigInt::from(c)) * &alpha_pows[k][j];
                        }
                    }
                }
                let theta_sq = elem_mul_raw(p, &theta, &theta);
                // theta^2 = a*1 + b*theta ?
                let mut rows = vec![];
                let mut rhs = vec![];
                for j in 0..n {
                    rows.push(vec![
                        if j == 0 { BigRational::one() } else { BigRational::zero() },
                        theta[j].clone(),
                    ]);
                    rhs.push(theta_sq[j].clone());
                }
                let Some(sol) = solve_rational(rows, rhs) else { continue };
                let (a, b) = (sol[0].clone(), sol[1].clone());
                // require alpha quadratic over Q(theta): alpha^2 = (x0+x1 th) + (x2+x3 th) alpha
                let alpha = &alpha_pows[1];
                let alpha_sq = &alpha_pows[2];
                let theta_alpha = elem_mul_raw(p, &theta, alpha);
                let mut rows2 = vec![];
                let mut rhs2 = vec![];
                for j in 0..n {
                    rows2.push(vec![
                        if j == 0 { BigRational::one() } else { BigRational::zero() },
                        theta[j].clone(),
                        alpha[j].clone(),
                        theta_alpha[j].clone(),
                    ]);
                    rhs2.push(alpha_sq[j].clone());
                }
                let Some(w) = solve_rational(rows2.clone(), rhs2) else { continue };
                // basis {1, theta, alpha, theta*alpha} must span (rank 4)
                // gamma = alpha - (w2 + w3 theta)/2, gamma^2 = (w0 + w1 th) + (w2+w3 th)^2/4
                let base = QuadField { a: a.clone(), b: b.clone() };
                let w01 = Quad { x0: w[0].clone(), x1: w[1].clone() };
                let w23 = Quad { x0: w[2].clone(), x1: w[3].clone() };
                let half = rat(1, 2);
                let half_w23 = Quad { x0: &w23.x0 * &half, x1: &w23.x1 * &half };
                let gamma_sq = base.add(&w01, &base.mul(&half_w23, &half_w23));
                // tower basis in power coordinates
                let one_v = alpha_pows[0].clone();
                let gamma: Vec<BigRational> = (0..n)
                    .map(|j| {
                        &alpha[j]
                            - (&half_w23.x0 * &one_v[j])
                            - (&half_w23.x1 * &theta[j])
                    })
                    .collect();
                let theta_gamma = elem_mul_raw(p, &theta, &gamma);
                let to_power = [one_v.clone(), theta.clone(), gamma.clone(), theta_gamma.clone()];
                // invert basis matrix
                let mut from_power = vec![];
                let mut ok = true;
                for j in 0..n {
                    // solve to_power * x = e_j
                    let rows3: Vec<Vec<BigRational>> = (0..n)
                        .map(|row| (0..n).map(|col| to_power[col][row].clone()).collect())
                        .collect();
                    let mut e = vec![BigRational::zero(); n];
                    e[j] = BigRational::one();
                    match solve_rational(rows3, e) {
                        Some(col) => from_power.push(col),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                // verify inversion (solve_rational returns "a" solution; need exact inverse)
                // from_power[j] gives tower coords of e_j; check round trip on e_j
                let mut good = true;
                'check: for j in 0..n {
                    let tc = &from_power[j];
                    for row in 0..n {
                        let mut acc = BigRational::zero();
                        for col in 0..n {
                            acc += &tc[col] * &to_power[col][row];
                        }
                        let expect = if row == j { BigRational::one() } else { BigRational::zero() };
                        if acc != expect {
                            good = false;
                            break 'check;
                        }
                    }
                }
                if !good {
                    continue;
                }
                return Some(Tower { base, gamma_sq, to_power, from_power });
            }
        }
    }
    None
}

fn tower_sqrt(f: &Arc<Field>, tower: &Tower, d: &FieldElem) -> Option<FieldElem> {
    // convert d to tower coordinates (e0,e1,f0,f1): d = (e0+e1 th) + (f0+f1 th) gamma
    let n = 4usize;
    let mut tc = vec![BigRational::zero(); n];
    for j in 0..n {
        for k in 0..n {
            tc[k] += &tower.from_power[j][k] * &d.coeffs[j];
        }
    }
    let base = &tower.base;
    let e = Quad { x0: tc[0].clone(), x1: tc[1].clone() };
    let fq = Quad { x0: tc[2].clone(), x1: tc[3].clone() };
    let g = &tower.gamma_sq;

    let assemble = |u: &Quad, v: &Quad| -> FieldElem {
        // y = u + v*gamma in power coordinates
        let mut coeffs = vec![BigRational::zero(); n];
        for j in 0..n {
            coeffs[j] = &u.x0 * &tower.to_power[0][j]
                + &u.x1 * &tower.to_power[1][j]
                + &v.x0 * &tower.to_power[2][j]
                + &v.x1 * &tower.to_power[3][j];
        }
        FieldElem { field: f.clone(), coeffs }
    };
    let verify = |y: &FieldElem| -> bool { y.mul_ref(y) == *d };

    if base.is_zero(&fq) {
        // y in base field, or y = v*gamma
        if let Some(u) = base.sqrt(&e) {
            let y = assemble(&u, &base.zero());
            if verify(&y) {
                return Some(y);
            }
        }
        if let Some(ginv) = base.inv(g) {
            let z = base.mul(&e, &ginv);
            if let Some(v) = base.sqrt(&z) {
                let y = assemble(&base.zero(), &v);
                if verify(&y) {
                    return Some(y);
                }
            }
        }
        return None;
    }
    // y = u + v gamma, v != 0: z = v^2 solves g z^2 - e z + f^2/4 = 0 over base
    let f_sq = base.mul(&fq, &fq);
    let quarter = base.from_rat(rat(1, 4));
    let cc = base.mul(&f_sq, &quarter);
    // disc = e^2 - 4 g c = e^2 - g f^2
    let disc = base.sub(&base.mul(&e, &e), &base.mul(g, &f_sq));
    let sd = base.sqrt(&disc)?;
    let ginv = base.inv(g)?;
    let half = base.from_rat(rat(1, 2));
    for sign in [1i64, -1] {
        let sdd = if sign == 1 { sd.clone() } else { Quad { x0: -sd.x0.clone(), x1: -sd.x1.clone() } };
        let z = base.mul(&base.mul(&base.add(&e, &sdd), &half), &ginv);
        if base.is_zero(&z) {
            continue;
        }
        if let Some(v) = base.sqrt(&z) {
            if base.is_zero(&v) {
                continue;
            }
            let vinv = base.inv(&v)?;
            let u = base.mul(&base.mul(&fq, &half), &vinv);
            let y = assemble(&u, &v);
            if verify(&y) {
                return Some(y);
            }
        }
        let _ = &cc;
    }
    None
}

// ---- roots of unity ----

fn compute_torsion(f: &Arc<Field>) -> Vec<Vec<BigRational>> {
    let mut found: Vec<FieldElem> = vec![f.one(), f.from_i64(-1)];
    let mut push = |e: FieldElem, found: &mut Vec<FieldElem>| {
        if !found.iter().any(|x| *x == e) {
            found.push(e);
        }
    };
    // quadratic cyclotomics: m = 3 (t^2+t+1), m = 4 (t^2+1), m = 6 (t^2-t+1)
    for (b, c) in [(1i64, 1i64), (0, 1), (-1, 1)] {
        // t^2 + b t + c = 0  ->  roots (-b ± sqrt(b^2-4c))/2
        let disc = f.from_i64(b * b - 4 * c);
        if let Ok(Some(s)) = disc.sqrt() {
            let half = f.from_rational(rat(1, 2));
            for sg in [1i64, -1] {
                let ss = if sg == 1 { s.clone() } else { s.neg_ref() };
                let r = f.from_i64(-b).add_ref(&ss).mul_ref(&half);
                if r.unit_order(24).is_some() {
                    push(r, &mut found);
                }
            }
        }
    }
    // quartic cyclotomics via real quadratic subfield: m=5/10 (sqrt 5), m=8 (sqrt 2), m=12 (sqrt 3)
    if f.degree() == 4 {
        for d in [5i64, 2, 3] {
            let sd = match f.from_i64(d).sqrt() {
                Ok(Some(s)) => s,
                _ => continue,
            };
            let half = f.from_rational(rat(1, 2));
            // m=5: zeta + zeta^-1 = (-1 ± sqrt5)/2 ; m=8: ±sqrt2 ; m=12: ±sqrt3
            let cs: Vec<FieldElem> = match d {
                5 => vec![
                    f.from_i64(-1).add_ref(&sd).mul_ref(&half),
                    f.from_i64(-1).sub_ref(&sd).mul_ref(&half),
                ],
                _ => vec![sd.clone(), sd.neg_ref()],
            };
            for c in cs {
                // t^2 - c t + 1 = 0
                let disc = c.mul_ref(&c).sub_ref(&f.from_i64(4));
                if let Ok(Some(s)) = disc.sqrt() {
                    for sg in [1i64, -1] {
                        let ss = if sg == 1 { s.clone() } else { s.neg_ref() };
                        let r = c.add_ref(&ss).mul_ref(&half);
                        if r.unit_order(60).is_some() {
                            push(r.clone(), &mut found);
                            push(r.neg_ref(), &mut found);
                        }
                    }
                }
            }
        }
    }
    // close under multiplication (the torsion subgroup is cyclic and small)
    let mut changed = true;
    while changed {
        changed = false;
        let snapshot = found.clone();
        for a in &snapshot {
            for b in &snapshot {
                let p = a.mul_ref(b);
                if !found.iter().any(|x| *x == p) {
                    found.push(p);
                    changed = true;
                }
            }
        }
        if found.len() > 64 {
            break;
        }
    }
    found.into_iter().map(|e| e.coeffs).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_field() -> Arc<Field> {
        // x^2 - x - 1
        Field::new(vec![rat_int(-1), rat_int(-1), rat_int(1)]).unwrap()
    }

    #[test]
    fn degree_one_field_is_q() {
        let f = Field::rationals();
        assert_eq!(f.degree(), 1);
        let a = f.from_rational(rat(1, 3));
        let b = f.from_rational(rat(1, 6));
        assert_eq!(a.add_ref(&b), f.from_rational(rat(1, 2)));
    }

    #[test]
    fn golden_ratio_field() {
        let f = golden_field();
        assert_eq!(f.degree(), 2);
        let phi = f.generator();
        // phi * phi = phi + 1
        assert_eq!(phi.mul_ref(&phi), phi.add_ref(&f.one()));
        // 1/phi = phi - 1
        assert_eq!(phi.inv().unwrap(), phi.sub_ref(&f.one()));
    }

    #[test]
    fn irreducibility_decisions() {
        // x^2 - 2x + 2 is irreducible
        assert!(Field::new(vec![rat_int(2), rat_int(-2), rat_int(1)]).is_ok());
        // x^2 - 1 = (x-1)(x+1)
        assert!(matches!(
            Field::new(vec![rat_int(-1), rat_int(0), rat_int(1)]),
            Err(Error::Reducible(_))
        ));
        // non-monic rejected
        assert!(matches!(
            Field::new(vec![rat_int(1), rat_int(2)]),
            Err(Error::NotMonic)
        ));
        // x^4+x^3+x^2+x+1 (5th cyclotomic) is irreducible
        assert!(Field::new(vec![rat_int(1), rat_int(1), rat_int(1), rat_int(1), rat_int(1)]).is_ok());
        // x^4 - 1 reducible
        assert!(Field::new(vec![rat_int(-1), rat_int(0), rat_int(0), rat_int(0), rat_int(1)]).is_err());
        // x^4 + 1 irreducible but reducible mod every prime: exercises the factor search
        assert!(Field::new(vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0), rat_int(1)]).is_ok());
    }

    #[test]
    fn division_errors() {
        let f = golden_field();
        assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
        let g = Field::rationals();
        assert_eq!(
            f.one().checked_add(&g.one()),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn sqrt_in_quadratic_field() {
        let f = golden_field();
        let five = f.from_i64(5);
        let s = five.sqrt().unwrap().expect("sqrt 5 exists in Q(phi)");
        assert_eq!(s.mul_ref(&s), five);
        // 2 is not a square in Q(phi)
        assert!(f.from_i64(2).sqrt().unwrap().is_none());
        // phi itself: phi = (1+sqrt5)/2, sqrt(phi) not in the field
        assert!(f.generator().sqrt().unwrap().is_none());
    }

    #[test]
    fn cyclotomic_torsion() {
        let f = Field::new(vec![rat_int(1), rat_int(1), rat_int(1)]).unwrap(); // x^2+x+1
        let roots = f.roots_of_unity();
        // ±1, ±ω, ±ω²  (ω cube root of unity)
        assert_eq!(roots.len(), 6);
        let zeta5 = Field::new(vec![rat_int(1), rat_int(1), rat_int(1), rat_int(1), rat_int(1)]).unwrap();
        let roots = zeta5.roots_of_unity();
        // 10th roots of unity live in Q(zeta5)
        assert_eq!(roots.len(), 10);
        assert!(roots.iter().any(|r| *r == zeta5.generator()));
    }

    #[test]
    fn sqrt_in_cyclotomic_quartic() {
        let f = Field::new(vec![rat_int(1), rat_int(1), rat_int(1), rat_int(1), rat_int(1)]).unwrap();
        let five = f.from_i64(5);
        let s = five.sqrt().unwrap().expect("sqrt 5 in Q(zeta5)");
        assert_eq!(s.mul_ref(&s), five);
        assert!(f.from_i64(2).sqrt().unwrap().is_none());
    }
}
