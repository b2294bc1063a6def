//! The residue field `k = GF(p^d)` and its unramified lift `Z_q = W(k)`,
//! truncated modulo `p^N`.
//!
//! Both rings use the same polynomial basis: `F_p[x]/(f)` for `k` and
//! `(Z/p^N)[x]/(f~)` for `Z_q`, where `f~` is the user's modulus with its
//! coefficients read as integers in `[0, p)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u64,
    pub d: usize,
    /// Monic modulus of degree `d`, coefficients low degree first (`d + 1` entries).
    pub modulus: Vec<u64>,
    /// Working p-adic precision `N` of `Z_q`.
    pub zq_prec: u32,
}

impl FieldParams {
    pub fn new(p: u64, d: usize, modulus: Vec<u64>, zq_prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if d == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        if modulus.len() != d + 1 || modulus[d] != 1 {
            return Err(Error::InvalidField(format!(
                "modulus must be monic of degree {d} ({} coefficients, low degree first)",
                d + 1
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficients must lie in [0, p)".into()));
        }
        if !is_irreducible(p, &modulus) {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        if zq_prec == 0 || (p as f64).log2() * zq_prec as f64 > 62.0 {
            return Err(Error::InvalidField(format!("p-adic precision {zq_prec} out of range for p = {p}")));
        }
        Ok(Self { p, d, modulus, zq_prec })
    }

    pub fn with_default_modulus(p: u64, d: usize, zq_prec: u32) -> Result<Self> {
        let modulus = default_modulus(p, d)
            .ok_or_else(|| Error::InvalidField(format!("no default modulus for p = {p}, d = {d}; pass one")))?;
        Self::new(p, d, modulus, zq_prec)
    }
}

/// Shipped irreducible moduli for small fields, low degree first.
pub fn default_modulus(p: u64, d: usize) -> Option<Vec<u64>> {
    let m = match (p, d) {
        (_, 1) if is_prime(p) => vec![0, 1],
        (2, 2) => vec![1, 1, 1],
        (3, 2) => vec![1, 0, 1],
        (5, 2) => vec![2, 0, 1],
        (2, 3) => vec![1, 1, 0, 1],
        (3, 3) => vec![1, 2, 0, 1],
        (5, 3) => vec![1, 1, 0, 1],
        _ => return None,
    };
    Some(m)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Trial division by every monic polynomial of degree `1..=d/2`.
fn is_irreducible(p: u64, modulus: &[u64]) -> bool {
    let d = modulus.len() - 1;
    for deg in 1..=d / 2 {
        let count = p.pow(deg as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(deg + 1);
            let mut v = idx;
            for _ in 0..deg {
                div.push(v % p);
                v /= p;
            }
            div.push(1);
            if poly_rem_fp(p, modulus, &div).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_fp(p: u64, num: &[u64], den: &[u64]) -> Vec<u64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = r.pop().unwrap();
        let shift = r.len() - dd;
        for (i, &c) in den[..dd].iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - lead) * c) % p;
        }
    }
    r
}

/// Polynomial arithmetic modulo `(p^prec, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct PolyMod {
    p: u64,
    d: usize,
    prec: u32,
    q: u64,
    /// Low `d` coefficients of the monic modulus, reduced mod `q`.
    low: Arc<Vec<u64>>,
}

impl PolyMod {
    fn new(params: &FieldParams, prec: u32) -> Self {
        let q = params.p.pow(prec);
        Self {
            p: params.p,
            d: params.d,
            prec,
            q,
            low: Arc::new(params.modulus[..params.d].iter().map(|&c| c % q).collect()),
        }
    }

    fn zero(&self) -> Vec<u64> {
        vec![0; self.d]
    }

    fn scalar(&self, c: u64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = c % self.q;
        v
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.q).collect()
    }

    fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| (self.q - x) % self.q).collect()
    }

    fn scale(&self, a: &[u64], c: u64) -> Vec<u64> {
        let q = self.q as u128;
        a.iter().map(|&x| ((x as u128 * c as u128) % q) as u64).collect()
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.d;
        let q = self.q as u128;
        let mut t = vec![0u128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                t[i + j] = (t[i + j] + x as u128 * y as u128) % q;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = t[k];
            if c == 0 {
                continue;
            }
            t[k] = 0;
            for (i, &m) in self.low.iter().enumerate() {
                t[k - d + i] = (t[k - d + i] + (q - c) * m as u128) % q;
            }
        }
        t.truncate(d);
        t.into_iter().map(|c| c as u64).collect()
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.scalar(1);
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn from_bigint(&self, n: &BigInt) -> Vec<u64> {
        let r = n.mod_floor(&BigInt::from(self.q));
        self.scalar(r.to_u64().expect("reduced below q"))
    }
}

/// An element of `k`, coefficients in the polynomial basis, low degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FFElem(pub Vec<u64>);

/// An element of `Z_q / p^N`, same basis as [`FFElem`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZqElem(pub Vec<u64>);

fn fmt_poly(coeffs: &[u64], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !first {
            f.write_str("+")?;
        }
        first = false;
        match (i, c) {
            (0, _) => write!(f, "{c}")?,
            (1, 1) => f.write_str("a")?,
            (1, _) => write!(f, "{c}*a")?,
            (_, 1) => write!(f, "a^{i}")?,
            _ => write!(f, "{c}*a^{i}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(&self.0, f)
    }
}

impl fmt::Display for ZqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(&self.0, f)
    }
}

/// The residue field `k = GF(p^d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    core: PolyMod,
}

impl FiniteField {
    pub fn new(params: &FieldParams) -> Self {
        Self { core: PolyMod::new(params, 1) }
    }

    pub fn p(&self) -> u64 {
        self.core.p
    }

    pub fn degree(&self) -> usize {
        self.core.d
    }

    /// `|k| = p^d`.
    pub fn order(&self) -> u64 {
        self.core.p.pow(self.core.d as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FFElem {
        let mut v = self.core.zero();
        for (i, &c) in coeffs.iter().enumerate().take(self.core.d) {
            v[i] = c % self.core.p;
        }
        FFElem(v)
    }

    /// The class of `x`, printed as `a`.
    pub fn generator(&self) -> FFElem {
        let mut v = self.core.zero();
        if self.core.d == 1 {
            // F_p[x]/(x - c): the generator is the constant c.
            v[0] = (self.core.p - self.core.low[0]) % self.core.p;
        } else {
            v[1] = 1;
        }
        FFElem(v)
    }

    /// All field elements in a fixed order (index written in base p).
    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        let p = self.core.p;
        let d = self.core.d;
        (0..self.order()).map(move |mut idx| {
            let mut v = vec![0; d];
            for c in v.iter_mut() {
                *c = idx % p;
                idx /= p;
            }
            FFElem(v)
        })
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FFElem {
        FFElem((0..self.core.d).map(|_| rng.gen_range(0..self.core.p)).collect())
    }

    pub fn random_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FFElem {
        loop {
            let a = self.random(rng);
            if !self.is_zero(&a) {
                return a;
            }
        }
    }

    pub fn frobenius(&self, a: &FFElem) -> FFElem {
        self.pow(a, self.core.p)
    }

    pub fn inv(&self, a: &FFElem) -> Option<FFElem> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    /// The prime-field value as an integer in `[0, p)`, if `a` lies in `F_p`.
    pub fn as_prime_field(&self, a: &FFElem) -> Option<u64> {
        a.0[1..].iter().all(|&c| c == 0).then_some(a.0[0])
    }

    /// Absolute trace `sum_{i<d} a^{p^i}`.
    pub fn trace(&self, a: &FFElem) -> FFElem {
        let mut acc = self.zero();
        let mut cur = a.clone();
        for _ in 0..self.core.d {
            acc = self.add(&acc, &cur);
            cur = self.frobenius(&cur);
        }
        acc
    }

    /// The unique `r` with `r^p = a` (k is perfect): `r = a^{p^{d-1}}`.
    pub fn pth_root(&self, a: &FFElem) -> FFElem {
        self.pow(a, self.core.p.pow(self.core.d as u32 - 1))
    }

    /// `a^{p^{-e}}`.
    pub fn pth_root_iter(&self, a: &FFElem, e: u32) -> FFElem {
        let d = self.core.d as u32;
        let e = e % d;
        if e == 0 {
            return a.clone();
        }
        self.pow(a, self.core.p.pow(d - e))
    }
}

impl Ring for FiniteField {
    type Elem = FFElem;

    fn zero(&self) -> FFElem {
        FFElem(self.core.zero())
    }
    fn one(&self) -> FFElem {
        FFElem(self.core.scalar(1))
    }
    fn is_zero(&self, a: &FFElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        FFElem(self.core.add(&a.0, &b.0))
    }
    fn neg(&self, a: &FFElem) -> FFElem {
        FFElem(self.core.neg(&a.0))
    }
    fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        FFElem(self.core.mul(&a.0, &b.0))
    }
    fn from_bigint(&self, n: &BigInt) -> FFElem {
        FFElem(self.core.from_bigint(n))
    }
    fn inv(&self, a: &FFElem) -> Option<FFElem> {
        FiniteField::inv(self, a)
    }
    fn char_p(&self) -> Option<u64> {
        Some(self.core.p)
    }
    fn pow(&self, a: &FFElem, e: u64) -> FFElem {
        FFElem(self.core.pow(&a.0, e))
    }
}

/// `Z_q / p^N = W(k) / p^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zq {
    core: PolyMod,
    field: FiniteField,
    /// `sigma(x)`: the root of the lifted modulus congruent to `x^p`.
    frob_x: Arc<Vec<u64>>,
}

impl Zq {
    pub fn new(params: &FieldParams) -> Self {
        Self::with_prec(params, params.zq_prec)
    }

    pub fn with_prec(params: &FieldParams, prec: u32) -> Self {
        let core = PolyMod::new(params, prec);
        let field = FiniteField::new(params);
        let mut zq = Self { core, field, frob_x: Arc::new(Vec::new()) };
        zq.frob_x = Arc::new(zq.solve_frobenius_image());
        zq
    }

    pub fn p(&self) -> u64 {
        self.core.p
    }

    pub fn degree(&self) -> usize {
        self.core.d
    }

    pub fn prec(&self) -> u32 {
        self.core.prec
    }

    /// `p^N`.
    pub fn modulus(&self) -> u64 {
        self.core.q
    }

    pub fn residue_field(&self) -> &FiniteField {
        &self.field
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> ZqElem {
        let mut v = self.core.zero();
        for (i, &c) in coeffs.iter().enumerate().take(self.core.d) {
            v[i] = c % self.core.q;
        }
        ZqElem(v)
    }

    pub fn from_u64(&self, n: u64) -> ZqElem {
        ZqElem(self.core.scalar(n))
    }

    /// Coefficientwise lift with digits in `[0, p)`. Not multiplicative; see
    /// [`Zq::teichmuller`].
    pub fn lift(&self, a: &FFElem) -> ZqElem {
        ZqElem(a.0.clone())
    }

    pub fn reduce(&self, z: &ZqElem) -> FFElem {
        FFElem(z.0.iter().map(|&c| c % self.core.p).collect())
    }

    /// Reduce modulo `p^m` (kept as an element of this ring).
    pub fn truncate(&self, z: &ZqElem, m: u32) -> ZqElem {
        let pm = self.core.p.pow(m.min(self.core.prec));
        ZqElem(z.0.iter().map(|&c| c % pm).collect())
    }

    pub fn scale(&self, z: &ZqElem, c: u64) -> ZqElem {
        ZqElem(self.core.scale(&z.0, c))
    }

    /// p-adic valuation (`N` for zero).
    pub fn valuation(&self, z: &ZqElem) -> u32 {
        z.0.iter()
            .filter(|&&c| c != 0)
            .map(|&c| {
                let mut v = 0;
                let mut c = c;
                while c % self.core.p == 0 {
                    c /= self.core.p;
                    v += 1;
                }
                v
            })
            .min()
            .unwrap_or(self.core.prec)
    }

    /// `z / p`, if every coefficient is divisible by `p`; the top digit of
    /// the result is unknown and set to zero.
    pub fn div_p(&self, z: &ZqElem) -> Option<ZqElem> {
        let p = self.core.p;
        if z.0.iter().any(|&c| c % p != 0) {
            return None;
        }
        Some(ZqElem(z.0.iter().map(|&c| c / p).collect()))
    }

    pub fn inv(&self, z: &ZqElem) -> Option<ZqElem> {
        let u0 = self.field.inv(&self.reduce(z))?;
        let mut u = self.lift(&u0);
        let two = self.from_u64(2);
        for _ in 0..=(32 - self.core.prec.leading_zeros()) + 1 {
            u = self.mul(&u, &self.sub(&two, &self.mul(z, &u)));
        }
        Some(u)
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> ZqElem {
        ZqElem((0..self.core.d).map(|_| rng.gen_range(0..self.core.q)).collect())
    }

    /// Teichmüller lift: the unique root of `X^{p^d} = X` reducing to `a`.
    pub fn teichmuller(&self, a: &FFElem) -> ZqElem {
        let q_k = self.field.order();
        let iters = (self.core.prec as usize).div_ceil(self.core.d) + 1;
        let mut t = self.lift(a);
        for _ in 0..iters {
            t = self.pow(&t, q_k);
        }
        t
    }

    fn eval_modulus(&self, x: &[u64]) -> (Vec<u64>, Vec<u64>) {
        // Horner for f~ and f~' together.
        let c = &self.core;
        let d = c.d;
        let coeff = |i: usize| if i == d { 1 } else { c.low[i] };
        let mut f = c.scalar(1);
        let mut df = c.zero();
        for i in (0..d).rev() {
            df = c.add(&c.mul(&df, x), &f);
            f = c.add(&c.mul(&f, x), &c.scalar(coeff(i)));
        }
        (f, df)
    }

    fn solve_frobenius_image(&self) -> Vec<u64> {
        let c = &self.core;
        if c.d == 1 {
            // x = -c_0 is already in Z_p, fixed by sigma
            return vec![(c.q - c.low[0]) % c.q];
        }
        let mut x = c.zero();
        x[1] = 1;
        let mut xi = c.pow(&x, c.p);
        for _ in 0..=(32 - c.prec.leading_zeros()) + 1 {
            let (f, df) = self.eval_modulus(&xi);
            let inv = self.inv(&ZqElem(df)).expect("modulus is separable").0;
            xi = c.add(&xi, &c.neg(&c.mul(&f, &inv)));
        }
        xi
    }

    /// The Frobenius automorphism `sigma` of `Z_q`.
    pub fn frobenius(&self, z: &ZqElem) -> ZqElem {
        let c = &self.core;
        let mut acc = c.zero();
        for &coef in z.0.iter().rev() {
            acc = c.add(&c.mul(&acc, &self.frob_x), &c.scalar(coef));
        }
        ZqElem(acc)
    }

    pub fn frobenius_pow(&self, z: &ZqElem, e: usize) -> ZqElem {
        (0..e % self.core.d).fold(z.clone(), |acc, _| self.frobenius(&acc))
    }

    /// Trace `W(k) -> W(F_p) = Z_p`, as an integer mod `p^N`.
    pub fn trace(&self, z: &ZqElem) -> u64 {
        let mut acc = self.zero();
        let mut cur = z.clone();
        for _ in 0..self.core.d {
            acc = self.add(&acc, &cur);
            cur = self.frobenius(&cur);
        }
        debug_assert!(acc.0[1..].iter().all(|&c| c == 0), "trace left Z_p: {acc:?}");
        acc.0[0]
    }

    /// Witt coordinates of `z mod p^m`: the digits `(a_i)` with
    /// `z = sum p^i [a_i^{p^{-i}}]`.
    pub fn teich_digits(&self, z: &ZqElem, m: usize) -> Vec<FFElem> {
        assert!(m as u32 <= self.core.prec, "digit count exceeds precision");
        let mut rem = z.clone();
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let b = self.reduce(&rem);
            out.push(self.field.pow(&b, self.core.p.pow(i as u32)));
            if i + 1 < m {
                rem = self
                    .div_p(&self.sub(&rem, &self.teichmuller(&b)))
                    .expect("remainder after Teichmüller digit is divisible by p");
            }
        }
        out
    }

    /// Inverse of [`Zq::teich_digits`].
    pub fn digits_to_zq(&self, digits: &[FFElem]) -> ZqElem {
        let mut acc = self.zero();
        let mut pw = 1u64;
        for (i, a) in digits.iter().enumerate() {
            if i as u32 >= self.core.prec {
                break;
            }
            let root = self.field.pth_root_iter(a, i as u32);
            acc = self.add(&acc, &self.scale(&self.teichmuller(&root), pw));
            pw = pw.saturating_mul(self.core.p);
        }
        acc
    }

    /// Re-express an element of a ring with a different precision.
    pub fn convert(&self, z: &ZqElem) -> ZqElem {
        self.from_coeffs(&z.0)
    }
}

impl Ring for Zq {
    type Elem = ZqElem;

    fn zero(&self) -> ZqElem {
        ZqElem(self.core.zero())
    }
    fn one(&self) -> ZqElem {
        ZqElem(self.core.scalar(1))
    }
    fn is_zero(&self, a: &ZqElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        ZqElem(self.core.add(&a.0, &b.0))
    }
    fn neg(&self, a: &ZqElem) -> ZqElem {
        ZqElem(self.core.neg(&a.0))
    }
    fn mul(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        ZqElem(self.core.mul(&a.0, &b.0))
    }
    fn from_bigint(&self, n: &BigInt) -> ZqElem {
        ZqElem(self.core.from_bigint(n))
    }
    fn inv(&self, a: &ZqElem) -> Option<ZqElem> {
        Zq::inv(self, a)
    }
    fn pow(&self, a: &ZqElem, e: u64) -> ZqElem {
        ZqElem(self.core.pow(&a.0, e))
    }
}

/// The fixed element `beta = [alpha]` with `Tr(alpha) != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Beta {
    pub alpha: FFElem,
    pub beta: ZqElem,
    /// `Tr_{k/F_p}(alpha)` as an integer in `[1, p)`.
    pub alpha_trace: u64,
}

impl Beta {
    /// First element (in [`FiniteField::elements`] order) with nonzero trace.
    pub fn choose(zq: &Zq) -> Self {
        let k = zq.residue_field();
        let alpha = k.elements().find(|a| !k.is_zero(&k.trace(a))).expect("the trace form is surjective");
        Self::from_alpha(zq, alpha).expect("trace is nonzero")
    }

    pub fn from_alpha(zq: &Zq, alpha: FFElem) -> Result<Self> {
        let k = zq.residue_field();
        let tr = k.as_prime_field(&k.trace(&alpha)).expect("trace lies in F_p");
        if tr == 0 {
            return Err(Error::InvalidField(format!("Tr({alpha}) = 0")));
        }
        Ok(Self { beta: zq.teichmuller(&alpha), alpha, alpha_trace: tr })
    }
}

/// `k`, `Z_q / p^N` and `beta` for one parameter set.
#[derive(Debug, Clone)]
pub struct Tower {
    pub params: FieldParams,
    pub k: FiniteField,
    pub zq: Zq,
    pub beta: Beta,
}

impl Tower {
    pub fn new(params: FieldParams) -> Self {
        let k = FiniteField::new(&params);
        let zq = Zq::new(&params);
        let beta = Beta::choose(&zq);
        Self { params, k, zq, beta }
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    /// The same field with a different p-adic precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        let mut params = self.params.clone();
        params.zq_prec = prec;
        let zq = Zq::new(&params);
        let beta = Beta::from_alpha(&zq, self.beta.alpha.clone()).expect("alpha unchanged");
        Self { params, k: self.k.clone(), zq, beta }
    }
}

// Free-function spellings of the tower operations.

pub fn ff_trace(k: &FiniteField, a: &FFElem) -> FFElem {
    k.trace(a)
}

pub fn teichmuller(zq: &Zq, a: &FFElem) -> ZqElem {
    zq.teichmuller(a)
}

pub fn frobenius_zq(zq: &Zq, z: &ZqElem) -> ZqElem {
    zq.frobenius(z)
}

pub fn trace_zq(zq: &Zq, z: &ZqElem) -> u64 {
    zq.trace(z)
}

pub fn teich_digits(zq: &Zq, z: &ZqElem, m: usize) -> Vec<FFElem> {
    zq.teich_digits(z, m)
}

pub fn digits_to_zq(zq: &Zq, digits: &[FFElem]) -> ZqElem {
    zq.digits_to_zq(digits)
}

pub fn pth_root_ff(k: &FiniteField, a: &FFElem) -> FFElem {
    k.pth_root(a)
}
