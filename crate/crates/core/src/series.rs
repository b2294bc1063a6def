//! Bivariate Laurent series in `S`, `T`, differential forms, `dlog` and the
//! residue.
//!
//! Truncation is by weighted degree `deg(s, t) = s + weight * t`. A series is
//! exact for every exponent of degree below its `prec` (`None` means the
//! stored terms are the whole element). With `weight` larger than every
//! `-s/t` ratio in play, units of `k((S))((T))` whose non-leading terms are
//! T-positive have non-leading terms of positive degree, and their geometric
//! expansions are finite below any degree bound.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Ring;

/// An exponent pair `(s, t)` for `S^s T^t`, ordered T-first:
/// `(i1, i2) < (j1, j2)` iff `i2 < j2`, or `i2 == j2` and `i1 < j1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExpVec {
    pub s: i64,
    pub t: i64,
}

impl ExpVec {
    pub const ZERO: ExpVec = ExpVec { s: 0, t: 0 };

    pub fn new(s: i64, t: i64) -> Self {
        Self { s, t }
    }

    pub fn scale(self, k: i64) -> Self {
        Self::new(self.s * k, self.t * k)
    }

    /// Strictly positive in the T-first order.
    pub fn is_positive(self) -> bool {
        self > Self::ZERO
    }
}

impl std::ops::Add for ExpVec {
    type Output = ExpVec;
    fn add(self, o: ExpVec) -> ExpVec {
        ExpVec::new(self.s + o.s, self.t + o.t)
    }
}

impl std::ops::Neg for ExpVec {
    type Output = ExpVec;
    fn neg(self) -> ExpVec {
        ExpVec::new(-self.s, -self.t)
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.t.cmp(&other.t).then(self.s.cmp(&other.s))
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s, self.t)
    }
}

/// The truncation model shared by a family of series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionWindow {
    /// Degree of `T`; the degree of `S` is 1.
    pub weight: i64,
    /// Terms of degree `>= cap` are never stored.
    pub cap: i64,
}

impl PrecisionWindow {
    pub fn new(weight: i64, cap: i64) -> Self {
        assert!(weight >= 1, "weight must be positive");
        Self { weight, cap }
    }

    pub fn degree(&self, e: ExpVec) -> i64 {
        e.s + self.weight * e.t
    }

    /// Same model with weight and cap doubled.
    pub fn widened(&self) -> Self {
        Self { weight: self.weight * 2, cap: self.cap.saturating_mul(2).max(self.cap + 64) }
    }
}

impl Default for PrecisionWindow {
    fn default() -> Self {
        Self { weight: 64, cap: 64 * 64 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series<E> {
    terms: BTreeMap<ExpVec, E>,
    /// Exact below this degree; `None` for a finite (exact) element.
    prec: Option<i64>,
}

impl<E> Series<E> {
    pub fn terms(&self) -> &BTreeMap<ExpVec, E> {
        &self.terms
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn coeff(&self, e: ExpVec) -> Option<&E> {
        self.terms.get(&e)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// `us dS + ut dT`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm<E> {
    pub us: Series<E>,
    pub ut: Series<E>,
}

/// `f dS ∧ dT`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoForm<E> {
    pub f: Series<E>,
}

/// Laurent series over a coefficient ring `R`, truncated by `window`.
#[derive(Debug, Clone)]
pub struct SeriesRing<R: Ring> {
    pub base: R,
    pub window: PrecisionWindow,
}

impl<R: Ring> SeriesRing<R> {
    pub fn new(base: R, window: PrecisionWindow) -> Self {
        Self { base, window }
    }

    pub fn degree(&self, e: ExpVec) -> i64 {
        self.window.degree(e)
    }

    /// Build from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(&self, terms: I) -> Series<R::Elem>
    where
        I: IntoIterator<Item = (ExpVec, R::Elem)>,
    {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            accumulate(&self.base, &mut out, e, c);
        }
        self.clip(Series { terms: out, prec: None })
    }

    pub fn monomial(&self, c: R::Elem, e: ExpVec) -> Series<R::Elem> {
        self.from_terms([(e, c)])
    }

    pub fn s(&self) -> Series<R::Elem> {
        self.monomial(self.base.one(), ExpVec::new(1, 0))
    }

    pub fn t(&self) -> Series<R::Elem> {
        self.monomial(self.base.one(), ExpVec::new(0, 1))
    }

    pub fn constant(&self, c: R::Elem) -> Series<R::Elem> {
        self.monomial(c, ExpVec::ZERO)
    }

    /// The same element truncated to this ring's cap.
    pub fn adopt(&self, f: &Series<R::Elem>) -> Series<R::Elem> {
        self.clip(f.clone())
    }

    /// Mark a series as known only below `prec`.
    pub fn with_prec(&self, f: Series<R::Elem>, prec: i64) -> Series<R::Elem> {
        let mut g = f;
        g.prec = min_opt(g.prec, Some(prec));
        let p = g.prec.unwrap();
        let w = self.window;
        g.terms.retain(|&e, _| w.degree(e) < p);
        g
    }

    /// Drop terms at or above the cap, lowering `prec` only if something was lost.
    fn clip(&self, mut f: Series<R::Elem>) -> Series<R::Elem> {
        let w = self.window;
        if let Some(p) = f.prec {
            f.terms.retain(|&e, _| w.degree(e) < p);
        }
        let before = f.terms.len();
        f.terms.retain(|&e, _| w.degree(e) < w.cap);
        if f.terms.len() != before {
            f.prec = min_opt(f.prec, Some(w.cap));
        }
        f
    }

    /// Lower bound for the degree of every (known or unknown) term.
    pub fn degree_valuation(&self, f: &Series<R::Elem>) -> Option<i64> {
        let known = f.terms.keys().map(|&e| self.degree(e)).min();
        min_opt(known, f.prec)
    }

    /// Valuation in the T-first order (smallest exponent with a nonzero
    /// coefficient).
    pub fn valuation(&self, f: &Series<R::Elem>) -> Result<ExpVec> {
        f.terms.keys().next().copied().ok_or(Error::ZeroValuation)
    }

    /// The series with every coefficient mapped through `g` into `target`.
    pub fn map_into<R2: Ring, G>(&self, target: &SeriesRing<R2>, f: &Series<R::Elem>, g: G) -> Series<R2::Elem>
    where
        G: Fn(&R::Elem) -> R2::Elem,
    {
        let mut out = BTreeMap::new();
        for (&e, c) in &f.terms {
            accumulate(&target.base, &mut out, e, g(c));
        }
        target.clip(Series { terms: out, prec: f.prec })
    }

    pub fn scale(&self, f: &Series<R::Elem>, c: &R::Elem) -> Series<R::Elem> {
        let mut out = BTreeMap::new();
        for (&e, x) in &f.terms {
            accumulate(&self.base, &mut out, e, self.base.mul(c, x));
        }
        Series { terms: out, prec: f.prec }
    }

    /// Multiply by `S^e.s T^e.t`.
    pub fn shift(&self, f: &Series<R::Elem>, e: ExpVec) -> Series<R::Elem> {
        let terms = f.terms.iter().map(|(&x, c)| (x + e, c.clone())).collect();
        let prec = f.prec.map(|p| p + self.degree(e));
        self.clip(Series { terms, prec })
    }

    /// Coefficients of `f` and `g` agree at every exponent where both are known.
    pub fn eq_within(&self, f: &Series<R::Elem>, g: &Series<R::Elem>) -> bool {
        self.is_zero_within(&self.sub(f, g))
    }

    /// Zero at every known exponent.
    pub fn is_zero_within(&self, f: &Series<R::Elem>) -> bool {
        f.terms.is_empty()
    }

    /// Multiplicative inverse of `f = c S^a T^b (1 + r)` where every term of
    /// `r` is T-positive.
    pub fn inv_unit(&self, f: &Series<R::Elem>) -> Result<Series<R::Elem>> {
        let lead_exp = self.valuation(f).map_err(|_| Error::NotAUnit("zero series".into()))?;
        let lead = &f.terms[&lead_exp];
        let lead_inv = self
            .base
            .inv(lead)
            .ok_or_else(|| Error::NotAUnit(format!("leading coefficient at {lead_exp} is not invertible")))?;
        let lead_deg = self.degree(lead_exp);
        // r = f / lead - 1; every term must have positive degree
        let mut r_terms = BTreeMap::new();
        for (&e, c) in &f.terms {
            if e == lead_exp {
                continue;
            }
            let rel = ExpVec::new(e.s - lead_exp.s, e.t - lead_exp.t);
            if self.degree(rel) <= 0 {
                return Err(Error::WindowTooSmall(format!(
                    "weight {} does not order {} after the leading term {}",
                    self.window.weight, e, lead_exp
                )));
            }
            r_terms.insert(rel, self.base.mul(c, &lead_inv));
        }
        if let Some(p) = f.prec {
            if p <= lead_deg {
                return Err(Error::NotAUnit("leading term is not known".into()));
            }
        }
        if r_terms.is_empty() && f.prec.is_none() {
            return Ok(self.monomial(lead_inv, -lead_exp));
        }
        // 1/(1 + r) is known below this relative degree
        let mut bound = (self.window.cap + lead_deg).max(1);
        if let Some(p) = f.prec {
            bound = bound.min(p - lead_deg);
        }
        let r = Series { terms: r_terms, prec: None };
        let neg_r = self.neg(&r);
        let unit_ring = SeriesRing::new(self.base.clone(), PrecisionWindow { cap: bound, ..self.window });
        let mut acc = unit_ring.one();
        let mut pw = unit_ring.one();
        while !pw.terms.is_empty() {
            pw = unit_ring.mul(&pw, &neg_r);
            pw.prec = None;
            pw.terms.retain(|&e, _| unit_ring.degree(e) < bound);
            acc = unit_ring.add(&acc, &pw);
        }
        acc.prec = Some(bound);
        acc.terms.retain(|&e, _| unit_ring.degree(e) < bound);
        let scaled = self.scale(&acc, &lead_inv);
        Ok(self.shift(&scaled, -lead_exp))
    }

    /// `df/dS`.
    pub fn deriv_s(&self, f: &Series<R::Elem>) -> Series<R::Elem> {
        let mut out = BTreeMap::new();
        for (&e, c) in &f.terms {
            accumulate(&self.base, &mut out, ExpVec::new(e.s - 1, e.t), self.base.mul_int(c, e.s));
        }
        Series { terms: out, prec: f.prec.map(|p| p - 1) }
    }

    /// `df/dT`.
    pub fn deriv_t(&self, f: &Series<R::Elem>) -> Series<R::Elem> {
        let mut out = BTreeMap::new();
        for (&e, c) in &f.terms {
            accumulate(&self.base, &mut out, ExpVec::new(e.s, e.t - 1), self.base.mul_int(c, e.t));
        }
        Series { terms: out, prec: f.prec.map(|p| p - self.window.weight) }
    }

    /// `df / f` as a one-form.
    pub fn dlog_unit(&self, f: &Series<R::Elem>) -> Result<OneForm<R::Elem>> {
        let inv = self.inv_unit(f)?;
        Ok(OneForm { us: self.mul(&self.deriv_s(f), &inv), ut: self.mul(&self.deriv_t(f), &inv) })
    }

    pub fn wedge(&self, u: &OneForm<R::Elem>, v: &OneForm<R::Elem>) -> TwoForm<R::Elem> {
        TwoForm { f: self.sub(&self.mul(&u.us, &v.ut), &self.mul(&u.ut, &v.us)) }
    }

    pub fn add_forms(&self, a: &TwoForm<R::Elem>, b: &TwoForm<R::Elem>) -> TwoForm<R::Elem> {
        TwoForm { f: self.add(&a.f, &b.f) }
    }

    /// Coefficient of `S^-1 T^-1 dS ∧ dT`.
    pub fn residue(&self, w: &TwoForm<R::Elem>) -> Result<R::Elem> {
        let at = ExpVec::new(-1, -1);
        if let Some(p) = w.f.prec {
            if self.degree(at) >= p {
                return Err(Error::WindowTooSmall(format!(
                    "residue needs degree {} but the form is exact only below {p}",
                    self.degree(at)
                )));
            }
        }
        Ok(w.f.terms.get(&at).cloned().unwrap_or_else(|| self.base.zero()))
    }

    /// `Res(f * w)` without forming the product.
    pub fn residue_of_product(&self, f: &Series<R::Elem>, w: &TwoForm<R::Elem>) -> Result<R::Elem> {
        let at = ExpVec::new(-1, -1);
        let need = self.degree(at);
        let prec = min_opt(
            f.prec.zip(self.degree_valuation(&w.f)).map(|(p, v)| p + v),
            w.f.prec.zip(self.degree_valuation(f)).map(|(p, v)| p + v),
        );
        if let Some(p) = prec {
            if need >= p {
                return Err(Error::WindowTooSmall(format!(
                    "residue needs degree {need} but the product is exact only below {p}"
                )));
            }
        }
        let mut acc = self.base.zero();
        for (&e, c) in &f.terms {
            let other = ExpVec::new(-1 - e.s, -1 - e.t);
            if let Some(x) = w.f.terms.get(&other) {
                acc = self.base.add(&acc, &self.base.mul(c, x));
            }
        }
        Ok(acc)
    }

    fn frobenius_power(&self, f: &Series<R::Elem>, e: u64) -> Series<R::Elem> {
        let mut out = BTreeMap::new();
        for (&x, c) in &f.terms {
            accumulate(&self.base, &mut out, x.scale(e as i64), self.base.pow(c, e));
        }
        self.clip(Series { terms: out, prec: f.prec.map(|p| p.saturating_mul(e as i64)) })
    }
}

fn accumulate<R: Ring>(base: &R, map: &mut BTreeMap<ExpVec, R::Elem>, e: ExpVec, c: R::Elem) {
    if base.is_zero(&c) {
        return;
    }
    match map.get_mut(&e) {
        Some(v) => {
            *v = base.add(v, &c);
            if base.is_zero(v) {
                map.remove(&e);
            }
        }
        None => {
            map.insert(e, c);
        }
    }
}

impl<R: Ring> Ring for SeriesRing<R> {
    type Elem = Series<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Series { terms: BTreeMap::new(), prec: None }
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    /// Exactly zero; see [`SeriesRing::is_zero_within`] for the truncated test.
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.terms.is_empty() && a.prec.is_none()
    }

    fn mul_int(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.scale(a, &self.base.from_i64(n))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = a.terms.clone();
        for (&e, c) in &b.terms {
            accumulate(&self.base, &mut out, e, c.clone());
        }
        self.clip(Series { terms: out, prec: min_opt(a.prec, b.prec) })
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Series { terms: a.terms.iter().map(|(&e, c)| (e, self.base.neg(c))).collect(), prec: a.prec }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let va = self.degree_valuation(a);
        let vb = self.degree_valuation(b);
        if self.is_zero(a) || self.is_zero(b) {
            return self.zero();
        }
        let prec = min_opt(a.prec.zip(vb).map(|(p, v)| p + v), b.prec.zip(va).map(|(p, v)| p + v));
        let bound = prec.map_or(self.window.cap, |p| p.min(self.window.cap));
        let mut la: Vec<(i64, ExpVec, &R::Elem)> = a.terms.iter().map(|(&e, c)| (self.degree(e), e, c)).collect();
        let mut lb: Vec<(i64, ExpVec, &R::Elem)> = b.terms.iter().map(|(&e, c)| (self.degree(e), e, c)).collect();
        la.sort_by_key(|x| x.0);
        lb.sort_by_key(|x| x.0);
        let mut out = BTreeMap::new();
        let mut dropped = false;
        for &(da, ea, ca) in &la {
            for &(db, eb, cb) in &lb {
                if da + db >= bound {
                    dropped = true;
                    break;
                }
                accumulate(&self.base, &mut out, ea + eb, self.base.mul(ca, cb));
            }
        }
        let mut prec = prec;
        if dropped && bound == self.window.cap {
            prec = min_opt(prec, Some(self.window.cap));
        }
        Series { terms: out, prec }
    }

    fn from_bigint(&self, n: &num_bigint::BigInt) -> Self::Elem {
        self.constant(self.base.from_bigint(n))
    }

    fn pow(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        if let Some(p) = self.base.char_p() {
            let mut pe = 1u64;
            while pe < e {
                pe = pe.saturating_mul(p);
            }
            if pe == e {
                return self.frobenius_power(a, e);
            }
        }
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
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

    fn char_p(&self) -> Option<u64> {
        self.base.char_p()
    }
}

// Free-function forms.

pub fn valuation<R: Ring>(ring: &SeriesRing<R>, f: &Series<R::Elem>) -> Result<ExpVec> {
    ring.valuation(f)
}

pub fn dlog_unit<R: Ring>(ring: &SeriesRing<R>, f: &Series<R::Elem>) -> Result<OneForm<R::Elem>> {
    ring.dlog_unit(f)
}

pub fn wedge<R: Ring>(ring: &SeriesRing<R>, u: &OneForm<R::Elem>, v: &OneForm<R::Elem>) -> TwoForm<R::Elem> {
    ring.wedge(u, v)
}

pub fn residue<R: Ring>(ring: &SeriesRing<R>, w: &TwoForm<R::Elem>) -> Result<R::Elem> {
    ring.residue(w)
}

/// Text form `c*S^i*T^j + ...`, terms in increasing T-first order.
pub struct SeriesDisplay<'a, E>(pub &'a Series<E>);

impl<E: fmt::Display> fmt::Display for SeriesDisplay<'_, E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let series = self.0;
        if series.terms.is_empty() {
            f.write_str("0")?;
        }
        for (n, (e, c)) in series.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let cs = c.to_string();
            let mono = e.s != 0 || e.t != 0;
            let mut parts: Vec<String> = Vec::new();
            if !(mono && cs == "1") {
                parts.push(if cs.contains('+') { format!("({cs})") } else { cs });
            }
            for (var, x) in [("S", e.s), ("T", e.t)] {
                match x {
                    0 => {}
                    1 => parts.push(var.to_string()),
                    _ => parts.push(format!("{var}^{x}")),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        if let Some(p) = series.prec {
            write!(f, " + O(deg >= {p})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_tower::{FieldParams, FiniteField, Tower};

    fn fp(p: u64) -> (FiniteField, SeriesRing<FiniteField>) {
        let k = FiniteField::new(&FieldParams::with_default_modulus(p, 1, 1).unwrap());
        (k.clone(), SeriesRing::new(k, PrecisionWindow::new(16, 400)))
    }

    fn e(s: i64, t: i64) -> ExpVec {
        ExpVec::new(s, t)
    }

    #[test]
    fn order_is_t_first() {
        assert!(e(5, 0) < e(-100, 1));
        assert!(e(-3, 2) < e(1, 2));
        assert!(e(0, 1).is_positive());
        assert!(!e(7, -1).is_positive());
    }

    #[test]
    fn valuation_examples() {
        let (k, r) = fp(5);
        let one = k.one();
        let f = r.from_terms([(e(2, -1), one.clone()), (e(-3, -1), one.clone()), (e(0, 5), one.clone())]);
        assert_eq!(r.valuation(&f).unwrap(), e(-3, -1));
        assert_eq!(r.valuation(&r.one()).unwrap(), e(0, 0));
        let g = r.from_terms([(e(5, 0), one.clone()), (e(0, 1), one)]);
        assert_eq!(r.valuation(&g).unwrap(), e(5, 0));
        assert_eq!(r.valuation(&r.zero()), Err(Error::ZeroValuation));
    }

    #[test]
    fn inverse_examples() {
        let (k, r) = fp(3);
        let a = k.from_coeffs(&[2]);
        let f = r.add(&r.one(), &r.monomial(a.clone(), e(1, 1)));
        let inv = r.inv_unit(&f).unwrap();
        // geometric series in -aST
        for kk in 0..5 {
            let expect = k.pow(&k.neg(&a), kk);
            assert_eq!(inv.coeff(e(kk as i64, kk as i64)), Some(&expect));
        }
        assert!(r.eq_within(&r.mul(&f, &inv), &r.one()));
        let st = r.monomial(k.one(), e(1, 1));
        let sinv = r.monomial(k.one(), e(-1, -1));
        assert_eq!(r.mul(&st, &sinv), r.one());
        // S^2 (1 + T) -> S^-2 (1 - T + T^2 - ...)
        let g = r.mul(&r.monomial(k.one(), e(2, 0)), &r.add(&r.one(), &r.t()));
        let ginv = r.inv_unit(&g).unwrap();
        assert_eq!(ginv.coeff(e(-2, 0)), Some(&k.one()));
        assert_eq!(ginv.coeff(e(-2, 1)), Some(&k.neg(&k.one())));
        assert_eq!(ginv.coeff(e(-2, 2)), Some(&k.one()));
        assert!(r.eq_within(&r.mul(&g, &ginv), &r.one()));
    }

    #[test]
    fn inverse_needs_adequate_weight() {
        let (k, _) = fp(3);
        let r = SeriesRing::new(k.clone(), PrecisionWindow::new(2, 100));
        // 1 + S^-5 T: T-positive but degree -3 with weight 2
        let f = r.add(&r.one(), &r.monomial(k.one(), e(-5, 1)));
        assert!(matches!(r.inv_unit(&f), Err(Error::WindowTooSmall(_))));
        let wide = SeriesRing::new(k.clone(), r.window.widened().widened());
        assert!(wide.inv_unit(&f).is_ok());
        assert!(matches!(r.inv_unit(&r.zero()), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn dlog_examples() {
        let (k, r) = fp(5);
        let ds = r.dlog_unit(&r.s()).unwrap();
        assert_eq!(ds.us, r.monomial(k.one(), e(-1, 0)));
        assert!(ds.ut.is_empty());
        let dt = r.dlog_unit(&r.t()).unwrap();
        let w = r.wedge(&ds, &dt);
        assert_eq!(w.f, r.monomial(k.one(), e(-1, -1)));
        assert!(r.wedge(&ds, &ds).f.is_empty());
        // dlog(S(1+T)) = dlog S + dlog(1+T)
        let one_t = r.add(&r.one(), &r.t());
        let prod = r.dlog_unit(&r.mul(&r.s(), &one_t)).unwrap();
        let parts = r.dlog_unit(&one_t).unwrap();
        assert!(r.eq_within(&prod.us, &r.add(&ds.us, &parts.us)));
        assert!(r.eq_within(&prod.ut, &r.add(&ds.ut, &parts.ut)));
        assert!(r.eq_within(&prod.ut, &r.inv_unit(&one_t).unwrap()));
    }

    #[test]
    fn wedge_of_unit_with_s() {
        // dlog(1 + aST) ∧ dlog S = -a (1 + aST)^-1 dS ∧ dT
        let (k, r) = fp(5);
        let a = k.from_coeffs(&[3]);
        let u = r.add(&r.one(), &r.monomial(a.clone(), e(1, 1)));
        let w = r.wedge(&r.dlog_unit(&u).unwrap(), &r.dlog_unit(&r.s()).unwrap());
        let expect = r.scale(&r.inv_unit(&u).unwrap(), &k.neg(&a));
        assert!(r.eq_within(&w.f, &expect));
    }

    #[test]
    fn residue_examples() {
        let (k, r) = fp(3);
        assert_eq!(r.residue(&TwoForm { f: r.monomial(k.one(), e(-1, -1)) }).unwrap(), k.one());
        assert_eq!(r.residue(&TwoForm { f: r.monomial(k.one(), e(-1, 0)) }).unwrap(), k.zero());
        let a = k.from_coeffs(&[2]);
        let u = r.add(&r.one(), &r.monomial(a, e(1, 1)));
        let w = TwoForm { f: r.shift(&r.inv_unit(&u).unwrap(), e(-1, -1)) };
        assert_eq!(r.residue(&w).unwrap(), k.one());
        let truncated = TwoForm { f: r.with_prec(r.one(), -100) };
        assert!(matches!(r.residue(&truncated), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn residue_antisymmetric_over_zq() {
        let t = Tower::new(FieldParams::with_default_modulus(3, 2, 3).unwrap());
        let r = SeriesRing::new(t.zq.clone(), PrecisionWindow::new(16, 600));
        let a = t.zq.teichmuller(&t.k.generator());
        let f = r.add(&r.one(), &r.monomial(a, e(2, 1)));
        let g = r.mul(&r.s(), &r.add(&r.one(), &r.monomial(t.zq.one(), e(-1, 1))));
        let (df, dg) = (r.dlog_unit(&f).unwrap(), r.dlog_unit(&g).unwrap());
        let x = r.from_terms([(e(-2, -1), t.zq.one()), (e(-3, -2), t.zq.from_u64(5))]);
        let fg = r.residue_of_product(&x, &r.wedge(&df, &dg)).unwrap();
        let gf = r.residue_of_product(&x, &r.wedge(&dg, &df)).unwrap();
        assert_eq!(fg, t.zq.neg(&gf));
    }

    #[test]
    fn display_forms() {
        let (k, r) = fp(5);
        let f = r.from_terms([(e(0, 0), k.one()), (e(2, -3), k.from_coeffs(&[2]))]);
        assert_eq!(SeriesDisplay(&f).to_string(), "2*S^2*T^-3 + 1");
    }
}
