//! Canonical products of Milnor `K_2` symbols in the p-completion.
//!
//! An element is `{S,T}^e · Π {1 + a S^i T^j, S or T}^n` with `(i, j)`
//! T-positive. The second entry is `S` when `p ∤ j` and `T` when `p | j`,
//! `p ∤ i`; exponents live in `Z/p^m`.

use std::fmt;

use num_integer::Integer;

use crate::context::{Context, KSeries};
use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::ring_tower::{FFElem, FiniteField, Zq, ZqElem};
use crate::series::{ExpVec, SeriesRing, TwoForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum K2Kind {
    S,
    T,
}

impl K2Kind {
    /// The kind forced by `(i, j)`, if the pair can index a generator.
    pub fn for_index(p: u64, i: i64, j: i64) -> Option<Self> {
        let p = p as i64;
        if !ExpVec::new(i, j).is_positive() {
            return None;
        }
        if j % p != 0 {
            Some(K2Kind::S)
        } else if i % p != 0 {
            Some(K2Kind::T)
        } else {
            None
        }
    }

    pub fn var(self) -> &'static str {
        match self {
            K2Kind::S => "S",
            K2Kind::T => "T",
        }
    }
}

/// `{1 + a S^i T^j, S or T}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct K2Generator {
    pub kind: K2Kind,
    pub i: i64,
    pub j: i64,
    pub a: FFElem,
    pub n: u64,
}

impl K2Generator {
    pub fn exp(&self) -> ExpVec {
        ExpVec::new(self.i, self.j)
    }

    fn key(&self) -> (ExpVec, K2Kind, &FFElem) {
        (self.exp(), self.kind, &self.a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CanonicalK2 {
    /// Exponent of `{S, T}` in `[0, p^m)`.
    pub e: u64,
    pub gens: Vec<K2Generator>,
}

impl CanonicalK2 {
    pub fn st(ctx: &Context, e: i64) -> Self {
        Self { e: ctx.modpm(e as i128), gens: Vec::new() }
    }

    /// A single generator of the kind forced by `(i, j)`.
    pub fn generator(ctx: &Context, i: i64, j: i64, a: FFElem, n: i64) -> Result<Self> {
        let kind = K2Kind::for_index(ctx.p(), i, j)
            .ok_or_else(|| Error::Config(format!("({i}, {j}) does not index a generator")))?;
        if ctx.k().is_zero(&a) {
            return Err(Error::Config("generator coefficient must be nonzero".into()));
        }
        Ok(Self { e: 0, gens: vec![K2Generator { kind, i, j, a, n: ctx.modpm(n as i128) }] }.normalized(ctx))
    }

    pub fn is_trivial(&self) -> bool {
        self.e == 0 && self.gens.is_empty()
    }

    /// Sort by `(i, j)` in T-first order, merge equal keys, drop zero exponents.
    pub fn normalized(mut self, ctx: &Context) -> Self {
        let pm = ctx.pm();
        self.gens.sort_by(|x, y| x.key().cmp(&y.key()));
        let mut out: Vec<K2Generator> = Vec::with_capacity(self.gens.len());
        for g in self.gens {
            match out.last_mut() {
                Some(last) if last.key() == g.key() => last.n = (last.n + g.n) % pm,
                _ => out.push(K2Generator { n: g.n % pm, ..g }),
            }
        }
        out.retain(|g| g.n != 0);
        Self { e: self.e % pm, gens: out }
    }

    /// The product of two symbols.
    pub fn merge(&self, ctx: &Context, other: &Self) -> Self {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Self { e: (self.e + other.e) % ctx.pm(), gens }.normalized(ctx)
    }

    pub fn pow(&self, ctx: &Context, n: i64) -> Self {
        let mul = |x: u64| ctx.modpm(x as i128 * n as i128);
        Self { e: mul(self.e), gens: self.gens.iter().map(|g| K2Generator { n: mul(g.n), ..g.clone() }).collect() }
            .normalized(ctx)
    }

    pub fn validate(&self, ctx: &Context) -> Result<()> {
        let pm = ctx.pm();
        if self.e >= pm {
            return Err(Error::Config(format!("e = {} is not reduced mod p^m", self.e)));
        }
        for g in &self.gens {
            if K2Kind::for_index(ctx.p(), g.i, g.j) != Some(g.kind) {
                return Err(Error::Config(format!(
                    "{}-type generator at ({}, {}) violates the index cone",
                    g.kind.var(),
                    g.i,
                    g.j
                )));
            }
            if ctx.k().is_zero(&g.a) || g.n == 0 || g.n >= pm {
                return Err(Error::Config("generator with zero coefficient or exponent".into()));
            }
        }
        if self.clone().normalized(ctx) != *self {
            return Err(Error::Config("generators are not sorted and merged".into()));
        }
        Ok(())
    }
}

/// Symbol-product syntax: `{S,T}^e * {1+a*S*T, S}^n * ...`.
impl fmt::Display for CanonicalK2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.e != 0 {
            parts.push(format!("{{S,T}}^{}", self.e));
        }
        for g in &self.gens {
            let mono = monomial_text(g.i, g.j);
            let a = g.a.to_string();
            let coeff = if a == "1" { String::new() } else { format!("({a})*") };
            parts.push(format!("{{1+{coeff}{mono}, {}}}^{}", g.kind.var(), g.n));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" * "))
        }
    }
}

fn monomial_text(i: i64, j: i64) -> String {
    let mut v = Vec::new();
    for (name, x) in [("S", i), ("T", j)] {
        match x {
            0 => {}
            1 => v.push(name.to_string()),
            _ => v.push(format!("{name}^{x}")),
        }
    }
    v.join("*")
}

/// `x^{-1} mod p^m` for `p ∤ x`.
fn inv_mod(x: i64, pm: u64) -> i128 {
    let g = (x as i128).extended_gcd(&(pm as i128));
    debug_assert_eq!(g.gcd.abs(), 1);
    g.x * g.gcd.signum()
}

/// Canonical form of `{1 + a S^i T^j, S}^ns · {1 + a S^i T^j, T}^nt`.
pub fn unit_symbol(ctx: &Context, i: i64, j: i64, a: &FFElem, ns: i64, nt: i64) -> Result<CanonicalK2> {
    let p = ctx.p() as i64;
    let pm = ctx.pm();
    if !ExpVec::new(i, j).is_positive() {
        return Err(Error::NotPrincipalUnit(format!("1 + a*{} is not a principal unit", monomial_text(i, j))));
    }
    let (mut i, mut j, mut a) = (i, j, a.clone());
    let (mut ns, mut nt) = (ns as i128, nt as i128);
    // 1 + a U^p = (1 + a^{1/p} U)^p
    while i % p == 0 && j % p == 0 {
        a = ctx.k().pth_root(&a);
        i /= p;
        j /= p;
        ns *= p as i128;
        nt *= p as i128;
    }
    // {u, S}^i {u, T}^j = 1 for u = 1 + a S^i T^j
    let (kind, n) = if j % p != 0 {
        (K2Kind::S, ns + nt * (-(i as i128)) * inv_mod(j, pm))
    } else {
        (K2Kind::T, nt + ns * (-(j as i128)) * inv_mod(i, pm))
    };
    Ok(CanonicalK2 { e: 0, gens: vec![K2Generator { kind, i, j, a, n: ctx.modpm(n) }] }.normalized(ctx))
}

/// `u = Π (1 + a S^i T^j)` for a principal unit `u`, factors in increasing
/// T-first order of `(i, j)`, up to `u`'s precision in `ks`.
pub fn factor_unit(ks: &SeriesRing<FiniteField>, u: &KSeries) -> Result<Vec<(i64, i64, FFElem)>> {
    let k = &ks.base;
    let mut cur = ks.adopt(u);
    if cur.coeff(ExpVec::ZERO) != Some(&k.one()) {
        return Err(Error::NotPrincipalUnit("constant term is not 1".into()));
    }
    if let Some(e) = cur.terms().keys().find(|e| !e.is_positive() && **e != ExpVec::ZERO) {
        return Err(Error::NotPrincipalUnit(format!("term at {e} is not T-positive")));
    }
    let mut out = Vec::new();
    loop {
        let Some((&e, a)) = cur.terms().iter().find(|(e, _)| **e != ExpVec::ZERO) else { break };
        let bound = cur.prec().unwrap_or(ks.window.cap).min(ks.window.cap);
        if ks.degree(e) >= bound {
            break;
        }
        let factor = ks.add(&ks.one(), &ks.monomial(a.clone(), e));
        out.push((e.s, e.t, a.clone()));
        cur = ks.mul(&cur, &ks.inv_unit(&factor)?);
    }
    Ok(out)
}

/// `f = c · S^a T^b · u` with `u` a principal unit.
pub fn split_monomial(ks: &SeriesRing<FiniteField>, f: &KSeries) -> Result<(FFElem, ExpVec, KSeries)> {
    let k = &ks.base;
    let lead = ks.valuation(f).map_err(|_| Error::NotAUnit("zero series".into()))?;
    let c = f.coeff(lead).cloned().expect("leading term present");
    let cinv = k.inv(&c).expect("field element");
    let u = ks.shift(&ks.scale(f, &cinv), -lead);
    Ok((c, lead, u))
}

fn unit_part(ctx: &Context, ks: &SeriesRing<FiniteField>, u: &KSeries, ns: i64, nt: i64) -> Result<CanonicalK2> {
    let mut acc = CanonicalK2::default();
    if ns == 0 && nt == 0 {
        return Ok(acc);
    }
    for (i, j, a) in factor_unit(ks, u)? {
        acc = acc.merge(ctx, &unit_symbol(ctx, i, j, &a, ns, nt)?);
    }
    Ok(acc)
}

/// `{f, g}` in canonical form. At least one of `f`, `g` must be a monomial
/// `c S^a T^b`; constants and `{-1, ·}` are prime to p and dropped.
pub fn normalize_symbol(ctx: &Context, ks: &SeriesRing<FiniteField>, f: &KSeries, g: &KSeries) -> Result<CanonicalK2> {
    normalize_symbol_with(ctx, ks, ks, f, g)
}

/// As [`normalize_symbol`], factoring the unit part in `factor_ks`. Only
/// generators of degree below its cap are produced.
pub fn normalize_symbol_with(
    ctx: &Context,
    ks: &SeriesRing<FiniteField>,
    factor_ks: &SeriesRing<FiniteField>,
    f: &KSeries,
    g: &KSeries,
) -> Result<CanonicalK2> {
    let (_, ef, uf) = split_monomial(ks, f)?;
    let (_, eg, ug) = split_monomial(ks, g)?;
    let unit_f = uf.terms().len() > 1 || !uf.is_exact();
    let unit_g = ug.terms().len() > 1 || !ug.is_exact();
    if unit_f && unit_g {
        return Err(Error::UnsupportedPair("both entries have non-monomial unit parts".into()));
    }
    let mut acc = CanonicalK2::st(ctx, ef.s * eg.t - ef.t * eg.s);
    if unit_f {
        acc = acc.merge(ctx, &unit_part(ctx, factor_ks, &uf, eg.s, eg.t)?);
    }
    if unit_g {
        acc = acc.merge(ctx, &unit_part(ctx, factor_ks, &ug, -ef.s, -ef.t)?);
    }
    Ok(acc)
}

/// `Σ n · dlog(1 - [-a] S^i T^j) ∧ dlog(S or T) + e · dlog S ∧ dlog T` over `Z_q`.
///
/// For odd `p` the unit lift is `1 + [a] S^i T^j`.
pub fn lift_and_dlog(zring: &SeriesRing<Zq>, y: &CanonicalK2) -> Result<TwoForm<ZqElem>> {
    let zq = &zring.base;
    let ds = zring.dlog_unit(&zring.s())?;
    let dt = zring.dlog_unit(&zring.t())?;
    let mut acc = zring.scale(&zring.wedge(&ds, &dt).f, &zq.from_u64(y.e));
    for g in &y.gens {
        let a = zq.neg(&zq.teichmuller(&zring.base.residue_field().neg(&g.a)));
        let u = zring.add(&zring.one(), &zring.monomial(a, g.exp()));
        let du = zring.dlog_unit(&u)?;
        let other = match g.kind {
            K2Kind::S => &ds,
            K2Kind::T => &dt,
        };
        let w = zring.wedge(&du, other);
        acc = zring.add(&acc, &zring.scale(&w.f, &zq.from_u64(g.n)));
    }
    Ok(TwoForm { f: acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::PrecisionWindow;

    fn e(s: i64, t: i64) -> ExpVec {
        ExpVec::new(s, t)
    }

    #[test]
    fn kinds() {
        assert_eq!(K2Kind::for_index(2, 1, 1), Some(K2Kind::S));
        assert_eq!(K2Kind::for_index(2, 1, 2), Some(K2Kind::T));
        assert_eq!(K2Kind::for_index(2, 1, 0), Some(K2Kind::T));
        assert_eq!(K2Kind::for_index(3, -4, 1), Some(K2Kind::S));
        assert_eq!(K2Kind::for_index(2, 2, 2), None);
        assert_eq!(K2Kind::for_index(2, 3, -1), None);
        assert_eq!(K2Kind::for_index(2, 0, 0), None);
    }

    #[test]
    fn factor_examples() {
        let ctx = Context::new(3, 2, None, 1).unwrap();
        let ks = ctx.k_series(PrecisionWindow::new(8, 60));
        let k = ctx.k();
        let a = k.generator();
        let u = ks.add(&ks.one(), &ks.monomial(a.clone(), e(1, 1)));
        assert_eq!(factor_unit(&ks, &u).unwrap(), vec![(1, 1, a.clone())]);
        assert_eq!(factor_unit(&ks, &ks.one()).unwrap(), vec![]);
        let v = ks.mul(&u, &ks.add(&ks.one(), &ks.monomial(k.one(), e(0, 2))));
        let fs = factor_unit(&ks, &v).unwrap();
        assert_eq!(fs, vec![(1, 1, a), (0, 2, k.one())]);
        let bad = ks.add(&ks.one(), &ks.monomial(k.one(), e(1, -1)));
        assert!(matches!(factor_unit(&ks, &bad), Err(Error::NotPrincipalUnit(_))));
        assert!(matches!(factor_unit(&ks, &ks.t()), Err(Error::NotPrincipalUnit(_))));
    }

    #[test]
    fn factor_round_trip() {
        let ctx = Context::new(2, 2, None, 1).unwrap();
        let ks = ctx.k_series(PrecisionWindow::new(8, 80));
        let k = ctx.k();
        let g = k.generator();
        let u = ks.from_terms([(e(0, 0), k.one()), (e(-3, 1), g.clone()), (e(2, 0), k.one()), (e(5, 2), g)]);
        let fs = factor_unit(&ks, &u).unwrap();
        let mut prod = ks.one();
        for (i, j, a) in &fs {
            prod = ks.mul(&prod, &ks.add(&ks.one(), &ks.monomial(a.clone(), e(*i, *j))));
        }
        assert!(ks.eq_within(&prod, &u));
        let mut sorted = fs.clone();
        sorted.sort_by_key(|f| e(f.0, f.1));
        assert_eq!(sorted, fs);
    }

    #[test]
    fn normalize_monomials() {
        let ctx = Context::new(3, 1, None, 2).unwrap();
        let ks = ctx.k_series(PrecisionWindow::new(8, 60));
        let st = normalize_symbol(&ctx, &ks, &ks.s(), &ks.t()).unwrap();
        assert_eq!(st, CanonicalK2 { e: 1, gens: vec![] });
        let ts = normalize_symbol(&ctx, &ks, &ks.t(), &ks.s()).unwrap();
        assert_eq!(ts.e, 8);
        let two = ks.constant(ctx.k().from_coeffs(&[2]));
        let f = ks.mul(&two, &ks.s());
        assert_eq!(normalize_symbol(&ctx, &ks, &f, &ks.s()).unwrap(), CanonicalK2::default());
    }

    #[test]
    fn conversion_rule() {
        // {1 + a S T^2, S} with p = 2: T-type, n = -j/i = -2
        let ctx = Context::new(2, 1, None, 3).unwrap();
        let ks = ctx.k_series(PrecisionWindow::new(8, 60));
        let k = ctx.k();
        let u = ks.add(&ks.one(), &ks.monomial(k.one(), e(1, 2)));
        let y = normalize_symbol(&ctx, &ks, &u, &ks.s()).unwrap();
        assert_eq!(y.gens.len(), 1);
        assert_eq!(y.gens[0].kind, K2Kind::T);
        assert_eq!(y.gens[0].n, 6);
        // 1 + S^2 T^2 = (1 + S T)^2 in characteristic 2
        let v = ks.add(&ks.one(), &ks.monomial(k.one(), e(2, 2)));
        let z = normalize_symbol(&ctx, &ks, &v, &ks.s()).unwrap();
        assert_eq!(z.gens, vec![K2Generator { kind: K2Kind::S, i: 1, j: 1, a: k.one(), n: 2 }]);
    }

    #[test]
    fn unit_unit_unsupported() {
        let ctx = Context::new(3, 1, None, 1).unwrap();
        let ks = ctx.k_series(PrecisionWindow::new(8, 60));
        let u = ks.add(&ks.one(), &ks.t());
        assert!(matches!(normalize_symbol(&ctx, &ks, &u, &u), Err(Error::UnsupportedPair(_))));
    }

    #[test]
    fn merge_pow_and_display() {
        let ctx = Context::new(3, 1, None, 2).unwrap();
        let k = ctx.k();
        let y = CanonicalK2::generator(&ctx, 1, 1, k.one(), 2).unwrap();
        let z = y.merge(&ctx, &y).merge(&ctx, &CanonicalK2::st(&ctx, 1));
        assert_eq!(z.gens[0].n, 4);
        assert_eq!(z.pow(&ctx, 9), CanonicalK2::default());
        z.validate(&ctx).unwrap();
        assert_eq!(z.to_string(), "{S,T}^1 * {1+S*T, S}^4");
    }

    #[test]
    fn dlog_examples() {
        let ctx = Context::new(5, 1, None, 1).unwrap();
        let zr = SeriesRing::new(ctx.zq().clone(), PrecisionWindow::new(8, 60));
        let w = lift_and_dlog(&zr, &CanonicalK2 { e: 1, gens: vec![] }).unwrap();
        assert_eq!(w.f, zr.monomial(ctx.zq().one(), e(-1, -1)));
        assert!(zr.is_zero_within(&lift_and_dlog(&zr, &CanonicalK2::default()).unwrap().f));
        // {1 + a S^2 T, S}: -a j (1 + a U)^-1 S^{i-1} T^{j-1}
        let a = ctx.k().from_coeffs(&[3]);
        let y = CanonicalK2 { e: 0, gens: vec![K2Generator { kind: K2Kind::S, i: 2, j: 1, a: a.clone(), n: 1 }] };
        let w = lift_and_dlog(&zr, &y).unwrap();
        let za = ctx.zq().teichmuller(&a);
        let u = zr.add(&zr.one(), &zr.monomial(za.clone(), e(2, 1)));
        let expect = zr.shift(&zr.scale(&zr.inv_unit(&u).unwrap(), &ctx.zq().neg(&za)), e(1, 0));
        assert!(zr.eq_within(&w.f, &expect));
    }
}
