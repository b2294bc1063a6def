//! Canonical representatives of `W_m(K) / ℘ W_m(K)` for `K = k((S))((T))`.
//!
//! Every class has a unique representative
//! `c·β ⊕ Σ c_ij [S^-i T^-j]` with `c ∈ Z/p^m`, `c_ij ∈ W_m(k)` and `(i, j)`
//! running over the T-positive pairs with `p ∤ gcd(i, j)`. [`reduce`] finds
//! it together with a witness `w` such that `x = embed(canonical) ⊕ ℘(w)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::context::{Context, KSeries, KWitt, ZSeries};
use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::ring_tower::{FFElem, FiniteField, Zq, ZqElem};
use crate::series::{ExpVec, PrecisionWindow, SeriesRing};
use crate::witt::{WittRing, WittVec};

/// `c·β ⊕ Σ c_ij [S^-i T^-j]`. Keys hold the negated exponent `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CanonicalASW {
    /// Coefficient of `β`, in `[0, p^m)`.
    pub c: u64,
    pub terms: BTreeMap<ExpVec, ZqElem>,
}

impl CanonicalASW {
    pub fn is_zero(&self) -> bool {
        self.c == 0 && self.terms.is_empty()
    }

    pub fn single(i: i64, j: i64, coeff: ZqElem) -> Self {
        Self { c: 0, terms: BTreeMap::from([(ExpVec::new(i, j), coeff)]) }
    }

    /// Check the index cone and that no stored coefficient vanishes.
    pub fn validate(&self, ctx: &Context) -> Result<()> {
        if self.c >= ctx.pm() {
            return Err(Error::Config(format!("c = {} is not reduced mod p^m", self.c)));
        }
        for (e, coeff) in &self.terms {
            if !is_cone_index(ctx.p(), *e) {
                return Err(Error::Config(format!("index {e} is outside the canonical cone")));
            }
            if ctx.zq().is_zero(coeff) {
                return Err(Error::Config(format!("zero coefficient stored at {e}")));
            }
        }
        Ok(())
    }

    /// Componentwise sum.
    pub fn add(&self, ctx: &Context, other: &Self) -> Self {
        let zq = ctx.zq();
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let v = terms.get(e).map_or_else(|| c.clone(), |x| zq.add(x, c));
            if zq.is_zero(&v) {
                terms.remove(e);
            } else {
                terms.insert(*e, v);
            }
        }
        Self { c: (self.c + other.c) % ctx.pm(), terms }
    }
}

impl fmt::Display for CanonicalASW {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c: {}", self.c)?;
        for (e, coeff) in &self.terms {
            write!(f, "; ({},{}): {}", e.s, e.t, coeff)?;
        }
        Ok(())
    }
}

/// `(i, j)` is T-positive and `p ∤ gcd(i, j)`.
pub fn is_cone_index(p: u64, e: ExpVec) -> bool {
    e.is_positive() && primitive_part(p, e).1 == 0
}

/// Write a nonzero `e` as `p^v · e'` with `p ∤ gcd(e')`.
pub fn primitive_part(p: u64, e: ExpVec) -> (ExpVec, u32) {
    assert!(e != ExpVec::ZERO, "the zero exponent has no primitive part");
    let p = p as i64;
    let mut e = e;
    let mut v = 0;
    while e.s % p == 0 && e.t % p == 0 {
        e = ExpVec::new(e.s / p, e.t / p);
        v += 1;
    }
    (e, v)
}

/// Some `v ∈ k` with `v^p - v = r`, when `Tr(r) = 0`.
pub fn solve_wp_k(k: &FiniteField, r: &FFElem) -> Option<FFElem> {
    let p = k.p();
    let d = k.degree();
    // column c = image of the basis vector a^c under v -> v^p - v
    let mut rows: Vec<Vec<u64>> = vec![vec![0; d + 1]; d];
    for c in 0..d {
        let mut basis = vec![0u64; d];
        basis[c] = 1;
        let b = k.from_coeffs(&basis);
        let img = k.sub(&k.frobenius(&b), &b);
        for (r, row) in rows.iter_mut().enumerate() {
            row[c] = img.0.get(r).copied().unwrap_or(0);
        }
    }
    for (r_idx, row) in rows.iter_mut().enumerate() {
        row[d] = r.0.get(r_idx).copied().unwrap_or(0);
    }
    let sol = solve_mod_p(p, rows, d)?;
    Some(k.from_coeffs(&sol))
}

/// Solve an augmented system over `F_p`, free variables set to 0.
fn solve_mod_p(p: u64, mut rows: Vec<Vec<u64>>, ncols: usize) -> Option<Vec<u64>> {
    let inv = |a: u64| -> u64 {
        let mut acc = 1u64;
        for _ in 0..p - 2 {
            acc = acc * a % p;
        }
        acc
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, piv);
        let iv = inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = *x * iv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[ncols] != 0) {
        return None;
    }
    let mut sol = vec![0u64; ncols];
    for (row, &c) in pivots.iter().enumerate() {
        sol[c] = rows[row][ncols];
    }
    Some(sol)
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub canonical: CanonicalASW,
    pub witness: KWitt,
    pub window: PrecisionWindow,
    /// `x = embed(canonical) ⊕ ℘(witness)` holds below this degree.
    pub prec: Option<i64>,
}

/// Starting window for an input: T-positive products of up to `p^(m-1)`
/// input terms must have positive degree.
pub fn initial_window(ctx: &Context, x: &KWitt) -> PrecisionWindow {
    let pm1 = ctx.p().pow(ctx.m as u32 - 1) as i64;
    let mut smin = 0i64;
    let mut tmin = 0i64;
    for coord in &x.coords {
        for e in coord.terms().keys() {
            smin = smin.min(e.s);
            tmin = tmin.min(e.t);
        }
    }
    let weight = pm1 * (1 - smin) + 1;
    let v0 = smin + weight * tmin;
    let cap = 2 * pm1 * (weight - v0) + 32;
    PrecisionWindow::new(weight, cap)
}

const MAX_WIDENINGS: usize = 6;

/// Canonical representative and witness, widening the window as needed.
pub fn reduce(ctx: &Context, x: &KWitt) -> Result<Reduction> {
    let mut window = initial_window(ctx, x);
    let mut last = String::new();
    for _ in 0..=MAX_WIDENINGS {
        match reduce_in(ctx, window, x) {
            Err(Error::WindowTooSmall(msg)) => {
                last = msg;
                window = window.widened();
            }
            other => return other,
        }
    }
    Err(Error::WindowTooSmall(last))
}

/// One reduction attempt in a fixed window.
pub fn reduce_in(ctx: &Context, window: PrecisionWindow, x: &KWitt) -> Result<Reduction> {
    let m = ctx.m;
    if x.len() != m {
        return Err(Error::Config(format!("Witt vector has length {}, expected {m}", x.len())));
    }
    let p = ctx.p();
    let k = ctx.k();
    let ks = ctx.k_series(window);
    let beta = ctx.beta();
    let mut rest: Vec<KSeries> = x.coords.iter().map(|c| ks.adopt(c)).collect();
    let mut digits: BTreeMap<ExpVec, Vec<FFElem>> = BTreeMap::new();
    let mut gammas = vec![0u64; m];
    let mut witness = Vec::with_capacity(m);
    let mut prec: Option<i64> = None;

    for h in 0..m {
        let z = rest[0].clone();
        if let Some(pr) = z.prec() {
            if pr <= 0 {
                return Err(Error::WindowTooSmall(format!("coordinate {h} is exact only below degree {pr}")));
            }
        }
        prec = match (prec, z.prec()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let ph = p.pow(h as u32) as i64;
        let mut w_terms: Vec<(ExpVec, FFElem)> = Vec::new();
        let mut level: BTreeMap<ExpVec, FFElem> = BTreeMap::new();
        let mut constant = k.zero();
        let mut truncated = false;

        for (&e, c) in z.terms() {
            if e == ExpVec::ZERO {
                constant = c.clone();
            } else if e.is_positive() {
                if ks.degree(e) <= 0 {
                    return Err(Error::WindowTooSmall(format!(
                        "T-positive term at {e} has degree {} for weight {}",
                        ks.degree(e),
                        window.weight
                    )));
                }
                // c U = ℘(-Σ F^n(c U))
                let (mut ce, mut cc) = (e, c.clone());
                while ks.degree(ce) < window.cap {
                    w_terms.push((ce, k.neg(&cc)));
                    ce = ce.scale(p as i64);
                    cc = k.frobenius(&cc);
                }
                truncated = true;
            } else {
                let (prim, v) = primitive_part(p, -e);
                let mut v = v as i64;
                let mut cc = c.clone();
                let target = h as i64;
                // c t^{p^v} = ℘(r t^{p^{v-1}}) + r t^{p^{v-1}} with r^p = c
                while v > target {
                    let r = k.pth_root(&cc);
                    w_terms.push((-prim.scale(p.pow(v as u32 - 1) as i64), r.clone()));
                    cc = r;
                    v -= 1;
                }
                // c t^{p^v} = (c t^{p^v})^p - ℘(c t^{p^v})
                while v < target {
                    w_terms.push((-prim.scale(p.pow(v as u32) as i64), k.neg(&cc)));
                    cc = k.frobenius(&cc);
                    v += 1;
                }
                let slot = level.entry(prim).or_insert_with(|| k.zero());
                *slot = k.add(slot, &cc);
            }
        }

        let alpha_h = k.pow(&beta.alpha, ph as u64);
        let tr = k.as_prime_field(&k.trace(&constant)).expect("trace lies in F_p");
        let gamma = tr * inv_mod(beta.alpha_trace, p) % p;
        let leftover = k.sub(&constant, &k.mul_int(&alpha_h, gamma as i64));
        let v = solve_wp_k(k, &leftover).expect("trace-zero elements lie in ℘(k)");
        w_terms.push((ExpVec::ZERO, v));
        gammas[h] = gamma;

        let wr = WittRing::new(ks.clone(), p, m - h);
        let mut w = ks.from_terms(w_terms);
        if truncated {
            // the geometric tail continues past the cap
            w = ks.with_prec(w, window.cap);
        }
        let mut shift = wr.wp(&wr.teichmuller(&w));
        for (prim, b) in &level {
            if k.is_zero(b) {
                continue;
            }
            digits.entry(*prim).or_insert_with(|| vec![k.zero(); m])[h] = b.clone();
            let mono = ks.monomial(b.clone(), -prim.scale(ph));
            shift = wr.add(&shift, &wr.teichmuller(&mono));
        }
        if gamma != 0 {
            let cst = ks.constant(k.mul_int(&alpha_h, gamma as i64));
            shift = wr.add(&shift, &wr.teichmuller(&cst));
        }
        let next = wr.sub(&WittVec::new(rest), &shift);
        if !ks.is_zero_within(&next.coords[0]) {
            return Err(Error::WindowTooSmall(format!("level {h} did not clear")));
        }
        witness.push(w);
        rest = next.coords[1..].to_vec();
    }

    let zq = ctx.zq();
    let mut terms = BTreeMap::new();
    for (prim, ds) in digits {
        let coeff = zq.digits_to_zq(&ds);
        if !zq.is_zero(&coeff) {
            terms.insert(prim, coeff);
        }
    }
    let mut c = 0u64;
    for (h, &g) in gammas.iter().enumerate() {
        let tg = zq.teichmuller(&k.from_coeffs(&[g]));
        c = (c + tg.0[0] * p.pow(h as u32)) % ctx.pm();
    }
    Ok(Reduction { canonical: CanonicalASW { c, terms }, witness: WittVec::new(witness), window, prec })
}

fn inv_mod(a: u64, p: u64) -> u64 {
    (1..p).find(|&b| a * b % p == 1).expect("invertible mod p")
}

/// `c·β ⊕ Σ c_ij [S^-i T^-j]` as a Witt vector of series.
pub fn embed(ctx: &Context, window: PrecisionWindow, xc: &CanonicalASW) -> KWitt {
    let p = ctx.p() as i64;
    let ks = ctx.k_series(window);
    let wr = ctx.k_witt(window);
    let zq = ctx.zq();
    let mut acc = wr.zero();
    for (e, coeff) in &xc.terms {
        let ds = zq.teich_digits(coeff, ctx.m);
        let coords = ds.iter().enumerate().map(|(n, a)| ks.monomial(a.clone(), -e.scale(p.pow(n as u32)))).collect();
        acc = wr.add(&acc, &WittVec::new(coords));
    }
    if xc.c != 0 {
        let cb = zq.mul(&zq.from_u64(xc.c), &ctx.beta().beta);
        let coords = zq.teich_digits(&cb, ctx.m).into_iter().map(|a| ks.constant(a)).collect();
        acc = wr.add(&acc, &WittVec::new(coords));
    }
    acc
}

/// Check `x ⊖ embed(canonical) ⊖ ℘(witness) = 0`; returns the degree below
/// which the check is exact, or `None` when it fails there.
pub fn verify(ctx: &Context, x: &KWitt, red: &Reduction) -> Option<Option<i64>> {
    let wr = ctx.k_witt(red.window);
    let ks = &wr.base;
    let x = WittVec::new(x.coords.iter().map(|c| ks.adopt(c)).collect());
    let e = embed(ctx, red.window, &red.canonical);
    let residual = wr.sub(&wr.sub(&x, &e), &wr.wp(&red.witness));
    let bound = residual.coords.iter().filter_map(|c| c.prec()).chain(red.prec).min();
    let clean = residual.coords.iter().all(|c| c.terms().keys().all(|&t| bound.is_some_and(|b| ks.degree(t) >= b)));
    clean.then_some(bound)
}

/// `x~ = c·β + Σ c_ij S^-i T^-j` with coefficients read in `zq`.
pub fn lift_canonical(ctx: &Context, zring: &SeriesRing<Zq>, xc: &CanonicalASW) -> ZSeries {
    let zq = &zring.base;
    let beta = zq.teichmuller(&ctx.beta().alpha);
    let mut terms: Vec<(ExpVec, ZqElem)> = xc.terms.iter().map(|(e, c)| (-*e, zq.convert(c))).collect();
    terms.push((ExpVec::ZERO, zq.mul(&zq.from_u64(xc.c), &beta)));
    zring.from_terms(terms)
}

/// Coefficientwise Teichmüller lift.
pub fn hat_lift(zring: &SeriesRing<Zq>, ks: &SeriesRing<FiniteField>, x: &KWitt) -> WittVec<ZSeries> {
    let zq = &zring.base;
    WittVec::new(x.coords.iter().map(|c| ks.map_into(zring, c, |a| zq.teichmuller(a))).collect())
}
