//! The pairing `[x, y) ∈ Z/p^m` between `W_m(K)/℘` and `K_2(K)/p^m`,
//! computed three ways:
//!
//! * [`pair_theorem1`]: `Tr Res(x~ · dlog y~)` on the canonical lift of `x`;
//! * [`pair_parshin`]: ghost components of the coefficientwise Teichmüller
//!   lift, residues, ghost inversion, reduction mod p, trace;
//! * [`pair_closed_form`]: the index-matching sum over canonical data.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::asw_reduce::{hat_lift, lift_canonical, CanonicalASW};
use crate::context::{Context, KSeries, KWitt};
use crate::error::{Error, Result};
use crate::milnor::{lift_and_dlog, CanonicalK2, K2Kind};
use crate::ring::Ring;
use crate::ring_tower::FiniteField;
use crate::series::{ExpVec, PrecisionWindow, SeriesRing};
use crate::witt::{ghost_inverse, WittRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolValue {
    pub v: u64,
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

/// Smallest weight giving every generator of `y` positive degree.
pub fn weight_for(y: &CanonicalK2) -> i64 {
    y.gens.iter().filter(|g| g.j >= 1).map(|g| (-g.i).div_euclid(g.j) + 1).fold(1, i64::max)
}

/// A window in which `Res(f · dlog y~)` is exact for every `f` whose terms
/// have degree at least `vmin`.
pub fn pairing_window(y: &CanonicalK2, vmin_of: impl Fn(i64) -> i64) -> PrecisionWindow {
    let weight = weight_for(y);
    let vmin = vmin_of(weight).min(0);
    PrecisionWindow::new(weight, 3 * weight - vmin + 8)
}

fn min_degree(window_weight: i64, f: &KSeries) -> i64 {
    f.terms().keys().map(|e| e.s + window_weight * e.t).min().unwrap_or(0)
}

fn retry<T>(mut window: PrecisionWindow, mut f: impl FnMut(PrecisionWindow) -> Result<T>) -> Result<T> {
    let mut last = String::new();
    for _ in 0..6 {
        match f(window) {
            Err(Error::WindowTooSmall(msg)) => {
                last = msg;
                window = window.widened();
            }
            other => return other,
        }
    }
    Err(Error::WindowTooSmall(last))
}

/// `Tr(Res(x~ · dlog y~)) mod p^m`.
pub fn pair_theorem1(ctx: &Context, x: &CanonicalASW, y: &CanonicalK2) -> Result<SymbolValue> {
    let window = pairing_window(y, |w| x.terms.keys().map(|e| -(e.s + w * e.t)).min().unwrap_or(0));
    retry(window, |window| {
        let zring = SeriesRing::new(ctx.zq().clone(), window);
        let xt = lift_canonical(ctx, &zring, x);
        let omega = lift_and_dlog(&zring, y)?;
        let r = zring.residue_of_product(&xt, &omega)?;
        Ok(SymbolValue { v: ctx.zq().trace(&r) % ctx.pm() })
    })
}

/// Ghost components of `x^`, residues against `dlog y~`, ghost inversion,
/// coordinates mod p, reassembly in `W_m(k)` and trace.
pub fn pair_parshin(ctx: &Context, x: &KWitt, y: &CanonicalK2) -> Result<SymbolValue> {
    let m = ctx.m;
    let p = ctx.p();
    let window = pairing_window(y, |w| {
        x.coords.iter().enumerate().map(|(i, c)| min_degree(w, c) * p.pow((m - 1 - i) as u32) as i64).min().unwrap_or(0)
    });
    let mut n = m as u32 + 1;
    loop {
        match pair_parshin_at(ctx, window, x, y, n) {
            Err(Error::Divisibility { .. }) if n + 2 <= 2 * m as u32 + 2 => n += 2,
            other => return other,
        }
    }
}

fn pair_parshin_at(ctx: &Context, window: PrecisionWindow, x: &KWitt, y: &CanonicalK2, n: u32) -> Result<SymbolValue> {
    let zq = ctx.zq_with_prec(n)?;
    retry(window, |window| {
        let zring = SeriesRing::new(zq.clone(), window);
        let ks = ctx.k_series(window);
        let xh = hat_lift(&zring, &ks, x);
        let wz = WittRing::new(zring.clone(), ctx.p(), ctx.m);
        let ghosts = wz.ghost(&xh);
        let omega = lift_and_dlog(&zring, y)?;
        let residues = ghosts.iter().map(|g| zring.residue_of_product(g, &omega)).collect::<Result<Vec<_>>>()?;
        let w = ghost_inverse(&zq, &residues)?;
        let digits: Vec<_> = w.coords.iter().map(|c| zq.reduce(c)).collect();
        let z = ctx.zq().digits_to_zq(&digits);
        Ok(SymbolValue { v: ctx.zq().trace(&z) % ctx.pm() })
    })
}

/// `K ≥ 0` with `(l1, l2) = K · (i, j)`, if any.
pub fn ratio_match(l1: i64, l2: i64, i: i64, j: i64) -> Option<i64> {
    let k = if i != 0 {
        if l1 % i != 0 {
            return None;
        }
        l1 / i
    } else if j != 0 {
        if l1 != 0 || l2 % j != 0 {
            return None;
        }
        l2 / j
    } else {
        return None;
    };
    (k >= 0 && l1 == k * i && l2 == k * j).then_some(k)
}

/// `Tr(c·β)·e + Σ n · Tr(coef · c_mn · [-a]^K)` over index matches
/// `(m, n) = K (i, j)`, with `coef = j` for S-type and `-i` for T-type.
pub fn pair_closed_form(ctx: &Context, x: &CanonicalASW, y: &CanonicalK2) -> SymbolValue {
    let zq = ctx.zq();
    let pm = ctx.pm() as i128;
    let mut total: i128 = 0;
    let cb = zq.mul(&zq.from_u64(x.c), &ctx.beta().beta);
    total += zq.trace(&cb) as i128 * y.e as i128;
    for (idx, c) in &x.terms {
        for g in &y.gens {
            let Some(kk) = ratio_match(idx.s, idx.t, g.i, g.j) else { continue };
            if kk == 0 {
                continue;
            }
            let coef = match g.kind {
                K2Kind::S => g.j,
                K2Kind::T => -g.i,
            };
            let neg_a = zq.teichmuller(&ctx.k().neg(&g.a));
            let term = zq.mul_int(&zq.mul(c, &zq.pow(&neg_a, kk as u64)), coef);
            total += zq.trace(&term) as i128 * g.n as i128;
        }
    }
    SymbolValue { v: total.rem_euclid(pm) as u64 }
}

/// One-variable symbol `Tr_{k/F_p} Res_S(x · du/u)` (m = 1).
pub fn schmid_one_dim(k: &FiniteField, x0: &KSeries, u: &KSeries) -> Result<SymbolValue> {
    for f in [x0, u] {
        if f.terms().keys().any(|e| e.t != 0) {
            return Err(Error::Config("one-variable inputs must not involve T".into()));
        }
    }
    let smin = x0.terms().keys().map(|e| e.s).min().unwrap_or(0).min(0);
    let ring = SeriesRing::new(k.clone(), PrecisionWindow::new(1, 4 - smin));
    let du = ring.dlog_unit(u)?;
    let prod = ring.mul(x0, &du.us);
    if prod.prec().is_some_and(|p| p <= -1) {
        return Err(Error::WindowTooSmall("one-variable residue".into()));
    }
    let r = prod.coeff(ExpVec::new(-1, 0)).cloned().unwrap_or_else(|| k.zero());
    let v = k.as_prime_field(&k.trace(&r)).expect("trace lies in F_p");
    Ok(SymbolValue { v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asw_reduce::reduce;
    use crate::milnor::K2Generator;
    use crate::witt::WittVec;

    fn e(s: i64, t: i64) -> ExpVec {
        ExpVec::new(s, t)
    }

    #[test]
    fn constant_against_st() {
        let ctx = Context::new(3, 1, None, 2).unwrap();
        let x = CanonicalASW { c: 4, terms: Default::default() };
        let y = CanonicalK2::st(&ctx, 1);
        assert_eq!(pair_theorem1(&ctx, &x, &y).unwrap().v, 4);
        assert_eq!(pair_closed_form(&ctx, &x, &y).v, 4);
        let x = CanonicalASW::single(1, 2, ctx.zq().one());
        assert_eq!(pair_theorem1(&ctx, &x, &y).unwrap().v, 0);
    }

    #[test]
    fn p3_example() {
        let ctx = Context::new(3, 1, None, 1).unwrap();
        let x = CanonicalASW::single(1, 1, ctx.zq().one());
        let y = CanonicalK2 { e: 0, gens: vec![K2Generator { kind: K2Kind::S, i: 1, j: 1, a: ctx.k().one(), n: 1 }] };
        assert_eq!(pair_theorem1(&ctx, &x, &y).unwrap().v, 2);
        assert_eq!(pair_closed_form(&ctx, &x, &y).v, 2);
        let ks = ctx.k_series(PrecisionWindow::new(4, 100));
        let xw = WittVec::new(vec![ks.monomial(ctx.k().one(), e(-1, -1))]);
        assert_eq!(pair_parshin(&ctx, &xw, &y).unwrap().v, 2);
    }

    #[test]
    fn parshin_constant() {
        let ctx = Context::new(2, 1, None, 2).unwrap();
        let ks = ctx.k_series(PrecisionWindow::new(4, 100));
        let x = WittVec::new(vec![ks.one(), ks.zero()]);
        assert_eq!(pair_parshin(&ctx, &x, &CanonicalK2::st(&ctx, 1)).unwrap().v, 1);
    }

    #[test]
    fn three_way_small() {
        let ctx = Context::new(2, 1, None, 2).unwrap();
        let ks = ctx.k_series(PrecisionWindow::new(4, 100));
        let one = ctx.k().one();
        let x = WittVec::new(vec![
            ks.from_terms([(e(-3, -1), one.clone()), (e(2, -2), one.clone())]),
            ks.from_terms([(e(-1, -1), one.clone())]),
        ]);
        let y = CanonicalK2::generator(&ctx, 1, 1, one.clone(), 1)
            .unwrap()
            .merge(&ctx, &CanonicalK2::generator(&ctx, 3, 1, one.clone(), 3).unwrap())
            .merge(&ctx, &CanonicalK2::generator(&ctx, -1, 2, one, 1).unwrap());
        let red = reduce(&ctx, &x).unwrap();
        let a = pair_theorem1(&ctx, &red.canonical, &y).unwrap();
        let b = pair_parshin(&ctx, &x, &y).unwrap();
        let c = pair_closed_form(&ctx, &red.canonical, &y);
        assert_eq!(a, c);
        assert_eq!(a, b);
    }

    #[test]
    fn ratio_predicate() {
        assert_eq!(ratio_match(2, 2, 1, 1), Some(2));
        assert_eq!(ratio_match(1, 2, 1, 1), None);
        assert_eq!(ratio_match(0, 6, 0, 3), Some(2));
        assert_eq!(ratio_match(1, 6, 0, 3), None);
        assert_eq!(ratio_match(4, 0, 2, 0), Some(2));
        assert_eq!(ratio_match(-2, 2, 1, -1), None);
    }

    #[test]
    fn schmid_examples() {
        let ctx = Context::new(2, 1, None, 1).unwrap();
        let k = ctx.k();
        let ks = ctx.k_series(PrecisionWindow::new(1, 100));
        let u = ks.add(&ks.one(), &ks.s());
        let x = ks.monomial(k.one(), e(-1, 0));
        assert_eq!(schmid_one_dim(k, &x, &u).unwrap().v, 1);
        assert_eq!(schmid_one_dim(k, &ks.s(), &u).unwrap().v, 0);
        assert_eq!(schmid_one_dim(k, &ks.one(), &ks.s()).unwrap().v, 1);
    }
}
