//! Upper ramification data for `W_m(K)/℘`: the exponents `ℓ(r, (m1, m2))`,
//! membership in `U^r K_2`, and the maps `φ_S`, `φ_T` into `Π W(k)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::milnor::{CanonicalK2, K2Kind};
use crate::ring::Ring;
use crate::ring_tower::ZqElem;
use crate::series::ExpVec;
use crate::symbol::ratio_match;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RamVector {
    pub r1: i64,
    pub r2: i64,
}

impl RamVector {
    pub fn new(r1: i64, r2: i64) -> Result<Self> {
        if r1 < 0 || r2 < 0 {
            return Err(Error::Config(format!("ramification vector ({r1}, {r2}) has a negative entry")));
        }
        Ok(Self { r1, r2 })
    }

    pub fn exp(self) -> ExpVec {
        ExpVec::new(self.r1, self.r2)
    }
}

impl fmt::Display for RamVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r1, self.r2)
    }
}

fn valid_index(p: u64, m1: i64, m2: i64) -> bool {
    let p = p as i64;
    m1 >= 0 && m2 >= 0 && (m1, m2) != (0, 0) && (m1 % p != 0 || m2 % p != 0)
}

/// Least `ℓ ≥ 0` with `p^ℓ (m1, m2) ≮ r`. `None` when there is none, which
/// happens exactly for `m2 = 0 < r2`.
pub fn ell(p: u64, r: RamVector, m1: i64, m2: i64) -> Result<Option<u32>> {
    if !valid_index(p, m1, m2) {
        return Err(Error::BadIndex(m1, m2));
    }
    if m2 == 0 && r.r2 > 0 {
        return Ok(None);
    }
    let target = r.exp();
    let mut v = ExpVec::new(m1, m2);
    let mut l = 0;
    while v < target {
        v = v.scale(p as i64);
        l += 1;
    }
    Ok(Some(l))
}

/// `ell` clipped to `m`.
pub fn ell_clipped(p: u64, r: RamVector, m1: i64, m2: i64, m: usize) -> Result<u32> {
    Ok(ell(p, r, m1, m2)?.map_or(m as u32, |l| l.min(m as u32)))
}

/// Indices `(m1, m2)` in `[0, bound]^2` that `φ` and the profile range over,
/// in increasing order.
pub fn window_indices(p: u64, bound: i64) -> Vec<ExpVec> {
    let mut out: Vec<ExpVec> = (0..=bound)
        .flat_map(|a| (0..=bound).map(move |b| (a, b)))
        .filter(|&(a, b)| valid_index(p, a, b))
        .map(|(a, b)| ExpVec::new(a, b))
        .collect();
    out.sort();
    out
}

/// `G^r` at level `m`: index ↦ `min(ℓ, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamProfile {
    pub r: RamVector,
    pub m: usize,
    pub exps: BTreeMap<ExpVec, u32>,
}

pub fn ram_profile(p: u64, r: RamVector, m: usize, bound: i64) -> RamProfile {
    let exps = window_indices(p, bound)
        .into_iter()
        .map(|e| {
            let l = ell_clipped(p, r, e.s, e.t, m).expect("window indices are valid");
            (e, l)
        })
        .collect();
    RamProfile { r, m, exps }
}

impl fmt::Display for RamProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, l) in &self.exps {
            writeln!(f, "({}, {}): p^{}", e.s, e.t, l)?;
        }
        Ok(())
    }
}

/// Whether `y` lies in `U^r K_2`: every base-p digit `k` of a generator
/// exponent with `p^k (i, j) < r` vanishes.
pub fn u_membership(ctx: &Context, y: &CanonicalK2, r: RamVector) -> bool {
    let p = ctx.p();
    let target = r.exp();
    y.gens.iter().all(|g| {
        let mut n = g.n % ctx.pm();
        let mut v = g.exp();
        while n > 0 {
            if !n.is_multiple_of(p) && v < target {
                return false;
            }
            n /= p;
            v = v.scale(p as i64);
        }
        true
    })
}

/// `φ(y)` on the window: at `(m, n) = K (i, j)` a generator contributes
/// `n_gen · coef · [-a]^K`, with `coef = j` (S-type) or `-i` (T-type).
pub fn phi_map(ctx: &Context, y: &CanonicalK2, bound: i64) -> BTreeMap<ExpVec, ZqElem> {
    let zq = ctx.zq();
    let mut out = BTreeMap::new();
    for idx in window_indices(ctx.p(), bound) {
        let mut acc = zq.zero();
        for g in &y.gens {
            let Some(kk) = ratio_match(idx.s, idx.t, g.i, g.j) else { continue };
            if kk == 0 {
                continue;
            }
            let coef = match g.kind {
                K2Kind::S => g.j,
                K2Kind::T => -g.i,
            };
            let b = zq.pow(&zq.teichmuller(&ctx.k().neg(&g.a)), kk as u64);
            let term = zq.mul_int(&b, coef * (g.n % ctx.pm()) as i64);
            acc = zq.add(&acc, &term);
        }
        out.insert(idx, acc);
    }
    out
}

/// `φ(y)[idx] ∈ p^l Z_q / p^m`.
pub fn in_level(ctx: &Context, z: &ZqElem, l: u32) -> bool {
    let zq = ctx.zq();
    zq.is_zero(z) || zq.valuation(z) >= l
}
