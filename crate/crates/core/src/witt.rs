//! Truncated p-typical Witt vectors over any [`Ring`].
//!
//! Ring operations use the universal sum, product and negation polynomials,
//! generated once per `(p, m)` from the ghost identities over `Z` and
//! checked for integrality. Ghost inversion is only available over `Z_q`,
//! where `p` is not a zero divisor up to the working precision.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::ring_tower::{Zq, ZqElem};

/// Sparse multivariate polynomial over `Z`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, BigInt::one());
        p
    }

    fn add_assign_scaled(&mut self, other: &IntPoly, c: &BigInt) {
        for (e, v) in &other.terms {
            let entry = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += v * c;
            if entry.is_zero() {
                self.terms.remove(e);
            }
        }
    }

    fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        for (ea, va) in &self.terms {
            for (eb, vb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = out.terms.entry(e).or_insert_with(BigInt::zero);
                *entry += va * vb;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    fn pow(&self, mut e: u64) -> IntPoly {
        let mut acc = IntPoly::constant(self.nvars, BigInt::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division by `n`; `None` if some coefficient is not divisible.
    fn div_exact(&self, n: &BigInt) -> Option<IntPoly> {
        let mut out = IntPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            let (q, r) = v.div_rem(n);
            if !r.is_zero() {
                return None;
            }
            out.terms.insert(e.clone(), q);
        }
        Some(out)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Evaluate in `ring` at `vals` (one value per variable).
    pub fn eval<R: Ring>(&self, ring: &R, vals: &[R::Elem]) -> R::Elem {
        assert_eq!(vals.len(), self.nvars);
        let mut max_exp = vec![0u32; self.nvars];
        for e in self.terms.keys() {
            for (m, &x) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(x);
            }
        }
        let powers: Vec<Vec<R::Elem>> = vals
            .iter()
            .zip(&max_exp)
            .map(|(v, &mx)| {
                let mut pw = Vec::with_capacity(mx as usize + 1);
                pw.push(ring.one());
                for i in 1..=mx as usize {
                    pw.push(ring.mul(&pw[i - 1], v));
                }
                pw
            })
            .collect();
        let zero_var: Vec<bool> = vals.iter().map(|v| ring.is_zero(v)).collect();
        let mut acc = ring.zero();
        for (e, c) in &self.terms {
            if e.iter().zip(&zero_var).any(|(&x, &z)| x > 0 && z) {
                continue;
            }
            let mut term = ring.from_bigint(c);
            if ring.is_zero(&term) {
                continue;
            }
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    term = ring.mul(&term, &powers[i][x as usize]);
                }
            }
            acc = ring.add(&acc, &term);
        }
        acc
    }
}

/// Universal polynomials for one `(p, m)`.
#[derive(Debug)]
pub struct WittPolys {
    pub p: u64,
    pub m: usize,
    /// Sum polynomials in `a_0..a_{m-1}, b_0..b_{m-1}`.
    pub sum: Vec<IntPoly>,
    /// Product polynomials in the same variables.
    pub prod: Vec<IntPoly>,
    /// Negation polynomials in `a_0..a_{m-1}`.
    pub neg: Vec<IntPoly>,
}

fn ghost_poly(p: u64, h: usize, nvars: usize, offset: usize) -> IntPoly {
    let mut g = IntPoly::zero(nvars);
    for i in 0..=h {
        let term = IntPoly::var(nvars, offset + i).pow(p.pow((h - i) as u32));
        g.add_assign_scaled(&term, &BigInt::from(p).pow(i as u32));
    }
    g
}

/// Solve `ghost_h(result) = target_h` coordinate by coordinate.
fn invert_ghost(p: u64, m: usize, targets: &[IntPoly]) -> Result<Vec<IntPoly>> {
    let mut out: Vec<IntPoly> = Vec::with_capacity(m);
    for h in 0..m {
        let mut rem = targets[h].clone();
        for (i, prev) in out.iter().enumerate() {
            let t = prev.pow(p.pow((h - i) as u32));
            rem.add_assign_scaled(&t, &-BigInt::from(p).pow(i as u32));
        }
        let ph = BigInt::from(p).pow(h as u32);
        out.push(rem.div_exact(&ph).ok_or(Error::Divisibility { level: h })?);
    }
    Ok(out)
}

impl WittPolys {
    pub fn generate(p: u64, m: usize) -> Self {
        Self::try_generate(p, m).unwrap_or_else(|e| panic!("Witt polynomials for p = {p}: {e}"))
    }

    /// Generate, failing if some coefficient is not integral.
    pub fn try_generate(p: u64, m: usize) -> Result<Self> {
        let n2 = 2 * m;
        let ga: Vec<IntPoly> = (0..m).map(|h| ghost_poly(p, h, n2, 0)).collect();
        let gb: Vec<IntPoly> = (0..m).map(|h| ghost_poly(p, h, n2, m)).collect();
        let sums: Vec<IntPoly> = ga
            .iter()
            .zip(&gb)
            .map(|(a, b)| {
                let mut s = a.clone();
                s.add_assign_scaled(b, &BigInt::one());
                s
            })
            .collect();
        let prods: Vec<IntPoly> = ga.iter().zip(&gb).map(|(a, b)| a.mul(b)).collect();
        let negs: Vec<IntPoly> = (0..m)
            .map(|h| {
                let mut n = IntPoly::zero(m);
                n.add_assign_scaled(&ghost_poly(p, h, m, 0), &-BigInt::one());
                n
            })
            .collect();
        Ok(Self {
            p,
            m,
            sum: invert_ghost(p, m, &sums)?,
            prod: invert_ghost(p, m, &prods)?,
            neg: invert_ghost(p, m, &negs)?,
        })
    }

    /// Shared, write-once instance for `(p, m)`.
    pub fn cached(p: u64, m: usize) -> Arc<WittPolys> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<WittPolys>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(hit) = cache.lock().unwrap().get(&(p, m)) {
            return hit.clone();
        }
        let fresh = Arc::new(WittPolys::generate(p, m));
        cache.lock().unwrap().entry((p, m)).or_insert(fresh).clone()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WittVec<E> {
    pub coords: Vec<E>,
}

impl<E> WittVec<E> {
    pub fn new(coords: Vec<E>) -> Self {
        Self { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

pub type GhostVec<E> = Vec<E>;

/// `W_m(R)` for a coefficient ring `R`.
#[derive(Debug, Clone)]
pub struct WittRing<R: Ring> {
    pub base: R,
    pub p: u64,
    pub m: usize,
    polys: Arc<WittPolys>,
}

impl<R: Ring> WittRing<R> {
    pub fn new(base: R, p: u64, m: usize) -> Self {
        assert!(m >= 1, "Witt length must be positive");
        Self { base, p, m, polys: WittPolys::cached(p, m) }
    }

    pub fn polys(&self) -> &WittPolys {
        &self.polys
    }

    pub fn zero(&self) -> WittVec<R::Elem> {
        WittVec::new(vec![self.base.zero(); self.m])
    }

    pub fn one(&self) -> WittVec<R::Elem> {
        self.teichmuller(&self.base.one())
    }

    pub fn is_zero(&self, w: &WittVec<R::Elem>) -> bool {
        w.coords.iter().all(|c| self.base.is_zero(c))
    }

    /// `[c] = (c, 0, ..., 0)`.
    pub fn teichmuller(&self, c: &R::Elem) -> WittVec<R::Elem> {
        let mut w = self.zero();
        w.coords[0] = c.clone();
        w
    }

    fn binary(&self, polys: &[IntPoly], a: &WittVec<R::Elem>, b: &WittVec<R::Elem>) -> WittVec<R::Elem> {
        assert_eq!(a.len(), self.m, "Witt length mismatch");
        assert_eq!(b.len(), self.m, "Witt length mismatch");
        let vals: Vec<R::Elem> = a.coords.iter().chain(&b.coords).cloned().collect();
        WittVec::new(polys.iter().map(|poly| poly.eval(&self.base, &vals)).collect())
    }

    pub fn add(&self, a: &WittVec<R::Elem>, b: &WittVec<R::Elem>) -> WittVec<R::Elem> {
        if self.is_zero(a) {
            return b.clone();
        }
        if self.is_zero(b) {
            return a.clone();
        }
        self.binary(&self.polys.sum, a, b)
    }

    pub fn mul(&self, a: &WittVec<R::Elem>, b: &WittVec<R::Elem>) -> WittVec<R::Elem> {
        self.binary(&self.polys.prod, a, b)
    }

    pub fn neg(&self, a: &WittVec<R::Elem>) -> WittVec<R::Elem> {
        WittVec::new(self.polys.neg.iter().map(|poly| poly.eval(&self.base, &a.coords)).collect())
    }

    pub fn sub(&self, a: &WittVec<R::Elem>, b: &WittVec<R::Elem>) -> WittVec<R::Elem> {
        if self.is_zero(b) {
            return a.clone();
        }
        self.add(a, &self.neg(b))
    }

    pub fn sum<'a, I>(&self, items: I) -> WittVec<R::Elem>
    where
        I: IntoIterator<Item = &'a WittVec<R::Elem>>,
        R::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, w| self.add(&acc, w))
    }

    /// `[c] * w = (c^{p^i} w_i)_i`.
    pub fn scalar_teich(&self, c: &R::Elem, w: &WittVec<R::Elem>) -> WittVec<R::Elem> {
        let mut cp = c.clone();
        let mut out = Vec::with_capacity(self.m);
        for x in &w.coords {
            out.push(self.base.mul(&cp, x));
            cp = self.base.pow(&cp, self.p);
        }
        WittVec::new(out)
    }

    /// Verschiebung `(w_0, ..) -> (0, w_0, ..)`, truncated to length `m`.
    pub fn shift(&self, w: &WittVec<R::Elem>, by: usize) -> WittVec<R::Elem> {
        let mut out = self.zero();
        for (i, c) in w.coords.iter().enumerate() {
            if i + by < self.m {
                out.coords[i + by] = c.clone();
            }
        }
        out
    }

    /// `g^{(h)} = sum_{i<=h} p^i w_i^{p^{h-i}}` for every `h < m`.
    pub fn ghost(&self, w: &WittVec<R::Elem>) -> GhostVec<R::Elem> {
        (0..self.m)
            .map(|h| {
                let mut acc = self.base.zero();
                for i in 0..=h {
                    let t = self.base.pow(&w.coords[i], self.p.pow((h - i) as u32));
                    let t = self.base.mul_int(&t, self.p.pow(i as u32) as i64);
                    acc = self.base.add(&acc, &t);
                }
                acc
            })
            .collect()
    }

    /// Frobenius in characteristic p: coordinatewise p-th power.
    pub fn frobenius_char_p(&self, w: &WittVec<R::Elem>) -> WittVec<R::Elem> {
        WittVec::new(w.coords.iter().map(|c| self.base.pow(c, self.p)).collect())
    }

    /// The Artin–Schreier–Witt operator `F ⊖ id` (characteristic-p base).
    pub fn wp(&self, w: &WittVec<R::Elem>) -> WittVec<R::Elem> {
        self.sub(&self.frobenius_char_p(w), w)
    }
}

/// Recover Witt coordinates from ghost components over `Z_q / p^N`.
///
/// Coordinate `h` is determined modulo `p^{N-h}`.
pub fn ghost_inverse(zq: &Zq, gv: &[ZqElem]) -> Result<WittVec<ZqElem>> {
    let p = zq.p();
    let mut coords: Vec<ZqElem> = Vec::with_capacity(gv.len());
    for (h, g) in gv.iter().enumerate() {
        let mut rem = g.clone();
        for (i, x) in coords.iter().enumerate() {
            let t = zq.pow(x, p.pow((h - i) as u32));
            rem = zq.sub(&rem, &zq.scale(&t, p.pow(i as u32)));
        }
        for _ in 0..h {
            rem = zq.div_p(&rem).ok_or(Error::Divisibility { level: h })?;
        }
        coords.push(rem);
    }
    Ok(WittVec::new(coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_tower::{FieldParams, FiniteField, Tower};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// `Z` itself, for checking integer examples.
    #[derive(Debug, Clone)]
    struct Integers;

    impl Ring for Integers {
        type Elem = BigInt;
        fn zero(&self) -> BigInt {
            BigInt::zero()
        }
        fn one(&self) -> BigInt {
            BigInt::one()
        }
        fn is_zero(&self, a: &BigInt) -> bool {
            a.is_zero()
        }
        fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
            a + b
        }
        fn neg(&self, a: &BigInt) -> BigInt {
            -a
        }
        fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
            a * b
        }
        fn from_bigint(&self, n: &BigInt) -> BigInt {
            n.clone()
        }
    }

    fn ints(v: &[i64]) -> WittVec<BigInt> {
        WittVec::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn ghost_examples_over_z() {
        let w = WittRing::new(Integers, 2, 2);
        assert_eq!(w.ghost(&ints(&[3, 5])), vec![BigInt::from(3), BigInt::from(19)]);
        let w3 = WittRing::new(Integers, 3, 3);
        assert_eq!(w3.ghost(&w3.one()), vec![BigInt::one(); 3]);
    }

    #[test]
    fn ghost_is_additive_and_multiplicative_over_z() {
        for (p, m) in [(2, 3), (3, 2), (5, 2), (2, 4)] {
            let w = WittRing::new(Integers, p, m);
            let a = ints(&[3, -1, 2, 7][..m]);
            let b = ints(&[-2, 4, 1, -3][..m]);
            let (ga, gb) = (w.ghost(&a), w.ghost(&b));
            let gs: Vec<_> = ga.iter().zip(&gb).map(|(x, y)| x + y).collect();
            let gp: Vec<_> = ga.iter().zip(&gb).map(|(x, y)| x * y).collect();
            let gn: Vec<_> = ga.iter().map(|x| -x).collect();
            assert_eq!(w.ghost(&w.add(&a, &b)), gs);
            assert_eq!(w.ghost(&w.mul(&a, &b)), gp);
            assert_eq!(w.ghost(&w.neg(&a)), gn);
        }
    }

    #[test]
    fn universal_polys_small_cases() {
        let polys = WittPolys::generate(2, 2);
        // S_1 = a1 + b1 - a0 b0 over Z
        let s1 = &polys.sum[1];
        assert_eq!(s1.num_terms(), 3);
        let k = FiniteField::new(&FieldParams::with_default_modulus(2, 2, 1).unwrap());
        let wk = WittRing::new(k.clone(), 2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let a = WittVec::new(vec![k.random(&mut rng), k.random(&mut rng)]);
            let b = WittVec::new(vec![k.random(&mut rng), k.random(&mut rng)]);
            let expect = vec![
                k.add(&a.coords[0], &b.coords[0]),
                k.add(&k.add(&a.coords[1], &b.coords[1]), &k.mul(&a.coords[0], &b.coords[0])),
            ];
            assert_eq!(wk.add(&a, &b).coords, expect);
            assert!(wk.is_zero(&wk.add(&a, &wk.neg(&a))));
        }
    }

    #[test]
    fn teichmuller_multiplicative_in_witt() {
        let k = FiniteField::new(&FieldParams::with_default_modulus(3, 2, 1).unwrap());
        let wk = WittRing::new(k.clone(), 3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let (a, b) = (k.random(&mut rng), k.random(&mut rng));
            assert_eq!(wk.mul(&wk.teichmuller(&a), &wk.teichmuller(&b)), wk.teichmuller(&k.mul(&a, &b)));
        }
    }

    #[test]
    fn wp_examples() {
        let k = FiniteField::new(&FieldParams::with_default_modulus(2, 2, 1).unwrap());
        let wk = WittRing::new(k.clone(), 2, 2);
        assert!(wk.is_zero(&wk.wp(&wk.zero())));
        let g = k.generator();
        let g2 = k.mul(&g, &g);
        let g3 = k.mul(&g2, &g);
        assert_eq!(wk.neg(&wk.teichmuller(&g)).coords, vec![g.clone(), g2.clone()]);
        assert_eq!(wk.wp(&wk.teichmuller(&g)).coords, vec![k.add(&g2, &g), k.add(&g2, &g3)]);
        let w1 = WittRing::new(k.clone(), 2, 1);
        let x = w1.teichmuller(&g);
        assert_eq!(w1.wp(&x).coords, vec![k.sub(&g2, &g)]);
    }

    #[test]
    fn coordinatewise_wp_is_not_additive_over_f4() {
        // the reason wp is F - id rather than (x_i^p - x_i)
        let k = FiniteField::new(&FieldParams::with_default_modulus(2, 2, 1).unwrap());
        let wk = WittRing::new(k.clone(), 2, 2);
        let naive = |w: &WittVec<_>| WittVec::new(w.coords.iter().map(|c| k.sub(&k.pow(c, 2), c)).collect::<Vec<_>>());
        let found = k.elements().any(|a| {
            k.elements().any(|b| {
                let (x, y) = (wk.teichmuller(&a), wk.teichmuller(&b));
                naive(&wk.add(&x, &y)) != wk.add(&naive(&x), &naive(&y))
            })
        });
        assert!(found);
    }

    #[test]
    fn ghost_inverse_examples() {
        let t = Tower::new(FieldParams::with_default_modulus(2, 1, 6).unwrap());
        let zq = &t.zq;
        let w = ghost_inverse(zq, &[zq.from_u64(3), zq.from_u64(19)]).unwrap();
        assert_eq!(w.coords, vec![zq.from_u64(3), zq.from_u64(5)]);
        assert_eq!(ghost_inverse(zq, &[zq.from_u64(1), zq.from_u64(2)]), Err(Error::Divisibility { level: 1 }));
        let t = Tower::new(FieldParams::with_default_modulus(3, 2, 5).unwrap());
        let c = t.zq.teichmuller(&t.k.generator());
        let w = ghost_inverse(&t.zq, &[c.clone(), t.zq.pow(&c, 3), t.zq.pow(&c, 9)]).unwrap();
        assert_eq!(w.coords, vec![c, t.zq.zero(), t.zq.zero()]);
    }

    #[test]
    fn ghost_inverse_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, d, m) in [(2, 1, 3), (2, 2, 2), (3, 1, 2), (5, 1, 2), (3, 3, 3)] {
            let n = m as u32 + 1;
            let t = Tower::new(FieldParams::with_default_modulus(p, d, n).unwrap());
            let wz = WittRing::new(t.zq.clone(), p, m);
            for _ in 0..20 {
                let w = WittVec::new((0..m).map(|_| t.zq.random(&mut rng)).collect());
                let back = ghost_inverse(&t.zq, &wz.ghost(&w)).unwrap();
                for h in 0..m {
                    let prec = n - h as u32;
                    assert_eq!(t.zq.truncate(&back.coords[h], prec), t.zq.truncate(&w.coords[h], prec));
                }
            }
        }
    }

    #[test]
    fn wp_additive_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (p, d, m) in [(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2), (5, 1, 2)] {
            let k = FiniteField::new(&FieldParams::with_default_modulus(p, d, 1).unwrap());
            let wk = WittRing::new(k.clone(), p, m);
            for _ in 0..20 {
                let a = WittVec::new((0..m).map(|_| k.random(&mut rng)).collect());
                let b = WittVec::new((0..m).map(|_| k.random(&mut rng)).collect());
                assert_eq!(wk.wp(&wk.add(&a, &b)), wk.add(&wk.wp(&a), &wk.wp(&b)));
            }
        }
    }
}
