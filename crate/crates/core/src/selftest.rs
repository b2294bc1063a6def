//! Randomized and exhaustive consistency checks, one per acceptance
//! criterion. Every check is seeded and reports the first few failures.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asw_reduce::{is_cone_index, reduce, verify, CanonicalASW};
use crate::context::{Context, KSeries, KWitt};
use crate::error::Result;
use crate::milnor::{normalize_symbol, CanonicalK2, K2Generator, K2Kind};
use crate::ramification::{ell, ell_clipped, in_level, phi_map, u_membership, RamVector};
use crate::ring::Ring;
use crate::ring_tower::FiniteField;
use crate::series::{ExpVec, PrecisionWindow, SeriesDisplay, SeriesRing};
use crate::symbol::{pair_closed_form, pair_parshin, pair_theorem1, ratio_match, schmid_one_dim};
use crate::witt::{ghost_inverse, WittPolys, WittRing, WittVec};

/// `(p, d, m)` triples exercised by the suite.
pub const CONFIGS: [(u64, usize, usize); 7] =
    [(2, 1, 1), (2, 1, 2), (2, 1, 3), (2, 2, 2), (3, 1, 1), (3, 1, 2), (5, 1, 1)];

const KEPT_FAILURES: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub id: u32,
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub examples: Vec<String>,
    #[serde(serialize_with = "ser_secs")]
    pub elapsed: Duration,
}

fn ser_secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl Report {
    fn new(id: u32, name: &str) -> Self {
        Self { id, name: name.into(), cases: 0, failures: 0, examples: Vec::new(), elapsed: Duration::ZERO }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.failures += 1;
        if self.examples.len() < KEPT_FAILURES {
            self.examples.push(what);
        }
    }

    fn outcome<T>(&mut self, label: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.cases += 1;
                self.fail(format!("{label}: {e}"));
                None
            }
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{verdict}] {}. {} ({} cases, {} failures, {:.2}s)",
            self.id,
            self.name,
            self.cases,
            self.failures,
            self.elapsed.as_secs_f64()
        )?;
        for e in &self.examples {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

/// Case counts are divided by `scale` (at least one case per loop).
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub seed: u64,
    pub scale: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self { seed: 20240611, scale: 1 }
    }
}

impl Options {
    fn count(&self, n: usize) -> usize {
        (n / self.scale.max(1)).max(1)
    }

    fn rng(&self, id: u32, cfg: (u64, usize, usize)) -> ChaCha8Rng {
        let tag = (id as u64) << 48 ^ cfg.0 << 32 ^ (cfg.1 as u64) << 16 ^ cfg.2 as u64;
        ChaCha8Rng::seed_from_u64(self.seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

fn context(cfg: (u64, usize, usize)) -> Context {
    Context::new(cfg.0, cfg.1, None, cfg.2).expect("suite configurations are valid")
}

fn exact_ks(ctx: &Context) -> SeriesRing<FiniteField> {
    ctx.k_series(PrecisionWindow::new(1, i64::MAX / 4))
}

/// A Laurent polynomial with up to `max_terms` terms, exponents in
/// `[-bound, bound]^2`.
pub fn random_poly<R: Rng>(
    ctx: &Context,
    ks: &SeriesRing<FiniteField>,
    rng: &mut R,
    max_terms: usize,
    bound: i64,
) -> KSeries {
    let n = rng.gen_range(0..=max_terms);
    ks.from_terms((0..n).map(|_| {
        let e = ExpVec::new(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        (e, ctx.k().random(rng))
    }))
}

pub fn random_witt<R: Rng>(ctx: &Context, rng: &mut R, max_terms: usize, bound: i64) -> KWitt {
    let ks = exact_ks(ctx);
    WittVec::new((0..ctx.m).map(|_| random_poly(ctx, &ks, rng, max_terms, bound)).collect())
}

fn random_cone_index<R: Rng>(p: u64, rng: &mut R, bound: i64) -> ExpVec {
    loop {
        let e = ExpVec::new(rng.gen_range(-bound..=bound), rng.gen_range(0..=bound));
        if is_cone_index(p, e) {
            return e;
        }
    }
}

pub fn random_canonical_asw<R: Rng>(ctx: &Context, rng: &mut R, max_terms: usize, bound: i64) -> CanonicalASW {
    let zq = ctx.zq();
    let mut x = CanonicalASW { c: rng.gen_range(0..ctx.pm()), terms: Default::default() };
    for _ in 0..rng.gen_range(0..=max_terms) {
        let c = zq.random(rng);
        if !zq.is_zero(&c) {
            x.terms.insert(random_cone_index(ctx.p(), rng, bound), c);
        }
    }
    x
}

fn random_generator<R: Rng>(ctx: &Context, rng: &mut R, e: ExpVec) -> K2Generator {
    K2Generator {
        kind: K2Kind::for_index(ctx.p(), e.s, e.t).expect("cone index"),
        i: e.s,
        j: e.t,
        a: ctx.k().random_nonzero(rng),
        n: rng.gen_range(1..ctx.pm().max(2)),
    }
}

/// Random canonical symbol with up to `max_gens` generators at distinct
/// indices; `nonneg` restricts indices to `[0, bound]^2`.
pub fn random_k2<R: Rng>(ctx: &Context, rng: &mut R, max_gens: usize, bound: i64, nonneg: bool) -> CanonicalK2 {
    let lo = if nonneg { 0 } else { -bound };
    let mut idx: Vec<ExpVec> = Vec::new();
    for _ in 0..rng.gen_range(0..=max_gens) {
        let e = ExpVec::new(rng.gen_range(lo..=bound), rng.gen_range(0..=bound));
        if K2Kind::for_index(ctx.p(), e.s, e.t).is_some() && !idx.contains(&e) {
            idx.push(e);
        }
    }
    let gens = idx.into_iter().map(|e| random_generator(ctx, rng, e)).collect();
    CanonicalK2 { e: rng.gen_range(0..ctx.pm()), gens }.normalized(ctx)
}

fn timed(id: u32, name: &str, body: impl FnOnce(&mut Report)) -> Report {
    let mut r = Report::new(id, name);
    let t0 = Instant::now();
    body(&mut r);
    r.elapsed = t0.elapsed();
    r
}

fn pair_raw(ctx: &Context, x: &KWitt, y: &CanonicalK2) -> Result<u64> {
    let red = reduce(ctx, x)?;
    Ok(pair_theorem1(ctx, &red.canonical, y)?.v)
}

/// 1. The three pairings agree.
pub fn three_way(opts: &Options) -> Report {
    timed(1, "three-way equality of residue, ghost and closed-form pairings", |rep| {
        for cfg in CONFIGS {
            let ctx = context(cfg);
            let mut rng = opts.rng(1, cfg);
            for _ in 0..opts.count(500) {
                let x = random_witt(&ctx, &mut rng, 3, 12);
                let y = random_k2(&ctx, &mut rng, 3, 12, false);
                let Some(red) = rep.outcome("reduce", reduce(&ctx, &x)) else { continue };
                let Some(a) = rep.outcome("theorem1", pair_theorem1(&ctx, &red.canonical, &y)) else { continue };
                let Some(b) = rep.outcome("parshin", pair_parshin(&ctx, &x, &y)) else { continue };
                let c = pair_closed_form(&ctx, &red.canonical, &y);
                rep.check(a == b && b == c, || {
                    format!("{cfg:?} x={} y={y}: theorem1 {a}, parshin {b}, closed {c}", witt_text(&x))
                });
            }
        }
    })
}

/// 2. Values on `{S, T}`.
pub fn st_cases(opts: &Options) -> Report {
    timed(2, "constant and diagonal vectors against {S,T}", |rep| {
        for cfg in CONFIGS {
            let ctx = context(cfg);
            let zq = ctx.zq();
            let ks = exact_ks(&ctx);
            let st = CanonicalK2::st(&ctx, 1);
            let mut rng = opts.rng(2, cfg);
            for _ in 0..opts.count(50) {
                let c = rng.gen_range(0..ctx.pm());
                let want = zq.trace(&zq.mul(&zq.from_u64(c), &ctx.beta().beta)) % ctx.pm();
                let xc = CanonicalASW { c, terms: Default::default() };
                let x = crate::asw_reduce::embed(&ctx, ks.window, &xc);
                let a = pair_theorem1(&ctx, &xc, &st).map(|v| v.v);
                let b = pair_parshin(&ctx, &x, &st).map(|v| v.v);
                let cf = pair_closed_form(&ctx, &xc, &st).v;
                rep.check(a == Ok(want) && b == Ok(want) && cf == want, || {
                    format!("{cfg:?} c={c}: want {want}, got {a:?} {b:?} {cf}")
                });

                let mut e = ExpVec::ZERO;
                while e == ExpVec::ZERO {
                    e = ExpVec::new(rng.gen_range(-12..=12), rng.gen_range(-12..=12));
                }
                let cz = zq.random(&mut rng);
                let p = ctx.p() as i64;
                let coords = zq
                    .teich_digits(&cz, ctx.m)
                    .into_iter()
                    .enumerate()
                    .map(|(h, d)| ks.monomial(d, e.scale(p.pow(h as u32))))
                    .collect();
                let x = WittVec::new(coords);
                let a = pair_raw(&ctx, &x, &st);
                let b = pair_parshin(&ctx, &x, &st).map(|v| v.v);
                rep.check(a == Ok(0) && b == Ok(0), || {
                    format!("{cfg:?} c={cz} at S^{}T^{}: got {a:?} {b:?}", e.s, e.t)
                });
            }
        }
    })
}

/// 3. Kernel, bilinearity and `p^m`-torsion.
pub fn laws(opts: &Options) -> Report {
    timed(3, "wp-kernel, linearity in x, multiplicativity in y, p^m torsion", |rep| {
        for cfg in CONFIGS {
            let ctx = context(cfg);
            let wr = ctx.k_witt(exact_ks(&ctx).window);
            let mut rng = opts.rng(3, cfg);
            let pm = ctx.pm();
            for _ in 0..opts.count(200) {
                let x = random_witt(&ctx, &mut rng, 2, 12);
                let x2 = random_witt(&ctx, &mut rng, 2, 12);
                let z = random_witt(&ctx, &mut rng, 2, 6);
                let y = random_k2(&ctx, &mut rng, 2, 12, false);
                let y2 = random_k2(&ctx, &mut rng, 2, 12, false);
                let Some(v) = rep.outcome("pair", pair_raw(&ctx, &x, &y)) else { continue };

                let shifted = wr.add(&wr.wp(&z), &x);
                if let Some(w) = rep.outcome("pair", pair_raw(&ctx, &shifted, &y)) {
                    rep.check(w == v, || {
                        format!("{cfg:?} kernel: z={} x={}: {w} != {v}", witt_text(&z), witt_text(&x))
                    });
                }
                let sum = wr.add(&x, &x2);
                if let (Some(s), Some(v2)) =
                    (rep.outcome("pair", pair_raw(&ctx, &sum, &y)), rep.outcome("pair", pair_raw(&ctx, &x2, &y)))
                {
                    rep.check(s == (v + v2) % pm, || format!("{cfg:?} linearity: {s} != {v} + {v2}"));
                }
                let merged = y.merge(&ctx, &y2);
                if let (Some(s), Some(v2)) =
                    (rep.outcome("pair", pair_raw(&ctx, &x, &merged)), rep.outcome("pair", pair_raw(&ctx, &x, &y2)))
                {
                    rep.check(s == (v + v2) % pm, || format!("{cfg:?} multiplicativity: {s} != {v} + {v2}"));
                }
                let torsion = y.pow(&ctx, pm as i64);
                if let Some(t) = rep.outcome("pair", pair_raw(&ctx, &x, &torsion)) {
                    rep.check(t == 0, || format!("{cfg:?} y^(p^m) = {torsion}: {t}"));
                }
            }
        }
    })
}

/// 4. `{f, -f}` pairs to zero.
pub fn steinberg(opts: &Options) -> Report {
    timed(4, "Steinberg relation through normalization", |rep| {
        for cfg in CONFIGS {
            let ctx = context(cfg);
            let ks = exact_ks(&ctx);
            let mut rng = opts.rng(4, cfg);
            for _ in 0..opts.count(100) {
                let c = ctx.k().random_nonzero(&mut rng);
                let e = ExpVec::new(rng.gen_range(-12..=12), rng.gen_range(-12..=12));
                let f = ks.monomial(c, e);
                let Some(y) = rep.outcome("normalize", normalize_symbol(&ctx, &ks, &f, &ks.neg(&f))) else { continue };
                let x = random_canonical_asw(&ctx, &mut rng, 3, 12);
                let Some(v) = rep.outcome("theorem1", pair_theorem1(&ctx, &x, &y)) else { continue };
                let cf = pair_closed_form(&ctx, &x, &y).v;
                rep.check(v.v == 0 && cf == 0, || format!("{cfg:?} f={} x=[{x}]: {v} / {cf}", SeriesDisplay(&f)));
            }
        }
    })
}

/// 5. Reduction witnesses and canonical shape.
pub fn reduction(opts: &Options) -> Report {
    timed(5, "reduction soundness and canonical invariants", |rep| {
        for cfg in CONFIGS {
            let ctx = context(cfg);
            let mut rng = opts.rng(5, cfg);
            for _ in 0..opts.count(200) {
                let x = random_witt(&ctx, &mut rng, 3, 12);
                let Some(red) = rep.outcome("reduce", reduce(&ctx, &x)) else { continue };
                let residual_ok = verify(&ctx, &x, &red).is_some();
                let shape_ok = red.canonical.validate(&ctx).is_ok();
                rep.check(residual_ok && shape_ok, || {
                    format!("{cfg:?} x={}: residual ok {residual_ok}, shape ok {shape_ok}", witt_text(&x))
                });
            }
        }
    })
}

/// 6. One-variable inputs against the one-dimensional symbol.
pub fn one_dim(opts: &Options) -> Report {
    timed(6, "one-dimensional degeneration", |rep| {
        for cfg in CONFIGS.into_iter().filter(|c| c.2 == 1) {
            let ctx = context(cfg);
            let ks = exact_ks(&ctx);
            // generators of S-degree above 12 pair trivially with x
            let ks_norm = ctx.k_series(PrecisionWindow::new(1, 14));
            let k = ctx.k();
            let mut rng = opts.rng(6, cfg);
            for _ in 0..opts.count(100) {
                let n = rng.gen_range(1..=3);
                let x0 = ks.from_terms((0..n).map(|_| (ExpVec::new(rng.gen_range(-12..=12), 0), k.random(&mut rng))));
                let u = ks.from_terms(
                    std::iter::once((ExpVec::ZERO, k.one()))
                        .chain((1..=3).map(|i| (ExpVec::new(i, 0), k.random(&mut rng)))),
                );
                let Some(y) = rep.outcome("normalize", normalize_symbol(&ctx, &ks_norm, &u, &ks_norm.t())) else {
                    continue;
                };
                let x = WittVec::new(vec![x0.clone()]);
                let Some(a) = rep.outcome("pair", pair_raw(&ctx, &x, &y)) else { continue };
                let Some(b) = rep.outcome("schmid", schmid_one_dim(k, &x0, &u)) else { continue };
                rep.check(a == b.v, || {
                    format!("{cfg:?} x={} u={}: {a} != {}", SeriesDisplay(&x0), SeriesDisplay(&u), b.v)
                });
            }
        }
    })
}

/// 7. Ghost maps, digits, universal polynomials, `℘` additivity.
pub fn witt_infrastructure(opts: &Options) -> Report {
    timed(7, "Witt and ghost infrastructure", |rep| {
        for cfg in CONFIGS {
            let ctx = context(cfg);
            let (p, m) = (ctx.p(), ctx.m);
            let n = m as u32 + 1;
            let Some(zq) = rep.outcome("Z_q", ctx.zq_with_prec(n)) else { continue };
            let wz = WittRing::new(zq.clone(), p, m);
            let wk = WittRing::new(ctx.k().clone(), p, m);
            let mut rng = opts.rng(7, cfg);
            for _ in 0..opts.count(200) {
                let w = WittVec::new((0..m).map(|_| zq.random(&mut rng)).collect());
                let ok = match ghost_inverse(&zq, &wz.ghost(&w)) {
                    Ok(back) => (0..m).all(|h| {
                        let prec = n - h as u32;
                        zq.truncate(&back.coords[h], prec) == zq.truncate(&w.coords[h], prec)
                    }),
                    Err(_) => false,
                };
                rep.check(ok, || format!("{cfg:?} ghost inversion of {:?}", w.coords));

                let z = zq.random(&mut rng);
                for len in 1..=n as usize {
                    let back = zq.digits_to_zq(&zq.teich_digits(&z, len));
                    rep.check(zq.truncate(&back, len as u32) == zq.truncate(&z, len as u32), || {
                        format!("{cfg:?} digits of {z} at length {len}")
                    });
                }

                let a = WittVec::new((0..m).map(|_| ctx.k().random(&mut rng)).collect());
                let b = WittVec::new((0..m).map(|_| ctx.k().random(&mut rng)).collect());
                let lhs = wk.wp(&wk.add(&a, &b));
                let rhs = wk.add(&wk.wp(&a), &wk.wp(&b));
                rep.check(lhs == rhs, || format!("{cfg:?} wp additivity on {:?}, {:?}", a.coords, b.coords));
            }
            for len in 1..=m + 1 {
                let r = WittPolys::try_generate(p, len);
                rep.check(r.is_ok(), || format!("p={p} length {len}: {:?}", r.err()));
            }
        }
    })
}

/// 8. Unit filtration versus the image of `φ`.
pub fn ramification(opts: &Options) -> Report {
    timed(8, "ramification duality", |rep| {
        let spot = [((2, 0, 0), (3, 1), Some(0)), ((2, 0, 5), (3, 1), Some(3)), ((3, 4, 0), (1, 0), Some(2))];
        for ((p, r1, r2), (m1, m2), want) in spot {
            let got = ell(p, RamVector { r1, r2 }, m1, m2);
            rep.check(got == Ok(want), || format!("ell p={p} r=({r1},{r2}) at ({m1},{m2}): {got:?}"));
        }
        const BOUND: i64 = 8;
        for cfg in CONFIGS {
            let ctx = context(cfg);
            let p = ctx.p();
            let mut rng = opts.rng(8, cfg);
            let rs: Vec<RamVector> =
                (0..20).map(|_| RamVector { r1: rng.gen_range(0..=10), r2: rng.gen_range(0..=10) }).collect();
            for _ in 0..opts.count(200) {
                let y = random_k2(&ctx, &mut rng, 4, BOUND, true);
                let phi = phi_map(&ctx, &y, BOUND);
                for &r in &rs {
                    let member = u_membership(&ctx, &y, r);
                    let image = phi.iter().all(|(idx, v)| {
                        let l = ell_clipped(p, r, idx.s, idx.t, ctx.m).expect("window index");
                        in_level(&ctx, v, l)
                    });
                    rep.check(member == image, || format!("{cfg:?} y={y} r={r}: membership {member}, image {image}"));
                }
            }
        }
    })
}

/// 9. The ratio predicate is stable under `p^h` scaling.
pub fn ratio_stability(_opts: &Options) -> Report {
    timed(9, "ratio predicate stability", |rep| {
        for p in [2i64, 3, 5] {
            let coprime = |a: i64, b: i64| a % p != 0 || b % p != 0;
            for i in 0..=30 {
                for j in 0..=30 {
                    if i * j == 0 || !coprime(i, j) {
                        continue;
                    }
                    for l1 in 0..=30 {
                        for l2 in 0..=30 {
                            if !coprime(l1, l2) {
                                continue;
                            }
                            let base = ratio_match(l1, l2, i, j).is_some();
                            for h in 0..=3 {
                                let ph = p.pow(h);
                                let scaled = ratio_match(l1 * ph, l2 * ph, i, j).is_some();
                                rep.check(scaled == base, || format!("p={p} (i,j)=({i},{j}) l=({l1},{l2}) h={h}"));
                            }
                        }
                    }
                }
            }
        }
    })
}

pub type Criterion = fn(&Options) -> Report;

pub const CRITERIA: [Criterion; 9] =
    [three_way, st_cases, laws, steinberg, reduction, one_dim, witt_infrastructure, ramification, ratio_stability];

pub fn run_all(opts: &Options) -> Vec<Report> {
    CRITERIA.iter().map(|c| c(opts)).collect()
}

fn witt_text(x: &KWitt) -> String {
    let parts: Vec<String> = x.coords.iter().map(|c| SeriesDisplay(c).to_string()).collect();
    format!("[{}]", parts.join(", "))
}
