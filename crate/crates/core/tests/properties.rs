use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use witt_parshin::asw_reduce::reduce;
use witt_parshin::context::KWitt;
use witt_parshin::milnor::CanonicalK2;
use witt_parshin::parse::{canonical_asw_from_text, symbol_from_text};
use witt_parshin::ramification::{ell, ell_clipped, in_level, phi_map, u_membership, RamVector};
use witt_parshin::ring_tower::FiniteField;
use witt_parshin::selftest::{random_canonical_asw, random_k2, random_witt, CONFIGS};
use witt_parshin::series::{PrecisionWindow, SeriesRing};
use witt_parshin::symbol::{pair_closed_form, pair_theorem1};
use witt_parshin::witt::{ghost_inverse, WittRing, WittVec};
use witt_parshin::{Context, Ring};

fn setup(cfg: usize, seed: u64) -> (Context, ChaCha8Rng) {
    let (p, d, m) = CONFIGS[cfg];
    (Context::new(p, d, None, m).unwrap(), ChaCha8Rng::seed_from_u64(seed))
}

fn pair(ctx: &Context, x: &KWitt, y: &CanonicalK2) -> u64 {
    let red = reduce(ctx, x).unwrap();
    pair_theorem1(ctx, &red.canonical, y).unwrap().v
}

fn exact(ctx: &Context) -> WittRing<SeriesRing<FiniteField>> {
    ctx.k_witt(PrecisionWindow::new(1, i64::MAX / 4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wp_image_pairs_trivially(cfg in 0..CONFIGS.len(), seed: u64) {
        let (ctx, mut rng) = setup(cfg, seed);
        let wr = exact(&ctx);
        let x = random_witt(&ctx, &mut rng, 2, 10);
        let z = random_witt(&ctx, &mut rng, 2, 5);
        let y = random_k2(&ctx, &mut rng, 2, 10, false);
        prop_assert_eq!(pair(&ctx, &wr.add(&x, &wr.wp(&z)), &y), pair(&ctx, &x, &y));
    }

    #[test]
    fn additive_in_both_slots(cfg in 0..CONFIGS.len(), seed: u64) {
        let (ctx, mut rng) = setup(cfg, seed);
        let wr = exact(&ctx);
        let pm = ctx.pm();
        let x1 = random_witt(&ctx, &mut rng, 2, 10);
        let x2 = random_witt(&ctx, &mut rng, 2, 10);
        let y1 = random_k2(&ctx, &mut rng, 2, 10, false);
        let y2 = random_k2(&ctx, &mut rng, 2, 10, false);
        let v = pair(&ctx, &x1, &y1);
        prop_assert_eq!(pair(&ctx, &wr.add(&x1, &x2), &y1), (v + pair(&ctx, &x2, &y1)) % pm);
        prop_assert_eq!(pair(&ctx, &x1, &y1.merge(&ctx, &y2)), (v + pair(&ctx, &x1, &y2)) % pm);
    }

    #[test]
    fn closed_form_matches_residue(cfg in 0..CONFIGS.len(), seed: u64) {
        let (ctx, mut rng) = setup(cfg, seed);
        let x = random_canonical_asw(&ctx, &mut rng, 3, 10);
        let y = random_k2(&ctx, &mut rng, 3, 10, false);
        prop_assert_eq!(pair_theorem1(&ctx, &x, &y).unwrap().v, pair_closed_form(&ctx, &x, &y).v);
    }

    #[test]
    fn printed_forms_parse_back(cfg in 0..CONFIGS.len(), seed: u64) {
        let (ctx, mut rng) = setup(cfg, seed);
        let x = random_canonical_asw(&ctx, &mut rng, 4, 8);
        prop_assert_eq!(canonical_asw_from_text(&ctx, &x.to_string()).unwrap(), x);

        let y = random_k2(&ctx, &mut rng, 3, 6, false);
        let ks = ctx.k_series(PrecisionWindow::new(14, 14 * 8));
        let mut back = symbol_from_text(&ctx, &ks, &y.to_string()).unwrap();
        back.gens.retain(|g| g.i.abs() <= 6 && g.j <= 6);
        prop_assert_eq!(back, y);
    }
}

proptest! {
    #[test]
    fn ghost_inverse_round_trip(cfg in 0..CONFIGS.len(), seed: u64) {
        let (ctx, mut rng) = setup(cfg, seed);
        let m = ctx.m;
        let zq = ctx.zq_with_prec(m as u32 + 1).unwrap();
        let wz = WittRing::new(zq.clone(), ctx.p(), m);
        let w = WittVec::new((0..m).map(|_| zq.random(&mut rng)).collect());
        let back = ghost_inverse(&zq, &wz.ghost(&w)).unwrap();
        for h in 0..m {
            let prec = m as u32 + 1 - h as u32;
            prop_assert_eq!(zq.truncate(&back.coords[h], prec), zq.truncate(&w.coords[h], prec));
        }
    }

    #[test]
    fn teichmuller_is_multiplicative(cfg in 0..CONFIGS.len(), seed: u64) {
        let (ctx, mut rng) = setup(cfg, seed);
        let (k, zq) = (ctx.k(), ctx.zq());
        let a = k.random(&mut rng);
        let b = k.random(&mut rng);
        prop_assert_eq!(zq.teichmuller(&k.mul(&a, &b)), zq.mul(&zq.teichmuller(&a), &zq.teichmuller(&b)));
    }

    #[test]
    fn ell_is_monotone(p in prop::sample::select(vec![2u64, 3, 5]),
                       r in (0i64..40, 0i64..40), s in (0i64..40, 0i64..40),
                       idx in (0i64..20, 0i64..20)) {
        prop_assume!(idx != (0, 0) && (idx.0 % p as i64 != 0 || idx.1 % p as i64 != 0));
        let (r, s) = (RamVector::new(r.0, r.1).unwrap(), RamVector::new(s.0, s.1).unwrap());
        let (lo, hi) = if r.exp() <= s.exp() { (r, s) } else { (s, r) };
        let a = ell(p, lo, idx.0, idx.1).unwrap();
        let b = ell(p, hi, idx.0, idx.1).unwrap();
        prop_assert!(b.is_none() || a.is_some_and(|a| a <= b.unwrap()));
    }

    #[test]
    fn phi_is_additive(cfg in 0..CONFIGS.len(), seed: u64) {
        let (ctx, mut rng) = setup(cfg, seed);
        let zq = ctx.zq();
        let y1 = random_k2(&ctx, &mut rng, 4, 8, true);
        let y2 = random_k2(&ctx, &mut rng, 4, 8, true);
        let (a, b) = (phi_map(&ctx, &y1, 8), phi_map(&ctx, &y2, 8));
        for (idx, v) in phi_map(&ctx, &y1.merge(&ctx, &y2), 8) {
            prop_assert_eq!(v, zq.add(&a[&idx], &b[&idx]));
        }
    }

    #[test]
    fn membership_matches_phi_image(cfg in 0..CONFIGS.len(), seed: u64, r in (0i64..12, 0i64..12)) {
        let (ctx, mut rng) = setup(cfg, seed);
        let r = RamVector::new(r.0, r.1).unwrap();
        let y = random_k2(&ctx, &mut rng, 4, 8, true);
        let image = phi_map(&ctx, &y, 8)
            .iter()
            .all(|(idx, v)| in_level(&ctx, v, ell_clipped(ctx.p(), r, idx.s, idx.t, ctx.m).unwrap()));
        prop_assert_eq!(u_membership(&ctx, &y, r), image);
    }
}
