use std::sync::{Arc, OnceLock};

use ordab::constructions::{is_pullback_square, precomma, pullback, Square, SquareKind};
use ordab::factorization::{factor_e_m, factor_e_prime_m_prime, in_e, in_m};
use ordab::finite::{compose_tables, precomma_mask, table_to_hom, FinPoag};
use ordab::homs::{compose, hom_leq, is_fully_faithful, is_monotone, reflected_cone, Hom};
use ordab::points::{v_conservative_instance, v_functorial_on, SliceMorphism, SliceObject};
use ordab::poag::{Cone, Poag};
use ordab::sweep::{random_free_monotone, FiniteUniverse};
use ordab::vgroups::{all_vgroups, all_vhoms, boolean_agrees, v_precomma, Quantale, VHom};
use ordab::{Budget, Verdict};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn b() -> Budget {
    Budget::default()
}

fn universe() -> &'static FiniteUniverse {
    static U: OnceLock<FiniteUniverse> = OnceLock::new();
    U.get_or_init(|| FiniteUniverse::new(4))
}

fn free(rows: usize, gens: &[Vec<i64>]) -> Poag {
    Poag::from_i64("P", &vec![0; rows], &refs(gens)).unwrap()
}

fn small_vec(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-r..=r)).collect()
}

fn apply(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Two monotone maps `X -> Y <- Z` into a common codomain on free groups.
fn cospan(seed: u64) -> (Hom, Hom) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rx, rz, ry) = (rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(1..=2));
    let xg: Vec<Vec<i64>> = (0..rng.gen_range(0..=2)).map(|_| small_vec(&mut rng, rx, 2)).collect();
    let zg: Vec<Vec<i64>> = (0..rng.gen_range(0..=2)).map(|_| small_vec(&mut rng, rz, 2)).collect();
    let fm: Vec<Vec<i64>> = (0..ry).map(|_| small_vec(&mut rng, rx, 2)).collect();
    let gm: Vec<Vec<i64>> = (0..ry).map(|_| small_vec(&mut rng, rz, 2)).collect();
    let mut yg: Vec<Vec<i64>> = xg.iter().map(|v| apply(&fm, v)).collect();
    yg.extend(zg.iter().map(|v| apply(&gm, v)));
    if rng.gen_bool(0.5) {
        yg.push(small_vec(&mut rng, ry, 2));
    }
    let (x, z, y) = (free(rx, &xg), free(rz, &zg), free(ry, &yg));
    (Hom::from_i64(&x, &y, &refs(&fm)).unwrap(), Hom::from_i64(&z, &y, &refs(&gm)).unwrap())
}

fn refs(m: &[Vec<i64>]) -> Vec<&[i64]> {
    m.iter().map(Vec::as_slice).collect()
}

fn boxed(n: usize, r: i64) -> Vec<Vec<i64>> {
    let side = 2 * r + 1;
    (0..side.pow(n as u32))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let v = c % side - r;
                    c /= side;
                    v
                })
                .collect()
        })
        .collect()
}

/// A random slice morphism `γ: Z -> X` over `Y` and a random `α: A -> Y`
/// between poags of order ≤ 4.
fn finite_slice(seed: u64) -> Option<(Hom, SliceMorphism)> {
    let u = universe();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = u.poags.len();
    let (yi, ai, xi, zi) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
    let alpha = u.homs(ai, yi).choose(&mut rng)?;
    let f = u.homs(xi, yi).choose(&mut rng)?;
    let gamma = u.homs(zi, xi).choose(&mut rng)?;
    let g = compose_tables(f, gamma);
    let p = &u.poags;
    let (ys, as_, xs, zs) = (u.symbolic(yi, "Y"), u.symbolic(ai, "A"), u.symbolic(xi, "X"), u.symbolic(zi, "Z"));
    let alpha = table_to_hom(&as_, &ys, &p[ai].group, &p[yi].group, alpha).unwrap();
    let fh = table_to_hom(&xs, &ys, &p[xi].group, &p[yi].group, f).unwrap();
    let gh = table_to_hom(&zs, &ys, &p[zi].group, &p[yi].group, &g).unwrap();
    let gamma = table_to_hom(&zs, &xs, &p[zi].group, &p[xi].group, gamma).unwrap();
    let sm = SliceMorphism::new(SliceObject { f: gh }, SliceObject { f: fh }, gamma, &b()).unwrap();
    Some((alpha, sm))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, rng_seed: RngSeed::Fixed(0x0dab), ..ProptestConfig::default() })]

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=3)).collect();
        let ps: Vec<Poag> = dims.iter().map(|&d| free(d, &[])).collect();
        let maps: Vec<Hom> = (0..3)
            .map(|i| {
                let m: Vec<Vec<i64>> = (0..dims[i + 1]).map(|_| small_vec(&mut rng, dims[i], 3)).collect();
                Hom::from_i64(&ps[i], &ps[i + 1], &refs(&m)).unwrap()
            })
            .collect();
        let left = compose(&maps[2], &compose(&maps[1], &maps[0]).unwrap()).unwrap();
        let right = compose(&compose(&maps[2], &maps[1]).unwrap(), &maps[0]).unwrap();
        prop_assert!(left.same_map(&right));
    }

    #[test]
    fn precomma_cone_matches_definition(seed in any::<u64>()) {
        let (f, g) = cospan(seed);
        let pc = precomma(&f, &g, &b()).unwrap();
        let (x, z, y) = (f.dom(), g.dom(), f.cod());
        let nx = x.group().rank();
        for c in boxed(nx + z.group().rank(), 2) {
            let e = pc.object.elem(&c).unwrap();
            let (ex, ez) = (x.elem(&c[..nx]).unwrap(), z.elem(&c[nx..]).unwrap());
            let gap = y.group().sub(&g.apply(&ez).unwrap(), &f.apply(&ex).unwrap()).unwrap();
            let want = x.is_positive(&ex, &b()).unwrap()
                && z.is_positive(&ez, &b()).unwrap()
                && y.is_positive(&gap, &b()).unwrap();
            prop_assert_eq!(pc.object.is_positive(&e, &b()).unwrap(), want, "at {:?}", c);
        }
        let lower = compose(&f, &pc.pi1).unwrap();
        let upper = compose(&g, &pc.pi2).unwrap();
        prop_assert!(hom_leq(&lower, &upper, &b()).unwrap().is_yes());
    }

    #[test]
    fn derived_generators_span_the_cone(seed in any::<u64>()) {
        let (f, g) = cospan(seed);
        for cone in [precomma(&f, &g, &b()).unwrap().object.cone().clone(), reflected_cone(&f, &b()).unwrap()] {
            let spanned = Cone::generated(cone.group(), cone.generators(&b()).unwrap()).unwrap();
            for c in boxed(cone.group().rank(), 2) {
                let e = cone.group().elem(&c).unwrap();
                prop_assert_eq!(spanned.contains(&e, &b()).unwrap(), cone.contains(&e, &b()).unwrap(), "at {:?}", c);
            }
        }
    }

    #[test]
    fn pullbacks_are_pullbacks(seed in any::<u64>()) {
        let (f, g) = cospan(seed);
        let pb = pullback(&f, &g).unwrap();
        let sq = Square::new(pb.p2.clone(), pb.p1.clone(), g.clone(), f.clone(), SquareKind::Strict, &b()).unwrap();
        prop_assert!(is_pullback_square(&sq, &b()).unwrap().is_yes());
    }

    #[test]
    fn hom_leq_witnesses_check(seed in any::<u64>()) {
        let (f, _) = cospan(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let m: Vec<Vec<i64>> = (0..f.cod().group().rank()).map(|_| small_vec(&mut rng, f.dom().group().rank(), 2)).collect();
        let h = Hom::from_i64(f.dom(), f.cod(), &refs(&m)).unwrap();
        prop_assert!(hom_leq(&f, &f, &b()).unwrap().is_yes());
        match hom_leq(&f, &h, &b()).unwrap() {
            Verdict::Yes => {
                for p in f.dom().generators(&b()).unwrap() {
                    let d = f.cod().group().sub(&h.apply(&p).unwrap(), &f.apply(&p).unwrap()).unwrap();
                    prop_assert!(f.cod().is_positive(&d, &b()).unwrap());
                }
            }
            Verdict::No(w) => {
                prop_assert!(f.dom().is_positive(&w.generator, &b()).unwrap());
                let d = f.cod().group().sub(&h.apply(&w.generator).unwrap(), &f.apply(&w.generator).unwrap()).unwrap();
                prop_assert_eq!(&d, &w.difference);
                prop_assert!(!f.cod().is_positive(&d, &b()).unwrap());
            }
            Verdict::Unknown => prop_assert!(false, "unknown"),
        }
    }

    #[test]
    fn factorizations_certify(seed in any::<u64>()) {
        let g = random_free_monotone(&mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(is_monotone(&g, &b()).unwrap().is_yes());
        let em = factor_e_m(&g, &b()).unwrap();
        prop_assert!(em.certify(&g, &b()).unwrap().is_yes());
        prop_assert!(in_e(&em.e, &b()).unwrap().is_yes() && in_m(&em.m, &b()).unwrap().is_yes());
        let em2 = factor_e_prime_m_prime(&g, &b()).unwrap();
        prop_assert!(em2.certify(&g, &b()).unwrap().is_yes());
    }

    #[test]
    fn full_faithfulness_witnesses_check(seed in any::<u64>()) {
        let g = random_free_monotone(&mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        match is_fully_faithful(&g, &b()).unwrap() {
            Verdict::No(d) => {
                prop_assert!(g.cod().is_positive(&g.apply(&d).unwrap(), &b()).unwrap());
                prop_assert!(!g.dom().is_positive(&d, &b()).unwrap());
            }
            Verdict::Yes => {
                let em = factor_e_m(&g, &b()).unwrap();
                for p in em.middle.generators(&b()).unwrap() {
                    prop_assert!(g.dom().is_positive(&p, &b()).unwrap());
                }
            }
            Verdict::Unknown => prop_assert!(false, "unknown"),
        }
    }

    #[test]
    fn vertical_change_of_base_reflects_isos(seed in any::<u64>()) {
        if let Some((alpha, sm)) = finite_slice(seed) {
            let inst = v_conservative_instance(&alpha, &sm, &b()).unwrap();
            prop_assert!(inst.consistent(), "{:?}", inst);
            if inst.v_iso {
                prop_assert!(inst.gamma_iso && inst.inverse_verified);
            }
        }
    }

    #[test]
    fn vertical_change_of_base_is_functorial(seed in any::<u64>()) {
        if let Some((alpha, sm)) = finite_slice(seed) {
            let id = ordab::homs::identity(sm.source.f.dom());
            let idm = SliceMorphism::new(sm.source.clone(), sm.source.clone(), id, &b()).unwrap();
            prop_assert!(v_functorial_on(&alpha, &idm, &sm, &b()).unwrap());
        }
    }

    #[test]
    fn finite_precomma_tables_match_symbolic(seed in any::<u64>()) {
        let u = universe();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = u.poags.len();
        let (xi, zi, yi) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        let (Some(f), Some(g)) = (u.homs(xi, yi).choose(&mut rng), u.homs(zi, yi).choose(&mut rng)) else {
            return Ok(());
        };
        let p = &u.poags;
        let mask = precomma_mask(&p[xi], &p[zi], &p[yi], f, g);
        let (xs, zs, ys) = (u.symbolic(xi, "X"), u.symbolic(zi, "Z"), u.symbolic(yi, "Y"));
        let fh = table_to_hom(&xs, &ys, &p[xi].group, &p[yi].group, f).unwrap();
        let gh = table_to_hom(&zs, &ys, &p[zi].group, &p[yi].group, g).unwrap();
        let pc = precomma(&fh, &gh, &b()).unwrap();
        let prod = p[xi].group.product(&p[zi].group);
        for e in pc.object.group().elements().unwrap() {
            let bit = mask >> prod.index_of(&e) & 1 == 1;
            prop_assert_eq!(pc.object.is_positive(&e, &b()).unwrap(), bit);
        }
        prop_assert!(boolean_agrees(&p[xi], &p[zi], &p[yi], f, g, mask));
    }

    #[test]
    fn v_precomma_projections_are_homs(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = Arc::new(Quantale::chain3());
        let vs = all_vgroups(&q, 2);
        let (x, z, y) = (vs.choose(&mut rng).unwrap(), vs.choose(&mut rng).unwrap(), vs.choose(&mut rng).unwrap());
        let (Some(f), Some(g)) = (all_vhoms(x, y).choose(&mut rng).cloned(), all_vhoms(z, y).choose(&mut rng).cloned()) else {
            return Ok(());
        };
        let (f, g) = (VHom::new(x, y, f).unwrap(), VHom::new(z, y, g).unwrap());
        let pc = v_precomma(&f, &g).unwrap();
        prop_assert!(VHom::new(&pc.object, x, pc.pi1.table.clone()).is_ok());
        prop_assert!(VHom::new(&pc.object, z, pc.pi2.table.clone()).is_ok());
        let k = pc.object.order();
        for i in 0..k {
            prop_assert_eq!(pc.object.a(i, i), pc.object.a(0, 0));
        }
    }
}

#[test]
fn boolean_encoding_round_trips() {
    for p in &universe().poags {
        let q = Arc::new(Quantale::boolean());
        let back: FinPoag = ordab::vgroups::decode_boolean(&ordab::vgroups::encode_boolean(p, q));
        assert_eq!(back.cone, p.cone);
    }
}
