//! Exhaustive and sampled sweeps over finite instances, each evaluated by
//! the table engine and cross-checked against the symbolic procedures.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Budget, Error, ResourceLimit, Result, Verdict};
use crate::finite::{
    all_fin_poags, bits, compose_tables, image, is_bijective, maps_into, monotone_homs, precomma_mask,
    table_to_hom, FinGroup, FinPoag, Mask,
};
use crate::constructions::{Square, SquareKind};
use crate::factorization::{factor_e_m, factor_e_prime_m_prime, fill_diagonal};
use crate::homs::{is_epi, is_fully_faithful, Hom};
use crate::points::{
    h_rali_witness, jointly_extremally_epi, v_apply, v_conservative_instance, Point, PointMorphism,
    SliceMorphism, SliceObject,
};
use crate::poag::Poag;

/// All finite poags with their pairwise monotone maps.
pub struct FiniteUniverse {
    pub poags: Vec<FinPoag>,
    homs: Vec<Vec<Vec<Vec<u8>>>>,
}

impl FiniteUniverse {
    pub fn new(max_order: usize) -> Self {
        let poags = all_fin_poags(max_order);
        let homs = poags.iter().map(|x| poags.iter().map(|y| monotone_homs(x, y)).collect()).collect();
        FiniteUniverse { poags, homs }
    }

    /// Monotone maps from poag `i` to poag `j`.
    pub fn homs(&self, i: usize, j: usize) -> &[Vec<u8>] {
        &self.homs[i][j]
    }

    pub fn symbolic(&self, i: usize, name: &str) -> Poag {
        self.poags[i].to_poag(name)
    }
}

/// Conservativeness of `V_α` on slice morphisms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConservativeSweep {
    /// Every `(Y, A, α, X, f, Z, γ)` examined.
    pub instances: u64,
    /// Instances where `γ` is bijective.
    pub bijective: u64,
    /// Instances where `V_α(γ)` is an iso.
    pub v_iso: u64,
    /// `V_α(γ)` iso but `γ` not.
    pub violations: u64,
    /// Reconstructed inverse failing a composite, additivity or monotonicity.
    pub inverse_failures: u64,
    /// Instances re-run through the symbolic procedure, and disagreements.
    pub cross_checked: u64,
    pub cross_disagreements: u64,
}

impl ConservativeSweep {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.inverse_failures == 0 && self.cross_disagreements == 0
    }
}

fn is_additive(g: &FinGroup, h: &FinGroup, t: &[u8]) -> bool {
    (0..g.order()).all(|x| (0..g.order()).all(|y| t[g.add(x, y)] as usize == h.add(t[x] as usize, t[y] as usize)))
}

/// Every instance with carriers of order at most `max_order` whose
/// precommas `α/f` and `α/g` have at most `max_product` elements. Every
/// `cross_stride`-th instance (and every `cross_stride`-th iso instance)
/// is also decided symbolically.
pub fn v_conservative_sweep(
    u: &FiniteUniverse,
    max_product: usize,
    cross_stride: u64,
    budget: &Budget,
) -> Result<ConservativeSweep> {
    let mut r = ConservativeSweep::default();
    let ps = &u.poags;
    for yi in 0..ps.len() {
        for ai in 0..ps.len() {
            let na = ps[ai].order();
            for alpha in u.homs(ai, yi) {
                for xi in 0..ps.len() {
                    let nx = ps[xi].order();
                    if na * nx > max_product {
                        continue;
                    }
                    for f in u.homs(xi, yi) {
                        let pf = precomma_mask(&ps[ai], &ps[xi], &ps[yi], alpha, f);
                        for zi in 0..ps.len() {
                            let nz = ps[zi].order();
                            if na * nz > max_product {
                                continue;
                            }
                            for gamma in u.homs(zi, xi) {
                                r.instances += 1;
                                let g = compose_tables(f, gamma);
                                let pg = precomma_mask(&ps[ai], &ps[zi], &ps[yi], alpha, &g);
                                let v: Vec<u8> =
                                    (0..na * nz).map(|i| ((i / nz) * nx + gamma[i % nz] as usize) as u8).collect();
                                let gamma_bij = is_bijective(gamma, nx);
                                if gamma_bij {
                                    r.bijective += 1;
                                }
                                let v_iso = is_bijective(&v, na * nx) && image(&v, pg) == pf;
                                let gamma_iso = gamma_bij && image(gamma, ps[zi].cone) == ps[xi].cone;
                                let mut inverse: Option<Vec<u8>> = None;
                                if v_iso {
                                    r.v_iso += 1;
                                    if !gamma_iso {
                                        r.violations += 1;
                                    }
                                    let mut v_inv = vec![0u8; na * nx];
                                    for (i, &j) in v.iter().enumerate() {
                                        v_inv[j as usize] = i as u8;
                                    }
                                    // ρ₂ ∘ V⁻¹ ∘ ⟨0, 1_X⟩
                                    let g_inv: Vec<u8> = (0..nx).map(|x| v_inv[x] % nz as u8).collect();
                                    let ok = (0..nx).all(|x| gamma[g_inv[x] as usize] as usize == x)
                                        && (0..nz).all(|z| g_inv[gamma[z] as usize] as usize == z)
                                        && maps_into(&g_inv, ps[xi].cone, ps[zi].cone)
                                        && is_additive(&ps[xi].group, &ps[zi].group, &g_inv);
                                    if !ok {
                                        r.inverse_failures += 1;
                                    }
                                    inverse = Some(g_inv);
                                }
                                let stride_hit = cross_stride > 0
                                    && (r.instances % cross_stride == 0 || (v_iso && r.v_iso % cross_stride == 1));
                                if stride_hit {
                                    r.cross_checked += 1;
                                    let agree = cross_check_conservative(
                                        u, ai, yi, xi, zi, alpha, f, &g, gamma, v_iso, gamma_iso, &inverse, budget,
                                    )?;
                                    if !agree {
                                        r.cross_disagreements += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn cross_check_conservative(
    u: &FiniteUniverse,
    ai: usize,
    yi: usize,
    xi: usize,
    zi: usize,
    alpha: &[u8],
    f: &[u8],
    g: &[u8],
    gamma: &[u8],
    v_iso: bool,
    gamma_iso: bool,
    inverse: &Option<Vec<u8>>,
    budget: &Budget,
) -> Result<bool> {
    let ps = &u.poags;
    let (a, y, x, z) = (u.symbolic(ai, "A"), u.symbolic(yi, "Y"), u.symbolic(xi, "X"), u.symbolic(zi, "Z"));
    let sa = table_to_hom(&a, &y, &ps[ai].group, &ps[yi].group, alpha)?;
    let sf = table_to_hom(&x, &y, &ps[xi].group, &ps[yi].group, f)?;
    let sg = table_to_hom(&z, &y, &ps[zi].group, &ps[yi].group, g)?;
    let sgamma = table_to_hom(&z, &x, &ps[zi].group, &ps[xi].group, gamma)?;
    let sm = SliceMorphism::new(SliceObject { f: sg }, SliceObject { f: sf }, sgamma, budget)?;
    let out = v_conservative_instance(&sa, &sm, budget)?;
    let mut agree = out.v_iso == v_iso && out.gamma_iso == gamma_iso && out.inverse_verified == v_iso;
    if let (Some(t), Some(h)) = (inverse, &out.reconstructed_inverse) {
        let expected = table_to_hom(&x, &z, &ps[xi].group, &ps[zi].group, t)?;
        agree &= expected.same_map(h);
    }
    Ok(agree)
}

/// The `z̄` construction on rali points with `H_α(γ)` an iso.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HRaliSweep {
    pub instances: u64,
    pub rali_instances: u64,
    pub h_iso: u64,
    /// Cone elements `x` for which `z̄` was built.
    pub witnesses: u64,
    pub failures: u64,
    pub cross_checked: u64,
    pub cross_disagreements: u64,
}

impl HRaliSweep {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cross_disagreements == 0
    }
}

/// All points `(f, s)` on `X` over `Y`, as `(f, s)` table pairs.
fn points_on(u: &FiniteUniverse, xi: usize, yi: usize) -> Vec<(Vec<u8>, Vec<u8>)> {
    let mut out = Vec::new();
    for f in u.homs(xi, yi) {
        for s in u.homs(yi, xi) {
            if (0..u.poags[yi].order()).all(|y| f[s[y] as usize] as usize == y) {
                out.push((f.clone(), s.clone()));
            }
        }
    }
    out
}

/// Sweeps `α: A -> Y`, points `(g, t)` on `Z` and `(f, s)` on `X`, and point
/// morphisms `γ: Z -> X`, with `|X|·|A|, |Z|·|A| ≤ max_product`.
pub fn h_rali_sweep(u: &FiniteUniverse, max_product: usize, cross_stride: u64, budget: &Budget) -> Result<HRaliSweep> {
    let mut r = HRaliSweep::default();
    let ps = &u.poags;
    for yi in 0..ps.len() {
        let y = &ps[yi];
        let pts: Vec<Vec<(Vec<u8>, Vec<u8>)>> = (0..ps.len()).map(|xi| points_on(u, xi, yi)).collect();
        for ai in 0..ps.len() {
            let na = ps[ai].order();
            for alpha in u.homs(ai, yi) {
                for xi in 0..ps.len() {
                    let nx = ps[xi].order();
                    if nx * na > max_product {
                        continue;
                    }
                    for (f, s) in &pts[xi] {
                        let pf = precomma_mask(&ps[xi], &ps[ai], y, f, alpha);
                        for zi in 0..ps.len() {
                            let nz = ps[zi].order();
                            if nz * na > max_product {
                                continue;
                            }
                            for (g, t) in &pts[zi] {
                                for gamma in u.homs(zi, xi) {
                                    if compose_tables(f, gamma) != *g || compose_tables(gamma, t) != *s {
                                        continue;
                                    }
                                    r.instances += 1;
                                    let xg = &ps[xi].group;
                                    let zg = &ps[zi].group;
                                    let rali = |p: &FinPoag, f: &[u8], s: &[u8]| {
                                        bits(p.cone).all(|x| {
                                            p.cone & (1 << p.group.sub(x, s[f[x] as usize] as usize)) != 0
                                        })
                                    };
                                    if !(rali(&ps[xi], f, s) && rali(&ps[zi], g, t)) {
                                        continue;
                                    }
                                    r.rali_instances += 1;
                                    let pg = precomma_mask(&ps[zi], &ps[ai], y, g, alpha);
                                    let h: Vec<u8> =
                                        (0..nz * na).map(|i| (gamma[i / na] as usize * na + i % na) as u8).collect();
                                    if !(is_bijective(&h, nx * na) && image(&h, pg) == pf) {
                                        continue;
                                    }
                                    r.h_iso += 1;
                                    let mut h_inv = vec![0u8; nx * na];
                                    for (i, &j) in h.iter().enumerate() {
                                        h_inv[j as usize] = i as u8;
                                    }
                                    for x in bits(ps[xi].cone) {
                                        let fx = f[x] as usize;
                                        let rest = xg.sub(x, s[fx] as usize);
                                        // (rest, 0) has index rest·|A|; ρ₁ divides by |A|
                                        let pulled = h_inv[rest * na] as usize / na;
                                        let zbar = zg.add(pulled, t[fx] as usize);
                                        r.witnesses += 1;
                                        if gamma[zbar] as usize != x || ps[zi].cone & (1 << zbar) == 0 {
                                            r.failures += 1;
                                        }
                                    }
                                    if cross_stride > 0 && r.h_iso % cross_stride == 1 {
                                        r.cross_checked += 1;
                                        let ok = cross_check_h_rali(u, ai, yi, xi, zi, alpha, (f, s), (g, t), gamma, budget)?;
                                        if !ok {
                                            r.cross_disagreements += 1;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn cross_check_h_rali(
    u: &FiniteUniverse,
    ai: usize,
    yi: usize,
    xi: usize,
    zi: usize,
    alpha: &[u8],
    (f, s): (&[u8], &[u8]),
    (g, t): (&[u8], &[u8]),
    gamma: &[u8],
    budget: &Budget,
) -> Result<bool> {
    let ps = &u.poags;
    let (a, y, x, z) = (u.symbolic(ai, "A"), u.symbolic(yi, "Y"), u.symbolic(xi, "X"), u.symbolic(zi, "Z"));
    let (ga, gy, gx, gz) = (&ps[ai].group, &ps[yi].group, &ps[xi].group, &ps[zi].group);
    let target = Point::new(table_to_hom(&x, &y, gx, gy, f)?, table_to_hom(&y, &x, gy, gx, s)?, budget)?;
    let source = Point::new(table_to_hom(&z, &y, gz, gy, g)?, table_to_hom(&y, &z, gy, gz, t)?, budget)?;
    let pm = PointMorphism::new(source, target, table_to_hom(&z, &x, gz, gx, gamma)?, budget)?;
    let sa = table_to_hom(&a, &y, ga, gy, alpha)?;
    let pairs = h_rali_witness(&sa, &pm, budget)?;
    Ok(pairs.iter().all(|(xe, ze)| pm.gamma.apply(ze).map(|v| &v == xe).unwrap_or(false)))
}

/// Definitional check: no proper subobject `(S, Q)` of `X` (subgroup `S`,
/// cone `Q ⊆ S ∩ P_X`) receives both maps monotonically.
pub fn jee_brute_force(x: &FinPoag, parts: &[(Mask, Mask)]) -> bool {
    let g = &x.group;
    let subs = g.subgroups();
    let all = g.full();
    for &s in &subs {
        if parts.iter().any(|(img, _)| img & !s != 0) {
            continue;
        }
        for &q in &subs {
            if q & !s != 0 || q & !x.cone != 0 {
                continue;
            }
            if parts.iter().any(|(_, pos)| pos & !q != 0) {
                continue;
            }
            if s != all || q != x.cone {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JeeSweep {
    pub instances: u64,
    pub yes: u64,
    pub disagreements: u64,
    pub unknown: u64,
    /// `(π₂, s)` pairs from vertical precommas, and how many were not yes.
    pub precomma_pairs: u64,
    pub precomma_failures: u64,
}

impl JeeSweep {
    pub fn passed(&self) -> bool {
        self.disagreements == 0 && self.unknown == 0 && self.precomma_failures == 0
    }
}

fn jee_instance(
    u: &FiniteUniverse,
    xi: usize,
    wi: usize,
    vi: usize,
    p: &[u8],
    q: &[u8],
    budget: &Budget,
) -> Result<(bool, Verdict<()>)> {
    let ps = &u.poags;
    let parts = [
        (image(p, ps[wi].group.full()), image(p, ps[wi].cone)),
        (image(q, ps[vi].group.full()), image(q, ps[vi].cone)),
    ];
    let brute = jee_brute_force(&ps[xi], &parts);
    let (x, w, v) = (u.symbolic(xi, "X"), u.symbolic(wi, "W"), u.symbolic(vi, "V"));
    let sp = table_to_hom(&w, &x, &ps[wi].group, &ps[xi].group, p)?;
    let sq = table_to_hom(&v, &x, &ps[vi].group, &ps[xi].group, q)?;
    Ok((brute, jointly_extremally_epi(&sp, &sq, budget)?.forget()))
}

/// Random pairs of monotone maps into every poag of order at most
/// `max_order`, `per_target` pairs each, with domains of order at most
/// `max_domain`; half the pairs reuse the target as a domain so that
/// positive instances occur. Then every `(π₂, s)` pair of a vertical
/// precomma with `|A|·|X| ≤ precomma_product`.
pub fn jee_sweep<R: Rng>(
    u: &FiniteUniverse,
    max_order: usize,
    max_domain: usize,
    per_target: usize,
    precomma_product: usize,
    rng: &mut R,
    budget: &Budget,
) -> Result<JeeSweep> {
    let mut r = JeeSweep::default();
    let ps = &u.poags;
    let domains: Vec<usize> = (0..ps.len()).filter(|&i| ps[i].order() <= max_domain).collect();
    for xi in 0..ps.len() {
        if ps[xi].order() > max_order {
            continue;
        }
        for k in 0..per_target {
            let wi = if k % 2 == 0 { xi } else { *domains.choose(rng).expect("nonempty") };
            let vi = *domains.choose(rng).expect("nonempty");
            let (Some(p), Some(q)) = (u.homs(wi, xi).choose(rng), u.homs(vi, xi).choose(rng)) else {
                continue;
            };
            let (brute, derived) = jee_instance(u, xi, wi, vi, p, q, budget)?;
            r.instances += 1;
            match derived {
                Verdict::Unknown => r.unknown += 1,
                d => {
                    if d.is_yes() != brute {
                        r.disagreements += 1;
                    }
                    if brute {
                        r.yes += 1;
                    }
                }
            }
        }
    }
    for yi in 0..ps.len() {
        for ai in 0..ps.len() {
            for xi in 0..ps.len() {
                if ps[ai].order() * ps[xi].order() > precomma_product {
                    continue;
                }
                for alpha in u.homs(ai, yi) {
                    for (f, s) in points_on(u, xi, yi) {
                        r.precomma_pairs += 1;
                        let pmask = precomma_mask(&ps[ai], &ps[xi], &ps[yi], alpha, &f);
                        let pc = FinPoag { group: Arc::new(ps[ai].group.product(&ps[xi].group)), cone: pmask };
                        let nx = ps[xi].order();
                        let pi2: Vec<u8> = (0..pc.order()).map(|i| (i % nx) as u8).collect();
                        let parts = [
                            (image(&pi2, pc.group.full()), image(&pi2, pc.cone)),
                            (image(&s, ps[yi].group.full()), image(&s, ps[yi].cone)),
                        ];
                        let brute = jee_brute_force(&ps[xi], &parts);
                        let (a, y, x) = (u.symbolic(ai, "A"), u.symbolic(yi, "Y"), u.symbolic(xi, "X"));
                        let (ga, gy, gx) = (&ps[ai].group, &ps[yi].group, &ps[xi].group);
                        let point = Point::new(table_to_hom(&x, &y, gx, gy, &f)?, table_to_hom(&y, &x, gy, gx, &s)?, budget)?;
                        let v = v_apply(&table_to_hom(&a, &y, ga, gy, alpha)?, &point, budget)?;
                        let derived = jointly_extremally_epi(&v.precomma.pi2, &point.s, budget)?;
                        if !brute || !derived.is_yes() {
                            r.precomma_failures += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FfSweep {
    pub instances: u64,
    pub yes: u64,
    pub disagreements: u64,
    pub unknown: u64,
}

impl FfSweep {
    pub fn passed(&self) -> bool {
        self.disagreements == 0 && self.unknown == 0
    }
}

/// `x ≤ x' ⇔ f(x) ≤ f(x')` for all `x, x' ∈ P_X`, by tables.
pub fn ff_brute_force(x: &FinPoag, y: &FinPoag, f: &[u8]) -> bool {
    bits(x.cone).all(|a| {
        bits(x.cone).all(|b| {
            let d = x.group.sub(b, a);
            let fd = y.group.sub(f[b] as usize, f[a] as usize);
            (y.cone & (1 << fd) == 0) || (x.cone & (1 << d) != 0)
        })
    })
}

/// Every monotone map between poags of the universe, decided both ways.
pub fn ff_sweep(u: &FiniteUniverse, budget: &Budget) -> Result<FfSweep> {
    let mut r = FfSweep::default();
    let ps = &u.poags;
    for xi in 0..ps.len() {
        let x = u.symbolic(xi, "X");
        for yi in 0..ps.len() {
            let y = u.symbolic(yi, "Y");
            for f in u.homs(xi, yi) {
                r.instances += 1;
                let brute = ff_brute_force(&ps[xi], &ps[yi], f);
                let h = table_to_hom(&x, &y, &ps[xi].group, &ps[yi].group, f)?;
                match is_fully_faithful(&h, budget)? {
                    Verdict::Unknown => r.unknown += 1,
                    d => {
                        if d.is_yes() != brute {
                            r.disagreements += 1;
                        }
                        if brute {
                            r.yes += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(r)
}

/// Ff on maps between poags over free groups, against a bounded search for
/// `x ≤ x'` pairs among positives with coordinates in `[-bound, bound]`.
/// The bounded search can only refute, so agreement means: a refutation
/// found by search is matched by a `No`, and every `No` witness checks out.
pub fn ff_free_check(f: &Hom, bound: u64, budget: &Budget) -> Result<bool> {
    let x = f.dom();
    let y = f.cod();
    let pos = x.cone().bounded_elements(bound, budget)?;
    let xg = x.group();
    let mut refuted = false;
    'outer: for a in &pos {
        for b in &pos {
            let d = xg.sub(b, a)?;
            if y.is_positive(&f.apply(&d)?, budget)? && !x.is_positive(&d, budget)? {
                refuted = true;
                break 'outer;
            }
        }
    }
    Ok(match is_fully_faithful(f, budget)? {
        Verdict::Yes => !refuted,
        Verdict::No(d) => {
            let lattice = xg.subgroup(&x.generators(budget)?)?;
            y.is_positive(&f.apply(&d)?, budget)? && !x.is_positive(&d, budget)? && lattice.coords_of(&d)?.is_some()
        }
        Verdict::Unknown => false,
    })
}

fn refs(g: &[Vec<i64>]) -> Vec<&[i64]> {
    g.iter().map(Vec::as_slice).collect()
}

/// A random monotone map between poags on `ℤ^r`, `r ≤ 2`. The codomain
/// cone contains the image of the domain cone, plus at most one extra
/// generator.
pub fn random_free_monotone<R: Rng>(rng: &mut R) -> Result<Hom> {
    let r = rng.gen_range(1..=2usize);
    let s = rng.gen_range(1..=2usize);
    let small = |rng: &mut R, n: usize| -> Vec<i64> { (0..n).map(|_| rng.gen_range(-2..=2)).collect() };
    let dom_gens: Vec<Vec<i64>> = (0..rng.gen_range(0..=3)).map(|_| small(rng, r)).collect();
    let matrix: Vec<Vec<i64>> = (0..s).map(|_| small(rng, r)).collect();
    let mut cod_gens: Vec<Vec<i64>> = dom_gens
        .iter()
        .map(|v| matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
        .collect();
    if rng.gen_bool(0.5) {
        cod_gens.push(small(rng, s));
    }
    let x = Poag::from_i64("X", &vec![0; r], &refs(&dom_gens))?;
    let y = Poag::from_i64("Y", &vec![0; s], &refs(&cod_gens))?;
    Hom::from_i64(&x, &y, &refs(&matrix))
}

/// A random monotone map between two poags of the universe.
pub fn random_finite_monotone<R: Rng>(u: &FiniteUniverse, rng: &mut R) -> Result<Hom> {
    loop {
        let i = rng.gen_range(0..u.poags.len());
        let j = rng.gen_range(0..u.poags.len());
        if let Some(t) = u.homs(i, j).choose(rng) {
            let (x, y) = (u.symbolic(i, "X"), u.symbolic(j, "Y"));
            return table_to_hom(&x, &y, &u.poags[i].group, &u.poags[j].group, t);
        }
    }
}

/// Both factorizations of each map, certified, and the diagonals of the
/// squares built from them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FactorizationSuite {
    pub morphisms: u64,
    pub certified: u64,
    pub squares: u64,
    pub unique_fills: u64,
    pub failures: Vec<String>,
}

impl FactorizationSuite {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.certified == 2 * self.morphisms && self.unique_fills == self.squares
    }
}

/// For `g = m∘e = m'∘e'`, the squares `(e, e, m, m)`, `(e', e', m', m')` and
/// `(e, e', m', m)` all have a left leg in a left class and a right leg in
/// the matching right class. Each fill must exist, and the left leg must be
/// epi so that it is unique.
pub fn factorization_suite(maps: &[Hom], budget: &Budget) -> Result<FactorizationSuite> {
    let mut out = FactorizationSuite::default();
    for g in maps {
        out.morphisms += 1;
        let em = factor_e_m(g, budget)?;
        let em2 = factor_e_prime_m_prime(g, budget)?;
        for f in [&em, &em2] {
            match f.certify(g, budget)? {
                Verdict::Yes => out.certified += 1,
                Verdict::Unknown => return Err(Error::ResourceLimit(ResourceLimit { limit: budget.limit() })),
                v => out.failures.push(format!("{} of {}: {}", f.system, g, v)),
            }
        }
        let squares = [
            (em.e.clone(), em.e.clone(), em.m.clone(), em.m.clone()),
            (em2.e.clone(), em2.e.clone(), em2.m.clone(), em2.m.clone()),
            (em2.e.clone(), em.e.clone(), em2.m.clone(), em.m.clone()),
        ];
        for (top, left, right, bottom) in squares {
            out.squares += 1;
            let sq = Square::new(top, left, right, bottom, SquareKind::Strict, budget)?;
            match fill_diagonal(&sq, budget) {
                Ok(_) if is_epi(&sq.left)?.is_yes() => out.unique_fills += 1,
                Ok(_) => out.failures.push(format!("left leg of a square over {} is not epi", g)),
                Err(e @ Error::ResourceLimit(_)) => return Err(e),
                Err(e) => out.failures.push(format!("no diagonal for a square over {}: {}", g, e)),
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_conservative_sweep() {
        let u = FiniteUniverse::new(4);
        let r = v_conservative_sweep(&u, 4, 997, &Budget::default()).unwrap();
        assert!(r.passed(), "{:?}", r);
        assert!(r.v_iso > 0 && r.cross_checked > 0);
    }

    #[test]
    fn small_h_rali_sweep() {
        let u = FiniteUniverse::new(4);
        let r = h_rali_sweep(&u, 4, 50, &Budget::default()).unwrap();
        assert!(r.passed(), "{:?}", r);
        assert!(r.witnesses > 0);
    }

    #[test]
    fn small_jee_sweep() {
        let u = FiniteUniverse::new(6);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = jee_sweep(&u, 6, 4, 4, 4, &mut rng, &Budget::default()).unwrap();
        assert!(r.passed(), "{:?}", r);
        assert!(r.yes > 0 && r.yes < r.instances);
    }

    #[test]
    fn ff_sweep_small() {
        let u = FiniteUniverse::new(4);
        let r = ff_sweep(&u, &Budget::default()).unwrap();
        assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn factorization_suite_mixed() {
        let u = FiniteUniverse::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut maps = Vec::new();
        for i in 0..12 {
            maps.push(if i % 2 == 0 {
                random_free_monotone(&mut rng).unwrap()
            } else {
                random_finite_monotone(&u, &mut rng).unwrap()
            });
        }
        let r = factorization_suite(&maps, &Budget::default()).unwrap();
        assert!(r.passed(), "{:?}", r);
        assert_eq!(r.squares, 36);
    }

    #[test]
    fn ff_free_instances() {
        let b = Budget::default();
        let zn = Poag::integers();
        let n2 = Poag::from_i64("N2", &[0, 0], &[&[1, 0], &[0, 1]]).unwrap();
        let plus = Hom::from_i64(&n2, &zn, &[&[1, 1]]).unwrap();
        assert!(ff_free_check(&plus, 3, &b).unwrap());
        let diag = Hom::from_i64(&zn, &n2, &[&[1], &[1]]).unwrap();
        assert!(ff_free_check(&diag, 3, &b).unwrap());
    }
}
