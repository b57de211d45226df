//! Precomma objects, pullbacks and square classification.

use num_bigint::BigInt;

use crate::error::{lift, Budget, Error, Result, Verdict};
use crate::homs::{compose, enumerate_homs, hom_leq, is_iso, is_monotone, Hom, IsoFailure, LeqWitness};
use crate::intlin::IntMatrix;
use crate::poag::{Cone, ConeSystem, Poag};

/// The precomma object `f/g` of `f: X -> Y` and `g: Z -> Y`: the group
/// `X × Z` with cone `{(x, z) : x ∈ P_X, z ∈ P_Z, g(z) - f(x) ∈ P_Y}`.
#[derive(Debug, Clone)]
pub struct PrecommaResult {
    pub f: Hom,
    pub g: Hom,
    pub object: Poag,
    pub pi1: Hom,
    pub pi2: Hom,
    /// `⟨0, 1_Z⟩: Z -> f/g`
    pub section2: Hom,
}

impl PrecommaResult {
    /// Replaces the cone of the object, keeping all maps. Only meant for
    /// mutation tests of the verifiers.
    pub fn with_object_cone(&self, cone: Cone) -> Result<PrecommaResult> {
        let object = Poag::new(self.object.name(), cone);
        Ok(PrecommaResult {
            f: self.f.clone(),
            g: self.g.clone(),
            pi1: self.pi1.retarget(&object, self.pi1.cod())?,
            pi2: self.pi2.retarget(&object, self.pi2.cod())?,
            section2: self.section2.retarget(self.section2.dom(), &object)?,
            object,
        })
    }

    pub fn x(&self) -> &Poag {
        self.f.dom()
    }

    pub fn z(&self) -> &Poag {
        self.g.dom()
    }

    pub fn y(&self) -> &Poag {
        self.f.cod()
    }
}

fn require_monotone(f: &Hom, budget: &Budget) -> Result<()> {
    match is_monotone(f, budget)? {
        Verdict::Yes => Ok(()),
        Verdict::No(p) => Err(Error::NotMonotone(format!("{} (generator {})", f, p))),
        Verdict::Unknown => Err(Error::ResourceLimit(crate::error::ResourceLimit { limit: budget.limit() })),
    }
}

/// The cone of `f/g` as a stacked linear system.
pub fn precomma_cone(f: &Hom, g: &Hom) -> Result<Cone> {
    let (x, z, y) = (f.dom(), g.dom(), f.cod());
    let (sx, sz, sy) = (x.cone().system(), z.cone().system(), y.cone().system());
    let a = sx.a.block_diag(&sz.a).block_diag(&sy.a);
    let top = sx.b.block_diag(&sz.b);
    let bottom = sy.b.mul(&f.matrix().neg().hstack(g.matrix()));
    let mut row_moduli = sx.row_moduli.clone();
    row_moduli.extend(sz.row_moduli.iter().cloned());
    row_moduli.extend(sy.row_moduli.iter().cloned());
    let group = x.group().product(z.group());
    Cone::from_system(&group, ConeSystem { a, b: top.vstack(&bottom), row_moduli })
}

pub fn precomma(f: &Hom, g: &Hom, budget: &Budget) -> Result<PrecommaResult> {
    if f.cod() != g.cod() {
        return Err(Error::GroupMismatch(format!(
            "precomma needs a common codomain, got {} and {}",
            f.cod().name(),
            g.cod().name()
        )));
    }
    require_monotone(f, budget)?;
    require_monotone(g, budget)?;
    let (x, z) = (f.dom(), g.dom());
    let object = Poag::new(format!("{}/{}", x.name(), z.name()), precomma_cone(f, g)?)
        .with_ambient(x.cone().product(z.cone()));
    let (n, m) = (x.group().rank(), z.group().rank());
    let pi1 = Hom::new(&object, x, IntMatrix::identity(n).hstack(&IntMatrix::zeros(n, m)))?;
    let pi2 = Hom::new(&object, z, IntMatrix::zeros(m, n).hstack(&IntMatrix::identity(m)))?;
    let section2 = Hom::new(z, &object, IntMatrix::zeros(n, m).vstack(&IntMatrix::identity(m)))?;
    Ok(PrecommaResult { f: f.clone(), g: g.clone(), object, pi1, pi2, section2 })
}

/// `⟨α, β⟩: A -> f/g`, defined when `fα ≼ gβ`.
pub fn pairing(pc: &PrecommaResult, alpha: &Hom, beta: &Hom, budget: &Budget) -> Result<Hom> {
    if alpha.cod() != pc.x() || beta.cod() != pc.z() || alpha.dom() != beta.dom() {
        return Err(Error::GroupMismatch("pairing legs do not match the precomma".into()));
    }
    let fa = compose(&pc.f, alpha)?;
    let gb = compose(&pc.g, beta)?;
    match hom_leq(&fa, &gb, budget)? {
        Verdict::Yes => {}
        Verdict::No(w) => {
            return Err(Error::Precondition(format!(
                "f∘α ≼ g∘β fails at generator {} (difference {})",
                w.generator, w.difference
            )))
        }
        Verdict::Unknown => {
            return Err(Error::ResourceLimit(crate::error::ResourceLimit { limit: budget.limit() }))
        }
    }
    let lambda = Hom::new(alpha.dom(), &pc.object, alpha.matrix().vstack(beta.matrix()))?;
    require_monotone(&lambda, budget)?;
    Ok(lambda)
}

/// Evaluates the two-dimensional condition on one instance: given
/// `α ≼ α'`, `β ≼ β'` and the lax squares for both pairs, is
/// `⟨α,β⟩ ≼ ⟨α',β'⟩`? A `No` certifies that `f/g` is not a comma object.
pub fn check_c3_instance(
    pc: &PrecommaResult,
    alpha: &Hom,
    alpha2: &Hom,
    beta: &Hom,
    beta2: &Hom,
    budget: &Budget,
) -> Result<Verdict<LeqWitness>> {
    for (name, v) in [("α ≼ α'", hom_leq(alpha, alpha2, budget)?), ("β ≼ β'", hom_leq(beta, beta2, budget)?)] {
        match v {
            Verdict::Yes => {}
            Verdict::No(w) => {
                return Err(Error::Precondition(format!("{} fails at {}", name, w.generator)))
            }
            Verdict::Unknown => return Ok(Verdict::Unknown),
        }
    }
    let l1 = pairing(pc, alpha, beta, budget)?;
    let l2 = pairing(pc, alpha2, beta2, budget)?;
    hom_leq(&l1, &l2, budget)
}

#[derive(Debug, Clone)]
pub struct PullbackResult {
    pub object: Poag,
    pub p1: Hom,
    pub p2: Hom,
}

/// Pullback of `f: X -> Y` and `g: Z -> Y`: the kernel of `(x, z) ↦ f(x) - g(z)`
/// re-presented in coordinates, with the cone restricted from `P_X × P_Z`.
pub fn pullback(f: &Hom, g: &Hom) -> Result<PullbackResult> {
    if f.cod().group() != g.cod().group() {
        return Err(Error::GroupMismatch("pullback needs a common codomain".into()));
    }
    let (x, z) = (f.dom(), g.dom());
    let prod_cone = x.cone().product(z.cone());
    let prod = Poag::new("prod", prod_cone.clone());
    let diff = Hom::new(&prod, f.cod(), f.matrix().hstack(&g.matrix().neg()))?;
    let ker = diff.kernel_subgroup()?;
    let cone = prod_cone.preimage(&ker.group, &ker.embed)?;
    let object = Poag::new(format!("{}x_{}", x.name(), z.name()), cone);
    let n = x.group().rank();
    let rows: Vec<usize> = (0..n).collect();
    let rest: Vec<usize> = (n..n + z.group().rank()).collect();
    let p1 = Hom::new(&object, x, ker.embed.select_rows(&rows))?;
    let p2 = Hom::new(&object, z, ker.embed.select_rows(&rest))?;
    Ok(PullbackResult { object, p1, p2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareKind {
    /// `bottom ∘ left = right ∘ top`
    Strict,
    /// `bottom ∘ left ≼ right ∘ top`
    Lax,
}

/// A square
/// ```text
///   C --top--> Z
///   |          |
///  left      right
///   v          v
///   X -bottom-> Y
/// ```
#[derive(Debug, Clone)]
pub struct Square {
    pub top: Hom,
    pub left: Hom,
    pub right: Hom,
    pub bottom: Hom,
    pub kind: SquareKind,
}

impl Square {
    /// Checks corners and the tagged (lax) commutativity.
    pub fn new(top: Hom, left: Hom, right: Hom, bottom: Hom, kind: SquareKind, budget: &Budget) -> Result<Self> {
        if top.dom() != left.dom() || top.cod() != right.dom() || left.cod() != bottom.dom() || bottom.cod() != right.cod() {
            return Err(Error::GroupMismatch("square corners do not match".into()));
        }
        let lower = compose(&bottom, &left)?;
        let upper = compose(&right, &top)?;
        match kind {
            SquareKind::Strict => {
                if !lower.same_map(&upper) {
                    return Err(Error::Inconsistent("square does not commute".into()));
                }
            }
            SquareKind::Lax => match hom_leq(&lower, &upper, budget)? {
                Verdict::Yes => {}
                Verdict::No(w) => {
                    return Err(Error::Inconsistent(format!("lax inequality fails at {}", w.generator)))
                }
                Verdict::Unknown => {
                    return Err(Error::ResourceLimit(crate::error::ResourceLimit { limit: budget.limit() }))
                }
            },
        }
        Ok(Square { top, left, right, bottom, kind })
    }

    pub fn commutes(&self) -> bool {
        match (compose(&self.bottom, &self.left), compose(&self.right, &self.top)) {
            (Ok(a), Ok(b)) => a.same_map(&b),
            _ => false,
        }
    }
}

/// Whether the comparison map from the corner into the canonical pullback
/// is an isomorphism.
pub fn is_pullback_square(sq: &Square, budget: &Budget) -> Result<Verdict<IsoFailure>> {
    if !sq.commutes() {
        return Err(Error::Precondition("a pullback square must commute".into()));
    }
    let pb = pullback(&sq.bottom, &sq.right)?;
    let c = sq.left.dom();
    let ambient = Poag::new("XxZ", Cone::trivial(&sq.left.cod().group().product(sq.top.cod().group())));
    let embed = Hom::new(&pb.object, &ambient, pb.p1.matrix().vstack(pb.p2.matrix()))?;
    let cols: Vec<Vec<BigInt>> = (0..c.group().rank())
        .map(|j| {
            let e = c.group().unit(j);
            let v = sq.left.apply(&e)?.pair(&sq.top.apply(&e)?);
            embed
                .solve(&v)?
                .map(|k| k.into_coords())
                .ok_or_else(|| Error::Inconsistent("commuting square misses the pullback".into()))
        })
        .collect::<Result<_>>()?;
    let comparison = Hom::new(c, &pb.object, IntMatrix::from_columns(pb.object.group().rank(), &cols))?;
    lift(is_iso(&comparison, budget))
}

/// Whether the square is a precomma square: the induced map into the
/// canonical `bottom/right` is an isomorphism.
pub fn is_precomma_square(sq: &Square, budget: &Budget) -> Result<Verdict<IsoFailure>> {
    let pc = precomma(&sq.bottom, &sq.right, budget)?;
    let lambda = pairing(&pc, &sq.left, &sq.top, budget)?;
    lift(is_iso(&lambda, budget))
}

/// `0/f` for `f: X -> Y`: the group `0 × X = X`.
pub fn vertical_kernel(f: &Hom, budget: &Budget) -> Result<PrecommaResult> {
    let zero = Hom::zero(&Poag::zero(), f.cod());
    precomma(&zero, f, budget)
}

/// `f/0` for `f: X -> Y`: cone `{x ∈ P_X : f(x) ≤ 0}`.
pub fn horizontal_kernel(f: &Hom, budget: &Budget) -> Result<PrecommaResult> {
    let zero = Hom::zero(&Poag::zero(), f.cod());
    precomma(f, &zero, budget)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UniversalReport {
    pub apexes: usize,
    /// Pairs `(α, β)` with `fα ≼ gβ`.
    pub lax_pairs: usize,
    /// Pairs with exactly one mediating monotone map.
    pub unique: usize,
    /// Pairs with no mediating monotone map.
    pub missing: usize,
    /// Pairs with several mediating maps (impossible on a product carrier,
    /// counted for completeness).
    pub ambiguous: usize,
    /// Monotone maps into `f/g` whose legs violate `fπ₁λ ≼ gπ₂λ`.
    pub lax_violations: usize,
}

impl UniversalReport {
    pub fn passed(&self) -> bool {
        self.missing == 0 && self.ambiguous == 0 && self.lax_violations == 0 && self.unique == self.lax_pairs
    }
}

/// Exhaustive check of the universal property of `pc` against every
/// monotone map out of each apex.
pub fn verify_precomma_universal(pc: &PrecommaResult, apexes: &[Poag], budget: &Budget) -> Result<UniversalReport> {
    let mut report = UniversalReport { apexes: apexes.len(), ..Default::default() };
    for a in apexes {
        let alphas = enumerate_homs(a, pc.x(), true, budget)?;
        let betas = enumerate_homs(a, pc.z(), true, budget)?;
        let lambdas = enumerate_homs(a, &pc.object, true, budget)?;
        let legs: Vec<(Hom, Hom)> = lambdas
            .iter()
            .map(|l| Ok((compose(&pc.pi1, l)?, compose(&pc.pi2, l)?)))
            .collect::<Result<_>>()?;
        for (p, q) in &legs {
            if !hom_leq(&compose(&pc.f, p)?, &compose(&pc.g, q)?, budget)?.is_yes() {
                report.lax_violations += 1;
            }
        }
        for al in &alphas {
            let fa = compose(&pc.f, al)?;
            for be in &betas {
                if !hom_leq(&fa, &compose(&pc.g, be)?, budget)?.is_yes() {
                    continue;
                }
                report.lax_pairs += 1;
                let count = legs.iter().filter(|(p, q)| p.same_map(al) && q.same_map(be)).count();
                match count {
                    0 => report.missing += 1,
                    1 => report.unique += 1,
                    _ => report.ambiguous += 1,
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homs::identity;
    use crate::poag::{product_poag, AbGroup};

    fn b() -> Budget {
        Budget::default()
    }

    fn n() -> Poag {
        Poag::integers()
    }

    #[test]
    fn order_precomma_cone() {
        let id = identity(&n());
        let pc = precomma(&id, &id, &b()).unwrap();
        let g = pc.object.group().clone();
        for x in g.bounded_elements(6) {
            let c = x.to_i64().unwrap();
            let want = c[0] >= 0 && c[1] >= 0 && c[0] <= c[1];
            assert_eq!(pc.object.is_positive(&x, &b()).unwrap(), want, "{}", x);
        }
        let gens = pc.object.generators(&b()).unwrap();
        assert_eq!(gens, vec![g.elem(&[0, 1]).unwrap(), g.elem(&[1, 1]).unwrap()]);
        assert!(hom_leq(&compose(&pc.f, &pc.pi1).unwrap(), &compose(&pc.g, &pc.pi2).unwrap(), &b()).unwrap().is_yes());
    }

    #[test]
    fn sum_over_zero_has_trivial_cone() {
        let n2 = product_poag(&n(), &n());
        let plus = Hom::from_i64(&n2, &n(), &[&[1, 1]]).unwrap();
        let pc = horizontal_kernel(&plus, &b()).unwrap();
        assert!(pc.object.generators(&b()).unwrap().is_empty());
        assert_eq!(pc.object.group(), &AbGroup::free(2));
    }

    #[test]
    fn indiscrete_base_gives_product_cone() {
        let zz = Poag::from_i64("ZZ", &[0], &[&[1], &[-1]]).unwrap();
        let f = Hom::from_i64(&n(), &zz, &[&[1]]).unwrap();
        let pc = precomma(&f, &f, &b()).unwrap();
        let g = pc.object.group();
        assert_eq!(pc.object.generators(&b()).unwrap(), vec![g.elem(&[0, 1]).unwrap(), g.elem(&[1, 0]).unwrap()]);
    }

    #[test]
    fn pairing_and_c3() {
        let id = identity(&n());
        let pc = precomma(&id, &id, &b()).unwrap();
        let m = |k: i64| Hom::from_i64(&n(), &n(), &[&[k]]).unwrap();
        let t = pairing(&pc, &m(1), &m(4), &b()).unwrap();
        assert!(is_monotone(&t, &b()).unwrap().is_yes());
        let v = check_c3_instance(&pc, &m(1), &m(3), &m(4), &m(5), &b()).unwrap();
        assert_eq!(v.witness().unwrap().difference, pc.object.elem(&[2, 1]).unwrap());
        assert!(check_c3_instance(&pc, &m(1), &m(1), &m(4), &m(4), &b()).unwrap().is_yes());
        assert!(pairing(&pc, &m(2), &m(1), &b()).is_err());
        let l = pairing(&pc, &pc.pi1, &pc.pi2, &b()).unwrap();
        assert!(l.same_map(&identity(&pc.object)));
    }

    #[test]
    fn pullback_of_identities() {
        let zz = Poag::from_i64("ZZ", &[0], &[&[1], &[-1]]).unwrap();
        let neg = Poag::from_i64("N", &[0], &[&[-1]]).unwrap();
        let f = Hom::from_i64(&n(), &zz, &[&[1]]).unwrap();
        let g = Hom::from_i64(&neg, &zz, &[&[1]]).unwrap();
        let pb = pullback(&f, &g).unwrap();
        assert_eq!(pb.object.group(), &AbGroup::free(1));
        assert!(pb.object.generators(&b()).unwrap().is_empty());
    }

    #[test]
    fn pullback_of_sum() {
        let zz = Poag::from_i64("ZZ", &[0], &[&[1], &[-1]]).unwrap();
        let z2 = product_poag(&zz, &zz);
        let plus = Hom::from_i64(&z2, &zz, &[&[1, 1]]).unwrap();
        let pb = pullback(&plus, &identity(&zz)).unwrap();
        assert_eq!(pb.object.group(), &AbGroup::free(2));
        let sq = Square::new(pb.p2.clone(), pb.p1.clone(), identity(&zz), plus, SquareKind::Strict, &b()).unwrap();
        assert!(is_pullback_square(&sq, &b()).unwrap().is_yes());
    }

    #[test]
    fn kernels() {
        let n2 = product_poag(&n(), &n());
        let plus = Hom::from_i64(&n2, &n(), &[&[1, 1]]).unwrap();
        let vk = vertical_kernel(&plus, &b()).unwrap();
        for x in vk.object.group().bounded_elements(3) {
            assert_eq!(vk.object.is_positive(&x, &b()).unwrap(), n2.is_positive(&x, &b()).unwrap());
        }
    }

    #[test]
    fn universal_property_small() {
        let z2 = AbGroup::from_moduli(&[2]).unwrap();
        let full = Poag::new("Z2f", Cone::full(&z2));
        let disc = Poag::new("Z2d", Cone::trivial(&z2));
        let f = Hom::from_i64(&disc, &full, &[&[1]]).unwrap();
        let pc = precomma(&f, &f, &b()).unwrap();
        let apexes = vec![Poag::zero(), full.clone(), disc.clone()];
        let r = verify_precomma_universal(&pc, &apexes, &b()).unwrap();
        assert!(r.passed(), "{:?}", r);
        assert!(r.lax_pairs > 0);
    }
}
