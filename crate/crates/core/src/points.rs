//! Points (split epimorphisms with a chosen section), the change-of-base
//! functors along a morphism, and the decisions built on them.

use crate::constructions::{pairing, precomma, vertical_kernel, PrecommaResult};
use crate::error::{lift, Budget, Error, ResourceLimit, Result, Verdict};
use crate::homs::{
    compose, hom_leq, hom_leq_in, identity, inverse, is_iso, is_monotone, Hom, IsoFailure, LeqWitness,
};
use crate::intlin::IntMatrix;
use crate::poag::{Cone, Element, Poag};

fn exhausted(budget: &Budget) -> Error {
    Error::ResourceLimit(ResourceLimit { limit: budget.limit() })
}

fn require_monotone(f: &Hom, what: &str, budget: &Budget) -> Result<()> {
    match is_monotone(f, budget)? {
        Verdict::Yes => Ok(()),
        Verdict::No(p) => Err(Error::NotMonotone(format!("{} {} at {}", what, f, p))),
        Verdict::Unknown => Err(exhausted(budget)),
    }
}

/// A split epimorphism `f: X -> Y` with section `s`.
#[derive(Debug, Clone)]
pub struct Point {
    pub f: Hom,
    pub s: Hom,
}

impl Point {
    pub fn new(f: Hom, s: Hom, budget: &Budget) -> Result<Self> {
        if s.dom() != f.cod() || s.cod() != f.dom() {
            return Err(Error::GroupMismatch("section does not go back along f".into()));
        }
        if !compose(&f, &s)?.same_map(&identity(f.cod())) {
            return Err(Error::Precondition("f∘s is not the identity".into()));
        }
        require_monotone(&f, "projection", budget)?;
        require_monotone(&s, "section", budget)?;
        Ok(Point { f, s })
    }

    pub fn total(&self) -> &Poag {
        self.f.dom()
    }

    pub fn base(&self) -> &Poag {
        self.f.cod()
    }

    pub fn slice(&self) -> SliceObject {
        SliceObject { f: self.f.clone() }
    }

    /// `s∘f`
    pub fn idempotent(&self) -> Result<Hom> {
        compose(&self.s, &self.f)
    }
}

/// `γ: X -> X'` with `f'γ = f` and `γs = s'`.
#[derive(Debug, Clone)]
pub struct PointMorphism {
    pub source: Point,
    pub target: Point,
    pub gamma: Hom,
}

impl PointMorphism {
    pub fn new(source: Point, target: Point, gamma: Hom, budget: &Budget) -> Result<Self> {
        if source.base() != target.base() {
            return Err(Error::GroupMismatch("points over different bases".into()));
        }
        if gamma.dom() != source.total() || gamma.cod() != target.total() {
            return Err(Error::GroupMismatch("γ does not connect the points".into()));
        }
        if !compose(&target.f, &gamma)?.same_map(&source.f) {
            return Err(Error::Precondition("γ does not commute with the projections".into()));
        }
        if !compose(&gamma, &source.s)?.same_map(&target.s) {
            return Err(Error::Precondition("γ does not commute with the sections".into()));
        }
        require_monotone(&gamma, "γ", budget)?;
        Ok(PointMorphism { source, target, gamma })
    }

    pub fn slice(&self) -> SliceMorphism {
        SliceMorphism { source: self.source.slice(), target: self.target.slice(), gamma: self.gamma.clone() }
    }
}

/// An object `f: X -> Y` of the slice over `Y`.
#[derive(Debug, Clone)]
pub struct SliceObject {
    pub f: Hom,
}

/// `γ: Z -> X` with `fγ = g`, from `(Z, g)` to `(X, f)`.
#[derive(Debug, Clone)]
pub struct SliceMorphism {
    pub source: SliceObject,
    pub target: SliceObject,
    pub gamma: Hom,
}

impl SliceMorphism {
    pub fn new(source: SliceObject, target: SliceObject, gamma: Hom, budget: &Budget) -> Result<Self> {
        if gamma.dom() != source.f.dom() || gamma.cod() != target.f.dom() || source.f.cod() != target.f.cod() {
            return Err(Error::GroupMismatch("γ does not connect the slice objects".into()));
        }
        if !compose(&target.f, &gamma)?.same_map(&source.f) {
            return Err(Error::Precondition("f∘γ differs from g".into()));
        }
        require_monotone(&gamma, "γ", budget)?;
        Ok(SliceMorphism { source, target, gamma })
    }
}

/// Which order the rali/lali comparison uses on the total object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrderReading {
    /// The object's own cone.
    #[default]
    Literal,
    /// The product cone of the underlying product group, for objects built
    /// as precommas.
    Ambient,
}

fn comparison_cone(x: &Poag, reading: OrderReading) -> Result<&Cone> {
    match reading {
        OrderReading::Literal => Ok(x.cone()),
        OrderReading::Ambient => x.ambient_cone().ok_or_else(|| {
            Error::Precondition(format!("{} carries no ambient product order", x.name()))
        }),
    }
}

/// `s∘f ≼ 1_X`
pub fn is_rali(p: &Point, reading: OrderReading, budget: &Budget) -> Result<Verdict<LeqWitness>> {
    let sf = p.idempotent()?;
    let one = identity(p.total());
    hom_leq_in(&sf, &one, comparison_cone(p.total(), reading)?, budget)
}

/// `1_X ≼ s∘f`
pub fn is_lali(p: &Point, reading: OrderReading, budget: &Budget) -> Result<Verdict<LeqWitness>> {
    let sf = p.idempotent()?;
    let one = identity(p.total());
    hom_leq_in(&one, &sf, comparison_cone(p.total(), reading)?, budget)
}

/// A point produced by a change-of-base functor, with its precomma.
#[derive(Debug, Clone)]
pub struct BaseChange {
    pub precomma: PrecommaResult,
    pub point: Point,
}

/// `V_α(f, s) = (π₁: α/f -> A, ⟨1_A, sα⟩)`
pub fn v_apply(alpha: &Hom, p: &Point, budget: &Budget) -> Result<BaseChange> {
    let pc = precomma(alpha, &p.f, budget)?;
    let sa = compose(&p.s, alpha)?;
    let section = pairing(&pc, &identity(alpha.dom()), &sa, budget)?;
    let point = Point::new(pc.pi1.clone(), section, budget)?;
    Ok(BaseChange { precomma: pc, point })
}

/// `H_α(f, s) = (π₂: f/α -> A, ⟨sα, 1_A⟩)`
pub fn h_apply(alpha: &Hom, p: &Point, budget: &Budget) -> Result<BaseChange> {
    let pc = precomma(&p.f, alpha, budget)?;
    let sa = compose(&p.s, alpha)?;
    let section = pairing(&pc, &sa, &identity(alpha.dom()), budget)?;
    let point = Point::new(pc.pi2.clone(), section, budget)?;
    Ok(BaseChange { precomma: pc, point })
}

/// `1_A × γ: α/g -> α/f` between the vertical precommas.
pub fn v_slice_map(alpha: &Hom, sm: &SliceMorphism, budget: &Budget) -> Result<(PrecommaResult, PrecommaResult, Hom)> {
    let back = precomma(alpha, &sm.source.f, budget)?;
    let front = precomma(alpha, &sm.target.f, budget)?;
    let m = IntMatrix::identity(alpha.dom().group().rank()).block_diag(sm.gamma.matrix());
    let v = Hom::new(&back.object, &front.object, m)?;
    require_monotone(&v, "V(γ)", budget)?;
    Ok((back, front, v))
}

/// `γ × 1_A: g/α -> f/α` between the horizontal precommas.
pub fn h_slice_map(alpha: &Hom, sm: &SliceMorphism, budget: &Budget) -> Result<(PrecommaResult, PrecommaResult, Hom)> {
    let back = precomma(&sm.source.f, alpha, budget)?;
    let front = precomma(&sm.target.f, alpha, budget)?;
    let m = sm.gamma.matrix().block_diag(&IntMatrix::identity(alpha.dom().group().rank()));
    let h = Hom::new(&back.object, &front.object, m)?;
    require_monotone(&h, "H(γ)", budget)?;
    Ok((back, front, h))
}

/// `V_α(γ)` as a morphism of points over `A`; commutation with the new
/// projections and sections is re-verified by the constructor.
pub fn v_on_morphism(alpha: &Hom, pm: &PointMorphism, budget: &Budget) -> Result<PointMorphism> {
    let src = v_apply(alpha, &pm.source, budget)?;
    let tgt = v_apply(alpha, &pm.target, budget)?;
    let (_, _, v) = v_slice_map(alpha, &pm.slice(), budget)?;
    let v = v.retarget(src.point.total(), tgt.point.total())?;
    PointMorphism::new(src.point, tgt.point, v, budget)
}

pub fn h_on_morphism(alpha: &Hom, pm: &PointMorphism, budget: &Budget) -> Result<PointMorphism> {
    let src = h_apply(alpha, &pm.source, budget)?;
    let tgt = h_apply(alpha, &pm.target, budget)?;
    let (_, _, h) = h_slice_map(alpha, &pm.slice(), budget)?;
    let h = h.retarget(src.point.total(), tgt.point.total())?;
    PointMorphism::new(src.point, tgt.point, h, budget)
}

/// Outcome of one conservativeness instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConservativeInstance {
    pub v_iso: bool,
    pub gamma_iso: bool,
    /// `ρ₂ ∘ V(γ)⁻¹ ∘ ⟨0, 1_X⟩`, when `V(γ)` is an iso.
    pub reconstructed_inverse: Option<Hom>,
    /// Both composites with `γ` are identities and the inverse is monotone.
    pub inverse_verified: bool,
}

impl ConservativeInstance {
    pub fn consistent(&self) -> bool {
        !self.v_iso || (self.gamma_iso && self.inverse_verified)
    }
}

/// Checks `V_α(γ)` iso ⇒ `γ` iso on one slice morphism, and rebuilds the
/// inverse of `γ` from the inverse of `V_α(γ)`.
pub fn v_conservative_instance(alpha: &Hom, sm: &SliceMorphism, budget: &Budget) -> Result<ConservativeInstance> {
    let (back, front, v) = v_slice_map(alpha, sm, budget)?;
    let v_iso = verdict_bool(is_iso(&v, budget)?, budget)?;
    let gamma_iso = verdict_bool(is_iso(&sm.gamma, budget)?, budget)?;
    if !v_iso {
        return Ok(ConservativeInstance { v_iso, gamma_iso, reconstructed_inverse: None, inverse_verified: false });
    }
    let v_inv = inverse(&v)?;
    let rho2 = back.pi2.clone();
    let g_inv = compose(&rho2, &compose(&v_inv, &front.section2)?)?;
    let gamma = &sm.gamma;
    let left = compose(gamma, &g_inv)?.same_map(&identity(gamma.cod()));
    let right = compose(&g_inv, gamma)?.same_map(&identity(gamma.dom()));
    let mono = is_monotone(&g_inv, budget)?;
    if mono.is_unknown() {
        return Err(exhausted(budget));
    }
    Ok(ConservativeInstance {
        v_iso,
        gamma_iso,
        inverse_verified: left && right && mono.is_yes(),
        reconstructed_inverse: Some(g_inv),
    })
}

fn verdict_bool<W>(v: Verdict<W>, budget: &Budget) -> Result<bool> {
    match v {
        Verdict::Yes => Ok(true),
        Verdict::No(_) => Ok(false),
        Verdict::Unknown => Err(exhausted(budget)),
    }
}

/// For a morphism of rali points `γ: (g, t) -> (f, s)` with `H_α(γ)` an
/// iso, produces for each generator `x` of `P_X` the element
/// `z̄ = ρ₁ H_α(γ)⁻¹ (x - sf(x), 0) + t f(x)` of `P_Z`, checked to satisfy
/// `γ(z̄) = x`.
pub fn h_rali_witness(alpha: &Hom, pm: &PointMorphism, budget: &Budget) -> Result<Vec<(Element, Element)>> {
    for (p, which) in [(&pm.source, "source"), (&pm.target, "target")] {
        match is_rali(p, OrderReading::Literal, budget)? {
            Verdict::Yes => {}
            Verdict::No(w) => {
                return Err(Error::Precondition(format!("{} point is not rali (at {})", which, w.generator)))
            }
            Verdict::Unknown => return Err(exhausted(budget)),
        }
    }
    let (back, _front, h) = h_slice_map(alpha, &pm.slice(), budget)?;
    match is_iso(&h, budget)? {
        Verdict::Yes => {}
        Verdict::No(_) => return Err(Error::Precondition("H(γ) is not an isomorphism".into())),
        Verdict::Unknown => return Err(exhausted(budget)),
    }
    let h_inv = inverse(&h)?;
    let (f, s) = (&pm.target.f, &pm.target.s);
    let t = &pm.source.s;
    let xg = pm.target.total().group();
    let zg = pm.source.total().group();
    let a_zero = alpha.dom().group().zero();
    let mut out = Vec::new();
    for x in pm.target.total().generators(budget)? {
        let fx = f.apply(&x)?;
        let rest = xg.sub(&x, &s.apply(&fx)?)?;
        let pulled = h_inv.apply(&rest.pair(&a_zero))?;
        let z = zg.add(&back.pi1.apply(&pulled)?, &t.apply(&fx)?)?;
        if pm.gamma.apply(&z)? != x {
            return Err(Error::Inconsistent(format!("γ({}) differs from {}", z, x)));
        }
        if !pm.source.total().is_positive(&z, budget)? {
            return Err(Error::Inconsistent(format!("{} is not positive", z)));
        }
        out.push((x, z));
    }
    Ok(out)
}

/// Why a pair fails to be jointly extremally epimorphic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JointFailure {
    /// A coordinate generator outside the subgroup spanned by both images.
    Subgroup(Element),
    /// A generator of `P_X` outside the submonoid generated by the images
    /// of both domain cones.
    Cone(Element),
}

/// Decides whether `(p, q)` is jointly extremally epimorphic: the images
/// must generate `X` as a group and `p(P_W) ∪ q(P_V)` must generate `P_X`
/// as a monoid.
pub fn jointly_extremally_epi(p: &Hom, q: &Hom, budget: &Budget) -> Result<Verdict<JointFailure>> {
    if p.cod() != q.cod() {
        return Err(Error::GroupMismatch("the pair needs a common codomain".into()));
    }
    require_monotone(p, "first map", budget)?;
    require_monotone(q, "second map", budget)?;
    let x = p.cod();
    let xg = x.group();
    let mut cols = Vec::new();
    for h in [p, q] {
        for j in 0..h.dom().group().rank() {
            cols.push(h.apply(&h.dom().group().unit(j))?);
        }
    }
    let sub = xg.subgroup(&cols)?;
    for i in 0..xg.rank() {
        let e = xg.unit(i);
        if sub.coords_of(&e)?.is_none() {
            return Ok(Verdict::No(JointFailure::Subgroup(e)));
        }
    }
    lift((|| {
        let mut pushed = Vec::new();
        for h in [p, q] {
            for g in h.dom().generators(budget)? {
                pushed.push(h.apply(&g)?);
            }
        }
        let image = Cone::generated(xg, pushed)?;
        for g in x.generators(budget)? {
            if !image.contains(&g, budget)? {
                return Ok(Verdict::No(JointFailure::Cone(g)));
            }
        }
        Ok(Verdict::Yes)
    })())
}

/// Two split sequences over `0/f` and `0/f'` connected by `β` on the total
/// objects and `γ` on the bases; `α` is induced on the kernels.
#[derive(Debug, Clone)]
pub struct SsflDiagram {
    pub top: Point,
    pub bottom: Point,
    pub beta: Hom,
    pub gamma: Hom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsflOutcome {
    pub alpha_iso: bool,
    pub beta_iso: bool,
    pub gamma_iso: bool,
}

impl SsflOutcome {
    pub fn consistent(&self) -> bool {
        !(self.alpha_iso && self.gamma_iso) || self.beta_iso
    }
}

/// The lax Split Short Five Lemma on one diagram, with kernels taken as
/// vertical precommas `0/f`.
pub fn ssfl_check(d: &SsflDiagram, budget: &Budget) -> Result<SsflOutcome> {
    let (f, s) = (&d.top.f, &d.top.s);
    let (f2, s2) = (&d.bottom.f, &d.bottom.s);
    if d.beta.dom() != f.dom() || d.beta.cod() != f2.dom() || d.gamma.dom() != f.cod() || d.gamma.cod() != f2.cod() {
        return Err(Error::GroupMismatch("diagram maps do not match the points".into()));
    }
    if !compose(f2, &d.beta)?.same_map(&compose(&d.gamma, f)?) {
        return Err(Error::Precondition("f'β differs from γf".into()));
    }
    if !compose(&d.beta, s)?.same_map(&compose(s2, &d.gamma)?) {
        return Err(Error::Precondition("βs differs from s'γ".into()));
    }
    require_monotone(&d.beta, "β", budget)?;
    require_monotone(&d.gamma, "γ", budget)?;
    let k1 = vertical_kernel(f, budget)?;
    let k2 = vertical_kernel(f2, budget)?;
    // 0 × X has the same coordinates as X, so α has β's matrix
    let alpha = Hom::new(&k1.object, &k2.object, d.beta.matrix().clone())?;
    require_monotone(&alpha, "α", budget)?;
    Ok(SsflOutcome {
        alpha_iso: verdict_bool(is_iso(&alpha, budget)?, budget)?,
        beta_iso: verdict_bool(is_iso(&d.beta, budget)?, budget)?,
        gamma_iso: verdict_bool(is_iso(&d.gamma, budget)?, budget)?,
    })
}

/// The same diagram judged with ordinary kernels (the cone of `X`
/// restricted to `ker f`), which is where preordered groups fail the
/// classical lemma. Returns `(kernel map iso, γ iso, β iso)`.
pub fn classical_ssfl(d: &SsflDiagram, budget: &Budget) -> Result<SsflOutcome> {
    let k1 = d.top.f.kernel_subgroup()?;
    let k2 = d.bottom.f.kernel_subgroup()?;
    let c1 = d.top.total().cone().preimage(&k1.group, &k1.embed)?;
    let c2 = d.bottom.total().cone().preimage(&k2.group, &k2.embed)?;
    let (p1, p2) = (Poag::new("ker f", c1), Poag::new("ker f'", c2));
    let mut cols = Vec::new();
    for j in 0..k1.group.rank() {
        let x = k1.embed_element(&k1.group.unit(j))?;
        let y = d.beta.apply(&x)?;
        let c = k2
            .coords_of(&y)?
            .ok_or_else(|| Error::Inconsistent("β does not preserve kernels".into()))?;
        cols.push(c.into_coords());
    }
    let alpha = Hom::new(&p1, &p2, IntMatrix::from_columns(k2.group.rank(), &cols))?;
    Ok(SsflOutcome {
        alpha_iso: verdict_bool(is_iso(&alpha, budget)?, budget)?,
        beta_iso: verdict_bool(is_iso(&d.beta, budget)?, budget)?,
        gamma_iso: verdict_bool(is_iso(&d.gamma, budget)?, budget)?,
    })
}

/// Whether `V_α` sends the rali point `p` to a rali point (literal order).
/// Used only to probe the question empirically; no claim is derived.
pub fn v_preserves_rali(alpha: &Hom, p: &Point, budget: &Budget) -> Result<Verdict<LeqWitness>> {
    match is_rali(p, OrderReading::Literal, budget)? {
        Verdict::Yes => {}
        _ => return Err(Error::Precondition("the input point is not rali".into())),
    }
    let v = v_apply(alpha, p, budget)?;
    is_rali(&v.point, OrderReading::Literal, budget)
}

/// Checks `V_α(β∘γ) = V_α(β)∘V_α(γ)` on composable slice morphisms.
pub fn v_functorial_on(alpha: &Hom, first: &SliceMorphism, second: &SliceMorphism, budget: &Budget) -> Result<bool> {
    let composite = SliceMorphism::new(
        first.source.clone(),
        second.target.clone(),
        compose(&second.gamma, &first.gamma)?,
        budget,
    )?;
    let (_, _, v1) = v_slice_map(alpha, first, budget)?;
    let (_, _, v2) = v_slice_map(alpha, second, budget)?;
    let (_, _, v12) = v_slice_map(alpha, &composite, budget)?;
    Ok(compose(&v2, &v1)?.same_map(&v12))
}

/// `hom_leq` re-exported for callers working with points.
pub fn section_leq(p: &Point, budget: &Budget) -> Result<Verdict<LeqWitness>> {
    hom_leq(&p.idempotent()?, &identity(p.total()), budget)
}

pub fn iso_failure_text(f: &IsoFailure) -> String {
    match f {
        IsoFailure::NotInjective(x) => format!("not injective: {} in the kernel", x),
        IsoFailure::NotSurjective(y) => format!("not surjective: {} missed", y),
        IsoFailure::ConeNotOnto(y) => format!("cone not onto: {} not reached", y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poag::{product_poag, AbGroup};

    fn b() -> Budget {
        Budget::default()
    }

    fn n() -> Poag {
        Poag::integers()
    }

    fn order_precomma() -> PrecommaResult {
        let id = identity(&n());
        precomma(&id, &id, &b()).unwrap()
    }

    #[test]
    fn rali_reading_discrepancy() {
        let pc = order_precomma();
        let p = Point::new(pc.pi2.clone(), pc.section2.clone(), &b()).unwrap();
        let lit = is_rali(&p, OrderReading::Literal, &b()).unwrap();
        assert_eq!(lit.witness().unwrap().difference, pc.object.elem(&[1, 0]).unwrap());
        assert_eq!(lit.witness().unwrap().generator, pc.object.elem(&[1, 1]).unwrap());
        assert!(is_rali(&p, OrderReading::Ambient, &b()).unwrap().is_yes());
    }

    #[test]
    fn identity_point_is_both() {
        let p = Point::new(identity(&n()), identity(&n()), &b()).unwrap();
        assert!(is_rali(&p, OrderReading::Literal, &b()).unwrap().is_yes());
        assert!(is_lali(&p, OrderReading::Literal, &b()).unwrap().is_yes());
    }

    #[test]
    fn indiscrete_base_makes_projection_rali() {
        let zz = Poag::from_i64("ZZ", &[0], &[&[1], &[-1]]).unwrap();
        let f = Hom::from_i64(&n(), &zz, &[&[1]]).unwrap();
        let pc = precomma(&f, &f, &b()).unwrap();
        let p = Point::new(pc.pi2.clone(), pc.section2.clone(), &b()).unwrap();
        assert!(is_rali(&p, OrderReading::Literal, &b()).unwrap().is_yes());
    }

    #[test]
    fn point_constructor_checks_splitting() {
        let n2 = product_poag(&n(), &n());
        let plus = Hom::from_i64(&n2, &n(), &[&[1, 1]]).unwrap();
        let bad = Hom::from_i64(&n(), &n2, &[&[1], &[1]]).unwrap();
        assert!(Point::new(plus.clone(), bad, &b()).is_err());
        let good = Hom::from_i64(&n(), &n2, &[&[0], &[1]]).unwrap();
        assert!(Point::new(plus, good, &b()).is_ok());
    }

    #[test]
    fn base_change_along_identity_and_zero() {
        let n2 = product_poag(&n(), &n());
        let plus = Hom::from_i64(&n2, &n(), &[&[1, 1]]).unwrap();
        let s = Hom::from_i64(&n(), &n2, &[&[0], &[1]]).unwrap();
        let p = Point::new(plus, s, &b()).unwrap();
        let v = v_apply(&identity(&n()), &p, &b()).unwrap();
        assert_eq!(v.point.total().group(), &AbGroup::free(3));
        let zero = Hom::zero(&Poag::zero(), &n());
        let vk = v_apply(&zero, &p, &b()).unwrap();
        for x in vk.point.total().group().bounded_elements(2) {
            assert_eq!(vk.point.total().is_positive(&x, &b()).unwrap(), n2.is_positive(&x, &b()).unwrap());
        }
        let hk = h_apply(&zero, &p, &b()).unwrap();
        assert!(hk.point.total().generators(&b()).unwrap().is_empty());
    }

    #[test]
    fn identity_base_change_point_is_lali() {
        let y = n();
        let p = Point::new(identity(&y), identity(&y), &b()).unwrap();
        let h = h_apply(&identity(&y), &p, &b()).unwrap();
        assert!(is_lali(&h.point, OrderReading::Ambient, &b()).unwrap().is_yes());
        let lit = is_lali(&h.point, OrderReading::Literal, &b()).unwrap();
        assert_eq!(lit.witness().unwrap().generator, h.point.total().elem(&[0, 1]).unwrap());
    }

    #[test]
    fn conservative_on_identity() {
        let y = n();
        let x = product_poag(&n(), &n());
        let f = Hom::from_i64(&x, &y, &[&[1, 1]]).unwrap();
        let sm = SliceMorphism::new(SliceObject { f: f.clone() }, SliceObject { f }, identity(&x), &b()).unwrap();
        let r = v_conservative_instance(&identity(&y), &sm, &b()).unwrap();
        assert!(r.v_iso && r.gamma_iso && r.inverse_verified);
        assert!(r.reconstructed_inverse.unwrap().same_map(&identity(&x)));
    }

    #[test]
    fn conservative_refinement_is_not_iso() {
        // γ = 1: (ℤ², 0×ℕ) -> (ℤ², ℕ×ℕ) over (ℤ, ℕ) by +
        let y = n();
        let x = product_poag(&n(), &n());
        let z = Poag::from_i64("Z", &[0, 0], &[&[0, 1]]).unwrap();
        let f = Hom::from_i64(&x, &y, &[&[1, 1]]).unwrap();
        let g = Hom::from_i64(&z, &y, &[&[1, 1]]).unwrap();
        let gamma = Hom::from_i64(&z, &x, &[&[1, 0], &[0, 1]]).unwrap();
        let sm = SliceMorphism::new(SliceObject { f: g }, SliceObject { f }, gamma, &b()).unwrap();
        let r = v_conservative_instance(&identity(&y), &sm, &b()).unwrap();
        assert!(!r.v_iso && !r.gamma_iso && r.consistent());
    }

    #[test]
    fn jointly_extremal_examples() {
        let pc = order_precomma();
        let p = Point::new(identity(&n()), identity(&n()), &b()).unwrap();
        let v = v_apply(&identity(&n()), &p, &b()).unwrap();
        assert!(jointly_extremally_epi(&v.precomma.pi2, &p.s, &b()).unwrap().is_yes());
        let x = product_poag(&n(), &n());
        let z = Hom::zero(&n(), &x);
        assert!(jointly_extremally_epi(&z, &z, &b()).unwrap().is_no());
        // jointly surjective, but (1, 0) is not reached positively
        let zz = Poag::from_i64("D", &[0], &[]).unwrap();
        let i1 = Hom::from_i64(&zz, &x, &[&[1], &[0]]).unwrap();
        let i2 = Hom::from_i64(&n(), &x, &[&[0], &[1]]).unwrap();
        assert_eq!(
            jointly_extremally_epi(&i1, &i2, &b()).unwrap(),
            Verdict::No(JointFailure::Cone(x.elem(&[1, 0]).unwrap()))
        );
        let _ = pc;
    }

    #[test]
    fn ssfl_lax_and_classical() {
        let y = n();
        let x = product_poag(&n(), &n());
        let x2 = Poag::from_i64("X'", &[0, 0], &[&[1, 0], &[0, 1], &[-1, 1]]).unwrap();
        let f = Hom::from_i64(&x, &y, &[&[0, 1]]).unwrap();
        let s = Hom::from_i64(&y, &x, &[&[0], &[1]]).unwrap();
        let f2 = f.retarget(&x2, &y).unwrap();
        let s2 = s.retarget(&y, &x2).unwrap();
        let d = SsflDiagram {
            top: Point::new(f, s, &b()).unwrap(),
            bottom: Point::new(f2, s2, &b()).unwrap(),
            beta: Hom::from_i64(&x, &x2, &[&[1, 0], &[0, 1]]).unwrap(),
            gamma: identity(&y),
        };
        let lax = ssfl_check(&d, &b()).unwrap();
        assert!(lax.consistent());
        assert!(!lax.alpha_iso);
        let classical = classical_ssfl(&d, &b()).unwrap();
        assert!(classical.alpha_iso && classical.gamma_iso && !classical.beta_iso);
    }

    #[test]
    fn h_rali_witness_on_identity() {
        let y = n();
        let p = Point::new(identity(&y), identity(&y), &b()).unwrap();
        let pm = PointMorphism::new(p.clone(), p, identity(&y), &b()).unwrap();
        let w = h_rali_witness(&identity(&y), &pm, &b()).unwrap();
        assert_eq!(w, vec![(y.elem(&[1]).unwrap(), y.elem(&[1]).unwrap())]);
    }
}
