//! The two orthogonal factorization systems: (bijective and cone-generating,
//! fully faithful) and (surjective and cone-generating, monic and fully
//! faithful), with explicit factorizations, diagonal fill-ins and the
//! pullback-stability probe.

use std::fmt;

use num_bigint::BigInt;

use crate::constructions::{pullback, PullbackResult, Square};
use crate::error::{lift, Budget, Error, ResourceLimit, Result, Verdict};
use crate::homs::{compose, is_epi, is_fully_faithful, is_mono, is_monotone, reflected_cone, Hom};
use crate::intlin::IntMatrix;
use crate::poag::{subgroup_rows, Cone, ConeSystem, Element, Poag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorizationSystem {
    /// Bijective on the left, fully faithful on the right.
    EM,
    /// Surjective on the left, monic and fully faithful on the right.
    EPrimeMPrime,
}

impl fmt::Display for FactorizationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorizationSystem::EM => "(E,M)",
            FactorizationSystem::EPrimeMPrime => "(E',M')",
        })
    }
}

/// Why a morphism misses a left class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeftFailure {
    NotInjective(Element),
    NotSurjective(Element),
    /// A generator of the codomain cone outside `h(⟨P_A⟩)`.
    ConeNotGenerated(Element),
}

/// Why a morphism misses a right class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RightFailure {
    /// `f(d) ≥ 0` while `d` is a difference of positives that is not positive.
    NotFullyFaithful(Element),
    NotInjective(Element),
}

fn require_monotone(f: &Hom, budget: &Budget) -> Result<()> {
    match is_monotone(f, budget)? {
        Verdict::No(x) => Err(Error::NotMonotone(format!("{} at {}", f, x))),
        _ => Ok(()),
    }
}

pub fn in_m(f: &Hom, budget: &Budget) -> Result<Verdict<RightFailure>> {
    require_monotone(f, budget)?;
    Ok(is_fully_faithful(f, budget)?.map_witness(RightFailure::NotFullyFaithful))
}

pub fn in_m_prime(f: &Hom, budget: &Budget) -> Result<Verdict<RightFailure>> {
    let ff = in_m(f, budget)?;
    let mono = is_mono(f)?.map_witness(RightFailure::NotInjective);
    Ok(mono.and(ff))
}

/// Every generator of `P_B` lies in the subgroup `h(⟨P_A⟩)`.
fn cone_generated(h: &Hom, budget: &Budget) -> Result<Verdict<LeftFailure>> {
    lift((|| {
        let images: Vec<Element> = h
            .dom()
            .generators(budget)?
            .iter()
            .map(|a| h.apply(a))
            .collect::<Result<_>>()?;
        let sub = h.cod().group().subgroup(&images)?;
        for b in h.cod().generators(budget)? {
            if sub.coords_of(&b)?.is_none() {
                return Ok(Verdict::No(LeftFailure::ConeNotGenerated(b)));
            }
        }
        Ok(Verdict::Yes)
    })())
}

pub fn in_e(h: &Hom, budget: &Budget) -> Result<Verdict<LeftFailure>> {
    require_monotone(h, budget)?;
    let bij = is_mono(h)?
        .map_witness(LeftFailure::NotInjective)
        .and(is_epi(h)?.map_witness(LeftFailure::NotSurjective));
    if bij.is_no() {
        return Ok(bij);
    }
    Ok(bij.and(cone_generated(h, budget)?))
}

pub fn in_e_prime(h: &Hom, budget: &Budget) -> Result<Verdict<LeftFailure>> {
    require_monotone(h, budget)?;
    let surj = is_epi(h)?.map_witness(LeftFailure::NotSurjective);
    if surj.is_no() {
        return Ok(surj);
    }
    Ok(surj.and(cone_generated(h, budget)?))
}

/// `g = m ∘ e` through `middle`, with `e` in the left class and `m` in the
/// right class of `system`.
#[derive(Debug, Clone)]
pub struct FactorizationOutcome {
    pub e: Hom,
    pub m: Hom,
    pub middle: Poag,
    pub system: FactorizationSystem,
}

impl FactorizationOutcome {
    /// Recomputes `m∘e = g` and both class memberships.
    pub fn certify(&self, g: &Hom, budget: &Budget) -> Result<Verdict<String>> {
        if !compose(&self.m, &self.e)?.same_map(g) {
            return Ok(Verdict::No("m∘e differs from g".into()));
        }
        let (left, right) = match self.system {
            FactorizationSystem::EM => (in_e(&self.e, budget)?, in_m(&self.m, budget)?),
            FactorizationSystem::EPrimeMPrime => (in_e_prime(&self.e, budget)?, in_m_prime(&self.m, budget)?),
        };
        Ok(left
            .map_witness(|w| format!("left factor fails: {:?}", w))
            .and(right.map_witness(|w| format!("right factor fails: {:?}", w))))
    }
}

/// `Z -> (Z, ⟨P_Z⟩ ∩ g⁻¹(P_Y)) -> Y`.
pub fn factor_e_m(g: &Hom, budget: &Budget) -> Result<FactorizationOutcome> {
    require_monotone(g, budget)?;
    let z = g.dom();
    let middle = Poag::new(format!("({}, P)", z.name()), reflected_cone(g, budget)?);
    let n = z.group().rank();
    let e = Hom::new(z, &middle, IntMatrix::identity(n))?;
    let m = Hom::new(&middle, g.cod(), g.matrix().clone())?;
    Ok(FactorizationOutcome { e, m, middle, system: FactorizationSystem::EM })
}

/// `Z -> (g(Z), P_Y ∩ g(⟨P_Z⟩)) -> Y`, with the image re-presented in its
/// own coordinates and `m` the inclusion.
pub fn factor_e_prime_m_prime(g: &Hom, budget: &Budget) -> Result<FactorizationOutcome> {
    require_monotone(g, budget)?;
    let (z, y) = (g.dom(), g.cod());
    let img = g.image_subgroup()?;
    let images = z.generators(budget)?.iter().map(|p| g.apply(p)).collect::<Result<Vec<_>>>()?;
    let ys = y.cone().system();
    let (lb, mut row_moduli) = subgroup_rows(y.group(), &images);
    row_moduli.extend(ys.row_moduli.iter().cloned());
    let system = ConeSystem {
        a: IntMatrix::zeros(lb.rows(), ys.a.cols()).vstack(&ys.a),
        b: lb.mul(&img.embed).vstack(&ys.b.mul(&img.embed)),
        row_moduli,
    };
    let middle = Poag::new(format!("({}(Z), P')", y.name()), Cone::from_system(&img.group, system)?);
    let cols: Vec<Vec<BigInt>> = (0..z.group().rank())
        .map(|j| {
            let gz = g.apply(&z.group().unit(j))?;
            img.coords_of(&gz)?
                .map(Element::into_coords)
                .ok_or_else(|| Error::Inconsistent("image misses g(z)".into()))
        })
        .collect::<Result<_>>()?;
    let e = Hom::new(z, &middle, IntMatrix::from_columns(img.group.rank(), &cols))?;
    let m = Hom::new(&middle, y, img.embed.clone())?;
    Ok(FactorizationOutcome { e, m, middle, system: FactorizationSystem::EPrimeMPrime })
}

/// The diagonal of an orthogonality square, with the system that licensed it.
#[derive(Debug, Clone)]
pub struct Diagonal {
    pub d: Hom,
    pub system: FactorizationSystem,
}

/// Class membership, with an unknown answer turned back into the budget
/// error that caused it.
fn member<W>(v: Verdict<W>, budget: &Budget) -> Result<bool> {
    match v {
        Verdict::Unknown => Err(Error::ResourceLimit(ResourceLimit { limit: budget.limit() })),
        v => Ok(v.is_yes()),
    }
}

/// For a commuting square `left = h: A -> B`, `top = u: A -> X`,
/// `right = f: X -> Y`, `bottom = v: B -> Y` with `h` in a left class and
/// `f` in the matching right class, the unique `d: B -> X` with `dh = u`
/// and `fd = v`.
pub fn fill_diagonal(sq: &Square, budget: &Budget) -> Result<Diagonal> {
    let (h, u, f, v) = (&sq.left, &sq.top, &sq.right, &sq.bottom);
    if !sq.commutes() {
        return Err(Error::Inconsistent("square does not commute".into()));
    }
    let system = if member(in_e_prime(h, budget)?, budget)? && member(in_m_prime(f, budget)?, budget)? {
        FactorizationSystem::EPrimeMPrime
    } else if member(in_e(h, budget)?, budget)? && member(in_m(f, budget)?, budget)? {
        FactorizationSystem::EM
    } else {
        return Err(Error::Precondition("the square is not an orthogonality square of either system".into()));
    };
    let bg = h.cod().group();
    let cols: Vec<Vec<BigInt>> = (0..bg.rank())
        .map(|j| {
            let a = h
                .solve(&bg.unit(j))?
                .ok_or_else(|| Error::Inconsistent("left map is not surjective".into()))?;
            Ok(u.apply(&a)?.into_coords())
        })
        .collect::<Result<_>>()?;
    let d = Hom::new(h.cod(), u.cod(), IntMatrix::from_columns(u.cod().group().rank(), &cols))?;
    if !compose(&d, h)?.same_map(u) {
        return Err(Error::Inconsistent("d∘h differs from u".into()));
    }
    if !compose(f, &d)?.same_map(v) {
        return Err(Error::Inconsistent("f∘d differs from v".into()));
    }
    match is_monotone(&d, budget)? {
        Verdict::Yes => {}
        Verdict::No(b) => return Err(Error::Inconsistent(format!("diagonal is not monotone at {}", b))),
        Verdict::Unknown => return Err(Error::ResourceLimit(ResourceLimit { limit: budget.limit() })),
    }
    // h is surjective, so any two diagonals agree on every b = h(a)
    Ok(Diagonal { d, system })
}

/// Membership of a left-class morphism and of its pullback.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub pullback: PullbackResult,
    /// The pulled-back copy of `h`, `P -> dom(along)`.
    pub pulled: Hom,
    pub original_e: Verdict<LeftFailure>,
    pub original_e_prime: Verdict<LeftFailure>,
    pub pulled_e: Verdict<LeftFailure>,
    pub pulled_e_prime: Verdict<LeftFailure>,
}

impl StabilityReport {
    /// Whether every class the original belongs to also holds the pullback.
    pub fn preserved(&self) -> bool {
        (!self.original_e.is_yes() || self.pulled_e.is_yes())
            && (!self.original_e_prime.is_yes() || self.pulled_e_prime.is_yes())
    }
}

/// Pulls `h: A -> B` back along `along: K -> B` and re-tests membership.
pub fn stability_probe(h: &Hom, along: &Hom, budget: &Budget) -> Result<StabilityReport> {
    let original_e = in_e(h, budget)?;
    let original_e_prime = in_e_prime(h, budget)?;
    if !original_e.is_yes() && !original_e_prime.is_yes() {
        return Err(Error::Precondition(format!("{} is in neither left class", h)));
    }
    let pb = pullback(h, along)?;
    let pulled = pb.p2.clone();
    Ok(StabilityReport {
        pulled_e: in_e(&pulled, budget)?,
        pulled_e_prime: in_e_prime(&pulled, budget)?,
        pullback: pb,
        pulled,
        original_e,
        original_e_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::SquareKind;
    use crate::homs::identity;

    fn b() -> Budget {
        Budget::default()
    }

    fn zn() -> Poag {
        Poag::integers()
    }

    fn zz() -> Poag {
        Poag::from_i64("(Z,Z)", &[0], &[&[1], &[-1]]).unwrap()
    }

    fn z0() -> Poag {
        Poag::from_i64("(Z,0)", &[0], &[]).unwrap()
    }

    fn zneg() -> Poag {
        Poag::from_i64("(Z,-N)", &[0], &[&[-1]]).unwrap()
    }

    #[test]
    fn class_examples() {
        let up = Hom::from_i64(&zn(), &zz(), &[&[1]]).unwrap();
        assert!(in_e(&up, &b()).unwrap().is_yes());
        assert!(in_e_prime(&up, &b()).unwrap().is_yes());
        let down = Hom::from_i64(&z0(), &zneg(), &[&[1]]).unwrap();
        assert_eq!(
            in_e(&down, &b()).unwrap(),
            Verdict::No(LeftFailure::ConeNotGenerated(zneg().elem(&[-1]).unwrap()))
        );
        assert!(in_e_prime(&down, &b()).unwrap().is_no());
        let id = identity(&zn());
        assert!(in_e(&id, &b()).unwrap().is_yes() && in_m_prime(&id, &b()).unwrap().is_yes());
        let wrong = Hom::from_i64(&zz(), &zn(), &[&[1]]).unwrap();
        assert!(matches!(in_m(&wrong, &b()), Err(Error::NotMonotone(_))));
    }

    #[test]
    fn factorizations_of_the_order_collapse() {
        let g = Hom::from_i64(&zn(), &zz(), &[&[1]]).unwrap();
        let em = factor_e_m(&g, &b()).unwrap();
        assert!(em.certify(&g, &b()).unwrap().is_yes());
        assert!(em.middle.is_positive(&zn().elem(&[-4]).unwrap(), &b()).unwrap());
        let em2 = factor_e_prime_m_prime(&g, &b()).unwrap();
        assert!(em2.certify(&g, &b()).unwrap().is_yes());
        assert!(em2.middle.is_positive(&em2.middle.elem(&[-1]).unwrap(), &b()).unwrap());
    }

    #[test]
    fn doubling_factors_through_even_integers() {
        let g = Hom::from_i64(&zn(), &zn(), &[&[2]]).unwrap();
        let out = factor_e_prime_m_prime(&g, &b()).unwrap();
        assert!(out.certify(&g, &b()).unwrap().is_yes());
        assert_eq!(out.middle.group().rank(), 1);
        let gens = out.middle.generators(&b()).unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(out.m.apply(&gens[0]).unwrap().coords()[0].magnitude(), &2u32.into());
    }

    #[test]
    fn torsion_image() {
        let z4 = Poag::from_i64("Z4", &[4], &[&[1]]).unwrap();
        let z2 = Poag::from_i64("Z2+Z4", &[2, 4], &[&[0, 2]]).unwrap();
        let g = Hom::from_i64(&z4, &z2, &[&[0], &[2]]).unwrap();
        for out in [factor_e_m(&g, &b()).unwrap(), factor_e_prime_m_prime(&g, &b()).unwrap()] {
            assert!(out.certify(&g, &b()).unwrap().is_yes());
        }
    }

    #[test]
    fn fill_reflexive_square() {
        let g = Hom::from_i64(&zn(), &zz(), &[&[3]]).unwrap();
        for out in [factor_e_m(&g, &b()).unwrap(), factor_e_prime_m_prime(&g, &b()).unwrap()] {
            let sq = Square::new(
                out.e.clone(),
                out.e.clone(),
                out.m.clone(),
                out.m.clone(),
                SquareKind::Strict,
                &b(),
            )
            .unwrap();
            let d = fill_diagonal(&sq, &b()).unwrap();
            assert!(d.d.same_map(&identity(&out.middle)));
        }
    }

    #[test]
    fn fill_rejects_non_orthogonal() {
        let h = Hom::from_i64(&z0(), &zneg(), &[&[1]]).unwrap();
        let sq = Square::new(identity(&z0()), h.clone(), h.clone(), identity(&zneg()), SquareKind::Strict, &b()).unwrap();
        assert!(matches!(fill_diagonal(&sq, &b()), Err(Error::Precondition(_))));
    }

    #[test]
    fn non_stability() {
        let h = Hom::from_i64(&zn(), &zz(), &[&[1]]).unwrap();
        let along = Hom::from_i64(&zneg(), &zz(), &[&[1]]).unwrap();
        let r = stability_probe(&h, &along, &b()).unwrap();
        assert!(r.original_e.is_yes() && r.original_e_prime.is_yes());
        assert!(r.pulled_e.is_no() && r.pulled_e_prime.is_no());
        assert!(!r.preserved());
        assert!(r.pullback.object.generators(&b()).unwrap().is_empty());
        let r = stability_probe(&h, &identity(&zz()), &b()).unwrap();
        assert!(r.preserved());
    }
}
