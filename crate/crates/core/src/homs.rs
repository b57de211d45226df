//! Morphisms between preordered abelian groups and the hom-preorder.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{lift, Budget, Error, Result, Verdict};
use crate::intlin::{smith_normal_form, solve_z, IntMatrix};
use crate::poag::{reduce_matrix_rows, subgroup_rows, AbGroup, Cone, ConeSystem, Element, Poag, Subgroup};

/// A group homomorphism between the carriers of two preordered groups.
/// Monotonicity is a property, not an invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hom {
    dom: Poag,
    cod: Poag,
    matrix: IntMatrix,
}

/// Why `f ≼ g` fails: a generator `p` of the domain cone with
/// `g(p) - f(p)` outside the codomain cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeqWitness {
    pub generator: Element,
    pub difference: Element,
}

impl Hom {
    /// Validates shape and well-definedness on torsion coordinates; torsion
    /// rows are reduced.
    pub fn new(dom: &Poag, cod: &Poag, matrix: IntMatrix) -> Result<Self> {
        let (dg, cg) = (dom.group(), cod.group());
        if matrix.rows() != cg.rank() || matrix.cols() != dg.rank() {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} but the map {} -> {} needs {}x{}",
                matrix.rows(),
                matrix.cols(),
                dg,
                cg,
                cg.rank(),
                dg.rank()
            )));
        }
        let matrix = reduce_matrix_rows(&matrix, cg);
        for (j, m) in dg.moduli().iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            for (i, q) in cg.moduli().iter().enumerate() {
                let entry = &matrix[(i, j)];
                let ok = if q.is_zero() { entry.is_zero() } else { (m * entry).is_multiple_of(q) };
                if !ok {
                    return Err(Error::InvalidHom(format!(
                        "entry ({}, {}) = {} is not compatible with Z_{} -> {}",
                        i,
                        j,
                        entry,
                        m,
                        if q.is_zero() { "Z".to_string() } else { format!("Z_{}", q) }
                    )));
                }
            }
        }
        Ok(Hom { dom: dom.clone(), cod: cod.clone(), matrix })
    }

    pub fn from_i64(dom: &Poag, cod: &Poag, rows: &[&[i64]]) -> Result<Self> {
        let m = if rows.is_empty() {
            IntMatrix::zeros(0, dom.group().rank())
        } else {
            IntMatrix::from_i64(rows)
        };
        Self::new(dom, cod, m)
    }

    pub fn identity(x: &Poag) -> Self {
        Hom { dom: x.clone(), cod: x.clone(), matrix: IntMatrix::identity(x.group().rank()) }
    }

    pub fn zero(dom: &Poag, cod: &Poag) -> Self {
        Hom {
            dom: dom.clone(),
            cod: cod.clone(),
            matrix: IntMatrix::zeros(cod.group().rank(), dom.group().rank()),
        }
    }

    pub fn dom(&self) -> &Poag {
        &self.dom
    }

    pub fn cod(&self) -> &Poag {
        &self.cod
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Same matrix, reinterpreted between other objects on the same groups.
    pub fn retarget(&self, dom: &Poag, cod: &Poag) -> Result<Hom> {
        if dom.group() != self.dom.group() || cod.group() != self.cod.group() {
            return Err(Error::GroupMismatch("retarget must keep the carriers".into()));
        }
        Ok(Hom { dom: dom.clone(), cod: cod.clone(), matrix: self.matrix.clone() })
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if !self.dom.group().owns(x) {
            return Err(Error::GroupMismatch(format!("{} is not in the domain {}", x, self.dom)));
        }
        self.cod.group().element(self.matrix.mul_vec(x.coords()))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Whether both maps agree as functions (same carriers assumed).
    pub fn same_map(&self, other: &Hom) -> bool {
        self.dom.group() == other.dom.group()
            && self.cod.group() == other.cod.group()
            && self.matrix == other.matrix
    }

    /// `f - g` on the underlying groups.
    pub fn difference(&self, other: &Hom) -> Result<Hom> {
        check_parallel(self, other)?;
        Hom::new(&self.dom, &self.cod, self.matrix.sub(&other.matrix))
    }

    pub fn image_subgroup(&self) -> Result<Subgroup> {
        let cols: Vec<Element> = (0..self.dom.group().rank())
            .map(|j| self.apply(&self.dom.group().unit(j)))
            .collect::<Result<_>>()?;
        self.cod.group().subgroup(&cols)
    }

    /// The kernel of the underlying homomorphism, as a subgroup of the domain.
    pub fn kernel_subgroup(&self) -> Result<Subgroup> {
        let dg = self.dom.group();
        let k = dg.rank();
        let full = self.matrix.hstack(&self.cod.group().relation_matrix());
        let snf = smith_normal_form(&full);
        let gens: Vec<Element> = (snf.rank()..full.cols())
            .map(|j| dg.element(snf.v.column(j)[..k].to_vec()))
            .collect::<Result<_>>()?;
        let gens: Vec<Element> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        dg.subgroup(&gens)
    }

    /// A preimage of `y`, if any.
    pub fn solve(&self, y: &Element) -> Result<Option<Element>> {
        if !self.cod.group().owns(y) {
            return Err(Error::GroupMismatch(format!("{} is not in the codomain", y)));
        }
        let k = self.dom.group().rank();
        let full = self.matrix.hstack(&self.cod.group().relation_matrix());
        match solve_z(&full, y.coords())? {
            None => Ok(None),
            Some(s) => Ok(Some(self.dom.group().element(s.particular[..k].to_vec())?)),
        }
    }
}

impl fmt::Display for Hom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {}", self.dom.name(), self.cod.name(), self.matrix)
    }
}

fn check_parallel(f: &Hom, g: &Hom) -> Result<()> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::GroupMismatch(format!(
            "maps are not parallel: {} -> {} vs {} -> {}",
            f.dom.name(),
            f.cod.name(),
            g.dom.name(),
            g.cod.name()
        )));
    }
    Ok(())
}

/// `g ∘ f`
pub fn compose(g: &Hom, f: &Hom) -> Result<Hom> {
    if f.cod != g.dom {
        return Err(Error::GroupMismatch(format!(
            "cannot compose: codomain {} differs from domain {}",
            f.cod.name(),
            g.dom.name()
        )));
    }
    Ok(Hom {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        matrix: reduce_matrix_rows(&g.matrix.mul(&f.matrix), g.cod.group()),
    })
}

pub fn identity(x: &Poag) -> Hom {
    Hom::identity(x)
}

/// Witness on failure: a domain-cone generator mapped outside the
/// codomain cone.
pub fn is_monotone(f: &Hom, budget: &Budget) -> Result<Verdict<Element>> {
    lift(monotone_inner(f, budget))
}

fn monotone_inner(f: &Hom, budget: &Budget) -> Result<Verdict<Element>> {
    for p in f.dom.generators(budget)? {
        if !f.cod.is_positive(&f.apply(&p)?, budget)? {
            return Ok(Verdict::No(p));
        }
    }
    Ok(Verdict::Yes)
}

/// `f ≼ g`: `g(p) - f(p) ∈ P_cod` for every generator `p` of `P_dom`.
pub fn hom_leq(f: &Hom, g: &Hom, budget: &Budget) -> Result<Verdict<LeqWitness>> {
    check_parallel(f, g)?;
    hom_leq_in(f, g, f.cod.cone(), budget)
}

/// `f ≼ g` with the comparison made in `cone` on the codomain's group.
pub fn hom_leq_in(f: &Hom, g: &Hom, cone: &Cone, budget: &Budget) -> Result<Verdict<LeqWitness>> {
    if cone.group() != f.cod.group() || f.dom.group() != g.dom.group() || f.cod.group() != g.cod.group() {
        return Err(Error::GroupMismatch("comparison cone on a different group".into()));
    }
    lift((|| {
        for p in f.dom.generators(budget)? {
            let d = f.cod.group().sub(&g.apply(&p)?, &f.apply(&p)?)?;
            if !cone.contains(&d, budget)? {
                return Ok(Verdict::No(LeqWitness { generator: p, difference: d }));
            }
        }
        Ok(Verdict::Yes)
    })())
}

/// Injectivity; the witness is a nonzero kernel element.
pub fn is_mono(f: &Hom) -> Result<Verdict<Element>> {
    let ker = f.kernel_subgroup()?;
    for j in 0..ker.group.rank() {
        let x = ker.embed_element(&ker.group.unit(j))?;
        if !x.is_zero() {
            return Ok(Verdict::No(x));
        }
    }
    Ok(Verdict::Yes)
}

/// Surjectivity; the witness is a codomain unit vector outside the image.
pub fn is_epi(f: &Hom) -> Result<Verdict<Element>> {
    let cg = f.cod.group();
    for i in 0..cg.rank() {
        let e = cg.unit(i);
        if f.solve(&e)?.is_none() {
            return Ok(Verdict::No(e));
        }
    }
    Ok(Verdict::Yes)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoFailure {
    NotInjective(Element),
    NotSurjective(Element),
    /// A codomain-cone generator not reached from the domain cone.
    ConeNotOnto(Element),
}

pub fn is_iso(f: &Hom, budget: &Budget) -> Result<Verdict<IsoFailure>> {
    if let Verdict::No(x) = is_mono(f)? {
        return Ok(Verdict::No(IsoFailure::NotInjective(x)));
    }
    if let Verdict::No(y) = is_epi(f)? {
        return Ok(Verdict::No(IsoFailure::NotSurjective(y)));
    }
    lift((|| {
        let pushed: Vec<Element> =
            f.dom.generators(budget)?.iter().map(|p| f.apply(p)).collect::<Result<_>>()?;
        let image = Cone::generated(f.cod.group(), pushed)?;
        for q in f.cod.generators(budget)? {
            if !image.contains(&q, budget)? {
                return Ok(Verdict::No(IsoFailure::ConeNotOnto(q)));
            }
        }
        Ok(Verdict::Yes)
    })())
}

/// The inverse of a bijective homomorphism, as a map `cod -> dom`. It is a
/// morphism of preordered groups only when `f` is an iso.
pub fn inverse(f: &Hom) -> Result<Hom> {
    if !is_mono(f)?.is_yes() || !is_epi(f)?.is_yes() {
        return Err(Error::Precondition(format!("{} is not bijective", f)));
    }
    let cg = f.cod.group();
    let cols: Vec<Vec<BigInt>> = (0..cg.rank())
        .map(|i| {
            f.solve(&cg.unit(i))?
                .map(Element::into_coords)
                .ok_or_else(|| Error::Inconsistent("surjective map missed a unit".into()))
        })
        .collect::<Result<_>>()?;
    Hom::new(&f.cod, &f.dom, IntMatrix::from_columns(f.dom.group().rank(), &cols))
}

/// The cone `⟨P_X⟩_grp ∩ f⁻¹(P_Y)` on the domain's group.
pub fn reflected_cone(f: &Hom, budget: &Budget) -> Result<Cone> {
    let dg = f.dom.group();
    let gens = f.dom.generators(budget)?;
    let ys = f.cod.cone().system();
    let (lb, mut row_moduli) = subgroup_rows(dg, &gens);
    let a = IntMatrix::zeros(lb.rows(), ys.a.cols()).vstack(&ys.a);
    let b = lb.vstack(&ys.b.mul(f.matrix()));
    row_moduli.extend(ys.row_moduli.iter().cloned());
    Cone::from_system(dg, ConeSystem { a, b, row_moduli })
}

/// Decides full faithfulness: every generator of `⟨P_X⟩ ∩ f⁻¹(P_Y)` must
/// lie in `P_X`. A `No` carries a difference `d` with `f(d) ≥ 0`,
/// `d ∉ P_X`. When the Hilbert-basis computation runs out of budget, a
/// bounded search over small combinations is tried before giving up.
pub fn is_fully_faithful(f: &Hom, budget: &Budget) -> Result<Verdict<Element>> {
    if is_monotone(f, budget)?.is_no() {
        return Err(Error::NotMonotone(f.to_string()));
    }
    match ff_exact(f, budget) {
        Err(Error::ResourceLimit(_)) => ff_bounded_search(f, 3, budget),
        other => other,
    }
}

fn ff_exact(f: &Hom, budget: &Budget) -> Result<Verdict<Element>> {
    let k = reflected_cone(f, budget)?;
    for d in k.generators(budget)? {
        if !f.dom.is_positive(&d, budget)? {
            return Ok(Verdict::No(d));
        }
    }
    Ok(Verdict::Yes)
}

fn ff_bounded_search(f: &Hom, bound: i64, budget: &Budget) -> Result<Verdict<Element>> {
    let dg = f.dom.group();
    let gens = match f.dom.generators(budget) {
        Ok(g) => g,
        Err(Error::ResourceLimit(_)) => return Ok(Verdict::Unknown),
        Err(e) => return Err(e),
    };
    let coeffs: Vec<Vec<i64>> = (0..gens.len()).map(|_| (-bound..=bound).collect()).collect();
    for c in int_box(&coeffs) {
        let mut d = dg.zero();
        for (ci, g) in c.iter().zip(&gens) {
            d = dg.add(&d, &dg.scale(&BigInt::from(*ci), g)?)?;
        }
        let outcome = (|| -> Result<bool> {
            Ok(f.cod.is_positive(&f.apply(&d)?, budget)? && !f.dom.is_positive(&d, budget)?)
        })();
        match outcome {
            Ok(true) => return Ok(Verdict::No(d)),
            Ok(false) => {}
            Err(Error::ResourceLimit(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(Verdict::Unknown)
}

fn int_box(ranges: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for r in ranges {
        out = out
            .into_iter()
            .flat_map(|p| {
                r.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(*v);
                    q
                })
            })
            .collect();
    }
    out
}

/// All homomorphisms between finite groups, in lexicographic order of their
/// column images; optionally only the monotone ones.
pub fn enumerate_homs(x: &Poag, y: &Poag, monotone_only: bool, budget: &Budget) -> Result<Vec<Hom>> {
    let (xg, yg) = (x.group(), y.group());
    if !xg.is_finite() {
        return Err(Error::InfiniteGroup(xg.to_string()));
    }
    if !yg.is_finite() {
        return Err(Error::InfiniteGroup(yg.to_string()));
    }
    let ys = yg.elements()?;
    let choices: Vec<Vec<Element>> = xg
        .moduli()
        .iter()
        .map(|m| {
            ys.iter()
                .filter(|y| yg.scale(m, y).map(|e| e.is_zero()).unwrap_or(false))
                .cloned()
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(out);
    }
    loop {
        let cols: Vec<Vec<BigInt>> = idx.iter().zip(&choices).map(|(&i, c)| c[i].coords().to_vec()).collect();
        let h = Hom::new(x, y, IntMatrix::from_columns(yg.rank(), &cols))?;
        if !monotone_only || is_monotone(&h, budget)?.is_yes() {
            out.push(h);
        }
        // odometer, last column fastest
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// The matrix entries as machine integers, when they fit.
pub fn matrix_i64(f: &Hom) -> Option<Vec<Vec<i64>>> {
    f.matrix.to_rows().iter().map(|r| r.iter().map(ToPrimitive::to_i64).collect()).collect()
}

/// The group of a hom's domain; handy in closures.
pub fn dom_group(f: &Hom) -> &AbGroup {
    f.dom.group()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poag::product_poag;

    fn b() -> Budget {
        Budget::default()
    }

    fn nat() -> Poag {
        Poag::integers()
    }

    /// `1_ℤ / 1_ℤ`: cone {(n, m) : 0 <= n <= m}.
    fn order_precomma() -> Poag {
        let g = AbGroup::free(2);
        Poag::new("FG", Cone::from_i64(&g, &[&[0, 1], &[1, 1]]).unwrap())
    }

    #[test]
    fn composition() {
        let n = nat();
        let n2 = product_poag(&n, &n);
        let pair = Hom::from_i64(&n, &n2, &[&[1], &[4]]).unwrap();
        let plus = Hom::from_i64(&n2, &n, &[&[1, 1]]).unwrap();
        let c = compose(&plus, &pair).unwrap();
        assert_eq!(c.matrix(), &IntMatrix::from_i64(&[&[5]]));
        assert_eq!(compose(&identity(&n2), &pair).unwrap(), pair);
        assert!(compose(&pair, &pair).is_err());
    }

    #[test]
    fn torsion_compatibility() {
        let z2 = Poag::from_i64("Z2", &[2], &[]).unwrap();
        let z4 = Poag::from_i64("Z4", &[4], &[]).unwrap();
        assert!(matches!(Hom::from_i64(&z2, &z4, &[&[1]]), Err(Error::InvalidHom(_))));
        assert!(Hom::from_i64(&z2, &z4, &[&[2]]).is_ok());
        assert!(Hom::from_i64(&z2, &nat(), &[&[1]]).is_err());
    }

    #[test]
    fn monotonicity() {
        let n = nat();
        let zz = Poag::from_i64("ZZ", &[0], &[&[1], &[-1]]).unwrap();
        assert!(is_monotone(&Hom::from_i64(&n, &zz, &[&[1]]).unwrap(), &b()).unwrap().is_yes());
        let fg = order_precomma();
        let bad = Hom::from_i64(&n, &fg, &[&[1], &[0]]).unwrap();
        assert_eq!(is_monotone(&bad, &b()).unwrap(), Verdict::No(n.elem(&[1]).unwrap()));
        assert!(is_monotone(&Hom::zero(&fg, &n), &b()).unwrap().is_yes());
    }

    #[test]
    fn precomma_order_counterexample() {
        let n = nat();
        let fg = order_precomma();
        let t = Hom::from_i64(&n, &fg, &[&[1], &[4]]).unwrap();
        let tp = Hom::from_i64(&n, &fg, &[&[3], &[5]]).unwrap();
        let pi1 = Hom::from_i64(&fg, &n, &[&[1, 0]]).unwrap();
        let pi2 = Hom::from_i64(&fg, &n, &[&[0, 1]]).unwrap();
        for p in [&pi1, &pi2] {
            let a = compose(p, &t).unwrap();
            let c = compose(p, &tp).unwrap();
            assert!(hom_leq(&a, &c, &b()).unwrap().is_yes());
        }
        let v = hom_leq(&t, &tp, &b()).unwrap();
        assert_eq!(v.witness().unwrap().difference, fg.elem(&[2, 1]).unwrap());
        assert!(hom_leq(&t, &t, &b()).unwrap().is_yes());
    }

    #[test]
    fn mono_epi_iso() {
        let disc = Poag::from_i64("D", &[0], &[]).unwrap();
        let neg = Poag::from_i64("N", &[0], &[&[-1]]).unwrap();
        let one = Hom::from_i64(&disc, &neg, &[&[1]]).unwrap();
        assert!(is_mono(&one).unwrap().is_yes());
        assert!(is_epi(&one).unwrap().is_yes());
        assert!(is_iso(&one, &b()).unwrap().is_no());
        assert!(is_iso(&identity(&neg), &b()).unwrap().is_yes());
        let n = nat();
        let double = Hom::from_i64(&n, &n, &[&[2]]).unwrap();
        assert!(is_mono(&double).unwrap().is_yes());
        assert!(is_epi(&double).unwrap().is_no());
    }

    #[test]
    fn inverse_of_swap() {
        let n = nat();
        let n2 = product_poag(&n, &n);
        let swap = Hom::from_i64(&n2, &n2, &[&[0, 1], &[1, 0]]).unwrap();
        let inv = inverse(&swap).unwrap();
        assert_eq!(compose(&inv, &swap).unwrap(), identity(&n2));
        let z6 = Poag::from_i64("Z6", &[6], &[]).unwrap();
        let five = Hom::from_i64(&z6, &z6, &[&[5]]).unwrap();
        assert_eq!(inverse(&five).unwrap().matrix(), &IntMatrix::from_i64(&[&[5]]));
    }

    #[test]
    fn fully_faithful() {
        let n = nat();
        assert!(is_fully_faithful(&identity(&n), &b()).unwrap().is_yes());
        let fg = order_precomma();
        let n2 = product_poag(&n, &n);
        let pair = Hom::from_i64(&fg, &n2, &[&[1, 0], &[0, 1]]).unwrap();
        let v = is_fully_faithful(&pair, &b()).unwrap();
        let d = v.witness().unwrap();
        assert!(n2.is_positive(&pair.apply(d).unwrap(), &b()).unwrap());
        assert!(!fg.is_positive(d, &b()).unwrap());
        // the difference t'(1) - t(1) is another witness
        let w = fg.elem(&[2, 1]).unwrap();
        assert!(n2.is_positive(&pair.apply(&w).unwrap(), &b()).unwrap());
        assert!(!fg.is_positive(&w, &b()).unwrap());
    }

    #[test]
    fn hom_enumeration() {
        let z2 = Poag::from_i64("Z2", &[2], &[]).unwrap();
        let z4 = Poag::from_i64("Z4", &[4], &[]).unwrap();
        assert_eq!(enumerate_homs(&z2, &z2, false, &b()).unwrap().len(), 2);
        let h = enumerate_homs(&z2, &z4, false, &b()).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h[1].matrix(), &IntMatrix::from_i64(&[&[2]]));
        let full = Poag::from_i64("Z2full", &[2], &[&[1]]).unwrap();
        let m = enumerate_homs(&full, &z2, true, &b()).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m[0].is_zero());
        assert!(enumerate_homs(&nat(), &z2, false, &b()).is_err());
    }
}
