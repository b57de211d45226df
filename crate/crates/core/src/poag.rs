//! Preordered abelian groups in coordinate form.
//!
//! A group is a list of moduli (`0` for a free coordinate, `m >= 2` for
//! `ℤ_m`). A cone is described by a linear system: `x ∈ P` iff there is
//! `w ∈ ℕ^k` with `A w ≡ B x`, row by row either exactly or modulo the row's
//! modulus. An explicitly generated cone is the special case `A = [gens]`,
//! `B = I`; derived cones (precommas, restrictions, factorization middles)
//! stack the systems of their ingredients, so membership never needs
//! generators. Generators are computed on demand from a Hilbert basis.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{lift, Budget, Error, Result, Verdict};
use crate::intlin::{hilbert_basis, nonneg_feasible, smith_normal_form, solve_z, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbGroup {
    moduli: Vec<BigInt>,
}

impl AbGroup {
    pub fn new(moduli: Vec<BigInt>) -> Result<Self> {
        for m in &moduli {
            if m.is_one() {
                return Err(Error::ModulusOne);
            }
            if m.is_negative() {
                return Err(Error::Precondition(format!("negative modulus {}", m)));
            }
        }
        Ok(AbGroup { moduli })
    }

    pub fn from_moduli(moduli: &[i64]) -> Result<Self> {
        Self::new(moduli.iter().map(|&m| BigInt::from(m)).collect())
    }

    pub fn trivial() -> Self {
        AbGroup { moduli: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbGroup { moduli: vec![BigInt::zero(); rank] }
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    /// Number of coordinates.
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_finite(&self) -> bool {
        self.moduli.iter().all(|m| !m.is_zero())
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.moduli.iter().product())
    }

    pub fn is_trivial(&self) -> bool {
        self.moduli.is_empty()
    }

    pub fn product(&self, other: &AbGroup) -> AbGroup {
        let mut moduli = self.moduli.clone();
        moduli.extend(other.moduli.iter().cloned());
        AbGroup { moduli }
    }

    /// Torsion coordinates as `(index, modulus)` pairs.
    pub fn torsion_rows(&self) -> Vec<(usize, BigInt)> {
        self.moduli
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| (i, m.clone()))
            .collect()
    }

    pub fn reduce_coords(&self, coords: &mut [BigInt]) {
        for (c, m) in coords.iter_mut().zip(&self.moduli) {
            if !m.is_zero() {
                *c = c.mod_floor(m);
            }
        }
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<Element> {
        if coords.len() != self.rank() {
            return Err(Error::Dimension(format!(
                "element has {} coordinates, group has {}",
                coords.len(),
                self.rank()
            )));
        }
        let mut coords = coords;
        self.reduce_coords(&mut coords);
        Ok(Element(coords))
    }

    pub fn elem(&self, coords: &[i64]) -> Result<Element> {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(&self) -> Element {
        Element(vec![BigInt::zero(); self.rank()])
    }

    pub fn unit(&self, i: usize) -> Element {
        let mut v = vec![BigInt::zero(); self.rank()];
        v[i] = BigInt::one();
        self.element(v).expect("unit vector has the right length")
    }

    /// Whether `x` is a reduced element of this group.
    pub fn owns(&self, x: &Element) -> bool {
        x.0.len() == self.rank()
            && x.0.iter().zip(&self.moduli).all(|(c, m)| m.is_zero() || (!c.is_negative() && c < m))
    }

    fn check(&self, x: &Element) -> Result<()> {
        if self.owns(x) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!("{} is not an element of {}", x, self)))
        }
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        self.element(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        self.element(x.0.iter().map(|a| -a).collect())
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Result<Element> {
        let ny = self.neg(y)?;
        self.add(x, &ny)
    }

    pub fn scale(&self, k: &BigInt, x: &Element) -> Result<Element> {
        self.check(x)?;
        self.element(x.0.iter().map(|a| a * k).collect())
    }

    /// All elements of a finite group, lexicographically (first coordinate
    /// most significant).
    pub fn elements(&self) -> Result<Vec<Element>> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup(self.to_string()));
        }
        let ranges: Vec<Vec<BigInt>> = self
            .moduli
            .iter()
            .map(|m| (0..m.to_u64().unwrap_or(u64::MAX)).map(BigInt::from).collect())
            .collect();
        Ok(box_product(&ranges).into_iter().map(Element).collect())
    }

    /// Elements whose free coordinates lie in `[-bound, bound]`; torsion
    /// coordinates range over all residues.
    pub fn bounded_elements(&self, bound: u64) -> Vec<Element> {
        let b = bound as i64;
        let ranges: Vec<Vec<BigInt>> = self
            .moduli
            .iter()
            .map(|m| {
                if m.is_zero() {
                    (-b..=b).map(BigInt::from).collect()
                } else {
                    (0..m.to_u64().unwrap_or(u64::MAX)).map(BigInt::from).collect()
                }
            })
            .collect();
        box_product(&ranges).into_iter().map(Element).collect()
    }

    /// Embedding matrix of the diagonal `ℤ_m` torsion relations, used when
    /// solving equations in the group.
    pub(crate) fn relation_matrix(&self) -> IntMatrix {
        let tors = self.torsion_rows();
        let mut m = IntMatrix::zeros(self.rank(), tors.len());
        for (j, (i, q)) in tors.into_iter().enumerate() {
            m[(i, j)] = q;
        }
        m
    }

    /// Presents the subgroup generated by `gens` in coordinate form.
    pub fn subgroup(&self, gens: &[Element]) -> Result<Subgroup> {
        for g in gens {
            self.check(g)?;
        }
        let cols: Vec<Vec<BigInt>> = gens.iter().map(|g| g.0.clone()).collect();
        let gm = IntMatrix::from_columns(self.rank(), &cols);
        let k = gens.len();
        // relations among the generators: kernel of [gm | torsion]
        let full = gm.hstack(&self.relation_matrix());
        let snf = smith_normal_form(&full);
        let rank = snf.rank();
        let rel_cols: Vec<Vec<BigInt>> =
            (rank..full.cols()).map(|j| snf.v.column(j)[..k].to_vec()).collect();
        let rel = IntMatrix::from_columns(k, &rel_cols);
        let s2 = smith_normal_form(&rel);
        let diag = s2.diagonal();
        let mut kept = Vec::new();
        let mut moduli = Vec::new();
        for i in 0..k {
            let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if !d.is_one() {
                kept.push(i);
                moduli.push(d);
            }
        }
        let group = AbGroup::new(moduli)?;
        let embed = reduce_matrix_rows(&gm.mul(&s2.u_inv).select_columns(&kept), self);
        let to_sub = s2.u.select_rows(&kept);
        Ok(Subgroup { ambient: self.clone(), group, embed, gens: gm, to_sub })
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .moduli
            .iter()
            .map(|m| if m.is_zero() { "Z".to_string() } else { format!("Z_{}", m) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn box_product(ranges: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
    for r in ranges {
        let mut next = Vec::with_capacity(out.len() * r.len());
        for prefix in &out {
            for v in r {
                let mut p = prefix.clone();
                p.push(v.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

pub(crate) fn reduce_matrix_rows(m: &IntMatrix, g: &AbGroup) -> IntMatrix {
    let mut out = m.clone();
    for (i, q) in g.moduli().iter().enumerate() {
        if !q.is_zero() {
            for j in 0..out.cols() {
                out[(i, j)] = out[(i, j)].mod_floor(q);
            }
        }
    }
    out
}

/// A subgroup in its own coordinates, with the embedding into the ambient
/// group and a way back.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub ambient: AbGroup,
    pub group: AbGroup,
    /// Columns are the images of the subgroup's coordinate generators.
    pub embed: IntMatrix,
    gens: IntMatrix,
    to_sub: IntMatrix,
}

impl Subgroup {
    /// Coordinates of an ambient element in the subgroup, if it lies there.
    pub fn coords_of(&self, y: &Element) -> Result<Option<Element>> {
        self.ambient.check(y)?;
        let k = self.gens.cols();
        let full = self.gens.hstack(&self.ambient.relation_matrix());
        match solve_z(&full, y.coords())? {
            None => Ok(None),
            Some(sol) => {
                let c = &sol.particular[..k];
                Ok(Some(self.group.element(self.to_sub.mul_vec(c))?))
            }
        }
    }

    pub fn embed_element(&self, x: &Element) -> Result<Element> {
        self.group.check(x)?;
        self.ambient.element(self.embed.mul_vec(x.coords()))
    }

    /// Whether the subgroup is the whole ambient group.
    pub fn is_everything(&self) -> Result<bool> {
        for i in 0..self.ambient.rank() {
            if self.coords_of(&self.ambient.unit(i))?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(Vec<BigInt>);

impl Element {
    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Concatenation, the element of a product group.
    pub fn pair(&self, other: &Element) -> Element {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Element(v)
    }

    pub fn split_at(&self, k: usize) -> (Element, Element) {
        (Element(self.0[..k].to_vec()), Element(self.0[k..].to_vec()))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn elem_add(g: &AbGroup, x: &Element, y: &Element) -> Result<Element> {
    g.add(x, y)
}

pub fn elem_neg(g: &AbGroup, x: &Element) -> Result<Element> {
    g.neg(x)
}

/// The linear description of a cone: `x ∈ P` iff `∃ w ≥ 0, A w ≡ B x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConeSystem {
    pub a: IntMatrix,
    pub b: IntMatrix,
    /// One entry per row; zero for exact rows.
    pub row_moduli: Vec<BigInt>,
}

impl ConeSystem {
    fn slacks(&self) -> Vec<(usize, BigInt)> {
        self.row_moduli
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| (i, m.clone()))
            .collect()
    }

    /// Block sum of two systems on a product of groups.
    fn block_sum(&self, other: &ConeSystem) -> ConeSystem {
        let mut row_moduli = self.row_moduli.clone();
        row_moduli.extend(other.row_moduli.iter().cloned());
        ConeSystem {
            a: self.a.block_diag(&other.a),
            b: self.b.block_diag(&other.b),
            row_moduli,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Explicit,
    Derived,
}

#[derive(Debug)]
pub struct Cone {
    group: AbGroup,
    system: ConeSystem,
    explicit: Option<Vec<Element>>,
    gens: OnceLock<Vec<Element>>,
}

impl Clone for Cone {
    fn clone(&self) -> Self {
        let gens = OnceLock::new();
        if let Some(g) = self.gens.get() {
            let _ = gens.set(g.clone());
        }
        Cone { group: self.group.clone(), system: self.system.clone(), explicit: self.explicit.clone(), gens }
    }
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.system == other.system && self.explicit == other.explicit
    }
}

impl Eq for Cone {}

impl Cone {
    /// The submonoid generated by `gens`.
    pub fn generated(group: &AbGroup, gens: Vec<Element>) -> Result<Self> {
        for g in &gens {
            group.check(g)?;
        }
        let cols: Vec<Vec<BigInt>> = gens.iter().map(|g| g.0.clone()).collect();
        let system = ConeSystem {
            a: IntMatrix::from_columns(group.rank(), &cols),
            b: IntMatrix::identity(group.rank()),
            row_moduli: group.moduli().to_vec(),
        };
        Ok(Cone { group: group.clone(), system, explicit: Some(gens), gens: OnceLock::new() })
    }

    pub fn from_i64(group: &AbGroup, gens: &[&[i64]]) -> Result<Self> {
        let gens = gens.iter().map(|g| group.elem(g)).collect::<Result<Vec<_>>>()?;
        Self::generated(group, gens)
    }

    /// `{0}`, the discrete order.
    pub fn trivial(group: &AbGroup) -> Self {
        Self::generated(group, Vec::new()).expect("empty generator list")
    }

    /// The whole group, the indiscrete order.
    pub fn full(group: &AbGroup) -> Self {
        let mut gens = Vec::new();
        for (i, m) in group.moduli().iter().enumerate() {
            gens.push(group.unit(i));
            if m.is_zero() {
                gens.push(group.neg(&group.unit(i)).expect("own element"));
            }
        }
        Self::generated(group, gens).expect("units are elements")
    }

    /// The subgroup generated by `gens`, as a cone.
    pub fn lattice(group: &AbGroup, gens: &[Element]) -> Result<Self> {
        let mut all = Vec::new();
        for g in gens {
            all.push(g.clone());
            if !group.neg(g)?.eq(g) && !is_torsion(group, g) {
                all.push(group.neg(g)?);
            }
        }
        Self::generated(group, all)
    }

    /// A derived cone given by its linear system.
    pub fn from_system(group: &AbGroup, system: ConeSystem) -> Result<Self> {
        let r = system.a.rows();
        if system.b.rows() != r || system.row_moduli.len() != r || system.b.cols() != group.rank() {
            return Err(Error::Dimension("inconsistent cone system".into()));
        }
        Ok(Cone { group: group.clone(), system, explicit: None, gens: OnceLock::new() })
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn system(&self) -> &ConeSystem {
        &self.system
    }

    pub fn provenance(&self) -> Provenance {
        if self.explicit.is_some() {
            Provenance::Explicit
        } else {
            Provenance::Derived
        }
    }

    /// The user-supplied generators, if this cone was given explicitly.
    pub fn explicit_generators(&self) -> Option<&[Element]> {
        self.explicit.as_deref()
    }

    /// Membership; `Err(ResourceLimit)` when the search is cut off.
    pub fn contains(&self, x: &Element, budget: &Budget) -> Result<bool> {
        self.group.check(x)?;
        if x.is_zero() {
            return Ok(true);
        }
        let rhs = self.system.b.mul_vec(&x.0);
        Ok(nonneg_feasible(&self.system.a, &rhs, &self.system.slacks(), budget)?.is_some())
    }

    /// Generators of the cone. Explicit cones return their own list; derived
    /// cones are generated by projecting a Hilbert basis and pruning
    /// redundant members. Only successful computations are cached.
    pub fn generators(&self, budget: &Budget) -> Result<Vec<Element>> {
        if let Some(g) = &self.explicit {
            return Ok(g.clone());
        }
        if let Some(g) = self.gens.get() {
            return Ok(g.clone());
        }
        let g = self.compute_generators(budget)?;
        let _ = self.gens.set(g.clone());
        Ok(g)
    }

    fn compute_generators(&self, budget: &Budget) -> Result<Vec<Element>> {
        let sys = &self.system;
        // Rows of the cokernel of B: A w must land in the image of B.
        let relations = IntMatrix::from_columns(sys.a.rows(), &diag_columns(&sys.row_moduli));
        let bm = sys.b.hstack(&relations);
        let snf = smith_normal_form(&bm);
        let diag = snf.diagonal();
        let mut q_rows = Vec::new();
        let mut q_mod = Vec::new();
        for i in 0..bm.rows() {
            let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if !d.is_one() {
                q_rows.push(i);
                q_mod.push(d);
            }
        }
        let q = snf.u.select_rows(&q_rows);
        let qa = q.mul(&sys.a);
        let slacks: Vec<(usize, BigInt)> = q_mod
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| (i, m.clone()))
            .collect();
        let basis = hilbert_basis(&qa, &slacks, budget)?;
        let n = self.group.rank();
        let mut gens = Vec::new();
        for w in &basis.vectors {
            let aw = sys.a.mul_vec(w);
            let sol = solve_z(&bm, &aw)?.ok_or_else(|| {
                Error::Inconsistent("Hilbert basis vector outside the image of B".into())
            })?;
            let x = self.group.element(sol.particular[..n].to_vec())?;
            if !x.is_zero() {
                gens.push(x);
            }
        }
        // x is only pinned down by A w up to the kernel of B, which the cone
        // contains in both directions
        let zero = vec![BigInt::zero(); bm.rows()];
        if let Some(sol) = solve_z(&bm, &zero)? {
            for k in sol.kernel {
                let x = self.group.element(k[..n].to_vec())?;
                if !x.is_zero() {
                    gens.push(self.group.neg(&x)?);
                    gens.push(x);
                }
            }
        }
        gens.sort();
        gens.dedup();
        prune_redundant(&self.group, gens, budget)
    }

    /// Product cone on `self.group × other.group`.
    pub fn product(&self, other: &Cone) -> Cone {
        let group = self.group.product(&other.group);
        match (&self.explicit, &other.explicit) {
            (Some(a), Some(b)) => {
                let zl = self.group.zero();
                let zr = other.group.zero();
                let mut gens: Vec<Element> = a.iter().map(|x| x.pair(&zr)).collect();
                gens.extend(b.iter().map(|z| zl.pair(z)));
                Cone::generated(&group, gens).expect("embedded generators")
            }
            _ => Cone::from_system(&group, self.system.block_sum(&other.system))
                .expect("block sums are consistent"),
        }
    }

    /// Restriction along an injective homomorphism `sub -> self.group`
    /// given by `embed`: `{h : embed(h) ∈ P}`.
    pub fn preimage(&self, sub: &AbGroup, embed: &IntMatrix) -> Result<Cone> {
        if embed.rows() != self.group.rank() || embed.cols() != sub.rank() {
            return Err(Error::Dimension("embedding does not match groups".into()));
        }
        let system = ConeSystem {
            a: self.system.a.clone(),
            b: self.system.b.mul(embed),
            row_moduli: self.system.row_moduli.clone(),
        };
        Cone::from_system(sub, system)
    }

    /// Elements with free coordinates in `[-bound, bound]` that lie in the
    /// cone, lexicographically.
    pub fn bounded_elements(&self, bound: u64, budget: &Budget) -> Result<Vec<Element>> {
        let mut out = Vec::new();
        for x in self.group.bounded_elements(bound) {
            if self.contains(&x, budget)? {
                out.push(x);
            }
        }
        Ok(out)
    }
}

fn is_torsion(g: &AbGroup, x: &Element) -> bool {
    x.0.iter().zip(g.moduli()).all(|(c, m)| c.is_zero() || !m.is_zero())
}

fn diag_columns(moduli: &[BigInt]) -> Vec<Vec<BigInt>> {
    moduli
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(i, m)| {
            let mut c = vec![BigInt::zero(); moduli.len()];
            c[i] = m.clone();
            c
        })
        .collect()
}

/// Rows `c` with moduli `m` such that `x` lies in the subgroup generated by
/// `gens` iff `c·x ≡ 0 (mod m)` for every row (`m = 0` for exact rows).
/// Used in place of sign-split multiplier variables, which blow up the
/// Hilbert basis search.
pub(crate) fn subgroup_rows(group: &AbGroup, gens: &[Element]) -> (IntMatrix, Vec<BigInt>) {
    let n = group.rank();
    let mut cols: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords().to_vec()).collect();
    cols.extend(diag_columns(group.moduli()));
    let snf = smith_normal_form(&IntMatrix::from_columns(n, &cols));
    let diag = snf.diagonal();
    let mut rows = Vec::new();
    let mut moduli = Vec::new();
    for i in 0..n {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if !d.is_one() {
            rows.push(i);
            moduli.push(d);
        }
    }
    (snf.u.select_rows(&rows), moduli)
}

/// Drops, in order, every generator that is an ℕ-combination of the ones
/// still kept.
fn prune_redundant(group: &AbGroup, gens: Vec<Element>, budget: &Budget) -> Result<Vec<Element>> {
    let mut kept = gens;
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<Element> =
            kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
        let cone = Cone::generated(group, others)?;
        if cone.contains(&kept[i], budget)? {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(kept)
}

/// A preordered abelian group.
#[derive(Debug, Clone)]
pub struct Poag {
    name: String,
    cone: Arc<Cone>,
    /// For objects built as precommas: the product cone of the underlying
    /// product group, used for the ambient reading of the rali test.
    ambient: Option<Arc<Cone>>,
}

impl PartialEq for Poag {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.cone, &other.cone) || self.cone == other.cone
    }
}

impl Eq for Poag {}

impl Poag {
    pub fn new(name: impl Into<String>, cone: Cone) -> Self {
        Poag { name: name.into(), cone: Arc::new(cone), ambient: None }
    }

    pub fn with_ambient(mut self, ambient: Cone) -> Self {
        self.ambient = Some(Arc::new(ambient));
        self
    }

    /// Convenience constructor from moduli and explicit cone generators.
    pub fn from_i64(name: &str, moduli: &[i64], gens: &[&[i64]]) -> Result<Self> {
        let g = AbGroup::from_moduli(moduli)?;
        Ok(Poag::new(name, Cone::from_i64(&g, gens)?))
    }

    /// `(ℤ, ℕ)`
    pub fn integers() -> Self {
        Self::from_i64("Z", &[0], &[&[1]]).expect("valid")
    }

    pub fn zero() -> Self {
        Poag::new("0", Cone::trivial(&AbGroup::trivial()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Poag { name: name.into(), ..self.clone() }
    }

    pub fn group(&self) -> &AbGroup {
        &self.cone.group
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn ambient_cone(&self) -> Option<&Cone> {
        self.ambient.as_deref()
    }

    pub fn elem(&self, coords: &[i64]) -> Result<Element> {
        self.group().elem(coords)
    }

    pub fn generators(&self, budget: &Budget) -> Result<Vec<Element>> {
        self.cone.generators(budget)
    }

    pub fn is_positive(&self, x: &Element, budget: &Budget) -> Result<bool> {
        self.cone.contains(x, budget)
    }

    /// `x ≤ y`
    pub fn leq(&self, x: &Element, y: &Element, budget: &Budget) -> Result<bool> {
        let d = self.group().sub(y, x)?;
        self.cone.contains(&d, budget)
    }
}

impl fmt::Display for Poag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name, self.group())
    }
}

pub fn cone_contains(p: &Cone, x: &Element, budget: &Budget) -> Result<Verdict> {
    lift(p.contains(x, budget).map(Verdict::from_bool))
}

pub fn elem_leq(x: &Element, y: &Element, p: &Cone, budget: &Budget) -> Result<Verdict> {
    let d = p.group().sub(y, x)?;
    cone_contains(p, &d, budget)
}

pub fn product_poag(x: &Poag, z: &Poag) -> Poag {
    Poag::new(format!("{}x{}", x.name(), z.name()), x.cone().product(z.cone()))
}

pub fn enumerate_elements(g: &AbGroup) -> Result<Vec<Element>> {
    g.elements()
}

pub fn enumerate_cone_elements(p: &Cone, bound: Option<u64>, budget: &Budget) -> Result<Vec<Element>> {
    match bound {
        Some(b) => p.bounded_elements(b, budget),
        None if p.group().is_finite() => p.bounded_elements(0, budget),
        None => Err(Error::InfiniteGroup(p.group().to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    fn z() -> AbGroup {
        AbGroup::from_moduli(&[0]).unwrap()
    }

    #[test]
    fn arithmetic() {
        let g = z();
        assert_eq!(elem_add(&g, &g.elem(&[2]).unwrap(), &g.elem(&[3]).unwrap()).unwrap(), g.elem(&[5]).unwrap());
        let z4 = AbGroup::from_moduli(&[4]).unwrap();
        let three = z4.elem(&[3]).unwrap();
        assert_eq!(z4.add(&three, &three).unwrap(), z4.elem(&[2]).unwrap());
        assert_eq!(elem_neg(&z4, &z4.elem(&[1]).unwrap()).unwrap(), three);
        assert!(z4.add(&three, &AbGroup::free(2).elem(&[1, 0]).unwrap()).is_err());
        assert!(z4.add(&three, &g.elem(&[-1]).unwrap()).is_err());
    }

    #[test]
    fn modulus_one_rejected() {
        assert_eq!(AbGroup::from_moduli(&[1]), Err(Error::ModulusOne));
    }

    #[test]
    fn membership() {
        let g = z();
        let nat = Cone::from_i64(&g, &[&[1]]).unwrap();
        assert!(nat.contains(&g.elem(&[3]).unwrap(), &b()).unwrap());
        assert!(!nat.contains(&g.elem(&[-1]).unwrap(), &b()).unwrap());
        let g2 = AbGroup::free(2);
        let triv = Cone::trivial(&g2);
        assert!(!triv.contains(&g2.elem(&[1, 0]).unwrap(), &b()).unwrap());
        assert!(triv.contains(&g2.zero(), &b()).unwrap());
    }

    #[test]
    fn order_examples() {
        let g = z();
        let nat = Cone::from_i64(&g, &[&[1]]).unwrap();
        let one = g.elem(&[1]).unwrap();
        let three = g.elem(&[3]).unwrap();
        assert!(elem_leq(&one, &three, &nat, &b()).unwrap().is_yes());
        assert!(elem_leq(&one, &three, &Cone::trivial(&g), &b()).unwrap().is_no());
    }

    #[test]
    fn products() {
        let n = Poag::integers();
        let p = product_poag(&n, &n);
        assert_eq!(
            p.cone().explicit_generators().unwrap(),
            &[p.elem(&[1, 0]).unwrap(), p.elem(&[0, 1]).unwrap()]
        );
        let x = product_poag(&n, &Poag::zero());
        assert_eq!(x.group(), n.group());
        let disc = Poag::from_i64("D", &[0], &[]).unwrap();
        let neg = Poag::from_i64("N", &[0], &[&[-1]]).unwrap();
        let p = product_poag(&disc, &neg);
        assert_eq!(p.cone().explicit_generators().unwrap(), &[p.elem(&[0, -1]).unwrap()]);
    }

    #[test]
    fn enumeration() {
        let g = AbGroup::from_moduli(&[2, 2]).unwrap();
        assert_eq!(enumerate_elements(&g).unwrap().len(), 4);
        assert!(enumerate_elements(&z()).is_err());
        let nat = Cone::from_i64(&z(), &[&[1]]).unwrap();
        let e = enumerate_cone_elements(&nat, Some(3), &b()).unwrap();
        assert_eq!(e, (0..=3).map(|i| z().elem(&[i]).unwrap()).collect::<Vec<_>>());
        let g2 = AbGroup::free(2);
        let c = Cone::from_i64(&g2, &[&[1, 1], &[0, 1]]).unwrap();
        let e = enumerate_cone_elements(&c, Some(2), &b()).unwrap();
        let want: Vec<Element> = [[0, 0], [0, 1], [0, 2], [1, 1], [1, 2], [2, 2]]
            .iter()
            .map(|v| g2.elem(v).unwrap())
            .collect();
        assert_eq!(e, want);
    }

    #[test]
    fn subgroup_presentation() {
        let g = AbGroup::free(1);
        let s = g.subgroup(&[g.elem(&[2]).unwrap()]).unwrap();
        assert_eq!(s.group, AbGroup::free(1));
        let six = g.elem(&[6]).unwrap();
        let c = s.coords_of(&six).unwrap().unwrap();
        assert_eq!(s.embed_element(&c).unwrap(), six);
        assert!(s.coords_of(&g.elem(&[3]).unwrap()).unwrap().is_none());

        let z4 = AbGroup::from_moduli(&[4]).unwrap();
        let s = z4.subgroup(&[z4.elem(&[2]).unwrap()]).unwrap();
        assert_eq!(s.group, AbGroup::from_moduli(&[2]).unwrap());
        let back = s.coords_of(&z4.elem(&[2]).unwrap()).unwrap().unwrap();
        assert_eq!(s.embed_element(&back).unwrap(), z4.elem(&[2]).unwrap());

        let z6 = AbGroup::from_moduli(&[6]).unwrap();
        let s = z6.subgroup(&[z6.elem(&[1]).unwrap()]).unwrap();
        assert!(s.is_everything().unwrap());
        assert_eq!(s.group.order(), Some(BigInt::from(6)));
    }

    #[test]
    fn derived_generators_of_order_cone() {
        // {(x, z) : x ≥ 0, z ≥ 0, z - x ≥ 0}
        let g = AbGroup::free(2);
        let system = ConeSystem {
            a: IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            b: IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[-1, 1]]),
            row_moduli: vec![BigInt::zero(); 3],
        };
        let c = Cone::from_system(&g, system).unwrap();
        assert_eq!(c.provenance(), Provenance::Derived);
        let gens = c.generators(&b()).unwrap();
        assert_eq!(gens, vec![g.elem(&[0, 1]).unwrap(), g.elem(&[1, 1]).unwrap()]);
        assert!(!c.contains(&g.elem(&[2, 1]).unwrap(), &b()).unwrap());
        assert!(c.contains(&g.elem(&[1, 3]).unwrap(), &b()).unwrap());
    }

    #[test]
    fn full_cone_on_torsion() {
        let g = AbGroup::from_moduli(&[0, 3]).unwrap();
        let c = Cone::full(&g);
        for x in g.bounded_elements(2) {
            assert!(c.contains(&x, &b()).unwrap());
        }
    }

    #[test]
    fn half_plane_keeps_its_edge_line() {
        let g = AbGroup::free(2);
        let system = ConeSystem {
            a: IntMatrix::from_i64(&[&[1]]),
            b: IntMatrix::from_i64(&[&[1, 1]]),
            row_moduli: vec![BigInt::zero()],
        };
        let c = Cone::from_system(&g, system).unwrap();
        let gens = c.generators(&b()).unwrap();
        assert_eq!(gens.len(), 3);
        let spanned = Cone::generated(&g, gens).unwrap();
        for x in g.bounded_elements(3) {
            assert_eq!(spanned.contains(&x, &b()).unwrap(), c.contains(&x, &b()).unwrap());
        }
    }
}
