//! Table-driven finite preordered abelian groups, used for exhaustive
//! sweeps and as brute-force oracles for the symbolic decision procedures.
//!
//! Elements are indices in mixed radix with the last coordinate fastest,
//! matching `AbGroup::elements`. Subsets are `u64` bitmasks, so carriers are
//! limited to 64 elements. In a finite group every submonoid is a
//! subgroup, so cones are exactly the subgroups.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::Result;
use crate::homs::Hom;
use crate::intlin::IntMatrix;
use crate::poag::{AbGroup, Cone, Element, Poag};

pub type Mask = u64;

pub const MAX_ORDER: usize = 64;

/// Iterates the set bits of a mask.
pub fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroup {
    moduli: Vec<u32>,
    order: usize,
    add: Vec<u8>,
    neg: Vec<u8>,
}

impl FinGroup {
    pub fn new(moduli: &[u32]) -> Self {
        assert!(moduli.iter().all(|&m| m >= 2), "moduli must be at least 2");
        let order: usize = moduli.iter().map(|&m| m as usize).product();
        assert!(order <= MAX_ORDER, "finite engine handles at most {} elements", MAX_ORDER);
        let mut g = FinGroup { moduli: moduli.to_vec(), order, add: vec![0; order * order], neg: vec![0; order] };
        for x in 0..order {
            let cx = g.coords(x);
            for y in 0..order {
                let cy = g.coords(y);
                let s: Vec<u32> = cx.iter().zip(&cy).zip(moduli).map(|((a, b), m)| (a + b) % m).collect();
                g.add[x * order + y] = g.index(&s) as u8;
            }
            let n: Vec<u32> = cx.iter().zip(moduli).map(|(a, m)| (m - a) % m).collect();
            g.neg[x] = g.index(&n) as u8;
        }
        g
    }

    pub fn trivial() -> Self {
        FinGroup::new(&[])
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn full(&self) -> Mask {
        if self.order == 64 {
            u64::MAX
        } else {
            (1u64 << self.order) - 1
        }
    }

    pub fn coords(&self, mut x: usize) -> Vec<u32> {
        let mut c = vec![0; self.moduli.len()];
        for i in (0..self.moduli.len()).rev() {
            c[i] = (x % self.moduli[i] as usize) as u32;
            x /= self.moduli[i] as usize;
        }
        c
    }

    pub fn index(&self, coords: &[u32]) -> usize {
        coords.iter().zip(&self.moduli).fold(0, |acc, (c, m)| acc * *m as usize + (*c % m) as usize)
    }

    pub fn unit(&self, i: usize) -> usize {
        let mut c = vec![0; self.moduli.len()];
        c[i] = 1;
        self.index(&c)
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.order + y] as usize
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    #[inline]
    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    /// Coordinates of `X × Z` are those of `X` followed by those of `Z`, so
    /// `(x, z)` has index `x·|Z| + z`.
    pub fn product(&self, other: &FinGroup) -> FinGroup {
        let mut m = self.moduli.clone();
        m.extend_from_slice(&other.moduli);
        FinGroup::new(&m)
    }

    /// The subgroup generated by a set of elements.
    pub fn closure(&self, gens: Mask) -> Mask {
        let mut s: Mask = 1;
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for g in bits(gens) {
                let y = self.add(x, g);
                if s & (1 << y) == 0 {
                    s |= 1 << y;
                    frontier.push(y);
                }
            }
        }
        s
    }

    /// All subgroups, in increasing mask order.
    pub fn subgroups(&self) -> Vec<Mask> {
        let mut found = vec![1 as Mask];
        let mut i = 0;
        while i < found.len() {
            let s = found[i];
            for x in 0..self.order {
                if s & (1 << x) == 0 {
                    let t = self.closure(s | 1 << x);
                    if !found.contains(&t) {
                        found.push(t);
                    }
                }
            }
            i += 1;
        }
        found.sort_unstable();
        found
    }

    /// All homomorphisms to `h` as element tables.
    pub fn homs_to(&self, h: &FinGroup) -> Vec<Vec<u8>> {
        let choices: Vec<Vec<usize>> = self
            .moduli
            .iter()
            .map(|&m| (0..h.order).filter(|&y| h.multiple(m as usize, y) == 0).collect())
            .collect();
        let mut out = Vec::new();
        let mut pick = vec![0usize; choices.len()];
        loop {
            let images: Vec<usize> = pick.iter().zip(&choices).map(|(&p, c)| c[p]).collect();
            out.push(self.table_from_images(h, &images));
            let mut k = pick.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < choices[k].len() {
                    break;
                }
                pick[k] = 0;
            }
        }
    }

    fn table_from_images(&self, h: &FinGroup, images: &[usize]) -> Vec<u8> {
        (0..self.order)
            .map(|x| {
                let c = self.coords(x);
                let mut y = 0;
                for (ci, img) in c.iter().zip(images) {
                    y = h.add(y, h.multiple(*ci as usize, *img));
                }
                y as u8
            })
            .collect()
    }

    pub fn multiple(&self, k: usize, x: usize) -> usize {
        let mut y = 0;
        for _ in 0..k {
            y = self.add(y, x);
        }
        y
    }

    /// Automorphisms, as permutation tables.
    pub fn automorphisms(&self) -> Vec<Vec<u8>> {
        self.homs_to(self).into_iter().filter(|t| is_bijective(t, self.order)).collect()
    }

    pub fn to_abgroup(&self) -> AbGroup {
        let m: Vec<i64> = self.moduli.iter().map(|&m| m as i64).collect();
        AbGroup::from_moduli(&m).expect("moduli are at least 2")
    }

    pub fn element(&self, x: usize) -> Element {
        let g = self.to_abgroup();
        let c: Vec<i64> = self.coords(x).iter().map(|&c| c as i64).collect();
        g.elem(&c).expect("coordinates are reduced")
    }

    /// Index of a reduced element of the matching `AbGroup`.
    pub fn index_of(&self, x: &Element) -> usize {
        let c: Vec<u32> = x.coords().iter().map(|v| v.to_u32().expect("reduced coordinate")).collect();
        self.index(&c)
    }
}

pub fn is_bijective(table: &[u8], cod_order: usize) -> bool {
    if table.len() != cod_order {
        return false;
    }
    let mut seen: Mask = 0;
    for &y in table {
        seen |= 1 << y;
    }
    seen.count_ones() as usize == cod_order
}

/// Image of a subset under a table.
pub fn image(table: &[u8], m: Mask) -> Mask {
    bits(m).fold(0, |acc, x| acc | 1 << table[x])
}

/// Whether `table` maps `p` into `q`.
pub fn maps_into(table: &[u8], p: Mask, q: Mask) -> bool {
    image(table, p) & !q == 0
}

pub fn compose_tables(g: &[u8], f: &[u8]) -> Vec<u8> {
    f.iter().map(|&y| g[y as usize]).collect()
}

fn prime_factors(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every abelian group of the given order, once each, as invariant factors
/// `d₁ | d₂ | …`.
pub fn abelian_groups(order: usize) -> Vec<FinGroup> {
    let mut combos: Vec<Vec<u32>> = vec![vec![]];
    for (p, e) in prime_factors(order) {
        let mut next = Vec::new();
        for c in &combos {
            for part in partitions(e, e) {
                // part is descending; the i-th largest factor takes p^part[i]
                let len = c.len().max(part.len());
                let mut factors = vec![1u32; len];
                for (i, f) in c.iter().enumerate() {
                    factors[i] = *f;
                }
                for (i, k) in part.iter().enumerate() {
                    factors[i] *= (p as u32).pow(*k);
                }
                next.push(factors);
            }
        }
        combos = next;
    }
    combos
        .into_iter()
        .map(|mut f| {
            f.reverse();
            FinGroup::new(&f)
        })
        .collect()
}

/// A finite carrier with a cone (a subgroup mask).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPoag {
    pub group: Arc<FinGroup>,
    pub cone: Mask,
}

impl FinPoag {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn product(&self, other: &FinPoag) -> FinPoag {
        let g = Arc::new(self.group.product(&other.group));
        let n = other.order();
        let mut cone = 0;
        for x in bits(self.cone) {
            for z in bits(other.cone) {
                cone |= 1 << (x * n + z);
            }
        }
        FinPoag { group: g, cone }
    }

    pub fn to_poag(&self, name: &str) -> Poag {
        let g = self.group.to_abgroup();
        let gens: Vec<Element> = bits(self.cone).filter(|&x| x != 0).map(|x| self.group.element(x)).collect();
        Poag::new(name, Cone::generated(&g, gens).expect("elements of the group"))
    }

    pub fn monotone(&self, table: &[u8], cod: &FinPoag) -> bool {
        maps_into(table, self.cone, cod.cone)
    }
}

/// All finite poags with carriers of order at most `max_order`, by group
/// then cone.
pub fn all_fin_poags(max_order: usize) -> Vec<FinPoag> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        for g in abelian_groups(n) {
            let g = Arc::new(g);
            for cone in g.subgroups() {
                out.push(FinPoag { group: g.clone(), cone });
            }
        }
    }
    out
}

/// The same, as symbolic poags named by moduli and cone size.
pub fn all_finite_poags(max_order: usize) -> Vec<Poag> {
    all_fin_poags(max_order)
        .iter()
        .map(|p| {
            let name = format!("Z{:?}/{}", p.group.moduli(), p.cone.count_ones());
            p.to_poag(&name)
        })
        .collect()
}

/// Monotone maps between two finite poags, as tables.
pub fn monotone_homs(x: &FinPoag, y: &FinPoag) -> Vec<Vec<u8>> {
    x.group.homs_to(&y.group).into_iter().filter(|t| x.monotone(t, y)).collect()
}

/// The symbolic homomorphism with the given table.
pub fn table_to_hom(dom: &Poag, cod: &Poag, dg: &FinGroup, cg: &FinGroup, table: &[u8]) -> Result<Hom> {
    let cols: Vec<Vec<BigInt>> = (0..dg.moduli().len())
        .map(|i| cg.coords(table[dg.unit(i)] as usize).iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    Hom::new(dom, cod, IntMatrix::from_columns(cg.moduli().len(), &cols))
}

/// Cone of the precomma `f/g` on `X × Z`:
/// `{(x, z) : x ∈ P_X, z ∈ P_Z, g(z) - f(x) ∈ P_Y}`.
pub fn precomma_mask(x: &FinPoag, z: &FinPoag, y: &FinPoag, f: &[u8], g: &[u8]) -> Mask {
    let n = z.order();
    let mut m = 0;
    for a in bits(x.cone) {
        for c in bits(z.cone) {
            if y.cone & (1 << y.group.sub(g[c] as usize, f[a] as usize)) != 0 {
                m |= 1 << (a * n + c);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Budget;
    use crate::homs::enumerate_homs;

    #[test]
    fn group_counts() {
        let counts: Vec<usize> = (1..=16).map(|n| abelian_groups(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]);
        let m: Vec<Vec<u32>> = abelian_groups(8).iter().map(|g| g.moduli().to_vec()).collect();
        assert_eq!(m, vec![vec![8], vec![2, 4], vec![2, 2, 2]]);
        assert_eq!(abelian_groups(12)[1].moduli(), &[2, 6]);
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(FinGroup::new(&[2, 2]).subgroups().len(), 5);
        assert_eq!(FinGroup::new(&[2, 2, 2]).subgroups().len(), 16);
        assert_eq!(FinGroup::new(&[12]).subgroups().len(), 6);
        assert_eq!(FinGroup::trivial().subgroups(), vec![1]);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(FinGroup::new(&[2, 2, 2]).automorphisms().len(), 168);
        assert_eq!(FinGroup::new(&[2, 4]).automorphisms().len(), 8);
        assert_eq!(FinGroup::new(&[7]).automorphisms().len(), 6);
    }

    #[test]
    fn homs_agree_with_symbolic_enumeration() {
        let b = Budget::default();
        let ps = all_fin_poags(4);
        for x in &ps {
            for y in &ps {
                let tables = monotone_homs(x, y);
                let (sx, sy) = (x.to_poag("X"), y.to_poag("Y"));
                let symbolic = enumerate_homs(&sx, &sy, true, &b).unwrap();
                assert_eq!(tables.len(), symbolic.len());
                for t in &tables {
                    let h = table_to_hom(&sx, &sy, &x.group, &y.group, t).unwrap();
                    for (i, &img) in t.iter().enumerate() {
                        assert_eq!(h.apply(&x.group.element(i)).unwrap(), y.group.element(img as usize));
                    }
                }
            }
        }
    }

    #[test]
    fn cones_round_trip() {
        let b = Budget::default();
        for p in all_fin_poags(8) {
            let sp = p.to_poag("P");
            for x in 0..p.order() {
                let e = p.group.element(x);
                assert_eq!(p.group.index_of(&e), x);
                assert_eq!(sp.is_positive(&e, &b).unwrap(), p.cone & (1 << x) != 0);
            }
        }
    }
}
