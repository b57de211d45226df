//! Finite commutative unital quantales, abelian V-groups over finite
//! carriers, V-homomorphisms, their hom-preorder and the V-precomma.
//!
//! Every structure is given by explicit tables and validated exhaustively.
//! A V-group structure `a` is shift invariant, so it is determined by its
//! profile `φ(x) = a(0, x)` through `a(x, y) = φ(y - x)`.

use std::fmt;
use std::sync::Arc;

use crate::finite::{abelian_groups, compose_tables, is_bijective, FinGroup, FinPoag};

/// The law a candidate quantale breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    TableShape,
    OrderReflexive,
    OrderAntisymmetric,
    OrderTransitive,
    JoinUpperBound,
    JoinLeast,
    NoBottom,
    TensorCommutative,
    TensorAssociative,
    Unit,
    JoinDistributive,
    BottomAbsorbing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawViolation {
    pub law: Law,
    pub detail: String,
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.law, self.detail)
    }
}

impl std::error::Error for LawViolation {}

fn violation(law: Law, detail: impl Into<String>) -> LawViolation {
    LawViolation { law, detail: detail.into() }
}

/// A finite commutative unital quantale on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantale {
    names: Vec<String>,
    leq: Vec<bool>,
    join: Vec<u8>,
    meet: Vec<u8>,
    tensor: Vec<u8>,
    unit: u8,
    bottom: u8,
    top: u8,
}

impl Quantale {
    /// Validates all tables. `leq[i][j]` means `i ≤ j`.
    pub fn new(
        names: Vec<String>,
        leq: Vec<Vec<bool>>,
        join: Vec<Vec<u8>>,
        tensor: Vec<Vec<u8>>,
        unit: u8,
    ) -> Result<Self, LawViolation> {
        let n = names.len();
        let square = |t: usize, w: usize| t == n && w == n;
        if n == 0
            || !square(leq.len(), leq.iter().map(Vec::len).max().unwrap_or(0))
            || leq.iter().any(|r| r.len() != n)
            || join.len() != n
            || join.iter().any(|r| r.len() != n || r.iter().any(|&v| v as usize >= n))
            || tensor.len() != n
            || tensor.iter().any(|r| r.len() != n || r.iter().any(|&v| v as usize >= n))
            || unit as usize >= n
        {
            return Err(violation(Law::TableShape, "tables must be n×n over 0..n"));
        }
        let le = |i: usize, j: usize| leq[i][j];
        for i in 0..n {
            if !le(i, i) {
                return Err(violation(Law::OrderReflexive, format!("{} ≰ {}", names[i], names[i])));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && le(i, j) && le(j, i) {
                    return Err(violation(Law::OrderAntisymmetric, format!("{} and {}", names[i], names[j])));
                }
                for k in 0..n {
                    if le(i, j) && le(j, k) && !le(i, k) {
                        return Err(violation(
                            Law::OrderTransitive,
                            format!("{} ≤ {} ≤ {}", names[i], names[j], names[k]),
                        ));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let s = join[i][j] as usize;
                if !le(i, s) || !le(j, s) {
                    return Err(violation(Law::JoinUpperBound, format!("{} ∨ {}", names[i], names[j])));
                }
                if (0..n).any(|u| le(i, u) && le(j, u) && !le(s, u)) {
                    return Err(violation(Law::JoinLeast, format!("{} ∨ {}", names[i], names[j])));
                }
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| le(b, x)))
            .ok_or_else(|| violation(Law::NoBottom, "no least element"))?;
        // finite, binary joins and a bottom: a complete lattice
        let top = (0..n).find(|&t| (0..n).all(|x| le(x, t))).expect("joins give a top");
        let mut meet = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                let lower = (0..n).filter(|&x| le(x, i) && le(x, j));
                meet[i * n + j] = lower.fold(bottom, |acc, x| join[acc][x] as usize) as u8;
            }
        }
        let t = |i: usize, j: usize| tensor[i][j] as usize;
        for i in 0..n {
            for j in 0..n {
                if t(i, j) != t(j, i) {
                    return Err(violation(Law::TensorCommutative, format!("{} ⊗ {}", names[i], names[j])));
                }
                for k in 0..n {
                    if t(t(i, j), k) != t(i, t(j, k)) {
                        return Err(violation(
                            Law::TensorAssociative,
                            format!("{}, {}, {}", names[i], names[j], names[k]),
                        ));
                    }
                }
            }
            if t(i, unit as usize) != i || t(unit as usize, i) != i {
                return Err(violation(Law::Unit, format!("{} ⊗ unit", names[i])));
            }
        }
        if let Some(i) = (0..n).find(|&i| t(i, bottom) != bottom) {
            return Err(violation(Law::BottomAbsorbing, format!("{} ⊗ ⊥", names[i])));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if t(i, join[j][k] as usize) != join[t(i, j)][t(i, k)] as usize {
                        return Err(violation(
                            Law::JoinDistributive,
                            format!("{} ⊗ ({} ∨ {})", names[i], names[j], names[k]),
                        ));
                    }
                }
            }
        }
        Ok(Quantale {
            names,
            leq: leq.into_iter().flatten().collect(),
            join: join.into_iter().flatten().collect(),
            meet,
            tensor: tensor.into_iter().flatten().collect(),
            unit,
            bottom: bottom as u8,
            top: top as u8,
        })
    }

    /// Derives the join table from the order; a missing join is reported
    /// as a failure of the least-upper-bound law.
    pub fn from_order(names: Vec<String>, leq: Vec<Vec<bool>>, tensor: Vec<Vec<u8>>, unit: u8) -> Result<Self, LawViolation> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(violation(Law::TableShape, "order table must be n×n"));
        }
        let mut join = vec![vec![0u8; n]; n];
        for i in 0..n {
            for j in 0..n {
                let ubs: Vec<usize> = (0..n).filter(|&u| leq[i][u] && leq[j][u]).collect();
                let least = ubs.iter().copied().find(|&s| ubs.iter().all(|&u| leq[s][u]));
                match least {
                    Some(s) => join[i][j] = s as u8,
                    None => return Err(violation(Law::JoinLeast, format!("no join of {} and {}", names[i], names[j]))),
                }
            }
        }
        Quantale::new(names, leq, join, tensor, unit)
    }

    /// `{⊥ < ⊤}` with `⊗ = ∧`.
    pub fn boolean() -> Self {
        chain_quantale(2, |a, b| a.min(b), 1, &["false", "true"])
    }

    /// `0 < 1 < 2` with `⊗ = min`, unit 2.
    pub fn chain3() -> Self {
        chain_quantale(3, |a, b| a.min(b), 2, &["0", "1", "2"])
    }

    /// `0 < 1 < 2` with truncated addition read downwards: `a ⊗ b =
    /// max(0, a + b - 2)`, unit 2.
    pub fn lukasiewicz3() -> Self {
        chain_quantale(3, |a, b| (a + b).saturating_sub(2), 2, &["0", "1", "2"])
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name_of(&self, v: u8) -> &str {
        &self.names[v as usize]
    }

    pub fn value(&self, name: &str) -> Option<u8> {
        self.names.iter().position(|n| n == name).map(|i| i as u8)
    }

    #[inline]
    pub fn leq(&self, a: u8, b: u8) -> bool {
        self.leq[a as usize * self.size() + b as usize]
    }

    #[inline]
    pub fn join(&self, a: u8, b: u8) -> u8 {
        self.join[a as usize * self.size() + b as usize]
    }

    #[inline]
    pub fn meet(&self, a: u8, b: u8) -> u8 {
        self.meet[a as usize * self.size() + b as usize]
    }

    #[inline]
    pub fn tensor(&self, a: u8, b: u8) -> u8 {
        self.tensor[a as usize * self.size() + b as usize]
    }

    pub fn unit(&self) -> u8 {
        self.unit
    }

    pub fn bottom(&self) -> u8 {
        self.bottom
    }

    pub fn top(&self) -> u8 {
        self.top
    }

    /// Row-major tables, for printing and re-parsing.
    pub fn order_rows(&self) -> Vec<Vec<bool>> {
        self.leq.chunks(self.size()).map(<[bool]>::to_vec).collect()
    }

    pub fn join_rows(&self) -> Vec<Vec<u8>> {
        self.join.chunks(self.size()).map(<[u8]>::to_vec).collect()
    }

    pub fn tensor_rows(&self) -> Vec<Vec<u8>> {
        self.tensor.chunks(self.size()).map(<[u8]>::to_vec).collect()
    }
}

fn chain_quantale(n: usize, op: impl Fn(usize, usize) -> usize, unit: u8, names: &[&str]) -> Quantale {
    let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
    let tensor = (0..n).map(|i| (0..n).map(|j| op(i, j) as u8).collect()).collect();
    Quantale::from_order(names.iter().map(|s| s.to_string()).collect(), leq, tensor, unit).expect("a chain quantale")
}

/// The finite lattices on at most four elements, up to isomorphism, as
/// order tables: chains of length 1 to 4 and the square `2 × 2`.
pub fn small_lattices(max_size: usize) -> Vec<Vec<Vec<bool>>> {
    let mut out = Vec::new();
    for n in 1..=max_size.min(4) {
        out.push((0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect());
    }
    if max_size >= 4 {
        // 0 < 1, 2 < 3 with 1, 2 incomparable
        let le = |i: usize, j: usize| i == j || i == 0 || j == 3;
        out.push((0..4).map(|i| (0..4).map(|j| le(i, j)).collect()).collect());
    }
    out
}

/// Every commutative unital quantale structure on the lattices of
/// `small_lattices(max_size)`, by brute force over tensor tables.
pub fn all_quantales(max_size: usize) -> Vec<Quantale> {
    let mut out = Vec::new();
    for leq in small_lattices(max_size) {
        let n = leq.len();
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let bottom = (0..n).find(|&b| (0..n).all(|x| leq[b][x])).expect("lattice");
        for unit in 0..n {
            // free entries: unordered pairs of non-unit, non-bottom elements
            let free: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i..n).map(move |j| (i, j)))
                .filter(|&(i, j)| i != unit && j != unit && i != bottom && j != bottom)
                .collect();
            let total = n.pow(free.len() as u32);
            for code in 0..total {
                let mut t = vec![vec![0u8; n]; n];
                for i in 0..n {
                    t[i][unit] = i as u8;
                    t[unit][i] = i as u8;
                }
                for i in 0..n {
                    if i != unit {
                        t[i][bottom] = bottom as u8;
                        t[bottom][i] = bottom as u8;
                    }
                }
                let mut c = code;
                for &(i, j) in &free {
                    t[i][j] = (c % n) as u8;
                    t[j][i] = (c % n) as u8;
                    c /= n;
                }
                if let Ok(q) = Quantale::from_order(names.clone(), leq.clone(), t, unit as u8) {
                    out.push(q);
                }
            }
        }
    }
    out
}

/// A shift-invariant V-category structure on a finite abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VGroup {
    pub group: Arc<FinGroup>,
    pub quantale: Arc<Quantale>,
    a: Vec<u8>,
}

impl VGroup {
    /// Validates reflexivity `k ≤ a(x,x)`, transitivity
    /// `a(x,y) ⊗ a(y,z) ≤ a(x,z)` and shift invariance.
    pub fn from_table(group: Arc<FinGroup>, quantale: Arc<Quantale>, a: Vec<u8>) -> Result<Self, String> {
        let n = group.order();
        if a.len() != n * n || a.iter().any(|&v| v as usize >= quantale.size()) {
            return Err("structure table must be |X|×|X| over the quantale".into());
        }
        let at = |x: usize, y: usize| a[x * n + y];
        let q = &quantale;
        for x in 0..n {
            if !q.leq(q.unit(), at(x, x)) {
                return Err(format!("k ≰ a({x},{x})"));
            }
            for y in 0..n {
                for w in 0..n {
                    if at(x, y) != at(group.add(x, w), group.add(y, w)) {
                        return Err(format!("a({x},{y}) changes under the shift by {w}"));
                    }
                }
                for z in 0..n {
                    if !q.leq(q.tensor(at(x, y), at(y, z)), at(x, z)) {
                        return Err(format!("a({x},{y}) ⊗ a({y},{z}) ≰ a({x},{z})"));
                    }
                }
            }
        }
        Ok(VGroup { group, quantale, a })
    }

    /// `a(x, y) = φ(y - x)`.
    pub fn from_profile(group: Arc<FinGroup>, quantale: Arc<Quantale>, phi: &[u8]) -> Result<Self, String> {
        let n = group.order();
        if phi.len() != n {
            return Err("profile must have one value per element".into());
        }
        let a = (0..n * n).map(|i| phi[group.sub(i % n, i / n)]).collect();
        VGroup::from_table(group, quantale, a)
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    #[inline]
    pub fn a(&self, x: usize, y: usize) -> u8 {
        self.a[x * self.order() + y]
    }

    pub fn profile(&self) -> Vec<u8> {
        (0..self.order()).map(|x| self.a(0, x)).collect()
    }
}

/// `a(x, y) = ⊤` exactly when `y - x ∈ P`.
pub fn encode_boolean(p: &FinPoag, boolean: Arc<Quantale>) -> VGroup {
    let phi: Vec<u8> =
        (0..p.order()).map(|x| if p.cone & (1 << x) != 0 { boolean.top() } else { boolean.bottom() }).collect();
    VGroup::from_profile(p.group.clone(), boolean, &phi).expect("a cone gives a V-group")
}

/// The cone `{x : a(0, x) = ⊤}` of a Boolean V-group.
pub fn decode_boolean(v: &VGroup) -> FinPoag {
    let top = v.quantale.top();
    let cone = (0..v.order()).filter(|&x| v.a(0, x) == top).fold(0, |m, x| m | 1 << x);
    FinPoag { group: v.group.clone(), cone }
}

/// Structure-preserving group homomorphism: `a(x,y) ≤ b(f x, f y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VHom {
    pub dom: VGroup,
    pub cod: VGroup,
    pub table: Vec<u8>,
}

impl VHom {
    pub fn new(dom: &VGroup, cod: &VGroup, table: Vec<u8>) -> Result<Self, String> {
        if dom.quantale != cod.quantale {
            return Err("V-groups over different quantales".into());
        }
        let (n, m) = (dom.order(), cod.order());
        if table.len() != n || table.iter().any(|&y| y as usize >= m) {
            return Err("table does not map the carriers".into());
        }
        for x in 0..n {
            for y in 0..n {
                if table[dom.group.add(x, y)] as usize != cod.group.add(table[x] as usize, table[y] as usize) {
                    return Err(format!("not additive at ({x}, {y})"));
                }
            }
        }
        if !preserves(dom, cod, &table) {
            return Err("does not preserve the structure".into());
        }
        Ok(VHom { dom: dom.clone(), cod: cod.clone(), table })
    }

    pub fn compose(&self, first: &VHom) -> Result<VHom, String> {
        VHom::new(&first.dom, &self.cod, compose_tables(&self.table, &first.table))
    }
}

fn preserves(dom: &VGroup, cod: &VGroup, t: &[u8]) -> bool {
    // shift invariance reduces the check to pairs (0, x)
    let q = &dom.quantale;
    (0..dom.order()).all(|x| q.leq(dom.a(0, x), cod.a(t[0] as usize, t[x] as usize)))
}

/// Every V-homomorphism between two V-groups.
pub fn all_vhoms(dom: &VGroup, cod: &VGroup) -> Vec<Vec<u8>> {
    dom.group.homs_to(&cod.group).into_iter().filter(|t| preserves(dom, cod, t)).collect()
}

/// `f ≼ g` iff `a(0, x) ≤ b(f x, g x)` for all `x`.
pub fn vhom_leq(f: &VHom, g: &VHom) -> Result<bool, String> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err("maps are not parallel".into());
    }
    Ok(table_leq(&f.dom, &f.cod, &f.table, &g.table))
}

fn table_leq(dom: &VGroup, cod: &VGroup, f: &[u8], g: &[u8]) -> bool {
    let q = &dom.quantale;
    (0..dom.order()).all(|x| q.leq(dom.a(0, x), cod.a(f[x] as usize, g[x] as usize)))
}

#[derive(Debug, Clone)]
pub struct VPrecomma {
    pub f: VHom,
    pub g: VHom,
    pub object: VGroup,
    pub pi1: VHom,
    pub pi2: VHom,
}

/// `(X × Z, d)` with `d((x,z),(x',z')) = a(x,x') ∧ c(z,z') ∧ b(f(x'-x), g(z'-z))`.
pub fn v_precomma(f: &VHom, g: &VHom) -> Result<VPrecomma, String> {
    if f.cod != g.cod {
        return Err("the maps need a common codomain".into());
    }
    let (x, z, y) = (&f.dom, &g.dom, &f.cod);
    let q = x.quantale.clone();
    let group = Arc::new(x.group.product(&z.group));
    let (nx, nz) = (x.order(), z.order());
    let n = nx * nz;
    let mut d = vec![0u8; n * n];
    for p in 0..n {
        let (x1, z1) = (p / nz, p % nz);
        for r in 0..n {
            let (x2, z2) = (r / nz, r % nz);
            let fx = f.table[x.group.sub(x2, x1)] as usize;
            let gz = g.table[z.group.sub(z2, z1)] as usize;
            d[p * n + r] = q.meet(q.meet(x.a(x1, x2), z.a(z1, z2)), y.a(fx, gz));
        }
    }
    let object = VGroup::from_table(group, q, d)?;
    let pi1 = VHom::new(&object, x, (0..n).map(|p| (p / nz) as u8).collect())?;
    let pi2 = VHom::new(&object, z, (0..n).map(|p| (p % nz) as u8).collect())?;
    let c1 = table_leq(&object, y, &compose_tables(&f.table, &pi1.table), &compose_tables(&g.table, &pi2.table));
    if !c1 {
        return Err("fπ₁ ≼ gπ₂ fails".into());
    }
    Ok(VPrecomma { f: f.clone(), g: g.clone(), object, pi1, pi2 })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VUniversalReport {
    pub apexes: usize,
    pub c1: bool,
    pub lax_pairs: usize,
    pub unique: usize,
    pub missing: usize,
    pub ambiguous: usize,
    /// Pairs of lax pairs ordered componentwise, and how many of them had
    /// ordered mediating maps. Recorded, not required.
    pub c3_checked: usize,
    pub c3_held: usize,
}

impl VUniversalReport {
    pub fn passed(&self) -> bool {
        self.c1 && self.missing == 0 && self.ambiguous == 0 && self.unique == self.lax_pairs
    }

    pub fn merge(&mut self, o: &VUniversalReport) {
        self.apexes += o.apexes;
        self.c1 &= o.c1;
        self.lax_pairs += o.lax_pairs;
        self.unique += o.unique;
        self.missing += o.missing;
        self.ambiguous += o.ambiguous;
        self.c3_checked += o.c3_checked;
        self.c3_held += o.c3_held;
    }
}

/// Exhaustive (C1) and (C2) against every V-homomorphism out of each apex,
/// with (C3) outcomes recorded.
pub fn v_precomma_universal_check(pc: &VPrecomma, apexes: &[VGroup]) -> VUniversalReport {
    let (x, z, y) = (&pc.f.dom, &pc.g.dom, &pc.f.cod);
    let c1 = table_leq(
        &pc.object,
        y,
        &compose_tables(&pc.f.table, &pc.pi1.table),
        &compose_tables(&pc.g.table, &pc.pi2.table),
    );
    let mut r = VUniversalReport { apexes: apexes.len(), c1, ..Default::default() };
    for w in apexes {
        let alphas = all_vhoms(w, x);
        let betas = all_vhoms(w, z);
        let lambdas = all_vhoms(w, &pc.object);
        let mut lax: Vec<(usize, usize, Option<usize>)> = Vec::new();
        for (i, al) in alphas.iter().enumerate() {
            let fa = compose_tables(&pc.f.table, al);
            for (j, be) in betas.iter().enumerate() {
                if !table_leq(w, y, &fa, &compose_tables(&pc.g.table, be)) {
                    continue;
                }
                r.lax_pairs += 1;
                let hits: Vec<usize> = lambdas
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| compose_tables(&pc.pi1.table, l) == *al && compose_tables(&pc.pi2.table, l) == *be)
                    .map(|(k, _)| k)
                    .collect();
                match hits.len() {
                    0 => r.missing += 1,
                    1 => r.unique += 1,
                    _ => r.ambiguous += 1,
                }
                lax.push((i, j, hits.first().copied()));
            }
        }
        for &(i, j, l) in &lax {
            for &(i2, j2, l2) in &lax {
                if table_leq(w, x, &alphas[i], &alphas[i2]) && table_leq(w, z, &betas[j], &betas[j2]) {
                    if let (Some(l), Some(l2)) = (l, l2) {
                        r.c3_checked += 1;
                        if table_leq(w, &pc.object, &lambdas[l], &lambdas[l2]) {
                            r.c3_held += 1;
                        }
                    }
                }
            }
        }
    }
    r
}

/// Every V-group structure on the groups of order at most `max_order`.
pub fn all_vgroups(q: &Arc<Quantale>, max_order: usize) -> Vec<VGroup> {
    let mut out = Vec::new();
    let k = q.size();
    for n in 1..=max_order {
        for g in abelian_groups(n) {
            let g = Arc::new(g);
            let total = k.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let phi: Vec<u8> = (0..n)
                    .map(|_| {
                        let v = (c % k) as u8;
                        c /= k;
                        v
                    })
                    .collect();
                if !q.leq(q.unit(), phi[0]) {
                    continue;
                }
                let ok = (0..n).all(|x| (0..n).all(|y| q.leq(q.tensor(phi[x], phi[y]), phi[g.add(x, y)])));
                if ok {
                    out.push(VGroup::from_profile(g.clone(), q.clone(), &phi).expect("profile checked"));
                }
            }
        }
    }
    out
}

/// Per-quantale tallies of the lax preprotomodularity sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuantaleTally {
    pub size: usize,
    /// Whether the unit is the top element.
    pub integral: bool,
    pub vgroups: usize,
    pub instances: u64,
    pub v_iso: u64,
    pub violations: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VSweepReport {
    pub quantales: usize,
    pub vgroups: usize,
    pub instances: u64,
    pub v_iso: u64,
    pub violations: u64,
    pub inverse_failures: u64,
    /// Precommas built, and those failing (C1) or the V-group laws.
    pub precommas: u64,
    pub precomma_failures: u64,
    pub per_quantale: Vec<QuantaleTally>,
    /// The first violating instance met, described by its tables.
    pub first_violation: Option<String>,
}

impl VSweepReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.inverse_failures == 0 && self.precomma_failures == 0
    }

    /// Violations on quantales whose unit is the top element.
    pub fn integral_violations(&self) -> u64 {
        self.per_quantale.iter().filter(|t| t.integral).map(|t| t.violations).sum()
    }
}

/// `V_α(γ) = 1 × γ` iso implies `γ` iso, over every quantale given, every
/// V-group on groups of order at most `max_order`, every `α`, `f` and
/// slice morphism `γ`, with precomma carriers of at most `max_product`
/// elements. Isos are bijections whose inverse preserves the structure.
pub fn vab_lax_preproto_sweep(quantales: &[Arc<Quantale>], max_order: usize, max_product: usize) -> VSweepReport {
    let mut r = VSweepReport { quantales: quantales.len(), ..Default::default() };
    for q in quantales {
        let vs = all_vgroups(q, max_order);
        let mut tally = QuantaleTally { size: q.size(), integral: q.unit() == q.top(), vgroups: vs.len(), ..Default::default() };
        let homs: Vec<Vec<Vec<Vec<u8>>>> = vs.iter().map(|x| vs.iter().map(|y| all_vhoms(x, y)).collect()).collect();
        let profiles: Vec<Vec<u8>> = vs.iter().map(VGroup::profile).collect();
        for yi in 0..vs.len() {
            let yg = &vs[yi].group;
            let py = &profiles[yi];
            for ai in 0..vs.len() {
                let na = vs[ai].order();
                let pa = &profiles[ai];
                for alpha in &homs[ai][yi] {
                    for xi in 0..vs.len() {
                        let nx = vs[xi].order();
                        if na * nx > max_product {
                            continue;
                        }
                        for f in &homs[xi][yi] {
                            // built and validated once through the full formula
                            let Some(df) = precomma_of(&vs[ai], &vs[xi], &vs[yi], alpha, f) else {
                                r.precomma_failures += 1;
                                continue;
                            };
                            r.precommas += 1;
                            let pf = df.profile();
                            for zi in 0..vs.len() {
                                let nz = vs[zi].order();
                                if na * nz > max_product || nz != nx {
                                    // γ cannot be bijective, so V_α(γ) is not an iso
                                    tally.instances += homs[zi][xi].len() as u64;
                                    continue;
                                }
                                let pz = &profiles[zi];
                                for gamma in &homs[zi][xi] {
                                    tally.instances += 1;
                                    if !is_bijective(gamma, nx) {
                                        continue;
                                    }
                                    // d_g(0, (a, z)) = φ_A(a) ∧ φ_Z(z) ∧ φ_Y(g z - α a), g = fγ
                                    let v_iso = (0..na * nz).all(|i| {
                                        let (a, z) = (i / nz, i % nz);
                                        let gz = f[gamma[z] as usize] as usize;
                                        let dg = q.meet(q.meet(pa[a], pz[z]), py[yg.sub(gz, alpha[a] as usize)]);
                                        pf[a * nx + gamma[z] as usize] == dg
                                    });
                                    if !v_iso {
                                        continue;
                                    }
                                    tally.v_iso += 1;
                                    let gamma_iso = reflects(&vs[zi], &vs[xi], gamma);
                                    if !gamma_iso {
                                        tally.violations += 1;
                                        if r.first_violation.is_none() {
                                            r.first_violation = Some(format!(
                                                "quantale tensor {:?} unit {}; A = Z{:?} φ {:?}; Y = Z{:?} φ {:?}; \
                                                 X = Z{:?} φ {:?}; Z = Z{:?} φ {:?}; α {:?}; f {:?}; γ {:?}",
                                                q.tensor_rows(),
                                                q.unit(),
                                                vs[ai].group.moduli(),
                                                pa,
                                                vs[yi].group.moduli(),
                                                py,
                                                vs[xi].group.moduli(),
                                                profiles[xi],
                                                vs[zi].group.moduli(),
                                                pz,
                                                alpha,
                                                f,
                                                gamma
                                            ));
                                        }
                                    }
                                    let mut g_inv = vec![0u8; nx];
                                    for (z, &x) in gamma.iter().enumerate() {
                                        g_inv[x as usize] = z as u8;
                                    }
                                    // ρ₂ V⁻¹ ⟨0, 1⟩ is γ⁻¹ on carriers; it must preserve the structure
                                    if !preserves(&vs[xi], &vs[zi], &g_inv) {
                                        r.inverse_failures += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        r.vgroups += tally.vgroups;
        r.instances += tally.instances;
        r.v_iso += tally.v_iso;
        r.violations += tally.violations;
        r.per_quantale.push(tally);
    }
    r
}

/// The precomma `α/f` as a V-group, or `None` when it fails a law.
fn precomma_of(a: &VGroup, x: &VGroup, y: &VGroup, alpha: &[u8], f: &[u8]) -> Option<VGroup> {
    let fa = VHom { dom: a.clone(), cod: y.clone(), table: alpha.to_vec() };
    let ff = VHom { dom: x.clone(), cod: y.clone(), table: f.to_vec() };
    v_precomma(&fa, &ff).ok().map(|p| p.object)
}

/// A bijective V-homomorphism whose inverse is one too: `b(t x, t y) ≤ a(x, y)`.
fn reflects(dom: &VGroup, cod: &VGroup, t: &[u8]) -> bool {
    is_bijective(t, cod.order()) && (0..dom.order()).all(|x| cod.a(t[0] as usize, t[x] as usize) == dom.a(0, x))
}

/// All pairs `(f, g)` of V-homomorphisms into a common codomain among the
/// V-groups of order at most `max_order`, each precomma checked against
/// every V-group of order at most `apex_order` as apex.
pub fn v_universal_sweep(quantales: &[Arc<Quantale>], max_order: usize, apex_order: usize) -> VUniversalReport {
    let mut total = VUniversalReport { c1: true, ..Default::default() };
    for q in quantales {
        let vs = all_vgroups(q, max_order);
        let apexes: Vec<VGroup> = vs.iter().filter(|v| v.order() <= apex_order).cloned().collect();
        for y in &vs {
            for x in &vs {
                for z in &vs {
                    for f in all_vhoms(x, y) {
                        for g in all_vhoms(z, y) {
                            let fh = VHom { dom: x.clone(), cod: y.clone(), table: f.clone() };
                            let gh = VHom { dom: z.clone(), cod: y.clone(), table: g };
                            match v_precomma(&fh, &gh) {
                                Ok(pc) => total.merge(&v_precomma_universal_check(&pc, &apexes)),
                                Err(_) => total.c1 = false,
                            }
                        }
                    }
                }
            }
        }
    }
    total
}

/// Whether the precomma cone of `f/g` on finite poags matches the
/// Boolean-encoded V-precomma elementwise.
pub fn boolean_agrees(x: &FinPoag, z: &FinPoag, y: &FinPoag, f: &[u8], g: &[u8], cone: u64) -> bool {
    let b = Arc::new(Quantale::boolean());
    let (ex, ez, ey) = (encode_boolean(x, b.clone()), encode_boolean(z, b.clone()), encode_boolean(y, b));
    let (Ok(fh), Ok(gh)) = (VHom::new(&ex, &ey, f.to_vec()), VHom::new(&ez, &ey, g.to_vec())) else {
        return false;
    };
    match v_precomma(&fh, &gh) {
        Ok(pc) => decode_boolean(&pc.object).cone == cone,
        Err(_) => false,
    }
}

/// Twenty tables each breaking one quantale law, built from valid ones.
pub fn mutation_suite() -> Vec<(Law, Result<Quantale, LawViolation>)> {
    let names = |n: usize| -> Vec<String> { (0..n).map(|i| i.to_string()).collect() };
    let chain = |n: usize| -> Vec<Vec<bool>> { (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect() };
    let min_t = |n: usize| -> Vec<Vec<u8>> { (0..n).map(|i| (0..n).map(|j| i.min(j) as u8).collect()).collect() };
    let max_j = |n: usize| -> Vec<Vec<u8>> { (0..n).map(|i| (0..n).map(|j| i.max(j) as u8).collect()).collect() };
    let mut out = Vec::new();
    let mut push = |law: Law, leq: Vec<Vec<bool>>, join: Vec<Vec<u8>>, t: Vec<Vec<u8>>, unit: u8, n: usize| {
        out.push((law, Quantale::new(names(n), leq, join, t, unit)));
    };

    // order laws
    let mut l = chain(3);
    l[1][1] = false;
    push(Law::OrderReflexive, l, max_j(3), min_t(3), 2, 3);
    let mut l = chain(2);
    l[0][0] = false;
    push(Law::OrderReflexive, l, max_j(2), min_t(2), 1, 2);
    let mut l = chain(3);
    l[2][1] = true;
    push(Law::OrderAntisymmetric, l, max_j(3), min_t(3), 2, 3);
    let mut l = chain(2);
    l[1][0] = true;
    push(Law::OrderAntisymmetric, l, max_j(2), min_t(2), 1, 2);
    let mut l = chain(3);
    l[0][2] = false;
    push(Law::OrderTransitive, l, max_j(3), min_t(3), 2, 3);
    let mut l = chain(4);
    l[1][3] = false;
    push(Law::OrderTransitive, l, max_j(4), min_t(4), 3, 4);
    // join laws
    let mut j = max_j(3);
    j[0][2] = 1;
    push(Law::JoinUpperBound, chain(3), j, min_t(3), 2, 3);
    let mut j = max_j(2);
    j[1][0] = 0;
    push(Law::JoinUpperBound, chain(2), j, min_t(2), 1, 2);
    let mut j = max_j(3);
    j[0][1] = 2;
    push(Law::JoinLeast, chain(3), j, min_t(3), 2, 3);
    let mut j = max_j(3);
    j[0][0] = 2;
    push(Law::JoinLeast, chain(3), j, min_t(3), 2, 3);
    // two incomparable minimal elements under a top
    let l: Vec<Vec<bool>> = (0..3).map(|i| (0..3).map(|k| i == k || k == 2).collect()).collect();
    let j: Vec<Vec<u8>> = (0..3).map(|i| (0..3).map(|k| if i == k { i as u8 } else { 2 }).collect()).collect();
    let t: Vec<Vec<u8>> = (0..3).map(|i| (0..3).map(|k| if i == k { i as u8 } else { 2 }).collect()).collect();
    push(Law::NoBottom, l, j, t, 2, 3);
    // tensor laws
    let mut t = min_t(4);
    t[1][2] = 2;
    push(Law::TensorCommutative, chain(4), max_j(4), t, 3, 4);
    let mut t = min_t(3);
    t[0][1] = 1;
    push(Law::TensorCommutative, chain(3), max_j(3), t, 2, 3);
    // on 0 < 1 < 2 < 3 with unit 3: 1⊗1 = 2 and 1⊗2 = 1 break associativity
    let mut t = min_t(4);
    t[1][1] = 2;
    t[1][2] = 1;
    t[2][1] = 1;
    t[2][2] = 1;
    push(Law::TensorAssociative, chain(4), max_j(4), t, 3, 4);
    let mut t = min_t(3);
    t[2][2] = 1;
    push(Law::Unit, chain(3), max_j(3), t, 2, 3);
    push(Law::Unit, chain(3), max_j(3), min_t(3), 1, 3);
    let mut t = min_t(2);
    t[1][1] = 0;
    push(Law::Unit, chain(2), max_j(2), t, 1, 2);
    // on 0 < 1 < 2 < 3 with unit 3, 1⊗1 = 1 but 1⊗2 = 0: associative,
    // not monotone, so 1⊗(1 ∨ 2) ≠ 1⊗1 ∨ 1⊗2
    let mut t = min_t(4);
    t[1][2] = 0;
    t[2][1] = 0;
    t[2][2] = 0;
    push(Law::JoinDistributive, chain(4), max_j(4), t, 3, 4);
    let mut t = min_t(3);
    t[1][0] = 1;
    t[0][1] = 1;
    push(Law::BottomAbsorbing, chain(3), max_j(3), t, 2, 3);
    push(Law::TableShape, chain(3), max_j(2), min_t(3), 2, 3);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{all_fin_poags, bits, monotone_homs, precomma_mask};

    #[test]
    fn standard_quantales() {
        for q in [Quantale::boolean(), Quantale::chain3(), Quantale::lukasiewicz3()] {
            assert_eq!(q.top() as usize, q.size() - 1);
            assert_eq!(q.bottom(), 0);
        }
        let q = Quantale::lukasiewicz3();
        assert_eq!(q.tensor(1, 1), 0);
        assert_eq!(q.meet(1, 2), 1);
    }

    #[test]
    fn mutations_are_rejected_by_the_intended_law() {
        let suite = mutation_suite();
        assert_eq!(suite.len(), 20);
        for (law, outcome) in suite {
            match outcome {
                Err(v) => assert_eq!(v.law, law, "{}", v),
                Ok(_) => panic!("mutation for {:?} accepted", law),
            }
        }
    }

    #[test]
    fn quantale_enumeration() {
        let qs = all_quantales(3);
        // trivial, Boolean, and the chain 0<1<2: unit top with 1⊗1 ∈ {0,1},
        // or unit 1 with 2⊗2 = 2
        assert_eq!(qs.len(), 5);
        assert!(all_quantales(4).len() > qs.len());
    }

    #[test]
    fn boolean_vgroups_are_cones() {
        let b = Arc::new(Quantale::boolean());
        let vs = all_vgroups(&b, 8);
        assert_eq!(vs.len(), all_fin_poags(8).len());
    }

    #[test]
    fn boolean_encoding_commutes_with_precomma() {
        let ps = all_fin_poags(4);
        for x in &ps {
            for y in &ps {
                for f in monotone_homs(x, y) {
                    for g in monotone_homs(x, y) {
                        let m = precomma_mask(x, x, y, &f, &g);
                        assert!(boolean_agrees(x, x, y, &f, &g, m));
                    }
                }
            }
        }
    }

    #[test]
    fn vhom_leq_matches_boolean_reading() {
        let b = Arc::new(Quantale::boolean());
        let ps = all_fin_poags(4);
        for x in &ps {
            for y in &ps {
                let (ex, ey) = (encode_boolean(x, b.clone()), encode_boolean(y, b.clone()));
                let hs = monotone_homs(x, y);
                assert_eq!(hs, all_vhoms(&ex, &ey));
                for f in &hs {
                    for g in &hs {
                        let lit = bits(x.cone).all(|p| y.cone & (1 << y.group.sub(g[p] as usize, f[p] as usize)) != 0);
                        let fv = VHom::new(&ex, &ey, f.clone()).unwrap();
                        let gv = VHom::new(&ex, &ey, g.clone()).unwrap();
                        assert_eq!(vhom_leq(&fv, &gv).unwrap(), lit);
                    }
                }
            }
        }
    }

    #[test]
    fn precomma_into_trivial_is_product() {
        let q = Arc::new(Quantale::chain3());
        let g2 = Arc::new(FinGroup::new(&[2]));
        let x = VGroup::from_profile(g2.clone(), q.clone(), &[2, 1]).unwrap();
        let y = VGroup::from_profile(Arc::new(FinGroup::trivial()), q.clone(), &[2]).unwrap();
        let f = VHom::new(&x, &y, vec![0, 0]).unwrap();
        let pc = v_precomma(&f, &f).unwrap();
        for p in 0..4 {
            assert_eq!(pc.object.a(0, p), q.meet(x.a(0, p / 2), x.a(0, p % 2)));
        }
    }

    #[test]
    fn chain3_on_z2() {
        let q = Arc::new(Quantale::chain3());
        let g2 = Arc::new(FinGroup::new(&[2]));
        let x = VGroup::from_profile(g2.clone(), q.clone(), &[2, 1]).unwrap();
        let y = VGroup::from_profile(g2.clone(), q.clone(), &[2, 0]).unwrap();
        let f = VHom::new(&y, &x, vec![0, 1]).unwrap();
        let id = VHom::new(&x, &x, vec![0, 1]).unwrap();
        let pc = v_precomma(&f, &id).unwrap();
        // d(0, (1, 1)) = b(0,1) ∧ a(0,1) ∧ a(f 1, 1) = 0 ∧ 1 ∧ 2
        assert_eq!(pc.object.a(0, 3), 0);
        // d(0, (0, 1)) = 2 ∧ 1 ∧ a(0, 1) = 1
        assert_eq!(pc.object.a(0, 1), 1);
        let apexes = all_vgroups(&q, 2);
        let r = v_precomma_universal_check(&pc, &apexes);
        assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn bad_structures_rejected() {
        let q = Arc::new(Quantale::chain3());
        let g2 = Arc::new(FinGroup::new(&[2]));
        assert!(VGroup::from_profile(g2.clone(), q.clone(), &[1, 2]).is_err());
        assert!(VGroup::from_table(g2, q, vec![2, 1, 0, 2]).is_err());
    }

    #[test]
    fn small_sweeps() {
        let qs: Vec<Arc<Quantale>> = vec![Arc::new(Quantale::boolean()), Arc::new(Quantale::chain3())];
        let r = vab_lax_preproto_sweep(&qs, 2, 4);
        assert!(r.passed() && r.v_iso > 0, "{:?}", r);
        let u = v_universal_sweep(&qs, 2, 2);
        assert!(u.passed(), "{:?}", u);
    }
}
