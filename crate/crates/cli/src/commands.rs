//! Verb dispatch. Each verb turns workspace names into calls on the core
//! library and collects the answers as report items.

use std::collections::BTreeMap;
use std::sync::Arc;

use ordab::constructions::{
    horizontal_kernel, is_precomma_square, is_pullback_square, precomma, pullback, vertical_kernel, Square, SquareKind,
};
use ordab::factorization::{
    factor_e_m, factor_e_prime_m_prime, fill_diagonal, in_e, in_e_prime, in_m, in_m_prime, stability_probe,
};
use ordab::homs::{hom_leq, is_epi, is_fully_faithful, is_iso, is_mono, is_monotone, Hom};
use ordab::intlin::oracle::{hilbert_disagreement, minor_gcd_invariant_factors};
use ordab::intlin::{smith_normal_form, IntMatrix};
use ordab::points::{
    classical_ssfl, h_apply, h_on_morphism, h_rali_witness, is_lali, is_rali, jointly_extremally_epi, ssfl_check,
    v_apply, v_conservative_instance, OrderReading, Point, PointMorphism, SsflDiagram,
};
use ordab::sweep::{
    factorization_suite, ff_sweep, h_rali_sweep, jee_sweep, random_finite_monotone, random_free_monotone,
    v_conservative_sweep, FiniteUniverse,
};
use ordab::vgroups::{all_quantales, v_precomma, v_universal_sweep, vab_lax_preproto_sweep};
use ordab::{Budget, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::lang::Workspace;
use crate::report::{is_budget, poag_json, Item, ItemKind, Report, ToJson};

pub const VERBS: &[&str] = &[
    "precomma",
    "pullback",
    "kernel",
    "check",
    "vfun",
    "hfun",
    "factorize",
    "fill",
    "stability",
    "ssfl",
    "sweep",
    "paper-suite",
];

pub const PREDICATES: &[&str] = &[
    "monotone",
    "hom-leq",
    "mono",
    "epi",
    "iso",
    "fully-faithful",
    "rali",
    "lali",
    "jointly-extremally-epi",
    "in-e",
    "in-e-prime",
    "in-m",
    "in-m-prime",
    "precomma-square",
    "pullback-square",
];

pub const SWEEPS: &[&str] =
    &["conservative", "h-rali", "jee", "ff", "factorization", "hilbert", "snf", "vab", "v-universal"];

#[derive(Debug, Clone)]
pub struct Options {
    pub budget: u64,
    pub bound: Option<u64>,
    pub ambient: bool,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { budget: Budget::default().limit(), bound: None, ambient: false, seed: 0 }
    }
}

impl Options {
    pub fn reading(&self) -> OrderReading {
        if self.ambient {
            OrderReading::Ambient
        } else {
            OrderReading::Literal
        }
    }

    pub fn inputs(&self, args: &[String]) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        m.insert("args".into(), json!(args));
        m.insert("budget".into(), json!(self.budget));
        m.insert("bound".into(), json!(self.bound));
        m.insert("ambient_order".into(), json!(self.ambient));
        m.insert("seed".into(), json!(self.seed));
        m
    }
}

/// Failures that are not verdicts: bad arguments or inputs that violate a
/// precondition. Both map to exit code 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommandError {
    Usage(String),
    Invalid(String),
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::Usage(m) => write!(f, "usage: {}", m),
            CommandError::Invalid(m) => write!(f, "invalid input: {}", m),
        }
    }
}

type CmdResult<T> = Result<T, CommandError>;

fn usage<T>(m: impl Into<String>) -> CmdResult<T> {
    Err(CommandError::Usage(m.into()))
}

/// Runs `f`; a budget cut-off becomes an unknown item, any other library
/// error an invalid-input error.
fn guarded(id: &str, kind: ItemKind, f: impl FnOnce() -> ordab::Result<Vec<Item>>) -> CmdResult<Vec<Item>> {
    match f() {
        Ok(items) => Ok(items),
        Err(e) if is_budget(&e) => Ok(vec![Item::exhausted(id, kind)]),
        Err(e) => Err(CommandError::Invalid(e.to_string())),
    }
}

struct Ctx<'a> {
    ws: &'a Workspace,
    opts: &'a Options,
    budget: Budget,
}

impl<'a> Ctx<'a> {
    fn hom(&self, name: &str) -> CmdResult<Hom> {
        self.ws.hom(name).cloned().ok_or_else(|| CommandError::Usage(format!("no morphism named '{}'", name)))
    }

    fn point(&self, name: &str) -> CmdResult<Point> {
        self.ws.points.get(name).cloned().ok_or_else(|| CommandError::Usage(format!("no point named '{}'", name)))
    }

    fn args<'b>(&self, args: &'b [String], n: usize, shape: &str) -> CmdResult<&'b [String]> {
        if args.len() != n {
            return usage(shape.to_string());
        }
        Ok(args)
    }
}

/// Runs one verb against a workspace.
pub fn run(verb: &str, args: &[String], ws: &Workspace, opts: &Options) -> CmdResult<Report> {
    let ctx = Ctx { ws, opts, budget: Budget::new(opts.budget) };
    let mut report = Report::new(verb, opts.inputs(args));
    let items = match verb {
        "precomma" => precomma_cmd(&ctx, args)?,
        "pullback" => pullback_cmd(&ctx, args)?,
        "kernel" => kernel_cmd(&ctx, args)?,
        "check" => check_cmd(&ctx, args)?,
        "vfun" => vfun_cmd(&ctx, args)?,
        "hfun" => hfun_cmd(&ctx, args)?,
        "factorize" => factorize_cmd(&ctx, args)?,
        "fill" => fill_cmd(&ctx, args)?,
        "stability" => stability_cmd(&ctx, args)?,
        "ssfl" => ssfl_cmd(&ctx, args)?,
        "sweep" => sweep_cmd(&ctx, args)?,
        "paper-suite" => {
            ctx.args(args, 0, "paper-suite takes no arguments")?;
            crate::suite::paper_suite_items(&ctx.budget)
        }
        _ => return usage(format!("unknown verb '{}'; expected one of {}", verb, VERBS.join(", "))),
    };
    for i in items {
        report.push(i);
    }
    Ok(report.finish(&ctx.budget))
}

fn precomma_cmd(ctx: &Ctx, args: &[String]) -> CmdResult<Vec<Item>> {
    let a = ctx.args(args, 2, "precomma F G")?;
    if let (Some(f), Some(g)) = (ctx.ws.vhoms.get(&a[0]), ctx.ws.vhoms.get(&a[1])) {
        let pc = v_precomma(f, g).map_err(CommandError::Invalid)?;
        let q = &pc.object.quantale;
        let profile: Vec<&str> = pc.object.profile().iter().map(|&v| q.name_of(v)).collect();
        return Ok(vec![Item::yes("v-precomma", ItemKind::Construction).with_data(json!({
            "order": pc.object.order(),
            "profile": profile,
            "pi1": pc.pi1.table,
            "pi2": pc.pi2.table,
        }))]);
    }
    let (f, g) = (ctx.hom(&a[0])?, ctx.hom(&a[1])?);
    let b = &ctx.budget;
    guarded("precomma", ItemKind::Construction, || {
        let pc = precomma(&f, &g, b)?;
        Ok(vec![Item::yes("precomma", ItemKind::Construction).with_data(json!({
            "object": poag_json(&pc.object, b),
            "pi1": pc.pi1.to_json(),
            "pi2": pc.pi2.to_json(),
            "section2": pc.section2.to_json(),
        }))])
    })
}

fn pullback_cmd(ctx: &Ctx, args: &[String]) -> CmdResult<Vec<Item>> {
    let a = ctx.args(args, 2, "pullback F G")?;
    let (f, g) = (ctx.hom(&a[0])?, ctx.hom(&a[1])?);
    let b = &ctx.budget;
    guarded("pullback", ItemKind::Construction, || {
        let pb = pullback(&f, &g)?;
        Ok(vec![Item::yes("pullback", ItemKind::Construction).with_data(json!({
            "object": poag_json(&pb.object, b),
            "p1": pb.p1.to_json(),
            "p2": pb.p2.to_json(),
        }))])
    })
}

fn kernel_cmd(ctx: &Ctx, args: &[String]) -> CmdResult<Vec<Item>> {
    let a = ctx.args(args, 1, "kernel F")?;
    let f = ctx.hom(&a[0])?;
    let b = &ctx.budget;
    guarded("kernel", ItemKind::Construction, || {
        let v = vertical_kernel(&f, b)?;
        let h = horizontal_kernel(&f, b)?;
        Ok(vec![
            Item::yes("vertical-kernel", ItemKind::Construction)
                .with_data(json!({ "object": poag_json(&v.object, b), "pi2": v.pi2.to_json() })),
            Item::yes("horizontal-kernel", ItemKind::Construction)
                .with_data(json!({ "object": poag_json(&h.object, b), "pi1": h.pi1.to_json() })),
        ])
    })
}

fn check_cmd(ctx: &Ctx, args: &[String]) -> CmdResult<Vec<Item>> {
    let Some((pred, rest)) = args.split_first() else {
        return usage(format!("check PREDICATE TARGET...; predicates: {}", PREDICATES.join(", ")));
    };
    let b = &ctx.budget;
    let k = ItemKind::Check;
    let id = pred.as_str();
    match id {
        "monotone" | "mono" | "epi" | "iso" | "fully-faithful" | "in-e" | "in-e-prime" | "in-m" | "in-m-prime" => {
            let a = ctx.args(rest, 1, &format!("check {} F", id))?;
            let f = ctx.hom(&a[0])?;
            guarded(id, k, || {
                Ok(vec![match id {
                    "monotone" => Item::from_verdict(id, k, &is_monotone(&f, b)?),
                    "mono" => Item::from_verdict(id, k, &is_mono(&f)?),
                    "epi" => Item::from_verdict(id, k, &is_epi(&f)?),
                    "iso" => Item::from_verdict(id, k, &is_iso(&f, b)?),
                    "fully-faithful" => Item::from_verdict(id, k, &is_fully_faithful(&f, b)?),
                    "in-e" => Item::from_verdict(id, k, &in_e(&f, b)?),
                    "in-e-prime" => Item::from_verdict(id, k, &in_e_prime(&f, b)?),
                    "in-m" => Item::from_verdict(id, k, &in_m(&f, b)?),
                    _ => Item::from_verdict(id, k, &in_m_prime(&f, b)?),
                }])
            })
        }
        "hom-leq" | "jointly-extremally-epi" => {
            let a = ctx.args(rest, 2, &format!("check {} F G", id))?;
            let (f, g) = (ctx.hom(&a[0])?, ctx.hom(&a[1])?);
            guarded(id, k, || {
                Ok(vec![if id == "hom-leq" {
                    Item::from_verdict(id, k, &hom_leq(&f, &g, b)?)
                } else {
                    Item::from_verdict(id, k, &jointly_extremally_epi(&f, &g, b)?)
                }])
            })
        }
        "rali" | "lali" => {
            let a = ctx.args(rest, 1, &format!("check {} POINT", id))?;
            let p = ctx.point(&a[0])?;
            let test = if id == "rali" { is_rali } else { is_lali };
            guarded(id, k, || {
                let v = test(&p, ctx.opts.reading(), b)?;
                let mut item = Item::from_verdict(id, k, &v);
                if p.total().ambient_cone().is_some() {
                    let other = if ctx.opts.ambient { OrderReading::Literal } else { OrderReading::Ambient };
                    let w = test(&p, other, b)?;
                    item = item.with_note(format!(
                        "open question: the total object is a precomma; with the {} reading this is {}. \
                         The literal reading uses the precomma's own cone, --ambient-order the product cone",
                        if ctx.opts.ambient { "literal" } else { "ambient" },
                        w.label()
                    ));
                }
                Ok(vec![item])
            })
        }
        "precomma-square" | "pullback-square" => {
            let a = ctx.args(rest, 4, &format!("check {} TOP LEFT RIGHT BOTTOM", id))?;
            let hs: Vec<Hom> = a.iter().map(|n| ctx.hom(n)).collect::<CmdResult<_>>()?;
            let kind = if id == "precomma-square" { SquareKind::Lax } else { SquareKind::Strict };
            guarded(id, k, || {
                let sq = Square::new(hs[0].clone(), hs[1].clone(), hs[2].clone(), hs[3].clone(), kind, b)?;
                let v = if id == "precomma-square" { is_precomma_square(&sq, b)? } else { is_pullback_square(&sq, b)? };
                Ok(vec![Item::from_verdict(id, k, &v)])
            })
        }
        _ => usage(format!("unknown predicate '{}'; expected one of {}", id, PREDICATES.join(", "))),
    }
}

fn point_json(p: &Point) -> Value {
    json!({ "f": p.f.to_json(), "s": p.s.to_json() })
}

fn vfun_cmd(ctx: &Ctx, args: &[String]) -> CmdResult<Vec<Item>> {
    change_of_base(ctx, args, true)
}

fn hfun_cmd(ctx: &Ctx, args: &[String]) -> CmdResult<Vec<Item>> {
    change_of_base(ctx, args, false)
}

fn change_of_base(ctx: &Ctx, args: &[String], vertical: bool) -> CmdResult<Vec<Item>> {
    let verb = if vertical { "vfun" } else { "hfun" };
    let shape = format!("{} ALPHA POINT  or  {} ALPHA SOURCE TARGET GAMMA", verb, verb);
    let b = &ctx.budget;
    match args.len() {
        2 => {
            let alpha = ctx.hom(&args[0])?;
            let p = ctx.point(&args[1])?;
            guarded(verb, ItemKind::Construction, || {
                let bc = if vertical { v_apply(&alpha, &p, b)? } else { h_apply(&alpha, &p, b)? };
                let rali = is_rali(&bc.point, OrderReading::Literal, b)?;
                Ok(vec![Item::yes(format!("{}-point", verb), ItemKind::Construction).with_data(json!({
                    "object": poag_json(bc.point.total(), b),
                    "point": point_json(&bc.point),
                    "rali_literal": rali.label(),
                }))])
            })
        }
        4 => {
            let alpha = ctx.hom(&args[0])?;
            let (src, tgt) = (ctx.point(&args[1])?, ctx.point(&args[2])?);
            let gamma = ctx.hom(&args[3])?;
            let pm = PointMorphism::new(src, tgt, gamma, b).map_err(|e| CommandError::Invalid(e.to_string()))?;
            if vertical {
                guarded("vfun-conservative", ItemKind::Check, || {
                    let inst = v_conservative_instance(&alpha, &pm.slice(), b)?;
                    Ok(vec![Item::from_bool("vfun-conservative", ItemKind::Check, inst.consistent()).with_data(json!({
                        "v_iso": inst.v_iso,
                        "gamma_iso": inst.gamma_iso,
                        "inverse_verified": inst.inverse_verified,
                        "reconstructed_inverse": inst.reconstructed_inverse.as_ref().map(ToJson::to_json),
                    }))])
                })
            } else {
                guarded("hfun-rali-witness", ItemKind::Check, || {
                    let mapped = h_on_morphism(&alpha, &pm, b)?;
                    let h_iso = is_iso(&mapped.gamma, b)?;
                    let mut items =
                        vec![Item::from_verdict("hfun-iso", ItemKind::Check, &h_iso).with_data(json!({
                            "h_gamma": mapped.gamma.to_json(),
                            "gamma_iso": is_iso(&pm.gamma, b)?.label(),
                        }))];
                    if h_iso.is_yes() {
                        match h_rali_witness(&alpha, &pm, b) {
                            Ok(w) => {
                                let pairs: Vec<Value> =
                                    w.iter().map(|(x, z)| json!({ "x": x.to_json(), "z": z.to_json() })).collect();
                                items.push(Item::yes("hfun-rali-witness", ItemKind::Check).with_data(json!(pairs)));
                            }
                            Err(Error::Precondition(m)) => {
                                items.push(Item::yes("hfun-rali-witness", ItemKind::Check).with_note(format!(
                                    "not applicable: {}",
                                    m
                                )));
                            }
                            Err(e) => return Err(e),
                        }
                    }
                    Ok(items)
                })
            }
        }
        _ => usage(shape),
    }
}

fn factorize_cmd(ctx: &Ctx, args: &[String]) -> CmdResult<Vec<Item>> {
    let a = ctx.args(args, 1, "factorize G")?;
    let g = ctx.hom(&a[0])?;
    let b = &ctx.budget;
    guarded("factorize", ItemKind::Construction, || {
        let mut items = Vec::new();
        for out in [factor_e_m(&g, b)?, factor_e_prime_m_prime(&g, b)?] {
            let cert = out.certify(&g, b)?;
            items.push(Item::from_verdict(format!("factorize {}", out.system), ItemKind::Construction, &cert).with_data(
                json!({ "middle": poag_json(&out.middle, b), "e": out.e.to_json(), "m": out.m.to_json() }),
            ));
        }
        Ok(items)
    })
}

fn fill_cmd(ctx: &Ctx, args: &[String]) -> CmdResult<Vec<Item>> {
    let a = ctx.args(args, 4, "fill H U F V  (square with left H, top U, right F, bottom V)")?;
    let hs: Vec<Hom> = a.iter().map(|n| ctx.hom(n)).collect::<CmdResult<_>>()?;
    let b = &ctx.budget;
    guarded("fill", ItemKind::Construction, || {
        let sq = Square::new(hs[1].clone(), hs[0].clone(), hs[2].clone(), hs[3].clone(), SquareKind::Strict, b)?;
        let d = fill_diagonal(&sq, b)?;
        Ok(vec![Item::yes("fill", ItemKind::Construction)
            .with_data(json!({ "system": d.system.to_string(), "diagonal": d.d.to_json() }))])
    })
}

fn stability_cmd(ctx: &Ctx, args: &[String]) -> CmdResult<Vec<Item>> {
    let a = ctx.args(args, 2, "stability H ALONG")?;
    let (h, along) = (ctx.hom(&a[0])?, ctx.hom(&a[1])?);
    let b = &ctx.budget;
    guarded("stability", ItemKind::Check, || {
        let r = stability_probe(&h, &along, b)?;
        Ok(vec![Item::from_bool("stability", ItemKind::Check, r.preserved()).with_data(json!({
            "pullback": poag_json(&r.pullback.object, b),
            "pulled": r.pulled.to_json(),
            "original_e": r.original_e.label(),
            "original_e_prime": r.original_e_prime.label(),
            "pulled_e": r.pulled_e.label(),
            "pulled_e_prime": r.pulled_e_prime.label(),
            "pulled_e_witness": r.pulled_e.witness().map(ToJson::to_json),
            "pulled_e_prime_witness": r.pulled_e_prime.witness().map(ToJson::to_json),
        }))])
    })
}

fn ssfl_cmd(ctx: &Ctx, args: &[String]) -> CmdResult<Vec<Item>> {
    let a = ctx.args(args, 4, "ssfl TOP-POINT BOTTOM-POINT BETA GAMMA")?;
    let d = SsflDiagram { top: ctx.point(&a[0])?, bottom: ctx.point(&a[1])?, beta: ctx.hom(&a[2])?, gamma: ctx.hom(&a[3])? };
    let b = &ctx.budget;
    guarded("ssfl", ItemKind::Check, || {
        let lax = ssfl_check(&d, b)?;
        let classical = classical_ssfl(&d, b)?;
        let js = |o: &ordab::points::SsflOutcome| {
            json!({ "alpha_iso": o.alpha_iso, "beta_iso": o.beta_iso, "gamma_iso": o.gamma_iso })
        };
        Ok(vec![
            Item::from_bool("ssfl-lax", ItemKind::Check, lax.consistent()).with_data(js(&lax)),
            Item::from_bool("ssfl-classical", ItemKind::Check, classical.consistent()).with_data(js(&classical)),
        ])
    })
}

fn sweep_cmd(ctx: &Ctx, args: &[String]) -> CmdResult<Vec<Item>> {
    let a = ctx.args(args, 1, &format!("sweep NAME; names: {}", SWEEPS.join(", ")))?;
    let name = a[0].as_str();
    let b = &ctx.budget;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.opts.seed);
    let bound = |default: u64| ctx.opts.bound.unwrap_or(default) as usize;
    let k = ItemKind::Sweep;
    match name {
        "conservative" => guarded(name, k, || {
            let u = FiniteUniverse::new(bound(4).min(8));
            let r = v_conservative_sweep(&u, bound(4) * 2, 997, b)?;
            Ok(vec![Item::from_bool(name, k, r.passed()).with_data(json!(format!("{:?}", r)))])
        }),
        "h-rali" => guarded(name, k, || {
            let u = FiniteUniverse::new(bound(4).min(8));
            let r = h_rali_sweep(&u, bound(4) * 2, 50, b)?;
            Ok(vec![Item::from_bool(name, k, r.passed()).with_data(json!(format!("{:?}", r)))])
        }),
        "jee" => guarded(name, k, || {
            let n = bound(8).min(12);
            let u = FiniteUniverse::new(n);
            let r = jee_sweep(&u, n, 4, 4, 8, &mut rng, b)?;
            Ok(vec![Item::from_bool(name, k, r.passed()).with_data(json!(format!("{:?}", r)))])
        }),
        "ff" => guarded(name, k, || {
            let u = FiniteUniverse::new(bound(4).min(8));
            let r = ff_sweep(&u, b)?;
            Ok(vec![Item::from_bool(name, k, r.passed()).with_data(json!(format!("{:?}", r)))])
        }),
        "factorization" => guarded(name, k, || {
            let u = FiniteUniverse::new(8);
            let maps: Vec<Hom> = (0..bound(20))
                .map(|i| if i % 2 == 0 { random_free_monotone(&mut rng) } else { random_finite_monotone(&u, &mut rng) })
                .collect::<ordab::Result<_>>()?;
            let r = factorization_suite(&maps, b)?;
            Ok(vec![Item::from_bool(name, k, r.passed()).with_data(json!(format!("{:?}", r)))])
        }),
        "hilbert" => guarded(name, k, || {
            let mut bad = Vec::new();
            let n = bound(100);
            for _ in 0..n {
                let rows = rng.gen_range(1..=2usize);
                let cols = rng.gen_range(1..=4usize);
                let m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-3..=3)).collect()).collect();
                let a = IntMatrix::from_rows(&m, cols);
                if let Some(d) = hilbert_disagreement(&a, &vec![0; rows], 6, b)? {
                    bad.push(format!("{:?}: {}", m, d));
                }
            }
            Ok(vec![Item::from_bool(name, k, bad.is_empty()).with_data(json!({ "systems": n, "disagreements": bad }))])
        }),
        "snf" => {
            let n = bound(200);
            let mut bad = Vec::new();
            for _ in 0..n {
                let (r, c) = (rng.gen_range(1..=4usize), rng.gen_range(1..=4usize));
                let m: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
                let a = IntMatrix::from_rows(&m, c);
                if smith_normal_form(&a).invariant_factors() != minor_gcd_invariant_factors(&a) {
                    bad.push(format!("{:?}", m));
                }
            }
            Ok(vec![Item::from_bool(name, k, bad.is_empty()).with_data(json!({ "matrices": n, "disagreements": bad }))])
        }
        "vab" => {
            let qs: Vec<_> = all_quantales(bound(3)).into_iter().map(Arc::new).collect();
            let r = vab_lax_preproto_sweep(&qs, 4, 8);
            Ok(vec![Item::from_bool(name, k, r.passed()).with_data(json!({
                "instances": r.instances,
                "violations": r.violations,
                "integral_violations": r.integral_violations(),
                "first_violation": r.first_violation,
            }))])
        }
        "v-universal" => {
            let qs: Vec<_> = all_quantales(bound(3)).into_iter().map(Arc::new).collect();
            let r = v_universal_sweep(&qs, 3, 2);
            Ok(vec![Item::from_bool(name, k, r.passed()).with_data(json!(format!("{:?}", r)))])
        }
        _ => usage(format!("unknown sweep '{}'; expected one of {}", name, SWEEPS.join(", "))),
    }
}
