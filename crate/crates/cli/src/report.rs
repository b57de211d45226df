//! Machine-readable reports. One JSON document per run; no timings, so
//! reports are byte-identical for fixed inputs and budgets.

use std::collections::BTreeMap;

use ordab::factorization::{LeftFailure, RightFailure};
use ordab::homs::{Hom, IsoFailure, LeqWitness};
use ordab::points::JointFailure;
use ordab::poag::{Element, Poag};
use ordab::{Budget, Error, Verdict};
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "ordab-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ItemKind {
    Check,
    Construction,
    Reproduction,
    OpenQuestion,
    Finding,
    Sweep,
}

#[derive(Debug, Clone, Serialize)]
pub struct Item {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
    pub kind: ItemKind,
    pub verdict: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Item {
    pub fn new(id: impl Into<String>, kind: ItemKind, verdict: Outcome) -> Self {
        Item { id: id.into(), citation: None, kind, verdict, witness: None, data: None, note: None }
    }

    pub fn yes(id: impl Into<String>, kind: ItemKind) -> Self {
        Self::new(id, kind, Outcome::Yes)
    }

    pub fn from_bool(id: impl Into<String>, kind: ItemKind, ok: bool) -> Self {
        Self::new(id, kind, if ok { Outcome::Yes } else { Outcome::No })
    }

    pub fn from_verdict<W: ToJson>(id: impl Into<String>, kind: ItemKind, v: &Verdict<W>) -> Self {
        let mut item = Self::new(id, kind, outcome(v));
        item.witness = v.witness().map(ToJson::to_json);
        item
    }

    /// An item whose computation ran out of budget.
    pub fn exhausted(id: impl Into<String>, kind: ItemKind) -> Self {
        let mut item = Self::new(id, kind, Outcome::Unknown);
        item.note = Some("solver budget exhausted".into());
        item
    }

    pub fn cite(mut self, c: &str) -> Self {
        self.citation = Some(c.into());
        self
    }

    pub fn with_data(mut self, d: Value) -> Self {
        self.data = Some(d);
        self
    }

    pub fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }
}

pub fn outcome<W>(v: &Verdict<W>) -> Outcome {
    match v {
        Verdict::Yes => Outcome::Yes,
        Verdict::No(_) => Outcome::No,
        Verdict::Unknown => Outcome::Unknown,
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub yes: usize,
    pub no: usize,
    pub unknown: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Resources {
    pub budget: u64,
    pub nodes_used: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub items: Vec<Item>,
    pub summary: Summary,
    pub resources: Resources,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, inputs: BTreeMap<String, Value>) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            inputs,
            items: Vec::new(),
            summary: Summary::default(),
            resources: Resources { budget: 0, nodes_used: 0 },
            exit_code: 0,
        }
    }

    pub fn push(&mut self, item: Item) {
        self.items.push(item);
    }

    /// Fills in the summary and exit code: 2 if anything is unknown,
    /// otherwise 1 if anything is a definite no, otherwise 0.
    pub fn finish(mut self, budget: &Budget) -> Self {
        let count = |o: Outcome| self.items.iter().filter(|i| i.verdict == o).count();
        self.summary =
            Summary { total: self.items.len(), yes: count(Outcome::Yes), no: count(Outcome::No), unknown: count(Outcome::Unknown) };
        self.resources = Resources { budget: budget.limit(), nodes_used: budget.used() };
        self.exit_code = if self.summary.unknown > 0 {
            2
        } else if self.summary.no > 0 {
            1
        } else {
            0
        };
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// One line per item, for terminals.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for i in &self.items {
            let label = match i.verdict {
                Outcome::Yes => "yes",
                Outcome::No => "no",
                Outcome::Unknown => "unknown",
            };
            out.push_str(&format!("{:<8} {}", label, i.id));
            if let Some(w) = &i.witness {
                out.push_str(&format!("  witness {}", w));
            }
            if let Some(n) = &i.note {
                out.push_str(&format!("  ({})", n));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} items: {} yes, {} no, {} unknown\n",
            self.summary.total, self.summary.yes, self.summary.no, self.summary.unknown
        ));
        out
    }
}

/// Coordinate data for witnesses and objects.
pub trait ToJson {
    fn to_json(&self) -> Value;
}

impl ToJson for Element {
    fn to_json(&self) -> Value {
        match self.to_i64() {
            Some(v) => json!(v),
            None => json!(self.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        }
    }
}

impl ToJson for String {
    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl ToJson for () {
    fn to_json(&self) -> Value {
        Value::Null
    }
}

impl ToJson for LeqWitness {
    fn to_json(&self) -> Value {
        json!({ "generator": self.generator.to_json(), "difference": self.difference.to_json() })
    }
}

impl ToJson for IsoFailure {
    fn to_json(&self) -> Value {
        match self {
            IsoFailure::NotInjective(x) => json!({ "not_injective": x.to_json() }),
            IsoFailure::NotSurjective(x) => json!({ "not_surjective": x.to_json() }),
            IsoFailure::ConeNotOnto(x) => json!({ "cone_not_onto": x.to_json() }),
        }
    }
}

impl ToJson for JointFailure {
    fn to_json(&self) -> Value {
        match self {
            JointFailure::Subgroup(x) => json!({ "outside_subgroup": x.to_json() }),
            JointFailure::Cone(x) => json!({ "outside_cone": x.to_json() }),
        }
    }
}

impl ToJson for LeftFailure {
    fn to_json(&self) -> Value {
        match self {
            LeftFailure::NotInjective(x) => json!({ "not_injective": x.to_json() }),
            LeftFailure::NotSurjective(x) => json!({ "not_surjective": x.to_json() }),
            LeftFailure::ConeNotGenerated(x) => json!({ "cone_not_generated": x.to_json() }),
        }
    }
}

impl ToJson for RightFailure {
    fn to_json(&self) -> Value {
        match self {
            RightFailure::NotFullyFaithful(x) => json!({ "not_fully_faithful": x.to_json() }),
            RightFailure::NotInjective(x) => json!({ "not_injective": x.to_json() }),
        }
    }
}

impl ToJson for Hom {
    fn to_json(&self) -> Value {
        let m = self.matrix();
        let rows: Vec<Value> = (0..m.rows())
            .map(|i| {
                let row: Vec<i64> = m.row(i).iter().map(|c| i64::try_from(c).unwrap_or(i64::MAX)).collect();
                json!(row)
            })
            .collect();
        json!({ "dom": self.dom().name(), "cod": self.cod().name(), "matrix": rows })
    }
}

/// Moduli and cone generators; the generators are `null` when the budget
/// ran out.
pub fn poag_json(p: &Poag, budget: &Budget) -> Value {
    let moduli: Vec<String> = p.group().moduli().iter().map(|m| m.to_string()).collect();
    let gens = match p.generators(budget) {
        Ok(g) => json!(g.iter().map(ToJson::to_json).collect::<Vec<_>>()),
        Err(_) => Value::Null,
    };
    json!({ "name": p.name(), "moduli": moduli, "cone_generators": gens })
}

pub fn is_budget(e: &Error) -> bool {
    matches!(e, Error::ResourceLimit(_))
}
