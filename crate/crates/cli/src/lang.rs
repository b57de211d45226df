//! The definition language: line-oriented blocks
//! `group|hom|point|quantale|vgroup NAME { key = value; ... }`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use ordab::constructions::{precomma, pullback};
use ordab::finite::FinGroup;
use ordab::homs::Hom;
use ordab::intlin::IntMatrix;
use ordab::points::Point;
use ordab::poag::{AbGroup, Cone, Poag};
use ordab::vgroups::{Quantale, VGroup, VHom};
use ordab::Budget;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Unresolved,
    Duplicate,
    Invariant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LangError {
    pub kind: ErrorKind,
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for LangError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for LangError {}

fn err<T>(kind: ErrorKind, pos: Pos, message: impl Into<String>) -> Result<T, LangError> {
    Err(LangError { kind, pos, message: message.into() })
}

/// A value with its source position. Equality ignores positions.
#[derive(Debug, Clone)]
pub struct Node {
    pub pos: Pos,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Ident(String),
    List(Vec<Node>),
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for Node {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    Group,
    Hom,
    Point,
    Quantale,
    VGroup,
}

impl Kind {
    fn keyword(self) -> &'static str {
        match self {
            Kind::Group => "group",
            Kind::Hom => "hom",
            Kind::Point => "point",
            Kind::Quantale => "quantale",
            Kind::VGroup => "vgroup",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub pos: Pos,
    pub key: String,
    pub value: Node,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.value == other.value
    }
}

impl Eq for Entry {}

#[derive(Debug, Clone)]
pub struct Block {
    pub pos: Pos,
    pub kind: Kind,
    pub name: String,
    pub entries: Vec<Entry>,
}

impl PartialEq for Block {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.name == other.name && self.entries == other.entries
    }
}

impl Eq for Block {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
    End,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), pos: Pos { line: 1, col: 1 } }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Pos, Tok)>, LangError> {
        let mut out = Vec::new();
        loop {
            let Some(&c) = self.chars.peek() else {
                out.push((self.pos, Tok::End));
                return Ok(out);
            };
            let start = self.pos;
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if "{}[]=;,".contains(c) {
                self.bump();
                out.push((start, Tok::Sym(c)));
            } else if c.is_ascii_digit() || c == '-' || c == '+' {
                let mut s = String::new();
                s.push(self.bump().expect("peeked"));
                while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(self.bump().expect("peeked"));
                }
                if self.chars.peek().is_some_and(|&c| is_ident_char(c)) {
                    return err(ErrorKind::Syntax, start, format!("malformed integer starting '{}'", s));
                }
                let v: i64 = s
                    .parse()
                    .map_err(|_| LangError { kind: ErrorKind::Syntax, pos: start, message: format!("bad integer '{}'", s) })?;
                out.push((start, Tok::Int(v)));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let mut s = String::new();
                while self.chars.peek().is_some_and(|&c| is_ident_char(c)) {
                    s.push(self.bump().expect("peeked"));
                }
                out.push((start, Tok::Ident(s)));
            } else {
                return err(ErrorKind::Syntax, start, format!("unexpected character '{}'", c));
            }
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.' || c == '\''
}

struct Parser {
    toks: Vec<(Pos, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(Pos, Tok) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Pos, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<Pos, LangError> {
        match self.next() {
            (p, Tok::Sym(d)) if d == c => Ok(p),
            (p, t) => err(ErrorKind::Syntax, p, format!("expected '{}', found {}", c, describe(&t))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(Pos, String), LangError> {
        match self.next() {
            (p, Tok::Ident(s)) => Ok((p, s)),
            (p, t) => err(ErrorKind::Syntax, p, format!("expected {}, found {}", what, describe(&t))),
        }
    }

    fn blocks(&mut self) -> Result<Vec<Block>, LangError> {
        let mut out = Vec::new();
        while self.peek().1 != Tok::End {
            out.push(self.block()?);
        }
        Ok(out)
    }

    fn block(&mut self) -> Result<Block, LangError> {
        let (pos, kw) = self.ident("a block keyword")?;
        let kind = match kw.as_str() {
            "group" => Kind::Group,
            "hom" => Kind::Hom,
            "point" => Kind::Point,
            "quantale" => Kind::Quantale,
            "vgroup" => Kind::VGroup,
            _ => return err(ErrorKind::Syntax, pos, format!("unknown block keyword '{}'", kw)),
        };
        let (_, name) = self.ident("a block name")?;
        self.expect_sym('{')?;
        let mut entries: Vec<Entry> = Vec::new();
        loop {
            if let (_, Tok::Sym('}')) = self.peek() {
                self.next();
                break;
            }
            let (kpos, key) = self.ident("a key or '}'")?;
            if entries.iter().any(|e| e.key == key) {
                return err(ErrorKind::Syntax, kpos, format!("key '{}' given twice", key));
            }
            self.expect_sym('=')?;
            let value = self.value()?;
            self.expect_sym(';')?;
            entries.push(Entry { pos: kpos, key, value });
        }
        Ok(Block { pos, kind, name, entries })
    }

    fn value(&mut self) -> Result<Node, LangError> {
        match self.next() {
            (pos, Tok::Int(v)) => Ok(Node { pos, value: Value::Int(v) }),
            (pos, Tok::Ident(s)) => Ok(Node { pos, value: Value::Ident(s) }),
            (pos, Tok::Sym('[')) => {
                let mut items = Vec::new();
                loop {
                    if let (_, Tok::Sym(']')) = self.peek() {
                        self.next();
                        break;
                    }
                    items.push(self.value()?);
                    match self.next() {
                        (_, Tok::Sym(',')) => {}
                        (_, Tok::Sym(']')) => break,
                        (p, t) => return err(ErrorKind::Syntax, p, format!("expected ',' or ']', found {}", describe(&t))),
                    }
                }
                Ok(Node { pos, value: Value::List(items) })
            }
            (p, t) => err(ErrorKind::Syntax, p, format!("expected a value, found {}", describe(&t))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("'{}'", s),
        Tok::Int(v) => format!("'{}'", v),
        Tok::Sym(c) => format!("'{}'", c),
        Tok::End => "end of input".into(),
    }
}

/// Parses the block structure only, without resolving names.
pub fn parse_blocks(text: &str) -> Result<Vec<Block>, LangError> {
    let toks = Lexer::new(text).tokens()?;
    Parser { toks, at: 0 }.blocks()
}

fn render(v: &Node, out: &mut String) {
    match &v.value {
        Value::Int(i) => out.push_str(&i.to_string()),
        Value::Ident(s) => out.push_str(s),
        Value::List(items) => {
            out.push('[');
            for (i, n) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render(n, out);
            }
            out.push(']');
        }
    }
}

/// Canonical text of a list of blocks.
pub fn pretty(blocks: &[Block]) -> String {
    let mut out = String::new();
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("{} {} {{\n", b.kind.keyword(), b.name));
        for e in &b.entries {
            out.push_str(&format!("    {} = ", e.key));
            render(&e.value, &mut out);
            out.push_str(";\n");
        }
        out.push_str("}\n");
    }
    out
}

/// Named objects built from definition blocks. Derived objects add
/// morphisms under dotted names, e.g. `FG.pi1` for `group FG { precomma = [f, g]; }`.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub blocks: Vec<Block>,
    pub poags: BTreeMap<String, Poag>,
    pub homs: BTreeMap<String, Hom>,
    pub points: BTreeMap<String, Point>,
    pub quantales: BTreeMap<String, Arc<Quantale>>,
    pub vgroups: BTreeMap<String, VGroup>,
    pub vhoms: BTreeMap<String, VHom>,
}

impl PartialEq for Workspace {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

impl Workspace {
    pub fn pretty(&self) -> String {
        pretty(&self.blocks)
    }

    fn taken(&self, name: &str) -> bool {
        self.poags.contains_key(name)
            || self.homs.contains_key(name)
            || self.points.contains_key(name)
            || self.quantales.contains_key(name)
            || self.vgroups.contains_key(name)
            || self.vhoms.contains_key(name)
    }

    fn claim(&self, name: &str, pos: Pos) -> Result<(), LangError> {
        if self.taken(name) {
            return err(ErrorKind::Duplicate, pos, format!("name '{}' is already defined", name));
        }
        Ok(())
    }

    pub fn poag(&self, name: &str) -> Option<&Poag> {
        self.poags.get(name)
    }

    pub fn hom(&self, name: &str) -> Option<&Hom> {
        self.homs.get(name)
    }

    fn add(&mut self, block: Block, budget: &Budget) -> Result<(), LangError> {
        self.claim(&block.name, block.pos)?;
        let b = Fields::new(&block)?;
        match block.kind {
            Kind::Group => self.add_group(&block, &b, budget)?,
            Kind::Hom => self.add_hom(&block, &b)?,
            Kind::Point => {
                b.only(&["f", "s"])?;
                let f = self.lookup_hom(b.req("f")?)?;
                let s = self.lookup_hom(b.req("s")?)?;
                let p = Point::new(f, s, budget).map_err(|e| invariant(block.pos, e))?;
                self.points.insert(block.name.clone(), p);
            }
            Kind::Quantale => {
                b.only(&["elements", "leq", "tensor", "unit"])?;
                let names: Vec<String> = list(b.req("elements")?)?
                    .iter()
                    .map(|n| ident(n).map(str::to_string))
                    .collect::<Result<_, _>>()?;
                let q_names = names.clone();
                let element = |n: &Node| -> Result<u8, LangError> {
                    match &n.value {
                        Value::Ident(s) => match q_names.iter().position(|x| x == s) {
                            Some(i) => Ok(i as u8),
                            None => err(ErrorKind::Unresolved, n.pos, format!("'{}' is not an element", s)),
                        },
                        Value::Int(i) if *i >= 0 && (*i as usize) < q_names.len() => Ok(*i as u8),
                        _ => err(ErrorKind::Invariant, n.pos, "expected an element name or index"),
                    }
                };
                let leq_node = b.req("leq")?;
                let leq: Vec<Vec<bool>> = int_matrix(leq_node)?
                    .into_iter()
                    .map(|r| r.into_iter().map(|v| v != 0).collect())
                    .collect();
                let tensor: Vec<Vec<u8>> = list(b.req("tensor")?)?
                    .iter()
                    .map(|row| list(row)?.iter().map(element).collect::<Result<Vec<u8>, _>>())
                    .collect::<Result<_, _>>()?;
                let unit = element(b.req("unit")?)?;
                let q = Quantale::from_order(names, leq, tensor, unit)
                    .map_err(|v| LangError { kind: ErrorKind::Invariant, pos: block.pos, message: v.to_string() })?;
                self.quantales.insert(block.name.clone(), Arc::new(q));
            }
            Kind::VGroup => {
                b.only(&["quantale", "moduli", "profile", "table"])?;
                let qn = b.req("quantale")?;
                let q = self
                    .quantales
                    .get(ident(qn)?)
                    .cloned()
                    .ok_or_else(|| unresolved(qn, "quantale"))?;
                let moduli = finite_moduli(b.req("moduli")?)?;
                let group = Arc::new(FinGroup::new(&moduli));
                let value = |n: &Node| -> Result<u8, LangError> {
                    match &n.value {
                        Value::Ident(s) => q.value(s).ok_or_else(|| LangError {
                            kind: ErrorKind::Unresolved,
                            pos: n.pos,
                            message: format!("'{}' is not an element of the quantale", s),
                        }),
                        Value::Int(i) if *i >= 0 && (*i as usize) < q.size() => Ok(*i as u8),
                        _ => err(ErrorKind::Invariant, n.pos, "expected an element name or index"),
                    }
                };
                let v = match (b.get("profile"), b.get("table")) {
                    (Some(p), None) => {
                        let phi: Vec<u8> = list(p)?.iter().map(value).collect::<Result<_, _>>()?;
                        VGroup::from_profile(group, q.clone(), &phi)
                    }
                    (None, Some(t)) => {
                        let mut a = Vec::new();
                        for row in list(t)? {
                            for c in list(row)? {
                                a.push(value(c)?);
                            }
                        }
                        VGroup::from_table(group, q.clone(), a)
                    }
                    _ => return err(ErrorKind::Invariant, block.pos, "a vgroup needs exactly one of 'profile' or 'table'"),
                }
                .map_err(|m| LangError { kind: ErrorKind::Invariant, pos: block.pos, message: m })?;
                self.vgroups.insert(block.name.clone(), v);
            }
        }
        self.blocks.push(block);
        Ok(())
    }

    fn add_group(&mut self, block: &Block, b: &Fields, budget: &Budget) -> Result<(), LangError> {
        let name = &block.name;
        if let Some(pair) = b.get("precomma").or(b.get("pullback")) {
            b.only(&["precomma", "pullback"])?;
            let names = list(pair)?;
            if names.len() != 2 {
                return err(ErrorKind::Invariant, pair.pos, "expected two morphisms [f, g]");
            }
            let f = self.lookup_hom(&names[0])?;
            let g = self.lookup_hom(&names[1])?;
            let derived: Vec<(&str, Hom)> = if b.get("precomma").is_some() {
                let pc = precomma(&f, &g, budget).map_err(|e| invariant(pair.pos, e))?;
                let object = pc.object.renamed(name.as_str());
                let re = |h: &Hom, dom: &Poag, cod: &Poag| h.retarget(dom, cod).map_err(|e| invariant(pair.pos, e));
                let pi1 = re(&pc.pi1, &object, pc.pi1.cod())?;
                let pi2 = re(&pc.pi2, &object, pc.pi2.cod())?;
                let s2 = re(&pc.section2, pc.section2.dom(), &object)?;
                self.poags.insert(name.clone(), object);
                vec![("pi1", pi1), ("pi2", pi2), ("s2", s2)]
            } else {
                let pb = pullback(&f, &g).map_err(|e| invariant(pair.pos, e))?;
                let object = pb.object.renamed(name.as_str());
                let p1 = pb.p1.retarget(&object, pb.p1.cod()).map_err(|e| invariant(pair.pos, e))?;
                let p2 = pb.p2.retarget(&object, pb.p2.cod()).map_err(|e| invariant(pair.pos, e))?;
                self.poags.insert(name.clone(), object);
                vec![("p1", p1), ("p2", p2)]
            };
            for (suffix, h) in derived {
                let full = format!("{}.{}", name, suffix);
                self.claim(&full, block.pos)?;
                self.homs.insert(full, h);
            }
            return Ok(());
        }
        b.only(&["moduli", "cone"])?;
        let moduli = moduli(b.req("moduli")?)?;
        let group = AbGroup::from_moduli(&moduli).map_err(|e| invariant(block.pos, e))?;
        let cone = match b.get("cone") {
            None => Cone::trivial(&group),
            Some(c) => {
                let rows = int_matrix(c)?;
                for (row, node) in rows.iter().zip(list(c)?) {
                    if row.len() != moduli.len() {
                        return err(
                            ErrorKind::Invariant,
                            node.pos,
                            format!("generator has {} coordinates but the group has rank {}", row.len(), moduli.len()),
                        );
                    }
                }
                let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
                Cone::from_i64(&group, &refs).map_err(|e| invariant(c.pos, e))?
            }
        };
        self.poags.insert(name.clone(), Poag::new(name.as_str(), cone));
        Ok(())
    }

    fn add_hom(&mut self, block: &Block, b: &Fields) -> Result<(), LangError> {
        let dn = b.req("dom")?;
        let cn = b.req("cod")?;
        let (d, c) = (ident(dn)?, ident(cn)?);
        if let (Some(dv), Some(cv)) = (self.vgroups.get(d), self.vgroups.get(c)) {
            b.only(&["dom", "cod", "table"])?;
            let t = b.req("table")?;
            let table: Vec<u8> = list(t)?
                .iter()
                .map(|n| match n.value {
                    Value::Int(i) if i >= 0 && (i as usize) < cv.order() => Ok(i as u8),
                    _ => err(ErrorKind::Invariant, n.pos, "expected an element index of the codomain"),
                })
                .collect::<Result<_, _>>()?;
            let h = VHom::new(dv, cv, table).map_err(|m| LangError { kind: ErrorKind::Invariant, pos: t.pos, message: m })?;
            self.vhoms.insert(block.name.clone(), h);
            return Ok(());
        }
        b.only(&["dom", "cod", "matrix"])?;
        let dom = self.poags.get(d).cloned().ok_or_else(|| unresolved(dn, "group"))?;
        let cod = self.poags.get(c).cloned().ok_or_else(|| unresolved(cn, "group"))?;
        let mn = b.req("matrix")?;
        let rows = int_matrix(mn)?;
        let cols = dom.group().rank();
        if rows.iter().any(|r| r.len() != cols) {
            return err(ErrorKind::Invariant, mn.pos, format!("every row needs {} entries", cols));
        }
        let m = IntMatrix::from_rows(&rows, cols);
        let h = Hom::new(&dom, &cod, m).map_err(|e| invariant(mn.pos, e))?;
        self.homs.insert(block.name.clone(), h);
        Ok(())
    }

    fn lookup_hom(&self, n: &Node) -> Result<Hom, LangError> {
        let name = ident(n)?;
        self.homs.get(name).cloned().ok_or_else(|| unresolved(n, "morphism"))
    }
}

fn invariant(pos: Pos, e: ordab::Error) -> LangError {
    LangError { kind: ErrorKind::Invariant, pos, message: e.to_string() }
}

fn unresolved(n: &Node, what: &str) -> LangError {
    let name = match &n.value {
        Value::Ident(s) => s.clone(),
        _ => "?".into(),
    };
    LangError { kind: ErrorKind::Unresolved, pos: n.pos, message: format!("unresolved {} '{}'", what, name) }
}

struct Fields<'a> {
    block: &'a Block,
}

impl<'a> Fields<'a> {
    fn new(block: &'a Block) -> Result<Self, LangError> {
        Ok(Fields { block })
    }

    fn get(&self, key: &str) -> Option<&'a Node> {
        self.block.entries.iter().find(|e| e.key == key).map(|e| &e.value)
    }

    fn req(&self, key: &str) -> Result<&'a Node, LangError> {
        self.get(key).ok_or_else(|| LangError {
            kind: ErrorKind::Invariant,
            pos: self.block.pos,
            message: format!("{} '{}' is missing '{}'", self.block.kind.keyword(), self.block.name, key),
        })
    }

    fn only(&self, keys: &[&str]) -> Result<(), LangError> {
        for e in &self.block.entries {
            if !keys.contains(&e.key.as_str()) {
                return err(
                    ErrorKind::Syntax,
                    e.pos,
                    format!("unknown key '{}' in {} block", e.key, self.block.kind.keyword()),
                );
            }
        }
        Ok(())
    }
}

fn list(n: &Node) -> Result<&[Node], LangError> {
    match &n.value {
        Value::List(v) => Ok(v),
        _ => err(ErrorKind::Syntax, n.pos, "expected a list"),
    }
}

fn ident(n: &Node) -> Result<&str, LangError> {
    match &n.value {
        Value::Ident(s) => Ok(s),
        _ => err(ErrorKind::Syntax, n.pos, "expected a name"),
    }
}

fn int(n: &Node) -> Result<i64, LangError> {
    match &n.value {
        Value::Int(v) => Ok(*v),
        _ => err(ErrorKind::Syntax, n.pos, "expected an integer"),
    }
}

fn int_matrix(n: &Node) -> Result<Vec<Vec<i64>>, LangError> {
    list(n)?.iter().map(|r| list(r)?.iter().map(int).collect()).collect()
}

fn moduli(n: &Node) -> Result<Vec<i64>, LangError> {
    let items = list(n)?;
    let mut out = Vec::new();
    for m in items {
        let v = int(m)?;
        if v == 1 {
            return err(ErrorKind::Invariant, m.pos, "modulus 1 not canonical");
        }
        if v < 0 {
            return err(ErrorKind::Invariant, m.pos, format!("modulus {} is negative", v));
        }
        out.push(v);
    }
    Ok(out)
}

fn finite_moduli(n: &Node) -> Result<Vec<u32>, LangError> {
    let ms = moduli(n)?;
    let mut order: u64 = 1;
    for (m, node) in ms.iter().zip(list(n)?) {
        if *m == 0 {
            return err(ErrorKind::Invariant, node.pos, "V-groups need finite moduli");
        }
        order = order.saturating_mul(*m as u64);
    }
    if order > 64 {
        return err(ErrorKind::Invariant, n.pos, "V-groups are limited to 64 elements");
    }
    Ok(ms.into_iter().map(|m| m as u32).collect())
}

/// Parses and resolves a definition text.
pub fn parse_workspace(text: &str, budget: &Budget) -> Result<Workspace, LangError> {
    let mut ws = Workspace::default();
    for block in parse_blocks(text)? {
        ws.add(block, budget)?;
    }
    Ok(ws)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDER: &str = "
        # the integers with their usual order
        group ZN { moduli = [0]; cone = [[1]]; }
        hom id { dom = ZN; cod = ZN; matrix = [[1]]; }
        group FG { precomma = [id, id]; }
        hom t { dom = ZN; cod = FG; matrix = [[1],[4]]; }
        hom tprime { dom = ZN; cod = FG; matrix = [[3], [5]]; }
        point pi2-point { f = FG.pi2; s = FG.s2; }
    ";

    #[test]
    fn parses_the_order_example() {
        let ws = parse_workspace(ORDER, &Budget::default()).unwrap();
        assert_eq!(ws.poags["ZN"], Poag::integers().renamed("ZN"));
        let t = &ws.homs["t"];
        assert_eq!(t.apply(&ws.poags["ZN"].elem(&[1]).unwrap()).unwrap(), ws.poags["FG"].elem(&[1, 4]).unwrap());
        assert!(ws.points.contains_key("pi2-point"));
        assert!(ws.homs.contains_key("FG.pi1"));
    }

    #[test]
    fn round_trip() {
        let ws = parse_workspace(ORDER, &Budget::default()).unwrap();
        let again = parse_workspace(&ws.pretty(), &Budget::default()).unwrap();
        assert_eq!(ws, again);
        assert_eq!(ws.pretty(), again.pretty());
    }

    #[test]
    fn modulus_one_rejected() {
        let e = parse_workspace("group G {\n  moduli = [0, 1];\n}", &Budget::default()).unwrap_err();
        assert_eq!(e.message, "modulus 1 not canonical");
        assert_eq!(e.pos, Pos { line: 2, col: 16 });
    }

    #[test]
    fn diagnostics() {
        let b = Budget::default();
        let e = parse_workspace("group G { moduli = [0] }", &b).unwrap_err();
        assert_eq!((e.kind, e.pos.col), (ErrorKind::Syntax, 24));
        let e = parse_workspace("hom h { dom = A; cod = A; matrix = []; }", &b).unwrap_err();
        assert_eq!(e.kind, ErrorKind::Unresolved);
        let e = parse_workspace("group A { moduli = []; }\ngroup A { moduli = []; }", &b).unwrap_err();
        assert_eq!((e.kind, e.pos.line), (ErrorKind::Duplicate, 2));
        let e = parse_workspace("group A { moduli = [0]; colour = 1; }", &b).unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
        let e = parse_workspace("group A { moduli = [0]; cone = [[1, 0]]; }", &b).unwrap_err();
        assert_eq!(e.kind, ErrorKind::Invariant);
        let e = parse_workspace("group A { moduli = [0]; }\nhom h { dom = A; cod = A; matrix = [[1, 2]]; }", &b).unwrap_err();
        assert_eq!((e.kind, e.pos.line), (ErrorKind::Invariant, 2));
    }

    #[test]
    fn quantales_and_vgroups() {
        let text = "
            quantale B { elements = [no, yes]; leq = [[1, 1], [0, 1]]; tensor = [[no, no], [no, yes]]; unit = yes; }
            vgroup Z2 { quantale = B; moduli = [2]; profile = [yes, no]; }
            vgroup Z2d { quantale = B; moduli = [2]; table = [[yes, no], [no, yes]]; }
            hom idv { dom = Z2; cod = Z2d; table = [0, 1]; }
        ";
        let ws = parse_workspace(text, &Budget::default()).unwrap();
        assert_eq!(ws.vgroups["Z2"].profile(), ws.vgroups["Z2d"].profile());
        assert!(ws.vhoms.contains_key("idv"));
        let bad = text.replace("unit = yes", "unit = no");
        assert_eq!(parse_workspace(&bad, &Budget::default()).unwrap_err().kind, ErrorKind::Invariant);
    }
}
