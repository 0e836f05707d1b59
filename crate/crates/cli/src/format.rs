//! The sectioned input format.
//!
//! ```text
//! # comment
//! [ring]
//! ring = gf(3,1)
//! [groupoid]
//! full_relation(2)
//! [cocycle]
//! c((1,2),(2,1)) = 2
//! [options]
//! cap = 100000
//! ```
//!
//! A groupoid is either one builder line (`full_relation(n)`, `group(<group>)`,
//! `union(<groupoid>, <groupoid>)`) or explicit rows: `objects = x, y`, arrows
//! `f: x -> y`, and products `f . g = h` for every composable pair of non-unit
//! arrows. Each object doubles as the name of its unit arrow.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use twistpair::finring::{make_gf, make_zmod};
use twistpair::pairs::Vector;
use twistpair::{AbstractAlgebra, Cocycle, Elem, FiniteGroup, FiniteGroupoid, FiniteRing, DEFAULT_CAP};

/// A diagnostic, with the 1-based line it refers to when there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line: Some(line), message: message.into() })
}

/// A group for `units` and `upp`: a finite group or `Z^k`.
#[derive(Clone, Debug)]
pub enum GroupSpec {
    Finite(FiniteGroup),
    FreeAbelian(usize),
}

/// The two subsets for `upp`, as written.
#[derive(Clone, Debug, Default)]
pub struct ElementSets {
    pub a: Vec<String>,
    pub b: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub cap: u64,
    pub oracle: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { cap: DEFAULT_CAP, oracle: false }
    }
}

/// An abstract algebra with the spanning set of its distinguished subalgebra.
#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    pub algebra: Arc<AbstractAlgebra>,
    pub sub_basis: Vec<Vector>,
}

#[derive(Clone, Debug)]
pub struct InputDocument {
    pub ring: Arc<FiniteRing>,
    pub group: Option<GroupSpec>,
    /// Present whenever a groupoid or a finite group was given.
    pub twist: Option<Cocycle>,
    pub algebra: Option<AlgebraSpec>,
    pub elements: Option<ElementSets>,
    pub options: Options,
}

const SECTIONS: [&str; 9] = ["ring", "ring.tables", "group", "groupoid", "cocycle", "algebra", "pair", "elements", "options"];

type Rows = Vec<(usize, String)>;

/// Splits `s` at top-level occurrences of `sep`, ignoring separators inside brackets.
pub(crate) fn split_top(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if ch == sep && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    out.push(cur.trim().to_string());
    out
}

/// `name(a, b)` to `("name", ["a", "b"])`; a bare word has no arguments.
fn call(s: &str) -> Option<(String, Vec<String>)> {
    let s = s.trim();
    match s.find('(') {
        None => Some((s.to_string(), Vec::new())),
        Some(i) => {
            let inner = s[i + 1..].strip_suffix(')')?;
            let args = if inner.trim().is_empty() { Vec::new() } else { split_top(inner, ',') };
            Some((s[..i].trim().to_string(), args))
        }
    }
}

fn number(line: usize, s: &str) -> Result<usize, ParseError> {
    s.trim().parse().or_else(|_| err(line, format!("expected a nonnegative integer, found `{}`", s.trim())))
}

fn key_value(s: &str) -> Option<(&str, &str)> {
    let (k, v) = s.split_once('=')?;
    Some((k.trim(), v.trim()))
}

fn parse_ring(line: usize, s: &str) -> Result<FiniteRing, ParseError> {
    let Some((name, args)) = call(s) else { return err(line, format!("malformed ring `{s}`")) };
    let ring = match (name.as_str(), args.len()) {
        ("zmod", 1) => make_zmod(number(line, &args[0])?),
        ("gf", 2) => make_gf(number(line, &args[0])?, number(line, &args[1])?, None),
        ("gf", 3) => {
            let inner = args[2].trim().trim_start_matches('[').trim_end_matches(']');
            let coeffs = inner.split(',').map(|c| number(line, c)).collect::<Result<Vec<_>, _>>()?;
            make_gf(number(line, &args[0])?, number(line, &args[1])?, Some(&coeffs))
        }
        _ => return err(line, format!("unknown ring `{s}`; expected zmod(n), gf(p,k) or gf(p,k,[c0,...,ck])")),
    };
    ring.or_else(|e| err(line, e.to_string()))
}

/// `elements = 0, 1, ...` then one `add x = ...` and one `mul x = ...` row per element.
fn parse_ring_tables(header: usize, rows: &Rows) -> Result<FiniteRing, ParseError> {
    let mut name = "R".to_string();
    let mut labels: Vec<String> = Vec::new();
    let mut add_rows: HashMap<String, (usize, Vec<String>)> = HashMap::new();
    let mut mul_rows: HashMap<String, (usize, Vec<String>)> = HashMap::new();
    for (line, text) in rows {
        let Some((k, v)) = key_value(text) else { return err(*line, format!("malformed ring table row `{text}`")) };
        let entries = || v.split(',').map(|x| x.trim().to_string()).collect::<Vec<_>>();
        match k.split_once(' ') {
            None if k == "name" => {
                if v.starts_with("Z/") || v.starts_with("GF(") {
                    return err(*line, "custom ring names may not start with `Z/` or `GF(`");
                }
                name = v.to_string();
            }
            None if k == "elements" => labels = entries(),
            Some(("add", x)) => {
                add_rows.insert(x.trim().to_string(), (*line, entries()));
            }
            Some(("mul", x)) => {
                mul_rows.insert(x.trim().to_string(), (*line, entries()));
            }
            _ => return err(*line, format!("unknown ring table row `{text}`; expected `name`, `elements`, `add x` or `mul x`")),
        }
    }
    if labels.is_empty() {
        return err(header, "[ring.tables] needs an `elements = ...` row");
    }
    let index: HashMap<&str, Elem> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i as Elem)).collect();
    let (Some(&zero), Some(&one)) = (index.get("0"), index.get("1")) else {
        return err(header, "[ring.tables] elements must include `0` and `1`");
    };
    let mut tables = Vec::new();
    for (op, table_rows) in [("add", &add_rows), ("mul", &mul_rows)] {
        let mut table = Vec::with_capacity(labels.len() * labels.len());
        for x in &labels {
            let Some((line, row)) = table_rows.get(x) else { return err(header, format!("missing row `{op} {x}`")) };
            if row.len() != labels.len() {
                return err(*line, format!("`{op} {x}` needs {} entries", labels.len()));
            }
            for y in row {
                table.push(*index.get(y.as_str()).map_or_else(|| err(*line, format!("unknown element `{y}`")), Ok)?);
            }
        }
        tables.push(table);
    }
    let mul = tables.pop().unwrap_or_default();
    let add = tables.pop().unwrap_or_default();
    FiniteRing::from_tables(name, labels, add, mul, zero, one).or_else(|e| err(header, e.to_string()))
}

fn parse_group(line: usize, s: &str) -> Result<GroupSpec, ParseError> {
    let Some((name, args)) = call(s) else { return err(line, format!("malformed group `{s}`")) };
    let finite = |g: GroupSpec| match g {
        GroupSpec::Finite(g) => Ok(g),
        GroupSpec::FreeAbelian(_) => err(line, "free abelian groups cannot be multiplied with finite groups"),
    };
    Ok(match (name.as_str(), args.len()) {
        ("cyclic", 1) => {
            let n = number(line, &args[0])?;
            if n == 0 {
                return err(line, "cyclic(0) is not a finite group");
            }
            GroupSpec::Finite(FiniteGroup::cyclic(n))
        }
        ("klein4", 0) => GroupSpec::Finite(FiniteGroup::klein4()),
        ("trivial", 0) => GroupSpec::Finite(FiniteGroup::trivial()),
        ("product", 2) => {
            let g = finite(parse_group(line, &args[0])?)?;
            let h = finite(parse_group(line, &args[1])?)?;
            GroupSpec::Finite(FiniteGroup::product(&g, &h))
        }
        ("free_abelian", 1) => GroupSpec::FreeAbelian(number(line, &args[0])?),
        _ => return err(line, format!("unknown group `{s}`; expected cyclic(n), klein4, trivial, product(G,H) or free_abelian(k)")),
    })
}

fn parse_groupoid_expr(line: usize, s: &str) -> Result<FiniteGroupoid, ParseError> {
    let Some((name, args)) = call(s) else { return err(line, format!("malformed groupoid `{s}`")) };
    match (name.as_str(), args.len()) {
        ("full_relation", 1) => {
            let n = number(line, &args[0])?;
            if n == 0 {
                return Ok(FiniteGroupoid::empty());
            }
            Ok(FiniteGroupoid::full_relation(n))
        }
        ("group", 1) => match parse_group(line, &args[0])? {
            GroupSpec::Finite(g) => Ok(FiniteGroupoid::group_as_groupoid(&g)),
            GroupSpec::FreeAbelian(_) => err(line, "a groupoid must be finite"),
        },
        ("union", 2) => {
            let g = parse_groupoid_expr(line, &args[0])?;
            let h = parse_groupoid_expr(line, &args[1])?;
            Ok(FiniteGroupoid::disjoint_union(&g, &h))
        }
        _ => err(line, format!("unknown groupoid `{s}`; expected full_relation(n), group(G) or union(G1, G2)")),
    }
}

fn parse_explicit_groupoid(rows: &Rows) -> Result<FiniteGroupoid, ParseError> {
    let mut objects: Vec<String> = Vec::new();
    let mut arrows: Vec<(String, String, String, usize)> = Vec::new();
    let mut products: Vec<(usize, String, String, String)> = Vec::new();
    for (line, text) in rows {
        let line = *line;
        if let Some(rest) = text.strip_prefix("objects") {
            let Some(list) = rest.trim().strip_prefix('=') else { return err(line, "expected `objects = x, y, ...`") };
            objects = list.split(',').map(|o| o.trim().to_string()).filter(|o| !o.is_empty()).collect();
        } else if let Some((lhs, rhs)) = text.split_once(" . ") {
            let Some((b, c)) = rhs.split_once('=') else { return err(line, "expected `a . b = c`") };
            products.push((line, lhs.trim().to_string(), b.trim().to_string(), c.trim().to_string()));
        } else if let Some((name, ends)) = text.split_once(':') {
            let Some((s, r)) = ends.split_once("->") else { return err(line, "expected `name: source -> range`") };
            arrows.push((name.trim().to_string(), s.trim().to_string(), r.trim().to_string(), line));
        } else {
            return err(line, format!("malformed groupoid row `{text}`"));
        }
    }
    if objects.is_empty() {
        let line = rows.first().map_or(0, |r| r.0);
        return err(line, "explicit groupoid needs an `objects = ...` row");
    }
    let obj_index: HashMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
    let mut names = objects.clone();
    let mut src: Vec<usize> = (0..objects.len()).collect();
    let mut rng = src.clone();
    for (name, s, r, line) in &arrows {
        if names.contains(name) {
            return err(*line, format!("arrow `{name}` is declared twice or clashes with an object"));
        }
        let (Some(&si), Some(&ri)) = (obj_index.get(s.as_str()), obj_index.get(r.as_str())) else {
            return err(*line, format!("arrow `{name}` refers to an undeclared object"));
        };
        names.push(name.clone());
        src.push(si);
        rng.push(ri);
    }
    let k = names.len();
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut compose = vec![None; k * k];
    for a in 0..k {
        for b in 0..k {
            if src[a] == rng[b] {
                if a < objects.len() {
                    compose[a * k + b] = Some(b);
                } else if b < objects.len() {
                    compose[a * k + b] = Some(a);
                }
            }
        }
    }
    for (line, a, b, c) in &products {
        let lookup = |n: &str| index.get(n).copied().ok_or(n.to_string());
        let (ia, ib, ic) = match (lookup(a), lookup(b), lookup(c)) {
            (Ok(x), Ok(y), Ok(z)) => (x, y, z),
            (Err(n), _, _) | (_, Err(n), _) | (_, _, Err(n)) => return err(*line, format!("unknown arrow `{n}`")),
        };
        if src[ia] != rng[ib] {
            return err(*line, format!("`{a} . {b}`: {a} and {b} are not composable"));
        }
        if ia < objects.len() || ib < objects.len() {
            continue;
        }
        compose[ia * k + ib] = Some(ic);
    }
    for a in objects.len()..k {
        for b in objects.len()..k {
            if src[a] == rng[b] && compose[a * k + b].is_none() {
                let line = rows.last().map_or(0, |r| r.0);
                return err(line, format!("missing product `{} . {}`", names[a], names[b]));
            }
        }
    }
    FiniteGroupoid::from_composition(objects, names, src, rng, compose).map_err(|e| ParseError {
        line: rows.last().map(|r| r.0),
        message: e.to_string(),
    })
}

fn parse_cocycle(ring: &Arc<FiniteRing>, g: &Arc<FiniteGroupoid>, rows: &Rows) -> Result<Cocycle, ParseError> {
    let arrow = |line: usize, name: &str| {
        g.arrow_index(name.trim()).map_or_else(|| err(line, format!("unknown arrow `{}`", name.trim())), Ok)
    };
    let elem = |line: usize, v: &str| {
        ring.parse_elem(v.trim()).map_or_else(|| err(line, format!("`{}` is not an element of {}", v.trim(), ring.name())), Ok)
    };
    let mut entries = Vec::new();
    let mut shift: Vec<Elem> = vec![ring.one(); g.num_arrows()];
    let mut shifted = false;
    for (line, text) in rows {
        let line = *line;
        if text == "trivial" {
            continue;
        }
        let Some((lhs, rhs)) = key_value(text) else { return err(line, format!("malformed cocycle row `{text}`")) };
        let Some((name, args)) = call(lhs) else { return err(line, format!("malformed cocycle row `{text}`")) };
        match (name.as_str(), args.len()) {
            ("c", 2) => {
                let (a, b) = (arrow(line, &args[0])?, arrow(line, &args[1])?);
                if g.compose(a, b).is_none() {
                    return err(line, format!("c({},{}): {} and {} are not composable", args[0], args[1], args[0], args[1]));
                }
                entries.push((a, b, elem(line, rhs)?));
            }
            ("b", 1) => {
                let a = arrow(line, &args[0])?;
                let v = elem(line, rhs)?;
                if !ring.is_unit(v) {
                    return err(line, format!("b({}) must be a unit", args[0]));
                }
                shift[a] = v;
                shifted = true;
            }
            _ => return err(line, format!("expected `trivial`, `c(a,b) = t` or `b(a) = t`, found `{text}`")),
        }
    }
    let first = rows.first().map(|r| r.0);
    let wrap = |e: twistpair::Error| ParseError { line: first, message: e.to_string() };
    let mut c = Cocycle::from_entries(ring.clone(), g.clone(), &entries).map_err(wrap)?;
    if shifted {
        let b = Cocycle::coboundary(ring.clone(), g.clone(), &shift).map_err(wrap)?;
        c = c.times(&b).map_err(wrap)?;
    }
    c.check().map_err(|v| ParseError { line: first, message: format!("not a normalised 2-cocycle: {v}") })?;
    Ok(c)
}

/// Parses `2*x + (a+1)*y - z` over the named basis.
pub fn parse_combination(ring: &FiniteRing, labels: &[String], s: &str) -> Result<Vector, String> {
    let mut v = vec![ring.zero(); labels.len()];
    if s.trim() == "0" {
        return Ok(v);
    }
    let normalised = s.replace(" - ", " + -");
    for term in split_top(&normalised, '+') {
        let (neg, term) = match term.strip_prefix('-') {
            Some(t) => (true, t.trim()),
            None => (false, term.as_str()),
        };
        let parts = split_top(term, '*');
        let (coef, label) = match parts.as_slice() {
            [label] => (ring.one(), label.as_str()),
            [c, label] => {
                let c = c.trim_start_matches('(').trim_end_matches(')');
                (ring.parse_elem(c).ok_or(format!("`{c}` is not an element of {}", ring.name()))?, label.as_str())
            }
            _ => return Err(format!("malformed term `{term}`")),
        };
        let i = labels.iter().position(|l| l == label).ok_or(format!("unknown basis element `{label}`"))?;
        let coef = if neg { ring.neg(coef) } else { coef };
        v[i] = ring.add(v[i], coef);
    }
    Ok(v)
}

fn parse_algebra(ring: &Arc<FiniteRing>, rows: &Rows) -> Result<Arc<AbstractAlgebra>, ParseError> {
    if let [(line, text)] = rows.as_slice() {
        if let Some((name, args)) = call(text) {
            if name == "matrix" && args.len() == 1 {
                return Ok(Arc::new(AbstractAlgebra::matrix(ring.clone(), number(*line, &args[0])?)));
            }
        }
    }
    let mut labels: Option<Vec<String>> = None;
    let mut rules = Vec::new();
    for (line, text) in rows {
        if let Some(("basis", list)) = key_value(text) {
            labels = Some(list.split(',').map(|l| l.trim().to_string()).collect());
        } else if let Some((lhs, rhs)) = text.split_once('=') {
            rules.push((*line, lhs.trim().to_string(), rhs.trim().to_string()));
        } else {
            return err(*line, format!("malformed algebra row `{text}`"));
        }
    }
    let first = rows.first().map_or(0, |r| r.0);
    let Some(labels) = labels else { return err(first, "algebra needs `matrix(n)` or a `basis = ...` row") };
    let d = labels.len();
    let mut products = vec![Vec::new(); d * d];
    for (line, lhs, rhs) in rules {
        let Some((x, y)) = lhs.split_once('*') else { return err(line, "expected `x * y = combination`") };
        let find = |n: &str| labels.iter().position(|l| l == n.trim());
        let (Some(i), Some(j)) = (find(x), find(y)) else { return err(line, format!("unknown basis element in `{lhs}`")) };
        let v = parse_combination(ring, &labels, &rhs).or_else(|m| err(line, m))?;
        products[i * d + j] = v.iter().enumerate().filter(|(_, &c)| c != ring.zero()).map(|(k, &c)| (k, c)).collect();
    }
    AbstractAlgebra::new(ring.clone(), labels, products)
        .map(Arc::new)
        .map_err(|e| ParseError { line: Some(first), message: e.to_string() })
}

/// Parses a whole document.
pub fn parse_input(text: &str) -> Result<InputDocument, ParseError> {
    let mut sections: HashMap<String, Rows> = HashMap::new();
    let mut current = "ring".to_string();
    let mut seen_header: HashMap<String, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            let name = name.trim().to_lowercase();
            if !SECTIONS.contains(&name.as_str()) {
                return err(line, format!("unknown section [{name}]"));
            }
            if seen_header.insert(name.clone(), line).is_some() {
                return err(line, format!("section [{name}] appears twice"));
            }
            current = name;
            sections.entry(current.clone()).or_default();
            continue;
        }
        sections.entry(current.clone()).or_default().push((line, body.to_string()));
    }

    let ring_rows = sections.remove("ring").unwrap_or_default();
    let ring = match (ring_rows.first(), sections.remove("ring.tables")) {
        (Some(_), Some(_)) => return err(seen_header["ring.tables"], "give either [ring] or [ring.tables], not both"),
        (None, Some(rows)) => Arc::new(parse_ring_tables(seen_header["ring.tables"], &rows)?),
        (None, None) => {
            return Err(ParseError {
                line: None,
                message: "missing [ring] section: add `ring = gf(p,k)` or `ring = zmod(n)`, or a [ring.tables] block".into(),
            })
        }
        (Some((ring_line, ring_text)), None) => {
            if ring_rows.len() > 1 {
                return err(ring_rows[1].0, "the [ring] section takes a single row");
            }
            let spec = key_value(ring_text).map_or(ring_text.as_str(), |(k, v)| if k == "ring" { v } else { "" });
            Arc::new(parse_ring(*ring_line, spec)?)
        }
    };

    let mut options = Options::default();
    for (line, text) in sections.remove("options").unwrap_or_default() {
        match key_value(&text) {
            Some(("cap", v)) => options.cap = v.parse().or_else(|_| err(line, format!("cap must be an integer, found `{v}`")))?,
            Some(("oracle", "on")) => options.oracle = true,
            Some(("oracle", "off")) => options.oracle = false,
            _ => return err(line, format!("unknown option `{text}`; expected `cap = n` or `oracle = on|off`")),
        }
    }

    let group = match sections.remove("group") {
        None => None,
        Some(rows) => match rows.as_slice() {
            [(line, text)] => {
                let spec = key_value(text).map_or(text.as_str(), |(_, v)| v);
                Some(parse_group(*line, spec)?)
            }
            [] => return Err(ParseError { line: seen_header.get("group").copied(), message: "empty [group] section".into() }),
            [_, (line, _), ..] => return err(*line, "the [group] section takes a single row"),
        },
    };

    let groupoid_rows = sections.remove("groupoid");
    let algebra_rows = sections.remove("algebra");
    let pair_rows = sections.remove("pair");
    let cocycle_rows = sections.remove("cocycle");
    if groupoid_rows.is_some() && algebra_rows.is_some() {
        return err(seen_header["algebra"], "give either [groupoid] or [algebra], not both");
    }
    let groupoid = match (&groupoid_rows, &group) {
        (Some(rows), _) => Some(Arc::new(match rows.as_slice() {
            [(line, text)] if !text.starts_with("objects") => parse_groupoid_expr(*line, text)?,
            _ => parse_explicit_groupoid(rows)?,
        })),
        (None, Some(GroupSpec::Finite(g))) if algebra_rows.is_none() => Some(Arc::new(FiniteGroupoid::group_as_groupoid(g))),
        _ => None,
    };
    let twist = match (&groupoid, &cocycle_rows) {
        (Some(g), rows) => Some(parse_cocycle(&ring, g, rows.as_ref().unwrap_or(&Vec::new()))?),
        (None, Some(_)) => return err(seen_header["cocycle"], "[cocycle] needs a [groupoid] or a finite [group]"),
        (None, None) => None,
    };

    let algebra = match algebra_rows {
        None => {
            if pair_rows.is_some() {
                return err(seen_header["pair"], "[pair] needs an [algebra] section");
            }
            None
        }
        Some(rows) => {
            let algebra = parse_algebra(&ring, &rows)?;
            let Some(prows) = pair_rows else {
                return err(seen_header["algebra"], "[algebra] needs a [pair] section with `sub_basis = ...`");
            };
            let mut sub_basis = Vec::new();
            for (line, text) in prows {
                let Some(("sub_basis", list)) = key_value(&text) else {
                    return err(line, "expected `sub_basis = x, y, ...`");
                };
                for item in split_top(list, ',') {
                    sub_basis.push(parse_combination(&ring, algebra.labels(), &item).or_else(|m| err(line, m))?);
                }
            }
            Some(AlgebraSpec { algebra, sub_basis })
        }
    };

    let elements = match sections.remove("elements") {
        None => None,
        Some(rows) => {
            let mut sets = ElementSets::default();
            for (line, text) in rows {
                match key_value(&text) {
                    Some(("a", v)) => sets.a = split_top(v, ','),
                    Some(("b", v)) => sets.b = split_top(v, ','),
                    _ => return err(line, "expected `a = ...` or `b = ...`"),
                }
            }
            Some(sets)
        }
    };

    Ok(InputDocument { ring, group, twist, algebra, elements, options })
}

/// Writes a twist in this format, renaming objects `o1..` and arrows `a1..`.
pub fn write_twist(c: &Cocycle) -> String {
    let g = c.groupoid();
    let r = c.ring();
    let mut obj = Vec::new();
    let mut name = vec![String::new(); g.num_arrows()];
    for x in 0..g.num_objects() {
        obj.push(format!("o{}", x + 1));
        name[g.unit_at(x)] = format!("o{}", x + 1);
    }
    let mut count = 0;
    for a in 0..g.num_arrows() {
        if !g.is_unit_arrow(a) {
            count += 1;
            name[a] = format!("a{count}");
        }
    }
    let mut out = ring_block(r);
    out.push_str("[groupoid]\n");
    out.push_str(&format!("objects = {}\n", obj.join(", ")));
    for a in (0..g.num_arrows()).filter(|&a| !g.is_unit_arrow(a)) {
        out.push_str(&format!("{}: {} -> {}    # {}\n", name[a], obj[g.src(a)], obj[g.rng(a)], g.arrow_name(a)));
    }
    for (a, b, ab) in g.composable_pairs() {
        if !g.is_unit_arrow(a) && !g.is_unit_arrow(b) {
            out.push_str(&format!("{} . {} = {}\n", name[a], name[b], name[ab]));
        }
    }
    out.push_str("[cocycle]\ntrivial\n");
    for (a, b, _) in g.composable_pairs() {
        let v = c.value(a, b);
        if v != r.one() {
            out.push_str(&format!("c({},{}) = {}\n", name[a], name[b], r.label(v)));
        }
    }
    out
}

/// A `[ring]` or `[ring.tables]` section describing `r`.
pub fn ring_block(r: &FiniteRing) -> String {
    if let Some(spec) = ring_spec(r) {
        return format!("[ring]\nring = {spec}\n");
    }
    let mut out = format!("[ring.tables]\nname = {}\nelements = {}\n", r.name(), r.labels().join(", "));
    for (op, f) in [("add", FiniteRing::add as fn(&FiniteRing, Elem, Elem) -> Elem), ("mul", FiniteRing::mul)] {
        for x in r.elements() {
            let row: Vec<&str> = r.elements().map(|y| r.label(f(r, x, y))).collect();
            out.push_str(&format!("{op} {} = {}\n", r.label(x), row.join(", ")));
        }
    }
    out
}

/// The `ring = ...` spelling of a ring, if it is one of the built-in families.
///
/// Extension fields carry their modulus, so element labels keep their meaning.
pub fn ring_spec(r: &FiniteRing) -> Option<String> {
    let n = r.name();
    if let Some(m) = n.strip_prefix("Z/") {
        return Some(format!("zmod({m})"));
    }
    let q = n.strip_prefix("GF(").and_then(|q| q.strip_suffix(')'))?;
    let Some((p, k)) = q.split_once('^') else { return Some(format!("gf({q},1)")) };
    let (p, k): (usize, u32) = (p.parse().unwrap_or(0), k.parse().unwrap_or(0));
    // Elements are indexed by their coefficient vectors in base p, so `a` is p and a^k encodes its reduction.
    let mut rem = r.pow(p as Elem, k as u64) as usize;
    let mut coeffs = Vec::new();
    for _ in 0..k {
        coeffs.push(((p - rem % p) % p).to_string());
        rem /= p;
    }
    coeffs.push("1".into());
    Some(format!("gf({p},{k},[{}])", coeffs.join(",")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use twistpair::reconstruct::compare_twists;
    use twistpair::twist::twist_from_cocycle;

    #[test]
    fn minimal_document() {
        let doc = parse_input("ring = gf(3,1)\n[groupoid]\nfull_relation(2)\n[cocycle]\ntrivial\n").unwrap();
        assert_eq!(doc.ring.size(), 3);
        let c = doc.twist.unwrap();
        assert_eq!(c.groupoid().num_arrows(), 4);
        assert!(c.is_trivial());
    }

    #[test]
    fn missing_ring_is_named() {
        let e = parse_input("[groupoid]\nfull_relation(2)\n").unwrap_err();
        assert!(e.message.contains("[ring]"), "{e}");
    }

    #[test]
    fn non_composable_cocycle_row() {
        let e = parse_input("ring = gf(3,1)\n[groupoid]\nfull_relation(2)\n[cocycle]\nc((1,2),(1,2)) = 2\n").unwrap_err();
        assert_eq!(e.line, Some(5));
        assert!(e.message.contains("(1,2)") && e.message.contains("not composable"), "{e}");
    }

    #[test]
    fn unknown_section() {
        let e = parse_input("ring = gf(2,1)\n[nonsense]\n").unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn explicit_groupoid_and_coboundary() {
        let text = "[ring]\nring = zmod(5)\n[groupoid]\nobjects = x, y\nf: x -> y\ng: y -> x\nf . g = y\ng . f = x\n[cocycle]\nb(f) = 2\nb(g) = 4\n";
        let c = parse_input(text).unwrap().twist.unwrap();
        let g = c.groupoid();
        assert_eq!(g.num_arrows(), 4);
        let (f, h) = (g.arrow_index("f").unwrap(), g.arrow_index("g").unwrap());
        // δb(f,g) = b(f)b(g)b(y)^{-1} = 8 = 3.
        assert_eq!(c.value(f, h), 3);
    }

    #[test]
    fn missing_product_is_reported() {
        let e = parse_input("ring = zmod(2)\n[groupoid]\nobjects = x, y\nf: x -> y\ng: y -> x\nf . g = y\n").unwrap_err();
        assert!(e.message.contains("missing product `g . f`"), "{e}");
    }

    #[test]
    fn algebra_and_pair() {
        let text = "ring = gf(2,2)\n[algebra]\nbasis = e, x\ne * e = e\ne * x = x\nx * e = x\nx * x = (a+1)*e\n[pair]\nsub_basis = e\n";
        let doc = parse_input(text).unwrap();
        let spec = doc.algebra.unwrap();
        assert_eq!(spec.algebra.dim(), 2);
        assert_eq!(spec.sub_basis, vec![vec![1, 0]]);
        assert!(doc.twist.is_none());
    }

    #[test]
    fn combinations() {
        let r = make_gf(2, 2, None).unwrap();
        let labels = vec!["x".to_string(), "y".to_string()];
        let v = parse_combination(&r, &labels, "(a+1)*x + y + y").unwrap();
        assert_eq!(v[1], r.zero());
        assert_eq!(r.label(v[0]), "a+1");
        assert!(parse_combination(&r, &labels, "z").is_err());
    }

    #[test]
    fn written_twists_parse_back() {
        let r = Arc::new(make_gf(3, 1, None).unwrap());
        let g = Arc::new(FiniteGroupoid::disjoint_union(
            &FiniteGroupoid::full_relation(2),
            &FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2)),
        ));
        let c = Cocycle::from_entries(r, g.clone(), &[(5, 5, 2)]).unwrap();
        let back = parse_input(&write_twist(&c)).unwrap().twist.unwrap();
        assert_eq!(back.groupoid().num_arrows(), g.num_arrows());
        let (t1, t2) = (twist_from_cocycle(&c).unwrap(), twist_from_cocycle(&back).unwrap());
        assert!(compare_twists(&t1, &t2, DEFAULT_CAP).unwrap().is_some());
    }

    const F2XX: &str = "[ring.tables]\nname = F2[x]/(x^2)\nelements = 0, 1, x, 1+x\n\
        add 0 = 0, 1, x, 1+x\nadd 1 = 1, 0, 1+x, x\nadd x = x, 1+x, 0, 1\nadd 1+x = 1+x, x, 1, 0\n\
        mul 0 = 0, 0, 0, 0\nmul 1 = 0, 1, x, 1+x\nmul x = 0, x, 0, x\nmul 1+x = 0, 1+x, x, 1\n";

    #[test]
    fn ring_tables() {
        let doc = parse_input(&format!("{F2XX}[group]\ncyclic(2)\n")).unwrap();
        assert_eq!(doc.ring.name(), "F2[x]/(x^2)");
        assert!(!doc.ring.is_reduced());
        assert!(ring_spec(&doc.ring).is_none());
        let again = parse_input(&write_twist(doc.twist.as_ref().unwrap())).unwrap();
        assert_eq!(again.ring.labels(), doc.ring.labels());
        let broken = F2XX.replace("mul x = 0, x, 0, x", "mul x = 0, x, 1, x");
        assert!(parse_input(&broken).is_err());
        let e = parse_input(&F2XX.replace("mul 1+x = 0, 1+x, x, 1\n", "")).unwrap_err();
        assert!(e.message.contains("missing row `mul 1+x`"), "{e}");
        assert!(parse_input(&format!("ring = zmod(2)\n{F2XX}")).is_err());
    }

    #[test]
    fn ring_specs_round_trip() {
        for spec in ["zmod(4)", "gf(3,1)", "gf(2,2)", "gf(3,2,[2,2,1])", "gf(2,3,[1,0,1,1])"] {
            let r = parse_ring(1, spec).unwrap();
            let back = parse_ring(1, &ring_spec(&r).unwrap()).unwrap();
            assert_eq!(back.labels(), r.labels());
            for x in r.elements() {
                for y in r.elements() {
                    assert_eq!(back.mul(x, y), r.mul(x, y), "{spec}");
                }
            }
        }
        assert_eq!(ring_spec(&parse_ring(1, "gf(2,2)").unwrap()).unwrap(), "gf(2,2,[1,1,1])");
    }
}
