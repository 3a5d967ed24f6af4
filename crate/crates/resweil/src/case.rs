//! The case-file language. One case per file, one declaration per line:
//!
//! ```text
//! case "dual-numbers-etale"
//! field p = 7
//! algebra A : vars eps ; rels eps^2
//! scheme X : vars y ; rels y^2 - y - eps
//! expect S = 1
//! expect pi0_res = 2
//! checks theorem, lemma-local, adjunction(1,2,3), cover(y, y-1)
//! ```
//!
//! Several algebras may be declared; `algebra A = A1 x A2` declares a
//! product. The scheme lives over the last declared algebra unless written
//! `scheme X over A1 : ...`. `#` starts a comment.

use std::fmt;

use resweil_core::finalg::{product_algebra, AlgebraPresentation, ProductAlgebra};
use resweil_core::multipoly::parse_poly;
use resweil_core::{Error as CoreError, Field, MPoly, SchemePresentation};

use crate::report::{check_text, expectation_text};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseErrorKind {
    Syntax(String),
    UndeclaredVariable(String),
    NonPrime(u64),
    Invalid(String),
}

/// A diagnostic with a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseError {
    pub line: usize,
    pub column: usize,
    pub kind: CaseErrorKind,
}

impl fmt::Display for CaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            CaseErrorKind::Syntax(m) => write!(f, "syntax error: {}", m),
            CaseErrorKind::UndeclaredVariable(v) => write!(f, "undeclared variable `{}`", v),
            CaseErrorKind::NonPrime(p) => write!(f, "{} is not a prime", p),
            CaseErrorKind::Invalid(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CaseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraBody {
    Presented { vars: Vec<String>, rels: Vec<String> },
    Product(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDecl {
    pub name: String,
    pub body: AlgebraBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeDecl {
    pub name: String,
    pub over: String,
    pub vars: Vec<String>,
    pub rels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    /// `|S|`
    S(usize),
    /// `|π₀(Res)|`
    Pi0Res(usize),
    /// Fiber sizes in the order of `S`.
    Fibers(Vec<usize>),
    /// Cycle type of Frobenius on `π₀(Res)`, ascending.
    CycleTypes(Vec<usize>),
    Smooth(bool),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Theorem,
    LemmaLocal,
    Adjunction(Vec<usize>),
    Cover(Vec<String>),
    Product,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub name: String,
    pub p: u64,
    pub algebras: Vec<AlgebraDecl>,
    pub scheme: SchemeDecl,
    pub expectations: Vec<Expectation>,
    pub checks: Vec<CheckKind>,
}

/// A case turned into algebraic objects.
#[derive(Clone, Debug)]
pub struct Instance {
    pub field: Field,
    pub base: AlgebraPresentation,
    /// Set when the scheme's base was declared as a product.
    pub product: Option<ProductAlgebra>,
    pub scheme: SchemePresentation,
    pub cover: Vec<MPoly>,
}

impl Case {
    pub fn expect_smooth(&self) -> bool {
        !self.expectations.contains(&Expectation::Smooth(false))
    }

    /// Builds the presentations. Never fails for a parsed case.
    pub fn instantiate(&self) -> Result<Instance, CoreError> {
        let field = Field::prime(self.p)?;
        let mut built: Vec<(String, AlgebraPresentation, Option<ProductAlgebra>)> = Vec::new();
        for decl in &self.algebras {
            let (alg, prod) = build_algebra(&field, decl, &built)?;
            built.push((decl.name.clone(), alg, prod));
        }
        let (_, base, product) = built
            .iter()
            .find(|(n, _, _)| *n == self.scheme.over)
            .cloned()
            .ok_or_else(|| CoreError::Invalid(format!("unknown algebra {}", self.scheme.over)))?;
        let vars: Vec<&str> = self.scheme.vars.iter().map(String::as_str).collect();
        let rels: Vec<&str> = self.scheme.rels.iter().map(String::as_str).collect();
        let scheme = SchemePresentation::parse(&base, &vars, &rels)?;
        let mut cover = Vec::new();
        for c in &self.checks {
            if let CheckKind::Cover(hs) = c {
                for h in hs {
                    cover.push(parse_poly(scheme.ring(), h)?);
                }
            }
        }
        Ok(Instance {
            field,
            base,
            product,
            scheme,
            cover,
        })
    }
}

fn build_algebra(
    field: &Field,
    decl: &AlgebraDecl,
    built: &[(String, AlgebraPresentation, Option<ProductAlgebra>)],
) -> Result<(AlgebraPresentation, Option<ProductAlgebra>), CoreError> {
    match &decl.body {
        AlgebraBody::Presented { vars, rels } => {
            let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
            let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
            Ok((AlgebraPresentation::parse(field, &vars, &rels)?, None))
        }
        AlgebraBody::Product(a, b) => {
            let find = |n: &str| {
                built
                    .iter()
                    .find(|(m, _, _)| m == n)
                    .map(|(_, a, _)| a.clone())
                    .ok_or_else(|| CoreError::Invalid(format!("unknown algebra {}", n)))
            };
            let prod = product_algebra(&find(a)?, &find(b)?)?;
            Ok((prod.algebra.clone(), Some(prod)))
        }
    }
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, byte: usize, kind: CaseErrorKind) -> CaseError {
        CaseError {
            line: self.no,
            column: self.text[..byte.min(self.text.len())].chars().count() + 1,
            kind,
        }
    }

    fn syntax(&self, byte: usize, msg: impl Into<String>) -> CaseError {
        self.err(byte, CaseErrorKind::Syntax(msg.into()))
    }
}

/// Trimmed sub-slice with its byte offset.
fn trimmed(text: &str, at: usize) -> (usize, &str) {
    let lead = text.len() - text.trim_start().len();
    (at + lead, text.trim())
}

/// Splits on commas outside parentheses.
fn split_top(text: &str, at: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(trimmed(&text[start..i], at + start));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(trimmed(&text[start..], at + start));
    if out.len() == 1 && out[0].1.is_empty() {
        out.clear();
    }
    out
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// `vars a, b ; rels f, g` starting at byte `at` of the line.
/// Items with their byte offsets in the line.
type Placed = Vec<(usize, String)>;

fn parse_body(line: &Line, text: &str, at: usize) -> Result<(Placed, Placed), CaseError> {
    let (at, text) = trimmed(text, at);
    let Some(rest) = text.strip_prefix("vars") else {
        return Err(line.syntax(at, "expected `vars`"));
    };
    let Some(semi) = rest.find(';') else {
        return Err(line.syntax(at + text.len(), "expected `;` before `rels`"));
    };
    let vars_at = at + 4;
    let mut vars = Vec::new();
    for (off, piece) in split_top(&rest[..semi], vars_at) {
        for (i, w) in piece.split_whitespace().map(|w| (piece.find(w).unwrap(), w)) {
            if !is_ident(w) {
                return Err(line.syntax(off + i, format!("`{}` is not a variable name", w)));
            }
            vars.push((off + i, w.to_string()));
        }
    }
    let (rels_at, after) = trimmed(&rest[semi + 1..], vars_at + semi + 1);
    let Some(rels_text) = after.strip_prefix("rels") else {
        return Err(line.syntax(rels_at, "expected `rels`"));
    };
    let mut rels = Vec::new();
    for (off, piece) in split_top(rels_text, rels_at + 4) {
        if piece.is_empty() {
            return Err(line.syntax(off, "empty relation"));
        }
        rels.push((off, piece.to_string()));
    }
    Ok((vars, rels))
}

fn parse_usize(line: &Line, at: usize, s: &str) -> Result<usize, CaseError> {
    s.parse()
        .map_err(|_| line.syntax(at, format!("expected a non-negative integer, found `{}`", s)))
}

fn parse_list(line: &Line, at: usize, s: &str) -> Result<Vec<usize>, CaseError> {
    split_top(s, at)
        .into_iter()
        .map(|(o, x)| parse_usize(line, o, x))
        .collect()
}

/// Reports a polynomial error at its position inside the line.
fn poly_error(line: &Line, at: usize, text: &str, e: CoreError) -> CaseError {
    match e {
        CoreError::Syntax { offset, message } => line.syntax(at + offset, message),
        CoreError::UnknownVariable(v) => {
            let pos = find_ident(text, &v).unwrap_or(0);
            line.err(at + pos, CaseErrorKind::UndeclaredVariable(v))
        }
        other => line.err(at, CaseErrorKind::Invalid(other.to_string())),
    }
}

fn find_ident(text: &str, name: &str) -> Option<usize> {
    let mut from = 0;
    while let Some(i) = text[from..].find(name) {
        let s = from + i;
        let e = s + name.len();
        let before = text[..s]
            .chars()
            .next_back()
            .is_some_and(|c| c.is_alphanumeric() || c == '_');
        let after = text[e..]
            .chars()
            .next()
            .is_some_and(|c| c.is_alphanumeric() || c == '_');
        if !before && !after {
            return Some(s);
        }
        from = e;
    }
    None
}

struct Pending {
    name: Option<String>,
    p: Option<(usize, u64)>,
    algebras: Vec<(usize, AlgebraDecl, Vec<usize>)>,
    scheme: Option<(usize, SchemeDecl, Vec<usize>)>,
    expectations: Vec<Expectation>,
    checks: Option<(usize, Vec<CheckKind>, Vec<usize>)>,
}

/// Parses and validates a case file.
pub fn parse_case(text: &str) -> Result<Case, CaseError> {
    let mut st = Pending {
        name: None,
        p: None,
        algebras: Vec::new(),
        scheme: None,
        expectations: Vec::new(),
        checks: None,
    };
    let lines: Vec<&str> = text.lines().collect();
    for (i, raw) in lines.iter().enumerate() {
        let content = match raw.find('#') {
            Some(h) => &raw[..h],
            None => raw,
        };
        let line = Line { no: i + 1, text: raw };
        let (at, body) = trimmed(content, 0);
        if body.is_empty() {
            continue;
        }
        let kw_end = body.find(char::is_whitespace).unwrap_or(body.len());
        let (kw, rest) = body.split_at(kw_end);
        let rest_at = at + kw_end;
        match kw {
            "case" => {
                let (q, r) = trimmed(rest, rest_at);
                let name = r
                    .strip_prefix('"')
                    .and_then(|r| r.strip_suffix('"'))
                    .filter(|n| !n.contains('"') && !n.is_empty())
                    .ok_or_else(|| line.syntax(q, "expected a quoted case name"))?;
                st.name = Some(name.to_string());
            }
            "field" => {
                let (q, r) = trimmed(rest, rest_at);
                let Some(v) = r
                    .strip_prefix('p')
                    .map(str::trim_start)
                    .and_then(|r| r.strip_prefix('='))
                else {
                    return Err(line.syntax(q, "expected `field p = <prime>`"));
                };
                let (vat, v) = trimmed(v, q + r.len() - v.len());
                let p: u64 = v
                    .parse()
                    .map_err(|_| line.syntax(vat, format!("expected an integer, found `{}`", v)))?;
                if !resweil_core::exactfield::is_prime(p) {
                    return Err(line.err(vat, CaseErrorKind::NonPrime(p)));
                }
                Field::prime(p).map_err(|e| line.err(vat, CaseErrorKind::Invalid(e.to_string())))?;
                st.p = Some((line.no, p));
            }
            "algebra" => {
                let (nat, r) = trimmed(rest, rest_at);
                let name_end = r
                    .find(|c: char| c.is_whitespace() || c == ':' || c == '=')
                    .unwrap_or(r.len());
                let name = &r[..name_end];
                if !is_ident(name) {
                    return Err(line.syntax(nat, "expected an algebra name"));
                }
                let (sat, after) = trimmed(&r[name_end..], nat + name_end);
                let decl = if let Some(b) = after.strip_prefix(':') {
                    let (vars, rels) = parse_body(&line, b, sat + 1)?;
                    let mut offsets: Vec<usize> = rels.iter().map(|(o, _)| *o).collect();
                    offsets.insert(0, sat);
                    (
                        AlgebraDecl {
                            name: name.to_string(),
                            body: AlgebraBody::Presented {
                                vars: vars.into_iter().map(|(_, v)| v).collect(),
                                rels: rels.into_iter().map(|(_, r)| r).collect(),
                            },
                        },
                        offsets,
                    )
                } else if let Some(b) = after.strip_prefix('=') {
                    let words: Vec<&str> = b.split_whitespace().collect();
                    match words.as_slice() {
                        [a, "x" | "×", c] if is_ident(a) && is_ident(c) => (
                            AlgebraDecl {
                                name: name.to_string(),
                                body: AlgebraBody::Product(a.to_string(), c.to_string()),
                            },
                            vec![sat + 1],
                        ),
                        _ => return Err(line.syntax(sat + 1, "expected `<algebra> x <algebra>`")),
                    }
                } else {
                    return Err(line.syntax(sat, "expected `:` or `=`"));
                };
                if st.algebras.iter().any(|(_, d, _)| d.name == decl.0.name) {
                    return Err(line.err(nat, CaseErrorKind::Invalid(format!("algebra {} declared twice", name))));
                }
                st.algebras.push((line.no, decl.0, decl.1));
            }
            "scheme" => {
                let (nat, r) = trimmed(rest, rest_at);
                let colon = r.find(':').ok_or_else(|| line.syntax(nat + r.len(), "expected `:`"))?;
                let head: Vec<&str> = r[..colon].split_whitespace().collect();
                let (name, over) = match head.as_slice() {
                    [n] if is_ident(n) => (n.to_string(), None),
                    [n, "over", a] if is_ident(n) && is_ident(a) => (n.to_string(), Some(a.to_string())),
                    _ => return Err(line.syntax(nat, "expected `scheme <name> [over <algebra>] :`")),
                };
                let over = match over {
                    Some(a) => a,
                    None => st.algebras.last().map(|(_, d, _)| d.name.clone()).ok_or_else(|| {
                        line.err(nat, CaseErrorKind::Invalid("scheme declared before any algebra".into()))
                    })?,
                };
                let (vars, rels) = parse_body(&line, &r[colon + 1..], nat + colon + 1)?;
                let mut offsets: Vec<usize> = rels.iter().map(|(o, _)| *o).collect();
                offsets.insert(0, nat);
                st.scheme = Some((
                    line.no,
                    SchemeDecl {
                        name,
                        over,
                        vars: vars.into_iter().map(|(_, v)| v).collect(),
                        rels: rels.into_iter().map(|(_, r)| r).collect(),
                    },
                    offsets,
                ));
            }
            "expect" => {
                let (kat, r) = trimmed(rest, rest_at);
                let eq = r.find('=').ok_or_else(|| line.syntax(kat + r.len(), "expected `=`"))?;
                let key = r[..eq].trim();
                let (vat, v) = trimmed(&r[eq + 1..], kat + eq + 1);
                let e = match key {
                    "S" => Expectation::S(parse_usize(&line, vat, v)?),
                    "pi0_res" => Expectation::Pi0Res(parse_usize(&line, vat, v)?),
                    "fibers" => Expectation::Fibers(parse_list(&line, vat, v)?),
                    "cycle_types" => Expectation::CycleTypes(parse_list(&line, vat, v)?),
                    "smooth" => match v {
                        "true" => Expectation::Smooth(true),
                        "false" => Expectation::Smooth(false),
                        _ => return Err(line.syntax(vat, "expected `true` or `false`")),
                    },
                    _ => return Err(line.syntax(kat, format!("unknown expectation `{}`", key))),
                };
                st.expectations.push(e);
            }
            "checks" => {
                let mut kinds = Vec::new();
                let mut offsets = Vec::new();
                for (off, item) in split_top(rest, rest_at) {
                    let (head, args) = match item.find('(') {
                        Some(o) if item.ends_with(')') => {
                            (&item[..o], Some((off + o + 1, &item[o + 1..item.len() - 1])))
                        }
                        Some(o) => return Err(line.syntax(off + o, "unbalanced parenthesis")),
                        None => (item, None),
                    };
                    let kind = match (head.trim(), args) {
                        ("theorem", None) => CheckKind::Theorem,
                        ("lemma-local", None) => CheckKind::LemmaLocal,
                        ("product", None) => CheckKind::Product,
                        ("adjunction", None) => CheckKind::Adjunction(vec![1, 2, 3]),
                        ("adjunction", Some((aat, a))) => {
                            let ms = parse_list(&line, aat, a)?;
                            if ms.is_empty() || ms.contains(&0) {
                                return Err(line.syntax(aat, "stages must be positive"));
                            }
                            CheckKind::Adjunction(ms)
                        }
                        ("cover", Some((aat, a))) => {
                            let hs = split_top(a, aat);
                            if hs.is_empty() || hs.iter().any(|(_, h)| h.is_empty()) {
                                return Err(line.syntax(aat, "empty cover"));
                            }
                            offsets.extend(hs.iter().map(|(o, _)| *o));
                            CheckKind::Cover(hs.into_iter().map(|(_, h)| h.to_string()).collect())
                        }
                        _ => return Err(line.syntax(off, format!("unknown check `{}`", item))),
                    };
                    kinds.push(kind);
                }
                if kinds.is_empty() {
                    return Err(line.syntax(rest_at, "empty check list"));
                }
                st.checks = Some((line.no, kinds, offsets));
            }
            _ => return Err(line.syntax(at, format!("unknown declaration `{}`", kw))),
        }
    }
    validate(st, &lines)
}

fn validate(st: Pending, lines: &[&str]) -> Result<Case, CaseError> {
    let end = Line {
        no: lines.len().max(1),
        text: lines.last().copied().unwrap_or(""),
    };
    let name = st.name.ok_or_else(|| end.syntax(0, "missing `case` declaration"))?;
    let (_, p) = st.p.ok_or_else(|| end.syntax(0, "missing `field` declaration"))?;
    let field = Field::prime(p).expect("checked when parsed");
    let (scheme_line, scheme, scheme_offsets) =
        st.scheme.ok_or_else(|| end.syntax(0, "missing `scheme` declaration"))?;
    // build algebras in order, pinning errors to their lines
    let mut built: Vec<(String, AlgebraPresentation, Option<ProductAlgebra>)> = Vec::new();
    for (no, decl, offsets) in &st.algebras {
        let line = Line {
            no: *no,
            text: lines[no - 1],
        };
        if let AlgebraBody::Presented { vars, rels } = &decl.body {
            let ring = resweil_core::PolyRing::drl(&field, vars.iter().cloned());
            for (r, off) in rels.iter().zip(&offsets[1..]) {
                parse_poly(&ring, r).map_err(|e| poly_error(&line, *off, r, e))?;
            }
        }
        let (alg, prod) = build_algebra(&field, decl, &built)
            .map_err(|e| line.err(offsets[0], CaseErrorKind::Invalid(e.to_string())))?;
        built.push((decl.name.clone(), alg, prod));
    }
    let sline = Line {
        no: scheme_line,
        text: lines[scheme_line - 1],
    };
    let base = built
        .iter()
        .find(|(n, _, _)| *n == scheme.over)
        .map(|(_, a, _)| a.clone())
        .ok_or_else(|| {
            sline.err(
                scheme_offsets[0],
                CaseErrorKind::Invalid(format!("unknown algebra {}", scheme.over)),
            )
        })?;
    let mut vars = base.vars().to_vec();
    for v in &scheme.vars {
        if vars.contains(v) {
            return Err(sline.err(
                scheme_offsets[0],
                CaseErrorKind::Invalid(format!("variable {} declared twice", v)),
            ));
        }
        vars.push(v.clone());
    }
    let ring = resweil_core::PolyRing::drl(&field, vars);
    for (r, off) in scheme.rels.iter().zip(&scheme_offsets[1..]) {
        parse_poly(&ring, r).map_err(|e| poly_error(&sline, *off, r, e))?;
    }
    let (checks, check_line) = match st.checks {
        Some((no, kinds, offsets)) => (kinds, Some((no, offsets))),
        None => (vec![CheckKind::Theorem], None),
    };
    if let Some((no, offsets)) = check_line {
        let cl = Line {
            no,
            text: lines[no - 1],
        };
        let hs = checks.iter().filter_map(|c| match c {
            CheckKind::Cover(hs) => Some(hs),
            _ => None,
        });
        for (h, off) in hs.flatten().zip(&offsets) {
            parse_poly(&ring, h).map_err(|e| poly_error(&cl, *off, h, e))?;
        }
    }
    let case = Case {
        name,
        p,
        algebras: st.algebras.into_iter().map(|(_, d, _)| d).collect(),
        scheme,
        expectations: st.expectations,
        checks,
    };
    case.instantiate()
        .map_err(|e| sline.err(0, CaseErrorKind::Invalid(e.to_string())))?;
    Ok(case)
}

/// Canonical text of a case; parses back to an equal case.
pub fn render(case: &Case) -> String {
    let mut out = String::new();
    out.push_str(&format!("case \"{}\"\n", case.name));
    out.push_str(&format!("field p = {}\n", case.p));
    for a in &case.algebras {
        match &a.body {
            AlgebraBody::Presented { vars, rels } => out.push_str(&format!(
                "algebra {} : vars {} ; rels {}\n",
                a.name,
                vars.join(", "),
                rels.join(", ")
            )),
            AlgebraBody::Product(x, y) => out.push_str(&format!("algebra {} = {} x {}\n", a.name, x, y)),
        }
    }
    let s = &case.scheme;
    out.push_str(&format!(
        "scheme {} over {} : vars {} ; rels {}\n",
        s.name,
        s.over,
        s.vars.join(", "),
        s.rels.join(", ")
    ));
    for e in &case.expectations {
        out.push_str(&format!("expect {}\n", expectation_text(e)));
    }
    let checks: Vec<String> = case.checks.iter().map(check_text).collect();
    out.push_str(&format!("checks {}\n", checks.join(", ")));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const DUAL: &str = "case \"dual-numbers-etale\"
field p = 7
algebra A : vars eps ; rels eps^2
scheme X : vars y ; rels y^2 - y - eps
expect S = 1
expect pi0_res = 2
checks theorem, lemma-local, adjunction(1,2,3), cover(y, y-1)
";

    #[test]
    fn parses_the_reference_case() {
        let case = parse_case(DUAL).unwrap();
        assert_eq!(case.name, "dual-numbers-etale");
        let inst = case.instantiate().unwrap();
        assert_eq!(inst.base.dim().unwrap(), 2);
        assert_eq!(case.checks.len(), 4);
        assert_eq!(case.checks[3], CheckKind::Cover(vec!["y".into(), "y-1".into()]));
        assert_eq!(inst.cover.len(), 2);
    }

    #[test]
    fn render_round_trips() {
        let case = parse_case(DUAL).unwrap();
        assert_eq!(parse_case(&render(&case)).unwrap(), case);
        let text = "case \"p\"\nfield p = 5\nalgebra K : vars ; rels\nalgebra L : vars t ; rels t^2 - 2\nalgebra P = K x L\nscheme X : vars y ; rels y^2 - t - u\nexpect smooth = true\nchecks product\n";
        let case = parse_case(text).unwrap();
        assert_eq!(case.scheme.over, "P");
        assert_eq!(parse_case(&render(&case)).unwrap(), case);
    }

    #[test]
    fn diagnostics() {
        let bad = DUAL.replace("y^2 - y - eps", "y^2 - u");
        let e = parse_case(&bad).unwrap_err();
        assert_eq!(e.kind, CaseErrorKind::UndeclaredVariable("u".into()));
        assert_eq!((e.line, e.column), (4, 32));
        let e = parse_case(&DUAL.replace("p = 7", "p = 9")).unwrap_err();
        assert_eq!(e.kind, CaseErrorKind::NonPrime(9));
        assert_eq!((e.line, e.column), (2, 11));
        let e = parse_case(&DUAL.replace("eps^2", "eps^^2")).unwrap_err();
        assert!(matches!(e.kind, CaseErrorKind::Syntax(_)));
        assert_eq!(e.line, 3);
        let e = parse_case(&DUAL.replace("checks theorem", "checks theorem, bogus")).unwrap_err();
        assert_eq!(e.line, 7);
        assert!(parse_case("field p = 7\n").is_err());
    }
}
