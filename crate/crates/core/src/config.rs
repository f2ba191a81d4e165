//! The text configuration format.
//!
//! Line-oriented, with `[section]` headers and `key = value` entries; `#`
//! starts a comment. See `docs/format.md` for the grammar. Parsing is two
//! stages: text → [`ConfigFile`] (pure syntax) → [`Configuration`] (blow-ups
//! applied, references resolved).

use std::fmt;
use std::str::FromStr;

use crate::geometry::{BlowupStep, Chain, Configuration, Fiber, GeometryError};
use crate::lattice::{DivisorClass, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Empty(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl ConfigError {
    /// Syntax errors are detected before any geometry is built.
    pub fn is_syntax(&self) -> bool {
        !matches!(self, ConfigError::Geometry(_))
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Syntax {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveDecl {
    pub name: String,
    pub degree: u32,
    pub rational: bool,
    pub nodes: u32,
}

/// A term `c·h` (index 0) or `c·eᵢ` of a class expression.
pub type ClassTerm = (usize, i64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigFile {
    pub name: String,
    pub anticanonical_fibered: bool,
    pub curves: Vec<CurveDecl>,
    pub blowups: Vec<BlowupStep>,
    pub chains: Vec<Chain>,
    pub fibers: Vec<Fiber>,
    pub kw: Vec<(String, Rational)>,
    pub alpha: Option<Vec<ClassTerm>>,
    pub expect: Vec<(String, Vec<ClassTerm>)>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Surface,
    Curves,
    Blowups,
    Chains,
    Fibers,
    Kw,
    Alpha,
    Expect,
}

impl Section {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "surface" => Section::Surface,
            "curves" => Section::Curves,
            "blowups" => Section::Blowups,
            "chains" => Section::Chains,
            "fibers" => Section::Fibers,
            "kw" => Section::Kw,
            "alpha" => Section::Alpha,
            "expect" => Section::Expect,
            _ => return None,
        })
    }
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// `E` followed by digits is reserved for exceptional curves.
fn is_exceptional_name(s: &str) -> bool {
    s.strip_prefix('E')
        .is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
}

fn parse_name(line: usize, s: &str) -> Result<String, ConfigError> {
    if is_name(s) {
        Ok(s.to_string())
    } else {
        Err(syntax(line, format!("invalid name `{s}`")))
    }
}

/// `NAME` or `NAME:MULT`.
fn parse_weighted(line: usize, tok: &str) -> Result<(String, u32), ConfigError> {
    match tok.split_once(':') {
        None => Ok((parse_name(line, tok)?, 1)),
        Some((n, m)) => {
            let m: u32 = m
                .parse()
                .map_err(|_| syntax(line, format!("invalid multiplicity in `{tok}`")))?;
            if m == 0 {
                return Err(syntax(line, format!("zero multiplicity in `{tok}`")));
            }
            Ok((parse_name(line, n)?, m))
        }
    }
}

/// Parse an exact rational: `p`, `p/q` (q ≠ 0).
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let ok = !s.is_empty()
        && s.split('/').count() <= 2
        && s.split('/').enumerate().all(|(i, part)| {
            let digits = if i == 0 { part.strip_prefix('-').unwrap_or(part) } else { part };
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        });
    if !ok {
        return Err(format!("invalid rational `{s}`"));
    }
    Rational::from_str(s).map_err(|e| format!("invalid rational `{s}`: {e}"))
}

/// Parse a class expression such as `3h - e1 - 2e22` or `0`.
pub fn parse_class_expr(s: &str) -> Result<Vec<ClassTerm>, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "0" {
        return Ok(Vec::new());
    }
    if compact.is_empty() {
        return Err("empty class expression".into());
    }
    let bytes = compact.as_bytes();
    let mut terms: Vec<ClassTerm> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let sign = match bytes[i] {
            b'+' => {
                i += 1;
                1
            }
            b'-' => {
                i += 1;
                -1
            }
            _ if i == 0 => 1,
            _ => return Err(format!("expected `+` or `-` at offset {i} in `{s}`")),
        };
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coef: i64 = if start == i {
            1
        } else {
            compact[start..i]
                .parse()
                .map_err(|_| format!("coefficient too large in `{s}`"))?
        };
        let index = match bytes.get(i) {
            Some(b'h') => {
                i += 1;
                0
            }
            Some(b'e') => {
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let idx: usize = compact[start..i]
                    .parse()
                    .map_err(|_| format!("expected basis index after `e` in `{s}`"))?;
                if idx == 0 {
                    return Err(format!("basis index e0 in `{s}`"));
                }
                idx
            }
            _ => return Err(format!("expected `h` or `eN` in `{s}`")),
        };
        if terms.iter().any(|(j, _)| *j == index) {
            return Err(format!("basis element repeated in `{s}`"));
        }
        terms.push((index, sign * coef));
    }
    Ok(terms)
}

/// Realize class terms over (h; e₁ … eₙ).
pub fn class_from_terms(terms: &[ClassTerm], n: usize) -> Result<DivisorClass, GeometryError> {
    let mut cls = DivisorClass::zero(n);
    for &(i, c) in terms {
        if i > n {
            return Err(GeometryError::BasisIndex { index: i, n });
        }
        cls.set(i, c);
    }
    Ok(cls)
}

fn basis_key(i: usize) -> String {
    if i == 0 {
        "h".to_string()
    } else {
        format!("e{i}")
    }
}

fn format_terms(terms: &[ClassTerm]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, &(i, c)) in terms.iter().enumerate() {
        let sign = if c < 0 { "-" } else { "+" };
        if k == 0 {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        out.push_str(&format!("{}{}", c.abs(), basis_key(i)));
    }
    out
}

fn parse_bool(line: usize, s: &str) -> Result<bool, ConfigError> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(syntax(line, format!("expected true or false, found `{s}`"))),
    }
}

impl FromStr for ConfigFile {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ConfigFile {
            name: String::new(),
            anticanonical_fibered: false,
            curves: Vec::new(),
            blowups: Vec::new(),
            chains: Vec::new(),
            fibers: Vec::new(),
            kw: Vec::new(),
            alpha: None,
            expect: Vec::new(),
        };
        let mut section: Option<Section> = None;
        let mut seen_sections: Vec<Section> = Vec::new();
        let mut seen_surface_keys: Vec<String> = Vec::new();
        let mut any_content = false;

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            any_content = true;
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| syntax(line, "unterminated section header"))?
                    .trim();
                let s = Section::parse(name)
                    .ok_or_else(|| syntax(line, format!("unknown section `[{name}]`")))?;
                if seen_sections.contains(&s) {
                    return Err(syntax(line, format!("section `[{name}]` repeated")));
                }
                if s == Section::Alpha {
                    cfg.alpha = Some(Vec::new());
                }
                seen_sections.push(s);
                section = Some(s);
                continue;
            }
            let sec = section.ok_or_else(|| syntax(line, "entry before any section header"))?;
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| syntax(line, "expected `key = value`"))?;
            let key = key.trim();
            let value = value.trim();
            match sec {
                Section::Surface => {
                    if seen_surface_keys.iter().any(|k| k == key) {
                        return Err(syntax(line, format!("key `{key}` repeated")));
                    }
                    match key {
                        "name" => {
                            if value.is_empty() || value.chars().any(char::is_whitespace) {
                                return Err(syntax(line, "surface name must be a single word"));
                            }
                            cfg.name = value.to_string();
                        }
                        "base" => {
                            if value != "CP2" {
                                return Err(syntax(line, format!("unsupported base `{value}`")));
                            }
                        }
                        "anticanonical_fibered" => cfg.anticanonical_fibered = parse_bool(line, value)?,
                        _ => return Err(syntax(line, format!("unknown key `{key}` in [surface]"))),
                    }
                    seen_surface_keys.push(key.to_string());
                }
                Section::Curves => {
                    let name = parse_name(line, key)?;
                    if is_exceptional_name(&name) {
                        return Err(syntax(line, format!("`{name}` is reserved for exceptional curves")));
                    }
                    let mut toks = value.split_whitespace();
                    let degree: u32 = toks
                        .next()
                        .and_then(|d| d.parse().ok())
                        .filter(|&d| d > 0)
                        .ok_or_else(|| syntax(line, "expected a positive degree"))?;
                    let mut decl = CurveDecl {
                        name,
                        degree,
                        rational: false,
                        nodes: 0,
                    };
                    let mut seen_nodes = false;
                    for t in toks {
                        if t == "rational" && !decl.rational {
                            decl.rational = true;
                        } else if let Some(n) = t.strip_prefix("nodes=") {
                            if seen_nodes {
                                return Err(syntax(line, "nodes given twice"));
                            }
                            seen_nodes = true;
                            decl.nodes = n
                                .parse()
                                .map_err(|_| syntax(line, format!("invalid node count `{n}`")))?;
                        } else {
                            return Err(syntax(line, format!("unknown curve attribute `{t}`")));
                        }
                    }
                    cfg.curves.push(decl);
                }
                Section::Blowups => {
                    let index: usize = key
                        .parse()
                        .map_err(|_| syntax(line, format!("invalid step index `{key}`")))?;
                    if index != cfg.blowups.len() + 1 {
                        return Err(syntax(
                            line,
                            format!("step indices must be contiguous from 1: expected {}, found {index}", cfg.blowups.len() + 1),
                        ));
                    }
                    let (points, opts) = value.split_once(';').unwrap_or((value, ""));
                    let through = points
                        .split_whitespace()
                        .map(|t| parse_weighted(line, t))
                        .collect::<Result<Vec<_>, _>>()?;
                    let mut step = BlowupStep {
                        index,
                        through,
                        parent: None,
                        real: false,
                    };
                    for opt in opts.split_whitespace() {
                        if opt == "real" && !step.real {
                            step.real = true;
                        } else if let Some(p) = opt.strip_prefix("parent=") {
                            if step.parent.is_some() {
                                return Err(syntax(line, "parent given twice"));
                            }
                            step.parent = Some(parse_name(line, p)?);
                        } else {
                            return Err(syntax(line, format!("unknown step option `{opt}`")));
                        }
                    }
                    cfg.blowups.push(step);
                }
                Section::Chains => {
                    let name = parse_name(line, key)?;
                    let (curves, opts) = value.split_once(';').unwrap_or((value, ""));
                    let curves = curves
                        .split_whitespace()
                        .map(|t| parse_name(line, t))
                        .collect::<Result<Vec<_>, _>>()?;
                    if curves.is_empty() {
                        return Err(syntax(line, format!("chain `{name}` is empty")));
                    }
                    let aux = match opts.trim() {
                        "" => false,
                        "aux" => true,
                        other => return Err(syntax(line, format!("unknown chain option `{other}`"))),
                    };
                    cfg.chains.push(Chain { name, curves, aux });
                }
                Section::Fibers => {
                    let name = parse_name(line, key)?;
                    let components = value
                        .split_whitespace()
                        .map(|t| parse_weighted(line, t))
                        .collect::<Result<Vec<_>, _>>()?;
                    if components.is_empty() {
                        return Err(syntax(line, format!("fiber `{name}` is empty")));
                    }
                    cfg.fibers.push(Fiber { name, components });
                }
                Section::Kw => {
                    let name = parse_name(line, key)?;
                    if cfg.kw.iter().any(|(n, _)| *n == name) {
                        return Err(syntax(line, format!("`{name}` repeated in [kw]")));
                    }
                    let r = parse_rational(value).map_err(|m| syntax(line, m))?;
                    cfg.kw.push((name, r));
                }
                Section::Alpha => {
                    let terms = parse_class_expr(key)
                        .ok()
                        .filter(|t| t.len() == 1 && t[0].1 == 1 && !key.starts_with(['+', '-']) && !key.starts_with(|c: char| c.is_ascii_digit()))
                        .ok_or_else(|| syntax(line, format!("expected `h` or `eN`, found `{key}`")))?;
                    let index = terms[0].0;
                    let value: i64 = value
                        .parse()
                        .map_err(|_| syntax(line, format!("invalid integer `{value}`")))?;
                    let alpha = cfg.alpha.as_mut().expect("set on section entry");
                    if alpha.iter().any(|(i, _)| *i == index) {
                        return Err(syntax(line, format!("`{key}` repeated in [alpha]")));
                    }
                    alpha.push((index, value));
                }
                Section::Expect => {
                    let name = parse_name(line, key)?;
                    if cfg.expect.iter().any(|(n, _)| *n == name) {
                        return Err(syntax(line, format!("`{name}` repeated in [expect]")));
                    }
                    let terms = parse_class_expr(value).map_err(|m| syntax(line, m))?;
                    cfg.expect.push((name, terms));
                }
            }
        }
        if !any_content {
            return Err(ConfigError::Empty("configuration file is empty"));
        }
        if cfg.name.is_empty() {
            return Err(ConfigError::Empty("missing `name` in [surface]"));
        }
        Ok(cfg)
    }
}

impl ConfigFile {
    /// Apply the declared blow-ups and resolve every reference.
    pub fn build(&self) -> Result<Configuration, ConfigError> {
        let mut cfg = Configuration::plane(self.name.clone());
        cfg.anticanonical_fibered = self.anticanonical_fibered;
        for c in &self.curves {
            cfg.declare_curve(&c.name, c.degree, c.rational, c.nodes)?;
        }
        for s in &self.blowups {
            cfg.apply_blowup(s.clone())?;
        }
        for c in &self.chains {
            cfg.add_chain(c.clone())?;
        }
        for f in &self.fibers {
            cfg.add_fiber(f.clone())?;
        }
        for (curve, terms) in &self.expect {
            cfg.expect_class(curve, class_from_terms(terms, cfg.n())?)?;
        }
        for (curve, _) in &self.kw {
            cfg.class_of(curve)?;
        }
        if let Some(terms) = &self.alpha {
            class_from_terms(terms, cfg.n())?;
        }
        Ok(cfg)
    }

    pub fn alpha_class(&self, n: usize) -> Option<Result<DivisorClass, GeometryError>> {
        self.alpha.as_ref().map(|t| class_from_terms(t, n))
    }
}

/// Parse and build in one go.
pub fn load(text: &str) -> Result<(ConfigFile, Configuration), ConfigError> {
    let file: ConfigFile = text.parse()?;
    let cfg = file.build()?;
    Ok((file, cfg))
}

fn weighted(items: &[(String, u32)]) -> String {
    items
        .iter()
        .map(|(n, m)| if *m == 1 { n.clone() } else { format!("{n}:{m}") })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for ConfigFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[surface]")?;
        writeln!(f, "name = {}", self.name)?;
        writeln!(f, "base = CP2")?;
        writeln!(f, "anticanonical_fibered = {}", self.anticanonical_fibered)?;
        writeln!(f, "\n[curves]")?;
        for c in &self.curves {
            write!(f, "{} = {}", c.name, c.degree)?;
            if c.rational {
                write!(f, " rational")?;
            }
            if c.nodes > 0 {
                write!(f, " nodes={}", c.nodes)?;
            }
            writeln!(f)?;
        }
        writeln!(f, "\n[blowups]")?;
        for s in &self.blowups {
            write!(f, "{} = {}", s.index, weighted(&s.through))?;
            let mut opts = Vec::new();
            if let Some(p) = &s.parent {
                opts.push(format!("parent={p}"));
            }
            if s.real {
                opts.push("real".to_string());
            }
            if !opts.is_empty() {
                write!(f, " ; {}", opts.join(" "))?;
            }
            writeln!(f)?;
        }
        writeln!(f, "\n[chains]")?;
        for c in &self.chains {
            write!(f, "{} = {}", c.name, c.curves.join(" "))?;
            if c.aux {
                write!(f, " ; aux")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "\n[fibers]")?;
        for fb in &self.fibers {
            writeln!(f, "{} = {}", fb.name, weighted(&fb.components))?;
        }
        writeln!(f, "\n[kw]")?;
        for (n, r) in &self.kw {
            if r.is_integer() {
                writeln!(f, "{n} = {}", r.numer())?;
            } else {
                writeln!(f, "{n} = {}/{}", r.numer(), r.denom())?;
            }
        }
        if let Some(alpha) = &self.alpha {
            writeln!(f, "\n[alpha]")?;
            for (i, c) in alpha {
                writeln!(f, "{} = {c}", basis_key(*i))?;
            }
        }
        if !self.expect.is_empty() {
            writeln!(f, "\n[expect]")?;
            for (n, t) in &self.expect {
                writeln!(f, "{n} = {}", format_terms(t))?;
            }
        }
        Ok(())
    }
}
