//! Group expressions such as `cp(F(5,1), 5, z=a1^5*a5)`.
//!
//! ```text
//! expr    := ctor "(" arg ("," arg)* ")"
//! arg     := expr | int | "z" "=" word
//! word    := factor ("*" factor)* | "1"
//! factor  := atom ("^" ["-"] int)?
//! atom    := name | "@" int "(" word ")" | "(" word ")"
//! ```
//!
//! `perm` takes a file path, bare or double-quoted. Names are resolved
//! against the generators of the group the word lives in.

use std::fmt;
use std::path::{Path, PathBuf};

use fszlab_core::constructions::{
    build_abelian, build_central_product_cyclic, build_cyclic, build_direct_product, build_f,
    build_quotient_by_central, build_s, build_wreath, import_permutation_group, FpjSpec,
};
use fszlab_core::{ElementKey, FszError, GroupHandle};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("at offset {offset}: {source}")]
    Group {
        offset: usize,
        #[source]
        source: FszError,
    },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl DslError {
    fn syntax(offset: usize, message: impl Into<String>) -> Self {
        DslError::Syntax {
            offset,
            message: message.into(),
        }
    }

    pub fn offset(&self) -> Option<usize> {
        match self {
            DslError::Syntax { offset, .. } | DslError::Group { offset, .. } => Some(*offset),
            DslError::Io { .. } => None,
        }
    }

    /// The underlying group error, if evaluation failed inside a builder.
    pub fn group_error(&self) -> Option<&FszError> {
        match self {
            DslError::Group { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// A byte offset into the source text. Offsets never take part in equality,
/// so a reparse of printed output compares equal to the original.
#[derive(Debug, Clone, Copy, Default)]
pub struct Offset(pub usize);

impl PartialEq for Offset {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Offset {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupExpr {
    pub ctor: Ctor,
    pub at: Offset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ctor {
    Cyclic(u64),
    Abelian(Vec<u64>),
    F(u64, u64),
    S(u64, u64),
    Wreath(Box<GroupExpr>, u64),
    CentralProduct {
        base: Box<GroupExpr>,
        m: u64,
        z: Word,
    },
    Quotient {
        base: Box<GroupExpr>,
        z: Word,
    },
    Direct(Box<GroupExpr>, Box<GroupExpr>),
    Perm(String),
}

/// A product of powers; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word(pub Vec<Factor>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub atom: Atom,
    pub exp: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Gen(String, Offset),
    Component(usize, Word, Offset),
    Group(Word),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DslError> {
        if self.eat(c) {
            return Ok(());
        }
        let found = match self.peek() {
            Some(f) => format!("'{f}'"),
            None => "end of input".into(),
        };
        Err(DslError::syntax(self.pos, format!("expected '{c}', found {found}")))
    }

    fn ident(&mut self) -> Result<(String, usize), DslError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphanumeric() || c == '_') || (i == 0 && c.is_ascii_digit()))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(DslError::syntax(start, "expected a name"));
        }
        self.pos += len;
        Ok((rest[..len].to_string(), start))
    }

    fn int(&mut self) -> Result<u64, DslError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.src.len() - start);
        if len == 0 {
            return Err(DslError::syntax(start, "expected an integer"));
        }
        self.pos += len;
        self.src[start..start + len]
            .parse()
            .map_err(|_| DslError::syntax(start, "integer out of range"))
    }

    fn expr(&mut self) -> Result<GroupExpr, DslError> {
        let (name, at) = self.ident()?;
        self.expect('(')?;
        if name == "perm" {
            return Ok(GroupExpr {
                ctor: self.perm_path()?,
                at: Offset(at),
            });
        }
        let args = self.args()?;
        self.expect(')')?;
        Ok(GroupExpr {
            ctor: build_node(&name, at, args)?,
            at: Offset(at),
        })
    }

    fn perm_path(&mut self) -> Result<Ctor, DslError> {
        self.skip_ws();
        let start = self.pos;
        let path = if self.eat('"') {
            let close = self.src[self.pos..]
                .find('"')
                .ok_or_else(|| DslError::syntax(start, "unterminated string"))?;
            let s = self.src[self.pos..self.pos + close].to_string();
            self.pos += close + 1;
            s
        } else {
            let close = self.src[self.pos..]
                .find(')')
                .ok_or_else(|| DslError::syntax(start, "expected ')'"))?;
            let s = self.src[self.pos..self.pos + close].trim().to_string();
            self.pos += close;
            s
        };
        if path.is_empty() {
            return Err(DslError::syntax(start, "perm needs a file path"));
        }
        self.expect(')')?;
        Ok(Ctor::Perm(path))
    }

    fn args(&mut self) -> Result<Vec<(Arg, usize)>, DslError> {
        let mut args = Vec::new();
        loop {
            self.skip_ws();
            let at = self.pos;
            let arg = match self.peek() {
                Some(c) if c.is_ascii_digit() => Arg::Int(self.int()?),
                Some(c) if c.is_ascii_alphabetic() => {
                    let save = self.pos;
                    let (name, _) = self.ident()?;
                    if self.eat('=') {
                        if name != "z" {
                            return Err(DslError::syntax(at, format!("unknown keyword '{name}'")));
                        }
                        Arg::Z(self.word()?)
                    } else {
                        self.pos = save;
                        Arg::Expr(self.expr()?)
                    }
                }
                _ => return Err(DslError::syntax(at, "expected an argument")),
            };
            args.push((arg, at));
            if !self.eat(',') {
                return Ok(args);
            }
        }
    }

    fn word(&mut self) -> Result<Word, DslError> {
        if self.peek() == Some('1') {
            let save = self.pos;
            self.pos += 1;
            match self.peek() {
                Some(c) if c.is_ascii_digit() => self.pos = save,
                _ => return Ok(Word::default()),
            }
        }
        let mut factors = vec![self.factor()?];
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        Ok(Word(factors))
    }

    fn factor(&mut self) -> Result<Factor, DslError> {
        self.skip_ws();
        let at = self.pos;
        let atom = if self.eat('@') {
            let k = self.int()?;
            self.expect('(')?;
            let w = self.word()?;
            self.expect(')')?;
            Atom::Component(k as usize, w, Offset(at))
        } else if self.eat('(') {
            let w = self.word()?;
            self.expect(')')?;
            Atom::Group(w)
        } else {
            let (name, at) = self.ident()?;
            Atom::Gen(name, Offset(at))
        };
        let mut exp = 1i64;
        if self.eat('^') {
            let neg = self.eat('-');
            let start = self.pos;
            let e = self.int()?;
            let e = i64::try_from(e).map_err(|_| DslError::syntax(start, "exponent out of range"))?;
            exp = if neg { -e } else { e };
        }
        Ok(Factor { atom, exp })
    }
}

enum Arg {
    Int(u64),
    Expr(GroupExpr),
    Z(Word),
}

fn build_node(name: &str, at: usize, args: Vec<(Arg, usize)>) -> Result<Ctor, DslError> {
    let arity = |n: usize| -> Result<(), DslError> {
        if args.len() != n {
            return Err(DslError::syntax(
                at,
                format!("{name} takes {n} argument(s), got {}", args.len()),
            ));
        }
        Ok(())
    };
    let int = |a: &(Arg, usize)| match a.0 {
        Arg::Int(v) => Ok(v),
        _ => Err(DslError::syntax(a.1, "expected an integer")),
    };
    let expr = |a: (Arg, usize)| match a.0 {
        Arg::Expr(e) => Ok(Box::new(e)),
        _ => Err(DslError::syntax(a.1, "expected a group expression")),
    };
    let word = |a: (Arg, usize)| match a.0 {
        Arg::Z(w) => Ok(w),
        _ => Err(DslError::syntax(a.1, "expected z=<element>")),
    };
    Ok(match name {
        "Z" => {
            arity(1)?;
            Ctor::Cyclic(int(&args[0])?)
        }
        "Ab" => {
            if args.is_empty() {
                return Err(DslError::syntax(at, "Ab takes at least one modulus"));
            }
            Ctor::Abelian(args.iter().map(int).collect::<Result<_, _>>()?)
        }
        "F" | "S" => {
            arity(2)?;
            let (p, j) = (int(&args[0])?, int(&args[1])?);
            if name == "F" {
                Ctor::F(p, j)
            } else {
                Ctor::S(p, j)
            }
        }
        "wr" => {
            arity(2)?;
            let p = int(&args[1])?;
            let mut it = args.into_iter();
            Ctor::Wreath(expr(it.next().unwrap())?, p)
        }
        "cp" => {
            arity(3)?;
            let m = int(&args[1])?;
            let mut it = args.into_iter();
            let base = expr(it.next().unwrap())?;
            it.next();
            Ctor::CentralProduct {
                base,
                m,
                z: word(it.next().unwrap())?,
            }
        }
        "quot" => {
            arity(2)?;
            let mut it = args.into_iter();
            Ctor::Quotient {
                base: expr(it.next().unwrap())?,
                z: word(it.next().unwrap())?,
            }
        }
        "x" => {
            arity(2)?;
            let mut it = args.into_iter();
            Ctor::Direct(expr(it.next().unwrap())?, expr(it.next().unwrap())?)
        }
        other => return Err(DslError::syntax(at, format!("unknown constructor '{other}'"))),
    })
}

pub fn parse_group_expr(text: &str) -> Result<GroupExpr, DslError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(DslError::syntax(p.pos, "trailing input"));
    }
    Ok(e)
}

/// Parses an element word on its own, e.g. a `--u` argument.
pub fn parse_word(text: &str) -> Result<Word, DslError> {
    let mut p = Parser { src: text, pos: 0 };
    let w = p.word()?;
    if p.peek().is_some() {
        return Err(DslError::syntax(p.pos, "trailing input"));
    }
    Ok(w)
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ctor {
            Ctor::Cyclic(n) => write!(f, "Z({n})"),
            Ctor::Abelian(ms) => {
                let parts: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
                write!(f, "Ab({})", parts.join(","))
            }
            Ctor::F(p, j) => write!(f, "F({p},{j})"),
            Ctor::S(p, j) => write!(f, "S({p},{j})"),
            Ctor::Wreath(e, p) => write!(f, "wr({e},{p})"),
            Ctor::CentralProduct { base, m, z } => write!(f, "cp({base},{m},z={z})"),
            Ctor::Quotient { base, z } => write!(f, "quot({base},z={z})"),
            Ctor::Direct(a, b) => write!(f, "x({a},{b})"),
            Ctor::Perm(path) => write!(f, "perm(\"{path}\")"),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, factor) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match &factor.atom {
                Atom::Gen(name, _) => f.write_str(name)?,
                Atom::Component(k, w, _) => write!(f, "@{k}({w})")?,
                Atom::Group(w) => write!(f, "({w})")?,
            }
            if factor.exp != 1 {
                write!(f, "^{}", factor.exp)?;
            }
        }
        Ok(())
    }
}

/// Evaluates expressions; `perm` paths are resolved against `base_dir`.
#[derive(Debug, Clone, Default)]
pub struct Evaluator {
    pub base_dir: Option<PathBuf>,
}

impl Evaluator {
    pub fn group(&self, expr: &GroupExpr) -> Result<GroupHandle, DslError> {
        let lift = |e: FszError| DslError::Group {
            offset: expr.at.0,
            source: e,
        };
        let spec = |p: u64, j: u64| FpjSpec::new(p, j).map_err(lift);
        match &expr.ctor {
            Ctor::Cyclic(n) => build_cyclic(*n).map_err(lift),
            Ctor::Abelian(ms) => build_abelian(ms).map_err(lift),
            Ctor::F(p, j) => build_f(spec(*p, *j)?).map_err(lift),
            Ctor::S(p, j) => build_s(spec(*p, *j)?).map_err(lift),
            Ctor::Wreath(e, p) => build_wreath(&self.group(e)?, *p).map_err(lift),
            Ctor::CentralProduct { base, m, z } => {
                let g = self.group(base)?;
                let zk = element(&g, z)?;
                build_central_product_cyclic(&g, *m, &zk).map_err(lift)
            }
            Ctor::Quotient { base, z } => {
                let g = self.group(base)?;
                let zk = element(&g, z)?;
                build_quotient_by_central(&g, &zk).map_err(lift)
            }
            Ctor::Direct(a, b) => build_direct_product(&self.group(a)?, &self.group(b)?).map_err(lift),
            Ctor::Perm(path) => {
                let full = match &self.base_dir {
                    Some(dir) if Path::new(path).is_relative() => dir.join(path),
                    _ => PathBuf::from(path),
                };
                let text = std::fs::read_to_string(&full).map_err(|e| DslError::Io {
                    path: full.display().to_string(),
                    message: e.to_string(),
                })?;
                import_permutation_group(&text).map_err(lift)
            }
        }
    }
}

/// Evaluates `word` in `group`.
pub fn element(group: &GroupHandle, word: &Word) -> Result<ElementKey, DslError> {
    let mut acc = group.identity();
    for factor in &word.0 {
        let (base, at) = match &factor.atom {
            Atom::Gen(name, at) => {
                let e = group.element_by_name(name).ok_or_else(|| {
                    DslError::syntax(
                        at.0,
                        format!(
                            "unknown generator '{name}' in {} (known: {})",
                            group.descriptor(),
                            group.generator_names().join(", ")
                        ),
                    )
                })?;
                (e, at.0)
            }
            Atom::Component(k, w, at) => {
                let comps = group.components();
                let Some(c) = comps.get(*k) else {
                    return Err(DslError::syntax(
                        at.0,
                        format!("{} has no component {k}", group.descriptor()),
                    ));
                };
                let inner = element(c, w)?;
                let e = group
                    .embed(*k, &inner)
                    .ok_or_else(|| DslError::syntax(at.0, format!("cannot embed into component {k}")))?;
                (e, at.0)
            }
            Atom::Group(w) => (element(group, w)?, 0),
        };
        let powered = group
            .power(&base, factor.exp)
            .map_err(|e| DslError::Group { offset: at, source: e })?;
        acc = group
            .multiply(&acc, &powered)
            .map_err(|e| DslError::Group { offset: at, source: e })?;
    }
    Ok(acc)
}
