//! Concrete syntax: dimension terms, cells and `.cube` problem files.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cube::{wf_boundary, Atom, Boundary, Cell, CellCtx, CellDecl, CubeError, Face};
use crate::dim::{name, nf, DimTerm, Endpoint, Name, Theory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeFileError {
    #[error("syntax error at {0}")]
    Syntax(#[from] ParseError),
    #[error("{line}: scope error in `{item}`: {source}")]
    Scope {
        line: usize,
        item: String,
        source: CubeError,
    },
    #[error("{line}: boundary error in `{item}`: {source}")]
    Boundary {
        line: usize,
        item: String,
        source: CubeError,
    },
    #[error("{1}: duplicate goal `{0}`")]
    DuplicateGoal(Name, usize),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const SYMBOLS: [(&str, &str); 16] = [
    ("->", "->"),
    ("→", "->"),
    (":=", ":="),
    ("/\\", "/\\"),
    ("∧", "/\\"),
    ("\\/", "\\/"),
    ("∨", "\\/"),
    ("~", "~"),
    ("(", "("),
    (")", ")"),
    ("[", "["),
    ("]", "]"),
    ("{", "{"),
    ("}", "}"),
    (",", ","),
    ("=", "="),
];

fn lex(src: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut rest = src;
    'outer: while !rest.is_empty() {
        if rest.starts_with("--") {
            let end = rest.find('\n').unwrap_or(rest.len());
            rest = &rest[end..];
            continue;
        }
        let c = rest.chars().next().unwrap();
        if c == '\n' {
            line += 1;
            col = 1;
            rest = &rest[1..];
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            rest = &rest[c.len_utf8()..];
            continue;
        }
        for (s, canon) in SYMBOLS {
            if let Some(r) = rest.strip_prefix(s) {
                out.push((Tok::Sym(canon), line, col));
                col += s.chars().count();
                rest = r;
                continue 'outer;
            }
        }
        if c.is_ascii_digit() {
            let end = rest
                .find(|ch: char| !(ch.is_ascii_digit() || ch == '.'))
                .unwrap_or(rest.len());
            out.push((Tok::Num(rest[..end].to_string()), line, col));
            col += end;
            rest = &rest[end..];
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let end = rest
                .find(|ch: char| !(ch.is_alphanumeric() || ch == '_' || ch == '\''))
                .unwrap_or(rest.len());
            out.push((Tok::Ident(rest[..end].to_string()), line, col));
            col += rest[..end].chars().count();
            rest = &rest[end..];
            continue;
        }
        return Err(ParseError {
            line,
            col,
            expected: "a token".into(),
            found: format!("`{c}`"),
        });
    }
    out.push((Tok::Eof, line, col));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn line(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &str) -> Result<T, ParseError> {
        let (t, line, col) = &self.toks[self.pos];
        Err(ParseError {
            line: *line,
            col: *col,
            expected: expected.into(),
            found: t.to_string(),
        })
    }

    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(x) if *x == s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(&format!("`{s}`"))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) if s != "goal" && s != "fill" => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.err("an identifier"),
        }
    }

    fn endpoint(&mut self) -> Result<Endpoint, ParseError> {
        match self.peek() {
            Tok::Num(s) if s == "0" => {
                self.bump();
                Ok(Endpoint::I0)
            }
            Tok::Num(s) if s == "1" => {
                self.bump();
                Ok(Endpoint::I1)
            }
            _ => self.err("`0` or `1`"),
        }
    }

    fn dim_disj(&mut self) -> Result<DimTerm, ParseError> {
        let mut t = self.dim_conj()?;
        while self.eat("\\/") {
            t = DimTerm::join(t, self.dim_conj()?);
        }
        Ok(t)
    }

    fn dim_conj(&mut self) -> Result<DimTerm, ParseError> {
        let mut t = self.dim_unary()?;
        while self.eat("/\\") {
            t = DimTerm::meet(t, self.dim_unary()?);
        }
        Ok(t)
    }

    fn dim_unary(&mut self) -> Result<DimTerm, ParseError> {
        if self.eat("~") {
            return Ok(DimTerm::neg(self.dim_unary()?));
        }
        if self.eat("(") {
            let t = self.dim_disj()?;
            self.expect(")")?;
            return Ok(t);
        }
        if matches!(self.peek(), Tok::Num(_)) {
            return Ok(DimTerm::Const(self.endpoint()?));
        }
        Ok(DimTerm::Var(name(&self.ident().or_else(|_| self.err("a dimension term"))?)))
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        if matches!(self.peek(), Tok::Num(_)) {
            return Ok(Atom::Const(self.endpoint()?));
        }
        Ok(Atom::Var(name(&self.ident()?)))
    }

    fn cell(&mut self) -> Result<Cell, ParseError> {
        if matches!(self.peek(), Tok::Ident(s) if s == "fill") {
            self.bump();
            let from = self.endpoint()?;
            self.expect("->")?;
            let to = self.atom()?;
            let var = name(&self.ident()?);
            let sides = self.faces()?;
            self.expect("(")?;
            let base = self.cell()?;
            self.expect(")")?;
            return Ok(Cell::fill(from, to, var, sides, base));
        }
        if self.eat("(") {
            let c = self.cell()?;
            self.expect(")")?;
            return Ok(c);
        }
        let head = self.ident()?;
        let mut args = Vec::new();
        if self.eat("(") {
            if !self.eat(")") {
                loop {
                    args.push(nf(&self.dim_disj()?));
                    if self.eat(")") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
        }
        Ok(Cell::App {
            name: name(&head),
            args,
        })
    }

    fn faces(&mut self) -> Result<Boundary, ParseError> {
        self.expect("{")?;
        let mut faces = Vec::new();
        while !self.eat("}") {
            let atom = self.atom()?;
            self.expect("=")?;
            let end = self.endpoint()?;
            self.expect("->")?;
            let body = self.cell()?;
            faces.push(Face { atom, end, body });
            if !self.eat(",") {
                self.expect("}")?;
                break;
            }
        }
        Ok(Boundary::new(faces))
    }

    fn dims(&mut self) -> Result<Vec<Name>, ParseError> {
        self.expect("[")?;
        let mut out = Vec::new();
        while !self.eat("]") {
            out.push(name(&self.ident()?));
            if !self.eat(",") {
                self.expect("]")?;
                break;
            }
        }
        Ok(out)
    }

    fn value(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Num(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("an option value"),
        }
    }
}

pub fn parse_dim_term(src: &str) -> Result<DimTerm, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.dim_disj()?;
    if *p.peek() != Tok::Eof {
        return p.err("end of input");
    }
    Ok(t)
}

pub fn parse_cell(src: &str) -> Result<Cell, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.cell()?;
    if *p.peek() != Tok::Eof {
        return p.err("end of input");
    }
    Ok(t)
}

pub fn parse_boundary(src: &str) -> Result<Boundary, ParseError> {
    let mut p = Parser::new(src)?;
    let b = p.faces()?;
    if *p.peek() != Tok::Eof {
        return p.err("end of input");
    }
    Ok(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Solved,
    Unsolved,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GoalOptions {
    pub theory: Option<Theory>,
    pub depth: Option<usize>,
    pub timeout: Option<f64>,
    pub expect: Option<Expect>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Goal {
    pub name: Name,
    pub dims: Vec<Name>,
    pub boundary: Boundary,
    pub options: GoalOptions,
    pub solution: Option<Cell>,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct CubeFile {
    pub ctx: CellCtx,
    pub goals: Vec<Goal>,
}

impl PartialEq for CubeFile {
    fn eq(&self, other: &CubeFile) -> bool {
        self.ctx.decls() == other.ctx.decls()
            && self.goals.len() == other.goals.len()
            && self.goals.iter().zip(&other.goals).all(|(a, b)| {
                a.name == b.name
                    && a.dims == b.dims
                    && a.boundary == b.boundary
                    && a.options == b.options
                    && a.solution == b.solution
            })
    }
}

impl CubeFile {
    pub fn goal(&self, n: &str) -> Option<&Goal> {
        self.goals.iter().find(|g| &*g.name == n)
    }
}

fn classify_cube_error(e: CubeError, line: usize, item: &str) -> CubeFileError {
    let item = item.to_string();
    match e {
        CubeError::UnknownCell(_)
        | CubeError::Arity { .. }
        | CubeError::UnboundDim(_)
        | CubeError::IllScopedFace(_)
        | CubeError::DuplicateCell(_)
        | CubeError::DuplicateDim(_) => CubeFileError::Scope { line, item, source: e },
        e => CubeFileError::Boundary { line, item, source: e },
    }
}

pub fn parse_cube(src: &str) -> Result<CubeFile, CubeFileError> {
    let mut p = Parser::new(src)?;
    let mut ctx = CellCtx::default();
    let mut goals: Vec<Goal> = Vec::new();
    loop {
        match p.peek().clone() {
            Tok::Eof => break,
            Tok::Ident(k) if k == "goal" && matches!(p.peek2(), Tok::Ident(_)) => {
                let line = p.line();
                p.bump();
                let gname = name(&p.ident()?);
                let dims = p.dims()?;
                let mut options = GoalOptions::default();
                while let Tok::Ident(key) = p.peek().clone() {
                    p.bump();
                    p.expect("=")?;
                    let v = p.value()?;
                    let bad = |p: &Parser| p.err::<()>(&format!("a valid value for `{key}`"));
                    match key.as_str() {
                        "theory" => match v.parse() {
                            Ok(t) => options.theory = Some(t),
                            Err(_) => bad(&p)?,
                        },
                        "depth" => match v.parse() {
                            Ok(d) => options.depth = Some(d),
                            Err(_) => bad(&p)?,
                        },
                        "timeout" => match v.parse() {
                            Ok(d) => options.timeout = Some(d),
                            Err(_) => bad(&p)?,
                        },
                        "expect" => match v.as_str() {
                            "solved" => options.expect = Some(Expect::Solved),
                            "unsolved" => options.expect = Some(Expect::Unsolved),
                            _ => bad(&p)?,
                        },
                        _ => p.err("`theory`, `depth`, `timeout` or `expect`")?,
                    }
                }
                let boundary = if matches!(p.peek(), Tok::Sym("{")) {
                    p.faces()?
                } else {
                    Boundary::empty()
                };
                let solution = if p.eat(":=") { Some(p.cell()?) } else { None };
                if goals.iter().any(|g| g.name == gname) {
                    return Err(CubeFileError::DuplicateGoal(gname, line));
                }
                wf_boundary(&ctx, &dims, &boundary, &[]).map_err(|e| classify_cube_error(e, line, &gname))?;
                goals.push(Goal {
                    name: gname,
                    dims,
                    boundary,
                    options,
                    solution,
                    line,
                });
            }
            Tok::Ident(_) => {
                let line = p.line();
                let n = p.ident()?;
                let dims = p.dims()?;
                let boundary = if matches!(p.peek(), Tok::Sym("{")) {
                    p.faces()?
                } else {
                    Boundary::empty()
                };
                ctx.push(CellDecl {
                    name: name(&n),
                    dims,
                    boundary,
                })
                .map_err(|e| classify_cube_error(e, line, &n))?;
            }
            _ => return Err(p.err::<()>("a declaration or `goal`").unwrap_err().into()),
        }
    }
    Ok(CubeFile { ctx, goals })
}

fn write_dims(out: &mut String, dims: &[Name]) {
    out.push('[');
    out.push_str(&crate::cube::join_names(dims));
    out.push(']');
}

/// Prints a file in the format accepted by [`parse_cube`].
pub fn print_cube(f: &CubeFile) -> String {
    let mut out = String::new();
    for d in f.ctx.decls() {
        out.push_str(&d.name);
        out.push(' ');
        write_dims(&mut out, &d.dims);
        if !d.boundary.is_empty() {
            let _ = write!(out, " {}", d.boundary);
        }
        out.push('\n');
    }
    for g in &f.goals {
        out.push('\n');
        let _ = write!(out, "goal {} ", g.name);
        write_dims(&mut out, &g.dims);
        let o = &g.options;
        if let Some(t) = o.theory {
            let _ = write!(out, " theory={t}");
        }
        if let Some(d) = o.depth {
            let _ = write!(out, " depth={d}");
        }
        if let Some(t) = o.timeout {
            let _ = write!(out, " timeout={t}");
        }
        match o.expect {
            Some(Expect::Solved) => out.push_str(" expect=solved"),
            Some(Expect::Unsolved) => out.push_str(" expect=unsolved"),
            None => {}
        }
        let _ = write!(out, " {}", g.boundary);
        if let Some(s) = &g.solution {
            let _ = write!(out, "\n  := {s}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_precedence() {
        let t = parse_dim_term("~i /\\ j \\/ k").unwrap();
        assert_eq!(t.to_string(), "~i /\\ j \\/ k");
        let u = parse_dim_term("~(i \\/ j)").unwrap();
        assert!(matches!(u, DimTerm::Neg(_)));
        assert!(parse_dim_term("i /\\").is_err());
        assert_eq!(parse_dim_term("i ∧ j ∨ k").unwrap(), parse_dim_term("i /\\ j \\/ k").unwrap());
    }

    #[test]
    fn file_round_trip() {
        let src = "-- inversion\np [i]\ngoal inv [j] theory=demorgan { j=0 -> p(1), j=1 -> p(0) } := p(~j)\n";
        let f = parse_cube(src).unwrap();
        assert_eq!(f.goals[0].options.theory, Some(Theory::DeMorgan));
        let again = parse_cube(&print_cube(&f)).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn syntax_errors_have_locations() {
        match parse_cube("a []\ngoal g [i] { i=0 -> a ") {
            Err(CubeFileError::Syntax(e)) => assert_eq!(e.line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scope_and_boundary_errors() {
        assert!(matches!(
            parse_cube("goal g [i] { i=0 -> a }"),
            Err(CubeFileError::Scope { .. })
        ));
        assert!(matches!(
            parse_cube("a []\nb []\ngoal g [i] { i=0 -> a, i=0 -> b }"),
            Err(CubeFileError::Boundary { .. })
        ));
    }

    #[test]
    fn fills_parse() {
        let c = parse_cell("fill 0 -> 1 j { i=0 -> p(0), i=1 -> q(j) } (p(i))").unwrap();
        assert!(c.is_fill());
        assert_eq!(parse_cell(&c.to_string()).unwrap(), c);
    }
}
