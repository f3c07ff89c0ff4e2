//! Printing verified cells as Cubical Agda terms.

use thiserror::Error;

use crate::cube::{check, Atom, Boundary, Cell, CellCtx, CubeError, Fill};
use crate::dim::{Endpoint, Lit, Name, Nf, Subst};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgdaError {
    #[error("refusing to print an unverified cell: {0}")]
    NotVerified(#[from] CubeError),
}

const POOL: [&str; 13] = ["i", "j", "k", "l", "m", "n", "o", "r", "s", "t", "u", "v", "w"];

/// Dimension variables in scope: internal name, printed name and whether
/// the printed variable stands for the reversed one.
#[derive(Clone, Default)]
struct Env {
    vars: Vec<(Name, String, bool)>,
    reserved: Vec<String>,
}

impl Env {
    fn lookup(&self, x: &str) -> (String, bool) {
        self.vars
            .iter()
            .rev()
            .find(|(n, _, _)| &**n == x)
            .map(|(_, s, neg)| (s.clone(), *neg))
            .unwrap_or_else(|| (x.to_string(), false))
    }

    fn taken(&self, s: &str) -> bool {
        self.reserved.iter().any(|r| r == s) || self.vars.iter().any(|(_, p, _)| p == s)
    }

    fn bind(&mut self, x: &Name, neg: bool) -> String {
        let valid = x.chars().next().is_some_and(char::is_alphabetic) && !matches!(&**x, "i0" | "i1");
        let printed = if valid && !self.taken(x) {
            x.to_string()
        } else {
            POOL.iter()
                .map(|s| s.to_string())
                .chain((0..).map(|n| format!("k{n}")))
                .find(|s| !self.taken(s))
                .unwrap()
        };
        self.vars.push((x.clone(), printed.clone(), neg));
        printed
    }
}

fn endpoint(e: Endpoint) -> &'static str {
    match e {
        Endpoint::I0 => "i0",
        Endpoint::I1 => "i1",
    }
}

fn lit(l: &Lit, env: &Env) -> (String, bool) {
    let (s, neg) = env.lookup(&l.var);
    (s, neg ^ l.neg)
}

/// A dimension argument, parenthesised unless atomic.
fn dim_arg(t: &Nf, env: &Env) -> String {
    if let Some(e) = t.as_const() {
        return endpoint(e).to_string();
    }
    let cs = t.clauses();
    if cs.len() == 1 && cs[0].len() == 1 {
        let (s, neg) = lit(&cs[0][0], env);
        return if neg { format!("(~ {s})") } else { s };
    }
    let clause = |c: &Vec<Lit>| {
        let parts: Vec<String> = c
            .iter()
            .map(|l| match lit(l, env) {
                (s, true) => format!("(~ {s})"),
                (s, false) => s,
            })
            .collect();
        parts.join(" ∧ ")
    };
    let parts: Vec<String> = cs
        .iter()
        .map(|c| if c.len() > 1 && cs.len() > 1 { format!("({})", clause(c)) } else { clause(c) })
        .collect();
    format!("({})", parts.join(" ∨ "))
}

fn face_constraint(x: &Name, e: Endpoint, env: &Env) -> String {
    let (s, neg) = env.lookup(x);
    let e = if neg { e.neg() } else { e };
    format!("({s} = {})", endpoint(e))
}

fn pad(n: usize) -> String {
    " ".repeat(n)
}

fn system(var: &str, sides: &Boundary, env: &Env, indent: usize) -> String {
    let live: Vec<_> = sides
        .faces
        .iter()
        .filter_map(|f| match &f.atom {
            Atom::Var(x) => Some((x, f)),
            Atom::Const(_) => None,
        })
        .collect();
    if live.is_empty() {
        return format!("(λ {var} → λ ())");
    }
    let mut out = format!("(λ {var} → λ\n");
    for (n, (x, f)) in live.iter().enumerate() {
        let c = face_constraint(x, f.end, env);
        let body = term(&f.body, env, indent + 4);
        let lead = if n == 0 { "{" } else { ";" };
        out.push_str(&format!("{}{lead} {c} → {body}\n", pad(indent + 2)));
    }
    out.push_str(&format!("{}}})", pad(indent + 2)));
    out
}

fn fill_term(f: &Fill, env: &Env, indent: usize) -> String {
    for face in &f.sides.faces {
        if face.atom == Atom::Const(face.end) {
            let c = face.body.apply(&Subst::single(f.var.clone(), f.to.to_nf()), &[]);
            return term(&c, env, indent);
        }
    }
    if f.to == Atom::Const(f.from) {
        return term(&f.base, env, indent);
    }
    let reversed = f.from == Endpoint::I1;
    let mut inner = env.clone();
    let k = inner.bind(&f.var, reversed);
    let sys = system(&k, &f.sides, &inner, indent);
    let base = term(&f.base, env, indent + 2);
    match &f.to {
        Atom::Const(_) => format!("hcomp {sys}\n{}({base})", pad(indent + 2)),
        Atom::Var(r) => {
            let (s, neg) = env.lookup(r);
            let r = if neg ^ reversed { format!("(~ {s})") } else { s };
            format!("hfill {sys}\n{}(inS ({base})) {r}", pad(indent + 2))
        }
    }
}

fn term(t: &Cell, env: &Env, indent: usize) -> String {
    match t {
        Cell::App { name, args } => {
            let mut s = name.to_string();
            for a in args {
                s.push(' ');
                s.push_str(&dim_arg(a, env));
            }
            s
        }
        Cell::Fill(f) => fill_term(f, env, indent),
    }
}

/// Prints `t` as a λ-abstracted Cubical Agda term after checking it
/// against `phi`.
pub fn print_agda(ctx: &CellCtx, psi: &[Name], t: &Cell, phi: &Boundary) -> Result<String, AgdaError> {
    check(ctx, psi, t, phi)?;
    Ok(print_agda_unchecked(ctx, psi, t))
}

pub fn print_agda_unchecked(ctx: &CellCtx, psi: &[Name], t: &Cell) -> String {
    let mut env = Env {
        vars: Vec::new(),
        reserved: ctx.decls().iter().map(|d| d.name.to_string()).collect(),
    };
    let bound: Vec<String> = psi.iter().map(|x| env.bind(x, false)).collect();
    let body = term(t, &env, 0);
    if bound.is_empty() {
        body
    } else {
        format!("λ {} → {body}", bound.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Sym(char),
    Arrow,
    Lambda,
}

fn tokens(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' | '{' | '}' | ';' | '=' | '~' | '∧' | '∨' => {
                out.push(Tok::Sym(c));
                chars.next();
            }
            '→' => {
                out.push(Tok::Arrow);
                chars.next();
            }
            'λ' => {
                out.push(Tok::Lambda);
                chars.next();
            }
            c if c.is_alphanumeric() || c == '_' || c == '\'' => {
                let mut w = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' || d == '\'' {
                        w.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Word(w));
            }
            c => return Err(format!("unexpected character `{c}`")),
        }
    }
    Ok(out)
}

struct Checker {
    toks: Vec<Tok>,
    pos: usize,
    scope: Vec<String>,
}

impl Checker {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, String> {
        let t = self.toks.get(self.pos).cloned().ok_or("unexpected end of term")?;
        self.pos += 1;
        Ok(t)
    }

    fn sym(&mut self, c: char) -> Result<(), String> {
        match self.next()? {
            Tok::Sym(d) if d == c => Ok(()),
            t => Err(format!("expected `{c}`, found {t:?}")),
        }
    }

    fn tok(&mut self, want: Tok) -> Result<(), String> {
        let t = self.next()?;
        if t == want {
            Ok(())
        } else {
            Err(format!("expected {want:?}, found {t:?}"))
        }
    }

    fn word(&mut self) -> Result<String, String> {
        match self.next()? {
            Tok::Word(w) => Ok(w),
            t => Err(format!("expected a name, found {t:?}")),
        }
    }

    fn dim_var(&mut self) -> Result<(), String> {
        let w = self.word()?;
        if w == "i0" || w == "i1" || self.scope.contains(&w) {
            Ok(())
        } else {
            Err(format!("dimension `{w}` is not bound"))
        }
    }

    fn dim_expr(&mut self) -> Result<(), String> {
        self.dim_unary()?;
        while matches!(self.peek(), Some(Tok::Sym('∧' | '∨'))) {
            self.pos += 1;
            self.dim_unary()?;
        }
        Ok(())
    }

    fn dim_unary(&mut self) -> Result<(), String> {
        match self.peek() {
            Some(Tok::Sym('~')) => {
                self.pos += 1;
                self.dim_unary()
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                self.dim_expr()?;
                self.sym(')')
            }
            _ => self.dim_var(),
        }
    }

    fn system(&mut self) -> Result<(), String> {
        self.sym('(')?;
        self.tok(Tok::Lambda)?;
        let k = self.word()?;
        self.tok(Tok::Arrow)?;
        self.tok(Tok::Lambda)?;
        self.scope.push(k);
        if matches!(self.peek(), Some(Tok::Sym('('))) {
            self.sym('(')?;
            self.sym(')')?;
        } else {
            self.sym('{')?;
            loop {
                self.sym('(')?;
                self.dim_var()?;
                self.sym('=')?;
                match self.word()?.as_str() {
                    "i0" | "i1" => {}
                    w => return Err(format!("face endpoint `{w}`")),
                }
                self.sym(')')?;
                self.tok(Tok::Arrow)?;
                self.expr()?;
                match self.next()? {
                    Tok::Sym(';') => continue,
                    Tok::Sym('}') => break,
                    t => return Err(format!("expected `;` or `}}`, found {t:?}")),
                }
            }
        }
        self.scope.pop();
        self.sym(')')
    }

    fn expr(&mut self) -> Result<(), String> {
        let head = self.word()?;
        match head.as_str() {
            "hcomp" => {
                self.system()?;
                self.sym('(')?;
                self.expr()?;
                self.sym(')')
            }
            "hfill" => {
                self.system()?;
                self.sym('(')?;
                self.tok(Tok::Word("inS".into()))?;
                self.sym('(')?;
                self.expr()?;
                self.sym(')')?;
                self.sym(')')?;
                self.dim_unary()
            }
            _ => {
                while let Some(t) = self.peek() {
                    match t {
                        Tok::Word(_) => self.dim_var()?,
                        Tok::Sym('(') => {
                            self.pos += 1;
                            self.dim_expr()?;
                            self.sym(')')?;
                        }
                        _ => break,
                    }
                }
                Ok(())
            }
        }
    }
}

/// Grammar check for printed terms: balanced systems, bound dimension
/// names, `inS` around every `hfill` base.
pub fn check_agda_syntax(s: &str) -> Result<(), String> {
    let mut c = Checker {
        toks: tokens(s)?,
        pos: 0,
        scope: Vec::new(),
    };
    if matches!(c.peek(), Some(Tok::Lambda)) {
        c.pos += 1;
        while let Some(Tok::Word(w)) = c.peek().cloned() {
            c.scope.push(w);
            c.pos += 1;
        }
        c.tok(Tok::Arrow)?;
    }
    c.expr()?;
    if c.pos != c.toks.len() {
        return Err(format!("trailing tokens from {:?}", c.toks[c.pos]));
    }
    Ok(())
}
