//! Cell contexts, boundaries, contorted and Kan cells, normalisation and
//! the independent checker.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::dim::{name, DimCtx, Endpoint, Name, Nf, Subst, Theory};

/// Left-hand side of a face constraint `r = e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Var(Name),
    Const(Endpoint),
}

impl Atom {
    pub fn var(x: &str) -> Atom {
        Atom::Var(name(x))
    }

    pub fn to_nf(&self) -> Nf {
        match self {
            Atom::Var(x) => Nf::of(x),
            Atom::Const(e) => Nf::constant(*e),
        }
    }

    pub fn from_nf(t: &Nf) -> Option<Atom> {
        if let Some(e) = t.as_const() {
            Some(Atom::Const(e))
        } else {
            t.as_var().map(|x| Atom::Var(x.clone()))
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Var(x) => f.write_str(x),
            Atom::Const(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub atom: Atom,
    pub end: Endpoint,
    pub body: Cell,
}

impl Face {
    pub fn new(x: &str, end: Endpoint, body: Cell) -> Face {
        Face {
            atom: Atom::var(x),
            end,
            body,
        }
    }

    pub fn is_var(&self, x: &str) -> bool {
        matches!(&self.atom, Atom::Var(y) if &**y == x)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Boundary {
    pub faces: Vec<Face>,
}

impl Boundary {
    pub fn new(faces: Vec<Face>) -> Boundary {
        Boundary { faces }
    }

    pub fn empty() -> Boundary {
        Boundary::default()
    }

    pub fn get(&self, x: &str, e: Endpoint) -> Option<&Cell> {
        self.faces
            .iter()
            .find(|f| f.end == e && f.is_var(x))
            .map(|f| &f.body)
    }

    pub fn push(&mut self, x: &Name, e: Endpoint, body: Cell) {
        self.faces.push(Face {
            atom: Atom::Var(x.clone()),
            end: e,
            body,
        });
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    /// A context variable under a contortion, one term per declared dimension.
    App { name: Name, args: Vec<Nf> },
    Fill(Box<Fill>),
}

/// `fill^{from -> to}_var {sides} (base)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fill {
    pub from: Endpoint,
    pub to: Atom,
    pub var: Name,
    pub sides: Boundary,
    pub base: Cell,
}

impl Cell {
    pub fn app(head: &str, args: Vec<Nf>) -> Cell {
        Cell::App {
            name: name(head),
            args,
        }
    }

    pub fn point(head: &str) -> Cell {
        Cell::app(head, vec![])
    }

    pub fn fill(from: Endpoint, to: Atom, var: Name, sides: Boundary, base: Cell) -> Cell {
        Cell::Fill(Box::new(Fill {
            from,
            to,
            var,
            sides,
            base,
        }))
    }

    pub fn head(&self) -> Option<&Name> {
        match self {
            Cell::App { name, .. } => Some(name),
            Cell::Fill(_) => None,
        }
    }

    pub fn is_fill(&self) -> bool {
        matches!(self, Cell::Fill(_))
    }

    /// Nesting depth of fillers.
    pub fn fill_depth(&self) -> usize {
        match self {
            Cell::App { .. } => 0,
            Cell::Fill(f) => {
                1 + f
                    .sides
                    .faces
                    .iter()
                    .map(|s| s.body.fill_depth())
                    .chain(std::iter::once(f.base.fill_depth()))
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    /// Largest theory used by any contortion inside the cell.
    pub fn theory(&self) -> Theory {
        match self {
            Cell::App { args, .. } => args.iter().map(Nf::theory).max().unwrap_or(Theory::Cartesian),
            Cell::Fill(f) => f
                .sides
                .faces
                .iter()
                .map(|s| s.body.theory())
                .chain(std::iter::once(f.base.theory()))
                .max()
                .unwrap_or(Theory::Cartesian),
        }
    }

    /// Applies a substitution whose images are over `target`. On Kan cells
    /// the images of constrained variables must be atomic.
    pub fn apply(&self, s: &Subst, target: &[Name]) -> Cell {
        match self {
            Cell::App { name, args } => Cell::App {
                name: name.clone(),
                args: args.iter().map(|t| t.subst(s)).collect(),
            },
            Cell::Fill(f) => {
                let to = atom_image(&f.to, s);
                let var = if target.contains(&f.var) {
                    fresh_var(target)
                } else {
                    f.var.clone()
                };
                let mut s_ext = s.clone();
                s_ext.remove(&f.var);
                if var != f.var {
                    s_ext.insert(f.var.clone(), Nf::of(&var));
                }
                let mut sides = Boundary::empty();
                for face in &f.sides.faces {
                    match atom_image(&face.atom, s) {
                        Atom::Var(y) => {
                            let pin = Subst::single(y.clone(), Nf::constant(face.end));
                            let mut sf = s_ext.then(&pin);
                            if !sf.contains(&y) {
                                sf.insert(y.clone(), Nf::constant(face.end));
                            }
                            let mut tctx = without(target, &y);
                            tctx.push(var.clone());
                            sides.faces.push(Face {
                                atom: Atom::Var(y),
                                end: face.end,
                                body: face.body.apply(&sf, &tctx),
                            });
                        }
                        Atom::Const(c) if c == face.end => {
                            let mut tctx = target.to_vec();
                            tctx.push(var.clone());
                            sides.faces.push(Face {
                                atom: Atom::Const(c),
                                end: face.end,
                                body: face.body.apply(&s_ext, &tctx),
                            });
                        }
                        Atom::Const(_) => {}
                    }
                }
                Cell::fill(f.from, to, var, sides, f.base.apply(s, target))
            }
        }
    }

    /// The face `x = e` of a cell over `ctx`.
    pub fn restrict(&self, x: &Name, e: Endpoint, ctx: &[Name]) -> Cell {
        self.apply(&Subst::single(x.clone(), Nf::constant(e)), &without(ctx, x))
    }

    /// Rewrites with the boundary equations of context variables, collapses
    /// degenerate fillers and renames bound variables canonically.
    pub fn normalize(&self, ctx: &CellCtx, psi: &[Name]) -> Cell {
        match self {
            Cell::App { name, args } => {
                let Some(decl) = ctx.get(name) else {
                    return self.clone();
                };
                for face in &decl.boundary.faces {
                    let Atom::Var(y) = &face.atom else { continue };
                    let Some(r) = decl.dims.iter().position(|d| d == y) else {
                        continue;
                    };
                    if args.get(r).and_then(Nf::as_const) == Some(face.end) {
                        let s = Subst::from_pairs(
                            decl.dims
                                .iter()
                                .zip(args)
                                .enumerate()
                                .filter(|(i, _)| *i != r)
                                .map(|(_, (d, t))| (d.clone(), t.clone()))
                                .collect(),
                        );
                        return face.body.apply(&s, psi).normalize(ctx, psi);
                    }
                }
                self.clone()
            }
            Cell::Fill(f) => {
                if f.to == Atom::Const(f.from) {
                    return f.base.normalize(ctx, psi);
                }
                let to_nf = f.to.to_nf();
                for face in &f.sides.faces {
                    if face.atom == Atom::Const(face.end) {
                        let s = Subst::single(f.var.clone(), to_nf.clone());
                        return face.body.apply(&s, psi).normalize(ctx, psi);
                    }
                }
                let var = fresh_var(psi);
                let rename = Subst::single(f.var.clone(), Nf::of(&var));
                let mut faces: Vec<Face> = Vec::new();
                for face in &f.sides.faces {
                    let Atom::Var(x) = &face.atom else { continue };
                    let mut inner = without(psi, x);
                    inner.push(var.clone());
                    let body = if var == f.var {
                        face.body.clone()
                    } else {
                        face.body.apply(&rename, &inner)
                    };
                    faces.push(Face {
                        atom: face.atom.clone(),
                        end: face.end,
                        body: body.normalize(ctx, &inner),
                    });
                }
                faces.sort_by(|a, b| (&a.atom, a.end).cmp(&(&b.atom, b.end)));
                faces.dedup_by(|a, b| a.atom == b.atom && a.end == b.end);
                Cell::fill(
                    f.from,
                    f.to.clone(),
                    var,
                    Boundary::new(faces),
                    f.base.normalize(ctx, psi),
                )
            }
        }
    }

    pub fn dim_vars_ok(&self, psi: &[Name]) -> bool {
        match self {
            Cell::App { args, .. } => args.iter().all(|t| t.vars().iter().all(|v| psi.contains(v))),
            Cell::Fill(_) => true,
        }
    }
}

fn atom_image(a: &Atom, s: &Subst) -> Atom {
    match a {
        Atom::Const(_) => a.clone(),
        Atom::Var(x) => match s.get(x) {
            None => a.clone(),
            Some(t) => Atom::from_nf(t)
                .unwrap_or_else(|| panic!("non-atomic image `{t}` for constrained variable `{x}`")),
        },
    }
}

pub fn without(ctx: &[Name], x: &str) -> Vec<Name> {
    ctx.iter().filter(|y| &***y != x).cloned().collect()
}

/// First of `_k0, _k1, ...` not in `ctx`.
pub fn fresh_var(ctx: &[Name]) -> Name {
    (0..)
        .map(|n| format!("_k{n}"))
        .find(|c| !ctx.iter().any(|y| **y == **c))
        .map(|c| name(&c))
        .unwrap()
}

/// Constrains `psi` by `r = e`, returning the new context and the
/// constraining substitution.
pub fn constrain_context(psi: &DimCtx, r: &Atom, e: Endpoint) -> (DimCtx, Subst) {
    match (psi, r) {
        (DimCtx::Bot, _) => (DimCtx::Bot, Subst::new()),
        (DimCtx::Vars(v), Atom::Var(x)) if v.contains(x) => (
            DimCtx::Vars(without(v, x)),
            Subst::single(x.clone(), Nf::constant(e)),
        ),
        (_, Atom::Const(c)) if *c != e => (DimCtx::Bot, Subst::new()),
        _ => (psi.clone(), Subst::new()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDecl {
    pub name: Name,
    pub dims: Vec<Name>,
    pub boundary: Boundary,
}

impl CellDecl {
    pub fn new(name_: &str, dims: &[&str], faces: Vec<Face>) -> CellDecl {
        CellDecl {
            name: name(name_),
            dims: crate::dim::names(dims),
            boundary: Boundary::new(faces),
        }
    }
}

/// An ordered cell context; each boundary may mention only earlier cells.
#[derive(Clone, Debug, Default)]
pub struct CellCtx {
    decls: Vec<CellDecl>,
    index: HashMap<Name, usize>,
}

impl CellCtx {
    pub fn new(decls: Vec<CellDecl>) -> Result<CellCtx, CubeError> {
        let mut ctx = CellCtx::default();
        for d in decls {
            ctx.push(d)?;
        }
        Ok(ctx)
    }

    pub fn push(&mut self, mut d: CellDecl) -> Result<(), CubeError> {
        if self.index.contains_key(&d.name) {
            return Err(CubeError::DuplicateCell(d.name));
        }
        for (i, x) in d.dims.iter().enumerate() {
            if d.dims[..i].contains(x) {
                return Err(CubeError::DuplicateDim(x.clone()));
            }
        }
        let mut faces = Vec::new();
        for f in d.boundary.faces {
            match &f.atom {
                Atom::Const(c) if *c != f.end => {}
                Atom::Const(_) => {
                    return Err(CubeError::IllScopedFace(format!(
                        "{}: constant constraint {}={} in a declaration",
                        d.name, f.atom, f.end
                    )))
                }
                Atom::Var(_) => {
                    if f.body.is_fill() {
                        return Err(CubeError::IllScopedFace(format!(
                            "{}: declared faces must be contorted cells",
                            d.name
                        )));
                    }
                    faces.push(f)
                }
            }
        }
        d.boundary = Boundary::new(faces);
        wf_boundary(self, &d.dims, &d.boundary, &[])?;
        self.index.insert(d.name.clone(), self.decls.len());
        self.decls.push(d);
        Ok(())
    }

    pub fn get(&self, n: &str) -> Option<&CellDecl> {
        self.index.get(n).map(|&i| &self.decls[i])
    }

    pub fn decls(&self) -> &[CellDecl] {
        &self.decls
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("cell `{0}` declared twice")]
    DuplicateCell(Name),
    #[error("dimension `{0}` listed twice")]
    DuplicateDim(Name),
    #[error("unknown cell `{0}`")]
    UnknownCell(Name),
    #[error("`{name}` takes {expected} dimension arguments, got {found}")]
    Arity {
        name: Name,
        expected: usize,
        found: usize,
    },
    #[error("dimension variable `{0}` is not in scope")]
    UnboundDim(Name),
    #[error("ill-scoped face: {0}")]
    IllScopedFace(String),
    #[error("faces {first} and {second} disagree on their overlap: {left} vs {right}")]
    IncompatibleFaces {
        first: String,
        second: String,
        left: String,
        right: String,
    },
    #[error("boundaries may extend the context by at most one variable")]
    AuxContextTooLarge,
    #[error("face {face}: expected {expected}, found {actual}")]
    BoundaryMismatch {
        face: String,
        expected: String,
        actual: String,
    },
    #[error("ill-formed filler at {path}: {reason}")]
    IllFormedFill { path: String, reason: String },
}

fn is_vacuous(f: &Face) -> bool {
    matches!(f.atom, Atom::Const(c) if c != f.end)
}

fn face_label(f: &Face) -> String {
    format!("{}={}", f.atom, f.end)
}

/// Restricts the body of `f` (over `psi` constrained by `f`, plus `aux`)
/// along `y = e`. `None` when the constraints do not overlap.
fn restrict_face_body(f: &Face, y: &Atom, e: Endpoint, psi: &[Name], aux: &[Name]) -> Option<(Cell, Vec<Name>)> {
    let mut ctx: Vec<Name> = match &f.atom {
        Atom::Var(x) => without(psi, x),
        Atom::Const(_) => psi.to_vec(),
    };
    match y {
        Atom::Const(c) if *c != e => None,
        Atom::Const(_) => {
            ctx.extend(aux.iter().cloned());
            Some((f.body.clone(), ctx))
        }
        Atom::Var(v) => {
            if f.atom == *y {
                if f.end != e {
                    return None;
                }
                ctx.extend(aux.iter().cloned());
                return Some((f.body.clone(), ctx));
            }
            ctx.extend(aux.iter().cloned());
            Some((f.body.restrict(v, e, &ctx), without(&ctx, v)))
        }
    }
}

/// Checks each face body over its constrained context and the pairwise
/// agreement of faces.
pub fn wf_boundary(ctx: &CellCtx, psi: &[Name], phi: &Boundary, aux: &[Name]) -> Result<(), CubeError> {
    if aux.len() > 1 {
        return Err(CubeError::AuxContextTooLarge);
    }
    for f in &phi.faces {
        let mut inner = match &f.atom {
            Atom::Var(x) => {
                if !psi.contains(x) {
                    return Err(CubeError::IllScopedFace(format!(
                        "constraint on `{x}`, which is not in ({})",
                        join_names(psi)
                    )));
                }
                without(psi, x)
            }
            Atom::Const(c) if *c != f.end => continue,
            Atom::Const(_) => psi.to_vec(),
        };
        inner.extend(aux.iter().cloned());
        wf_cell(ctx, &inner, &f.body).map_err(|e| match e {
            CubeError::IllFormedFill { path, reason } => CubeError::IllFormedFill {
                path: format!("{}/{}", face_label(f), path),
                reason,
            },
            e => e,
        })?;
    }
    let live: Vec<&Face> = phi.faces.iter().filter(|f| !is_vacuous(f)).collect();
    for (a, f1) in live.iter().enumerate() {
        for f2 in &live[a + 1..] {
            let Some((b1, c1)) = restrict_face_body(f1, &f2.atom, f2.end, psi, aux) else {
                continue;
            };
            let Some((b2, c2)) = restrict_face_body(f2, &f1.atom, f1.end, psi, aux) else {
                continue;
            };
            debug_assert_eq!(c1.len(), c2.len());
            let l = b1.normalize(ctx, &c1);
            let r = b2.normalize(ctx, &c2);
            if l != r {
                return Err(CubeError::IncompatibleFaces {
                    first: face_label(f1),
                    second: face_label(f2),
                    left: l.to_string(),
                    right: r.to_string(),
                });
            }
        }
    }
    Ok(())
}

pub fn join_names(xs: &[Name]) -> String {
    xs.iter().map(|x| &**x).collect::<Vec<_>>().join(", ")
}

/// Well-formedness of a Kan cell over `psi`.
pub fn wf_cell(ctx: &CellCtx, psi: &[Name], t: &Cell) -> Result<(), CubeError> {
    match t {
        Cell::App { name, args } => {
            let decl = ctx.get(name).ok_or_else(|| CubeError::UnknownCell(name.clone()))?;
            if decl.dims.len() != args.len() {
                return Err(CubeError::Arity {
                    name: name.clone(),
                    expected: decl.dims.len(),
                    found: args.len(),
                });
            }
            for a in args {
                for v in a.vars() {
                    if !psi.contains(&v) {
                        return Err(CubeError::UnboundDim(v));
                    }
                }
            }
            Ok(())
        }
        Cell::Fill(f) => {
            let bad = |reason: String| CubeError::IllFormedFill {
                path: "fill".into(),
                reason,
            };
            if let Atom::Var(r) = &f.to {
                if !psi.contains(r) {
                    return Err(CubeError::UnboundDim(r.clone()));
                }
            }
            if psi.contains(&f.var) {
                return Err(bad(format!("bound variable `{}` shadows the context", f.var)));
            }
            wf_boundary(ctx, psi, &f.sides, std::slice::from_ref(&f.var))?;
            wf_cell(ctx, psi, &f.base).map_err(|e| match e {
                CubeError::IllFormedFill { path, reason } => CubeError::IllFormedFill {
                    path: format!("base/{path}"),
                    reason,
                },
                e => e,
            })?;
            let at_start = Subst::single(f.var.clone(), Nf::constant(f.from));
            for face in &f.sides.faces {
                let (expected, actual, fctx) = match &face.atom {
                    Atom::Var(x) => {
                        let fctx = without(psi, x);
                        (
                            face.body.apply(&at_start, &fctx),
                            f.base.restrict(x, face.end, psi),
                            fctx,
                        )
                    }
                    Atom::Const(c) if *c == face.end => (face.body.apply(&at_start, psi), f.base.clone(), psi.to_vec()),
                    Atom::Const(_) => continue,
                };
                let e = expected.normalize(ctx, &fctx);
                let a = actual.normalize(ctx, &fctx);
                if e != a {
                    return Err(bad(format!(
                        "base disagrees with side {} at {}={}: {} vs {}",
                        face_label(face),
                        f.var,
                        f.from,
                        a,
                        e
                    )));
                }
            }
            Ok(())
        }
    }
}

/// The face `r = e` of a cell over `psi`, normalised; `None` over ⊥.
pub fn face_of(ctx: &CellCtx, psi: &[Name], t: &Cell, r: &Atom, e: Endpoint) -> Option<(Cell, Vec<Name>)> {
    match r {
        Atom::Var(x) => {
            let c = without(psi, x);
            Some((t.restrict(x, e, psi).normalize(ctx, &c), c))
        }
        Atom::Const(k) if *k == e => Some((t.normalize(ctx, psi), psi.to_vec())),
        Atom::Const(_) => None,
    }
}

/// Every face of `t`, one per variable and endpoint.
pub fn cell_boundary(ctx: &CellCtx, psi: &[Name], t: &Cell) -> Boundary {
    let mut b = Boundary::empty();
    for x in psi {
        for e in Endpoint::BOTH {
            b.push(x, e, t.restrict(x, e, psi).normalize(ctx, &without(psi, x)));
        }
    }
    b
}

/// Succeeds iff `t` is a well-formed Kan cell agreeing with every face of
/// `phi`.
pub fn check(ctx: &CellCtx, psi: &[Name], t: &Cell, phi: &Boundary) -> Result<(), CubeError> {
    wf_cell(ctx, psi, t)?;
    for f in &phi.faces {
        let Some((actual, fctx)) = face_of(ctx, psi, t, &f.atom, f.end) else {
            continue;
        };
        let expected = f.body.normalize(ctx, &fctx);
        if actual != expected {
            return Err(CubeError::BoundaryMismatch {
                face: face_label(f),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }
    Ok(())
}

/// Face-wise equality of two boundaries over `psi`, ignoring face order.
pub fn boundaries_agree(ctx: &CellCtx, psi: &[Name], a: &Boundary, b: &Boundary) -> bool {
    let norm = |phi: &Boundary| {
        let mut v: Vec<(Atom, Endpoint, Cell)> = phi
            .faces
            .iter()
            .filter_map(|f| {
                let c = match &f.atom {
                    Atom::Var(x) => without(psi, x),
                    Atom::Const(k) if *k == f.end => psi.to_vec(),
                    Atom::Const(_) => return None,
                };
                Some((f.atom.clone(), f.end, f.body.normalize(ctx, &c)))
            })
            .collect();
        v.sort_by(|x, y| (&x.0, x.1).cmp(&(&y.0, y.1)));
        v.dedup_by(|x, y| x.0 == y.0 && x.1 == y.1);
        v
    };
    norm(a) == norm(b)
}

/// Applies a contortion to a context variable and normalises.
pub fn contorted(ctx: &CellCtx, psi: &[Name], head: &Name, args: Vec<Nf>) -> Cell {
    Cell::App {
        name: head.clone(),
        args,
    }
    .normalize(ctx, psi)
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::App { name, args } => {
                f.write_str(name)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
            Cell::Fill(fl) => {
                write!(f, "fill {} -> {} {} {{", fl.from, fl.to, fl.var)?;
                for (i, face) in fl.sides.faces.iter().enumerate() {
                    f.write_str(if i == 0 { " " } else { ", " })?;
                    write!(f, "{face}")?;
                }
                if !fl.sides.faces.is_empty() {
                    f.write_str(" ")?;
                }
                write!(f, "}} ({})", fl.base)
            }
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={} -> {}", self.atom, self.end, self.body)
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, face) in self.faces.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            write!(f, "{face}")?;
        }
        if !self.faces.is_empty() {
            f.write_str(" ")?;
        }
        f.write_str("}")
    }
}
