//! Contortions of a single context cell solving a boundary.

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cube::{check, contorted, face_of, without, Atom, Boundary, Cell, CellCtx};
use crate::dim::{dedekind_number, enumerate_nf, Endpoint, Name, Nf, Subst, Theory};
use crate::poset::{face_points, formula_to_pm, pm_to_formula, Mode, Ppm, MAX_TARGET_WIDTH};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContortError {
    #[error("no contortion solves the goal")]
    Unsolvable,
    #[error("time limit reached")]
    Timeout,
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Deadline {
        Deadline(None)
    }

    pub fn after(d: Duration) -> Deadline {
        Deadline(Instant::now().checked_add(d))
    }

    pub fn expired(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }
}

/// Search counters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub maps_unfolded: u64,
    pub csp_branches: u64,
    pub depth_reached: usize,
    pub warnings: Vec<String>,
    /// With tracing on: face label and number of maps left after each face.
    pub trace: Vec<(String, usize)>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ContortOptions {
    pub deadline: Deadline,
    pub trace: bool,
}

const LIST_LIMIT: u64 = 2_000_000;

/// A set of contortions of one cell, either as a PPM or as an explicit list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ContSet {
    Ppm(Ppm, Mode),
    List(Vec<Vec<Nf>>),
}

/// All contortions of `head` over `vars` in a theory, narrowed face by face.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Candidates {
    pub head: Name,
    pub vars: Vec<Name>,
    pub set: ContSet,
}

fn product(vals: &[Nf], n: usize) -> Vec<Vec<Nf>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    out
}

impl Candidates {
    pub fn all(ctx: &CellCtx, head: &Name, vars: &[Name], theory: Theory) -> Result<Candidates, ContortError> {
        let n = ctx
            .get(head)
            .unwrap_or_else(|| panic!("unknown cell `{head}`"))
            .dims
            .len();
        let set = match Mode::for_theory(theory) {
            Some(mode) => {
                let m = mode.width(vars.len());
                if n > MAX_TARGET_WIDTH || m > 16 {
                    return Err(ContortError::InstanceTooLarge(format!(
                        "{head} has {n} dimensions over {} variables",
                        vars.len()
                    )));
                }
                ContSet::Ppm(Ppm::total(m, n), mode)
            }
            None => {
                let vals = enumerate_nf(vars, theory);
                let size = (vals.len() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
                if size > LIST_LIMIT {
                    return Err(ContortError::InstanceTooLarge(format!(
                        "{size} {theory} contortions of {head}"
                    )));
                }
                ContSet::List(product(&vals, n))
            }
        };
        Ok(Candidates {
            head: head.clone(),
            vars: vars.to_vec(),
            set,
        })
    }

    pub fn weight(&self) -> u64 {
        match &self.set {
            ContSet::Ppm(p, _) => p.weight() as u64,
            ContSet::List(l) => l.len() as u64,
        }
    }

    /// Number of contortions represented; unfolds PPMs.
    pub fn count(&self) -> usize {
        match &self.set {
            ContSet::Ppm(p, _) => p.count(),
            ContSet::List(l) => l.len(),
        }
    }

    /// Keeps the contortions whose face `x = e` is `body`; `None` when
    /// nothing is left. `body` must be normalised over `vars \ x`.
    pub fn restrict_face(
        self,
        ctx: &CellCtx,
        x: &Name,
        e: Endpoint,
        body: &Cell,
        stats: &mut Stats,
        deadline: Deadline,
    ) -> Result<Option<Candidates>, ContortError> {
        let Some(xi) = self.vars.iter().position(|v| v == x) else {
            return Ok(Some(self));
        };
        if body.is_fill() {
            return Ok(None);
        }
        let sub_vars = without(&self.vars, x);
        let Candidates { head, vars, set } = self;
        let set = match set {
            ContSet::Ppm(mut ppm, mode) => {
                let points = face_points(ppm.src_width(), &mode.face(xi, e.is_one()));
                let changes: Vec<(u32, u64)> = match body {
                    Cell::App { name, args } if *name == head => {
                        let Ok(sigma) = formula_to_pm(args, &sub_vars, mode) else {
                            return Ok(None);
                        };
                        points
                            .iter()
                            .zip(&sigma.values)
                            .map(|(&p, &v)| (p, 1u64 << v))
                            .collect()
                    }
                    _ => {
                        let sub = ppm.restrict(&points);
                        let mut keep = vec![0u64; points.len()];
                        for (count, sigma) in sub.unfold().enumerate() {
                            stats.maps_unfolded += 1;
                            if count % 1024 == 1023 && deadline.expired() {
                                return Err(ContortError::Timeout);
                            }
                            let args = pm_to_formula(&sigma, &sub_vars, mode);
                            if contorted(ctx, &sub_vars, &head, args) == *body {
                                for (k, &v) in sigma.values.iter().enumerate() {
                                    keep[k] |= 1 << v;
                                }
                            }
                        }
                        if keep[0] == 0 {
                            return Ok(None);
                        }
                        points.iter().copied().zip(keep).collect()
                    }
                };
                if ppm.update(&changes).is_err() {
                    return Ok(None);
                }
                ContSet::Ppm(ppm, mode)
            }
            ContSet::List(list) => {
                let pin = Subst::single(x.clone(), Nf::constant(e));
                let list: Vec<Vec<Nf>> = list
                    .into_iter()
                    .filter(|args| {
                        let args = args.iter().map(|t| t.subst(&pin)).collect();
                        contorted(ctx, &sub_vars, &head, args) == *body
                    })
                    .collect();
                if list.is_empty() {
                    return Ok(None);
                }
                ContSet::List(list)
            }
        };
        Ok(Some(Candidates { head, vars, set }))
    }

    /// Visits every represented contortion in the deterministic order.
    pub fn for_each<B>(
        &self,
        stats: &mut Stats,
        mut f: impl FnMut(&mut Stats, Vec<Nf>) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        match &self.set {
            ContSet::Ppm(p, mode) => {
                for sigma in p.unfold() {
                    stats.maps_unfolded += 1;
                    f(stats, pm_to_formula(&sigma, &self.vars, *mode))?;
                }
            }
            ContSet::List(l) => {
                for args in l {
                    f(stats, args.clone())?;
                }
            }
        }
        ControlFlow::Continue(())
    }
}

fn head_dim(ctx: &CellCtx, body: &Cell) -> usize {
    match body {
        Cell::App { name, .. } => ctx.get(name).map_or(0, |d| d.dims.len()),
        Cell::Fill(_) => usize::MAX,
    }
}

/// Narrows the contortions of `head` by every variable face of `phi`, in
/// descending order of the dimension of the face's head cell.
pub fn narrow(
    ctx: &CellCtx,
    psi: &[Name],
    phi: &Boundary,
    mut cands: Candidates,
    opts: &ContortOptions,
    stats: &mut Stats,
) -> Result<Option<Candidates>, ContortError> {
    let mut faces: Vec<_> = phi
        .faces
        .iter()
        .filter_map(|f| match &f.atom {
            Atom::Var(x) => Some((x, f.end, f.body.normalize(ctx, &without(psi, x)))),
            Atom::Const(_) => None,
        })
        .collect();
    faces.sort_by_key(|(_, _, b)| std::cmp::Reverse(head_dim(ctx, b)));
    for (x, e, body) in faces {
        if opts.deadline.expired() {
            return Err(ContortError::Timeout);
        }
        match cands.restrict_face(ctx, x, e, &body, stats, opts.deadline)? {
            Some(c) => cands = c,
            None => {
                if opts.trace {
                    stats.trace.push((format!("{x}={e}"), 0));
                }
                return Ok(None);
            }
        }
        if opts.trace {
            stats.trace.push((format!("{x}={e}"), cands.count()));
        }
    }
    Ok(Some(cands))
}

fn setup(
    ctx: &CellCtx,
    psi: &[Name],
    a: &Name,
    theory: Theory,
    stats: &mut Stats,
) -> Result<Candidates, ContortError> {
    if theory == Theory::DeMorgan && psi.len() >= 3 {
        stats.warnings.push(format!(
            "De Morgan search over {} variables uses a PPM on 2^{} points; consider --theory dedekind",
            psi.len(),
            2 * psi.len()
        ));
    }
    Candidates::all(ctx, a, psi, theory)
}

/// Finds a contortion of `a` with boundary `phi`, returning its arguments.
pub fn contort(
    ctx: &CellCtx,
    psi: &[Name],
    phi: &Boundary,
    a: &Name,
    theory: Theory,
) -> Result<Vec<Nf>, ContortError> {
    contort_with(ctx, psi, phi, a, theory, &ContortOptions::default(), &mut Stats::default())
}

pub fn contort_with(
    ctx: &CellCtx,
    psi: &[Name],
    phi: &Boundary,
    a: &Name,
    theory: Theory,
    opts: &ContortOptions,
    stats: &mut Stats,
) -> Result<Vec<Nf>, ContortError> {
    let mut found = None;
    contort_each(ctx, psi, phi, a, theory, opts, stats, |args| {
        found = Some(args);
        ControlFlow::Break(())
    })?;
    found.ok_or(ContortError::Unsolvable)
}

/// Calls `f` on every contortion of `a` solving `phi`.
#[allow(clippy::too_many_arguments)]
pub fn contort_each(
    ctx: &CellCtx,
    psi: &[Name],
    phi: &Boundary,
    a: &Name,
    theory: Theory,
    opts: &ContortOptions,
    stats: &mut Stats,
    mut f: impl FnMut(Vec<Nf>) -> ControlFlow<()>,
) -> Result<(), ContortError> {
    let cands = setup(ctx, psi, a, theory, stats)?;
    let Some(cands) = narrow(ctx, psi, phi, cands, opts, stats)? else {
        return Ok(());
    };
    let mut timed_out = false;
    let mut n = 0u64;
    let _ = cands.for_each(stats, |_, args| {
        n += 1;
        if n % 256 == 0 && opts.deadline.expired() {
            timed_out = true;
            return ControlFlow::Break(());
        }
        let cell = Cell::App {
            name: a.clone(),
            args,
        };
        if check(ctx, psi, &cell, phi).is_ok() {
            let Cell::App { args, .. } = cell else { unreachable!() };
            return f(args);
        }
        ControlFlow::Continue(())
    });
    if timed_out {
        return Err(ContortError::Timeout);
    }
    Ok(())
}

/// Exhaustive scan over all contortions in enumeration order.
pub fn brute_force_contort(
    ctx: &CellCtx,
    psi: &[Name],
    phi: &Boundary,
    a: &Name,
    theory: Theory,
) -> Result<Vec<Nf>, ContortError> {
    let n = ctx
        .get(a)
        .unwrap_or_else(|| panic!("unknown cell `{a}`"))
        .dims
        .len();
    let base = match theory {
        Theory::Dedekind => dedekind_number(psi.len()),
        Theory::DeMorgan => dedekind_number(2 * psi.len()),
        _ => None,
    }
    .unwrap_or(u64::MAX);
    let base = base.min(enumerate_size(psi.len(), theory));
    if base.checked_pow(n as u32).map_or(true, |s| s > 1_000_000) {
        return Err(ContortError::InstanceTooLarge(format!(
            "{base}^{n} contortions of {a}"
        )));
    }
    let vals = if n == 0 { Vec::new() } else { enumerate_nf(psi, theory) };
    let mut idx = vec![0usize; n];
    loop {
        let args: Vec<Nf> = idx.iter().map(|&i| vals[i].clone()).collect();
        let cell = Cell::App {
            name: a.clone(),
            args,
        };
        if check(ctx, psi, &cell, phi).is_ok() {
            let Cell::App { args, .. } = cell else { unreachable!() };
            return Ok(args);
        }
        let mut c = n;
        loop {
            if c == 0 {
                return Err(ContortError::Unsolvable);
            }
            c -= 1;
            idx[c] += 1;
            if idx[c] < vals.len() {
                break;
            }
            idx[c] = 0;
        }
    }
}

fn enumerate_size(m: usize, theory: Theory) -> u64 {
    match theory {
        Theory::Cartesian => m as u64 + 2,
        Theory::Disjunctive => 1u64.checked_shl(m as u32).map_or(u64::MAX, |p| p + 1),
        _ => u64::MAX,
    }
}

/// The face `x = e` of `a(args)` over `psi`.
pub fn contortion_face(ctx: &CellCtx, psi: &[Name], a: &Name, args: &[Nf], x: &Name, e: Endpoint) -> Cell {
    let cell = Cell::App {
        name: a.clone(),
        args: args.to_vec(),
    };
    face_of(ctx, psi, &cell, &Atom::Var(x.clone()), e)
        .map(|(c, _)| c)
        .expect("variable faces always exist")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_cube;

    const SQUARES: &str = "
        a []
        b []
        p [i] { i=0 -> a(), i=1 -> b() }
        s [i, j]
        goal diag [k] { k=0 -> s(0, 0), k=1 -> s(1, 1) }
        goal inv [j] { j=0 -> p(1), j=1 -> p(0) }
    ";

    fn goal(src: &str, g: &str) -> (CellCtx, Vec<Name>, Boundary) {
        let f = parse_cube(src).unwrap();
        let g = f.goal(g).unwrap();
        (f.ctx.clone(), g.dims.clone(), g.boundary.clone())
    }

    #[test]
    fn diagonal_in_every_theory() {
        let (ctx, psi, phi) = goal(SQUARES, "diag");
        for t in Theory::ALL {
            let args = contort(&ctx, &psi, &phi, &crate::dim::name("s"), t).unwrap();
            assert_eq!(args, vec![Nf::var("k"), Nf::var("k")], "{t}");
        }
    }

    #[test]
    fn inversion_needs_negation() {
        let (ctx, psi, phi) = goal(SQUARES, "inv");
        let p = crate::dim::name("p");
        assert_eq!(contort(&ctx, &psi, &phi, &p, Theory::Dedekind), Err(ContortError::Unsolvable));
        let args = contort(&ctx, &psi, &phi, &p, Theory::DeMorgan).unwrap();
        assert_eq!(args[0].to_string(), "~j");
    }

    #[test]
    fn empty_boundary_gives_constant_zero() {
        let (ctx, _, _) = goal(SQUARES, "diag");
        let psi = crate::dim::names(&["x", "y"]);
        let s = crate::dim::name("s");
        for t in Theory::ALL {
            let args = brute_force_contort(&ctx, &psi, &Boundary::empty(), &s, t).unwrap();
            assert_eq!(args, vec![Nf::zero(), Nf::zero()]);
        }
    }
}
