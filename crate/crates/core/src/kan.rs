//! Kan fillers: natural fillers, the side-assignment CSP, open cubes and
//! the iterative-deepening solver.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::ControlFlow;
use std::time::Duration;

use thiserror::Error;

use crate::contort::{contort_each, Candidates, ContortError, ContortOptions, Deadline, Stats};
use crate::cube::{check, face_of, fresh_var, without, Atom, Boundary, Cell, CellCtx, Face};
use crate::dim::{Endpoint, Name, Nf, Subst, Theory};

/// A side of the open cube built around a goal: `x = e` for a goal
/// variable, or the back side at `k = 0` for the fresh direction `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Face(Name, Endpoint),
    Back,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Face(x, e) => write!(f, "{x}={e}"),
            Side::Back => f.write_str("back"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("no solution")]
    Unsolvable,
    #[error("time limit reached")]
    Timeout,
    #[error("no solution up to depth {0}")]
    DepthExhausted(usize),
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub theory: Option<Theory>,
    pub max_depth: usize,
    pub timeout: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            theory: None,
            max_depth: 4,
            timeout: Some(Duration::from_secs(60)),
        }
    }
}

/// Dedekind from three dimensions on, De Morgan below.
pub fn default_theory(psi: &[Name]) -> Theory {
    if psi.len() >= 3 {
        Theory::Dedekind
    } else {
        Theory::DeMorgan
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub cell: Cell,
    /// 0 for a contortion, otherwise the search depth that found it.
    pub depth: usize,
    /// Sides left open in the outermost cube.
    pub open_sides: Vec<Side>,
    pub stats: Stats,
}

#[derive(Debug)]
struct Timeout;

type Key = (Vec<Name>, Vec<(Atom, Endpoint, Cell)>);

enum Memo {
    Failed(usize),
    Solved(Cell),
}

fn normalized_faces(ctx: &CellCtx, psi: &[Name], phi: &Boundary) -> Vec<(Atom, Endpoint, Cell)> {
    let mut v: Vec<_> = phi
        .faces
        .iter()
        .filter_map(|f| match &f.atom {
            Atom::Var(x) => Some((f.atom.clone(), f.end, f.body.normalize(ctx, &without(psi, x)))),
            Atom::Const(c) if *c == f.end => Some((f.atom.clone(), f.end, f.body.normalize(ctx, psi))),
            Atom::Const(_) => None,
        })
        .collect();
    v.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    v.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    v
}

fn rename_bound(f: &crate::cube::Fill, psi: &[Name]) -> Cell {
    if !psi.contains(&f.var) {
        return Cell::Fill(Box::new(f.clone()));
    }
    let mut all = psi.to_vec();
    all.push(f.var.clone());
    let var = fresh_var(&all);
    let s = Subst::single(f.var.clone(), Nf::of(&var));
    let sides = Boundary::new(
        f.sides
            .faces
            .iter()
            .map(|face| {
                let mut c = match &face.atom {
                    Atom::Var(x) => without(psi, x),
                    Atom::Const(_) => psi.to_vec(),
                };
                c.push(var.clone());
                Face {
                    atom: face.atom.clone(),
                    end: face.end,
                    body: face.body.apply(&s, &c),
                }
            })
            .collect(),
    );
    Cell::fill(f.from, f.to.clone(), var, sides, f.base.clone())
}

/// Natural fillers: a goal face `j = ē` that is a filler `e -> ē` extends
/// to the filler `e -> j`.
pub fn kan_fill(ctx: &CellCtx, psi: &[Name], phi: &Boundary) -> Option<Cell> {
    for f in &phi.faces {
        let Atom::Var(j) = &f.atom else { continue };
        let Cell::Fill(fl) = f.body.normalize(ctx, psi) else {
            continue;
        };
        if fl.to != Atom::Const(f.end) || fl.from != f.end.neg() {
            continue;
        }
        let mut fl = *fl;
        fl.to = Atom::Var(j.clone());
        let cand = rename_bound(&fl, psi);
        if check(ctx, psi, &cand, phi).is_ok() {
            return Some(cand);
        }
    }
    None
}

struct SideInfo {
    side: Side,
    vars: Vec<Name>,
    goal: Option<Cell>,
}

struct Cube {
    k: Name,
    sides: Vec<SideInfo>,
}

impl Cube {
    fn new(ctx: &CellCtx, psi: &[Name], phi: &Boundary) -> Cube {
        let k = fresh_var(psi);
        let mut sides = Vec::new();
        for x in psi {
            for e in Endpoint::BOTH {
                let mut vars = without(psi, x);
                vars.push(k.clone());
                let goal = phi
                    .faces
                    .iter()
                    .find(|f| f.end == e && f.is_var(x))
                    .map(|f| f.body.normalize(ctx, &without(psi, x)));
                sides.push(SideInfo {
                    side: Side::Face(x.clone(), e),
                    vars,
                    goal,
                });
            }
        }
        sides.push(SideInfo {
            side: Side::Back,
            vars: psi.to_vec(),
            goal: None,
        });
        Cube { k, sides }
    }

    /// The face that a cell `c` on side `a` imposes on side `b`, as a
    /// constraint in `b`'s context.
    fn shared(&self, ctx: &CellCtx, a: usize, c: &Cell, b: usize) -> Option<(Name, Endpoint, Cell)> {
        let (sa, sb) = (&self.sides[a], &self.sides[b]);
        let va = &sa.vars;
        match (&sa.side, &sb.side) {
            (Side::Face(i, e), Side::Face(j, e2)) if i != j => {
                let (body, _) = face_of(ctx, va, c, &Atom::Var(j.clone()), *e2)?;
                Some((i.clone(), *e, body))
            }
            (Side::Face(i, e), Side::Back) => {
                let (body, _) = face_of(ctx, va, c, &Atom::Var(self.k.clone()), Endpoint::I0)?;
                Some((i.clone(), *e, body))
            }
            (Side::Back, Side::Face(j, e2)) => {
                let (body, _) = face_of(ctx, va, c, &Atom::Var(j.clone()), *e2)?;
                Some((self.k.clone(), Endpoint::I0, body))
            }
            _ => None,
        }
    }

    fn assemble(&self, cells: &[Cell]) -> Cell {
        let mut sides = Boundary::empty();
        let mut back = None;
        for (s, c) in self.sides.iter().zip(cells) {
            match &s.side {
                Side::Face(x, e) => sides.push(x, *e, c.clone()),
                Side::Back => back = Some(c.clone()),
            }
        }
        Cell::fill(
            Endpoint::I0,
            Atom::Const(Endpoint::I1),
            self.k.clone(),
            sides,
            back.expect("cube has a back side"),
        )
    }
}

#[derive(Clone)]
struct CspState {
    domains: Vec<Option<Vec<Candidates>>>,
    assigned: Vec<Option<Cell>>,
    imposed: Vec<Boundary>,
}

struct Search<'a> {
    ctx: &'a CellCtx,
    theory: Theory,
    deadline: Deadline,
    stats: Stats,
    memo: HashMap<Key, Memo>,
}

impl<'a> Search<'a> {
    fn new(ctx: &'a CellCtx, theory: Theory, deadline: Deadline) -> Search<'a> {
        Search {
            ctx,
            theory,
            deadline,
            stats: Stats::default(),
            memo: HashMap::new(),
        }
    }

    fn tick(&self) -> Result<(), Timeout> {
        if self.deadline.expired() {
            Err(Timeout)
        } else {
            Ok(())
        }
    }

    fn candidates(&mut self, vars: &[Name]) -> Vec<Candidates> {
        let mut out = Vec::new();
        for d in self.ctx.decls() {
            match Candidates::all(self.ctx, &d.name, vars, self.theory) {
                Ok(c) => out.push(c),
                Err(e) => {
                    let w = format!("skipping {}: {e}", d.name);
                    if !self.stats.warnings.contains(&w) {
                        self.stats.warnings.push(w);
                    }
                }
            }
        }
        out
    }

    fn narrow(
        &mut self,
        dom: Vec<Candidates>,
        x: &Name,
        e: Endpoint,
        body: &Cell,
    ) -> Result<Option<Vec<Candidates>>, Timeout> {
        let mut out = Vec::new();
        for c in dom {
            match c.restrict_face(self.ctx, x, e, body, &mut self.stats, self.deadline) {
                Ok(Some(c)) => out.push(c),
                Ok(None) => {}
                Err(ContortError::Timeout) => return Err(Timeout),
                Err(_) => {}
            }
        }
        Ok(if out.is_empty() { None } else { Some(out) })
    }

    /// Domains after the goal-face constraints; `None` marks a side no
    /// contortion can fill.
    fn unary_domains(&mut self, cube: &Cube) -> Result<Vec<Option<Vec<Candidates>>>, Timeout> {
        let mut out = Vec::new();
        for s in &cube.sides {
            let dom = self.candidates(&s.vars);
            let dom = match &s.goal {
                Some(g) => self.narrow(dom, &cube.k, Endpoint::I1, g)?,
                None => Some(dom),
            };
            out.push(dom.filter(|d| !d.is_empty()));
        }
        Ok(out)
    }

    fn values(&mut self, vars: &[Name], dom: &[Candidates], imposed: &Boundary) -> Result<Vec<Cell>, Timeout> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let ctx = self.ctx;
        let deadline = self.deadline;
        let mut timed_out = false;
        let mut n = 0u64;
        for c in dom {
            let _ = c.for_each(&mut self.stats, |_, args| {
                n += 1;
                if n % 256 == 0 && deadline.expired() {
                    timed_out = true;
                    return ControlFlow::Break(());
                }
                let cell = Cell::App {
                    name: c.head.clone(),
                    args,
                }
                .normalize(ctx, vars);
                if seen.insert(cell.clone()) && check(ctx, vars, &cell, imposed).is_ok() {
                    out.push(cell);
                }
                ControlFlow::Continue(())
            });
            if timed_out {
                return Err(Timeout);
            }
        }
        Ok(out)
    }

    /// Enumerates assignments of contorted cells to the sides not in
    /// `open`, calling `f` on each.
    fn csp(
        &mut self,
        cube: &Cube,
        st: CspState,
        f: &mut dyn FnMut(&mut Self, &[Option<Cell>]) -> Result<ControlFlow<Cell>, Timeout>,
    ) -> Result<ControlFlow<Cell>, Timeout> {
        self.tick()?;
        let next = st
            .domains
            .iter()
            .enumerate()
            .filter(|(i, d)| d.is_some() && st.assigned[*i].is_none())
            .min_by_key(|(_, d)| d.as_ref().unwrap().iter().map(Candidates::weight).sum::<u64>())
            .map(|(i, _)| i);
        let Some(s) = next else {
            return f(self, &st.assigned);
        };
        let dom = st.domains[s].as_ref().unwrap();
        let vals = self.values(&cube.sides[s].vars, dom, &st.imposed[s])?;
        'vals: for v in vals {
            self.stats.csp_branches += 1;
            let mut next = st.clone();
            for b in 0..cube.sides.len() {
                if b == s || next.assigned[b].is_some() || next.domains[b].is_none() {
                    continue;
                }
                let Some((x, e, body)) = cube.shared(self.ctx, s, &v, b) else {
                    continue;
                };
                let dom = next.domains[b].take().unwrap();
                match self.narrow(dom, &x, e, &body)? {
                    Some(d) => next.domains[b] = Some(d),
                    None => continue 'vals,
                }
                next.imposed[b].push(&x, e, body);
            }
            next.assigned[s] = Some(v);
            if let ControlFlow::Break(c) = self.csp(cube, next, f)? {
                return Ok(ControlFlow::Break(c));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn initial_state(&self, cube: &Cube, unary: &[Option<Vec<Candidates>>], open: &[usize]) -> CspState {
        let n = cube.sides.len();
        let mut imposed = vec![Boundary::empty(); n];
        for (i, s) in cube.sides.iter().enumerate() {
            if let Some(g) = &s.goal {
                imposed[i].push(&cube.k, Endpoint::I1, g.clone());
            }
        }
        CspState {
            domains: (0..n)
                .map(|i| if open.contains(&i) { None } else { unary[i].clone() })
                .collect(),
            assigned: vec![None; n],
            imposed,
        }
    }

    /// Boundary of side `x` induced by the goal and the solved sides.
    fn induced(&self, cube: &Cube, solved: &[Option<Cell>], x: usize) -> Boundary {
        let mut b = Boundary::empty();
        if let Some(g) = &cube.sides[x].goal {
            b.push(&cube.k, Endpoint::I1, g.clone());
        }
        for (y, c) in solved.iter().enumerate() {
            if let Some(c) = c {
                if let Some((v, e, body)) = cube.shared(self.ctx, y, c, x) {
                    b.push(&v, e, body);
                }
            }
        }
        b
    }

    /// Solves the open sides of a CSP solution, most constrained first.
    fn close(&mut self, cube: &Cube, assigned: &[Option<Cell>], d: usize) -> Result<Option<Vec<Cell>>, Timeout> {
        let mut solved = assigned.to_vec();
        loop {
            let pending: Vec<usize> = (0..solved.len()).filter(|&i| solved[i].is_none()).collect();
            if pending.is_empty() {
                break;
            }
            let pick = pending
                .iter()
                .map(|&i| {
                    let b = self.induced(cube, &solved, i);
                    let s = &cube.sides[i];
                    let fill_goal = s.goal.as_ref().is_some_and(Cell::is_fill);
                    let rank = (
                        std::cmp::Reverse(b.len()),
                        s.side != Side::Back,
                        !fill_goal,
                        i,
                    );
                    (rank, i, b)
                })
                .min_by(|a, b| a.0.cmp(&b.0))
                .unwrap();
            let (_, i, b) = pick;
            match self.kan_solver(&cube.sides[i].vars, &b, d - 1)? {
                Some(c) => solved[i] = Some(c),
                None => return Ok(None),
            }
        }
        Ok(Some(solved.into_iter().map(Option::unwrap).collect()))
    }

    fn kan_cube(
        &mut self,
        psi: &[Name],
        phi: &Boundary,
        d: usize,
        f: &mut dyn FnMut(&mut Self, Cell, &[Side]) -> ControlFlow<Cell>,
    ) -> Result<ControlFlow<Cell>, Timeout> {
        if d == 0 {
            return Ok(ControlFlow::Continue(()));
        }
        let cube = Cube::new(self.ctx, psi, phi);
        let unary = self.unary_domains(&cube)?;
        let naturals: Vec<Option<Cell>> = cube
            .sides
            .iter()
            .map(|s| {
                let g = s.goal.as_ref().filter(|g| g.is_fill())?;
                let mut b = Boundary::empty();
                b.push(&cube.k, Endpoint::I1, g.clone());
                kan_fill(self.ctx, &s.vars, &b)
            })
            .collect();
        // Fix as many natural fillers as possible first. Leaving one open
        // sends its side to a recursive call that can only succeed below
        // depth 2 through the same natural filler.
        let nat: Vec<usize> = (0..naturals.len()).filter(|&i| naturals[i].is_some()).collect();
        let mut modes = Vec::new();
        for size in (0..=nat.len()).rev() {
            if size < nat.len() && d < 3 {
                break;
            }
            for keep in combinations(&nat, size) {
                let fixed: Vec<Option<Cell>> = (0..naturals.len())
                    .map(|i| if keep.contains(&i) { naturals[i].clone() } else { None })
                    .collect();
                modes.push(fixed);
            }
        }
        for fixed in modes {
            let Some(base) = self.fixed_state(&cube, &unary, &fixed)? else {
                continue;
            };
            if let ControlFlow::Break(c) = self.kan_cube_open(&cube, psi, phi, d, base, f)? {
                return Ok(ControlFlow::Break(c));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// The CSP state with `fixed` sides assigned and their faces imposed on
    /// the neighbours; `None` if two fixed sides disagree.
    fn fixed_state(
        &mut self,
        cube: &Cube,
        unary: &[Option<Vec<Candidates>>],
        fixed: &[Option<Cell>],
    ) -> Result<Option<CspState>, Timeout> {
        let mut st = self.initial_state(cube, unary, &[]);
        for (a, c) in fixed.iter().enumerate() {
            let Some(c) = c else { continue };
            st.domains[a] = None;
            st.assigned[a] = Some(c.clone());
        }
        for (a, c) in fixed.iter().enumerate() {
            let Some(c) = c else { continue };
            for b in 0..cube.sides.len() {
                if a == b {
                    continue;
                }
                let Some((x, e, body)) = cube.shared(self.ctx, a, c, b) else {
                    continue;
                };
                if let Some(other) = &fixed[b] {
                    let vars = &cube.sides[b].vars;
                    match face_of(self.ctx, vars, other, &Atom::Var(x.clone()), e) {
                        Some((f, fctx)) if f == body.normalize(self.ctx, &fctx) => continue,
                        _ => return Ok(None),
                    }
                }
                if let Some(dom) = st.domains[b].take() {
                    st.domains[b] = self.narrow(dom, &x, e, &body)?;
                }
                st.imposed[b].push(&x, e, body);
            }
        }
        Ok(Some(st))
    }

    fn kan_cube_open(
        &mut self,
        cube: &Cube,
        psi: &[Name],
        phi: &Boundary,
        d: usize,
        base: CspState,
        f: &mut dyn FnMut(&mut Self, Cell, &[Side]) -> ControlFlow<Cell>,
    ) -> Result<ControlFlow<Cell>, Timeout> {
        let n = cube.sides.len();
        let free = |i: usize| base.assigned[i].is_none();
        if d == 1 && (0..n).any(|i| !free(i)) {
            return Ok(ControlFlow::Continue(()));
        }
        let mandatory: Vec<usize> = (0..n).filter(|&i| free(i) && base.domains[i].is_none()).collect();
        let optional: Vec<usize> = (0..n).filter(|&i| free(i) && base.domains[i].is_some()).collect();
        for size in 0..=optional.len() {
            if d == 1 && size + mandatory.len() > 0 {
                break;
            }
            if size > d - 1 && size > 0 {
                break;
            }
            for extra in combinations(&optional, size) {
                let mut open = mandatory.clone();
                open.extend(extra);
                open.sort();
                let open_sides: Vec<Side> = (0..n)
                    .filter(|i| open.contains(i) || !free(*i))
                    .map(|i| cube.sides[i].side.clone())
                    .collect();
                let mut st = base.clone();
                for &i in &open {
                    st.domains[i] = None;
                }
                let flow = self.csp(cube, st, &mut |this, assigned| {
                    let Some(cells) = this.close(cube, assigned, d)? else {
                        return Ok(ControlFlow::Continue(()));
                    };
                    let cell = cube.assemble(&cells).normalize(this.ctx, psi);
                    if check(this.ctx, psi, &cell, phi).is_err() {
                        debug_assert!(false, "assembled cube fails the checker");
                        return Ok(ControlFlow::Continue(()));
                    }
                    Ok(f(this, cell, &open_sides))
                })?;
                if flow.is_break() {
                    return Ok(flow);
                }
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn kan_solver(&mut self, psi: &[Name], phi: &Boundary, d: usize) -> Result<Option<Cell>, Timeout> {
        Ok(self.kan_solver_sides(psi, phi, d)?.map(|(c, _)| c))
    }

    fn kan_solver_sides(
        &mut self,
        psi: &[Name],
        phi: &Boundary,
        d: usize,
    ) -> Result<Option<(Cell, Vec<Side>)>, Timeout> {
        if d == 0 {
            return Ok(None);
        }
        self.tick()?;
        self.stats.depth_reached = self.stats.depth_reached.max(d);
        let key: Key = (psi.to_vec(), normalized_faces(self.ctx, psi, phi));
        match self.memo.get(&key) {
            Some(Memo::Solved(c)) => return Ok(Some((c.clone(), Vec::new()))),
            Some(Memo::Failed(e)) if *e >= d => return Ok(None),
            _ => {}
        }
        if let Some(c) = kan_fill(self.ctx, psi, phi) {
            let c = c.normalize(self.ctx, psi);
            self.memo.insert(key, Memo::Solved(c.clone()));
            return Ok(Some((c, Vec::new())));
        }
        let mut found = None;
        let flow = self.kan_cube(psi, phi, d, &mut |_, c, open| {
            found = Some(open.to_vec());
            ControlFlow::Break(c)
        })?;
        match flow {
            ControlFlow::Break(c) => {
                self.memo.insert(key, Memo::Solved(c.clone()));
                Ok(Some((c, found.unwrap_or_default())))
            }
            ControlFlow::Continue(()) => {
                self.memo.insert(key, Memo::Failed(d));
                Ok(None)
            }
        }
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Assignments of contorted cells to every side not in `open`, each
/// agreeing with the goal at `k = 1` and with its neighbours.
pub fn kan_csp(
    ctx: &CellCtx,
    psi: &[Name],
    phi: &Boundary,
    open: &[Side],
    theory: Theory,
    mut f: impl FnMut(&[(Side, Cell)]) -> ControlFlow<()>,
) -> Stats {
    let mut s = Search::new(ctx, theory, Deadline::none());
    let cube = Cube::new(ctx, psi, phi);
    let Ok(unary) = s.unary_domains(&cube) else {
        return s.stats;
    };
    let idx: Vec<usize> = (0..cube.sides.len())
        .filter(|&i| open.contains(&cube.sides[i].side))
        .collect();
    if (0..unary.len()).any(|i| unary[i].is_none() && !idx.contains(&i)) {
        return s.stats;
    }
    let st = s.initial_state(&cube, &unary, &idx);
    let _ = s.csp(&cube, st, &mut |_, assigned| {
        let sol: Vec<(Side, Cell)> = cube
            .sides
            .iter()
            .zip(assigned)
            .filter_map(|(si, c)| c.clone().map(|c| (si.side.clone(), c)))
            .collect();
        Ok(match f(&sol) {
            ControlFlow::Break(()) => ControlFlow::Break(Cell::point("")),
            ControlFlow::Continue(()) => ControlFlow::Continue(()),
        })
    });
    s.stats
}

/// The name of the fresh filling direction used for a goal over `psi`.
pub fn cube_direction(psi: &[Name]) -> Name {
    fresh_var(psi)
}

/// Fillers `fill^{0->1}` of open cubes for `phi` with at most `d` nested
/// levels, in search order.
pub fn kan_cube(
    ctx: &CellCtx,
    psi: &[Name],
    phi: &Boundary,
    d: usize,
    theory: Theory,
    mut f: impl FnMut(Cell) -> ControlFlow<()>,
) -> Stats {
    let mut s = Search::new(ctx, theory, Deadline::none());
    let _ = s.kan_cube(psi, phi, d, &mut |_, c, _| match f(c) {
        ControlFlow::Break(()) => ControlFlow::Break(Cell::point("")),
        ControlFlow::Continue(()) => ControlFlow::Continue(()),
    });
    s.stats
}

/// First Kan cell for `phi` found within depth `d`.
pub fn kan_solver(
    ctx: &CellCtx,
    psi: &[Name],
    phi: &Boundary,
    d: usize,
    theory: Theory,
    timeout: Option<Duration>,
) -> Result<Cell, SolveError> {
    let deadline = timeout.map_or(Deadline::none(), Deadline::after);
    let mut s = Search::new(ctx, theory, deadline);
    match s.kan_solver(psi, phi, d) {
        Ok(Some(c)) => Ok(c),
        Ok(None) => Err(SolveError::Unsolvable),
        Err(Timeout) => Err(SolveError::Timeout),
    }
}

/// Tries a contortion of every cell, then Kan cubes of increasing depth.
/// Every returned cell has passed [`check`] against `phi`.
pub fn solve(ctx: &CellCtx, psi: &[Name], phi: &Boundary, cfg: &SolverConfig) -> Result<Solution, SolveError> {
    let theory = cfg.theory.unwrap_or_else(|| default_theory(psi));
    let deadline = cfg.timeout.map_or(Deadline::none(), Deadline::after);
    let mut stats = Stats::default();
    let done = |cell: Cell, depth: usize, open_sides: Vec<Side>, stats: Stats| {
        assert!(
            check(ctx, psi, &cell, phi).is_ok(),
            "solver produced a cell that fails the checker: {cell}"
        );
        Ok(Solution {
            cell,
            depth,
            open_sides,
            stats,
        })
    };
    for f in &phi.faces {
        if f.atom == Atom::Const(f.end) {
            if check(ctx, psi, &f.body, phi).is_ok() {
                return done(f.body.clone(), 0, Vec::new(), stats);
            }
            return Err(SolveError::Unsolvable);
        }
    }
    let opts = ContortOptions {
        deadline,
        trace: false,
    };
    for d in ctx.decls() {
        let mut found = None;
        match contort_each(ctx, psi, phi, &d.name, theory, &opts, &mut stats, |args| {
            found = Some(args);
            ControlFlow::Break(())
        }) {
            Ok(()) => {}
            Err(ContortError::Timeout) => return Err(SolveError::Timeout),
            Err(e) => stats.warnings.push(format!("skipping {}: {e}", d.name)),
        }
        if let Some(args) = found {
            let cell = Cell::App {
                name: d.name.clone(),
                args,
            };
            return done(cell, 0, Vec::new(), stats);
        }
    }
    let mut s = Search::new(ctx, theory, deadline);
    s.stats = stats;
    for d in 1..=cfg.max_depth {
        match s.kan_solver_sides(psi, phi, d) {
            Ok(Some((c, open))) => {
                let stats = std::mem::take(&mut s.stats);
                return done(c, d, open, stats);
            }
            Ok(None) => {}
            Err(Timeout) => return Err(SolveError::Timeout),
        }
    }
    Err(SolveError::DepthExhausted(cfg.max_depth))
}

/// Every contortion of every cell solving `phi`, in search order.
pub fn all_contortions(
    ctx: &CellCtx,
    psi: &[Name],
    phi: &Boundary,
    theory: Theory,
    timeout: Option<Duration>,
    mut f: impl FnMut(Cell) -> ControlFlow<()>,
) -> Result<Stats, SolveError> {
    let opts = ContortOptions {
        deadline: timeout.map_or(Deadline::none(), Deadline::after),
        trace: false,
    };
    let mut stats = Stats::default();
    let mut stop = false;
    for d in ctx.decls() {
        if stop {
            break;
        }
        let r = contort_each(ctx, psi, phi, &d.name, theory, &opts, &mut stats, |args| {
            let flow = f(Cell::App {
                name: d.name.clone(),
                args,
            });
            stop = flow.is_break();
            flow
        });
        match r {
            Ok(()) => {}
            Err(ContortError::Timeout) => return Err(SolveError::Timeout),
            Err(e) => stats.warnings.push(format!("skipping {}: {e}", d.name)),
        }
    }
    Ok(stats)
}
