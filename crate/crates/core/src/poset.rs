//! Monotone maps between powers of the 2-chain, and potential poset maps.
//!
//! A source element of `2^m` is a bit vector stored in a `u32`; coordinate
//! `c` is bit `c`. Target elements of `2^n` are stored the same way and sets
//! of target elements are `u64` bitsets, so `n <= 6`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::dim::{DimError, Lit, Name, Nf, Theory};

pub const MAX_TARGET_WIDTH: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no poset map is compatible with the restriction")]
pub struct Unsolvable;

/// How contortions are read as poset maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Dedekind,
    /// Source coordinates `2i` and `2i+1` stand for `x_i` and `~x_i`.
    DeMorgan,
}

impl Mode {
    pub fn for_theory(t: Theory) -> Option<Mode> {
        match t {
            Theory::Dedekind => Some(Mode::Dedekind),
            Theory::DeMorgan => Some(Mode::DeMorgan),
            _ => None,
        }
    }

    pub fn width(self, vars: usize) -> usize {
        match self {
            Mode::Dedekind => vars,
            Mode::DeMorgan => 2 * vars,
        }
    }

    /// Source coordinates fixed by the constraint `x_var = e`.
    pub fn face(self, var: usize, e: bool) -> Vec<(usize, bool)> {
        match self {
            Mode::Dedekind => vec![(var, e)],
            Mode::DeMorgan => vec![(2 * var, e), (2 * var + 1, !e)],
        }
    }
}

pub fn bits(x: u32, width: usize) -> String {
    (0..width)
        .map(|c| if x >> c & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_bits(s: &str) -> Option<u32> {
    let mut x = 0u32;
    for (c, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => x |= 1 << c,
            _ => return None,
        }
    }
    Some(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PosetMap {
    pub src: usize,
    pub tgt: usize,
    pub values: Vec<u32>,
}

impl PosetMap {
    pub fn new(src: usize, tgt: usize, values: Vec<u32>) -> PosetMap {
        assert_eq!(values.len(), 1 << src);
        PosetMap { src, tgt, values }
    }

    pub fn get(&self, x: u32) -> u32 {
        self.values[x as usize]
    }

    pub fn is_monotone(&self) -> bool {
        (0..self.values.len()).all(|x| {
            (0..self.src).all(|b| {
                let y = x | 1 << b;
                y == x || self.values[x] & !self.values[y] == 0
            })
        })
    }
}

const LOW: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

fn full_set(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

fn up_closure(mut s: u64, n: usize) -> u64 {
    for (b, low) in LOW.iter().enumerate().take(n) {
        s |= (s & low) << (1 << b);
    }
    s
}

fn down_closure(mut s: u64, n: usize) -> u64 {
    for (b, low) in LOW.iter().enumerate().take(n) {
        s |= (s & !low) >> (1 << b);
    }
    s
}

/// Source elements with the given coordinates fixed, listed in the order
/// of the compressed index over the free coordinates.
pub fn face_points(m: usize, fixed: &[(usize, bool)]) -> Vec<u32> {
    let mut base = 0u32;
    let mut fixed_mask = 0u32;
    for &(c, v) in fixed {
        fixed_mask |= 1 << c;
        if v {
            base |= 1 << c;
        }
    }
    let free: Vec<usize> = (0..m).filter(|c| fixed_mask >> c & 1 == 0).collect();
    (0u32..(1 << free.len()))
        .map(|s| {
            let mut x = base;
            for (k, &c) in free.iter().enumerate() {
                if s >> k & 1 == 1 {
                    x |= 1 << c;
                }
            }
            x
        })
        .collect()
}

/// The points of `2^(2m)` that come from an assignment of the `m` original
/// variables.
pub fn consistent_points(m: usize) -> Vec<u32> {
    (0u32..(1 << m))
        .map(|y| {
            (0..m)
                .map(|i| if y >> i & 1 == 1 { 1u32 << (2 * i) } else { 1u32 << (2 * i + 1) })
                .fold(0, |a, b| a | b)
        })
        .collect()
}

fn clause_mask(c: &[Lit], vars: &[Name], mode: Mode) -> Result<u32, DimError> {
    let mut mask = 0u32;
    for l in c {
        let i = vars
            .iter()
            .position(|v| *v == l.var)
            .ok_or_else(|| DimError::UnboundVariable(l.var.clone()))?;
        mask |= match (mode, l.neg) {
            (Mode::Dedekind, false) => 1 << i,
            (Mode::Dedekind, true) => {
                return Err(DimError::TheoryViolation {
                    op: "~",
                    theory: Theory::Dedekind,
                })
            }
            (Mode::DeMorgan, neg) => 1 << (2 * i + neg as usize),
        };
    }
    Ok(mask)
}

/// The truth table of a contortion, one target coordinate per term.
pub fn formula_to_pm(terms: &[Nf], vars: &[Name], mode: Mode) -> Result<PosetMap, DimError> {
    let m = mode.width(vars.len());
    let masks: Vec<Vec<u32>> = terms
        .iter()
        .map(|t| t.clauses().iter().map(|c| clause_mask(c, vars, mode)).collect())
        .collect::<Result<_, _>>()?;
    let values = (0u32..(1 << m))
        .map(|x| {
            masks
                .iter()
                .enumerate()
                .filter(|(_, cs)| cs.iter().any(|&c| c & x == c))
                .map(|(k, _)| 1u32 << k)
                .fold(0, |a, b| a | b)
        })
        .collect();
    Ok(PosetMap::new(m, terms.len(), values))
}

/// The contortion whose truth table is `sigma`.
pub fn pm_to_formula(sigma: &PosetMap, vars: &[Name], mode: Mode) -> Vec<Nf> {
    let lit = |c: usize| match mode {
        Mode::Dedekind => Lit {
            var: vars[c].clone(),
            neg: false,
        },
        Mode::DeMorgan => Lit {
            var: vars[c / 2].clone(),
            neg: c % 2 == 1,
        },
    };
    (0..sigma.tgt)
        .map(|k| {
            let on = |x: usize| sigma.values[x] >> k & 1 == 1;
            let clauses = (0..sigma.values.len())
                .filter(|&x| on(x) && (0..sigma.src).all(|b| x >> b & 1 == 0 || !on(x & !(1 << b))))
                .map(|x| (0..sigma.src).filter(|b| x >> b & 1 == 1).map(lit).collect())
                .collect();
            Nf::from_clauses(clauses)
        })
        .collect()
}

/// A potential poset map `2^m -> P(2^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ppm {
    src: usize,
    tgt: usize,
    vals: Vec<u64>,
}

impl Ppm {
    pub fn total(m: usize, n: usize) -> Ppm {
        assert!(n <= MAX_TARGET_WIDTH, "target width {n} exceeds {MAX_TARGET_WIDTH}");
        assert!(m <= 20, "source width {m} is too large");
        Ppm {
            src: m,
            tgt: n,
            vals: vec![full_set(n); 1 << m],
        }
    }

    /// The pointwise union of some poset maps.
    pub fn from_maps<'a>(m: usize, n: usize, maps: impl IntoIterator<Item = &'a PosetMap>) -> Option<Ppm> {
        let mut vals = vec![0u64; 1 << m];
        for s in maps {
            for (x, &v) in s.values.iter().enumerate() {
                vals[x] |= 1 << v;
            }
        }
        if vals.iter().any(|&v| v == 0) {
            return None;
        }
        Some(Ppm { src: m, tgt: n, vals })
    }

    /// Builds a PPM from explicit value sets, propagating to validity.
    pub fn from_sets(m: usize, n: usize, sets: Vec<u64>) -> Result<Ppm, Unsolvable> {
        assert_eq!(sets.len(), 1 << m);
        let mut p = Ppm::total(m, n);
        let changes: Vec<(u32, u64)> = sets.into_iter().enumerate().map(|(x, s)| (x as u32, s)).collect();
        p.update(&changes)?;
        Ok(p)
    }

    pub fn src_width(&self) -> usize {
        self.src
    }

    pub fn tgt_width(&self) -> usize {
        self.tgt
    }

    pub fn get(&self, x: u32) -> u64 {
        self.vals[x as usize]
    }

    pub fn values(&self, x: u32) -> Vec<u32> {
        let s = self.vals[x as usize];
        (0..64).filter(|v| s >> v & 1 == 1).collect()
    }

    pub fn contains(&self, sigma: &PosetMap) -> bool {
        sigma.src == self.src
            && sigma.values.iter().enumerate().all(|(x, &v)| self.vals[x] >> v & 1 == 1)
    }

    /// Checks both directed-completeness conditions on every comparable pair.
    pub fn is_valid(&self) -> bool {
        let n = self.tgt;
        let size = self.vals.len();
        (0..size).all(|x| self.vals[x] != 0)
            && (0..size).all(|x| {
                (0..size).filter(|&y| x & y == x).all(|y| {
                    self.vals[y] & !up_closure(self.vals[x], n) == 0
                        && self.vals[x] & !down_closure(self.vals[y], n) == 0
                })
            })
    }

    /// Sum of value-set sizes; a cheap measure of how constrained the PPM is.
    pub fn weight(&self) -> u32 {
        self.vals.iter().map(|v| v.count_ones()).sum()
    }

    pub fn is_singleton(&self) -> bool {
        self.vals.iter().all(|v| v.count_ones() == 1)
    }

    /// The sub-PPM on the listed points, which must form a face of `2^m`
    /// as produced by [`face_points`].
    pub fn restrict(&self, points: &[u32]) -> Ppm {
        let w = points.len().trailing_zeros() as usize;
        assert_eq!(1 << w, points.len());
        Ppm {
            src: w,
            tgt: self.tgt,
            vals: points.iter().map(|&x| self.vals[x as usize]).collect(),
        }
    }

    /// Intersects the value sets at the given points and propagates along
    /// covering pairs until both conditions hold again.
    pub fn update(&mut self, changes: &[(u32, u64)]) -> Result<(), Unsolvable> {
        let mut work: Vec<u32> = Vec::new();
        let mut queued = vec![false; self.vals.len()];
        for &(x, s) in changes {
            let old = self.vals[x as usize];
            let new = old & s;
            if new == 0 {
                return Err(Unsolvable);
            }
            if new != old {
                self.vals[x as usize] = new;
                if !queued[x as usize] {
                    queued[x as usize] = true;
                    work.push(x);
                }
            }
        }
        let n = self.tgt;
        while let Some(x) = work.pop() {
            queued[x as usize] = false;
            let here = self.vals[x as usize];
            let up = up_closure(here, n);
            let down = down_closure(here, n);
            for b in 0..self.src {
                let y = x ^ (1 << b);
                let bound = if x >> b & 1 == 0 { up } else { down };
                let old = self.vals[y as usize];
                let new = old & bound;
                if new != old {
                    if new == 0 {
                        return Err(Unsolvable);
                    }
                    self.vals[y as usize] = new;
                    if !queued[y as usize] {
                        queued[y as usize] = true;
                        work.push(y);
                    }
                }
            }
        }
        Ok(())
    }

    /// `Σ(x) := vs` followed by propagation.
    pub fn update_at(&self, x: u32, vs: u64) -> Result<Ppm, Unsolvable> {
        let mut p = self.clone();
        p.update(&[(x, vs)])?;
        Ok(p)
    }

    pub fn unfold(&self) -> Unfold<'_> {
        Unfold {
            ppm: self,
            stack: Vec::new(),
            cur: vec![0; self.vals.len()],
            started: false,
        }
    }

    pub fn count(&self) -> usize {
        self.unfold().count()
    }

    /// One line per source element: `bits -> {bits,...}`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for x in 0..self.vals.len() as u32 {
            let vs: Vec<String> = self.values(x).into_iter().map(|v| bits(v, self.tgt)).collect();
            let _ = writeln!(out, "{} -> {{{}}}", bits(x, self.src), vs.join(","));
        }
        out
    }
}

/// Lazy enumeration of the poset maps contained in a PPM, assigning source
/// elements in numeric order.
pub struct Unfold<'a> {
    ppm: &'a Ppm,
    stack: Vec<u64>,
    cur: Vec<u32>,
    started: bool,
}

impl Unfold<'_> {
    fn candidates(&self, x: usize) -> u64 {
        let mut lb = 0u32;
        for b in 0..self.ppm.src {
            if x >> b & 1 == 1 {
                lb |= self.cur[x ^ (1 << b)];
            }
        }
        self.ppm.vals[x] & up_closure(1u64 << lb, self.ppm.tgt)
    }
}

impl Iterator for Unfold<'_> {
    type Item = PosetMap;

    fn next(&mut self) -> Option<PosetMap> {
        let size = self.cur.len();
        if !self.started {
            self.started = true;
            let c = self.candidates(0);
            self.stack.push(c);
        }
        while let Some(&c) = self.stack.last() {
            let level = self.stack.len() - 1;
            if c == 0 {
                self.stack.pop();
                continue;
            }
            *self.stack.last_mut().unwrap() = c & (c - 1);
            self.cur[level] = c.trailing_zeros();
            if level + 1 == size {
                return Some(PosetMap::new(self.ppm.src, self.ppm.tgt, self.cur.clone()));
            }
            let next = self.candidates(level + 1);
            self.stack.push(next);
        }
        None
    }
}
