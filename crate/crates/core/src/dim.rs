//! Dimension terms over the interval and their normal forms.
//!
//! Terms are elements of the free De Morgan algebra on a list of dimension
//! variables. Equality is decided through a minimal antichain DNF over the
//! doubled alphabet `{x, ~x}`, which coincides with the free distributive
//! lattice normal form for negation-free terms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

pub fn names(xs: &[&str]) -> Vec<Name> {
    xs.iter().map(|x| name(x)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    I0,
    I1,
}

impl Endpoint {
    pub const BOTH: [Endpoint; 2] = [Endpoint::I0, Endpoint::I1];

    pub fn neg(self) -> Endpoint {
        match self {
            Endpoint::I0 => Endpoint::I1,
            Endpoint::I1 => Endpoint::I0,
        }
    }

    pub fn from_bool(b: bool) -> Endpoint {
        if b {
            Endpoint::I1
        } else {
            Endpoint::I0
        }
    }

    pub fn is_one(self) -> bool {
        self == Endpoint::I1
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_one() { "1" } else { "0" })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    Cartesian,
    Disjunctive,
    Dedekind,
    DeMorgan,
}

impl Theory {
    pub const ALL: [Theory; 4] = [
        Theory::Cartesian,
        Theory::Disjunctive,
        Theory::Dedekind,
        Theory::DeMorgan,
    ];
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::Cartesian => "cartesian",
            Theory::Disjunctive => "disjunctive",
            Theory::Dedekind => "dedekind",
            Theory::DeMorgan => "demorgan",
        })
    }
}

impl FromStr for Theory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_', ' '], "").as_str() {
            "cartesian" => Ok(Theory::Cartesian),
            "disjunctive" => Ok(Theory::Disjunctive),
            "dedekind" => Ok(Theory::Dedekind),
            "demorgan" => Ok(Theory::DeMorgan),
            _ => Err(format!("unknown contortion theory `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimError {
    #[error("`{op}` is not available in the {theory} theory")]
    TheoryViolation { op: &'static str, theory: Theory },
    #[error("unbound dimension variable `{0}`")]
    UnboundVariable(Name),
}

/// A dimension context; `Bot` is the inconsistent context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DimCtx {
    Bot,
    Vars(Vec<Name>),
}

impl DimCtx {
    pub fn vars(xs: &[&str]) -> DimCtx {
        DimCtx::Vars(names(xs))
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, DimCtx::Bot)
    }

    pub fn extend(&self, x: Name) -> DimCtx {
        match self {
            DimCtx::Bot => DimCtx::Bot,
            DimCtx::Vars(v) => {
                let mut v = v.clone();
                v.push(x);
                DimCtx::Vars(v)
            }
        }
    }

    pub fn contains(&self, x: &str) -> bool {
        match self {
            DimCtx::Bot => false,
            DimCtx::Vars(v) => v.iter().any(|y| &**y == x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DimTerm {
    Const(Endpoint),
    Var(Name),
    Neg(Box<DimTerm>),
    Join(Box<DimTerm>, Box<DimTerm>),
    Meet(Box<DimTerm>, Box<DimTerm>),
}

impl DimTerm {
    pub fn var(x: &str) -> DimTerm {
        DimTerm::Var(name(x))
    }

    pub fn zero() -> DimTerm {
        DimTerm::Const(Endpoint::I0)
    }

    pub fn one() -> DimTerm {
        DimTerm::Const(Endpoint::I1)
    }

    pub fn neg(t: DimTerm) -> DimTerm {
        DimTerm::Neg(Box::new(t))
    }

    pub fn join(a: DimTerm, b: DimTerm) -> DimTerm {
        DimTerm::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: DimTerm, b: DimTerm) -> DimTerm {
        DimTerm::Meet(Box::new(a), Box::new(b))
    }

    pub fn free_vars(&self, out: &mut Vec<Name>) {
        match self {
            DimTerm::Const(_) => {}
            DimTerm::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            DimTerm::Neg(t) => t.free_vars(out),
            DimTerm::Join(a, b) | DimTerm::Meet(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            DimTerm::Join(..) => 0,
            DimTerm::Meet(..) => 1,
            _ => 2,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.prec() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            DimTerm::Const(e) => write!(f, "{e}")?,
            DimTerm::Var(x) => f.write_str(x)?,
            DimTerm::Neg(t) => {
                f.write_str("~")?;
                t.fmt_prec(f, 2)?;
            }
            DimTerm::Join(a, b) => {
                a.fmt_prec(f, 0)?;
                f.write_str(" \\/ ")?;
                b.fmt_prec(f, 1)?;
            }
            DimTerm::Meet(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" /\\ ")?;
                b.fmt_prec(f, 2)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for DimTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl FromStr for DimTerm {
    type Err = crate::syntax::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::syntax::parse_dim_term(s)
    }
}

/// A literal of the doubled alphabet: `x` or `~x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: Name,
    pub neg: bool,
}

/// Minimal antichain DNF. The empty antichain is `0`; the antichain holding
/// only the empty clause is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Nf {
    clauses: Vec<Vec<Lit>>,
}

pub type MonotoneNF = Nf;

fn is_subset(a: &[Lit], b: &[Lit]) -> bool {
    // both sorted
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

impl Nf {
    pub fn zero() -> Nf {
        Nf { clauses: vec![] }
    }

    pub fn one() -> Nf {
        Nf {
            clauses: vec![vec![]],
        }
    }

    pub fn constant(e: Endpoint) -> Nf {
        if e.is_one() {
            Nf::one()
        } else {
            Nf::zero()
        }
    }

    pub fn var(x: &str) -> Nf {
        Nf::lit(name(x), false)
    }

    pub fn of(x: &Name) -> Nf {
        Nf::lit(x.clone(), false)
    }

    pub fn lit(var: Name, neg: bool) -> Nf {
        Nf {
            clauses: vec![vec![Lit { var, neg }]],
        }
    }

    pub fn from_clauses(mut clauses: Vec<Vec<Lit>>) -> Nf {
        for c in clauses.iter_mut() {
            c.sort();
            c.dedup();
        }
        clauses.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        clauses.dedup();
        let mut kept: Vec<Vec<Lit>> = Vec::with_capacity(clauses.len());
        for c in clauses {
            if !kept.iter().any(|k| is_subset(k, &c)) {
                kept.push(c);
            }
        }
        kept.sort();
        Nf { clauses: kept }
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn as_const(&self) -> Option<Endpoint> {
        if self.clauses.is_empty() {
            Some(Endpoint::I0)
        } else if self.clauses.len() == 1 && self.clauses[0].is_empty() {
            Some(Endpoint::I1)
        } else {
            None
        }
    }

    pub fn as_var(&self) -> Option<&Name> {
        match self.clauses.as_slice() {
            [c] if c.len() == 1 && !c[0].neg => Some(&c[0].var),
            _ => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        self.as_const().is_some() || self.as_var().is_some()
    }

    pub fn join(&self, other: &Nf) -> Nf {
        let mut cs = self.clauses.clone();
        cs.extend(other.clauses.iter().cloned());
        Nf::from_clauses(cs)
    }

    pub fn meet(&self, other: &Nf) -> Nf {
        let mut cs = Vec::with_capacity(self.clauses.len() * other.clauses.len());
        for a in &self.clauses {
            for b in &other.clauses {
                let mut c = a.clone();
                c.extend(b.iter().cloned());
                cs.push(c);
            }
        }
        Nf::from_clauses(cs)
    }

    pub fn neg(&self) -> Nf {
        let mut acc = Nf::one();
        for c in &self.clauses {
            let alt = Nf::from_clauses(
                c.iter()
                    .map(|l| {
                        vec![Lit {
                            var: l.var.clone(),
                            neg: !l.neg,
                        }]
                    })
                    .collect(),
            );
            acc = acc.meet(&alt);
        }
        acc
    }

    pub fn subst(&self, s: &Subst) -> Nf {
        if s.is_empty() {
            return self.clone();
        }
        let mut acc = Nf::zero();
        for c in &self.clauses {
            let mut m = Nf::one();
            for l in c {
                let t = match s.get(&l.var) {
                    Some(t) if l.neg => t.neg(),
                    Some(t) => t.clone(),
                    None => Nf::lit(l.var.clone(), l.neg),
                };
                m = m.meet(&t);
                if m.clauses.is_empty() {
                    break;
                }
            }
            acc = acc.join(&m);
        }
        acc
    }

    /// Evaluates with `~` as endpoint flip.
    pub fn eval(&self, asg: &dyn Fn(&str) -> Option<Endpoint>) -> Result<Endpoint, DimError> {
        let mut any = false;
        for c in &self.clauses {
            let mut all = true;
            for l in c {
                let v = asg(&l.var).ok_or_else(|| DimError::UnboundVariable(l.var.clone()))?;
                if v.is_one() == l.neg {
                    all = false;
                }
            }
            any |= all;
        }
        Ok(Endpoint::from_bool(any))
    }

    pub fn vars(&self) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        for c in &self.clauses {
            for l in c {
                if !out.contains(&l.var) {
                    out.push(l.var.clone());
                }
            }
        }
        out
    }

    pub fn mentions(&self, x: &str) -> bool {
        self.clauses.iter().flatten().any(|l| &*l.var == x)
    }

    /// Least theory containing a term with this normal form.
    pub fn theory(&self) -> Theory {
        if self.clauses.iter().flatten().any(|l| l.neg) {
            Theory::DeMorgan
        } else if self.clauses.iter().any(|c| c.len() > 1) {
            Theory::Dedekind
        } else if self.clauses.len() > 1 {
            Theory::Disjunctive
        } else {
            Theory::Cartesian
        }
    }

    pub fn to_term(&self) -> DimTerm {
        if let Some(e) = self.as_const() {
            return DimTerm::Const(e);
        }
        let clause = |c: &[Lit]| {
            let mut it = c.iter().map(|l| {
                let v = DimTerm::Var(l.var.clone());
                if l.neg {
                    DimTerm::neg(v)
                } else {
                    v
                }
            });
            let first = it.next().unwrap_or(DimTerm::one());
            it.fold(first, DimTerm::meet)
        };
        let mut it = self.clauses.iter().map(|c| clause(c));
        let first = it.next().unwrap();
        it.fold(first, DimTerm::join)
    }
}

impl fmt::Display for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

/// Simultaneous substitution of normal forms for variables. Unmapped
/// variables are left alone.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst {
    pairs: Vec<(Name, Nf)>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn single(x: Name, t: Nf) -> Subst {
        Subst {
            pairs: vec![(x, t)],
        }
    }

    pub fn from_pairs(pairs: Vec<(Name, Nf)>) -> Subst {
        Subst { pairs }
    }

    pub fn zip(vars: &[Name], terms: &[Nf]) -> Subst {
        Subst {
            pairs: vars.iter().cloned().zip(terms.iter().cloned()).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, x: &str) -> Option<&Nf> {
        self.pairs.iter().find(|(y, _)| &**y == x).map(|(_, t)| t)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.get(x).is_some()
    }

    pub fn insert(&mut self, x: Name, t: Nf) {
        if let Some(slot) = self.pairs.iter_mut().find(|(y, _)| *y == x) {
            slot.1 = t;
        } else {
            self.pairs.push((x, t));
        }
    }

    pub fn remove(&mut self, x: &str) {
        self.pairs.retain(|(y, _)| &**y != x);
    }

    pub fn pairs(&self) -> &[(Name, Nf)] {
        &self.pairs
    }

    /// `self` followed by `next`: every image is rewritten by `next`.
    pub fn then(&self, next: &Subst) -> Subst {
        Subst {
            pairs: self
                .pairs
                .iter()
                .map(|(x, t)| (x.clone(), t.subst(next)))
                .collect(),
        }
    }
}

/// A contortion from `target` into `source`: one term over `target` per
/// variable of `source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Contortion {
    pub source: DimCtx,
    pub target: DimCtx,
    pub terms: Vec<Nf>,
}

impl Contortion {
    pub fn new(source: Vec<Name>, target: Vec<Name>, terms: Vec<Nf>) -> Contortion {
        assert_eq!(source.len(), terms.len(), "one term per source variable");
        Contortion {
            source: DimCtx::Vars(source),
            target: DimCtx::Vars(target),
            terms,
        }
    }

    pub fn bot() -> Contortion {
        Contortion {
            source: DimCtx::Bot,
            target: DimCtx::Bot,
            terms: vec![],
        }
    }

    pub fn identity(vars: Vec<Name>) -> Contortion {
        let terms = vars.iter().map(Nf::of).collect();
        Contortion::new(vars.clone(), vars, terms)
    }

    pub fn is_substitution(&self) -> bool {
        self.terms.iter().all(Nf::is_atomic)
    }

    pub fn as_subst(&self) -> Subst {
        match &self.source {
            DimCtx::Bot => Subst::new(),
            DimCtx::Vars(v) => Subst::zip(v, &self.terms),
        }
    }

    /// `self` then `next`, where `next` contorts `self.target` further.
    pub fn then(&self, next: &Contortion) -> Contortion {
        if self.target.is_bot() || next.target.is_bot() {
            return Contortion::bot();
        }
        let s = next.as_subst();
        Contortion {
            source: self.source.clone(),
            target: next.target.clone(),
            terms: self.terms.iter().map(|t| t.subst(&s)).collect(),
        }
    }
}

fn nf_of(t: &DimTerm) -> Nf {
    match t {
        DimTerm::Const(e) => Nf::constant(*e),
        DimTerm::Var(x) => Nf::of(x),
        DimTerm::Neg(a) => nf_of(a).neg(),
        DimTerm::Join(a, b) => nf_of(a).join(&nf_of(b)),
        DimTerm::Meet(a, b) => nf_of(a).meet(&nf_of(b)),
    }
}

/// Least theory whose grammar produces `t` as written.
pub fn classify(t: &DimTerm) -> Theory {
    match t {
        DimTerm::Const(_) | DimTerm::Var(_) => Theory::Cartesian,
        DimTerm::Neg(_) => Theory::DeMorgan,
        DimTerm::Join(a, b) => classify(a).max(classify(b)).max(Theory::Disjunctive),
        DimTerm::Meet(a, b) => classify(a).max(classify(b)).max(Theory::Dedekind),
    }
}

fn first_op_above(t: &DimTerm, theory: Theory) -> Option<&'static str> {
    let own = match t {
        DimTerm::Const(_) | DimTerm::Var(_) => None,
        DimTerm::Neg(_) => Some(("~", Theory::DeMorgan)),
        DimTerm::Join(..) => Some(("\\/", Theory::Disjunctive)),
        DimTerm::Meet(..) => Some(("/\\", Theory::Dedekind)),
    };
    if let Some((op, th)) = own {
        if th > theory {
            return Some(op);
        }
    }
    match t {
        DimTerm::Neg(a) => first_op_above(a, theory),
        DimTerm::Join(a, b) | DimTerm::Meet(a, b) => {
            first_op_above(a, theory).or_else(|| first_op_above(b, theory))
        }
        _ => None,
    }
}

pub fn normalize_dim(t: &DimTerm, theory: Theory) -> Result<Nf, DimError> {
    if let Some(op) = first_op_above(t, theory) {
        return Err(DimError::TheoryViolation { op, theory });
    }
    Ok(nf_of(t))
}

/// Normal form in the free De Morgan algebra, without a theory check.
pub fn nf(t: &DimTerm) -> Nf {
    nf_of(t)
}

pub fn eval_dim(t: &DimTerm, asg: &BTreeMap<Name, Endpoint>) -> Result<Endpoint, DimError> {
    match t {
        DimTerm::Const(e) => Ok(*e),
        DimTerm::Var(x) => asg
            .get(x)
            .copied()
            .ok_or_else(|| DimError::UnboundVariable(x.clone())),
        DimTerm::Neg(a) => Ok(eval_dim(a, asg)?.neg()),
        DimTerm::Join(a, b) => Ok(eval_dim(a, asg)?.max(eval_dim(b, asg)?)),
        DimTerm::Meet(a, b) => Ok(eval_dim(a, asg)?.min(eval_dim(b, asg)?)),
    }
}

pub fn subst_dim(t: &DimTerm, psi: &Contortion) -> Result<DimTerm, DimError> {
    let src = match &psi.source {
        DimCtx::Bot => return Ok(DimTerm::zero()),
        DimCtx::Vars(v) => v,
    };
    Ok(match t {
        DimTerm::Const(e) => DimTerm::Const(*e),
        DimTerm::Var(x) => match src.iter().position(|y| y == x) {
            Some(i) => psi.terms[i].to_term(),
            None => return Err(DimError::UnboundVariable(x.clone())),
        },
        DimTerm::Neg(a) => DimTerm::neg(subst_dim(a, psi)?),
        DimTerm::Join(a, b) => DimTerm::join(subst_dim(a, psi)?, subst_dim(b, psi)?),
        DimTerm::Meet(a, b) => DimTerm::meet(subst_dim(a, psi)?, subst_dim(b, psi)?),
    })
}

pub fn dim_equal(t1: &DimTerm, t2: &DimTerm, ctx: &DimCtx) -> bool {
    ctx.is_bot() || nf_of(t1) == nf_of(t2)
}

/// Every normal form over `vars` expressible in `theory`, constant `0`
/// first. Dedekind forms are antichains of variable sets; De Morgan forms
/// are antichains over the doubled alphabet.
pub fn enumerate_nf(vars: &[Name], theory: Theory) -> Vec<Nf> {
    match theory {
        Theory::Cartesian => {
            let mut out = vec![Nf::zero(), Nf::one()];
            out.extend(vars.iter().map(Nf::of));
            out
        }
        Theory::Disjunctive => {
            let mut out = vec![Nf::zero(), Nf::one()];
            for s in 1u32..(1 << vars.len()) {
                let cs = (0..vars.len())
                    .filter(|b| s >> b & 1 == 1)
                    .map(|b| vec![Lit { var: vars[b].clone(), neg: false }])
                    .collect();
                out.push(Nf::from_clauses(cs));
            }
            out
        }
        Theory::Dedekind => {
            let lits: Vec<Lit> = vars
                .iter()
                .map(|v| Lit { var: v.clone(), neg: false })
                .collect();
            antichains(&lits)
        }
        Theory::DeMorgan => {
            let lits: Vec<Lit> = vars
                .iter()
                .flat_map(|v| {
                    [
                        Lit { var: v.clone(), neg: false },
                        Lit { var: v.clone(), neg: true },
                    ]
                })
                .collect();
            antichains(&lits)
        }
    }
}

fn antichains(lits: &[Lit]) -> Vec<Nf> {
    assert!(lits.len() <= 12, "antichain enumeration over {} literals", lits.len());
    let n = 1u32 << lits.len();
    let mut out = Vec::new();
    let mut chosen: Vec<u32> = Vec::new();
    fn go(idx: u32, n: u32, chosen: &mut Vec<u32>, lits: &[Lit], out: &mut Vec<Nf>) {
        if idx == n {
            let cs = chosen
                .iter()
                .map(|&s| {
                    (0..lits.len())
                        .filter(|b| s >> b & 1 == 1)
                        .map(|b| lits[b].clone())
                        .collect()
                })
                .collect();
            out.push(Nf::from_clauses(cs));
            return;
        }
        go(idx + 1, n, chosen, lits, out);
        if chosen.iter().all(|&c| c & idx != c && c & idx != idx) {
            chosen.push(idx);
            go(idx + 1, n, chosen, lits, out);
            chosen.pop();
        }
    }
    go(0, n, &mut chosen, lits, &mut out);
    out
}

/// Number of monotone Boolean functions, for the sizes this crate can
/// enumerate.
pub fn dedekind_number(n: usize) -> Option<u64> {
    const D: [u64; 7] = [2, 3, 6, 20, 168, 7581, 7_828_354];
    D.get(n).copied()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> DimTerm {
        s.parse().unwrap()
    }

    #[test]
    fn normal_forms() {
        let jk = normalize_dim(&t("j \\/ k"), Theory::Disjunctive).unwrap();
        assert_eq!(jk.clauses().len(), 2);
        assert_eq!(nf(&t("~~x")), Nf::var("x"));
        assert_eq!(nf(&t("x /\\ (y \\/ x)")), Nf::var("x"));
        let lem = nf(&t("j \\/ ~j"));
        assert_ne!(lem, Nf::one());
        assert_eq!(lem.clauses().len(), 2);
    }

    #[test]
    fn theory_checks() {
        assert!(matches!(
            normalize_dim(&t("~i"), Theory::Dedekind),
            Err(DimError::TheoryViolation { op: "~", .. })
        ));
        assert!(normalize_dim(&t("i /\\ j"), Theory::Disjunctive).is_err());
        assert_eq!(classify(&t("i")), Theory::Cartesian);
        assert_eq!(classify(&t("i \\/ j")), Theory::Disjunctive);
        assert_eq!(classify(&t("~i")), Theory::DeMorgan);
    }

    #[test]
    fn evaluation() {
        let asg: BTreeMap<Name, Endpoint> =
            [(name("j"), Endpoint::I1), (name("k"), Endpoint::I0)].into_iter().collect();
        assert_eq!(eval_dim(&t("j \\/ k"), &asg), Ok(Endpoint::I1));
        assert_eq!(eval_dim(&t("j /\\ (k \\/ ~j)"), &asg), Ok(Endpoint::I0));
        let z: BTreeMap<Name, Endpoint> = [(name("j"), Endpoint::I0)].into_iter().collect();
        assert_eq!(eval_dim(&t("~j"), &z), Ok(Endpoint::I1));
        assert!(eval_dim(&t("q"), &z).is_err());
    }

    #[test]
    fn substitution() {
        let psi = Contortion::new(names(&["i", "j"]), names(&["k"]), vec![Nf::var("k"), Nf::var("k")]);
        assert_eq!(nf(&subst_dim(&t("i /\\ j"), &psi).unwrap()), Nf::var("k"));
        let psi = Contortion::new(names(&["j", "k"]), names(&["k"]), vec![Nf::zero(), Nf::var("k")]);
        assert_eq!(nf(&subst_dim(&t("j \\/ k"), &psi).unwrap()), Nf::var("k"));
        let psi = Contortion::new(names(&["j"]), names(&["i", "l"]), vec![nf(&t("i /\\ l"))]);
        assert_eq!(nf(&subst_dim(&t("~j"), &psi).unwrap()), nf(&t("~i \\/ ~l")));
    }

    #[test]
    fn equality() {
        let ctx = DimCtx::vars(&["r", "s"]);
        assert!(dim_equal(&t("r \\/ s"), &t("s \\/ r"), &ctx));
        assert!(!dim_equal(&t("j \\/ ~j"), &t("1"), &DimCtx::vars(&["j"])));
        assert!(dim_equal(&t("j \\/ ~j"), &t("1"), &DimCtx::Bot));
        assert!(dim_equal(&t("x /\\ (y \\/ z)"), &t("x /\\ y \\/ x /\\ z"), &ctx));
    }

    #[test]
    fn printing_round_trips() {
        for s in ["0", "1", "i", "~i", "i /\\ j \\/ k", "(i \\/ j) /\\ ~(k \\/ l)"] {
            let a = t(s);
            assert_eq!(t(&a.to_string()), a);
        }
    }
}
