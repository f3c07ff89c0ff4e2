//! Finitely presented groups as cell contexts: words become loops on a
//! point, relations become squares, and derivations of word equalities
//! become 2-cells built from Kan fillers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::cube::{Atom, Boundary, Cell, CellCtx, CellDecl, CubeError, Face};
use crate::dim::{name, Endpoint, Name, Nf, Subst, Theory};
use crate::syntax::{print_cube, CubeFile, Goal, GoalOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("presentation, line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("presentation is not convenient: {0}")]
    NotConvenient(String),
    #[error("relation {0} is not in the presentation")]
    RelationNotInPresentation(String),
    #[error("invalid derivation: {0}")]
    InvalidDerivation(String),
    #[error(transparent)]
    Cube(#[from] CubeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: String,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: &str, inv: bool) -> Letter {
        Letter {
            gen: gen.to_string(),
            inv,
        }
    }

    fn end(&self) -> Endpoint {
        if self.inv {
            Endpoint::I0
        } else {
            Endpoint::I1
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv {
            write!(f, "{}^-1", self.gen)
        } else {
            f.write_str(&self.gen)
        }
    }
}

pub type Word = Vec<Letter>;

pub fn show_word(w: &[Letter]) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
    }
}

/// A relation `a b c^-1 = 1`.
pub type Triple = (String, String, String);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    /// Arbitrary relator words `w = 1`.
    pub relators: Vec<Word>,
    pub triples: Vec<Triple>,
    /// Formal inverse pairs; a self-inverse generator pairs with itself.
    pub inverses: BTreeMap<String, String>,
}

fn valid_gen(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(char::is_alphabetic) && cs.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

impl Presentation {
    /// Parses `generators: a, b; relators: a b a^-1 b^-1; relations: a a' e;
    /// inverses: a a'`. Statements end at `;` or a newline; `--` starts a
    /// comment.
    pub fn parse(src: &str) -> Result<Presentation, GroupError> {
        let mut p = Presentation::default();
        let mut pending: Vec<(usize, &str, &str)> = Vec::new();
        for (n, raw) in src.lines().enumerate() {
            let line = raw.split("--").next().unwrap();
            for stmt in line.split(';') {
                let stmt = stmt.trim();
                if stmt.is_empty() {
                    continue;
                }
                let err = |msg: String| GroupError::Parse { line: n + 1, msg };
                let (key, rest) = stmt
                    .split_once(':')
                    .ok_or_else(|| err(format!("expected `key: ...`, found `{stmt}`")))?;
                match key.trim() {
                    "generators" => {
                        for g in rest.split(',').map(str::trim).filter(|g| !g.is_empty()) {
                            if !valid_gen(g) {
                                return Err(err(format!("bad generator name `{g}`")));
                            }
                            if !p.generators.iter().any(|h| h == g) {
                                p.generators.push(g.to_string());
                            }
                        }
                    }
                    k @ ("relators" | "relations" | "inverses") => pending.push((n + 1, k, rest)),
                    k => return Err(err(format!("unknown key `{k}`"))),
                }
            }
        }
        for (line, key, rest) in pending {
            let err = |msg: String| GroupError::Parse { line, msg };
            for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                match key {
                    "relators" => p.relators.push(p.parse_word(item)?),
                    "relations" => {
                        let xs: Vec<&str> = item.split_whitespace().collect();
                        let [a, b, c] = xs[..] else {
                            return Err(err(format!("relation `{item}` must name three generators")));
                        };
                        for g in [a, b, c] {
                            p.gen(g)?;
                        }
                        p.triples.push((a.into(), b.into(), c.into()));
                    }
                    _ => {
                        let xs: Vec<&str> = item.split_whitespace().collect();
                        let [a, b] = xs[..] else {
                            return Err(err(format!("inverse pair `{item}` must name two generators")));
                        };
                        p.gen(a)?;
                        p.gen(b)?;
                        p.inverses.insert(a.into(), b.into());
                        p.inverses.insert(b.into(), a.into());
                    }
                }
            }
        }
        Ok(p)
    }

    fn gen(&self, g: &str) -> Result<(), GroupError> {
        if self.generators.iter().any(|h| h == g) {
            Ok(())
        } else {
            Err(GroupError::UnknownGenerator(g.into()))
        }
    }

    /// Letters separated by spaces, `x^-1` for an inverse letter, `1` for
    /// the empty word.
    pub fn parse_word(&self, s: &str) -> Result<Word, GroupError> {
        let mut w = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (g, inv) = match tok.strip_suffix("^-1").or_else(|| tok.strip_suffix("⁻¹")) {
                Some(g) => (g, true),
                None => (tok, false),
            };
            self.gen(g)?;
            w.push(Letter::new(g, inv));
        }
        Ok(w)
    }

    pub fn is_convenient(&self) -> bool {
        self.relators.is_empty() && self.generators.iter().all(|g| self.inverses.contains_key(g))
    }

    fn fresh(&self, base: &str) -> String {
        if !self.generators.iter().any(|g| g == base) {
            return base.to_string();
        }
        (0..)
            .map(|n| format!("{base}{n}"))
            .find(|c| !self.generators.iter().any(|g| g == c))
            .unwrap()
    }

    fn add_gen(&mut self, base: &str) -> String {
        let g = self.fresh(base);
        self.generators.push(g.clone());
        g
    }

    /// An isomorphic convenient presentation: every relator becomes a chain
    /// of prefix generators `z_0 .. z_n` with `z_0 = z_n = 1`, and every
    /// generator without an inverse gets a formal one.
    pub fn convenientize(&self) -> Presentation {
        let mut p = Presentation {
            relators: Vec::new(),
            ..self.clone()
        };
        for (r, w) in self.relators.iter().enumerate() {
            let z: Vec<String> = (0..=w.len()).map(|j| p.add_gen(&format!("z{r}_{j}"))).collect();
            p.triples.push((z[0].clone(), z[0].clone(), z[0].clone()));
            for (j, l) in w.iter().enumerate() {
                if l.inv {
                    p.triples.push((z[j + 1].clone(), l.gen.clone(), z[j].clone()));
                } else {
                    p.triples.push((z[j].clone(), l.gen.clone(), z[j + 1].clone()));
                }
            }
            let last = z[w.len()].clone();
            p.triples.push((last.clone(), last.clone(), last));
        }
        let missing: Vec<String> = p
            .generators
            .iter()
            .filter(|g| !p.inverses.contains_key(*g))
            .cloned()
            .collect();
        if !missing.is_empty() {
            let unit = p.add_gen("e");
            p.triples.push((unit.clone(), unit.clone(), unit.clone()));
            p.inverses.insert(unit.clone(), unit.clone());
            for g in missing {
                let h = p.add_gen(&format!("{g}'"));
                p.triples.push((g.clone(), h.clone(), unit.clone()));
                p.inverses.insert(g.clone(), h.clone());
                p.inverses.insert(h, g);
            }
        }
        p
    }
}

/// The context of a convenient presentation together with the names it
/// uses.
#[derive(Clone, Debug)]
pub struct Encoding {
    pub ctx: CellCtx,
    pub point: Name,
    pub loops: BTreeMap<String, Name>,
    pub squares: BTreeMap<Triple, Name>,
    /// Use `t(j ∨ k)` for pseudo-∨ instead of the Kan construction.
    pub connections: bool,
}

fn one_letter(g: &str) -> bool {
    g.chars().count() == 1
}

pub fn encode_context(p: &Presentation) -> Result<Encoding, GroupError> {
    if !p.is_convenient() {
        let bad: Vec<&String> = p.generators.iter().filter(|g| !p.inverses.contains_key(*g)).collect();
        return Err(GroupError::NotConvenient(if p.relators.is_empty() {
            format!("no inverse for {}", bad.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", "))
        } else {
            "relators must be in triple form".into()
        }));
    }
    let mut taken: BTreeSet<String> = p.generators.iter().cloned().collect();
    let mut pick = |base: String| {
        let n = if taken.contains(&base) {
            (0..).map(|i| format!("{base}{i}")).find(|c| !taken.contains(c)).unwrap()
        } else {
            base
        };
        taken.insert(n.clone());
        name(&n)
    };
    let point = pick("pt".into());
    let pt = Cell::App {
        name: point.clone(),
        args: vec![],
    };
    let mut ctx = CellCtx::new(vec![CellDecl::new(&point, &[], vec![])])?;
    let mut loops = BTreeMap::new();
    for g in &p.generators {
        let n = name(g);
        ctx.push(CellDecl::new(
            g,
            &["i"],
            vec![Face::new("i", Endpoint::I0, pt.clone()), Face::new("i", Endpoint::I1, pt.clone())],
        ))?;
        loops.insert(g.clone(), n);
    }
    let mut squares = BTreeMap::new();
    for t @ (a, b, c) in &p.triples {
        if squares.contains_key(t) {
            continue;
        }
        let base = if [a, b, c].iter().all(|g| one_letter(g)) {
            format!("s{a}{b}{c}").replace('\'', "i")
        } else {
            format!("s_{a}_{b}_{c}").replace('\'', "i")
        };
        let n = pick(base);
        let app = |g: &str, v: &str| Cell::app(g, vec![Nf::var(v)]);
        ctx.push(CellDecl::new(
            &n,
            &["j", "k"],
            vec![
                Face::new("k", Endpoint::I0, app(a, "j")),
                Face::new("k", Endpoint::I1, app(c, "j")),
                Face::new("j", Endpoint::I0, pt.clone()),
                Face::new("j", Endpoint::I1, app(b, "k")),
            ],
        ))?;
        squares.insert(t.clone(), n);
    }
    Ok(Encoding {
        ctx,
        point,
        loops,
        squares,
        connections: false,
    })
}

const BINDERS: [&str; 8] = ["j", "l", "m", "n", "o", "r", "s", "u"];

/// A binder not in `avoid`.
fn binder(avoid: &[&Name]) -> Name {
    BINDERS
        .iter()
        .map(|s| name(s))
        .find(|b| !avoid.iter().any(|a| *a == b))
        .unwrap_or_else(|| crate::cube::fresh_var(&avoid.iter().map(|a| (*a).clone()).collect::<Vec<_>>()))
}

impl Encoding {
    pub fn with_connections(mut self, on: bool) -> Encoding {
        self.connections = on;
        self
    }

    pub fn point(&self) -> Cell {
        Cell::App {
            name: self.point.clone(),
            args: vec![],
        }
    }

    fn loop_at(&self, a: &str, r: Nf) -> Result<Cell, GroupError> {
        let n = self.loops.get(a).ok_or_else(|| GroupError::UnknownGenerator(a.into()))?;
        Ok(Cell::App {
            name: n.clone(),
            args: vec![r],
        })
    }

    /// `t ▶^e_{i,r} a`: the square between `t` at `r = ē` and `t ▷^e a` at
    /// `r = e`, with `i = 1` side `a(r)`. `psi` is the context of `t`.
    pub fn append_square(&self, t: &Cell, psi: &[Name], i: &Name, a: &str, e: Endpoint, r: Atom) -> Result<Cell, GroupError> {
        let mut avoid: Vec<&Name> = psi.iter().collect();
        if let Atom::Var(x) = &r {
            avoid.push(x);
        }
        let v = binder(&avoid);
        let mut sides = Boundary::empty();
        sides.push(i, Endpoint::I0, self.point());
        sides.push(i, Endpoint::I1, self.loop_at(a, Nf::of(&v))?);
        Ok(Cell::fill(e.neg(), r, v, sides, t.clone()))
    }

    /// `t ▷^e a`.
    pub fn append(&self, t: &Cell, psi: &[Name], i: &Name, a: &str, e: Endpoint) -> Result<Cell, GroupError> {
        self.append_square(t, psi, i, a, e, Atom::Const(e))
    }

    /// Word-level binders stay clear of the names the 2-cell constructions
    /// bind around them.
    fn word_scope(&self, i: &Name) -> Vec<Name> {
        let mut v = vec![i.clone()];
        v.extend(["j", "k", "l", "m"].iter().map(|s| name(s)));
        v
    }

    /// The loop of a word over `(i)`.
    pub fn encode_word(&self, w: &[Letter], i: &Name) -> Result<Cell, GroupError> {
        let psi = self.word_scope(i);
        let mut t = self.point();
        for l in w {
            t = self.append(&t, &psi, i, &l.gen, l.end())?;
        }
        Ok(t)
    }

    /// Over `(i, k)`: `k = 0` is `(t ▷^e a) ▷^ē a`, `k = 1` is `t`.
    pub fn cancel_cell(&self, t: &Cell, i: &Name, k: &Name, a: &str, e: Endpoint) -> Result<Cell, GroupError> {
        let mut tpsi = self.word_scope(i);
        tpsi.push(k.clone());
        let l = binder(&[i, k]);
        let inner_psi = [i.clone(), l.clone()];
        let ta = self.append(t, &tpsi, i, a, e)?;
        let mut sides = Boundary::empty();
        sides.push(i, Endpoint::I0, self.point());
        sides.push(i, Endpoint::I1, self.loop_at(a, Nf::of(&l))?);
        sides.push(k, Endpoint::I0, self.append_square(&ta, &inner_psi, i, a, e.neg(), Atom::Var(l.clone()))?);
        sides.push(k, Endpoint::I1, self.append_square(t, &inner_psi, i, a, e, Atom::Var(l.clone()))?);
        Ok(Cell::fill(e, Atom::Const(e.neg()), l, sides, ta))
    }

    /// Pseudo-∨ of a path `t` over `(i)` from `u` to `v`, over `(j, k)`:
    /// `j = 0` is `t[i := k]`, `k = 0` is `t[i := j]`, the other faces `v`.
    pub fn pseudo_or(&self, t: &Cell, i: &Name, j: &Name, k: &Name) -> Result<Cell, GroupError> {
        let at = |r: &Name, target: &[Name]| t.apply(&Subst::single(i.clone(), Nf::of(r)), target);
        if self.connections {
            let or = Nf::of(j).join(&Nf::of(k));
            return Ok(t.apply(&Subst::single(i.clone(), or), &[j.clone(), k.clone()]));
        }
        let u = t.apply(&Subst::single(i.clone(), Nf::zero()), &[]).normalize(&self.ctx, &[]);
        let l = binder(&[i, j, k]);
        let m = binder(&[i, j, k, &l]);
        let inner = |dir: &Name| {
            let mut sides = Boundary::empty();
            sides.push(&l, Endpoint::I0, u.clone());
            sides.push(&l, Endpoint::I1, at(&m, &[dir.clone(), m.clone()]));
            Cell::fill(Endpoint::I1, Atom::Var(dir.clone()), m.clone(), sides, at(&l, &[dir.clone(), l.clone()]))
        };
        let mut sides = Boundary::empty();
        sides.push(j, Endpoint::I0, inner(k));
        sides.push(k, Endpoint::I0, inner(j));
        sides.push(j, Endpoint::I1, at(&l, &[k.clone(), l.clone()]));
        sides.push(k, Endpoint::I1, at(&l, &[j.clone(), l.clone()]));
        Ok(Cell::fill(Endpoint::I0, Atom::Const(Endpoint::I1), l, sides, u))
    }

    /// Over `(i, k)`: `k = 0` is `(t ▷ a) ▷ b`, `k = 1` is `t ▷ c`.
    pub fn rewrite_cell(&self, t: &Cell, i: &Name, k: &Name, rel: &Triple) -> Result<Cell, GroupError> {
        let (a, b, c) = rel;
        let s = self
            .squares
            .get(rel)
            .ok_or_else(|| GroupError::RelationNotInPresentation(format!("{a} {b} {c}^-1 = 1")))?;
        let one = Endpoint::I1;
        let mut tpsi = self.word_scope(i);
        tpsi.push(k.clone());
        let j = binder(&[i, k]);
        let sq_psi = [i.clone(), j.clone()];
        let mut inner = Boundary::empty();
        inner.push(i, Endpoint::I0, self.point());
        inner.push(
            i,
            Endpoint::I1,
            Cell::App {
                name: s.clone(),
                args: vec![Nf::of(&j), Nf::of(k)],
            },
        );
        inner.push(k, Endpoint::I0, self.append_square(t, &sq_psi, i, a, one, Atom::Var(j.clone()))?);
        inner.push(k, Endpoint::I1, self.append_square(t, &sq_psi, i, c, one, Atom::Var(j.clone()))?);
        let base = Cell::fill(Endpoint::I0, Atom::Const(one), j.clone(), inner, t.clone());

        let ta = self.append(t, &tpsi, i, a, one)?;
        let bi = self.loop_at(b, Nf::of(i))?;
        let mut outer = Boundary::empty();
        outer.push(i, Endpoint::I0, self.point());
        outer.push(i, Endpoint::I1, self.pseudo_or(&bi, i, &j, k)?);
        outer.push(k, Endpoint::I0, self.append_square(&ta, &sq_psi, i, b, one, Atom::Var(j.clone()))?);
        outer.push(k, Endpoint::I1, self.append(t, &tpsi, i, c, one)?);
        Ok(Cell::fill(Endpoint::I0, Atom::Const(one), j, outer, base))
    }

    /// A 2-cell over `(i, k)` from the loop of `v` at `k = 0` to the loop
    /// of `w` at `k = 1`, for a derivation of `v ≡ w`.
    pub fn word_eq_cell(&self, d: &Derivation, i: &Name, k: &Name) -> Result<Cell, GroupError> {
        d.conclusion()?;
        let psi = [i.clone(), k.clone()];
        Ok(match d {
            Derivation::Refl(w) => self.encode_word(w, i)?,
            Derivation::Rewrite { prefix, rel } => {
                let t = self.encode_word(prefix, i)?;
                self.rewrite_cell(&t, i, k, rel)?
            }
            Derivation::CancelRight { prefix, letter } => {
                let t = self.encode_word(prefix, i)?;
                self.cancel_cell(&t, i, k, &letter.gen, letter.end())?
            }
            Derivation::Snoc(sub, l) => {
                let t = self.word_eq_cell(sub, i, k)?;
                self.append(&t, &psi, i, &l.gen, l.end())?
            }
            Derivation::Sym(sub) => {
                let (v, _) = sub.conclusion()?;
                let t = self.word_eq_cell(sub, i, k)?;
                let j = binder(&[i, k]);
                let vi = self.encode_word(&v, i)?;
                let mut sides = self.star_sides(i);
                sides.push(k, Endpoint::I0, t.apply(&Subst::single(k.clone(), Nf::of(&j)), &[i.clone(), j.clone()]));
                sides.push(k, Endpoint::I1, vi.clone());
                Cell::fill(Endpoint::I0, Atom::Const(Endpoint::I1), j, sides, vi)
            }
            Derivation::Trans(d1, d2) => {
                let (u, _) = d1.conclusion()?;
                let t1 = self.word_eq_cell(d1, i, k)?;
                let t2 = self.word_eq_cell(d2, i, k)?;
                let j = binder(&[i, k]);
                let mut sides = self.star_sides(i);
                sides.push(k, Endpoint::I0, self.encode_word(&u, i)?);
                sides.push(k, Endpoint::I1, t2.apply(&Subst::single(k.clone(), Nf::of(&j)), &[i.clone(), j.clone()]));
                Cell::fill(Endpoint::I0, Atom::Const(Endpoint::I1), j, sides, t1)
            }
        })
    }

    /// The boundary `(i = 0, 1 ↦ pt)` of a loop.
    pub fn star_sides(&self, i: &Name) -> Boundary {
        let mut b = Boundary::empty();
        b.push(i, Endpoint::I0, self.point());
        b.push(i, Endpoint::I1, self.point());
        b
    }

    /// The boundary `(i = 0, 1 ↦ pt, k = 0 ↦ ⟨v⟩, k = 1 ↦ ⟨w⟩)`.
    pub fn word_eq_boundary(&self, v: &[Letter], w: &[Letter], i: &Name, k: &Name) -> Result<Boundary, GroupError> {
        let mut b = self.star_sides(i);
        b.push(k, Endpoint::I0, self.encode_word(v, i)?);
        b.push(k, Endpoint::I1, self.encode_word(w, i)?);
        Ok(b)
    }
}

/// A derivation of a word equality `v ≡ w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    /// `prefix a b ≡ prefix c` for a relation `(a, b, c)`.
    Rewrite { prefix: Word, rel: Triple },
    /// `prefix a a^-1 ≡ prefix`, or `prefix a^-1 a ≡ prefix` when `letter`
    /// is inverted.
    CancelRight { prefix: Word, letter: Letter },
    Snoc(Box<Derivation>, Letter),
    Refl(Word),
    Sym(Box<Derivation>),
    Trans(Box<Derivation>, Box<Derivation>),
}

impl Derivation {
    pub fn conclusion(&self) -> Result<(Word, Word), GroupError> {
        Ok(match self {
            Derivation::Rewrite { prefix, rel } => {
                let mut v = prefix.clone();
                v.push(Letter::new(&rel.0, false));
                v.push(Letter::new(&rel.1, false));
                let mut w = prefix.clone();
                w.push(Letter::new(&rel.2, false));
                (v, w)
            }
            Derivation::CancelRight { prefix, letter } => {
                let mut v = prefix.clone();
                v.push(letter.clone());
                v.push(Letter::new(&letter.gen, !letter.inv));
                (v, prefix.clone())
            }
            Derivation::Snoc(d, l) => {
                let (mut v, mut w) = d.conclusion()?;
                v.push(l.clone());
                w.push(l.clone());
                (v, w)
            }
            Derivation::Refl(w) => (w.clone(), w.clone()),
            Derivation::Sym(d) => {
                let (v, w) = d.conclusion()?;
                (w, v)
            }
            Derivation::Trans(d1, d2) => {
                let (u, v) = d1.conclusion()?;
                let (v2, w) = d2.conclusion()?;
                if v != v2 {
                    return Err(GroupError::InvalidDerivation(format!(
                        "middle words differ: {} vs {}",
                        show_word(&v),
                        show_word(&v2)
                    )));
                }
                (u, w)
            }
        })
    }
}

/// A `.cube` file with the context of `p` (made convenient first) and one
/// goal per word equation.
pub fn emit_cube(p: &Presentation, eqs: &[(Word, Word)]) -> Result<String, GroupError> {
    let p = if p.is_convenient() { p.clone() } else { p.convenientize() };
    let enc = encode_context(&p)?;
    let (i, k) = (name("i"), name("k"));
    let mut goals = Vec::new();
    for (n, (v, w)) in eqs.iter().enumerate() {
        goals.push(Goal {
            name: name(&format!("eq{n}")),
            dims: vec![i.clone(), k.clone()],
            boundary: enc.word_eq_boundary(v, w, &i, &k)?,
            options: GoalOptions {
                theory: Some(Theory::DeMorgan),
                ..GoalOptions::default()
            },
            solution: None,
            line: 0,
        });
    }
    let mut out = String::new();
    for (n, (v, w)) in eqs.iter().enumerate() {
        out.push_str(&format!("-- eq{n}: {} = {}\n", show_word(v), show_word(w)));
    }
    out.push_str(&print_cube(&CubeFile { ctx: enc.ctx, goals }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::check;

    fn z2() -> Presentation {
        Presentation::parse("generators: a, a', e; relations: a a' e, a' a e, e e e, a a e; inverses: a a', e e").unwrap()
    }

    #[test]
    fn parse_and_convenient() {
        let p = z2();
        assert!(p.is_convenient());
        assert_eq!(p.triples.len(), 4);
        let q = Presentation::parse("generators: a\nrelators: a a").unwrap();
        assert!(!q.is_convenient());
        assert!(matches!(
            Presentation::parse("generators: a; relators: b"),
            Err(GroupError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn convenientize_uses_prefix_chain() {
        let q = Presentation::parse("generators: a\nrelators: a a").unwrap().convenientize();
        assert!(q.is_convenient());
        // z0..z2, the unit and one formal inverse per generator
        assert_eq!(q.generators.len(), 1 + 3 + 1 + 4);
        assert!(q.triples.contains(&("z0_0".into(), "a".into(), "z0_1".into())));
        assert!(q.triples.contains(&("z0_1".into(), "a".into(), "z0_2".into())));
    }

    #[test]
    fn words_are_loops() {
        let p = z2();
        let enc = encode_context(&p).unwrap();
        let i = name("i");
        let w = p.parse_word("a a^-1 e a'").unwrap();
        let t = enc.encode_word(&w, &i).unwrap();
        check(&enc.ctx, &[i.clone()], &t, &enc.star_sides(&i)).unwrap();
    }

    #[test]
    fn cancel_and_rewrite_check() {
        let p = z2();
        let enc = encode_context(&p).unwrap();
        let (i, k) = (name("i"), name("k"));
        let psi = [i.clone(), k.clone()];
        for (d, _) in [
            (
                Derivation::CancelRight {
                    prefix: p.parse_word("a").unwrap(),
                    letter: Letter::new("a", true),
                },
                0,
            ),
            (
                Derivation::Rewrite {
                    prefix: p.parse_word("a'").unwrap(),
                    rel: ("a".into(), "a".into(), "e".into()),
                },
                0,
            ),
        ] {
            let (v, w) = d.conclusion().unwrap();
            let phi = enc.word_eq_boundary(&v, &w, &i, &k).unwrap();
            let t = enc.word_eq_cell(&d, &i, &k).unwrap();
            check(&enc.ctx, &psi, &t, &phi).unwrap();
        }
    }
}
