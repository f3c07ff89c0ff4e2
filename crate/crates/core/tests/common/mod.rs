#![allow(dead_code)]

use cubesolve::cube::face_of;
use cubesolve::dim::{name, Lit};
use cubesolve::{cell_boundary, parse_cube, Atom, Boundary, Cell, CellCtx, Endpoint, Name, Nf, Theory};
use rand::seq::SliceRandom;
use rand::Rng;

pub const THEORIES: [Theory; 4] = [Theory::Cartesian, Theory::Disjunctive, Theory::Dedekind, Theory::DeMorgan];

/// A point, a loop, a free path and a free square.
pub fn small_ctx() -> CellCtx {
    parse_cube(
        "x []\n\
         p [i] { i=0 -> x, i=1 -> x }\n\
         q [i]\n\
         s [i, j]\n",
    )
    .unwrap()
    .ctx
}

pub fn dims(n: usize) -> Vec<Name> {
    ["i", "j", "k"].iter().take(n).map(|s| name(s)).collect()
}

fn atom<R: Rng>(rng: &mut R, psi: &[Name], theory: Theory) -> Nf {
    let x = psi.choose(rng);
    match (rng.gen_range(0..6), x) {
        (0, _) | (_, None) => Nf::zero(),
        (1, _) => Nf::one(),
        (2, Some(x)) if theory == Theory::DeMorgan => Nf::lit(x.clone(), true),
        (_, Some(x)) => Nf::of(x),
    }
}

/// A random term over `psi` using only the operations of `theory`.
pub fn random_nf<R: Rng>(rng: &mut R, psi: &[Name], theory: Theory) -> Nf {
    let mut t = atom(rng, psi, theory);
    for _ in 0..rng.gen_range(0..3) {
        let u = atom(rng, psi, theory);
        t = match theory {
            Theory::Cartesian => u,
            Theory::Disjunctive => t.join(&u),
            _ if rng.gen_bool(0.5) => t.join(&u),
            _ => t.meet(&u),
        };
    }
    t
}

pub fn random_contortion<R: Rng>(rng: &mut R, ctx: &CellCtx, psi: &[Name], theory: Theory) -> Cell {
    let d = ctx.decls().choose(rng).unwrap();
    let args = (0..d.dims.len()).map(|_| random_nf(rng, psi, theory)).collect();
    Cell::App {
        name: d.name.clone(),
        args,
    }
    .normalize(ctx, psi)
}

/// Drops each face with probability `p`.
pub fn thin<R: Rng>(rng: &mut R, b: Boundary, p: f64) -> Boundary {
    Boundary::new(b.faces.into_iter().filter(|_| !rng.gen_bool(p)).collect())
}

/// A composite `fill 0 -> 1 l {..} (..)` built from the faces of a random
/// contortion over `psi + [l]`.
pub fn random_fill<R: Rng>(rng: &mut R, ctx: &CellCtx, psi: &[Name], theory: Theory) -> Cell {
    let l = name("l");
    let mut big = psi.to_vec();
    big.push(l.clone());
    let t = random_contortion(rng, ctx, &big, theory);
    let mut sides = Boundary::empty();
    for x in psi {
        for e in Endpoint::BOTH {
            if rng.gen_bool(0.7) {
                let (f, _) = face_of(ctx, &big, &t, &Atom::Var(x.clone()), e).unwrap();
                sides.push(x, e, f);
            }
        }
    }
    let (base, _) = face_of(ctx, &big, &t, &Atom::Var(l.clone()), Endpoint::I0).unwrap();
    Cell::fill(Endpoint::I0, Atom::Const(Endpoint::I1), l, sides, base).normalize(ctx, psi)
}

/// A goal boundary: the (thinned) boundary of a contortion or of a composite.
pub fn random_problem<R: Rng>(rng: &mut R, ctx: &CellCtx) -> (Vec<Name>, Boundary, Theory) {
    let theory = *THEORIES.choose(rng).unwrap();
    let composite = rng.gen_bool(0.4);
    let psi = dims(if composite { rng.gen_range(1..=2) } else { rng.gen_range(1..=3) });
    let t = if composite {
        random_fill(rng, ctx, &psi, theory)
    } else {
        random_contortion(rng, ctx, &psi, theory)
    };
    let b = thin(rng, cell_boundary(ctx, &psi, &t), 0.2);
    (psi, b, theory)
}

pub fn lit(x: &str, neg: bool) -> Lit {
    Lit { var: name(x), neg }
}
