//! Helpers shared by the integration tests.
#![allow(dead_code)]

pub mod dense;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zw::semantics::SparseMap;
use zw::term::{ids, padded};
use zw::{Scalar, Term};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bounds for [`random_term`].
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    /// Generators drawn from the palette, identities not counted.
    pub max_gens: usize,
    pub max_boundary: usize,
    /// Wires alive at any point in the diagram.
    pub max_internal: usize,
}

pub const DESK: Shape = Shape { max_gens: 8, max_boundary: 4, max_internal: 6 };

pub fn wire_palette<S: Scalar>() -> Vec<Term<S>> {
    vec![Term::id(), Term::swap(), Term::cup(), Term::cap(), Term::cross(), Term::gen(zw::Generator::CrossInv)]
}

/// Wire fragment plus the even comultiplication `|0> -> |00>, |1> -> |01>+|10>`.
pub fn even_palette<S: Scalar>() -> Vec<Term<S>> {
    let mut p = wire_palette();
    p.push(Term::w(1, 1).then(Term::w(1, 2)));
    p
}

pub fn pure_palette<S: Scalar>() -> Vec<Term<S>> {
    let mut p = wire_palette();
    p.push(Term::w(0, 3));
    p.push(Term::w(0, 2));
    p
}

pub fn full_palette<S: Scalar>(labels: &[S]) -> Vec<Term<S>> {
    let mut p = wire_palette();
    for a in 0..=3 {
        for b in 0..=3 - a {
            if a + b > 0 {
                p.push(Term::w(a, b));
                for r in labels {
                    p.push(Term::z(a, b, r.clone()));
                }
            }
        }
    }
    p.push(Term::ket(0));
    p.push(Term::ket(1));
    p
}

pub fn int_labels<S: Scalar>() -> Vec<S> {
    [0, 1, -1, 2, -2, 3].iter().map(|&v| S::from_i64(v)).collect()
}

/// A random well-formed term built layer by layer from `palette`, with
/// occasional parallel extension.
pub fn random_term<S: Scalar>(rng: &mut impl Rng, palette: &[Term<S>], shape: Shape) -> Term<S> {
    loop {
        let n_in = rng.gen_range(0..=shape.max_boundary.min(3));
        let mut n_in_total = n_in;
        let mut cur = n_in;
        let mut t: Option<Term<S>> = ids(n_in);
        let target = rng.gen_range(1..=shape.max_gens);
        for _ in 0..target {
            let fits: Vec<&Term<S>> = palette
                .iter()
                .filter(|g| g.n_in() <= cur && cur - g.n_in() + g.n_out() <= shape.max_internal)
                .collect();
            let widen = rng.gen_bool(0.15) && t.is_some();
            let g = if widen || fits.is_empty() {
                // parallel extension with a fresh generator
                let cands: Vec<&Term<S>> = palette
                    .iter()
                    .filter(|g| cur + g.n_out() <= shape.max_internal && n_in_total + g.n_in() <= shape.max_boundary)
                    .collect();
                match cands.choose(rng) {
                    Some(g) => {
                        n_in_total += g.n_in();
                        cur += g.n_out();
                        t = Some(match t {
                            Some(t) => Term::par(t, (*g).clone()),
                            None => (*g).clone(),
                        });
                        continue;
                    }
                    None => break,
                }
            } else {
                (*fits.choose(rng).expect("nonempty")).clone()
            };
            let off = rng.gen_range(0..=cur - g.n_in());
            let after = cur - off - g.n_in();
            cur = cur - g.n_in() + g.n_out();
            let layer = padded(off, g, after);
            t = Some(match t {
                Some(t) => Term::seq(t, layer).expect("arity checked"),
                None => layer,
            });
        }
        if let Some(t) = t {
            if cur <= shape.max_boundary && t.n_in() <= shape.max_boundary {
                return t;
            }
        }
    }
}

/// A random state on `n` wires with at most `max_terms` nonzero amplitudes
/// drawn from `values`.
pub fn random_state<S: Scalar>(rng: &mut impl Rng, d: usize, n: usize, max_terms: usize, values: &[S]) -> SparseMap<S> {
    let k = rng.gen_range(0..=max_terms);
    let mut entries = Vec::new();
    for _ in 0..k {
        let w: Vec<u8> = (0..n).map(|_| rng.gen_range(0..d as u8)).collect();
        entries.push((w, vec![], values.choose(rng).expect("values").clone()));
    }
    SparseMap::from_entries(d, 0, n, entries)
}
