//! Naive dense evaluator for qubit terms, written from the generator tables
//! directly. Used only as an oracle for the sparse evaluator.

use zw::semantics::SparseMap;
use zw::{Generator, Scalar, Term};

/// Largest matrix the oracle will build, counted in entries.
pub const CAP: usize = 4096;

#[derive(Debug, Clone)]
pub struct Dense<S> {
    pub n_in: usize,
    pub n_out: usize,
    /// Row-major: index `out * 2^n_in + in`.
    pub data: Vec<S>,
}

fn bits(x: usize, n: usize) -> Vec<u8> {
    (0..n).rev().map(|k| ((x >> k) & 1) as u8).collect()
}

fn weight(x: usize) -> u32 {
    x.count_ones()
}

impl<S: Scalar> Dense<S> {
    fn new(n_in: usize, n_out: usize) -> Self {
        let size = 1usize << (n_in + n_out);
        assert!(size <= CAP, "dense oracle limited to {CAP} entries, asked for {size}");
        Dense { n_in, n_out, data: vec![S::zero(); size] }
    }

    fn at(&mut self, out: usize, inp: usize) -> &mut S {
        &mut self.data[(out << self.n_in) | inp]
    }

    fn get(&self, out: usize, inp: usize) -> &S {
        &self.data[(out << self.n_in) | inp]
    }

    pub fn of_generator(g: &Generator<S>) -> Self {
        let (a, b) = g.arity();
        let mut m = Dense::new(a, b);
        for inp in 0..1usize << a {
            for out in 0..1usize << b {
                let v: Option<S> = match g {
                    Generator::Id => (out == inp).then(S::one),
                    Generator::Swap => (out == ((inp & 1) << 1 | inp >> 1)).then(S::one),
                    Generator::Cross | Generator::CrossInv => {
                        (out == ((inp & 1) << 1 | inp >> 1)).then(|| if inp == 3 { -S::one() } else { S::one() })
                    }
                    Generator::Cup => (out == 0 || out == 3).then(S::one),
                    Generator::Cap => (inp == 0 || inp == 3).then(S::one),
                    Generator::WSpider(..) => (weight(inp) + weight(out) == 1).then(S::one),
                    Generator::ZSpider(_, _, r) => {
                        let all_in = (1usize << a) - 1;
                        let all_out = (1usize << b) - 1;
                        if inp == 0 && out == 0 {
                            Some(S::one())
                        } else if inp == all_in && out == all_out {
                            Some(r.clone())
                        } else {
                            None
                        }
                    }
                    Generator::Ket(k) => (out == *k).then(S::one),
                };
                if let Some(v) = v {
                    *m.at(out, inp) = v;
                }
            }
        }
        // z with no legs on either side: both conditions hit the single entry
        if let Generator::ZSpider(0, 0, r) = g {
            m.data[0] = S::one() + r.clone();
        }
        m
    }

    pub fn seq(&self, next: &Dense<S>) -> Self {
        assert_eq!(self.n_out, next.n_in);
        let mut m = Dense::new(self.n_in, next.n_out);
        for i in 0..1usize << self.n_in {
            for o in 0..1usize << next.n_out {
                let mut acc = S::zero();
                for k in 0..1usize << self.n_out {
                    acc = acc + self.get(k, i).clone() * next.get(o, k).clone();
                }
                *m.at(o, i) = acc;
            }
        }
        m
    }

    pub fn kron(&self, other: &Dense<S>) -> Self {
        let mut m = Dense::new(self.n_in + other.n_in, self.n_out + other.n_out);
        for i1 in 0..1usize << self.n_in {
            for o1 in 0..1usize << self.n_out {
                for i2 in 0..1usize << other.n_in {
                    for o2 in 0..1usize << other.n_out {
                        *m.at(o1 << other.n_out | o2, i1 << other.n_in | i2) =
                            self.get(o1, i1).clone() * other.get(o2, i2).clone();
                    }
                }
            }
        }
        m
    }

    pub fn of_term(t: &Term<S>) -> Self {
        use zw::term::Node;
        match t.node() {
            Node::Gen(g) => Self::of_generator(g),
            Node::Seq(f, g) => Self::of_term(f).seq(&Self::of_term(g)),
            Node::Par(f, g) => Self::of_term(f).kron(&Self::of_term(g)),
        }
    }

    pub fn to_sparse(&self) -> SparseMap<S> {
        let mut entries = Vec::new();
        for i in 0..1usize << self.n_in {
            for o in 0..1usize << self.n_out {
                let v = self.get(o, i);
                if !v.is_zero() {
                    entries.push((bits(o, self.n_out), bits(i, self.n_in), v.clone()));
                }
            }
        }
        SparseMap::from_entries(2, self.n_in, self.n_out, entries)
    }
}
