//! Sparse linear maps and the qubit interpretation of terms.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZwError};
use crate::ring::Scalar;
use crate::term::{Generator, Node, Term};

pub type Word = Vec<u8>;

/// A linear map `d^n_in -> d^n_out`, keyed by (output word, input word).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMap<S> {
    pub d: usize,
    pub n_in: usize,
    pub n_out: usize,
    entries: BTreeMap<(Word, Word), S>,
}

/// First entry where two maps disagree; missing entries read as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<S> {
    pub out: Word,
    pub inp: Word,
    pub left: S,
    pub right: S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
    Zero,
}

pub fn word_string(w: &[u8]) -> String {
    w.iter().map(|&b| char::from_digit(b as u32, 36).unwrap_or('?')).collect()
}

pub fn parse_word(s: &str, d: usize) -> Result<Word> {
    s.chars()
        .map(|c| match c.to_digit(36) {
            Some(v) if (v as usize) < d => Ok(v as u8),
            _ => Err(ZwError::Input(format!("bad letter `{c}` in word `{s}` for d={d}"))),
        })
        .collect()
}

/// All words of length `n` over `d` letters, in lexicographic order.
pub fn all_words(d: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..d as u8).map(move |b| {
                    let mut v = w.clone();
                    v.push(b);
                    v
                })
            })
            .collect();
    }
    out
}

impl<S: Scalar> SparseMap<S> {
    pub fn zero(d: usize, n_in: usize, n_out: usize) -> Self {
        SparseMap { d, n_in, n_out, entries: BTreeMap::new() }
    }

    pub fn from_entries(
        d: usize,
        n_in: usize,
        n_out: usize,
        entries: impl IntoIterator<Item = (Word, Word, S)>,
    ) -> Self {
        let mut m = Self::zero(d, n_in, n_out);
        for (o, i, v) in entries {
            m.add_entry(o, i, v);
        }
        m
    }

    pub fn scalar(d: usize, v: S) -> Self {
        Self::from_entries(d, 0, 0, [(vec![], vec![], v)])
    }

    /// Adds `v` to the entry at (out, inp), dropping it if the sum vanishes.
    pub fn add_entry(&mut self, out: Word, inp: Word, v: S) {
        debug_assert_eq!(out.len(), self.n_out);
        debug_assert_eq!(inp.len(), self.n_in);
        let key = (out, inp);
        let sum = match self.entries.remove(&key) {
            Some(old) => old + v,
            None => v,
        };
        if !sum.is_negligible() {
            self.entries.insert(key, sum);
        }
    }

    pub fn get(&self, out: &[u8], inp: &[u8]) -> S {
        self.entries.get(&(out.to_vec(), inp.to_vec())).cloned().unwrap_or_else(S::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Word, &S)> {
        self.entries.iter().map(|((o, i), v)| (o, i, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `self` followed by `next`.
    pub fn compose(&self, next: &SparseMap<S>) -> Result<SparseMap<S>> {
        if self.n_out != next.n_in || self.d != next.d {
            return Err(ZwError::Dimension(format!(
                "cannot compose {}->{} with {}->{}",
                self.n_in, self.n_out, next.n_in, next.n_out
            )));
        }
        let mut by_input: HashMap<&Word, Vec<(&Word, &S)>> = HashMap::new();
        for ((o, i), v) in &next.entries {
            by_input.entry(i).or_default().push((o, v));
        }
        let mut out = SparseMap::zero(self.d, self.n_in, next.n_out);
        for ((mid, i), a) in &self.entries {
            if let Some(row) = by_input.get(mid) {
                for (o, b) in row {
                    out.add_entry((*o).clone(), i.clone(), a.clone() * (*b).clone());
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product with word concatenation.
    pub fn tensor(&self, other: &SparseMap<S>) -> SparseMap<S> {
        let mut out = SparseMap::zero(self.d, self.n_in + other.n_in, self.n_out + other.n_out);
        for ((o1, i1), a) in &self.entries {
            for ((o2, i2), b) in &other.entries {
                let o = [o1.as_slice(), o2.as_slice()].concat();
                let i = [i1.as_slice(), i2.as_slice()].concat();
                out.add_entry(o, i, a.clone() * b.clone());
            }
        }
        out
    }

    pub fn scale(&self, s: &S) -> SparseMap<S> {
        SparseMap::from_entries(
            self.d,
            self.n_in,
            self.n_out,
            self.entries().map(|(o, i, v)| (o.clone(), i.clone(), v.clone() * s.clone())),
        )
    }

    pub fn first_difference(&self, other: &SparseMap<S>, tol: f64) -> Option<Witness<S>> {
        let keys: std::collections::BTreeSet<&(Word, Word)> = self.entries.keys().chain(other.entries.keys()).collect();
        for k in keys {
            let a = self.entries.get(k).cloned().unwrap_or_else(S::zero);
            let b = other.entries.get(k).cloned().unwrap_or_else(S::zero);
            if !a.near(&b, tol) {
                return Some(Witness { out: k.0.clone(), inp: k.1.clone(), left: a, right: b });
            }
        }
        None
    }

    /// Same arities and entrywise equal within `tol` (exact rings ignore it).
    pub fn equals(&self, other: &SparseMap<S>, tol: f64) -> bool {
        self.d == other.d
            && self.n_in == other.n_in
            && self.n_out == other.n_out
            && self.first_difference(other, tol).is_none()
    }

    /// Swaps input and output words and conjugates entries.
    pub fn dagger(&self) -> Result<SparseMap<S>> {
        let mut out = SparseMap::zero(self.d, self.n_out, self.n_in);
        for ((o, i), v) in &self.entries {
            out.add_entry(i.clone(), o.clone(), v.conj()?);
        }
        Ok(out)
    }

    /// Swaps input and output words without conjugating.
    pub fn transpose(&self) -> SparseMap<S> {
        SparseMap::from_entries(
            self.d,
            self.n_out,
            self.n_in,
            self.entries().map(|(o, i, v)| (i.clone(), o.clone(), v.clone())),
        )
    }

    /// The state obtained by bending every input into an output placed before
    /// the original outputs: amplitude of `(a, b)` is the entry `(b, a)`.
    pub fn bend(&self) -> SparseMap<S> {
        SparseMap::from_entries(
            self.d,
            0,
            self.n_in + self.n_out,
            self.entries().map(|(o, i, v)| ([i.as_slice(), o.as_slice()].concat(), vec![], v.clone())),
        )
    }

    /// Inverse of [`SparseMap::bend`] for a state whose first `n_in` wires
    /// are inputs.
    pub fn unbend(&self, n_in: usize) -> Result<SparseMap<S>> {
        if self.n_in != 0 || n_in > self.n_out {
            return Err(ZwError::Dimension("unbend needs a state with enough wires".into()));
        }
        Ok(SparseMap::from_entries(
            self.d,
            n_in,
            self.n_out - n_in,
            self.entries().map(|(o, _, v)| (o[n_in..].to_vec(), o[..n_in].to_vec(), v.clone())),
        ))
    }

    pub fn to_json(&self) -> MapJson {
        MapJson {
            d: self.d,
            n_in: self.n_in,
            n_out: self.n_out,
            entries: self
                .entries()
                .map(|(o, i, v)| EntryJson { out: word_string(o), inp: word_string(i), v: v.to_literal() })
                .collect(),
        }
    }

    pub fn from_json(j: &MapJson) -> Result<Self> {
        let mut m = SparseMap::zero(j.d, j.n_in, j.n_out);
        for e in &j.entries {
            let (o, i) = (parse_word(&e.out, j.d)?, parse_word(&e.inp, j.d)?);
            if o.len() != j.n_out || i.len() != j.n_in {
                return Err(ZwError::Input(format!("entry `{}`/`{}` has the wrong length", e.out, e.inp)));
            }
            m.add_entry(o, i, S::parse_literal(&e.v)?);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntryJson {
    pub out: String,
    #[serde(rename = "in")]
    pub inp: String,
    pub v: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapJson {
    pub d: usize,
    #[serde(rename = "in")]
    pub n_in: usize,
    #[serde(rename = "out")]
    pub n_out: usize,
    pub entries: Vec<EntryJson>,
}

/// Map equality using the ring's default tolerance.
pub fn map_equal<S: Scalar>(a: &SparseMap<S>, b: &SparseMap<S>) -> bool {
    a.equals(b, S::descriptor().tolerance)
}

fn weight(w: &[u8]) -> usize {
    w.iter().filter(|&&b| b != 0).count()
}

/// Classifies a qubit map by `(|out| - |in|) mod 2` over its entries.
pub fn parity_class<S: Scalar>(a: &SparseMap<S>) -> Result<Parity> {
    if a.d != 2 {
        return Err(ZwError::Unsupported { op: "parity class", ring: format!("d={}", a.d) });
    }
    let (mut even, mut odd) = (false, false);
    for (o, i, _) in a.entries() {
        if (weight(o) + weight(i)).is_multiple_of(2) {
            even = true;
        } else {
            odd = true;
        }
    }
    Ok(match (even, odd) {
        (true, true) => Parity::Mixed,
        (true, false) => Parity::Even,
        (false, true) => Parity::Odd,
        (false, false) => Parity::Zero,
    })
}

/// Qubit matrix of a single generator.
pub fn generator_map<S: Scalar>(g: &Generator<S>) -> Result<SparseMap<S>> {
    let one = S::one;
    let b = |s: &str| -> Word { s.bytes().map(|c| c - b'0').collect() };
    Ok(match g {
        Generator::Id => SparseMap::from_entries(2, 1, 1, [(b("0"), b("0"), one()), (b("1"), b("1"), one())]),
        Generator::Swap | Generator::Cross | Generator::CrossInv => {
            let last = if matches!(g, Generator::Swap) { one() } else { -one() };
            SparseMap::from_entries(
                2,
                2,
                2,
                [
                    (b("00"), b("00"), one()),
                    (b("01"), b("10"), one()),
                    (b("10"), b("01"), one()),
                    (b("11"), b("11"), last),
                ],
            )
        }
        Generator::Cup => SparseMap::from_entries(2, 0, 2, [(b("00"), b(""), one()), (b("11"), b(""), one())]),
        Generator::Cap => SparseMap::from_entries(2, 2, 0, [(b(""), b("00"), one()), (b(""), b("11"), one())]),
        Generator::WSpider(a, c) => {
            let n = a + c;
            SparseMap::from_entries(
                2,
                *a,
                *c,
                (0..n).map(|k| {
                    let mut w = vec![0u8; n];
                    w[k] = 1;
                    (w[*a..].to_vec(), w[..*a].to_vec(), one())
                }),
            )
        }
        Generator::ZSpider(a, c, r) => SparseMap::from_entries(
            2,
            *a,
            *c,
            [(vec![0; *c], vec![0; *a], one()), (vec![1; *c], vec![1; *a], r.clone())],
        ),
        Generator::Ket(k) => {
            if *k >= 2 {
                return Err(ZwError::Dimension(format!("ket({k}) needs d > {k}")));
            }
            SparseMap::from_entries(2, 0, 1, [(vec![*k as u8], vec![], one())])
        }
    })
}

/// Interprets a term as a linear map. Dimension 2 uses the qubit tables over
/// any ring; larger dimensions go to the qudit semantics, which only the
/// approximate complex ring supports.
pub fn interpret<S: Scalar>(t: &Term<S>, d: usize) -> Result<SparseMap<S>> {
    match d {
        2 => interpret_qubit(t),
        d if d > 2 => S::qudit_interpret(t, d),
        _ => Err(ZwError::Dimension(format!("d={d}"))),
    }
}

pub fn interpret_qubit<S: Scalar>(t: &Term<S>) -> Result<SparseMap<S>> {
    interpret_with(t, 2, &mut |g| generator_map(g))
}

/// Evaluates `t` by pushing the identity on its inputs through the diagram
/// one generator at a time. `table` gives the matrix of each generator.
pub fn interpret_with<S: Scalar>(
    t: &Term<S>,
    d: usize,
    table: &mut dyn FnMut(&Generator<S>) -> Result<SparseMap<S>>,
) -> Result<SparseMap<S>> {
    let start = SparseMap::from_entries(
        d,
        t.n_in(),
        t.n_in(),
        all_words(d, t.n_in()).into_iter().map(|w| (w.clone(), w, S::one())),
    );
    let mut cache: Vec<(Generator<S>, SparseMap<S>)> = Vec::new();
    apply_at(t, start, 0, &mut |g| {
        if let Some((_, m)) = cache.iter().find(|(h, _)| h == g) {
            return Ok(m.clone());
        }
        let m = table(g)?;
        cache.push((g.clone(), m.clone()));
        Ok(m)
    })
}

/// Applies `t` to the output wires `offset..offset + n_in(t)` of `m`.
fn apply_at<S: Scalar>(
    t: &Term<S>,
    m: SparseMap<S>,
    offset: usize,
    table: &mut dyn FnMut(&Generator<S>) -> Result<SparseMap<S>>,
) -> Result<SparseMap<S>> {
    match t.node() {
        Node::Gen(Generator::Id) => Ok(m),
        Node::Gen(g) => Ok(apply_map(&table(g)?, &m, offset)),
        Node::Seq(f, g) => {
            let m = apply_at(f, m, offset, table)?;
            apply_at(g, m, offset, table)
        }
        Node::Par(f, g) => {
            let m = apply_at(f, m, offset, table)?;
            apply_at(g, m, offset + f.n_out(), table)
        }
    }
}

fn apply_map<S: Scalar>(g: &SparseMap<S>, m: &SparseMap<S>, offset: usize) -> SparseMap<S> {
    let mut by_input: HashMap<&[u8], Vec<(&Word, &S)>> = HashMap::new();
    for ((o, i), v) in &g.entries {
        by_input.entry(i.as_slice()).or_default().push((o, v));
    }
    let a = g.n_in;
    let mut out = SparseMap::zero(m.d, m.n_in, m.n_out - a + g.n_out);
    for ((o, i), v) in &m.entries {
        if let Some(rows) = by_input.get(&o[offset..offset + a]) {
            for (go, gv) in rows {
                let w = [&o[..offset], go.as_slice(), &o[offset + a..]].concat();
                out.add_entry(w, i.clone(), v.clone() * (*gv).clone());
            }
        }
    }
    out
}
