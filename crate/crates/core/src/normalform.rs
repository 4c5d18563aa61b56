//! Normal forms of qubit diagrams and the compositional normalisation
//! procedure.
//!
//! A state on `n` wires is a list of rows `(r, b)`: one white node labelled
//! `r` for each row, wired to output `j` exactly when `b[j] = 1`. Maps are
//! handled by bending all inputs into outputs placed before the original ones.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZwError};
use crate::ring::Scalar;
use crate::semantics::{parse_word, word_string, SparseMap, Word};
use crate::term::{ids, padded, par_all, permutation, seq_all, Generator, Node, Term};

#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm<S> {
    pub d: usize,
    pub n: usize,
    rows: Vec<(S, Word)>,
}

/// Rows may repeat, carry zero coefficients, or have entries `>= d`
/// (several parallel wires to the same output).
#[derive(Debug, Clone, PartialEq)]
pub struct PreNormalForm<S> {
    pub d: usize,
    pub n: usize,
    pub rows: Vec<(S, Word)>,
}

/// A normal form of a map: the first `n_in` wires of `nf` are bent inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct BentNormalForm<S> {
    pub n_in: usize,
    pub n_out: usize,
    pub nf: NormalForm<S>,
}

pub fn canonicalize<S: Scalar>(p: PreNormalForm<S>) -> NormalForm<S> {
    let mut merged: BTreeMap<Word, S> = BTreeMap::new();
    for (r, w) in p.rows {
        debug_assert_eq!(w.len(), p.n);
        if w.iter().any(|&k| k as usize >= p.d) {
            continue;
        }
        let e = merged.entry(w).or_insert_with(S::zero);
        *e = e.clone() + r;
    }
    let rows = merged.into_iter().filter(|(_, r)| !r.is_negligible()).map(|(w, r)| (r, w)).collect();
    NormalForm { d: p.d, n: p.n, rows }
}

impl<S: Scalar> NormalForm<S> {
    pub fn empty(d: usize, n: usize) -> Self {
        NormalForm { d, n, rows: Vec::new() }
    }

    pub fn from_rows(d: usize, n: usize, rows: impl IntoIterator<Item = (S, Word)>) -> Self {
        canonicalize(PreNormalForm { d, n, rows: rows.into_iter().collect() })
    }

    pub fn rows(&self) -> &[(S, Word)] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn state(&self) -> SparseMap<S> {
        SparseMap::from_entries(self.d, 0, self.n, self.rows.iter().map(|(r, w)| (w.clone(), vec![], r.clone())))
    }

    pub fn to_json(&self) -> NormalFormJson {
        NormalFormJson {
            n: self.n,
            d: self.d,
            rows: self.rows.iter().map(|(r, w)| RowJson { v: r.to_literal(), w: word_string(w) }).collect(),
        }
    }

    pub fn from_json(j: &NormalFormJson) -> Result<Self> {
        let mut rows = Vec::new();
        for r in &j.rows {
            let w = parse_word(&r.w, j.d)?;
            if w.len() != j.n {
                return Err(ZwError::Input(format!("row `{}` has the wrong length", r.w)));
            }
            rows.push((S::parse_literal(&r.v)?, w));
        }
        Ok(Self::from_rows(j.d, j.n, rows))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RowJson {
    pub v: String,
    pub w: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalFormJson {
    pub n: usize,
    pub d: usize,
    pub rows: Vec<RowJson>,
}

pub fn nf_of_state<S: Scalar>(m: &SparseMap<S>) -> Result<NormalForm<S>> {
    if m.n_in != 0 {
        return Err(ZwError::Dimension(format!("expected a state, found {} inputs", m.n_in)));
    }
    Ok(NormalForm::from_rows(m.d, m.n_out, m.entries().map(|(o, _, v)| (v.clone(), o.clone()))))
}

pub fn nf_tensor<S: Scalar>(a: &NormalForm<S>, b: &NormalForm<S>) -> NormalForm<S> {
    let mut rows = Vec::with_capacity(a.rows.len() * b.rows.len());
    for (r, u) in &a.rows {
        for (s, v) in &b.rows {
            rows.push((r.clone() * s.clone(), [u.as_slice(), v.as_slice()].concat()));
        }
    }
    NormalForm::from_rows(a.d, a.n + b.n, rows)
}

/// Plugs outputs `j` and `k` into each other.
pub fn nf_trace<S: Scalar>(a: &NormalForm<S>, j: usize, k: usize) -> Result<NormalForm<S>> {
    for i in [j, k] {
        if i >= a.n {
            return Err(ZwError::Index { index: i, size: a.n });
        }
    }
    if j == k {
        return Err(ZwError::Input("cannot plug an output into itself".into()));
    }
    let rows = a.rows.iter().filter(|(_, w)| w[j] == w[k]).map(|(r, w)| {
        let rest = w.iter().enumerate().filter(|&(i, _)| i != j && i != k).map(|(_, &b)| b).collect();
        (r.clone(), rest)
    });
    Ok(NormalForm::from_rows(a.d, a.n - 2, rows))
}

/// Complements the connections of output `j`.
pub fn nf_negate<S: Scalar>(a: &NormalForm<S>, j: usize) -> Result<NormalForm<S>> {
    if a.d != 2 {
        return Err(ZwError::Unsupported { op: "negation", ring: format!("d={}", a.d) });
    }
    if j >= a.n {
        return Err(ZwError::Index { index: j, size: a.n });
    }
    Ok(NormalForm::from_rows(
        2,
        a.n,
        a.rows.iter().map(|(r, w)| {
            let mut w = w.clone();
            w[j] ^= 1;
            (r.clone(), w)
        }),
    ))
}

/// Moves output `i` to position `dest[i]`.
pub fn nf_permute<S: Scalar>(a: &NormalForm<S>, dest: &[usize]) -> NormalForm<S> {
    assert_eq!(dest.len(), a.n);
    NormalForm::from_rows(
        a.d,
        a.n,
        a.rows.iter().map(|(r, w)| {
            let mut v = vec![0; a.n];
            for (i, &b) in w.iter().enumerate() {
                v[dest[i]] = b;
            }
            (r.clone(), v)
        }),
    )
}

fn bits(s: &str) -> Word {
    s.bytes().map(|c| c - b'0').collect()
}

/// Normal form of a qubit generator with its inputs bent to the left.
pub fn generator_nf<S: Scalar>(g: &Generator<S>) -> Result<BentNormalForm<S>> {
    let (n_in, n_out) = g.arity();
    let n = n_in + n_out;
    let one = S::one;
    let rows: Vec<(S, Word)> = match g {
        // bent wire: |00> + |11>
        Generator::Id | Generator::Cup | Generator::Cap => vec![(one(), bits("00")), (one(), bits("11"))],
        // (in1 in2 out1 out2) with out = reversed in
        Generator::Swap => ["0000", "0110", "1001", "1111"].iter().map(|w| (one(), bits(w))).collect(),
        Generator::Cross | Generator::CrossInv => {
            vec![(one(), bits("0000")), (one(), bits("0110")), (one(), bits("1001")), (-one(), bits("1111"))]
        }
        Generator::WSpider(..) => (0..n)
            .map(|k| {
                let mut w = vec![0; n];
                w[k] = 1;
                (one(), w)
            })
            .collect(),
        Generator::ZSpider(_, _, r) => vec![(one(), vec![0; n]), (r.clone(), vec![1; n])],
        Generator::Ket(k) if *k < 2 => vec![(one(), vec![*k as u8])],
        Generator::Ket(k) => return Err(ZwError::Dimension(format!("ket({k}) needs d > {k}"))),
    };
    Ok(BentNormalForm { n_in, n_out, nf: NormalForm::from_rows(2, n, rows) })
}

/// Normalises a qubit term over an exact ring by structural recursion.
pub fn normalize<S: Scalar>(t: &Term<S>) -> Result<BentNormalForm<S>> {
    if !S::descriptor().is_exact() {
        return Err(ZwError::Unsupported { op: "normalize", ring: S::descriptor().to_string() });
    }
    normalize_rec(t)
}

fn normalize_rec<S: Scalar>(t: &Term<S>) -> Result<BentNormalForm<S>> {
    // start from the bent identity on the inputs and plug the term in
    let n_in = t.n_in();
    let words = crate::semantics::all_words(2, n_in);
    let start = NormalForm::from_rows(
        2,
        2 * n_in,
        words.into_iter().map(|u| (S::one(), [u.as_slice(), u.as_slice()].concat())),
    );
    let nf = plug(start, n_in, t, 0)?;
    Ok(BentNormalForm { n_in, n_out: t.n_out(), nf })
}

/// Applies `t` to the wires `skip + offset ..` of `state`: each generator's
/// normal form is tensored on, its inputs are traced against the wires they
/// consume, and its outputs are moved into their place.
fn plug<S: Scalar>(state: NormalForm<S>, skip: usize, t: &Term<S>, offset: usize) -> Result<NormalForm<S>> {
    match t.node() {
        Node::Gen(Generator::Id) => Ok(state),
        Node::Gen(g) => {
            let (a, b) = g.arity();
            let n = state.n;
            let at = skip + offset;
            let mut nf = nf_tensor(&state, &generator_nf(g)?.nf);
            // each plugged pair removes one wire below both partners of the next
            for k in 0..a {
                nf = nf_trace(&nf, at, n - k)?;
            }
            // (head, rest, g_out) -> (head, g_out, rest)
            let rest = n - a - at;
            let dest: Vec<usize> = (0..at).chain(at + b..at + b + rest).chain(at..at + b).collect();
            Ok(nf_permute(&nf, &dest))
        }
        Node::Seq(f, g) => {
            let state = plug(state, skip, f, offset)?;
            plug(state, skip, g, offset)
        }
        Node::Par(f, g) => {
            let state = plug(state, skip, f, offset)?;
            plug(state, skip, g, offset + f.n_out())
        }
    }
}

impl<S: Scalar> BentNormalForm<S> {
    /// The map this normal form denotes.
    pub fn map(&self) -> Result<SparseMap<S>> {
        self.nf.state().unbend(self.n_in)
    }

    pub fn of_map(m: &SparseMap<S>) -> Result<Self> {
        Ok(BentNormalForm { n_in: m.n_in, n_out: m.n_out, nf: nf_of_state(&m.bend())? })
    }
}

/// A term with interpretation zero and no inputs: `w(0,2) ; cap`.
pub fn zero_scalar<S: Scalar>() -> Term<S> {
    Term::w(0, 2).then(Term::cap())
}

/// The binary black node, `|0><1| + |1><0|`.
pub fn not<S: Scalar>() -> Term<S> {
    Term::w(1, 1)
}

/// Output node of the normal-form diagram collecting `c` wires.
fn top_node<S: Scalar>(c: usize) -> Term<S> {
    Term::w(c, 1).then(not())
}

/// Builds the normal-form diagram of a qubit state: a bottom W node fanning
/// out to one white node per row, white node `i` wired to output `j` when
/// `b_ij = 1`, and one output node per wire.
pub fn nf_to_term<S: Scalar>(a: &NormalForm<S>) -> Result<Term<S>> {
    if a.d != 2 {
        return Err(ZwError::Unsupported { op: "normal-form diagram", ring: format!("d={}", a.d) });
    }
    let n = a.n;
    if a.rows.is_empty() {
        let tops = par_all((0..n).map(|_| top_node::<S>(0)));
        return Ok(match tops {
            Some(t) => Term::par(zero_scalar(), t),
            None => zero_scalar(),
        });
    }
    let m = a.rows.len();
    let whites = par_all(a.rows.iter().map(|(r, w)| Term::z(1, w.iter().filter(|&&b| b == 1).count(), r.clone())))
        .expect("at least one row");
    let mut t = Term::w(0, m).then(whites);
    // wires leave the white nodes in (row, column) order; regroup by column
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, (_, w)) in a.rows.iter().enumerate() {
        for (j, &b) in w.iter().enumerate() {
            if b == 1 {
                edges.push((i, j));
            }
        }
    }
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&e| (edges[e].1, edges[e].0));
    let mut dest = vec![0; edges.len()];
    for (pos, &e) in order.iter().enumerate() {
        dest[e] = pos;
    }
    if let Some(route) = permutation(&dest, &Generator::Swap) {
        t = t.then(route);
    }
    let counts: Vec<usize> = (0..n).map(|j| a.rows.iter().filter(|(_, w)| w[j] == 1).count()).collect();
    if let Some(tops) = par_all(counts.into_iter().map(top_node)) {
        t = t.then(tops);
    }
    Ok(t)
}

/// Diagram of a bent normal form, with the inputs bent back by caps.
pub fn bent_nf_to_term<S: Scalar>(b: &BentNormalForm<S>) -> Result<Term<S>> {
    let state = nf_to_term(&b.nf)?;
    let k = b.n_in;
    if k == 0 {
        return Ok(state);
    }
    // (in_0..in_{k-1}, s_0..s_{k-1}, rest) -> (in_0, s_0, in_1, s_1, ..., rest)
    let total = 2 * k + b.n_out;
    let dest: Vec<usize> = (0..total)
        .map(|i| match i {
            i if i < k => 2 * i,
            i if i < 2 * k => 2 * (i - k) + 1,
            i => i,
        })
        .collect();
    let mut t = Term::par(ids(k).expect("k > 0"), state);
    if let Some(route) = permutation(&dest, &Generator::Swap) {
        t = t.then(route);
    }
    let caps = par_all((0..k).map(|_| Term::cap())).expect("k > 0");
    let last = match ids(b.n_out) {
        Some(rest) => Term::par(caps, rest),
        None => caps,
    };
    Ok(seq_all([t, last]).expect("nonempty"))
}

/// `t` followed by the binary black node on output `j`.
pub fn negate_output<S: Scalar>(t: Term<S>, j: usize) -> Result<Term<S>> {
    let m = t.n_out();
    if j >= m {
        return Err(ZwError::Index { index: j, size: m });
    }
    Ok(t.then(padded(j, not(), m - j - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{interpret, map_equal};
    use num_bigint::BigInt;

    type T = Term<BigInt>;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn nf(rows: &[(i64, &str)]) -> NormalForm<BigInt> {
        let n = rows.first().map_or(0, |r| r.1.len());
        NormalForm::from_rows(2, n, rows.iter().map(|(r, w)| (z(*r), bits(w))))
    }

    #[test]
    fn canonicalize_examples() {
        let p = |rows: &[(i64, &str)]| PreNormalForm {
            d: 2,
            n: 2,
            rows: rows.iter().map(|(r, w)| (z(*r), bits(w))).collect(),
        };
        assert_eq!(canonicalize(p(&[(1, "01"), (2, "01"), (1, "11")])), nf(&[(3, "01"), (1, "11")]));
        assert!(canonicalize(p(&[(1, "01"), (-1, "01")])).is_empty());
        assert!(canonicalize(p(&[(1, "21")])).is_empty());
    }

    #[test]
    fn trace_examples() {
        let two = nf_trace(&nf(&[(1, "00"), (1, "11")]), 0, 1).unwrap();
        assert_eq!(two, NormalForm::from_rows(2, 0, [(z(2), vec![])]));
        assert!(nf_trace(&nf(&[(1, "01"), (1, "10")]), 0, 1).unwrap().is_empty());
        let t = nf_trace(&nf(&[(1, "00"), (1, "11"), (1, "01")]), 0, 1).unwrap();
        assert_eq!(t.rows(), &[(z(2), vec![])]);
        assert!(nf_trace(&nf(&[(1, "00")]), 0, 0).is_err());
    }

    #[test]
    fn negate_examples() {
        let a = nf(&[(1, "00"), (1, "11")]);
        assert_eq!(nf_negate(&a, 0).unwrap(), nf(&[(1, "10"), (1, "01")]));
        assert_eq!(nf_negate(&nf_negate(&a, 1).unwrap(), 1).unwrap(), a);
    }

    #[test]
    fn generator_nfs() {
        let x = generator_nf::<BigInt>(&Generator::Cross).unwrap();
        assert_eq!(x.nf.rows().last().unwrap(), &(z(-1), bits("1111")));
        let g = generator_nf(&Generator::ZSpider(0, 3, z(5))).unwrap();
        assert_eq!(g.nf, nf(&[(1, "000"), (5, "111")]));
        assert_eq!(generator_nf::<BigInt>(&Generator::Cap).unwrap().nf, nf(&[(1, "00"), (1, "11")]));
    }

    #[test]
    fn normalize_examples() {
        let n = |s: &str| normalize(&T::parse(s).unwrap()).unwrap();
        let w3 = n("w(0,3) ; (id * id * id)");
        assert_eq!(w3.nf, nf_of_state(&interpret(&T::w(0, 3), 2).unwrap()).unwrap());
        assert_eq!(n("(id * cup) ; (cap * id)"), n("id"));
        assert_eq!(
            n("(w(1,1) ; w(1,2)) ; (id * ((id * cup) ; (x * id) ; (id * cap))) ; (w(2,1) ; w(1,1))"),
            n("(w(1,1) ; w(1,0)) ; (w(0,1) ; w(1,1))")
        );
    }

    #[test]
    fn diagram_round_trip() {
        for rows in [vec![(1, "000"), (-2, "011"), (3, "111")], vec![(4, "")], vec![(1, "10"), (1, "11")], vec![]] {
            let a = nf(&rows);
            let t = nf_to_term(&a).unwrap();
            assert_eq!(nf_of_state(&interpret(&t, 2).unwrap()).unwrap(), a);
        }
        let zero = NormalForm::<BigInt>::empty(2, 3);
        let t = nf_to_term(&zero).unwrap();
        assert_eq!(t.arity(), (0, 3));
        assert!(interpret(&t, 2).unwrap().is_empty());
    }

    #[test]
    fn bent_round_trip() {
        let t = T::parse("(z(1,2)[3] * id) ; (id * x) ; (w(2,1) * id)").unwrap();
        let b = normalize(&t).unwrap();
        let back = bent_nf_to_term(&b).unwrap();
        assert!(map_equal(&interpret(&back, 2).unwrap(), &interpret(&t, 2).unwrap()));
        assert!(map_equal(&b.map().unwrap(), &interpret(&t, 2).unwrap()));
    }
}
