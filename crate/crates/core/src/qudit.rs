//! Qudit semantics with q-deformed arithmetic, `q = e^{2πi/d}`.
//!
//! In this semantics a black spider `w(a,b)` is `a`-fold multiplication
//! followed by `b`-fold comultiplication of the anyonic line, with unit `|0>`
//! and counit `<0|`. White spiders carry the factors `sqrt([k]!)`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::{One, Zero};

use crate::error::{Result, ZwError};
use crate::normalform::{nf_of_state, NormalForm};
use crate::rules::RuleReport;
use crate::semantics::{all_words, word_string, SparseMap};
use crate::term::{par_all, permutation, Generator, Term};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParams {
    pub d: usize,
    pub q: C64,
    pub tol: f64,
}

impl QParams {
    pub fn new(d: usize, tol: f64) -> Result<Self> {
        if d < 2 {
            return Err(ZwError::Dimension(format!("qudit dimension must be at least 2, got {d}")));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(ZwError::Input(format!("tolerance must be positive, got {tol}")));
        }
        let p = QParams { d, q: C64::from_polar(1.0, 2.0 * PI / d as f64), tol };
        debug_assert!((p.q.powu(d as u32) - 1.0).norm() <= tol);
        Ok(p)
    }

    /// Arbitrary deformation parameter on `d` levels; `q = 1` gives the
    /// truncated bosonic case.
    pub fn with_q(d: usize, q: C64, tol: f64) -> Self {
        QParams { d, q, tol }
    }

    fn qpow(&self, k: i64) -> C64 {
        self.q.powi(k as i32)
    }
}

pub fn q_int(n: usize, p: &QParams) -> C64 {
    (0..n).map(|k| p.qpow(k as i64)).sum()
}

pub fn q_factorial(n: usize, p: &QParams) -> C64 {
    (1..=n).map(|k| q_int(k, p)).product()
}

/// q-binomial coefficient via the q-Pascal recursion, which agrees with
/// `[n]! / ([k]! [n-k]!)` wherever that quotient is defined.
pub fn q_binom(n: usize, k: usize, p: &QParams) -> Result<C64> {
    if k > n {
        return Err(ZwError::Input(format!("q_binom needs k <= n, got n={n}, k={k}")));
    }
    let mut row = vec![C64::one()];
    for m in 1..=n {
        let mut next = vec![C64::zero(); m + 1];
        for j in 0..=m {
            let left = if j > 0 { row[j - 1] } else { C64::zero() };
            let right = if j < m { row[j] * p.qpow(j as i64) } else { C64::zero() };
            next[j] = left + right;
        }
        row = next;
    }
    Ok(row[k])
}

/// Cached q-integers, factorials and binomials below `d`.
#[derive(Debug, Clone)]
pub struct QBinomialTable {
    pub params: QParams,
    pub ints: Vec<C64>,
    pub factorials: Vec<C64>,
    pub binoms: Vec<Vec<C64>>,
}

impl QBinomialTable {
    pub fn new(p: &QParams) -> Self {
        let d = p.d;
        QBinomialTable {
            params: *p,
            ints: (0..d).map(|n| q_int(n, p)).collect(),
            factorials: (0..d).map(|n| q_factorial(n, p)).collect(),
            binoms: (0..d).map(|n| (0..=n).map(|k| q_binom(n, k, p).expect("k <= n")).collect()).collect(),
        }
    }

    pub fn sqrt_binom(&self, n: usize, k: usize) -> C64 {
        self.binoms[n][k].sqrt()
    }

    /// `c_k = sqrt([k]!)`, taken as `sqrt([1]) ... sqrt([k])` with principal
    /// roots so that it matches the factor picked up by iterated
    /// multiplication of `k` single particles.
    pub fn copy_factor(&self, k: usize) -> C64 {
        self.ints[1..=k].iter().map(|n| n.sqrt()).product()
    }
}

/// Both sides of the q-Vandermonde identity
/// `binom(n,k) = sum_i q^{(j-i)(k-i)} binom(j,i) binom(n-j,k-i)`.
pub fn q_vandermonde_sides(p: &QParams, n: usize, j: usize, k: usize) -> Result<(C64, C64)> {
    if j > n || k > n {
        return Err(ZwError::Input(format!("need j, k <= n, got n={n}, j={j}, k={k}")));
    }
    let lhs = q_binom(n, k, p)?;
    let mut rhs = C64::zero();
    for i in 0..=k.min(j) {
        if k - i > n - j {
            continue;
        }
        let e = ((j - i) * (k - i)) as i64;
        rhs += p.qpow(e) * q_binom(j, i, p)? * q_binom(n - j, k - i, p)?;
    }
    Ok((lhs, rhs))
}

pub fn check_q_vandermonde(p: &QParams, n: usize, j: usize, k: usize) -> Result<bool> {
    let (l, r) = q_vandermonde_sides(p, n, j, k)?;
    Ok((l - r).norm() <= p.tol)
}

fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// The classical (q = 1) identity over the integers.
pub fn check_vandermonde_classical(n: u64, j: u64, k: u64) -> bool {
    let rhs: u128 = (0..=k.min(j)).filter(|&i| k - i <= n - j).map(|i| binomial(j, i) * binomial(n - j, k - i)).sum();
    binomial(n, k) == rhs
}

fn map(p: &QParams, n_in: usize, n_out: usize, entries: Vec<(Vec<u8>, Vec<u8>, C64)>) -> SparseMap<C64> {
    SparseMap::from_entries(p.d, n_in, n_out, entries)
}

pub fn identity(p: &QParams, n: usize) -> SparseMap<C64> {
    map(p, n, n, all_words(p.d, n).into_iter().map(|w| (w.clone(), w, C64::one())).collect())
}

/// Comultiplication `|n> -> sum_k sqrt(binom(n,k)) |k>|n-k>`.
pub fn w_map(t: &QBinomialTable) -> SparseMap<C64> {
    let p = &t.params;
    let mut e = Vec::new();
    for n in 0..p.d {
        for k in 0..=n {
            e.push((vec![k as u8, (n - k) as u8], vec![n as u8], t.sqrt_binom(n, k)));
        }
    }
    map(p, 1, 2, e)
}

/// Multiplication, the transpose of [`w_map`].
pub fn m_map(t: &QBinomialTable) -> SparseMap<C64> {
    w_map(t).transpose()
}

pub fn ket(p: &QParams, k: usize) -> SparseMap<C64> {
    map(p, 0, 1, vec![(vec![k as u8], vec![], C64::one())])
}

pub fn counit(p: &QParams) -> SparseMap<C64> {
    ket(p, 0).transpose()
}

fn crossing(p: &QParams, sign: i64) -> SparseMap<C64> {
    let d = p.d;
    let mut e = Vec::new();
    for k in 0..d {
        for j in 0..d {
            e.push((vec![j as u8, k as u8], vec![k as u8, j as u8], p.qpow(sign * (j * k) as i64)));
        }
    }
    map(p, 2, 2, e)
}

pub fn antipode(p: &QParams) -> SparseMap<C64> {
    let e = (0..p.d)
        .map(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            (vec![n as u8], vec![n as u8], p.qpow((n * (n.saturating_sub(1)) / 2) as i64) * sign)
        })
        .collect();
    map(p, 1, 1, e)
}

fn iterate(base: SparseMap<C64>, k: usize, step: &SparseMap<C64>, p: &QParams, fan_in: bool) -> Result<SparseMap<C64>> {
    // k-fold multiplication (fan_in) or comultiplication, nested to the left
    let mut acc = base;
    for _ in 1..k {
        acc = if fan_in {
            acc.tensor(&identity(p, 1)).compose(step)?
        } else {
            step.compose(&acc.tensor(&identity(p, 1)))?
        };
    }
    Ok(acc)
}

fn spider_w(t: &QBinomialTable, a: usize, b: usize) -> Result<SparseMap<C64>> {
    let p = &t.params;
    let m = m_map(t);
    let w = w_map(t);
    let fan_in = match a {
        0 => ket(p, 0),
        a => iterate(identity(p, 1), a, &m, p, true)?,
    };
    let fan_out = match b {
        0 => counit(p),
        b => iterate(identity(p, 1), b, &w, p, false)?,
    };
    fan_in.compose(&fan_out)
}

fn spider_z(t: &QBinomialTable, a: usize, b: usize, label: C64) -> SparseMap<C64> {
    let p = &t.params;
    let n = (a + b) as i32;
    let e = (0..p.d)
        .map(|k| (vec![k as u8; b], vec![k as u8; a], t.copy_factor(k).powi(n - 2) * label.powu(k as u32)))
        .collect();
    map(p, a, b, e)
}

/// Matrix of a generator in the qudit semantics.
pub fn qudit_matrix(g: &Generator<C64>, t: &QBinomialTable) -> Result<SparseMap<C64>> {
    let p = &t.params;
    let d = p.d;
    Ok(match g {
        Generator::Id => identity(p, 1),
        Generator::Swap => crossing(&QParams::with_q(d, C64::one(), p.tol), 1),
        Generator::Cup => map(p, 0, 2, (0..d).map(|k| (vec![k as u8; 2], vec![], C64::one())).collect()),
        Generator::Cap => map(p, 2, 0, (0..d).map(|k| (vec![], vec![k as u8; 2], C64::one())).collect()),
        Generator::Cross => crossing(p, 1),
        Generator::CrossInv => crossing(p, -1),
        Generator::WSpider(a, b) => spider_w(t, *a, *b)?,
        Generator::ZSpider(a, b, r) => spider_z(t, *a, *b, *r),
        Generator::Ket(k) if *k < d => ket(p, *k),
        Generator::Ket(k) => return Err(ZwError::Dimension(format!("ket({k}) needs d > {k}"))),
    })
}

pub fn interpret(term: &Term<C64>, p: &QParams) -> Result<SparseMap<C64>> {
    let t = QBinomialTable::new(p);
    interpret_with(term, &t)
}

pub fn interpret_with(term: &Term<C64>, t: &QBinomialTable) -> Result<SparseMap<C64>> {
    crate::semantics::interpret_with(term, t.params.d, &mut |g| qudit_matrix(g, t))
}

/// `a† = m ∘ (|1> ⊗ id)`, built as a term.
pub fn creation_term() -> Term<C64> {
    Term::par(Term::ket(1), Term::id()).then(Term::w(2, 1))
}

/// `a = (<1| ⊗ id) ∘ w`, built as a term.
pub fn annihilation_term() -> Term<C64> {
    let bra1 = Term::par(Term::ket(1), Term::par(Term::id(), Term::id())).then(Term::par(Term::cap(), Term::id()));
    Term::w(1, 2).then(bra1)
}

fn add(a: &SparseMap<C64>, b: &SparseMap<C64>, s: C64) -> SparseMap<C64> {
    let mut out = a.clone();
    for (o, i, v) in b.entries() {
        out.add_entry(o.clone(), i.clone(), *v * s);
    }
    out
}

fn report(name: &str, params: String, lhs: &SparseMap<C64>, rhs: &SparseMap<C64>, tol: f64) -> RuleReport {
    let witness = if lhs.n_in != rhs.n_in || lhs.n_out != rhs.n_out {
        Some(format!("arity {}->{} vs {}->{}", lhs.n_in, lhs.n_out, rhs.n_in, rhs.n_out))
    } else {
        lhs.first_difference(rhs, tol).map(|w| {
            format!(
                "out={} in={} lhs={} rhs={}",
                word_string(&w.out),
                word_string(&w.inp),
                fmt_c(w.left),
                fmt_c(w.right)
            )
        })
    };
    RuleReport { name: name.into(), params, pass: witness.is_none(), witness, error: None }
}

fn scalar_report(name: &str, params: String, lhs: C64, rhs: C64, tol: f64) -> RuleReport {
    let ok = (lhs - rhs).norm() <= tol;
    RuleReport {
        name: name.into(),
        params,
        pass: ok,
        witness: (!ok).then(|| format!("lhs={} rhs={}", fmt_c(lhs), fmt_c(rhs))),
        error: None,
    }
}

fn fmt_c(z: C64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

/// Anyonic bialgebra law `(w⊗w);(id⊗x⊗id);(m⊗m) = m;w` with the default
/// comultiplication, plus the coefficient identity behind it.
pub fn check_bialgebra(p: &QParams) -> Result<Vec<RuleReport>> {
    let t = QBinomialTable::new(p);
    let mut out = vec![check_bialgebra_with(p, &w_map(&t))?];
    for n in 0..p.d {
        for j in 0..=n {
            for k in 0..=n {
                let lhs = t.sqrt_binom(n, j) * t.sqrt_binom(n, k);
                let mut rhs = C64::zero();
                for i in 0..=k.min(j) {
                    if k - i > n - j || j - i > n - k {
                        continue;
                    }
                    rhs += p.qpow(((k - i) * (j - i)) as i64)
                        * t.sqrt_binom(j, i)
                        * t.sqrt_binom(n - j, k - i)
                        * t.sqrt_binom(k, i)
                        * t.sqrt_binom(n - k, j - i);
                }
                out.push(scalar_report("binom-identity", format!("d={},n={n},j={j},k={k}", p.d), lhs, rhs, p.tol));
            }
        }
    }
    Ok(out)
}

/// Bialgebra law for a supplied comultiplication `w`; the multiplication is
/// its transpose.
pub fn check_bialgebra_with(p: &QParams, w: &SparseMap<C64>) -> Result<RuleReport> {
    let m = w.transpose();
    let id = identity(p, 1);
    let x = crossing(p, 1);
    let lhs = w.tensor(w).compose(&id.tensor(&x).tensor(&id))?.compose(&m.tensor(&m))?;
    let rhs = m.compose(w)?;
    Ok(report("bialgebra", format!("d={}", p.d), &lhs, &rhs, p.tol))
}

/// `a a† = 1 + q a† a` on all `d` levels.
pub fn check_commutation(p: &QParams) -> Result<RuleReport> {
    let a_dag = interpret(&creation_term(), p)?;
    let a = interpret(&annihilation_term(), p)?;
    let lhs = a_dag.compose(&a)?;
    let rhs = add(&identity(p, 1), &a.compose(&a_dag)?, p.q);
    Ok(report("commutation", format!("d={}", p.d), &lhs, &rhs, p.tol))
}

/// Truncated bosonic check at `q = 1`: `a a† - a† a` acts as the identity on
/// the levels below the truncation boundary.
pub fn check_bosonic(levels: usize, tol: f64) -> Result<RuleReport> {
    let p = QParams::with_q(levels, C64::one(), tol);
    let a_dag = interpret(&creation_term(), &p)?;
    let a = interpret(&annihilation_term(), &p)?;
    let comm = add(&a_dag.compose(&a)?, &a.compose(&a_dag)?, -C64::one());
    let keep = |m: &SparseMap<C64>| {
        SparseMap::from_entries(
            levels,
            1,
            1,
            m.entries()
                .filter(|(o, i, _)| o[0] + 1 < levels as u8 && i[0] + 1 < levels as u8)
                .map(|(o, i, v)| (o.clone(), i.clone(), *v)),
        )
    };
    Ok(report("bosonic-commutation", format!("levels={levels}"), &keep(&comm), &keep(&identity(&p, 1)), tol))
}

/// Structural laws of the qudit generators, used by the CLI and tests.
pub fn check_structure(p: &QParams) -> Result<Vec<RuleReport>> {
    let t = QBinomialTable::new(p);
    let d = p.d;
    let (w, m, id) = (w_map(&t), m_map(&t), identity(p, 1));
    let swap = qudit_matrix(&Generator::Swap, &t)?;
    let x = crossing(p, 1);
    let xinv = crossing(p, -1);
    let tag = format!("d={d}");
    let mut out =
        vec![report("coassociativity", tag.clone(), &w.compose(&w.tensor(&id))?, &w.compose(&id.tensor(&w))?, p.tol)];
    out.push(report("cocommutativity", tag.clone(), &w.compose(&swap)?, &w, p.tol));
    out.push(report("counit", tag.clone(), &w.compose(&counit(p).tensor(&id))?, &id, p.tol));
    out.push(report("x-xinv", tag.clone(), &x.compose(&xinv)?, &identity(p, 2), p.tol));
    let mut xp = identity(p, 2);
    for _ in 0..2 * d {
        xp = xp.compose(&x)?;
    }
    out.push(report("x-power-2d", tag.clone(), &xp, &identity(p, 2), p.tol));
    let mut x_odd = identity(p, 2);
    for _ in 0..2 * d - 1 {
        x_odd = x_odd.compose(&x)?;
    }
    out.push(report("xinv-as-power", tag.clone(), &xinv, &x_odd, p.tol));
    let s = antipode(p);
    let s2 = map(
        p,
        1,
        1,
        (0..d).map(|n| (vec![n as u8], vec![n as u8], p.qpow((n * n.saturating_sub(1)) as i64))).collect(),
    );
    out.push(report("antipode-square", tag.clone(), &s.compose(&s)?, &s2, p.tol));
    let hopf = w.compose(&s.tensor(&id))?.compose(&m)?;
    out.push(report("hopf", tag.clone(), &hopf, &counit(p).compose(&ket(p, 0))?, p.tol));
    out.push(scalar_report("q-int-d", tag.clone(), q_int(d, p), C64::zero(), p.tol));
    for n in d..d + 3 {
        out.push(scalar_report("factorial-truncation", format!("d={d},n={n}"), q_factorial(n, p), C64::zero(), p.tol));
    }
    Ok(out)
}

/// Output of the qudit universality construction.
#[derive(Debug, Clone)]
pub struct QuditUniversal {
    /// `k[i][j]`: number of wires from white node `i` to output `j`.
    pub k: Vec<Vec<usize>>,
    pub labels: Vec<C64>,
    /// `λ̃_i = λ_i ∏_j sqrt(1/[k_ij]!)`.
    pub adjusted: Vec<C64>,
    pub term: Term<C64>,
    pub nf: NormalForm<C64>,
}

/// Builds a diagram whose qudit interpretation is `state`.
pub fn qudit_universal_nf(state: &SparseMap<C64>, p: &QParams) -> Result<QuditUniversal> {
    if state.d != p.d {
        return Err(ZwError::Dimension(format!("state has d={}, parameters d={}", state.d, p.d)));
    }
    let kept = SparseMap::from_entries(
        p.d,
        0,
        state.n_out,
        state.entries().filter(|(_, _, v)| v.norm() > p.tol).map(|(o, i, v)| (o.clone(), i.clone(), *v)),
    );
    let nf = nf_of_state(&kept)?;
    let t = QBinomialTable::new(p);
    let n = nf.n;
    let k: Vec<Vec<usize>> = nf.rows().iter().map(|(_, w)| w.iter().map(|&b| b as usize).collect()).collect();
    let labels: Vec<C64> = nf.rows().iter().map(|(r, _)| *r).collect();
    let adjusted: Vec<C64> =
        labels.iter().zip(&k).map(|(l, row)| row.iter().fold(*l, |acc, &kij| acc / t.copy_factor(kij))).collect();
    let units = || par_all((0..n).map(|_| Term::w(0, 1)));
    let term = if k.is_empty() {
        let zero = Term::ket(1).then(Term::w(1, 0));
        match units() {
            Some(u) => Term::par(zero, u),
            None => zero,
        }
    } else {
        let whites = par_all(k.iter().zip(&adjusted).map(|(row, l)| Term::z(1, row.iter().sum(), *l))).expect("rows");
        let mut term = Term::ket(1).then(Term::w(1, k.len())).then(whites);
        let mut edges = Vec::new();
        for (i, row) in k.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                edges.extend(std::iter::repeat_n((j, i), c));
            }
        }
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&e| edges[e]);
        let mut dest = vec![0; edges.len()];
        for (pos, &e) in order.iter().enumerate() {
            dest[e] = pos;
        }
        if let Some(route) = permutation(&dest, &Generator::Swap) {
            term = term.then(route);
        }
        let counts = (0..n).map(|j| k.iter().map(|row| row[j]).sum::<usize>());
        if let Some(tops) = par_all(counts.map(|c| Term::w(c, 1))) {
            term = term.then(tops);
        }
        term
    };
    Ok(QuditUniversal { k, labels, adjusted, term, nf })
}
