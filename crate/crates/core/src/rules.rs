//! The rule catalogue and its soundness checker.
//!
//! Fixed-shape rules are read from the `data/*.rules` files; the
//! parameterised families (spider fusion, traces, symmetries, bialgebra
//! squares, ...) are generated over the bounds.

use std::fmt;

use crate::error::{Result, ZwError};
use crate::normalform::{negate_output, nf_negate, nf_tensor, nf_to_term, nf_trace, not, zero_scalar, NormalForm};
use crate::ring::Scalar;
use crate::semantics::{interpret, word_string};
use crate::term::{ids, one, padded, par_all, par_opt, permutation, seq_all, Generator, Term};

pub const AXIOM_FILE: &str = include_str!("../data/axioms.rules");
pub const DERIVED_FILE: &str = include_str!("../data/derived.rules");

#[derive(Debug, Clone, PartialEq)]
pub struct RuleInstance<S> {
    pub name: String,
    pub params: String,
    pub lhs: Term<S>,
    pub rhs: Term<S>,
}

impl<S: Scalar> RuleInstance<S> {
    pub fn new(name: &str, params: String, lhs: Term<S>, rhs: Term<S>) -> Result<Self> {
        if lhs.arity() != rhs.arity() {
            return Err(ZwError::Input(format!(
                "rule {name} [{params}]: sides have arities {:?} and {:?}",
                lhs.arity(),
                rhs.arity()
            )));
        }
        Ok(RuleInstance { name: name.into(), params, lhs, rhs })
    }

    /// One catalogue line: `name | params | lhs | rhs`.
    pub fn record(&self) -> String {
        let params = if self.params.is_empty() { "-" } else { &self.params };
        format!("{} | {} | {} | {}", self.name, params, self.lhs.render(), self.rhs.render())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleReport {
    pub name: String,
    pub params: String,
    pub pass: bool,
    /// First differing entry on failure.
    pub witness: Option<String>,
    pub error: Option<String>,
}

impl fmt::Display for RuleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "pass" } else { "FAIL" };
        write!(f, "{:<24} {:<28} {}", self.name, self.params, verdict)?;
        if let Some(w) = &self.witness {
            write!(f, "  [{w}]")?;
        }
        if let Some(e) = &self.error {
            write!(f, "  ({e})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub max_spider_arity: usize,
    pub max_nm: usize,
    pub label_samples: Vec<String>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_spider_arity: 4,
            max_nm: 3,
            label_samples: ["0", "1", "-1", "2", "-2", "i", "1+i"].map(String::from).to_vec(),
        }
    }
}

impl Bounds {
    /// Samples that parse in the ring; e.g. `i` is skipped over the integers.
    pub fn labels<S: Scalar>(&self) -> Vec<(String, S)> {
        self.label_samples.iter().filter_map(|s| S::parse_literal(s).ok().map(|v| (v.to_literal(), v))).collect()
    }
}

pub fn check_rule<S: Scalar>(r: &RuleInstance<S>) -> RuleReport {
    let mut rep =
        RuleReport { name: r.name.clone(), params: r.params.clone(), pass: false, witness: None, error: None };
    let (l, rt) = match (interpret(&r.lhs, 2), interpret(&r.rhs, 2)) {
        (Ok(l), Ok(rt)) => (l, rt),
        (Err(e), _) | (_, Err(e)) => {
            rep.error = Some(e.to_string());
            rep.witness = Some("evaluation failed".into());
            return rep;
        }
    };
    match l.first_difference(&rt, S::descriptor().tolerance) {
        None => rep.pass = true,
        Some(w) => {
            rep.witness = Some(format!(
                "out={} in={} lhs={} rhs={}",
                word_string(&w.out),
                word_string(&w.inp),
                w.left.to_literal(),
                w.right.to_literal()
            ))
        }
    }
    rep
}

/// `lhs ⊗ (-1)`: a sign-flipped copy that fails whenever the rule's map is
/// nonzero and the ring has characteristic other than 2.
pub fn mutate_sign<S: Scalar>(r: &RuleInstance<S>) -> RuleInstance<S> {
    let minus_one = Term::w(0, 1).then(Term::z(1, 0, -S::one()));
    RuleInstance {
        name: format!("{}~neg", r.name),
        params: r.params.clone(),
        lhs: Term::par(r.lhs.clone(), minus_one),
        rhs: r.rhs.clone(),
    }
}

/// Replaces every crossing of `lhs` by a plain swap and vice versa.
pub fn mutate_crossings<S: Scalar>(r: &RuleInstance<S>) -> RuleInstance<S> {
    let lhs = r.lhs.map_generators(&mut |g| match g {
        Generator::Cross | Generator::CrossInv => Generator::Swap,
        Generator::Swap => Generator::Cross,
        g => g.clone(),
    });
    RuleInstance { name: format!("{}~cross", r.name), params: r.params.clone(), lhs, rhs: r.rhs.clone() }
}

fn eval_placeholder<S: Scalar>(expr: &str, env: &[(&str, S)]) -> Result<S> {
    let lookup = |v: &str| {
        env.iter()
            .find(|(k, _)| *k == v.trim())
            .map(|(_, s)| s.clone())
            .ok_or_else(|| ZwError::Input(format!("unknown placeholder variable `{v}`")))
    };
    if let Some((a, b)) = expr.split_once('+') {
        return Ok(lookup(a)? + lookup(b)?);
    }
    if let Some((a, b)) = expr.split_once('*') {
        return Ok(lookup(a)? * lookup(b)?);
    }
    if let Some(v) = expr.trim().strip_prefix('-') {
        return Ok(-lookup(v)?);
    }
    lookup(expr)
}

fn substitute<S: Scalar>(text: &str, env: &[(&str, S)]) -> Result<String> {
    let mut out = String::new();
    let mut rest = text;
    while let Some(start) = rest.find('{') {
        let end =
            rest[start..].find('}').ok_or_else(|| ZwError::Input(format!("unclosed placeholder in `{text}`")))? + start;
        out.push_str(&rest[..start]);
        out.push_str(&eval_placeholder(&rest[start + 1..end], env)?.to_literal());
        rest = &rest[end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Reads a catalogue in `name | params | lhs | rhs` format. Lines whose
/// params column lists variables (`r,s`) are templates and expand over
/// `labels`; other lines are taken literally.
pub fn load_catalogue<S: Scalar>(text: &str, labels: &[(String, S)]) -> Result<Vec<RuleInstance<S>>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        let [name, params, lhs, rhs] = fields[..] else {
            return Err(ZwError::Input(format!("line {}: expected 4 fields separated by `|`", lineno + 1)));
        };
        let at = |e: ZwError| ZwError::Input(format!("line {} ({name}): {e}", lineno + 1));
        let vars: Vec<&str> = if lhs.contains('{') || rhs.contains('{') {
            params.split(',').map(str::trim).filter(|v| !v.is_empty()).collect()
        } else {
            Vec::new()
        };
        if vars.is_empty() {
            let p = if params == "-" { String::new() } else { params.to_string() };
            out.push(
                RuleInstance::new(name, p, Term::parse(lhs).map_err(at)?, Term::parse(rhs).map_err(at)?).map_err(at)?,
            );
            continue;
        }
        for combo in assignments(vars.len(), labels.len()) {
            let env: Vec<(&str, S)> = vars.iter().zip(&combo).map(|(v, &k)| (*v, labels[k].1.clone())).collect();
            let p = vars.iter().zip(&combo).map(|(v, &k)| format!("{v}={}", labels[k].0)).collect::<Vec<_>>().join(",");
            let l = Term::parse(&substitute(lhs, &env).map_err(at)?).map_err(at)?;
            let r = Term::parse(&substitute(rhs, &env).map_err(at)?).map_err(at)?;
            out.push(RuleInstance::new(name, p, l, r).map_err(at)?);
        }
    }
    Ok(out)
}

fn assignments(vars: usize, choices: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..vars {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..choices).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

/// `NOT ; w(1,k)`: the even comultiplication fanning out to `k` wires.
pub fn fan_out<S: Scalar>(k: usize) -> Term<S> {
    not().then(Term::w(1, k))
}

/// `w(k,1) ; NOT`.
pub fn fan_in<S: Scalar>(k: usize) -> Term<S> {
    Term::w(k, 1).then(not())
}

/// W spider with any number of legs; no legs gives the zero scalar.
pub fn spider_w<S: Scalar>(a: usize, b: usize) -> Term<S> {
    if a + b == 0 {
        zero_scalar()
    } else {
        Term::w(a, b)
    }
}

/// Z spider with any number of legs; no legs gives the scalar `1 + r`.
pub fn spider_z<S: Scalar>(a: usize, b: usize, r: S) -> Term<S> {
    if a + b == 0 {
        Term::z(0, 2, r).then(Term::cap())
    } else {
        Term::z(a, b, r)
    }
}

/// The phase map `|0><0| - |1><1|` drawn as a crossing with a bent wire.
pub fn imap<S: Scalar>() -> Term<S> {
    seq_all([padded(1, Term::cup(), 0), padded(0, Term::cross(), 1), padded(1, Term::cap(), 0)]).expect("nonempty")
}

fn par_n<S: Scalar>(n: usize, f: impl Fn() -> Term<S>) -> Option<Term<S>> {
    par_all((0..n).map(|_| f()))
}

fn chain<S: Scalar>(parts: Vec<Option<Term<S>>>) -> Term<S> {
    parts.into_iter().flatten().reduce(|a, b| a.then(b)).unwrap_or_else(one)
}

fn grid_transpose<S: Scalar>(n: usize, m: usize, gate: Generator<S>) -> Option<Term<S>> {
    let dest: Vec<usize> = (0..n * m).map(|p| (p % m) * n + p / m).collect();
    permutation(&dest, &gate)
}

fn push<S: Scalar>(
    out: &mut Vec<RuleInstance<S>>,
    name: &str,
    params: String,
    lhs: Term<S>,
    rhs: Term<S>,
) -> Result<()> {
    out.push(RuleInstance::new(name, params, lhs, rhs)?);
    Ok(())
}

/// Shapes `(inputs, outputs)` of a spider with one extra leg and at most
/// `max` legs in total.
fn shapes(max: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for a in 0..max {
        for b in 0..max - a {
            v.push((a, b));
        }
    }
    v
}

pub fn axiom_instances<S: Scalar>(b: &Bounds) -> Result<Vec<RuleInstance<S>>> {
    let labels = b.labels::<S>();
    let mut out = load_catalogue(AXIOM_FILE, &labels)?;
    let max = b.max_spider_arity;
    let pairs: Vec<(usize, usize)> = (0..labels.len()).flat_map(|i| (0..labels.len()).map(move |j| (i, j))).collect();

    // spider fusion: w(i1, o1+1) and w(1+i2, o2) joined by a binary node
    let mut k = 0;
    for &(i1, o1) in &shapes(max) {
        for &(i2, o2) in &shapes(max) {
            let first = |g: Term<S>| par_opt(Some(g), ids(i2)).expect("nonempty");
            let join = |g: Term<S>| par_opt(ids(o1), Some(g)).expect("nonempty");
            let p = format!("in={i1}+{i2},out={o1}+{o2}");
            let lhs = first(Term::w(i1, o1 + 1)).then(padded(o1, not(), i2)).then(join(Term::w(1 + i2, o2)));
            push(&mut out, "cut_w", p.clone(), lhs, spider_w(i1 + i2, o1 + o2))?;
            if !pairs.is_empty() {
                let (ri, si) = pairs[k % pairs.len()];
                k += 1;
                let (r, s) = (labels[ri].1.clone(), labels[si].1.clone());
                let lhs = first(Term::z(i1, o1 + 1, r.clone())).then(join(Term::z(1 + i2, o2, s.clone())));
                let p = format!("{p},r={},s={}", labels[ri].0, labels[si].0);
                push(&mut out, "cut_z", p, lhs, spider_z(i1 + i2, o1 + o2, r * s))?;
            }
        }
    }
    // every label pair on the smallest nontrivial fusion
    for &(ri, si) in &pairs {
        let (r, s) = (labels[ri].1.clone(), labels[si].1.clone());
        let lhs = Term::z(1, 1, r.clone()).then(Term::z(1, 2, s.clone()));
        push(
            &mut out,
            "cut_z",
            format!("in=1+0,out=0+2,r={},s={}", labels[ri].0, labels[si].0),
            lhs,
            Term::z(1, 2, r * s),
        )?;
    }

    for a in 0..=max.saturating_sub(2) {
        for o in 0..=max - 2 - a {
            let p = format!("in={a},out={o}");
            let cap_last = || padded(o, Term::cap(), 0);
            push(&mut out, "tr_w", p.clone(), Term::w(a, o + 2).then(cap_last()), spider_w(a, o))?;
            for (lit, r) in &labels {
                let lhs = Term::z(a, o + 2, r.clone()).then(cap_last());
                push(&mut out, "tr_z", format!("{p},r={lit}"), lhs, spider_z(a, o, r.clone()))?;
            }
        }
    }

    let mut k = 0;
    for a in 0..=max {
        for o in 2..=max.saturating_sub(a) {
            for j in 0..o - 1 {
                let p = format!("in={a},out={o},at={j}");
                let sw = |g: Term<S>| padded(j, g, o - j - 2);
                push(&mut out, "sym_w", p.clone(), Term::w(a, o).then(sw(Term::swap())), Term::w(a, o))?;
                push(&mut out, "sym_w_x", p.clone(), Term::w(a, o).then(sw(Term::cross())), Term::w(a, o))?;
                if !labels.is_empty() {
                    let (lit, r) = &labels[k % labels.len()];
                    k += 1;
                    let lhs = Term::z(a, o, r.clone()).then(sw(Term::swap()));
                    push(&mut out, "sym_z", format!("{p},r={lit}"), lhs, Term::z(a, o, r.clone()))?;
                }
            }
        }
    }

    for n in 0..=b.max_nm {
        for m in 0..=b.max_nm {
            let tops = || par_n(m, || fan_in(n));
            let lhs = chain(vec![par_n(n, || fan_out(m)), grid_transpose(n, m, Generator::Cross), tops()]);
            let rhs = Term::w(n, 1).then(Term::w(1, m));
            push(&mut out, "ba_w", format!("n={n},m={m}"), lhs, rhs)?;
            if m > 0 && m < max {
                for (lit, r) in &labels {
                    let lhs = chain(vec![
                        par_n(n, || Term::z(1, m, r.clone())),
                        grid_transpose(n, m, Generator::Swap),
                        tops(),
                    ]);
                    let rhs = fan_in(n).then(Term::z(1, m, r.clone()));
                    push(&mut out, "ba_zw", format!("n={n},m={m},r={lit}"), lhs, rhs)?;
                }
            }
        }
    }
    Ok(out)
}

/// Small normal forms used to instantiate the negation, trace, tensor and
/// absorption schemas.
fn sample_nfs<S: Scalar>(labels: &[(String, S)]) -> Vec<(String, NormalForm<S>)> {
    let pick = |k: usize| labels.get(k % labels.len().max(1)).map(|l| l.1.clone()).unwrap_or_else(S::one);
    let bits = |s: &str| s.bytes().map(|c| c - b'0').collect::<Vec<u8>>();
    let shapes: [&[&str]; 4] = [&["00", "11", "01"], &["000", "011", "110"], &["1"], &["10", "01"]];
    let mut out = Vec::new();
    for (idx, rows) in shapes.iter().enumerate() {
        for shift in 0..2 {
            let n = rows[0].len();
            let rs: Vec<(S, Vec<u8>)> =
                rows.iter().enumerate().map(|(k, w)| (pick(idx + 2 * k + 3 * shift + 1), bits(w))).collect();
            let nf = NormalForm::from_rows(2, n, rs);
            let tag = nf
                .rows()
                .iter()
                .map(|(r, w)| format!("{}:{}", r.to_literal(), word_string(w)))
                .collect::<Vec<_>>()
                .join(" ");
            out.push((format!("[{tag}]"), nf));
        }
    }
    out
}

pub fn derived_instances<S: Scalar>(b: &Bounds) -> Result<Vec<RuleInstance<S>>> {
    let labels = b.labels::<S>();
    let mut out = load_catalogue(DERIVED_FILE, &labels)?;
    let max = b.max_spider_arity;

    for n in 0..=b.max_nm {
        // the last wire crosses the n outputs of a fan-out
        let dest: Vec<usize> = (0..=n).map(|i| if i == n { 0 } else { i + 1 }).collect();
        let lhs = Term::par(fan_out(n), Term::id()).then(permutation(&dest, &Generator::Cross).expect("nonempty"));
        let rhs = Term::cross().then(Term::par(Term::id(), fan_out(n)));
        push(&mut out, "xnat", format!("n={n}"), lhs, rhs)?;

        if n < max {
            let lhs = chain(vec![Some(Term::z(1, n, S::one())), par_n(n, not)]);
            push(&mut out, "aut", format!("n={n}"), lhs, not().then(Term::z(1, n, S::one())))?;
        }
    }

    for n in 2..=max.saturating_sub(1) {
        for (lit, r) in &labels {
            let lhs = Term::z(1, n, r.clone()).then(fan_in(n));
            let rhs = not().then(Term::w(1, 0)).then(Term::w(0, 1).then(not()));
            push(&mut out, "lp", format!("n={n},r={lit}"), lhs, rhs)?;
        }
    }

    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for n in 1..=b.max_nm {
        for start in 0..labels.len() {
            tuples.push((0..n).map(|k| (start + k * (k + 1)) % labels.len()).collect());
        }
    }
    for t in tuples {
        let n = t.len();
        let total = t.iter().fold(S::zero(), |acc, &k| acc + labels[k].1.clone());
        let whites = par_all(t.iter().map(|&k| Term::z(1, 1, labels[k].1.clone())));
        let lhs = chain(vec![Some(fan_out(n)), whites, Some(fan_in(n))]);
        let p = format!("r=({})", t.iter().map(|&k| labels[k].0.clone()).collect::<Vec<_>>().join(","));
        push(&mut out, "sum", p, lhs, Term::z(1, 1, total))?;
    }
    if let (Ok(a), Ok(bb), Ok(c)) = (S::parse_literal("1"), S::parse_literal("2"), S::parse_literal("3")) {
        let lhs = fan_out(3).then(
            par_all([Term::z(1, 1, a.clone()), Term::z(1, 1, bb.clone()), Term::z(1, 1, c.clone())]).expect("three"),
        );
        push(&mut out, "sum", "r=(1,2,3)".into(), lhs.then(fan_in(3)), Term::z(1, 1, a + bb + c))?;
    }

    for (lit, r) in &labels {
        let rhs = fan_in(0).then(Term::z(1, 0, r.clone()));
        push(&mut out, "ba_zw", format!("n=0,m=0,r={lit}"), one(), rhs)?;
    }
    for n in 0..=b.max_nm {
        for m in 1..=b.max_nm.min(max.saturating_sub(1)) {
            let (lit, r) = &labels[(n + m) % labels.len()];
            let lhs = chain(vec![
                par_n(n, || Term::z(1, m, r.clone())),
                grid_transpose(n, m, Generator::Swap),
                par_n(m, || fan_in(n)),
            ]);
            push(&mut out, "ba_zw", format!("n={n},m={m},r={lit}"), lhs, fan_in(n).then(Term::z(1, m, r.clone())))?;
        }
    }
    for n in 0..=b.max_nm {
        for m in 0..=b.max_nm {
            let lhs =
                chain(vec![par_n(n, || fan_out(m)), grid_transpose(n, m, Generator::Cross), par_n(m, || fan_in(n))]);
            push(&mut out, "ba_w", format!("n={n},m={m}"), lhs, Term::w(n, 1).then(Term::w(1, m)))?;
        }
    }

    let nfs = sample_nfs(&labels);
    for (tag, a) in &nfs {
        let t = nf_to_term(a)?;
        for j in 0..a.n {
            push(
                &mut out,
                "negation",
                format!("{tag},j={j}"),
                negate_output(t.clone(), j)?,
                nf_to_term(&nf_negate(a, j)?)?,
            )?;
        }
        for j in 0..a.n {
            for k in j + 1..a.n {
                let dest: Vec<usize> = (0..a.n)
                    .map(|i| match i {
                        i if i == j => a.n - 2,
                        i if i == k => a.n - 1,
                        i => i - usize::from(i > j) - usize::from(i > k),
                    })
                    .collect();
                let lhs = t.clone().then(permutation(&dest, &Generator::Swap).expect("nonempty")).then(padded(
                    a.n - 2,
                    Term::cap(),
                    0,
                ));
                push(&mut out, "trace", format!("{tag},j={j},k={k}"), lhs, nf_to_term(&nf_trace(a, j, k)?)?)?;
            }
        }
        let lhs = Term::par(t.clone(), zero_scalar());
        push(&mut out, "absorption", tag.clone(), lhs, nf_to_term(&NormalForm::empty(2, a.n))?)?;
    }
    for (ta, a) in nfs.iter().step_by(3) {
        for (tb, bnf) in nfs.iter().skip(1).step_by(3) {
            let lhs = Term::par(nf_to_term(a)?, nf_to_term(bnf)?);
            push(&mut out, "tensor", format!("{ta}x{tb}"), lhs, nf_to_term(&nf_tensor(a, bnf))?)?;
        }
    }
    Ok(out)
}
