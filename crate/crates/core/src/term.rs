//! Diagram terms: generators, sequential and parallel composition, and the
//! textual syntax.
//!
//! ```text
//! term := atom | term ";" term | term "*" atom
//! atom := "id" | "swap" | "cup" | "cap" | "x" | "xinv"
//!       | "w(" nat "," nat ")" | "z(" nat "," nat ")" "[" ringlit "]"
//!       | "ket(" nat ")" | "(" term ")"
//! ```

use std::fmt;

use crate::error::{Result, ZwError};
use crate::ring::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum Generator<S> {
    Id,
    Swap,
    Cup,
    Cap,
    Cross,
    CrossInv,
    WSpider(usize, usize),
    ZSpider(usize, usize, S),
    Ket(usize),
}

impl<S: Scalar> Generator<S> {
    pub fn arity(&self) -> (usize, usize) {
        match self {
            Generator::Id => (1, 1),
            Generator::Swap | Generator::Cross | Generator::CrossInv => (2, 2),
            Generator::Cup => (0, 2),
            Generator::Cap => (2, 0),
            Generator::WSpider(a, b) | Generator::ZSpider(a, b, _) => (*a, *b),
            Generator::Ket(_) => (0, 1),
        }
    }

    fn validate(&self, d: Option<usize>) -> Result<()> {
        match self {
            Generator::WSpider(0, 0) | Generator::ZSpider(0, 0, _) => {
                Err(ZwError::Generator("spiders need at least one leg".into()))
            }
            Generator::Ket(k) => match d {
                Some(d) if *k >= d => Err(ZwError::Generator(format!("ket({k}) needs level below d={d}"))),
                _ => Ok(()),
            },
            _ => Ok(()),
        }
    }

    fn render(&self) -> String {
        match self {
            Generator::Id => "id".into(),
            Generator::Swap => "swap".into(),
            Generator::Cup => "cup".into(),
            Generator::Cap => "cap".into(),
            Generator::Cross => "x".into(),
            Generator::CrossInv => "xinv".into(),
            Generator::WSpider(a, b) => format!("w({a},{b})"),
            Generator::ZSpider(a, b, r) => format!("z({a},{b})[{}]", r.to_literal()),
            Generator::Ket(k) => format!("ket({k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node<S> {
    Gen(Generator<S>),
    Seq(Box<Term<S>>, Box<Term<S>>),
    Par(Box<Term<S>>, Box<Term<S>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term<S> {
    node: Node<S>,
    n_in: usize,
    n_out: usize,
}

impl<S: Scalar> Term<S> {
    /// Leaf term. `d` is checked against `Ket` levels when given.
    pub fn make(g: Generator<S>, d: Option<usize>) -> Result<Self> {
        g.validate(d)?;
        let (n_in, n_out) = g.arity();
        Ok(Term { node: Node::Gen(g), n_in, n_out })
    }

    /// Leaf term; panics on an invalid generator. Meant for literal
    /// construction in code where the arity is known to be valid.
    pub fn gen(g: Generator<S>) -> Self {
        Self::make(g, None).expect("valid generator")
    }

    pub fn id() -> Self {
        Self::gen(Generator::Id)
    }
    pub fn swap() -> Self {
        Self::gen(Generator::Swap)
    }
    pub fn cup() -> Self {
        Self::gen(Generator::Cup)
    }
    pub fn cap() -> Self {
        Self::gen(Generator::Cap)
    }
    pub fn cross() -> Self {
        Self::gen(Generator::Cross)
    }
    pub fn w(a: usize, b: usize) -> Self {
        Self::gen(Generator::WSpider(a, b))
    }
    pub fn z(a: usize, b: usize, r: S) -> Self {
        Self::gen(Generator::ZSpider(a, b, r))
    }
    pub fn ket(k: usize) -> Self {
        Self::gen(Generator::Ket(k))
    }

    pub fn seq(f: Term<S>, g: Term<S>) -> Result<Self> {
        Self::seq_at(f, g, 0)
    }

    fn seq_at(f: Term<S>, g: Term<S>, pos: usize) -> Result<Self> {
        if f.n_out != g.n_in {
            return Err(ZwError::Arity { pos, left_out: f.n_out, right_in: g.n_in });
        }
        let (n_in, n_out) = (f.n_in, g.n_out);
        Ok(Term { node: Node::Seq(Box::new(f), Box::new(g)), n_in, n_out })
    }

    pub fn par(f: Term<S>, g: Term<S>) -> Self {
        let (n_in, n_out) = (f.n_in + g.n_in, f.n_out + g.n_out);
        Term { node: Node::Par(Box::new(f), Box::new(g)), n_in, n_out }
    }

    /// Sequential composition for callers that built both sides themselves.
    pub fn then(self, g: Term<S>) -> Self {
        Self::seq(self, g).expect("matching arities")
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }
    pub fn n_out(&self) -> usize {
        self.n_out
    }
    pub fn arity(&self) -> (usize, usize) {
        (self.n_in, self.n_out)
    }
    pub fn node(&self) -> &Node<S> {
        &self.node
    }

    /// Number of generator leaves.
    pub fn size(&self) -> usize {
        match &self.node {
            Node::Gen(_) => 1,
            Node::Seq(a, b) | Node::Par(a, b) => a.size() + b.size(),
        }
    }

    /// Applies `f` to every generator, keeping the tree shape.
    pub fn map_generators(&self, f: &mut impl FnMut(&Generator<S>) -> Generator<S>) -> Self {
        match &self.node {
            Node::Gen(g) => Term::gen(f(g)),
            Node::Seq(a, b) => Term::seq(a.map_generators(f), b.map_generators(f)).expect("arity preserved"),
            Node::Par(a, b) => Term::par(a.map_generators(f), b.map_generators(f)),
        }
    }

    pub fn generators(&self) -> Vec<&Generator<S>> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a Generator<S>>) {
        match &self.node {
            Node::Gen(g) => out.push(g),
            Node::Seq(a, b) | Node::Par(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    pub fn render(&self) -> String {
        match &self.node {
            Node::Gen(g) => g.render(),
            Node::Seq(f, g) => {
                let rhs = match g.node {
                    Node::Seq(..) => format!("({})", g.render()),
                    _ => g.render(),
                };
                format!("{} ; {}", f.render(), rhs)
            }
            Node::Par(f, g) => {
                let lhs = match f.node {
                    Node::Seq(..) => format!("({})", f.render()),
                    _ => f.render(),
                };
                let rhs = match g.node {
                    Node::Gen(_) => g.render(),
                    _ => format!("({})", g.render()),
                };
                format!("{lhs} * {rhs}")
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(t)
    }
}

impl<S: Scalar> fmt::Display for Term<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ZwError {
        ZwError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn term<S: Scalar>(&mut self) -> Result<Term<S>> {
        let mut t = self.product()?;
        while self.peek() == Some(b';') {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.product()?;
            t = Term::seq_at(t, rhs, at)?;
        }
        Ok(t)
    }

    fn product<S: Scalar>(&mut self) -> Result<Term<S>> {
        let mut t = self.atom()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            t = Term::par(t, self.atom()?);
        }
        Ok(t)
    }

    fn nat(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ZwError::Syntax { pos: start, msg: "expected a natural number".into() })
    }

    fn pair(&mut self) -> Result<(usize, usize)> {
        self.expect(b'(')?;
        let a = self.nat()?;
        self.expect(b',')?;
        let b = self.nat()?;
        self.expect(b')')?;
        Ok((a, b))
    }

    fn atom<S: Scalar>(&mut self) -> Result<Term<S>> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let t = self.term()?;
            self.expect(b')')?;
            return Ok(t);
        }
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        let g = match word {
            "id" => Generator::Id,
            "swap" => Generator::Swap,
            "cup" => Generator::Cup,
            "cap" => Generator::Cap,
            "x" => Generator::Cross,
            "xinv" => Generator::CrossInv,
            "w" => {
                let (a, b) = self.pair()?;
                Generator::WSpider(a, b)
            }
            "z" => {
                let (a, b) = self.pair()?;
                self.expect(b'[')?;
                let lit_start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos] != b']' {
                    self.pos += 1;
                }
                let lit = std::str::from_utf8(&self.src[lit_start..self.pos]).unwrap_or("");
                let r = S::parse_literal(lit).map_err(|e| ZwError::Syntax { pos: lit_start, msg: e.to_string() })?;
                self.expect(b']')?;
                Generator::ZSpider(a, b, r)
            }
            "ket" => {
                self.expect(b'(')?;
                let k = self.nat()?;
                self.expect(b')')?;
                Generator::Ket(k)
            }
            _ => return Err(ZwError::Syntax { pos: start, msg: format!("unknown atom `{word}`") }),
        };
        Term::make(g, None).map_err(|e| ZwError::Syntax { pos: start, msg: e.to_string() })
    }
}

/// Parallel composition of a list; `None` stands for the empty diagram.
pub fn par_all<S: Scalar>(parts: impl IntoIterator<Item = Term<S>>) -> Option<Term<S>> {
    parts.into_iter().reduce(Term::par)
}

/// `k` parallel identity wires.
pub fn ids<S: Scalar>(k: usize) -> Option<Term<S>> {
    par_all((0..k).map(|_| Term::id()))
}

/// `ids(before) * g * ids(after)`.
pub fn padded<S: Scalar>(before: usize, g: Term<S>, after: usize) -> Term<S> {
    let left = match ids(before) {
        Some(l) => Term::par(l, g),
        None => g,
    };
    match ids(after) {
        Some(r) => Term::par(left, r),
        None => left,
    }
}

pub fn par_opt<S: Scalar>(a: Option<Term<S>>, b: Option<Term<S>>) -> Option<Term<S>> {
    match (a, b) {
        (Some(a), Some(b)) => Some(Term::par(a, b)),
        (a, b) => a.or(b),
    }
}

pub fn seq_opt<S: Scalar>(a: Option<Term<S>>, b: Option<Term<S>>) -> Result<Option<Term<S>>> {
    match (a, b) {
        (Some(a), Some(b)) => Term::seq(a, b).map(Some),
        (Some(t), None) | (None, Some(t)) => {
            if t.n_in == 0 && t.n_out == 0 {
                Ok(Some(t))
            } else {
                Err(ZwError::Arity { pos: 0, left_out: 0, right_in: t.n_in.max(t.n_out) })
            }
        }
        (None, None) => Ok(None),
    }
}

/// Sequential composition of layers acting on the same wires.
pub fn seq_all<S: Scalar>(parts: impl IntoIterator<Item = Term<S>>) -> Option<Term<S>> {
    parts.into_iter().reduce(|a, b| a.then(b))
}

/// The scalar 1 as a term, used where a diagram would otherwise be empty.
pub fn one<S: Scalar>() -> Term<S> {
    Term::w(0, 1).then(Term::w(1, 0))
}

/// A wire network sending wire `i` to position `dest[i]`, built from adjacent
/// copies of `gate` (a two-wire generator such as swap or crossing) by
/// bubble sort. Returns `None` on zero wires.
pub fn permutation<S: Scalar>(dest: &[usize], gate: &Generator<S>) -> Option<Term<S>> {
    let n = dest.len();
    let mut cur: Vec<usize> = (0..n).collect();
    let mut layers = Vec::new();
    loop {
        let mut moved = false;
        for p in 0..n.saturating_sub(1) {
            if dest[cur[p]] > dest[cur[p + 1]] {
                cur.swap(p, p + 1);
                layers.push(padded(p, Term::gen(gate.clone()), n - p - 2));
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    seq_all(layers).or_else(|| ids(n))
}

/// Bends output `k` of `t` into a new last input, using a plain-swap routing
/// followed by a cap.
pub fn transpose_output<S: Scalar>(t: &Term<S>, k: usize) -> Result<Term<S>> {
    let m = t.n_out;
    if k >= m {
        return Err(ZwError::Index { index: k, size: m });
    }
    // outputs (o_0..o_{m-1}, new); move o_k to position m-1, the rest close up
    let dest: Vec<usize> = (0..=m)
        .map(|i| match i {
            i if i == k => m - 1,
            i if i < k => i,
            i if i < m => i - 1,
            _ => m,
        })
        .collect();
    let routed = Term::par(t.clone(), Term::id()).then(permutation(&dest, &Generator::Swap).expect("nonempty"));
    Ok(routed.then(padded(m - 1, Term::cap(), 0)))
}

/// Bends input `j` of `t` into a new output placed at position `pos`.
pub fn transpose_input<S: Scalar>(t: &Term<S>, j: usize, pos: usize) -> Result<Term<S>> {
    let n = t.n_in;
    if j >= n {
        return Err(ZwError::Index { index: j, size: n });
    }
    if pos > t.n_out {
        return Err(ZwError::Index { index: pos, size: t.n_out + 1 });
    }
    // cup gives (a, a'); a' goes to input slot j of t, a stays on the left
    let start = padded(0, Term::cup(), n - 1);
    let dest: Vec<usize> = (0..=n)
        .map(|i| match i {
            0 => 0,
            1 => j + 1,
            i if i - 2 < j => i - 1,
            i => i,
        })
        .collect();
    let fed =
        start.then(permutation(&dest, &Generator::Swap).expect("nonempty")).then(Term::par(Term::id(), t.clone()));
    let m = t.n_out + 1;
    let out: Vec<usize> = (0..m)
        .map(|i| match i {
            0 => pos,
            i if i <= pos => i - 1,
            i => i,
        })
        .collect();
    Ok(fed.then(permutation(&out, &Generator::Swap).expect("nonempty")))
}
