//! Subfunctors of tensor powers, represented by their values on a fixed
//! `V = k^m` as subspaces of `T_q(V)` in dense word coordinates.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldRef, Scalar};
use crate::liealg::{left_normed_dense, lyndon_basis, lyndon_images, restricted_lie_power};
use crate::linalg::{CoordinateSolver, Matrix, SpanBuilder, Subspace};
use crate::natural::{factorial, Permutation};
use crate::tensoralg::{tensor_dim, word_from_index, word_index, Tensor, Word};

/// Largest `dim T_q(V)` any evaluation will materialize.
pub const MAX_AMBIENT: usize = 1 << 16;

/// Largest ambient for which `T_n(V)` is materialized with a dense identity basis.
pub const MAX_FULL_AMBIENT: usize = 1 << 13;

/// Unknown count above which the linear systems of the functorial checks are refused.
pub const MAX_CHECK_UNKNOWNS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorSpec {
    Tn(usize),
    Ln(usize),
    LresN(usize),
    /// Substitution closure of a seed in `T_n(V_N)`.
    Closure(Tensor),
    Bracket(Box<FunctorSpec>, Box<FunctorSpec>),
    TensorProd(Box<FunctorSpec>, Box<FunctorSpec>),
    /// `L_k` applied to the values of a homogeneous functor.
    Compose(usize, Box<FunctorSpec>),
    Sum(Box<FunctorSpec>, Box<FunctorSpec>),
    /// Sub Hopf algebra generated by Lie powers of the given degrees, through degree `cap`.
    SubHopfGen {
        degrees: Vec<usize>,
        cap: usize,
    },
}

impl fmt::Display for FunctorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorSpec::Tn(n) => write!(f, "T({n})"),
            FunctorSpec::Ln(n) => write!(f, "L({n})"),
            FunctorSpec::LresN(n) => write!(f, "Lres({n})"),
            FunctorSpec::Closure(t) => {
                write!(f, "Cl(")?;
                let field = t.field();
                for (i, (w, c)) in t.terms().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    if *c != Scalar::ONE {
                        write!(f, "{}", field.format(*c))?;
                    }
                    for &l in w.letters() {
                        write!(f, "x{l}")?;
                    }
                }
                write!(f, ")")
            }
            FunctorSpec::Bracket(a, b) => write!(f, "[{a},{b}]"),
            FunctorSpec::TensorProd(a, b) => write!(f, "({a}*{b})"),
            FunctorSpec::Compose(k, a) => write!(f, "L{k}.{a}"),
            FunctorSpec::Sum(a, b) => write!(f, "({a}+{b})"),
            FunctorSpec::SubHopfGen { degrees, cap } => {
                let d: Vec<String> = degrees.iter().map(|d| d.to_string()).collect();
                write!(f, "B{{{};{cap}}}", d.join(","))
            }
        }
    }
}

impl FunctorSpec {
    /// Parses the text grammar documented in the README.
    pub fn parse(field: &FieldRef, text: &str) -> Result<FunctorSpec> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { chars, pos: 0, field };
        let spec = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(spec)
    }

    /// Degrees in which the functor can be nonzero.
    pub fn degrees(&self) -> Vec<usize> {
        match self {
            FunctorSpec::Tn(n) | FunctorSpec::Ln(n) | FunctorSpec::LresN(n) => vec![*n],
            FunctorSpec::Closure(t) => vec![t.degree()],
            FunctorSpec::Bracket(a, b) | FunctorSpec::TensorProd(a, b) => {
                let mut out: Vec<usize> =
                    a.degrees().iter().flat_map(|i| b.degrees().into_iter().map(move |j| i + j)).collect();
                out.sort_unstable();
                out.dedup();
                out
            }
            FunctorSpec::Compose(k, a) => a.degrees().iter().map(|d| d * k).collect(),
            FunctorSpec::Sum(a, b) => {
                let mut out = a.degrees();
                out.extend(b.degrees());
                out.sort_unstable();
                out.dedup();
                out
            }
            FunctorSpec::SubHopfGen { cap, .. } => (0..=*cap).collect(),
        }
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    field: &'a FieldRef,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {}", self.pos))
    }
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }
    fn keyword(&mut self, kw: &str) -> bool {
        let k: Vec<char> = kw.chars().collect();
        if self.chars[self.pos..].starts_with(&k) {
            self.pos += k.len();
            true
        } else {
            false
        }
    }
    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error("number too large"))
    }
    fn positive(&mut self) -> Result<usize> {
        let n = self.number()?;
        if n == 0 {
            return Err(self.error("degree must be positive"));
        }
        Ok(n)
    }

    fn expr(&mut self) -> Result<FunctorSpec> {
        let mut left = self.term()?;
        while self.eat('+') {
            let right = self.term()?;
            left = FunctorSpec::Sum(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<FunctorSpec> {
        let mut left = self.factor()?;
        while self.eat('*') || self.eat('⊗') {
            let right = self.factor()?;
            left = FunctorSpec::TensorProd(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<FunctorSpec> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(FunctorSpec::Bracket(Box::new(a), Box::new(b)))
            }
            Some('T') => {
                self.pos += 1;
                self.expect('(')?;
                let n = self.positive()?;
                self.expect(')')?;
                Ok(FunctorSpec::Tn(n))
            }
            Some('B') => {
                self.pos += 1;
                self.expect('{')?;
                let mut degrees = Vec::new();
                if self.peek() != Some('}') && self.peek() != Some(';') {
                    degrees.push(self.positive()?);
                    while self.eat(',') {
                        degrees.push(self.positive()?);
                    }
                }
                let cap = if self.eat(';') { self.number()? } else { degrees.iter().copied().max().unwrap_or(0) };
                self.expect('}')?;
                degrees.sort_unstable();
                degrees.dedup();
                Ok(FunctorSpec::SubHopfGen { degrees, cap })
            }
            Some('C') => {
                if !self.keyword("Cl(") {
                    return Err(self.error("expected 'Cl('"));
                }
                let t = self.polynomial()?;
                self.expect(')')?;
                Ok(FunctorSpec::Closure(t))
            }
            Some('L') => {
                self.pos += 1;
                if self.keyword("res(") {
                    let n = self.positive()?;
                    self.expect(')')?;
                    return Ok(FunctorSpec::LresN(n));
                }
                if self.eat('(') {
                    let n = self.positive()?;
                    self.expect(')')?;
                    return Ok(FunctorSpec::Ln(n));
                }
                let k = self.positive()?;
                if !(self.eat('∘') || self.eat('.')) {
                    return Err(self.error("expected '∘' or '.' after L<k>"));
                }
                let inner = self.factor()?;
                Ok(FunctorSpec::Compose(k, Box::new(inner)))
            }
            _ => Err(self.error("expected a functor")),
        }
    }

    /// Integer-coefficient combination of words `x_i x_j ...`.
    fn polynomial(&mut self) -> Result<Tensor> {
        let mut terms: Vec<(Vec<usize>, i64)> = Vec::new();
        let mut first = true;
        loop {
            let mut sign = 1i64;
            if self.eat('-') {
                sign = -1;
            } else if !first && !self.eat('+') {
                break;
            }
            first = false;
            let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let c = self.number()? as i64;
                self.eat('*');
                c
            } else {
                1
            };
            let mut letters = Vec::new();
            while self.eat('x') {
                letters.push(self.positive()?);
            }
            if letters.is_empty() {
                return Err(self.error("expected a word x<i>..."));
            }
            terms.push((letters, sign * coeff));
        }
        let n = terms[0].0.len();
        if terms.iter().any(|(w, _)| w.len() != n) {
            return Err(self.error("closure seed must be homogeneous"));
        }
        let m = terms.iter().flat_map(|(w, _)| w.iter().copied()).max().unwrap_or(1);
        let field = self.field;
        let mut t = Tensor::zero(field, m, n);
        for (w, c) in terms {
            let word = Tensor::from_terms(field, m, n, [(Word::new(&w, m)?, field.from_int(c))])?;
            t = t.add(&word)?;
        }
        Ok(t)
    }
}

/// Values of a graded functor on `V = k^m`: degree `q` maps to a subspace of `T_q(V)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graded {
    pub m: usize,
    pub components: BTreeMap<usize, Subspace>,
}

impl Graded {
    pub fn component(&self, q: usize) -> Option<&Subspace> {
        self.components.get(&q)
    }
    pub fn dim(&self, q: usize) -> usize {
        self.components.get(&q).map_or(0, Subspace::dim)
    }
    /// The single nonzero-degree component of a homogeneous family.
    pub fn homogeneous(&self) -> Result<(usize, &Subspace)> {
        let mut it = self.components.iter().filter(|(_, s)| !s.is_zero());
        match (it.next(), it.next()) {
            (Some((&q, s)), None) => Ok((q, s)),
            (None, _) => self
                .components
                .iter()
                .next()
                .map(|(&q, s)| (q, s))
                .ok_or_else(|| Error::InvalidInput("empty functor".into())),
            _ => Err(Error::InvalidInput("functor is not homogeneous".into())),
        }
    }
}

pub fn ambient_dim(q: usize, m: usize) -> Result<usize> {
    tensor_dim(q, m)
        .filter(|&d| d <= MAX_AMBIENT)
        .ok_or_else(|| Error::CapExceeded(format!("T_{q} on {m} generators exceeds {MAX_AMBIENT} coordinates")))
}

/// `a (x) b` for `a` in `T_i(V)` and `b` in `T_j(V)`.
pub fn concat_dense(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; a.len() * b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x != 0 {
            f.axpy(&mut out[i * b.len()..(i + 1) * b.len()], x, b);
        }
    }
    out
}

pub fn bracket_dense(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = concat_dense(f, a, b);
    let ba = concat_dense(f, b, a);
    f.axpy(&mut out, f.neg_raw(1), &ba);
    out
}

fn product_span(f: &Field, a: &Subspace, b: &Subspace, bracket: bool) -> Subspace {
    let ambient = a.ambient() * b.ambient();
    let mut span = SpanBuilder::new(ambient);
    for x in a.basis_vecs() {
        for y in b.basis_vecs() {
            let v = if bracket { bracket_dense(f, &x, &y) } else { concat_dense(f, &x, &y) };
            span.insert(f, &v);
        }
    }
    span.into_subspace(f)
}

/// `L_k(W)` for `W` a subspace of `T_q(V)`, via bracketed Lyndon words on a basis of `W`.
pub fn lie_power_of(field: &FieldRef, m: usize, q: usize, w: &Subspace, k: usize) -> Result<Subspace> {
    let ambient = ambient_dim(q * k, m)?;
    if w.is_zero() || k == 0 {
        return Ok(Subspace::zero(ambient));
    }
    if k == 1 {
        return Ok(w.clone());
    }
    if w.dim() > u8::MAX as usize {
        return Err(Error::CapExceeded(format!("L_{k} of a space of dimension {}", w.dim())));
    }
    let gens: Vec<Tensor> = w.basis_vecs().iter().map(|v| Tensor::from_dense(field, m, q, v)).collect();
    let images = lyndon_images(&gens, k)?;
    let rows: Vec<Vec<u32>> = images.iter().map(Tensor::to_dense).collect();
    Ok(Subspace::from_rows(field, ambient, &rows))
}

pub fn evaluate(spec: &FunctorSpec, m: usize, field: &FieldRef) -> Result<Graded> {
    if m == 0 {
        return Err(Error::InvalidInput("at least one generator is required".into()));
    }
    let f = field.as_ref();
    let single = |q: usize, s: Subspace| Graded { m, components: BTreeMap::from([(q, s)]) };
    Ok(match spec {
        FunctorSpec::Tn(n) => {
            let ambient = ambient_dim(*n, m)?;
            if ambient > MAX_FULL_AMBIENT {
                return Err(Error::CapExceeded(format!("dense basis of T_{n} on {m} generators")));
            }
            single(*n, Subspace::full(ambient))
        }
        FunctorSpec::Ln(n) => {
            ambient_dim(*n, m)?;
            single(*n, lyndon_basis(*n, m, field)?)
        }
        FunctorSpec::LresN(n) => {
            ambient_dim(*n, m)?;
            single(*n, restricted_lie_power(*n, m, field)?)
        }
        FunctorSpec::Closure(seed) => single(seed.degree(), gl_closure(seed, m)?),
        FunctorSpec::Bracket(a, b) | FunctorSpec::TensorProd(a, b) => {
            let bracket = matches!(spec, FunctorSpec::Bracket(..));
            let (ea, eb) = (evaluate(a, m, field)?, evaluate(b, m, field)?);
            let mut components: BTreeMap<usize, Subspace> = BTreeMap::new();
            for (&i, sa) in &ea.components {
                for (&j, sb) in &eb.components {
                    ambient_dim(i + j, m)?;
                    let s = product_span(f, sa, sb, bracket);
                    let entry = components.entry(i + j).or_insert_with(|| Subspace::zero(s.ambient()));
                    *entry = entry.sum(f, &s);
                }
            }
            Graded { m, components }
        }
        FunctorSpec::Compose(k, a) => {
            let ea = evaluate(a, m, field)?;
            let (q, w) = ea.homogeneous()?;
            single(q * k, lie_power_of(field, m, q, w, *k)?)
        }
        FunctorSpec::Sum(a, b) => {
            let (ea, eb) = (evaluate(a, m, field)?, evaluate(b, m, field)?);
            let mut components = ea.components;
            for (q, s) in eb.components {
                let entry = components.entry(q).or_insert_with(|| Subspace::zero(s.ambient()));
                *entry = entry.sum(f, &s);
            }
            Graded { m, components }
        }
        FunctorSpec::SubHopfGen { degrees, cap } => subhopf_evaluate(degrees, *cap, m, field)?,
    })
}

/// A substitution `x_j -> sum_i c_i x_i`, stored per source letter.
pub type Substitution = Vec<Vec<(usize, u32)>>;

/// Generators of the monoid of `K x K` matrices acting on letters: elementary
/// transvections over a field basis, scaling by the field generator and
/// single-letter annihilations, in a fixed order.
pub fn monoid_generators(field: &Field, k: usize) -> Vec<Substitution> {
    let identity: Substitution = (0..k).map(|j| vec![(j, 1)]).collect();
    let mut out = Vec::new();
    let p = field.p();
    let basis: Vec<u32> = (0..field.e()).map(|t| p.pow(t)).collect();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            for &b in &basis {
                let mut s = identity.clone();
                s[j].push((i, b));
                out.push(s);
            }
        }
    }
    let g = field.generator().0;
    if g != 1 {
        for i in 0..k {
            let mut s = identity.clone();
            s[i] = vec![(i, g)];
            out.push(s);
        }
    }
    for i in 0..k {
        let mut s = identity.clone();
        s[i].clear();
        out.push(s);
    }
    out
}

/// Applies a letter substitution to a dense element of `T_n(V_k)`.
pub fn substitute_dense(f: &Field, v: &[u32], n: usize, k: usize, sub: &Substitution) -> Vec<u32> {
    let mut cur = v.to_vec();
    let mut letters = vec![0u8; n];
    for pos in 0..n {
        let stride = k.pow((n - 1 - pos) as u32);
        let mut next = vec![0u32; cur.len()];
        for (idx, &c) in cur.iter().enumerate() {
            if c == 0 {
                continue;
            }
            word_from_index(idx, n, k, &mut letters);
            let l = letters[pos] as usize - 1;
            let base = idx - l * stride;
            for &(target, coeff) in &sub[l] {
                let t = base + target * stride;
                next[t] = f.add_raw(next[t], f.mul_raw(c, coeff));
            }
        }
        cur = next;
    }
    cur
}

/// Matrix of a substitution on `T_n(V_k)`.
pub fn substitution_operator(f: &Field, n: usize, k: usize, sub: &Substitution) -> Result<Matrix> {
    let dim = ambient_dim(n, k)?;
    let mut cols = Vec::with_capacity(dim);
    let mut e = vec![0u32; dim];
    for j in 0..dim {
        e[j] = 1;
        cols.push(substitute_dense(f, &e, n, k, sub));
        e[j] = 0;
    }
    Ok(Matrix::from_columns(dim, &cols))
}

/// Smallest subspace of `T_n(V)` containing every substitution image of `seed`.
pub fn gl_closure(seed: &Tensor, m: usize) -> Result<Subspace> {
    let field = seed.field();
    let f = field.as_ref();
    let n = seed.degree();
    let k = seed.m().max(m);
    let big = ambient_dim(n, k)?;
    let target = ambient_dim(n, m)?;
    let mut start = vec![0u32; big];
    for (w, c) in seed.terms() {
        start[word_index(w.letters(), k)] = c.0;
    }
    let gens = monoid_generators(f, k);
    let mut span = SpanBuilder::new(big);
    let mut queue = VecDeque::new();
    if span.insert(f, &start) {
        queue.push_back(start);
    }
    while let Some(v) = queue.pop_front() {
        for g in &gens {
            let w = substitute_dense(f, &v, n, k, g);
            if span.insert(f, &w) {
                queue.push_back(w);
            }
        }
    }
    // restrict to words in the first m letters
    let mut keep = Vec::with_capacity(target);
    let mut letters = vec![0u8; n];
    for idx in 0..big {
        word_from_index(idx, n, k, &mut letters);
        if letters.iter().all(|&l| l as usize <= m) {
            keep.push(idx);
        }
    }
    let rows: Vec<Vec<u32>> = span.rows().iter().map(|r| keep.iter().map(|&i| r[i]).collect()).collect();
    Ok(Subspace::from_rows(f, target, &rows))
}

/// The sub Hopf algebra generated by `L_g(V)`, `g` in `gens`, through degree `cap`.
pub fn subhopf_evaluate(gens: &[usize], cap: usize, m: usize, field: &FieldRef) -> Result<Graded> {
    let f = field.as_ref();
    ambient_dim(cap, m)?;
    let lie: BTreeMap<usize, Subspace> = gens
        .iter()
        .filter(|&&g| g >= 1 && g <= cap)
        .map(|&g| Ok((g, lyndon_basis(g, m, field)?)))
        .collect::<Result<_>>()?;
    let mut components = BTreeMap::new();
    components.insert(0, Subspace::full(1));
    for q in 1..=cap {
        let mut span = SpanBuilder::new(m.pow(q as u32));
        for (&g, l) in &lie {
            if g > q {
                continue;
            }
            let rest: &Subspace = &components[&(q - g)];
            for x in l.basis_vecs() {
                for y in rest.basis_vecs() {
                    span.insert(f, &concat_dense(f, &x, &y));
                }
            }
        }
        components.insert(q, span.into_subspace(f));
    }
    Ok(Graded { m, components })
}

/// `sum_{0<i<q} B_i B_{q-i}` inside `T_q(V)`.
pub fn decomposables(b: &Graded, q: usize, field: &Field) -> Result<Subspace> {
    let ambient = ambient_dim(q, b.m)?;
    let mut span = SpanBuilder::new(ambient);
    for i in 1..q {
        let (Some(x), Some(y)) = (b.component(i), b.component(q - i)) else {
            return Err(Error::CapExceeded(format!("family not evaluated through degree {q}")));
        };
        for u in x.basis_vecs() {
            for v in y.basis_vecs() {
                span.insert(field, &concat_dense(field, &u, &v));
            }
        }
    }
    Ok(span.into_subspace(field))
}

#[derive(Clone, Debug)]
pub struct Indecomposables {
    pub dim: usize,
    /// Basis of a complement of the decomposables inside `B_q(V)`.
    pub complement: Vec<Vec<u32>>,
    pub decomposable: Subspace,
}

/// `Q_q B(V) = B_q(V) / sum_{0<i<q} B_i(V) B_{q-i}(V)`.
pub fn q_n_indecomposables(b: &Graded, q: usize, field: &Field) -> Result<Indecomposables> {
    let bq = b.component(q).ok_or_else(|| Error::CapExceeded(format!("family not evaluated in degree {q}")))?;
    let dec = decomposables(b, q, field)?;
    let complement = bq.complement_of(field, &dec);
    Ok(Indecomposables { dim: complement.len(), complement, decomposable: dec })
}

/// Multilinear part of a sub Hopf algebra generated by Lie powers: `B_q(V_q)`
/// and its decomposables restricted to words using every letter once, in
/// permutation coordinates (lexicographic rank of the letter sequence).
pub fn multilinear_subhopf(gens: &[usize], q: usize, field: &FieldRef) -> Result<(Subspace, Subspace)> {
    let f = field.as_ref();
    let order = factorial(q);
    let mut full = SpanBuilder::new(order);
    let mut dec = SpanBuilder::new(order);
    let mut sizes: Vec<usize> = gens.iter().copied().filter(|&g| g >= 1 && g <= q).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mut lie_cache: HashMap<Vec<u8>, Vec<Vec<(Vec<u8>, u32)>>> = HashMap::new();
    let mut blocks: Vec<Vec<u8>> = Vec::new();
    let mut used = vec![false; q];
    enumerate_ordered_partitions(q, &sizes, &mut used, &mut blocks, &mut |blocks| {
        let factors: Vec<Vec<Vec<(Vec<u8>, u32)>>> = blocks
            .iter()
            .map(|b| lie_cache.entry(b.clone()).or_insert_with(|| multilinear_lie_basis(f, b)).clone())
            .collect();
        let target = if blocks.len() == 1 { &mut full } else { &mut dec };
        let mut choice = vec![0usize; factors.len()];
        loop {
            let mut v = vec![0u32; order];
            let mut terms: Vec<(Vec<u8>, u32)> = vec![(Vec::new(), 1)];
            for (fac, &c) in factors.iter().zip(&choice) {
                let mut next = Vec::with_capacity(terms.len() * fac[c].len());
                for (w, a) in &terms {
                    for (u, b) in &fac[c] {
                        let mut word = w.clone();
                        word.extend_from_slice(u);
                        next.push((word, f.mul_raw(*a, *b)));
                    }
                }
                terms = next;
            }
            for (w, c) in terms {
                let images: Vec<usize> = w.iter().map(|&l| l as usize).collect();
                let r = Permutation::from_images(&images).expect("multilinear word").rank();
                v[r] = f.add_raw(v[r], c);
            }
            target.insert(f, &v);
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return;
                }
                choice[k] += 1;
                if choice[k] < factors[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    });
    let dec = dec.into_subspace(f);
    let mut full = full.into_subspace(f);
    full = full.sum(f, &dec);
    Ok((full, dec))
}

fn enumerate_ordered_partitions(
    q: usize,
    sizes: &[usize],
    used: &mut Vec<bool>,
    blocks: &mut Vec<Vec<u8>>,
    visit: &mut dyn FnMut(&[Vec<u8>]),
) {
    let remaining: Vec<u8> = (0..q).filter(|&i| !used[i]).map(|i| i as u8 + 1).collect();
    if remaining.is_empty() {
        if !blocks.is_empty() {
            visit(blocks);
        }
        return;
    }
    for &s in sizes {
        if s > remaining.len() {
            continue;
        }
        // every s-subset of the remaining letters, as the next block
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let block: Vec<u8> = idx.iter().map(|&i| remaining[i]).collect();
            for &l in &block {
                used[l as usize - 1] = true;
            }
            blocks.push(block.clone());
            enumerate_ordered_partitions(q, sizes, used, blocks, visit);
            blocks.pop();
            for &l in &block {
                used[l as usize - 1] = false;
            }
            let Some(pos) = (0..s).rev().find(|&k| idx[k] < remaining.len() - s + k) else { break };
            idx[pos] += 1;
            for k in pos + 1..s {
                idx[k] = idx[k - 1] + 1;
            }
        }
    }
}

/// Basis `[[x_{b_1}, x_{b_s(2)}], ..., x_{b_s(k)}]` of the multilinear Lie
/// elements on the letters of `block`, each as signed words.
fn multilinear_lie_basis(f: &Field, block: &[u8]) -> Vec<Vec<(Vec<u8>, u32)>> {
    let k = block.len();
    let rest = &block[1..];
    let mut out = Vec::new();
    for r in 0..factorial(k - 1) {
        let perm = Permutation::unrank(k - 1, r);
        let mut terms: Vec<(Vec<u8>, u32)> = vec![(vec![block[0]], 1)];
        for t in 0..k - 1 {
            let l = rest[perm.at(t)];
            let mut next = Vec::with_capacity(terms.len() * 2);
            for (w, c) in terms {
                let mut a = w.clone();
                a.push(l);
                let mut b = vec![l];
                b.extend_from_slice(&w);
                next.push((a, c));
                next.push((b, f.neg_raw(c)));
            }
            terms = next;
        }
        out.push(terms);
    }
    out
}

/// Matrix of `u v -> u v - v u` on `T_{i+j}(V)`, `u` of length `i`.
pub fn bracket_operator(i: usize, j: usize, m: usize, field: &Field) -> Result<Matrix> {
    let dim = ambient_dim(i + j, m)?;
    let (di, dj) = (m.pow(i as u32), m.pow(j as u32));
    let mut out = Matrix::zeros(dim, dim);
    for u in 0..di {
        for v in 0..dj {
            let col = u * dj + v;
            out.set(col, col, 1);
            let swapped = v * di + u;
            out.set(swapped, col, field.sub_raw(out.get(swapped, col), 1));
        }
    }
    Ok(out)
}

/// Matrix of the left-normed bracketing `a_1..a_n -> [[a_1, a_2], ..., a_n]` on `T_n(V)`.
pub fn left_normed_operator(n: usize, m: usize, field: &Field) -> Result<Matrix> {
    let dim = ambient_dim(n, m)?;
    let mut cols = Vec::with_capacity(dim);
    let mut e = vec![0u32; dim];
    for j in 0..dim {
        e[j] = 1;
        cols.push(left_normed_dense(field, m, n, &e));
        e[j] = 0;
    }
    Ok(Matrix::from_columns(dim, &cols))
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctorialCheck {
    pub stable: bool,
    /// Equivariant `r : T_n(V) -> M` with `r|_M = id`, in the coordinates of `M`'s basis.
    pub retraction: Option<Matrix>,
    /// Equivariant `s : M -> T_n(V)` with `beta_n o s` the inclusion.
    pub lifting: Option<Matrix>,
    pub holds: bool,
}

/// Searches for the retraction and the lifting of a subfunctor value
/// `M ⊆ L_n(V)`, with equivariance imposed against [`monoid_generators`].
pub fn functorial_tn_projective_check(
    module: &Subspace,
    n: usize,
    m: usize,
    field: &FieldRef,
) -> Result<FunctorialCheck> {
    let f = field.as_ref();
    let dim = ambient_dim(n, m)?;
    if module.ambient() != dim {
        return Err(Error::DimensionMismatch(format!("expected a subspace of T_{n} on {m} generators")));
    }
    let dm = module.dim();
    if dm == 0 {
        return Ok(FunctorialCheck {
            stable: true,
            retraction: Some(Matrix::zeros(0, dim)),
            lifting: Some(Matrix::zeros(dim, 0)),
            holds: true,
        });
    }
    if dm * dim > MAX_CHECK_UNKNOWNS {
        return Err(Error::CapExceeded(format!("{} unknowns in the functorial check", dm * dim)));
    }
    let basis = module.basis_vecs();
    let solver = CoordinateSolver::new(f, dim, &basis).expect("echelon basis");
    let gens: Vec<Matrix> =
        monoid_generators(f, m).iter().map(|s| substitution_operator(f, n, m, s)).collect::<Result<_>>()?;
    let mut restricted = Vec::with_capacity(gens.len());
    for g in &gens {
        let mut a = Matrix::zeros(dm, dm);
        for (j, b) in basis.iter().enumerate() {
            let Some(c) = solver.coords(f, &g.mul_vec(f, b)) else {
                return Ok(FunctorialCheck { stable: false, retraction: None, lifting: None, holds: false });
            };
            for (r, &x) in c.iter().enumerate() {
                a.set(r, j, x);
            }
        }
        restricted.push(a);
    }
    let bmat = Matrix::from_columns(dim, &basis);

    // retraction R (dm x dim): R G = A R, R B = I
    let idx = |a: usize, b: usize| a * dim + b;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (g, a) in gens.iter().zip(&restricted) {
        for r in 0..dm {
            for c in 0..dim {
                let mut eq = vec![0u32; dm * dim];
                for b in 0..dim {
                    let x = g.get(b, c);
                    if x != 0 {
                        eq[idx(r, b)] = f.add_raw(eq[idx(r, b)], x);
                    }
                }
                for r2 in 0..dm {
                    let x = a.get(r, r2);
                    if x != 0 {
                        eq[idx(r2, c)] = f.sub_raw(eq[idx(r2, c)], x);
                    }
                }
                rows.push(eq);
                rhs.push(0);
            }
        }
    }
    for r in 0..dm {
        for k in 0..dm {
            let mut eq = vec![0u32; dm * dim];
            for b in 0..dim {
                eq[idx(r, b)] = bmat.get(b, k);
            }
            rows.push(eq);
            rhs.push(u32::from(r == k));
        }
    }
    let retraction = Matrix::from_rows(dm * dim, &rows).solve(f, &rhs).map(|x| Matrix::from_vec(dm, dim, x));

    // lifting S (dim x dm): G S = S A, beta S = B
    let beta = left_normed_operator(n, m, f)?;
    let sidx = |b: usize, a: usize| b * dm + a;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (g, a) in gens.iter().zip(&restricted) {
        for b in 0..dim {
            for c in 0..dm {
                let mut eq = vec![0u32; dim * dm];
                for b2 in 0..dim {
                    let x = g.get(b, b2);
                    if x != 0 {
                        eq[sidx(b2, c)] = f.add_raw(eq[sidx(b2, c)], x);
                    }
                }
                for a2 in 0..dm {
                    let x = a.get(a2, c);
                    if x != 0 {
                        eq[sidx(b, a2)] = f.sub_raw(eq[sidx(b, a2)], x);
                    }
                }
                rows.push(eq);
                rhs.push(0);
            }
        }
    }
    for c in 0..dim {
        for k in 0..dm {
            let mut eq = vec![0u32; dim * dm];
            for b in 0..dim {
                eq[sidx(b, k)] = beta.get(c, b);
            }
            rows.push(eq);
            rhs.push(bmat.get(c, k));
        }
    }
    let lifting = Matrix::from_rows(dim * dm, &rows).solve(f, &rhs).map(|x| Matrix::from_vec(dim, dm, x));
    let holds = retraction.is_some() && lifting.is_some();
    Ok(FunctorialCheck { stable: true, retraction, lifting, holds })
}

/// Whether `map` (an operator on `T_n(V)`) restricts to an isomorphism
/// `A -> B` commuting with every substitution generator.
pub fn equivariant_iso_check(
    a: &Subspace,
    b: &Subspace,
    map: &Matrix,
    n: usize,
    m: usize,
    field: &FieldRef,
) -> Result<bool> {
    let f = field.as_ref();
    let dim = ambient_dim(n, m)?;
    if a.ambient() != dim || b.ambient() != dim || map.rows() != dim || map.cols() != dim {
        return Err(Error::DimensionMismatch("iso check expects operators on T_n(V)".into()));
    }
    if a.dim() != b.dim() {
        return Ok(false);
    }
    let images: Vec<Vec<u32>> = a.basis_vecs().iter().map(|v| map.mul_vec(f, v)).collect();
    if images.iter().any(|v| !b.contains(f, v)) {
        return Ok(false);
    }
    if Subspace::from_rows(f, dim, &images).dim() != a.dim() {
        return Ok(false);
    }
    for s in monoid_generators(f, m) {
        for v in a.basis_vecs() {
            let gv = substitute_dense(f, &v, n, m, &s);
            if !a.contains(f, &gv) {
                return Ok(false);
            }
            let lhs = map.mul_vec(f, &gv);
            let rhs = substitute_dense(f, &map.mul_vec(f, &v), n, m, &s);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
