//! The graded tensor algebra `T(V)` on `m` generators with its shuffle-dual
//! Hopf structure.
//!
//! Letters are 1-based generator indices. Dense coordinates of `T_n(V)` index
//! words in lexicographic order: `x_{a_1}..x_{a_n} -> sum (a_k - 1) m^{n-k}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldRef, Scalar};
use crate::linalg::{Matrix, Subspace};
use crate::natural::GroupAlgebraElement;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<u8>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.0 {
            write!(f, "x{l}")?;
        }
        Ok(())
    }
}

impl Word {
    pub fn new(letters: &[usize], m: usize) -> Result<Word> {
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l > m) {
            return Err(Error::IndexOutOfRange { index: bad, bound: m });
        }
        Ok(Word(letters.iter().map(|&l| l as u8).collect()))
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub(crate) fn from_letters_unchecked(letters: Vec<u8>) -> Word {
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn index(&self, m: usize) -> usize {
        word_index(&self.0, m)
    }

    pub fn from_index(idx: usize, n: usize, m: usize) -> Word {
        let mut v = vec![0u8; n];
        word_from_index(idx, n, m, &mut v);
        Word(v)
    }
}

/// Dense index of a word with 1-based letters.
#[inline]
pub fn word_index(letters: &[u8], m: usize) -> usize {
    letters.iter().fold(0, |acc, &l| acc * m + (l as usize - 1))
}

/// Inverse of [`word_index`], writing 1-based letters into `out`.
#[inline]
pub fn word_from_index(mut idx: usize, n: usize, m: usize, out: &mut [u8]) {
    for k in (0..n).rev() {
        out[k] = (idx % m) as u8 + 1;
        idx /= m;
    }
}

/// Dimension of `T_n(V)` for `dim V = m`, or `None` on overflow.
pub fn tensor_dim(n: usize, m: usize) -> Option<usize> {
    m.checked_pow(n as u32)
}

/// Dense indices of `T_n(V)` grouped by letter content (multiset of letters).
/// Each class is spanned by words with the same content and is preserved by
/// every natural operation used in this crate.
pub fn content_classes(n: usize, m: usize) -> Vec<Vec<usize>> {
    let dim = m.pow(n as u32);
    let mut classes: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
    let mut letters = vec![0u8; n];
    for idx in 0..dim {
        word_from_index(idx, n, m, &mut letters);
        let mut content = vec![0u8; m];
        for &l in &letters {
            content[l as usize - 1] += 1;
        }
        classes.entry(content).or_default().push(idx);
    }
    classes.into_values().collect()
}

/// A homogeneous element of `T_n(V)` in canonical sparse form.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    field: FieldRef,
    m: usize,
    n: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{}*{:?}", self.field.format(*c), w)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    word: Vec<usize>,
    coeff: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    m: usize,
    n: usize,
    terms: Vec<TermJson>,
}

impl Tensor {
    pub fn zero(field: &FieldRef, m: usize, n: usize) -> Tensor {
        Tensor { field: field.clone(), m, n, terms: BTreeMap::new() }
    }

    /// The unit `1` in degree 0.
    pub fn unit(field: &FieldRef, m: usize) -> Tensor {
        let mut t = Tensor::zero(field, m, 0);
        t.terms.insert(Word::empty(), Scalar::ONE);
        t
    }

    pub fn word(field: &FieldRef, m: usize, letters: &[usize]) -> Result<Tensor> {
        let w = Word::new(letters, m)?;
        let mut t = Tensor::zero(field, m, w.len());
        t.terms.insert(w, Scalar::ONE);
        Ok(t)
    }

    pub fn generator(field: &FieldRef, m: usize, i: usize) -> Result<Tensor> {
        Tensor::word(field, m, &[i])
    }

    pub fn from_terms(
        field: &FieldRef,
        m: usize,
        n: usize,
        terms: impl IntoIterator<Item = (Word, Scalar)>,
    ) -> Result<Tensor> {
        let mut t = Tensor::zero(field, m, n);
        for (w, c) in terms {
            if w.len() != n {
                return Err(Error::DegreeMismatch { expected: n, found: w.len() });
            }
            if w.0.iter().any(|&l| l == 0 || l as usize > m) {
                return Err(Error::InvalidInput(format!("word {w:?} uses letters outside 1..={m}")));
            }
            t.add_term(w, c);
        }
        Ok(t)
    }

    pub fn from_dense(field: &FieldRef, m: usize, n: usize, v: &[u32]) -> Tensor {
        assert_eq!(v.len(), m.pow(n as u32));
        let mut t = Tensor::zero(field, m, n);
        for (idx, &c) in v.iter().enumerate() {
            if c != 0 {
                t.terms.insert(Word::from_index(idx, n, m), Scalar(c));
            }
        }
        t
    }

    pub fn to_dense(&self) -> Vec<u32> {
        let mut v = vec![0u32; self.m.pow(self.n as u32)];
        for (w, c) in &self.terms {
            v[w.index(self.m)] = c.0;
        }
        v
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn degree(&self) -> usize {
        self.n
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).copied().unwrap_or(Scalar::ZERO)
    }

    pub(crate) fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Tensor) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.m != other.m {
            return Err(Error::GeneratorCountMismatch(self.m, other.m));
        }
        Ok(())
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.check(other)?;
        if self.n != other.n {
            return Err(Error::DegreeMismatch { expected: self.n, found: other.n });
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.add(&other.scale(self.field.neg(Scalar::ONE)))
    }

    pub fn scale(&self, a: Scalar) -> Tensor {
        let mut out = Tensor::zero(&self.field, self.m, self.n);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), self.field.mul(*c, a));
        }
        out
    }

    /// Substitutes generators: letter `i` is replaced by `images[i - 1]`,
    /// a linear form over `m_target` generators given densely.
    pub fn substitute(&self, m_target: usize, images: &[Vec<u32>]) -> Tensor {
        assert_eq!(images.len(), self.m);
        let f = &self.field;
        let dim = m_target.pow(self.n as u32);
        let mut acc = vec![0u32; dim];
        for (w, c) in &self.terms {
            let mut cur: Vec<(usize, u32)> = vec![(0, c.0)];
            for &l in w.letters() {
                let img = &images[l as usize - 1];
                let mut next = Vec::with_capacity(cur.len() * m_target);
                for &(idx, a) in &cur {
                    for (j, &b) in img.iter().enumerate() {
                        if b != 0 {
                            next.push((idx * m_target + j, f.mul_raw(a, b)));
                        }
                    }
                }
                cur = next;
            }
            for (idx, a) in cur {
                acc[idx] = f.add_raw(acc[idx], a);
            }
        }
        Tensor::from_dense(f, m_target, self.n, &acc)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| TermJson { word: w.0.iter().map(|&l| l as usize).collect(), coeff: c.coeffs(&self.field) })
            .collect();
        serde_json::to_value(TensorJson { m: self.m, n: self.n, terms }).expect("serializable")
    }

    pub fn from_json(field: &FieldRef, v: &serde_json::Value) -> Result<Tensor> {
        let parsed: TensorJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut terms = Vec::new();
        for t in parsed.terms {
            terms.push((Word::new(&t.word, parsed.m)?, Scalar::from_coeffs(field, &t.coeff)?));
        }
        Tensor::from_terms(field, parsed.m, parsed.n, terms)
    }
}

/// Concatenation product.
pub fn concat(t: &Tensor, u: &Tensor) -> Result<Tensor> {
    t.check(u)?;
    let f = &t.field;
    let mut out = Tensor::zero(f, t.m, t.n + u.n);
    for (a, x) in &t.terms {
        for (b, y) in &u.terms {
            out.add_term(a.concat(b), f.mul(*x, *y));
        }
    }
    Ok(out)
}

/// Element of `(T (x) T)_n`, keyed by (left word, right word).
/// Word order is degree-first, so iteration visits splits `(0, n), (1, n-1), ...` in turn.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorPairSum {
    field: FieldRef,
    m: usize,
    n: usize,
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl fmt::Debug for TensorPairSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.terms.iter().map(|((a, b), c)| format!("{}*{:?}(x){:?}", self.field.format(*c), a, b)).collect();
        write!(f, "{}", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") })
    }
}

impl TensorPairSum {
    pub fn zero(field: &FieldRef, m: usize, n: usize) -> TensorPairSum {
        TensorPairSum { field: field.clone(), m, n, terms: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: (Word, Word), c: Scalar) {
        if c.is_zero() {
            return;
        }
        let s = self.field.add(self.terms.get(&key).copied().unwrap_or(Scalar::ZERO), c);
        if s.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, s);
        }
    }

    /// The `(i, n - i)` block as a pair of tensors per summand.
    pub fn split(&self, i: usize) -> Vec<(Tensor, Tensor)> {
        self.terms
            .iter()
            .filter(|((a, _), _)| a.len() == i)
            .map(|((a, b), c)| {
                let mut l = Tensor::zero(&self.field, self.m, a.len());
                l.add_term(a.clone(), *c);
                let mut r = Tensor::zero(&self.field, self.m, b.len());
                r.add_term(b.clone(), Scalar::ONE);
                (l, r)
            })
            .collect()
    }

    pub fn swap(&self) -> TensorPairSum {
        let mut out = TensorPairSum::zero(&self.field, self.m, self.n);
        for ((a, b), c) in &self.terms {
            out.add_term((b.clone(), a.clone()), *c);
        }
        out
    }

    /// Componentwise product `(a (x) b)(c (x) d) = ac (x) bd`.
    pub fn mul(&self, other: &TensorPairSum) -> TensorPairSum {
        let f = &self.field;
        let mut out = TensorPairSum::zero(f, self.m, self.n + other.n);
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                out.add_term((a.concat(c), b.concat(d)), f.mul(*x, *y));
            }
        }
        out
    }

    pub fn add(&self, other: &TensorPairSum) -> TensorPairSum {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), *c);
        }
        out
    }

    /// `(g (x) h)` applied termwise, with `g, h` given on words.
    pub fn map_each(&self, g: impl Fn(&Word) -> Tensor, h: impl Fn(&Word) -> Tensor) -> TensorPairSum {
        let f = &self.field;
        let mut out = TensorPairSum::zero(f, self.m, self.n);
        for ((a, b), c) in &self.terms {
            let ga = g(a);
            let hb = h(b);
            for (u, x) in ga.terms() {
                for (v, y) in hb.terms() {
                    out.add_term((u.clone(), v.clone()), f.mul(*c, f.mul(*x, *y)));
                }
            }
        }
        out
    }

    /// Multiplies the two factors back together.
    pub fn multiply_out(&self) -> Tensor {
        let mut out = Tensor::zero(&self.field, self.m, self.n);
        for ((a, b), c) in &self.terms {
            out.add_term(a.concat(b), *c);
        }
        out
    }
}

/// All `2^n` order-preserving splits of a word into (left, right) subwords.
pub fn word_coproduct(w: &Word) -> Vec<(Word, Word)> {
    let n = w.len();
    (0u32..(1u32 << n))
        .map(|mask| {
            let mut l = Vec::new();
            let mut r = Vec::new();
            for (k, &x) in w.0.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    l.push(x);
                } else {
                    r.push(x);
                }
            }
            (Word(l), Word(r))
        })
        .collect()
}

/// The shuffle-dual coproduct.
pub fn coproduct(t: &Tensor) -> TensorPairSum {
    let mut out = TensorPairSum::zero(&t.field, t.m, t.n);
    for (w, c) in &t.terms {
        for split in word_coproduct(w) {
            out.add_term(split, *c);
        }
    }
    out
}

/// Projection onto degree 0.
pub fn counit(t: &Tensor) -> Scalar {
    if t.n == 0 {
        t.coeff(&Word::empty())
    } else {
        Scalar::ZERO
    }
}

/// `(-1)^n` times reversal.
pub fn antipode(t: &Tensor) -> Tensor {
    let f = &t.field;
    let sign = if t.n.is_multiple_of(2) { Scalar::ONE } else { f.neg(Scalar::ONE) };
    let mut out = Tensor::zero(f, t.m, t.n);
    for (w, c) in &t.terms {
        let rev: Vec<u8> = w.0.iter().rev().copied().collect();
        out.add_term(Word(rev), f.mul(*c, sign));
    }
    out
}

/// Multiplication by `zeta^n` on a degree-n tensor.
pub fn lambda(zeta: Scalar, t: &Tensor) -> Tensor {
    t.scale(t.field.pow(zeta, t.n as u64))
}

pub fn apply_group_algebra(g: &GroupAlgebraElement, t: &Tensor) -> Result<Tensor> {
    g.apply(t)
}

/// `psi_{i, n-i}` on a dense vector of `T_n(V)`; the result lives in
/// `T_i (x) T_{n-i}`, indexed by the concatenated pair.
pub fn coproduct_split_dense(f: &Field, m: usize, n: usize, i: usize, v: &[u32]) -> Vec<u32> {
    let masks: Vec<u32> = (0u32..(1u32 << n)).filter(|mask| mask.count_ones() as usize == i).collect();
    let mut out = vec![0u32; v.len()];
    let mut letters = vec![0u8; n];
    let mut image = vec![0u8; n];
    for (idx, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        word_from_index(idx, n, m, &mut letters);
        for &mask in &masks {
            split_letters(&letters, mask, &mut image);
            let j = word_index(&image, m);
            out[j] = f.add_raw(out[j], c);
        }
    }
    out
}

#[inline]
fn split_letters(letters: &[u8], mask: u32, out: &mut [u8]) {
    let mut p = 0;
    for (k, &l) in letters.iter().enumerate() {
        if mask >> k & 1 == 1 {
            out[p] = l;
            p += 1;
        }
    }
    for (k, &l) in letters.iter().enumerate() {
        if mask >> k & 1 == 0 {
            out[p] = l;
            p += 1;
        }
    }
}

/// Primitive elements of `T_n(V)`: the kernel of the reduced coproduct.
pub fn primitives(n: usize, m: usize, field: &FieldRef) -> Result<Subspace> {
    if n == 0 {
        return Err(Error::DegreeOutOfRange(0));
    }
    let dim = tensor_dim(n, m)
        .filter(|&d| d <= 1 << 20)
        .ok_or_else(|| Error::CapExceeded(format!("T_{n} on {m} generators is too large")))?;
    let f = field.as_ref();
    let masks: Vec<u32> = (1u32..(1u32 << n) - 1).collect();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut letters = vec![0u8; n];
    let mut image = vec![0u8; n];
    for class in content_classes(n, m) {
        // target coordinate: (left length, concatenated word) -> matrix row
        let mut targets: BTreeMap<(u32, usize), usize> = BTreeMap::new();
        let mut entries: Vec<(usize, usize)> = Vec::new();
        for (col, &idx) in class.iter().enumerate() {
            word_from_index(idx, n, m, &mut letters);
            for &mask in &masks {
                split_letters(&letters, mask, &mut image);
                let key = (mask.count_ones(), word_index(&image, m));
                let next = targets.len();
                let row = *targets.entry(key).or_insert(next);
                entries.push((row, col));
            }
        }
        let mut a = Matrix::zeros(targets.len(), class.len());
        for (r, c) in entries {
            a.set(r, c, f.add_raw(a.get(r, c), 1));
        }
        let k = a.kernel(f);
        for r in 0..k.rows() {
            let mut v = vec![0u32; dim];
            for (col, &idx) in class.iter().enumerate() {
                v[idx] = k.get(r, col);
            }
            rows.push(v);
        }
    }
    Ok(Subspace::from_rows(f, dim, &rows))
}
