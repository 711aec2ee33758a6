//! Natural self-transformations of the tensor algebra.
//!
//! Degree-n natural endomorphisms of `T_n` are the group algebra `k(S_n)`.
//! A permutation `s` acts on words by positions, `s.(a_1..a_n) = a_{s(1)}..a_{s(n)}`.
//! The product `s * t` is defined so that acting by `s * t` equals acting by
//! `t` first and then by `s`; as maps of `[1, n]` it is `t o s`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldRef, Scalar};
use crate::linalg::Matrix;
use crate::tensoralg::{word_from_index, word_index, Tensor, Word};

/// Largest symmetric-group index handled by exact group-algebra computations.
pub const MAX_GROUP_DEGREE: usize = 7;

/// Degree at or below which the full multiplication table is cached.
const TABLE_DEGREE: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    /// 0-based images.
    map: Vec<u8>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images())
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation { map: (0..n as u8).collect() }
    }

    /// From 1-based images `(s(1), ..., s(n))`.
    pub fn from_images(images: &[usize]) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation")));
            }
            seen[i - 1] = true;
        }
        Ok(Permutation { map: images.iter().map(|&i| (i - 1) as u8).collect() })
    }

    /// The adjacent transposition swapping `i` and `i + 1` (1-based).
    pub fn adjacent(n: usize, i: usize) -> Permutation {
        assert!(i >= 1 && i < n);
        let mut p = Permutation::identity(n);
        p.map.swap(i - 1, i);
        p
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Permutation {
        let mut p = Permutation::identity(n);
        p.map.swap(i - 1, j - 1);
        p
    }

    /// `k -> n + 1 - k`.
    pub fn reversal(n: usize) -> Permutation {
        Permutation { map: (0..n as u8).rev().collect() }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn images(&self) -> Vec<usize> {
        self.map.iter().map(|&i| i as usize + 1).collect()
    }

    /// 0-based image of a 0-based point.
    #[inline]
    pub fn at(&self, k: usize) -> usize {
        self.map[k] as usize
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.map
    }

    /// The product acting as `other` first and then `self` on words, i.e. `other o self`.
    pub fn star(&self, other: &Permutation) -> Permutation {
        Permutation { map: self.map.iter().map(|&k| other.map[k as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.n()];
        for (k, &v) in self.map.iter().enumerate() {
            inv[v as usize] = k as u8;
        }
        Permutation { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(k, &v)| k == v as usize)
    }

    pub fn sign_is_odd(&self) -> bool {
        self.inversions() % 2 == 1
    }

    pub fn inversions(&self) -> usize {
        let mut c = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.map[i] > self.map[j] {
                    c += 1;
                }
            }
        }
        c
    }

    /// Position in the lexicographic order of image sequences.
    pub fn rank(&self) -> usize {
        lex_rank(&self.map)
    }

    pub fn unrank(n: usize, mut r: usize) -> Permutation {
        let mut avail: Vec<u8> = (0..n as u8).collect();
        let mut map = Vec::with_capacity(n);
        for k in (0..n).rev() {
            let f = factorial(k);
            let idx = r / f;
            r %= f;
            map.push(avail.remove(idx));
        }
        Permutation { map }
    }

    /// Adjacent transpositions `s_{i_1}, ..., s_{i_l}` (1-based) with
    /// `self = s_{i_1} * s_{i_2} * ... * s_{i_l}` and `l` the inversion count.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = self.map.clone();
        // self = s_i * rest  <=>  rest = s_i * self (s_i is an involution),
        // and (s_i * x)(k) = x(s_i(k)) swaps positions i, i+1 of x.
        while let Some(i) = (0..cur.len().saturating_sub(1)).find(|&i| cur[i] > cur[i + 1]) {
            word.push(i + 1);
            cur.swap(i, i + 1);
        }
        word
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn lex_rank(map: &[u8]) -> usize {
    let n = map.len();
    let mut r = 0;
    for i in 0..n {
        let smaller = map[i + 1..].iter().filter(|&&v| v < map[i]).count();
        r = r * (n - i) + smaller;
    }
    r
}

/// Cached data for `S_n`: the lexicographic listing and, for small n, the
/// full product table.
pub struct SymGroup {
    n: usize,
    perms: Vec<Permutation>,
    table: Option<Vec<u16>>,
}

impl SymGroup {
    fn build(n: usize) -> SymGroup {
        let order = factorial(n);
        let perms: Vec<Permutation> = (0..order).map(|r| Permutation::unrank(n, r)).collect();
        let table = (n <= TABLE_DEGREE).then(|| {
            let mut t = vec![0u16; order * order];
            for (i, a) in perms.iter().enumerate() {
                for (j, b) in perms.iter().enumerate() {
                    t[i * order + j] = a.star(b).rank() as u16;
                }
            }
            t
        });
        SymGroup { n, perms, table }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn order(&self) -> usize {
        self.perms.len()
    }
    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }
    pub fn perm(&self, r: usize) -> &Permutation {
        &self.perms[r]
    }

    /// Rank of `perm(i) * perm(j)`.
    #[inline]
    pub fn product_rank(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Some(t) => t[i * self.perms.len() + j] as usize,
            None => self.perms[i].star(&self.perms[j]).rank(),
        }
    }
}

/// The cached symmetric group `S_n`, `n <= 7`.
pub fn sym_group(n: usize) -> Result<&'static SymGroup> {
    static GROUPS: [OnceLock<SymGroup>; MAX_GROUP_DEGREE + 1] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    if n > MAX_GROUP_DEGREE {
        return Err(Error::DegreeOutOfRange(n));
    }
    Ok(GROUPS[n].get_or_init(|| SymGroup::build(n)))
}

/// An element of GF(q)(S_n), stored densely in lexicographic permutation order.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    field: FieldRef,
    n: usize,
    coeffs: Vec<u32>,
}

impl fmt::Debug for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = sym_group(self.n).map_err(|_| fmt::Error)?;
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(r, &c)| format!("{}*{:?}", self.field.format(Scalar(c)), g.perm(r)))
            .collect();
        write!(f, "GA(n={}; {})", self.n, terms.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct GaTermJson {
    perm: Vec<usize>,
    coeff: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct GaJson {
    n: usize,
    terms: Vec<GaTermJson>,
}

impl GroupAlgebraElement {
    pub fn zero(field: &FieldRef, n: usize) -> Result<GroupAlgebraElement> {
        let order = sym_group(n)?.order();
        Ok(GroupAlgebraElement { field: field.clone(), n, coeffs: vec![0; order] })
    }

    pub fn one(field: &FieldRef, n: usize) -> Result<GroupAlgebraElement> {
        let mut e = GroupAlgebraElement::zero(field, n)?;
        e.coeffs[0] = 1;
        Ok(e)
    }

    pub fn from_perm(field: &FieldRef, p: &Permutation) -> Result<GroupAlgebraElement> {
        let mut e = GroupAlgebraElement::zero(field, p.n())?;
        e.coeffs[p.rank()] = 1;
        Ok(e)
    }

    pub fn from_terms(field: &FieldRef, n: usize, terms: &[(Permutation, Scalar)]) -> Result<GroupAlgebraElement> {
        let mut e = GroupAlgebraElement::zero(field, n)?;
        for (p, c) in terms {
            if p.n() != n {
                return Err(Error::DegreeMismatch { expected: n, found: p.n() });
            }
            let r = p.rank();
            e.coeffs[r] = field.add_raw(e.coeffs[r], c.0);
        }
        Ok(e)
    }

    /// From coordinates in lexicographic permutation order.
    pub fn from_coords(field: &FieldRef, n: usize, coeffs: Vec<u32>) -> Result<GroupAlgebraElement> {
        let order = sym_group(n)?.order();
        if coeffs.len() != order {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a group algebra of dimension {order}",
                coeffs.len()
            )));
        }
        Ok(GroupAlgebraElement { field: field.clone(), n, coeffs })
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn coords(&self) -> &[u32] {
        &self.coeffs
    }
    pub fn into_coords(self) -> Vec<u32> {
        self.coeffs
    }

    pub fn coeff(&self, p: &Permutation) -> Scalar {
        Scalar(self.coeffs[p.rank()])
    }

    /// Nonzero terms in lexicographic order.
    pub fn terms(&self) -> Vec<(Permutation, Scalar)> {
        let g = sym_group(self.n).expect("degree checked at construction");
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(r, &c)| (g.perm(r).clone(), Scalar(c))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check(&self, other: &GroupAlgebraElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.n != other.n {
            return Err(Error::IndexMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
        self.check(other)?;
        let mut out = self.clone();
        self.field.axpy(&mut out.coeffs, 1, &other.coeffs);
        Ok(out)
    }

    pub fn sub(&self, other: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
        self.check(other)?;
        let mut out = self.clone();
        self.field.axpy(&mut out.coeffs, self.field.neg_raw(1), &other.coeffs);
        Ok(out)
    }

    pub fn scale(&self, a: Scalar) -> GroupAlgebraElement {
        let mut out = self.clone();
        self.field.scale(&mut out.coeffs, a.0);
        if a.is_zero() {
            out.coeffs.iter_mut().for_each(|c| *c = 0);
        }
        out
    }

    /// The product whose action is `other` followed by `self`.
    pub fn mul(&self, other: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
        self.check(other)?;
        let g = sym_group(self.n)?;
        let f = &self.field;
        let order = g.order();
        let mut out = vec![0u32; order];
        let other_support: Vec<(usize, u32)> =
            other.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j, c)).collect();
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(j, b) in &other_support {
                let k = g.product_rank(i, j);
                out[k] = f.add_raw(out[k], f.mul_raw(a, b));
            }
        }
        Ok(GroupAlgebraElement { field: f.clone(), n: self.n, coeffs: out })
    }

    pub fn pow(&self, mut k: u64) -> GroupAlgebraElement {
        let mut r = GroupAlgebraElement::one(&self.field, self.n).expect("valid degree");
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b).expect("same algebra");
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b).expect("same algebra");
            }
        }
        r
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self).map(|sq| sq == *self).unwrap_or(false)
    }

    /// Matrix of `x -> self * x` in the permutation basis.
    pub fn left_regular_matrix(&self) -> Matrix {
        let g = sym_group(self.n).expect("valid degree");
        let order = g.order();
        let mut m = Matrix::zeros(order, order);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for j in 0..order {
                let k = g.product_rank(i, j);
                m.set(k, j, self.field.add_raw(m.get(k, j), a));
            }
        }
        m
    }

    /// Matrix of `x -> x * self` in the permutation basis.
    pub fn right_regular_matrix(&self) -> Matrix {
        let g = sym_group(self.n).expect("valid degree");
        let order = g.order();
        let mut m = Matrix::zeros(order, order);
        for (j, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for i in 0..order {
                let k = g.product_rank(i, j);
                m.set(k, i, self.field.add_raw(m.get(k, i), a));
            }
        }
        m
    }

    /// Acts on a tensor of matching degree by permuting positions.
    pub fn apply(&self, t: &Tensor) -> Result<Tensor> {
        if t.degree() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, found: t.degree() });
        }
        if !std::sync::Arc::ptr_eq(&self.field, t.field()) && self.field != *t.field() {
            return Err(Error::FieldMismatch);
        }
        let mut out = Tensor::zero(t.field(), t.m(), self.n);
        for (p, c) in self.terms() {
            for (w, a) in t.terms() {
                let letters: Vec<u8> = (0..self.n).map(|k| w.letters()[p.at(k)]).collect();
                out.add_term(Word::from_letters_unchecked(letters), self.field.mul(c, *a));
            }
        }
        Ok(out)
    }

    /// Acts on a dense coordinate vector of `T_n(V)`, `dim V = m`.
    pub fn apply_dense(&self, m: usize, v: &[u32]) -> Vec<u32> {
        let n = self.n;
        let dim = m.pow(n as u32);
        assert_eq!(v.len(), dim);
        let f = &self.field;
        let mut out = vec![0u32; dim];
        let terms = self.terms();
        let mut letters = vec![0u8; n];
        let mut image = vec![0u8; n];
        for (idx, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            word_from_index(idx, n, m, &mut letters);
            for (p, c) in &terms {
                for k in 0..n {
                    image[k] = letters[p.at(k)];
                }
                let j = word_index(&image, m);
                out[j] = f.add_raw(out[j], f.mul_raw(c.0, a));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms = self
            .terms()
            .into_iter()
            .map(|(p, c)| GaTermJson { perm: p.images(), coeff: c.coeffs(&self.field) })
            .collect();
        serde_json::to_value(GaJson { n: self.n, terms }).expect("serializable")
    }

    pub fn from_json(field: &FieldRef, v: &serde_json::Value) -> Result<GroupAlgebraElement> {
        let parsed: GaJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut terms = Vec::new();
        for t in parsed.terms {
            terms.push((Permutation::from_images(&t.perm)?, Scalar::from_coeffs(field, &t.coeff)?));
        }
        GroupAlgebraElement::from_terms(field, parsed.n, &terms)
    }
}

mod poly {
    //! Dense univariate polynomials over the field, constant term first.
    use crate::field::Field;

    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn mul(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x != 0 {
                f.axpy(&mut out[i..i + b.len()], x, b);
            }
        }
        trim(&mut out);
        out
    }

    pub fn sub(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = a.to_vec();
        if out.len() < b.len() {
            out.resize(b.len(), 0);
        }
        f.axpy(&mut out[..b.len()], f.neg_raw(1), b);
        trim(&mut out);
        out
    }

    pub fn divrem(f: &Field, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = f.inv_raw(b[db]);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0u32; r.len() - db];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = f.mul_raw(*r.last().unwrap(), lead_inv);
            q[shift] = c;
            f.axpy(&mut r[shift..], f.neg_raw(c), b);
            trim(&mut r);
        }
        trim(&mut q);
        (q, r)
    }

    /// Inverse of `a` modulo `m`, assuming they are coprime.
    pub fn inv_mod(f: &Field, a: &[u32], m: &[u32]) -> Option<Vec<u32>> {
        let (_, mut r0) = divrem(f, a, m);
        let mut r1 = m.to_vec();
        let mut s0 = vec![1u32];
        let mut s1: Vec<u32> = Vec::new();
        // invariant: r_i = s_i * a (mod m)
        while !r1.is_empty() {
            let (q, r) = divrem(f, &r0, &r1);
            let s = sub(f, &s0, &mul(f, &q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.len() != 1 {
            return None;
        }
        let c = f.inv_raw(r0[0]);
        let mut s = s0;
        f.scale(&mut s, c);
        Some(divrem(f, &s, m).1)
    }
}

/// Minimal polynomial of `a` (monic, constant term first) together with the
/// powers `a^0, ..., a^{d-1}`.
fn minimal_polynomial(a: &GroupAlgebraElement) -> (Vec<u32>, Vec<GroupAlgebraElement>) {
    let f = a.field.clone();
    let mut powers = vec![GroupAlgebraElement::one(&f, a.n).expect("valid degree")];
    // echelon rows: (vector, pivot, combination of powers)
    let mut rows: Vec<(Vec<u32>, usize, Vec<u32>)> = Vec::new();
    loop {
        let j = powers.len() - 1;
        let mut w = powers[j].coeffs.clone();
        let mut c = vec![0u32; j + 1];
        c[j] = 1;
        for (rv, p, rc) in &rows {
            let coef = w[*p];
            if coef != 0 {
                let neg = f.neg_raw(coef);
                f.axpy(&mut w, neg, rv);
                f.axpy(&mut c[..rc.len()], neg, rc);
            }
        }
        match w.iter().position(|&x| x != 0) {
            None => {
                powers.pop();
                return (c, powers);
            }
            Some(p) => {
                let inv = f.inv_raw(w[p]);
                f.scale(&mut w, inv);
                f.scale(&mut c, inv);
                rows.push((w, p, c));
                let next = powers[j].mul(a).expect("same algebra");
                powers.push(next);
            }
        }
    }
}

/// The unique idempotent in the cyclic semigroup generated by `a`.
///
/// Returns `(e, k)` where `k >= 1` is the Fitting index: the multiplicity of
/// 0 as a root of the minimal polynomial (at least 1). Images and kernels of
/// `a^j` are constant for `j >= k`, and `e` is a power `a^j` with `j >= k`.
pub fn eventual_idempotent(a: &GroupAlgebraElement) -> (GroupAlgebraElement, usize) {
    let f = a.field.clone();
    let (mu, powers) = minimal_polynomial(a);
    let k = mu.iter().position(|&c| c != 0).expect("monic");
    let g = &mu[k..];
    let e = if g.len() == 1 {
        GroupAlgebraElement::zero(&f, a.n).expect("valid degree")
    } else if k == 0 {
        GroupAlgebraElement::one(&f, a.n).expect("valid degree")
    } else {
        let mut xk = vec![0u32; k + 1];
        xk[k] = 1;
        let u = poly::inv_mod(&f, &xk, g).expect("x is coprime to g");
        let h = poly::mul(&f, &xk, &u);
        let mut coeffs = vec![0u32; a.coeffs.len()];
        for (i, &c) in h.iter().enumerate() {
            if c != 0 {
                f.axpy(&mut coeffs, c, &powers[i].coeffs);
            }
        }
        GroupAlgebraElement { field: f.clone(), n: a.n, coeffs }
    };
    (e, k.max(1))
}

/// A graded family of group-algebra elements, one per degree `0..=cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalTransform {
    field: FieldRef,
    components: Vec<GroupAlgebraElement>,
    is_coalgebra_map: bool,
}

impl NaturalTransform {
    pub fn from_components(field: &FieldRef, components: Vec<GroupAlgebraElement>) -> Result<NaturalTransform> {
        for (n, c) in components.iter().enumerate() {
            if c.n != n {
                return Err(Error::DegreeMismatch { expected: n, found: c.n });
            }
            if c.field != *field {
                return Err(Error::FieldMismatch);
            }
        }
        if components.is_empty() {
            return Err(Error::InvalidInput("a natural transformation needs degree 0".into()));
        }
        Ok(NaturalTransform { field: field.clone(), components, is_coalgebra_map: false })
    }

    fn build(field: &FieldRef, cap: usize, comp: impl Fn(usize) -> GroupAlgebraElement) -> NaturalTransform {
        NaturalTransform { field: field.clone(), components: (0..=cap).map(comp).collect(), is_coalgebra_map: false }
    }

    pub fn identity(field: &FieldRef, cap: usize) -> Result<NaturalTransform> {
        sym_group(cap)?;
        let mut t = Self::build(field, cap, |n| GroupAlgebraElement::one(field, n).unwrap());
        t.is_coalgebra_map = true;
        Ok(t)
    }

    /// `unit o counit`: identity in degree 0, zero above.
    pub fn unit_counit(field: &FieldRef, cap: usize) -> Result<NaturalTransform> {
        sym_group(cap)?;
        let mut t = Self::build(field, cap, |n| {
            if n == 0 {
                GroupAlgebraElement::one(field, 0).unwrap()
            } else {
                GroupAlgebraElement::zero(field, n).unwrap()
            }
        });
        t.is_coalgebra_map = true;
        Ok(t)
    }

    /// `lambda_zeta`: multiplication by `zeta^n` in degree n.
    pub fn lambda(field: &FieldRef, zeta: Scalar, cap: usize) -> Result<NaturalTransform> {
        sym_group(cap)?;
        let mut t =
            Self::build(field, cap, |n| GroupAlgebraElement::one(field, n).unwrap().scale(field.pow(zeta, n as u64)));
        t.is_coalgebra_map = true;
        Ok(t)
    }

    /// The antipode: `(-1)^n` times word reversal in degree n.
    pub fn antipode(field: &FieldRef, cap: usize) -> Result<NaturalTransform> {
        sym_group(cap)?;
        Ok(Self::build(field, cap, |n| {
            let sign = if n % 2 == 0 { Scalar::ONE } else { field.neg(Scalar::ONE) };
            GroupAlgebraElement::from_perm(field, &Permutation::reversal(n)).unwrap().scale(sign)
        }))
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }
    pub fn cap(&self) -> usize {
        self.components.len() - 1
    }
    pub fn component(&self, n: usize) -> Result<&GroupAlgebraElement> {
        self.components.get(n).ok_or(Error::DegreeOutOfCap { degree: n, cap: self.cap() })
    }
    pub fn components(&self) -> &[GroupAlgebraElement] {
        &self.components
    }
    pub fn is_coalgebra_map(&self) -> bool {
        self.is_coalgebra_map
    }

    fn check(&self, other: &NaturalTransform) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cap() != other.cap() {
            return Err(Error::CapMismatch(self.cap(), other.cap()));
        }
        Ok(())
    }

    /// Degree-wise composition; `compose(f, g)` applies `g` first.
    pub fn compose(&self, other: &NaturalTransform) -> Result<NaturalTransform> {
        self.check(other)?;
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| a.mul(b)).collect::<Result<Vec<_>>>()?;
        Ok(NaturalTransform {
            field: self.field.clone(),
            components,
            is_coalgebra_map: self.is_coalgebra_map && other.is_coalgebra_map,
        })
    }

    /// Convolution `mu o (f (x) g) o psi`, evaluated on the generic word.
    pub fn conv(&self, other: &NaturalTransform) -> Result<NaturalTransform> {
        self.check(other)?;
        let f = &self.field;
        let mut components = Vec::with_capacity(self.components.len());
        for n in 0..=self.cap() {
            let g = sym_group(n)?;
            let mut out = vec![0u32; g.order()];
            let mut map = vec![0u8; n];
            for mask in 0u32..(1u32 << n) {
                let s: Vec<u8> = (0..n as u8).filter(|&k| mask >> k & 1 == 1).collect();
                let t: Vec<u8> = (0..n as u8).filter(|&k| mask >> k & 1 == 0).collect();
                let (i, j) = (s.len(), t.len());
                let fi = &self.components[i];
                let gj = &other.components[j];
                let gi = sym_group(i)?;
                let gjg = sym_group(j)?;
                for (ri, &a) in fi.coeffs.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    let sigma = gi.perm(ri);
                    for k in 0..i {
                        map[k] = s[sigma.at(k)];
                    }
                    for (rj, &b) in gj.coeffs.iter().enumerate() {
                        if b == 0 {
                            continue;
                        }
                        let tau = gjg.perm(rj);
                        for k in 0..j {
                            map[i + k] = t[tau.at(k)];
                        }
                        let r = lex_rank(&map);
                        out[r] = f.add_raw(out[r], f.mul_raw(a, b));
                    }
                }
            }
            components.push(GroupAlgebraElement { field: f.clone(), n, coeffs: out });
        }
        Ok(NaturalTransform { field: f.clone(), components, is_coalgebra_map: false })
    }

    /// `theta_zeta = lambda_zeta * antipode`, verified to be a coalgebra map.
    pub fn theta(field: &FieldRef, zeta: Scalar, cap: usize) -> Result<NaturalTransform> {
        let t = Self::lambda(field, zeta, cap)?.conv(&Self::antipode(field, cap)?)?;
        t.verified_coalgebra_map()
    }

    /// Checks `psi o f = (f (x) f) o psi` in every degree and sets the flag.
    pub fn verified_coalgebra_map(mut self) -> Result<NaturalTransform> {
        for n in 0..=self.cap() {
            if !self.coalgebra_compatible_in_degree(n)? {
                return Err(Error::NotCoalgebraMap(n));
            }
        }
        self.is_coalgebra_map = true;
        Ok(self)
    }

    /// Compares both sides on the generic word `x_1 ... x_n`; by naturality
    /// this decides the identity on every word of degree n.
    pub fn coalgebra_compatible_in_degree(&self, n: usize) -> Result<bool> {
        let f = &self.field;
        let g = sym_group(n)?;
        let order = g.order();
        // (T (x) T)_n on distinct letters: key (left length, concatenated permutation)
        let mut lhs = vec![0u32; (n + 1) * order];
        let mut rhs = vec![0u32; (n + 1) * order];
        let comp = self.component(n)?;
        let mut map = vec![0u8; n];
        for (r, &c) in comp.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let pi = g.perm(r);
            for mask in 0u32..(1u32 << n) {
                let mut idx = 0;
                for k in 0..n {
                    if mask >> k & 1 == 1 {
                        map[idx] = pi.raw()[k];
                        idx += 1;
                    }
                }
                let i = idx;
                for k in 0..n {
                    if mask >> k & 1 == 0 {
                        map[idx] = pi.raw()[k];
                        idx += 1;
                    }
                }
                let key = i * order + lex_rank(&map);
                lhs[key] = f.add_raw(lhs[key], c);
            }
        }
        for mask in 0u32..(1u32 << n) {
            let s: Vec<u8> = (0..n as u8).filter(|&k| mask >> k & 1 == 1).collect();
            let t: Vec<u8> = (0..n as u8).filter(|&k| mask >> k & 1 == 0).collect();
            let (i, j) = (s.len(), t.len());
            let (gi, gj) = (sym_group(i)?, sym_group(j)?);
            let (fi, fj) = (self.component(i)?, self.component(j)?);
            for (ri, &a) in fi.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for k in 0..i {
                    map[k] = s[gi.perm(ri).at(k)];
                }
                for (rj, &b) in fj.coeffs.iter().enumerate() {
                    if b == 0 {
                        continue;
                    }
                    for k in 0..j {
                        map[i + k] = t[gj.perm(rj).at(k)];
                    }
                    let key = i * order + lex_rank(&map);
                    rhs[key] = f.add_raw(rhs[key], f.mul_raw(a, b));
                }
            }
        }
        Ok(lhs == rhs)
    }

    pub fn apply(&self, t: &Tensor) -> Result<Tensor> {
        self.component(t.degree())?.apply(t)
    }

    /// Matrix of the degree-n component on `T_n(V)` with `dim V = m`.
    pub fn as_operator(&self, n: usize, m: usize) -> Result<Matrix> {
        let comp = self.component(n)?;
        Ok(group_element_operator(comp, m))
    }
}

/// Matrix of a group-algebra element acting on `T_n(V)`, `dim V = m`.
pub fn group_element_operator(a: &GroupAlgebraElement, m: usize) -> Matrix {
    let n = a.n;
    let dim = m.pow(n as u32);
    let f = &a.field;
    let mut out = Matrix::zeros(dim, dim);
    let terms = a.terms();
    let mut letters = vec![0u8; n];
    let mut image = vec![0u8; n];
    for col in 0..dim {
        word_from_index(col, n, m, &mut letters);
        for (p, c) in &terms {
            for k in 0..n {
                image[k] = letters[p.at(k)];
            }
            let row = word_index(&image, m);
            out.set(row, col, f.add_raw(out.get(row, col), c.0));
        }
    }
    out
}

/// Convenience wrapper for [`NaturalTransform::as_operator`].
pub fn as_operator(f: &NaturalTransform, n: usize, m: usize) -> Result<Matrix> {
    f.as_operator(n, m)
}
