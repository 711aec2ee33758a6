//! Lie powers inside the tensor algebra: brackets, Lyndon bases, Witt
//! dimensions, restricted powers and the multilinear module `Lie(n)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{Field, FieldRef, Scalar};
use crate::linalg::{SpanBuilder, Subspace};
use crate::natural::{sym_group, GroupAlgebraElement, Permutation};
use crate::sgmod::SigmaModule;
use crate::tensoralg::{concat, tensor_dim, word_from_index, word_index, Tensor, Word};

/// `[t, u] = tu - ut`.
pub fn bracket(t: &Tensor, u: &Tensor) -> Result<Tensor> {
    concat(t, u)?.sub(&concat(u, t)?)
}

/// Linear extension of `a_1..a_n -> [[a_1, a_2], ..., a_n]`.
pub fn left_normed(t: &Tensor) -> Result<Tensor> {
    if t.degree() == 0 {
        return Err(Error::DegreeOutOfRange(0));
    }
    let f = t.field();
    let m = t.m();
    let mut out = Tensor::zero(f, m, t.degree());
    for (w, c) in t.terms() {
        let letters = w.letters();
        let mut acc = Tensor::word(f, m, &[letters[0] as usize])?;
        for &l in &letters[1..] {
            acc = bracket(&acc, &Tensor::word(f, m, &[l as usize])?)?;
        }
        out = out.add(&acc.scale(*c))?;
    }
    Ok(out)
}

/// Dense version of [`left_normed`] on `T_n(V)`.
pub fn left_normed_dense(f: &Field, m: usize, n: usize, v: &[u32]) -> Vec<u32> {
    let expansion = left_normed_expansion(n);
    let mut out = vec![0u32; v.len()];
    let mut letters = vec![0u8; n];
    let mut image = vec![0u8; n];
    let minus = f.neg_raw(1);
    for (idx, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        word_from_index(idx, n, m, &mut letters);
        for (positions, negative) in &expansion {
            for k in 0..n {
                image[k] = letters[positions[k] as usize];
            }
            let j = word_index(&image, m);
            let a = if *negative { f.mul_raw(c, minus) } else { c };
            out[j] = f.add_raw(out[j], a);
        }
    }
    out
}

/// Terms of `[[y_1, y_2], ..., y_n]` as (position sequence, sign) pairs.
fn left_normed_expansion(n: usize) -> Vec<(Vec<u8>, bool)> {
    let mut terms: Vec<(Vec<u8>, bool)> = vec![(vec![0], false)];
    for k in 1..n as u8 {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (w, neg) in terms {
            let mut a = w.clone();
            a.push(k);
            next.push((a, neg));
            let mut b = vec![k];
            b.extend_from_slice(&w);
            next.push((b, !neg));
        }
        terms = next;
    }
    terms
}

/// The multilinear left-normed bracket `[[x_{c_1}, x_{c_2}], ..., x_{c_n}]`
/// for a permutation `c` (1-based letters), as a group-algebra element in
/// the word basis `x_{s(1)}..x_{s(n)} <-> s`.
pub fn multilinear_left_normed(field: &FieldRef, c: &[usize]) -> Result<GroupAlgebraElement> {
    let n = c.len();
    let mut terms = Vec::new();
    let minus = field.neg(Scalar::ONE);
    for (positions, neg) in left_normed_expansion(n) {
        let images: Vec<usize> = positions.iter().map(|&k| c[k as usize]).collect();
        terms.push((Permutation::from_images(&images)?, if neg { minus } else { Scalar::ONE }));
    }
    GroupAlgebraElement::from_terms(field, n, &terms)
}

/// A Lyndon word with its standard factorization.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LyndonWord {
    letters: Vec<u8>,
}

impl LyndonWord {
    pub fn new(letters: &[u8]) -> Option<LyndonWord> {
        is_lyndon(letters).then(|| LyndonWord { letters: letters.to_vec() })
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `(left, right)` with `right` the longest proper Lyndon suffix.
    pub fn standard_factorization(&self) -> Option<(LyndonWord, LyndonWord)> {
        let n = self.letters.len();
        if n < 2 {
            return None;
        }
        let split = (1..n).find(|&k| is_lyndon(&self.letters[k..])).expect("last letter is Lyndon");
        Some((
            LyndonWord { letters: self.letters[..split].to_vec() },
            LyndonWord { letters: self.letters[split..].to_vec() },
        ))
    }
}

/// Strictly smaller than every proper rotation.
pub fn is_lyndon(w: &[u8]) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    (1..n).all(|k| {
        let rot = w[k..].iter().chain(&w[..k]);
        w.iter().lt(rot)
    })
}

/// Lyndon words of length exactly `n` over letters `1..=m`, in lexicographic order.
pub fn lyndon_words(n: usize, m: usize) -> Vec<LyndonWord> {
    assert!(m <= u8::MAX as usize, "alphabet of {m} letters");
    let mut out = Vec::new();
    if n == 0 || m == 0 {
        return out;
    }
    // Duval's generation of all Lyndon words of length <= n
    let mut w: Vec<u8> = vec![1];
    while !w.is_empty() {
        if w.len() == n {
            out.push(LyndonWord { letters: w.clone() });
        }
        let len = w.len();
        while w.len() < n {
            w.push(w[w.len() - len]);
        }
        while w.last() == Some(&(m as u8)) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

/// Bracketed Lyndon word as an element of `T(V)`, letters replaced by `gens`.
/// All generators must live in the same tensor algebra.
pub fn bracketed(word: &LyndonWord, gens: &[Tensor]) -> Result<Tensor> {
    let mut memo: HashMap<Vec<u8>, Tensor> = HashMap::new();
    bracketed_memo(word, gens, &mut memo)
}

fn bracketed_memo(word: &LyndonWord, gens: &[Tensor], memo: &mut HashMap<Vec<u8>, Tensor>) -> Result<Tensor> {
    if let Some(t) = memo.get(&word.letters) {
        return Ok(t.clone());
    }
    let t = match word.standard_factorization() {
        None => gens
            .get(word.letters[0] as usize - 1)
            .cloned()
            .ok_or(Error::IndexOutOfRange { index: word.letters[0] as usize, bound: gens.len() })?,
        Some((l, r)) => {
            let a = bracketed_memo(&l, gens, memo)?;
            let b = bracketed_memo(&r, gens, memo)?;
            bracket(&a, &b)?
        }
    };
    memo.insert(word.letters.clone(), t.clone());
    Ok(t)
}

/// The bracketed Lyndon words of length `k` on `gens`: a basis of the
/// degree-k Lie power of their span whenever the generators are independent
/// and of a single degree.
pub fn lyndon_images(gens: &[Tensor], k: usize) -> Result<Vec<Tensor>> {
    if gens.len() > u8::MAX as usize {
        return Err(Error::CapExceeded(format!("{} generators exceed the letter alphabet", gens.len())));
    }
    let mut memo = HashMap::new();
    lyndon_words(k, gens.len()).iter().map(|w| bracketed_memo(w, gens, &mut memo)).collect()
}

/// Dense spanning vectors of `L_n(V)`: one per Lyndon word.
pub fn lyndon_vectors(n: usize, m: usize, field: &FieldRef) -> Result<Vec<Vec<u32>>> {
    let gens = (1..=m).map(|i| Tensor::generator(field, m, i)).collect::<Result<Vec<_>>>()?;
    Ok(lyndon_images(&gens, n)?.iter().map(Tensor::to_dense).collect())
}

/// `L_n(V)` as a canonical subspace of `T_n(V)`.
pub fn lyndon_basis(n: usize, m: usize, field: &FieldRef) -> Result<Subspace> {
    if n == 0 {
        return Err(Error::DegreeOutOfRange(0));
    }
    let dim = dense_dim(n, m)?;
    Ok(Subspace::from_rows(field, dim, &lyndon_vectors(n, m, field)?))
}

fn dense_dim(n: usize, m: usize) -> Result<usize> {
    tensor_dim(n, m)
        .filter(|&d| d <= 1 << 20)
        .ok_or_else(|| Error::CapExceeded(format!("T_{n} on {m} generators is too large")))
}

pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut result = 1i64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `(1/n) sum_{d | n} mu(d) m^{n/d}`.
pub fn witt_dim(n: u64, m: u64) -> u128 {
    assert!(n >= 1);
    let mut acc: i128 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            let mu = mobius(d) as i128;
            if mu != 0 {
                acc += mu * (m as i128).pow((n / d) as u32);
            }
        }
    }
    (acc / n as i128) as u128
}

/// `Lie(n)` with basis `[[x_1, x_{s(2)}], ..., x_{s(n)}]`, `s` ranging over
/// permutations fixing 1, as a right module inside the multilinear part of
/// `T_n(V_n)` (coordinates indexed by permutations in lexicographic order).
pub fn lie_module(n: usize, field: &FieldRef) -> Result<(SigmaModule, Subspace)> {
    if n == 0 || n > crate::natural::MAX_GROUP_DEGREE {
        return Err(Error::DegreeOutOfRange(n));
    }
    let rest = sym_group(n - 1)?;
    let mut basis = Vec::with_capacity(rest.order());
    for p in rest.perms() {
        let mut c = vec![1usize];
        c.extend(p.images().iter().map(|&i| i + 1));
        basis.push(multilinear_left_normed(field, &c)?.into_coords());
    }
    let module = SigmaModule::from_right_ideal(field, n, basis.clone())?;
    let span = Subspace::from_rows(field, sym_group(n)?.order(), &basis);
    Ok((module, span))
}

/// `L^res_n(V)`: `L_n(V)` together with p-th powers of `L^res_{n/p}(V)`.
pub fn restricted_lie_power(n: usize, m: usize, field: &FieldRef) -> Result<Subspace> {
    let lie = lyndon_basis(n, m, field)?;
    let p = field.p() as usize;
    if !n.is_multiple_of(p) {
        return Ok(lie);
    }
    let lower = restricted_lie_power(n / p, m, field)?;
    let mut rows = lie.basis_vecs();
    let low_dim = dense_dim(n / p, m)?;
    for v in lower.basis_vecs() {
        let t = Tensor::from_dense(field, m, n / p, &v);
        let mut pow = t.clone();
        for _ in 1..p {
            pow = concat(&pow, &t)?;
        }
        debug_assert_eq!(v.len(), low_dim);
        rows.push(pow.to_dense());
    }
    Ok(Subspace::from_rows(field, dense_dim(n, m)?, &rows))
}

/// Span of `left_normed(w)` over all words `w`.
pub fn left_normed_span(n: usize, m: usize, field: &FieldRef) -> Result<Subspace> {
    let dim = dense_dim(n, m)?;
    let mut b = SpanBuilder::new(dim);
    let mut e = vec![0u32; dim];
    for idx in 0..dim {
        e[idx] = 1;
        b.insert(field, &left_normed_dense(field, m, n, &e));
        e[idx] = 0;
    }
    Ok(b.into_subspace(field))
}

/// Word `x_{c_1}..x_{c_n}` helper for tests and callers.
pub fn word_tensor(field: &FieldRef, m: usize, c: &[usize]) -> Result<Tensor> {
    Tensor::from_terms(field, m, c.len(), [(Word::new(c, m)?, Scalar::ONE)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::tensoralg::primitives;

    #[test]
    fn lyndon_enumeration() {
        let w: Vec<Vec<u8>> = lyndon_words(3, 2).iter().map(|w| w.letters().to_vec()).collect();
        assert_eq!(w, vec![vec![1, 1, 2], vec![1, 2, 2]]);
        assert!(lyndon_words(2, 1).is_empty());
        let lw = LyndonWord::new(&[1, 1, 2, 1, 2]).unwrap();
        let (l, r) = lw.standard_factorization().unwrap();
        assert_eq!((l.letters(), r.letters()), (&[1u8, 1, 2][..], &[1u8, 2][..]));
        for n in 1..=8 {
            for m in 1..=3 {
                assert_eq!(lyndon_words(n, m).len() as u128, witt_dim(n as u64, m as u64), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn witt_values() {
        assert_eq!(witt_dim(12, 2), 335);
        assert_eq!(witt_dim(6, 2), 9);
        assert_eq!(witt_dim(1, 5), 5);
    }

    #[test]
    fn bracket_examples() {
        let f = make_field(2, 1).unwrap();
        let x1 = Tensor::generator(&f, 3, 1).unwrap();
        let x2 = Tensor::generator(&f, 3, 2).unwrap();
        let x3 = Tensor::generator(&f, 3, 3).unwrap();
        assert!(bracket(&x1, &x1).unwrap().is_zero());
        let a = bracket(&bracket(&x1, &x2).unwrap(), &x3).unwrap();
        let b = bracket(&bracket(&x2, &x3).unwrap(), &x1).unwrap();
        let c = bracket(&bracket(&x3, &x1).unwrap(), &x2).unwrap();
        assert!(a.add(&b).unwrap().add(&c).unwrap().is_zero());
    }

    #[test]
    fn left_normed_dense_agrees_with_sparse() {
        let f = make_field(3, 1).unwrap();
        let t = word_tensor(&f, 2, &[1, 2, 2, 1]).unwrap();
        let sparse = left_normed(&t).unwrap();
        let dense = left_normed_dense(&f, 2, 4, &t.to_dense());
        assert_eq!(sparse.to_dense(), dense);
    }

    #[test]
    fn lie_module_dims() {
        let f = make_field(2, 1).unwrap();
        for n in 1..=5 {
            let (m, span) = lie_module(n, &f).unwrap();
            assert_eq!(m.dim(), (1..n).product::<usize>());
            assert_eq!(span.dim(), m.dim());
        }
    }

    #[test]
    fn restricted_matches_primitives_small() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(restricted_lie_power(2, 1, &f).unwrap().dim(), 1);
        assert_eq!(restricted_lie_power(2, 2, &f).unwrap(), primitives(2, 2, &f).unwrap());
    }
}
