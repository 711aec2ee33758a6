//! Basic products, their multiplicities, generator dimensions of sub Hopf
//! algebras, and the Lie-power decomposition over basic products.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::decomp::{generated_degrees, MSet};
use crate::error::{Error, Result};
use crate::field::{make_field, FieldRef};
use crate::functors::{bracket_dense, decomposables, lie_power_of, subhopf_evaluate, MAX_AMBIENT};
use crate::liealg::{lyndon_basis, mobius, witt_dim};
use crate::linalg::{SpanBuilder, Subspace};
use crate::tensoralg::tensor_dim;

/// Upper bound on the number of enumerated basic products.
pub const MAX_BASIC_PRODUCTS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    /// 1-based letter index.
    Letter(usize),
    /// Positions of `w_1` and `w_2` in the enumerated list.
    Product(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasicProduct {
    pub shape: Shape,
    pub weight: usize,
    pub rank: usize,
    pub serial: usize,
    /// Letter indices in left-to-right order.
    pub letters: Vec<usize>,
    /// Occurrences of each letter.
    pub multiplicities: Vec<usize>,
    /// Sum of the degrees of the letters.
    pub d: usize,
}

impl BasicProduct {
    /// Bracket notation with letters `x1, x2, ...`.
    pub fn render(&self, list: &[BasicProduct]) -> String {
        self.render_with(list, &|i| format!("x{i}"))
    }

    pub fn render_with(&self, list: &[BasicProduct], letter: &dyn Fn(usize) -> String) -> String {
        Rendered(self, list, letter).to_string()
    }
}

struct Rendered<'a>(&'a BasicProduct, &'a [BasicProduct], &'a dyn Fn(usize) -> String);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.shape {
            Shape::Letter(i) => write!(f, "{}", (self.2)(i)),
            Shape::Product(a, b) => {
                let (x, y) = (Rendered(&self.1[a], self.1, self.2), Rendered(&self.1[b], self.1, self.2));
                write!(f, "[{x},{y}]")
            }
        }
    }
}

/// All basic products on letters of the given degrees with `d(w) <= d_cap`,
/// ordered by weight and, within a weight, by flattened letter sequence.
pub fn basic_products(letter_degrees: &[usize], d_cap: usize) -> Result<Vec<BasicProduct>> {
    if letter_degrees.windows(2).any(|w| w[0] > w[1]) || letter_degrees.contains(&0) {
        return Err(Error::InvalidInput("letter degrees must be positive and nondecreasing".into()));
    }
    let k = letter_degrees.len();
    let mut all: Vec<BasicProduct> = letter_degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut multiplicities = vec![0; k];
            multiplicities[i] = 1;
            BasicProduct {
                shape: Shape::Letter(i + 1),
                weight: 1,
                rank: 0,
                serial: i + 1,
                letters: vec![i + 1],
                multiplicities,
                d,
            }
        })
        .collect();
    let Some(&min_deg) = letter_degrees.first() else { return Ok(Vec::new()) };
    let max_weight = d_cap / min_deg;
    // products grouped by weight, as positions in `all`
    let mut by_weight: Vec<Vec<usize>> = vec![Vec::new(), (0..k).collect()];
    for w in 2..=max_weight {
        let mut fresh = Vec::new();
        for w2 in 1..w {
            let w1 = w - w2;
            if w2 > w1 {
                break;
            }
            for &a in &by_weight[w1] {
                for &b in &by_weight[w2] {
                    let (x, y) = (&all[a], &all[b]);
                    if y.serial < x.serial && x.rank <= y.serial && x.d + y.d <= d_cap {
                        fresh.push((a, b));
                    }
                }
            }
        }
        if all.len() + fresh.len() > MAX_BASIC_PRODUCTS {
            return Err(Error::CapExceeded(format!("more than {MAX_BASIC_PRODUCTS} basic products")));
        }
        let mut items: Vec<BasicProduct> = fresh
            .into_iter()
            .map(|(a, b)| {
                let (x, y) = (&all[a], &all[b]);
                let mut letters = x.letters.clone();
                letters.extend_from_slice(&y.letters);
                let multiplicities = x.multiplicities.iter().zip(&y.multiplicities).map(|(s, t)| s + t).collect();
                BasicProduct {
                    shape: Shape::Product(a, b),
                    weight: w,
                    rank: y.serial,
                    serial: 0,
                    letters,
                    multiplicities,
                    d: x.d + y.d,
                }
            })
            .collect();
        items.sort_by(|x, y| {
            let key = |p: &BasicProduct| match p.shape {
                Shape::Product(a, b) => (all[a].weight, all[a].serial, all[b].serial),
                Shape::Letter(_) => unreachable!(),
            };
            x.letters.cmp(&y.letters).then_with(|| key(x).cmp(&key(y)))
        });
        let start = all.len();
        for (i, mut item) in items.into_iter().enumerate() {
            item.serial = start + i + 1;
            all.push(item);
        }
        by_weight.push((start..all.len()).collect());
    }
    // drop products beyond the degree cap, keeping child positions valid
    let mut remap = vec![usize::MAX; all.len()];
    let mut out = Vec::with_capacity(all.len());
    for (i, mut bp) in all.into_iter().enumerate() {
        if bp.d > d_cap {
            continue;
        }
        if let Shape::Product(a, b) = bp.shape {
            bp.shape = Shape::Product(remap[a], remap[b]);
        }
        remap[i] = out.len();
        out.push(bp);
    }
    Ok(out)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn multinomial(parts: impl Iterator<Item = usize>) -> u128 {
    let mut total = 0u128;
    let mut acc = 1u128;
    for p in parts {
        total += p as u128;
        acc *= binomial(total, p as u128);
    }
    acc
}

/// `(1/l) sum_{d | l_0} mu(d) (l/d)! / prod_i (l_i/d)!` for letter multiplicities `l_i`.
pub fn multiplicity(multiplicities: &[usize]) -> u128 {
    let l: usize = multiplicities.iter().sum();
    if l == 0 {
        return 0;
    }
    let l0 = multiplicities.iter().fold(0usize, |g, &x| num_integer::gcd(g, x));
    let mut acc: i128 = 0;
    for d in 1..=l0 {
        if l0 % d == 0 {
            let mu = mobius(d as u64) as i128;
            if mu != 0 {
                acc += mu * multinomial(multiplicities.iter().map(|&x| x / d)) as i128;
            }
        }
    }
    (acc / l as i128) as u128
}

/// Generator dimensions `d_n` with `sum B_q t^q = 1 / (1 - sum d_n t^n)`.
pub fn hilbert_series_d_dims(b_dims: &[u64], cap: usize) -> Result<Vec<u64>> {
    if b_dims.first() != Some(&1) || b_dims.len() <= cap {
        return Err(Error::InvalidInput("need B_0 = 1 and dimensions through the cap".into()));
    }
    let mut d = vec![0i128; cap + 1];
    for n in 1..=cap {
        let mut v = b_dims[n] as i128;
        for i in 1..n {
            v -= d[i] * b_dims[n - i] as i128;
        }
        if v < 0 {
            return Err(Error::NegativeGeneratorDim { degree: n, value: v as i64 });
        }
        d[n] = v;
    }
    Ok(d.into_iter().map(|x| x as u64).collect())
}

/// `dim L_k` of a space of dimension `m`, refusing values beyond `u128`.
fn witt_checked(k: usize, m: u128) -> Result<u128> {
    if m == 0 {
        return Ok(0);
    }
    if (m as f64).powi(k as i32) > 1e36 || m > u64::MAX as u128 {
        return Err(Error::CapExceeded(format!("L_{k} of a space of dimension {m}")));
    }
    Ok(witt_dim(k as u64, m as u64))
}

/// A term of the decomposition: `L_{target/d(w)}(w(D))`.
#[derive(Clone, Debug, Serialize)]
pub struct Summand {
    /// The basic product with letters named by generator degree, e.g. `[[D6,D3],D3]`.
    pub product: String,
    /// `L_k(w(D))`, or `w(D)` when `k = 1`.
    pub term: String,
    pub weight: usize,
    pub d: usize,
    pub multiplicities: Vec<usize>,
    pub lie_degree: usize,
    /// `dim w(D)`.
    pub generator_dim: u128,
    pub dim: u128,
}

/// Letters (generator degrees with nonzero `d_n`) and the basic products
/// whose degree divides `target`, as terms `L_{target/d}(w(D))`.
fn summands_for(
    d_dims: &BTreeMap<usize, u128>,
    target: usize,
) -> Result<(Vec<usize>, Vec<BasicProduct>, Vec<Summand>)> {
    let letters: Vec<usize> = d_dims.iter().filter(|(&n, &d)| d > 0 && n <= target).map(|(&n, _)| n).collect();
    let products = basic_products(&letters, target)?;
    let mut out = Vec::new();
    for bp in &products {
        if !target.is_multiple_of(bp.d) {
            continue;
        }
        let generator_dim = bp
            .multiplicities
            .iter()
            .zip(&letters)
            .try_fold(1u128, |acc, (&c, n)| acc.checked_mul(d_dims[n].checked_pow(c as u32)?))
            .ok_or_else(|| Error::CapExceeded("generator dimension overflow".into()))?;
        let lie_degree = target / bp.d;
        let product = bp.render_with(&products, &|i| format!("D{}", letters[i - 1]));
        let term = if lie_degree == 1 { product.clone() } else { format!("L{lie_degree}({product})") };
        out.push(Summand {
            product,
            term,
            weight: bp.weight,
            d: bp.d,
            multiplicities: bp.multiplicities.clone(),
            lie_degree,
            generator_dim,
            dim: witt_checked(lie_degree, generator_dim)?,
        });
    }
    Ok((letters, products, out))
}

/// `d_n` for each generated degree `n <= cap`, from `dim L_n(V)` minus the
/// terms of the basic-product decomposition built from lower generators.
pub fn d_dims_witt(degrees: &[usize], m: u64, cap: usize) -> Result<BTreeMap<usize, u128>> {
    let mut d: BTreeMap<usize, u128> = BTreeMap::new();
    for &n in degrees.iter().filter(|&&n| n <= cap) {
        let (_, _, terms) = summands_for(&d, n)?;
        let lower: u128 = terms.iter().map(|t| t.dim).sum();
        let total = witt_checked(n, m as u128)?;
        if lower > total {
            return Err(Error::NegativeGeneratorDim { degree: n, value: total as i64 - lower as i64 });
        }
        d.insert(n, total - lower);
    }
    Ok(d)
}

/// Hilbert-series inversion of the evaluated sub Hopf algebra, or `None` when
/// the evaluation exceeds the ambient bound.
pub fn d_dims_hilbert(degrees: &[usize], cap: usize, m: usize, field: &FieldRef) -> Result<Option<Vec<u64>>> {
    if m == 0 || tensor_dim(cap, m).is_none_or(|d| d > MAX_AMBIENT) || (m == 2 && cap > 12) {
        return Ok(None);
    }
    let b = subhopf_evaluate(degrees, cap, m, field)?;
    let dims: Vec<u64> = (0..=cap).map(|q| b.dim(q) as u64).collect();
    hilbert_series_d_dims(&dims, cap).map(Some)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Dims,
    Explicit,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorDim {
    pub n: usize,
    pub witt: u128,
    pub hilbert: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExplicitCheck {
    /// Dimensions of the constructed summands, in the order of `summands`.
    pub dims: Vec<usize>,
    /// Dimension of the constructed generator spaces `D_n`.
    pub generator_dims: BTreeMap<usize, usize>,
    pub sum_dim: usize,
    pub independent: bool,
    pub equals_lie_power: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem61Report {
    pub p: u32,
    pub target: usize,
    pub vdim: usize,
    pub degrees: Vec<usize>,
    pub generators: Vec<GeneratorDim>,
    /// Degrees where the two generator-dimension computations disagree,
    /// or where a nonzero generator appears outside the generated degrees.
    pub flagged: Vec<usize>,
    pub summands: Vec<Summand>,
    pub lie_dim: u128,
    pub summand_total: u128,
    /// Enumerated counts per letter multiset equal the multiplicity formula.
    pub multiplicities_agree: bool,
    pub explicit: Option<ExplicitCheck>,
    pub holds: bool,
}

/// Largest target for explicit mode.
pub const MAX_EXPLICIT_TARGET: usize = 12;

/// Checks `L_target = ⊕_{d(w) | target} L_{target/d(w)}(w(D))` by dimensions,
/// and in explicit mode by constructing every summand inside `T_target(V)`.
pub fn verify_theorem61(ms: &MSet, p: u32, target: usize, vdim: usize, mode: Mode) -> Result<Theorem61Report> {
    ms.validate(p)?;
    let degrees = generated_degrees(ms, p, target);
    if !degrees.contains(&target) {
        return Err(Error::InvalidInput(format!("{target} is not a generated degree")));
    }
    if vdim == 0 {
        return Err(Error::InvalidInput("at least one generator is required".into()));
    }
    let field = make_field(p, 1)?;
    let witt = d_dims_witt(&degrees, vdim as u64, target)?;
    let hilbert = d_dims_hilbert(&degrees, target, vdim, &field)?;
    let mut flagged = Vec::new();
    let mut generators = Vec::new();
    for n in 1..=target {
        let w = witt.get(&n).copied();
        let h = hilbert.as_ref().map(|h| h[n]);
        if h.is_some_and(|h| h as u128 != w.unwrap_or(0)) {
            flagged.push(n);
        }
        if w.is_some() {
            generators.push(GeneratorDim { n, witt: w.unwrap_or(0), hilbert: h });
        }
    }
    let (letters, products, summands) = summands_for(&witt, target)?;
    let lie_dim = witt_checked(target, vdim as u128)?;
    let summand_total: u128 = summands.iter().map(|s| s.dim).sum();

    let mut counts: BTreeMap<&[usize], u128> = BTreeMap::new();
    for bp in &products {
        *counts.entry(&bp.multiplicities).or_default() += 1;
    }
    let multiplicities_agree = counts.iter().all(|(mult, &c)| multiplicity(mult) == c);

    let explicit = match mode {
        Mode::Dims => None,
        Mode::Explicit => Some(explicit_check(&field, &degrees, &letters, &products, &summands, target, vdim)?),
    };
    let holds = flagged.is_empty()
        && lie_dim == summand_total
        && multiplicities_agree
        && explicit.as_ref().is_none_or(|e| e.independent && e.equals_lie_power);
    Ok(Theorem61Report {
        p,
        target,
        vdim,
        degrees,
        generators,
        flagged,
        summands,
        lie_dim,
        summand_total,
        multiplicities_agree,
        explicit,
        holds,
    })
}

fn explicit_check(
    field: &FieldRef,
    degrees: &[usize],
    letters: &[usize],
    products: &[BasicProduct],
    summands: &[Summand],
    target: usize,
    vdim: usize,
) -> Result<ExplicitCheck> {
    if vdim != 2 || target > MAX_EXPLICIT_TARGET {
        return Err(Error::CapExceeded(format!(
            "explicit mode needs two generators and target <= {MAX_EXPLICIT_TARGET}"
        )));
    }
    let f = field.as_ref();
    let b = subhopf_evaluate(degrees, target, vdim, field)?;
    // D_n: a complement of the decomposables inside L_n(V)
    let gens: Vec<(usize, Vec<Vec<u32>>)> = letters
        .par_iter()
        .map(|&n| {
            let lie = lyndon_basis(n, vdim, field)?;
            let dec = decomposables(&b, n, f)?;
            Ok((n, lie.complement_of(f, &lie.intersect(f, &dec))))
        })
        .collect::<Result<_>>()?;
    let generator_dims = gens.iter().map(|(n, v)| (*n, v.len())).collect();

    fn spanning(
        products: &[BasicProduct],
        i: usize,
        gens: &[(usize, Vec<Vec<u32>>)],
        f: &crate::Field,
    ) -> Vec<Vec<u32>> {
        match products[i].shape {
            Shape::Letter(l) => gens[l - 1].1.clone(),
            Shape::Product(a, b) => {
                let (x, y) = (spanning(products, a, gens, f), spanning(products, b, gens, f));
                x.iter().flat_map(|u| y.iter().map(move |v| bracket_dense(f, u, v))).collect()
            }
        }
    }
    let chosen: Vec<usize> = (0..products.len()).filter(|&i| target.is_multiple_of(products[i].d)).collect();
    debug_assert_eq!(chosen.len(), summands.len());
    let parts: Vec<Subspace> = chosen
        .par_iter()
        .map(|&i| {
            let d = products[i].d;
            let w = Subspace::from_rows(f, vdim.pow(d as u32), &spanning(products, i, &gens, f));
            lie_power_of(field, vdim, d, &w, target / d)
        })
        .collect::<Result<_>>()?;
    let dims: Vec<usize> = parts.iter().map(Subspace::dim).collect();
    let ambient = vdim.pow(target as u32);
    let mut span = SpanBuilder::new(ambient);
    for part in &parts {
        for v in part.basis_vecs() {
            span.insert(f, &v);
        }
    }
    let sum_dim = span.dim();
    let independent = sum_dim == dims.iter().sum::<usize>();
    let lie = lyndon_basis(target, vdim, field)?;
    let equals_lie_power = span.into_subspace(f) == lie;
    Ok(ExplicitCheck { dims, generator_dims, sum_dim, independent, equals_lie_power })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_basic_products() {
        let one = basic_products(&[1], 5).unwrap();
        assert_eq!(one.len(), 1);
        let two = basic_products(&[1, 1], 2).unwrap();
        assert_eq!(two.len(), 3);
        assert_eq!(two[2].render(&two), "[x2,x1]");
        assert_eq!((two[0].rank, two[0].serial, two[1].serial), (0, 1, 2));
        assert_eq!(two[2].rank, 1);
    }

    #[test]
    fn counts_match_witt_and_multiplicity() {
        for k in 1..=3usize {
            let list = basic_products(&vec![1; k], 6).unwrap();
            for n in 1..=6 {
                let count = list.iter().filter(|b| b.weight == n).count() as u128;
                assert_eq!(count, witt_dim(n as u64, k as u64), "k={k} n={n}");
            }
            let mut counts: BTreeMap<Vec<usize>, u128> = BTreeMap::new();
            for b in &list {
                *counts.entry(b.multiplicities.clone()).or_default() += 1;
            }
            for (mult, c) in counts {
                assert_eq!(multiplicity(&mult), c, "{mult:?}");
            }
        }
    }

    #[test]
    fn multiplicity_values() {
        assert_eq!(multiplicity(&[1]), 1);
        assert_eq!(multiplicity(&[1, 1]), 1);
        assert_eq!(multiplicity(&[2]), 0);
        assert_eq!(multiplicity(&[2, 1]), 1);
        assert_eq!(multiplicity(&[2, 2]), 1);
        assert_eq!(multiplicity(&[3, 3]), 3);
    }

    #[test]
    fn hilbert_inversion() {
        assert_eq!(hilbert_series_d_dims(&[1, 2, 4, 8], 3).unwrap(), vec![0, 2, 0, 0]);
        assert_eq!(hilbert_series_d_dims(&[1, 0, 0, 2, 0, 0, 4], 6).unwrap()[3..], [2, 0, 0, 0]);
        assert!(matches!(hilbert_series_d_dims(&[1, 2, 3], 2), Err(Error::NegativeGeneratorDim { degree: 2, .. })));
    }

    #[test]
    fn dimension_mode() {
        let ms = MSet::Finite(vec![(3, Some(3))]);
        let r = verify_theorem61(&ms, 2, 12, 2, Mode::Dims).unwrap();
        assert!(r.holds, "{r:#?}");
        let mut dims: Vec<u128> = r.summands.iter().map(|s| s.dim).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![3, 28, 32, 272]);
        assert_eq!(r.lie_dim, 335);
        let r = verify_theorem61(&MSet::AllCoprime, 2, 6, 2, Mode::Dims).unwrap();
        assert!(r.holds);
        let mut dims: Vec<u128> = r.summands.iter().map(|s| s.dim).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 8]);
        let r = verify_theorem61(&MSet::Finite(vec![(3, None)]), 2, 3, 2, Mode::Dims).unwrap();
        assert_eq!(r.summands.len(), 1);
    }

    #[test]
    fn explicit_mode_small() {
        let r = verify_theorem61(&MSet::AllCoprime, 2, 6, 2, Mode::Explicit).unwrap();
        let e = r.explicit.as_ref().unwrap();
        assert!(r.holds && e.independent && e.equals_lie_power, "{r:#?}");
        let r = verify_theorem61(&MSet::Finite(vec![(2, None)]), 3, 6, 2, Mode::Explicit).unwrap();
        assert!(r.holds, "{r:#?}");
    }
}
