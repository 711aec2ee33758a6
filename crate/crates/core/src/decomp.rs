//! Block decomposition of the tensor algebra via eventual-image idempotents,
//! and splitness certificates for sub Hopf algebras generated by Lie powers.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{compositum_degree, make_field, FieldRef, MAX_DEGREE};
use crate::functors::{multilinear_subhopf, q_n_indecomposables, subhopf_evaluate, MAX_AMBIENT};
use crate::hilton::{d_dims_hilbert, d_dims_witt};
use crate::liealg::lie_module;
use crate::linalg::{Matrix, Subspace};
use crate::natural::{eventual_idempotent, GroupAlgebraElement, NaturalTransform, MAX_GROUP_DEGREE};
use crate::sgmod::{is_projective, ProjectivityCertificate, SigmaModule, MAX_MODULE_DIM};
use crate::tensoralg::primitives;

/// A set of integers `m_i` with p-power bounds `f_i` (`None` for unbounded).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MSet {
    Finite(Vec<(usize, Option<u32>)>),
    /// Every integer `m > 1` prime to p, unbounded.
    AllCoprime,
}

impl MSet {
    /// Checks that every `m_i` exceeds 1 and is prime to `p`.
    pub fn validate(&self, p: u32) -> Result<()> {
        if let MSet::Finite(items) = self {
            for &(m, _) in items {
                if m <= 1 || m.gcd(&(p as usize)) != 1 {
                    return Err(Error::HypothesisViolated(format!("{m} is not an integer > 1 prime to {p}")));
                }
            }
        }
        Ok(())
    }
}

/// `{ m_i p^r : 0 <= r < f_i } ∩ [1, cap]`, sorted.
pub fn generated_degrees(ms: &MSet, p: u32, cap: usize) -> Vec<usize> {
    let p = p as usize;
    let mut out = Vec::new();
    match ms {
        MSet::Finite(items) => {
            for &(m, f) in items {
                if m == 0 {
                    continue;
                }
                let mut d = m;
                let mut r = 0u32;
                while d <= cap && f.is_none_or(|f| r < f) {
                    out.push(d);
                    d *= p;
                    r += 1;
                }
            }
        }
        MSet::AllCoprime => out.extend((2..=cap).filter(|&n| coprime_part(n, p) > 1)),
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `n` with every factor of `p` removed.
pub fn coprime_part(mut n: usize, p: usize) -> usize {
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
    }
    n
}

/// Whether a list of generator degrees has the form `{m_i p^r : r < f_i}`
/// with each `m_i > 1` prime to `p`; on failure names the offending degree.
pub fn degree_set_hypothesis(gens: &[usize], p: u32) -> std::result::Result<(), String> {
    let p = p as usize;
    for &g in gens {
        if coprime_part(g, p) <= 1 {
            return Err(format!("{g} is a power of {p}"));
        }
        if g % p == 0 && !gens.contains(&(g / p)) {
            return Err(format!("{g} is present but {} is not", g / p));
        }
    }
    Ok(())
}

/// Componentwise eventual idempotent with per-degree Fitting indices.
pub fn evid(f: &NaturalTransform) -> Result<(NaturalTransform, Vec<usize>)> {
    let parts: Vec<(GroupAlgebraElement, usize)> = f.components().par_iter().map(eventual_idempotent).collect();
    let (components, indices): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
    let mut e = NaturalTransform::from_components(f.field(), components)?;
    if f.is_coalgebra_map() {
        e = e.verified_coalgebra_map()?;
    }
    Ok((e, indices))
}

fn ensure_coalgebra(f: &NaturalTransform) -> Result<NaturalTransform> {
    if f.is_coalgebra_map() {
        Ok(f.clone())
    } else {
        f.clone().verified_coalgebra_map()
    }
}

#[derive(Clone, Debug)]
pub struct ChainDegree {
    pub n: usize,
    pub idempotent: GroupAlgebraElement,
    pub fitting_index: usize,
    /// `e k(S_n)`, the degree-n piece of the colimit inside `k(S_n)`.
    pub image: Subspace,
}

/// Eventual images of the iterates of a coalgebra transformation, degree by degree.
pub fn eventual_image_chain(f: &NaturalTransform, n_cap: usize) -> Result<Vec<ChainDegree>> {
    if n_cap > f.cap() {
        return Err(Error::DegreeOutOfCap { degree: n_cap, cap: f.cap() });
    }
    let f = ensure_coalgebra(f)?;
    let field = f.field().clone();
    (0..=n_cap)
        .into_par_iter()
        .map(|n| {
            let (e, k) = eventual_idempotent(f.component(n)?);
            let mut m = e.left_regular_matrix().transpose();
            let image = Subspace::from_matrix(&field, &mut m);
            Ok(ChainDegree { n, idempotent: e, fitting_index: k, image })
        })
        .collect()
}

/// Dimension of `{x in W : e x = x}` for an idempotent operator and a subspace.
fn fixed_dim(field: &FieldRef, op: impl Fn(&[u32]) -> Vec<u32>, w: &Subspace) -> usize {
    let f = field.as_ref();
    let rows: Vec<Vec<u32>> = w
        .basis_vecs()
        .iter()
        .map(|v| {
            let mut ev = op(v);
            f.axpy(&mut ev, f.neg_raw(1), v);
            ev
        })
        .collect();
    w.dim() - Matrix::from_rows(w.ambient(), &rows).rank(f)
}

#[derive(Clone, Debug, Serialize)]
pub struct StageRecord {
    /// Block being isolated.
    pub block: usize,
    /// Stage modulus; `None` for the retraction onto the remaining factor.
    pub stage: Option<usize>,
    pub fitting_indices: Vec<usize>,
    /// `dim e_n k(S_n)` per degree.
    pub image_dims: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockClaim {
    pub block: usize,
    /// `r` with `n = block * p^r`, when one exists.
    pub r: Option<u32>,
    /// `dim(Lie(n) ∩ Im e)`.
    pub lie_dim: usize,
    /// `dim(P_n T(V) ∩ Im e)` on two generators.
    pub primitive_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeVerdict {
    pub n: usize,
    pub lie_dim: usize,
    pub primitive_dim: usize,
    pub expected_block: usize,
    pub claims: Vec<BlockClaim>,
    /// Dimensions left in the final remaining factor.
    pub remainder_lie_dim: usize,
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub p: u32,
    pub field_degree: u32,
    pub cap: usize,
    pub blocks: Vec<usize>,
    pub stages: Vec<StageRecord>,
    pub idempotents_exact: bool,
    pub coalgebra_verified: bool,
    pub degrees: Vec<DegreeVerdict>,
    pub consistent: bool,
    #[serde(skip)]
    pub block_idempotents: Vec<NaturalTransform>,
    #[serde(skip)]
    pub stage_idempotents: Vec<NaturalTransform>,
}

/// Largest field degree used for the block computation.
pub const MAX_BLOCK_FIELD_DEGREE: u32 = MAX_DEGREE;

pub fn block_field(p: u32, cap: usize) -> Result<(FieldRef, Vec<usize>)> {
    let blocks: Vec<usize> = std::iter::once(1).chain((2..=cap).filter(|&m| (m as u32).gcd(&p) == 1)).collect();
    let moduli: Vec<u32> = blocks[1..].iter().map(|&m| m as u32).collect();
    let e = compositum_degree(p, &moduli);
    if e > MAX_BLOCK_FIELD_DEGREE {
        return Err(Error::CapExceeded(format!(
            "roots of unity up to order {cap} need GF({p}^{e}), beyond degree {MAX_BLOCK_FIELD_DEGREE}"
        )));
    }
    let field = make_field(p, e).map_err(|err| match err {
        Error::FieldTooLarge { p, e } => Error::CapExceeded(format!("GF({p}^{e}) is too large")),
        other => other,
    })?;
    Ok((field, blocks))
}

/// Isolates, for each `m` prime to `p` with `m <= cap`, a coalgebra idempotent
/// whose image holds exactly the primitives of degrees `m p^r`.
pub fn block_decomposition(p: u32, cap: usize) -> Result<BlockReport> {
    if cap == 0 || cap > MAX_GROUP_DEGREE {
        return Err(Error::CapExceeded(format!("degree cap {cap} outside 1..={MAX_GROUP_DEGREE}")));
    }
    let (field, blocks) = block_field(p, cap)?;
    let f = field.as_ref();
    let antipode = NaturalTransform::antipode(&field, cap)?;
    let thetas: Vec<NaturalTransform> = blocks[1..]
        .iter()
        .map(|&m| NaturalTransform::theta(&field, f.primitive_root(m as u32)?, cap))
        .collect::<Result<_>>()?;

    let mut stages = Vec::new();
    let mut stage_idempotents = Vec::new();
    let mut block_idempotents = Vec::new();
    let mut exact = true;
    let mut record = |block: usize, stage: Option<usize>, e: &NaturalTransform, a: &NaturalTransform, k: Vec<usize>| {
        let mut image_dims = Vec::with_capacity(e.cap() + 1);
        for (en, an) in e.components().iter().zip(a.components()) {
            exact &= en.is_idempotent() && en.mul(an).ok() == an.mul(en).ok();
            image_dims.push(en.left_regular_matrix().rank(f));
        }
        stages.push(StageRecord { block, stage, fitting_indices: k, image_dims });
        stage_idempotents.push(e.clone());
    };

    let mut rho = NaturalTransform::identity(&field, cap)?;
    for &mk in &blocks {
        let mut e = rho.clone();
        for (j, &m) in blocks.iter().enumerate().skip(1) {
            if m <= mk {
                continue;
            }
            let sandwich = e.compose(&thetas[j - 1])?.compose(&e)?;
            let (next, idx) = evid(&sandwich)?;
            record(mk, Some(m), &next, &sandwich, idx);
            e = next;
        }
        let complement = ensure_coalgebra(&antipode.compose(&e)?.conv(&rho)?)?;
        let (next_rho, idx) = evid(&complement)?;
        record(mk, None, &next_rho, &complement, idx);
        block_idempotents.push(e);
        rho = next_rho;
    }

    let degrees = (1..=cap)
        .into_par_iter()
        .map(|n| -> Result<DegreeVerdict> {
            let (_, lie) = lie_module(n, &field)?;
            let prim = primitives(n, 2, &field)?;
            let claim_dims = |e: &NaturalTransform| -> Result<(usize, usize)> {
                let en = e.component(n)?;
                let lie_dim = fixed_dim(
                    &field,
                    |v| {
                        let x = GroupAlgebraElement::from_coords(&field, n, v.to_vec()).expect("degree checked");
                        en.mul(&x).expect("same degree").into_coords()
                    },
                    &lie,
                );
                let op = e.as_operator(n, 2)?;
                let primitive_dim = fixed_dim(&field, |v| op.mul_vec(f, v), &prim);
                Ok((lie_dim, primitive_dim))
            };
            let mut claims = Vec::with_capacity(blocks.len());
            for (&m, e) in blocks.iter().zip(&block_idempotents) {
                let (lie_dim, primitive_dim) = claim_dims(e)?;
                let r = p_power_exponent(n, m, p as usize);
                claims.push(BlockClaim { block: m, r, lie_dim, primitive_dim });
            }
            let (remainder_lie_dim, remainder_prim) = claim_dims(&rho)?;
            let expected_block = coprime_part(n, p as usize);
            let consistent = remainder_lie_dim == 0
                && remainder_prim == 0
                && claims.iter().all(|c| {
                    if c.block == expected_block {
                        c.lie_dim == lie.dim() && c.primitive_dim == prim.dim()
                    } else {
                        c.lie_dim == 0 && c.primitive_dim == 0
                    }
                });
            Ok(DegreeVerdict {
                n,
                lie_dim: lie.dim(),
                primitive_dim: prim.dim(),
                expected_block,
                claims,
                remainder_lie_dim,
                consistent,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let consistent = exact && degrees.iter().all(|d| d.consistent);
    Ok(BlockReport {
        p,
        field_degree: field.e(),
        cap,
        blocks,
        stages,
        idempotents_exact: exact,
        coalgebra_verified: true,
        degrees,
        consistent,
        block_idempotents,
        stage_idempotents,
    })
}

fn p_power_exponent(n: usize, m: usize, p: usize) -> Option<u32> {
    if !n.is_multiple_of(m) {
        return None;
    }
    let mut q = n / m;
    let mut r = 0;
    while q.is_multiple_of(p) {
        q /= p;
        r += 1;
    }
    (q == 1).then_some(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitDegree {
    pub q: usize,
    /// `dim gamma_q(Q_q B)`.
    pub gamma_dim: usize,
    /// `dim Q_q B(V)` on `m` generators, when the evaluation fits.
    pub q_dim: Option<usize>,
    pub projective: bool,
    pub certificate: Option<ProjectivityCertificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitnessReport {
    pub p: u32,
    pub generators: Vec<usize>,
    pub cap: usize,
    pub m: usize,
    pub hypothesis_ok: bool,
    pub hypothesis_note: Option<String>,
    pub degrees: Vec<SplitDegree>,
    pub verdict: bool,
}

/// Largest dimension of `gamma_q(B_q)` the splitness check will build.
pub const MAX_GAMMA_AMBIENT: usize = 2000;

/// Projectivity of `gamma_q(Q_q B)` for every `q <= cap`, where `B` is generated
/// by the Lie powers of the given degrees.
pub fn splitness_check(gens: &[usize], cap: usize, m: usize, field: &FieldRef) -> Result<SplitnessReport> {
    if cap > MAX_GROUP_DEGREE {
        return Err(Error::CapExceeded(format!("projectivity certificates need cap <= {MAX_GROUP_DEGREE}")));
    }
    let mut gens: Vec<usize> = gens.to_vec();
    gens.sort_unstable();
    gens.dedup();
    if gens.contains(&0) {
        return Err(Error::InvalidInput("generator degrees must be positive".into()));
    }
    let p = field.p();
    let hypothesis = degree_set_hypothesis(&gens, p);
    let q_dims: Option<Vec<usize>> = if m >= 1 && crate::tensoralg::tensor_dim(cap, m).is_some_and(|d| d <= MAX_AMBIENT)
    {
        let b = subhopf_evaluate(&gens, cap, m, field)?;
        Some((0..=cap).map(|q| q_n_indecomposables(&b, q, field).map(|i| i.dim)).collect::<Result<_>>()?)
    } else {
        None
    };
    let degrees = (1..=cap)
        .into_par_iter()
        .map(|q| -> Result<SplitDegree> {
            let (full, dec) = multilinear_subhopf(&gens, q, field)?;
            let gamma_dim = full.dim() - dec.dim();
            let q_dim = q_dims.as_ref().map(|d| d[q]);
            if gamma_dim == 0 {
                return Ok(SplitDegree { q, gamma_dim, q_dim, projective: true, certificate: None });
            }
            if gamma_dim > MAX_MODULE_DIM {
                return Err(Error::DimensionTooLarge { dim: gamma_dim, n: q });
            }
            if full.dim() > MAX_GAMMA_AMBIENT {
                return Err(Error::CapExceeded(format!("gamma_{q} of the algebra has dimension {}", full.dim())));
            }
            let module = SigmaModule::from_right_ideal(field, q, full.basis_vecs())?;
            let coords: Vec<Vec<u32>> = dec
                .basis_vecs()
                .iter()
                .map(|v| full.coordinates(field, v).expect("decomposables lie in the algebra"))
                .collect();
            let quotient = module.quotient(&coords)?;
            let (projective, certificate) = is_projective(&quotient)?;
            Ok(SplitDegree { q, gamma_dim, q_dim, projective, certificate: Some(certificate) })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = degrees.iter().all(|d| d.projective);
    Ok(SplitnessReport {
        p,
        generators: gens,
        cap,
        m,
        hypothesis_ok: hypothesis.is_ok(),
        hypothesis_note: hypothesis.err(),
        degrees,
        verdict,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DDim {
    pub q: usize,
    /// From the Lie-power recursion.
    pub witt: u128,
    /// From inverting the Hilbert series of the evaluated algebra, when feasible.
    pub hilbert: Option<u64>,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem11Report {
    pub p: u32,
    pub mset: MSet,
    pub cap: usize,
    pub m: usize,
    pub degrees: Vec<usize>,
    /// Absent when no degrees are generated.
    pub splitness: Option<SplitnessReport>,
    pub d_dims: Vec<DDim>,
    pub verdict: bool,
}

/// Splitness of the sub Hopf algebra generated by `L_{m_i p^r}`, `r < f_i`,
/// with projectivity certificates through `min(cap, 7)` and generator dimensions through `cap`.
pub fn theorem_1_1_report(ms: &MSet, cap: usize, m: usize, field: &FieldRef) -> Result<Theorem11Report> {
    let p = field.p();
    ms.validate(p)?;
    let degrees = generated_degrees(ms, p, cap);
    if degrees.is_empty() {
        return Ok(Theorem11Report {
            p,
            mset: ms.clone(),
            cap,
            m,
            degrees,
            splitness: None,
            d_dims: Vec::new(),
            verdict: true,
        });
    }
    let gamma_cap = cap.min(MAX_GROUP_DEGREE);
    let gamma_gens: Vec<usize> = degrees.iter().copied().filter(|&d| d <= gamma_cap).collect();
    let splitness = splitness_check(&gamma_gens, gamma_cap, m, field)?;
    let witt = d_dims_witt(&degrees, m as u64, cap)?;
    let hilbert = d_dims_hilbert(&degrees, cap, m, field)?;
    let d_dims: Vec<DDim> = (1..=cap)
        .map(|q| {
            let w = witt.get(&q).copied().unwrap_or(0);
            let h = hilbert.as_ref().map(|h| h[q]);
            DDim { q, witt: w, hilbert: h, agree: h.is_none_or(|h| h as u128 == w) }
        })
        .filter(|d| d.witt != 0 || d.hilbert.is_some_and(|h| h != 0))
        .collect();
    let verdict = splitness.verdict && d_dims.iter().all(|d| d.agree);
    Ok(Theorem11Report { p, mset: ms.clone(), cap, m, degrees, splitness: Some(splitness), d_dims, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_sets() {
        let ms = MSet::Finite(vec![(3, Some(3))]);
        assert_eq!(generated_degrees(&ms, 2, 12), vec![3, 6, 12]);
        assert_eq!(generated_degrees(&ms, 2, 7), vec![3, 6]);
        assert_eq!(generated_degrees(&MSet::AllCoprime, 2, 12), vec![3, 5, 6, 7, 9, 10, 11, 12]);
        assert_eq!(generated_degrees(&MSet::AllCoprime, 3, 6), vec![2, 4, 5, 6]);
        assert!(generated_degrees(&MSet::Finite(vec![]), 2, 10).is_empty());
        assert!(MSet::Finite(vec![(6, None)]).validate(3).is_err());
        assert!(MSet::Finite(vec![(1, None)]).validate(3).is_err());
        assert!(degree_set_hypothesis(&[3, 6], 2).is_ok());
        assert!(degree_set_hypothesis(&[2], 2).is_err());
        assert!(degree_set_hypothesis(&[6], 2).is_err());
    }

    fn iterate_rank(a: &GroupAlgebraElement) -> usize {
        // image of the left-regular operator, iterated until the rank stops dropping
        let f = a.field().clone();
        let m = a.left_regular_matrix();
        let mut power = m.clone();
        let mut rank = power.rank(&f);
        loop {
            let next = power.mul(&f, &m);
            let r = next.rank(&f);
            if r == rank {
                return r;
            }
            rank = r;
            power = next;
        }
    }

    #[test]
    fn chain_images_match_iteration() {
        let field = make_field(2, 2).unwrap();
        let omega = field.primitive_root(3).unwrap();
        let theta = NaturalTransform::theta(&field, omega, 4).unwrap();
        let chain = eventual_image_chain(&theta, 4).unwrap();
        for c in &chain {
            assert!(c.idempotent.is_idempotent());
            assert_eq!(c.image.dim(), iterate_rank(theta.component(c.n).unwrap()), "degree {}", c.n);
        }
        let id = NaturalTransform::identity(&field, 3).unwrap();
        for c in eventual_image_chain(&id, 3).unwrap() {
            assert_eq!(c.image.dim(), crate::natural::factorial(c.n));
        }
        // zeta = 1 kills every primitive
        let one = NaturalTransform::theta(&field, crate::field::Scalar::ONE, 4).unwrap();
        for c in eventual_image_chain(&one, 4).unwrap().iter().skip(1) {
            let (_, lie) = lie_module(c.n, &field).unwrap();
            assert!(c.image.intersect(&field, &lie).is_zero());
        }
    }

    #[test]
    fn non_coalgebra_maps_are_rejected() {
        let field = make_field(3, 1).unwrap();
        let chi = NaturalTransform::antipode(&field, 3).unwrap();
        let id = NaturalTransform::identity(&field, 3).unwrap();
        let sum = NaturalTransform::from_components(
            &field,
            chi.components().iter().zip(id.components()).map(|(a, b)| a.add(b).unwrap()).collect(),
        )
        .unwrap();
        assert!(matches!(eventual_image_chain(&sum, 3), Err(Error::NotCoalgebraMap(_))));
    }

    #[test]
    fn small_block_reports() {
        for (p, cap) in [(2u32, 4usize), (3, 4), (5, 4)] {
            let report = block_decomposition(p, cap).unwrap();
            assert!(report.idempotents_exact, "p={p}");
            assert!(report.consistent, "p={p}: {:#?}", report.degrees);
        }
        let r = block_decomposition(2, 4).unwrap();
        assert_eq!(r.blocks, vec![1, 3]);
        let d3 = &r.degrees[2];
        assert_eq!((d3.expected_block, d3.claims[1].lie_dim, d3.claims[0].lie_dim), (3, 2, 0));
        assert_eq!(r.degrees[3].claims[0].r, Some(2));
    }

    #[test]
    fn block_field_limits() {
        assert_eq!(block_field(2, 6).unwrap().0.e(), 4);
        assert_eq!(block_field(3, 6).unwrap().0.e(), 4);
        assert!(matches!(block_field(2, 7), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn splitness_examples() {
        let f2 = make_field(2, 1).unwrap();
        let r = splitness_check(&[3], 3, 3, &f2).unwrap();
        assert!(r.verdict && r.hypothesis_ok);
        assert_eq!(r.degrees[2].gamma_dim, 2);
        let r = splitness_check(&[2], 2, 2, &f2).unwrap();
        assert!(!r.verdict && !r.hypothesis_ok);
        assert_eq!(r.degrees[1].gamma_dim, 1);
        let r = splitness_check(&[], 4, 2, &f2).unwrap();
        assert!(r.verdict);
        let f3 = make_field(3, 1).unwrap();
        let r = splitness_check(&[2], 4, 2, &f3).unwrap();
        assert!(r.verdict);
        assert_eq!(r.degrees[3].q_dim, Some(0));
    }

    #[test]
    fn theorem_report_rejects_bad_sets() {
        let f = make_field(2, 1).unwrap();
        assert!(matches!(
            theorem_1_1_report(&MSet::Finite(vec![(6, None)]), 6, 2, &f),
            Err(Error::HypothesisViolated(_))
        ));
        let empty = theorem_1_1_report(&MSet::Finite(vec![]), 6, 2, &f).unwrap();
        assert!(empty.verdict && empty.degrees.is_empty());
    }
}
